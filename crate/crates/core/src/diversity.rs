//! Total Hamming distance of a population, kept in its per-position
//! one-count form `D(P) = sum_i n_i (mu - n_i)`.
//!
//! All values are exact integers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

pub fn hamming(x: &VertexSet, y: &VertexSet) -> Result<u64> {
    if x.width() != y.width() {
        return Err(Error::arg(format!(
            "widths differ: {} vs {}",
            x.width(),
            y.width()
        )));
    }
    Ok(x.symmetric_difference_len(y) as u64)
}

/// A multiset of equal-width vertex sets with a coherent one-count ledger.
///
/// Member order carries no meaning beyond bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Population {
    members: Vec<VertexSet>,
    counts: Vec<u32>,
    width: usize,
}

impl Population {
    pub fn new(members: Vec<VertexSet>) -> Result<Self> {
        let width = members
            .first()
            .map(VertexSet::width)
            .ok_or_else(|| Error::arg("population must have at least one member"))?;
        if let Some(bad) = members.iter().find(|m| m.width() != width) {
            return Err(Error::arg(format!(
                "member {bad} has width {} but the population has width {width}",
                bad.width()
            )));
        }
        let counts = count_ones(&members, width);
        Ok(Population {
            members,
            counts,
            width,
        })
    }

    /// `mu` copies of `x`.
    pub fn copies(x: &VertexSet, mu: usize) -> Result<Self> {
        Population::new(vec![x.clone(); mu])
    }

    pub fn mu(&self) -> usize {
        self.members.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn members(&self) -> &[VertexSet] {
        &self.members
    }

    pub fn member(&self, j: usize) -> &VertexSet {
        &self.members[j]
    }

    /// `counts()[i]` is the number of members containing vertex `i`.
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn into_members(self) -> Vec<VertexSet> {
        self.members
    }

    pub fn total_hamming(&self) -> u64 {
        let mu = self.mu() as u64;
        self.counts
            .iter()
            .map(|&c| c as u64 * (mu - c as u64))
            .sum()
    }

    /// Change in [`total_hamming`](Self::total_hamming) if member `j` were
    /// replaced by `c`, computed from the ledger in O(n).
    pub fn replace_delta(&self, j: usize, c: &VertexSet) -> Result<i64> {
        self.check_index(j)?;
        self.check_width(c)?;
        Ok(self.replace_delta_unchecked(j, c))
    }

    pub(crate) fn replace_delta_unchecked(&self, j: usize, c: &VertexSet) -> i64 {
        let mu = self.mu() as i64;
        let old = &self.members[j];
        let mut delta = 0i64;
        for (wi, (&a, &b)) in old.words().iter().zip(c.words()).enumerate() {
            let mut changed = a ^ b;
            while changed != 0 {
                let bit = changed.trailing_zeros() as usize;
                changed &= changed - 1;
                let i = wi * 64 + bit;
                let count = self.counts[i] as i64;
                delta += if b >> bit & 1 == 1 {
                    mu - 2 * count - 1
                } else {
                    2 * count - mu - 1
                };
            }
        }
        delta
    }

    /// Replaces member `j` by `c`, updating the ledger incrementally.
    pub fn replace(&mut self, j: usize, c: VertexSet) -> Result<VertexSet> {
        self.check_index(j)?;
        self.check_width(&c)?;
        for v in self.members[j].iter() {
            self.counts[v] -= 1;
        }
        for v in c.iter() {
            self.counts[v] += 1;
        }
        Ok(std::mem::replace(&mut self.members[j], c))
    }

    pub(crate) fn push(&mut self, c: VertexSet) {
        debug_assert_eq!(c.width(), self.width);
        for v in c.iter() {
            self.counts[v] += 1;
        }
        self.members.push(c);
    }

    /// Removes member `j`; the last member takes its slot.
    pub(crate) fn swap_remove(&mut self, j: usize) -> VertexSet {
        let removed = self.members.swap_remove(j);
        for v in removed.iter() {
            self.counts[v] -= 1;
        }
        removed
    }

    /// `D(P) - D(P \ {member j})`: the sum of distances from member `j` to
    /// all other members.
    pub fn contribution(&self, j: usize) -> u64 {
        let mu = self.mu() as u64;
        (0..self.width)
            .map(|i| {
                let c = self.counts[i] as u64;
                if self.members[j].contains(i) {
                    mu - c
                } else {
                    c
                }
            })
            .sum()
    }

    /// Rebuilds the ledger from the members and compares it with the cache.
    pub fn ledger_is_coherent(&self) -> bool {
        self.counts == count_ones(&self.members, self.width)
    }

    /// Members in canonical order, for multiset comparison.
    pub fn sorted_members(&self) -> Vec<VertexSet> {
        let mut m = self.members.clone();
        m.sort();
        m
    }

    pub fn same_multiset(&self, other: &Population) -> bool {
        self.sorted_members() == other.sorted_members()
    }

    /// Largest possible total Hamming distance for this width and size.
    pub fn diversity_upper_bound(width: usize, mu: usize) -> u64 {
        (width as u64) * (mu.div_ceil(2) as u64) * ((mu / 2) as u64)
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j >= self.mu() {
            return Err(Error::arg(format!(
                "member index {j} out of range for population of size {}",
                self.mu()
            )));
        }
        Ok(())
    }

    fn check_width(&self, c: &VertexSet) -> Result<()> {
        if c.width() != self.width {
            return Err(Error::arg(format!(
                "vertex set width {} does not match population width {}",
                c.width(),
                self.width
            )));
        }
        Ok(())
    }
}

fn count_ones(members: &[VertexSet], width: usize) -> Vec<u32> {
    let mut counts = vec![0u32; width];
    for m in members {
        for v in m.iter() {
            counts[v] += 1;
        }
    }
    counts
}

/// JSON view of a population: sorted label lists plus its diversity.
#[derive(Clone, Debug, Serialize)]
pub struct PopulationSummary {
    pub members: Vec<Vec<usize>>,
    pub diversity: u64,
}

impl From<&Population> for PopulationSummary {
    fn from(p: &Population) -> Self {
        PopulationSummary {
            members: p.members.iter().map(VertexSet::labels).collect(),
            diversity: p.total_hamming(),
        }
    }
}
