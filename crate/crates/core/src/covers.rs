//! Cover predicates, the exhaustive cover oracle, and start-cover search.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::mutation;
use crate::vertex_set::VertexSet;

/// Default cap on the number of candidate sets [`enumerate_covers`] may scan.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 10_000_000;

/// Default iteration cap for the descent phase of [`initial_cover`].
pub const DEFAULT_INIT_BUDGET: u64 = 100_000;

fn check_width(g: &Graph, s: &VertexSet) -> Result<()> {
    if s.width() != g.n() {
        return Err(Error::arg(format!(
            "vertex set has width {} but the graph has {} vertices",
            s.width(),
            g.n()
        )));
    }
    Ok(())
}

/// Number of edges with neither endpoint in `s`. Widths must match.
pub fn uncovered_edges(g: &Graph, s: &VertexSet) -> usize {
    g.edges()
        .iter()
        .filter(|&&(u, v)| !s.contains(u) && !s.contains(v))
        .count()
}

pub(crate) fn is_cover_unchecked(g: &Graph, s: &VertexSet) -> bool {
    g.edges()
        .iter()
        .all(|&(u, v)| s.contains(u) || s.contains(v))
}

pub fn is_cover(g: &Graph, s: &VertexSet) -> Result<bool> {
    check_width(g, s)?;
    Ok(is_cover_unchecked(g, s))
}

/// A cover of size at most `k`.
pub fn is_feasible(g: &Graph, k: usize, s: &VertexSet) -> Result<bool> {
    Ok(s.len() <= k && is_cover(g, s)?)
}

/// True iff no single vertex can be dropped from the cover `s`.
///
/// A vertex is removable exactly when all of its neighbors are in `s`, so an
/// isolated member always makes `s` excessive.
pub fn is_non_excessive(g: &Graph, s: &VertexSet) -> Result<bool> {
    if !is_cover(g, s)? {
        return Err(Error::arg(format!("{s} is not a cover")));
    }
    Ok(s.iter()
        .all(|v| g.neighbors(v).iter().any(|&u| !s.contains(u))))
}

pub(crate) fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Every cover of size at most `k`, in canonical (bitstring) order.
pub fn enumerate_covers(g: &Graph, k: usize) -> Result<Vec<VertexSet>> {
    enumerate_covers_with_budget(g, k, DEFAULT_ENUMERATION_BUDGET)
}

pub fn enumerate_covers_with_budget(g: &Graph, k: usize, budget: u128) -> Result<Vec<VertexSet>> {
    let n = g.n();
    let max_size = k.min(n);
    let required = (0..=max_size).fold(0u128, |acc, s| acc.saturating_add(binomial(n, s)));
    if required > budget {
        return Err(Error::OracleBudget {
            what: "cover enumeration",
            required,
            budget,
        });
    }

    let mut covers = Vec::new();
    for size in 0..=max_size {
        for_each_combination(n, size, |combo| {
            let s = VertexSet::from_indices(n, combo.iter().copied()).expect("indices < n");
            if is_cover_unchecked(g, &s) {
                covers.push(s);
            }
        });
    }
    covers.sort();
    Ok(covers)
}

/// Calls `f` on each size-`r` subset of `0..n` in lexicographic index order.
pub(crate) fn for_each_combination(n: usize, r: usize, mut f: impl FnMut(&[usize])) {
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        f(&idx);
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + n - r) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Both endpoints of a greedily built maximal matching (edges in canonical
/// order). Always a cover, at most twice the minimum.
pub fn matching_cover(g: &Graph) -> VertexSet {
    let mut s = VertexSet::empty(g.n());
    for &(u, v) in g.edges() {
        if !s.contains(u) && !s.contains(v) {
            s.insert(u);
            s.insert(v);
        }
    }
    s
}

/// Finds some cover of size at most `k`, or `None` if the search gives up.
///
/// Tries the matching cover first. If that is too large, runs a descent that
/// applies jump-and-repair and keeps the offspring whenever its size does not
/// increase, for at most `budget` iterations. The result is not padded.
pub fn initial_cover<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    rng: &mut R,
    budget: u64,
) -> Option<VertexSet> {
    let mut current = matching_cover(g);
    if current.len() <= k {
        return Some(current);
    }
    for _ in 0..budget {
        let candidate = mutation::mutate(g, k, &current, rng).offspring;
        if candidate.len() <= current.len() {
            current = candidate;
            if current.len() <= k {
                return Some(current);
            }
        }
    }
    None
}
