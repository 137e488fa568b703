use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A fixed-width set of vertices backed by a bit vector, with a cached size.
///
/// Ordering is the lexicographic order of the bitstring written with vertex 1
/// as the most significant (leftmost) character.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
    width: usize,
    len: usize,
}

impl VertexSet {
    pub fn empty(width: usize) -> Self {
        VertexSet {
            words: vec![0; width.div_ceil(WORD)],
            width,
            len: 0,
        }
    }

    pub fn full(width: usize) -> Self {
        let mut s = VertexSet::empty(width);
        for v in 0..width {
            s.insert(v);
        }
        s
    }

    /// From 0-based vertex indices.
    pub fn from_indices(width: usize, vertices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = VertexSet::empty(width);
        for v in vertices {
            if v >= width {
                return Err(Error::arg(format!("vertex {} outside 1..={width}", v + 1)));
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// From 1-based vertex labels.
    pub fn from_labels(width: usize, labels: &[usize]) -> Result<Self> {
        if labels.contains(&0) {
            return Err(Error::arg("vertex labels start at 1"));
        }
        VertexSet::from_indices(width, labels.iter().map(|&v| v - 1))
    }

    /// Parses a bitstring such as `11010000` (first character is vertex 1).
    pub fn from_bitstring(bits: &str) -> Result<Self> {
        let mut s = VertexSet::empty(bits.len());
        for (i, ch) in bits.chars().enumerate() {
            match ch {
                '1' => {
                    s.insert(i);
                }
                '0' => {}
                other => return Err(Error::arg(format!("invalid bit `{other}`"))),
            }
        }
        Ok(s)
    }

    /// Parses a sorted or unsorted 1-based label list such as `{1,2,4}`.
    pub fn parse_labels(width: usize, text: &str) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .unwrap_or(text.trim());
        let mut labels = Vec::new();
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            labels.push(
                part.parse::<usize>()
                    .map_err(|_| Error::arg(format!("invalid vertex label `{part}`")))?,
            );
        }
        VertexSet::from_labels(width, &labels)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.width && self.words[v / WORD] >> (v % WORD) & 1 == 1
    }

    /// Inserts `v`; returns whether it was newly added.
    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.width, "vertex index {v} out of range");
        let w = &mut self.words[v / WORD];
        let mask = 1u64 << (v % WORD);
        let added = *w & mask == 0;
        *w |= mask;
        self.len += added as usize;
        added
    }

    /// Removes `v`; returns whether it was present.
    #[inline]
    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.width {
            return false;
        }
        let w = &mut self.words[v / WORD];
        let mask = 1u64 << (v % WORD);
        let present = *w & mask != 0;
        *w &= !mask;
        self.len -= present as usize;
        present
    }

    /// Members in ascending order (0-based).
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + bit)
            })
        })
    }

    /// Vertices not in the set, ascending.
    pub fn complement_iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).filter(move |&v| !self.contains(v))
    }

    /// 1-based labels in ascending order.
    pub fn labels(&self) -> Vec<usize> {
        self.iter().map(|v| v + 1).collect()
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.width)
            .map(|v| if self.contains(v) { '1' } else { '0' })
            .collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.width == other.width
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    /// Number of positions where the two sets differ. Widths must match.
    pub(crate) fn symmetric_difference_len(&self, other: &VertexSet) -> usize {
        debug_assert_eq!(self.width, other.width);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    /// Maps every member through `perm` (0-based, `perm[old] = new`).
    pub fn relabel(&self, perm: &[usize]) -> Result<VertexSet> {
        crate::graph::check_permutation(perm, self.width)?;
        VertexSet::from_indices(self.width, self.iter().map(|v| perm[v]))
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.width.cmp(&other.width).then_with(|| {
            // Bit 0 of word 0 is the leftmost bitstring character, so compare
            // bit-reversed words.
            for (a, b) in self.words.iter().zip(&other.words) {
                if a != b {
                    return a.reverse_bits().cmp(&b.reverse_bits());
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexSet({self}/{})", self.width)
    }
}

impl FromStr for VertexSet {
    type Err = Error;

    /// Parses a bitstring; use [`VertexSet::parse_labels`] for label lists.
    fn from_str(s: &str) -> Result<Self> {
        VertexSet::from_bitstring(s)
    }
}

/// Serialized as the sorted 1-based label list.
impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|v| v + 1))
    }
}

/// Wire form of a [`VertexSet`] that also carries its width.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledSet {
    pub vertices: Vec<usize>,
    pub bits: String,
}

impl From<&VertexSet> for LabeledSet {
    fn from(s: &VertexSet) -> Self {
        LabeledSet {
            vertices: s.labels(),
            bits: s.to_bitstring(),
        }
    }
}
