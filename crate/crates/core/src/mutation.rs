//! Jump-and-repair mutation for k-vertex cover.
//!
//! Random-stream contract: one `bool` per member of the parent, drawn in
//! ascending vertex order (a `true` puts the vertex in the removal set), then
//! one `random_range(0..|V \ y|)` draw per padding step, selecting the absent
//! vertex of that rank.

use rand::Rng;

use crate::covers::is_cover_unchecked;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

/// Every intermediate of one jump-and-repair application.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutation {
    /// Vertices removed from the parent.
    pub removed: VertexSet,
    /// Parent minus `removed`, plus every neighbor of `removed`.
    pub before_padding: VertexSet,
    /// `before_padding` topped up with uniform absent vertices to size `k`.
    pub offspring: VertexSet,
}

/// Applies jump-and-repair to the cover `x` with `|x| <= k`.
///
/// The result is always a cover. It has size exactly `k` unless the repair
/// step alone overshoots `k`, in which case it is returned unpadded and
/// oversize.
pub fn jump_and_repair<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    x: &VertexSet,
    rng: &mut R,
) -> Result<VertexSet> {
    jump_and_repair_traced(g, k, x, rng).map(|m| m.offspring)
}

/// Like [`jump_and_repair`] but also returns the removal set and the
/// pre-padding set.
pub fn jump_and_repair_traced<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    x: &VertexSet,
    rng: &mut R,
) -> Result<Mutation> {
    if x.width() != g.n() {
        return Err(Error::arg(format!(
            "parent width {} does not match graph size {}",
            x.width(),
            g.n()
        )));
    }
    if x.len() > k {
        return Err(Error::arg(format!(
            "parent {x} has more than k = {k} vertices"
        )));
    }
    if !is_cover_unchecked(g, x) {
        return Err(Error::arg(format!("parent {x} is not a cover")));
    }
    Ok(mutate(g, k, x, rng))
}

/// Unchecked core, also used for oversize parents during start-cover search.
pub(crate) fn mutate<R: Rng + ?Sized>(g: &Graph, k: usize, x: &VertexSet, rng: &mut R) -> Mutation {
    let mut removed = VertexSet::empty(x.width());
    for v in x.iter() {
        if rng.random::<bool>() {
            removed.insert(v);
        }
    }
    let before_padding = repair(g, x, &removed);
    let mut offspring = before_padding.clone();
    pad(&mut offspring, k, rng);
    Mutation {
        removed,
        before_padding,
        offspring,
    }
}

/// The deterministic part: `(x \ removed) ∪ N(removed)`.
pub fn repair(g: &Graph, x: &VertexSet, removed: &VertexSet) -> VertexSet {
    let mut y = x.clone();
    for v in removed.iter() {
        y.remove(v);
    }
    for v in removed.iter() {
        for &u in g.neighbors(v) {
            y.insert(u);
        }
    }
    y
}

/// Adds uniformly chosen absent vertices until `y` has `k` members.
pub fn pad<R: Rng + ?Sized>(y: &mut VertexSet, k: usize, rng: &mut R) {
    let target = k.min(y.width());
    while y.len() < target {
        let absent = y.width() - y.len();
        let rank = rng.random_range(0..absent);
        let z = y
            .complement_iter()
            .nth(rank)
            .expect("rank is below the number of absent vertices");
        y.insert(z);
    }
}
