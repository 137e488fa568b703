//! Exhaustive ground truth on small instances: the best achievable diversity,
//! strict local optimality of a population, and the fixed populations built
//! on the 8-vertex instance.

use serde::Serialize;

use crate::covers::{self, binomial, is_non_excessive};
use crate::diversity::{hamming, Population, PopulationSummary};
use crate::error::{Error, Result};
use crate::graph::{extended_instance, paper_instance, Graph};
use crate::mutation::repair;
use crate::vertex_set::VertexSet;

pub const DEFAULT_POPULATION_BUDGET: u128 = 100_000_000;
pub const DEFAULT_WITNESS_CAP: usize = 100;

/// Budgets for the exhaustive scans.
#[derive(Clone, Copy, Debug)]
pub struct OracleLimits {
    /// Candidate vertex sets for cover enumeration.
    pub cover_budget: u128,
    /// Multisets of covers for the population scan.
    pub population_budget: u128,
    /// Maximum number of optimal populations kept (the count is exact).
    pub witness_cap: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            cover_budget: covers::DEFAULT_ENUMERATION_BUDGET,
            population_budget: DEFAULT_POPULATION_BUDGET,
            witness_cap: DEFAULT_WITNESS_CAP,
        }
    }
}

/// The four named 4-covers of the 8-vertex instance, in order
/// `{1,2,7,8}`, `{2,4,5,6}`, `{1,2,3,4}`, `{5,6,7,8}`.
pub fn named_covers() -> [VertexSet; 4] {
    let mk = |l: &[usize]| VertexSet::from_labels(8, l).expect("labels within 1..=8");
    [
        mk(&[1, 2, 7, 8]),
        mk(&[2, 4, 5, 6]),
        mk(&[1, 2, 3, 4]),
        mk(&[5, 6, 7, 8]),
    ]
}

/// The locally optimal pair `({1,2,7,8}, {2,4,5,6})`.
pub fn lemma3_pair() -> Population {
    let [v1, v2, ..] = named_covers();
    Population::new(vec![v1, v2]).expect("equal widths")
}

/// One copy each of the first two named covers plus `mu/2 - 1` copies each of
/// the last two.
pub fn lemma4_population(mu: usize) -> Result<Population> {
    if mu < 4 || !mu.is_multiple_of(2) {
        return Err(Error::arg(format!(
            "mu must be even and at least 4, got {mu}"
        )));
    }
    let nu = mu / 2 - 1;
    let [v1, v2, v3, v4] = named_covers();
    let mut members = vec![v1, v2];
    members.extend(std::iter::repeat_n(v3, nu));
    members.extend(std::iter::repeat_n(v4, nu));
    Population::new(members)
}

/// [`lemma4_population`] lifted to `extended_instance(m)`: members at even
/// list positions also take the left side of `K_{m,m}`, odd positions the
/// right side. Every member then has exactly `m + 4` vertices.
pub fn extended_population(mu: usize, m: usize) -> Result<Population> {
    if m < 1 {
        return Err(Error::arg("m must be at least 1"));
    }
    let base = lemma4_population(mu)?;
    let width = 8 + 2 * m;
    let members = base
        .members()
        .iter()
        .enumerate()
        .map(|(pos, member)| {
            let side = if pos % 2 == 0 {
                8..8 + m
            } else {
                8 + m..8 + 2 * m
            };
            VertexSet::from_indices(width, member.iter().chain(side))
        })
        .collect::<Result<Vec<_>>>()?;
    Population::new(members)
}

/// Best diversity over all μ-multisets of feasible covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Optimum {
    pub value: u64,
    /// Exact number of optimal multisets.
    pub count: u64,
    /// Up to the witness cap, each sorted canonically, in scan order.
    pub witnesses: Vec<Vec<VertexSet>>,
}

pub fn optimal_diversity(g: &Graph, k: usize, mu: usize) -> Result<Optimum> {
    optimal_diversity_with(g, k, mu, &OracleLimits::default())
}

/// Scans every multiset of `mu` covers of size at most `k`. Covers smaller
/// than `k` take part too.
pub fn optimal_diversity_with(
    g: &Graph,
    k: usize,
    mu: usize,
    limits: &OracleLimits,
) -> Result<Optimum> {
    if mu < 1 {
        return Err(Error::arg("mu must be at least 1"));
    }
    let feasible = covers::enumerate_covers_with_budget(g, k, limits.cover_budget)?;
    optimum_over(&feasible, g.n(), mu, limits)
}

fn optimum_over(
    feasible: &[VertexSet],
    width: usize,
    mu: usize,
    limits: &OracleLimits,
) -> Result<Optimum> {
    if feasible.is_empty() {
        return Err(Error::arg(
            "no feasible cover exists, so there is no feasible population",
        ));
    }
    let required = binomial(feasible.len() + mu - 1, mu);
    if required > limits.population_budget {
        return Err(Error::OracleBudget {
            what: "population scan",
            required,
            budget: limits.population_budget,
        });
    }

    struct Scan<'a> {
        feasible: &'a [VertexSet],
        mu: u64,
        counts: Vec<u64>,
        chosen: Vec<usize>,
        best: Option<u64>,
        count: u64,
        witnesses: Vec<Vec<usize>>,
        cap: usize,
    }

    impl Scan<'_> {
        fn visit(&mut self, from: usize) {
            if self.chosen.len() as u64 == self.mu {
                let d: u64 = self.counts.iter().map(|&c| c * (self.mu - c)).sum();
                match self.best {
                    Some(b) if d < b => {}
                    Some(b) if d == b => {
                        self.count += 1;
                        if self.witnesses.len() < self.cap {
                            self.witnesses.push(self.chosen.clone());
                        }
                    }
                    _ => {
                        self.best = Some(d);
                        self.count = 1;
                        self.witnesses.clear();
                        if self.cap > 0 {
                            self.witnesses.push(self.chosen.clone());
                        }
                    }
                }
                return;
            }
            for i in from..self.feasible.len() {
                for v in self.feasible[i].iter() {
                    self.counts[v] += 1;
                }
                self.chosen.push(i);
                self.visit(i);
                self.chosen.pop();
                for v in self.feasible[i].iter() {
                    self.counts[v] -= 1;
                }
            }
        }
    }

    let mut scan = Scan {
        feasible,
        mu: mu as u64,
        counts: vec![0; width],
        chosen: Vec::with_capacity(mu),
        best: None,
        count: 0,
        witnesses: Vec::new(),
        cap: limits.witness_cap,
    };
    scan.visit(0);

    // Indices are non-decreasing and `feasible` is canonically sorted, so
    // each witness is already in canonical member order.
    let witnesses = scan
        .witnesses
        .into_iter()
        .map(|idx| idx.into_iter().map(|i| feasible[i].clone()).collect())
        .collect();
    Ok(Optimum {
        value: scan.best.expect("at least one multiset was scanned"),
        count: scan.count,
        witnesses,
    })
}

/// A single-member replacement and its effect on diversity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Move {
    pub member: usize,
    pub replacement: VertexSet,
    pub delta: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalCheck {
    /// Every single replacement by a different feasible cover strictly
    /// lowers diversity.
    pub strict: bool,
    /// The replacement with the largest delta (first in scan order on ties);
    /// `None` if no alternative cover exists.
    pub best_move: Option<Move>,
}

pub fn is_strict_local_optimum(g: &Graph, k: usize, p: &Population) -> Result<LocalCheck> {
    let feasible = covers::enumerate_covers(g, k)?;
    local_check_over(g, k, p, &feasible)
}

fn local_check_over(
    g: &Graph,
    k: usize,
    p: &Population,
    feasible: &[VertexSet],
) -> Result<LocalCheck> {
    for m in p.members() {
        if !covers::is_feasible(g, k, m)? {
            return Err(Error::arg(format!(
                "member {m} is not a cover of size at most {k}"
            )));
        }
    }
    let mut best: Option<Move> = None;
    for j in 0..p.mu() {
        for c in feasible.iter().filter(|&c| c != p.member(j)) {
            let delta = p.replace_delta_unchecked(j, c);
            if best.as_ref().is_none_or(|b| delta > b.delta) {
                best = Some(Move {
                    member: j,
                    replacement: c.clone(),
                    delta,
                });
            }
        }
    }
    Ok(LocalCheck {
        strict: best.as_ref().is_none_or(|b| b.delta < 0),
        best_move: best,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckedPopulation {
    pub population: PopulationSummary,
    pub is_strict_local_optimum: bool,
    pub best_move: Option<Move>,
}

/// JSON report of one oracle run.
#[derive(Clone, Debug, Serialize)]
pub struct LandscapeReport {
    pub instance: String,
    pub k: usize,
    pub mu: usize,
    pub feasible_cover_count: usize,
    pub optimal_diversity: u64,
    pub optimal_count: u64,
    pub optimal_witnesses: Vec<Vec<Vec<usize>>>,
    pub checked_population: Option<CheckedPopulation>,
}

pub fn landscape_report(
    instance: &str,
    g: &Graph,
    k: usize,
    mu: usize,
    check: Option<&Population>,
    limits: &OracleLimits,
) -> Result<LandscapeReport> {
    let feasible = covers::enumerate_covers_with_budget(g, k, limits.cover_budget)?;
    let optimum = optimum_over(&feasible, g.n(), mu, limits)?;
    let checked_population = check
        .map(|p| {
            local_check_over(g, k, p, &feasible).map(|lc| CheckedPopulation {
                population: p.into(),
                is_strict_local_optimum: lc.strict,
                best_move: lc.best_move,
            })
        })
        .transpose()?;
    Ok(LandscapeReport {
        instance: instance.to_string(),
        k,
        mu,
        feasible_cover_count: feasible.len(),
        optimal_diversity: optimum.value,
        optimal_count: optimum.count,
        optimal_witnesses: optimum
            .witnesses
            .iter()
            .map(|w| w.iter().map(VertexSet::labels).collect())
            .collect(),
        checked_population,
    })
}

/// One verified statement about the fixed instances.
#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub id: String,
    pub statement: String,
    pub passed: bool,
    pub detail: String,
}

fn claim(id: &str, statement: &str, passed: bool, detail: impl Into<String>) -> Claim {
    Claim {
        id: id.to_string(),
        statement: statement.to_string(),
        passed,
        detail: detail.into(),
    }
}

fn list(sets: &[VertexSet]) -> String {
    let parts: Vec<String> = sets.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// Re-derives every structural claim about the 8-vertex instance and its
/// extensions by exhaustive enumeration.
pub fn verify_lemmas() -> Result<Vec<Claim>> {
    let g = paper_instance();
    let [v1, v2, v3, v4] = named_covers();
    let mut out = Vec::new();

    let upto2 = covers::enumerate_covers(&g, 2)?;
    out.push(claim(
        "graph.no-small-cover",
        "no vertex cover of size one or two",
        upto2.is_empty(),
        format!("covers of size <= 2: {}", upto2.len()),
    ));

    let upto3 = covers::enumerate_covers(&g, 3)?;
    let three_cover = VertexSet::from_labels(8, &[1, 2, 4])?;
    out.push(claim(
        "graph.unique-3-cover",
        "{1,2,4} is the only cover of size 3 (or less)",
        upto3 == [three_cover.clone()],
        list(&upto3),
    ));

    let upto4 = covers::enumerate_covers(&g, 4)?;
    let fours: Vec<VertexSet> = upto4.iter().filter(|c| c.len() == 4).cloned().collect();
    let with3: Vec<VertexSet> = fours.iter().filter(|c| c.contains(2)).cloned().collect();
    out.push(claim(
        "graph.unique-4-cover-with-v3",
        "{1,2,3,4} is the only 4-cover containing vertex 3",
        with3 == [v3.clone()],
        list(&with3),
    ));
    let without2: Vec<VertexSet> = fours.iter().filter(|c| !c.contains(1)).cloned().collect();
    out.push(claim(
        "graph.unique-4-cover-without-v2",
        "{5,6,7,8} is the only 4-cover without vertex 2",
        without2 == [v4.clone()],
        list(&without2),
    ));
    out.push(claim(
        "graph.feasible-count",
        "there are exactly 9 covers of size at most 4",
        upto4.len() == 9,
        format!("{} covers: {}", upto4.len(), list(&upto4)),
    ));

    let non_excessive = [&v1, &v2, &v4]
        .iter()
        .map(|c| is_non_excessive(&g, c))
        .collect::<Result<Vec<_>>>()?;
    let v3_excessive = !is_non_excessive(&g, &v3)?;
    out.push(claim(
        "pair.non-excessive",
        "{1,2,7,8}, {2,4,5,6}, {5,6,7,8} are non-excessive and {1,2,3,4} is not",
        non_excessive.iter().all(|&b| b) && v3_excessive,
        format!("non-excessive: {non_excessive:?}, {{1,2,3,4}} excessive: {v3_excessive}"),
    ));

    let d12 = hamming(&v1, &v2)?;
    let d34 = hamming(&v3, &v4)?;
    out.push(claim(
        "pair.distances",
        "H({1,2,7,8}, {2,4,5,6}) = 6 and H({1,2,3,4}, {5,6,7,8}) = 8",
        d12 == 6 && d34 == 8,
        format!("{d12} and {d34}"),
    ));

    let opt2 = optimum_over(&upto4, 8, 2, &OracleLimits::default())?;
    let mut optimal_pair = [v3.clone(), v4.clone()];
    optimal_pair.sort();
    let unique = opt2.count == 1 && opt2.witnesses == [optimal_pair.to_vec()];
    out.push(claim(
        "pair.unique-optimum",
        "the unique optimal pair is ({1,2,3,4}, {5,6,7,8}) with diversity 8",
        opt2.value == 8 && unique,
        format!("optimum {} with {} witness(es)", opt2.value, opt2.count),
    ));

    let pair = lemma3_pair();
    let lc = local_check_over(&g, 4, &pair, &upto4)?;
    let best = lc.best_move.as_ref().map_or(i64::MIN, |m| m.delta);
    out.push(claim(
        "pair.local-optimum",
        "every single replacement in ({1,2,7,8}, {2,4,5,6}) lowers diversity",
        lc.strict && best < 0,
        format!("best single-replacement delta {best}"),
    ));

    let removal_hits = removal_subsets(&v4)
        .into_iter()
        .filter(|s| repair(&g, &v4, s) == v1)
        .collect::<Vec<_>>();
    out.push(claim(
        "operator.unique-removal",
        "exactly one of the 16 removal sets of {5,6,7,8} repairs to {1,2,7,8}",
        removal_hits.len() == 1,
        list(&removal_hits),
    ));

    for mu in [4, 6] {
        let p = lemma4_population(mu)?;
        let lc = local_check_over(&g, 4, &p, &upto4)?;
        let opt = optimum_over(&upto4, 8, mu, &OracleLimits::default())?;
        let d = p.total_hamming();
        let value_ok = mu != 4 || d == 30;
        out.push(claim(
            &format!("population.mu{mu}.local-optimum"),
            &format!("the balanced mu={mu} population is a strict local optimum"),
            lc.strict,
            format!(
                "best single-replacement delta {}",
                lc.best_move.map_or(i64::MIN, |m| m.delta)
            ),
        ));
        out.push(claim(
            &format!("population.mu{mu}.sub-optimal"),
            &format!("its diversity is below the mu={mu} optimum"),
            d < opt.value && value_ok,
            format!("diversity {d}, optimum {}", opt.value),
        ));
    }

    for m in [1, 2] {
        let ext = extended_instance(m)?;
        let p = extended_population(4, m)?;
        let lc = is_strict_local_optimum(&ext, m + 4, &p)?;
        out.push(claim(
            &format!("extension.m{m}.local-optimum"),
            &format!("with K_{{{m},{m}}} attached, the mu=4 population is a strict local optimum for k={}", m + 4),
            lc.strict,
            format!(
                "best single-replacement delta {}",
                lc.best_move.map_or(i64::MIN, |mv| mv.delta)
            ),
        ));
    }

    Ok(out)
}

/// All subsets of `x`.
pub fn removal_subsets(x: &VertexSet) -> Vec<VertexSet> {
    let members: Vec<usize> = x.iter().collect();
    (0u64..1 << members.len())
        .map(|mask| {
            let mut s = VertexSet::empty(x.width());
            for (i, &v) in members.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    s.insert(v);
                }
            }
            s
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_population_counts() {
        let p = lemma4_population(4).unwrap();
        assert_eq!(p.counts(), &[2, 3, 1, 2, 2, 2, 2, 2]);
        assert_eq!(p.total_hamming(), 30);
        let p6 = lemma4_population(6).unwrap();
        assert_eq!(p6.counts(), &[3, 4, 2, 3, 3, 3, 3, 3]);
        for bad in [2, 3, 5, 7] {
            assert!(lemma4_population(bad).is_err());
        }
    }

    #[test]
    fn extended_population_shape() {
        let p = extended_population(4, 1).unwrap();
        assert!(p.members().iter().all(|m| m.len() == 5));
        assert_eq!(&p.counts()[8..], &[2, 2]);
        for (mu, m) in [(4, 1), (4, 2), (6, 3), (8, 2)] {
            let ext = extended_population(mu, m).unwrap();
            let base = lemma4_population(mu).unwrap();
            assert!(ext.members().iter().all(|x| x.len() == m + 4));
            assert!(ext.counts()[8..].iter().all(|&c| c as usize == mu / 2));
            let expected = base.total_hamming() + (2 * m * (mu / 2) * (mu / 2)) as u64;
            assert_eq!(ext.total_hamming(), expected);
        }
        assert!(extended_population(4, 0).is_err());
        assert!(extended_population(5, 1).is_err());
    }

    #[test]
    fn pair_optimum() {
        let opt = optimal_diversity(&paper_instance(), 4, 2).unwrap();
        let [_, _, v3, v4] = named_covers();
        assert_eq!(opt.value, 8);
        assert_eq!(opt.count, 1);
        assert_eq!(opt.witnesses, vec![vec![v4, v3]]);
    }

    #[test]
    fn single_member_optimum_is_zero() {
        let opt = optimal_diversity(&paper_instance(), 4, 1).unwrap();
        assert_eq!(opt.value, 0);
        assert_eq!(opt.count, 9);
    }

    #[test]
    fn witness_cap_keeps_exact_count() {
        let limits = OracleLimits {
            witness_cap: 0,
            ..OracleLimits::default()
        };
        let opt = optimal_diversity_with(&paper_instance(), 4, 1, &limits).unwrap();
        assert!(opt.witnesses.is_empty());
        assert_eq!(opt.count, 9);
    }

    #[test]
    fn population_budget_enforced() {
        let limits = OracleLimits {
            population_budget: 10,
            ..OracleLimits::default()
        };
        let err = optimal_diversity_with(&paper_instance(), 4, 2, &limits).unwrap_err();
        assert!(matches!(err, Error::OracleBudget { required: 45, .. }));
    }

    #[test]
    fn local_optimum_examples() {
        let g = paper_instance();
        let [v1, v2, v3, v4] = named_covers();

        let lc = is_strict_local_optimum(&g, 4, &lemma3_pair()).unwrap();
        assert!(lc.strict);
        assert!(lc.best_move.unwrap().delta < 0);

        let opt = Population::new(vec![v3, v4]).unwrap();
        let lc = is_strict_local_optimum(&g, 4, &opt).unwrap();
        assert!(lc.best_move.unwrap().delta <= 0);

        let dup = Population::new(vec![v1.clone(), v1]).unwrap();
        let lc = is_strict_local_optimum(&g, 4, &dup).unwrap();
        assert!(!lc.strict);
        let best = lc.best_move.unwrap();
        assert_eq!(best.delta, 6);
        assert_eq!(best.replacement, v2);
    }

    #[test]
    fn balanced_mu6_is_strict() {
        let lc =
            is_strict_local_optimum(&paper_instance(), 4, &lemma4_population(6).unwrap()).unwrap();
        assert!(lc.strict);
    }

    #[test]
    fn infeasible_member_rejected() {
        let p = Population::new(vec![VertexSet::from_labels(8, &[1, 2]).unwrap()]).unwrap();
        assert!(is_strict_local_optimum(&paper_instance(), 4, &p).is_err());
    }

    #[test]
    fn every_claim_passes() {
        for c in verify_lemmas().unwrap() {
            assert!(c.passed, "{}: {} ({})", c.id, c.statement, c.detail);
        }
    }
}
