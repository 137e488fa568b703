//! The three diversity-optimizing EAs: (μ+1), (μ+λ) and (1_μ+1_μ).
//!
//! Fitness is the capped penalty from [`capped_fitness`]: every feasible
//! individual (a cover with at most `k` vertices) scores the cap `0`, so
//! among feasible individuals selection is driven by diversity alone.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::covers::{self, binomial, for_each_combination, uncovered_edges};
use crate::diversity::Population;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::mutation::{mutate, pad};
use crate::vertex_set::VertexSet;

/// Exact survivor selection in (μ+λ) is used while the number of candidate
/// removal subsets stays at or below this.
pub const DEFAULT_SUBSET_BUDGET: u128 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    MuPlusOne,
    MuPlusLambda,
    OneMuOneMu,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::MuPlusOne => "mu_plus_one",
            Algorithm::MuPlusLambda => "mu_plus_lambda",
            Algorithm::OneMuOneMu => "one_mu_one_mu",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mu_plus_one" => Ok(Algorithm::MuPlusOne),
            "mu_plus_lambda" => Ok(Algorithm::MuPlusLambda),
            "one_mu_one_mu" => Ok(Algorithm::OneMuOneMu),
            other => Err(Error::arg(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Everything one run needs. The graph is shared read-only.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub graph: Arc<Graph>,
    pub algorithm: Algorithm,
    pub k: usize,
    pub mu: usize,
    /// Offspring per iteration; only read by (μ+λ).
    pub lambda: usize,
    /// Maximum number of iterations.
    pub budget: u64,
    pub seed: u64,
    /// Stop as soon as the population reaches this diversity.
    pub target_diversity: Option<u64>,
    pub subset_budget: u128,
    /// Iteration cap for the start-cover descent when no initial population
    /// is given.
    pub init_budget: u64,
}

impl RunConfig {
    pub fn new(graph: Arc<Graph>, algorithm: Algorithm, k: usize, mu: usize) -> Self {
        RunConfig {
            graph,
            algorithm,
            k,
            mu,
            lambda: mu,
            budget: 0,
            seed: 0,
            target_diversity: None,
            subset_budget: DEFAULT_SUBSET_BUDGET,
            init_budget: covers::DEFAULT_INIT_BUDGET,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu < 1 {
            return Err(Error::arg("mu must be at least 1"));
        }
        if self.algorithm == Algorithm::MuPlusLambda && self.lambda < 1 {
            return Err(Error::arg("lambda must be at least 1"));
        }
        Ok(())
    }
}

/// Outcome of one run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub algorithm: Algorithm,
    pub mu: usize,
    pub lambda: usize,
    pub k: usize,
    /// First iteration at which the target diversity was reached; `None`
    /// if it never was (or no target was set).
    pub hitting_time: Option<u64>,
    pub final_diversity: u64,
    pub iterations_run: u64,
    pub accepted_count: u64,
}

/// `-(uncovered edges * (n + 1) + max(0, |s| - k))`; zero exactly for
/// feasible sets, negative otherwise.
pub fn capped_fitness(g: &Graph, k: usize, s: &VertexSet) -> i64 {
    let uncovered = uncovered_edges(g, s) as i64;
    let excess = s.len().saturating_sub(k) as i64;
    -(uncovered * (g.n() as i64 + 1) + excess)
}

fn fitnesses(cfg: &RunConfig, pop: &Population) -> Vec<i64> {
    pop.members()
        .iter()
        .map(|m| capped_fitness(&cfg.graph, cfg.k, m))
        .collect()
}

fn offspring<R: Rng + ?Sized>(cfg: &RunConfig, parents: &Population, rng: &mut R) -> VertexSet {
    let parent = rng.random_range(0..parents.mu());
    mutate(&cfg.graph, cfg.k, parents.member(parent), rng).offspring
}

/// One (μ+1) iteration. Returns whether the offspring is in the new
/// population.
///
/// The offspring enters if its capped fitness is at least the population
/// minimum. Then one individual of minimum fitness with the smallest
/// diversity contribution is dropped, uniformly among ties, and never the
/// offspring when the tie has two or more members.
pub fn step_mu_plus_one<R: Rng + ?Sized>(
    pop: &mut Population,
    cfg: &RunConfig,
    rng: &mut R,
) -> bool {
    let y = offspring(cfg, pop, rng);
    select_mu_plus_one(pop, y, cfg, rng)
}

/// The (μ+1) survivor rule applied to a given offspring `y`.
pub fn select_mu_plus_one<R: Rng + ?Sized>(
    pop: &mut Population,
    y: VertexSet,
    cfg: &RunConfig,
    rng: &mut R,
) -> bool {
    let fy = capped_fitness(&cfg.graph, cfg.k, &y);
    let mut fits = fitnesses(cfg, pop);
    let worst = *fits.iter().min().expect("population is non-empty");
    if fy < worst {
        return false;
    }

    let fresh = pop.mu();
    pop.push(y);
    fits.push(fy);

    let stratum: Vec<usize> = (0..pop.mu()).filter(|&j| fits[j] == worst).collect();
    let contributions: Vec<u64> = stratum.iter().map(|&j| pop.contribution(j)).collect();
    let least = *contributions.iter().min().expect("stratum is non-empty");
    let mut ties: Vec<usize> = stratum
        .iter()
        .zip(&contributions)
        .filter(|&(_, &c)| c == least)
        .map(|(&j, _)| j)
        .collect();
    if ties.len() >= 2 {
        ties.retain(|&j| j != fresh);
    }
    let victim = if ties.len() == 1 {
        ties[0]
    } else {
        ties[rng.random_range(0..ties.len())]
    };
    pop.swap_remove(victim);
    victim != fresh
}

/// One (μ+λ) iteration. Returns whether any offspring survived.
///
/// Whole minimum-fitness strata are dropped while at least μ individuals
/// remain. If the pool is still too large, the required number of
/// worst-stratum individuals is removed so that the survivors' diversity is
/// maximal: exactly when the subset count fits `cfg.subset_budget`, otherwise
/// by greedy backward elimination. Ties are broken uniformly.
pub fn step_mu_plus_lambda<R: Rng + ?Sized>(
    pop: &mut Population,
    cfg: &RunConfig,
    rng: &mut R,
) -> bool {
    let children: Vec<VertexSet> = (0..cfg.lambda).map(|_| offspring(cfg, pop, rng)).collect();
    select_mu_plus_lambda(pop, children, cfg, rng)
}

/// The (μ+λ) survivor rule applied to given offspring.
pub fn select_mu_plus_lambda<R: Rng + ?Sized>(
    pop: &mut Population,
    children: Vec<VertexSet>,
    cfg: &RunConfig,
    rng: &mut R,
) -> bool {
    let mu = pop.mu();
    let mut pool = pop.clone();
    let mut fits = fitnesses(cfg, &pool);
    let mut fresh = vec![false; mu];
    for child in children {
        fits.push(capped_fitness(&cfg.graph, cfg.k, &child));
        pool.push(child);
        fresh.push(true);
    }

    let remove =
        |pool: &mut Population, fits: &mut Vec<i64>, fresh: &mut Vec<bool>, mut idx: Vec<usize>| {
            idx.sort_unstable_by(|a, b| b.cmp(a));
            for j in idx {
                pool.swap_remove(j);
                fits.swap_remove(j);
                fresh.swap_remove(j);
            }
        };

    while pool.mu() > mu {
        let worst = *fits.iter().min().expect("pool is non-empty");
        let stratum: Vec<usize> = (0..pool.mu()).filter(|&j| fits[j] == worst).collect();
        if pool.mu() - stratum.len() >= mu {
            remove(&mut pool, &mut fits, &mut fresh, stratum);
            continue;
        }
        let excess = pool.mu() - mu;
        let victims = if binomial(stratum.len(), excess) <= cfg.subset_budget {
            best_removal_subset(&pool, &stratum, excess, rng)
        } else {
            greedy_removal(&pool, &stratum, excess, rng)
        };
        remove(&mut pool, &mut fits, &mut fresh, victims);
    }

    let accepted = fresh.iter().any(|&f| f);
    *pop = pool;
    accepted
}

/// Exhaustive search over `excess`-subsets of `stratum` for the removal that
/// leaves the largest total Hamming distance.
fn best_removal_subset<R: Rng + ?Sized>(
    pool: &Population,
    stratum: &[usize],
    excess: usize,
    rng: &mut R,
) -> Vec<usize> {
    let survivors = (pool.mu() - excess) as i64;
    let mut best: Option<(i64, Vec<usize>)> = None;
    let mut ties = 0u64;
    let mut counts = pool.counts().to_vec();
    for_each_combination(stratum.len(), excess, |combo| {
        counts.copy_from_slice(pool.counts());
        for &c in combo {
            for v in pool.member(stratum[c]).iter() {
                counts[v] -= 1;
            }
        }
        let d: i64 = counts
            .iter()
            .map(|&c| c as i64 * (survivors - c as i64))
            .sum();
        let chosen = || combo.iter().map(|&c| stratum[c]).collect::<Vec<_>>();
        match &best {
            Some((bd, _)) if d < *bd => {}
            Some((bd, _)) if d == *bd => {
                ties += 1;
                if rng.random_range(0..ties) == 0 {
                    best = Some((d, chosen()));
                }
            }
            _ => {
                ties = 1;
                best = Some((d, chosen()));
            }
        }
    });
    best.expect("at least one subset exists").1
}

fn greedy_removal<R: Rng + ?Sized>(
    pool: &Population,
    stratum: &[usize],
    excess: usize,
    rng: &mut R,
) -> Vec<usize> {
    let mut work = pool.clone();
    // Original pool index of each slot in `work`.
    let mut origin: Vec<usize> = (0..pool.mu()).collect();
    let mut candidates: Vec<usize> = stratum.to_vec();
    let mut victims = Vec::with_capacity(excess);
    for _ in 0..excess {
        let slots: Vec<usize> = candidates
            .iter()
            .map(|c| {
                origin
                    .iter()
                    .position(|o| o == c)
                    .expect("candidate is alive")
            })
            .collect();
        let contributions: Vec<u64> = slots.iter().map(|&s| work.contribution(s)).collect();
        let least = *contributions.iter().min().expect("candidates remain");
        let ties: Vec<usize> = (0..slots.len())
            .filter(|&i| contributions[i] == least)
            .collect();
        let pick = if ties.len() == 1 {
            ties[0]
        } else {
            ties[rng.random_range(0..ties.len())]
        };
        victims.push(candidates.swap_remove(pick));
        work.swap_remove(slots[pick]);
        origin.swap_remove(slots[pick]);
    }
    victims
}

/// One (1_μ+1_μ) iteration. Returns whether the offspring population
/// replaced the parents.
///
/// μ offspring are created, each from a uniform parent; they replace the
/// whole population iff all are feasible and their diversity is no lower.
pub fn step_one_mu_one_mu<R: Rng + ?Sized>(
    pop: &mut Population,
    cfg: &RunConfig,
    rng: &mut R,
) -> bool {
    let children: Vec<VertexSet> = (0..pop.mu()).map(|_| offspring(cfg, pop, rng)).collect();
    select_one_mu_one_mu(pop, children, cfg)
}

/// The (1_μ+1_μ) acceptance rule applied to a given offspring population.
pub fn select_one_mu_one_mu(
    pop: &mut Population,
    children: Vec<VertexSet>,
    cfg: &RunConfig,
) -> bool {
    assert_eq!(
        children.len(),
        pop.mu(),
        "offspring population must have mu members"
    );
    if children
        .iter()
        .any(|c| capped_fitness(&cfg.graph, cfg.k, c) < 0)
    {
        return false;
    }
    let next = Population::new(children).expect("offspring share the parents' width");
    if next.total_hamming() >= pop.total_hamming() {
        *pop = next;
        true
    } else {
        false
    }
}

/// Dispatches one iteration of the configured algorithm.
pub fn step<R: Rng + ?Sized>(pop: &mut Population, cfg: &RunConfig, rng: &mut R) -> bool {
    match cfg.algorithm {
        Algorithm::MuPlusOne => step_mu_plus_one(pop, cfg, rng),
        Algorithm::MuPlusLambda => step_mu_plus_lambda(pop, cfg, rng),
        Algorithm::OneMuOneMu => step_one_mu_one_mu(pop, cfg, rng),
    }
}

/// μ copies of a start cover padded to exactly `k` vertices.
pub fn auto_population<R: Rng + ?Sized>(cfg: &RunConfig, rng: &mut R) -> Result<Population> {
    let mut cover = covers::initial_cover(&cfg.graph, cfg.k, rng, cfg.init_budget)
        .ok_or(Error::Infeasible { k: cfg.k })?;
    pad(&mut cover, cfg.k, rng);
    Population::copies(&cover, cfg.mu)
}

fn check_initial(cfg: &RunConfig, p: &Population) -> Result<()> {
    if p.mu() != cfg.mu {
        return Err(Error::arg(format!(
            "initial population has {} members but mu = {}",
            p.mu(),
            cfg.mu
        )));
    }
    if p.width() != cfg.graph.n() {
        return Err(Error::arg(format!(
            "initial population width {} does not match graph size {}",
            p.width(),
            cfg.graph.n()
        )));
    }
    if let Some(bad) = p
        .members()
        .iter()
        .find(|m| capped_fitness(&cfg.graph, cfg.k, m) < 0)
    {
        return Err(Error::arg(format!(
            "initial member {bad} is not a cover of size at most {}",
            cfg.k
        )));
    }
    Ok(())
}

/// Runs the configured algorithm from `initial` (or an automatic start) and
/// returns its record and final population.
pub fn run(cfg: &RunConfig, initial: Option<Population>) -> Result<(TrialRecord, Population)> {
    run_observed(cfg, initial, |_, _, _| {})
}

/// [`run`] with a callback after every iteration:
/// `observer(iteration, population, accepted)`.
pub fn run_observed(
    cfg: &RunConfig,
    initial: Option<Population>,
    mut observer: impl FnMut(u64, &Population, bool),
) -> Result<(TrialRecord, Population)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pop = match initial {
        Some(p) => p,
        None => auto_population(cfg, &mut rng)?,
    };
    check_initial(cfg, &pop)?;

    let reached = |p: &Population| cfg.target_diversity.is_some_and(|t| p.total_hamming() >= t);
    let mut record = TrialRecord {
        seed: cfg.seed,
        algorithm: cfg.algorithm,
        mu: cfg.mu,
        lambda: cfg.lambda,
        k: cfg.k,
        hitting_time: reached(&pop).then_some(0),
        final_diversity: 0,
        iterations_run: 0,
        accepted_count: 0,
    };

    if record.hitting_time.is_none() {
        for t in 1..=cfg.budget {
            let accepted = step(&mut pop, cfg, &mut rng);
            record.iterations_run = t;
            record.accepted_count += accepted as u64;
            observer(t, &pop, accepted);
            if reached(&pop) {
                record.hitting_time = Some(t);
                break;
            }
        }
    }
    record.final_diversity = pop.total_hamming();
    Ok((record, pop))
}
