//! Batched seeded experiments, Monte Carlo success estimators, and the
//! comparison of hitting times against a geometric reference.

use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algorithms::{capped_fitness, run, RunConfig, TrialRecord};
use crate::diversity::Population;
use crate::error::{Error, Result};
use crate::graph::{extended_side, paper_instance, Graph};
use crate::landscape::{extended_population, lemma3_pair, lemma4_population};
use crate::mutation::{jump_and_repair, jump_and_repair_traced};
use crate::vertex_set::VertexSet;

/// Standard normal quantile at 0.99, for one-sided 99% slack.
pub const Z_99: f64 = 2.326_347_874_040_841;

/// First line of every CSV written by [`write_csv`].
pub const CSV_COMMENT: &str = "# divcover trial records v1";

pub const CSV_HEADER: [&str; 9] = [
    "seed",
    "algorithm",
    "mu",
    "lambda",
    "k",
    "hitting_time",
    "final_diversity",
    "iterations_run",
    "accepted_count",
];

/// Where a run starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StartPreset {
    /// μ copies of a start cover found by [`crate::covers::initial_cover`].
    Auto,
    /// The locally optimal pair on the 8-vertex instance (μ = 2).
    Lemma3Pair,
    /// The balanced even-μ population on the 8-vertex instance.
    Lemma4,
    /// The even-μ population on `extended_instance(m)`.
    Extended,
    Explicit(Vec<VertexSet>),
}

impl FromStr for StartPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(StartPreset::Auto),
            "lemma3_pair" => Ok(StartPreset::Lemma3Pair),
            "lemma4" => Ok(StartPreset::Lemma4),
            "extended" => Ok(StartPreset::Extended),
            other => Err(Error::arg(format!(
                "unknown start preset `{other}` (expected auto, lemma3_pair, lemma4 or extended)"
            ))),
        }
    }
}

impl StartPreset {
    /// Builds the start population for `cfg`, or `None` for [`StartPreset::Auto`].
    pub fn population(&self, cfg: &RunConfig) -> Result<Option<Population>> {
        let needs_paper = || {
            if *cfg.graph != paper_instance() {
                return Err(Error::arg("this start preset needs the 8-vertex instance"));
            }
            Ok(())
        };
        let p = match self {
            StartPreset::Auto => return Ok(None),
            StartPreset::Lemma3Pair => {
                needs_paper()?;
                lemma3_pair()
            }
            StartPreset::Lemma4 => {
                needs_paper()?;
                lemma4_population(cfg.mu)?
            }
            StartPreset::Extended => {
                let m = extended_side(&cfg.graph)
                    .ok_or_else(|| Error::arg("the extended preset needs an extended instance"))?;
                extended_population(cfg.mu, m)?
            }
            StartPreset::Explicit(members) => Population::new(members.clone())?,
        };
        Ok(Some(p))
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub base: RunConfig,
    pub trial_count: usize,
    /// Trial `t` runs with seed `seed_base + t`.
    pub seed_base: u64,
    pub start: StartPreset,
    /// Worker threads; 0 lets rayon decide.
    pub workers: usize,
}

/// Runs every trial of `spec`; records come back in trial order whatever the
/// worker count.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<TrialRecord>> {
    if spec.trial_count < 1 {
        return Err(Error::arg("trial_count must be at least 1"));
    }
    let initial = spec.start.population(&spec.base)?;
    let trial = |t: usize| -> Result<TrialRecord> {
        let mut cfg = spec.base.clone();
        cfg.seed = spec.seed_base.wrapping_add(t as u64);
        run(&cfg, initial.clone())
            .map(|(record, _)| record)
            .map_err(|e| Error::Trial {
                trial: t,
                source: Box::new(e),
            })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::arg(format!("cannot start worker pool: {e}")))?;
    pool.install(|| (0..spec.trial_count).into_par_iter().map(trial).collect())
}

/// Writes records as CSV preceded by [`CSV_COMMENT`]. A missing hitting time
/// is written as `inf`.
pub fn write_csv<W: Write>(records: &[TrialRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_COMMENT}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.seed.to_string(),
            r.algorithm.to_string(),
            r.mu.to_string(),
            r.lambda.to_string(),
            r.k.to_string(),
            r.hitting_time
                .map_or_else(|| "inf".to_string(), |t| t.to_string()),
            r.final_diversity.to_string(),
            r.iterations_run.to_string(),
            r.accepted_count.to_string(),
        ])?;
    }
    w.flush()
}

/// Fraction of successful samples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub samples: u64,
    pub successes: u64,
    pub frequency: f64,
}

impl Estimate {
    fn new(samples: u64, successes: u64) -> Self {
        let frequency = if samples == 0 {
            0.0
        } else {
            successes as f64 / samples as f64
        };
        Estimate {
            samples,
            successes,
            frequency,
        }
    }

    /// Binomial standard deviation of the frequency under success rate `p`.
    pub fn sigma(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.samples as f64).sqrt()
    }
}

/// Draws `samples` offspring batches of size μ from `start` the way one
/// (1_μ+1_μ) iteration does, and counts batches that are feasible and reach
/// `optimum` diversity.
pub fn estimate_success<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    start: &Population,
    samples: u64,
    optimum: u64,
    rng: &mut R,
) -> Result<Estimate> {
    let mut successes = 0;
    for _ in 0..samples {
        let mut batch = Vec::with_capacity(start.mu());
        for _ in 0..start.mu() {
            let parent = rng.random_range(0..start.mu());
            batch.push(jump_and_repair(g, k, start.member(parent), rng)?);
        }
        if batch.iter().all(|c| capped_fitness(g, k, c) == 0)
            && Population::new(batch)?.total_hamming() >= optimum
        {
            successes += 1;
        }
    }
    Ok(Estimate::new(samples, successes))
}

/// How often jump-and-repair on `x` yields exactly `target` before padding.
pub fn estimate_prepadding_hit<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    x: &VertexSet,
    target: &VertexSet,
    samples: u64,
    rng: &mut R,
) -> Result<Estimate> {
    let mut successes = 0;
    for _ in 0..samples {
        if jump_and_repair_traced(g, k, x, rng)?.before_padding == *target {
            successes += 1;
        }
    }
    Ok(Estimate::new(samples, successes))
}

/// A named per-iteration success probability.
#[derive(Clone, Debug, Serialize)]
pub struct ReferenceLine {
    pub name: String,
    pub p: f64,
    pub mean: f64,
}

/// `2^-(k mu)`, the asymptotic per-iteration success bound.
pub fn theorem1_p0(k: usize, mu: usize) -> f64 {
    0.5f64.powi((k * mu) as i32)
}

/// Exact per-iteration success probability from the locally optimal pair on
/// the 8-vertex instance with `k = 4`, `mu = 2`.
pub const EXACT_PAPER_INSTANCE_P0: f64 = 1.0 / 640.0;

/// Reference lines for a k-cover run with population size `mu` on `n`
/// vertices. The finite-size line `2^-(k mu) (1 - (k mu)^2 / n)` is only
/// included while `(k mu)^2 < n`.
pub fn reference_lines(k: usize, mu: usize, n: usize) -> Vec<ReferenceLine> {
    let p = theorem1_p0(k, mu);
    let mut lines = vec![ReferenceLine {
        name: "theorem1".into(),
        p,
        mean: 1.0 / p,
    }];
    let km = (k * mu) as f64;
    if km * km < n as f64 {
        let q = p * (1.0 - km * km / n as f64);
        lines.push(ReferenceLine {
            name: "theorem1-finite".into(),
            p: q,
            mean: 1.0 / q,
        });
    }
    lines
}

/// Why the asymptotic reference may not apply, if it may not.
pub fn asymptotic_note(k: usize, mu: usize, n: usize) -> Option<String> {
    let km = k * mu;
    (km * km >= n).then(|| {
        format!(
            "(k*mu)^2 = {} >= n = {n}: the size condition behind 2^-(k*mu) = 1/{} is violated, \
             so that bound is not guaranteed here",
            km * km,
            1u64 << km.min(63)
        )
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DecileRow {
    pub quantile: f64,
    /// Decile of `Geom(p0)`: smallest `t` with `(1 - p0)^t <= 1 - quantile`.
    pub t: u64,
    /// Fraction of runs with hitting time above `t`.
    pub empirical_survival: f64,
    /// `(1 - p0)^t`.
    pub geometric_survival: f64,
    pub slack: f64,
    pub holds: bool,
    /// The same quantile of the observed hitting times (`None` if it falls on
    /// runs that never hit).
    pub empirical_quantile: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DominanceReport {
    pub p0: f64,
    pub trials: usize,
    pub finite: usize,
    /// Mean over the finite hitting times only.
    pub empirical_mean_hitting_time: Option<f64>,
    pub geometric_mean: f64,
    pub rows: Vec<DecileRow>,
    /// `None` when inconclusive (no finite hitting times).
    pub dominated: Option<bool>,
    /// Largest `empirical - geometric` survival difference over the rows.
    pub max_survival_excess: Option<f64>,
    pub notes: Vec<String>,
}

/// Smallest `t` with `(1 - p0)^t <= 1 - q`.
pub fn geometric_quantile(p0: f64, q: f64) -> u64 {
    let t = ((1.0 - q).ln() / (1.0 - p0).ln()).ceil();
    t.max(0.0) as u64
}

/// Compares hitting times against `Geom(p0)`. Dominance holds when, at each
/// decile `t` of `Geom(p0)`, the fraction of runs with hitting time above `t`
/// is at most `(1 - p0)^t` plus a one-sided 99% binomial slack. `None`
/// entries are runs that never hit and count as exceeding every `t`.
pub fn dominance_report(hitting_times: &[Option<u64>], p0: f64) -> Result<DominanceReport> {
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::arg(format!("p0 must lie in (0, 1), got {p0}")));
    }
    if hitting_times.is_empty() {
        return Err(Error::arg("no records"));
    }
    let trials = hitting_times.len();
    let mut finite: Vec<u64> = hitting_times.iter().flatten().copied().collect();
    finite.sort_unstable();
    let mut report = DominanceReport {
        p0,
        trials,
        finite: finite.len(),
        empirical_mean_hitting_time: None,
        geometric_mean: 1.0 / p0,
        rows: Vec::new(),
        dominated: None,
        max_survival_excess: None,
        notes: Vec::new(),
    };
    if finite.is_empty() {
        report
            .notes
            .push("inconclusive: no run reached the target within its budget".into());
        return Ok(report);
    }
    report.empirical_mean_hitting_time =
        Some(finite.iter().sum::<u64>() as f64 / finite.len() as f64);
    if finite.len() < trials {
        report.notes.push(format!(
            "{} of {trials} runs never hit; the mean covers finite hitting times only",
            trials - finite.len()
        ));
    }

    let n = trials as f64;
    let mut dominated = true;
    let mut max_excess = f64::NEG_INFINITY;
    for d in 1..=9 {
        let q = d as f64 / 10.0;
        let t = geometric_quantile(p0, q);
        let above = hitting_times
            .iter()
            .filter(|h| h.is_none_or(|h| h > t))
            .count();
        let empirical = above as f64 / n;
        let geometric = (1.0 - p0).powf(t as f64);
        let slack = Z_99 * (geometric * (1.0 - geometric) / n).sqrt();
        let holds = empirical <= geometric + slack;
        dominated &= holds;
        max_excess = max_excess.max(empirical - geometric);
        let rank = ((q * n).ceil() as usize).max(1);
        report.rows.push(DecileRow {
            quantile: q,
            t,
            empirical_survival: empirical,
            geometric_survival: geometric,
            slack,
            holds,
            empirical_quantile: finite.get(rank - 1).copied(),
        });
    }
    report.dominated = Some(dominated);
    report.max_survival_excess = Some(max_excess);
    Ok(report)
}
