mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use divcover::covers::enumerate_covers;
use divcover::diversity::PopulationSummary;
use divcover::harness::{
    asymptotic_note, dominance_report, estimate_success, reference_lines, run_experiment,
    theorem1_p0, write_csv, ExperimentSpec, StartPreset, EXACT_PAPER_INSTANCE_P0,
};
use divcover::landscape::{landscape_report, optimal_diversity, verify_lemmas, OracleLimits};
use divcover::vertex_set::LabeledSet;
use divcover::{run, Error, Population, VertexSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use config::{load_config, load_graph};

const EXIT_VERIFY: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "divcover",
    version,
    about = "Diversity optimization for k-vertex covers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every cover of size at most k as JSON lines.
    Enumerate {
        /// Edge-list file, or builtin:paper / builtin:extended:<m>.
        #[arg(long)]
        graph: String,
        #[arg(long)]
        k: usize,
    },
    /// Re-derive the structural claims about the fixed instances.
    VerifyLemmas,
    /// Exhaustive optimum (and optional local-optimum check) as JSON.
    Oracle {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        mu: usize,
        /// Population member to check, e.g. "{1,2,7,8}". Repeat once per member.
        #[arg(long = "check")]
        check: Vec<String>,
    },
    /// One seeded run; prints the record and the final population.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// auto, lemma3_pair, lemma4 or extended.
        #[arg(long, default_value = "auto")]
        start: StartPreset,
    },
    /// Seeded batch of runs written as CSV.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        trials: usize,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "auto")]
        start: StartPreset,
        /// Reference success probability for the dominance report:
        /// theorem1, exact-paper-instance, or a number.
        #[arg(long)]
        p0: Option<String>,
    },
    /// Monte Carlo frequency of reaching the target in one (1_mu+1_mu) iteration.
    Estimate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value = "lemma3_pair")]
        start: StartPreset,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e
        .chain()
        .find_map(|c| c.downcast_ref::<Error>())
        .map(Error::root)
    {
        Some(Error::Infeasible { .. }) => EXIT_INFEASIBLE,
        Some(Error::OracleBudget { .. }) => EXIT_BUDGET,
        _ => EXIT_INPUT,
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn execute(command: Command) -> Result<u8> {
    match command {
        Command::Enumerate { graph, k } => {
            let g = load_graph(&graph, Path::new(""))?;
            let mut out = BufWriter::new(io::stdout().lock());
            for c in enumerate_covers(&g, k)? {
                serde_json::to_writer(&mut out, &LabeledSet::from(&c))?;
                writeln!(out)?;
            }
            out.flush()?;
            Ok(0)
        }
        Command::VerifyLemmas => {
            let claims = verify_lemmas()?;
            let width = claims.iter().map(|c| c.id.len()).max().unwrap_or(0);
            for c in &claims {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                println!("{tag}  {:width$}  {}  ({})", c.id, c.statement, c.detail);
            }
            let failed = claims.iter().filter(|c| !c.passed).count();
            println!(
                "{} of {} claims passed",
                claims.len() - failed,
                claims.len()
            );
            Ok(if failed == 0 { 0 } else { EXIT_VERIFY })
        }
        Command::Oracle {
            graph,
            k,
            mu,
            check,
        } => {
            let g = load_graph(&graph, Path::new(""))?;
            let population = if check.is_empty() {
                None
            } else {
                let members = check
                    .iter()
                    .map(|m| VertexSet::parse_labels(g.n(), m))
                    .collect::<divcover::Result<Vec<_>>>()?;
                Some(Population::new(members)?)
            };
            let report = landscape_report(
                &graph,
                &g,
                k,
                mu,
                population.as_ref(),
                &OracleLimits::default(),
            )?;
            print_json(&report)?;
            Ok(0)
        }
        Command::Run { config, start } => {
            let cfg = load_config(&config)?;
            let initial = start.population(&cfg)?;
            let (record, population) = run(&cfg, initial)?;
            print_json(&json!({
                "record": record,
                "population": PopulationSummary::from(&population),
            }))?;
            Ok(0)
        }
        Command::Experiment {
            config,
            trials,
            workers,
            out,
            start,
            p0,
        } => {
            let cfg = load_config(&config)?;
            let p0 = p0.map(|s| parse_p0(&s, cfg.k, cfg.mu)).transpose()?;
            let (k, mu, n) = (cfg.k, cfg.mu, cfg.graph.n());
            let spec = ExperimentSpec {
                seed_base: cfg.seed,
                base: cfg,
                trial_count: trials,
                start,
                workers,
            };
            let records = run_experiment(&spec)?;
            let file = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            write_csv(&records, BufWriter::new(file))?;
            let hits: Vec<Option<u64>> = records.iter().map(|r| r.hitting_time).collect();
            let mut summary = json!({
                "trials": records.len(),
                "finite": hits.iter().flatten().count(),
                "out": out.display().to_string(),
            });
            if let Some(p0) = p0 {
                let mut report = dominance_report(&hits, p0)?;
                report.notes.extend(asymptotic_note(k, mu, n));
                summary["dominance"] = serde_json::to_value(&report)?;
                summary["reference_lines"] = serde_json::to_value(reference_lines(k, mu, n))?;
            }
            print_json(&summary)?;
            Ok(0)
        }
        Command::Estimate {
            config,
            samples,
            start,
        } => {
            let cfg = load_config(&config)?;
            let initial = match start.population(&cfg)? {
                Some(p) => p,
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    divcover::algorithms::auto_population(&cfg, &mut rng)?
                }
            };
            let target = match cfg.target_diversity {
                Some(t) => t,
                None => optimal_diversity(&cfg.graph, cfg.k, cfg.mu)?.value,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let est = estimate_success(&cfg.graph, cfg.k, &initial, samples, target, &mut rng)?;
            print_json(&json!({
                "samples": est.samples,
                "successes": est.successes,
                "frequency": est.frequency,
                "target_diversity": target,
                "seed": cfg.seed,
            }))?;
            Ok(0)
        }
    }
}

fn parse_p0(text: &str, k: usize, mu: usize) -> Result<f64> {
    let p = match text {
        "theorem1" => theorem1_p0(k, mu),
        "exact-paper-instance" => EXACT_PAPER_INSTANCE_P0,
        other => other
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("invalid p0 `{other}`")))?,
    };
    Ok(p)
}
