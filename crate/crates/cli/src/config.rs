use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use divcover::{extended_instance, paper_instance, parse_graph, Algorithm, Graph, RunConfig};
use serde::Deserialize;

pub const SEED_ENV: &str = "DIVCOVER_SEED";

/// Run configuration as stored on disk.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub algorithm: Algorithm,
    pub k: usize,
    pub mu: usize,
    pub lambda: Option<usize>,
    #[serde(default)]
    pub budget: u64,
    #[serde(default)]
    pub seed: u64,
    pub target_diversity: Option<u64>,
    pub graph_path: String,
}

/// Loads a graph from a file, or `builtin:paper` / `builtin:extended:<m>`.
/// Relative paths resolve against `base`.
pub fn load_graph(spec: &str, base: &Path) -> Result<Graph> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return match name {
            "paper" => Ok(paper_instance()),
            _ => match name.strip_prefix("extended:").map(str::parse::<usize>) {
                Some(Ok(m)) => Ok(extended_instance(m)?),
                _ => bail!(divcover::Error::InvalidArgument(format!(
                    "unknown builtin graph `{spec}`"
                ))),
            },
        };
    }
    let path = base.join(spec);
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Seed from the environment override, if set.
pub fn seed_override() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            divcover::Error::InvalidArgument(format!("{SEED_ENV}=`{v}` is not a u64")).into()
        }),
        Err(_) => Ok(None),
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: ConfigFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let graph = load_graph(&file.graph_path, &base)?;
    let mut cfg = RunConfig::new(Arc::new(graph), file.algorithm, file.k, file.mu);
    cfg.lambda = file.lambda.unwrap_or(file.mu);
    cfg.budget = file.budget;
    cfg.seed = file.seed;
    cfg.target_diversity = file.target_diversity;
    if let Some(seed) = seed_override()? {
        log::info!("{SEED_ENV} overrides the config seed with {seed}");
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}
