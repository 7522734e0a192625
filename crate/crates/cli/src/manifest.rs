//! The JSON run manifest: what was run, on what data, with which settings,
//! how long each phase took and what came out.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use catout::eval::{rank_outliers, CoverageRow};
use catout::ingest::{downsample_class, drop_incomplete, generate, load, IngestSpec, SynthSpec};
use catout::search::{exact_solve_with_cap, lsa, SearchConfig, SearchResult, Termination};
use catout::Dataset;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Downsample {
    pub label: String,
    pub keep: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Source {
    File {
        path: PathBuf,
        ingest: IngestSpec,
        #[serde(default)]
        drop_incomplete: bool,
        #[serde(default)]
        downsample: Option<Downsample>,
    },
    Synth {
        spec: SynthSpec,
    },
}

impl Source {
    pub fn load(&self) -> catout::Result<Dataset> {
        match self {
            Source::Synth { spec } => generate(spec),
            Source::File {
                path,
                ingest,
                drop_incomplete: drop,
                downsample,
            } => {
                let mut ds = load(path, ingest)?;
                if *drop {
                    ds = drop_incomplete(&ds)?;
                }
                if let Some(d) = downsample {
                    ds = downsample_class(&ds, &d.label, d.keep, d.seed)?;
                }
                Ok(ds)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    LocalSearch,
    Exhaustive { cap: u128 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub load_secs: f64,
    pub search_secs: f64,
    pub rank_secs: f64,
    pub total_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub records: usize,
    pub attributes: usize,
    pub objective_bits: f64,
    pub sweeps: usize,
    pub swaps: usize,
    pub termination: Termination,
    /// Ascending record indices.
    pub outliers: Vec<usize>,
    /// Most outlying first.
    pub ranked: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub rare_labels: Vec<String>,
    pub total_rare: usize,
    pub rows: Vec<CoverageRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub source: Source,
    pub solver: Solver,
    pub config: SearchConfig,
    pub timing: Timing,
    pub result: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coverage: Option<Coverage>,
}

/// A finished run: the raw search result and its manifest.
pub struct Run {
    pub result: SearchResult,
    pub manifest: RunManifest,
}

/// Loads the source, solves, ranks, and records everything in a manifest.
pub fn execute(
    command: &str,
    source: Source,
    solver: Solver,
    config: SearchConfig,
) -> catout::Result<Run> {
    let started = Instant::now();
    let dataset = source.load()?;
    solve(command, source, dataset, started.elapsed(), solver, config)
}

/// Like [`execute`] for a dataset already loaded from `source`.
pub fn solve(
    command: &str,
    source: Source,
    dataset: Dataset,
    load_time: Duration,
    solver: Solver,
    config: SearchConfig,
) -> catout::Result<Run> {
    let loaded = Instant::now();
    let result = match solver {
        Solver::LocalSearch => lsa(&dataset, &config)?,
        Solver::Exhaustive { cap } => exact_solve_with_cap(&dataset, config.k, cap)?,
    };
    let searched = Instant::now();
    let ranked = rank_outliers(&result, &dataset);
    let done = Instant::now();

    let manifest = RunManifest {
        command: command.to_owned(),
        source,
        solver,
        config,
        timing: Timing {
            load_secs: load_time.as_secs_f64(),
            search_secs: (searched - loaded).as_secs_f64(),
            rank_secs: (done - searched).as_secs_f64(),
            total_secs: (load_time + (done - loaded)).as_secs_f64(),
        },
        result: Summary {
            records: dataset.n(),
            attributes: dataset.m(),
            objective_bits: result.objective(),
            sweeps: result.sweeps,
            swaps: result.swaps,
            termination: result.termination,
            outliers: result.outlier_indices.clone(),
            ranked,
        },
        coverage: None,
    };
    Ok(Run { result, manifest })
}
