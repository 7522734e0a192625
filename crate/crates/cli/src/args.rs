use std::path::PathBuf;

use catout::ingest::{ColumnRef, IngestSpec, NumericColumns, DEFAULT_BINS};
use catout::{InitStrategy, SearchConfig, SynthSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "catout", version, about = "Entropy-based outlier detection for categorical data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find the k records whose removal minimizes the remaining entropy.
    Detect(DetectArgs),
    /// Solve exactly by enumerating every k-subset (small inputs only).
    Exact(ExactArgs),
    /// Detect outliers and report rare-class coverage at several cutoffs.
    Eval(EvalArgs),
    /// Time the local search over a grid of synthetic dataset sizes.
    Bench(BenchArgs),
    /// Write a synthetic dataset as delimited text.
    Generate(GenerateArgs),
    /// Rerun the command recorded in a manifest and compare outliers.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Init {
    First,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Text,
    Csv,
}

/// Where records come from: a delimited file or the synthetic generator.
#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Delimited input file.
    #[arg(required_unless_present = "synth", conflicts_with = "synth")]
    pub input: Option<PathBuf>,

    /// Generate data instead: ROWS:ATTRS:VALUES:CLASSES.
    #[arg(long, value_parser = parse_synth_shape)]
    pub synth: Option<SynthShape>,

    /// Field delimiter (a single character, `\t` for tab).
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    pub delimiter: u8,

    /// The input has no header row; columns are named c0, c1, ...
    #[arg(long)]
    pub no_header: bool,

    /// Column holding class labels (index or header name).
    #[arg(long)]
    pub label_col: Option<ColumnRef>,

    /// Column to drop, such as a record id. Repeatable.
    #[arg(long = "ignore-col")]
    pub ignore_cols: Vec<ColumnRef>,

    /// Numeric columns to bin: `auto` or a comma-separated column list.
    #[arg(long)]
    pub numeric: Option<String>,

    /// Equal-width bin count for numeric columns.
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,

    /// Raw value treated as missing. Repeatable; defaults to `?` and empty.
    #[arg(long = "missing")]
    pub missing: Vec<String>,

    /// Drop records with any missing attribute value after loading.
    #[arg(long)]
    pub drop_incomplete: bool,

    /// Keep only COUNT seeded-random records of class LABEL: LABEL:COUNT.
    #[arg(long, value_parser = parse_downsample)]
    pub downsample: Option<(String, usize)>,
}

impl SourceArgs {
    pub fn ingest_spec(&self) -> IngestSpec {
        let numeric = match self.numeric.as_deref() {
            None => NumericColumns::None,
            Some("auto") => NumericColumns::Auto,
            Some(list) => NumericColumns::Explicit(
                list.split(',').map(|c| c.trim().parse().unwrap()).collect(),
            ),
        };
        let defaults = IngestSpec::default();
        IngestSpec {
            delimiter: self.delimiter,
            has_header: !self.no_header,
            label_column: self.label_col.clone(),
            ignore_columns: self.ignore_cols.clone(),
            numeric,
            bins: self.bins,
            missing_tokens: if self.missing.is_empty() {
                defaults.missing_tokens
            } else {
                self.missing.clone()
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthShape {
    pub rows: usize,
    pub attributes: usize,
    pub values: usize,
    pub classes: usize,
}

impl SynthShape {
    pub fn with_seed(self, seed: u64) -> SynthSpec {
        SynthSpec {
            rows: self.rows,
            attributes: self.attributes,
            values_per_attribute: self.values,
            classes: self.classes,
            seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Number of outliers to find.
    #[arg(long)]
    pub k: usize,

    /// Initial outliers: the first k records or a seeded random sample.
    #[arg(long, value_enum, default_value_t = Init::First)]
    pub init: Init,

    /// Seed for random initialization, resampling and synthetic data.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// A swap is accepted only if it lowers the objective by more than this.
    #[arg(long, default_value_t = catout::search::DEFAULT_EPSILON)]
    pub epsilon: f64,

    /// Stop after this many sweeps even if not converged.
    #[arg(long)]
    pub max_sweeps: Option<usize>,
}

impl SearchArgs {
    pub fn config(&self) -> SearchConfig {
        let init = match self.init {
            Init::First => InitStrategy::FirstK,
            Init::Random => InitStrategy::SeededRandom { seed: self.seed },
        };
        SearchConfig {
            k: self.k,
            init,
            epsilon: self.epsilon,
            max_sweeps: self.max_sweeps,
        }
    }
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Also write the JSON manifest to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub k: usize,
    /// Seed for resampling and synthetic data.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Refuse when the number of subsets exceeds this.
    #[arg(long, default_value_t = catout::search::DEFAULT_ENUMERATION_CAP)]
    pub cap: u128,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub source: SourceArgs,

    /// Number of outliers to find; defaults to the largest cutoff.
    #[arg(long)]
    pub k: Option<usize>,

    #[arg(long, value_enum, default_value_t = Init::First)]
    pub init: Init,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = catout::search::DEFAULT_EPSILON)]
    pub epsilon: f64,

    #[arg(long)]
    pub max_sweeps: Option<usize>,

    /// Comma-separated class labels counted as rare.
    #[arg(long, required = true, value_delimiter = ',')]
    pub rare_labels: Vec<String>,

    /// Comma-separated top ratios, as fractions (0.05) or percentages (5%).
    #[arg(long, value_delimiter = ',', value_parser = parse_ratio, required_unless_present = "counts")]
    pub ratios: Vec<f64>,

    /// Comma-separated explicit record cutoffs.
    #[arg(long, value_delimiter = ',', conflicts_with = "ratios")]
    pub counts: Vec<usize>,

    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    pub format: TableFormat,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated row counts.
    #[arg(long, value_delimiter = ',', default_value = "25000,50000,100000")]
    pub rows: Vec<usize>,

    /// Comma-separated outlier counts.
    #[arg(long = "k", value_delimiter = ',', default_value = "30")]
    pub ks: Vec<usize>,

    #[arg(long, default_value_t = 10)]
    pub attrs: usize,

    #[arg(long, default_value_t = 10)]
    pub values: usize,

    #[arg(long, default_value_t = 10)]
    pub classes: usize,

    #[arg(long, default_value_t = 5)]
    pub seed: u64,

    /// Timed runs per grid point; the median is reported.
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,

    /// Write the series here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// ROWS:ATTRS:VALUES:CLASSES.
    #[arg(long, value_parser = parse_synth_shape)]
    pub synth: SynthShape,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    pub delimiter: u8,

    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

fn parse_synth_shape(s: &str) -> Result<SynthShape, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 4 {
        return Err("expected ROWS:ATTRS:VALUES:CLASSES".into());
    }
    let nums = parts
        .iter()
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SynthShape {
        rows: nums[0],
        attributes: nums[1],
        values: nums[2],
        classes: nums[3],
    })
}

fn parse_delimiter(s: &str) -> Result<u8, String> {
    match s {
        "\\t" | "tab" => Ok(b'\t'),
        _ if s.len() == 1 => Ok(s.as_bytes()[0]),
        _ => Err("delimiter must be a single ASCII character".into()),
    }
}

fn parse_ratio(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let ratio = match s.strip_suffix('%') {
        Some(p) => p.trim().parse::<f64>().map_err(|e| e.to_string())? / 100.0,
        None => s.parse::<f64>().map_err(|e| e.to_string())?,
    };
    if ratio > 0.0 && ratio <= 1.0 {
        Ok(ratio)
    } else {
        Err(format!("{s} is not a ratio in (0, 1]; use a fraction or a percentage like 5%"))
    }
}

fn parse_downsample(s: &str) -> Result<(String, usize), String> {
    let (label, count) = s.rsplit_once(':').ok_or("expected LABEL:COUNT")?;
    let count = count.parse().map_err(|e| format!("{count:?}: {e}"))?;
    Ok((label.to_owned(), count))
}
