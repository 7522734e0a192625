//! Local search over outlier labelings, plus an exhaustive solver for small
//! instances.
//!
//! The local search starts from `k` labeled outliers and sweeps over the
//! non-outlier records in index order. For each record it evaluates the swap
//! with every current outlier and performs the best one if it lowers the
//! objective by more than `epsilon`. Sweeps repeat until one completes
//! without a swap.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::{dataset_entropy, SwapDelta, SwapEvaluator};
use crate::error::{Error, Result};
use crate::model::{apply_swap, build_frequency_table, Dataset, FrequencyTable, OutlierLabeling};

pub const DEFAULT_EPSILON: f64 = 1e-12;

/// Largest number of subsets [`exact_solve`] enumerates by default.
pub const DEFAULT_ENUMERATION_CAP: u128 = 2_000_000;

/// How the initial `k` outliers are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum InitStrategy {
    /// Records `0..k`.
    #[default]
    FirstK,
    /// `k` distinct records drawn uniformly with a ChaCha8 generator.
    SeededRandom { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub k: usize,
    #[serde(default)]
    pub init: InitStrategy,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub max_sweeps: Option<usize>,
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

impl SearchConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            init: InitStrategy::FirstK,
            epsilon: DEFAULT_EPSILON,
            max_sweeps: None,
        }
    }

    pub fn with_init(mut self, init: InitStrategy) -> Self {
        self.init = init;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_max_sweeps(mut self, max_sweeps: usize) -> Self {
        self.max_sweeps = Some(max_sweeps);
        self
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.k > n {
            return Err(Error::InvalidK { k: self.k, n });
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidEpsilon(self.epsilon));
        }
        Ok(())
    }

    /// The initial outlier set for a dataset of `n` records.
    pub fn initial_outliers(&self, n: usize) -> Result<Vec<usize>> {
        self.validate(n)?;
        Ok(match self.init {
            InitStrategy::FirstK => (0..self.k).collect(),
            InitStrategy::SeededRandom { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut picked = index::sample(&mut rng, n, self.k).into_vec();
                picked.sort_unstable();
                picked
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// A full sweep made no swap.
    LocalOptimum,
    /// `max_sweeps` sweeps ran and the last one still swapped.
    SweepCap,
    /// Produced by exhaustive enumeration.
    Exhaustive,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub labeling: OutlierLabeling,
    /// Counts over the final non-outliers.
    pub table: FrequencyTable,
    /// The `k` outliers in ascending index order.
    pub outlier_indices: Vec<usize>,
    pub sweeps: usize,
    pub swaps: usize,
    /// Objective after each accepted swap.
    pub objective_trace: Vec<f64>,
    pub termination: Termination,
}

impl SearchResult {
    pub fn objective(&self) -> f64 {
        self.labeling.objective()
    }
}

/// Runs the local search with the initial outliers chosen by `config.init`.
pub fn lsa(dataset: &Dataset, config: &SearchConfig) -> Result<SearchResult> {
    let initial = config.initial_outliers(dataset.n())?;
    lsa_from(dataset, &initial, config)
}

/// Runs the local search from an explicit initial outlier set; `config.init`
/// is ignored and `config.k` must equal `outliers.len()`.
pub fn lsa_from(
    dataset: &Dataset,
    outliers: &[usize],
    config: &SearchConfig,
) -> Result<SearchResult> {
    let n = dataset.n();
    config.validate(n)?;
    if outliers.len() != config.k {
        return Err(Error::LengthMismatch {
            expected: config.k,
            found: outliers.len(),
        });
    }

    let mut labeling = OutlierLabeling::new(n, outliers)?;
    let mut table = build_frequency_table(dataset, &labeling)?;
    labeling.set_objective(dataset_entropy(&table));

    let evaluator = SwapEvaluator::new(table.total());
    let threshold = -config.epsilon;
    let mut sweeps = 0;
    let mut swaps = 0;
    let mut trace = Vec::new();

    let termination = loop {
        if config.max_sweeps.is_some_and(|cap| sweeps >= cap) {
            break Termination::SweepCap;
        }
        sweeps += 1;
        let mut moved = false;
        for t in 0..n {
            if labeling.is_outlier(t) {
                continue;
            }
            let rt = dataset.record(t);
            let mut best: Option<(f64, usize)> = None;
            for &o in labeling.outliers() {
                let d = evaluator.delta(&table, rt, dataset.record(o));
                best = match best {
                    Some((bd, bo)) if bd < d || (bd == d && bo < o) => Some((bd, bo)),
                    _ => Some((d, o)),
                };
            }
            if let Some((delta, o)) = best {
                if delta < threshold {
                    apply_swap(&mut table, &mut labeling, dataset, &SwapDelta { delta, t, o })?;
                    trace.push(labeling.objective());
                    swaps += 1;
                    moved = true;
                }
            }
        }
        if !moved {
            break Termination::LocalOptimum;
        }
    };

    Ok(SearchResult {
        outlier_indices: labeling.outlier_indices(),
        labeling,
        table,
        sweeps,
        swaps,
        objective_trace: trace,
        termination,
    })
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Exhaustively finds a size-`k` outlier set of minimum objective.
pub fn exact_solve(dataset: &Dataset, k: usize) -> Result<SearchResult> {
    exact_solve_with_cap(dataset, k, DEFAULT_ENUMERATION_CAP)
}

/// Like [`exact_solve`], refusing when `C(n, k)` exceeds `cap`.
///
/// Subsets are visited in lexicographic order and a later subset replaces the
/// incumbent only if it is lower by more than [`DEFAULT_EPSILON`], so ties go
/// to the lexicographically smallest set.
pub fn exact_solve_with_cap(dataset: &Dataset, k: usize, cap: u128) -> Result<SearchResult> {
    let n = dataset.n();
    if k > n {
        return Err(Error::InvalidK { k, n });
    }
    let candidates = binomial(n, k);
    if candidates > cap {
        return Err(Error::EnumerationCap { candidates, cap });
    }

    let mut subset: Vec<usize> = (0..k).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        let labeling = OutlierLabeling::new(n, &subset)?;
        let value = dataset_entropy(&build_frequency_table(dataset, &labeling)?);
        if best
            .as_ref()
            .map_or(true, |(b, _)| value < b - DEFAULT_EPSILON)
        {
            best = Some((value, subset.clone()));
        }
        if !next_combination(&mut subset, n) {
            break;
        }
    }

    let (value, outliers) = best.expect("at least one subset is enumerated");
    let mut labeling = OutlierLabeling::new(n, &outliers)?;
    let table = build_frequency_table(dataset, &labeling)?;
    labeling.set_objective(value);
    Ok(SearchResult {
        outlier_indices: outliers,
        labeling,
        table,
        sweeps: 0,
        swaps: 0,
        objective_trace: Vec::new(),
        termination: Termination::Exhaustive,
    })
}

/// Advances `c` to the next k-combination of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..k {
        c[j] = c[j - 1] + 1;
    }
    true
}
