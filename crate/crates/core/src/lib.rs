//! Outlier detection for categorical data by entropy minimization.
//!
//! Given `n` records over `m` categorical attributes and a count `k`, find the
//! `k` records whose removal leaves the remaining records with the smallest
//! total attribute entropy. [`search::lsa`] is a swap-based local search that
//! runs in `O(n k m)` per sweep; [`search::exact_solve`] enumerates every
//! subset and serves as a reference on small inputs.
//!
//! ```
//! use catout::{lsa, Dataset, SearchConfig};
//!
//! let mut rows = vec![vec!["a", "a"]; 6];
//! rows.push(vec!["b", "b"]);
//! let ds = Dataset::from_rows(vec!["x".into(), "y".into()], &rows, None).unwrap();
//! let result = lsa(&ds, &SearchConfig::new(1)).unwrap();
//! assert_eq!(result.outlier_indices, vec![6]);
//! assert_eq!(result.objective(), 0.0);
//! ```

pub mod entropy;
pub mod error;
pub mod eval;
pub mod ingest;
pub mod model;
pub mod search;

pub use entropy::{attribute_entropy, dataset_entropy, evaluate_swap, SwapDelta, SwapEvaluator};
pub use error::{Error, Result};
pub use eval::{coverage_at_counts, coverage_table, rank_outliers, CoverageRow, RareClassSpec};
pub use ingest::{bin_equal_width, generate, load, IngestSpec, SynthSpec, MISSING_TOKEN};
pub use model::{
    apply_swap, build_frequency_table, AttributeSchema, Dataset, FrequencyTable, OutlierLabeling,
};
pub use search::{
    exact_solve, exact_solve_with_cap, lsa, lsa_from, InitStrategy, SearchConfig, SearchResult,
    Termination,
};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
pub struct ReadmeDoctests;
