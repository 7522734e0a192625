//! The objective: the sum of per-attribute Shannon entropies (bits) of the
//! non-outlier records, and the O(m) change caused by a single swap.
//!
//! With `N` non-outliers and per-term contribution `f(c) = -(c/N) log2(c/N)`,
//! moving record `t` out and record `o` in changes only the counts of `t_j`
//! (down by one) and `o_j` (up by one) in each attribute `j` where they differ:
//!
//! ```text
//! delta = sum_{j : t_j != o_j} [ f(c[t_j] - 1) - f(c[t_j]) + f(c[o_j] + 1) - f(c[o_j]) ]
//! ```
//!
//! `N` itself stays `n - k` across swaps, which is what makes the update local.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Dataset, FrequencyTable};

/// Entropy change (bits) of exchanging non-outlier `t` with outlier `o`.
/// Negative means the objective improves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwapDelta {
    pub delta: f64,
    pub t: usize,
    pub o: usize,
}

/// `-(c/total) log2(c/total)`, with `0 log 0 = 0`.
#[inline]
pub fn entropy_term(count: u64, total: u64) -> f64 {
    if count == 0 {
        return 0.0;
    }
    let p = count as f64 / total as f64;
    -p * p.log2()
}

/// Entropy in bits of one attribute's value distribution. An empty
/// distribution (`total == 0`) has entropy zero.
pub fn attribute_entropy(counts: &[u64], total: u64) -> Result<f64> {
    let sum: u64 = counts.iter().sum();
    if sum != total {
        return Err(Error::CountMismatch { sum, total });
    }
    Ok(counts.iter().map(|&c| entropy_term(c, total)).sum())
}

/// Objective value of a table: the sum of its attribute entropies.
pub fn dataset_entropy(table: &FrequencyTable) -> f64 {
    let total = table.total();
    (0..table.num_attributes())
        .map(|j| {
            table
                .counts(j)
                .iter()
                .map(|&c| entropy_term(c, total))
                .sum::<f64>()
        })
        .sum()
}

/// Evaluates swapping non-outlier `t` with outlier `o` against `table`
/// without modifying it.
///
/// Fails if one of `t`'s values has count zero, which means `t` is not
/// counted in the table (i.e. is not a non-outlier).
pub fn evaluate_swap(
    table: &FrequencyTable,
    dataset: &Dataset,
    t: usize,
    o: usize,
) -> Result<SwapDelta> {
    let n = dataset.n();
    for index in [t, o] {
        if index >= n {
            return Err(Error::RecordOutOfRange { index, len: n });
        }
    }
    let total = table.total();
    let (rt, ro) = (dataset.record(t), dataset.record(o));
    let mut delta = 0.0;
    for (j, (&a, &b)) in rt.iter().zip(ro).enumerate() {
        let ca = table.count(j, a);
        if ca == 0 {
            return Err(Error::ZeroCount {
                record: t,
                attribute: j,
            });
        }
        if a == b {
            continue;
        }
        let cb = table.count(j, b);
        delta += entropy_term(ca - 1, total) - entropy_term(ca, total)
            + entropy_term(cb + 1, total)
            - entropy_term(cb, total);
    }
    Ok(SwapDelta { delta, t, o })
}

/// Swap evaluation with the `f(c)` terms tabulated once for a fixed total.
///
/// The hot loop of the search performs `k * m` evaluations per visited
/// record; tabulating turns each into four lookups.
#[derive(Debug, Clone)]
pub struct SwapEvaluator {
    terms: Vec<f64>,
}

impl SwapEvaluator {
    pub fn new(total: u64) -> Self {
        Self {
            terms: (0..=total).map(|c| entropy_term(c, total)).collect(),
        }
    }

    pub fn total(&self) -> u64 {
        (self.terms.len() - 1) as u64
    }

    /// Entropy change of moving record `leaving` out of the table and
    /// `entering` into it. The caller guarantees `leaving` is counted.
    #[inline]
    pub fn delta(&self, table: &FrequencyTable, leaving: &[u32], entering: &[u32]) -> f64 {
        let f = &self.terms;
        let mut delta = 0.0;
        for (j, (&a, &b)) in leaving.iter().zip(entering).enumerate() {
            if a != b {
                let ca = table.count(j, a) as usize;
                let cb = table.count(j, b) as usize;
                delta += f[ca - 1] - f[ca] + f[cb + 1] - f[cb];
            }
        }
        delta
    }
}
