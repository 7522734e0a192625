//! Rare-class coverage of a ranked outlier list.
//!
//! Records of small ground-truth classes stand in for true outliers. For a
//! cutoff of the top `c` ranked records, coverage is the fraction of all
//! rare-class records that appear among them.

use std::collections::BTreeSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Dataset;
use crate::search::SearchResult;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RareClassSpec {
    rare_labels: BTreeSet<String>,
}

impl RareClassSpec {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let rare_labels: BTreeSet<String> = labels.into_iter().map(Into::into).collect();
        if rare_labels.is_empty() {
            return Err(Error::NoRareLabels);
        }
        Ok(Self { rare_labels })
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.rare_labels.iter().map(String::as_str)
    }

    pub fn is_rare(&self, label: &str) -> bool {
        self.rare_labels.contains(label)
    }

    /// Every rare label must occur in `labels`.
    pub fn validate(&self, labels: &[String]) -> Result<()> {
        let present: BTreeSet<&str> = labels.iter().map(String::as_str).collect();
        match self.labels().find(|l| !present.contains(l)) {
            Some(missing) => Err(Error::UnknownLabel(missing.to_owned())),
            None => Ok(()),
        }
    }

    pub fn count_rare(&self, labels: &[String]) -> usize {
        labels.iter().filter(|l| self.is_rare(l)).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub top_ratio: f64,
    pub top_count: usize,
    pub detected: usize,
    pub total_rare: usize,
    pub coverage: f64,
}

/// Number of records for a top ratio: `ratio * n` rounded half-up, at
/// least one. This reproduces 5% of 148 -> 7 and 10% of 148 -> 15.
pub fn top_count(ratio: f64, n: usize) -> usize {
    ((ratio * n as f64 + 0.5).floor() as usize).max(1)
}

/// Coverage at each top ratio, with cutoffs computed by [`top_count`] over
/// `labels.len()` records.
pub fn coverage_table(
    ranking: &[usize],
    labels: &[String],
    spec: &RareClassSpec,
    ratios: &[f64],
) -> Result<Vec<CoverageRow>> {
    if let Some(&bad) = ratios.iter().find(|r| !(**r > 0.0 && **r <= 1.0)) {
        return Err(Error::InvalidRatio(bad));
    }
    let n = labels.len();
    let counts: Vec<usize> = ratios.iter().map(|&r| top_count(r, n)).collect();
    let mut rows = coverage_at_counts(ranking, labels, spec, &counts)?;
    for (row, &ratio) in rows.iter_mut().zip(ratios) {
        row.top_ratio = ratio;
    }
    Ok(rows)
}

/// Coverage at explicit record cutoffs. A cutoff beyond the ranking's length
/// uses the whole ranking. `top_ratio` is reported as `count / n`.
pub fn coverage_at_counts(
    ranking: &[usize],
    labels: &[String],
    spec: &RareClassSpec,
    counts: &[usize],
) -> Result<Vec<CoverageRow>> {
    spec.validate(labels)?;
    let n = labels.len();
    let mut seen = vec![false; n];
    for &i in ranking {
        if i >= n {
            return Err(Error::RecordOutOfRange { index: i, len: n });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidDataset(format!("record {i} ranked twice")));
        }
    }
    let total_rare = spec.count_rare(labels);
    // detected_prefix[c] = rare records among the first c ranked
    let mut detected_prefix = Vec::with_capacity(ranking.len() + 1);
    detected_prefix.push(0);
    for &i in ranking {
        let last = *detected_prefix.last().unwrap();
        detected_prefix.push(last + usize::from(spec.is_rare(&labels[i])));
    }
    Ok(counts
        .iter()
        .map(|&top| {
            let detected = detected_prefix[top.min(ranking.len())];
            CoverageRow {
                top_ratio: top as f64 / n as f64,
                top_count: top,
                detected,
                total_rare,
                coverage: if total_rare == 0 {
                    0.0
                } else {
                    detected as f64 / total_rare as f64
                },
            }
        })
        .collect())
}

/// Orders the outliers of `result` by how much each would raise the
/// objective if returned to the non-outliers, largest first; ties go to the
/// lower index.
pub fn rank_outliers(result: &SearchResult, dataset: &Dataset) -> Vec<usize> {
    let gains = reinsertion_gains(result, dataset);
    let mut ranked: Vec<(f64, usize)> = gains
        .into_iter()
        .zip(result.outlier_indices.iter().copied())
        .collect();
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    ranked.into_iter().map(|(_, o)| o).collect()
}

/// For each outlier in `result.outlier_indices`, the objective increase
/// from adding it back to the non-outliers.
///
/// Uses `H = log2 N - (1/N) sum c log2 c` per attribute, so only the
/// outlier's own count changes inside the sum.
pub fn reinsertion_gains(result: &SearchResult, dataset: &Dataset) -> Vec<f64> {
    let table = &result.table;
    let total = table.total();
    let g = |c: u64| if c == 0 { 0.0 } else { c as f64 * (c as f64).log2() };
    let sums: Vec<f64> = (0..table.num_attributes())
        .map(|j| table.counts(j).iter().map(|&c| g(c)).sum())
        .collect();
    let before: f64 = if total == 0 {
        0.0
    } else {
        let n = total as f64;
        sums.iter().map(|s| n.log2() - s / n).sum()
    };
    let after_n = (total + 1) as f64;
    result
        .outlier_indices
        .iter()
        .map(|&o| {
            let after: f64 = dataset
                .record(o)
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    let c = table.count(j, v);
                    let s = sums[j] - g(c) + g(c + 1);
                    after_n.log2() - s / after_n
                })
                .sum();
            after - before
        })
        .collect()
}

fn percent(ratio: f64) -> String {
    let s = format!("{:.2}", ratio * 100.0);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    format!("{s}%")
}

/// Plain-text table with one row per cutoff:
/// `Top Ratio (Records) | Detected | Coverage`.
pub fn format_table(rows: &[CoverageRow]) -> String {
    let cells: Vec<[String; 3]> = rows
        .iter()
        .map(|r| {
            [
                format!("{} ({})", percent(r.top_ratio), r.top_count),
                r.detected.to_string(),
                percent(r.coverage),
            ]
        })
        .collect();
    let header = ["Top Ratio (Records)", "Detected", "Coverage"];
    let widths: Vec<usize> = (0..3)
        .map(|c| {
            cells
                .iter()
                .map(|row| row[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap()
        })
        .collect();
    let mut out = String::new();
    let mut line = |cols: [&str; 3]| {
        out.push_str(&format!(
            "{:<w0$}  {:>w1$}  {:>w2$}\n",
            cols[0],
            cols[1],
            cols[2],
            w0 = widths[0],
            w1 = widths[1],
            w2 = widths[2]
        ));
    };
    line(header);
    for row in &cells {
        line([&row[0], &row[1], &row[2]]);
    }
    out
}

pub fn write_csv<W: Write>(rows: &[CoverageRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
