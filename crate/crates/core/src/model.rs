//! Dataset, search-state and frequency-table types shared by every stage.
//!
//! Records are stored column-coded: each attribute keeps its domain as an
//! ordered list of tokens, and a record holds one `u32` code per attribute.
//! Codes are dense, so a [`FrequencyTable`] is a vector of count vectors and a
//! lookup is a single index operation.

use std::collections::HashMap;

use crate::entropy::SwapDelta;
use crate::error::{Error, Result};

/// Name and value domain of one categorical attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSchema {
    name: String,
    domain: Vec<String>,
}

impl AttributeSchema {
    pub fn new(name: impl Into<String>, domain: Vec<String>) -> Result<Self> {
        let name = name.into();
        let mut seen = HashMap::with_capacity(domain.len());
        for token in &domain {
            if seen.insert(token.as_str(), ()).is_some() {
                return Err(Error::InvalidDataset(format!(
                    "duplicate token {token:?} in domain of {name:?}"
                )));
            }
        }
        Ok(Self { name, domain })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Distinct tokens, in first-seen order. A code is an index into this slice.
    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn token(&self, code: u32) -> &str {
        &self.domain[code as usize]
    }

    pub fn code_of(&self, token: &str) -> Option<u32> {
        self.domain.iter().position(|t| t == token).map(|p| p as u32)
    }
}

/// An immutable table of `n` records over `m` categorical attributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    schema: Vec<AttributeSchema>,
    codes: Vec<u32>,
    labels: Option<Vec<String>>,
}

impl Dataset {
    /// Builds a dataset from string tokens. Attribute domains are collected in
    /// first-seen order.
    pub fn from_rows<S: AsRef<str>>(
        names: Vec<String>,
        rows: &[Vec<S>],
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let m = names.len();
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if m == 0 {
            return Err(Error::InvalidDataset("no attributes".into()));
        }
        let mut lookups: Vec<HashMap<&str, u32>> = vec![HashMap::new(); m];
        let mut domains: Vec<Vec<String>> = vec![Vec::new(); m];
        let mut codes = Vec::with_capacity(rows.len() * m);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::RaggedRow {
                    row: i,
                    expected: m,
                    found: row.len(),
                });
            }
            for (j, token) in row.iter().enumerate() {
                let token = token.as_ref();
                let next = domains[j].len() as u32;
                let code = *lookups[j].entry(token).or_insert_with(|| {
                    domains[j].push(token.to_owned());
                    next
                });
                codes.push(code);
            }
        }
        let schema = names
            .into_iter()
            .zip(domains)
            .map(|(name, domain)| AttributeSchema { name, domain })
            .collect();
        Self::from_parts(schema, codes, labels)
    }

    /// Assembles a dataset from an explicit schema and row-major codes.
    pub fn from_parts(
        schema: Vec<AttributeSchema>,
        codes: Vec<u32>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let m = schema.len();
        if m == 0 {
            return Err(Error::InvalidDataset("no attributes".into()));
        }
        if codes.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if codes.len() % m != 0 {
            return Err(Error::InvalidDataset(format!(
                "{} codes do not divide into records of {m} attributes",
                codes.len()
            )));
        }
        let n = codes.len() / m;
        for (pos, &code) in codes.iter().enumerate() {
            let attr = &schema[pos % m];
            if code as usize >= attr.domain.len() {
                return Err(Error::InvalidDataset(format!(
                    "record {} has code {code} outside the domain of {:?}",
                    pos / m,
                    attr.name
                )));
            }
        }
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: labels.len(),
                });
            }
        }
        Ok(Self {
            schema,
            codes,
            labels,
        })
    }

    /// Number of records.
    pub fn n(&self) -> usize {
        self.codes.len() / self.schema.len()
    }

    /// Number of attributes.
    pub fn m(&self) -> usize {
        self.schema.len()
    }

    pub fn schema(&self) -> &[AttributeSchema] {
        &self.schema
    }

    pub fn record(&self, index: usize) -> &[u32] {
        let m = self.m();
        &self.codes[index * m..(index + 1) * m]
    }

    pub fn records(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.codes.chunks_exact(self.m())
    }

    pub fn value(&self, record: usize, attribute: usize) -> &str {
        self.schema[attribute].token(self.record(record)[attribute])
    }

    pub fn row_tokens(&self, record: usize) -> Vec<&str> {
        (0..self.m()).map(|j| self.value(record, j)).collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Option<Vec<String>>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != self.n() {
                return Err(Error::LengthMismatch {
                    expected: self.n(),
                    found: l.len(),
                });
            }
        }
        self.labels = labels;
        Ok(self)
    }

    /// Copies the given records, in the given order, into a new dataset whose
    /// domains contain only the tokens that still occur.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let n = self.n();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::RecordOutOfRange { index: bad, len: n });
        }
        let names = self.schema.iter().map(|a| a.name.clone()).collect();
        let rows: Vec<Vec<&str>> = indices.iter().map(|&i| self.row_tokens(i)).collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| indices.iter().map(|&i| l[i].clone()).collect());
        Self::from_rows(names, &rows, labels)
    }
}

/// Per-attribute value counts over the records currently labeled non-outlier.
///
/// Values whose count drops to zero stay in the table, so the set of keys is
/// always the full attribute domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: Vec<Vec<u64>>,
    total: u64,
}

impl FrequencyTable {
    /// An all-zero table shaped after `dataset`'s domains.
    pub fn empty(dataset: &Dataset) -> Self {
        Self {
            counts: dataset
                .schema()
                .iter()
                .map(|a| vec![0; a.domain().len()])
                .collect(),
            total: 0,
        }
    }

    /// Counts every record of `dataset`.
    pub fn full(dataset: &Dataset) -> Self {
        let mut table = Self::empty(dataset);
        for record in dataset.records() {
            table.add(record);
        }
        table
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn num_attributes(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, attribute: usize, code: u32) -> u64 {
        self.counts[attribute][code as usize]
    }

    pub fn counts(&self, attribute: usize) -> &[u64] {
        &self.counts[attribute]
    }

    pub fn add(&mut self, record: &[u32]) {
        for (column, &code) in self.counts.iter_mut().zip(record) {
            column[code as usize] += 1;
        }
        self.total += 1;
    }

    /// Panics if any of the record's values has count zero.
    pub fn remove(&mut self, record: &[u32]) {
        for (column, &code) in self.counts.iter_mut().zip(record) {
            let c = &mut column[code as usize];
            *c = c.checked_sub(1).expect("removing an uncounted value");
        }
        self.total -= 1;
    }

    /// Moves one record out of the table and another in; `total` is unchanged.
    fn exchange(&mut self, leaving: &[u32], entering: &[u32]) {
        for ((column, &out), &inn) in self.counts.iter_mut().zip(leaving).zip(entering) {
            if out != inn {
                column[out as usize] -= 1;
                column[inn as usize] += 1;
            }
        }
    }
}

/// The outlier/non-outlier partition maintained during search, together with
/// the objective `E(D - O)` in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct OutlierLabeling {
    flags: Vec<bool>,
    outliers: Vec<usize>,
    objective: f64,
}

impl OutlierLabeling {
    /// Labels `outliers` as outliers among `n` records. The objective starts at
    /// zero; callers set it once the frequency table exists.
    pub fn new(n: usize, outliers: &[usize]) -> Result<Self> {
        let mut flags = vec![false; n];
        for &o in outliers {
            if o >= n {
                return Err(Error::RecordOutOfRange { index: o, len: n });
            }
            if std::mem::replace(&mut flags[o], true) {
                return Err(Error::InvalidDataset(format!(
                    "record {o} listed twice as an outlier"
                )));
            }
        }
        Ok(Self {
            flags,
            outliers: outliers.to_vec(),
            objective: 0.0,
        })
    }

    pub fn n(&self) -> usize {
        self.flags.len()
    }

    pub fn k(&self) -> usize {
        self.outliers.len()
    }

    pub fn is_outlier(&self, index: usize) -> bool {
        self.flags[index]
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    /// Current outliers in slot order (the order swaps have left them in).
    pub fn outliers(&self) -> &[usize] {
        &self.outliers
    }

    /// Current outliers in ascending index order.
    pub fn outlier_indices(&self) -> Vec<usize> {
        let mut v = self.outliers.clone();
        v.sort_unstable();
        v
    }

    pub fn objective(&self) -> f64 {
        self.objective
    }

    pub fn set_objective(&mut self, objective: f64) {
        self.objective = objective;
    }
}

/// Counts the attribute values of every non-outlier record.
pub fn build_frequency_table(
    dataset: &Dataset,
    labeling: &OutlierLabeling,
) -> Result<FrequencyTable> {
    if labeling.n() != dataset.n() {
        return Err(Error::LengthMismatch {
            expected: dataset.n(),
            found: labeling.n(),
        });
    }
    let mut table = FrequencyTable::empty(dataset);
    for (record, &flag) in dataset.records().zip(labeling.flags()) {
        if !flag {
            table.add(record);
        }
    }
    Ok(table)
}

/// Relabels `swap.t` as an outlier and `swap.o` as a non-outlier, updating
/// the counts and adding `swap.delta` to the objective.
pub fn apply_swap(
    table: &mut FrequencyTable,
    labeling: &mut OutlierLabeling,
    dataset: &Dataset,
    swap: &SwapDelta,
) -> Result<()> {
    let (t, o) = (swap.t, swap.o);
    let n = labeling.n();
    for index in [t, o] {
        if index >= n {
            return Err(Error::RecordOutOfRange { index, len: n });
        }
    }
    if labeling.flags[t] {
        return Err(Error::SwapContract {
            t,
            o,
            reason: "t is already an outlier",
        });
    }
    if !labeling.flags[o] {
        return Err(Error::SwapContract {
            t,
            o,
            reason: "o is not an outlier",
        });
    }
    let slot = labeling
        .outliers
        .iter()
        .position(|&x| x == o)
        .expect("flagged outlier missing from outlier list");
    table.exchange(dataset.record(t), dataset.record(o));
    labeling.outliers[slot] = t;
    labeling.flags[t] = true;
    labeling.flags[o] = false;
    labeling.objective += swap.delta;
    Ok(())
}
