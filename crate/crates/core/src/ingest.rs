//! Loading delimited text into a [`Dataset`], equal-width binning of numeric
//! columns, and a seeded generator of clustered categorical data.
//!
//! Every value that reaches a [`Dataset`] is a token. Missing raw values become
//! [`MISSING_TOKEN`] and count as an ordinary category. Raw categorical values
//! that could be confused with it are escaped by prefixing a backslash:
//! a raw value is escaped when it equals `MISSING_TOKEN` or starts with `\`.

use std::borrow::Cow;
use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AttributeSchema, Dataset};

/// Token standing for a missing value.
pub const MISSING_TOKEN: &str = "«missing»";

pub const DEFAULT_BINS: usize = 10;

/// Probability that a synthetic value is its cluster's dominant value.
pub const DOMINANT_PROBABILITY: f64 = 0.8;

pub fn escape_token(raw: &str) -> Cow<'_, str> {
    if raw == MISSING_TOKEN || raw.starts_with('\\') {
        Cow::Owned(format!("\\{raw}"))
    } else {
        Cow::Borrowed(raw)
    }
}

/// Inverse of [`escape_token`]; `None` for the missing token.
pub fn unescape_token(token: &str) -> Option<&str> {
    if token == MISSING_TOKEN {
        None
    } else {
        Some(token.strip_prefix('\\').unwrap_or(token))
    }
}

pub fn bin_token(index: usize) -> String {
    format!("bin{index}")
}

/// A column addressed by zero-based position or by header name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColumnRef {
    Index(usize),
    Name(String),
}

impl FromStr for ColumnRef {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnRef::Index(i),
            Err(_) => ColumnRef::Name(s.to_owned()),
        })
    }
}

impl fmt::Display for ColumnRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnRef::Index(i) => write!(f, "{i}"),
            ColumnRef::Name(n) => f.write_str(n),
        }
    }
}

impl ColumnRef {
    fn resolve(&self, names: &[String]) -> Result<usize> {
        match self {
            ColumnRef::Index(i) if *i < names.len() => Ok(*i),
            ColumnRef::Index(i) => Err(Error::ColumnNotFound(i.to_string())),
            ColumnRef::Name(n) => names
                .iter()
                .position(|c| c == n)
                .ok_or_else(|| Error::ColumnNotFound(n.clone())),
        }
    }
}

/// Which columns are numeric and need binning.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NumericColumns {
    /// Every column is categorical.
    #[default]
    None,
    /// A column is numeric when all its non-missing values parse as finite
    /// numbers.
    Auto,
    Explicit(Vec<ColumnRef>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestSpec {
    pub delimiter: u8,
    pub has_header: bool,
    pub label_column: Option<ColumnRef>,
    /// Columns dropped entirely, such as record identifiers.
    pub ignore_columns: Vec<ColumnRef>,
    pub numeric: NumericColumns,
    pub bins: usize,
    pub missing_tokens: Vec<String>,
}

impl Default for IngestSpec {
    fn default() -> Self {
        Self {
            delimiter: b',',
            has_header: true,
            label_column: None,
            ignore_columns: Vec::new(),
            numeric: NumericColumns::None,
            bins: DEFAULT_BINS,
            missing_tokens: vec!["?".into(), String::new()],
        }
    }
}

pub fn load(path: impl AsRef<Path>, spec: &IngestSpec) -> Result<Dataset> {
    let file = std::fs::File::open(path)?;
    parse(file, spec)
}

/// Parses delimited text. Row numbers in errors are 1-based line numbers.
pub fn parse<R: Read>(reader: R, spec: &IngestSpec) -> Result<Dataset> {
    if spec.bins == 0 {
        return Err(Error::ZeroBins);
    }
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut header: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut lines: Vec<u64> = Vec::new();
    let mut width: Option<usize> = None;
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        // skip blank lines
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let fields: Vec<String> = record.iter().map(str::to_owned).collect();
        match width {
            None => width = Some(fields.len()),
            Some(w) if w != fields.len() => {
                return Err(Error::RaggedRow {
                    row: line as usize,
                    expected: w,
                    found: fields.len(),
                })
            }
            _ => {}
        }
        if spec.has_header && header.is_none() {
            header = Some(fields);
        } else {
            rows.push(fields);
            lines.push(line);
        }
    }
    let width = match width {
        Some(w) if !rows.is_empty() => w,
        _ => return Err(Error::EmptyInput),
    };
    let names = header.unwrap_or_else(|| (0..width).map(|i| format!("c{i}")).collect());

    let label_idx = spec
        .label_column
        .as_ref()
        .map(|c| c.resolve(&names))
        .transpose()?;
    let mut skipped: HashSet<usize> = spec
        .ignore_columns
        .iter()
        .map(|c| c.resolve(&names))
        .collect::<Result<_>>()?;
    skipped.extend(label_idx);
    let attr_cols: Vec<usize> = (0..width).filter(|c| !skipped.contains(c)).collect();
    if attr_cols.is_empty() {
        return Err(Error::InvalidDataset("no attribute columns remain".into()));
    }

    let is_missing = |raw: &str| spec.missing_tokens.iter().any(|m| m == raw);
    let numeric: HashSet<usize> = match &spec.numeric {
        NumericColumns::None => HashSet::new(),
        NumericColumns::Explicit(cols) => cols
            .iter()
            .map(|c| c.resolve(&names))
            .collect::<Result<_>>()?,
        NumericColumns::Auto => attr_cols
            .iter()
            .copied()
            .filter(|&c| {
                let mut present = rows.iter().map(|r| r[c].as_str()).filter(|v| !is_missing(v));
                let mut any = false;
                let all = present.all(|v| {
                    any = true;
                    parse_number(v).is_some()
                });
                any && all
            })
            .collect(),
    };

    let mut columns: Vec<Vec<String>> = Vec::with_capacity(attr_cols.len());
    for &c in &attr_cols {
        if numeric.contains(&c) {
            let mut values = Vec::with_capacity(rows.len());
            for (row, &line) in rows.iter().zip(&lines) {
                let raw = row[c].as_str();
                if is_missing(raw) {
                    values.push(None);
                } else {
                    let x = parse_number(raw).ok_or_else(|| Error::NonNumeric {
                        row: line as usize,
                        column: names[c].clone(),
                        value: raw.to_owned(),
                    })?;
                    values.push(Some(x));
                }
            }
            columns.push(bin_equal_width(&values, spec.bins)?);
        } else {
            columns.push(
                rows.iter()
                    .map(|r| {
                        let raw = r[c].as_str();
                        if is_missing(raw) {
                            MISSING_TOKEN.to_owned()
                        } else {
                            escape_token(raw).into_owned()
                        }
                    })
                    .collect(),
            );
        }
    }

    let table: Vec<Vec<&str>> = (0..rows.len())
        .map(|i| columns.iter().map(|col| col[i].as_str()).collect())
        .collect();
    let labels = label_idx.map(|l| rows.iter().map(|r| r[l].clone()).collect());
    let attr_names = attr_cols.iter().map(|&c| names[c].clone()).collect();
    Dataset::from_rows(attr_names, &table, labels)
}

fn parse_number(raw: &str) -> Option<f64> {
    raw.parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Equal-width discretization into `bins` intervals over `[min, max]` of the
/// present values: `index = floor((x - min) / width)` clamped to
/// `[0, bins - 1]`, so the maximum lands in the top bin. A zero range puts
/// everything in `bin0`; `None` entries become [`MISSING_TOKEN`].
pub fn bin_equal_width(values: &[Option<f64>], bins: usize) -> Result<Vec<String>> {
    if bins == 0 {
        return Err(Error::ZeroBins);
    }
    let (min, max) = values
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    let width = (max - min) / bins as f64;
    Ok(values
        .iter()
        .map(|v| match v {
            None => MISSING_TOKEN.to_owned(),
            Some(x) => {
                let index = if width > 0.0 {
                    (((x - min) / width).floor() as usize).min(bins - 1)
                } else {
                    0
                };
                bin_token(index)
            }
        })
        .collect())
}

/// Writes `dataset` as delimited text with a header row and the labels, if
/// any, in a final `class` column. Tokens are unescaped and missing values
/// written as `?`, so [`parse`] with the default spec (plus the label column)
/// reads the same dataset back.
pub fn write_delimited<W: Write>(dataset: &Dataset, writer: W, delimiter: u8) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_writer(writer);
    let mut header: Vec<&str> = dataset.schema().iter().map(|a| a.name()).collect();
    if dataset.labels().is_some() {
        header.push("class");
    }
    w.write_record(&header)?;
    for i in 0..dataset.n() {
        let mut row: Vec<&str> = dataset
            .row_tokens(i)
            .into_iter()
            .map(|t| unescape_token(t).unwrap_or("?"))
            .collect();
        if let Some(labels) = dataset.labels() {
            row.push(&labels[i]);
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Keeps only the records without a missing value in any attribute.
pub fn drop_incomplete(dataset: &Dataset) -> Result<Dataset> {
    let keep: Vec<usize> = (0..dataset.n())
        .filter(|&i| dataset.row_tokens(i).iter().all(|&t| t != MISSING_TOKEN))
        .collect();
    if keep.is_empty() {
        return Err(Error::EmptyDataset);
    }
    dataset.select(&keep)
}

/// Keeps a seeded uniform sample of `keep` records of class `label` and
/// every record of other classes, preserving the original record order.
pub fn downsample_class(dataset: &Dataset, label: &str, keep: usize, seed: u64) -> Result<Dataset> {
    let labels = dataset.labels().ok_or(Error::MissingLabels)?;
    let members: Vec<usize> = (0..dataset.n()).filter(|&i| labels[i] == label).collect();
    if members.is_empty() {
        return Err(Error::UnknownLabel(label.to_owned()));
    }
    if keep > members.len() {
        return Err(Error::NotEnoughRecords {
            label: label.to_owned(),
            keep,
            available: members.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen: HashSet<usize> = rand::seq::index::sample(&mut rng, members.len(), keep)
        .into_iter()
        .map(|p| members[p])
        .collect();
    let indices: Vec<usize> = (0..dataset.n())
        .filter(|&i| labels[i] != label || chosen.contains(&i))
        .collect();
    dataset.select(&indices)
}

/// Shape and seed of a synthetic dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub rows: usize,
    pub attributes: usize,
    pub values_per_attribute: usize,
    pub classes: usize,
    pub seed: u64,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 {
            return Err(Error::InvalidSynthSpec("rows must be at least 1"));
        }
        if self.attributes == 0 {
            return Err(Error::InvalidSynthSpec("attributes must be at least 1"));
        }
        if self.values_per_attribute == 0 {
            return Err(Error::InvalidSynthSpec("values per attribute must be at least 1"));
        }
        if self.classes == 0 {
            return Err(Error::InvalidSynthSpec("classes must be at least 1"));
        }
        Ok(())
    }
}

/// Clustered categorical data: each record belongs to a uniformly drawn
/// cluster; per (cluster, attribute) one value is dominant with probability
/// [`DOMINANT_PROBABILITY`] and the other values share the rest uniformly.
/// Attributes are named `a0..`, values `v0..`, labels `c0..`.
pub fn generate(spec: &SynthSpec) -> Result<Dataset> {
    spec.validate()?;
    let SynthSpec {
        rows,
        attributes: m,
        values_per_attribute: p,
        classes,
        seed,
    } = *spec;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dominant: Vec<Vec<u32>> = (0..classes)
        .map(|_| (0..m).map(|_| rng.gen_range(0..p) as u32).collect())
        .collect();

    let mut codes = Vec::with_capacity(rows * m);
    let mut labels = Vec::with_capacity(rows);
    for _ in 0..rows {
        let cluster = rng.gen_range(0..classes);
        for &dom in &dominant[cluster] {
            let code = if p == 1 || rng.gen_bool(DOMINANT_PROBABILITY) {
                dom
            } else {
                let r = rng.gen_range(0..p as u32 - 1);
                if r >= dom {
                    r + 1
                } else {
                    r
                }
            };
            codes.push(code);
        }
        labels.push(format!("c{cluster}"));
    }

    let domain: Vec<String> = (0..p).map(|v| format!("v{v}")).collect();
    let schema = (0..m)
        .map(|j| AttributeSchema::new(format!("a{j}"), domain.clone()))
        .collect::<Result<_>>()?;
    Dataset::from_parts(schema, codes, Some(labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::dataset_entropy;
    use crate::model::FrequencyTable;
    use proptest::prelude::*;

    fn bins(values: &[f64], n: usize) -> Vec<String> {
        let v: Vec<Option<f64>> = values.iter().copied().map(Some).collect();
        bin_equal_width(&v, n).unwrap()
    }

    #[test]
    fn zero_range_goes_to_first_bin() {
        assert_eq!(bins(&[1.0, 1.0, 1.0], 4), ["bin0", "bin0", "bin0"]);
    }

    #[test]
    fn endpoints_split() {
        assert_eq!(bins(&[0.0, 10.0], 2), ["bin0", "bin1"]);
    }

    #[test]
    fn quarter_steps_clamp_the_maximum() {
        assert_eq!(
            bins(&[0.0, 2.5, 5.0, 7.5, 10.0], 4),
            ["bin0", "bin1", "bin2", "bin3", "bin3"]
        );
    }

    #[test]
    fn midpoint_lands_in_upper_bin() {
        assert_eq!(bins(&[0.0, 5.0, 10.0], 2), ["bin0", "bin1", "bin1"]);
    }

    #[test]
    fn all_missing_column() {
        assert_eq!(
            bin_equal_width(&[None, None], 3).unwrap(),
            [MISSING_TOKEN, MISSING_TOKEN]
        );
    }

    #[test]
    fn missing_is_excluded_from_range() {
        let out = bin_equal_width(&[Some(0.0), None, Some(4.0), Some(2.0)], 2).unwrap();
        assert_eq!(out, ["bin0", MISSING_TOKEN, "bin1", "bin1"]);
    }

    #[test]
    fn zero_bins_rejected() {
        assert!(matches!(bin_equal_width(&[Some(1.0)], 0), Err(Error::ZeroBins)));
    }

    #[test]
    fn escaping_is_injective_and_avoids_missing() {
        let raws = ["a", "\\a", "\\\\a", MISSING_TOKEN, "\\«missing»", ""];
        let escaped: HashSet<String> = raws.iter().map(|r| escape_token(r).into_owned()).collect();
        assert_eq!(escaped.len(), raws.len());
        assert!(!escaped.contains(MISSING_TOKEN));
        for r in raws {
            assert_eq!(unescape_token(&escape_token(r)), Some(r));
        }
        assert_eq!(unescape_token(MISSING_TOKEN), None);
    }

    #[test]
    fn categorical_passthrough() {
        let text = "color,shape\nred,round\nblue,round\nred,square\n";
        let ds = parse(text.as_bytes(), &IngestSpec::default()).unwrap();
        assert_eq!((ds.n(), ds.m()), (3, 2));
        assert_eq!(ds.schema()[0].name(), "color");
        assert_eq!(ds.schema()[0].domain(), ["red", "blue"]);
        assert_eq!(ds.schema()[1].domain(), ["round", "square"]);
        assert!(ds.labels().is_none());
    }

    #[test]
    fn question_mark_becomes_missing_category() {
        let text = "a,b\nx,?\ny,z\n?,z\n";
        let ds = parse(text.as_bytes(), &IngestSpec::default()).unwrap();
        assert_eq!(ds.value(0, 1), MISSING_TOKEN);
        assert_eq!(ds.value(2, 0), MISSING_TOKEN);
        let table = FrequencyTable::full(&ds);
        let code = ds.schema()[1].code_of(MISSING_TOKEN).unwrap();
        assert_eq!(table.count(1, code), 1);
    }

    #[test]
    fn raw_missing_lookalike_is_escaped() {
        let text = format!("a\n{MISSING_TOKEN}\n?\n");
        let ds = parse(text.as_bytes(), &IngestSpec::default()).unwrap();
        assert_ne!(ds.value(0, 0), ds.value(1, 0));
        assert_eq!(ds.value(1, 0), MISSING_TOKEN);
    }

    #[test]
    fn numeric_column_is_binned() {
        let spec = IngestSpec {
            numeric: NumericColumns::Explicit(vec![ColumnRef::Name("x".into())]),
            bins: 2,
            ..IngestSpec::default()
        };
        let ds = parse("x,y\n0,a\n5,b\n10,a\n".as_bytes(), &spec).unwrap();
        assert_eq!(ds.row_tokens(0)[0], "bin0");
        assert_eq!(ds.row_tokens(1)[0], "bin1");
        assert_eq!(ds.row_tokens(2)[0], "bin1");
    }

    #[test]
    fn auto_detects_numeric_columns() {
        let spec = IngestSpec {
            numeric: NumericColumns::Auto,
            bins: 2,
            ..IngestSpec::default()
        };
        let ds = parse("x,y\n0,a\n?,1\n10,b\n".as_bytes(), &spec).unwrap();
        assert_eq!(ds.schema()[0].domain(), ["bin0", MISSING_TOKEN, "bin1"]);
        assert_eq!(ds.schema()[1].domain(), ["a", "1", "b"]);
    }

    #[test]
    fn non_numeric_value_reports_location() {
        let spec = IngestSpec {
            numeric: NumericColumns::Explicit(vec![ColumnRef::Index(0)]),
            ..IngestSpec::default()
        };
        let err = parse("x\n1\nabc\n".as_bytes(), &spec).unwrap_err();
        match err {
            Error::NonNumeric { row, column, value } => {
                assert_eq!((row, column.as_str(), value.as_str()), (3, "x", "abc"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ragged_row_reports_line() {
        let err = parse("a,b\n1,2\n3\n".as_bytes(), &IngestSpec::default()).unwrap_err();
        assert!(matches!(err, Error::RaggedRow { row: 3, expected: 2, found: 1 }));
    }

    #[test]
    fn empty_inputs() {
        assert!(matches!(parse("".as_bytes(), &IngestSpec::default()), Err(Error::EmptyInput)));
        assert!(matches!(parse("a,b\n".as_bytes(), &IngestSpec::default()), Err(Error::EmptyInput)));
    }

    #[test]
    fn label_and_ignored_columns() {
        let spec = IngestSpec {
            has_header: false,
            label_column: Some(ColumnRef::Index(3)),
            ignore_columns: vec![ColumnRef::Index(0)],
            ..IngestSpec::default()
        };
        let ds = parse("101,a,x,2\n102,b,x,4\n".as_bytes(), &spec).unwrap();
        assert_eq!(ds.m(), 2);
        assert_eq!(ds.schema()[0].name(), "c1");
        assert_eq!(ds.labels().unwrap(), ["2", "4"]);
    }

    #[test]
    fn unknown_column_is_reported() {
        let spec = IngestSpec {
            label_column: Some(ColumnRef::Name("nope".into())),
            ..IngestSpec::default()
        };
        assert!(matches!(
            parse("a\nx\n".as_bytes(), &spec),
            Err(Error::ColumnNotFound(_))
        ));
    }

    #[test]
    fn alternative_delimiter() {
        let spec = IngestSpec {
            delimiter: b'\t',
            ..IngestSpec::default()
        };
        let ds = parse("a\tb\nx y\tz\n".as_bytes(), &spec).unwrap();
        assert_eq!(ds.value(0, 0), "x y");
    }

    #[test]
    fn generator_shapes() {
        let spec = SynthSpec {
            rows: 500,
            attributes: 4,
            values_per_attribute: 6,
            classes: 3,
            seed: 1,
        };
        let ds = generate(&spec).unwrap();
        assert_eq!((ds.n(), ds.m()), (500, 4));
        assert_eq!(ds.labels().unwrap().len(), 500);
        assert_eq!(generate(&spec).unwrap(), ds);
        let other = generate(&SynthSpec { seed: 2, ..spec }).unwrap();
        assert_ne!(other, ds);
    }

    #[test]
    fn generator_handles_benchmark_scale_dimensions() {
        let ds = generate(&SynthSpec {
            rows: 100_000,
            attributes: 10,
            values_per_attribute: 10,
            classes: 10,
            seed: 5,
        })
        .unwrap();
        assert_eq!((ds.n(), ds.m()), (100_000, 10));
    }

    #[test]
    fn degenerate_generator_has_zero_entropy() {
        let ds = generate(&SynthSpec {
            rows: 50,
            attributes: 3,
            values_per_attribute: 1,
            classes: 1,
            seed: 8,
        })
        .unwrap();
        assert!(ds.records().all(|r| r == ds.record(0)));
        assert_eq!(dataset_entropy(&FrequencyTable::full(&ds)), 0.0);
    }

    #[test]
    fn generator_dominance_is_about_right() {
        let ds = generate(&SynthSpec {
            rows: 20_000,
            attributes: 1,
            values_per_attribute: 5,
            classes: 1,
            seed: 3,
        })
        .unwrap();
        let table = FrequencyTable::full(&ds);
        let top = *table.counts(0).iter().max().unwrap() as f64 / 20_000.0;
        assert!((top - DOMINANT_PROBABILITY).abs() < 0.02, "dominant share {top}");
    }

    #[test]
    fn invalid_synth_specs() {
        let ok = SynthSpec {
            rows: 1,
            attributes: 1,
            values_per_attribute: 1,
            classes: 1,
            seed: 0,
        };
        assert!(generate(&ok).is_ok());
        assert!(generate(&SynthSpec { rows: 0, ..ok }).is_err());
        assert!(generate(&SynthSpec { attributes: 0, ..ok }).is_err());
        assert!(generate(&SynthSpec { values_per_attribute: 0, ..ok }).is_err());
        assert!(generate(&SynthSpec { classes: 0, ..ok }).is_err());
    }

    #[test]
    fn downsampling_keeps_order_and_count() {
        let rows: Vec<Vec<String>> = (0..20).map(|i| vec![format!("r{i}")]).collect();
        let labels = (0..20).map(|i| if i % 2 == 0 { "big" } else { "small" }.to_string()).collect();
        let ds = Dataset::from_rows(vec!["id".into()], &rows, Some(labels)).unwrap();
        let down = downsample_class(&ds, "small", 3, 42).unwrap();
        assert_eq!(down.n(), 13);
        let ids: Vec<usize> = (0..down.n())
            .map(|i| down.value(i, 0)[1..].parse().unwrap())
            .collect();
        assert!(ids.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(down, downsample_class(&ds, "small", 3, 42).unwrap());
        assert!(downsample_class(&ds, "small", 11, 0).is_err());
        assert!(downsample_class(&ds, "none", 1, 0).is_err());
    }

    #[test]
    fn drop_incomplete_removes_missing_rows() {
        let ds = parse("a,b\nx,?\ny,z\n".as_bytes(), &IngestSpec::default()).unwrap();
        let full = drop_incomplete(&ds).unwrap();
        assert_eq!(full.n(), 1);
        assert_eq!(full.row_tokens(0), ["y", "z"]);
    }

    proptest! {
        #[test]
        fn binning_ignores_value_order(
            values in prop::collection::vec(-1e6f64..1e6, 1..40),
            bins in 1usize..12,
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            let original: Vec<Option<f64>> = values.iter().copied().map(Some).collect();
            let before = bin_equal_width(&original, bins).unwrap();
            let mut order: Vec<usize> = (0..values.len()).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let shuffled: Vec<Option<f64>> = order.iter().map(|&i| original[i]).collect();
            let after = bin_equal_width(&shuffled, bins).unwrap();
            for (pos, &i) in order.iter().enumerate() {
                prop_assert_eq!(&after[pos], &before[i]);
            }
            prop_assert_eq!(bin_equal_width(&original, bins).unwrap(), before);
        }

        #[test]
        fn write_then_parse_round_trips(
            rows in prop::collection::vec(
                prop::collection::vec(prop_oneof![
                    Just("?".to_string()),
                    Just(MISSING_TOKEN.to_string()),
                    Just("\\x".to_string()),
                    "[a-z]{1,3}",
                ], 3),
                1..15,
            ),
        ) {
            let text = {
                let mut s = String::from("p,q,r\n");
                for r in &rows {
                    s.push_str(&r.join(","));
                    s.push('\n');
                }
                s
            };
            let ds = parse(text.as_bytes(), &IngestSpec::default()).unwrap();
            let mut out = Vec::new();
            write_delimited(&ds, &mut out, b',').unwrap();
            let again = parse(out.as_slice(), &IngestSpec::default()).unwrap();
            prop_assert_eq!(again, ds);
        }
    }
}
