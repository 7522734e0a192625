//! Shared fixtures for the benchmarks.

use catout::{generate, Dataset, SynthSpec};

/// Clustered synthetic data with 10 classes and the given shape.
pub fn synthetic(rows: usize, attributes: usize, values: usize) -> Dataset {
    generate(&SynthSpec {
        rows,
        attributes,
        values_per_attribute: values,
        classes: 10,
        seed: 5,
    })
    .expect("valid synthetic spec")
}
