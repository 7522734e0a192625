#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use catout::Dataset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Uniform random tokens `v0..v{p-1}` in every cell.
pub fn random_dataset(n: usize, m: usize, p: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<String>> = (0..n)
        .map(|_| (0..m).map(|_| format!("v{}", rng.gen_range(0..p))).collect())
        .collect();
    let names = (0..m).map(|j| format!("a{j}")).collect();
    Dataset::from_rows(names, &rows, None).unwrap()
}

/// Sum of attribute entropies (bits) of the records not flagged, counted
/// from the token strings with natural logs converted at the end.
pub fn scratch_entropy(ds: &Dataset, flagged: &[bool]) -> f64 {
    let kept: Vec<usize> = (0..ds.n()).filter(|&i| !flagged[i]).collect();
    if kept.is_empty() {
        return 0.0;
    }
    let total = kept.len() as f64;
    let mut h = 0.0;
    for j in 0..ds.m() {
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for &i in &kept {
            *counts.entry(ds.value(i, j)).or_default() += 1;
        }
        for &c in counts.values() {
            let p = c as f64 / total;
            h -= p * p.ln();
        }
    }
    h / std::f64::consts::LN_2
}

/// Most negative scratch-recomputed delta over all (non-outlier, outlier)
/// swaps, or `None` when there is no swap to make.
pub fn best_scratch_swap(ds: &Dataset, flags: &[bool]) -> Option<(f64, usize, usize)> {
    let base = scratch_entropy(ds, flags);
    let mut best: Option<(f64, usize, usize)> = None;
    let mut f = flags.to_vec();
    for t in (0..ds.n()).filter(|&t| !flags[t]) {
        for o in (0..ds.n()).filter(|&o| flags[o]) {
            f[t] = true;
            f[o] = false;
            let d = scratch_entropy(ds, &f) - base;
            f[t] = false;
            f[o] = true;
            if best.map_or(true, |(b, _, _)| d < b) {
                best = Some((d, t, o));
            }
        }
    }
    best
}
