//! Shared fixture builders for the criterion benches.

use ndarray::Array2;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use wordprobe_core::{DataType, NormKind, NormTable, NormValue, Representation};

pub fn words(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i:04}")).collect()
}

pub fn random_representation(name: &str, n: usize, d: usize, seed: u64) -> Representation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Array2::zeros((n, d));
    for v in m.iter_mut() {
        *v = rng.gen_range(-1.0..1.0);
    }
    Representation::from_matrix(name.to_string(), DataType::Text, words(n), m).unwrap()
}

pub fn random_norm(name: &str, n: usize, seed: u64) -> NormTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = words(n)
        .into_iter()
        .map(|w| (w, NormValue::Numeric(rng.gen_range(-1.0..1.0))))
        .collect();
    NormTable::new(
        name.to_string(),
        "bench".to_string(),
        NormKind::Numeric,
        Vec::new(),
        entries,
        0,
    )
    .unwrap()
}

pub fn random_values(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(0..50) as f64).collect()
}

pub fn random_diffs(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mag = rng.gen_range(1..=9) as f64;
            if rng.gen_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect()
}
