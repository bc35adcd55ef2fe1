//! Shared strategies and a fixed-seed runner for the property suites.
#![allow(dead_code)]

use pnlab_core::{Complex64, FiniteDirichletSeries};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub const SEED: [u8; 32] = [
    0x70, 0x6e, 0x6c, 0x61, 0x62, 0x2d, 0x70, 0x72, 0x6f, 0x70, 0x73, 0x00, 0x01, 0x02, 0x03, 0x04, 0x05, 0x06, 0x07, 0x08,
    0x09, 0x0a, 0x0b, 0x0c, 0x0d, 0x0e, 0x0f, 0x10, 0x11, 0x12, 0x13, 0x14,
];

/// Runner with a fixed ChaCha seed and no failure persistence, so every run
/// draws the same cases.
pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, max_global_rejects: 100_000, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Real series with up to `max_terms` frequencies in `[0.5, 3]`, spaced at
/// least 0.05 apart, and coefficients in `(-max_coeff, max_coeff)`.
pub fn real_series(max_terms: usize, max_coeff: f64) -> impl Strategy<Value = FiniteDirichletSeries> {
    (1..=max_terms)
        .prop_flat_map(move |n| (vec(0.5f64..3.0, n), vec(-max_coeff..max_coeff, n)))
        .prop_filter_map("separated frequencies and a visible last term", |(mut l, cs)| {
            l.sort_by(f64::total_cmp);
            if l.windows(2).any(|w| w[1] - w[0] < 0.05) || cs.last().map_or(true, |x| x.abs() < 0.05) {
                return None;
            }
            FiniteDirichletSeries::real(&l, &cs).ok()
        })
}

/// Series with integer multiples of a common unit as frequencies.
pub fn rational_series(max_coeff: f64) -> impl Strategy<Value = FiniteDirichletSeries> {
    (0.5f64..1.5, proptest::sample::subsequence(vec![1u32, 2, 3, 4], 1..=3), vec(-max_coeff..max_coeff, 3))
        .prop_filter_map("visible last term", |(unit, ks, cs)| {
            if cs[ks.len() - 1].abs() < 0.1 {
                return None;
            }
            let l: Vec<f64> = ks.iter().map(|&k| unit * f64::from(k)).collect();
            FiniteDirichletSeries::real(&l, &cs[..ks.len()]).ok()
        })
}

pub fn complex_point(re: std::ops::Range<f64>, im: std::ops::Range<f64>) -> impl Strategy<Value = Complex64> {
    (re, im).prop_map(|(x, y)| Complex64::new(x, y))
}
