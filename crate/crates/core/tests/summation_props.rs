mod common;

use common::{c, runner};
use pnlab_core::cramer::k_ell_sum;
use pnlab_core::numerics::special::bernoulli;
use pnlab_core::summation::{abel_plana, em_finite, em_infinite, k_l_zero_minus_sigma, EmConfig};
use pnlab_core::zeros::{rational_divisor, reduce_rational};
use pnlab_core::{Error, FiniteDirichletSeries, NumericsConfig, TestFunction};
use proptest::collection::vec;
use proptest::prelude::*;

#[test]
fn finite_sums_exact_for_low_degree_polynomials() {
    let case = (1u32..=4).prop_flat_map(|m| (Just(m), vec(-2.0f64..2.0, 1..=(2 * m as usize)), 0u64..=50));
    runner(100)
        .run(&case, |(m, coeffs, n)| {
            let phi = TestFunction::Polynomial { coeffs };
            let direct: f64 = (0..=n).map(|k| phi.eval(k as f64).re).sum();
            let scale: f64 = (0..=n).map(|k| phi.eval(k as f64).norm()).sum::<f64>().max(1.0);
            let r = em_finite(&phi, n, &EmConfig::new(m).unwrap()).unwrap();
            prop_assert!((r.value.re - direct).abs() <= 1e-12 * scale, "{} vs {}", r.value.re, direct);
            Ok(())
        })
        .unwrap();
}

#[test]
fn infinite_sum_splits_at_any_point() {
    let cfg = EmConfig::new(3).unwrap();
    for n in [1u64, 4, 10] {
        let x = n as f64;
        let pairs = [
            (TestFunction::inverse_power(1.0, 2).unwrap(), TestFunction::inverse_power(1.0 + x, 2).unwrap()),
            (TestFunction::gaussian(0.5, 1.5).unwrap(), TestFunction::gaussian(0.5 - x, 1.5).unwrap()),
            (TestFunction::exponential(c(0.7, 0.0)), TestFunction::exponential(c(0.7, 0.0))),
        ];
        for (phi, shifted) in pairs {
            let whole = em_infinite(&phi, &cfg).unwrap().value;
            let head = em_finite(&phi, n, &cfg).unwrap().value;
            let mut tail = em_infinite(&shifted, &cfg).unwrap().value;
            if matches!(phi, TestFunction::Exponential { .. }) {
                tail *= (-0.7 * x).exp();
            }
            let split = head + tail - phi.eval(x);
            assert!((whole - split).norm() <= 1e-9, "{phi} at N = {n}: {whole} vs {split}");
        }
    }
}

#[test]
fn abel_plana_agrees_with_euler_maclaurin() {
    let cfg = NumericsConfig::default();
    let em = EmConfig::new(4).unwrap();
    for phi in [TestFunction::inverse_power(1.0, 2).unwrap(), TestFunction::inverse_power(2.0, 3).unwrap(), TestFunction::exponential(c(1.0, 0.0))] {
        let a = abel_plana(&phi, &cfg).unwrap().value;
        let b = em_infinite(&phi, &em).unwrap().value;
        assert!((a - b).norm() <= 1e-8, "{phi}: {a} vs {b}");
    }
    // Gaussians grow like e^{y^2 / 2 s^2} on vertical lines, outside the
    // formula's hypotheses.
    let g = TestFunction::gaussian(0.5, 3.0).unwrap();
    assert!(matches!(abel_plana(&g, &cfg), Err(Error::DecayHypothesisViolated(_))));
}

#[test]
fn even_order_constants_match_zero_sums() {
    let f = FiniteDirichletSeries::real(&[1.0], &[-1.0]).unwrap();
    let div = rational_divisor(&f, &reduce_rational(&f).unwrap(), 30.0).with_point(c(0.0, 0.0), -1);
    for l in 1..=3u32 {
        let exact = -bernoulli(2 * l as usize).unwrap() / (1..=2 * l).map(f64::from).product::<f64>();
        let closed = k_l_zero_minus_sigma(2 * l, c(0.0, 0.0)).unwrap();
        let summed = k_ell_sum(&div, 2 * l, c(0.0, 0.0), 0.0).unwrap().value;
        assert!((closed.re - exact).abs() <= 1e-10 && closed.im.abs() <= 1e-12, "l = {l}: {closed}");
        assert!((summed - exact).norm() <= 1e-10, "l = {l}: {summed} vs {exact}");
    }
}
