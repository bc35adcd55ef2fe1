use pnlab_core::cramer::pair_symmetric;
use pnlab_core::verify::{verify_classical_poisson, verify_lifting, verify_pn, PnOptions};
use pnlab_core::zeros::find_zeros_auto;
use pnlab_core::{FiniteDirichletSeries, NumericsConfig, TestFunction};

fn suite() -> Vec<(FiniteDirichletSeries, TestFunction)> {
    vec![
        (FiniteDirichletSeries::real(&[1.0], &[-1.0]).unwrap(), TestFunction::gaussian(3.0, 0.4).unwrap()),
        (FiniteDirichletSeries::real(&[1.0, 2f64.sqrt()], &[0.4, 0.3]).unwrap(), TestFunction::bump(0.5, 4.0).unwrap()),
        (FiniteDirichletSeries::real(&[1.0, 2.0], &[-1.5, 0.5]).unwrap(), TestFunction::bump(0.5, 4.0).unwrap()),
    ]
}

#[test]
fn reports_are_reproducible() {
    let cfg = NumericsConfig::default();
    for (f, phi) in suite() {
        let opts = PnOptions::for_phi(&phi);
        let a = serde_json::to_string(&verify_pn(&f, &phi, &opts, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&verify_pn(&f, &phi, &opts, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }
    let a = serde_json::to_string(&verify_classical_poisson(&cfg).unwrap()).unwrap();
    assert_eq!(a, serde_json::to_string(&verify_classical_poisson(&cfg).unwrap()).unwrap());
    let f = FiniteDirichletSeries::real(&[1.0, 2.0], &[-1.5, 0.5]).unwrap();
    let phi = TestFunction::bump(0.4, 3.0).unwrap();
    let a = verify_lifting(&f, 3, &phi, 60.0, &cfg).unwrap();
    assert_eq!(a, verify_lifting(&f, 3, &phi, 60.0, &cfg).unwrap());
}

#[test]
fn refining_never_worsens_the_account() {
    let cfg = NumericsConfig::default();
    for (f, phi) in suite() {
        let coarse = PnOptions::for_phi(&phi);
        let fine = PnOptions { ymax: 2.0 * coarse.ymax, t_max: 2.0 * coarse.t_max, ..coarse };
        let a = verify_pn(&f, &phi, &coarse, &cfg).unwrap();
        let b = verify_pn(&f, &phi, &fine, &cfg).unwrap();
        assert!(b.residual + b.budget <= 1.01 * (a.residual + a.budget) + 1e-15, "{a:?}\n{b:?}");
    }
}

#[test]
fn symmetric_pairing_consistent_with_pn() {
    let cfg = NumericsConfig::default();
    let phi = TestFunction::gaussian(1.5, 0.3).unwrap();
    for (l, a) in [(vec![1.0, 2.0], vec![0.5, 1.0]), (vec![1.0, 3.0, 4.0], vec![-0.3, -0.3, 1.0])] {
        let f = FiniteDirichletSeries::real(&l, &a).unwrap();
        let div = find_zeros_auto(&f, 80.0, &cfg).unwrap();
        let (lhs, rhs) = pair_symmetric(&div, &f, &phi, 0.0, &cfg).unwrap();
        let pn = verify_pn(&f, &phi, &PnOptions::for_phi(&phi), &cfg).unwrap();
        assert!((lhs.value - rhs.value).norm() <= pn.residual + 1e-8, "{} vs {}", lhs.value, rhs.value);
    }
}
