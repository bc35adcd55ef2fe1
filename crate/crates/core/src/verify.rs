//! End-to-end checks of the formula and its special cases, reported with the
//! error budget each side carries.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::NumericsConfig;
use crate::cramer::{order_shift_terms, pair_atomic_side, pair_zero_side, PairingConfig};
use crate::discrepancy::discrepancy_poly;
use crate::error::{Error, Result};
use crate::freq::{expand, newton_sums};
use crate::numerics::sum::CompensatedSum;
use crate::series::FiniteDirichletSeries;
use crate::testfn::TestFunction;
use crate::zeros::{find_zeros_auto, rational_divisor, reduce_rational};
use crate::zeta::ExplicitReport;

/// Outcome of one verification. `pass` holds exactly when
/// `residual <= budget + tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub budget: f64,
    pub tol: f64,
    pub pass: bool,
    pub inputs: BTreeMap<String, Value>,
}

impl VerificationReport {
    /// Report with `residual = |lhs - rhs|`. Budgets are floored at one ulp of
    /// the larger side so that a zero budget is never recorded.
    pub fn new(name: &str, lhs: Complex64, rhs: Complex64, budget: f64, tol: f64, inputs: BTreeMap<String, Value>) -> Self {
        Self::with_residual(name, lhs, rhs, (lhs - rhs).norm(), budget, tol, inputs)
    }

    pub fn with_residual(
        name: &str,
        lhs: Complex64,
        rhs: Complex64,
        residual: f64,
        budget: f64,
        tol: f64,
        inputs: BTreeMap<String, Value>,
    ) -> Self {
        let floor = f64::EPSILON * lhs.norm().max(rhs.norm()).max(1.0);
        let budget = if budget.is_finite() { budget.max(floor) } else { budget };
        let pass = residual <= budget + tol;
        Self { name: name.to_string(), lhs, rhs, residual, budget, tol, pass, inputs }
    }
}

impl ExplicitReport {
    pub fn verification(&self, tol: f64) -> VerificationReport {
        let mut inputs = BTreeMap::new();
        inputs.insert("phi".into(), json!(self.phi.to_string()));
        inputs.insert("zeros".into(), json!(self.zeros_used));
        inputs.insert("T".into(), json!(self.t_max));
        inputs.insert("rhs_terms".into(), json!(self.rhs_terms));
        inputs.insert("budgets".into(), json!(self.budgets));
        inputs.insert("assumption".into(), json!(self.assumption));
        VerificationReport::with_residual("explicit", self.lhs, self.rhs(), self.residual, self.budgets.total(), tol, inputs)
    }
}

/// Inputs of [`verify_pn`] besides the series and test function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PnOptions {
    pub pairing: PairingConfig,
    /// Frequencies `<lambda, k> <= t_max` are summed explicitly.
    pub t_max: f64,
    /// Zeros with `|Im| <= ymax` are listed.
    pub ymax: f64,
}

impl PnOptions {
    /// Pairing at `sigma = 0`, `d' = 2`, with `t_max` covering the support of
    /// `phi` and `ymax = 80`.
    pub fn for_phi(phi: &TestFunction) -> Self {
        let sup = phi.support();
        Self { pairing: PairingConfig::new(Complex64::default(), 2), t_max: sup.hi.max(1.0), ymax: 80.0 }
    }
}

fn series_json(f: &FiniteDirichletSeries) -> Value {
    serde_json::to_value(f.to_file()).unwrap_or(Value::Null)
}

/// `<W(f, sigma, d'), phi>` against the atomic side. Test functions supported
/// in the open half line take the restricted path with no terms at the origin;
/// the others add the discrepancy terms `sum c_j <delta^{(j)}, phi>`.
pub fn verify_pn(f: &FiniteDirichletSeries, phi: &TestFunction, opts: &PnOptions, cfg: &NumericsConfig) -> Result<VerificationReport> {
    let div = find_zeros_auto(f, opts.ymax, cfg)?;
    let pc = opts.pairing;
    let dp = pc.d_prime.max(div.d);
    let lhs = pair_zero_side(&div, phi, &pc, cfg)?;
    let restricted = phi.supported_in_positive_axis();
    let mut budget = lhs.budget();
    let mut extra = Complex64::default();
    let c_poly = if restricted {
        Vec::new()
    } else {
        let disc = discrepancy_poly(f, &div, pc.sigma, cfg)?;
        let scale: f64 = (0..disc.coeffs.len()).map(|j| phi.deriv(j, 0.0).norm()).sum();
        budget += (disc.tail_bound + disc.sample_residual) * scale;
        if dp > div.d {
            let shift = order_shift_terms(&div, phi, pc.sigma, div.d, dp)?;
            extra = shift.value;
            budget += shift.tail_bound;
        }
        disc.coeffs
    };
    let atomic = pair_atomic_side(f, phi, &c_poly, opts.t_max, cfg)?;
    budget += atomic.budget();
    let rhs = atomic.value + extra;
    let mut inputs = BTreeMap::new();
    inputs.insert("series".into(), series_json(f));
    inputs.insert("phi".into(), json!(phi.to_string()));
    inputs.insert("sigma".into(), json!([pc.sigma.re, pc.sigma.im]));
    inputs.insert("d_prime".into(), json!(dp));
    inputs.insert("ymax".into(), json!(opts.ymax));
    inputs.insert("T".into(), json!(opts.t_max));
    inputs.insert("zeros".into(), json!(div.entries.len()));
    inputs.insert("path".into(), json!(if restricted { "restricted" } else { "full" }));
    inputs.insert("c".into(), json!(c_poly.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>()));
    Ok(VerificationReport::new("pn", lhs.value, rhs, budget, cfg.verify_tol, inputs))
}

/// The full Poisson formula: `f = 1 - e^{-s}` with a gaussian centred at 3.
pub fn verify_classical_poisson(cfg: &NumericsConfig) -> Result<VerificationReport> {
    let f = FiniteDirichletSeries::real(&[1.0], &[-1.0])?;
    let phi = TestFunction::gaussian(3.0, 0.4)?;
    let mut report = verify_pn(&f, &phi, &PnOptions::for_phi(&phi), cfg)?;
    report.name = "classical-poisson".into();
    Ok(report)
}

/// Power sums of the roots of `poly` (coefficients from the leading one down)
/// two ways: directly from the zeros of `f(s) = e^{-n s} P(e^s) / c_n`, where
/// each root is `e^rho` for the zero `rho` with `Im rho` in `(-pi, pi]`, and
/// through the frequency coefficients `b_k`. The residual is the largest
/// deviation relative to `max(1, |S_m|)`.
pub fn verify_newton_equivalence(poly: &[Complex64], m_max: u32) -> Result<VerificationReport> {
    let lead = poly.iter().position(|c| c.norm() > 0.0).ok_or_else(|| Error::InvalidSeries("zero polynomial".into()))?;
    let poly = &poly[lead..];
    if poly.len() < 2 || poly.len() > 9 || m_max == 0 || m_max > 16 {
        return Err(Error::OutOfRange(format!("degree must lie in 1..=8 and M in 1..=16, got {} and {m_max}", poly.len() - 1)));
    }
    let monic: Vec<Complex64> = poly[1..].iter().map(|c| c / poly[0]).collect();
    let rhs = newton_sums(&monic, m_max);
    // Roots at zero add nothing to power sums; the series keeps the rest.
    let (mut lambdas, mut coeffs) = (Vec::new(), Vec::new());
    for (j, a) in monic.iter().enumerate() {
        if a.norm() > 0.0 {
            lambdas.push((j + 1) as f64);
            coeffs.push(*a);
        }
    }
    let mut lhs = vec![Complex64::default(); m_max as usize];
    if !lambdas.is_empty() {
        let f = FiniteDirichletSeries::new(lambdas, coeffs)?;
        let red = reduce_rational(&f).ok_or_else(|| Error::InvalidSeries("integer frequencies must reduce".into()))?;
        let div = rational_divisor(&f, &red, std::f64::consts::PI + 1.0);
        for e in div.entries.iter().filter(|e| e.rho.im > -std::f64::consts::PI && e.rho.im <= std::f64::consts::PI) {
            let alpha = e.rho.exp();
            let mut p = Complex64::new(1.0, 0.0);
            for s in lhs.iter_mut() {
                p *= alpha;
                *s += f64::from(e.n) * p;
            }
        }
    }
    let mut worst = (0usize, 0.0f64);
    for (m, (a, b)) in lhs.iter().zip(&rhs).enumerate() {
        let dev = (a - b).norm() / b.norm().max(1.0);
        if dev > worst.1 || m == 0 {
            worst = (m, worst.1.max(dev));
        }
    }
    let mut inputs = BTreeMap::new();
    inputs.insert("poly".into(), json!(poly.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>()));
    inputs.insert("M".into(), json!(m_max));
    inputs.insert("power_sums_roots".into(), json!(lhs.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>()));
    inputs.insert("power_sums_newton".into(), json!(rhs.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>()));
    inputs.insert("worst_m".into(), json!(worst.0 + 1));
    Ok(VerificationReport::with_residual("newton", lhs[worst.0], rhs[worst.0], worst.1, 0.0, 1e-9, inputs))
}

/// `sum_{j <= a} j^{-p}`.
pub fn partial_zeta(p: u32, a: u32) -> f64 {
    (1..=a).rev().map(|j| f64::from(j).powi(-(p as i32))).sum()
}

/// Lifting formula over the levels `a_0 = 1..=M+1`. The series
/// `1 + sum (a_n / a_0) e^{-lambda_n s}` vanishes exactly where
/// `f = 1 - a_0`; its frequency coefficients are `b_k / a_0^{|k|}`. Summing,
/// `sum_levels <W, phi> + H_{M+1} sum lambda_n a_n phi(lambda_n)
/// = sum_{|k| >= 2} <lambda,k> b_k zeta_M(|k|) phi(<lambda,k>)`.
pub fn verify_lifting(
    f: &FiniteDirichletSeries,
    m: u32,
    phi: &TestFunction,
    ymax: f64,
    cfg: &NumericsConfig,
) -> Result<VerificationReport> {
    if !phi.supported_in_positive_axis() {
        return Err(Error::InvalidTestFunction(format!("{phi} must be supported in the open half line")));
    }
    let pc = PairingConfig::new(Complex64::default(), 2);
    let mut lhs = CompensatedSum::new();
    let mut budget = 0.0;
    let mut zeros = Vec::new();
    for a in 1..=m + 1 {
        let level = f.level_series(Complex64::new(1.0 - f64::from(a), 0.0))?;
        let div = find_zeros_auto(&level, ymax, cfg)?;
        let p = pair_zero_side(&div, phi, &pc, cfg)?;
        lhs.add(p.value);
        budget += p.budget();
        zeros.push(div.entries.len());
    }
    let harmonic = partial_zeta(1, m + 1);
    for (l, c) in f.lambdas().iter().zip(f.coeffs()) {
        lhs.add(harmonic * l * c * phi.eval(*l));
    }
    let t_max = phi.support().hi;
    let terms = expand(f, t_max, cfg.enumeration_cap)?;
    let mut rhs = CompensatedSum::new();
    for t in terms.iter().filter(|t| t.k.order() >= 2) {
        rhs.add(t.value * t.b.unwrap_or_default() * partial_zeta(t.k.order(), m + 1) * phi.eval(t.value));
    }
    let mut inputs = BTreeMap::new();
    inputs.insert("series".into(), series_json(f));
    inputs.insert("phi".into(), json!(phi.to_string()));
    inputs.insert("M".into(), json!(m));
    inputs.insert("ymax".into(), json!(ymax));
    inputs.insert("zeros_per_level".into(), json!(zeros));
    Ok(VerificationReport::new("lifting", lhs.value(), rhs.value(), budget, cfg.verify_tol, inputs))
}
