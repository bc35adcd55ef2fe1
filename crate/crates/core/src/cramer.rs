//! Zero side of the formula: the distribution
//! `W(f, sigma, d') = e^{sigma t} D^{d'} ((K_{d'}(t) - K_{d'}(0)) 1_{t>0})`
//! with `K_ell(t, sigma) = sum_rho n_rho (rho - sigma)^{-ell} e^{(rho - sigma) t}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::NumericsConfig;
use crate::error::{Error, Result};
use crate::freq::expand;
use crate::numerics::quad::{integrate, integrate_panels, integrate_semi_infinite, QuadOptions};
use crate::numerics::special::factorial;
use crate::numerics::sum::CompensatedSum;
use crate::series::FiniteDirichletSeries;
use crate::testfn::{tilted_deriv, TestFunction};
use crate::zeros::Divisor;

/// Base point and order of the regularization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingConfig {
    pub sigma: Complex64,
    pub d_prime: u32,
}

impl PairingConfig {
    pub fn new(sigma: Complex64, d_prime: u32) -> Self {
        Self { sigma, d_prime }
    }
}

/// A truncated sum and a bound on what the truncation left out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSum {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// A pairing value with its quadrature and truncation error estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingResult {
    pub value: Complex64,
    pub quad_error: f64,
    pub tail_bound: f64,
}

impl PairingResult {
    pub fn budget(&self) -> f64 {
        self.quad_error + self.tail_bound
    }
}

/// `e^z - 1` without cancellation for small `z`.
pub fn cexpm1(z: Complex64) -> Complex64 {
    let (s, c) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    Complex64::new(z.re.exp_m1() * c - 2.0 * half * half, z.re.exp() * s)
}

/// `K_ell(t, sigma)` over the listed entries, plus the closed-form tower
/// tails at `t = 0`, plus `n_sigma t^ell / ell!` when `sigma` is a point of
/// the divisor. The bound covers omitted zeros that are not summed exactly.
pub fn k_ell_sum(div: &Divisor, ell: u32, sigma: Complex64, t: f64) -> Result<TruncatedSum> {
    if !(t >= 0.0) {
        return Err(Error::OutOfRange(format!("t must be non-negative, got {t}")));
    }
    if t == 0.0 && ell < div.d {
        return Err(Error::OutOfRange(format!("K_{ell}(0) diverges below the order {}", div.d)));
    }
    let on = div.locate(sigma)?;
    let mut acc = CompensatedSum::new();
    for e in &div.entries {
        if on.is_some_and(|o| o.rho == e.rho) {
            continue;
        }
        let a = e.rho - sigma;
        acc.add(f64::from(e.n) * a.powi(-(ell as i32)) * (a * t).exp());
    }
    if let Some(o) = on {
        acc.add(Complex64::new(f64::from(o.n) * t.powi(ell as i32) / factorial(ell), 0.0));
    }
    let mut bound = 0.0;
    if t == 0.0 {
        if !div.towers.is_empty() {
            acc.add(div.tower_power_tail(ell, sigma)?);
        } else {
            bound += div.omitted_power_bound(f64::from(ell), sigma.im.abs());
        }
    } else {
        for tw in &div.towers {
            if !tw.two_sided && tw.step.re < 0.0 {
                // left-directed tower: geometric decay in t
                let k0 = (tw.k_hi + 1) as f64;
                let first = tw.base + tw.step * k0 - sigma;
                let ratio = (tw.step.re * t).exp();
                bound += f64::from(tw.n.abs()) * first.norm().powi(-(ell as i32)) * (first.re * t).exp() / (1.0 - ratio);
            }
        }
        if let Some(dm) = div.density {
            let growth = ((dm.sigma_max - sigma.re) * t).exp().max(1.0);
            bound += growth * div.omitted_power_bound(f64::from(ell), sigma.im.abs());
        }
    }
    Ok(TruncatedSum { value: acc.value(), tail_bound: bound })
}

/// Integration window `[lo, hi]` on the half line where `phi` is not negligible.
fn window(phi: &TestFunction) -> Result<(f64, f64)> {
    match phi {
        TestFunction::Gaussian { .. } | TestFunction::Bump { .. } => {
            let sup = phi.support();
            Ok((sup.lo.max(0.0), sup.hi.max(0.0)))
        }
        _ => Err(Error::InvalidTestFunction(format!("{phi} is neither a gaussian nor a bump"))),
    }
}

fn check_order(phi: &TestFunction, needed: usize) -> Result<()> {
    let available = phi.max_derivative_order();
    if available < needed {
        return Err(Error::DerivativeUnavailable { needed, available });
    }
    Ok(())
}

/// `<W(f, sigma, d'), phi>` by quadrature of
/// `(-1)^{d'} int_0^inf (K_{d'}(t) - K_{d'}(0)) (e^{sigma t} phi)^{(d')}(t) dt`.
/// Exponential test functions take the analytic path.
pub fn pair_zero_side(div: &Divisor, phi: &TestFunction, pc: &PairingConfig, cfg: &NumericsConfig) -> Result<PairingResult> {
    if matches!(phi, TestFunction::Exponential { .. }) {
        return pair_zero_side_analytic(div, phi, pc);
    }
    let dp = pc.d_prime.max(div.d);
    check_order(phi, dp as usize)?;
    let sigma = pc.sigma;
    let on = div.locate(sigma)?;
    let (lo, hi) = window(phi)?;
    let mut terms: Vec<(Complex64, Complex64)> = Vec::with_capacity(div.entries.len());
    for e in &div.entries {
        if on.is_some_and(|o| o.rho == e.rho) {
            continue;
        }
        let a = e.rho - sigma;
        terms.push((a, f64::from(e.n) * a.powi(-(dp as i32))));
    }
    let on_coeff = on.map(|o| f64::from(o.n) / factorial(dp));
    let sign = if dp % 2 == 0 { 1.0 } else { -1.0 };
    let integrand = |t: f64| {
        let mut k = CompensatedSum::new();
        for (a, c) in &terms {
            k.add(c * cexpm1(a * t));
        }
        let mut kv = k.value();
        if let Some(c) = on_coeff {
            kv += c * t.powi(dp as i32);
        }
        kv * tilted_deriv(phi, sigma, dp as usize, t) * sign
    };
    let mut value = Complex64::default();
    let mut quad_error = 0.0;
    if hi > lo {
        let omega = terms.iter().map(|(a, _)| a.im.abs()).fold(0.0, f64::max) + sigma.im.abs();
        let panels = 1 + ((hi - lo) * omega / std::f64::consts::PI).ceil().min(1e5) as usize;
        let q = integrate_panels(integrand, lo, hi, panels, &cfg.into())?;
        value = q.value;
        quad_error = q.error;
    }
    let tail_bound = zero_tail_bound(div, phi, sigma, dp)?;
    Ok(PairingResult { value, quad_error, tail_bound })
}

/// `<W(f, sigma, d'), phi>` as the sum of per-zero closed forms
/// `n [int_0^inf e^{rho t} phi - sum_{m<d'} (-1)^m (rho - sigma)^{-m} psi^{(m-1)}(0)]`,
/// `psi = e^{sigma t} phi`. A zero at `sigma` contributes `n int_0^inf e^{sigma t} phi`.
pub fn pair_zero_side_analytic(div: &Divisor, phi: &TestFunction, pc: &PairingConfig) -> Result<PairingResult> {
    let dp = pc.d_prime.max(div.d);
    check_order(phi, dp as usize)?;
    let sigma = pc.sigma;
    let on = div.locate(sigma)?;
    let psi0: Vec<Complex64> = (0..dp as usize).map(|j| tilted_deriv(phi, sigma, j, 0.0)).collect();
    let mut acc = CompensatedSum::new();
    for e in &div.entries {
        let n = f64::from(e.n);
        if on.is_some_and(|o| o.rho == e.rho) {
            acc.add(n * phi.laplace_half(e.rho)?);
            continue;
        }
        let a = e.rho - sigma;
        let ai = a.inv();
        let mut corr = Complex64::default();
        let mut ap = Complex64::new(1.0, 0.0);
        for m in 1..dp as usize {
            ap *= ai;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            corr += sign * ap * psi0[m - 1];
        }
        acc.add(n * (phi.laplace_half(e.rho)? - corr));
    }
    let mut tail_bound = 0.0;
    if let TestFunction::Exponential { rate } = phi {
        if !div.towers.is_empty() {
            // Unlisted members in closed form: 1/(s - rho) + 1/(rho - sigma) and
            // the higher subtraction terms.
            acc.add(div.tower_reciprocal_difference(*rate, sigma)?);
            for m in 2..dp as usize {
                let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
                acc.add(sign * psi0[m - 1] * div.tower_power_tail(m as u32, sigma)?);
            }
        } else {
            let reach = sigma.im.abs().max(rate.im.abs());
            tail_bound = (rate - sigma).norm() * div.omitted_power_bound(2.0, reach);
        }
    } else {
        tail_bound = zero_tail_bound(div, phi, sigma, dp)?;
    }
    Ok(PairingResult { value: acc.value(), quad_error: 0.0, tail_bound })
}

/// Bound on the contribution of omitted zeros, from repeated integration by
/// parts of each per-zero term:
/// `|C_rho| <= sum_{m=d'}^{p} |a|^{-m} |psi^{(m-1)}(0)| + |a|^{-p} int e^{Re(a) t} |psi^{(p)}|`,
/// summed with the zero-density model and minimised over `p`.
pub fn zero_tail_bound(div: &Divisor, phi: &TestFunction, sigma: Complex64, dp: u32) -> Result<f64> {
    let Some(dm) = div.density else { return Ok(0.0) };
    if !div.ymax.is_finite() {
        return Ok(0.0);
    }
    let (lo, hi) = window(phi)?;
    let reach = sigma.im.abs();
    let growth = dm.sigma_max - sigma.re;
    let top = phi.max_derivative_order().min(40);
    let opts = QuadOptions { abs_tol: 1e-300, rel_tol: 1e-3, max_intervals: 2000 };
    let mut best = f64::INFINITY;
    let mut boundary = 0.0;
    for p in (dp as usize)..=top.max(dp as usize) {
        boundary += tilted_deriv(phi, sigma, p - 1, 0.0).norm() * div.omitted_power_bound(p as f64, reach);
        if p < 2 || (p - dp as usize) % 2 == 1 && p != top {
            continue;
        }
        let j = if hi > lo {
            let q = integrate_panels(
                |t| Complex64::new((growth * t).exp() * tilted_deriv(phi, sigma, p, t).norm(), 0.0),
                lo,
                hi,
                8,
                &opts,
            );
            match q {
                Ok(q) => q.value.re * (1.0 + 1e-2),
                Err(_) => continue,
            }
        } else {
            0.0
        };
        let total = boundary + j * div.omitted_power_bound(p as f64, reach);
        if total < best {
            best = total;
        }
    }
    Ok(best)
}

/// Extra delta terms `sum_{ell=d_from}^{d_to-1} K_ell(0, sigma) <e^{sigma t} delta^{(ell-1)}, phi>`
/// relating `W(f, sigma, d_to)` to `W(f, sigma, d_from)` at the origin.
pub fn order_shift_terms(div: &Divisor, phi: &TestFunction, sigma: Complex64, d_from: u32, d_to: u32) -> Result<TruncatedSum> {
    let mut value = Complex64::default();
    let mut bound = 0.0;
    for ell in d_from..d_to {
        let k = k_ell_sum(div, ell, sigma, 0.0)?;
        let sign = if ell % 2 == 1 { 1.0 } else { -1.0 };
        let d = tilted_deriv(phi, sigma, ell as usize - 1, 0.0) * sign;
        value += k.value * d;
        bound += k.tail_bound * d.norm();
    }
    Ok(TruncatedSum { value, tail_bound: bound })
}

/// `sum_{<lambda,k> <= t_max} <lambda,k> b_k phi(<lambda,k>) + sum_j c_j (-1)^j phi^{(j)}(0)`,
/// with a bound on the frequencies beyond `t_max`.
pub fn pair_atomic_side(
    f: &FiniteDirichletSeries,
    phi: &TestFunction,
    c_poly: &[Complex64],
    t_max: f64,
    cfg: &NumericsConfig,
) -> Result<PairingResult> {
    let terms = expand(f, t_max, cfg.enumeration_cap)?;
    let mut acc = CompensatedSum::new();
    for t in &terms {
        acc.add(t.value * t.b.unwrap_or_default() * phi.eval(t.value));
    }
    for (j, c) in c_poly.iter().enumerate() {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(c * phi.deriv(j, 0.0) * sign);
    }
    Ok(PairingResult { value: acc.value(), quad_error: 0.0, tail_bound: atomic_tail_bound(f, phi, t_max) })
}

/// Bound on `sum_{<lambda,k> > T} |<lambda,k> b_k phi(<lambda,k>)|`. With
/// `theta` chosen so that `q = sum |a_n| e^{-lambda_n theta} = 1/2`,
/// `sum_k |b_k| e^{-theta <lambda,k>} <= -log(1 - q)`, and the tail is at most
/// `log 2 * sup_{v > T} |v phi(v)| e^{theta v}`.
pub fn atomic_tail_bound(f: &FiniteDirichletSeries, phi: &TestFunction, t_max: f64) -> f64 {
    let sup = phi.support();
    if sup.hi <= t_max && !matches!(phi, TestFunction::Gaussian { .. }) {
        return 0.0;
    }
    let q = |th: f64| f.lambdas().iter().zip(f.coeffs()).map(|(l, a)| a.norm() * (-l * th).exp()).sum::<f64>();
    let (mut lo, mut hi) = (f.zero_strip().sigma_plus, f.zero_strip().sigma_plus + 1.0);
    while q(hi) > 0.5 {
        hi += 2.0 * (hi - lo);
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if q(mid) > 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = hi;
    let weight = |v: f64| v * phi.eval(v).norm() * (theta * v).exp();
    let far = match phi {
        TestFunction::Gaussian { mu, s } => (mu + theta * s * s + 45.0 * s).max(t_max + 10.0 * s),
        _ => sup.hi.min(t_max + 100.0),
    };
    let mut best = 0.0_f64;
    let steps = 4000;
    for i in 0..=steps {
        let v = t_max + (far - t_max) * i as f64 / steps as f64;
        best = best.max(weight(v));
    }
    2f64.ln() * best * 1.01
}

/// `<W(f, beta, 2), e^{-beta t} (phi(t) + phi(-t))>` and its atomic
/// counterpart `2 c_0(f, beta) phi(0) + sum_k <lambda,k> e^{-beta <lambda,k>} b_k (phi(<lambda,k>) + phi(-<lambda,k>))`.
pub fn pair_symmetric(
    div: &Divisor,
    f: &FiniteDirichletSeries,
    phi: &TestFunction,
    beta: f64,
    cfg: &NumericsConfig,
) -> Result<(PairingResult, PairingResult)> {
    if !f.is_real(0.0) {
        return Err(Error::NotRealAnalytic);
    }
    let refl = phi.reflect().ok_or_else(|| Error::InvalidTestFunction(format!("{phi} has no reflection")))?;
    let pc = PairingConfig::new(Complex64::new(beta, 0.0), 2);
    let shift = Complex64::new(-beta, 0.0);
    let one = pair_tilted_analytic(div, phi, beta)?;
    let two = pair_tilted_analytic(div, &refl, beta)?;
    let lhs = PairingResult {
        value: one.value + two.value,
        quad_error: 0.0,
        tail_bound: zero_tail_bound(div, phi, pc.sigma, 2)? + zero_tail_bound(div, &refl, pc.sigma, 2).unwrap_or(0.0),
    };
    let disc = crate::discrepancy::discrepancy_poly(f, div, pc.sigma, cfg)?;
    let c0 = disc.coeffs.first().copied().unwrap_or_default();
    let sup = phi.support();
    let t_max = sup.hi.abs().max(sup.lo.abs());
    let terms = expand(f, t_max, cfg.enumeration_cap)?;
    let mut acc = CompensatedSum::new();
    acc.add(2.0 * c0 * phi.eval(0.0));
    for t in &terms {
        let v = t.value;
        acc.add(v * (shift * v).exp() * t.b.unwrap_or_default() * (phi.eval(v) + phi.eval(-v)));
    }
    let rhs = PairingResult {
        value: acc.value(),
        quad_error: 0.0,
        tail_bound: 2.0 * disc.tail_bound * phi.eval(0.0).norm(),
    };
    Ok((lhs, rhs))
}

/// `sum_rho n [int_0^inf e^{(rho - beta) t} phi dt + phi(0) / (rho - beta)]`,
/// the zero side paired against `e^{-beta t} phi`.
fn pair_tilted_analytic(div: &Divisor, phi: &TestFunction, beta: f64) -> Result<PairingResult> {
    let b = Complex64::new(beta, 0.0);
    let on = div.locate(b)?;
    let p0 = phi.eval(0.0);
    let mut acc = CompensatedSum::new();
    for e in &div.entries {
        let n = f64::from(e.n);
        let a = e.rho - b;
        let l = phi.laplace_half(a)?;
        if on.is_some_and(|o| o.rho == e.rho) {
            acc.add(n * l);
        } else {
            acc.add(n * (l + p0 / a));
        }
    }
    Ok(PairingResult { value: acc.value(), quad_error: 0.0, tail_bound: 0.0 })
}

/// Closed-form theta distributions on the open half line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaKind {
    /// `W(1/Gamma)(t) = sum_{n>=0} e^{-n t} = 1 / (1 - e^{-t})`.
    InverseGammaShift,
}

impl std::str::FromStr for ThetaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inverse_gamma_shift" => Ok(Self::InverseGammaShift),
            other => Err(Error::OutOfRange(format!("unknown theta '{other}'"))),
        }
    }
}

/// Value of a theta distribution at `t > 0`.
pub fn closed_theta(kind: ThetaKind, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonpositiveT);
    }
    match kind {
        ThetaKind::InverseGammaShift => Ok(-1.0 / (-t).exp_m1()),
    }
}

/// Hadamard-regularized pairing
/// `int_0^inf W(t) e^{-sigma1 t} (psi(t) - sum_{l <= d-2} psi^{(l)}(0) t^l / l!) dt`
/// with `psi = e^{sigma1 t} phi`.
pub fn hadamard_regularized_pair(kind: ThetaKind, phi: &TestFunction, sigma1: f64, d: u32, cfg: &NumericsConfig) -> Result<Complex64> {
    if d < 1 {
        return Err(Error::DivergentRegularization("d must be at least 1".into()));
    }
    let s1 = Complex64::new(sigma1, 0.0);
    let jets: Vec<Complex64> = (0..d.saturating_sub(1) as usize).map(|l| tilted_deriv(phi, s1, l, 0.0)).collect();
    let integrand = |t: f64| -> Complex64 {
        let w = closed_theta(kind, t).unwrap_or(f64::NAN);
        let mut taylor = Complex64::default();
        let mut tp = 1.0;
        for (l, j) in jets.iter().enumerate() {
            taylor += j * tp;
            tp *= t / (l + 1) as f64;
        }
        w * (phi.eval(t) - (-sigma1 * t).exp() * taylor)
    };
    // t |integrand| must vanish at the origin for the integral to converge.
    let (a, b) = (1e-4 * integrand(1e-4).norm(), 1e-7 * integrand(1e-7).norm());
    if !b.is_finite() || b > 0.5 * a && b > 1e-12 {
        return Err(Error::DivergentRegularization(format!("t W(t) (phi - jet) ~ {b:e} near 0")));
    }
    let opts: QuadOptions = cfg.into();
    let head = integrate(integrand, 0.0, 1.0, &opts)?;
    let tail = integrate_semi_infinite(integrand, 1.0, &opts)?;
    Ok(head.value + tail.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::{digamma, EULER_GAMMA};
    use crate::zeros::{rational_divisor, reduce_rational};

    #[test]
    fn cexpm1_small_arguments() {
        let z = Complex64::new(1e-12, -2e-12);
        assert!((cexpm1(z) - (z + 0.5 * z * z)).norm() < 1e-30);
        let w = Complex64::new(0.3, 2.0);
        assert!((cexpm1(w) - (w.exp() - 1.0)).norm() < 1e-15);
    }

    #[test]
    fn theta_values() {
        assert!((closed_theta(ThetaKind::InverseGammaShift, 2f64.ln()).unwrap() - 2.0).abs() < 1e-15);
        assert!((closed_theta(ThetaKind::InverseGammaShift, 50.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(closed_theta(ThetaKind::InverseGammaShift, 0.0), Err(Error::NonpositiveT)));
    }

    #[test]
    fn k_ell_against_theta_for_inverse_gamma() {
        let div = Divisor::one_sided(Complex64::default(), Complex64::new(-1.0, 0.0), 1, 60);
        for t in [0.5, 1.0, 3.0] {
            let k = k_ell_sum(&div, 0, Complex64::default(), t).unwrap();
            let th = closed_theta(ThetaKind::InverseGammaShift, t).unwrap();
            assert!((k.value.re - th).abs() <= k.tail_bound + 1e-14, "t={t}");
            assert!(k.tail_bound < 1e-10);
        }
    }

    #[test]
    fn hadamard_pair_is_gauss_digamma() {
        let cfg = NumericsConfig::default();
        for s in [1.0, 1.5, 2.5, 4.0] {
            let phi = TestFunction::exponential(Complex64::new(s, 0.0));
            let v = hadamard_regularized_pair(ThetaKind::InverseGammaShift, &phi, 1.0, 2, &cfg).unwrap();
            let expect = -EULER_GAMMA - digamma(Complex64::new(s, 0.0)).unwrap().re;
            assert!((v.re - expect).abs() < 1e-10, "s={s}: {v} vs {expect}");
        }
        let phi = TestFunction::exponential(Complex64::new(2.0, 0.0));
        assert!(matches!(
            hadamard_regularized_pair(ThetaKind::InverseGammaShift, &phi, 1.0, 1, &cfg),
            Err(Error::DivergentRegularization(_))
        ));
    }

    #[test]
    fn bump_pairing_independent_of_sigma() {
        let f = FiniteDirichletSeries::real(&[1.0, 2.0], &[0.5, -0.8]).unwrap();
        let div = rational_divisor(&f, &reduce_rational(&f).unwrap(), 40.0);
        let phi = TestFunction::bump(0.5, 4.0).unwrap();
        let cfg = NumericsConfig::default();
        let base = pair_zero_side(&div, &phi, &PairingConfig::new(Complex64::new(2.0, 0.0), 2), &cfg).unwrap();
        for (s, d) in [(Complex64::new(3.0, 0.0), 2), (Complex64::new(1.0, 1.0), 2), (Complex64::new(2.0, 0.0), 3)] {
            let p = pair_zero_side(&div, &phi, &PairingConfig::new(s, d), &cfg).unwrap();
            assert!((p.value - base.value).norm() < 1e-8, "{s} {d}: {} vs {}", p.value, base.value);
        }
    }

    #[test]
    fn quadrature_and_analytic_paths_agree() {
        let f = FiniteDirichletSeries::real(&[1.0, 2.0], &[0.5, -0.8]).unwrap();
        let div = rational_divisor(&f, &reduce_rational(&f).unwrap(), 30.0);
        let cfg = NumericsConfig::default();
        for phi in [TestFunction::bump(0.5, 3.0).unwrap(), TestFunction::gaussian(2.0, 0.5).unwrap()] {
            let pc = PairingConfig::new(Complex64::new(2.0, 0.0), 2);
            let q = pair_zero_side(&div, &phi, &pc, &cfg).unwrap();
            let a = pair_zero_side_analytic(&div, &phi, &pc).unwrap();
            assert!((q.value - a.value).norm() < 1e-9, "{phi}: {} vs {}", q.value, a.value);
        }
    }
}
