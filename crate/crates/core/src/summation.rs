//! Euler-Maclaurin, Abel-Plana and the Ramanujan constant, read off the
//! Poisson-Newton formula of `1 - exp(-s)`.
//!
//! The zeros of `(1 - e^{-s}) / s` are `2 pi i k`, `k != 0`. Pairing their
//! exponentials with a test function and integrating by parts `M` times gives
//!
//! ```text
//! sum_{n>=0} phi(n) = phi(0)/2 + int_0^inf phi
//!                   - sum_{l=1}^{M} K_l(0,-sigma) ((sigma - D)^{l-1} phi)(0)
//!                   + int_0^inf P_M({t}) ((sigma - D)^M phi)(t) dt
//! ```
//!
//! with `K_l(0,-sigma) = sum_{k != 0} (2 pi i k + sigma)^{-l}` and the periodic
//! kernel `P_M(x) = sum_{k != 0} e^{2 pi i k x} / (2 pi i k + sigma)^M`. At
//! `sigma = 0` this is the classical formula with `K_{2l}(0,0) = -B_{2l}/(2l)!`
//! and `P_M(x) = -B_M(x)/M!`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::NumericsConfig;
use crate::error::{Error, Result};
use crate::numerics::quad::{integrate, integrate_semi_infinite, QuadOptions};
use crate::numerics::special::{bernoulli, bernoulli_polynomial, binomial, factorial, hurwitz_zeta};
use crate::numerics::sum::CompensatedSum;
use crate::testfn::{tilted_deriv, TestFunction};

/// Largest Bernoulli truncation order.
pub const MAX_EM_ORDER: u32 = 60;
/// Panels of the remainder integral before the sum is declared divergent.
const MAX_PANELS: usize = 100_000;

/// Settings of the Euler-Maclaurin routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmConfig {
    /// Bernoulli truncation order; the remainder involves `phi^{(2m)}`.
    pub m: u32,
    /// Absolute tolerance of the remainder integral.
    pub remainder_quad_tol: f64,
    /// Shift of the generalized coefficients, `0` for the classical formula.
    pub sigma: Complex64,
}

impl Default for EmConfig {
    fn default() -> Self {
        Self { m: 3, remainder_quad_tol: 1e-13, sigma: Complex64::default() }
    }
}

impl EmConfig {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 || m > MAX_EM_ORDER {
            return Err(Error::OutOfRange(format!("m must lie in 1..={MAX_EM_ORDER}, got {m}")));
        }
        Ok(Self { m, ..Self::default() })
    }

    pub fn with_sigma(mut self, sigma: Complex64) -> Self {
        self.sigma = sigma;
        self
    }
}

/// A summation result with an error estimate for its remainder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumResult {
    pub value: Complex64,
    pub remainder_bound: f64,
    /// Correction terms used: boundary terms for Euler-Maclaurin, panels for
    /// Abel-Plana.
    pub terms_used: u32,
}

/// `K_l(0, -sigma) = sum_{k != 0} (2 pi i k + sigma)^{-l}`, summed
/// symmetrically for `l = 1`. For `l >= 2` this is
/// `(2 pi i)^{-l} [zeta(l, 1 + q) + (-1)^l zeta(l, 1 - q)]` with
/// `q = sigma / (2 pi i)`.
pub fn k_l_zero_minus_sigma(l: u32, sigma: Complex64) -> Result<Complex64> {
    if l == 0 {
        return Err(Error::OutOfRange("K_0(0) is not a number".into()));
    }
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    if l == 1 {
        if sigma.norm() < 1e-3 {
            let s2 = sigma * sigma;
            return Ok(sigma * (1.0 / 12.0 - s2 / 720.0 + s2 * s2 / 30240.0));
        }
        let k = sigma / two_pi_i;
        if (k.re - k.re.round()).abs() < 1e-13 && k.im.abs() < 1e-13 {
            return Err(Error::PoleAtQ(format!("sigma = {sigma}")));
        }
        return Ok(0.5 / (0.5 * sigma).tanh() - sigma.inv());
    }
    if sigma == Complex64::default() {
        return Ok(if l % 2 == 0 { Complex64::new(-bernoulli(l as usize)? / factorial(l), 0.0) } else { Complex64::default() });
    }
    let q = sigma / two_pi_i;
    let s = Complex64::new(f64::from(l), 0.0);
    let one = Complex64::new(1.0, 0.0);
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    let z = hurwitz_zeta(s, one + q)? + sign * hurwitz_zeta(s, one - q)?;
    Ok(z * two_pi_i.powi(-(l as i32)))
}

/// `B_n(x) / n!` for `x` in `[0, 1]`: the polynomial for small `n`, the
/// Fourier series `-sum_{k != 0} e^{2 pi i k x} / (2 pi i k)^n` otherwise.
fn scaled_bernoulli(n: usize, x: f64) -> f64 {
    if n <= 12 {
        let c = bernoulli_polynomial(n).expect("index within table");
        return c.iter().rev().fold(0.0, |acc, c| acc * x + c) / factorial(n as u32);
    }
    // -2 Re sum_{k>=1} e^{2 pi i k x} / (2 pi i k)^n
    let mut acc = 0.0;
    for k in 1..=64u32 {
        let w = 2.0 * PI * f64::from(k);
        let phase = w * x - 0.5 * PI * n as f64;
        acc += w.powi(-(n as i32)) * phase.cos();
        if f64::from(k + 1).powi(-(n as i32)) < 1e-18 {
            break;
        }
    }
    -2.0 * acc
}

/// The periodic kernel `P_M(x)`, `x` in `[0, 1)`.
struct Kernel {
    m: u32,
    sigma: Complex64,
}

impl Kernel {
    fn new(m: u32, sigma: Complex64) -> Result<Self> {
        if sigma.norm() > 2.0 && sigma.re.abs() < 0.25 {
            return Err(Error::OutOfRange(format!("generalized kernel needs |sigma| <= 2 or |Re sigma| >= 0.25, got {sigma}")));
        }
        // Reject the poles 2 pi i k early.
        k_l_zero_minus_sigma(1, sigma)?;
        Ok(Self { m, sigma })
    }

    fn eval(&self, x: f64) -> Complex64 {
        let m = self.m as usize;
        let sigma = self.sigma;
        if sigma == Complex64::default() {
            return Complex64::new(-scaled_bernoulli(m, x), 0.0);
        }
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        if sigma.norm() <= 2.0 {
            // (-1)^{M-1} sum_{n >= M} C(n-1, M-1) B_n(1-x)/n! sigma^{n-M}
            let mut acc = Complex64::default();
            let mut sp = Complex64::new(1.0, 0.0);
            // |B_n(y)/n!| <= 4 (2 pi)^{-n} on [0, 1]
            let scale = (2.0 * PI).powi(-(m as i32));
            for n in m..m + 90 {
                let c = binomial(n as u32 - 1, m as u32 - 1);
                acc += sp * (c * scaled_bernoulli(n, 1.0 - x));
                sp *= sigma;
                if c * sp.norm() * (2.0 * PI).powi(-(n as i32 + 1)) < 1e-18 * scale {
                    break;
                }
            }
            return sign * acc;
        }
        let fact = factorial(self.m - 1);
        let mut acc = CompensatedSum::new();
        if sigma.re > 0.0 {
            // sum_{n>=0} (x+n)^{M-1} e^{-sigma (x+n)} / (M-1)!
            let peak = (m as f64 - 1.0) / sigma.re;
            for n in 0.. {
                let u = x + n as f64;
                let term = (-sigma * u).exp() * (u.powi(m as i32 - 1) / fact);
                acc.add(term);
                if u > peak && term.norm() < 1e-18 * acc.value().norm().max(1e-300) {
                    break;
                }
            }
        } else {
            // (-1)^M sum_{n>=1} (n-x)^{M-1} e^{sigma (n-x)} / (M-1)!
            let peak = (m as f64 - 1.0) / -sigma.re;
            for n in 1.. {
                let u = n as f64 - x;
                let term = (sigma * u).exp() * (u.powi(m as i32 - 1) / fact);
                acc.add(-sign * term);
                if u > peak && term.norm() < 1e-18 * acc.value().norm().max(1e-300) {
                    break;
                }
            }
        }
        acc.value() - sigma.powi(-(m as i32))
    }
}

/// `((sigma - D)^j phi)(t)`.
fn shifted_deriv(phi: &TestFunction, sigma: Complex64, j: usize, t: f64) -> Complex64 {
    if sigma == Complex64::default() {
        let d = phi.deriv(j, t);
        return if j % 2 == 0 { d } else { -d };
    }
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    sign * (sigma * t).exp() * tilted_deriv(phi, -sigma, j, t)
}

fn check_order(phi: &TestFunction, needed: usize) -> Result<()> {
    let available = phi.max_derivative_order();
    if needed > available {
        return Err(Error::DerivativeUnavailable { needed, available });
    }
    Ok(())
}

/// Boundary terms and remainder of the infinite formula, everything except
/// `phi(0)/2 + int phi`.
struct EmParts {
    boundary: Complex64,
    remainder: Complex64,
    remainder_error: f64,
}

fn em_parts(phi: &TestFunction, m: u32, sigma: Complex64, tol: f64) -> Result<EmParts> {
    let big_m = 2 * m;
    check_order(phi, big_m as usize)?;
    let kernel = Kernel::new(big_m, sigma)?;
    let mut boundary = CompensatedSum::new();
    for l in 1..=big_m {
        let k = k_l_zero_minus_sigma(l, sigma)?;
        if k != Complex64::default() {
            boundary.add(-k * shifted_deriv(phi, sigma, l as usize - 1, 0.0));
        }
    }
    // Tail estimate after panel j: two more integrations by parts.
    let k1 = k_l_zero_minus_sigma(big_m + 1, sigma)?.norm();
    let k2 = k_l_zero_minus_sigma(big_m + 2, sigma)?.norm();
    let extra = phi.max_derivative_order() > big_m as usize;
    let support = phi.support();
    let first = support.lo.max(0.0).floor() as usize;
    let last = if support.hi.is_finite() { Some(support.hi.ceil().max(0.0) as usize) } else { None };
    let opts = QuadOptions { abs_tol: tol * 1e-2, rel_tol: 1e-13, max_intervals: 2000 };
    let mut acc = CompensatedSum::new();
    let mut err = 0.0;
    let mut j = first;
    let mut tail = f64::INFINITY;
    while last.map_or(true, |l| j < l) {
        if j - first >= MAX_PANELS {
            return Err(Error::QuadratureFailure(format!("remainder integral still {tail:e} after {MAX_PANELS} panels")));
        }
        let lo = j as f64;
        let q = integrate(|t| kernel.eval(t - lo) * shifted_deriv(phi, sigma, big_m as usize, t), lo, lo + 1.0, &opts)?;
        acc.add(q.value);
        err += q.error;
        j += 1;
        let t = j as f64;
        tail = k1 * shifted_deriv(phi, sigma, big_m as usize, t).norm();
        if extra {
            tail += k2 * shifted_deriv(phi, sigma, big_m as usize + 1, t).norm();
        }
        if last.is_none() && tail < tol && q.value.norm() < tol.max(1e-3 * acc.value().norm()) {
            break;
        }
    }
    if last.is_some() {
        tail = 0.0;
    }
    Ok(EmParts { boundary: boundary.value(), remainder: acc.value(), remainder_error: err + tail })
}

/// `sum_{n=0}^{N} phi(n)` by the classical formula of order `m`. The
/// remainder `-int_0^N B_{2m}({t})/(2m)! phi^{(2m)}(t) dt` is the closed
/// form of the Fourier series over `k`, integrated over unit panels.
pub fn em_finite(phi: &TestFunction, n: u64, cfg: &EmConfig) -> Result<SumResult> {
    EmConfig::new(cfg.m)?;
    let m2 = 2 * cfg.m as usize;
    check_order(phi, m2)?;
    let nf = n as f64;
    let opts = QuadOptions { abs_tol: cfg.remainder_quad_tol * 1e-2, rel_tol: 1e-14, max_intervals: 2000 };
    let integral_opts = QuadOptions { abs_tol: cfg.remainder_quad_tol, rel_tol: 1e-13, max_intervals: 2000 };
    let panels = n.max(1) as usize;
    let integral = crate::numerics::quad::integrate_panels(|t| phi.eval(t), 0.0, nf, panels, &integral_opts)?;
    let mut acc = CompensatedSum::new();
    acc.add(integral.value);
    acc.add(0.5 * (phi.eval(0.0) + phi.eval(nf)));
    for l in 1..=cfg.m {
        let b = bernoulli(2 * l as usize)? / factorial(2 * l);
        let k = 2 * l as usize - 1;
        acc.add(b * (phi.deriv(k, nf) - phi.deriv(k, 0.0)));
    }
    let mut err = integral.error;
    for j in 0..n {
        let lo = j as f64;
        let q = integrate(|t| -scaled_bernoulli(m2, t - lo) * phi.deriv(m2, t), lo, lo + 1.0, &opts)?;
        acc.add(q.value);
        err += q.error;
    }
    Ok(SumResult { value: acc.value(), remainder_bound: err, terms_used: cfg.m })
}

/// `sum_{n>=0} phi(n)` by the infinite formula of order `m`, with the
/// generalized coefficients when `cfg.sigma != 0`.
pub fn em_infinite(phi: &TestFunction, cfg: &EmConfig) -> Result<SumResult> {
    EmConfig::new(cfg.m)?;
    let parts = em_parts(phi, cfg.m, cfg.sigma, cfg.remainder_quad_tol)?;
    let opts = QuadOptions { abs_tol: cfg.remainder_quad_tol, rel_tol: 1e-14, max_intervals: 5000 };
    let support = phi.support();
    let integral = if support.hi.is_finite() {
        let lo = support.lo.max(0.0);
        if support.hi > lo {
            crate::numerics::quad::integrate_panels(|t| phi.eval(t), lo, support.hi, 8, &opts)?
        } else {
            crate::numerics::quad::Quad { value: Complex64::default(), error: 0.0, intervals: 0 }
        }
    } else {
        integrate_semi_infinite(|t| phi.eval(t), 0.0, &opts)?
    };
    let value = 0.5 * phi.eval(0.0) + integral.value + parts.boundary + parts.remainder;
    Ok(SumResult { value, remainder_bound: parts.remainder_error + integral.error, terms_used: 2 * cfg.m })
}

/// `sum_{n>=0} phi(n) = int_0^inf phi + phi(0)/2
/// + i int_0^inf (phi(it) - phi(-it)) / (e^{2 pi t} - 1) dt`.
///
/// The growth and decay hypotheses are probed numerically: along vertical
/// lines at `x = 0, 1` up to `|y| = 640`, and through the vertical difference integral at
/// `x = 10, 20`, which must shrink.
pub fn abel_plana(phi: &TestFunction, cfg: &NumericsConfig) -> Result<SumResult> {
    let eval = |z: Complex64| {
        phi.eval_complex(z)
            .ok_or_else(|| Error::InvalidTestFunction(format!("{phi} has no holomorphic extension")))
    };
    // log(|phi(x + iy)| e^{-2 pi y}) must not increase along y = 5 * 2^k;
    // entire functions of order above one fail somewhere on this ladder.
    for x in [0.0, 1.0] {
        for sign in [1.0, -1.0] {
            let mut prev = f64::INFINITY;
            for k in 0..8 {
                let y = 5.0 * f64::from(1u32 << k);
                let lg = eval(Complex64::new(x, sign * y))?.norm().ln() - 2.0 * PI * y;
                if lg.is_nan() || lg == f64::INFINITY || lg > prev + 1e-9 {
                    return Err(Error::DecayHypothesisViolated(format!("|phi(x + iy)| e^(-2 pi y) grows at x = {x}, y = {}", sign * y)));
                }
                prev = lg;
            }
        }
    }
    let opts = QuadOptions::from(cfg);
    let vertical_gap = |x: f64| -> Result<f64> {
        let q = integrate_semi_infinite(
            |y| match (phi.eval_complex(Complex64::new(x, y)), phi.eval_complex(Complex64::new(x, -y))) {
                (Some(a), Some(b)) => Complex64::new((a - b).norm() * (-2.0 * PI * y).exp(), 0.0),
                _ => Complex64::new(f64::NAN, 0.0),
            },
            0.0,
            &opts,
        )?;
        Ok(q.value.re)
    };
    let (g10, g20) = (vertical_gap(10.0)?, vertical_gap(20.0)?);
    if !(g20 < g10 || g20 < 1e-14) {
        return Err(Error::DecayHypothesisViolated(format!(
            "vertical difference integral does not shrink: {g10:e} at x = 10, {g20:e} at x = 20"
        )));
    }
    let integral = integrate_semi_infinite(|t| phi.eval(t), 0.0, &opts)?;
    let vertical = integrate_semi_infinite(
        |t| {
            let den = (2.0 * PI * t).exp_m1();
            if !den.is_finite() {
                return Complex64::default();
            }
            let (a, b) = (phi.eval_complex(Complex64::new(0.0, t)), phi.eval_complex(Complex64::new(0.0, -t)));
            match (a, b) {
                (Some(a), Some(b)) => Complex64::i() * (a - b) / den,
                _ => Complex64::new(f64::NAN, 0.0),
            }
        },
        0.0,
        &opts,
    )?;
    let value = integral.value + 0.5 * eval(Complex64::default())? + vertical.value;
    Ok(SumResult { value, remainder_bound: integral.error + vertical.error, terms_used: (integral.intervals + vertical.intervals) as u32 })
}

/// Ramanujan constant `RC(phi) = -phi(0)/2 - sum_l B_{2l}/(2l)! phi^{(2l-1)}(0)`,
/// made finite by keeping the remainder of order `m` instead of summing the
/// divergent Bernoulli series. Orders `m = 2, 4, 6` must agree; the returned
/// value is the one whose last Bernoulli term is smallest, and the bound is
/// the spread plus the quadrature error.
pub fn ramanujan_constant(phi: &TestFunction, cfg: &NumericsConfig) -> Result<SumResult> {
    let tol = cfg.quad_abs_tol.max(1e-14);
    let mut values = Vec::new();
    for m in [2u32, 4, 6] {
        let parts = match em_parts(phi, m, Complex64::default(), tol) {
            Ok(p) => p,
            Err(Error::QuadratureFailure(msg)) => return Err(Error::NotRamanujanClass(format!("order {m}: {msg}"))),
            Err(e) => return Err(e),
        };
        let last = (bernoulli(2 * m as usize)? / factorial(2 * m) * phi.deriv(2 * m as usize - 1, 0.0)).norm();
        let value = -0.5 * phi.eval(0.0) + parts.boundary + parts.remainder;
        values.push((m, value, parts.remainder_error, last));
    }
    let spread = values.iter().flat_map(|a| values.iter().map(move |b| (a.1 - b.1).norm())).fold(0.0, f64::max);
    let scale = values.iter().map(|v| v.1.norm()).fold(1.0, f64::max);
    let err = values.iter().map(|v| v.2).fold(0.0, f64::max);
    if !(spread <= 1e-6 * scale + 100.0 * err) {
        return Err(Error::NotRamanujanClass(format!("orders 2, 4, 6 disagree by {spread:e}")));
    }
    let best = values.iter().min_by(|a, b| a.3.total_cmp(&b.3)).expect("three orders");
    Ok(SumResult { value: best.1, remainder_bound: spread + err, terms_used: 2 * best.0 })
}
