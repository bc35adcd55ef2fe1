//! Riemann zeta: zero tables, prime support, the archimedean functional and
//! the explicit formula.
//!
//! Zeros are read from tables, never computed. Ordinates are taken as exact
//! heights of simple zeros on the critical line; reports record this as an
//! assumption on the data.

use std::f64::consts::{LN_2, PI};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::NumericsConfig;
use crate::error::{Error, Result};
use crate::numerics::quad::{integrate_panels, integrate_semi_infinite, QuadOptions};
use crate::numerics::special::{digamma, erfc, EULER_GAMMA};
use crate::numerics::sum::CompensatedSum;
use crate::testfn::{gaussian_laplace_half, TestFunction};

/// Accepted range of the first ordinate.
pub const FIRST_ZERO_GATE: (f64, f64) = (14.0, 14.2);
/// Largest prime-power cutoff `T` (primes up to `e^T` are sieved).
pub const MAX_PRIME_LOG: f64 = 30.0;
/// Assumption recorded in every report built on a zero table.
pub const ZERO_TABLE_ASSUMPTION: &str = "ordinates taken as simple zeros on the critical line, as supplied";

const BUILTIN_ZEROS: &str = include_str!("../data/zeta_zeros_100.txt");

/// Validated ordinates `gamma_n > 0` of nontrivial zeros `1/2 + i gamma_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroTable {
    pub ordinates: Vec<f64>,
    pub source: String,
}

impl ZeroTable {
    /// Parses one ordinate per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut ordinates = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let x: f64 = line.parse().map_err(|_| Error::ParseError { line: i + 1, msg: format!("not a number: {line:?}") })?;
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::ParseError { line: i + 1, msg: format!("ordinate must be positive, got {x}") });
            }
            if let Some(&prev) = ordinates.last() {
                if x <= prev {
                    return Err(Error::MonotonicityError(ordinates.len()));
                }
            }
            ordinates.push(x);
        }
        let Some(&first) = ordinates.first() else {
            return Err(Error::ParseError { line: 0, msg: "no ordinates".into() });
        };
        if !(FIRST_ZERO_GATE.0..=FIRST_ZERO_GATE.1).contains(&first) {
            return Err(Error::SanityGateError(first));
        }
        Ok(Self { ordinates, source: source.to_string() })
    }

    /// The first 100 ordinates shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_ZEROS, "builtin:first-100").expect("builtin table is valid")
    }

    pub fn count(&self) -> usize {
        self.ordinates.len()
    }

    /// The first `n` ordinates.
    pub fn truncated(&self, n: usize) -> Self {
        Self { ordinates: self.ordinates[..n.min(self.count())].to_vec(), source: format!("{} (first {n})", self.source) }
    }

    pub fn max_ordinate(&self) -> f64 {
        *self.ordinates.last().expect("tables are non-empty")
    }
}

/// Reads and validates a zero table.
pub fn load_zero_table(path: impl AsRef<Path>) -> Result<ZeroTable> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    ZeroTable::parse(&text, &path.display().to_string())
}

/// One atom `Lambda(n) delta_{log n}` with `n = p^k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimePower {
    /// `k log p`.
    pub position: f64,
    /// `log p`.
    pub weight: f64,
    pub n: u64,
}

/// Prime powers `p^k` with `k log p <= T`, ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeSupport {
    pub t_max: f64,
    pub terms: Vec<PrimePower>,
}

/// Sieves primes up to `e^T` and lists their powers.
pub fn prime_support(t_max: f64, cfg: &NumericsConfig) -> Result<PrimeSupport> {
    if !(t_max > 0.0) {
        return Err(Error::NonpositiveT);
    }
    let limit = t_max.exp();
    if t_max > MAX_PRIME_LOG || limit > cfg.prime_sieve_cap as f64 {
        return Err(Error::BudgetExceeded(format!("sieve up to e^{t_max} = {limit:e} exceeds the cap {:e}", cfg.prime_sieve_cap)));
    }
    // Guard against rounding at exact prime powers such as T = log 9.
    let limit = (limit * (1.0 + 1e-12)).floor() as u64;
    let mut terms = Vec::new();
    if limit >= 2 {
        let mut composite = vec![false; limit as usize + 1];
        for p in 2..=limit {
            if composite[p as usize] {
                continue;
            }
            let mut q = p * p;
            while q <= limit {
                composite[q as usize] = true;
                q += p;
            }
            let weight = (p as f64).ln();
            let mut pk = p;
            loop {
                terms.push(PrimePower { position: (pk as f64).ln(), weight, n: pk });
                match pk.checked_mul(p) {
                    Some(next) if next <= limit => pk = next,
                    _ => break,
                }
            }
        }
    }
    terms.sort_by_key(|a| a.n);
    Ok(PrimeSupport { t_max, terms })
}

/// `int_0^inf (e^{-t}/t - e^{-s t}/(1 - e^{-t})) dt`, which equals `psi(s)`.
/// The cancellation at `t -> 0` is handled by a Taylor expansion on
/// `[0, 1e-4]`.
pub fn gauss_digamma_integral(s: Complex64, cfg: &NumericsConfig) -> Result<Complex64> {
    if !(s.re > 0.0) {
        return Err(Error::OutOfRange(format!("Gauss integral needs Re s > 0, got {s}")));
    }
    const CUT: f64 = 1e-4;
    // integrand = c0 + c1 t + c2 t^2 + O(t^3)
    let c0 = s - 1.5;
    let c1 = 5.0 / 12.0 + 0.5 * s - 0.5 * s * s;
    let c2 = -1.0 / 6.0 + s / 12.0 - 0.25 * s * s + s * s * s / 6.0;
    let head = c0 * CUT + c1 * CUT * CUT / 2.0 + c2 * CUT.powi(3) / 3.0;
    let opts = QuadOptions::from(cfg);
    let tail = integrate_semi_infinite(
        |t| {
            let em = -(-t).exp_m1();
            Complex64::new((-t).exp() / t, 0.0) - (-s * t).exp() / em
        },
        CUT,
        &opts,
    )?;
    Ok(head + tail.value)
}

/// `int_0^inf (1/(1 - e^{-t}) - 1/t) e^{-t} dt = gamma`.
pub fn euler_gamma_integral(cfg: &NumericsConfig) -> Result<f64> {
    let opts = QuadOptions::from(cfg);
    let q = integrate_semi_infinite(
        |t| {
            let bracket = if t < 1e-4 { 0.5 + t / 12.0 - t.powi(3) / 720.0 } else { 1.0 / -(-t).exp_m1() - 1.0 / t };
            Complex64::new(bracket * (-t).exp(), 0.0)
        },
        0.0,
        &opts,
    )?;
    Ok(q.value.re)
}

/// Archimedean weight `Psi(t) = -log pi + Re psi(1/4 + i t / 2)`.
pub fn psi_archimedean(t: f64) -> f64 {
    -PI.ln() + digamma(Complex64::new(0.25, 0.5 * t)).expect("Re = 1/4 is off the poles").re
}

fn gaussian_params(phi: &TestFunction) -> Result<(f64, f64)> {
    match *phi {
        TestFunction::Gaussian { mu, s } => Ok((mu, s)),
        _ => Err(Error::InvalidTestFunction(format!("{phi} is not a gaussian"))),
    }
}

/// Weil functional `(1/2 pi) int Psi(t) hat phi(t) dt` for a gaussian,
/// truncated where `|hat phi| < 1e-16`. Returns the value and the
/// quadrature error estimate.
pub fn weil_functional(phi: &TestFunction, cfg: &NumericsConfig) -> Result<(Complex64, f64)> {
    let (mu, s) = gaussian_params(phi)?;
    let reach = (2.0 * 16.0 * 10f64.ln()).sqrt() / s;
    let panels = ((2.0 * reach * (mu.abs() + 1.0) / PI).ceil() as usize).clamp(8, 4000);
    let opts = QuadOptions::from(cfg);
    let q = integrate_panels(
        |t| psi_archimedean(t) * phi.fourier(Complex64::new(t, 0.0)).expect("gaussians have a transform"),
        -reach,
        reach,
        panels,
        &opts,
    )?;
    Ok((q.value / (2.0 * PI), q.error / (2.0 * PI)))
}

/// Upper bound on the zero count density `N'(y) <= log(y / 2 pi) / 2 pi + 1 / y`
/// used for tails beyond a table.
fn zero_density(y: f64) -> f64 {
    ((y / (2.0 * PI)).ln().max(0.0) / (2.0 * PI)) + 1.0 / y.max(1.0)
}

/// `int_T^inf e^{c u} N(u; mu, s^2) du`.
fn gaussian_weighted_tail(mu: f64, s: f64, c: f64, t: f64) -> f64 {
    (c * mu + 0.5 * c * c * s * s).exp() * 0.5 * erfc((t - mu - c * s * s) / (s * 2f64.sqrt()))
}

/// Bound on the prime atoms beyond `T` paired with `|phi(u)| + |phi(-u)|`
/// and weight `n^{-beta} Lambda(n)`, from `psi(x) <= 1.04 x` and a boundary term.
fn prime_tail_bound(mu: f64, s: f64, beta: f64, t: f64) -> f64 {
    let c = 1.0 - beta;
    let phi_at = |u: f64| (-(u - mu).powi(2) / (2.0 * s * s)).exp() / (s * (2.0 * PI).sqrt());
    let integral = gaussian_weighted_tail(mu, s, c, t) + gaussian_weighted_tail(-mu, s, c, t);
    let boundary = t * (c * t).exp() * (phi_at(t) + phi_at(-t));
    1.04 * integral + boundary
}

/// Archimedean and pole terms on the right-hand side of the explicit formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhsTerms {
    pub archimedean: Complex64,
    pub poles: Complex64,
    pub primes: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExplicitBudgets {
    pub zero_tail: f64,
    pub prime_tail: f64,
    pub quad: f64,
}

impl ExplicitBudgets {
    pub fn total(&self) -> f64 {
        self.zero_tail + self.prime_tail + self.quad
    }
}

/// Both sides of the explicit formula for one gaussian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplicitReport {
    pub phi: TestFunction,
    pub zeros_used: usize,
    pub t_max: f64,
    pub lhs: Complex64,
    pub rhs_terms: RhsTerms,
    pub residual: f64,
    pub budgets: ExplicitBudgets,
    pub assumption: String,
}

impl ExplicitReport {
    pub fn rhs(&self) -> Complex64 {
        self.rhs_terms.archimedean + self.rhs_terms.poles + self.rhs_terms.primes
    }
}

/// `sum_gamma hat phi(gamma) = hat phi(i/2) + hat phi(-i/2) + weil(phi)
/// - sum_{k log p <= T} log p p^{-k/2} (phi(k log p) + phi(-k log p))`,
/// the zero sum running over `+-gamma` for every tabulated ordinate.
pub fn explicit_formula_check(phi: &TestFunction, zt: &ZeroTable, t_max: f64, cfg: &NumericsConfig) -> Result<ExplicitReport> {
    let (mu, s) = gaussian_params(phi)?;
    let hat = |x: Complex64| phi.fourier(x).expect("gaussians have a transform");
    let mut lhs = CompensatedSum::new();
    for &g in &zt.ordinates {
        lhs.add(hat(Complex64::new(g, 0.0)));
        lhs.add(hat(Complex64::new(-g, 0.0)));
    }
    let half_i = Complex64::new(0.0, 0.5);
    let poles = hat(half_i) + hat(-half_i);
    let (archimedean, quad) = weil_functional(phi, cfg)?;
    let primes = prime_support(t_max, cfg)?;
    let mut prime_sum = CompensatedSum::new();
    for a in &primes.terms {
        let w = a.weight * (-0.5 * a.position).exp();
        prime_sum.add(-w * (phi.eval(a.position) + phi.eval(-a.position)));
    }
    // |hat phi(x)| = exp(-s^2 x^2 / 2); two signs of gamma per zero.
    let big = zt.max_ordinate();
    let zero_tail = 2.0
        * (zero_density(big) * (PI / 2.0).sqrt() / s * erfc(s * big / 2f64.sqrt())
            + big.ln().max(1.0) * (-0.5 * s * s * big * big).exp());
    let rhs_terms = RhsTerms { archimedean, poles, primes: prime_sum.value() };
    let lhs = lhs.value();
    let residual = (lhs - (archimedean + poles + rhs_terms.primes)).norm();
    Ok(ExplicitReport {
        phi: phi.clone(),
        zeros_used: zt.count(),
        t_max,
        lhs,
        rhs_terms,
        residual,
        budgets: ExplicitBudgets { zero_tail, prime_tail: prime_tail_bound(mu, s, 0.5, t_max), quad },
        assumption: ZERO_TABLE_ASSUMPTION.to_string(),
    })
}

/// Estimate of `c_0(zeta, beta)` from several gaussians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct C0Estimate {
    pub beta: f64,
    pub value: f64,
    pub per_phi: Vec<f64>,
    pub spread: f64,
    pub budget: f64,
    pub assumption: String,
}

/// Default test functions for [`extract_c0`].
pub fn default_c0_gaussians() -> Vec<TestFunction> {
    [0.4, 0.6, 0.8].iter().map(|&s| TestFunction::Gaussian { mu: 0.0, s }).collect()
}

/// `L_H(z) = int_0^inf e^{z t} (phi(t) + phi(-t)) dt` for a gaussian.
fn even_laplace(mu: f64, s: f64, z: Complex64) -> Complex64 {
    gaussian_laplace_half(mu, s, z) + gaussian_laplace_half(-mu, s, z)
}

/// Solves the symmetric formula
/// `sum_rho n_rho e^{(rho - beta)|t|} = 2 c_0 delta_0 - sum log p p^{-k beta} (delta_{k log p} + delta_{-k log p})`
/// for `c_0`. Each point of the divisor contributes the regularized pairing
/// `n [L_H(z) + H(0)/z]`, `z = rho - beta`, `H(t) = phi(t) + phi(-t)`:
/// tabulated zeros in closed form, the trivial zeros `-2n` as one integral
/// `int e^{-beta t} (H - H(0)) / (e^{2t} - 1)`, and the pole at `1` with
/// `n = -1`.
pub fn extract_c0(zt: &ZeroTable, beta: f64, phis: &[TestFunction], t_max: f64, cfg: &NumericsConfig) -> Result<C0Estimate> {
    if !(beta.is_finite() && beta < 1.0 && beta > -2.0) {
        return Err(Error::OutOfRange(format!("beta must lie in (-2, 1), got {beta}")));
    }
    if phis.is_empty() {
        return Err(Error::InvalidTestFunction("no test functions".into()));
    }
    let primes = prime_support(t_max, cfg)?;
    let opts = QuadOptions::from(cfg);
    let mut per_phi = Vec::with_capacity(phis.len());
    let mut budget: f64 = 0.0;
    for phi in phis {
        let (mu, s) = gaussian_params(phi)?;
        let h = |t: f64| (phi.eval(t) + phi.eval(-t)).re;
        let h0 = h(0.0);
        if h0.abs() < 1e-300 {
            return Err(Error::InvalidTestFunction(format!("{phi} vanishes at the origin")));
        }
        let reg = |z: Complex64| even_laplace(mu, s, z) + h0 / z;
        let mut zeros = CompensatedSum::new();
        for &g in &zt.ordinates {
            let z = Complex64::new(0.5 - beta, g);
            zeros.add(reg(z) + reg(z.conj()));
        }
        let trivial = integrate_semi_infinite(
            |t| {
                let den = (2.0 * t).exp_m1();
                if !den.is_finite() {
                    return Complex64::default();
                }
                Complex64::new((-beta * t).exp() * (h(t) - h0) / den, 0.0)
            },
            0.0,
            &opts,
        )?;
        let pole = -reg(Complex64::new(1.0 - beta, 0.0));
        let mut prime_sum = CompensatedSum::new();
        for a in &primes.terms {
            prime_sum.add(Complex64::new(a.weight * (-beta * a.position).exp() * h(a.position), 0.0));
        }
        let total = zeros.value() + trivial.value + pole + prime_sum.value();
        per_phi.push(total.re / h0);
        // Pairs beyond the table: |reg(z) + reg(conj z)| <= 2 |H''(0)| / |z|^3 + O(|z|^-4).
        let big = zt.max_ordinate();
        let h2 = (h(1e-3) + h(-1e-3) - 2.0 * h0) / 1e-6;
        let zero_tail = 2.0 * (h2.abs() + 1.0) * zero_density(big) / (big * big);
        let tail = zero_tail + prime_tail_bound(mu, s, beta, t_max) + trivial.error;
        budget = budget.max(tail / h0.abs());
    }
    let value = per_phi.iter().sum::<f64>() / per_phi.len() as f64;
    let spread = per_phi.iter().map(|c| (c - value).abs()).fold(0.0, f64::max);
    Ok(C0Estimate { beta, value, per_phi, spread, budget, assumption: ZERO_TABLE_ASSUMPTION.to_string() })
}

/// `c_0(chi_0, sigma)` for `chi_0(s) = pi^{-s/2} Gamma(s/2)`, whose divisor is
/// the poles `-2n`, `n >= 0`: `(log pi)/2 - psi(sigma/2)/2`.
pub fn c0_chi0(sigma: Complex64) -> Result<Complex64> {
    match digamma(0.5 * sigma) {
        Ok(p) => Ok(0.5 * PI.ln() - 0.5 * p),
        Err(Error::PoleAtNonPositiveInteger(_)) => Err(Error::PoleAtSigma(sigma)),
        Err(e) => Err(e),
    }
}

/// Closed form `c_0(zeta, 0) = -log(2 pi)`.
pub fn c0_zeta_at_zero() -> f64 {
    -(2.0 * PI).ln()
}

/// `c_0(zeta, 1/2) = -c_0(chi_0, 1/2) = -(log pi)/2 - gamma/2 - pi/4 - (3/2) log 2`.
pub fn c0_zeta_at_half() -> f64 {
    -0.5 * PI.ln() - 0.5 * EULER_GAMMA - 0.25 * PI - 1.5 * LN_2
}

/// Trivial-zero part `W_0(t) = -e^{|t|/2} + e^{-3|t|/2} / (2 sinh |t|)`.
pub fn w0_closed(t: f64) -> f64 {
    let a = t.abs();
    -(0.5 * a).exp() + (-1.5 * a).exp() / (2.0 * a.sinh())
}

/// `-e^{|t|/2} + sum_{n=1}^{N} e^{-(2n + 1/2)|t|}`.
pub fn w0_truncated(t: f64, n: usize) -> f64 {
    let a = t.abs();
    -(0.5 * a).exp() + (1..=n).map(|k| (-(2.0 * k as f64 + 0.5) * a).exp()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> NumericsConfig {
        NumericsConfig::default()
    }

    #[test]
    fn table_validation() {
        assert_eq!(ZeroTable::builtin().count(), 100);
        assert!(matches!(ZeroTable::parse("", "t"), Err(Error::ParseError { .. })));
        assert!(matches!(ZeroTable::parse("14.13\n25.01\n21.02\n", "t"), Err(Error::MonotonicityError(2))));
        assert!(matches!(ZeroTable::parse("21.02\n25.01\n", "t"), Err(Error::SanityGateError(_))));
        assert!(matches!(ZeroTable::parse("14.13\n-1\n", "t"), Err(Error::ParseError { line: 2, .. })));
    }

    #[test]
    fn prime_powers() {
        let p = prime_support(1.0, &cfg()).unwrap();
        assert_eq!(p.terms.len(), 1);
        assert_eq!(p.terms[0].n, 2);
        let p = prime_support(9f64.ln(), &cfg()).unwrap();
        let ns: Vec<u64> = p.terms.iter().map(|a| a.n).collect();
        assert_eq!(ns, vec![2, 3, 4, 5, 7, 8, 9]);
        assert!(matches!(prime_support(31.0, &cfg()), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn gauss_integral_matches_digamma() {
        for s in [Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(2.5, 0.0), Complex64::new(3.0, 2.0)] {
            let v = gauss_digamma_integral(s, &cfg()).unwrap();
            assert!((v - digamma(s).unwrap()).norm() < 1e-9, "{s}: {v}");
        }
        assert!((euler_gamma_integral(&cfg()).unwrap() - EULER_GAMMA).abs() < 1e-10);
    }

    #[test]
    fn trivial_zero_profile() {
        for t in [0.5, 1.0, 2.0] {
            let n = 30;
            assert!((w0_closed(t) - w0_truncated(t, n)).abs() <= 2.0 * (-2.0 * n as f64 * t).exp());
        }
    }

    #[test]
    fn c0_chi0_values() {
        assert!(matches!(c0_chi0(Complex64::default()), Err(Error::PoleAtSigma(_))));
        let v = c0_chi0(Complex64::new(0.5, 0.0)).unwrap();
        assert!((v.re + c0_zeta_at_half()).abs() < 1e-13);
    }

    #[test]
    fn explicit_formula_residual_shrinks() {
        let zt = ZeroTable::builtin();
        let phi = TestFunction::gaussian(LN_2, 0.05).unwrap();
        let r: Vec<f64> = [25, 50, 100]
            .iter()
            .map(|&n| explicit_formula_check(&phi, &zt.truncated(n), 4.0, &cfg()).unwrap().residual)
            .collect();
        assert!(r[2] < 1e-3 && r[1] < r[0] && r[2] <= r[1] + 1e-12, "{r:?}");
    }

    #[test]
    fn c0_at_zero_from_zeros_and_primes() {
        let e = extract_c0(&ZeroTable::builtin(), 0.0, &default_c0_gaussians(), 10.0, &cfg()).unwrap();
        assert!((e.value - c0_zeta_at_zero()).abs() < 1e-5, "{e:?}");
        assert!(e.spread < 2e-3);
    }
}
