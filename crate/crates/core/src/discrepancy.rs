//! Discrepancy between the Hadamard interpolation of the zeros and the
//! logarithmic derivative: `c(f, sigma, s) = G(s, sigma) - f'(s)/f(s)`, a
//! polynomial in `s` of degree `d - 2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::NumericsConfig;
use crate::cramer::TruncatedSum;
use crate::error::{Error, Result};
use crate::numerics::sum::CompensatedSum;
use crate::series::FiniteDirichletSeries;
use crate::zeros::{Divisor, ON_DIVISOR_TOL};

/// `G(s, sigma) = sum_rho n_rho (s - sigma)^{d-1} / ((rho - sigma)^{d-1} (s - rho))`
/// for `d = 2` or `3`, written termwise as
/// `1/(s - rho) + 1/(rho - sigma) [+ (s - sigma)/(rho - sigma)^2]`. A point of
/// the divisor at `sigma` contributes `n_sigma / (s - sigma)`.
pub fn g_interp(div: &Divisor, sigma: Complex64, s: Complex64) -> Result<TruncatedSum> {
    if !(2..=3).contains(&div.d) {
        return Err(Error::UnsupportedM(div.d));
    }
    for e in &div.entries {
        if (e.rho - s).norm() <= ON_DIVISOR_TOL * e.rho.norm().max(1.0) {
            return Err(Error::NearPole(s));
        }
    }
    let on = div.locate(sigma)?;
    let ds = s - sigma;
    let mut acc = CompensatedSum::new();
    for e in &div.entries {
        let n = f64::from(e.n);
        if on.is_some_and(|o| o.rho == e.rho) {
            acc.add(n / ds);
            continue;
        }
        let a = e.rho - sigma;
        let mut term = (s - e.rho).inv() + a.inv();
        if div.d == 3 {
            term += ds / (a * a);
        }
        acc.add(n * term);
    }
    let mut bound = 0.0;
    if !div.towers.is_empty() {
        acc.add(div.tower_reciprocal_difference(s, sigma)?);
        if div.d == 3 {
            acc.add(ds * div.tower_power_tail(2, sigma)?);
        }
    } else if div.density.is_some() {
        let reach = sigma.im.abs().max(s.im.abs());
        bound = ds.norm().powi(div.d as i32 - 1) * div.omitted_power_bound(f64::from(div.d), reach);
        acc.add(asymptotic_tail(div, sigma, s));
    }
    Ok(TruncatedSum { value: acc.value(), tail_bound: bound })
}

/// Estimate of the terms of `G` omitted above the height cutoff `Y`. Zeros
/// beyond `Y` are replaced by a uniform density `D` on the line `Re = x`, the
/// mean real part of the listed zeros, which integrates in closed form to
/// `2D [atan(u/Y) + atan(v/Y)]` with `u = s - x`, `v = x - sigma` (plus
/// `-2DY (s - sigma) / (v^2 + Y^2)` when `d = 3`). Each half plane then gets a
/// boundary term `-term(Y) (N(Y) - D Y - c)`, where `c` is the mean offset of
/// the listed counting function from `D y`.
fn asymptotic_tail(div: &Divisor, sigma: Complex64, s: Complex64) -> Complex64 {
    let Some(dm) = div.density else { return Complex64::default() };
    let y = div.ymax;
    let total: f64 = div.entries.iter().map(|e| f64::from(e.n)).sum();
    if !(y.is_finite() && y > 0.0) || total == 0.0 {
        return Complex64::default();
    }
    let x = div.entries.iter().map(|e| f64::from(e.n) * e.rho.re).sum::<f64>() / total;
    let d = dm.per_height;
    let (u, v) = (s - x, Complex64::new(x, 0.0) - sigma);
    let mut est = 2.0 * d * ((u / y).atan() + (v / y).atan());
    if div.d == 3 {
        est -= 2.0 * d * y * (s - sigma) / (v * v + y * y);
    }
    let term = |rho: Complex64| {
        let a = rho - sigma;
        let mut t = (s - rho).inv() + a.inv();
        if div.d == 3 {
            t += (s - sigma) / (a * a);
        }
        t
    };
    for side in [1.0, -1.0] {
        // counting function of this half plane; real zeros count half
        let mut count = 0.0;
        let mut area = 0.0;
        for e in &div.entries {
            let h = side * e.rho.im;
            let w = if e.rho.im == 0.0 { 0.5 } else if h > 0.0 { 1.0 } else { 0.0 };
            count += w * f64::from(e.n);
            area += w * f64::from(e.n) * (y - h.max(0.0));
        }
        let offset = area / y - 0.5 * d * y;
        est -= term(Complex64::new(x, side * y)) * (count - d * y - offset);
    }
    est
}

/// Discrepancy polynomial at base point `sigma`, lowest degree first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyPoly {
    pub sigma: Complex64,
    pub coeffs: Vec<Complex64>,
    /// Largest deviation of a sample from the fitted polynomial.
    pub sample_residual: f64,
    /// Bound on the truncation error of the coefficients.
    pub tail_bound: f64,
}

/// Ordinates of the eight sample points on `Re s = sigma1 + 2`.
const SAMPLE_IM: [f64; 8] = [-1.75, -1.25, -0.75, -0.25, 0.25, 0.75, 1.25, 1.75];

/// Samples `G - f'/f` at eight points on `Re s = sigma1 + 2` and fits a
/// polynomial of degree `d - 2`. Fails when the samples disagree with the
/// fit by more than the configured tolerance.
pub fn discrepancy_poly(f: &FiniteDirichletSeries, div: &Divisor, sigma: Complex64, cfg: &NumericsConfig) -> Result<DiscrepancyPoly> {
    let sigma1 = div.density.map_or(div.sigma1, |dm| dm.sigma_max.max(div.sigma1));
    let re = sigma1 + 2.0;
    let mut pts = Vec::with_capacity(SAMPLE_IM.len());
    let mut tail = 0.0_f64;
    for y in SAMPLE_IM {
        let s = Complex64::new(re, y);
        let g = g_interp(div, sigma, s)?;
        let ld = f.log_derivative(s, cfg.eval_floor)?;
        tail = tail.max(g.tail_bound);
        pts.push((s, g.value - ld));
    }
    let coeffs = if div.d == 2 {
        vec![pts.iter().map(|p| p.1).sum::<Complex64>() / pts.len() as f64]
    } else {
        // least squares c0 + c1 s
        let n = pts.len() as f64;
        let ms: Complex64 = pts.iter().map(|p| p.0).sum::<Complex64>() / n;
        let mc: Complex64 = pts.iter().map(|p| p.1).sum::<Complex64>() / n;
        let num: Complex64 = pts.iter().map(|p| (p.0 - ms).conj() * (p.1 - mc)).sum();
        let den: f64 = pts.iter().map(|p| (p.0 - ms).norm_sqr()).sum();
        let c1 = num / den;
        vec![mc - c1 * ms, c1]
    };
    let eval = |s: Complex64| coeffs.iter().rev().fold(Complex64::default(), |acc, c| acc * s + c);
    let residual = pts.iter().map(|(s, c)| (c - eval(*s)).norm()).fold(0.0, f64::max);
    if residual > cfg.discrepancy_tol {
        return Err(Error::NonConstantDiscrepancy(residual));
    }
    Ok(DiscrepancyPoly { sigma, coeffs, sample_residual: residual, tail_bound: tail })
}

/// `Q'_{sigma'} - Q'_sigma` for `m = 1` (constant) and `m = 2` (linear,
/// returned as `[B, A]` for `A s + B`), from explicit sums over the divisor.
pub fn shift_q_poly(div: &Divisor, sigma: Complex64, sigma_p: Complex64, m: u32) -> Result<Vec<Complex64>> {
    if !(1..=2).contains(&m) {
        return Err(Error::UnsupportedM(m));
    }
    let on = div.locate(sigma)?;
    let on_p = div.locate(sigma_p)?;
    let is = |o: &Option<crate::zeros::DivisorEntry>, rho: Complex64| o.is_some_and(|x| x.rho == rho);
    let h = sigma_p - sigma;
    let mut a_acc = CompensatedSum::new();
    let mut b_acc = CompensatedSum::new();
    for e in &div.entries {
        let n = f64::from(e.n);
        let (at_s, at_p) = (is(&on, e.rho), is(&on_p, e.rho));
        match (at_s, at_p) {
            (false, false) => {
                let (u, v) = ((e.rho - sigma).inv(), (e.rho - sigma_p).inv());
                if m == 1 {
                    b_acc.add(n * (u - v));
                } else {
                    a_acc.add(n * (u * u - v * v));
                    b_acc.add(n * ((e.rho - 2.0 * sigma) * u * u - (e.rho - 2.0 * sigma_p) * v * v));
                }
            }
            (true, _) => {
                if m == 1 {
                    b_acc.add(n / h);
                } else {
                    a_acc.add(-n / (h * h));
                    b_acc.add(n * (2.0 * sigma_p - sigma) / (h * h));
                }
            }
            (false, true) => {
                if m == 1 {
                    b_acc.add(n / h);
                } else {
                    a_acc.add(n / (h * h));
                    b_acc.add(n * (sigma_p - 2.0 * sigma) / (h * h));
                }
            }
        }
    }
    if !div.towers.is_empty() {
        let recip = div.tower_reciprocal_difference(sigma_p, sigma)?;
        if m == 1 {
            b_acc.add(recip);
        } else {
            let (t, tp) = (div.tower_power_tail(2, sigma)?, div.tower_power_tail(2, sigma_p)?);
            a_acc.add(t - tp);
            b_acc.add(recip - sigma * t + sigma_p * tp);
        }
    }
    Ok(if m == 1 { vec![b_acc.value()] } else { vec![b_acc.value(), a_acc.value()] })
}

/// Functional equation `g(-s) = g(s)` for the normal form
/// `g = e^{mu s} f` (`c = 1`) or `g = s e^{mu s} f` (`c = -1`), which holds
/// exactly when `lambda_{N-n} = lambda_N - lambda_n` and `a_{N-n} = c a_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalEquation {
    pub mu: f64,
    pub c: i32,
}

impl FunctionalEquation {
    /// `g(s)`.
    pub fn normal_form(&self, f: &FiniteDirichletSeries, s: Complex64) -> Complex64 {
        let h = (self.mu * s).exp() * f.eval(s);
        if self.c == 1 {
            h
        } else {
            s * h
        }
    }

    /// Discrepancy constant of the fudge factor `chi = e^{mu s}` or `s e^{mu s}`.
    pub fn c0_chi(&self, sigma: Complex64) -> Complex64 {
        let base = Complex64::new(-self.mu, 0.0);
        if self.c == -1 && sigma.norm() > ON_DIVISOR_TOL {
            base - sigma.inv()
        } else {
            base
        }
    }
}

/// Detects the functional equation of a finite Dirichlet series, if any.
pub fn detect_functional_equation(f: &FiniteDirichletSeries, tol: f64) -> Option<FunctionalEquation> {
    let mut lambdas = vec![0.0];
    lambdas.extend_from_slice(f.lambdas());
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    coeffs.extend_from_slice(f.coeffs());
    let n = lambdas.len() - 1;
    let top = lambdas[n];
    let c = coeffs[n];
    let c = if (c - 1.0).norm() <= tol {
        1
    } else if (c + 1.0).norm() <= tol {
        -1
    } else {
        return None;
    };
    for i in 0..=n {
        if (lambdas[n - i] - (top - lambdas[i])).abs() > tol * top {
            return None;
        }
        if (coeffs[n - i] - f64::from(c) * coeffs[i]).norm() > tol * coeffs[i].norm().max(1.0) {
            return None;
        }
    }
    Some(FunctionalEquation { mu: 0.5 * top, c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::{find_zeros, rational_divisor, reduce_rational, DivisorEntry};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn poisson_series_discrepancy_is_half_lambda() {
        for lambda in [1.0, 2.5] {
            let f = FiniteDirichletSeries::real(&[lambda], &[-1.0]).unwrap();
            let div = rational_divisor(&f, &reduce_rational(&f).unwrap(), 20.0);
            let p = discrepancy_poly(&f, &div, c(0.0, 0.0), &NumericsConfig::default()).unwrap();
            assert!((p.coeffs[0] - lambda / 2.0).norm() < 1e-10, "{}", p.coeffs[0]);
        }
    }

    #[test]
    fn g_interp_near_pole() {
        let div = Divisor::finite(vec![DivisorEntry { rho: c(1.0, 1.0), n: 1 }], 2);
        assert!(matches!(g_interp(&div, c(0.0, 0.0), c(1.0, 1.0)), Err(Error::NearPole(_))));
    }

    #[test]
    fn shift_law_linear_case() {
        let f = FiniteDirichletSeries::real(&[1.0, 2.0], &[0.3, 0.5]).unwrap();
        let mut div = rational_divisor(&f, &reduce_rational(&f).unwrap(), 30.0);
        let cfg = NumericsConfig::default();
        div.d = 3;
        let (s0, s1) = (c(0.2, 0.1), c(1.4, -0.3));
        let q = shift_q_poly(&div, s0, s1, 2).unwrap();
        let (p0, p1) = (discrepancy_poly(&f, &div, s0, &cfg).unwrap(), discrepancy_poly(&f, &div, s1, &cfg).unwrap());
        for (k, qk) in q.iter().enumerate().take(2) {
            let lhs = p1.coeffs[k] - p0.coeffs[k];
            assert!((lhs + qk).norm() < 1e-9, "k={k}: {lhs} vs {}", -qk);
        }
    }

    #[test]
    fn functional_equation_detection() {
        let f = FiniteDirichletSeries::real(&[1.0, 2.0], &[0.5, 1.0]).unwrap();
        let fe = detect_functional_equation(&f, 1e-12).unwrap();
        assert_eq!((fe.mu, fe.c), (1.0, 1));
        let s = c(0.3, 1.7);
        assert!((fe.normal_form(&f, s) - fe.normal_form(&f, -s)).norm() < 1e-13);
        let g = FiniteDirichletSeries::real(&[1.0, 2.0], &[0.5, -1.0]).unwrap();
        assert!(detect_functional_equation(&g, 1e-12).is_none());
        let h = FiniteDirichletSeries::real(&[1.0, 3.0], &[0.5, -1.0]).unwrap();
        assert!(detect_functional_equation(&h, 1e-12).is_none());
        let odd = FiniteDirichletSeries::real(&[1.0, 2.0], &[0.0001, -1.0]);
        assert!(odd.is_ok());
    }

    #[test]
    fn palindromic_c0_at_zero_is_mu() {
        let f = FiniteDirichletSeries::real(&[1.0, 2.0], &[0.5, 1.0]).unwrap();
        let div = find_zeros(&f, 60.0, &NumericsConfig::default()).unwrap();
        let p = discrepancy_poly(&f, &div, c(0.0, 0.0), &NumericsConfig::default()).unwrap();
        assert!((p.coeffs[0] - 1.0).norm() < 1e-4, "{}", p.coeffs[0]);
    }

    #[test]
    fn palindromic_c0_rational_route() {
        let f = FiniteDirichletSeries::real(&[1.0, 2.0], &[0.5, 1.0]).unwrap();
        let red = crate::zeros::reduce_rational(&f).unwrap();
        let div = crate::zeros::rational_divisor(&f, &red, 20.0);
        let p = discrepancy_poly(&f, &div, c(0.0, 0.0), &NumericsConfig::default()).unwrap();
        assert!((p.coeffs[0] - 1.0).norm() < 1e-9, "{}", p.coeffs[0]);
    }
}
