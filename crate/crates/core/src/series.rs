//! Finite Dirichlet series `f(s) = 1 + sum_n a_n exp(-lambda_n s)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::sum::CompensatedSum;

/// Finite Dirichlet series with constant term 1 and strictly increasing
/// positive frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDirichletSeries {
    lambdas: Vec<f64>,
    coeffs: Vec<Complex64>,
}

/// Vertical strip `sigma_minus <= Re s <= sigma_plus` containing every zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripBound {
    pub sigma_minus: f64,
    pub sigma_plus: f64,
}

/// On-disk form: `{"lambdas": [...], "coeffs": [[re, im], ...]}`. A coefficient
/// may also be a bare real number.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesFile {
    pub lambdas: Vec<f64>,
    pub coeffs: Vec<CoeffRepr>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffRepr {
    Real(f64),
    Complex([f64; 2]),
}

impl FiniteDirichletSeries {
    /// Validates frequencies (finite, positive, strictly increasing) and the
    /// last coefficient (non-zero).
    pub fn new(lambdas: Vec<f64>, coeffs: Vec<Complex64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::InvalidSeries("no terms".into()));
        }
        if lambdas.len() != coeffs.len() {
            return Err(Error::InvalidSeries(format!(
                "{} frequencies but {} coefficients",
                lambdas.len(),
                coeffs.len()
            )));
        }
        if lambdas.iter().any(|l| !l.is_finite() || *l <= 0.0) {
            return Err(Error::InvalidSeries("frequencies must be finite and positive".into()));
        }
        if lambdas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSeries("frequencies must be strictly increasing".into()));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidSeries("coefficients must be finite".into()));
        }
        if coeffs.last().map_or(true, |c| c.norm() == 0.0) {
            return Err(Error::InvalidSeries("last coefficient must be non-zero".into()));
        }
        Ok(Self { lambdas, coeffs })
    }

    /// Real-coefficient convenience constructor.
    pub fn real(lambdas: &[f64], coeffs: &[f64]) -> Result<Self> {
        Self::new(lambdas.to_vec(), coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SeriesFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn to_file(&self) -> SeriesFile {
        SeriesFile {
            lambdas: self.lambdas.clone(),
            coeffs: self.coeffs.iter().map(|c| CoeffRepr::Complex([c.re, c.im])).collect(),
        }
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// Largest frequency.
    pub fn lambda_max(&self) -> f64 {
        *self.lambdas.last().expect("series is non-empty")
    }

    /// `sum |a_n|`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// True when every coefficient is real within `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.im.abs() <= tol * c.norm().max(1.0))
    }

    /// `f(s)`, summed with compensation.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut acc = CompensatedSum::new();
        acc.add(Complex64::new(1.0, 0.0));
        for (l, a) in self.lambdas.iter().zip(&self.coeffs) {
            acc.add(a * (-s * l).exp());
        }
        acc.value()
    }

    /// `f'(s)`.
    pub fn derivative(&self, s: Complex64) -> Complex64 {
        let mut acc = CompensatedSum::new();
        for (l, a) in self.lambdas.iter().zip(&self.coeffs) {
            acc.add(-a * l * (-s * l).exp());
        }
        acc.value()
    }

    /// `(f(s), f'(s))` in one pass.
    pub fn eval_with_derivative(&self, s: Complex64) -> (Complex64, Complex64) {
        let mut f = CompensatedSum::new();
        let mut df = CompensatedSum::new();
        f.add(Complex64::new(1.0, 0.0));
        for (l, a) in self.lambdas.iter().zip(&self.coeffs) {
            let t = a * (-s * l).exp();
            f.add(t);
            df.add(-t * l);
        }
        (f.value(), df.value())
    }

    /// `sum |a_n| |exp(-lambda_n s)|`, the scale of rounding error in `f(s)`.
    pub fn magnitude_scale(&self, s: Complex64) -> f64 {
        1.0 + self.lambdas.iter().zip(&self.coeffs).map(|(l, a)| a.norm() * (-s.re * l).exp()).sum::<f64>()
    }

    /// Upper bound for `|f'|` on the half plane `Re s >= x`.
    pub fn derivative_bound(&self, x: f64) -> f64 {
        self.lambdas.iter().zip(&self.coeffs).map(|(l, a)| a.norm() * l * (-x * l).exp()).sum()
    }

    /// `f'(s) / f(s)`; fails when `|f(s)| < floor`.
    pub fn log_derivative(&self, s: Complex64, floor: f64) -> Result<Complex64> {
        let (f, df) = self.eval_with_derivative(s);
        if f.norm() < floor {
            return Err(Error::NearZeroDivision { s, modulus: f.norm() });
        }
        Ok(df / f)
    }

    /// Strip containing all zeros. `sigma_plus` solves
    /// `sum |a_n| e^{-lambda_n sigma} = 1`; `sigma_minus` solves
    /// `|a_N| = e^{lambda_N sigma} + sum_{n<N} |a_n| e^{(lambda_N - lambda_n) sigma}`.
    pub fn zero_strip(&self) -> StripBound {
        let abs: Vec<f64> = self.coeffs.iter().map(|c| c.norm()).collect();
        let upper = |x: f64| -> f64 {
            self.lambdas.iter().zip(&abs).map(|(l, a)| a * (-l * x).exp()).sum::<f64>() - 1.0
        };
        let n = self.lambdas.len() - 1;
        let ln = self.lambdas[n];
        let lower = |x: f64| -> f64 {
            (ln * x).exp()
                + (0..n).map(|i| abs[i] * ((ln - self.lambdas[i]) * x).exp()).sum::<f64>()
                - abs[n]
        };
        // upper is decreasing, lower is increasing.
        let sigma_plus = bisect_monotone(|x| -upper(x));
        let sigma_minus = bisect_monotone(lower);
        StripBound { sigma_minus, sigma_plus }
    }

    /// Normalised level series `(f - c) / (1 - c)`, whose zeros are the
    /// solutions of `f(s) = c`.
    pub fn level_series(&self, c: Complex64) -> Result<Self> {
        if (c - 1.0).norm() < 1e-300 {
            return Err(Error::InvalidLevel);
        }
        let scale = (Complex64::new(1.0, 0.0) - c).inv();
        Self::new(self.lambdas.clone(), self.coeffs.iter().map(|a| a * scale).collect())
    }
}

/// Root of an increasing function by bracket expansion and bisection.
fn bisect_monotone<F: Fn(f64) -> f64>(g: F) -> f64 {
    let (mut lo, mut hi) = (-1.0, 1.0);
    while g(lo) > 0.0 {
        lo *= 2.0;
        if lo < -1e6 {
            break;
        }
    }
    while g(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            break;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl TryFrom<SeriesFile> for FiniteDirichletSeries {
    type Error = Error;

    fn try_from(file: SeriesFile) -> Result<Self> {
        let coeffs = file
            .coeffs
            .into_iter()
            .map(|c| match c {
                CoeffRepr::Real(x) => Complex64::new(x, 0.0),
                CoeffRepr::Complex([re, im]) => Complex64::new(re, im),
            })
            .collect();
        Self::new(file.lambdas, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(FiniteDirichletSeries::real(&[1.0, 1.0], &[1.0, 1.0]).is_err());
        assert!(FiniteDirichletSeries::real(&[-1.0], &[1.0]).is_err());
        assert!(FiniteDirichletSeries::real(&[1.0, 2.0], &[1.0, 0.0]).is_err());
        assert!(FiniteDirichletSeries::real(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn eval_and_log_derivative() {
        let f = FiniteDirichletSeries::real(&[1.0], &[-1.0]).unwrap();
        let s = Complex64::new(0.3, 0.2);
        assert!((f.eval(s) - (1.0 - (-s).exp())).norm() < 1e-15);
        let ld = f.log_derivative(s, 1e-14).unwrap();
        let expect = (-s).exp() / (1.0 - (-s).exp());
        assert!((ld - expect).norm() < 1e-14);
        assert!(matches!(f.log_derivative(Complex64::default(), 1e-14), Err(Error::NearZeroDivision { .. })));
    }

    #[test]
    fn strip_of_single_exponential_is_a_line() {
        // 1 + 2 e^{-s}: zeros on Re s = ln 2.
        let f = FiniteDirichletSeries::real(&[1.0], &[2.0]).unwrap();
        let b = f.zero_strip();
        assert!((b.sigma_plus - 2f64.ln()).abs() < 1e-14);
        assert!((b.sigma_minus - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn json_roundtrip() {
        let f = FiniteDirichletSeries::from_json(r#"{"lambdas":[1,2],"coeffs":[0.5,[0.0,-1.0]]}"#).unwrap();
        assert_eq!(f.coeffs()[1], Complex64::new(0.0, -1.0));
        let text = serde_json::to_string(&f.to_file()).unwrap();
        assert_eq!(FiniteDirichletSeries::from_json(&text).unwrap(), f);
    }
}
