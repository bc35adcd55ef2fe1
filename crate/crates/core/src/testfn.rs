//! Test functions and their derivatives.
//!
//! Gaussians and polynomial bumps are the user-facing families. Exponentials,
//! polynomials and inverse powers serve the summation formulas.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::quad::{integrate_panels, QuadOptions};
use crate::numerics::special::{binomial, faddeeva};

/// Default order `q` of the polynomial bump `C ((t-a)(b-t))^q`.
pub const DEFAULT_BUMP_ORDER: u32 = 12;

/// Half-width, in standard deviations, beyond which a Gaussian is treated as zero.
pub const GAUSSIAN_WINDOW: f64 = 40.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    /// `exp(-(t-mu)^2 / 2 s^2) / (s sqrt(2 pi))`.
    Gaussian { mu: f64, s: f64 },
    /// `C ((t-a)(b-t))^q` on `[a, b]`, zero elsewhere, unit mass.
    Bump { a: f64, b: f64, q: u32 },
    /// `exp(-rate t)`.
    Exponential { rate: Complex64 },
    /// `sum c_k t^k`.
    Polynomial { coeffs: Vec<f64> },
    /// `(t + shift)^{-power}`.
    InversePower { shift: f64, power: u32 },
}

/// Interval outside which a test function vanishes (or is negligible).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
}

impl TestFunction {
    pub fn gaussian(mu: f64, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite() && mu.is_finite()) {
            return Err(Error::InvalidTestFunction(format!("gaussian needs s > 0, got s = {s}")));
        }
        Ok(Self::Gaussian { mu, s })
    }

    pub fn bump(a: f64, b: f64) -> Result<Self> {
        Self::bump_with_order(a, b, DEFAULT_BUMP_ORDER)
    }

    pub fn bump_with_order(a: f64, b: f64, q: u32) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidTestFunction(format!("bump needs a < b, got [{a}, {b}]")));
        }
        if !(2..=60).contains(&q) {
            return Err(Error::InvalidTestFunction(format!("bump order {q} outside 2..=60")));
        }
        Ok(Self::Bump { a, b, q })
    }

    pub fn exponential(rate: Complex64) -> Self {
        Self::Exponential { rate }
    }

    pub fn inverse_power(shift: f64, power: u32) -> Result<Self> {
        if !(shift > 0.0) || power == 0 {
            return Err(Error::InvalidTestFunction("inverse power needs shift > 0 and power >= 1".into()));
        }
        Ok(Self::InversePower { shift, power })
    }

    /// Parses `gaussian:mu=3,s=0.4`, `bump:a=1,b=2.5[,q=12]`, `exp:rate=1`,
    /// `power:shift=1,p=2` or `poly:c0,c1,...`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidTestFunction(format!("{m} in '{text}'"));
        let (kind, rest) = text.split_once(':').ok_or_else(|| bad("missing ':'"))?;
        if kind.trim() == "poly" {
            let coeffs = rest
                .split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| bad("bad coefficient")))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Self::Polynomial { coeffs });
        }
        let mut params = std::collections::BTreeMap::new();
        for kv in rest.split(',') {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let v: f64 = v.trim().parse().map_err(|_| bad("bad number"))?;
            params.insert(k.trim().to_string(), v);
        }
        let get = |k: &str| params.get(k).copied().ok_or_else(|| bad(&format!("missing '{k}'")));
        match kind.trim() {
            "gaussian" => Self::gaussian(get("mu")?, get("s")?),
            "bump" => {
                let q = params.get("q").copied().unwrap_or(f64::from(DEFAULT_BUMP_ORDER));
                if q.fract() != 0.0 || q < 0.0 {
                    return Err(bad("bump order must be a non-negative integer"));
                }
                Self::bump_with_order(get("a")?, get("b")?, q as u32)
            }
            "exp" => Ok(Self::exponential(Complex64::new(get("rate")?, params.get("rate_im").copied().unwrap_or(0.0)))),
            "power" => {
                let p = get("p")?;
                if p.fract() != 0.0 || p < 1.0 {
                    return Err(bad("power must be a positive integer"));
                }
                Self::inverse_power(get("shift")?, p as u32)
            }
            other => Err(bad(&format!("unknown family '{other}'"))),
        }
    }

    /// Highest derivative order the pairing code may request.
    pub fn max_derivative_order(&self) -> usize {
        match self {
            Self::Gaussian { .. } => 60,
            Self::Bump { q, .. } => *q as usize,
            Self::Exponential { .. } | Self::InversePower { .. } => 120,
            Self::Polynomial { .. } => usize::MAX,
        }
    }

    /// Interval outside which the function vanishes; Gaussians are cut at
    /// `GAUSSIAN_WINDOW` standard deviations.
    pub fn support(&self) -> Support {
        match self {
            Self::Gaussian { mu, s } => Support { lo: mu - GAUSSIAN_WINDOW * s, hi: mu + GAUSSIAN_WINDOW * s },
            Self::Bump { a, b, .. } => Support { lo: *a, hi: *b },
            Self::InversePower { shift, .. } => Support { lo: -shift, hi: f64::INFINITY },
            _ => Support { lo: f64::NEG_INFINITY, hi: f64::INFINITY },
        }
    }

    /// True for functions with compact support inside `(0, inf)`.
    pub fn supported_in_positive_axis(&self) -> bool {
        matches!(self, Self::Bump { a, .. } if *a > 0.0)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.deriv(0, t)
    }

    /// `phi^{(k)}(t)`.
    pub fn deriv(&self, k: usize, t: f64) -> Complex64 {
        match self {
            Self::Gaussian { mu, s } => {
                let u = (t - mu) / s;
                let base = (-0.5 * u * u).exp() / (s * (2.0 * PI).sqrt());
                let (mut h0, mut h1) = (1.0, u);
                let he = if k == 0 {
                    1.0
                } else {
                    for j in 1..k {
                        let h2 = u * h1 - j as f64 * h0;
                        h0 = h1;
                        h1 = h2;
                    }
                    h1
                };
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::new(sign * he * base / s.powi(k as i32), 0.0)
            }
            Self::Bump { a, b, q } => Complex64::new(bump_deriv(*a, *b, *q, k, t), 0.0),
            Self::Exponential { rate } => (-rate).powu(k as u32) * (-rate * t).exp(),
            Self::Polynomial { coeffs } => {
                let mut acc = 0.0;
                for (j, c) in coeffs.iter().enumerate().skip(k).rev() {
                    let falling: f64 = ((j - k + 1)..=j).map(|x| x as f64).product();
                    acc = acc * t + c * falling;
                }
                Complex64::new(acc, 0.0)
            }
            Self::InversePower { shift, power } => {
                let x = t + shift;
                let p = f64::from(*power);
                let rising: f64 = (0..k).map(|j| p + j as f64).product();
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::new(sign * rising * x.powf(-p - k as f64), 0.0)
            }
        }
    }

    /// Analytic continuation `phi(z)`, when the function is analytic.
    pub fn eval_complex(&self, z: Complex64) -> Option<Complex64> {
        match self {
            Self::Gaussian { mu, s } => {
                let u = (z - mu) / s;
                Some((-0.5 * u * u).exp() / (s * (2.0 * PI).sqrt()))
            }
            Self::Bump { .. } => None,
            Self::Exponential { rate } => Some((-rate * z).exp()),
            Self::Polynomial { coeffs } => Some(coeffs.iter().rev().fold(Complex64::default(), |acc, c| acc * z + c)),
            Self::InversePower { shift, power } => Some((z + shift).powi(-(*power as i32))),
        }
    }

    /// Fourier transform `hat phi(x) = int phi(t) e^{-i x t} dt` for complex `x`.
    pub fn fourier(&self, x: Complex64) -> Option<Complex64> {
        match self {
            Self::Gaussian { mu, s } => {
                let i = Complex64::i();
                Some((-i * mu * x - 0.5 * s * s * x * x).exp())
            }
            Self::Bump { a, b, .. } => Some(self.bump_laplace(-Complex64::i() * x, *a, *b)),
            _ => None,
        }
    }

    /// Reflection `t -> phi(-t)` within the same family.
    pub fn reflect(&self) -> Option<Self> {
        match self {
            Self::Gaussian { mu, s } => Some(Self::Gaussian { mu: -mu, s: *s }),
            Self::Bump { a, b, q } => Some(Self::Bump { a: -b, b: -a, q: *q }),
            Self::Exponential { rate } => Some(Self::Exponential { rate: -rate }),
            _ => None,
        }
    }

    /// `int_0^inf e^{z t} phi(t) dt` in closed form where one exists.
    pub fn laplace_half(&self, z: Complex64) -> Result<Complex64> {
        match self {
            Self::Gaussian { mu, s } => Ok(gaussian_laplace_half(*mu, *s, z)),
            Self::Bump { a, b, .. } => {
                if *b <= 0.0 {
                    return Ok(Complex64::default());
                }
                Ok(self.bump_laplace(z, a.max(0.0), *b))
            }
            Self::Exponential { rate } => {
                let r = rate - z;
                if r.re <= 0.0 {
                    return Err(Error::DivergentRegularization(format!("exp({z} t) phi(t) is not integrable")));
                }
                Ok(r.inv())
            }
            _ => Err(Error::InvalidTestFunction("no closed-form Laplace transform".into())),
        }
    }

    /// `int_lo^hi e^{z t} phi(t) dt` for a bump, `[lo, hi]` inside its support.
    fn bump_laplace(&self, z: Complex64, lo: f64, hi: f64) -> Complex64 {
        let Self::Bump { a, b, q } = self else { unreachable!("bump only") };
        let width = b - a;
        let whole = lo <= *a && hi >= *b;
        if whole && z.norm() * width >= 8.0 * f64::from(*q) {
            // Integrate by parts to exhaustion; derivatives below order q vanish
            // at both endpoints.
            let (ea, eb) = ((z * a).exp(), (z * b).exp());
            let zi = z.inv();
            let mut zp = zi.powu(*q + 1);
            let mut acc = Complex64::default();
            for j in (*q as usize)..=(2 * *q as usize) {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                let boundary = eb * bump_deriv(*a, *b, *q, j, *b) - ea * bump_deriv(*a, *b, *q, j, *a);
                acc += sign * zp * boundary;
                zp *= zi;
            }
            return acc;
        }
        let (lo, hi) = (lo.max(*a), hi.min(*b));
        if hi <= lo {
            return Complex64::default();
        }
        let panels = 1 + (z.im.abs() * (hi - lo) / PI).ceil() as usize;
        integrate_panels(|t| (z * t).exp() * bump_deriv(*a, *b, *q, 0, t), lo, hi, panels, &QuadOptions::default())
            .map(|r| r.value)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Gaussian { mu, s } => write!(f, "gaussian:mu={mu},s={s}"),
            Self::Bump { a, b, q } => write!(f, "bump:a={a},b={b},q={q}"),
            Self::Exponential { rate } if rate.im == 0.0 => write!(f, "exp:rate={}", rate.re),
            Self::Exponential { rate } => write!(f, "exp:rate={},rate_im={}", rate.re, rate.im),
            Self::Polynomial { coeffs } => {
                let parts: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            Self::InversePower { shift, power } => write!(f, "power:shift={shift},p={power}"),
        }
    }
}

/// `C ((t-a)(b-t))^q` and its derivatives by the Leibniz rule on the two
/// factors, which keeps full relative accuracy near the endpoints.
fn bump_deriv(a: f64, b: f64, q: u32, k: usize, t: f64) -> f64 {
    if t < a || t > b || k > 2 * q as usize {
        return 0.0;
    }
    let norm = bump_norm(q, b - a);
    let (x, y) = (t - a, b - t);
    let mut acc = 0.0;
    for j in 0..=k {
        let l = k - j;
        if j > q as usize || l > q as usize {
            continue;
        }
        let fa: f64 = ((q as usize - j + 1)..=q as usize).map(|v| v as f64).product();
        let fb: f64 = ((q as usize - l + 1)..=q as usize).map(|v| v as f64).product();
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        acc += binomial(k as u32, j as u32) * fa * x.powi((q as usize - j) as i32) * sign * fb * y.powi((q as usize - l) as i32);
    }
    norm * acc
}

/// `(2q+1)! / ((q!)^2 width^{2q+1})`, the unit-mass constant.
fn bump_norm(q: u32, width: f64) -> f64 {
    f64::from(2 * q + 1) * binomial(2 * q, q) / width.powi(2 * q as i32 + 1)
}

/// `int_0^inf e^{z t} phi(t) dt` for the unit Gaussian `phi = N(mu, s^2)`,
/// through the Faddeeva function. The reflection `w(z) = 2 e^{-z^2} - w(-z)`
/// keeps the argument in the upper half plane.
pub fn gaussian_laplace_half(mu: f64, s: f64, z: Complex64) -> Complex64 {
    let i = Complex64::i();
    let arg = -i * (mu + z * s * s) / (s * 2f64.sqrt());
    let damp = -0.5 * mu * mu / (s * s);
    if arg.im >= 0.0 {
        0.5 * damp.exp() * faddeeva(arg)
    } else {
        let full = (z * mu + 0.5 * z * z * s * s).exp();
        full - 0.5 * Complex64::new(damp, 0.0).exp() * faddeeva(-arg)
    }
}

/// `(e^{c t} phi(t))^{(k)}` by the Leibniz rule.
pub fn tilted_deriv(phi: &TestFunction, c: Complex64, k: usize, t: f64) -> Complex64 {
    let mut acc = Complex64::default();
    let mut cp = Complex64::new(1.0, 0.0);
    for j in (0..=k).rev() {
        acc += binomial(k as u32, j as u32) * cp * phi.deriv(j, t);
        cp *= c;
    }
    acc * (c * t).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quad::integrate;

    fn quad(f: impl Fn(f64) -> Complex64, a: f64, b: f64) -> Complex64 {
        integrate_panels(f, a, b, 64, &QuadOptions::default()).unwrap().value
    }

    #[test]
    fn unit_mass() {
        for phi in [TestFunction::gaussian(3.0, 0.4).unwrap(), TestFunction::bump(1.0, 2.5).unwrap()] {
            let sup = phi.support();
            let m = quad(|t| phi.eval(t), sup.lo, sup.hi);
            assert!((m.re - 1.0).abs() < 1e-13, "{phi}: {m}");
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for phi in [
            TestFunction::gaussian(0.5, 0.7).unwrap(),
            TestFunction::bump_with_order(0.0, 2.0, 6).unwrap(),
            TestFunction::inverse_power(1.0, 2).unwrap(),
        ] {
            for k in 0..4 {
                let t = 0.83;
                let fd = (phi.deriv(k, t + h) - phi.deriv(k, t - h)) / (2.0 * h);
                let d = phi.deriv(k + 1, t);
                assert!((fd - d).norm() < 1e-6 * d.norm().max(1.0), "{phi} k={k}: {fd} vs {d}");
            }
        }
    }

    #[test]
    fn gaussian_half_laplace_matches_quadrature() {
        let (mu, s) = (0.4, 0.6);
        let phi = TestFunction::gaussian(mu, s).unwrap();
        for z in [Complex64::new(0.5, 14.1), Complex64::new(-1.0, -3.0), Complex64::new(2.0, 0.0), Complex64::new(-0.5, 30.0)] {
            let closed = gaussian_laplace_half(mu, s, z);
            let q = quad(|t| (z * t).exp() * phi.eval(t), 0.0, mu + 40.0 * s);
            assert!((closed - q).norm() < 1e-12, "z={z}: {closed} vs {q}");
        }
    }

    #[test]
    fn bump_closed_form_laplace_matches_quadrature() {
        let phi = TestFunction::bump_with_order(1.0, 2.5, 4).unwrap();
        let z = Complex64::new(0.2, 25.0);
        let closed = phi.laplace_half(z).unwrap();
        let q = integrate_panels(|t| (z * t).exp() * phi.eval(t), 1.0, 2.5, 200, &QuadOptions::default()).unwrap().value;
        // Independent high-precision value of the same integral.
        let exact = Complex64::new(0.000_230_838_088_443_282_46, -0.000_124_167_202_718_876_1);
        assert!((closed - exact).norm() < 1e-17, "{closed}");
        assert!((q - exact).norm() < 1e-13, "{q}");
    }

    #[test]
    fn tilted_derivative_of_exponential() {
        let phi = TestFunction::exponential(Complex64::new(1.0, 0.0));
        // e^{2t} e^{-t} = e^t, every derivative is e^t.
        let v = tilted_deriv(&phi, Complex64::new(2.0, 0.0), 5, 0.3);
        assert!((v.re - 0.3f64.exp()).abs() < 1e-13);
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for lit in ["gaussian:mu=3,s=0.4", "bump:a=1,b=2.5,q=12", "power:shift=1,p=2", "poly:0,0,1", "exp:rate=1"] {
            let phi = TestFunction::parse(lit).unwrap();
            assert_eq!(TestFunction::parse(&phi.to_string()).unwrap(), phi);
        }
        assert!(TestFunction::parse("gaussian:mu=1").is_err());
        assert!(TestFunction::parse("bump:a=2,b=1").is_err());
    }

    #[test]
    fn polynomial_derivatives() {
        let p = TestFunction::Polynomial { coeffs: vec![1.0, 2.0, 3.0] };
        assert_eq!(p.deriv(1, 2.0).re, 2.0 + 12.0);
        assert_eq!(p.deriv(2, 2.0).re, 6.0);
        assert_eq!(p.deriv(3, 2.0).re, 0.0);
        let q = integrate(|t| p.eval(t), 0.0, 1.0, &QuadOptions::default()).unwrap();
        assert!((q.value.re - 3.0).abs() < 1e-14);
    }
}
