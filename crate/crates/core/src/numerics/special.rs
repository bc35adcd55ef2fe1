//! Special functions: Bernoulli numbers, complex digamma, Hurwitz zeta and the
//! Faddeeva function.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_431;

/// Largest Bernoulli index served by [`bernoulli`].
pub const BERNOULLI_MAX: usize = 120;

fn bernoulli_table() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // sum_{k=0}^{m} C(m+1, k) B_k = 0, B_0 = 1, B_1 = -1/2.
        let n = BERNOULLI_MAX;
        let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
        b.push(BigRational::one());
        for m in 1..=n {
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one();
            for (k, bk) in b.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * bk;
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        b
    })
}

/// Exact Bernoulli number `B_n` with `B_1 = -1/2`, for `n <= 120`.
pub fn bernoulli_exact(n: usize) -> Result<BigRational> {
    bernoulli_table()
        .get(n)
        .cloned()
        .ok_or_else(|| Error::OutOfRange(format!("Bernoulli index {n} > {BERNOULLI_MAX}")))
}

/// Bernoulli number `B_n` rounded to `f64`, for `n <= 120`.
pub fn bernoulli(n: usize) -> Result<f64> {
    let b = bernoulli_exact(n)?;
    Ok(b.to_f64().unwrap_or(f64::NAN))
}

/// `ln(n!)` for small `n`, summed exactly enough for the uses here.
pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `n!` as `f64`.
pub fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Binomial coefficient `C(n, k)` as `f64`.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

/// Coefficients of the Bernoulli polynomial `B_n(x)`, lowest degree first.
pub fn bernoulli_polynomial(n: usize) -> Result<Vec<f64>> {
    let mut c = vec![0.0; n + 1];
    for k in 0..=n {
        c[n - k] = binomial(n as u32, k as u32) * bernoulli(k)?;
    }
    Ok(c)
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Complex digamma `psi(z)`: upward recurrence to `Re z >= 12`, then the
/// asymptotic series through `B_16`.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::PoleAtNonPositiveInteger(z));
    }
    let mut z = z;
    let mut shift = Complex64::default();
    while z.re < 12.0 {
        shift -= z.inv();
        z += 1.0;
    }
    let zi2 = (z * z).inv();
    let mut pow = zi2;
    let mut series = Complex64::default();
    for k in 1..=8usize {
        let b = bernoulli(2 * k).expect("index within table");
        series += pow * (b / (2 * k) as f64);
        pow *= zi2;
    }
    Ok(shift + z.ln() - 0.5 * z.inv() - series)
}

/// Real digamma.
pub fn digamma_real(x: f64) -> Result<f64> {
    digamma(Complex64::new(x, 0.0)).map(|z| z.re)
}

/// Hurwitz zeta `zeta(s, q) = sum_{n >= 0} (n + q)^{-s}` with the principal
/// branch of each power, by Euler-Maclaurin. Requires `Re s > 1`.
pub fn hurwitz_zeta(s: Complex64, q: Complex64) -> Result<Complex64> {
    if s.re <= 1.0 {
        return Err(Error::OutOfRange(format!("Hurwitz zeta needs Re s > 1, got {s}")));
    }
    if is_nonpositive_integer(q) || (q.im.abs() < 1e-300 && q.re <= 0.0 && (q.re - q.re.round()).abs() < 1e-13) {
        return Err(Error::PoleAtQ(format!("q = {q}")));
    }
    let pow = |x: Complex64| (-s * x.ln()).exp();
    // Head: enough terms that |N + q| dominates |s| and the EM terms decay.
    let target = 20.0 + s.norm();
    let mut n = 0usize;
    let mut head = super::sum::CompensatedSum::new();
    while (q + n as f64).norm() < target || (q.re + n as f64) < target.min(10.0) {
        head.add(pow(q + n as f64));
        n += 1;
    }
    let x = q + n as f64;
    let xs = pow(x);
    let mut total = head.value() + x * xs / (s - 1.0) + 0.5 * xs;
    // Tail: sum_k B_2k/(2k)! * s (s+1) ... (s+2k-2) * x^{-s-2k+1}.
    let xi = x.inv();
    let mut rising = s;
    let mut xp = xs * xi;
    let mut fact = 2.0;
    for k in 1..=30usize {
        let b = bernoulli(2 * k).expect("index within table");
        let term = rising * xp * (b / fact);
        total += term;
        if term.norm() <= 1e-17 * total.norm() {
            break;
        }
        let kk = 2 * k as u32;
        rising *= (s + (kk - 1) as f64) * (s + kk as f64);
        xp *= xi * xi;
        fact *= f64::from(kk + 1) * f64::from(kk + 2);
    }
    Ok(total)
}

/// Riemann zeta for `Re s > 1`.
pub fn riemann_zeta(s: Complex64) -> Result<Complex64> {
    hurwitz_zeta(s, Complex64::new(1.0, 0.0))
}

/// Faddeeva function `w(z) = exp(-z^2) erfc(-i z)`.
pub fn faddeeva(z: Complex64) -> Complex64 {
    use errorfunctions::ComplexErrorFunctions;
    z.w()
}

/// Complementary error function of a real argument.
pub fn erfc(x: f64) -> f64 {
    use errorfunctions::ComplexErrorFunctions;
    Complex64::new(x, 0.0).erfc().re
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(0).unwrap(), 1.0);
        assert_eq!(bernoulli(1).unwrap(), -0.5);
        assert!((bernoulli(2).unwrap() - 1.0 / 6.0).abs() < 1e-16);
        assert!((bernoulli(12).unwrap() + 691.0 / 2730.0).abs() < 1e-15);
        assert_eq!(bernoulli(7).unwrap(), 0.0);
        assert!(matches!(bernoulli(121), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn bernoulli_matches_zeta_at_even_integers() {
        // B_2k = (-1)^{k+1} 2 (2k)! zeta(2k) / (2 pi)^{2k}
        for k in 1..=10u32 {
            let z = riemann_zeta(c(2.0 * f64::from(k), 0.0)).unwrap().re;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let expect = sign * 2.0 * factorial(2 * k) * z / (2.0 * PI).powi(2 * k as i32);
            let b = bernoulli(2 * k as usize).unwrap();
            assert!(((b - expect) / b).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn digamma_known_values() {
        assert!((digamma_real(1.0).unwrap() + EULER_GAMMA).abs() < 1e-15);
        let half = -EULER_GAMMA - 2.0 * 2f64.ln();
        assert!((digamma_real(0.5).unwrap() - half).abs() < 1e-14);
        // psi(1/4) = -gamma - pi/2 - 3 ln 2
        let q = -EULER_GAMMA - PI / 2.0 - 3.0 * 2f64.ln();
        assert!((digamma_real(0.25).unwrap() - q).abs() < 1e-14);
        // Im psi(1/2 + i y) = (pi/2) tanh(pi y)
        let y = 0.7;
        let v = digamma(c(0.5, y)).unwrap();
        assert!((v.im - PI / 2.0 * (PI * y).tanh()).abs() < 1e-14);
        assert!(matches!(digamma(c(-3.0, 0.0)), Err(Error::PoleAtNonPositiveInteger(_))));
    }

    #[test]
    fn digamma_reflection() {
        // psi(1 - z) - psi(z) = pi cot(pi z)
        for &z in &[c(0.3, 0.2), c(-2.7, 1.1), c(4.2, -3.0)] {
            let lhs = digamma(1.0 - z).unwrap() - digamma(z).unwrap();
            let rhs = PI * (PI * z).cos() / (PI * z).sin();
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn hurwitz_known_values() {
        let z2 = riemann_zeta(c(2.0, 0.0)).unwrap();
        assert!((z2.re - PI * PI / 6.0).abs() < 1e-15);
        // zeta(2, 1/2) = 3 zeta(2)
        let h = hurwitz_zeta(c(2.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!((h.re - PI * PI / 2.0).abs() < 1e-14);
        // zeta(3, q) - zeta(3, q + 1) = q^{-3} for complex q
        let q = c(-0.4, 0.9);
        let d = hurwitz_zeta(c(3.0, 0.0), q).unwrap() - hurwitz_zeta(c(3.0, 0.0), q + 1.0).unwrap();
        assert!((d - q.powi(-3)).norm() < 1e-13 * q.powi(-3).norm());
        assert!(matches!(hurwitz_zeta(c(2.0, 0.0), c(-2.0, 0.0)), Err(Error::PoleAtQ(_))));
    }

    #[test]
    fn hurwitz_complex_s() {
        // direct summation with an integral tail for a moderate complex s
        let s = c(3.5, 2.0);
        let q = c(1.3, 0.4);
        let n = 200000;
        let mut direct = Complex64::default();
        for k in 0..n {
            direct += (-s * (q + k as f64).ln()).exp();
        }
        let x = q + n as f64;
        direct += (-(s - 1.0) * x.ln()).exp() / (s - 1.0) + 0.5 * (-s * x.ln()).exp();
        let h = hurwitz_zeta(s, q).unwrap();
        assert!((h - direct).norm() < 1e-12 * h.norm());
    }

    #[test]
    fn faddeeva_at_origin_and_imaginary_axis() {
        assert!((faddeeva(c(0.0, 0.0)) - 1.0).norm() < 1e-15);
        // w(i y) = erfcx(y), erfcx(1) = 0.42758357615580700442
        assert!((faddeeva(c(0.0, 1.0)).re - 0.427_583_576_155_807).abs() < 1e-14);
    }

    #[test]
    fn bernoulli_polynomial_values() {
        // B_2(x) = x^2 - x + 1/6
        let b2 = bernoulli_polynomial(2).unwrap();
        assert!((b2[0] - 1.0 / 6.0).abs() < 1e-16 && (b2[1] + 1.0).abs() < 1e-16 && (b2[2] - 1.0).abs() < 1e-16);
    }
}
