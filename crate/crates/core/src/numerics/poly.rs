//! Polynomial roots through the companion matrix, polished by Newton.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Evaluates `p(x) = sum c_k x^k` and `p'(x)` by Horner.
pub fn horner(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::default();
    let mut dp = Complex64::default();
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// All roots of `sum c_k x^k` (lowest degree first) with multiplicities.
/// Roots closer than `cluster_tol` (relative) are merged and their centroid
/// reported.
pub fn roots_with_multiplicity(coeffs: &[Complex64], cluster_tol: f64) -> Vec<(Complex64, u32)> {
    let deg = coeffs.iter().rposition(|c| *c != Complex64::default()).unwrap_or(0);
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    let mut m = DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -coeffs[i] / lead;
    }
    let eig = m.clone().schur().eigenvalues().unwrap_or_else(|| m.eigenvalues().expect("complex Schur form is triangular"));
    let mut roots: Vec<Complex64> = eig.iter().copied().collect();
    let poly = &coeffs[..=deg];
    for r in roots.iter_mut() {
        for _ in 0..8 {
            let (p, dp) = horner(poly, *r);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            let next = *r - step;
            if horner(poly, next).0.norm() >= p.norm() {
                break;
            }
            *r = next;
        }
    }
    let mut out: Vec<(Complex64, u32, Complex64)> = Vec::new();
    for r in roots {
        let scale = r.norm().max(1.0);
        if let Some(slot) = out.iter_mut().find(|(c, _, _)| (*c - r).norm() <= cluster_tol * scale) {
            slot.1 += 1;
            slot.2 += r;
            slot.0 = slot.2 / f64::from(slot.1);
        } else {
            out.push((r, 1, r));
        }
    }
    out.into_iter().map(|(c, n, _)| (c, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots() {
        // x^2 - 3x + 2
        let c = [2.0, -3.0, 1.0].map(|x| Complex64::new(x, 0.0));
        let mut r = roots_with_multiplicity(&c, 1e-7);
        r.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));
        assert_eq!(r.len(), 2);
        assert!((r[0].0 - 1.0).norm() < 1e-14 && (r[1].0 - 2.0).norm() < 1e-14);
    }

    #[test]
    fn double_root_is_merged() {
        // (x - 1)^2 (x + 2)
        let c = [2.0, -3.0, 0.0, 1.0].map(|x| Complex64::new(x, 0.0));
        let r = roots_with_multiplicity(&c, 1e-6);
        assert_eq!(r.len(), 2);
        let d = r.iter().find(|(_, n)| *n == 2).unwrap();
        assert!((d.0 - 1.0).norm() < 1e-7);
    }
}
