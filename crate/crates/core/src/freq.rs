//! Frequency side of the formula: the expansion
//! `-log f(s) = sum_k b_k exp(-<lambda, k> s)` over multi-indices `k`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::special::ln_factorial;
use crate::numerics::sum::CompensatedSum;
use crate::series::FiniteDirichletSeries;

/// Sparse multi-index: `(slot, count)` pairs with increasing slot, zero-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(pub Vec<(usize, u32)>);

impl MultiIndex {
    /// Dense constructor; zero entries are dropped.
    pub fn from_dense(k: &[u32]) -> Self {
        Self(k.iter().enumerate().filter(|(_, &c)| c > 0).map(|(j, &c)| (j, c)).collect())
    }

    /// `||k|| = sum_j k_j`.
    pub fn order(&self) -> u32 {
        self.0.iter().map(|(_, c)| c).sum()
    }

    /// `<lambda, k>`.
    pub fn frequency(&self, lambdas: &[f64]) -> f64 {
        self.0.iter().map(|&(j, c)| lambdas[j] * f64::from(c)).sum()
    }
}

impl fmt::Display for MultiIndex {
    /// One-based `slot:count` pairs separated by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(j, c)| format!("{}:{}", j + 1, c)).collect();
        f.write_str(&parts.join(" "))
    }
}

/// One frequency `<lambda, k>` with its coefficient, once computed.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTerm {
    pub k: MultiIndex,
    pub value: f64,
    pub b: Option<Complex64>,
}

/// Relative slack when comparing a frequency against the cutoff, so exact
/// ties such as `2 log 3 = log 9` are kept.
const CUTOFF_SLACK: f64 = 1e-12;

/// All `k` with `||k|| >= 1` and `<lambda, k> <= t_max`, sorted by value and
/// then by `k`. Fails once more than `cap` terms are produced.
pub fn enumerate_frequencies(lambdas: &[f64], t_max: f64, cap: usize) -> Result<Vec<FrequencyTerm>> {
    if lambdas.iter().any(|l| !(*l > 0.0)) {
        return Err(Error::InvalidSeries("frequencies must be positive".into()));
    }
    let limit = t_max + CUTOFF_SLACK * t_max.abs().max(1.0);
    let mut out = Vec::new();
    let mut counts = vec![0u32; lambdas.len()];
    fn walk(
        slot: usize,
        acc: f64,
        lambdas: &[f64],
        limit: f64,
        counts: &mut Vec<u32>,
        out: &mut Vec<FrequencyTerm>,
        cap: usize,
    ) -> Result<()> {
        if slot == lambdas.len() {
            if counts.iter().any(|&c| c > 0) {
                if out.len() >= cap {
                    return Err(Error::BudgetExceeded(format!("more than {cap} frequency terms")));
                }
                out.push(FrequencyTerm { k: MultiIndex::from_dense(counts), value: acc, b: None });
            }
            return Ok(());
        }
        let mut c = 0u32;
        let mut v = acc;
        while v <= limit {
            counts[slot] = c;
            walk(slot + 1, v, lambdas, limit, counts, out, cap)?;
            c += 1;
            v = acc + f64::from(c) * lambdas[slot];
        }
        counts[slot] = 0;
        Ok(())
    }
    walk(0, 0.0, lambdas, limit, &mut counts, &mut out, cap)?;
    out.sort_by(|x, y| x.value.total_cmp(&y.value).then_with(|| x.k.cmp(&y.k)));
    Ok(out)
}

/// `b_k = ((-1)^{||k||} / ||k||) (||k||! / prod k_j!) prod a_j^{k_j}`.
/// Switches to log-space accumulation for `||k|| > 30`.
pub fn b_coefficient(coeffs: &[Complex64], k: &MultiIndex) -> Complex64 {
    let n = k.order();
    if n == 0 {
        return Complex64::default();
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    if n <= 30 {
        // multinomial as a running product of binomials
        let mut multinom = 1.0;
        let mut seen = 0u32;
        let mut prod = Complex64::new(1.0, 0.0);
        for &(j, c) in &k.0 {
            for i in 1..=c {
                seen += 1;
                multinom *= f64::from(seen) / f64::from(i);
            }
            prod *= coeffs[j].powu(c);
        }
        return prod * (sign * multinom / f64::from(n));
    }
    let mut log_mag = ln_factorial(u64::from(n) - 1);
    let mut phase = 0.0;
    for &(j, c) in &k.0 {
        let a = coeffs[j];
        if a.norm() == 0.0 {
            return Complex64::default();
        }
        log_mag += f64::from(c) * a.norm().ln() - ln_factorial(u64::from(c));
        phase += f64::from(c) * a.arg();
    }
    Complex64::from_polar(sign * log_mag.exp(), phase)
}

/// Enumerates frequencies up to `t_max` and fills in `b_k`.
pub fn expand(f: &FiniteDirichletSeries, t_max: f64, cap: usize) -> Result<Vec<FrequencyTerm>> {
    let mut terms = enumerate_frequencies(f.lambdas(), t_max, cap)?;
    for t in &mut terms {
        t.b = Some(b_coefficient(f.coeffs(), &t.k));
    }
    Ok(terms)
}

/// Merges terms whose frequencies agree within `tol` (relative), summing `b`.
pub fn aggregate(terms: &[FrequencyTerm], tol: f64) -> Vec<(f64, Complex64)> {
    let mut out: Vec<(f64, Complex64)> = Vec::new();
    for t in terms {
        let b = t.b.unwrap_or_default();
        match out.last_mut() {
            Some((v, acc)) if (t.value - *v).abs() <= tol * v.abs().max(1.0) => *acc += b,
            _ => out.push((t.value, b)),
        }
    }
    out
}

/// Independent route to the aggregated expansion: the series
/// `-log(1 + u) = sum_m (-1)^m u^m / m` composed on truncated exponent
/// polynomials.
pub fn log_expansion_oracle(f: &FiniteDirichletSeries, t_max: f64) -> Vec<(f64, Complex64)> {
    let limit = t_max + CUTOFF_SLACK * t_max.abs().max(1.0);
    let u: Vec<(f64, Complex64)> = f.lambdas().iter().copied().zip(f.coeffs().iter().copied()).collect();
    let merge = |mut v: Vec<(f64, Complex64)>| -> Vec<(f64, Complex64)> {
        v.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out: Vec<(f64, Complex64)> = Vec::new();
        for (e, c) in v {
            match out.last_mut() {
                Some((pe, pc)) if (e - *pe).abs() <= 1e-9 * pe.abs().max(1.0) => *pc += c,
                _ => out.push((e, c)),
            }
        }
        out
    };
    let mut total: Vec<(f64, Complex64)> = Vec::new();
    let mut power = u.clone();
    let mut m = 1u32;
    while !power.is_empty() {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        total.extend(power.iter().map(|&(e, c)| (e, c * (sign / f64::from(m)))));
        let mut next = Vec::new();
        for &(e1, c1) in &power {
            for &(e2, c2) in &u {
                if e1 + e2 <= limit {
                    next.push((e1 + e2, c1 * c2));
                }
            }
        }
        power = merge(next);
        m += 1;
    }
    merge(total.into_iter().filter(|(e, _)| *e <= limit).collect())
}

/// Power sums `S_m = sum alpha^m` of the roots of
/// `z^n + a_1 z^{n-1} + ... + a_n`, for `m = 1..=m_max`, through
/// `S_m = m sum_{sum_j j k_j = m} b_k`.
pub fn newton_sums(poly: &[Complex64], m_max: u32) -> Vec<Complex64> {
    (1..=m_max)
        .map(|m| {
            let mut acc = CompensatedSum::new();
            for_each_weighted_partition(m, poly.len(), |k| acc.add(b_coefficient(poly, &MultiIndex::from_dense(k))));
            acc.value() * f64::from(m)
        })
        .collect()
}

/// Calls `visit` on every dense `k` of length `n` with `sum_j (j+1) k_j = m`.
pub fn for_each_weighted_partition<F: FnMut(&[u32])>(m: u32, n: usize, mut visit: F) {
    fn rec<F: FnMut(&[u32])>(slot: usize, remaining: u32, k: &mut Vec<u32>, visit: &mut F) {
        if slot == k.len() {
            if remaining == 0 {
                visit(k);
            }
            return;
        }
        let w = slot as u32 + 1;
        for c in 0..=(remaining / w) {
            k[slot] = c;
            rec(slot + 1, remaining - c * w, k, visit);
        }
        k[slot] = 0;
    }
    let mut k = vec![0u32; n];
    rec(0, m, &mut k, &mut visit);
}

/// Coefficients of `S_m` as a polynomial in the elementary symmetric
/// functions `Sigma_j`, derived from `b_k` with `a_j = (-1)^j Sigma_j`:
/// each monomial `prod Sigma_j^{k_j}` carries `m b_k` evaluated at `Sigma = 1`.
pub fn newton_monomials(m: u32) -> Vec<(Vec<u32>, f64)> {
    let n = m as usize;
    let signs: Vec<Complex64> = (1..=n).map(|j| Complex64::new(if j % 2 == 0 { 1.0 } else { -1.0 }, 0.0)).collect();
    let mut out = Vec::new();
    for_each_weighted_partition(m, n, |k| {
        let c = b_coefficient(&signs, &MultiIndex::from_dense(k)).re * f64::from(m);
        out.push((k.to_vec(), c));
    });
    out
}
