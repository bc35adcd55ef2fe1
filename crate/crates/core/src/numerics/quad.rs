//! Globally adaptive Gauss-Kronrod (7, 15) quadrature for complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::config::NumericsConfig;
use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        (&NumericsConfig::default()).into()
    }
}

impl From<&NumericsConfig> for QuadOptions {
    fn from(c: &NumericsConfig) -> Self {
        Self { abs_tol: c.quad_abs_tol, rel_tol: c.quad_rel_tol, max_intervals: c.quad_max_intervals }
    }
}

/// Value and error estimate of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: Complex64,
    pub error: f64,
    pub intervals: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    floor: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Result<Piece> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_k = fc.norm() * WGK[7];
    let mut vals = [(Complex64::default(), Complex64::default()); 7];
    for (j, v) in vals.iter_mut().enumerate() {
        let dx = h * XGK[j];
        let (f1, f2) = (f(c - dx), f(c + dx));
        *v = (f1, f2);
        kron += (f1 + f2) * WGK[j];
        abs_k += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kron * 0.5;
    let mut asc = (fc - mean).norm() * WGK[7];
    for (j, (f1, f2)) in vals.iter().enumerate() {
        asc += ((f1 - mean).norm() + (f2 - mean).norm()) * WGK[j];
    }
    let value = kron * h;
    let (asc, abs_k) = (asc * h.abs(), abs_k * h.abs());
    let mut err = ((kron - gauss) * h).norm();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * abs_k;
    err = err.max(floor);
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::QuadratureFailure(format!("non-finite integrand on [{a}, {b}]")));
    }
    Ok(Piece { a, b, value, error: err, floor })
}

/// Integrates `f` over `[a, b]` starting from `panels` equal subintervals.
pub fn integrate_panels<F>(f: F, a: f64, b: f64, panels: usize, opts: &QuadOptions) -> Result<Quad>
where
    F: Fn(f64) -> Complex64,
{
    let panels = panels.max(1);
    let mut heap = BinaryHeap::with_capacity(2 * panels);
    let w = (b - a) / panels as f64;
    for i in 0..panels {
        let lo = a + w * i as f64;
        let hi = if i + 1 == panels { b } else { lo + w };
        heap.push(gk15(&f, lo, hi)?);
    }
    let mut total: Complex64 = heap.iter().map(|p| p.value).sum();
    let mut err: f64 = heap.iter().map(|p| p.error).sum();
    loop {
        if err <= opts.abs_tol.max(opts.rel_tol * total.norm()) {
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.error).sum();
            if err <= opts.abs_tol.max(opts.rel_tol * total.norm()) {
                return Ok(Quad { value: total, error: err, intervals: heap.len() });
            }
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::QuadratureFailure(format!(
                "error {err:e} after {} intervals on [{a}, {b}]",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || worst.error <= worst.floor {
            // Interval exhausted at machine resolution, or the largest error is
            // already the rounding floor: accept what we have.
            heap.push(worst);
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.error).sum();
            return Ok(Quad { value: total, error: err, intervals: heap.len() });
        }
        let (l, r) = (gk15(&f, worst.a, mid)?, gk15(&f, mid, worst.b)?);
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
    }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<Quad>
where
    F: Fn(f64) -> Complex64,
{
    integrate_panels(f, a, b, 1, opts)
}

/// Integrates `f` over `[a, inf)` through `t = a + u / (1 - u)`.
pub fn integrate_semi_infinite<F>(f: F, a: f64, opts: &QuadOptions) -> Result<Quad>
where
    F: Fn(f64) -> Complex64,
{
    let g = |u: f64| {
        let v = 1.0 - u;
        f(a + u / v) / (v * v)
    };
    integrate_panels(g, 0.0, 1.0, 4, opts)
}

/// Integrates a real integrand over `[a, b]`.
pub fn integrate_real<F>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let q = integrate(|t| Complex64::new(f(t), 0.0), a, b, opts)?;
    Ok((q.value.re, q.error))
}
