//! Zeros of finite Dirichlet series.
//!
//! `count_zeros_rect` evaluates the argument principle with a certified step
//! rule: a contour segment of length `h` is accepted when
//! `M h / 2 < 0.9 min(|f(z0)|, |f(z1)|)`, where `M` bounds `|f'|` on the
//! segment. Every point of the segment then maps into one of two discs that
//! avoid the origin, so the principal argument increment is exact.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::NumericsConfig;
use crate::error::{Error, Rect, Result};
use crate::numerics::poly::roots_with_multiplicity;
use crate::numerics::special::{digamma, hurwitz_zeta};
use crate::series::{FiniteDirichletSeries, StripBound};

/// A point of the divisor with signed multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivisorEntry {
    pub rho: Complex64,
    pub n: i32,
}

/// Arithmetic progression `base + k step` of points sharing one multiplicity.
/// Two-sided towers run over all integers `k`, one-sided towers over `k >= 0`.
/// Members with `k_lo <= k <= k_hi` are listed explicitly in the divisor; the
/// rest are summed in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tower {
    pub base: Complex64,
    pub step: Complex64,
    pub n: i32,
    pub k_lo: i64,
    pub k_hi: i64,
    pub two_sided: bool,
}

/// Counting model for zeros omitted by a height cutoff: at most
/// `per_height * h + offset` zeros (with multiplicity) in any horizontal band
/// of height `h` on each side of the real axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityModel {
    pub per_height: f64,
    pub offset: f64,
    /// Largest real part of any zero, listed or not.
    pub sigma_max: f64,
}

/// Truncated divisor with the data needed to bound or sum what was left out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Divisor {
    pub entries: Vec<DivisorEntry>,
    /// `sup Re rho` over the listed entries.
    pub sigma1: f64,
    /// Hadamard order: the smallest `d` with `sum |rho|^{-d} < inf`.
    pub d: u32,
    /// Genus, `d - 1`.
    pub g: u32,
    /// Height cutoff of the listing, `inf` for complete divisors.
    pub ymax: f64,
    pub towers: Vec<Tower>,
    /// Present when entries beyond `ymax` were omitted and are not covered by
    /// towers.
    pub density: Option<DensityModel>,
}

/// Zero multiplicity and distance tolerance for "sigma is a point of the divisor".
pub const ON_DIVISOR_TOL: f64 = 1e-12;
/// Distances below this (and above `ON_DIVISOR_TOL`) are refused as ill-conditioned.
pub const EXCLUSION_RADIUS: f64 = 1e-9;

impl Divisor {
    /// Complete finite divisor.
    pub fn finite(entries: Vec<DivisorEntry>, d: u32) -> Self {
        let sigma1 = entries.iter().map(|e| e.rho.re).fold(f64::NEG_INFINITY, f64::max);
        Self { entries, sigma1, d, g: d.saturating_sub(1), ymax: f64::INFINITY, towers: Vec::new(), density: None }
    }

    /// Points `base + k step`, `k >= 0`, each of multiplicity `n`; the first
    /// `listed` are explicit and the rest are summed in closed form. With
    /// `base = 0, step = -1, n = 1` this is the divisor of `1 / Gamma(s)`.
    pub fn one_sided(base: Complex64, step: Complex64, n: i32, listed: usize) -> Self {
        let entries = (0..listed).map(|k| DivisorEntry { rho: base + step * k as f64, n }).collect::<Vec<_>>();
        let sigma1 = if step.re <= 0.0 { base.re } else { f64::INFINITY };
        Self {
            entries,
            sigma1,
            d: 2,
            g: 1,
            ymax: f64::INFINITY,
            towers: vec![Tower { base, step, n, k_lo: 0, k_hi: listed as i64 - 1, two_sided: false }],
            density: None,
        }
    }

    /// Adds `n` to the multiplicity at `rho`, merging with a listed entry at the
    /// same point and dropping it when the total vanishes. Dividing a series by
    /// `s - rho` is `with_point(rho, -1)`.
    pub fn with_point(mut self, rho: Complex64, n: i32) -> Self {
        let tol = ON_DIVISOR_TOL * rho.norm().max(1.0);
        match self.entries.iter().position(|e| (e.rho - rho).norm() <= tol) {
            Some(i) => {
                self.entries[i].n += n;
                if self.entries[i].n == 0 {
                    self.entries.remove(i);
                }
            }
            None => self.entries.push(DivisorEntry { rho, n }),
        }
        let towers = self.towers.iter().map(|t| if t.step.re <= 0.0 { t.base.re } else { f64::INFINITY });
        self.sigma1 = self.entries.iter().map(|e| e.rho.re).chain(towers).fold(f64::NEG_INFINITY, f64::max);
        self
    }

    /// Entry within `ON_DIVISOR_TOL` of `sigma`, or an error when `sigma` sits
    /// inside the exclusion radius of some point without coinciding with it.
    pub fn locate(&self, sigma: Complex64) -> Result<Option<DivisorEntry>> {
        let mut hit = None;
        for e in &self.entries {
            let d = (e.rho - sigma).norm();
            if d <= ON_DIVISOR_TOL * e.rho.norm().max(1.0) {
                hit = Some(*e);
            } else if d < EXCLUSION_RADIUS {
                return Err(Error::SigmaOnDivisor(sigma));
            }
        }
        if hit.is_none() {
            for t in &self.towers {
                if let Some((k, d)) = t.nearest_member(sigma) {
                    if (k < t.k_lo || k > t.k_hi) && d < EXCLUSION_RADIUS {
                        return Err(Error::SigmaOnDivisor(sigma));
                    }
                }
            }
        }
        Ok(hit)
    }

    /// Sum of `|n|` over the listed entries.
    pub fn total_multiplicity(&self) -> i64 {
        self.entries.iter().map(|e| i64::from(e.n.abs())).sum()
    }

    /// Bound on `sum |n| |rho - sigma|^{-p}` over zeros omitted by the height
    /// cutoff and not covered by towers, with the distance measured from a
    /// point of imaginary part at most `im_reach` in modulus.
    pub fn omitted_power_bound(&self, p: f64, im_reach: f64) -> f64 {
        let Some(dm) = self.density else { return 0.0 };
        let y = self.ymax - im_reach;
        if !(y > 0.0) || p <= 1.0 {
            return f64::INFINITY;
        }
        2.0 * (dm.per_height * y.powf(1.0 - p) / (p - 1.0) + dm.offset * y.powf(-p))
    }

    /// `sum n (rho - sigma)^{-ell}` over tower members that are not listed,
    /// for `ell >= 2`.
    pub fn tower_power_tail(&self, ell: u32, sigma: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::default();
        let s = Complex64::new(f64::from(ell), 0.0);
        for t in &self.towers {
            let c = (t.base - sigma) / t.step;
            acc += f64::from(t.n) * t.step.powi(-(ell as i32)) * hurwitz_zeta(s, c + (t.k_hi + 1) as f64)?;
            if t.two_sided {
                let c = (t.base - sigma) / (-t.step);
                acc += f64::from(t.n) * (-t.step).powi(-(ell as i32)) * hurwitz_zeta(s, c + (1 - t.k_lo) as f64)?;
            }
        }
        Ok(acc)
    }

    /// `sum n [1/(rho - sigma) - 1/(rho - s)]` over unlisted tower members.
    pub fn tower_reciprocal_difference(&self, s: Complex64, sigma: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::default();
        for t in &self.towers {
            let k0 = (t.k_hi + 1) as f64;
            let (cs, cg) = ((t.base - s) / t.step, (t.base - sigma) / t.step);
            acc += f64::from(t.n) / t.step * (digamma(cs + k0)? - digamma(cg + k0)?);
            if t.two_sided {
                let j0 = (1 - t.k_lo) as f64;
                let (cs, cg) = ((t.base - s) / (-t.step), (t.base - sigma) / (-t.step));
                acc += f64::from(t.n) / (-t.step) * (digamma(cs + j0)? - digamma(cg + j0)?);
            }
        }
        Ok(acc)
    }
}

impl Tower {
    fn nearest_member(&self, z: Complex64) -> Option<(i64, f64)> {
        let k = ((z - self.base) / self.step).re.round();
        if !k.is_finite() || (!self.two_sided && k < 0.0) {
            return None;
        }
        let k = k as i64;
        Some((k, (self.base + self.step * k as f64 - z).norm()))
    }
}

/// Result of expressing every frequency as an integer multiple of one unit.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalReduction {
    pub lambda: f64,
    pub exponents: Vec<u64>,
    /// Polynomial in `X = exp(-lambda s)`, lowest degree first, constant 1.
    pub poly: Vec<Complex64>,
}

/// Largest denominator tried by [`reduce_rational`].
pub const MAX_DENOMINATOR: u64 = 64;
/// Largest polynomial degree accepted by [`reduce_rational`].
pub const MAX_RATIONAL_DEGREE: u64 = 4096;

/// Writes `lambda_n = m_n lambda` with integers `m_n` when every ratio
/// `lambda_n / lambda_1` has denominator at most 64 (relative tolerance 1e-9).
pub fn reduce_rational(f: &FiniteDirichletSeries) -> Option<RationalReduction> {
    let l1 = f.lambdas()[0];
    let ratios: Vec<f64> = f.lambdas().iter().map(|l| l / l1).collect();
    let q = (1..=MAX_DENOMINATOR).find(|&q| {
        ratios.iter().all(|r| {
            let x = r * q as f64;
            (x - x.round()).abs() <= 1e-9 * x
        })
    })?;
    let ints: Vec<u64> = ratios.iter().map(|r| (r * q as f64).round() as u64).collect();
    let g = ints.iter().fold(0u64, |a, &b| gcd(a, b));
    let exponents: Vec<u64> = ints.iter().map(|k| k / g).collect();
    let degree = *exponents.last()?;
    if degree > MAX_RATIONAL_DEGREE {
        return None;
    }
    let mut poly = vec![Complex64::default(); degree as usize + 1];
    poly[0] = Complex64::new(1.0, 0.0);
    for (k, a) in exponents.iter().zip(f.coeffs()) {
        poly[*k as usize] += a;
    }
    Some(RationalReduction { lambda: l1 * g as f64 / q as f64, exponents, poly })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Zeros with `|Im| <= ymax` of a series with commensurable frequencies,
/// from the roots of its polynomial in `exp(-lambda s)`. Each root yields a
/// two-sided tower with step `2 pi i / lambda`.
pub fn rational_divisor(f: &FiniteDirichletSeries, red: &RationalReduction, ymax: f64) -> Divisor {
    let lambda = red.lambda;
    let step = Complex64::new(0.0, 2.0 * PI / lambda);
    let period = 2.0 * PI / lambda;
    let mut towers = Vec::new();
    let mut entries = Vec::new();
    for (x, n) in roots_with_multiplicity(&red.poly, 1e-6) {
        let base = -x.ln() / lambda;
        let k_lo = ((-ymax - base.im) / period).ceil() as i64;
        let k_hi = ((ymax - base.im) / period).floor() as i64;
        for k in k_lo..=k_hi {
            entries.push(DivisorEntry { rho: base + step * k as f64, n: n as i32 });
        }
        towers.push(Tower { base, step, n: n as i32, k_lo, k_hi, two_sided: true });
    }
    sort_entries(&mut entries);
    let strip = f.zero_strip();
    let sigma1 = entries.iter().map(|e| e.rho.re).fold(strip.sigma_minus, f64::max);
    Divisor { entries, sigma1, d: 2, g: 1, ymax, towers, density: Some(density_for(f, strip)) }
}

fn density_for(f: &FiniteDirichletSeries, strip: StripBound) -> DensityModel {
    DensityModel { per_height: f.lambda_max() / (2.0 * PI), offset: f.len() as f64 + 1.0, sigma_max: strip.sigma_plus }
}

fn sort_entries(entries: &mut [DivisorEntry]) {
    entries.sort_by(|a, b| a.rho.im.total_cmp(&b.rho.im).then(a.rho.re.total_cmp(&b.rho.re)));
}

/// Zero finder for one series.
struct Search<'a> {
    f: &'a FiniteDirichletSeries,
    cfg: &'a NumericsConfig,
    residual_tol: f64,
}

fn corner_points(r: &Rect) -> [Complex64; 4] {
    [
        Complex64::new(r.re0, r.im0),
        Complex64::new(r.re1, r.im0),
        Complex64::new(r.re1, r.im1),
        Complex64::new(r.re0, r.im1),
    ]
}

impl<'a> Search<'a> {
    fn new(f: &'a FiniteDirichletSeries, cfg: &'a NumericsConfig) -> Self {
        let residual_tol = cfg.newton_residual * f.l1_norm().max(1.0);
        Self { f, cfg, residual_tol }
    }

    /// Certified argument increment of `f` along the segment `z0 -> z1`.
    fn segment(&self, z0: Complex64, z1: Complex64, f0: Complex64, f1: Complex64, depth: u32, rect: Rect) -> Result<f64> {
        let clear = self.cfg.boundary_clearance;
        if f0.norm() < clear || f1.norm() < clear {
            return Err(Error::BoundaryZero(rect));
        }
        let h = (z1 - z0).norm();
        let m = self.f.derivative_bound(z0.re.min(z1.re));
        if 0.5 * m * h < 0.9 * f0.norm().min(f1.norm()) {
            return Ok((f1 / f0).arg());
        }
        if depth >= self.cfg.max_segment_depth {
            return Err(Error::PhaseJump(rect));
        }
        let zm = 0.5 * (z0 + z1);
        let fm = self.f.eval(zm);
        Ok(self.segment(z0, zm, f0, fm, depth + 1, rect)? + self.segment(zm, z1, fm, f1, depth + 1, rect)?)
    }

    /// Winding number of `f` around the closed polygon `pts`.
    fn winding(&self, pts: &[Complex64], rect: Rect) -> Result<i64> {
        let vals: Vec<Complex64> = pts.iter().map(|&z| self.f.eval(z)).collect();
        let mut total = 0.0;
        for i in 0..pts.len() {
            let j = (i + 1) % pts.len();
            total += self.segment(pts[i], pts[j], vals[i], vals[j], 0, rect)?;
        }
        let w = total / (2.0 * PI);
        if (w - w.round()).abs() > 1e-3 {
            return Err(Error::PhaseJump(rect));
        }
        Ok(w.round() as i64)
    }

    fn count(&self, r: Rect) -> Result<i64> {
        self.winding(&corner_points(&r), r)
    }

    /// Damped Newton with multiplicity `m`, started at `z`.
    fn newton(&self, mut z: Complex64, m: u32) -> Option<Complex64> {
        let mf = f64::from(m);
        let (mut fz, mut dz) = self.f.eval_with_derivative(z);
        for _ in 0..self.cfg.newton_max_iter {
            if dz.norm() == 0.0 || !fz.norm().is_finite() {
                return None;
            }
            let step = mf * fz / dz;
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                let cand = z - step * lambda;
                let (fc, dc) = self.f.eval_with_derivative(cand);
                if fc.norm() < fz.norm() || fc.norm() <= self.floor(cand) {
                    z = cand;
                    fz = fc;
                    dz = dc;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            let tiny = (step * lambda).norm() <= 1e-15 * z.norm().max(1.0);
            if !accepted || tiny {
                break;
            }
        }
        (fz.norm() <= self.residual_tol.max(self.floor(z))).then_some(z)
    }

    /// Rounding floor of `|f(z)|`.
    fn floor(&self, z: Complex64) -> f64 {
        64.0 * f64::EPSILON * self.f.magnitude_scale(z)
    }

    fn inside(r: &Rect, z: Complex64) -> bool {
        z.re >= r.re0 && z.re <= r.re1 && z.im >= r.im0 && z.im <= r.im1
    }

    /// Multiplicity of the zero at `z` by winding on a small polygonal circle.
    fn local_multiplicity(&self, z: Complex64, radius: f64) -> Result<i64> {
        let pts: Vec<Complex64> = (0..32).map(|j| z + Complex64::from_polar(radius, 2.0 * PI * j as f64 / 32.0)).collect();
        let r = Rect { re0: z.re - radius, re1: z.re + radius, im0: z.im - radius, im1: z.im + radius };
        self.winding(&pts, r)
    }

    /// Splits `r` across its longer side near the middle, avoiding zeros on
    /// the cut; returns the halves with their counts.
    fn split(&self, r: Rect, count: i64) -> Result<[(Rect, i64); 2]> {
        let horizontal = r.re1 - r.re0 >= r.im1 - r.im0;
        let offsets = [0.5, 0.437, 0.571, 0.389, 0.613, 0.341, 0.659, 0.293, 0.707, 0.25, 0.75];
        let mut last = Error::RefinementFailed(r);
        for &o in &offsets {
            let (a, b) = if horizontal {
                let x = r.re0 + o * (r.re1 - r.re0);
                (Rect { re1: x, ..r }, Rect { re0: x, ..r })
            } else {
                let y = r.im0 + o * (r.im1 - r.im0);
                (Rect { im1: y, ..r }, Rect { im0: y, ..r })
            };
            match (self.count(a), self.count(b)) {
                (Ok(ca), Ok(cb)) if ca + cb == count && ca >= 0 && cb >= 0 => return Ok([(a, ca), (b, cb)]),
                (Err(e), _) | (_, Err(e)) => last = e,
                _ => last = Error::PhaseJump(r),
            }
        }
        Err(last)
    }

    fn diameter(r: &Rect) -> f64 {
        (r.re1 - r.re0).hypot(r.im1 - r.im0)
    }

    fn resolve(&self, r: Rect, count: i64, depth: u32) -> Result<Vec<DivisorEntry>> {
        if count == 0 {
            return Ok(Vec::new());
        }
        let centre = Complex64::new(0.5 * (r.re0 + r.re1), 0.5 * (r.im0 + r.im1));
        if count == 1 {
            if let Some(z) = self.newton(centre, 1) {
                if Self::inside(&r, z) {
                    return Ok(vec![DivisorEntry { rho: z, n: 1 }]);
                }
            }
        }
        if count > 1 && Self::diameter(&r) < self.cfg.cluster_diameter {
            return self.cluster(r, count);
        }
        if depth > 80 {
            return Err(Error::RefinementFailed(r));
        }
        let halves = match self.split(r, count) {
            Ok(h) => h,
            Err(e @ Error::BoundaryZero(_)) | Err(e @ Error::PhaseJump(_)) => {
                // The cut cannot avoid a zero at the clearance level: a
                // multiple zero or a tight cluster sits here.
                return self.cluster(r, count).map_err(|_| e);
            }
            Err(e) => return Err(e),
        };
        let [(a, ca), (b, cb)] = halves;
        let (ra, rb) = rayon::join(|| self.resolve(a, ca, depth + 1), || self.resolve(b, cb, depth + 1));
        let mut out = ra?;
        out.extend(rb?);
        Ok(out)
    }

    /// A cluster of `count` zeros reported as one point of that multiplicity.
    fn cluster(&self, r: Rect, count: i64) -> Result<Vec<DivisorEntry>> {
        if count > i64::from(self.cfg.multiplicity_cap) {
            return Err(Error::MultiplicityCap(count as u32));
        }
        let centre = Complex64::new(0.5 * (r.re0 + r.re1), 0.5 * (r.im0 + r.im1));
        let z = self.newton(centre, count as u32).ok_or(Error::RefinementFailed(r))?;
        let radius = Self::diameter(&r).max(1e-3);
        let m = self.local_multiplicity(z, radius)?;
        if m != count {
            return Err(Error::RefinementFailed(r));
        }
        Ok(vec![DivisorEntry { rho: z, n: count as i32 }])
    }
}

/// Number of zeros of `f` inside `rect`, with multiplicity.
pub fn count_zeros_rect(f: &FiniteDirichletSeries, rect: Rect, cfg: &NumericsConfig) -> Result<i64> {
    Search::new(f, cfg).count(rect)
}

/// Zeros of `f` with `|Im rho| <= ymax` by recursive subdivision of the strip.
pub fn find_zeros(f: &FiniteDirichletSeries, ymax: f64, cfg: &NumericsConfig) -> Result<Divisor> {
    if !(ymax > 0.0) {
        return Err(Error::OutOfRange(format!("ymax must be positive, got {ymax}")));
    }
    let search = Search::new(f, cfg);
    let strip = f.zero_strip();
    let margin = 0.5_f64.max(0.05 * (strip.sigma_plus - strip.sigma_minus));
    let nudges = [0.0, 1.3e-3, 3.1e-3, 7.7e-3, 1.9e-2, 4.3e-2, 9.7e-2, 0.21, 0.37];
    let mut last = None;
    for &dy in &nudges {
        let y = ymax + dy;
        let rect = Rect { re0: strip.sigma_minus - margin, re1: strip.sigma_plus + margin, im0: -y, im1: y };
        let count = match search.count(rect) {
            Ok(c) => c,
            Err(e) => {
                last = Some(e);
                continue;
            }
        };
        let mut entries = search.resolve(rect, count, 0)?;
        let found: i64 = entries.iter().map(|e| i64::from(e.n)).sum();
        if found != count {
            return Err(Error::RefinementFailed(rect));
        }
        entries.retain(|e| e.rho.im.abs() <= ymax);
        if f.is_real(0.0) {
            symmetrize(&mut entries);
        }
        sort_entries(&mut entries);
        let sigma1 = entries.iter().map(|e| e.rho.re).fold(strip.sigma_minus, f64::max);
        return Ok(Divisor { entries, sigma1, d: 2, g: 1, ymax, towers: Vec::new(), density: Some(density_for(f, strip)) });
    }
    Err(last.unwrap_or(Error::RefinementFailed(Rect { re0: strip.sigma_minus, re1: strip.sigma_plus, im0: -ymax, im1: ymax })))
}

/// Replaces each zero in the lower half plane by the conjugate of its partner.
fn symmetrize(entries: &mut [DivisorEntry]) {
    let upper: Vec<DivisorEntry> = entries.iter().filter(|e| e.rho.im > 0.0).cloned().collect();
    for e in entries.iter_mut().filter(|e| e.rho.im < 0.0) {
        if let Some(p) = upper
            .iter()
            .filter(|p| p.n == e.n)
            .min_by(|a, b| (a.rho.conj() - e.rho).norm().total_cmp(&(b.rho.conj() - e.rho).norm()))
        {
            if (p.rho.conj() - e.rho).norm() < 1e-8 * p.rho.norm().max(1.0) {
                e.rho = p.rho.conj();
            }
        }
    }
    for e in entries.iter_mut() {
        if e.rho.im.abs() < 1e-14 {
            e.rho.im = 0.0;
        }
    }
}

/// Zeros through rational reduction when the frequencies are commensurable,
/// otherwise through [`find_zeros`].
pub fn find_zeros_auto(f: &FiniteDirichletSeries, ymax: f64, cfg: &NumericsConfig) -> Result<Divisor> {
    match reduce_rational(f) {
        Some(red) => Ok(rational_divisor(f, &red, ymax)),
        None => find_zeros(f, ymax, cfg),
    }
}

/// Solutions of `f(s) = c` with `|Im| <= ymax`.
pub fn find_level_zeros(f: &FiniteDirichletSeries, c: Complex64, ymax: f64, cfg: &NumericsConfig) -> Result<Divisor> {
    find_zeros(&f.level_series(c)?, ymax, cfg)
}
