//! Compensated summation.

use num_complex::Complex64;

/// Neumaier summation on each component.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

fn two_sum(acc: f64, comp: &mut f64, x: f64) -> f64 {
    let t = acc + x;
    if acc.abs() >= x.abs() {
        *comp += (acc - t) + x;
    } else {
        *comp += (x - t) + acc;
    }
    t
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Complex64) {
        self.sum.re = two_sum(self.sum.re, &mut self.comp.re, x.re);
        self.sum.im = two_sum(self.sum.im, &mut self.comp.im, x.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

impl Extend<Complex64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = Complex64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<Complex64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = Self::new();
        s.extend(iter);
        s
    }
}

/// Compensated sum of an iterator of complex numbers.
pub fn csum<I: IntoIterator<Item = Complex64>>(iter: I) -> Complex64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let xs = [1e16, 1.0, -1e16, 1.0].map(|x| Complex64::new(x, -x));
        let s = csum(xs);
        assert_eq!(s, Complex64::new(2.0, -2.0));
    }
}
