//! Compensated accumulation built on the TwoSum error-free transformation.
//!
//! The running sum and the accumulated rounding error are kept separately
//! and only combined on read, so adding an exact zero never perturbs the
//! state. Two accumulators fed the same sequence agree bit for bit.

use num_complex::Complex64;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    err: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.sum, x);
        self.sum = s;
        self.err += e;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.err
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Sum a sequence with compensation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_under_large_cancellation() {
        let v = compensated_sum([1e100, 1.0, -1e100]);
        assert_eq!(v, 1.0);
        let naive: f64 = [1e100, 1.0, -1e100].iter().sum();
        assert_eq!(naive, 0.0);
    }

    #[test]
    fn tenths() {
        let v = compensated_sum(std::iter::repeat_n(0.1, 10));
        assert_eq!(v, 1.0);
    }

    #[test]
    fn zeros_leave_state_untouched() {
        let xs = [0.3, 1e-17, -0.7, 2.5e-9, 0.1];
        let mut a = CompensatedSum::new();
        let mut b = CompensatedSum::new();
        for &x in &xs {
            a.add(x);
            b.add(x);
            b.add(0.0);
            b.add(-0.0);
        }
        assert_eq!(a.value().to_bits(), b.value().to_bits());
    }

    #[test]
    fn empty_is_zero() {
        assert_eq!(compensated_sum(std::iter::empty()), 0.0);
    }
}
