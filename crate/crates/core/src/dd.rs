//! Minimal double-double arithmetic (~31 significant digits) for series
//! pipelines whose alternating convolutions would otherwise lose a large
//! slice of f64 precision to cancellation. Internal only.

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul(Dd::from_f64(q1)));
        let q2 = r.hi / other.hi;
        let r = r.sub(other.mul(Dd::from_f64(q2)));
        let q3 = r.hi / other.hi;
        let (s, e) = two_sum(q1, q2);
        let (hi, lo) = quick_two_sum(s, e + q3);
        Dd { hi, lo }
    }

    /// One Newton step from the f64 square root; requires `self >= 0`.
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        let y = self.hi.sqrt();
        let yd = Dd::from_f64(y);
        let r = self.sub(yd.mul(yd));
        yd.add(Dd::from_f64(r.to_f64() / (2.0 * y)))
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representable_cancellation() {
        // (1 + 2^-60) - 1 survives in double-double.
        let tiny = (2.0f64).powi(-60);
        let x = Dd::ONE.add(Dd::from_f64(tiny));
        let d = x.sub(Dd::ONE);
        assert_eq!(d.to_f64(), tiny);
    }

    #[test]
    fn division_and_sqrt_identities() {
        let a = Dd::from_f64(3.0);
        let third = Dd::ONE.div(a);
        let back = third.mul(a).sub(Dd::ONE);
        assert!(back.to_f64().abs() < 1e-30);

        let two = Dd::from_f64(2.0);
        let r = two.sqrt();
        let err = r.mul(r).sub(two);
        assert!(err.to_f64().abs() < 1e-30);
    }

    #[test]
    fn accumulated_dot_product_beats_f64() {
        // Alternating sum with heavy cancellation: sum_k (-1)^k / k! * e
        // approximations stay coherent at the 1e-28 level.
        let mut acc = Dd::ZERO;
        let mut term = Dd::ONE;
        for k in 1..=30 {
            acc = acc.add(term);
            term = term.mul(Dd::from_f64(-1.0)).div(Dd::from_f64(k as f64));
        }
        let expected = (-1.0f64).exp();
        assert!((acc.to_f64() - expected).abs() < 1e-16);
    }
}
