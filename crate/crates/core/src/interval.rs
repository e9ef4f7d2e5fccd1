//! Exact interval arithmetic over arbitrary-precision rationals.
//!
//! Endpoints are closed; every operation returns an interval containing the
//! image of every point of the operands. There is no floating-point fast
//! path: enclosures are exact rational numbers, so soundness never depends
//! on rounding direction.

use crate::scalar::{rat_le, rat_lt, rat_max, rat_to_f64, Scalar};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq)]
pub struct RatInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(rat_le(&lo, &hi), "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    /// Construction from endpoints whose order is structurally known
    /// (checked only in debug builds).
    pub(crate) fn new_ordered(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(rat_le(&lo, &hi), "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    /// Construction from endpoints in unknown order.
    pub fn from_endpoints(a: BigRational, b: BigRational) -> Self {
        if rat_le(&a, &b) {
            RatInterval { lo: a, hi: b }
        } else {
            RatInterval { lo: b, hi: a }
        }
    }

    /// Zero-width interval: an exact rational seen as an enclosure.
    pub fn exact(v: BigRational) -> Self {
        RatInterval { lo: v.clone(), hi: v }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        rat_le(&self.lo, v) && rat_le(v, &self.hi)
    }

    pub fn overlaps(&self, other: &RatInterval) -> bool {
        rat_le(&self.lo, &other.hi) && rat_le(&other.lo, &self.hi)
    }

    /// Sign of every point of the interval: `Some(-1|0|1)` when uniform,
    /// `None` when the interval contains points of both signs.
    pub fn sign_certain(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    /// Enclosure of |x| over the interval.
    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            RatInterval::new(-self.hi.clone(), -self.lo.clone())
        } else {
            let m = rat_max(-self.lo.clone(), self.hi.clone());
            RatInterval::new_ordered(BigRational::zero(), m)
        }
    }
}

impl From<BigRational> for RatInterval {
    fn from(v: BigRational) -> Self {
        RatInterval::exact(v)
    }
}

impl Add for RatInterval {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        RatInterval {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }
}

impl Sub for RatInterval {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        RatInterval {
            lo: self.lo - rhs.hi,
            hi: self.hi - rhs.lo,
        }
    }
}

impl Neg for RatInterval {
    type Output = Self;
    fn neg(self) -> Self {
        RatInterval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for RatInterval {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut lo = &self.lo * &rhs.lo;
        let mut hi = lo.clone();
        for c in [
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ] {
            if rat_lt(&c, &lo) {
                lo = c;
            } else if rat_lt(&hi, &c) {
                hi = c;
            }
        }
        RatInterval { lo, hi }
    }
}

impl Div for RatInterval {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * Scalar::recip(&rhs)
    }
}

impl Zero for RatInterval {
    fn zero() -> Self {
        RatInterval::exact(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
}

impl One for RatInterval {
    fn one() -> Self {
        RatInterval::exact(BigRational::one())
    }
}

impl Scalar for RatInterval {
    fn from_int(n: i64) -> Self {
        RatInterval::exact(<BigRational as Scalar>::from_int(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        RatInterval::exact(<BigRational as Scalar>::from_ratio(num, den))
    }

    fn recip(&self) -> Self {
        // Reciprocal of an interval containing zero is not an interval;
        // callers establish sign-definiteness (it is an invariant of every
        // certified pipeline here, not a data-dependent condition).
        assert!(
            self.sign_certain().map_or(false, |s| s != 0),
            "reciprocal of an interval containing zero"
        );
        RatInterval {
            lo: BigRational::recip(&self.hi),
            hi: BigRational::recip(&self.lo),
        }
    }

    fn floor_checked(&self) -> Option<i64> {
        let flo = self.lo.floor().to_integer();
        let fhi = self.hi.floor().to_integer();
        if flo != fhi {
            return None;
        }
        use num_traits::ToPrimitive;
        flo.to_i64()
    }

    fn lt_checked(&self, rhs: &Self) -> Option<bool> {
        if rat_lt(&self.hi, &rhs.lo) {
            Some(true)
        } else if !rat_lt(&self.lo, &rhs.hi) {
            Some(false)
        } else {
            None
        }
    }

    fn le_checked(&self, rhs: &Self) -> Option<bool> {
        if rat_le(&self.hi, &rhs.lo) {
            Some(true)
        } else if !rat_le(&self.lo, &rhs.hi) {
            Some(false)
        } else {
            None
        }
    }

    fn approx_f64(&self) -> f64 {
        rat_to_f64(&self.midpoint())
    }
}
