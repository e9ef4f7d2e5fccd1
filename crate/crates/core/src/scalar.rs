//! The scalar abstraction the dynamics are written against.
//!
//! The natural-extension map, the first-return machinery and the region
//! predicates are ordinary field arithmetic plus two operations that are not:
//! taking an integer part and comparing against a threshold. In floating
//! point both are total; on an exact interval both are partial (they fail
//! when the interval straddles a boundary). [`Scalar`] captures exactly this,
//! so the same generic code runs in three modes:
//!
//! * `f64` / `f32` — fast Monte Carlo,
//! * [`BigRational`] — exact pointwise arithmetic,
//! * [`RatInterval`](crate::interval::RatInterval) — certified enclosures.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(n: i64) -> Self;

    /// Exact value `num/den`. `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn recip(&self) -> Self;

    /// The integer part, when it is the same for every value the scalar may
    /// take; `None` when the enclosure straddles an integer (or the result
    /// does not fit an `i64`).
    fn floor_checked(&self) -> Option<i64>;

    /// Certified `self < rhs`; `None` when undecidable at this precision.
    fn lt_checked(&self, rhs: &Self) -> Option<bool>;

    /// Certified `self <= rhs`; `None` when undecidable at this precision.
    fn le_checked(&self, rhs: &Self) -> Option<bool>;

    /// Best-effort `f64` view (midpoint for intervals), for reporting only.
    fn approx_f64(&self) -> f64;
}

macro_rules! impl_scalar_float {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_int(n: i64) -> Self {
                n as $t
            }
            fn from_ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }
            fn recip(&self) -> Self {
                1.0 / *self
            }
            fn floor_checked(&self) -> Option<i64> {
                if !self.is_finite() {
                    return None;
                }
                let f = self.floor();
                if f >= i64::MIN as $t && f <= i64::MAX as $t {
                    Some(f as i64)
                } else {
                    None
                }
            }
            fn lt_checked(&self, rhs: &Self) -> Option<bool> {
                if self.is_nan() || rhs.is_nan() {
                    None
                } else {
                    Some(self < rhs)
                }
            }
            fn le_checked(&self, rhs: &Self) -> Option<bool> {
                if self.is_nan() || rhs.is_nan() {
                    None
                } else {
                    Some(self <= rhs)
                }
            }
            fn approx_f64(&self) -> f64 {
                *self as f64
            }
        }
    };
}

impl_scalar_float!(f64);
impl_scalar_float!(f32);

impl Scalar for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn recip(&self) -> Self {
        BigRational::recip(self)
    }
    fn floor_checked(&self) -> Option<i64> {
        self.floor().to_integer().to_i64()
    }
    fn lt_checked(&self, rhs: &Self) -> Option<bool> {
        Some(self < rhs)
    }
    fn le_checked(&self, rhs: &Self) -> Option<bool> {
        Some(self <= rhs)
    }
    fn approx_f64(&self) -> f64 {
        rat_to_f64(self)
    }
}

/// `f64` approximation of a rational whose numerator or denominator may be
/// far outside the `f64` range (`Ratio::to_f64` returns NaN there).
pub fn rat_to_f64(r: &BigRational) -> f64 {
    let sign = if r.numer().is_negative() { -1.0 } else { 1.0 };
    let n = r.numer().abs();
    let d = r.denom().clone();
    if n.is_zero() {
        return 0.0;
    }
    let (mn, en) = top_bits(&n.to_biguint().unwrap());
    let (md, ed) = top_bits(&d.to_biguint().unwrap());
    sign * (mn / md) * 2f64.powi((en - ed) as i32)
}

/// Splits a positive big integer into (mantissa in [2^52, 2^53), exponent)
/// with value ~ mantissa * 2^exponent.
fn top_bits(x: &num_bigint::BigUint) -> (f64, i64) {
    let bits = x.bits();
    if bits <= 53 {
        return (x.to_f64().unwrap(), 0);
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().unwrap();
    (top, shift as i64)
}

/// log2 of a positive big integer, accurate to ~1e-13.
pub fn log2_big(x: &BigInt) -> f64 {
    debug_assert!(x.is_positive());
    let (m, e) = top_bits(&x.to_biguint().unwrap());
    m.log2() + e as f64
}

/// Natural log of a positive big integer, accurate to ~1e-13 relative.
pub fn ln_big(x: &BigInt) -> f64 {
    log2_big(x) * std::f64::consts::LN_2
}

/// Certified comparison of the products `a*b` and `c*d` of positive big
/// integers. Decides through logarithms when the margin is safe and falls
/// back to the exact multiplication otherwise.
pub fn cmp_products(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> std::cmp::Ordering {
    let lhs = log2_big(a) + log2_big(b);
    let rhs = log2_big(c) + log2_big(d);
    if (lhs - rhs).abs() > 1e-9 {
        return lhs.partial_cmp(&rhs).unwrap();
    }
    (a * b).cmp(&(c * d))
}

/// Order of two rationals by cross-multiplication.
///
/// `Ratio`'s own `Ord` walks the continued-fraction expansions recursively,
/// one stack frame per shared partial quotient; two enclosure endpoints that
/// agree to thousands of bits share thousands of quotients and blow the
/// stack. Cross-multiplication is one big multiply per side, and a sign /
/// shared-denominator fast path covers the common cases.
pub fn rat_cmp(a: &BigRational, b: &BigRational) -> std::cmp::Ordering {
    let (an, bn) = (a.numer(), b.numer());
    let (sa, sb) = (an.sign(), bn.sign());
    if sa != sb {
        // denominators are positive, so the numerator sign decides
        return sa.cmp(&sb);
    }
    let (ad, bd) = (a.denom(), b.denom());
    if ad == bd {
        return an.cmp(bn);
    }
    (an * bd).cmp(&(bn * ad))
}

pub fn rat_lt(a: &BigRational, b: &BigRational) -> bool {
    rat_cmp(a, b) == std::cmp::Ordering::Less
}

pub fn rat_le(a: &BigRational, b: &BigRational) -> bool {
    rat_cmp(a, b) != std::cmp::Ordering::Greater
}

pub fn rat_min(a: BigRational, b: BigRational) -> BigRational {
    if rat_le(&a, &b) {
        a
    } else {
        b
    }
}

pub fn rat_max(a: BigRational, b: BigRational) -> BigRational {
    if rat_le(&a, &b) {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn floor_checked_floats() {
        assert_eq!(2.7f64.floor_checked(), Some(2));
        assert_eq!((-2.7f64).floor_checked(), Some(-3));
        assert_eq!(f64::INFINITY.floor_checked(), None);
    }

    #[test]
    fn rational_scalar_ops() {
        let x = BigRational::from_ratio(3, 7);
        assert_eq!(Scalar::recip(&x), BigRational::from_ratio(7, 3));
        assert_eq!(Scalar::recip(&x).floor_checked(), Some(2));
        assert_eq!(x.lt_checked(&BigRational::from_ratio(1, 2)), Some(true));
    }

    #[test]
    fn rat_to_f64_huge() {
        let n = BigInt::from(3) << 4000;
        let d = BigInt::from(7) << 4000;
        let r = BigRational::new(n, d);
        assert!((rat_to_f64(&r) - 3.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn log2_big_matches_small() {
        for v in [1i64, 2, 3, 1000, 123456789] {
            assert!((log2_big(&BigInt::from(v)) - (v as f64).log2()).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn cmp_products_agrees_with_exact(a in 1u64..u64::MAX, b in 1u64..u64::MAX,
                                          c in 1u64..u64::MAX, d in 1u64..u64::MAX) {
            let (a, b, c, d) = (BigInt::from(a), BigInt::from(b), BigInt::from(c), BigInt::from(d));
            prop_assert_eq!(cmp_products(&a, &b, &c, &d), (&a * &b).cmp(&(&c * &d)));
        }

        #[test]
        fn float_and_rational_floor_agree(n in 1i64..1_000_000, d in 1i64..1_000_000) {
            let q = BigRational::from_ratio(n, d);
            let f = n as f64 / d as f64;
            // away from exact integers the two modes must agree
            if (f - f.round()).abs() > 1e-9 {
                prop_assert_eq!(q.floor_checked(), f.floor_checked());
            }
        }
    }
}
