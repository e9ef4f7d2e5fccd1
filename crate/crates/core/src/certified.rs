//! Certified representation of an irrational input.
//!
//! An irrational is always carried as an exact rational interval
//! `[num/den, (num+1)/den]` of width `1/den`; every downstream fact is
//! certified for the whole interval or the operation fails explicitly.
//! Gauss-map iteration in floating point loses about `log2(a_n)` bits per
//! step, so precision loss must be explicit rather than silent.

use crate::error::{Error, Result};
use crate::interval::RatInterval;
use crate::scalar::log2_big;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Digit string for the constant pi^2 + sqrt(2) - 1 used by the `fig1`
/// preset, shipped as a data file (see its header for provenance).
pub const FIG1_CONSTANT_TEXT: &str = include_str!("../../../constants/fig1_x.txt");

/// A number in (0,1) known only through the dyadic/decimal interval
/// `[num/den, (num+1)/den]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedReal {
    num: BigInt,
    den: BigInt,
    bits: u32,
}

impl CertifiedReal {
    fn new_checked(num: BigInt, den: BigInt) -> Result<Self> {
        if !num.is_positive() || num >= &den - BigInt::one() {
            return Err(Error::DomainViolation(
                "interval endpoints must satisfy 0 < lo < hi < 1",
            ));
        }
        let bits = log2_big(&den).floor() as u32;
        Ok(CertifiedReal { num, den, bits })
    }

    /// Draws the dyadic interval `[p/2^bits, (p+1)/2^bits]` with `p` uniform
    /// over `{1, ..., 2^bits - 2}`, using the ChaCha8 stream cipher as the
    /// deterministic PRNG (`ChaCha8Rng::seed_from_u64`). The same seed always
    /// yields the same interval.
    pub fn sample(seed: u64, bits: u32) -> Result<Self> {
        if bits < 64 {
            return Err(Error::DomainViolation("bits must be at least 64"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nbytes = (bits as usize + 7) / 8;
        let excess = (nbytes * 8 - bits as usize) as u32;
        let den = BigInt::one() << bits;
        let top = &den - BigInt::from(2);
        let mut buf = vec![0u8; nbytes];
        loop {
            rng.fill_bytes(&mut buf);
            buf[0] >>= excess;
            let p = BigInt::from(BigUint::from_bytes_be(&buf));
            if p.is_positive() && p <= top {
                return Ok(CertifiedReal { num: p, den, bits });
            }
        }
    }

    /// Builds the interval from a decimal literal with `d` digits after the
    /// point; the result has width `10^-d`. Only the fractional part is kept,
    /// so constants larger than one (like the `fig1` preset) enter through
    /// their fractional part, which is what the expansion acts on.
    pub fn from_decimal_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (int_part, frac_part) = s
            .split_once('.')
            .ok_or(Error::DomainViolation("decimal literal must contain '.'"))?;
        if int_part.is_empty()
            || frac_part.is_empty()
            || !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(Error::DomainViolation(
                "decimal literal must be ASCII digits with one '.'",
            ));
        }
        let num: BigInt = frac_part
            .parse()
            .map_err(|_| Error::DomainViolation("unparseable fraction digits"))?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        Self::new_checked(num, den)
    }

    /// Reads a constant file: '#'-prefixed header lines are ignored, the
    /// remaining line is a decimal literal.
    pub fn from_constant_text(text: &str) -> Result<Self> {
        let line = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .ok_or(Error::DomainViolation("no digit line in constant text"))?;
        Self::from_decimal_str(line)
    }

    /// The shipped pi^2 + sqrt(2) - 1 constant (fractional part).
    pub fn fig1_constant() -> Self {
        Self::from_constant_text(FIG1_CONSTANT_TEXT).expect("shipped constant must parse")
    }

    /// Certified enclosure of (sqrt(5)-1)/2 of width `2^-(bits+1)`, from the
    /// integer square root of `5 * 4^bits`.
    pub fn golden_ratio(bits: u32) -> Self {
        let five_shifted: BigUint = BigUint::from(5u32) << (2 * bits as usize);
        let s = BigInt::from(five_shifted.sqrt());
        let pow = BigInt::one() << bits;
        let num = s - &pow;
        let den = pow << 1;
        Self::new_checked(num, den).expect("golden ratio enclosure is interior to (0,1)")
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.den.clone())
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(&self.num + BigInt::one(), self.den.clone())
    }

    pub fn interval(&self) -> RatInterval {
        RatInterval::new(self.lo(), self.hi())
    }

    /// Effective precision: floor(log2 of the interval denominator).
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub(crate) fn numer(&self) -> &BigInt {
        &self.num
    }

    pub(crate) fn denom(&self) -> &BigInt {
        &self.den
    }
}

/// Exact rational value of a decimal literal such as "0.44" (= 11/25).
/// Threshold parameters are parsed this way so that certified comparisons
/// use the exact decimal the caller wrote, not its f64 rounding.
pub fn decimal_to_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (int_part, frac_part) = match s.split_once('.') {
        Some(parts) => parts,
        None => (s, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::DomainViolation("empty decimal literal"));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(Error::DomainViolation(
            "decimal literal must be ASCII digits with one '.'",
        ));
    }
    let int_val: BigInt = if int_part.is_empty() {
        BigInt::zero()
    } else {
        int_part
            .parse()
            .map_err(|_| Error::DomainViolation("unparseable integer digits"))?
    };
    if frac_part.is_empty() {
        return Ok(BigRational::from_integer(int_val));
    }
    let frac_num: BigInt = frac_part
        .parse()
        .map_err(|_| Error::DomainViolation("unparseable fraction digits"))?;
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(BigRational::from_integer(int_val) + BigRational::new(frac_num, den))
}

/// Number of precision bits comfortably sufficient to certify the first
/// `quotients` partial quotients of a typical irrational (Loch's-constant
/// style estimate with a safety margin).
pub fn recommended_bits(quotients: usize) -> u32 {
    let base = (quotients as f64 / 0.292).ceil() as u32;
    base + base / 8 + 1024
}
