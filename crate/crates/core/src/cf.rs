//! Exact continued-fraction engine.
//!
//! `cf_expand` runs the Euclidean algorithm on both interval endpoints and
//! keeps the longest common prefix of the two quotient sequences. Both
//! endpoints then lie in the closed cylinder of that prefix, and cylinders
//! are intervals, so every point of the input interval shares the prefix:
//! the prefix is certified.
//!
//! Internally the engine works with the residual numerators
//! `E_n = q_n * num - p_n * den` (so that `q_n x - p_n = E_n / den` at the
//! left endpoint). They obey the same three-term recurrence as the
//! convergents, shrink as `den/q_{n+1}`, and give
//! `theta_n = q_n |E_n| / den` without any long division.

use crate::certified::CertifiedReal;
use crate::error::{Error, Result};
use crate::interval::RatInterval;
use crate::scalar::cmp_products;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Certified prefix of a continued-fraction expansion with its convergents.
#[derive(Clone, Debug)]
pub struct CFExpansion {
    /// Partial quotients a_1..a_m shared by every point of the interval.
    quotients: Vec<u64>,
    /// Convergents (p_k, q_k) for k = 0..=m, with p_0/q_0 = 0/1.
    convergents: Vec<(BigInt, BigInt)>,
    source: CertifiedReal,
}

/// Quotients of the rational num/den in (0,1), canonical form, at most
/// `max_terms` of them.
fn euclid_quotients(num: &BigInt, den: &BigInt, max_terms: usize) -> Vec<u64> {
    let mut a = den.clone();
    let mut b = num.clone();
    let mut out = Vec::new();
    while !b.is_zero() && out.len() < max_terms {
        let (q, r) = a.div_rem(&b);
        match q.to_u64() {
            Some(q) => out.push(q),
            // A quotient beyond u64 ends the representable prefix; the
            // certified expansion is simply shorter.
            None => break,
        }
        a = b;
        b = r;
    }
    out
}

/// Expands the certified interval, returning the longest common prefix of
/// the endpoint expansions truncated at `max_terms`.
pub fn cf_expand(x: &CertifiedReal, max_terms: usize) -> Result<CFExpansion> {
    let lo_q = euclid_quotients(x.numer(), x.denom(), max_terms);
    let hi_num = x.numer() + BigInt::one();
    let hi_q = euclid_quotients(&hi_num, x.denom(), max_terms);
    let m = lo_q
        .iter()
        .zip(hi_q.iter())
        .take_while(|(a, b)| a == b)
        .count();
    if m == 0 {
        return Err(Error::PrecisionExhausted { step: 1 });
    }
    let quotients: Vec<u64> = lo_q[..m].to_vec();
    let mut convergents = Vec::with_capacity(m + 1);
    convergents.push((BigInt::zero(), BigInt::one()));
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p, mut q) = (BigInt::zero(), BigInt::one());
    for &a in &quotients {
        let p_next = BigInt::from(a) * &p + &p_prev;
        let q_next = BigInt::from(a) * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        convergents.push((p.clone(), q.clone()));
    }
    Ok(CFExpansion {
        quotients,
        convergents,
        source: x.clone(),
    })
}

impl CFExpansion {
    /// Number of certified partial quotients.
    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// a_i, 1-indexed.
    pub fn quotient(&self, i: usize) -> Option<u64> {
        if i == 0 {
            return None;
        }
        self.quotients.get(i - 1).copied()
    }

    pub fn quotients(&self) -> &[u64] {
        &self.quotients
    }

    /// (p_k, q_k), 0-indexed; k may run to `len()`.
    pub fn convergent(&self, k: usize) -> Result<(&BigInt, &BigInt)> {
        self.convergents
            .get(k)
            .map(|(p, q)| (p, q))
            .ok_or(Error::IndexBeyondCertified {
                index: k,
                certified: self.len(),
            })
    }

    pub fn source(&self) -> &CertifiedReal {
        &self.source
    }

    /// Endpoints of the cylinder interval of rank n+1:
    /// `(p_{n+1}/q_{n+1}, (p_{n+1}+p_n)/(q_{n+1}+q_n))`, unordered.
    pub fn cylinder_interval(&self, n: usize) -> Result<(BigRational, BigRational)> {
        let (p1, q1) = self.convergent(n + 1)?;
        let (p0, q0) = self.convergent(n)?;
        let a = BigRational::new(p1.clone(), q1.clone());
        let b = BigRational::new(p1 + p0, q1 + q0);
        Ok((a, b))
    }

    /// The tail/reversal coordinates of T^n(x_0, y_0):
    /// `x_n = [a_{n+2}, a_{n+3}, ...]` as the exact interval image of x under
    /// the prefix Moebius map, and `y_n = -a_{n+1} - [a_n, ..., a_1]` as an
    /// exact rational (which telescopes to `-q_{n+1}/q_n`).
    pub fn tail_and_reversal(&self, n: usize) -> Result<(RatInterval, BigRational)> {
        if n + 2 > self.len() {
            return Err(Error::IndexBeyondCertified {
                index: n,
                certified: self.len(),
            });
        }
        let x_n = self.tail_interval(n + 1)?;
        let (_, q_n1) = self.convergent(n + 1)?;
        let (_, q_n) = self.convergent(n)?;
        let y_n = -BigRational::new(q_n1.clone(), q_n.clone());
        Ok((x_n, y_n))
    }

    /// Exact interval image of x under g_k, i.e. the tail [a_{k+1}, ...].
    pub(crate) fn tail_interval(&self, k: usize) -> Result<RatInterval> {
        if k > self.len() {
            return Err(Error::IndexBeyondCertified {
                index: k,
                certified: self.len(),
            });
        }
        let num = self.source.numer();
        let den = self.source.denom();
        let (pk, qk) = self.convergent(k)?;
        let (pk1, qk1) = self.convergent(k.checked_sub(1).ok_or(Error::DomainViolation(
            "tail requires k >= 1",
        ))?)?;
        // g_k(t) = (q_k t - p_k) / (-q_{k-1} t + p_{k-1}) = -E_k(t)/E_{k-1}(t)
        let image = |numerator: &BigInt| -> BigRational {
            let ek = qk * numerator - pk * den;
            let ek1 = qk1 * numerator - pk1 * den;
            -BigRational::new(ek, ek1)
        };
        let a = image(num);
        let b = image(&(num + BigInt::one()));
        Ok(RatInterval::from_endpoints(a, b))
    }

    /// Walks the theta sequence, yielding certified enclosures of
    /// `theta_n = q_n |q_n x - p_n|` for n = 0..=n_max.
    pub fn theta_seq(&self, n_max: usize) -> Result<ThetaSequence> {
        let mut walker = ThetaWalker::new(self);
        let mut values = Vec::with_capacity(n_max + 1);
        values.push(walker.theta_interval()?);
        for _ in 0..n_max {
            walker.advance()?;
            values.push(walker.theta_interval()?);
        }
        Ok(ThetaSequence { values })
    }
}

/// Certified enclosures of the approximation coefficients, indexed from 0
/// (`theta_0 = x` under the p_0/q_0 = 0/1 convention).
#[derive(Clone, Debug)]
pub struct ThetaSequence {
    values: Vec<RatInterval>,
}

impl ThetaSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, n: usize) -> Option<&RatInterval> {
        self.values.get(n)
    }

    pub fn values(&self) -> &[RatInterval] {
        &self.values
    }
}

/// Incremental theta-sequence walker over the residual recurrence.
///
/// Sign-definiteness of `q_n x - p_n` over the whole interval holds for
/// every n strictly below the certified length (the interval then lies in
/// the closed cylinder of rank n+1, which excludes p_n/q_n), so theta_n is
/// available for n = 0 ..= len-1.
pub(crate) struct ThetaWalker<'a> {
    cf: &'a CFExpansion,
    n: usize,
    e_prev: BigInt,
    e_curr: BigInt,
}

impl<'a> ThetaWalker<'a> {
    pub fn new(cf: &'a CFExpansion) -> Self {
        ThetaWalker {
            cf,
            n: 0,
            e_prev: -cf.source.denom().clone(),
            e_curr: cf.source.numer().clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Moves to theta_{n+1}; fails when n+1 reaches the certified length.
    pub fn advance(&mut self) -> Result<()> {
        let next = self.n + 1;
        if next >= self.cf.len() {
            return Err(Error::IndexBeyondCertified {
                index: next,
                certified: self.cf.len(),
            });
        }
        let a = BigInt::from(self.cf.quotients[next - 1]);
        let e_next = a * &self.e_curr + &self.e_prev;
        self.e_prev = std::mem::replace(&mut self.e_curr, e_next);
        self.n = next;
        Ok(())
    }

    /// |E_n| at both interval endpoints: (min, max). The two values are
    /// `|E_n|` and `|E_n + q_n|`, which share a sign for certified n.
    fn abs_endpoints(&self) -> Result<(BigInt, BigInt)> {
        let (_, q) = self.cf.convergent(self.n)?;
        let lo_val = &self.e_curr;
        let hi_val = lo_val + q;
        match (lo_val.sign(), hi_val.sign()) {
            (num_bigint::Sign::Plus, num_bigint::Sign::Plus) => Ok((lo_val.clone(), hi_val)),
            (num_bigint::Sign::Minus, num_bigint::Sign::Minus) => Ok((-hi_val, -lo_val)),
            _ => Err(Error::PrecisionExhausted { step: self.n }),
        }
    }

    /// Certified enclosure of theta_n.
    pub fn theta_interval(&self) -> Result<RatInterval> {
        let (_, q) = self.cf.convergent(self.n)?;
        let (min_abs, max_abs) = self.abs_endpoints()?;
        let den = self.cf.source.denom();
        // min_abs <= max_abs as integers, so the order is structural
        Ok(RatInterval::new_ordered(
            BigRational::new(q * min_abs, den.clone()),
            BigRational::new(q * max_abs, den.clone()),
        ))
    }

    /// Certified `theta_n < alpha`; None when the enclosure straddles alpha.
    pub fn theta_below(&self, alpha: &BigRational) -> Result<Option<bool>> {
        let (_, q) = self.cf.convergent(self.n)?;
        let (min_abs, max_abs) = self.abs_endpoints()?;
        let den = self.cf.source.denom();
        // theta bounds are q*min_abs/den and q*max_abs/den; alpha = a/c.
        let a = alpha.numer();
        let c = alpha.denom();
        let target = a * den;
        // certainly below iff q*max_abs*c < a*den
        if cmp_products(q, &(max_abs * c), &target, &BigInt::one()) == std::cmp::Ordering::Less {
            return Ok(Some(true));
        }
        // certainly at-or-above iff q*min_abs*c >= a*den
        if cmp_products(q, &(min_abs * c), &target, &BigInt::one()) != std::cmp::Ordering::Less {
            return Ok(Some(false));
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat_to_f64, Scalar};
    use num_traits::Signed;

    fn golden_cf(bits: u32, terms: usize) -> CFExpansion {
        cf_expand(&CertifiedReal::golden_ratio(bits), terms).unwrap()
    }

    #[test]
    fn golden_ratio_is_all_ones_with_fibonacci_convergents() {
        let cf = golden_cf(256, 100);
        assert!(cf.len() >= 100);
        assert!(cf.quotients()[..100].iter().all(|&a| a == 1));
        // Fibonacci by independent recurrence: p_n = F_n, q_n = F_{n+1}.
        let (mut f_prev, mut f) = (BigInt::zero(), BigInt::one());
        for k in 0..=100usize {
            let (p, q) = cf.convergent(k).unwrap();
            let f_next = &f_prev + &f;
            assert_eq!(p, &f_prev, "p_{k}");
            assert_eq!(q, &f, "q_{k}");
            f_prev = std::mem::replace(&mut f, f_next);
        }
    }

    #[test]
    fn perturbed_three_sevenths_starts_two_three() {
        // [2,3] = 1/(2+1/3) = 3/7; an interval just above 3/7 shares that prefix.
        let x = CertifiedReal::from_decimal_str("0.4287").unwrap();
        let cf = cf_expand(&x, 10).unwrap();
        assert_eq!(&cf.quotients()[..2], &[2, 3]);
    }

    #[test]
    fn interval_crossing_one_half_exhausts_precision() {
        // [0.5, 0.6]: the left endpoint has first quotient 2, while every
        // point above 1/2 has first quotient 1 -- no common certified prefix.
        let x = CertifiedReal::from_decimal_str("0.5").unwrap();
        assert!(matches!(
            cf_expand(&x, 10),
            Err(Error::PrecisionExhausted { step: 1 })
        ));
    }

    #[test]
    fn theta_seq_golden_values() {
        let cf = golden_cf(256, 50);
        let th = cf.theta_seq(3).unwrap();
        // theta_0 = x
        let x_mid = rat_to_f64(&th.value(0).unwrap().midpoint());
        assert!((x_mid - 0.6180339887498949).abs() < 1e-15);
        // theta_1 = |x - 1| ~ 0.381966
        let t1 = rat_to_f64(&th.value(1).unwrap().midpoint());
        assert!((t1 - 0.3819660112501051).abs() < 1e-15);
        // theta_2 = 2|2x - 1| ~ 0.472136
        let t2 = rat_to_f64(&th.value(2).unwrap().midpoint());
        assert!((t2 - 0.4721359549995794).abs() < 1e-15);
    }

    #[test]
    fn theta_interval_contains_sampled_points() {
        // Interval soundness: theta_n of interior rationals lies inside the
        // reported enclosure.
        let x = CertifiedReal::sample(7, 128).unwrap();
        let cf = cf_expand(&x, 20).unwrap();
        let th = cf.theta_seq(10.min(cf.len() - 1)).unwrap();
        let lo = x.lo();
        let wid = x.hi() - x.lo();
        for t in 1..=3u32 {
            let pt = &lo + &wid * BigRational::new(t.into(), 4.into());
            for n in 0..th.len() {
                let (p, q) = cf.convergent(n).unwrap();
                let theta_pt = (BigRational::from_integer(q.clone()) * &pt
                    - BigRational::from_integer(p.clone()))
                .abs()
                    * BigRational::from_integer(q.clone());
                assert!(
                    th.value(n).unwrap().contains(&theta_pt),
                    "n={n} point {t}/4"
                );
            }
        }
    }

    #[test]
    fn determinant_identity_alternates() {
        let x = CertifiedReal::sample(3, 256).unwrap();
        let cf = cf_expand(&x, 60).unwrap();
        for k in 1..=cf.len() {
            let (p, q) = cf.convergent(k).unwrap();
            let (p1, q1) = cf.convergent(k - 1).unwrap();
            let det = p * q1 - p1 * q;
            // p_1 q_0 - p_0 q_1 = 1, then the sign alternates
            let expected = if k % 2 == 1 { 1 } else { -1 };
            assert_eq!(det, BigInt::from(expected), "k={k}");
        }
    }

    #[test]
    fn shift_property() {
        // cf_expand of the tail interval image of T(x) equals quotients[2..].
        let x = CertifiedReal::sample(11, 256).unwrap();
        let cf = cf_expand(&x, 40).unwrap();
        // T(x) has expansion [a_2, a_3, ...]; tail_interval(1) is exactly
        // the interval image of T(x).
        let t_iv = cf.tail_interval(1).unwrap();
        // expand the tail interval by running Euclid on its endpoints
        let lo = t_iv.lo();
        let hi = t_iv.hi();
        let lo_q = super::euclid_quotients(lo.numer(), lo.denom(), 20);
        let hi_q = super::euclid_quotients(hi.numer(), hi.denom(), 20);
        let common: Vec<u64> = lo_q
            .iter()
            .zip(hi_q.iter())
            .take_while(|(a, b)| a == b)
            .map(|(a, _)| *a)
            .collect();
        assert!(common.len() >= 10);
        assert_eq!(&common[..10], &cf.quotients()[1..11]);
    }

    #[test]
    fn cylinder_examples() {
        // quotients 2,3: cylinder(1) = (3/7, 4/9)
        let x = CertifiedReal::from_decimal_str("0.4285714285714285714285714290").unwrap();
        let cf = cf_expand(&x, 10).unwrap();
        assert_eq!(&cf.quotients()[..2], &[2, 3]);
        let (a, b) = cf.cylinder_interval(1).unwrap();
        assert_eq!(a, BigRational::new(3.into(), 7.into()));
        assert_eq!(b, BigRational::new(4.into(), 9.into()));

        // all ones: cylinder(0) = (1/1, 1/2)
        let g = golden_cf(128, 10);
        let (a, b) = g.cylinder_interval(0).unwrap();
        assert_eq!(a, BigRational::from_integer(1.into()));
        assert_eq!(b, BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn cylinder_contains_source() {
        let x = CertifiedReal::sample(5, 128).unwrap();
        let cf = cf_expand(&x, 10).unwrap();
        for n in 0..cf.len().saturating_sub(1).min(6) {
            let (a, b) = cf.cylinder_interval(n).unwrap();
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            assert!(lo <= x.lo() && x.hi() <= hi, "n={n}");
        }
    }

    #[test]
    fn tail_and_reversal_golden() {
        let cf = golden_cf(256, 50);
        let (_, y2) = cf.tail_and_reversal(2).unwrap();
        assert_eq!(y2, BigRational::new((-3).into(), 2.into()));
    }

    #[test]
    fn reversal_is_minus_first_quotient_at_zero() {
        let x = CertifiedReal::from_decimal_str("0.4285714285714285714285714290").unwrap();
        let cf = cf_expand(&x, 10).unwrap();
        let (_, y0) = cf.tail_and_reversal(0).unwrap();
        assert_eq!(y0, BigRational::from_integer((-2).into()));
    }

    #[test]
    fn theta_equals_inverse_norm_identity() {
        // Eq-style invariant: 1/(x_n - y_n) overlaps theta_n for certified n.
        let x = CertifiedReal::sample(23, 512).unwrap();
        let cf = cf_expand(&x, 110).unwrap();
        let th = cf.theta_seq(80).unwrap();
        for n in 0..=80usize {
            if n + 2 > cf.len() {
                break;
            }
            let (xn, yn) = cf.tail_and_reversal(n).unwrap();
            let diff = xn - RatInterval::exact(yn);
            let inv = Scalar::recip(&diff);
            assert!(
                inv.overlaps(th.value(n).unwrap()),
                "overlap failed at n={n}"
            );
        }
    }

    #[test]
    fn theta_below_matches_interval_compare() {
        let x = CertifiedReal::sample(9, 512).unwrap();
        let cf = cf_expand(&x, 100).unwrap();
        let alpha = BigRational::new(2.into(), 5.into());
        let alpha_iv = RatInterval::exact(alpha.clone());
        let mut w = ThetaWalker::new(&cf);
        for _ in 0..60 {
            w.advance().unwrap();
            let fast = w.theta_below(&alpha).unwrap();
            let slow = w.theta_interval().unwrap().lt_checked(&alpha_iv);
            assert_eq!(fast, slow, "n={}", w.n());
        }
    }

    #[test]
    fn index_beyond_certified_is_reported() {
        let x = CertifiedReal::sample(4, 64).unwrap();
        let cf = cf_expand(&x, 10_000).unwrap();
        let m = cf.len();
        assert!(matches!(
            cf.theta_seq(m),
            Err(Error::IndexBeyondCertified { .. })
        ));
        assert!(cf.theta_seq(m - 1).is_ok());
    }
}
