//! The region `Omega_alpha = {(x,y) : 1/(x-y) < alpha}`, the first-return
//! time and map, extraction of the filtered subsequence `theta_bar(alpha)`,
//! and the `Omega_alpha^+/- / nabla` classification used by the two-step
//! dichotomy.

use crate::cf::{CFExpansion, ThetaWalker};
use crate::error::{Error, Result};
use crate::interval::RatInterval;
use crate::natural_extension::{norm, step, NEPoint};
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

/// Certified membership `||p|| < alpha`.
pub fn in_omega_alpha<S: Scalar>(p: &NEPoint<S>, alpha: &S) -> Result<bool> {
    let n = norm(p)?;
    n.lt_checked(alpha)
        .ok_or(Error::StraddlesThreshold { step: 0 })
}

/// Outcome of a first-return search. `NoReturnWithinCap` is a first-class
/// outcome, not an error: on a set of points the return time is genuinely
/// undefined.
#[derive(Clone, Debug)]
pub enum ReturnOutcome<S: Scalar> {
    Returned { tau: usize, point: NEPoint<S> },
    NoReturnWithinCap { steps: usize },
}

impl<S: Scalar> ReturnOutcome<S> {
    pub fn tau(&self) -> Option<usize> {
        match self {
            ReturnOutcome::Returned { tau, .. } => Some(*tau),
            ReturnOutcome::NoReturnWithinCap { .. } => None,
        }
    }
}

/// First-return time `tau_alpha(p) = min{n >= 1 : T^n(p) in Omega_alpha}`,
/// searched up to `cap` steps.
pub fn tau<S: Scalar>(p: &NEPoint<S>, alpha: &S, cap: usize) -> Result<ReturnOutcome<S>> {
    let mut q = p.clone();
    for n in 1..=cap {
        q = step(&q).map_err(|e| e.at_step(n))?;
        if in_omega_alpha(&q, alpha).map_err(|e| e.at_step(n))? {
            return Ok(ReturnOutcome::Returned { tau: n, point: q });
        }
    }
    Ok(ReturnOutcome::NoReturnWithinCap { steps: cap })
}

/// `T_alpha(p) = T^{tau_alpha(p)}(p)`.
pub fn return_map<S: Scalar>(p: &NEPoint<S>, alpha: &S, cap: usize) -> Result<NEPoint<S>> {
    match tau(p, alpha, cap)? {
        ReturnOutcome::Returned { point, .. } => Ok(point),
        ReturnOutcome::NoReturnWithinCap { .. } => {
            Err(Error::DomainViolation("no return within cap"))
        }
    }
}

/// Position of a point relative to the two-step dichotomy for
/// `alpha >= 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    OmegaPlus,
    OmegaMinus,
    Nabla,
}

/// Classifies p against `Omega_alpha^+`, `Omega_alpha^-` and
/// `nabla_alpha = Omega \ Omega_alpha`, all comparisons certified.
///
/// `Omega_alpha^-` is `{x > alpha and y <= alpha x/(alpha - x)}`: the bare
/// curve inequality would swallow all of `x < alpha`, where the bound is
/// positive and every y satisfies it, contradicting the return-time
/// dichotomy; the `x > alpha` branch restores it.
pub fn classify_region<S: Scalar>(p: &NEPoint<S>, alpha: &S) -> Result<Region> {
    let half = S::from_ratio(1, 2);
    if half.le_checked(alpha) != Some(true) || alpha.le_checked(&S::one()) != Some(true) {
        return Err(Error::DomainViolation("classification needs 1/2 <= alpha <= 1"));
    }
    if !in_omega_alpha(p, alpha)? {
        return Ok(Region::Nabla);
    }
    match p.x().lt_checked(alpha) {
        Some(true) => Ok(Region::OmegaPlus),
        None => Err(Error::StraddlesThreshold { step: 0 }),
        Some(false) => {
            // need x strictly above alpha for the curve to be defined
            match alpha.lt_checked(p.x()) {
                Some(true) => {}
                _ => return Err(Error::StraddlesThreshold { step: 0 }),
            }
            let curve =
                alpha.clone() * p.x().clone() / (alpha.clone() - p.x().clone());
            let y = p.y().ok_or(Error::DomainViolation("start point has no region"))?;
            match y.le_checked(&curve) {
                Some(true) => Ok(Region::OmegaMinus),
                Some(false) => Ok(Region::OmegaPlus),
                None => Err(Error::StraddlesThreshold { step: 0 }),
            }
        }
    }
}

/// One entry of the filtered subsequence: `theta_bar_k = theta_{n_k} < alpha`
/// with its original index and denominator `q_bar_k = q_{n_k}`.
#[derive(Clone, Debug)]
pub struct ThetaBarEntry {
    pub k: usize,
    pub n: usize,
    pub theta: RatInterval,
    pub q_bar: BigInt,
}

#[derive(Clone, Debug)]
pub struct ThetaBarSequence {
    pub alpha: BigRational,
    pub entries: Vec<ThetaBarEntry>,
}

impl ThetaBarSequence {
    /// Empirical return frequency `k_max / n_{k_max}`.
    pub fn ratio(&self) -> f64 {
        let last = self.entries.last().expect("nonempty sequence");
        last.k as f64 / last.n as f64
    }

    /// Midpoints of consecutive entries, `(theta_bar_k, theta_bar_{k+1})`.
    pub fn pairs_f64(&self) -> Vec<(f64, f64)> {
        self.entries
            .windows(2)
            .map(|w| {
                (
                    crate::scalar::rat_to_f64(&w[0].theta.midpoint()),
                    crate::scalar::rat_to_f64(&w[1].theta.midpoint()),
                )
            })
            .collect()
    }

    /// Midpoints of all entries.
    pub fn values_f64(&self) -> Vec<f64> {
        self.entries
            .iter()
            .map(|e| crate::scalar::rat_to_f64(&e.theta.midpoint()))
            .collect()
    }
}

/// Exact orbit of the natural extension started at `(x_0, y_0) = T(x, inf)`,
/// with the x-interval endpoints kept as raw coprime fractions so no gcd
/// reduction happens in the loop (reciprocal is a swap, the quotient
/// subtraction preserves coprimality).
struct CertOrbit {
    // endpoint fractions (num, den), both components positive
    lo: (BigInt, BigInt),
    hi: (BigInt, BigInt),
    // y as (num, den), num negative (or zero only transiently), den positive
    y: (BigInt, BigInt),
    n: usize,
}

impl CertOrbit {
    fn new(cf: &CFExpansion) -> Result<Self> {
        if cf.is_empty() {
            return Err(Error::PrecisionExhausted { step: 0 });
        }
        let a1 = BigInt::from(cf.quotient(1).unwrap());
        let num = cf.source().numer().clone();
        let den = cf.source().denom().clone();
        let hi_num = &num + BigInt::from(1);
        // x_0 = 1/x - a1, endpoints swap
        let lo = (&den - &a1 * &hi_num, hi_num);
        let hi = (&den - &a1 * &num, num);
        let y = (-a1, BigInt::from(1));
        Ok(CertOrbit { lo, hi, y, n: 0 })
    }

    /// Orbit index: the walker currently holds T^n(x_0, y_0).
    fn index(&self) -> usize {
        self.n
    }

    fn step(&mut self) -> Result<()> {
        let a_lo = floor_div(&self.hi.1, &self.hi.0)?; // floor(1/x) at upper endpoint
        let a_hi = floor_div(&self.lo.1, &self.lo.0)?; // floor(1/x) at lower endpoint
        if a_lo != a_hi {
            return Err(Error::PrecisionExhausted { step: self.n + 1 });
        }
        let a = a_lo;
        // 1/x - a swaps the endpoints
        let new_lo = (&self.hi.1 - &a * &self.hi.0, self.hi.0.clone());
        let new_hi = (&self.lo.1 - &a * &self.lo.0, self.lo.0.clone());
        self.lo = new_lo;
        self.hi = new_hi;
        // y' = 1/y - a = (yd - a yn)/yn, normalized to positive denominator
        let (yn, yd) = (&self.y.0, &self.y.1);
        self.y = (&a * yn - yd, -yn.clone());
        self.n += 1;
        Ok(())
    }

    /// Certified `||T^n(x_0,y_0)|| < alpha`; None on straddle.
    fn norm_below(&self, alpha: &BigRational) -> Option<bool> {
        // norm < alpha  <=>  x - y > 1/alpha, monotone in x
        let below_at = |e: &(BigInt, BigInt)| -> bool {
            // A (xn yd - yn xd) > C xd yd  with alpha = A/C
            let a = alpha.numer();
            let c = alpha.denom();
            let lhs = a * (&e.0 * &self.y.1 - &self.y.0 * &e.1);
            let rhs = c * (&e.1 * &self.y.1);
            lhs > rhs
        };
        let lo_ok = below_at(&self.lo);
        let hi_ok = below_at(&self.hi);
        // norm is decreasing in x: membership certain iff both endpoints agree
        if lo_ok && hi_ok {
            Some(true)
        } else if !lo_ok && !hi_ok {
            Some(false)
        } else {
            None
        }
    }

    /// Exact enclosure of `1/(x_n - y_n)`.
    fn norm_interval(&self) -> RatInterval {
        let val = |e: &(BigInt, BigInt)| {
            let num = &e.1 * &self.y.1;
            let den = &e.0 * &self.y.1 - &self.y.0 * &e.1;
            BigRational::new(num, den)
        };
        let a = val(&self.hi);
        let b = val(&self.lo);
        RatInterval::from_endpoints(a, b)
    }
}

fn floor_div(num: &BigInt, den: &BigInt) -> Result<i64> {
    use num_traits::ToPrimitive;
    if !den.is_positive() || !num.is_positive() {
        return Err(Error::PrecisionExhausted { step: 0 });
    }
    (num / den)
        .to_i64()
        .ok_or(Error::PrecisionExhausted { step: 0 })
}

/// Walks the theta stream, calling `on_entry(k, n, walker)` at each certified
/// `theta_n < alpha`, until `count` entries have been collected.
fn filtered_walk<F>(
    cf: &CFExpansion,
    alpha: &BigRational,
    count: usize,
    mut on_entry: F,
) -> Result<()>
where
    F: FnMut(usize, usize, &ThetaWalker<'_>) -> Result<()>,
{
    if count == 0 {
        return Err(Error::DomainViolation("count must be positive"));
    }
    let mut stream = ThetaWalker::new(cf);
    let mut k = 0usize;
    loop {
        let n = stream.n() + 1;
        stream
            .advance()
            .map_err(|_| Error::PrecisionExhausted { step: n })?;
        match stream.theta_below(alpha)? {
            None => return Err(Error::StraddlesThreshold { step: n }),
            Some(true) => {
                k += 1;
                on_entry(k, n, &stream)?;
                if k == count {
                    return Ok(());
                }
            }
            Some(false) => {}
        }
    }
}

/// The filtered subsequence `theta_bar(alpha)` with `count` entries,
/// cross-verified against the first-return orbit: at every index the
/// certified filter decision must match the orbit's certified membership
/// decision, and at every entry the theta enclosure must overlap the norm
/// enclosure `||T_alpha^k(x_0,y_0)||`. A mismatch would falsify the
/// filter/orbit correspondence and panics.
pub fn theta_bar(cf: &CFExpansion, alpha: &BigRational, count: usize) -> Result<ThetaBarSequence> {
    if count == 0 {
        return Err(Error::DomainViolation("count must be positive"));
    }
    let mut orbit = CertOrbit::new(cf)?;
    let mut stream = ThetaWalker::new(cf);
    let mut entries = Vec::with_capacity(count);
    let mut k = 0usize;
    loop {
        let n = stream.n() + 1;
        stream
            .advance()
            .map_err(|_| Error::PrecisionExhausted { step: n })?;
        orbit.step().map_err(|e| e.at_step(n))?;
        debug_assert_eq!(orbit.index(), stream.n());
        let filter_below = stream
            .theta_below(alpha)?
            .ok_or(Error::StraddlesThreshold { step: n })?;
        let orbit_below = orbit
            .norm_below(alpha)
            .ok_or(Error::StraddlesThreshold { step: n })?;
        assert_eq!(
            filter_below, orbit_below,
            "filtered theta and orbit norm disagree at n={n}"
        );
        if filter_below {
            k += 1;
            let theta = stream.theta_interval()?;
            let norm_iv = orbit.norm_interval();
            assert!(
                theta.overlaps(&norm_iv),
                "theta enclosure and orbit norm enclosure disjoint at n={n}"
            );
            let (_, q) = cf.convergent(n)?;
            entries.push(ThetaBarEntry {
                k,
                n,
                theta,
                q_bar: q.clone(),
            });
            if k == count {
                return Ok(ThetaBarSequence {
                    alpha: alpha.clone(),
                    entries,
                });
            }
        }
    }
}

/// Filter-only extraction, for deep statistical runs where re-deriving every
/// norm along the orbit would dominate the cost. Same contract as
/// [`theta_bar`] minus the orbit cross-checks.
pub fn theta_bar_unverified(
    cf: &CFExpansion,
    alpha: &BigRational,
    count: usize,
) -> Result<ThetaBarSequence> {
    let mut entries = Vec::with_capacity(count);
    filtered_walk(cf, alpha, count, |k, n, stream| {
        let (_, q) = cf.convergent(n)?;
        entries.push(ThetaBarEntry {
            k,
            n,
            theta: stream.theta_interval()?,
            q_bar: q.clone(),
        });
        Ok(())
    })?;
    Ok(ThetaBarSequence {
        alpha: alpha.clone(),
        entries,
    })
}

/// Index `n_k` of the k-th filtered entry, without storing the sequence.
pub(crate) fn nth_return_index(
    cf: &CFExpansion,
    alpha: &BigRational,
    k: usize,
) -> Result<usize> {
    let mut n_k = 0usize;
    filtered_walk(cf, alpha, k, |_, n, _| {
        n_k = n;
        Ok(())
    })?;
    Ok(n_k)
}

/// Empirical return frequency `k_max / n_{k_max}`, which converges to
/// `mu(Omega_alpha)` almost everywhere.
pub fn return_ratio(cf: &CFExpansion, alpha: &BigRational, k_max: usize) -> Result<f64> {
    let n_k = nth_return_index(cf, alpha, k_max)?;
    Ok(k_max as f64 / n_k as f64)
}
