//! Ford circles, geodesics, and the geometric characterization of return
//! times: the norm of the (n+1)-st extension iterate falls below alpha
//! exactly when the geodesic with endpoints (x, y) meets the horodisc of
//! radius `alpha/q_n^2` tangent at the convergent p_n/q_n.
//!
//! All intersection predicates are sign computations on exact rationals
//! (squared-distance comparisons); certified-interval endpoints propagate
//! through the same polynomial and an undecided sign surfaces as a
//! threshold straddle.
//!
//! The half-plane horocycle uses height `1/(2 kappa)`: that is the exact
//! Moebius image of a `kappa/q^2` Ford disc under the prefix matrix, and the
//! only convention under which the geometric test reduces to the norm
//! threshold.

use crate::cf::CFExpansion;
use crate::error::{Error, Result};
use crate::interval::RatInterval;
use crate::natural_extension::MobiusMap;
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub enum Horocycle {
    /// Open disc of radius kappa/q^2 tangent to the real line at p/q.
    Disc {
        p: BigInt,
        q: BigInt,
        kappa: BigRational,
    },
    /// Open half-plane `{v > height}`, the disc tangent at infinity.
    HalfPlane { height: BigRational },
}

impl Horocycle {
    pub fn radius(&self) -> Option<BigRational> {
        match self {
            Horocycle::Disc { q, kappa, .. } => Some(kappa / BigRational::from_integer(q * q)),
            Horocycle::HalfPlane { .. } => None,
        }
    }

    pub fn tangent_point(&self) -> Option<BigRational> {
        match self {
            Horocycle::Disc { p, q, .. } => Some(BigRational::new(p.clone(), q.clone())),
            Horocycle::HalfPlane { .. } => None,
        }
    }
}

/// The Ford disc `D_{p/q}(kappa)`; the fraction must be in lowest terms.
pub fn ford_disc(p: BigInt, q: BigInt, kappa: BigRational) -> Result<Horocycle> {
    if !q.is_positive() {
        return Err(Error::DomainViolation("q must be positive"));
    }
    if p.gcd(&q) != BigInt::one() {
        return Err(Error::NotReduced);
    }
    if !kappa.is_positive() || kappa > BigRational::one() {
        return Err(Error::DomainViolation("kappa must lie in (0,1]"));
    }
    Ok(Horocycle::Disc { p, q, kappa })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Geodesic {
    /// Upper half-plane semicircle with real endpoints left < right.
    Semicircle {
        left: RatInterval,
        right: RatInterval,
    },
    /// Vertical line at the given foot.
    Vertical { foot: RatInterval },
}

impl Geodesic {
    pub fn semicircle(a: RatInterval, b: RatInterval) -> Result<Self> {
        match a.lt_checked(&b) {
            Some(true) => Ok(Geodesic::Semicircle { left: a, right: b }),
            Some(false) => match b.lt_checked(&a) {
                Some(true) => Ok(Geodesic::Semicircle { left: b, right: a }),
                _ => Err(Error::DomainViolation("geodesic endpoints must differ")),
            },
            None => Err(Error::DomainViolation("geodesic endpoints must be separated")),
        }
    }

    /// Geodesic joining a certified x in (0,1) to an exact y < -1.
    pub fn from_point(x: RatInterval, y: BigRational) -> Self {
        Geodesic::Semicircle {
            left: RatInterval::exact(y),
            right: x,
        }
    }

    pub fn vertical(foot: RatInterval) -> Self {
        Geodesic::Vertical { foot }
    }
}

/// Strict position of a geodesic against an open horocycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    /// Certified transversal intersection.
    Inside,
    /// Exact tangency (decidable only for exact inputs).
    Boundary,
    /// Certified disjoint.
    Outside,
    /// The enclosure straddles the tangency configuration.
    Uncertain,
}

/// Sign classification of an exact interval quantity.
fn side_of(p: &RatInterval) -> Side {
    if p.lo().is_zero() && p.hi().is_zero() {
        Side::Boundary
    } else if p.hi().is_negative() {
        Side::Inside
    } else if p.lo().is_positive() {
        Side::Outside
    } else {
        Side::Uncertain
    }
}

/// The tangency polynomial of a semicircle (center c, radius r) against a
/// disc (tangent t, radius rho):
/// `P = A^2 - 4 r^2 ((t-c)^2 + rho^2)` with `A = (t-c)^2 + r^2`.
/// `P < 0` is transversal intersection, `P = 0` tangency, `P > 0` disjoint.
fn disc_polynomial(
    left: &RatInterval,
    right: &RatInterval,
    t: &BigRational,
    rho: &BigRational,
) -> RatInterval {
    let half = RatInterval::from_ratio(1, 2);
    let c = (left.clone() + right.clone()) * half.clone();
    let r = (right.clone() - left.clone()) * half;
    let tc = RatInterval::exact(t.clone()) - c;
    let tc2 = tc.clone() * tc;
    let r2 = r.clone() * r;
    let rho2 = RatInterval::exact(rho * rho);
    let a = tc2.clone() + r2.clone();
    a.clone() * a - RatInterval::from_int(4) * r2 * (tc2 + rho2)
}

fn geodesic_side(g: &Geodesic, h: &Horocycle) -> Side {
    match (g, h) {
        (Geodesic::Semicircle { left, right }, Horocycle::Disc { p, q, kappa }) => {
            let t = BigRational::new(p.clone(), q.clone());
            let rho = kappa / BigRational::from_integer(q * q);
            side_of(&disc_polynomial(left, right, &t, &rho))
        }
        (Geodesic::Semicircle { left, right }, Horocycle::HalfPlane { height }) => {
            // apex height is the radius: intersects iff r > height
            let half = RatInterval::from_ratio(1, 2);
            let r = (right.clone() - left.clone()) * half;
            side_of(&(RatInterval::exact(height.clone()) - r))
        }
        (Geodesic::Vertical { foot }, Horocycle::Disc { p, q, kappa }) => {
            let t = BigRational::new(p.clone(), q.clone());
            let rho = kappa / BigRational::from_integer(q * q);
            // distance from the tangent point to the line vs rho
            let d = (foot.clone() - RatInterval::exact(t)).abs();
            side_of(&(d - RatInterval::exact(rho)))
        }
        (Geodesic::Vertical { .. }, Horocycle::HalfPlane { .. }) => Side::Inside,
    }
}

/// Closed intersection predicate `geodesic ∩ horocycle != empty`
/// (tangency counts). Exact for rational endpoints; interval endpoints may
/// be undecidable at the current precision.
pub fn intersects(g: &Geodesic, h: &Horocycle) -> Result<bool> {
    match geodesic_side(g, h) {
        Side::Inside | Side::Boundary => Ok(true),
        Side::Outside => Ok(false),
        Side::Uncertain => Err(Error::StraddlesThreshold { step: 0 }),
    }
}

/// Horocycle image under an integer Moebius map: a disc at p/q maps to the
/// disc at the image fraction with the same kappa; the pole image is the
/// half-plane of height `1/(2 kappa)`, and conversely.
pub fn mobius_image(m: &MobiusMap, h: &Horocycle) -> Horocycle {
    let two = BigRational::from_integer(2.into());
    match h {
        Horocycle::Disc { p, q, kappa } => {
            let (np, nq) = m.apply_frac(p, q);
            if nq.is_zero() {
                Horocycle::HalfPlane {
                    height: (two * kappa).recip(),
                }
            } else {
                debug_assert!(np.gcd(&nq).is_one());
                Horocycle::Disc {
                    p: np,
                    q: nq,
                    kappa: kappa.clone(),
                }
            }
        }
        Horocycle::HalfPlane { height } => {
            let kappa = (two * height).recip();
            let (np, nq) = m.apply_infinity();
            if nq.is_zero() {
                Horocycle::HalfPlane {
                    height: height.clone(),
                }
            } else {
                Horocycle::Disc { p: np, q: nq, kappa }
            }
        }
    }
}

/// Geodesic image under a Moebius map (endpoint action); an endpoint hitting
/// the pole turns the geodesic vertical.
pub fn map_geodesic(m: &MobiusMap, g: &Geodesic) -> Result<Geodesic> {
    let image = |iv: &RatInterval| -> Result<Option<RatInterval>> {
        if iv.is_exact() {
            Ok(m.apply_rat(iv.lo()).map(RatInterval::exact))
        } else {
            m.apply_interval(iv).map(Some)
        }
    };
    match g {
        Geodesic::Semicircle { left, right } => {
            match (image(left)?, image(right)?) {
                (Some(a), Some(b)) => Geodesic::semicircle(a, b),
                (Some(a), None) | (None, Some(a)) => Ok(Geodesic::vertical(a)),
                (None, None) => Err(Error::DomainViolation("both endpoints at the pole")),
            }
        }
        Geodesic::Vertical { foot } => {
            match image(foot)? {
                // infinity stays an endpoint; the image joins m(foot) to m(inf)
                Some(a) => {
                    let (ip, iq) = m.apply_infinity();
                    if iq.is_zero() {
                        Ok(Geodesic::vertical(a))
                    } else {
                        Geodesic::semicircle(
                            a,
                            RatInterval::exact(BigRational::new(ip, iq)),
                        )
                    }
                }
                None => {
                    let (ip, iq) = m.apply_infinity();
                    if iq.is_zero() {
                        Err(Error::DomainViolation("degenerate geodesic image"))
                    } else {
                        Ok(Geodesic::vertical(RatInterval::exact(BigRational::new(
                            ip, iq,
                        ))))
                    }
                }
            }
        }
    }
}

/// Geometric form of the threshold test: `||T^{n+1}(x,y)|| < alpha` if and
/// only if the geodesic from (x, y) meets `D_{p_n/q_n}(alpha)`. Exact
/// tangency cannot be attributed to either side and is reported as a
/// straddle.
pub fn geometric_theta_test(
    cf: &CFExpansion,
    n: usize,
    y: &BigRational,
    alpha: &BigRational,
) -> Result<bool> {
    if y >= &BigRational::from_integer((-1).into()) {
        return Err(Error::DomainViolation("y must lie below -1"));
    }
    let (p, q) = cf.convergent(n)?;
    let disc = ford_disc(p.clone(), q.clone(), alpha.clone())?;
    let g = Geodesic::from_point(cf.source().interval(), y.clone());
    match geodesic_side(&g, &disc) {
        Side::Inside => Ok(true),
        Side::Outside => Ok(false),
        Side::Boundary | Side::Uncertain => Err(Error::StraddlesThreshold { step: n }),
    }
}

/// The minimal intersecting convergent disc together with its index.
#[derive(Clone, Debug)]
pub struct MinimalDisc {
    pub disc: Horocycle,
    pub index: usize,
}

/// Scans the convergent horocycles `D_{p_n/q_n}(alpha)` in index order
/// (denominators are nondecreasing, so the first hit has minimal q, and the
/// 0/1-before-1/1 tie rule is the scan order itself).
pub fn minimal_disc_with_index(
    cf: &CFExpansion,
    y: &BigRational,
    alpha: &BigRational,
    cap: usize,
) -> Result<MinimalDisc> {
    if y >= &BigRational::from_integer((-1).into()) {
        return Err(Error::DomainViolation("y must lie below -1"));
    }
    let g = Geodesic::from_point(cf.source().interval(), y.clone());
    for n in 0..=cap {
        if n >= cf.len() {
            return Err(Error::PrecisionExhausted { step: n });
        }
        let (p, q) = cf.convergent(n)?;
        let disc = ford_disc(p.clone(), q.clone(), alpha.clone())?;
        match geodesic_side(&g, &disc) {
            Side::Inside => return Ok(MinimalDisc { disc, index: n }),
            Side::Outside => {}
            Side::Boundary | Side::Uncertain => {
                return Err(Error::StraddlesThreshold { step: n })
            }
        }
    }
    Err(Error::NoIntersectingDiscWithinCap { cap })
}

/// As [`minimal_disc_with_index`], returning just the horocycle.
pub fn minimal_disc(
    cf: &CFExpansion,
    y: &BigRational,
    alpha: &BigRational,
    cap: usize,
) -> Result<Horocycle> {
    minimal_disc_with_index(cf, y, alpha, cap).map(|md| md.disc)
}

/// Return time read off the minimal disc: 1 for `D_0`, 2 for `D_1`, and the
/// parity/side table for higher convergents.
pub fn geometric_tau(
    cf: &CFExpansion,
    y: &BigRational,
    alpha: &BigRational,
    cap: usize,
) -> Result<usize> {
    let md = minimal_disc_with_index(cf, y, alpha, cap)?;
    let n = md.index;
    let (p, q) = cf.convergent(n)?;
    if q.is_one() {
        return Ok(if p.is_zero() { 1 } else { 2 });
    }
    let t = RatInterval::exact(BigRational::new(p.clone(), q.clone()));
    let x = cf.source().interval();
    let below = x
        .lt_checked(&t)
        .ok_or(Error::StraddlesThreshold { step: n })?;
    let odd = n % 2 == 1;
    Ok(if below == odd { n + 1 } else { n + 2 })
}

/// All `n` in `1..=n_max` with `||T^n(x_0, y)|| < alpha` certified, where
/// `x_0` is the tail of the expansion after one step and y is any exact
/// rational below -1 (use `y = -a_1` for the theta-sequence reading).
///
/// The norms come from the residual recurrences of both endpoints: writing
/// `E_k` for the residual of the shifted expansion and `L_k` for the same
/// recurrence seeded with y,
/// `||T^n(u,y)|| = |E_{n-1}| |L_{n-1}| / (u_num*y_den - y_num*u_den)`.
pub fn finite_return_scan(
    cf: &CFExpansion,
    y: &BigRational,
    alpha: &BigRational,
    n_max: usize,
) -> Result<Vec<usize>> {
    // y = -1 is the tolerated boundary start produced by T(x, inf) when
    // a_1 = 1 (the golden-ratio case), so only y > -1 is rejected.
    if y > &BigRational::from_integer((-1).into()) {
        return Err(Error::DomainViolation("y must not exceed -1"));
    }
    if cf.len() < n_max + 1 {
        return Err(Error::IndexBeyondCertified {
            index: n_max + 1,
            certified: cf.len(),
        });
    }
    let a1 = BigInt::from(cf.quotient(1).unwrap());
    let num = cf.source().numer().clone();
    let den = cf.source().denom().clone();
    let hi_num = &num + BigInt::one();
    // endpoint fractions of the tail x_0 = 1/x - a1 (order swaps)
    let endpoints = [
        (&den - &a1 * &hi_num, hi_num.clone()), // from x = hi
        (&den - &a1 * &num, num.clone()),       // from x = lo
    ];
    let yn = y.numer();
    let yd = y.denom();
    let a_num = alpha.numer();
    let a_den = alpha.denom();

    struct Track {
        e_prev: BigInt,
        e_curr: BigInt,
        k_const: BigInt, // u_num*y_den - y_num*u_den > 0
    }
    let mut tracks: Vec<Track> = endpoints
        .iter()
        .map(|(un, ud)| Track {
            e_prev: -ud.clone(),
            e_curr: un.clone(),
            k_const: un * yd - yn * ud,
        })
        .collect();
    let mut l_prev = -yd.clone();
    let mut l_curr = yn.clone();

    let mut hits = Vec::new();
    for n in 1..=n_max {
        // certified norm-below-alpha at both endpoints
        let mut votes = [false; 2];
        for (i, tr) in tracks.iter().enumerate() {
            // norm = |E_{n-1}| |L_{n-1}| / K  <  A/C
            let lhs = a_den.magnitude() * &(tr.e_curr.magnitude() * l_curr.magnitude());
            let rhs = a_num.magnitude() * tr.k_const.magnitude();
            votes[i] = lhs < rhs;
        }
        match (votes[0], votes[1]) {
            (true, true) => hits.push(n),
            (false, false) => {}
            _ => return Err(Error::StraddlesThreshold { step: n }),
        }
        // advance both residual tracks with the shifted quotient b_n = a_{n+1}
        let b = BigInt::from(
            cf.quotient(n + 1)
                .ok_or(Error::IndexBeyondCertified {
                    index: n + 1,
                    certified: cf.len(),
                })?,
        );
        for tr in tracks.iter_mut() {
            let e_next = &b * &tr.e_curr + &tr.e_prev;
            tr.e_prev = std::mem::replace(&mut tr.e_curr, e_next);
        }
        let l_next = &b * &l_curr + &l_prev;
        l_prev = std::mem::replace(&mut l_curr, l_next);
    }
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certified::{decimal_to_rational, CertifiedReal};
    use crate::cf::cf_expand;
    use crate::first_return::{in_omega_alpha, tau, ReturnOutcome};
    use crate::natural_extension::{mobius_of_prefix, step, NEPoint};
    use crate::sample::sample_y_exact;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn exact_geodesic(x: i64, xd: i64, y: i64, yd: i64) -> Geodesic {
        Geodesic::semicircle(
            RatInterval::exact(rat(x, xd)),
            RatInterval::exact(rat(y, yd)),
        )
        .unwrap()
    }

    #[test]
    fn ford_disc_examples() {
        let d = ford_disc(0.into(), 1.into(), rat(3, 5)).unwrap();
        assert_eq!(d.radius().unwrap(), rat(3, 5));
        assert_eq!(d.tangent_point().unwrap(), rat(0, 1));

        let d = ford_disc(1.into(), 2.into(), rat(1, 1)).unwrap();
        assert_eq!(d.radius().unwrap(), rat(1, 4));

        assert!(matches!(
            ford_disc(2.into(), 4.into(), rat(1, 1)),
            Err(Error::NotReduced)
        ));
    }

    #[test]
    fn intersects_examples() {
        // geodesic 0.79 .. -3 against D_0(0.6): |d-r| ~ 0.6376 > 0.6
        let g = exact_geodesic(79, 100, -3, 1);
        let d0 = ford_disc(0.into(), 1.into(), rat(3, 5)).unwrap();
        assert!(!intersects(&g, &d0).unwrap());
        // same geodesic against D_1(0.6): |d-r| ~ 0.2939 <= 0.6
        let d1 = ford_disc(1.into(), 1.into(), rat(3, 5)).unwrap();
        assert!(intersects(&g, &d1).unwrap());
    }

    #[test]
    fn halfplane_is_norm_threshold() {
        // r >= 1/(2 kappa) iff 1/(x-y) <= kappa
        let g = exact_geodesic(2, 5, -3, 1); // x - y = 3.4, norm ~ 0.294
        let hp = |k: BigRational| Horocycle::HalfPlane {
            height: (BigRational::from_integer(2.into()) * k).recip(),
        };
        assert!(intersects(&g, &hp(rat(3, 10))).unwrap()); // norm < 0.3
        assert!(!intersects(&g, &hp(rat(1, 4))).unwrap()); // norm > 0.25
        // boundary: kappa = 5/17 makes r = 1/(2 kappa) exactly
        assert!(intersects(&g, &hp(rat(5, 17))).unwrap());
    }

    #[test]
    fn vertical_cases() {
        let v = Geodesic::vertical(RatInterval::exact(rat(1, 3)));
        let d = ford_disc(0.into(), 1.into(), rat(1, 2)).unwrap();
        assert!(intersects(&v, &d).unwrap()); // |1/3 - 0| <= 1/2
        let far = Geodesic::vertical(RatInterval::exact(rat(2, 1)));
        assert!(!intersects(&far, &d).unwrap());
        let hp = Horocycle::HalfPlane { height: rat(100, 1) };
        assert!(intersects(&far, &hp).unwrap());
    }

    #[test]
    fn inversion_sends_base_disc_to_halfplane() {
        // z -> -1/z on D_0(kappa) gives the half-plane of height 1/(2 kappa)
        let m = MobiusMap::new(0.into(), (-1).into(), 1.into(), 0.into()).unwrap();
        let d = ford_disc(0.into(), 1.into(), rat(2, 5)).unwrap();
        let img = mobius_image(&m, &d);
        assert_eq!(img, Horocycle::HalfPlane { height: rat(5, 4) });
        // and back
        let back = mobius_image(&m, &img);
        match back {
            Horocycle::Disc { p, q, kappa } => {
                assert_eq!(BigRational::new(p, q), rat(0, 1));
                assert_eq!(kappa, rat(2, 5));
            }
            _ => panic!("expected disc"),
        }
    }

    #[test]
    fn identity_fixes_horocycles() {
        let d = ford_disc(3.into(), 7.into(), rat(1, 2)).unwrap();
        assert_eq!(mobius_image(&MobiusMap::identity(), &d), d);
    }

    #[test]
    fn prefix_matrix_sends_convergent_disc_to_halfplane() {
        let x = CertifiedReal::sample(12, 128).unwrap();
        let cf = cf_expand(&x, 20).unwrap();
        let alpha = rat(3, 5);
        for n in 0..6usize {
            let m = mobius_of_prefix(&cf, n).unwrap();
            let (p, q) = cf.convergent(n).unwrap();
            let d = ford_disc(p.clone(), q.clone(), alpha.clone()).unwrap();
            assert_eq!(
                mobius_image(&m, &d),
                Horocycle::HalfPlane { height: rat(5, 6) },
                "n={n}"
            );
        }
    }

    #[test]
    fn mobius_invariance_of_intersection() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let gens = |rng: &mut ChaCha8Rng| -> MobiusMap {
            // random word in the translation/inversion generators
            let mut m = MobiusMap::identity();
            for _ in 0..6 {
                let (a, b, c, d) = if rng.gen_bool(0.5) {
                    let k = rng.gen_range(-3i64..=3);
                    (1.into(), k.into(), 0.into(), 1.into())
                } else {
                    (0.into(), (-1i64).into(), 1.into(), 0.into())
                };
                let t = MobiusMap::new(a, b, c, d).unwrap();
                let (ma, mb, mc, md) = m.entries();
                let (ta, tb, tc, td) = t.entries();
                m = MobiusMap::new(
                    ma * ta + mb * tc,
                    ma * tb + mb * td,
                    mc * ta + md * tc,
                    mc * tb + md * td,
                )
                .unwrap();
            }
            m
        };
        for trial in 0..300 {
            let xr = rat(rng.gen_range(1i64..999), 1000);
            let yr = rat(-rng.gen_range(1001i64..9000), 1000);
            let g = Geodesic::semicircle(
                RatInterval::exact(yr),
                RatInterval::exact(xr),
            )
            .unwrap();
            let p: i64 = rng.gen_range(0..5);
            let q: i64 = rng.gen_range(1..7);
            let gc = num_integer::gcd(p, q);
            let d = ford_disc(
                (p / gc).into(),
                (q / gc).into(),
                rat(rng.gen_range(1i64..=10), 10),
            )
            .unwrap();
            let m = gens(&mut rng);
            let before = intersects(&g, &d).unwrap();
            let g2 = match map_geodesic(&m, &g) {
                Ok(g2) => g2,
                Err(_) => continue,
            };
            let after = intersects(&g2, &mobius_image(&m, &d)).unwrap();
            assert_eq!(before, after, "trial {trial}");
        }
    }

    #[test]
    fn geometric_theta_test_examples() {
        // x ~ 0.4, y = -3, n = 0, alpha = 1: intersects and ||T(x,y)|| < 1
        let x = CertifiedReal::from_decimal_str("0.4000000001").unwrap();
        let cf = cf_expand(&x, 10).unwrap();
        assert!(geometric_theta_test(&cf, 0, &rat(-3, 1), &rat(1, 1)).unwrap());

        // x ~ 0.79, y = -3, n = 0, alpha = 0.6: disjoint and ||T|| > 0.6
        let x = CertifiedReal::from_decimal_str("0.7900000001").unwrap();
        let cf = cf_expand(&x, 10).unwrap();
        assert!(!geometric_theta_test(&cf, 0, &rat(-3, 1), &rat(3, 5)).unwrap());
    }

    #[test]
    fn proposition_equivalence_random() {
        // geometric test == dynamical threshold test, exact, on random draws
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let alphas = [rat(3, 10), rat(9, 20), rat(1, 2), rat(4, 5)];
        let mut checked = 0usize;
        for trial in 0..400 {
            let x = CertifiedReal::sample(1000 + trial, 192).unwrap();
            let cf = cf_expand(&x, 30).unwrap();
            let y = sample_y_exact(&mut rng);
            let alpha = &alphas[trial as usize % alphas.len()];
            let n = rng.gen_range(0usize..20.min(cf.len() - 2));
            let geom = geometric_theta_test(&cf, n, &y, alpha).unwrap();
            // dynamical side: step n+1 times from (x interval, y)
            let mut p = NEPoint::raw(x.interval(), RatInterval::exact(y.clone()));
            for _ in 0..=n {
                p = step(&p).unwrap();
            }
            let dyn_below = in_omega_alpha(&p, &RatInterval::exact(alpha.clone())).unwrap();
            assert_eq!(geom, dyn_below, "trial {trial} n={n}");
            checked += 1;
        }
        assert_eq!(checked, 400);
    }

    #[test]
    fn minimal_disc_examples() {
        // (0.79, -3), alpha = 0.6: D_0 misses, D_1 hits
        let x = CertifiedReal::from_decimal_str("0.7900000001").unwrap();
        let cf = cf_expand(&x, 10).unwrap();
        let md = minimal_disc_with_index(&cf, &rat(-3, 1), &rat(3, 5), 50).unwrap();
        assert_eq!(md.index, 1);
        assert_eq!(md.disc.tangent_point().unwrap(), rat(1, 1));
        assert_eq!(geometric_tau(&cf, &rat(-3, 1), &rat(3, 5), 50).unwrap(), 2);

        // (0.3, -2), alpha = 0.6: D_0 hits directly
        let x = CertifiedReal::from_decimal_str("0.3000000001").unwrap();
        let cf = cf_expand(&x, 10).unwrap();
        let md = minimal_disc_with_index(&cf, &rat(-2, 1), &rat(3, 5), 50).unwrap();
        assert_eq!(md.index, 0);
        assert_eq!(md.disc.tangent_point().unwrap(), rat(0, 1));
        assert_eq!(geometric_tau(&cf, &rat(-2, 1), &rat(3, 5), 50).unwrap(), 1);
    }

    #[test]
    fn high_alpha_minimal_disc_has_unit_denominator() {
        // alpha >= 1/2: the minimal disc is D_0 or D_1
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for alpha in [rat(1, 2), rat(7, 10), rat(1, 1)] {
            let mut found = 0;
            let mut trial = 0u64;
            while found < 300 {
                trial += 1;
                let x = CertifiedReal::sample(50_000 + trial, 128).unwrap();
                let cf = match cf_expand(&x, 60) {
                    Ok(cf) => cf,
                    Err(_) => continue,
                };
                let y = sample_y_exact(&mut rng);
                let p = NEPoint::raw(x.interval(), RatInterval::exact(y.clone()));
                if in_omega_alpha(&p, &RatInterval::exact(alpha.clone())) != Ok(true) {
                    continue;
                }
                let md = minimal_disc_with_index(&cf, &y, &alpha, 50).unwrap();
                let (_, q) = cf.convergent(md.index).unwrap();
                assert!(q.is_one(), "alpha={alpha} trial={trial}");
                found += 1;
            }
        }
    }

    #[test]
    fn geometric_tau_matches_dynamical_tau() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let alphas = [rat(3, 10), rat(9, 20), rat(1, 2), rat(4, 5)];
        for (i, alpha) in alphas.iter().enumerate() {
            let mut found = 0;
            let mut trial = 0u64;
            while found < 250 {
                trial += 1;
                let x = CertifiedReal::sample(9_000 * (i as u64 + 1) + trial, 192).unwrap();
                let cf = match cf_expand(&x, 60) {
                    Ok(cf) => cf,
                    Err(_) => continue,
                };
                let y = sample_y_exact(&mut rng);
                let p = NEPoint::raw(x.interval(), RatInterval::exact(y.clone()));
                if in_omega_alpha(&p, &RatInterval::exact(alpha.clone())) != Ok(true) {
                    continue;
                }
                let gt = match geometric_tau(&cf, &y, alpha, 50) {
                    Ok(gt) => gt,
                    Err(_) => continue,
                };
                match tau(&p, &RatInterval::exact(alpha.clone()), 2000) {
                    Ok(ReturnOutcome::Returned { tau: t, .. }) => {
                        assert_eq!(gt, t, "alpha={alpha} trial={trial}")
                    }
                    _ => panic!("dynamical tau failed where geometric succeeded"),
                }
                found += 1;
            }
        }
    }

    #[test]
    fn golden_scan_044_hits_one_and_three() {
        let x = CertifiedReal::golden_ratio(2600);
        let cf = cf_expand(&x, 1100).unwrap();
        let alpha = decimal_to_rational("0.44").unwrap();
        let hits = finite_return_scan(&cf, &rat(-1, 1), &alpha, 1000).unwrap();
        assert_eq!(hits, vec![1, 3]);
    }

    #[test]
    fn golden_scan_046_misses_only_two() {
        let x = CertifiedReal::golden_ratio(2600);
        let cf = cf_expand(&x, 1100).unwrap();
        let alpha = decimal_to_rational("0.46").unwrap();
        let hits = finite_return_scan(&cf, &rat(-1, 1), &alpha, 1000).unwrap();
        let expected: Vec<usize> = (1..=1000).filter(|&n| n != 2).collect();
        assert_eq!(hits, expected);
    }

    #[test]
    fn golden_scan_048_hits_everything() {
        let x = CertifiedReal::golden_ratio(2600);
        let cf = cf_expand(&x, 1100).unwrap();
        let alpha = decimal_to_rational("0.48").unwrap();
        let hits = finite_return_scan(&cf, &rat(-1, 1), &alpha, 1000).unwrap();
        let expected: Vec<usize> = (1..=1000).collect();
        assert_eq!(hits, expected);
    }

    #[test]
    fn scan_matches_orbit_stepping() {
        // oracle pair: the residual-recurrence norms agree with certified
        // stepping of (x_0, y) for a general y
        let x = CertifiedReal::sample(3, 512).unwrap();
        let cf = cf_expand(&x, 140).unwrap();
        let y = rat(-22, 7);
        let alpha = rat(2, 5);
        let hits = finite_return_scan(&cf, &y, &alpha, 90).unwrap();
        let x0 = cf.tail_interval(1).unwrap();
        let mut p = NEPoint::raw(x0, RatInterval::exact(y));
        let alpha_iv = RatInterval::exact(alpha);
        let mut expected = Vec::new();
        for n in 1..=90usize {
            p = step(&p).unwrap();
            if in_omega_alpha(&p, &alpha_iv).unwrap() {
                expected.push(n);
            }
        }
        assert_eq!(hits, expected);
    }

    #[test]
    fn scan_near_limit_point_straddles() {
        // alpha pinned to 1/sqrt(5) within the enclosure width straddles
        let x = CertifiedReal::golden_ratio(120);
        let cf = cf_expand(&x, 80).unwrap();
        let alpha = decimal_to_rational("0.4472135954999579392818347337462552").unwrap();
        match finite_return_scan(&cf, &rat(-1, 1), &alpha, 70) {
            Err(Error::StraddlesThreshold { step }) => assert!(step > 0),
            other => panic!("expected straddle, got {other:?}"),
        }
    }
}
