//! Change of coordinates between `Omega_alpha` and the pair triangle
//! `Lambda_alpha = {0 < w < alpha, 0 < z < alpha, w + z < 1}`.
//!
//! The map sends a point to `(||p||, next theta)`, where the second
//! coordinate is computed by the branch the two-step dichotomy selects:
//! `F+ = -xy/(x-y)` on the one-step region and `F- = (1-x)(1-y)/(x-y)` on
//! the two-step region. Along return orbits this realizes consecutive-pair
//! extraction: F(T_alpha^k(x_0,y_0)) = (theta_bar_k, theta_bar_{k+1}).
//!
//! Square roots leave the rational field, so this module runs in floating
//! point (generic over `Float`); the acceptance identities are checked at
//! 1e-12.

use crate::error::{Error, Result};
use crate::first_return::{classify_region, Region};
use crate::natural_extension::{norm, NEPoint};
use crate::scalar::Scalar;
use num_traits::Float;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairPoint<T> {
    pub w: T,
    pub z: T,
}

impl<T: Float> PairPoint<T> {
    /// A point of the open pair triangle.
    pub fn new(w: T, z: T) -> Result<Self> {
        if w > T::zero() && z > T::zero() && w + z < T::one() {
            Ok(PairPoint { w, z })
        } else {
            Err(Error::DomainViolation("pair point must satisfy 0<w, 0<z, w+z<1"))
        }
    }

    pub fn in_lambda(&self, alpha: T) -> bool {
        self.w > T::zero() && self.w < alpha && self.z > T::zero() && self.z < alpha
            && self.w + self.z < T::one()
    }
}

/// One-step branch: `F+(x,y) = -xy/(x-y)`.
pub fn f_plus<T: Float>(x: T, y: T) -> T {
    -(x * y) / (x - y)
}

/// Two-step branch: `F-(x,y) = (1-x)(1-y)/(x-y)`.
pub fn f_minus<T: Float>(x: T, y: T) -> T {
    (T::one() - x) * (T::one() - y) / (x - y)
}

fn coords<T: Float + Scalar>(p: &NEPoint<T>) -> Result<(T, T)> {
    let y = p
        .y()
        .ok_or(Error::DomainViolation("pair map needs finite y"))?;
    Ok((*p.x(), *y))
}

/// The plus-branch pair `(||p||, F+(p))`, defined on all of Omega.
pub fn pair_plus<T: Float + Scalar>(p: &NEPoint<T>) -> Result<PairPoint<T>> {
    let (x, y) = coords(p)?;
    Ok(PairPoint {
        w: norm(p)?,
        z: f_plus(x, y),
    })
}

/// The minus-branch pair `(||p||, F-(p))`, defined on all of Omega.
pub fn pair_minus<T: Float + Scalar>(p: &NEPoint<T>) -> Result<PairPoint<T>> {
    let (x, y) = coords(p)?;
    Ok(PairPoint {
        w: norm(p)?,
        z: f_minus(x, y),
    })
}

/// The region-dispatched map F, defined for `alpha >= 1/2` on
/// `Omega_alpha` minus nabla.
pub fn f_map<T: Float + Scalar>(p: &NEPoint<T>, alpha: T) -> Result<PairPoint<T>> {
    match classify_region(p, &alpha)? {
        Region::OmegaPlus => pair_plus(p),
        Region::OmegaMinus => pair_minus(p),
        Region::Nabla => Err(Error::DomainViolation("point lies outside Omega_alpha")),
    }
}

/// Inverse of the plus branch:
/// `H(w,z) = ((1-s)/2w, (-1-s)/2w)` with `s = sqrt(1-4wz)`.
/// The x-coordinate is evaluated as `2z/(1+s)` (same quantity by the
/// conjugate identity), which avoids the 1-s cancellation at small w.
pub fn h_map<T: Float + Scalar>(q: &PairPoint<T>) -> Result<NEPoint<T>> {
    let four = T::from(4.0).unwrap();
    let rad = T::one() - four * q.w * q.z;
    if rad <= T::zero() {
        return Err(Error::DomainViolation("H needs 4wz < 1"));
    }
    let s = rad.sqrt();
    let two_w = q.w + q.w;
    let x = (q.z + q.z) / (T::one() + s);
    NEPoint::new(x, (-T::one() - s) / two_w)
}

/// Inverse of the minus branch:
/// `H-(w,z) = ((2w+1-t)/2w, (2w-1-t)/2w)` with `t = sqrt(1+4wz)`;
/// the x-coordinate uses the conjugate form `1 - 2z/(1+t)`.
pub fn h_minus<T: Float + Scalar>(q: &PairPoint<T>) -> Result<NEPoint<T>> {
    let four = T::from(4.0).unwrap();
    let t = (T::one() + four * q.w * q.z).sqrt();
    let two_w = q.w + q.w;
    let x = T::one() - (q.z + q.z) / (T::one() + t);
    NEPoint::new(x, (two_w - T::one() - t) / two_w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaRegion {
    Plus,
    Minus,
}

/// Side of the curved boundary `z = w - alpha + sqrt(1-4 alpha w)`; points
/// where the radical is not real are Plus.
pub fn lambda_classify<T: Float>(q: &PairPoint<T>, alpha: T) -> LambdaRegion {
    let four = T::from(4.0).unwrap();
    let rad = T::one() - four * alpha * q.w;
    if rad < T::zero() {
        return LambdaRegion::Plus;
    }
    if q.z < q.w - alpha + rad.sqrt() {
        LambdaRegion::Minus
    } else {
        LambdaRegion::Plus
    }
}

/// Boundary height of the minus region at abscissa w (None when the radical
/// is not real or the height is nonpositive).
pub fn lambda_minus_boundary<T: Float>(w: T, alpha: T) -> Option<T> {
    let four = T::from(4.0).unwrap();
    let rad = T::one() - four * alpha * w;
    if rad < T::zero() {
        return None;
    }
    let z = w - alpha + rad.sqrt();
    (z > T::zero()).then_some(z)
}
