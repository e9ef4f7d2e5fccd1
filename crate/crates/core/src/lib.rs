//! Dynamics of canonical rational approximation.
//!
//! The regular continued fraction of an irrational `x` in (0,1) yields the
//! convergents `p_n/q_n` and the approximation coefficients
//! `theta_n = q_n |q_n x - p_n|`. This crate implements the invertible
//! natural extension of the Gauss map on `Omega = (0,1) x (-inf,-1)`, the
//! first-return maps to the sublevel regions `Omega_alpha`, extraction of
//! the filtered subsequence `theta_bar(alpha)`, the closed-form limit laws
//! attached to them (return frequencies, denominator growth constants,
//! one- and two-dimensional limiting densities), and the Ford-circle /
//! geodesic characterization of return times.
//!
//! Numerics come in three interchangeable flavors behind the [`Scalar`]
//! trait: `f64`/`f32` for Monte Carlo, exact [`BigRational`] points, and
//! certified [`RatInterval`] enclosures for which every comparison either
//! holds over the whole interval or fails loudly.

pub mod certified;
pub mod cf;
pub mod distributions;
pub mod error;
pub mod first_return;
pub mod hyper;
pub mod interval;
pub mod natural_extension;
pub mod pair_map;
pub mod quad;
pub mod sample;
pub mod scalar;

pub use certified::{decimal_to_rational, recommended_bits, CertifiedReal};
pub use cf::{cf_expand, CFExpansion, ThetaSequence};
pub use distributions::{
    c_alpha, dl_conditional_cdf, dl_conditional_density, dl_density_classical,
    dl_printed_density, empirical_compare, estimate_levy, levy_limit, pair_density,
    pushforward_oracle_masses, ComparisonReport, DensityModel, Histogram, ModelKind,
    PairVariant, SampleSet,
};
pub use error::{Error, Result};
pub use first_return::{
    classify_region, in_omega_alpha, return_map, return_ratio, tau, theta_bar,
    theta_bar_unverified, Region, ReturnOutcome, ThetaBarEntry, ThetaBarSequence,
};
pub use hyper::{
    finite_return_scan, ford_disc, geometric_tau, geometric_theta_test, intersects,
    map_geodesic, minimal_disc, minimal_disc_with_index, mobius_image, Geodesic, Horocycle,
    MinimalDisc,
};
pub use interval::RatInterval;
pub use natural_extension::{
    inverse_step, mobius_of_prefix, mu_omega_alpha, norm, step, step_from_infinity, MobiusMap,
    NEPoint, YCoord,
};
pub use pair_map::{
    f_map, f_minus, f_plus, h_map, h_minus, lambda_classify, lambda_minus_boundary,
    pair_minus, pair_plus, LambdaRegion, PairPoint,
};
pub use scalar::Scalar;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Extension point in fast floating-point mode.
pub type FloatPoint = NEPoint<f64>;
/// Extension point with exact rational coordinates.
pub type ExactPoint = NEPoint<BigRational>;
/// Extension point with certified interval coordinates.
pub type CertPoint = NEPoint<RatInterval>;
/// Floating-point theta pair.
pub type FloatPair = PairPoint<f64>;
