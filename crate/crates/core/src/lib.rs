//! Growth exponents of polynomial sublevel sets.
//!
//! Given a polynomial map `f = (f_1, ..., f_m)` on `R^n`, this crate predicts
//! how the volume of `{x : |f_i(x)| <= r}` and its count of nonzero-coordinate
//! integer points grow as `r -> infinity`. Both follow `r^theta (ln r)^kappa`,
//! with exponents read off the Newton polytope of `f` in exact rational
//! arithmetic. The predictions are then checked against brute-force counts
//! and volume estimates.
//!
//! * [`polynomial`]: exact polynomial maps and their text syntax.
//! * [`geom`]: rational polytopes, faces, downward closure, polarity.
//! * [`lp`]: exact simplex with certificates and optimal-face dimension.
//! * [`asym`]: finiteness verdicts and exponents, by geometry and by LP.
//! * [`mgcheck`]: numerical search for face-polynomial common zeros, and
//!   empirical two-sided vertex estimates.
//! * [`empirics`]: exact lattice counts, volume estimates, exponent fits.

pub mod asym;
pub mod empirics;
pub mod geom;
pub mod json;
pub mod lp;
pub mod mgcheck;
pub mod polynomial;
pub mod scalar;

/// Exact rational scalar used throughout the public pipeline.
pub type Rational = num_rational::BigRational;
/// Polytope with exact rational coordinates.
pub type RationalPolytope = geom::Polytope<Rational>;

pub use asym::{
    asymptotic_profile, compare_profiles, lattice_profile, lp_cross_check, volume_profile, AsymptoticProfile,
};
pub use polynomial::{Polynomial, PolynomialMap};
