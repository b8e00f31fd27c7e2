//! Scalar abstraction for the whole crate.
//!
//! All probability and game math is generic over [`Real`], which is
//! implemented for `f32` and `f64`. The harness and CLI use the `f64`
//! aliases exported from the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

/// Floating-point scalar usable for beliefs, signals, and solvers.
///
/// Beyond the arithmetic provided by `num_traits::Float`, a `Real` carries
/// the validation tolerances appropriate for its precision and knows how to
/// draw the two sample kinds the scenario generator needs.
pub trait Real:
    Float + FromPrimitive + NumAssign + Sum<Self> + Debug + Display + Send + Sync + 'static
{
    /// Absolute tolerance on `|Σ w − 1|` when validating probability vectors.
    const SUM_TOL: Self;
    /// Coordinates at or below this threshold count as boundary-active when
    /// measuring first-order stationarity on the simplex.
    const ACTIVE_TOL: Self;

    /// Shorthand for lossy conversion from `f64` literals.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in Real type")
    }

    /// Lossy conversion to `f64` for reporting and error payloads.
    fn to_f64_lossy(self) -> f64;

    /// Uniform draw from `[lo, hi)`.
    fn sample_uniform<R: Rng + ?Sized>(rng: &mut R, lo: Self, hi: Self) -> Self;

    /// Standard normal draw.
    fn sample_std_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Real for f64 {
    const SUM_TOL: Self = 1e-9;
    const ACTIVE_TOL: Self = 1e-10;

    fn to_f64_lossy(self) -> f64 {
        self
    }

    fn sample_uniform<R: Rng + ?Sized>(rng: &mut R, lo: Self, hi: Self) -> Self {
        Uniform::new(lo, hi).expect("valid uniform range").sample(rng)
    }

    fn sample_std_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Real for f32 {
    // f32 sums over ~100 weights drift well past 1e-9; scale the gates.
    const SUM_TOL: Self = 1e-4;
    const ACTIVE_TOL: Self = 1e-6;

    fn to_f64_lossy(self) -> f64 {
        f64::from(self)
    }

    fn sample_uniform<R: Rng + ?Sized>(rng: &mut R, lo: Self, hi: Self) -> Self {
        Uniform::new(lo, hi).expect("valid uniform range").sample(rng)
    }

    fn sample_std_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}
