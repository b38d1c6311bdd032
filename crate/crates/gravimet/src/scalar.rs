use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point scalar used for all state and dynamics math: `f32` or `f64`.
///
/// Everything in [`crate::gaussian`], [`crate::dynamics`] and
/// [`crate::metrology`] is generic over this trait; the crate root exports
/// `f64` aliases for the common instantiation.
pub trait Scalar: Float + FromPrimitive + NumAssign + Debug + Display + 'static {
    /// Absolute tolerance on `det σ − 1/4` accepted by the default
    /// physicality checks.
    ///
    /// 1e−10 for `f64`. For `f32` the determinant of a pure state already
    /// rounds at ~1e−8, so the tolerance widens to `100·ε`.
    fn bona_fide_tol() -> Self {
        let base = Self::from_f64(1e-10).unwrap();
        base.max(Self::epsilon() * Self::from_f64(100.0).unwrap())
    }

    /// Threshold below which `1 − P⁴` counts as a pure-state singularity
    /// in the quantum Fisher information. Same scaling rationale as
    /// [`Scalar::bona_fide_tol`].
    fn purity_guard_tol() -> Self {
        let base = Self::from_f64(1e-12).unwrap();
        base.max(Self::epsilon() * Self::from_f64(100.0).unwrap())
    }
}

impl<T> Scalar for T where T: Float + FromPrimitive + NumAssign + Debug + Display + 'static {}

/// Converts an `f64` literal into the working scalar type.
#[inline]
pub(crate) fn real<S: Scalar>(x: f64) -> S {
    S::from_f64(x).expect("constant must be representable in the scalar type")
}
