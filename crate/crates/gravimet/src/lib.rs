//! Gaussian-state metrology of gravitational decoherence in damped
//! mechanical modes.
//!
//! A mechanical oscillator coupled to a thermal bath and subject to an
//! extra position-diffusion channel (rate Λ = Λ_g + Λ_T) stays Gaussian
//! under the dynamics, so its state is a mean vector plus a 2×2 covariance
//! matrix with closed-form time dependence. This crate provides:
//!
//! - [`gaussian`]: probe-state construction and scalar diagnostics
//!   (energy, purity, physicality);
//! - [`dynamics`]: the closed-form propagator, accumulated noise
//!   covariance, steady state, physical-constant bridges for Λ_g and Λ_T,
//!   and an independent moment-ODE integrator used as a cross-check;
//! - [`metrology`]: quantum Fisher information for Λ_g with analytic
//!   derivatives, a fidelity-based QFI cross-check, homodyne classical
//!   Fisher information, and Cramér–Rao bounds;
//! - [`experiments`]: config-driven parameter sweeps with deterministic
//!   CSV output, a steady-state report, and the self-validation suites
//!   behind the `gravimet validate` command.
//!
//! The math modules are generic over the floating-point type through
//! [`Scalar`]; the `*F64`/`*F32` aliases below cover the common
//! instantiations. The experiment harness is `f64`-only.

pub mod dynamics;
pub mod experiments;
pub mod gaussian;
pub mod metrology;
mod scalar;

pub use scalar::Scalar;

pub use gaussian::{CovMat2, Displacement2, GaussianState, Mat2, ProbeSpec, StateError};

pub use dynamics::{BathSpec, MirrorSpec, MomentState, PhysicalParams};

pub use metrology::{CrbReport, QfiBreakdown};

/// Double-precision instantiations (what the CLI uses).
pub type CovMat2F64 = CovMat2<f64>;
pub type Displacement2F64 = Displacement2<f64>;
pub type GaussianStateF64 = GaussianState<f64>;
pub type ProbeSpecF64 = ProbeSpec<f64>;
pub type PhysicalParamsF64 = PhysicalParams<f64>;
pub type QfiBreakdownF64 = QfiBreakdown<f64>;
pub type CrbReportF64 = CrbReport<f64>;

/// Single-precision instantiations.
pub type CovMat2F32 = CovMat2<f32>;
pub type Displacement2F32 = Displacement2<f32>;
pub type GaussianStateF32 = GaussianState<f32>;
pub type ProbeSpecF32 = ProbeSpec<f32>;
pub type PhysicalParamsF32 = PhysicalParams<f32>;
pub type QfiBreakdownF32 = QfiBreakdown<f32>;
