//! Closed-form time evolution of the damped mechanical mode.
//!
//! The master equation combines a harmonic term ω_m b̂†b̂, thermal
//! dissipation at rate γ into a bath of occupation n̄_th, and a position
//! diffusion double commutator of rate Λ = Λ_g + Λ_T. Its moment equations
//! close, so the quadrature mean evolves as Ô(t) = S(t) Ô(0) with the
//! damped rotation
//!
//! ```text
//! S(t) = e^{−γt/2} [[cos ω_m t, sin ω_m t], [−sin ω_m t, cos ω_m t]],
//! ```
//!
//! and the covariance as σ(t) = S(t) σ(0) S(t)ᵀ + σ_noise(t), where the
//! accumulated noise is
//!
//! ```text
//! σ_noise(t) = [[N + A, B], [B, N − A]],
//! N(t) = (1 − e^{−γt}) (n̄_eff + 1/2),            n̄_eff = n̄_th + 2Λ/γ,
//! A(t) = 2Λ/(γ² + 4ω²) [γ (1 − e^{−γt} cos 2ωt) + 2ω e^{−γt} sin 2ωt],
//! B(t) = 2Λ/(γ² + 4ω²) [−2ω (1 − e^{−γt} cos 2ωt) + γ e^{−γt} sin 2ωt].
//! ```
//!
//! [`moment_ode_oracle`] integrates the underlying moment equations
//! directly with a fixed-step fourth-order scheme; it shares no code with
//! the closed forms above and exists to cross-check them.

use thiserror::Error;

use crate::gaussian::{CovMat2, Displacement2, GaussianState, Mat2};
use crate::scalar::{real, Scalar};

/// Newton's gravitational constant, m³ kg⁻¹ s⁻².
pub const NEWTON_G: f64 = 6.67430e-11;
/// Boltzmann constant, J/K.
pub const BOLTZMANN_K: f64 = 1.380649e-23;
/// Reduced Planck constant, J·s.
pub const REDUCED_PLANCK: f64 = 1.054571817e-34;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError<S: Scalar> {
    #[error("invalid parameter {name} = {value}")]
    InvalidParam { name: &'static str, value: S },
    /// The fixed-step oracle requires dt ≤ min(1/ω_m, 1/γ)/50.
    #[error("oracle step {dt} too large; stability requires dt ≤ {max}")]
    StepTooLarge { dt: S, max: S },
}

/// Rates defining the open-system dynamics. Λ_g and Λ_T enter only through
/// their sum Λ, but are kept separate because Λ_g is the estimation target.
///
/// γ > 0 is a type invariant: the noise formulas divide by γ inside n̄_eff,
/// and the thermal Lindblad terms presume a finite coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams<S> {
    omega_m: S,
    gamma: S,
    n_th: S,
    lambda_g: S,
    lambda_t: S,
}

impl<S: Scalar> PhysicalParams<S> {
    /// Validates: ω_m > 0, γ > 0, n̄_th ≥ 0, Λ_g ≥ 0, Λ_T ≥ 0, all finite.
    pub fn new(
        omega_m: S,
        gamma: S,
        n_th: S,
        lambda_g: S,
        lambda_t: S,
    ) -> Result<Self, DynamicsError<S>> {
        let strictly_positive = |v: S, name: &'static str| {
            if v.is_finite() && v > S::zero() {
                Ok(())
            } else {
                Err(DynamicsError::InvalidParam { name, value: v })
            }
        };
        let nonnegative = |v: S, name: &'static str| {
            if v.is_finite() && v >= S::zero() {
                Ok(())
            } else {
                Err(DynamicsError::InvalidParam { name, value: v })
            }
        };
        strictly_positive(omega_m, "omega_m")?;
        strictly_positive(gamma, "gamma")?;
        nonnegative(n_th, "n_th")?;
        nonnegative(lambda_g, "lambda_g")?;
        nonnegative(lambda_t, "lambda_t")?;
        Ok(Self {
            omega_m,
            gamma,
            n_th,
            lambda_g,
            lambda_t,
        })
    }

    pub fn omega_m(&self) -> S {
        self.omega_m
    }

    pub fn gamma(&self) -> S {
        self.gamma
    }

    pub fn n_th(&self) -> S {
        self.n_th
    }

    pub fn lambda_g(&self) -> S {
        self.lambda_g
    }

    pub fn lambda_t(&self) -> S {
        self.lambda_t
    }

    /// Total diffusion rate Λ = Λ_g + Λ_T.
    pub fn lambda(&self) -> S {
        self.lambda_g + self.lambda_t
    }

    /// Effective occupation n̄_eff = n̄_th + 2Λ/γ. Diffusion heats the mode
    /// exactly like extra thermal occupation.
    pub fn n_eff(&self) -> S {
        self.n_th + real::<S>(2.0) * self.lambda() / self.gamma
    }

    /// Quality factor Q = ω_m/γ.
    pub fn quality_factor(&self) -> S {
        self.omega_m / self.gamma
    }

    /// Same parameters with Λ_g replaced; used by sweeps and
    /// finite-difference probes.
    pub fn with_lambda_g(&self, lambda_g: S) -> Result<Self, DynamicsError<S>> {
        Self::new(self.omega_m, self.gamma, self.n_th, lambda_g, self.lambda_t)
    }
}

/// Mirror material data fixing the gravitational diffusion rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorSpec<S> {
    density: S,
    omega_m: S,
}

impl<S: Scalar> MirrorSpec<S> {
    /// density in kg·m⁻³ (≥ 0), ω_m in s⁻¹ (> 0).
    pub fn new(density: S, omega_m: S) -> Result<Self, DynamicsError<S>> {
        if !(density.is_finite() && density >= S::zero()) {
            return Err(DynamicsError::InvalidParam {
                name: "density",
                value: density,
            });
        }
        if !(omega_m.is_finite() && omega_m > S::zero()) {
            return Err(DynamicsError::InvalidParam {
                name: "omega_m",
                value: omega_m,
            });
        }
        Ok(Self { density, omega_m })
    }

    /// Λ_g = 2πGΔ/(3 ω_m), in s⁻¹.
    pub fn lambda_g(&self) -> S {
        real::<S>(2.0 * std::f64::consts::PI * NEWTON_G) * self.density
            / (real::<S>(3.0) * self.omega_m)
    }
}

/// Bath data fixing the thermal diffusion rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec<S> {
    temperature: S,
    gamma: S,
    omega_m: S,
}

impl<S: Scalar> BathSpec<S> {
    /// temperature in K (≥ 0), γ and ω_m in s⁻¹ (> 0).
    pub fn new(temperature: S, gamma: S, omega_m: S) -> Result<Self, DynamicsError<S>> {
        if !(temperature.is_finite() && temperature >= S::zero()) {
            return Err(DynamicsError::InvalidParam {
                name: "temperature",
                value: temperature,
            });
        }
        if !(gamma.is_finite() && gamma > S::zero()) {
            return Err(DynamicsError::InvalidParam {
                name: "gamma",
                value: gamma,
            });
        }
        if !(omega_m.is_finite() && omega_m > S::zero()) {
            return Err(DynamicsError::InvalidParam {
                name: "omega_m",
                value: omega_m,
            });
        }
        Ok(Self {
            temperature,
            gamma,
            omega_m,
        })
    }

    /// Λ_T = k_B T γ/(ħ ω_m), in s⁻¹.
    pub fn lambda_t(&self) -> S {
        real::<S>(BOLTZMANN_K / REDUCED_PLANCK) * self.temperature * self.gamma / self.omega_m
    }
}

/// Propagator S(t) = e^{−γt/2} R(ω_m t): a damped rotation in phase space.
pub fn propagator<S: Scalar>(t: S, p: &PhysicalParams<S>) -> Mat2<S> {
    assert!(t >= S::zero(), "propagator requires t >= 0");
    let damp = (-p.gamma * t / real(2.0)).exp();
    Mat2::rotation(p.omega_m * t).scale(damp)
}

/// Noise covariance σ_noise(t) accumulated between 0 and t.
pub fn noise_cov<S: Scalar>(t: S, p: &PhysicalParams<S>) -> CovMat2<S> {
    assert!(t >= S::zero(), "noise_cov requires t >= 0");
    let decay = (-p.gamma * t).exp();
    let n = (S::one() - decay) * (p.n_eff() + real(0.5));
    let (a, b) = shape_terms(t, p, real::<S>(2.0) * p.lambda());
    CovMat2::new(n + a, b, n - a)
}

/// The A(t), B(t) pair with an arbitrary prefactor numerator in place of
/// 2Λ. Shared between the noise covariance itself (numerator 2Λ) and its
/// Λ_g derivative (numerator 2), so the Λ = 0 case stays regular.
pub(crate) fn shape_terms<S: Scalar>(t: S, p: &PhysicalParams<S>, numerator: S) -> (S, S) {
    let two = real::<S>(2.0);
    let om2 = two * p.omega_m;
    let pref = numerator / (p.gamma * p.gamma + om2 * om2);
    let decay = (-p.gamma * t).exp();
    let (sin2, cos2) = (om2 * t).sin_cos();
    let c = S::one() - decay * cos2;
    let s = decay * sin2;
    let a = pref * (p.gamma * c + om2 * s);
    let b = pref * (-om2 * c + p.gamma * s);
    (a, b)
}

/// Evolves a state for time t ≥ 0: mean ← S(t)·mean, σ ← S σ Sᵀ + σ_noise.
pub fn evolve<S: Scalar>(s0: &GaussianState<S>, t: S, p: &PhysicalParams<S>) -> GaussianState<S> {
    let s = propagator(t, p);
    GaussianState::new(
        s.apply(&s0.mean),
        s.congruence(&s0.cov).add(&noise_cov(t, p)),
    )
}

/// Long-time state: zero mean and
/// σ(∞) = [[n̄_eff + 1/2 + A∞, B∞], [B∞, n̄_eff + 1/2 − A∞]] with
/// A∞ = 2Λγ/(γ² + 4ω²), B∞ = −4Λω/(γ² + 4ω²). A squeezed thermal state
/// with B∞/A∞ = −2Q, independent of the initial probe.
pub fn steady_state<S: Scalar>(p: &PhysicalParams<S>) -> GaussianState<S> {
    let (a_inf, b_inf) = steady_shape(p);
    let diag = p.n_eff() + real::<S>(0.5);
    GaussianState::new(
        Displacement2::zero(),
        CovMat2::new(diag + a_inf, b_inf, diag - a_inf),
    )
}

/// (A∞, B∞) of the stationary covariance.
pub fn steady_shape<S: Scalar>(p: &PhysicalParams<S>) -> (S, S) {
    let two = real::<S>(2.0);
    let om2 = two * p.omega_m;
    let pref = two * p.lambda() / (p.gamma * p.gamma + om2 * om2);
    (pref * p.gamma, -pref * om2)
}

/// Default integration step for [`moment_ode_oracle`]:
/// min(1/ω_m, 1/γ)/100. The system is linear and non-stiff, so a fixed
/// step keeps the oracle trivially reproducible.
pub fn default_oracle_dt<S: Scalar>(p: &PhysicalParams<S>) -> S {
    (S::one() / p.omega_m).min(S::one() / p.gamma) / real(100.0)
}

/// First and second moments of the mode operators: ⟨b̂⟩, ⟨b̂†b̂⟩, ⟨b̂²⟩.
///
/// The moment equations are
///   d⟨b̂⟩/dt   = −(iω_m + γ/2) ⟨b̂⟩,
///   d⟨b̂†b̂⟩/dt = −γ ⟨b̂†b̂⟩ + γ n̄_eff,
///   d⟨b̂²⟩/dt  = −(2iω_m + γ) ⟨b̂²⟩ + 2Λ,
/// stored as five real components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState<S> {
    pub b_re: S,
    pub b_im: S,
    pub n: S,
    pub b2_re: S,
    pub b2_im: S,
}

impl<S: Scalar> MomentState<S> {
    /// Quadrature state → mode-operator moments under x̂ = (b̂ + b̂†)/√2:
    /// ⟨b̂⟩ = (⟨x̂⟩ + i⟨p̂⟩)/√2, with the second moments recovered from the
    /// centered ones by adding back the first-moment products.
    pub fn from_state(s: &GaussianState<S>) -> Self {
        let rt2 = real::<S>(2.0).sqrt();
        let b_re = s.mean.x / rt2;
        let b_im = s.mean.p / rt2;
        let b2c_re = (s.cov.xx - s.cov.pp) / real(2.0);
        let b2c_im = s.cov.xp;
        let nc = (s.cov.xx + s.cov.pp - S::one()) / real(2.0);
        Self {
            b_re,
            b_im,
            n: nc + b_re * b_re + b_im * b_im,
            b2_re: b2c_re + b_re * b_re - b_im * b_im,
            b2_im: b2c_im + real::<S>(2.0) * b_re * b_im,
        }
    }

    /// Inverse of [`MomentState::from_state`]: centered moments give
    /// σ_xx = 1/2 + Re⟨b̂²⟩_c + ⟨b̂†b̂⟩_c, σ_pp = 1/2 − Re⟨b̂²⟩_c + ⟨b̂†b̂⟩_c,
    /// σ_xp = Im⟨b̂²⟩_c.
    pub fn to_state(&self) -> GaussianState<S> {
        let rt2 = real::<S>(2.0).sqrt();
        let half = real::<S>(0.5);
        let b2c_re = self.b2_re - (self.b_re * self.b_re - self.b_im * self.b_im);
        let b2c_im = self.b2_im - real::<S>(2.0) * self.b_re * self.b_im;
        let nc = self.n - (self.b_re * self.b_re + self.b_im * self.b_im);
        GaussianState::new(
            Displacement2::new(rt2 * self.b_re, rt2 * self.b_im),
            CovMat2::new(half + b2c_re + nc, b2c_im, half - b2c_re + nc),
        )
    }

    fn derivative(&self, p: &PhysicalParams<S>) -> [S; 5] {
        let two = real::<S>(2.0);
        let half_g = p.gamma() / two;
        [
            -half_g * self.b_re + p.omega_m() * self.b_im,
            -p.omega_m() * self.b_re - half_g * self.b_im,
            -p.gamma() * self.n + p.gamma() * p.n_eff(),
            -p.gamma() * self.b2_re + two * p.omega_m() * self.b2_im + two * p.lambda(),
            -two * p.omega_m() * self.b2_re - p.gamma() * self.b2_im,
        ]
    }

    fn as_array(&self) -> [S; 5] {
        [self.b_re, self.b_im, self.n, self.b2_re, self.b2_im]
    }

    fn from_array(v: [S; 5]) -> Self {
        Self {
            b_re: v[0],
            b_im: v[1],
            n: v[2],
            b2_re: v[3],
            b2_im: v[4],
        }
    }
}

/// Independent cross-check for [`evolve`]: converts the state to mode
/// moments, integrates the moment equations with classical fixed-step RK4,
/// and converts back. Rejects steps above min(1/ω_m, 1/γ)/50.
pub fn moment_ode_oracle<S: Scalar>(
    s0: &GaussianState<S>,
    t: S,
    p: &PhysicalParams<S>,
    dt: S,
) -> Result<GaussianState<S>, DynamicsError<S>> {
    assert!(t >= S::zero(), "moment_ode_oracle requires t >= 0");
    let max_dt = (S::one() / p.omega_m).min(S::one() / p.gamma) / real(50.0);
    if dt.is_nan() || dt <= S::zero() || dt > max_dt {
        return Err(DynamicsError::StepTooLarge { dt, max: max_dt });
    }
    let mut m = MomentState::from_state(s0);
    if t > S::zero() {
        // land exactly on t with a uniform step no larger than dt
        let n_steps = (t / dt).ceil();
        let h = t / n_steps;
        let steps = n_steps.to_usize().expect("step count fits in usize");
        for _ in 0..steps {
            m = rk4_step(&m, h, p);
        }
    }
    Ok(m.to_state())
}

fn rk4_step<S: Scalar>(m: &MomentState<S>, h: S, p: &PhysicalParams<S>) -> MomentState<S> {
    let two = real::<S>(2.0);
    let six = real::<S>(6.0);
    let y = m.as_array();
    let k1 = m.derivative(p);
    let k2 = MomentState::from_array(axpy(&y, h / two, &k1)).derivative(p);
    let k3 = MomentState::from_array(axpy(&y, h / two, &k2)).derivative(p);
    let k4 = MomentState::from_array(axpy(&y, h, &k3)).derivative(p);
    let mut out = y;
    for i in 0..5 {
        out[i] = y[i] + h / six * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
    }
    MomentState::from_array(out)
}

fn axpy<S: Scalar>(y: &[S; 5], a: S, k: &[S; 5]) -> [S; 5] {
    let mut out = *y;
    for i in 0..5 {
        out[i] = y[i] + a * k[i];
    }
    out
}
