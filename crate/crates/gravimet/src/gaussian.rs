//! Single-mode Gaussian states in dimensionless quadratures.
//!
//! Conventions, fixed for the whole crate: ħ = 1, x̂ = (b̂ + b̂†)/√2,
//! p̂ = −i(b̂ − b̂†)/√2, so the vacuum covariance is I/2 and the symplectic
//! form is Ω = [[0, 1], [−1, 0]]. A state is fully described by its mean
//! quadrature vector and the symmetrized 2×2 covariance matrix; physical
//! states satisfy the Robertson–Schrödinger bound det σ ≥ 1/4.

use thiserror::Error;

use crate::scalar::{real, Scalar};

/// Errors from state construction and scalar diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError<S: Scalar> {
    /// Thermal occupation numbers must be nonnegative.
    #[error("thermal occupation must be nonnegative, got {0}")]
    NegativeOccupation(S),
    /// A field that must be a finite real was NaN or infinite.
    #[error("non-finite value for {0}")]
    NonFinite(&'static str),
    /// The covariance matrix violates the uncertainty bound det σ ≥ 1/4
    /// (or has a nonpositive diagonal).
    #[error("covariance is not a physical quantum state (det = {det})")]
    NotPhysical { det: S },
}

/// General 2×2 real matrix in row-major order; not necessarily symmetric.
///
/// Used for phase-space rotations and propagators acting on states by
/// congruence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<S> {
    pub m00: S,
    pub m01: S,
    pub m10: S,
    pub m11: S,
}

impl<S: Scalar> Mat2<S> {
    pub fn new(m00: S, m01: S, m10: S, m11: S) -> Self {
        Self { m00, m01, m10, m11 }
    }

    pub fn identity() -> Self {
        Self::new(S::one(), S::zero(), S::zero(), S::one())
    }

    /// Phase-space rotation R(θ) = [[cos θ, sin θ], [−sin θ, cos θ]].
    pub fn rotation(theta: S) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s, -s, c)
    }

    pub fn scale(&self, k: S) -> Self {
        Self::new(self.m00 * k, self.m01 * k, self.m10 * k, self.m11 * k)
    }

    pub fn matmul(&self, o: &Self) -> Self {
        Self::new(
            self.m00 * o.m00 + self.m01 * o.m10,
            self.m00 * o.m01 + self.m01 * o.m11,
            self.m10 * o.m00 + self.m11 * o.m10,
            self.m10 * o.m01 + self.m11 * o.m11,
        )
    }

    pub fn apply(&self, v: &Displacement2<S>) -> Displacement2<S> {
        Displacement2 {
            x: self.m00 * v.x + self.m01 * v.p,
            p: self.m10 * v.x + self.m11 * v.p,
        }
    }

    /// Congruence M σ Mᵀ of a symmetric matrix; the result is symmetric.
    pub fn congruence(&self, sigma: &CovMat2<S>) -> CovMat2<S> {
        // rows of M σ
        let a0 = self.m00 * sigma.xx + self.m01 * sigma.xp;
        let a1 = self.m00 * sigma.xp + self.m01 * sigma.pp;
        let b0 = self.m10 * sigma.xx + self.m11 * sigma.xp;
        let b1 = self.m10 * sigma.xp + self.m11 * sigma.pp;
        CovMat2 {
            xx: a0 * self.m00 + a1 * self.m01,
            xp: a0 * self.m10 + a1 * self.m11,
            pp: b0 * self.m10 + b1 * self.m11,
        }
    }

    pub fn max_abs_diff(&self, o: &Self) -> S {
        (self.m00 - o.m00)
            .abs()
            .max((self.m01 - o.m01).abs())
            .max((self.m10 - o.m10).abs())
            .max((self.m11 - o.m11).abs())
    }
}

/// Symmetric 2×2 covariance matrix of the quadratures (x̂, p̂).
///
/// Only the three independent entries are stored, so symmetry holds by
/// construction. Physicality (det σ ≥ 1/4 up to a tolerance) is a separate
/// predicate, [`CovMat2::is_bona_fide`]: intermediate matrices such as noise
/// accumulators and parameter derivatives are legitimate non-states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovMat2<S> {
    /// Variance of x̂.
    pub xx: S,
    /// Symmetrized x–p covariance.
    pub xp: S,
    /// Variance of p̂.
    pub pp: S,
}

impl<S: Scalar> CovMat2<S> {
    pub fn new(xx: S, xp: S, pp: S) -> Self {
        Self { xx, xp, pp }
    }

    pub fn scaled_identity(v: S) -> Self {
        Self::new(v, S::zero(), v)
    }

    /// Vacuum covariance I/2.
    pub fn vacuum() -> Self {
        Self::scaled_identity(real(0.5))
    }

    pub fn zero() -> Self {
        Self::scaled_identity(S::zero())
    }

    pub fn det(&self) -> S {
        self.xx * self.pp - self.xp * self.xp
    }

    pub fn trace(&self) -> S {
        self.xx + self.pp
    }

    /// Robertson–Schrödinger check: xx > 0, pp > 0 and det σ ≥ 1/4 − tol.
    pub fn is_bona_fide(&self, tol: S) -> bool {
        self.xx > S::zero() && self.pp > S::zero() && self.det() >= real::<S>(0.25) - tol
    }

    fn ensure_physical(&self) -> Result<(), StateError<S>> {
        if self.is_bona_fide(S::bona_fide_tol()) {
            Ok(())
        } else {
            Err(StateError::NotPhysical { det: self.det() })
        }
    }

    /// Purity P = 1/(2 √det σ) ∈ (0, 1]. Rejects unphysical covariances.
    pub fn purity(&self) -> Result<S, StateError<S>> {
        self.ensure_physical()?;
        Ok(S::one() / (real::<S>(2.0) * self.det().sqrt()))
    }

    /// Symplectic eigenvalue ν = √det σ ≥ 1/2 for physical states.
    pub fn symplectic_eigenvalue(&self) -> Result<S, StateError<S>> {
        self.ensure_physical()?;
        Ok(self.det().sqrt())
    }

    /// Closed-form symmetric inverse. Rejects unphysical covariances, whose
    /// determinant could be arbitrarily close to zero.
    pub fn inverse(&self) -> Result<Self, StateError<S>> {
        self.ensure_physical()?;
        let d = self.det();
        Ok(Self::new(self.pp / d, -self.xp / d, self.xx / d))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.xx + o.xx, self.xp + o.xp, self.pp + o.pp)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.xx - o.xx, self.xp - o.xp, self.pp - o.pp)
    }

    pub fn scale(&self, k: S) -> Self {
        Self::new(self.xx * k, self.xp * k, self.pp * k)
    }

    pub fn max_abs_diff(&self, o: &Self) -> S {
        (self.xx - o.xx)
            .abs()
            .max((self.xp - o.xp).abs())
            .max((self.pp - o.pp).abs())
    }

    /// Quadratic form cᵀ σ c for the unit vector c = (cos θ, sin θ).
    pub fn quadrature_variance(&self, theta: S) -> S {
        let (s, c) = theta.sin_cos();
        c * c * self.xx + real::<S>(2.0) * c * s * self.xp + s * s * self.pp
    }

    fn all_finite(&self) -> bool {
        self.xx.is_finite() && self.xp.is_finite() && self.pp.is_finite()
    }
}

/// Mean quadrature vector (⟨x̂⟩, ⟨p̂⟩).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Displacement2<S> {
    pub x: S,
    pub p: S,
}

impl<S: Scalar> Displacement2<S> {
    pub fn new(x: S, p: S) -> Self {
        Self { x, p }
    }

    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero())
    }

    pub fn norm_sq(&self) -> S {
        self.x * self.x + self.p * self.p
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.x - o.x, self.p - o.p)
    }

    pub fn max_abs_diff(&self, o: &Self) -> S {
        (self.x - o.x).abs().max((self.p - o.p).abs())
    }
}

/// A single-mode Gaussian state: mean vector plus covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState<S> {
    pub mean: Displacement2<S>,
    pub cov: CovMat2<S>,
}

impl<S: Scalar> GaussianState<S> {
    pub fn new(mean: Displacement2<S>, cov: CovMat2<S>) -> Self {
        Self { mean, cov }
    }

    pub fn vacuum() -> Self {
        Self::new(Displacement2::zero(), CovMat2::vacuum())
    }

    /// Mean excitation number n₀ = (Tr σ − 1)/2 + (⟨x̂⟩² + ⟨p̂⟩²)/2.
    pub fn energy(&self) -> S {
        (self.cov.trace() - S::one()) / real(2.0) + self.mean.norm_sq() / real(2.0)
    }
}

/// Preparation recipe for one of the four probe families.
///
/// `phi` rotates the squeezing axis; the r > 0, φ = 0 orientation squeezes
/// x̂. Squeezing a thermal state and thermalizing a squeezed one give the
/// same covariance here, so a single variant covers both readings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbeSpec<S> {
    Coherent { alpha_re: S, alpha_im: S },
    Thermal { n_th0: S },
    SqueezedVacuum { r: S, phi: S },
    SqueezedThermal { n_th0: S, r: S, phi: S },
}

impl<S: Scalar> ProbeSpec<S> {
    /// Builds the Gaussian state for this preparation:
    ///
    /// - coherent α: mean (√2 Re α, √2 Im α), covariance I/2;
    /// - thermal n: mean 0, covariance (n + 1/2) I;
    /// - squeezed vacuum (r, φ): R(φ) diag(e^{−2r}, e^{2r})/2 R(φ)ᵀ;
    /// - squeezed thermal (n, r, φ): the same with prefactor n + 1/2.
    pub fn build(&self) -> Result<GaussianState<S>, StateError<S>> {
        self.validate()?;
        let state = match *self {
            Self::Coherent { alpha_re, alpha_im } => {
                let rt2 = real::<S>(2.0).sqrt();
                GaussianState::new(
                    Displacement2::new(rt2 * alpha_re, rt2 * alpha_im),
                    CovMat2::vacuum(),
                )
            }
            Self::Thermal { n_th0 } => GaussianState::new(
                Displacement2::zero(),
                CovMat2::scaled_identity(n_th0 + real(0.5)),
            ),
            Self::SqueezedVacuum { r, phi } => {
                GaussianState::new(Displacement2::zero(), squeezed_cov(real(0.5), r, phi))
            }
            Self::SqueezedThermal { n_th0, r, phi } => GaussianState::new(
                Displacement2::zero(),
                squeezed_cov(n_th0 + real(0.5), r, phi),
            ),
        };
        if !state.cov.all_finite() {
            return Err(StateError::NonFinite("covariance"));
        }
        Ok(state)
    }

    fn validate(&self) -> Result<(), StateError<S>> {
        let finite = |v: S, name: &'static str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(StateError::NonFinite(name))
            }
        };
        match *self {
            Self::Coherent { alpha_re, alpha_im } => {
                finite(alpha_re, "alpha_re")?;
                finite(alpha_im, "alpha_im")
            }
            Self::Thermal { n_th0 } => {
                finite(n_th0, "n_th0")?;
                ensure_nonneg(n_th0)
            }
            Self::SqueezedVacuum { r, phi } => {
                finite(r, "r")?;
                finite(phi, "phi")
            }
            Self::SqueezedThermal { n_th0, r, phi } => {
                finite(n_th0, "n_th0")?;
                ensure_nonneg(n_th0)?;
                finite(r, "r")?;
                finite(phi, "phi")
            }
        }
    }
}

fn ensure_nonneg<S: Scalar>(n: S) -> Result<(), StateError<S>> {
    if n < S::zero() {
        Err(StateError::NegativeOccupation(n))
    } else {
        Ok(())
    }
}

/// prefactor · R(φ) diag(e^{−2r}, e^{2r}) R(φ)ᵀ, expanded so the result is
/// symmetric by construction.
fn squeezed_cov<S: Scalar>(prefactor: S, r: S, phi: S) -> CovMat2<S> {
    let two = real::<S>(2.0);
    let d1 = prefactor * (-two * r).exp();
    let d2 = prefactor * (two * r).exp();
    let (s, c) = phi.sin_cos();
    CovMat2::new(
        c * c * d1 + s * s * d2,
        c * s * (d2 - d1),
        s * s * d1 + c * c * d2,
    )
}

#[cfg(test)]
mod tests {
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    use super::*;

    type Spec = ProbeSpec<f64>;

    fn table_probes() -> Vec<(&'static str, Spec)> {
        vec![
            (
                "coherent",
                Spec::Coherent {
                    alpha_re: 2.0,
                    alpha_im: 0.0,
                },
            ),
            ("thermal", Spec::Thermal { n_th0: 4.0 }),
            (
                "squeezed_vacuum",
                Spec::SqueezedVacuum {
                    r: 1.4436,
                    phi: 0.0,
                },
            ),
            (
                "squeezed_thermal",
                Spec::SqueezedThermal {
                    n_th0: 1.0,
                    r: 0.8814,
                    phi: 0.0,
                },
            ),
        ]
    }

    #[test]
    fn coherent_probe_mean_and_cov() {
        let s = Spec::Coherent {
            alpha_re: 2.0,
            alpha_im: 0.0,
        }
        .build()
        .unwrap();
        assert_relative_eq!(
            s.mean.x,
            2.0 * std::f64::consts::SQRT_2,
            max_relative = 1e-15
        );
        assert_abs_diff_eq!(s.mean.p, 0.0);
        assert_abs_diff_eq!(s.cov.xx, 0.5);
        assert_abs_diff_eq!(s.cov.xp, 0.0);
        assert_abs_diff_eq!(s.cov.pp, 0.5);
    }

    #[test]
    fn zero_excitation_thermal_is_vacuum() {
        let s = Spec::Thermal { n_th0: 0.0 }.build().unwrap();
        assert_eq!(s, GaussianState::vacuum());
    }

    #[test]
    fn squeezed_vacuum_diagonal() {
        // e^{∓2r}/2 at r = 1.4436, evaluated independently.
        let s = Spec::SqueezedVacuum {
            r: 1.4436,
            phi: 0.0,
        }
        .build()
        .unwrap();
        assert_relative_eq!(s.cov.xx, 2.786602203451e-2, max_relative = 1e-12);
        assert_relative_eq!(s.cov.pp, 8.971499401327e0, max_relative = 1e-12);
        assert_abs_diff_eq!(s.cov.xp, 0.0);
    }

    #[test]
    fn squeezed_thermal_scales_squeezed_vacuum() {
        let sv = Spec::SqueezedVacuum {
            r: 0.8814,
            phi: 0.3,
        }
        .build()
        .unwrap();
        let st = Spec::SqueezedThermal {
            n_th0: 1.0,
            r: 0.8814,
            phi: 0.3,
        }
        .build()
        .unwrap();
        assert!(st.cov.max_abs_diff(&sv.cov.scale(3.0)) < 1e-14);
    }

    #[test]
    fn rejects_invalid_probe_parameters() {
        assert_eq!(
            Spec::Thermal { n_th0: -0.1 }.build(),
            Err(StateError::NegativeOccupation(-0.1))
        );
        assert!(matches!(
            Spec::SqueezedVacuum {
                r: f64::NAN,
                phi: 0.0
            }
            .build(),
            Err(StateError::NonFinite("r"))
        ));
        assert!(matches!(
            Spec::Coherent {
                alpha_re: f64::INFINITY,
                alpha_im: 0.0
            }
            .build(),
            Err(StateError::NonFinite("alpha_re"))
        ));
        // e^{2r} overflows f64 around r ≈ 355
        assert!(matches!(
            Spec::SqueezedVacuum { r: 400.0, phi: 0.0 }.build(),
            Err(StateError::NonFinite("covariance"))
        ));
    }

    #[test]
    fn vacuum_energy_is_zero() {
        assert_abs_diff_eq!(GaussianState::<f64>::vacuum().energy(), 0.0);
    }

    #[test]
    fn table_probes_have_energy_four() {
        for (name, spec) in table_probes() {
            let n0 = spec.build().unwrap().energy();
            assert!((n0 - 4.0).abs() < 1e-3, "{name}: n0 = {n0}");
        }
    }

    #[test]
    fn thermal_energy_equals_occupation() {
        let s = Spec::Thermal { n_th0: 4.0 }.build().unwrap();
        assert_abs_diff_eq!(s.energy(), 4.0, epsilon = 1e-14);
    }

    #[test]
    fn purity_of_reference_states() {
        assert_abs_diff_eq!(
            CovMat2::<f64>::vacuum().purity().unwrap(),
            1.0,
            epsilon = 1e-15
        );
        let th = Spec::Thermal { n_th0: 4.0 }.build().unwrap();
        assert_relative_eq!(th.cov.purity().unwrap(), 1.0 / 9.0, max_relative = 1e-14);
        let st = Spec::SqueezedThermal {
            n_th0: 1.0,
            r: 0.8814,
            phi: 0.0,
        }
        .build()
        .unwrap();
        assert_relative_eq!(st.cov.purity().unwrap(), 1.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn pure_probes_have_unit_purity() {
        let coh = Spec::Coherent {
            alpha_re: 2.0,
            alpha_im: 0.0,
        }
        .build()
        .unwrap();
        assert_abs_diff_eq!(coh.cov.purity().unwrap(), 1.0, epsilon = 1e-12);
        let sv = Spec::SqueezedVacuum {
            r: 1.4436,
            phi: 0.0,
        }
        .build()
        .unwrap();
        assert_abs_diff_eq!(sv.cov.purity().unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn purity_rejects_unphysical_covariance() {
        let c = CovMat2::new(0.4, 0.0, 0.4);
        assert!(matches!(c.purity(), Err(StateError::NotPhysical { .. })));
        assert!(c.symplectic_eigenvalue().is_err());
        assert!(c.inverse().is_err());
    }

    #[test]
    fn bona_fide_examples() {
        assert!(CovMat2::<f64>::vacuum().is_bona_fide(1e-10));
        assert!(!CovMat2::new(0.4, 0.0, 0.4).is_bona_fide(1e-10)); // det 0.16 < 0.25
        assert!(!CovMat2::new(-0.5, 0.0, -0.6).is_bona_fide(1e-10));
    }

    #[test]
    fn symplectic_eigenvalue_examples() {
        assert_abs_diff_eq!(
            CovMat2::<f64>::vacuum().symplectic_eigenvalue().unwrap(),
            0.5
        );
        let th = Spec::Thermal { n_th0: 4.0 }.build().unwrap();
        assert_relative_eq!(
            th.cov.symplectic_eigenvalue().unwrap(),
            4.5,
            max_relative = 1e-14
        );
    }

    #[test]
    fn inverse_roundtrip() {
        let c = CovMat2::new(1.3, -0.4, 2.7);
        let inv = c.inverse().unwrap();
        let prod_diag = (c.xx * inv.xx + c.xp * inv.xp, c.xp * inv.xp + c.pp * inv.pp);
        assert_relative_eq!(prod_diag.0, 1.0, max_relative = 1e-14);
        assert_relative_eq!(prod_diag.1, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn congruence_matches_explicit_product() {
        let m = Mat2::new(0.3, -1.1, 0.7, 2.0);
        let c = CovMat2::new(1.0, 0.2, 0.8);
        let full = m
            .matmul(&Mat2::new(c.xx, c.xp, c.xp, c.pp))
            .matmul(&Mat2::new(m.m00, m.m10, m.m01, m.m11));
        let cong = m.congruence(&c);
        assert_relative_eq!(cong.xx, full.m00, max_relative = 1e-14);
        assert_relative_eq!(cong.xp, full.m01, max_relative = 1e-14);
        assert_relative_eq!(cong.pp, full.m11, max_relative = 1e-14);
        assert_relative_eq!(full.m01, full.m10, max_relative = 1e-14);
    }

    #[test]
    fn quadrature_variance_interpolates_diagonal() {
        let c = CovMat2::new(2.0, 0.0, 0.5);
        assert_abs_diff_eq!(c.quadrature_variance(0.0), 2.0);
        assert_abs_diff_eq!(
            c.quadrature_variance(std::f64::consts::FRAC_PI_2),
            0.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn works_in_single_precision() {
        let v: CovMat2<f32> = CovMat2::vacuum();
        assert!((v.purity().unwrap() - 1.0).abs() < 1e-6);
        let s = ProbeSpec::<f32>::SqueezedVacuum { r: 1.2, phi: 0.4 }
            .build()
            .unwrap();
        assert!(s.cov.is_bona_fide(f32::bona_fide_tol()));
    }

    proptest! {
        #[test]
        fn probes_are_bona_fide_for_any_orientation(
            r in 0.0..3.0f64,
            phi in 0.0..std::f64::consts::TAU,
            n in 0.0..10.0f64,
        ) {
            let sv = Spec::SqueezedVacuum { r, phi }.build().unwrap();
            prop_assert!(sv.cov.is_bona_fide(1e-10));
            let st = Spec::SqueezedThermal { n_th0: n, r, phi }.build().unwrap();
            prop_assert!(st.cov.is_bona_fide(1e-10));
        }

        #[test]
        fn squeezing_preserves_symplectic_eigenvalue(
            r in 0.0..3.0f64,
            phi in 0.0..std::f64::consts::TAU,
        ) {
            let sv = Spec::SqueezedVacuum { r, phi }.build().unwrap();
            let nu = sv.cov.symplectic_eigenvalue().unwrap();
            prop_assert!((nu - 0.5).abs() < 1e-9, "nu = {nu}");
        }

        #[test]
        fn squeezed_thermal_purity_matches_thermal(
            r in 0.0..2.0f64,
            phi in 0.0..std::f64::consts::TAU,
            n in 0.0..10.0f64,
        ) {
            let st = Spec::SqueezedThermal { n_th0: n, r, phi }.build().unwrap();
            let p = st.cov.purity().unwrap();
            prop_assert!((p - 1.0 / (2.0 * n + 1.0)).abs() < 1e-9);
        }
    }
}
