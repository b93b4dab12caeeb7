//! Model-frame parameters and the squeeze-derived quantities built on them.
//!
//! All rates are in units of the bare spin-phonon coupling λ (λ = 1, ħ = 1).

use crate::error::{Error, Result};

/// Rates and detunings of the rotating-frame spin-mechanical model.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    /// Mechanical detuning δ_m = ω_m − ω_p.
    pub delta_m: f64,
    /// Per-spin dressed-state detuning δ_dg^j.
    pub delta_dg: Vec<f64>,
    /// Per-spin bare coupling λ^j.
    pub lambda: Vec<f64>,
    /// Two-phonon pump amplitude Ω_p (signed).
    pub omega_p: f64,
    pub n_spins: usize,
    /// Fock-space cutoff of the phonon mode.
    pub n_max: usize,
    /// Per-spin dephasing rate γ_NV^j.
    pub gamma_nv: Vec<f64>,
    /// Engineered mechanical damping Γ_m^S in the squeezed frame.
    pub gamma_m_s: f64,
}

impl ModelParams {
    /// Identical spins with λ^j = 1, δ_dg^j = 0 and no dissipation.
    pub fn homogeneous(n_spins: usize, n_max: usize, delta_m: f64, omega_p: f64) -> Self {
        Self {
            delta_m,
            delta_dg: vec![0.0; n_spins],
            lambda: vec![1.0; n_spins],
            omega_p,
            n_spins,
            n_max,
            gamma_nv: vec![0.0; n_spins],
            gamma_m_s: 0.0,
        }
    }

    /// Chooses Ω_p = δ_m·tanh 2r so that the squeezing parameter is `r`.
    pub fn with_squeezing(n_spins: usize, n_max: usize, delta_m: f64, r: f64) -> Self {
        Self::homogeneous(n_spins, n_max, delta_m, delta_m * (2.0 * r).tanh())
    }

    /// Same as [`with_squeezing`](Self::with_squeezing) but fixes the
    /// squeezed-frame detuning Δ_m instead of δ_m.
    pub fn from_squeezed_detuning(n_spins: usize, n_max: usize, delta_m_eff: f64, r: f64) -> Self {
        Self::with_squeezing(n_spins, n_max, delta_m_eff * (2.0 * r).cosh(), r)
    }

    pub fn with_dissipation(mut self, gamma_m_s: f64, gamma_nv: f64) -> Self {
        self.gamma_m_s = gamma_m_s;
        self.gamma_nv = vec![gamma_nv; self.n_spins];
        self
    }

    pub fn with_detunings(mut self, delta_dg: Vec<f64>) -> Self {
        self.delta_dg = delta_dg;
        self
    }

    pub fn with_couplings(mut self, lambda: Vec<f64>) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_spins < 1 {
            return Err(Error::InvalidParameter("n_spins must be ≥ 1".into()));
        }
        if self.n_max < 1 {
            return Err(Error::InvalidDimension(format!("n_max must be ≥ 1, got {}", self.n_max)));
        }
        for (name, list) in [("delta_dg", &self.delta_dg), ("lambda", &self.lambda), ("gamma_nv", &self.gamma_nv)] {
            if list.len() != self.n_spins {
                return Err(Error::InvalidParameter(format!(
                    "{name} has {} entries for {} spins",
                    list.len(),
                    self.n_spins
                )));
            }
            if list.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} contains a non-finite value")));
            }
        }
        if self.gamma_nv.iter().any(|&g| g < 0.0) || self.gamma_m_s < 0.0 || !self.gamma_m_s.is_finite() {
            return Err(Error::InvalidParameter("dissipation rates must be ≥ 0".into()));
        }
        if !(self.delta_m.is_finite() && self.omega_p.is_finite()) {
            return Err(Error::InvalidParameter("delta_m and omega_p must be finite".into()));
        }
        if self.omega_p.abs() >= self.delta_m {
            return Err(Error::Instability { omega_p: self.omega_p.abs(), delta_m: self.delta_m });
        }
        Ok(())
    }

    pub fn is_homogeneous(&self) -> bool {
        let first = self.lambda.first().copied().unwrap_or(0.0);
        self.lambda.iter().all(|&l| l == first)
    }
}

/// Bogoliubov-frame quantities derived from the pump.
#[derive(Clone, Debug, PartialEq)]
pub struct SqueezeParams {
    /// Squeezing parameter r with tanh 2r = Ω_p/δ_m.
    pub r: f64,
    /// Squeezed-frame detuning Δ_m = δ_m / cosh 2r.
    pub delta_m_eff: f64,
    /// Enhanced couplings λ_eff^j = λ^j e^r / 2.
    pub lambda_eff: Vec<f64>,
}

/// Squeezing parameter and enhanced couplings for a pumped resonator.
///
/// Fails with [`Error::Instability`] at or beyond the parametric threshold
/// |Ω_p| ≥ δ_m, where no stationary squeezed frame exists.
pub fn derive_squeeze_params(params: &ModelParams) -> Result<SqueezeParams> {
    params.validate()?;
    let ratio = params.omega_p / params.delta_m;
    let r = 0.5 * ratio.atanh();
    Ok(SqueezeParams {
        r,
        delta_m_eff: params.delta_m / (2.0 * r).cosh(),
        lambda_eff: params.lambda.iter().map(|l| l * r.exp() / 2.0).collect(),
    })
}

/// Lamb–Dicke parameters of the dispersive regime.
#[derive(Clone, Debug, PartialEq)]
pub struct LambDicke {
    /// η_k = λ_eff^k / Δ_m.
    pub eta: Vec<f64>,
    /// Large-r approximation λ^k e^{3r} / (4δ_m).
    pub eta_approx: Vec<f64>,
    pub eta_max: f64,
    /// η_max ≤ [`LAMB_DICKE_LIMIT`].
    pub valid: bool,
}

/// Upper edge of the regime where phonons can be eliminated.
pub const LAMB_DICKE_LIMIT: f64 = 0.2;

pub fn lamb_dicke_eta(squeeze: &SqueezeParams) -> Result<LambDicke> {
    if squeeze.delta_m_eff <= 0.0 || !squeeze.delta_m_eff.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "squeezed detuning must be positive, got {}",
            squeeze.delta_m_eff
        )));
    }
    let r = squeeze.r;
    let delta_m = squeeze.delta_m_eff * (2.0 * r).cosh();
    let eta: Vec<f64> = squeeze.lambda_eff.iter().map(|l| l / squeeze.delta_m_eff).collect();
    let eta_approx = squeeze
        .lambda_eff
        .iter()
        .map(|le| {
            let bare = 2.0 * le * (-r).exp();
            bare * (3.0 * r).exp() / (4.0 * delta_m)
        })
        .collect();
    let eta_max = eta.iter().copied().fold(0.0, f64::max);
    Ok(LambDicke { eta, eta_approx, eta_max, valid: eta_max <= LAMB_DICKE_LIMIT })
}

/// δ_m at which a homogeneous coupling `lambda` reaches Lamb–Dicke
/// parameter `eta` for squeezing `r`; the admissible region is δ_m above it.
pub fn lamb_dicke_boundary(r: f64, eta: f64, lambda: f64) -> f64 {
    lambda * r.exp() * (2.0 * r).cosh() / (2.0 * eta)
}

/// Homogeneous spin-spin coupling Λ = (1 + e^{4r}) λ² / (8δ_m).
pub fn ising_strength(r: f64, lambda: f64, delta_m: f64) -> f64 {
    (1.0 + (4.0 * r).exp()) * lambda * lambda / (8.0 * delta_m)
}

/// Λ/Λ₀ = (1 + e^{4r}) / 2.
pub fn spin_spin_enhancement(r: f64) -> f64 {
    (1.0 + (4.0 * r).exp()) / 2.0
}

/// λ_eff/λ = e^r / 2.
pub fn coupling_enhancement(r: f64) -> f64 {
    r.exp() / 2.0
}

/// r as a function of the relative pump strength Ω_p/δ_m.
pub fn squeezing_from_pump_ratio(ratio: f64) -> Result<f64> {
    if ratio.abs() >= 1.0 || !ratio.is_finite() {
        return Err(Error::Instability { omega_p: ratio.abs(), delta_m: 1.0 });
    }
    Ok(0.5 * ratio.atanh())
}

/// Coupling-to-dissipation figures of merit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cooperativity {
    /// C = λ² / (Γ_m γ_NV).
    pub bare: f64,
    /// C_S = λ_eff² / (Γ_m^S γ_NV).
    pub squeezed: f64,
    /// C_S / C at Γ_m^S = Γ_m, i.e. e^{2r}/4.
    pub ratio: f64,
}

pub fn cooperativity(lambda: f64, gamma_m: f64, gamma_nv: f64, r: f64, gamma_m_s: f64) -> Result<Cooperativity> {
    for (name, v) in [("gamma_m", gamma_m), ("gamma_nv", gamma_nv), ("gamma_m_s", gamma_m_s)] {
        if v <= 0.0 || !v.is_finite() {
            return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
        }
    }
    let lambda_eff = lambda * coupling_enhancement(r);
    let bare = lambda * lambda / (gamma_m * gamma_nv);
    let squeezed = lambda_eff * lambda_eff / (gamma_m_s * gamma_nv);
    let same_bath = lambda_eff * lambda_eff / (gamma_m * gamma_nv);
    Ok(Cooperativity { bare, squeezed, ratio: same_bath / bare })
}

/// Result of reservoir engineering with a two-tone driven cavity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EngineeredDissipation {
    /// Reservoir squeezing r' with tanh r' = D₊/D₋.
    pub r_prime: f64,
    /// Γ_m^S = 4(D₋² − D₊²)/κ_C.
    pub gamma_m_s: f64,
}

pub fn engineered_dissipation(d_plus: f64, d_minus: f64, kappa_c: f64) -> Result<EngineeredDissipation> {
    if kappa_c <= 0.0 || !kappa_c.is_finite() {
        return Err(Error::InvalidParameter(format!("kappa_c must be positive, got {kappa_c}")));
    }
    if d_plus < 0.0 || d_minus <= 0.0 {
        return Err(Error::InvalidParameter("cavity couplings must satisfy 0 ≤ d_plus, 0 < d_minus".into()));
    }
    if d_plus >= d_minus {
        return Err(Error::NoSqueezedFixedPoint { d_plus, d_minus });
    }
    let cooling = (d_minus * d_minus - d_plus * d_plus).sqrt();
    Ok(EngineeredDissipation { r_prime: (d_plus / d_minus).atanh(), gamma_m_s: 4.0 * cooling * cooling / kappa_c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn no_pump_means_no_squeezing() {
        let p = ModelParams::homogeneous(1, 4, 3.0, 0.0);
        let s = derive_squeeze_params(&p).unwrap();
        assert_eq!(s.r, 0.0);
        assert_eq!(s.delta_m_eff, 3.0);
        assert_eq!(s.lambda_eff, vec![0.5]);
    }

    #[test]
    fn pump_ratio_tanh_two_gives_unit_squeezing() {
        let p = ModelParams::homogeneous(1, 4, 1.0, 2f64.tanh());
        let s = derive_squeeze_params(&p).unwrap();
        assert_abs_diff_eq!(s.r, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn instability_threshold_is_reported() {
        let p = ModelParams::homogeneous(1, 4, 1.0, 1.0);
        assert!(matches!(derive_squeeze_params(&p), Err(Error::Instability { .. })));
        let p = ModelParams::homogeneous(1, 4, 1.0, -1.5);
        assert!(matches!(derive_squeeze_params(&p), Err(Error::Instability { .. })));
    }

    #[test]
    fn coupling_enhancement_at_r5() {
        // e^5/2 ≈ 74.2: the "λ_eff ∼ 100λ" order of magnitude
        assert_abs_diff_eq!(coupling_enhancement(5.0), 74.2066, epsilon = 1e-4);
    }

    #[test]
    fn lamb_dicke_unsqueezed() {
        let p = ModelParams::homogeneous(1, 4, 10.0, 0.0);
        let ld = lamb_dicke_eta(&derive_squeeze_params(&p).unwrap()).unwrap();
        assert_abs_diff_eq!(ld.eta[0], 0.05, epsilon = 1e-15);
        assert!(ld.valid);
    }

    #[test]
    fn lamb_dicke_closed_form_cross_check() {
        let p = ModelParams::with_squeezing(1, 4, 60.0, 1.25);
        let s = derive_squeeze_params(&p).unwrap();
        let ld = lamb_dicke_eta(&s).unwrap();
        // closed form: η = λ e^r cosh(2r) / (2 δ_m)
        let closed = 1.25f64.exp() * 2.5f64.cosh() / 120.0;
        assert_abs_diff_eq!(ld.eta[0], closed, epsilon = 1e-12);
        assert_abs_diff_eq!(ld.eta[0], s.lambda_eff[0] / s.delta_m_eff, epsilon = 1e-15);
        assert_abs_diff_eq!(ld.eta[0], 0.178365, epsilon = 1e-6);
        // the e^{3r} approximation undershoots by the (1 + e^{-4r}) factor
        assert_abs_diff_eq!(ld.eta_approx[0] * (1.0 + (-5.0f64).exp()), ld.eta[0], epsilon = 1e-12);
    }

    #[test]
    fn lamb_dicke_boundary_inverts_eta() {
        for r in [0.0, 0.5, 1.25, 2.0] {
            for eta in [0.1, 0.2] {
                let dm = lamb_dicke_boundary(r, eta, 1.0);
                let p = ModelParams::with_squeezing(1, 4, dm, r);
                let ld = lamb_dicke_eta(&derive_squeeze_params(&p).unwrap()).unwrap();
                assert_abs_diff_eq!(ld.eta[0], eta, epsilon = 1e-9);
            }
        }
        // η = 0.1 needs twice the detuning of η = 0.2 and grows ~e^{3r}
        let lo = lamb_dicke_boundary(2.0, 0.2, 1.0);
        let hi = lamb_dicke_boundary(2.0, 0.1, 1.0);
        assert_abs_diff_eq!(hi / lo, 2.0, epsilon = 1e-12);
        assert!(lamb_dicke_boundary(3.0, 0.2, 1.0) > 10.0 * lamb_dicke_boundary(2.0, 0.2, 1.0));
    }

    #[test]
    fn spin_spin_enhancement_two_orders_at_r_1_33() {
        assert_abs_diff_eq!(ising_strength(0.0, 1.0, 2.5), 0.1, epsilon = 1e-15);
        assert!(spin_spin_enhancement(1.33) > 100.0);
        assert!(spin_spin_enhancement(1.1) < 100.0);
    }

    #[test]
    fn cooperativity_examples() {
        let c0 = cooperativity(1.0, 0.1, 0.1, 0.0, 0.1).unwrap();
        assert_abs_diff_eq!(c0.ratio, 0.25, epsilon = 1e-15);
        let c3 = cooperativity(1.0, 0.1, 0.1, 3.0, 0.1).unwrap();
        assert_abs_diff_eq!(c3.ratio, 6f64.exp() / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c3.ratio, 100.857, epsilon = 1e-3);
        assert!(cooperativity(1.0, 0.0, 0.1, 0.0, 0.1).is_err());
    }

    #[test]
    fn device_cooperativity_exceeds_a_million() {
        use std::f64::consts::TAU;
        let lambda = TAU * 100e3;
        let gamma_m = TAU * 1e3;
        let gamma_nv = 1e3; // T2 ~ 1 ms
        let c = cooperativity(lambda, gamma_m, gamma_nv, 5.0, gamma_m).unwrap();
        assert!(c.squeezed > 1e6, "C_S = {}", c.squeezed);
    }

    #[test]
    fn engineered_dissipation_limits() {
        let e = engineered_dissipation(0.0, 2.0, 4.0).unwrap();
        assert_eq!(e.r_prime, 0.0);
        assert_abs_diff_eq!(e.gamma_m_s, 4.0, epsilon = 1e-15);
        let e = engineered_dissipation(1.999_999, 2.0, 4.0).unwrap();
        assert!(e.gamma_m_s < 1e-5 && e.r_prime > 7.0);
        assert!(matches!(engineered_dissipation(2.0, 2.0, 1.0), Err(Error::NoSqueezedFixedPoint { .. })));
        // r' = 1.45 needs D+/D- = tanh 1.45
        let ratio = 1.45f64.tanh();
        assert_abs_diff_eq!(ratio, 0.8957, epsilon = 1e-4);
        let e = engineered_dissipation(ratio, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(e.r_prime, 1.45, epsilon = 1e-12);
    }

    #[test]
    fn validation_catches_bad_lists() {
        let mut p = ModelParams::homogeneous(2, 4, 1.0, 0.0);
        p.lambda.pop();
        assert!(p.validate().is_err());
        let p = ModelParams::homogeneous(2, 4, 1.0, 0.0).with_dissipation(-0.1, 0.0);
        assert!(p.validate().is_err());
    }

    proptest! {
        #[test]
        // atanh amplifies rounding by cosh²(2r); beyond |r| ≈ 2.5 the round
        // trip can no longer hold to 1e-12 in double precision
        fn squeeze_roundtrip(r in -2.5f64..2.5, delta_m in 0.1f64..100.0) {
            let p = ModelParams::with_squeezing(1, 4, delta_m, r);
            let s = derive_squeeze_params(&p).unwrap();
            prop_assert!((s.r - r).abs() < 1e-12);
            prop_assert!((s.delta_m_eff - delta_m / (2.0 * s.r).cosh()).abs() <= 1e-12 * delta_m);
            prop_assert!((s.lambda_eff[0] - s.r.exp() / 2.0).abs() <= 1e-12 * s.lambda_eff[0]);
        }

        #[test]
        fn ising_identity_holds(r in 0.0f64..5.0, delta_m in 0.5f64..100.0, lambda in 0.1f64..3.0) {
            let p = ModelParams::with_squeezing(1, 4, delta_m, r).with_couplings(vec![lambda]);
            let s = derive_squeeze_params(&p).unwrap();
            let lhs = s.lambda_eff[0].powi(2) / s.delta_m_eff;
            let rhs = ising_strength(s.r, lambda, delta_m);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        }
    }
}
