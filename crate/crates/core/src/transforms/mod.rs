//! Frame changes and target states.
//!
//! A [`FrameTransform`] stores its unitary explicitly. Squeeze and polaron
//! unitaries are exponentiated through the eigendecomposition of their
//! Hermitian generator; [`expm::expm`] is the independent Padé route.

pub mod expm;
pub mod quadrature;
mod states;

use std::fmt;

use crate::error::{Error, Result};
use crate::hilbert::{embed, fock_annihilation, CMatrix, Operator, SpaceSignature};
use crate::models::{build_squeezed_rabi, ising_couplings, ModeOperators, ModelParams, SqueezeParams};

pub use states::{
    cat_alpha, cat_alpha_constant, coherent_state, ghz_target, target_cat_state, COHERENT_TAIL_TOLERANCE,
};

/// What a [`FrameTransform`] implements.
#[derive(Clone, Debug, PartialEq)]
pub enum FrameLabel {
    /// exp[r(a² − a†²)/2]
    Squeeze(f64),
    /// exp[Σ_k η_k (a† − a) σ_x^k]
    Polaron(Vec<f64>),
}

impl fmt::Display for FrameLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameLabel::Squeeze(r) => write!(f, "squeeze(r = {r})"),
            FrameLabel::Polaron(eta) => write!(f, "polaron(eta = {eta:?})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FrameTransform {
    unitary: Operator,
    label: FrameLabel,
}

impl FrameTransform {
    pub fn unitary(&self) -> &Operator {
        &self.unitary
    }

    pub fn label(&self) -> &FrameLabel {
        &self.label
    }

    pub fn signature(&self) -> &SpaceSignature {
        self.unitary.signature()
    }

    /// Max-entry deviation of U†U from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        expm::unitarity_defect(self.unitary.matrix())
    }

    /// The same phonon-only transform acting on a larger boson ⊗ spins space.
    pub fn lift(&self, signature: &SpaceSignature) -> Result<Self> {
        if self.signature() == signature {
            return Ok(self.clone());
        }
        if self.signature().len() != 1 || !self.signature().has_boson() {
            return Err(Error::Unsupported(format!("only phonon-only transforms can be lifted, not {}", self.label)));
        }
        Ok(Self { unitary: embed(&self.unitary, 0, signature)?, label: self.label.clone() })
    }
}

/// Fock levels on which a truncated squeeze still matches the untruncated
/// one: the squeeze stretches level n out to about n e^{2|r|}, and the cutoff
/// reflects whatever reaches it.
pub fn squeeze_interior_levels(r: f64, n_max: usize) -> usize {
    (0.35 * (n_max + 1) as f64 * (-2.0 * r.abs()).exp()).floor() as usize
}

/// exp[r(a² − a†²)/2] on a phonon register truncated at `n_max`.
///
/// Logs a warning when sinh²r > n_max/4 and fails when sinh²r > n_max/2.
pub fn squeeze_operator(r: f64, n_max: usize) -> Result<FrameTransform> {
    if !r.is_finite() {
        return Err(Error::InvalidParameter(format!("squeezing parameter must be finite, got {r}")));
    }
    let occupation = r.sinh().powi(2);
    let cap = n_max as f64;
    if occupation > cap / 2.0 {
        return Err(Error::Truncation(format!(
            "sinh²r = {occupation:.3} exceeds n_max/2 = {:.1}; raise n_max",
            cap / 2.0
        )));
    }
    if occupation > cap / 4.0 {
        log::warn!(
            "sinh²r = {occupation:.3} exceeds n_max/4; squeeze transform is only trustworthy on low Fock levels"
        );
    }
    let a = fock_annihilation(n_max)?;
    let a_dag = a.dagger();
    let generator = (&(&a * &a) - &(&a_dag * &a_dag)).scale_re(r / 2.0);
    let u = expm::expm_anti_hermitian(generator.matrix())?;
    Ok(FrameTransform { unitary: Operator::new(a.signature().clone(), u)?, label: FrameLabel::Squeeze(r) })
}

/// exp[Σ_k η_k (a† − a) σ_x^k], which displaces the phonon by −η_k σ_x^k:
/// U a U† = a − Σ_k η_k σ_x^k.
pub fn polaron(etas: &[f64], signature: &SpaceSignature) -> Result<FrameTransform> {
    if etas.len() != signature.n_spins() {
        return Err(Error::InvalidParameter(format!(
            "{} Lamb–Dicke parameters for {} spins",
            etas.len(),
            signature.n_spins()
        )));
    }
    let ops = ModeOperators::new(signature)?;
    let displacement = &ops.a_dag - &ops.a;
    let mut generator = Operator::zeros(signature);
    for (eta, sx) in etas.iter().zip(&ops.sx) {
        generator = &generator + &(&displacement * sx).scale_re(*eta);
    }
    let u = expm::expm_anti_hermitian(generator.matrix())?;
    Ok(FrameTransform { unitary: Operator::new(signature.clone(), u)?, label: FrameLabel::Polaron(etas.to_vec()) })
}

/// F H F†; phonon-only transforms are lifted onto a composite `h`.
pub fn conjugate(h: &Operator, frame: &FrameTransform) -> Result<Operator> {
    let frame = if frame.signature() != h.signature() && frame.signature().len() == 1 && h.signature().has_boson() {
        frame.lift(h.signature())?
    } else {
        frame.clone()
    };
    h.signature().check_same(frame.signature())?;
    let u = frame.unitary.matrix();
    Operator::new(h.signature().clone(), u * h.matrix() * u.adjoint())
}

/// Largest Lamb–Dicke parameter for which the expansion is trusted.
pub const SCHRIEFFER_WOLFF_MAX_ETA: f64 = 0.3;

/// Residuals of the polaron-frame expansion at η and η/2.
#[derive(Clone, Debug, PartialEq)]
pub struct SchriefferWolffReport {
    /// Largest η_k = λ_eff^k/Δ_m of the input.
    pub eta: f64,
    /// Phonon levels kept in the low-energy projection.
    pub phonon_window: usize,
    pub residual: f64,
    pub residual_half: f64,
    /// residual / residual_half; `None` when both sit at round-off level.
    pub ratio: Option<f64>,
    /// Residual magnitude treated as round-off.
    pub noise_floor: f64,
    /// Whether `ratio` lies within `order_tolerance` of 8.
    pub cubic: bool,
}

/// Phonon-number window, in levels, on which residuals are measured.
fn phonon_window(n_max: usize) -> usize {
    (n_max / 4).max(1)
}

/// Residual ‖P [U H U† − (Δ_m a†a + Σ δ_dg/2 σ_z − Σ_{jk} λ_eff^j λ_eff^k/Δ_m σ_x^j σ_x^k)] P‖
/// with P the projector on the lowest phonon levels.
fn polaron_residual(params: &ModelParams, squeeze: &SqueezeParams) -> Result<(f64, f64)> {
    let sig = SpaceSignature::boson_spins(params.n_max, params.n_spins)?;
    let h = build_squeezed_rabi(params, squeeze, &sig)?;
    let etas: Vec<f64> = squeeze.lambda_eff.iter().map(|l| l / squeeze.delta_m_eff).collect();
    let transformed = conjugate(&h, &polaron(&etas, &sig)?)?;

    let ops = ModeOperators::new(&sig)?;
    let lambda = ising_couplings(squeeze)?;
    let mut reference = ops.number.scale_re(squeeze.delta_m_eff);
    for (j, row) in lambda.iter().enumerate() {
        reference = &reference + &ops.sz[j].scale_re(params.delta_dg[j] / 2.0);
        for (k, &l) in row.iter().enumerate() {
            reference = &reference - &(&ops.sx[j] * &ops.sx[k]).scale_re(l);
        }
    }
    let residual = transformed.checked_sub(&reference)?;
    let kept = (phonon_window(params.n_max) + 1) * (1 << params.n_spins);
    let block = |m: &CMatrix| m.view((0, 0), (kept, kept)).into_owned();
    let scale = crate::hilbert::spectral_norm(&block(h.matrix()));
    Ok((crate::hilbert::spectral_norm(&block(residual.matrix())), scale))
}

/// Compares the exactly conjugated squeezed-frame Rabi Hamiltonian with its
/// second-order Ising form at the given couplings and at half of them.
///
/// `order_tolerance` is the admitted distance of the η → η/2 residual ratio
/// from the cubic value 8.
pub fn schrieffer_wolff_check(
    params: &ModelParams,
    squeeze: &SqueezeParams,
    order_tolerance: f64,
) -> Result<SchriefferWolffReport> {
    params.validate()?;
    if squeeze.lambda_eff.len() != params.n_spins || squeeze.delta_m_eff <= 0.0 {
        return Err(Error::InvalidParameter("squeeze parameters do not match the model".into()));
    }
    let eta = squeeze.lambda_eff.iter().fold(0.0_f64, |m, l| m.max(l.abs())) / squeeze.delta_m_eff;
    if eta > SCHRIEFFER_WOLFF_MAX_ETA {
        return Err(Error::InvalidParameter(format!(
            "eta = {eta:.3} exceeds {SCHRIEFFER_WOLFF_MAX_ETA}; the expansion is not trustworthy"
        )));
    }
    let (residual, scale) = polaron_residual(params, squeeze)?;
    let half_params = params.clone().with_couplings(params.lambda.iter().map(|l| l / 2.0).collect());
    let half_squeeze = SqueezeParams {
        r: squeeze.r,
        delta_m_eff: squeeze.delta_m_eff,
        lambda_eff: squeeze.lambda_eff.iter().map(|l| l / 2.0).collect(),
    };
    let (residual_half, _) = polaron_residual(&half_params, &half_squeeze)?;
    let noise_floor = 1e-10 * scale.max(1.0);
    let ratio = (residual_half > noise_floor).then(|| residual / residual_half);
    Ok(SchriefferWolffReport {
        eta,
        phonon_window: phonon_window(params.n_max),
        residual,
        residual_half,
        ratio,
        noise_floor,
        cubic: ratio.is_some_and(|q| (q - 8.0).abs() <= order_tolerance),
    })
}

/// Coefficient c of σ_x^j σ_x^k in the phonon-vacuum block of `op`,
/// tr(σ_x^j σ_x^k ⟨0|op|0⟩) / 2^N. Both orderings of the pair contribute.
pub fn vacuum_pair_coefficient(op: &Operator, j: usize, k: usize) -> Result<f64> {
    let sig = op.signature();
    if !sig.has_boson() || j == k || j >= sig.n_spins() || k >= sig.n_spins() {
        return Err(Error::InvalidParameter(format!("no distinct spin pair ({j}, {k}) on {sig}")));
    }
    let ops = ModeOperators::new(sig)?;
    let pair = &ops.sx[j] * &ops.sx[k];
    let spin_dim = 1usize << sig.n_spins();
    let vac = |m: &CMatrix| m.view((0, 0), (spin_dim, spin_dim)).into_owned();
    Ok((vac(pair.matrix()) * vac(op.matrix())).trace().re / spin_dim as f64)
}

#[cfg(test)]
mod tests;
