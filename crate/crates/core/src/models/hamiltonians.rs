//! Hamiltonian builders for the lab-rotating frame, the squeezed frame and
//! the dispersive (phonon-eliminated) spin models.
//!
//! Builders return the literal operator sums, including identity-proportional
//! pieces. Callers that evolve states drop those with
//! [`Operator::without_constant`](crate::hilbert::Operator::without_constant).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hilbert::{
    c, collective_spin, embed, fock_annihilation, pauli, Axis, Operator, PauliAxis, SpaceSignature, SpinConvention,
    C64, I,
};
use crate::models::params::{lamb_dicke_eta, ModelParams, SqueezeParams, LAMB_DICKE_LIMIT};

/// Ladder and Pauli operators already embedded in one boson ⊗ spins space.
pub struct ModeOperators {
    pub signature: SpaceSignature,
    pub a: Operator,
    pub a_dag: Operator,
    pub number: Operator,
    pub sx: Vec<Operator>,
    pub sz: Vec<Operator>,
    pub sp: Vec<Operator>,
    pub sm: Vec<Operator>,
}

impl ModeOperators {
    pub fn new(signature: &SpaceSignature) -> Result<Self> {
        let n_max = signature
            .n_max()
            .ok_or_else(|| Error::InvalidParameter(format!("signature {signature} has no phonon register")))?;
        let a = embed(&fock_annihilation(n_max)?, 0, signature)?;
        let a_dag = a.dagger();
        let number = &a_dag * &a;
        let spin = |axis| -> Result<Vec<Operator>> {
            (0..signature.n_spins()).map(|j| embed(&pauli(axis), signature.spin_slot(j), signature)).collect()
        };
        Ok(Self {
            signature: signature.clone(),
            sx: spin(PauliAxis::X)?,
            sz: spin(PauliAxis::Z)?,
            sp: spin(PauliAxis::Plus)?,
            sm: spin(PauliAxis::Minus)?,
            a,
            a_dag,
            number,
        })
    }

    /// a + a†
    pub fn position(&self) -> Operator {
        &self.a + &self.a_dag
    }
}

fn checked_signature(params: &ModelParams, signature: &SpaceSignature) -> Result<()> {
    params.validate()?;
    let expected = SpaceSignature::boson_spins(params.n_max, params.n_spins)?;
    expected.check_same(signature)
}

/// δ_m a†a + Σ_j [δ_dg^j/2 σ_z^j + λ^j (a†σ_−^j + aσ_+^j)] − Ω_p/2 (a†² + a²)
pub fn build_total_hamiltonian(params: &ModelParams, signature: &SpaceSignature) -> Result<Operator> {
    checked_signature(params, signature)?;
    let ops = ModeOperators::new(signature)?;
    let mut h = ops.number.scale_re(params.delta_m);
    let pump = &(&ops.a_dag * &ops.a_dag) + &(&ops.a * &ops.a);
    h = &h - &pump.scale_re(params.omega_p / 2.0);
    for j in 0..params.n_spins {
        h = &h + &ops.sz[j].scale_re(params.delta_dg[j] / 2.0);
        let exchange = &(&ops.a_dag * &ops.sm[j]) + &(&ops.a * &ops.sp[j]);
        h = &h + &exchange.scale_re(params.lambda[j]);
    }
    Ok(h)
}

fn check_squeeze(params: &ModelParams, squeeze: &SqueezeParams) -> Result<()> {
    if squeeze.lambda_eff.len() != params.n_spins {
        return Err(Error::InvalidParameter(format!(
            "squeeze parameters carry {} couplings for {} spins",
            squeeze.lambda_eff.len(),
            params.n_spins
        )));
    }
    Ok(())
}

/// Δ_m a†a + Σ_j [δ_dg^j/2 σ_z^j + λ_eff^j (a† + a) σ_x^j]
pub fn build_squeezed_rabi(
    params: &ModelParams,
    squeeze: &SqueezeParams,
    signature: &SpaceSignature,
) -> Result<Operator> {
    checked_signature(params, signature)?;
    check_squeeze(params, squeeze)?;
    let ops = ModeOperators::new(signature)?;
    let x = ops.position();
    let mut h = ops.number.scale_re(squeeze.delta_m_eff);
    for j in 0..params.n_spins {
        h = &h + &ops.sz[j].scale_re(params.delta_dg[j] / 2.0);
        h = &h + &(&x * &ops.sx[j]).scale_re(squeeze.lambda_eff[j]);
    }
    Ok(h)
}

/// Residual of the squeeze transform, Σ_j (λ^j e^{−r}/2)(a − a†)(σ_+^j − σ_−^j).
pub fn build_correction(params: &ModelParams, squeeze: &SqueezeParams, signature: &SpaceSignature) -> Result<Operator> {
    checked_signature(params, signature)?;
    check_squeeze(params, squeeze)?;
    let ops = ModeOperators::new(signature)?;
    let p = &ops.a - &ops.a_dag;
    let mut h = Operator::zeros(signature);
    for j in 0..params.n_spins {
        let flip = &ops.sp[j] - &ops.sm[j];
        h = &h + &(&p * &flip).scale_re(params.lambda[j] * (-squeeze.r).exp() / 2.0);
    }
    Ok(h)
}

/// Pairwise couplings Λ^{jk} = λ_eff^j λ_eff^k / Δ_m.
pub fn ising_couplings(squeeze: &SqueezeParams) -> Result<Vec<Vec<f64>>> {
    if squeeze.delta_m_eff <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "squeezed detuning must be positive, got {}",
            squeeze.delta_m_eff
        )));
    }
    Ok(squeeze
        .lambda_eff
        .iter()
        .map(|lj| squeeze.lambda_eff.iter().map(|lk| lj * lk / squeeze.delta_m_eff).collect())
        .collect())
}

/// Σ_{j,k} Λ^{jk} σ_x^j σ_x^k plus Σ_j δ_dg^j/2 σ_z^j on a spins-only register.
///
/// The j = k terms contribute the constant Σ_j Λ^{jj}. A warning is logged
/// when η_max exceeds the Lamb–Dicke limit.
pub fn build_ising(params: &ModelParams, squeeze: &SqueezeParams) -> Result<Operator> {
    params.validate()?;
    check_squeeze(params, squeeze)?;
    let lambda = ising_couplings(squeeze)?;
    let ld = lamb_dicke_eta(squeeze)?;
    if !ld.valid {
        log::warn!("eta_max = {:.3} exceeds {LAMB_DICKE_LIMIT}; the Ising reduction is not controlled", ld.eta_max);
    }
    let sig = SpaceSignature::spins(params.n_spins)?;
    let sx: Vec<Operator> = (0..params.n_spins).map(|j| embed(&pauli(PauliAxis::X), j, &sig)).collect::<Result<_>>()?;
    let mut h = Operator::zeros(&sig);
    for j in 0..params.n_spins {
        h = &h + &embed(&pauli(PauliAxis::Z), j, &sig)?.scale_re(params.delta_dg[j] / 2.0);
        for k in 0..params.n_spins {
            h = &h + &(&sx[j] * &sx[k]).scale_re(lambda[j][k]);
        }
    }
    Ok(h)
}

/// One-axis twisting Λ J_x² with J_x = Σσ_x.
pub fn build_oat(lambda_oat: f64, n_spins: usize) -> Result<Operator> {
    if n_spins < 2 {
        return Err(Error::InvalidParameter(format!("one-axis twisting needs ≥ 2 spins, got {n_spins}")));
    }
    let jx = collective_spin(Axis::X, n_spins, SpinConvention::PauliSum)?;
    Ok((&jx * &jx).scale_re(lambda_oat))
}

type Coefficient = Arc<dyn Fn(f64) -> C64 + Send + Sync>;

/// Sum of constant operators with scalar time-dependent weights.
#[derive(Clone)]
pub struct TimeDependentHamiltonian {
    signature: SpaceSignature,
    terms: Vec<(Operator, Coefficient)>,
    labels: Vec<String>,
}

impl fmt::Debug for TimeDependentHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimeDependentHamiltonian")
            .field("signature", &self.signature)
            .field("terms", &self.labels)
            .finish()
    }
}

impl TimeDependentHamiltonian {
    pub fn new(signature: &SpaceSignature) -> Self {
        Self { signature: signature.clone(), terms: Vec::new(), labels: Vec::new() }
    }

    pub fn push<F>(&mut self, label: impl Into<String>, op: Operator, coefficient: F) -> Result<()>
    where
        F: Fn(f64) -> C64 + Send + Sync + 'static,
    {
        self.signature.check_same(op.signature())?;
        self.terms.push((op, Arc::new(coefficient)));
        self.labels.push(label.into());
        Ok(())
    }

    pub fn push_constant(&mut self, label: impl Into<String>, op: Operator) -> Result<()> {
        self.push(label, op, |_| C64::new(1.0, 0.0))
    }

    pub fn signature(&self) -> &SpaceSignature {
        &self.signature
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn operators(&self) -> impl Iterator<Item = &Operator> {
        self.terms.iter().map(|(op, _)| op)
    }

    /// Coefficient values at time `t`, in term order.
    pub fn coefficients(&self, t: f64) -> Vec<C64> {
        self.terms.iter().map(|(_, f)| f(t)).collect()
    }

    pub fn evaluate(&self, t: f64) -> Operator {
        let mut h = Operator::zeros(&self.signature);
        for (op, f) in &self.terms {
            h = &h + &op.scale(f(t));
        }
        h
    }

    /// Largest Hermiticity defect over the sample times.
    pub fn hermiticity_defect(&self, times: &[f64]) -> f64 {
        times.iter().map(|&t| self.evaluate(t).hermiticity_defect()).fold(0.0, f64::max)
    }
}

/// Time profile of the squeezing parameter r(t).
pub trait SqueezeSchedule: Send + Sync {
    fn r(&self, t: f64) -> f64;

    /// dr/dt; central difference unless overridden.
    fn r_dot(&self, t: f64) -> f64 {
        let h = 1e-5 * (1.0 + t.abs());
        (self.r(t + h) - self.r(t - h)) / (2.0 * h)
    }
}

/// r(t) = r_max tanh(rate·t/2); the adiabatic ramp used for cat states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TanhRamp {
    pub r_max: f64,
    pub rate: f64,
}

impl SqueezeSchedule for TanhRamp {
    fn r(&self, t: f64) -> f64 {
        self.r_max * (self.rate * t / 2.0).tanh()
    }

    fn r_dot(&self, t: f64) -> f64 {
        let ch = (self.rate * t / 2.0).cosh();
        self.r_max * self.rate / (2.0 * ch * ch)
    }
}

/// Constant squeezing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantSqueeze(pub f64);

impl SqueezeSchedule for ConstantSqueeze {
    fn r(&self, _t: f64) -> f64 {
        self.0
    }

    fn r_dot(&self, _t: f64) -> f64 {
        0.0
    }
}

/// Any closure r(t); its derivative comes from central differences.
pub struct FnSchedule<F>(pub F);

impl<F: Fn(f64) -> f64 + Send + Sync> SqueezeSchedule for FnSchedule<F> {
    fn r(&self, t: f64) -> f64 {
        (self.0)(t)
    }
}

/// Which squeezed-frame pieces a time-dependent model keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrameTerms {
    /// Rabi part only.
    Ideal,
    /// Rabi part plus the e^{−r} correction and the ṙ term.
    Full,
}

/// Squeezed-frame Hamiltonian for a slowly varying pump, with δ_m fixed and
/// r = r(t): Δ_m(t) = δ_m/cosh 2r(t), λ_eff^j(t) = λ^j e^{r(t)}/2, correction
/// prefactor λ^j e^{−r(t)}/2 and H_V = (iṙ/2)(a² − a†²).
pub fn build_time_dependent(
    params: &ModelParams,
    schedule: Arc<dyn SqueezeSchedule>,
    signature: &SpaceSignature,
    terms: FrameTerms,
) -> Result<TimeDependentHamiltonian> {
    checked_signature(params, signature)?;
    let r0 = schedule.r(0.0);
    if !r0.is_finite() || !schedule.r_dot(0.0).is_finite() {
        return Err(Error::InvalidParameter(format!("squeezing schedule is not real-valued at t = 0 (r = {r0})")));
    }
    let ops = ModeOperators::new(signature)?;
    let x = ops.position();
    let p = &ops.a - &ops.a_dag;
    let mut h = TimeDependentHamiltonian::new(signature);

    let delta_m = params.delta_m;
    let s = schedule.clone();
    h.push("delta_m_eff(t) a†a", ops.number.clone(), move |t| c(delta_m / (2.0 * s.r(t)).cosh()))?;
    for j in 0..params.n_spins {
        if params.delta_dg[j] != 0.0 {
            h.push_constant(format!("delta_dg/2 sz[{j}]"), ops.sz[j].scale_re(params.delta_dg[j] / 2.0))?;
        }
        let lam = params.lambda[j];
        let s = schedule.clone();
        h.push(format!("lambda_eff(t) x sx[{j}]"), &x * &ops.sx[j], move |t| c(lam * s.r(t).exp() / 2.0))?;
        if terms == FrameTerms::Full {
            let s = schedule.clone();
            let flip = &ops.sp[j] - &ops.sm[j];
            h.push(format!("correction[{j}]"), &p * &flip, move |t| c(lam * (-s.r(t)).exp() / 2.0))?;
        }
    }
    if terms == FrameTerms::Full {
        let s = schedule.clone();
        let two_phonon = &(&ops.a * &ops.a) - &(&ops.a_dag * &ops.a_dag);
        h.push("i r_dot/2 (a² − a†²)", two_phonon, move |t| I * (s.r_dot(t) / 2.0))?;
    }
    Ok(h)
}

/// λ_eff (a† e^{iΔ_m t} + a e^{−iΔ_m t}) J_x in the frame rotating with the
/// free phonon; requires identical spins with δ_dg = 0.
pub fn build_interaction_picture(
    params: &ModelParams,
    squeeze: &SqueezeParams,
    signature: &SpaceSignature,
) -> Result<TimeDependentHamiltonian> {
    checked_signature(params, signature)?;
    check_squeeze(params, squeeze)?;
    let first = squeeze.lambda_eff[0];
    if squeeze.lambda_eff.iter().any(|&l| (l - first).abs() > 1e-15 * first.abs().max(1.0)) {
        return Err(Error::Unsupported("interaction picture needs homogeneous couplings".into()));
    }
    if params.delta_dg.iter().any(|&d| d != 0.0) {
        return Err(Error::Unsupported("interaction picture needs delta_dg = 0".into()));
    }
    let ops = ModeOperators::new(signature)?;
    let mut jx = Operator::zeros(signature);
    for sx in &ops.sx {
        jx = &jx + sx;
    }
    let delta = squeeze.delta_m_eff;
    let mut h = TimeDependentHamiltonian::new(signature);
    h.push("a† Jx e^{i Δ t}", &ops.a_dag * &jx, move |t| C64::from_polar(first, delta * t))?;
    h.push("a Jx e^{-i Δ t}", &ops.a * &jx, move |t| C64::from_polar(first, -delta * t))?;
    Ok(h)
}
