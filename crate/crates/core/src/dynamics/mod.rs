//! Schrödinger and Lindblad integration with observable recording.
//!
//! The Lindblad right-hand side is evaluated as
//! `ρ̇ = −i(Kρ − (Kρ)†) + Σ γ L ρ L†` with the non-Hermitian generator
//! `K = H − (i/2) Σ γ L†L`, using sparse products against the dense ρ.

mod integrator;
mod sparse;

use crate::error::{Error, Result};
use crate::hilbert::{
    expectation_raw, min_eigenvalue, CMatrix, CVector, Operator, QuantumState, SpaceSignature, StateData, C64, SPIN_D,
    SPIN_G,
};
use crate::models::TimeDependentHamiltonian;

pub use integrator::{Method, StepStats};
use sparse::Csr;

/// Default cap for [`choose_truncation`].
pub const TRUNCATION_CAP: usize = 256;
/// Default drift tolerance for trace (Lindblad) and norm (Schrödinger).
pub const DRIFT_TOLERANCE: f64 = 1e-8;
/// Largest density dimension for which the final minimum eigenvalue is
/// computed.
const MIN_EIGEN_DIM_LIMIT: usize = 1024;
const HERMITIAN_TOLERANCE: f64 = 1e-10;
/// Tolerance scale applied to adaptive state-vector runs.
pub const VECTOR_TOLERANCE_FACTOR: f64 = 1e-2;

/// Dissipator `rate · 𝒟[operator]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CollapseChannel {
    pub operator: Operator,
    pub rate: f64,
}

impl CollapseChannel {
    pub fn new(operator: Operator, rate: f64) -> Result<Self> {
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParameter(format!("collapse rate must be ≥ 0, got {rate}")));
        }
        Ok(Self { operator, rate })
    }
}

/// Named expectation value recorded at every output time.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    pub name: String,
    pub operator: Operator,
}

impl Observable {
    pub fn new(name: impl Into<String>, operator: Operator) -> Self {
        Self { name: name.into(), operator }
    }
}

/// Either a constant operator or a sum with time-dependent weights.
#[derive(Clone, Copy, Debug)]
pub enum Hamiltonian<'a> {
    Static(&'a Operator),
    TimeDependent(&'a TimeDependentHamiltonian),
}

impl<'a> From<&'a Operator> for Hamiltonian<'a> {
    fn from(op: &'a Operator) -> Self {
        Hamiltonian::Static(op)
    }
}

impl<'a> From<&'a TimeDependentHamiltonian> for Hamiltonian<'a> {
    fn from(h: &'a TimeDependentHamiltonian) -> Self {
        Hamiltonian::TimeDependent(h)
    }
}

impl Hamiltonian<'_> {
    pub fn signature(&self) -> &SpaceSignature {
        match self {
            Hamiltonian::Static(op) => op.signature(),
            Hamiltonian::TimeDependent(h) => h.signature(),
        }
    }

    fn check_hermitian(&self, times: &[f64]) -> Result<()> {
        let defect = match self {
            Hamiltonian::Static(op) => op.hermiticity_defect(),
            Hamiltonian::TimeDependent(h) => {
                let first = times[0];
                let last = times[times.len() - 1];
                h.hermiticity_defect(&[first, 0.5 * (first + last), last])
            }
        };
        if defect > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian(defect));
        }
        Ok(())
    }
}

/// Integration settings shared by both evolution routines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolveOptions {
    pub method: Method,
    /// Allowed |tr ρ(t) − tr ρ(0)| or |‖ψ(t)‖ − ‖ψ(0)‖|.
    pub drift_tolerance: f64,
    /// Keep the state at every output time.
    pub record_states: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { method: Method::default(), drift_tolerance: DRIFT_TOLERANCE, record_states: false }
    }
}

impl EvolveOptions {
    pub fn fixed_step(dt: f64) -> Self {
        Self { method: Method::FixedStep { dt }, ..Self::default() }
    }

    pub fn recording(mut self) -> Self {
        self.record_states = true;
        self
    }
}

/// Health indicators of one integration run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    /// Largest trace (density) or norm (vector) deviation from the start.
    pub max_drift: f64,
    /// Largest combined population of the two highest Fock levels; `None`
    /// without a phonon register.
    pub max_tail_population: Option<f64>,
    /// Smallest eigenvalue of the final density matrix, when computed.
    pub final_min_eigenvalue: Option<f64>,
    pub steps: StepStats,
}

/// Output of one run: grid, observable series and final state.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub observables: Vec<(String, Vec<C64>)>,
    pub states: Option<Vec<QuantumState>>,
    pub final_state: QuantumState,
    pub diagnostics: Diagnostics,
}

impl Trajectory {
    pub fn series(&self, name: &str) -> Option<&[C64]> {
        self.observables.iter().find(|(n, _)| n == name).map(|(_, s)| s.as_slice())
    }

    /// Real parts of a series.
    pub fn real_series(&self, name: &str) -> Option<Vec<f64>> {
        self.series(name).map(|s| s.iter().map(|z| z.re).collect())
    }
}

/// Pattern-aligned sparse generator `Σ_k c_k(t) A_k + B`.
struct Generator<'a> {
    hamiltonian: Hamiltonian<'a>,
    terms: Vec<Csr>,
    base: Csr,
    current: Csr,
    coefficients: Vec<C64>,
}

impl<'a> Generator<'a> {
    fn new(hamiltonian: Hamiltonian<'a>, base: &CMatrix) -> Self {
        let dense: Vec<&CMatrix> = match hamiltonian {
            Hamiltonian::Static(op) => vec![op.matrix()],
            Hamiltonian::TimeDependent(h) => h.operators().map(|o| o.matrix()).collect(),
        };
        let mut all = dense.clone();
        all.push(base);
        let mut csrs = Csr::with_pattern_of(&all);
        let base = csrs.pop().expect("base is last");
        let current = base.clone();
        let mut g = Self { hamiltonian, terms: csrs, base, current, coefficients: Vec::new() };
        g.assemble(0.0, true);
        g
    }

    fn assemble(&mut self, t: f64, force: bool) {
        let coefficients = match self.hamiltonian {
            Hamiltonian::Static(_) => {
                if !force {
                    return;
                }
                vec![C64::new(1.0, 0.0)]
            }
            Hamiltonian::TimeDependent(h) => h.coefficients(t),
        };
        self.current.vals.copy_from_slice(&self.base.vals);
        for (term, c) in self.terms.iter().zip(&coefficients) {
            for (v, a) in self.current.vals.iter_mut().zip(&term.vals) {
                *v += a * c;
            }
        }
        self.coefficients = coefficients;
    }
}

fn check_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidParameter("time grid is empty".into()));
    }
    Ok(())
}

/// Indices of basis states whose phonon digit is one of the top two levels.
fn tail_indices(signature: &SpaceSignature) -> Option<Vec<usize>> {
    let n_max = signature.n_max()?;
    let stride = signature.total_dim() / (n_max + 1);
    let low = n_max.saturating_sub(1);
    Some((low * stride..(n_max + 1) * stride).collect())
}

/// Schrödinger evolution `ψ̇ = −iHψ`.
///
/// Adaptive runs tighten both tolerances by [`VECTOR_TOLERANCE_FACTOR`]:
/// the norm is a quadratic invariant that Runge–Kutta steps do not conserve,
/// whereas the trace of ρ is linear and conserved to rounding.
pub fn evolve_unitary<'a>(
    hamiltonian: impl Into<Hamiltonian<'a>>,
    psi0: &QuantumState,
    times: &[f64],
    observables: &[Observable],
    options: &EvolveOptions,
) -> Result<Trajectory> {
    let hamiltonian = hamiltonian.into();
    check_grid(times)?;
    let signature = hamiltonian.signature().clone();
    signature.check_same(psi0.signature())?;
    for o in observables {
        signature.check_same(o.operator.signature())?;
    }
    let psi = psi0.as_vector().ok_or_else(|| Error::InvalidState("unitary evolution needs a state vector".into()))?;
    hamiltonian.check_hermitian(times)?;

    let d = signature.total_dim();
    let zero = CMatrix::zeros(d, d);
    let mut gen = Generator::new(hamiltonian, &zero);
    let tail = tail_indices(&signature);
    let norm0 = psi.norm();
    let mut recorder = Recorder::new(observables, times.len(), options.record_states);
    let mut diagnostics = Diagnostics { max_tail_population: tail.as_ref().map(|_| 0.0), ..Diagnostics::default() };
    let minus_i = C64::new(0.0, -1.0);

    let stats = integrator::integrate(
        |t, y, dy| {
            gen.assemble(t, false);
            gen.current.mul_vec(y, dy);
            for v in dy.iter_mut() {
                *v *= minus_i;
            }
        },
        psi.as_slice().to_vec(),
        times,
        options.method.for_state_vector(),
        |_| {},
        |_, _, y| {
            let v = CVector::from_column_slice(y);
            let drift = (v.norm() - norm0).abs();
            diagnostics.max_drift = diagnostics.max_drift.max(drift);
            if let (Some(idx), Some(worst)) = (&tail, diagnostics.max_tail_population.as_mut()) {
                let p: f64 = idx.iter().map(|&i| v[i].norm_sqr()).sum();
                *worst = worst.max(p);
            }
            recorder.record(&signature, StateData::Vector(v));
            Ok(())
        },
    )?;
    diagnostics.steps = stats;
    finish(recorder, signature, times, diagnostics, options, "norm")
}

/// Lindblad evolution `ρ̇ = −i[H, ρ] + Σ γ 𝒟[L]ρ`.
pub fn evolve_lindblad<'a>(
    hamiltonian: impl Into<Hamiltonian<'a>>,
    channels: &[CollapseChannel],
    rho0: &QuantumState,
    times: &[f64],
    observables: &[Observable],
    options: &EvolveOptions,
) -> Result<Trajectory> {
    let hamiltonian = hamiltonian.into();
    check_grid(times)?;
    let signature = hamiltonian.signature().clone();
    signature.check_same(rho0.signature())?;
    for o in observables {
        signature.check_same(o.operator.signature())?;
    }
    for ch in channels {
        signature.check_same(ch.operator.signature())?;
        if !(ch.rate >= 0.0 && ch.rate.is_finite()) {
            return Err(Error::InvalidParameter(format!("collapse rate must be ≥ 0, got {}", ch.rate)));
        }
    }
    hamiltonian.check_hermitian(times)?;

    let d = signature.total_dim();
    let mut decay = CMatrix::zeros(d, d);
    // diagonal channels act as ρ_ik ↦ ρ_ik Σ_c γ_c l_c,i conj(l_c,k)
    let mut weights: Option<Vec<C64>> = None;
    let mut active: Vec<(Csr, f64)> = Vec::new();
    for ch in channels.iter().filter(|ch| ch.rate > 0.0) {
        let l = ch.operator.matrix();
        decay += l.adjoint() * l * C64::new(0.0, -0.5 * ch.rate);
        if is_diagonal(l) {
            let w = weights.get_or_insert_with(|| vec![C64::default(); d * d]);
            for k in 0..d {
                for i in 0..d {
                    w[i + k * d] += l[(i, i)] * l[(k, k)].conj() * ch.rate;
                }
            }
        } else {
            active.push((Csr::from_dense(l), ch.rate));
        }
    }
    let mut gen = Generator::new(hamiltonian, &decay);

    let rho = rho0.density_matrix();
    let trace0 = rho.trace().re;
    let tail = tail_indices(&signature);
    let mut recorder = Recorder::new(observables, times.len(), options.record_states);
    let mut diagnostics = Diagnostics { max_tail_population: tail.as_ref().map(|_| 0.0), ..Diagnostics::default() };
    let mut kr = vec![C64::default(); d * d];
    let mut lr = vec![C64::default(); d * d];
    let mut lrl = vec![C64::default(); d * d];
    let i_unit = C64::new(0.0, 1.0);

    let stats = integrator::integrate(
        |t, y, dy| {
            gen.assemble(t, false);
            gen.current.mul_dense_right_adjoint(y, &mut kr);
            // dy = −i Kρ + i ρK† with Kρ = (ρK†)† for Hermitian ρ
            for j in 0..d {
                for i in 0..d {
                    dy[i + j * d] = i_unit * kr[i + j * d] - i_unit * kr[j + i * d].conj();
                }
            }
            if let Some(w) = &weights {
                for ((a, b), wv) in dy.iter_mut().zip(y).zip(w) {
                    *a += b * wv;
                }
            }
            for (l, rate) in &active {
                l.mul_dense(y, &mut lr);
                l.mul_dense_right_adjoint(&lr, &mut lrl);
                for (a, b) in dy.iter_mut().zip(&lrl) {
                    *a += b * *rate;
                }
            }
        },
        rho.as_slice().to_vec(),
        times,
        options.method,
        |y| symmetrize(y, d),
        |_, _, y| {
            let m = CMatrix::from_column_slice(d, d, y);
            let drift = (m.trace().re - trace0).abs();
            diagnostics.max_drift = diagnostics.max_drift.max(drift);
            if let (Some(idx), Some(worst)) = (&tail, diagnostics.max_tail_population.as_mut()) {
                let p: f64 = idx.iter().map(|&i| m[(i, i)].re).sum();
                *worst = worst.max(p);
            }
            recorder.record(&signature, StateData::Density(m));
            Ok(())
        },
    )?;
    diagnostics.steps = stats;
    if let StateData::Density(m) = &recorder.last {
        if d <= MIN_EIGEN_DIM_LIMIT {
            let ev = min_eigenvalue(m);
            if ev < -1e-6 {
                log::warn!("final density matrix has eigenvalue {ev:e}");
            }
            diagnostics.final_min_eigenvalue = Some(ev);
        }
    }
    finish(recorder, signature, times, diagnostics, options, "trace")
}

fn is_diagonal(m: &CMatrix) -> bool {
    m.iter().enumerate().all(|(p, v)| p % (m.nrows() + 1) == 0 || *v == C64::new(0.0, 0.0))
}

fn symmetrize(y: &mut [C64], d: usize) {
    for j in 0..d {
        y[j + j * d].im = 0.0;
        for i in 0..j {
            let avg = (y[i + j * d] + y[j + i * d].conj()) * 0.5;
            y[i + j * d] = avg;
            y[j + i * d] = avg.conj();
        }
    }
}

struct Recorder<'o> {
    observables: &'o [Observable],
    series: Vec<Vec<C64>>,
    states: Option<Vec<StateData>>,
    last: StateData,
}

impl<'o> Recorder<'o> {
    fn new(observables: &'o [Observable], len: usize, keep: bool) -> Self {
        Self {
            observables,
            series: observables.iter().map(|_| Vec::with_capacity(len)).collect(),
            states: keep.then(|| Vec::with_capacity(len)),
            last: StateData::Vector(CVector::zeros(0)),
        }
    }

    fn record(&mut self, _signature: &SpaceSignature, data: StateData) {
        for (obs, s) in self.observables.iter().zip(self.series.iter_mut()) {
            s.push(expectation_raw(&data, obs.operator.matrix()));
        }
        if let Some(states) = self.states.as_mut() {
            states.push(data.clone());
        }
        self.last = data;
    }
}

fn finish(
    recorder: Recorder<'_>,
    signature: SpaceSignature,
    times: &[f64],
    diagnostics: Diagnostics,
    options: &EvolveOptions,
    what: &str,
) -> Result<Trajectory> {
    if diagnostics.max_drift > options.drift_tolerance {
        return Err(Error::Numerical(format!(
            "{what} drift {:.3e} exceeds tolerance {:.1e} ({} steps accepted, {} rejected)",
            diagnostics.max_drift, options.drift_tolerance, diagnostics.steps.accepted, diagnostics.steps.rejected
        )));
    }
    let observables = recorder.observables.iter().zip(recorder.series).map(|(o, s)| (o.name.clone(), s)).collect();
    let states = recorder.states.map(|v| v.into_iter().map(|d| QuantumState::raw(signature.clone(), d)).collect());
    Ok(Trajectory {
        times: times.to_vec(),
        observables,
        states,
        final_state: QuantumState::raw(signature, recorder.last),
        diagnostics,
    })
}

/// Result of [`choose_truncation`].
#[derive(Clone, Debug)]
pub struct TruncationChoice {
    pub n_max: usize,
    pub tail_population: f64,
    pub trajectory: Trajectory,
    /// Every tested cutoff with its tail population.
    pub tried: Vec<(usize, f64)>,
}

/// Doubles the Fock cutoff from `initial` until the run keeps the top two
/// levels below `tolerance`, testing at most `cap`.
pub fn choose_truncation<F>(mut run: F, initial: usize, tolerance: f64, cap: usize) -> Result<TruncationChoice>
where
    F: FnMut(usize) -> Result<Trajectory>,
{
    if !(tolerance > 0.0 && tolerance < 1.0) {
        return Err(Error::InvalidParameter(format!("tail tolerance must lie in (0, 1), got {tolerance}")));
    }
    if initial < 1 || initial > cap {
        return Err(Error::InvalidParameter(format!("initial cutoff {initial} outside [1, {cap}]")));
    }
    let mut n_max = initial;
    let mut tried = Vec::new();
    loop {
        let trajectory = run(n_max)?;
        let tail = trajectory
            .diagnostics
            .max_tail_population
            .ok_or_else(|| Error::InvalidParameter("truncation search needs a phonon register in the run".into()))?;
        tried.push((n_max, tail));
        log::debug!("n_max = {n_max}: tail population {tail:e}");
        if tail < tolerance {
            return Ok(TruncationChoice { n_max, tail_population: tail, trajectory, tried });
        }
        if n_max >= cap {
            return Err(Error::Truncation(format!(
                "tail population {tail:e} ≥ {tolerance:e} at the cap n_max = {cap}"
            )));
        }
        n_max = (2 * n_max).min(cap);
    }
}

/// `|0⟩_ph ⊗ |s_1 … s_N⟩` for qubit digits `spins`.
pub fn vacuum_with_spins(n_max: usize, spins: &[usize]) -> Result<QuantumState> {
    let signature = SpaceSignature::boson_spins(n_max, spins.len())?;
    let mut digits = vec![0];
    digits.extend_from_slice(spins);
    QuantumState::basis(&signature, &digits)
}

/// `|0⟩_ph|g…g⟩`
pub fn vacuum_ground(n_max: usize, n_spins: usize) -> Result<QuantumState> {
    vacuum_with_spins(n_max, &vec![SPIN_G; n_spins])
}

/// `|0⟩_ph|d…d⟩`
pub fn vacuum_dark(n_max: usize, n_spins: usize) -> Result<QuantumState> {
    vacuum_with_spins(n_max, &vec![SPIN_D; n_spins])
}

/// `|g…g⟩` on a spins-only register.
pub fn all_ground(n_spins: usize) -> Result<QuantumState> {
    let signature = SpaceSignature::spins(n_spins)?;
    QuantumState::basis(&signature, &vec![SPIN_G; n_spins])
}

/// Evenly spaced grid `0, dt, …, t_final` with `steps + 1` points.
pub fn linear_grid(t_final: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|k| t_final * k as f64 / steps as f64).collect()
}
