//! Spin-phonon dynamics in the squeezed frame with and without the pump.
//!
//! Each r gets its own window `t_final_eff / λ_eff(r)`, so both runs cover
//! the same number of coupling periods.

use nalgebra::{DMatrix, DVector};
use spinmech::dynamics::{evolve_lindblad, linear_grid, vacuum_dark, Observable, Trajectory};
use spinmech::hilbert::{CVector, Operator, SpaceSignature, C64};
use spinmech::models::{build_squeezed_rabi, derive_squeeze_params, ModeOperators, ModelParams, SqueezeParams};

use super::{label, phonon_and_dephasing, real_series, truncation_specs, with_truncation};
use crate::error::{HarnessError, Result};
use crate::params::{ParamSpec, Params, Section};
use crate::registry::{Context, Outcome};
use crate::table::Table;

pub fn params() -> Vec<ParamSpec> {
    let mut p = vec![
        ParamSpec::float(Section::Model, "delta_m", 1.0, "mechanical detuning δ_m"),
        ParamSpec::list(Section::Model, "delta_dg", &[0.0], "spin detuning δ_dg"),
        ParamSpec::float(Section::Model, "gamma_m_s", 0.1, "squeezed-frame phonon damping Γ_m^S"),
        ParamSpec::list(Section::Model, "gamma_nv", &[0.1], "spin dephasing γ_NV"),
        ParamSpec::list(Section::Model, "r", &[0.0, 3.0], "squeezing parameters, one run each"),
        ParamSpec::float(Section::Model, "t_final_eff", 5.0, "window length in units of 1/λ_eff(r)"),
        ParamSpec::int(Section::Model, "steps", 400, "output intervals per run"),
        ParamSpec::float(Section::Model, "rate_window", 0.02, "early window for the coupling-rate fit"),
        ParamSpec::int(Section::Model, "rate_points", 20, "samples in the coupling-rate fit"),
    ];
    p.extend(truncation_specs(16));
    p
}

fn model(params: &Params, r: f64) -> Result<ModelParams> {
    let model = ModelParams::with_squeezing(1, 1, params.float("delta_m")?, r)
        .with_dissipation(params.float("gamma_m_s")?, 0.0)
        .with_detunings(params.per_spin("delta_dg", 1)?);
    Ok(ModelParams { gamma_nv: params.per_spin("gamma_nv", 1)?, ..model })
}

fn rabi(model: &ModelParams, n_max: usize) -> spinmech::Result<(Operator, SqueezeParams, ModeOperators)> {
    let model = model.clone().with_n_max(n_max);
    let squeeze = derive_squeeze_params(&model)?;
    let sig = SpaceSignature::boson_spins(n_max, 1)?;
    let ops = ModeOperators::new(&sig)?;
    let (h, _) = build_squeezed_rabi(&model, &squeeze, &sig)?.without_constant();
    Ok((h, squeeze, ops))
}

fn dynamics(model: &ModelParams, n_max: usize, times: &[f64], ctx: &Context) -> spinmech::Result<Trajectory> {
    let (h, _, ops) = rabi(model, n_max)?;
    let channels = phonon_and_dephasing(&ops, model.gamma_m_s, &model.gamma_nv)?;
    let observables = [Observable::new("n_phonon", ops.number.clone()), Observable::new("sigma_z", ops.sz[0].clone())];
    evolve_lindblad(&h, &channels, &vacuum_dark(n_max, 1)?.to_density(), times, &observables, &ctx.options())
}

fn window(params: &Params, model: &ModelParams) -> Result<Vec<f64>> {
    let squeeze = derive_squeeze_params(model)?;
    let t_final = params.positive("t_final_eff")? / squeeze.lambda_eff[0].abs().max(f64::MIN_POSITIVE);
    Ok(linear_grid(t_final, params.count("steps", 1)?))
}

fn run_each<F>(ctx: &Context, mut emit: F) -> Result<Outcome>
where
    F: FnMut(f64, &Trajectory, &mut Outcome),
{
    let mut outcome = Outcome::default();
    let rs = ctx.params.list("r")?;
    if rs.is_empty() {
        return Err(HarnessError::config("r needs at least one value"));
    }
    for r in rs {
        let model = model(ctx.params, r)?;
        let times = window(ctx.params, &model)?;
        let choice =
            with_truncation(ctx.params, &mut outcome, &format!("r{}", label(r)), |n| dynamics(&model, n, &times, ctx))?;
        emit(r, &choice.trajectory, &mut outcome);
    }
    Ok(outcome)
}

pub fn run_phonon_panel(ctx: &Context) -> Result<Outcome> {
    run_each(ctx, |r, traj, outcome| {
        let mut table = Table::new(format!("fig2b_r{}", label(r)), &["t", "n_phonon", "sigma_z"]);
        let n = real_series(traj, "n_phonon");
        let sz = real_series(traj, "sigma_z");
        for (k, &t) in traj.times.iter().enumerate() {
            table.push(vec![t, n[k], sz[k]]);
        }
        outcome.tables.push(table);
    })
}

pub fn run_spin_panel(ctx: &Context) -> Result<Outcome> {
    let mut outcome = run_each(ctx, |r, traj, outcome| {
        let mut table = Table::new(format!("fig2c_r{}", label(r)), &["t", "sigma_z", "pop_g"]);
        let sz = real_series(traj, "sigma_z");
        for (k, &t) in traj.times.iter().enumerate() {
            table.push(vec![t, sz[k], (1.0 - sz[k]) / 2.0]);
        }
        outcome.tables.push(table);
    })?;
    let mut rates = Table::new("fig2c_rates", &["r", "lambda_eff", "fitted_rate", "oracle_rate", "rate_over_first"]);
    let mut first = None;
    for r in ctx.params.list("r")? {
        let rate = coupling_rates(ctx, r)?;
        let base = *first.get_or_insert(rate.fitted);
        rates.push(vec![r, rate.lambda_eff, rate.fitted, rate.oracle, rate.fitted / base]);
    }
    outcome.tables.push(rates);
    Ok(outcome)
}

/// Early-time coupling rates from the simulated trajectory and from dense
/// diagonalization of the same Hamiltonian.
#[derive(Clone, Copy, Debug)]
pub struct CouplingRate {
    pub lambda_eff: f64,
    pub fitted: f64,
    pub oracle: f64,
}

/// From the vacuum, ⟨a†a⟩ = g² t² + O(t³) with g the coupling rate; `g` is
/// read from a polynomial fit over the first `rate_window`.
pub fn coupling_rates(ctx: &Context, r: f64) -> Result<CouplingRate> {
    let n_max = ctx.params.count("n_max", 1)?;
    let points = ctx.params.count("rate_points", 4)?;
    let times = linear_grid(ctx.params.positive("rate_window")?, points);
    let model = model(ctx.params, r)?;
    let traj = dynamics(&model, n_max, &times, ctx)?;
    let fitted = quadratic_rate(&times, &real_series(&traj, "n_phonon"))?;

    let (h, squeeze, ops) = rabi(&model, n_max)?;
    let psi0 = vacuum_dark(n_max, 1)?;
    let psi0 = psi0.as_vector().expect("basis state is a vector");
    let oracle = quadratic_rate(&times, &eigen_expectations(&h, psi0, &ops.number, &times))?;
    Ok(CouplingRate { lambda_eff: squeeze.lambda_eff[0], fitted, oracle })
}

/// ⟨ψ(t)|O|ψ(t)⟩ with ψ(t) = V e^{−iEt} V† ψ₀ from the eigenbasis of H.
pub fn eigen_expectations(h: &Operator, psi0: &CVector, o: &Operator, times: &[f64]) -> Vec<f64> {
    let eig = h.matrix().clone().symmetric_eigen();
    let coeffs = eig.eigenvectors.adjoint() * psi0;
    times
        .iter()
        .map(|&t| {
            let phased = CVector::from_iterator(
                coeffs.len(),
                coeffs.iter().zip(eig.eigenvalues.iter()).map(|(c, &e)| c * C64::from_polar(1.0, -e * t)),
            );
            let psi = &eig.eigenvectors * phased;
            (psi.adjoint() * o.matrix() * &psi)[(0, 0)].re
        })
        .collect()
}

/// √c₂ from a least-squares fit y = c₂t² + c₃t³ + c₄t⁴, solved in the
/// rescaled time t/t_max.
fn quadratic_rate(times: &[f64], y: &[f64]) -> Result<f64> {
    let scale = times.last().copied().unwrap_or(1.0);
    let design = DMatrix::from_fn(times.len(), 3, |i, j| (times[i] / scale).powi(j as i32 + 2));
    let rhs = DVector::from_column_slice(y);
    let coeffs =
        design.svd(true, true).solve(&rhs, 1e-14).map_err(|e| HarnessError::config(format!("rate fit failed: {e}")))?;
    Ok(coeffs[0].max(0.0).sqrt() / scale)
}
