//! Squeezed-frame comparisons: the full transformed Hamiltonian against its
//! Rabi part, for constant squeezing and for the tanh ramp, and the cat-state
//! preparation built on the ramp.

use std::sync::Arc;

use spinmech::dynamics::{evolve_lindblad, evolve_unitary, linear_grid, vacuum_ground, Observable, Trajectory};
use spinmech::hilbert::SpaceSignature;
use spinmech::metrics::fidelity;
use spinmech::models::{
    build_correction, build_squeezed_rabi, build_time_dependent, derive_squeeze_params, FrameTerms, ModeOperators,
    ModelParams, TanhRamp, TimeDependentHamiltonian,
};
use spinmech::transforms::{cat_alpha, target_cat_state};

use super::{label, max_abs_difference, phonon_and_dephasing, real_series, truncation_specs, with_truncation};
use crate::error::{HarnessError, Result};
use crate::params::{ParamSpec, Params, Section};
use crate::registry::{Context, Outcome};
use crate::table::Table;

fn observables(ops: &ModeOperators) -> [Observable; 2] {
    [Observable::new("n_phonon", ops.number.clone()), Observable::new("sigma_z", ops.sz[0].clone())]
}

/// Joins two runs into `t, n_total, n_rabi, sz_total, sz_rabi` and records
/// their largest pointwise deviations.
fn comparison_table(name: &str, total: &Trajectory, rabi: &Trajectory, outcome: &mut Outcome) -> Table {
    let (n_t, n_r) = (real_series(total, "n_phonon"), real_series(rabi, "n_phonon"));
    let (s_t, s_r) = (real_series(total, "sigma_z"), real_series(rabi, "sigma_z"));
    let mut table = Table::new(name, &["t", "n_total", "n_rabi", "sz_total", "sz_rabi"]);
    for (k, &t) in total.times.iter().enumerate() {
        table.push(vec![t, n_t[k], n_r[k], s_t[k], s_r[k]]);
    }
    outcome.record_f64("max_deviation_n_phonon", max_abs_difference(&n_t, &n_r));
    outcome.record_f64("max_deviation_sigma_z", max_abs_difference(&s_t, &s_r));
    table
}

pub fn figs2_params() -> Vec<ParamSpec> {
    let mut p = vec![
        ParamSpec::float(Section::Model, "delta_m_eff", 20.0, "squeezed-frame detuning Δ_m"),
        ParamSpec::list(Section::Model, "delta_dg", &[2.0], "spin detuning δ_dg"),
        ParamSpec::float(Section::Model, "r", 1.25, "squeezing parameter"),
        ParamSpec::float(Section::Model, "t_final", 50.0, "final time"),
        ParamSpec::int(Section::Model, "steps", 1000, "output intervals"),
    ];
    p.extend(truncation_specs(8));
    p
}

pub fn figs2(ctx: &Context) -> Result<Outcome> {
    let p = ctx.params;
    let base = ModelParams::from_squeezed_detuning(1, 1, p.positive("delta_m_eff")?, p.float("r")?)
        .with_detunings(p.per_spin("delta_dg", 1)?);
    let times = linear_grid(p.positive("t_final")?, p.count("steps", 1)?);
    let options = ctx.options();
    let mut outcome = Outcome::default();
    let run = |with_correction: bool, n_max: usize| -> spinmech::Result<Trajectory> {
        let model = base.clone().with_n_max(n_max);
        let squeeze = derive_squeeze_params(&model)?;
        let sig = SpaceSignature::boson_spins(n_max, 1)?;
        let ops = ModeOperators::new(&sig)?;
        let mut h = build_squeezed_rabi(&model, &squeeze, &sig)?;
        if with_correction {
            h = h.checked_add(&build_correction(&model, &squeeze, &sig)?)?;
        }
        let (h, _) = h.without_constant();
        evolve_unitary(&h, &vacuum_ground(n_max, 1)?, &times, &observables(&ops), &options)
    };
    let total = with_truncation(p, &mut outcome, "total", |n| run(true, n))?;
    let rabi = with_truncation(p, &mut outcome, "rabi", |n| run(false, n))?;
    let table = comparison_table("figS2", &total.trajectory, &rabi.trajectory, &mut outcome);
    outcome.tables.push(table);
    Ok(outcome)
}

fn ramp_specs() -> Vec<ParamSpec> {
    vec![
        ParamSpec::float(Section::Model, "delta_m", 10.0, "mechanical detuning δ_m"),
        ParamSpec::list(Section::Model, "delta_dg", &[0.0], "spin detuning δ_dg"),
        ParamSpec::float(Section::Model, "r_max", 1.25, "plateau of r(t) = r_max tanh(rate t/2)"),
        ParamSpec::float(Section::Model, "ramp_rate", 1.0, "ramp rate in units of λ"),
    ]
}

fn ramp_model(p: &Params) -> Result<(ModelParams, TanhRamp)> {
    let model =
        ModelParams::with_squeezing(1, 1, p.positive("delta_m")?, 0.0).with_detunings(p.per_spin("delta_dg", 1)?);
    let ramp = TanhRamp { r_max: p.float("r_max")?, rate: p.positive("ramp_rate")? };
    Ok((model, ramp))
}

fn ramp_hamiltonian(
    model: &ModelParams,
    ramp: TanhRamp,
    n_max: usize,
    terms: FrameTerms,
) -> spinmech::Result<(TimeDependentHamiltonian, ModeOperators)> {
    let model = model.clone().with_n_max(n_max);
    let sig = SpaceSignature::boson_spins(n_max, 1)?;
    let h = build_time_dependent(&model, Arc::new(ramp), &sig, terms)?;
    Ok((h, ModeOperators::new(&sig)?))
}

pub fn figs7_params() -> Vec<ParamSpec> {
    let mut p = ramp_specs();
    p.push(ParamSpec::float(Section::Model, "t_final", 10.0, "final time"));
    p.push(ParamSpec::int(Section::Model, "steps", 500, "output intervals"));
    p.extend(truncation_specs(16));
    p
}

pub fn figs7(ctx: &Context) -> Result<Outcome> {
    let p = ctx.params;
    let (model, ramp) = ramp_model(p)?;
    let times = linear_grid(p.positive("t_final")?, p.count("steps", 1)?);
    let options = ctx.options();
    let mut outcome = Outcome::default();
    let run = |terms: FrameTerms, n_max: usize| -> spinmech::Result<Trajectory> {
        let (h, ops) = ramp_hamiltonian(&model, ramp, n_max, terms)?;
        evolve_unitary(&h, &vacuum_ground(n_max, 1)?, &times, &observables(&ops), &options)
    };
    let total = with_truncation(p, &mut outcome, "total", |n| run(FrameTerms::Full, n))?;
    let rabi = with_truncation(p, &mut outcome, "rabi", |n| run(FrameTerms::Ideal, n))?;
    let table = comparison_table("figS7", &total.trajectory, &rabi.trajectory, &mut outcome);
    outcome.tables.push(table);
    Ok(outcome)
}

pub fn figs8_params() -> Vec<ParamSpec> {
    let mut p = ramp_specs();
    p.push(ParamSpec::list(Section::Model, "gamma", &[0.001, 0.01, 0.05], "Γ_m^S = γ_NV, one run each"));
    p.push(ParamSpec::float(Section::Model, "t_final", 5.0, "preparation time t_f"));
    p.push(ParamSpec::int(Section::Model, "steps", 100, "output intervals"));
    p.extend(truncation_specs(32));
    p
}

/// Fidelity with the ideal cat target at every output time, for the full
/// and the Rabi-only ramp Hamiltonians.
pub fn figs8(ctx: &Context) -> Result<Outcome> {
    let p = ctx.params;
    let (model, ramp) = ramp_model(p)?;
    if !model.delta_dg.iter().all(|&d| d == 0.0) {
        return Err(HarnessError::config("the cat target assumes delta_dg = 0"));
    }
    let gammas = p.list("gamma")?;
    if gammas.is_empty() {
        return Err(HarnessError::config("gamma needs at least one value"));
    }
    let times = linear_grid(p.positive("t_final")?, p.count("steps", 1)?);
    let alphas = times.iter().map(|&t| cat_alpha(&model, &ramp, t)).collect::<spinmech::Result<Vec<_>>>()?;
    let options = ctx.options().recording();
    let mut outcome = Outcome::default();
    for gamma in gammas {
        let tag = label(gamma);
        let run = |terms: FrameTerms, n_max: usize| -> spinmech::Result<Trajectory> {
            let (h, ops) = ramp_hamiltonian(&model, ramp, n_max, terms)?;
            let channels = phonon_and_dephasing(&ops, gamma, &[gamma])?;
            evolve_lindblad(&h, &channels, &vacuum_ground(n_max, 1)?.to_density(), &times, &[], &options)
        };
        let total = with_truncation(p, &mut outcome, &format!("total_gamma{tag}"), |n| run(FrameTerms::Full, n))?;
        let rabi = with_truncation(p, &mut outcome, &format!("rabi_gamma{tag}"), |n| run(FrameTerms::Ideal, n))?;
        let fidelities = |choice: &spinmech::dynamics::TruncationChoice| -> Result<Vec<f64>> {
            let states = choice.trajectory.states.as_ref().expect("recording was requested");
            states
                .iter()
                .zip(&alphas)
                .map(|(s, &alpha)| Ok(fidelity(s, &target_cat_state(alpha, choice.n_max)?)?))
                .collect()
        };
        let (f_total, f_rabi) = (fidelities(&total)?, fidelities(&rabi)?);
        let mut table = Table::new(format!("figS8_gamma{tag}"), &["t", "f_total", "f_rabi", "alpha_re", "alpha_im"]);
        for (k, &t) in times.iter().enumerate() {
            table.push(vec![t, f_total[k], f_rabi[k], alphas[k].re, alphas[k].im]);
        }
        outcome.record_f64(format!("final_fidelity_total_gamma{tag}"), *f_total.last().expect("grid"));
        outcome.record_f64(format!("final_fidelity_rabi_gamma{tag}"), *f_rabi.last().expect("grid"));
        outcome.tables.push(table);
    }
    Ok(outcome)
}
