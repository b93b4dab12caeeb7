//! Fidelities of the reduced spin and phonon states with fixed basis states,
//! F = ⟨l|ρ_red|l⟩^{1/2}, for one spin under the squeezed-frame Rabi model.
//!
//! As for fig2, each r runs over `t_final_eff / λ_eff(r)`.

use spinmech::dynamics::{evolve_lindblad, linear_grid, vacuum_with_spins, Observable, Trajectory};
use spinmech::hilbert::{embed, Operator, QuantumState, SpaceSignature};
use spinmech::models::{build_squeezed_rabi, derive_squeeze_params, ModeOperators, ModelParams};

use super::{label, phonon_and_dephasing, real_series, spin_digits, truncation_specs, with_truncation};
use crate::error::{HarnessError, Result};
use crate::params::{ParamSpec, Section};
use crate::registry::{Context, Outcome};
use crate::table::Table;

pub fn params() -> Vec<ParamSpec> {
    let mut p = vec![
        ParamSpec::float(Section::Model, "delta_m", 2.0, "mechanical detuning δ_m"),
        ParamSpec::list(Section::Model, "delta_dg", &[0.0], "spin detuning δ_dg"),
        ParamSpec::float(Section::Model, "gamma_m_s", 0.01, "squeezed-frame phonon damping Γ_m^S"),
        ParamSpec::list(Section::Model, "gamma_nv", &[0.01], "spin dephasing γ_NV"),
        ParamSpec::list(Section::Model, "r", &[0.0, 0.5, 1.0, 1.25, 1.5, 2.0], "squeezing parameters, one run each"),
        ParamSpec::text(Section::Model, "initial", "d", "initial spin state, g or d"),
        ParamSpec::int(Section::Model, "fock_levels", 3, "phonon number states |0⟩ … |k−1⟩ to report"),
        ParamSpec::float(Section::Model, "t_final_eff", 5.0, "window length in units of 1/λ_eff(r)"),
        ParamSpec::int(Section::Model, "steps", 400, "output intervals per run"),
    ];
    p.extend(truncation_specs(16));
    p
}

pub fn run(ctx: &Context) -> Result<Outcome> {
    let p = ctx.params;
    let rs = p.list("r")?;
    if rs.is_empty() {
        return Err(HarnessError::config("r needs at least one value"));
    }
    let spins = spin_digits(p.text("initial")?, 1)?;
    let levels = p.count("fock_levels", 1)?;
    let options = ctx.options();
    let mut outcome = Outcome::default();
    for r in rs {
        let base = ModelParams::with_squeezing(1, 1, p.positive("delta_m")?, r)
            .with_dissipation(p.float("gamma_m_s")?, 0.0)
            .with_detunings(p.per_spin("delta_dg", 1)?);
        let base = ModelParams { gamma_nv: p.per_spin("gamma_nv", 1)?, ..base };
        let squeeze = derive_squeeze_params(&base)?;
        let times = linear_grid(p.positive("t_final_eff")? / squeeze.lambda_eff[0], p.count("steps", 1)?);
        let run = |n_max: usize| -> spinmech::Result<Trajectory> {
            let model = base.clone().with_n_max(n_max);
            let sig = SpaceSignature::boson_spins(n_max, 1)?;
            let ops = ModeOperators::new(&sig)?;
            let (h, _) = build_squeezed_rabi(&model, &squeeze, &sig)?.without_constant();
            let channels = phonon_and_dephasing(&ops, model.gamma_m_s, &model.gamma_nv)?;
            let mut observables = vec![Observable::new("sigma_z", ops.sz[0].clone())];
            let boson = SpaceSignature::boson(n_max)?;
            for k in 0..levels.min(n_max + 1) {
                let proj = Operator::projector(&QuantumState::basis(&boson, &[k])?)?;
                observables.push(Observable::new(format!("p{k}"), embed(&proj, 0, &sig)?));
            }
            evolve_lindblad(
                &h,
                &channels,
                &vacuum_with_spins(n_max, &spins)?.to_density(),
                &times,
                &observables,
                &options,
            )
        };
        let choice = with_truncation(p, &mut outcome, &format!("r{}", label(r)), run)?;
        let traj = &choice.trajectory;
        let sz = real_series(traj, "sigma_z");
        let mut columns = vec!["t".to_string(), "f_g".into(), "f_d".into()];
        columns.extend((0..levels).map(|k| format!("f_n{k}")));
        let pops: Vec<Vec<f64>> =
            (0..levels).map(|k| traj.real_series(&format!("p{k}")).unwrap_or_else(|| vec![0.0; times.len()])).collect();
        let mut table = Table::with_columns(format!("figS3_r{}", label(r)), columns);
        for (i, &t) in times.iter().enumerate() {
            let mut row = vec![t, ((1.0 - sz[i]) / 2.0).max(0.0).sqrt(), ((1.0 + sz[i]) / 2.0).max(0.0).sqrt()];
            row.extend(pops.iter().map(|pk| pk[i].max(0.0).sqrt()));
            table.push(row);
        }
        outcome.tables.push(table);
    }
    Ok(outcome)
}
