//! Ground-state populations of four spins under the squeezed-frame Rabi
//! model and under its effective Ising form, with and without disorder.

use spinmech::dynamics::{evolve_lindblad, linear_grid, vacuum_with_spins, CollapseChannel, Observable, Trajectory};
use spinmech::hilbert::{embed, pauli, Operator, PauliAxis, QuantumState, SpaceSignature};
use spinmech::models::{build_ising, build_squeezed_rabi, derive_squeeze_params, ModeOperators, ModelParams};

use super::{max_abs_difference, phonon_and_dephasing, real_series, spin_digits, truncation_specs, with_truncation};
use crate::disorder::{disorder_specs, resolve_disorder, DisorderSpec};
use crate::error::Result;
use crate::params::{ParamSpec, Section};
use crate::registry::{Context, Outcome};
use crate::table::Table;

const N_SPINS: usize = 4;

pub fn params() -> Vec<ParamSpec> {
    let mut p = vec![
        ParamSpec::float(Section::Model, "delta_m", 60.0, "mechanical detuning δ_m"),
        ParamSpec::float(Section::Model, "r", 1.25, "squeezing parameter"),
        ParamSpec::list(Section::Model, "delta_dg", &[0.0], "spin detunings δ_dg before disorder"),
        ParamSpec::float(Section::Model, "gamma_m_s", 0.01, "squeezed-frame phonon damping Γ_m^S"),
        ParamSpec::list(Section::Model, "gamma_nv", &[0.01], "spin dephasing γ_NV"),
        ParamSpec::text(Section::Model, "initial", "gdgd", "initial spin letters"),
        ParamSpec::float(Section::Model, "t_final", 20.0, "final time"),
        ParamSpec::int(Section::Model, "steps", 400, "output intervals"),
    ];
    p.extend(truncation_specs(16));
    p.extend(disorder_specs("explicit", &[-0.03, 0.03, 0.0, -0.02], &[1.03, 0.98, 0.99, 1.01]));
    p
}

/// (1 − σ_z^j)/2 for each spin.
fn ground_projectors(sz: &[Operator]) -> Vec<Observable> {
    sz.iter()
        .enumerate()
        .map(|(j, s)| {
            let id = Operator::identity(s.signature());
            Observable::new(format!("g{}", j + 1), (&id - s).scale_re(0.5))
        })
        .collect()
}

struct Runs {
    rabi: Vec<Vec<f64>>,
    ising: Vec<Vec<f64>>,
}

fn populations(traj: &Trajectory) -> Vec<Vec<f64>> {
    (1..=N_SPINS).map(|j| real_series(traj, &format!("g{j}"))).collect()
}

fn simulate(
    ctx: &Context,
    base: &ModelParams,
    spins: &[usize],
    times: &[f64],
    disorder: &DisorderSpec,
    outcome: &mut Outcome,
    tag: &str,
) -> Result<Runs> {
    let (delta_dg, lambda) = disorder.apply(&base.delta_dg, &base.lambda);
    let model = base.clone().with_detunings(delta_dg).with_couplings(lambda);
    let squeeze = derive_squeeze_params(&model)?;
    let options = ctx.options();

    let rabi = with_truncation(ctx.params, outcome, &format!("rabi_{tag}"), |n_max| {
        let model = model.clone().with_n_max(n_max);
        let sig = SpaceSignature::boson_spins(n_max, N_SPINS)?;
        let ops = ModeOperators::new(&sig)?;
        let (h, _) = build_squeezed_rabi(&model, &squeeze, &sig)?.without_constant();
        let channels = phonon_and_dephasing(&ops, model.gamma_m_s, &model.gamma_nv)?;
        let rho0 = vacuum_with_spins(n_max, spins)?.to_density();
        evolve_lindblad(&h, &channels, &rho0, times, &ground_projectors(&ops.sz), &options)
    })?;

    let sig = SpaceSignature::spins(N_SPINS)?;
    let sz = (0..N_SPINS).map(|j| embed(&pauli(PauliAxis::Z), j, &sig)).collect::<spinmech::Result<Vec<_>>>()?;
    let channels = sz
        .iter()
        .zip(&model.gamma_nv)
        .filter(|(_, &g)| g > 0.0)
        .map(|(s, &g)| CollapseChannel::new(s.clone(), g))
        .collect::<spinmech::Result<Vec<_>>>()?;
    let (h, _) = build_ising(&model, &squeeze)?.without_constant();
    let rho0 = QuantumState::basis(&sig, spins)?.to_density();
    let ising = evolve_lindblad(&h, &channels, &rho0, times, &ground_projectors(&sz), &options)?;
    Ok(Runs { rabi: populations(&rabi.trajectory), ising: populations(&ising) })
}

fn largest_deviation(runs: &Runs) -> f64 {
    runs.rabi.iter().zip(&runs.ising).map(|(a, b)| max_abs_difference(a, b)).fold(0.0, f64::max)
}

pub fn run(ctx: &Context) -> Result<Outcome> {
    let p = ctx.params;
    let spins = spin_digits(p.text("initial")?, N_SPINS)?;
    let base = ModelParams::with_squeezing(N_SPINS, 1, p.positive("delta_m")?, p.float("r")?)
        .with_dissipation(p.float("gamma_m_s")?, 0.0)
        .with_detunings(p.per_spin("delta_dg", N_SPINS)?);
    let base = ModelParams { gamma_nv: p.per_spin("gamma_nv", N_SPINS)?, ..base };
    let (_, disorder) = resolve_disorder(p, N_SPINS, ctx.seed)?;
    let times = linear_grid(p.positive("t_final")?, p.count("steps", 1)?);

    let mut outcome = Outcome::default();
    let clean = simulate(ctx, &base, &spins, &times, &DisorderSpec::none(N_SPINS), &mut outcome, "clean")?;
    let disordered = simulate(ctx, &base, &spins, &times, &disorder, &mut outcome, "disorder")?;

    let mut columns = vec!["t".to_string()];
    for prefix in ["rabi", "ising", "rabi_dis", "ising_dis"] {
        columns.extend((1..=N_SPINS).map(|j| format!("{prefix}_g{j}")));
    }
    let mut table = Table::with_columns("figS6", columns);
    for (k, &t) in times.iter().enumerate() {
        let mut row = vec![t];
        for block in [&clean.rabi, &clean.ising, &disordered.rabi, &disordered.ising] {
            row.extend(block.iter().map(|series| series[k]));
        }
        table.push(row);
    }
    outcome.record_f64("max_deviation_clean", largest_deviation(&clean));
    outcome.record_f64("max_deviation_disorder", largest_deviation(&disordered));
    outcome.record("delta_dg_offsets", disorder.delta_dg_offsets.clone());
    outcome.record("lambda_factors", disorder.lambda_factors.clone());
    outcome.tables.push(table);
    Ok(outcome)
}
