//! Free-form run of any model Hamiltonian with explicit parameters.

use spinmech::dynamics::{evolve_lindblad, linear_grid, vacuum_with_spins, CollapseChannel, Observable, Trajectory};
use spinmech::hilbert::{embed, pauli, PauliAxis, QuantumState, SpaceSignature};
use spinmech::models::{
    build_correction, build_ising, build_squeezed_rabi, build_total_hamiltonian, derive_squeeze_params, ModeOperators,
    ModelParams,
};

use super::{phonon_and_dephasing, real_series, spin_digits, truncation_specs, with_truncation};
use crate::disorder::{disorder_specs, resolve_disorder};
use crate::error::{HarnessError, Result};
use crate::params::{ParamSpec, Section};
use crate::registry::{Context, Outcome};
use crate::table::Table;

pub fn params() -> Vec<ParamSpec> {
    let mut p = vec![
        ParamSpec::int(Section::Model, "n_spins", 1, "number of spins"),
        ParamSpec::float(Section::Model, "delta_m", 10.0, "mechanical detuning δ_m"),
        ParamSpec::float(Section::Model, "omega_p", 0.0, "pump amplitude Ω_p, below δ_m"),
        ParamSpec::list(Section::Model, "delta_dg", &[0.0], "spin detunings δ_dg"),
        ParamSpec::list(Section::Model, "lambda", &[1.0], "spin-phonon couplings λ^j"),
        ParamSpec::list(Section::Model, "gamma_nv", &[0.0], "spin dephasing γ_NV"),
        ParamSpec::float(Section::Model, "gamma_m_s", 0.0, "phonon damping rate on a"),
        ParamSpec::text(Section::Model, "hamiltonian", "rabi", "lab, rabi, rabi_full or ising"),
        ParamSpec::text(Section::Model, "initial", "g", "initial spin letters"),
        ParamSpec::float(Section::Model, "t_final", 10.0, "final time"),
        ParamSpec::int(Section::Model, "steps", 200, "output intervals"),
    ];
    p.extend(truncation_specs(16));
    p.extend(disorder_specs("none", &[0.0], &[1.0]));
    p
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Lab,
    Rabi,
    RabiFull,
    Ising,
}

impl Kind {
    fn parse(text: &str) -> Result<Self> {
        match text {
            "lab" => Ok(Kind::Lab),
            "rabi" => Ok(Kind::Rabi),
            "rabi_full" => Ok(Kind::RabiFull),
            "ising" => Ok(Kind::Ising),
            other => {
                Err(HarnessError::config(format!("hamiltonian must be lab, rabi, rabi_full or ising, got {other:?}")))
            }
        }
    }
}

pub fn run(ctx: &Context) -> Result<Outcome> {
    let p = ctx.params;
    let n = p.count("n_spins", 1)?;
    let kind = Kind::parse(p.text("hamiltonian")?)?;
    let spins = spin_digits(p.text("initial")?, n)?;
    let (_, disorder) = resolve_disorder(p, n, ctx.seed)?;
    let (delta_dg, lambda) = disorder.apply(&p.per_spin("delta_dg", n)?, &p.per_spin("lambda", n)?);
    let model = ModelParams {
        delta_m: p.float("delta_m")?,
        delta_dg,
        lambda,
        omega_p: p.float("omega_p")?,
        n_spins: n,
        n_max: 1,
        gamma_nv: p.per_spin("gamma_nv", n)?,
        gamma_m_s: p.float("gamma_m_s")?,
    };
    model.validate()?;
    let times = linear_grid(p.positive("t_final")?, p.count("steps", 1)?);
    let options = ctx.options();
    let mut outcome = Outcome::default();

    let (traj, has_phonon) = if kind == Kind::Ising {
        let squeeze = derive_squeeze_params(&model)?;
        let sig = SpaceSignature::spins(n)?;
        let sz = (0..n).map(|j| embed(&pauli(PauliAxis::Z), j, &sig)).collect::<spinmech::Result<Vec<_>>>()?;
        let channels = sz
            .iter()
            .zip(&model.gamma_nv)
            .filter(|(_, &g)| g > 0.0)
            .map(|(s, &g)| CollapseChannel::new(s.clone(), g))
            .collect::<spinmech::Result<Vec<_>>>()?;
        let observables: Vec<Observable> =
            sz.iter().enumerate().map(|(j, s)| Observable::new(format!("sz_{}", j + 1), s.clone())).collect();
        let (h, _) = build_ising(&model, &squeeze)?.without_constant();
        let rho0 = QuantumState::basis(&sig, &spins)?.to_density();
        (evolve_lindblad(&h, &channels, &rho0, &times, &observables, &options)?, false)
    } else {
        let choice = with_truncation(p, &mut outcome, kind_tag(kind), |n_max| -> spinmech::Result<Trajectory> {
            let model = model.clone().with_n_max(n_max);
            let sig = SpaceSignature::boson_spins(n_max, n)?;
            let ops = ModeOperators::new(&sig)?;
            let h = match kind {
                Kind::Lab => build_total_hamiltonian(&model, &sig)?,
                _ => {
                    let squeeze = derive_squeeze_params(&model)?;
                    let h = build_squeezed_rabi(&model, &squeeze, &sig)?;
                    if kind == Kind::RabiFull {
                        h.checked_add(&build_correction(&model, &squeeze, &sig)?)?
                    } else {
                        h
                    }
                }
            };
            let (h, _) = h.without_constant();
            let channels = phonon_and_dephasing(&ops, model.gamma_m_s, &model.gamma_nv)?;
            let mut observables = vec![Observable::new("n_phonon", ops.number.clone())];
            observables
                .extend(ops.sz.iter().enumerate().map(|(j, s)| Observable::new(format!("sz_{}", j + 1), s.clone())));
            evolve_lindblad(
                &h,
                &channels,
                &vacuum_with_spins(n_max, &spins)?.to_density(),
                &times,
                &observables,
                &options,
            )
        })?;
        (choice.trajectory, true)
    };

    let mut columns = vec!["t".to_string(), "n_phonon".to_string()];
    columns.extend((1..=n).map(|j| format!("sz_{j}")));
    let n_phonon = if has_phonon { real_series(&traj, "n_phonon") } else { vec![f64::NAN; times.len()] };
    let sz: Vec<Vec<f64>> = (1..=n).map(|j| real_series(&traj, &format!("sz_{j}"))).collect();
    let mut table = Table::with_columns("custom", columns);
    for (k, &t) in times.iter().enumerate() {
        let mut row = vec![t, n_phonon[k]];
        row.extend(sz.iter().map(|s| s[k]));
        table.push(row);
    }
    outcome.record("delta_dg_offsets", disorder.delta_dg_offsets.clone());
    outcome.record("lambda_factors", disorder.lambda_factors.clone());
    outcome.tables.push(table);
    Ok(outcome)
}

fn kind_tag(kind: Kind) -> &'static str {
    match kind {
        Kind::Lab => "lab",
        Kind::Rabi => "rabi",
        Kind::RabiFull => "rabi_full",
        Kind::Ising => "ising",
    }
}
