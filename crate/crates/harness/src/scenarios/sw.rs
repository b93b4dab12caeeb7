//! Order check of the Ising reduction: residual of the exactly conjugated
//! Hamiltonian at η and at η/2.

use spinmech::models::{derive_squeeze_params, ModelParams};
use spinmech::transforms::schrieffer_wolff_check;

use crate::error::Result;
use crate::params::{ParamSpec, Section};
use crate::registry::{Context, Outcome};
use crate::table::Table;

pub fn params() -> Vec<ParamSpec> {
    vec![
        ParamSpec::int(Section::Model, "n_spins", 1, "number of spins"),
        ParamSpec::float(Section::Model, "delta_m_eff", 5.0, "squeezed-frame detuning Δ_m"),
        ParamSpec::float(Section::Model, "r", 0.0, "squeezing parameter"),
        ParamSpec::list(Section::Model, "delta_dg", &[0.0], "spin detuning δ_dg"),
        ParamSpec::int(Section::Model, "n_max", 40, "Fock cutoff"),
        ParamSpec::float(Section::Model, "order_tolerance", 2.0, "admitted distance of the residual ratio from 8"),
    ]
}

pub fn run(ctx: &Context) -> Result<Outcome> {
    let p = ctx.params;
    let n = p.count("n_spins", 1)?;
    let model = ModelParams::from_squeezed_detuning(n, p.count("n_max", 2)?, p.positive("delta_m_eff")?, p.float("r")?)
        .with_detunings(p.per_spin("delta_dg", n)?);
    let squeeze = derive_squeeze_params(&model)?;
    let report = schrieffer_wolff_check(&model, &squeeze, p.positive("order_tolerance")?)?;
    let mut table = Table::new("sw_check", &["eta", "residual", "residual_half", "ratio", "noise_floor"]);
    table.push(vec![
        report.eta,
        report.residual,
        report.residual_half,
        report.ratio.unwrap_or(f64::NAN),
        report.noise_floor,
    ]);
    let mut outcome = Outcome { tables: vec![table], ..Outcome::default() };
    outcome.record("cubic", report.cubic);
    outcome.record("phonon_window", report.phonon_window as i64);
    Ok(outcome)
}
