//! Scenario bodies, one module per figure family.

pub mod closed_form;
pub mod custom;
pub mod fidelities;
pub mod fig2;
pub mod frames;
pub mod ghz;
pub mod ising;
pub mod squeezing;
pub mod sw;

use spinmech::dynamics::{choose_truncation, CollapseChannel, Trajectory, TruncationChoice, TRUNCATION_CAP};
use spinmech::hilbert::{SPIN_D, SPIN_G};
use spinmech::models::ModeOperators;

use crate::error::{HarnessError, Result};
use crate::params::{ParamSpec, ParamValue, Params, Section};
use crate::registry::Outcome;

/// Shortest decimal form of a parameter value, used in table names.
pub(crate) fn label(x: f64) -> String {
    ParamValue::Float(x).to_string()
}

/// Qubit digits from a string of `g` and `d` (`e` is read as `d`); a single
/// letter is broadcast to all spins.
pub(crate) fn spin_digits(text: &str, n_spins: usize) -> Result<Vec<usize>> {
    let digits = text
        .chars()
        .map(|c| match c {
            'g' => Ok(SPIN_G),
            'd' | 'e' => Ok(SPIN_D),
            other => Err(HarnessError::config(format!("initial spin letter {other:?} is not g, d or e"))),
        })
        .collect::<Result<Vec<_>>>()?;
    match digits.len() {
        1 => Ok(vec![digits[0]; n_spins]),
        n if n == n_spins => Ok(digits),
        n => Err(HarnessError::config(format!("initial state {text:?} has {n} letters for {n_spins} spins"))),
    }
}

pub(crate) fn truncation_specs(n_max: i64) -> Vec<ParamSpec> {
    vec![
        ParamSpec::int(Section::Model, "n_max", n_max, "initial Fock cutoff; doubled until the tail is small"),
        ParamSpec::float(
            Section::Model,
            "tail_tolerance",
            1e-6,
            "largest admitted population of the two top Fock levels",
        ),
    ]
}

/// Runs `run` with growing cutoffs and records the accepted one.
pub(crate) fn with_truncation<F>(params: &Params, outcome: &mut Outcome, tag: &str, run: F) -> Result<TruncationChoice>
where
    F: FnMut(usize) -> spinmech::Result<Trajectory>,
{
    let initial = params.count("n_max", 1)?;
    let tolerance = params.positive("tail_tolerance")?;
    let choice = choose_truncation(run, initial.min(TRUNCATION_CAP), tolerance, TRUNCATION_CAP)?;
    outcome.record(format!("n_max_{tag}"), choice.n_max as i64);
    outcome.record_f64(format!("tail_population_{tag}"), choice.tail_population);
    let diagnostics = &choice.trajectory.diagnostics;
    outcome.record(format!("steps_{tag}"), diagnostics.steps.accepted as i64);
    outcome.record_f64(format!("max_drift_{tag}"), diagnostics.max_drift);
    Ok(choice)
}

/// Γ_m^S 𝒟[a] and γ_NV^j 𝒟[σ_z^j]; zero rates are dropped.
pub(crate) fn phonon_and_dephasing(
    ops: &ModeOperators,
    gamma_m_s: f64,
    gamma_nv: &[f64],
) -> spinmech::Result<Vec<CollapseChannel>> {
    let mut channels = Vec::new();
    if gamma_m_s > 0.0 {
        channels.push(CollapseChannel::new(ops.a.clone(), gamma_m_s)?);
    }
    for (sz, &g) in ops.sz.iter().zip(gamma_nv) {
        if g > 0.0 {
            channels.push(CollapseChannel::new(sz.clone(), g)?);
        }
    }
    Ok(channels)
}

pub(crate) fn real_series(trajectory: &Trajectory, name: &str) -> Vec<f64> {
    trajectory.real_series(name).unwrap_or_else(|| panic!("observable {name} was requested"))
}

pub(crate) fn max_abs_difference(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
