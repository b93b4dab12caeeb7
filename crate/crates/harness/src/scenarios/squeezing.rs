//! One-axis-twisting spin squeezing on a spins-only register.
//!
//! Λ = Λ₀(1 + e^{4r})/2 with Λ₀ = λ²/(4δ_m), so δ_m = λ²/(4Λ₀) is fixed by
//! Λ₀ and recorded. Each r runs over the same twisting window Λt.

use spinmech::dynamics::{all_ground, evolve_lindblad, evolve_unitary, linear_grid, CollapseChannel, EvolveOptions};
use spinmech::hilbert::{embed, pauli, Operator, PauliAxis, QuantumState, SpaceSignature};
use spinmech::metrics::spin_squeezing;
use spinmech::models::{build_oat, spin_spin_enhancement};

use super::label;
use crate::error::{HarnessError, Result};
use crate::params::{ParamSpec, Section};
use crate::registry::{Context, Outcome};
use crate::table::Table;

pub fn params() -> Vec<ParamSpec> {
    vec![
        ParamSpec::int(Section::Model, "n_spins", 6, "number of spins"),
        ParamSpec::float(Section::Model, "lambda0", 0.1, "spin-spin coupling Λ₀ without the pump"),
        ParamSpec::list(Section::Model, "gamma_nv", &[0.001], "spin dephasing γ_NV"),
        ParamSpec::list(Section::Model, "r", &[0.0, 0.5, 1.0], "squeezing parameters, one run each"),
        ParamSpec::float(Section::Model, "twist_final", 0.4, "window length in units of 1/Λ(r)"),
        ParamSpec::int(Section::Model, "steps", 400, "output intervals per run"),
        ParamSpec::float(Section::Model, "refine_tolerance", 1e-9, "relative time tolerance of the minimum search"),
    ]
}

/// State representation used by [`OatModel::evolve`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    Vector,
    Density,
}

pub struct OatModel {
    pub n_spins: usize,
    pub hamiltonian: Operator,
    pub channels: Vec<CollapseChannel>,
}

impl OatModel {
    pub fn new(n_spins: usize, lambda_oat: f64, gamma_nv: &[f64]) -> spinmech::Result<Self> {
        let hamiltonian = build_oat(lambda_oat, n_spins)?;
        let sig = SpaceSignature::spins(n_spins)?;
        let mut channels = Vec::new();
        for (j, &g) in gamma_nv.iter().enumerate() {
            if g > 0.0 {
                channels.push(CollapseChannel::new(embed(&pauli(PauliAxis::Z), j, &sig)?, g)?);
            }
        }
        Ok(Self { n_spins, hamiltonian, channels })
    }

    /// States at `times` starting from |g…g⟩ (or from `start` at times[0]).
    pub fn evolve(
        &self,
        start: Option<&QuantumState>,
        times: &[f64],
        options: &EvolveOptions,
        representation: Representation,
    ) -> spinmech::Result<Vec<QuantumState>> {
        let initial = match start {
            Some(s) => s.clone(),
            None => all_ground(self.n_spins)?,
        };
        let options = options.recording();
        let traj = match representation {
            Representation::Vector => {
                if !self.channels.is_empty() {
                    return Err(spinmech::Error::Unsupported("state vectors cannot carry dephasing".into()));
                }
                evolve_unitary(&self.hamiltonian, &initial, times, &[], &options)?
            }
            Representation::Density => {
                evolve_lindblad(&self.hamiltonian, &self.channels, &initial.to_density(), times, &[], &options)?
            }
        };
        Ok(traj.states.expect("recording was requested"))
    }
}

/// ξ_R² of each state; NaN where the mean spin vanishes.
pub fn xi_r_series(states: &[QuantumState], n_spins: usize) -> Vec<f64> {
    states.iter().map(|s| spin_squeezing(s, n_spins).map_or(f64::NAN, |r| r.xi_r_sq)).collect()
}

struct Minimum {
    t: f64,
    xi_r_sq: f64,
    xi_s_sq: f64,
    gain: f64,
}

/// Golden-section refinement of the smallest grid value of ξ_R².
fn refine_minimum(
    model: &OatModel,
    times: &[f64],
    states: &[QuantumState],
    xi_r: &[f64],
    options: &EvolveOptions,
    rel_tol: f64,
) -> Result<Minimum> {
    let best = xi_r
        .iter()
        .enumerate()
        .filter(|(_, x)| x.is_finite())
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .ok_or_else(|| HarnessError::config("the mean spin vanished at every output time"))?;
    let lo_idx = best.saturating_sub(1);
    let start = &states[lo_idx];
    let t0 = times[lo_idx];
    let report_at = |t: f64| -> Result<spinmech::metrics::SqueezingReport> {
        let state = if t == t0 {
            start.clone()
        } else {
            model.evolve(Some(start), &[t0, t], options, Representation::Density)?.pop().expect("two outputs")
        };
        Ok(spin_squeezing(&state, model.n_spins)?)
    };
    let value = |t: f64| report_at(t).map(|r| r.xi_r_sq).unwrap_or(f64::INFINITY);

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (t0, times[(best + 1).min(times.len() - 1)]);
    let tol = rel_tol * b.max(f64::MIN_POSITIVE);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (value(c), value(d));
    while (b - a) > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = value(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = value(d);
        }
    }
    let mut t = 0.5 * (a + b);
    let mut report = report_at(t)?;
    if xi_r[best] < report.xi_r_sq {
        t = times[best];
        report = spin_squeezing(&states[best], model.n_spins)?;
    }
    Ok(Minimum { t, xi_r_sq: report.xi_r_sq, xi_s_sq: report.xi_s_sq, gain: report.gain })
}

pub fn run(ctx: &Context) -> Result<Outcome> {
    let p = ctx.params;
    let n = p.count("n_spins", 2)?;
    let lambda0 = p.positive("lambda0")?;
    let gamma = p.per_spin("gamma_nv", n)?;
    let rs = p.list("r")?;
    if rs.is_empty() {
        return Err(HarnessError::config("r needs at least one value"));
    }
    let options = ctx.options();
    let mut outcome = Outcome::default();
    outcome.record_f64("delta_m", 1.0 / (4.0 * lambda0));

    let mut minima =
        Table::new("fig4_minima", &["r", "lambda_oat", "t_min", "xi_r_sq_min", "xi_s_sq_at_min", "gain_at_min"]);
    for r in rs {
        let lambda_oat = lambda0 * spin_spin_enhancement(r);
        let model = OatModel::new(n, lambda_oat, &gamma)?;
        let times = linear_grid(p.positive("twist_final")? / lambda_oat, p.count("steps", 2)?);
        let states = model.evolve(None, &times, &options, Representation::Density)?;
        let mut table = Table::new(format!("fig4_r{}", label(r)), &["t", "xi_s_sq", "xi_r_sq", "gain"]);
        let mut xi_r = Vec::with_capacity(states.len());
        for (t, s) in times.iter().zip(&states) {
            let row = match spin_squeezing(s, n) {
                Ok(rep) => vec![*t, rep.xi_s_sq, rep.xi_r_sq, rep.gain],
                Err(spinmech::Error::UndefinedDirection { .. }) => vec![*t, f64::NAN, f64::NAN, f64::NAN],
                Err(e) => return Err(e.into()),
            };
            xi_r.push(row[2]);
            table.push(row);
        }
        let min = refine_minimum(&model, &times, &states, &xi_r, &options, p.positive("refine_tolerance")?)?;
        minima.push(vec![r, lambda_oat, min.t, min.xi_r_sq, min.xi_s_sq, min.gain]);
        outcome.tables.push(table);
    }
    outcome.tables.push(minima);
    Ok(outcome)
}
