use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::hilbert::{CVector, QuantumState, SpaceSignature, C64, I, SPIN_D, SPIN_G};
use crate::models::{ModelParams, SqueezeSchedule};

use super::quadrature::integrate;

/// Population a coherent state may lose beyond the truncation.
pub const COHERENT_TAIL_TOLERANCE: f64 = 1e-8;

/// Poisson weight e^{−x} x^n/n! accumulated in log space.
fn poisson_tail(mean: f64, n_max: usize) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    let mut log_w = -mean;
    for n in 1..=n_max {
        log_w += mean.ln() - (n as f64).ln();
    }
    let mut tail = 0.0;
    let mut n = n_max + 1;
    loop {
        log_w += mean.ln() - (n as f64).ln();
        let w = log_w.exp();
        tail += w;
        if (n as f64 > mean && w < 1e-18 * tail.max(1e-300)) || n > n_max + 100_000 {
            break;
        }
        n += 1;
    }
    tail
}

fn coherent_amplitudes(alpha: C64, n_max: usize) -> Result<CVector> {
    let mean = alpha.norm_sqr();
    let tail = poisson_tail(mean, n_max);
    if tail > COHERENT_TAIL_TOLERANCE {
        return Err(Error::Truncation(format!(
            "coherent state |alpha|² = {mean:.3} loses {tail:.2e} population above n_max = {n_max}"
        )));
    }
    let mut amps = CVector::zeros(n_max + 1);
    let mut term = C64::new((-mean / 2.0).exp(), 0.0);
    amps[0] = term;
    for n in 1..=n_max {
        term *= alpha / (n as f64).sqrt();
        amps[n] = term;
    }
    Ok(amps)
}

/// Truncated coherent state |α⟩, renormalized on the kept levels.
pub fn coherent_state(alpha: C64, n_max: usize) -> Result<QuantumState> {
    QuantumState::from_vector_normalized(SpaceSignature::boson(n_max)?, coherent_amplitudes(alpha, n_max)?)
}

/// [|α⟩|+⟩_x − |−α⟩|−⟩_x] normalized numerically, with |±⟩_x = (|d⟩ ± |g⟩)/√2.
pub fn target_cat_state(alpha: C64, n_max: usize) -> Result<QuantumState> {
    let plus = coherent_amplitudes(alpha, n_max)?;
    let minus = coherent_amplitudes(-alpha, n_max)?;
    let sig = SpaceSignature::boson_spins(n_max, 1)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = CVector::zeros(sig.total_dim());
    for n in 0..=n_max {
        // |+⟩_x has d and g components +h; |−⟩_x has d = +h, g = −h
        v[2 * n + SPIN_D] = (plus[n] - minus[n]) * h;
        v[2 * n + SPIN_G] = (plus[n] + minus[n]) * h;
    }
    QuantumState::from_vector_normalized(sig, v)
}

/// (e^{−iπ/4}|g…g⟩ + e^{iπ/4}|d…d⟩)/√2 on `n` spins.
pub fn ghz_target(n: usize) -> Result<QuantumState> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("a GHZ state needs at least 2 spins, got {n}")));
    }
    let sig = SpaceSignature::spins(n)?;
    let mut v = CVector::zeros(sig.total_dim());
    let h = std::f64::consts::FRAC_1_SQRT_2;
    v[sig.index_of(&vec![SPIN_G; n])?] = C64::from_polar(h, -FRAC_PI_4);
    v[sig.index_of(&vec![SPIN_D; n])?] = C64::from_polar(h, FRAC_PI_4);
    QuantumState::from_vector(sig, v)
}

const CAT_QUADRATURE_TOL: f64 = 1e-8;

fn cat_coupling(params: &ModelParams) -> Result<f64> {
    params.validate()?;
    if !params.is_homogeneous() {
        return Err(Error::Unsupported("cat displacement needs identical couplings".into()));
    }
    Ok(params.lambda[0])
}

/// α(t) = (λ/2i) ∫_0^t e^{r(t') − iΓ(t,t')} dt' with Γ(t,t') = ∫_{t'}^t Δ_m(t'')dt''
/// and Δ_m(t) = δ_m / cosh 2r(t).
///
/// Γ comes from a cumulative table of Δ_m integrals over fixed panels; each
/// panel is integrated adaptively to an absolute tolerance of 1e-8 overall.
pub fn cat_alpha(params: &ModelParams, schedule: &dyn SqueezeSchedule, t: f64) -> Result<C64> {
    let lambda = cat_coupling(params)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("time must be finite and non-negative, got {t}")));
    }
    if t == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let delta_m = params.delta_m;
    let detuning = |s: f64| C64::new(delta_m / (2.0 * schedule.r(s)).cosh(), 0.0);

    // panels short enough that the phase advances by at most ~1 rad each
    let panels = ((t * delta_m.abs()).ceil() as usize).max(1);
    let width = t / panels as f64;
    let edges: Vec<f64> = (0..=panels).map(|k| k as f64 * width).collect();
    let tol = CAT_QUADRATURE_TOL / panels as f64;
    let mut cumulative = Vec::with_capacity(panels + 1);
    cumulative.push(0.0);
    for k in 0..panels {
        let step = integrate(&detuning, edges[k], edges[k + 1], 1e-3 * tol)?.re;
        cumulative.push(cumulative[k] + step);
    }
    let total = cumulative[panels];

    let mut acc = C64::new(0.0, 0.0);
    for k in 0..panels {
        let (start, base) = (edges[k], cumulative[k]);
        let integrand = |s: f64| -> C64 {
            let inner = integrate(&detuning, start, s, 1e-3 * tol).map(|z| z.re).unwrap_or(f64::NAN);
            let phase = total - (base + inner);
            C64::from_polar(schedule.r(s).exp(), -phase)
        };
        acc += integrate(&integrand, edges[k], edges[k + 1], tol)?;
    }
    Ok(acc * lambda / (2.0 * I))
}

/// Closed form of [`cat_alpha`] for constant r and Δ_m:
/// (λe^r/2i)(1 − e^{−iΔ_m t})/(iΔ_m).
pub fn cat_alpha_constant(lambda: f64, r: f64, delta_m_eff: f64, t: f64) -> C64 {
    let prefactor = lambda * r.exp() / (2.0 * I);
    if delta_m_eff == 0.0 {
        return prefactor * t;
    }
    prefactor * (C64::new(1.0, 0.0) - C64::from_polar(1.0, -delta_m_eff * t)) / (I * delta_m_eff)
}
