//! Explicit Runge–Kutta drivers over flat complex state slices.

use crate::error::{Error, Result};
use crate::hilbert::C64;

/// Time-stepping scheme.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    /// Dormand–Prince 5(4) with embedded error control.
    Adaptive { rtol: f64, atol: f64 },
    /// Classical fourth-order Runge–Kutta; each output interval is split into
    /// ⌈Δt/dt⌉ equal steps so outputs land exactly on the grid.
    FixedStep { dt: f64 },
}

impl Method {
    /// Same scheme with adaptive tolerances scaled for norm preservation.
    pub fn for_state_vector(self) -> Self {
        match self {
            Method::Adaptive { rtol, atol } => Method::Adaptive {
                rtol: rtol * super::VECTOR_TOLERANCE_FACTOR,
                atol: atol * super::VECTOR_TOLERANCE_FACTOR,
            },
            fixed => fixed,
        }
    }
}

impl Default for Method {
    fn default() -> Self {
        Method::Adaptive { rtol: 1e-8, atol: 1e-10 }
    }
}

/// Counters reported with every run.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evaluations: usize,
    pub min_step: f64,
    pub max_step: f64,
}

impl StepStats {
    fn record(&mut self, h: f64) {
        self.accepted += 1;
        if self.accepted == 1 {
            self.min_step = h;
            self.max_step = h;
        } else {
            self.min_step = self.min_step.min(h);
            self.max_step = self.max_step.max(h);
        }
    }
}

pub(crate) const MAX_STEPS: usize = 50_000_000;

fn axpy_into(out: &mut [C64], y: &[C64], h: f64, terms: &[(f64, &[C64])]) {
    for i in 0..out.len() {
        let mut acc = C64::new(0.0, 0.0);
        for (w, k) in terms {
            acc += k[i] * *w;
        }
        out[i] = y[i] + acc * h;
    }
}

/// Integrates `y' = f(t, y)` across `times`, calling `output(k, t_k, y)` at
/// every grid point and `post_step(y)` after every accepted step.
pub(crate) fn integrate<F, P, O>(
    mut f: F,
    mut y: Vec<C64>,
    times: &[f64],
    method: Method,
    mut post_step: P,
    mut output: O,
) -> Result<StepStats>
where
    F: FnMut(f64, &[C64], &mut [C64]),
    P: FnMut(&mut [C64]),
    O: FnMut(usize, f64, &[C64]) -> Result<()>,
{
    check_grid(times)?;
    output(0, times[0], &y)?;
    match method {
        Method::Adaptive { rtol, atol } => {
            if !(rtol > 0.0 && atol > 0.0) {
                return Err(Error::InvalidParameter("integrator tolerances must be positive".into()));
            }
            dopri5(&mut f, &mut y, times, rtol, atol, &mut post_step, &mut output)
        }
        Method::FixedStep { dt } => {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::InvalidParameter(format!("fixed step must be positive, got {dt}")));
            }
            rk4(&mut f, &mut y, times, dt, &mut post_step, &mut output)
        }
    }
}

fn check_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidParameter("time grid is empty".into()));
    }
    if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("time grid must be finite and strictly increasing".into()));
    }
    Ok(())
}

fn rk4<F, P, O>(f: &mut F, y: &mut [C64], times: &[f64], dt: f64, post: &mut P, output: &mut O) -> Result<StepStats>
where
    F: FnMut(f64, &[C64], &mut [C64]),
    P: FnMut(&mut [C64]),
    O: FnMut(usize, f64, &[C64]) -> Result<()>,
{
    let n = y.len();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (
        vec![C64::default(); n],
        vec![C64::default(); n],
        vec![C64::default(); n],
        vec![C64::default(); n],
        vec![C64::default(); n],
    );
    let mut stats = StepStats::default();
    for (idx, w) in times.windows(2).enumerate() {
        let span = w[1] - w[0];
        let steps = (span / dt - 1e-9).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        for s in 0..steps {
            let t = w[0] + s as f64 * h;
            f(t, y, &mut k1);
            axpy_into(&mut tmp, y, h / 2.0, &[(1.0, &k1)]);
            f(t + h / 2.0, &tmp, &mut k2);
            axpy_into(&mut tmp, y, h / 2.0, &[(1.0, &k2)]);
            f(t + h / 2.0, &tmp, &mut k3);
            axpy_into(&mut tmp, y, h, &[(1.0, &k3)]);
            f(t + h, &tmp, &mut k4);
            for i in 0..n {
                y[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
            }
            post(y);
            stats.rhs_evaluations += 4;
            stats.record(h);
            if stats.accepted > MAX_STEPS {
                return Err(Error::Numerical("fixed-step run exceeded the step budget".into()));
            }
        }
        output(idx + 1, w[1], y)?;
    }
    Ok(stats)
}

mod tableau {
    pub const C2: f64 = 1.0 / 5.0;
    pub const C3: f64 = 3.0 / 10.0;
    pub const C4: f64 = 4.0 / 5.0;
    pub const C5: f64 = 8.0 / 9.0;
    pub const A21: f64 = 1.0 / 5.0;
    pub const A31: f64 = 3.0 / 40.0;
    pub const A32: f64 = 9.0 / 40.0;
    pub const A41: f64 = 44.0 / 45.0;
    pub const A42: f64 = -56.0 / 15.0;
    pub const A43: f64 = 32.0 / 9.0;
    pub const A51: f64 = 19372.0 / 6561.0;
    pub const A52: f64 = -25360.0 / 2187.0;
    pub const A53: f64 = 64448.0 / 6561.0;
    pub const A54: f64 = -212.0 / 729.0;
    pub const A61: f64 = 9017.0 / 3168.0;
    pub const A62: f64 = -355.0 / 33.0;
    pub const A63: f64 = 46732.0 / 5247.0;
    pub const A64: f64 = 49.0 / 176.0;
    pub const A65: f64 = -5103.0 / 18656.0;
    pub const B1: f64 = 35.0 / 384.0;
    pub const B3: f64 = 500.0 / 1113.0;
    pub const B4: f64 = 125.0 / 192.0;
    pub const B5: f64 = -2187.0 / 6784.0;
    pub const B6: f64 = 11.0 / 84.0;
    pub const E1: f64 = 71.0 / 57600.0;
    pub const E3: f64 = -71.0 / 16695.0;
    pub const E4: f64 = 71.0 / 1920.0;
    pub const E5: f64 = -17253.0 / 339200.0;
    pub const E6: f64 = 22.0 / 525.0;
    pub const E7: f64 = -1.0 / 40.0;
}

fn dopri5<F, P, O>(
    f: &mut F,
    y: &mut Vec<C64>,
    times: &[f64],
    rtol: f64,
    atol: f64,
    post: &mut P,
    output: &mut O,
) -> Result<StepStats>
where
    F: FnMut(f64, &[C64], &mut [C64]),
    P: FnMut(&mut [C64]),
    O: FnMut(usize, f64, &[C64]) -> Result<()>,
{
    use tableau::*;
    let n = y.len();
    let z = C64::default();
    let mut k: Vec<Vec<C64>> = (0..7).map(|_| vec![z; n]).collect();
    let mut tmp = vec![z; n];
    let mut y_new = vec![z; n];
    let mut stats = StepStats::default();

    let mut t = times[0];
    f(t, y, &mut k[0]);
    stats.rhs_evaluations += 1;
    let mut h = initial_step(y, &k[0], rtol, atol, times[times.len() - 1] - t);
    let mut last_rejected = false;

    for (idx, &t_out) in times.iter().enumerate().skip(1) {
        while t < t_out {
            let remaining = t_out - t;
            let hitting = h >= remaining * (1.0 - 1e-12);
            let step = if hitting { remaining } else { h };
            if step <= 1e-14 * t.abs().max(1.0) {
                return Err(Error::Numerical(format!("step size underflow at t = {t}")));
            }

            let (k0, rest) = k.split_at_mut(1);
            let k0 = &k0[0];
            axpy_into(&mut tmp, y, step, &[(A21, k0)]);
            f(t + C2 * step, &tmp, &mut rest[0]);
            axpy_into(&mut tmp, y, step, &[(A31, k0), (A32, &rest[0])]);
            f(t + C3 * step, &tmp, &mut rest[1]);
            axpy_into(&mut tmp, y, step, &[(A41, k0), (A42, &rest[0]), (A43, &rest[1])]);
            f(t + C4 * step, &tmp, &mut rest[2]);
            axpy_into(&mut tmp, y, step, &[(A51, k0), (A52, &rest[0]), (A53, &rest[1]), (A54, &rest[2])]);
            f(t + C5 * step, &tmp, &mut rest[3]);
            axpy_into(
                &mut tmp,
                y,
                step,
                &[(A61, k0), (A62, &rest[0]), (A63, &rest[1]), (A64, &rest[2]), (A65, &rest[3])],
            );
            f(t + step, &tmp, &mut rest[4]);
            axpy_into(&mut y_new, y, step, &[(B1, k0), (B3, &rest[1]), (B4, &rest[2]), (B5, &rest[3]), (B6, &rest[4])]);
            f(t + step, &y_new, &mut rest[5]);
            stats.rhs_evaluations += 6;

            // max norm: an RMS would dilute errors over structurally zero entries
            let mut err = 0.0f64;
            for i in 0..n {
                let e = (k0[i] * E1
                    + rest[1][i] * E3
                    + rest[2][i] * E4
                    + rest[3][i] * E5
                    + rest[4][i] * E6
                    + rest[5][i] * E7)
                    * step;
                let scale = atol + rtol * y[i].norm_sqr().max(y_new[i].norm_sqr()).sqrt();
                err = err.max(e.norm_sqr().sqrt() / scale);
            }
            if !err.is_finite() {
                return Err(Error::Numerical(format!("non-finite error estimate at t = {t}")));
            }

            if err <= 1.0 {
                t = if hitting { t_out } else { t + step };
                std::mem::swap(y, &mut y_new);
                post(y);
                k.swap(0, 6);
                stats.record(step);
                let mut factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if last_rejected {
                    factor = factor.min(1.0);
                }
                last_rejected = false;
                // a step shortened to land on an output must not shrink the next one
                h = if hitting { h.max(step * factor) } else { step * factor };
            } else {
                stats.rejected += 1;
                last_rejected = true;
                h = step * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            }
            if stats.accepted + stats.rejected > MAX_STEPS {
                return Err(Error::Numerical("adaptive run exceeded the step budget".into()));
            }
        }
        output(idx, t_out, y)?;
    }
    Ok(stats)
}

/// Starting step from the first-derivative scale (Hairer, Nørsett & Wanner).
fn initial_step(y: &[C64], dy: &[C64], rtol: f64, atol: f64, span: f64) -> f64 {
    let n = y.len() as f64;
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for (a, b) in y.iter().zip(dy) {
        let sc = atol + rtol * a.norm();
        d0 += (a.norm() / sc).powi(2);
        d1 += (b.norm() / sc).powi(2);
    }
    let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(span.abs()).max(1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay(method: Method) -> (Vec<f64>, StepStats) {
        let times: Vec<f64> = (0..=10).map(|k| k as f64 * 0.5).collect();
        let mut out = Vec::new();
        let stats = integrate(
            |_, y, dy| dy[0] = -y[0] * C64::new(0.3, 2.0),
            vec![C64::new(1.0, 0.0)],
            &times,
            method,
            |_| {},
            |_, t, y| {
                let exact = (-C64::new(0.3, 2.0) * t).exp();
                out.push((y[0] - exact).norm());
                Ok(())
            },
        )
        .unwrap();
        (out, stats)
    }

    #[test]
    fn adaptive_meets_tolerance() {
        let (errs, stats) = decay(Method::default());
        assert!(errs.iter().all(|&e| e < 1e-8), "{errs:?}");
        assert!(stats.accepted > 10);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let (coarse, _) = decay(Method::FixedStep { dt: 0.02 });
        let (fine, _) = decay(Method::FixedStep { dt: 0.01 });
        let ratio = coarse.last().unwrap() / fine.last().unwrap();
        assert!((13.0..19.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn rejects_bad_grids() {
        let r = integrate(|_, _, _| {}, vec![C64::default()], &[0.0, 0.0], Method::default(), |_| {}, |_, _, _| Ok(()));
        assert!(r.is_err());
        let r = integrate(|_, _, _| {}, vec![C64::default()], &[], Method::default(), |_| {}, |_, _, _| Ok(()));
        assert!(r.is_err());
    }
}
