//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero when any
//! criterion fails.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::time::Instant;

use spinmech::dynamics::{evolve_lindblad, evolve_unitary, linear_grid, CollapseChannel, EvolveOptions, Observable};
use spinmech::hilbert::{CMatrix, CVector, QuantumState, SpaceSignature, C64};
use spinmech::metrics::{spin_squeezing, SpinFrame};
use spinmech::models::{
    cantilever_params, cooperativity, coupling_enhancement, magnetic_coupling, spin_spin_enhancement, DeviceParams,
    ModeOperators,
};
use spinmech::transforms::expm::expm;
use spinmech_harness::scenarios::squeezing::{OatModel, Representation};
use spinmech_harness::{execute, Outcome, ScenarioConfig};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn run(id: &str) -> Result<Outcome, String> {
    execute(&ScenarioConfig::new(id).map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn derived(outcome: &Outcome, key: &str) -> f64 {
    outcome.derived.get(key).and_then(|v| v.as_float()).unwrap_or(f64::NAN)
}

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn enhancement_formulas() -> Verdict {
    let mut worst = 0.0_f64;
    for k in 0..=500 {
        let r = 5.0 * k as f64 / 500.0;
        let coop = cooperativity(1.0, 0.1, 0.1, r, 0.1).map_err(|e| e.to_string())?;
        for (got, want) in [
            (coupling_enhancement(r), r.exp() / 2.0),
            (coop.ratio, (2.0 * r).exp() / 4.0),
            (spin_spin_enhancement(r), (1.0 + (4.0 * r).exp()) / 2.0),
        ] {
            worst = worst.max((got - want).abs() / want.abs());
        }
    }
    let at_133 = spin_spin_enhancement(1.33);
    check(worst <= 1e-12 && at_133 > 100.0, format!("max relative error {worst:.1e}, Λ/Λ₀(1.33) = {at_133:.1}"))
}

fn device_numbers() -> Verdict {
    let device = DeviceParams::silicon_cantilever();
    let mode = cantilever_params(&device).map_err(|e| e.to_string())?;
    let f_err = (mode.omega_m / (TAU * 11e6) - 1.0).abs();
    let z_err = (mode.z_zpf / 2.14e-13 - 1.0).abs();
    let lambda = magnetic_coupling(&device, mode.z_zpf, FRAC_PI_2).map_err(|e| e.to_string())?.abs() / TAU;
    let factor = (lambda / 100e3).max(100e3 / lambda);
    check(
        f_err <= 0.05 && z_err <= 0.02 && factor <= 2.0,
        format!(
            "ω_m/2π = {:.3} MHz, z_zpf = {:.3e} m, |λ|/2π = {:.1} kHz",
            mode.omega_m / TAU / 1e6,
            mode.z_zpf,
            lambda / 1e3
        ),
    )
}

fn cat_fidelities() -> Verdict {
    let o = run("figS8")?;
    let bands = [("0.001", 0.99, 1.0), ("0.01", 0.95, 0.99), ("0.05", 0.85, 0.91)];
    let mut ok = true;
    let mut detail = Vec::new();
    for (g, lo, hi) in bands {
        for frame in ["total", "rabi"] {
            let f = derived(&o, &format!("final_fidelity_{frame}_gamma{g}"));
            ok &= f >= lo && f <= hi;
            detail.push(format!("{frame}@{g}: {f:.4}"));
        }
    }
    check(ok, detail.join(", "))
}

fn frame_equivalence() -> Verdict {
    let o = run("figS2")?;
    let (n, s) = (derived(&o, "max_deviation_n_phonon"), derived(&o, "max_deviation_sigma_z"));
    check(n < 0.05 && s < 0.05, format!("max deviation ⟨a†a⟩ {n:.4}, ⟨σ_z⟩ {s:.4}"))
}

fn ising_reduction() -> Verdict {
    let o = run("figS6")?;
    let (clean, dis) = (derived(&o, "max_deviation_clean"), derived(&o, "max_deviation_disorder"));
    check(clean < 0.05 && dis < 0.05, format!("max deviation clean {clean:.4}, with disorder {dis:.4}"))
}

fn cubic_residual() -> Verdict {
    let o = run("sw-check")?;
    let row = &o.tables[0].rows[0];
    let ratio = row[3];
    check((6.0..=10.0).contains(&ratio), format!("residuals {:.2e} and {:.2e}, ratio {ratio}", row[1], row[2]))
}

/// 4 min_β Var(cos β J₁ + sin β J₂)/N from a β grid refined by golden section.
fn xi_s_sq_by_grid(state: &QuantumState, n: usize) -> f64 {
    let frame = SpinFrame::new(state, n).unwrap();
    let j1 = frame.component(frame.n1);
    let j2 = frame.component(frame.n2);
    let e = |a: &spinmech::hilbert::Operator, b: &spinmech::hilbert::Operator| state.expectation(&(a * b)).unwrap().re;
    let (a11, a22, a12, a21) = (e(&j1, &j1), e(&j2, &j2), e(&j1, &j2), e(&j2, &j1));
    let var = |b: f64| {
        let (c, s) = (b.cos(), b.sin());
        c * c * a11 + s * s * a22 + c * s * (a12 + a21)
    };
    let points = 10_000;
    let step = PI / points as f64;
    let k = (0..points).min_by(|&i, &j| var(i as f64 * step).total_cmp(&var(j as f64 * step))).unwrap();
    let (mut lo, mut hi) = ((k as f64 - 1.0) * step, (k as f64 + 1.0) * step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    while hi - lo > 1e-12 {
        let (c, d) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if var(c) < var(d) {
            hi = d;
        } else {
            lo = c;
        }
    }
    4.0 * var(0.5 * (lo + hi)) / n as f64
}

fn spin_squeezing_criterion() -> Verdict {
    let o = run("fig4")?;
    let minima = o.table("fig4_minima").ok_or("missing fig4_minima")?;
    let mut ok = true;
    let mut gain_err = 0.0_f64;
    for r in ["0", "0.5", "1"] {
        let t = o.table(&format!("fig4_r{r}")).ok_or("missing r table")?;
        let xs = t.column("xi_s_sq").unwrap();
        let xr = t.column("xi_r_sq").unwrap();
        let gain = t.column("gain").unwrap();
        ok &= xs.iter().any(|&x| x < 1.0) && xr.iter().any(|&x| x < 1.0);
        for (g, x) in gain.iter().zip(&xr) {
            if x.is_finite() {
                gain_err = gain_err.max((g * x - 1.0).abs());
            }
        }
    }
    let mins = minima.column("xi_r_sq_min").unwrap();
    let monotone = mins.windows(2).all(|w| w[1] < w[0]);

    let model = OatModel::new(6, 0.1, &[0.001; 6]).map_err(|e| e.to_string())?;
    let states = model
        .evolve(None, &linear_grid(6.0, 12), &EvolveOptions::default(), Representation::Density)
        .map_err(|e| e.to_string())?;
    let mut oracle_err = 0.0_f64;
    for s in states.iter().skip(1) {
        let closed = spin_squeezing(s, 6).map_err(|e| e.to_string())?.xi_s_sq;
        oracle_err = oracle_err.max((closed - xi_s_sq_by_grid(s, 6)).abs());
    }
    check(
        ok && monotone && gain_err <= 1e-12 && oracle_err <= 1e-8,
        format!("min ξ_R² {mins:?}, |gain·ξ_R² − 1| ≤ {gain_err:.1e}, closed form vs β grid {oracle_err:.1e}"),
    )
}

fn ghz_criterion() -> Verdict {
    let o = run("figS9")?;
    let t = o.table("figS9_readout").ok_or("missing readout table")?;
    let (eta, closed) = (t.column("eta").unwrap(), t.column("fidelity_closed").unwrap());
    let (f, c) = (t.column("fidelity_fixed").unwrap(), t.column("concurrence_fixed").unwrap());
    let closed_ok = eta.iter().zip(&closed).all(|(e, f)| *e > 0.1 || *f >= 0.99);
    let rising = |v: &[f64]| v.windows(2).all(|w| w[1] > w[0]);
    check(closed_ok && rising(&f) && rising(&c), format!("closed F {closed:.4?}, fixed-time F {f:.4?}, C {c:.4?}"))
}

fn solver_certification() -> Verdict {
    let mut drift = 0.0_f64;
    // ⟨n⟩ = e^{−κt} from |1⟩
    let sig = SpaceSignature::boson(6).map_err(|e| e.to_string())?;
    let ops = ModeOperators::new(&sig).map_err(|e| e.to_string())?;
    let kappa = 0.7;
    let times = linear_grid(5.0, 50);
    let one = QuantumState::basis(&sig, &[1]).map_err(|e| e.to_string())?.to_density();
    let zero_h = ops.number.scale_re(0.0);
    let traj = evolve_lindblad(
        &zero_h,
        &[CollapseChannel::new(ops.a.clone(), kappa).map_err(|e| e.to_string())?],
        &one,
        &times,
        &[Observable::new("n", ops.number.clone())],
        &EvolveOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    drift = drift.max(traj.diagnostics.max_drift);
    let decay_err = traj
        .real_series("n")
        .unwrap()
        .iter()
        .zip(&times)
        .map(|(n, t)| (n - (-kappa * t).exp()).abs())
        .fold(0.0, f64::max);

    // unitary against e^{−iHt} on a random Hermitian H
    let sig = SpaceSignature::boson_spins(4, 2).map_err(|e| e.to_string())?;
    let d = sig.total_dim();
    let mut seed = 12345u64;
    let mut next = || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let raw = CMatrix::from_fn(d, d, |_, _| C64::new(next(), next()));
    let h = (&raw + raw.adjoint()) * C64::new(0.5, 0.0);
    let h_op = spinmech::hilbert::Operator::new(sig.clone(), h.clone()).map_err(|e| e.to_string())?;
    let psi0 = QuantumState::basis(&sig, &[0, 1, 1]).map_err(|e| e.to_string())?;
    let times = linear_grid(3.0, 30);
    let traj =
        evolve_unitary(&h_op, &psi0, &times, &[], &EvolveOptions::default().recording()).map_err(|e| e.to_string())?;
    drift = drift.max(traj.diagnostics.max_drift);
    let v0: CVector = psi0.as_vector().unwrap().clone();
    let mut unitary_err = 0.0_f64;
    for (t, s) in times.iter().zip(traj.states.as_ref().unwrap()) {
        let exact = expm(&(&h * C64::new(0.0, -t))) * &v0;
        unitary_err = unitary_err.max((s.as_vector().unwrap() - exact).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }

    // every accepted run of a dissipative scenario
    for id in ["fig2b", "figS3"] {
        let o = run(id)?;
        for (k, v) in &o.derived {
            if k.starts_with("max_drift_") {
                drift = drift.max(v.as_float().unwrap_or(f64::INFINITY));
            }
        }
    }
    check(
        decay_err <= 1e-6 && unitary_err <= 1e-8 && drift <= 1e-8,
        format!("decay error {decay_err:.1e}, unitary vs expm {unitary_err:.1e}, max trace drift {drift:.1e}"),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("enhancement formulas", enhancement_formulas),
        ("device numbers", device_numbers),
        ("cat-state fidelities", cat_fidelities),
        ("squeezed-frame equivalence", frame_equivalence),
        ("Ising-vs-Rabi reduction", ising_reduction),
        ("cubic residual of the spin-spin reduction", cubic_residual),
        ("spin squeezing", spin_squeezing_criterion),
        ("GHZ readout", ghz_criterion),
        ("solver certification", solver_certification),
    ];
    let mut failed = 0;
    for (k, (name, criterion)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let verdict = criterion();
        let secs = started.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail} ({secs:.1} s)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {detail} ({secs:.1} s)", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
