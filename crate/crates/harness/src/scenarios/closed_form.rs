//! Scenarios evaluated from closed forms only.

use spinmech::models::{
    cantilever_params, coupling_enhancement, ising_strength, lamb_dicke_boundary, magnetic_coupling, pump_amplitude,
    spin_spin_enhancement, spring_modulation, squeezing_from_pump_ratio, DeviceParams,
};

use super::label;
use crate::error::{HarnessError, Result};
use crate::params::{ParamSpec, Params, Section};
use crate::registry::{Context, Outcome};
use crate::table::Table;

pub fn fig3_params() -> Vec<ParamSpec> {
    vec![
        ParamSpec::float(Section::Model, "r_max", 5.0, "largest squeezing parameter"),
        ParamSpec::int(Section::Model, "r_points", 501, "samples in r"),
        ParamSpec::float(Section::Model, "pump_min", 0.9, "smallest Ω_p/δ_m"),
        ParamSpec::int(Section::Model, "pump_points", 1000, "samples of Ω_p/δ_m in [pump_min, 1)"),
        ParamSpec::float(Section::Model, "lambda0", 0.1, "spin-spin coupling Λ₀ without the pump"),
        ParamSpec::list(Section::Model, "eta", &[0.2, 0.1], "Lamb-Dicke constraints"),
    ]
}

/// Λ/Λ₀ when δ_m sits on the Lamb–Dicke boundary for `eta`.
fn constrained_ratio(r: f64, eta: f64, lambda0: f64) -> f64 {
    ising_strength(r, 1.0, lamb_dicke_boundary(r, eta, 1.0)) / lambda0
}

fn samples(start: f64, end: f64, count: usize, include_end: bool) -> Vec<f64> {
    let denom = if include_end { (count - 1).max(1) } else { count } as f64;
    (0..count).map(|k| start + (end - start) * k as f64 / denom).collect()
}

pub fn fig3(ctx: &Context) -> Result<Outcome> {
    let p = ctx.params;
    let etas = p.list("eta")?;
    if etas.iter().any(|&e| e.is_nan() || e <= 0.0) {
        return Err(HarnessError::config("eta values must be positive"));
    }
    let lambda0 = p.positive("lambda0")?;
    let eta_columns: Vec<String> = etas.iter().map(|e| format!("ratio_eta_{}", label(*e))).collect();

    let mut columns: Vec<String> =
        ["r", "spin_spin_enhancement", "coupling_enhancement", "cooperativity_enhancement"].map(String::from).to_vec();
    columns.extend(eta_columns.iter().cloned());
    let mut vs_r = Table::with_columns("fig3_vs_r", columns);
    for r in samples(0.0, p.positive("r_max")?, p.count("r_points", 2)?, true) {
        let mut row = vec![r, spin_spin_enhancement(r), coupling_enhancement(r), (2.0 * r).exp() / 4.0];
        row.extend(etas.iter().map(|&e| constrained_ratio(r, e, lambda0)));
        vs_r.push(row);
    }

    let pump_min = p.float("pump_min")?;
    if !(0.0..1.0).contains(&pump_min) {
        return Err(HarnessError::config(format!("pump_min must lie in [0, 1), got {pump_min}")));
    }
    let mut columns: Vec<String> = ["pump_ratio", "r", "spin_spin_enhancement"].map(String::from).to_vec();
    columns.extend(eta_columns);
    let mut vs_pump = Table::with_columns("fig3_vs_pump", columns);
    for x in samples(pump_min, 1.0, p.count("pump_points", 1)?, false) {
        let r = squeezing_from_pump_ratio(x)?;
        let mut row = vec![x, r, spin_spin_enhancement(r)];
        row.extend(etas.iter().map(|&e| constrained_ratio(r, e, lambda0)));
        vs_pump.push(row);
    }
    Ok(Outcome { tables: vec![vs_r, vs_pump], ..Outcome::default() })
}

pub fn figs5_params() -> Vec<ParamSpec> {
    vec![
        ParamSpec::float(Section::Model, "r_max", 3.0, "largest squeezing parameter"),
        ParamSpec::int(Section::Model, "r_points", 301, "samples in r"),
        ParamSpec::list(Section::Model, "eta", &[0.2, 0.1], "Lamb-Dicke constraints"),
    ]
}

/// δ_m on the Lamb–Dicke boundary; the admissible region lies above each curve.
pub fn figs5(ctx: &Context) -> Result<Outcome> {
    let p = ctx.params;
    let etas = p.list("eta")?;
    if etas.iter().any(|&e| e.is_nan() || e <= 0.0) {
        return Err(HarnessError::config("eta values must be positive"));
    }
    let mut columns = vec!["r".to_string()];
    columns.extend(etas.iter().map(|e| format!("delta_m_eta_{}", label(*e))));
    let mut table = Table::with_columns("figS5", columns);
    for r in samples(0.0, p.positive("r_max")?, p.count("r_points", 2)?, true) {
        let mut row = vec![r];
        row.extend(etas.iter().map(|&e| lamb_dicke_boundary(r, e, 1.0)));
        table.push(row);
    }
    Ok(Outcome { tables: vec![table], ..Outcome::default() })
}

pub fn figs1_params() -> Vec<ParamSpec> {
    let d = DeviceParams::silicon_cantilever();
    vec![
        ParamSpec::float(Section::Device, "length", d.length, "cantilever length, m"),
        ParamSpec::float(Section::Device, "width", d.width, "cantilever width, m"),
        ParamSpec::float(Section::Device, "thickness", d.thickness, "cantilever thickness, m"),
        ParamSpec::float(Section::Device, "youngs_modulus", d.youngs_modulus, "Young's modulus, Pa"),
        ParamSpec::float(Section::Device, "density", d.density, "mass density, kg/m³"),
        ParamSpec::float(Section::Device, "magnet_gradient", d.magnet_gradient, "field gradient, T/m"),
        ParamSpec::float(Section::Device, "voltage_dc", d.voltage_dc, "static voltage V₀, V"),
        ParamSpec::float(Section::Device, "voltage_ac", d.voltage_ac, "pump voltage V_p, V"),
        ParamSpec::float(Section::Device, "permittivity", d.permittivity, "gap permittivity, F/m"),
        ParamSpec::float(Section::Device, "plate_area", d.plate_area, "electrode area, m²"),
        ParamSpec::float(Section::Device, "gap", d.gap, "reference electrode gap, m"),
        ParamSpec::float(Section::Device, "n_th", d.n_th, "thermal phonon number"),
        ParamSpec::float(Section::Device, "quality_factor", d.quality_factor, "mechanical quality factor"),
        ParamSpec::float(Section::Device, "z_zpf", 2.14e-13, "zero-point amplitude used for the pump, m"),
        ParamSpec::float(Section::Model, "gap_min", 20e-9, "smallest gap, m"),
        ParamSpec::float(Section::Model, "gap_max", 1e-6, "largest gap, m"),
        ParamSpec::int(Section::Model, "points", 200, "gap samples"),
    ]
}

pub fn device_from(p: &Params) -> Result<DeviceParams> {
    let device = DeviceParams {
        length: p.float("length")?,
        width: p.float("width")?,
        thickness: p.float("thickness")?,
        youngs_modulus: p.float("youngs_modulus")?,
        density: p.float("density")?,
        magnet_gradient: p.float("magnet_gradient")?,
        voltage_dc: p.float("voltage_dc")?,
        voltage_ac: p.float("voltage_ac")?,
        permittivity: p.float("permittivity")?,
        plate_area: p.float("plate_area")?,
        gap: p.float("gap")?,
        n_th: p.float("n_th")?,
        quality_factor: p.float("quality_factor")?,
    };
    device.validate()?;
    Ok(device)
}

pub fn figs1(ctx: &Context) -> Result<Outcome> {
    let p = ctx.params;
    let device = device_from(p)?;
    let z_zpf = p.positive("z_zpf")?;
    let (gap_min, gap_max) = (p.positive("gap_min")?, p.positive("gap_max")?);
    if gap_min >= gap_max {
        return Err(HarnessError::config("gap_min must be below gap_max"));
    }
    let mut table = Table::new("figS1", &["gap", "delta_k", "omega_p", "omega_p_over_2pi"]);
    for gap in samples(gap_min, gap_max, p.count("points", 2)?, true) {
        let d = DeviceParams { gap, ..device.clone() };
        let omega_p = pump_amplitude(&d, z_zpf)?;
        table.push(vec![gap, spring_modulation(&d)?, omega_p, omega_p / std::f64::consts::TAU]);
    }
    let mode = cantilever_params(&device)?;
    let mut outcome = Outcome { tables: vec![table], ..Outcome::default() };
    outcome.record_f64("omega_m", mode.omega_m);
    outcome.record_f64("mass", mode.mass);
    outcome.record_f64("z_zpf_beam", mode.z_zpf);
    outcome.record_f64("lambda_magnetic", magnetic_coupling(&device, mode.z_zpf, std::f64::consts::FRAC_PI_2)?);
    outcome.record_f64("omega_p_reference_gap", pump_amplitude(&device, z_zpf)?);
    Ok(outcome)
}
