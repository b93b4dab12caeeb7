//! Device-level formulas in SI units: cantilever mode, capacitive pump,
//! magnetic and strain couplings, and the microwave-dressed NV qubit.
//!
//! Every function returns angular frequencies in rad/s; divide by a chosen
//! coupling with [`to_lambda_units`] to enter the dimensionless model.

use nalgebra::{Matrix2, Matrix3, Vector3};

use crate::error::{Error, Result};

pub const HBAR: f64 = 1.054_571_817e-34;
pub const PLANCK: f64 = 6.626_070_15e-34;
pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
pub const ELECTRON_G: f64 = 2.0;
/// Strain susceptibility prefactor of the NV |±1⟩ transition, in Hz.
pub const STRAIN_SUSCEPTIBILITY_HZ: f64 = 180e9;
/// Fundamental-mode eigenvalue factor of a clamped-free beam.
pub const CANTILEVER_MODE_FACTOR: f64 = 3.516;

/// Geometry, material and drive of a cantilever device.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviceParams {
    pub length: f64,
    pub width: f64,
    pub thickness: f64,
    pub youngs_modulus: f64,
    pub density: f64,
    /// Magnetic field gradient G_m at the spin, T/m.
    pub magnet_gradient: f64,
    pub voltage_dc: f64,
    pub voltage_ac: f64,
    pub permittivity: f64,
    pub plate_area: f64,
    pub gap: f64,
    pub n_th: f64,
    pub quality_factor: f64,
}

impl DeviceParams {
    /// Silicon cantilever with a magnetic tip and a parallel-plate pump
    /// electrode; the gap is a representative 100 nm.
    pub fn silicon_cantilever() -> Self {
        Self {
            length: 6e-6,
            width: 0.1e-6,
            thickness: 0.05e-6,
            youngs_modulus: 1.3e11,
            density: 2.33e3,
            magnet_gradient: 1.7e7,
            voltage_dc: 10.0,
            voltage_ac: 2.0,
            permittivity: VACUUM_PERMITTIVITY,
            plate_area: 1.0e-6 * 0.1e-6,
            gap: 100e-9,
            n_th: 100.0,
            quality_factor: 1e6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("length", self.length),
            ("width", self.width),
            ("thickness", self.thickness),
            ("youngs_modulus", self.youngs_modulus),
            ("density", self.density),
            ("magnet_gradient", self.magnet_gradient),
            ("voltage_dc", self.voltage_dc),
            ("permittivity", self.permittivity),
            ("plate_area", self.plate_area),
            ("gap", self.gap),
            ("n_th", self.n_th),
            ("quality_factor", self.quality_factor),
        ];
        for (name, value) in fields {
            positive(name, value)?;
        }
        if !(self.voltage_ac >= 0.0 && self.voltage_ac.is_finite()) {
            return Err(Error::InvalidParameter(format!("voltage_ac must be ≥ 0, got {}", self.voltage_ac)));
        }
        Ok(())
    }
}

fn positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {value}")))
    }
}

/// Fundamental mode of the cantilever.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CantileverMode {
    /// Angular frequency ω_m, rad/s.
    pub omega_m: f64,
    /// Effective mass M = ϱlwt/4, kg.
    pub mass: f64,
    /// Zero-point amplitude √(ħ/2Mω_m), m.
    pub z_zpf: f64,
}

/// ω_m = 2π · 3.516 (t/l²) √(E/12ϱ), M = ϱlwt/4, z_zpf = √(ħ/2Mω_m).
///
/// The beam formula gives the mode frequency in Hz; it is converted to an
/// angular frequency before entering z_zpf.
pub fn cantilever_params(device: &DeviceParams) -> Result<CantileverMode> {
    for (name, value) in [
        ("length", device.length),
        ("width", device.width),
        ("thickness", device.thickness),
        ("youngs_modulus", device.youngs_modulus),
        ("density", device.density),
    ] {
        positive(name, value)?;
    }
    let frequency = CANTILEVER_MODE_FACTOR
        * (device.thickness / (device.length * device.length))
        * (device.youngs_modulus / (12.0 * device.density)).sqrt();
    let omega_m = std::f64::consts::TAU * frequency;
    let mass = device.density * device.length * device.width * device.thickness / 4.0;
    let z_zpf = (HBAR / (2.0 * mass * omega_m)).sqrt();
    Ok(CantileverMode { omega_m, mass, z_zpf })
}

/// Thermal mechanical damping Γ_m = n_th ω_m / Q, rad/s.
pub fn mechanical_damping(device: &DeviceParams, omega_m: f64) -> Result<f64> {
    positive("omega_m", omega_m)?;
    positive("n_th", device.n_th)?;
    positive("quality_factor", device.quality_factor)?;
    Ok(device.n_th * omega_m / device.quality_factor)
}

/// Spring-constant modulation Δk = 2V₀V_pεS/d², N/m.
pub fn spring_modulation(device: &DeviceParams) -> Result<f64> {
    positive("gap", device.gap)?;
    Ok(2.0 * device.voltage_dc * device.voltage_ac * device.permittivity * device.plate_area
        / (device.gap * device.gap))
}

/// Magnitude of the two-phonon drive, Ω_p = |Δk| z_zpf² / (2ħ), rad/s.
pub fn pump_amplitude(device: &DeviceParams, z_zpf: f64) -> Result<f64> {
    positive("z_zpf", z_zpf)?;
    Ok(spring_modulation(device)?.abs() * z_zpf * z_zpf / (2.0 * HBAR))
}

/// λ = −μ_B g_e G_m z_zpf sin θ / ħ, rad/s.
pub fn magnetic_coupling(device: &DeviceParams, z_zpf: f64, theta: f64) -> Result<f64> {
    positive("magnet_gradient", device.magnet_gradient)?;
    positive("z_zpf", z_zpf)?;
    Ok(-BOHR_MAGNETON * ELECTRON_G * device.magnet_gradient * z_zpf * theta.sin() / HBAR)
}

/// Strain coupling of an NV at depth d_j = depth_fraction·h below the
/// surface of a beam of thickness h:
/// λ/2π = 180 GHz × (2d_j/h) √(ħ / (l³ w √(Eϱ))), returned in rad/s.
pub fn strain_coupling(device: &DeviceParams, depth_fraction: f64) -> Result<f64> {
    positive("depth_fraction", depth_fraction)?;
    for (name, value) in [
        ("length", device.length),
        ("width", device.width),
        ("thickness", device.thickness),
        ("youngs_modulus", device.youngs_modulus),
        ("density", device.density),
    ] {
        positive(name, value)?;
    }
    let strain_zpf =
        (HBAR / (device.length.powi(3) * device.width * (device.youngs_modulus * device.density).sqrt())).sqrt();
    let depth = depth_fraction * device.thickness;
    Ok(std::f64::consts::TAU * STRAIN_SUSCEPTIBILITY_HZ * 2.0 * depth * strain_zpf / device.thickness)
}

/// Converts a rate in rad/s to units of the coupling `lambda`.
pub fn to_lambda_units(rate: f64, lambda: f64) -> Result<f64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!("reference coupling must be finite and nonzero, got {lambda}")));
    }
    Ok(rate / lambda.abs())
}

/// Microwave-dressed NV ground triplet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedStates {
    /// Mixing angle with tan 2θ = −√2Ω/Δ, θ ∈ [−π/4, π/4].
    pub theta: f64,
    /// Energy of |g⟩ = cos θ|0⟩ − sin θ|b⟩.
    pub omega_g: f64,
    /// Energy of |e⟩ = cos θ|b⟩ + sin θ|0⟩.
    pub omega_e: f64,
    /// Energy of the dark state |d⟩ = (|+1⟩ − |−1⟩)/√2.
    pub omega_d: f64,
}

impl DressedStates {
    /// (|g⟩, |e⟩, |d⟩) as columns in the (|+1⟩, |0⟩, |−1⟩) basis.
    pub fn eigenvectors(&self) -> Matrix3<f64> {
        let (s, c) = self.theta.sin_cos();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let g = Vector3::new(-s * h, c, -s * h);
        let e = Vector3::new(c * h, s, c * h);
        let d = Vector3::new(h, 0.0, -h);
        Matrix3::from_columns(&[g, e, d])
    }
}

/// Rotating-frame NV Hamiltonian with equal detunings and Rabi frequencies,
/// Σ_± [−Δ|±1⟩⟨±1| + Ω/2 (|0⟩⟨±1| + h.c.)], in the (|+1⟩, |0⟩, |−1⟩) basis.
pub fn nv_dressing_hamiltonian(rabi_omega: f64, detuning: f64) -> Matrix3<f64> {
    let w = rabi_omega / 2.0;
    Matrix3::new(-detuning, w, 0.0, w, 0.0, w, 0.0, w, -detuning)
}

/// Mixing angle and dressed energies from diagonalizing the bright-state
/// block [[0, Ω/√2], [Ω/√2, −Δ]] in the (|0⟩, |b⟩) basis.
pub fn dressed_states(rabi_omega: f64, detuning: f64) -> Result<DressedStates> {
    if !(rabi_omega.is_finite() && detuning.is_finite()) {
        return Err(Error::InvalidParameter("Rabi frequency and detuning must be finite".into()));
    }
    if rabi_omega == 0.0 && detuning == 0.0 {
        return Err(Error::Degenerate("Ω = Δ = 0 leaves the dressed basis undefined".into()));
    }
    let coupling = rabi_omega / std::f64::consts::SQRT_2;
    let theta = if detuning == 0.0 {
        -rabi_omega.signum() * std::f64::consts::FRAC_PI_4
    } else {
        0.5 * (-std::f64::consts::SQRT_2 * rabi_omega / detuning).atan()
    };
    let block = Matrix2::new(0.0, coupling, coupling, -detuning);
    let eig = block.symmetric_eigen();
    let (s, c) = theta.sin_cos();
    let g = nalgebra::Vector2::new(c, -s);
    // |g⟩ is whichever eigenvector overlaps the θ-rotated |0⟩
    let k_g = if eig.eigenvectors.column(0).dot(&g).abs() >= eig.eigenvectors.column(1).dot(&g).abs() { 0 } else { 1 };
    Ok(DressedStates { theta, omega_g: eig.eigenvalues[k_g], omega_e: eig.eigenvalues[1 - k_g], omega_d: -detuning })
}
