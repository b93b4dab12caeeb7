//! Fidelity, two-qubit concurrence and collective-spin squeezing.

use crate::error::{Error, Result};
use crate::hilbert::{collective_spin, kron, pauli, Axis, CMatrix, Operator, PauliAxis, QuantumState, SpinConvention};

/// √⟨ψ|ρ|ψ⟩ for a pure target ψ, clamped to [0, 1].
pub fn fidelity(state: &QuantumState, target: &QuantumState) -> Result<f64> {
    if target.as_vector().is_none() {
        return Err(Error::InvalidState("fidelity target must be a pure state".into()));
    }
    Ok(state.overlap_with_pure(target)?.clamp(0.0, 1.0).sqrt())
}

fn hermitian_sqrt(m: &CMatrix) -> CMatrix {
    let eig = m.clone().symmetric_eigen();
    let mut v = eig.eigenvectors.clone();
    for (j, mut col) in v.column_iter_mut().enumerate() {
        col *= crate::hilbert::c(eig.eigenvalues[j].max(0.0).sqrt());
    }
    v * eig.eigenvectors.adjoint()
}

/// Wootters concurrence max(0, μ₁ − μ₂ − μ₃ − μ₄), with μ the descending
/// eigenvalues of √(√ρ ρ̃ √ρ) and ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y).
pub fn concurrence(state: &QuantumState) -> Result<f64> {
    if state.signature().dims() != [2, 2] || state.signature().has_boson() {
        return Err(Error::InvalidDimension(format!("concurrence needs a two-qubit state, got {}", state.signature())));
    }
    concurrence_of(&state.density_matrix())
}

/// [`concurrence`] on a raw 4×4 density matrix.
pub fn concurrence_of(rho: &CMatrix) -> Result<f64> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(Error::InvalidDimension(format!(
            "concurrence needs a 4×4 matrix, got {}×{}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let sy = pauli(PauliAxis::Y);
    let flip = kron(sy.matrix(), sy.matrix());
    let tilde = &flip * rho.conjugate() * &flip;
    let root = hermitian_sqrt(rho);
    let m = &root * tilde * &root;
    let m = (&m + m.adjoint()).scale(0.5);
    let mut mu: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().map(|e| e.max(0.0).sqrt()).collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).clamp(0.0, 1.0))
}

/// Mean-spin length, relative to N/2, below which no squeezing direction is
/// defined.
pub const MEAN_SPIN_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct SqueezingReport {
    /// Unit vector along ⟨J⟩.
    pub mean_spin_direction: [f64; 3],
    /// |⟨J⟩| / (N/2).
    pub spin_length: f64,
    /// Kitagawa–Ueda parameter 4 min Var(J_⊥)/N.
    pub xi_s_sq: f64,
    /// Wineland parameter N Var_min(J_⊥)/|⟨J⟩|².
    pub xi_r_sq: f64,
    /// Phase-sensitivity gain over the standard quantum limit, 1/ξ_R².
    pub gain: f64,
    /// β minimizing the variance of cos β J_{n₁} + sin β J_{n₂}.
    pub optimal_beta: f64,
}

/// Collective half-spin operators and the polar frame of the mean spin.
pub struct SpinFrame {
    /// n₁ = (−sin φ, cos φ, 0)
    pub n1: [f64; 3],
    /// n₂ = (cos θ cos φ, cos θ sin φ, −sin θ)
    pub n2: [f64; 3],
    pub mean: [f64; 3],
    pub j: [Operator; 3],
}

impl SpinFrame {
    pub fn new(rho: &QuantumState, n_spins: usize) -> Result<Self> {
        let sig = rho.signature();
        if n_spins < 2 || sig.has_boson() || sig.n_spins() != n_spins {
            return Err(Error::InvalidDimension(format!(
                "spin squeezing needs a {n_spins}-qubit state (N ≥ 2), got {sig}"
            )));
        }
        let j = [
            collective_spin(Axis::X, n_spins, SpinConvention::HalfSum)?,
            collective_spin(Axis::Y, n_spins, SpinConvention::HalfSum)?,
            collective_spin(Axis::Z, n_spins, SpinConvention::HalfSum)?,
        ];
        let mut mean = [0.0; 3];
        for (m, op) in mean.iter_mut().zip(&j) {
            *m = rho.expectation(op)?.re;
        }
        let length = mean.iter().map(|x| x * x).sum::<f64>().sqrt();
        let threshold = MEAN_SPIN_THRESHOLD * n_spins as f64 / 2.0;
        if length <= threshold {
            return Err(Error::UndefinedDirection { length, threshold });
        }
        let theta = (mean[2] / length).clamp(-1.0, 1.0).acos();
        let phi = mean[1].atan2(mean[0]);
        Ok(Self {
            n1: [-phi.sin(), phi.cos(), 0.0],
            n2: [theta.cos() * phi.cos(), theta.cos() * phi.sin(), -theta.sin()],
            mean,
            j,
        })
    }

    /// n · J
    pub fn component(&self, n: [f64; 3]) -> Operator {
        &(&self.j[0].scale_re(n[0]) + &self.j[1].scale_re(n[1])) + &self.j[2].scale_re(n[2])
    }

    pub fn length(&self) -> f64 {
        self.mean.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Kitagawa–Ueda and Wineland parameters with half-spin operators J = Σσ/2.
///
/// The minimum transverse variance uses the closed form
/// ½[⟨J₁² + J₂²⟩ − √(⟨J₁² − J₂²⟩² + 4 Cov²)] with Cov = ½⟨J₁J₂ + J₂J₁⟩;
/// ⟨J₁⟩ = ⟨J₂⟩ = 0 by construction of n₁, n₂.
pub fn spin_squeezing(rho: &QuantumState, n_spins: usize) -> Result<SqueezingReport> {
    let frame = SpinFrame::new(rho, n_spins)?;
    let j1 = frame.component(frame.n1);
    let j2 = frame.component(frame.n2);
    let second = |a: &Operator, b: &Operator| -> Result<f64> { Ok(rho.expectation(&(a * b))?.re) };
    let a11 = second(&j1, &j1)?;
    let a22 = second(&j2, &j2)?;
    let cov = 0.5 * (second(&j1, &j2)? + second(&j2, &j1)?);
    let min_var = 0.5 * ((a11 + a22) - ((a11 - a22).powi(2) + 4.0 * cov * cov).sqrt());
    let n = n_spins as f64;
    let length = frame.length();
    let xi_s_sq = 4.0 * min_var / n;
    let xi_r_sq = n * min_var / (length * length);
    Ok(SqueezingReport {
        mean_spin_direction: frame.mean.map(|m| m / length),
        spin_length: length / (n / 2.0),
        xi_s_sq,
        xi_r_sq,
        gain: 1.0 / xi_r_sq,
        optimal_beta: 0.5 * (2.0 * cov).atan2(a11 - a22) + std::f64::consts::FRAC_PI_2,
    })
}
