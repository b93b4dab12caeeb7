//! Matrix exponentials for frame unitaries.

use crate::error::{Error, Result};
use crate::hilbert::{hermiticity_defect, CMatrix, C64, I};

/// Largest Hermiticity defect accepted by the eigendecomposition route.
pub const GENERATOR_HERMITIAN_TOL: f64 = 1e-12;

/// e^M by scaling and squaring with a Padé approximant.
pub fn expm(m: &CMatrix) -> CMatrix {
    m.clone().exp()
}

/// e^{−i s K} for Hermitian K through its eigendecomposition.
pub fn expm_hermitian(k: &CMatrix, s: f64) -> Result<CMatrix> {
    let scale = k.norm().max(1.0);
    let defect = hermiticity_defect(k);
    if defect > GENERATOR_HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(defect));
    }
    let eig = k.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = eig.eigenvalues.map(|e| (-I * s * e).exp());
    let mut scaled = v.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    Ok(scaled * v.adjoint())
}

/// e^G for anti-Hermitian G, written as e^{−iK} with K = iG.
pub fn expm_anti_hermitian(g: &CMatrix) -> Result<CMatrix> {
    expm_hermitian(&g.map(|z| I * z), 1.0)
}

/// ‖U†U − 1‖ in the max-entry norm.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let d = u.nrows();
    let prod = u.adjoint() * u;
    let mut worst = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            worst = worst.max((prod[(i, j)] - target).norm());
        }
    }
    worst
}
