//! Compressed-row complex matrices for the integrator's inner products.

use crate::hilbert::{CMatrix, C64};

/// CSR matrix with an explicit sparsity pattern.
#[derive(Clone, Debug)]
pub(crate) struct Csr {
    pub dim: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<C64>,
}

impl Csr {
    pub fn from_dense(m: &CMatrix) -> Self {
        Self::with_pattern_of(&[m]).into_iter().next().expect("one matrix in, one matrix out")
    }

    /// Converts every matrix onto the union of their nonzero patterns, so
    /// value arrays line up entry by entry.
    pub fn with_pattern_of(ms: &[&CMatrix]) -> Vec<Self> {
        let dim = ms.first().map_or(0, |m| m.nrows());
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        row_ptr.push(0);
        for i in 0..dim {
            for j in 0..dim {
                if ms.iter().any(|m| m[(i, j)] != C64::new(0.0, 0.0)) {
                    cols.push(j);
                }
            }
            row_ptr.push(cols.len());
        }
        ms.iter()
            .map(|m| {
                let mut vals = Vec::with_capacity(cols.len());
                for i in 0..dim {
                    for &j in &cols[row_ptr[i]..row_ptr[i + 1]] {
                        vals.push(m[(i, j)]);
                    }
                }
                Self { dim, row_ptr: row_ptr.clone(), cols: cols.clone(), vals }
            })
            .collect()
    }

    /// out = A x
    pub fn mul_vec(&self, x: &[C64], out: &mut [C64]) {
        for (i, o) in out.iter_mut().enumerate().take(self.dim) {
            let mut acc = C64::new(0.0, 0.0);
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[p] * x[self.cols[p]];
            }
            *o = acc;
        }
    }

    /// out = A X for column-major square X.
    pub fn mul_dense(&self, x: &[C64], out: &mut [C64]) {
        let d = self.dim;
        for j in 0..d {
            let xc = &x[j * d..(j + 1) * d];
            let oc = &mut out[j * d..(j + 1) * d];
            self.mul_vec(xc, oc);
        }
    }

    /// out = X A† for column-major square X; column j of the result is
    /// Σ_k conj(A_jk) X[:, k], so every update is a contiguous column axpy.
    pub fn mul_dense_right_adjoint(&self, x: &[C64], out: &mut [C64]) {
        let d = self.dim;
        for j in 0..d {
            let oc = &mut out[j * d..(j + 1) * d];
            oc.fill(C64::new(0.0, 0.0));
            for p in self.row_ptr[j]..self.row_ptr[j + 1] {
                let c = self.vals[p].conj();
                let k = self.cols[p];
                for (o, xv) in oc.iter_mut().zip(&x[k * d..(k + 1) * d]) {
                    *o += c * xv;
                }
            }
        }
    }

    #[cfg(test)]
    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                m[(i, self.cols[p])] = self.vals[p];
            }
        }
        m
    }
}
