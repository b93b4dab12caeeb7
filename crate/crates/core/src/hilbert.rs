//! Operators and states on a truncated boson ⊗ qubit tensor-product space.
//!
//! Layout conventions used throughout the crate:
//!
//! * subsystem 0 is the phonon mode when a [`SpaceSignature`] carries one,
//!   spins follow in index order;
//! * a composite basis index is row-major over the subsystems, so slot 0 is
//!   the most significant digit (the same order as `kron(A, B)`);
//! * the qubit basis is ordered `(|d⟩, |g⟩)`, which makes
//!   `σ_z = |d⟩⟨d| − |g⟩⟨g| = diag(+1, −1)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Index of `|d⟩` in the qubit basis.
pub const SPIN_D: usize = 0;
/// Index of `|g⟩` in the qubit basis.
pub const SPIN_G: usize = 1;

pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Ordered subsystem dimensions of a tensor-product space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpaceSignature {
    dims: Vec<usize>,
    boson: bool,
}

impl SpaceSignature {
    /// A space without a phonon register.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        Self::build(dims, false)
    }

    /// Phonon mode truncated at `n_max` followed by `n_spins` qubits.
    pub fn boson_spins(n_max: usize, n_spins: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidDimension(format!("n_max must be ≥ 1, got {n_max}")));
        }
        let mut dims = Vec::with_capacity(n_spins + 1);
        dims.push(n_max + 1);
        dims.extend(std::iter::repeat_n(2, n_spins));
        Self::build(dims, true)
    }

    pub fn boson(n_max: usize) -> Result<Self> {
        Self::boson_spins(n_max, 0)
    }

    pub fn spins(n_spins: usize) -> Result<Self> {
        Self::build(vec![2; n_spins], false)
    }

    fn build(dims: Vec<usize>, boson: bool) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDimension("signature needs at least one subsystem".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(format!("subsystem dimension {d} < 2")));
        }
        Ok(Self { dims, boson })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn has_boson(&self) -> bool {
        self.boson
    }

    pub fn n_max(&self) -> Option<usize> {
        self.boson.then(|| self.dims[0] - 1)
    }

    pub fn n_spins(&self) -> usize {
        self.dims.len() - usize::from(self.boson)
    }

    /// Subsystem slot of spin `j` (0-based).
    pub fn spin_slot(&self, j: usize) -> usize {
        j + usize::from(self.boson)
    }

    /// Signature of the subsystems listed in `keep` (ascending, deduplicated).
    pub fn subsystem(&self, keep: &[usize]) -> Result<Self> {
        let keep = normalize_keep(keep, self.len())?;
        let dims = keep.iter().map(|&k| self.dims[k]).collect();
        Self::build(dims, self.boson && keep[0] == 0)
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    /// Composite index of a product basis state.
    pub fn index_of(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.dims.len() {
            return Err(Error::InvalidDimension(format!(
                "expected {} subsystem digits, got {}",
                self.dims.len(),
                digits.len()
            )));
        }
        let mut index = 0;
        for (&digit, &dim) in digits.iter().zip(&self.dims) {
            if digit >= dim {
                return Err(Error::InvalidDimension(format!("digit {digit} ≥ dimension {dim}")));
            }
            index = index * dim + digit;
        }
        Ok(index)
    }

    pub fn check_same(&self, other: &SpaceSignature) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SignatureMismatch { expected: self.dims.clone(), found: other.dims.clone() })
        }
    }
}

impl fmt::Display for SpaceSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join("⊗"))
    }
}

fn normalize_keep(keep: &[usize], count: usize) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::InvalidParameter("keep set must be nonempty".into()));
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if let Some(&index) = keep.iter().find(|&&k| k >= count) {
        return Err(Error::SlotOutOfRange { index, count });
    }
    Ok(keep)
}

/// Dense complex operator tagged with the space it acts on.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    signature: SpaceSignature,
    matrix: CMatrix,
}

impl Operator {
    pub fn new(signature: SpaceSignature, matrix: CMatrix) -> Result<Self> {
        let d = signature.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::InvalidDimension(format!(
                "matrix is {}×{}, signature {} needs {d}×{d}",
                matrix.nrows(),
                matrix.ncols(),
                signature
            )));
        }
        Ok(Self { signature, matrix })
    }

    pub fn identity(signature: &SpaceSignature) -> Self {
        let d = signature.total_dim();
        Self { signature: signature.clone(), matrix: CMatrix::identity(d, d) }
    }

    pub fn zeros(signature: &SpaceSignature) -> Self {
        let d = signature.total_dim();
        Self { signature: signature.clone(), matrix: CMatrix::zeros(d, d) }
    }

    pub fn signature(&self) -> &SpaceSignature {
        &self.signature
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dagger(&self) -> Self {
        Self { signature: self.signature.clone(), matrix: self.matrix.adjoint() }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { signature: self.signature.clone(), matrix: &self.matrix * factor }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(c(factor))
    }

    pub fn checked_add(&self, other: &Operator) -> Result<Self> {
        self.signature.check_same(&other.signature)?;
        Ok(Self { signature: self.signature.clone(), matrix: &self.matrix + &other.matrix })
    }

    pub fn checked_sub(&self, other: &Operator) -> Result<Self> {
        self.signature.check_same(&other.signature)?;
        Ok(Self { signature: self.signature.clone(), matrix: &self.matrix - &other.matrix })
    }

    pub fn checked_mul(&self, other: &Operator) -> Result<Self> {
        self.signature.check_same(&other.signature)?;
        Ok(Self { signature: self.signature.clone(), matrix: &self.matrix * &other.matrix })
    }

    /// `[self, other]`
    pub fn commutator(&self, other: &Operator) -> Result<Self> {
        self.signature.check_same(&other.signature)?;
        let m = &self.matrix * &other.matrix - &other.matrix * &self.matrix;
        Ok(Self { signature: self.signature.clone(), matrix: m })
    }

    /// Max elementwise |A − A†|.
    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.matrix)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        spectral_norm(&self.matrix)
    }

    /// Splits off the identity-proportional part: returns the traceless
    /// operator and the removed energy shift `tr(A)/d`.
    pub fn without_constant(&self) -> (Self, f64) {
        let shift = self.trace().re / self.dim() as f64;
        let mut m = self.matrix.clone();
        for k in 0..m.nrows() {
            m[(k, k)] -= c(shift);
        }
        (Self { signature: self.signature.clone(), matrix: m }, shift)
    }

    /// Eigenvalues (ascending) of a Hermitian operator.
    pub fn eigenvalues_hermitian(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn apply(&self, state: &CVector) -> CVector {
        &self.matrix * state
    }

    /// `self ⊗ other`; a phonon register may only lead the product.
    pub fn tensor(&self, other: &Operator) -> Result<Self> {
        if other.signature.has_boson() {
            return Err(Error::InvalidParameter("phonon register must be the first factor".into()));
        }
        let mut dims = self.signature.dims.clone();
        dims.extend_from_slice(&other.signature.dims);
        let signature = SpaceSignature::build(dims, self.signature.has_boson())?;
        Ok(Self { signature, matrix: kron(&self.matrix, &other.matrix) })
    }

    /// `|ψ⟩⟨ψ|` for a pure state.
    pub fn projector(state: &QuantumState) -> Result<Self> {
        let psi = state.as_vector().ok_or_else(|| Error::InvalidState("projector needs a pure state vector".into()))?;
        Ok(Self { signature: state.signature().clone(), matrix: psi * psi.adjoint() })
    }
}

macro_rules! op_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Operator> for &Operator {
            type Output = Operator;
            fn $method(self, rhs: &Operator) -> Operator {
                self.$checked(rhs).expect("operator signatures differ")
            }
        }
        impl $trait<Operator> for Operator {
            type Output = Operator;
            fn $method(self, rhs: Operator) -> Operator {
                (&self).$checked(&rhs).expect("operator signatures differ")
            }
        }
    };
}

op_binop!(Add, add, checked_add);
op_binop!(Sub, sub, checked_sub);
op_binop!(Mul, mul, checked_mul);

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale_re(-1.0)
    }
}

impl Mul<&Operator> for f64 {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scale_re(self)
    }
}

impl Mul<&Operator> for C64 {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scale(self)
    }
}

pub(crate) fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn spectral_norm(m: &CMatrix) -> f64 {
    m.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Whether a state is stored as a ket or as a density matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum StateData {
    Vector(CVector),
    Density(CMatrix),
}

pub const VECTOR_NORM_TOL: f64 = 1e-10;
pub const DENSITY_HERMITIAN_TOL: f64 = 1e-10;
pub const DENSITY_TRACE_TOL: f64 = 1e-8;
pub const DENSITY_EIGEN_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    signature: SpaceSignature,
    data: StateData,
}

impl QuantumState {
    pub fn from_vector(signature: SpaceSignature, v: CVector) -> Result<Self> {
        check_len(&signature, v.len())?;
        let norm = v.norm();
        if (norm - 1.0).abs() > VECTOR_NORM_TOL {
            return Err(Error::InvalidState(format!("vector norm {norm} differs from 1")));
        }
        Ok(Self { signature, data: StateData::Vector(v) })
    }

    /// Normalizes `v` first; fails only on a zero vector.
    pub fn from_vector_normalized(signature: SpaceSignature, v: CVector) -> Result<Self> {
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Self::from_vector(signature, v.unscale(norm))
    }

    pub fn from_density(signature: SpaceSignature, rho: CMatrix) -> Result<Self> {
        let d = signature.total_dim();
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::InvalidDimension(format!("density matrix must be {d}×{d}")));
        }
        let herm = hermiticity_defect(&rho);
        if herm > DENSITY_HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("density matrix not Hermitian ({herm:e})")));
        }
        let tr = rho.trace();
        if (tr - ONE).norm() > DENSITY_TRACE_TOL {
            return Err(Error::InvalidState(format!("density trace {tr} differs from 1")));
        }
        let min_ev = min_eigenvalue(&rho);
        if min_ev < -DENSITY_EIGEN_TOL {
            return Err(Error::InvalidState(format!("density eigenvalue {min_ev:e} < 0")));
        }
        Ok(Self { signature, data: StateData::Density(rho) })
    }

    /// Skips validation; used for integrator output whose drift is reported
    /// through trajectory diagnostics instead.
    pub(crate) fn raw(signature: SpaceSignature, data: StateData) -> Self {
        Self { signature, data }
    }

    /// Product basis state `|digits⟩`.
    pub fn basis(signature: &SpaceSignature, digits: &[usize]) -> Result<Self> {
        let index = signature.index_of(digits)?;
        let mut v = CVector::zeros(signature.total_dim());
        v[index] = ONE;
        Ok(Self { signature: signature.clone(), data: StateData::Vector(v) })
    }

    /// Tensor product of pure or mixed factors; the result is a vector if
    /// every factor is.
    pub fn product(factors: &[QuantumState]) -> Result<Self> {
        let first = factors.first().ok_or_else(|| Error::InvalidParameter("product of zero states".into()))?;
        let mut dims = Vec::new();
        let mut boson = false;
        for (k, f) in factors.iter().enumerate() {
            if k == 0 {
                boson = f.signature.has_boson();
            } else if f.signature.has_boson() {
                return Err(Error::InvalidParameter("phonon register must be the first factor".into()));
            }
            dims.extend_from_slice(f.signature.dims());
        }
        let signature = SpaceSignature::build(dims, boson)?;
        let all_vectors = factors.iter().all(|f| matches!(f.data, StateData::Vector(_)));
        let data = if all_vectors {
            let mut acc = first.as_vector().unwrap().clone();
            for f in &factors[1..] {
                acc = acc.kronecker(f.as_vector().unwrap());
            }
            StateData::Vector(acc)
        } else {
            let mut acc = first.density_matrix();
            for f in &factors[1..] {
                acc = acc.kronecker(&f.density_matrix());
            }
            StateData::Density(acc)
        };
        Ok(Self { signature, data })
    }

    pub fn signature(&self) -> &SpaceSignature {
        &self.signature
    }

    pub fn data(&self) -> &StateData {
        &self.data
    }

    pub fn is_pure_vector(&self) -> bool {
        matches!(self.data, StateData::Vector(_))
    }

    pub fn as_vector(&self) -> Option<&CVector> {
        match &self.data {
            StateData::Vector(v) => Some(v),
            StateData::Density(_) => None,
        }
    }

    /// Density matrix, promoting a ket to its projector.
    pub fn density_matrix(&self) -> CMatrix {
        match &self.data {
            StateData::Vector(v) => v * v.adjoint(),
            StateData::Density(rho) => rho.clone(),
        }
    }

    pub fn to_density(&self) -> Self {
        Self { signature: self.signature.clone(), data: StateData::Density(self.density_matrix()) }
    }

    pub fn trace(&self) -> f64 {
        match &self.data {
            StateData::Vector(v) => v.norm_squared(),
            StateData::Density(rho) => rho.trace().re,
        }
    }

    /// `⟨A⟩ = tr(ρA)` or `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, op: &Operator) -> Result<C64> {
        self.signature.check_same(op.signature())?;
        Ok(expectation_raw(&self.data, op.matrix()))
    }

    /// `⟨ψ|ρ|ψ⟩` for a pure `target`.
    pub fn overlap_with_pure(&self, target: &QuantumState) -> Result<f64> {
        self.signature.check_same(&target.signature)?;
        let psi = target.as_vector().ok_or_else(|| Error::InvalidState("target must be a pure state vector".into()))?;
        Ok(match &self.data {
            StateData::Vector(v) => psi.dotc(v).norm_sqr(),
            StateData::Density(rho) => psi.dotc(&(rho * psi)).re,
        })
    }
}

fn check_len(signature: &SpaceSignature, len: usize) -> Result<()> {
    if len != signature.total_dim() {
        return Err(Error::InvalidDimension(format!("vector length {len} does not match signature {signature}")));
    }
    Ok(())
}

pub(crate) fn expectation_raw(data: &StateData, op: &CMatrix) -> C64 {
    match data {
        StateData::Vector(v) => v.dotc(&(op * v)),
        StateData::Density(rho) => {
            // tr(ρA) = Σ_ij ρ_ij A_ji
            let n = rho.nrows();
            let mut acc = ZERO;
            for j in 0..n {
                for i in 0..n {
                    acc += rho[(i, j)] * op[(j, i)];
                }
            }
            acc
        }
    }
}

pub(crate) fn min_eigenvalue(rho: &CMatrix) -> f64 {
    rho.clone().symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Phonon annihilation operator truncated at `n_max` quanta.
pub fn fock_annihilation(n_max: usize) -> Result<Operator> {
    let signature = SpaceSignature::boson(n_max)?;
    let d = n_max + 1;
    let mut m = CMatrix::zeros(d, d);
    for n in 1..d {
        m[(n - 1, n)] = c((n as f64).sqrt());
    }
    Operator::new(signature, m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PauliAxis {
    X,
    Y,
    Z,
    Plus,
    Minus,
}

/// Single-qubit operator in the `(|d⟩, |g⟩)` basis.
pub fn pauli(axis: PauliAxis) -> Operator {
    let entries: [[C64; 2]; 2] = match axis {
        PauliAxis::X => [[ZERO, ONE], [ONE, ZERO]],
        PauliAxis::Y => [[ZERO, -I], [I, ZERO]],
        PauliAxis::Z => [[ONE, ZERO], [ZERO, -ONE]],
        // σ_+ = |d⟩⟨g|
        PauliAxis::Plus => [[ZERO, ONE], [ZERO, ZERO]],
        PauliAxis::Minus => [[ZERO, ZERO], [ONE, ZERO]],
    };
    let matrix = CMatrix::from_fn(2, 2, |i, j| entries[i][j]);
    Operator { signature: SpaceSignature::spins(1).expect("one qubit"), matrix }
}

/// `1 ⊗ … ⊗ local ⊗ … ⊗ 1` with `local` in subsystem `slot`.
pub fn embed(local: &Operator, slot: usize, signature: &SpaceSignature) -> Result<Operator> {
    let count = signature.len();
    if slot >= count {
        return Err(Error::SlotOutOfRange { index: slot, count });
    }
    let dim = signature.dims()[slot];
    if local.dim() != dim {
        return Err(Error::InvalidDimension(format!(
            "local operator dimension {} does not match subsystem {slot} of dimension {dim}",
            local.dim()
        )));
    }
    let left: usize = signature.dims()[..slot].iter().product();
    let right: usize = signature.dims()[slot + 1..].iter().product();
    let total = signature.total_dim();
    let mut m = CMatrix::zeros(total, total);
    let lm = local.matrix();
    // block structure: index = (l * dim + s) * right + r
    for l in 0..left {
        for sj in 0..dim {
            for si in 0..dim {
                let v = lm[(si, sj)];
                if v == ZERO {
                    continue;
                }
                for r in 0..right {
                    let i = (l * dim + si) * right + r;
                    let j = (l * dim + sj) * right + r;
                    m[(i, j)] = v;
                }
            }
        }
    }
    Operator::new(signature.clone(), m)
}

/// Whether a collective spin operator is `Σσ` (Hamiltonian form) or
/// `Σσ/2` (angular-momentum form used for squeezing metrics).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpinConvention {
    PauliSum,
    HalfSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl From<Axis> for PauliAxis {
    fn from(a: Axis) -> Self {
        match a {
            Axis::X => PauliAxis::X,
            Axis::Y => PauliAxis::Y,
            Axis::Z => PauliAxis::Z,
        }
    }
}

/// Collective spin on a spins-only register of `n` qubits.
pub fn collective_spin(axis: Axis, n: usize, convention: SpinConvention) -> Result<Operator> {
    if n < 1 {
        return Err(Error::InvalidParameter("collective spin needs at least one qubit".into()));
    }
    collective_spin_on(axis, &SpaceSignature::spins(n)?, convention)
}

/// Collective spin summed over every qubit of `signature`.
pub fn collective_spin_on(axis: Axis, signature: &SpaceSignature, convention: SpinConvention) -> Result<Operator> {
    let local = pauli(axis.into());
    let mut acc = Operator::zeros(signature);
    for j in 0..signature.n_spins() {
        acc = &acc + &embed(&local, signature.spin_slot(j), signature)?;
    }
    Ok(match convention {
        SpinConvention::PauliSum => acc,
        SpinConvention::HalfSum => acc.scale_re(0.5),
    })
}

/// Reduced density matrix over the subsystems in `keep`.
pub fn partial_trace(state: &QuantumState, keep: &[usize]) -> Result<QuantumState> {
    let sig = state.signature();
    let keep = normalize_keep(keep, sig.len())?;
    let reduced_sig = sig.subsystem(&keep)?;
    let traced: Vec<usize> = (0..sig.len()).filter(|k| !keep.contains(k)).collect();
    let strides = sig.strides();
    let rho = state.density_matrix();

    let kept_dims: Vec<usize> = keep.iter().map(|&k| sig.dims()[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| sig.dims()[k]).collect();
    let kept_offsets = offsets(&kept_dims, &keep, &strides);
    let traced_offsets = offsets(&traced_dims, &traced, &strides);

    let dk = kept_offsets.len();
    let mut out = CMatrix::zeros(dk, dk);
    for (a, &oa) in kept_offsets.iter().enumerate() {
        for (b, &ob) in kept_offsets.iter().enumerate() {
            let mut acc = ZERO;
            for &ot in &traced_offsets {
                acc += rho[(oa + ot, ob + ot)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(QuantumState::raw(reduced_sig, StateData::Density(out)))
}

/// Flat offsets of every multi-index over the given slots, in row-major
/// order of those slots.
fn offsets(dims: &[usize], slots: &[usize], strides: &[usize]) -> Vec<usize> {
    let mut result = vec![0usize];
    for (&dim, &slot) in dims.iter().zip(slots) {
        let mut next = Vec::with_capacity(result.len() * dim);
        for &base in &result {
            for digit in 0..dim {
                next.push(base + digit * strides[slot]);
            }
        }
        result = next;
    }
    result
}
