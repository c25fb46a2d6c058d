//! Finite-dimensional complex Hilbert spaces: state vectors, operators,
//! orthogonal projectors, density operators and the trace rule
//! `μ(E) = tr(W E)`.
//!
//! Every value here is immutable once constructed and every constructor
//! validates its invariants, so downstream code can rely on a `Projector`
//! actually being Hermitian and idempotent.

use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Tolerance for operator identities (Hermiticity, idempotence, commutators).
pub const TAU_OP: f64 = 1e-9;
/// Tolerance for vector norms.
pub const TAU_NORM: f64 = 1e-12;
/// Tolerance for probability arithmetic.
pub const TAU_PROB: f64 = 1e-9;
/// Singular values below this fraction of the largest one do not count toward rank.
pub const RANK_RELATIVE_THRESHOLD: f64 = 1e-10;
/// Largest supported dimension.
pub const MAX_DIM: usize = 64;

/// Number of complex dimensions of a Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HilbertDim(usize);

impl HilbertDim {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Domain(format!(
                "dimension {dim} outside supported range 1..={MAX_DIM}"
            )));
        }
        Ok(HilbertDim(dim))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for HilbertDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn check_dim(dim: usize) -> Result<()> {
    HilbertDim::new(dim).map(|_| ())
}

fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn real_trace(m: &CMatrix) -> f64 {
    m.trace().re
}

/// A unit vector in `C^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
}

impl StateVector {
    /// Wraps amplitudes that must already have unit norm within [`TAU_NORM`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let v = CVector::from_vec(amplitudes);
        let norm = v.norm();
        if (norm - 1.0).abs() > TAU_NORM {
            return Err(Error::Domain(format!("state vector has norm {norm}, expected 1")));
        }
        Ok(StateVector { amplitudes: v })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let v = CVector::from_vec(amplitudes);
        let norm = v.norm();
        if norm <= f64::EPSILON || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize a zero vector".into()));
        }
        Ok(StateVector { amplitudes: v.unscale(norm) })
    }

    /// Normalizes real amplitudes.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::normalized(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The `index`-th standard basis vector.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::Dimension(format!("basis index {index} out of range for dim {dim}")));
        }
        let mut v = CVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { amplitudes: v })
    }

    pub(crate) fn from_unit_unchecked(v: CVector) -> Self {
        StateVector { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// `<self, other>`, antilinear in the first argument.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!("inner product of dims {} and {}", self.dim(), other.dim())));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `<self, P self>` for a projector on the same space.
    pub fn expectation(&self, p: &Projector) -> Result<f64> {
        if self.dim() != p.dim() {
            return Err(Error::Dimension(format!("state dim {} vs projector dim {}", self.dim(), p.dim())));
        }
        Ok(self.amplitudes.dotc(&(p.matrix() * &self.amplitudes)).re)
    }

    /// Rank-one projector onto this vector.
    pub fn projector(&self) -> Projector {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        Projector { matrix: m, rank: 1 }
    }

    /// Applies the fixed phase convention: the first component with
    /// magnitude above `TAU_NORM` is made real and nonnegative.
    pub fn with_canonical_phase(&self) -> StateVector {
        let mut v = self.amplitudes.clone();
        if let Some(z) = v.iter().find(|z| z.norm() > TAU_NORM).copied() {
            let phase = z.conj() / z.norm();
            v *= phase;
            let lead = v.iter().position(|z| z.norm() > TAU_NORM).unwrap_or(0);
            v[lead] = Complex64::new(v[lead].re, 0.0);
        }
        StateVector { amplitudes: v }
    }
}

/// A general linear operator on `C^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    matrix: CMatrix,
}

impl Operator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!("operator matrix is {}x{}", matrix.nrows(), matrix.ncols())));
        }
        check_dim(matrix.nrows())?;
        Ok(Operator { matrix })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Operator { matrix: CMatrix::identity(dim, dim) })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!("compose dims {} and {}", self.dim(), other.dim())));
        }
        Ok(Operator { matrix: &self.matrix * &other.matrix })
    }
}

impl From<Projector> for Operator {
    fn from(p: Projector) -> Self {
        Operator { matrix: p.matrix }
    }
}

impl From<DensityOperator> for Operator {
    fn from(w: DensityOperator) -> Self {
        Operator { matrix: w.matrix }
    }
}

/// An orthogonal projector, identified with the closed subspace it projects onto.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: CMatrix,
    rank: usize,
}

impl Projector {
    /// Validates Hermiticity, idempotence and integral trace.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!("projector matrix is {}x{}", matrix.nrows(), matrix.ncols())));
        }
        check_dim(matrix.nrows())?;
        let herm = frobenius(&(&matrix - matrix.adjoint()));
        if herm > TAU_OP {
            return Err(Error::Domain(format!("matrix is not Hermitian (defect {herm:.3e})")));
        }
        let idem = frobenius(&(&matrix * &matrix - &matrix));
        if idem > TAU_OP {
            return Err(Error::Domain(format!("matrix is not idempotent (defect {idem:.3e})")));
        }
        let tr = real_trace(&matrix);
        let rank = tr.round();
        if (tr - rank).abs() > TAU_OP || rank < 0.0 {
            return Err(Error::Domain(format!("projector trace {tr} is not an integer")));
        }
        Ok(Projector { matrix, rank: rank as usize })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Projector { matrix: CMatrix::zeros(dim, dim), rank: 0 })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Projector { matrix: CMatrix::identity(dim, dim), rank: dim })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    /// Orthonormal basis of the range, one vector per column.
    pub fn range_basis(&self) -> CMatrix {
        orthonormal_range(&self.matrix)
    }

    /// `‖self - other‖_F`.
    pub fn distance(&self, other: &Projector) -> f64 {
        frobenius(&(&self.matrix - &other.matrix))
    }

    /// Equality as subspaces within [`TAU_OP`].
    pub fn approx_eq(&self, other: &Projector) -> bool {
        self.dim() == other.dim() && self.distance(other) <= TAU_OP
    }
}

/// A positive semidefinite operator of unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!("density matrix is {}x{}", matrix.nrows(), matrix.ncols())));
        }
        check_dim(matrix.nrows())?;
        let herm = frobenius(&(&matrix - matrix.adjoint()));
        if herm > TAU_OP {
            return Err(Error::Domain(format!("density matrix is not Hermitian (defect {herm:.3e})")));
        }
        let tr = real_trace(&matrix);
        if (tr - 1.0).abs() > TAU_OP {
            return Err(Error::Domain(format!("density matrix has trace {tr}")));
        }
        let sym = (&matrix + matrix.adjoint()).scale(0.5);
        let min_eig = SymmetricEigen::new(sym).eigenvalues.min();
        if min_eig < -TAU_OP {
            return Err(Error::Domain(format!("density matrix has negative eigenvalue {min_eig:.3e}")));
        }
        Ok(DensityOperator { matrix })
    }

    /// The pure state `P_ψ`.
    pub fn pure(state: &StateVector) -> Self {
        DensityOperator { matrix: state.projector().matrix }
    }

    /// The maximally mixed state `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(DensityOperator { matrix: CMatrix::identity(dim, dim).unscale(dim as f64) })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `tr(W X)` for an arbitrary operator; complex in general.
    pub fn trace_with(&self, op: &CMatrix) -> Result<Complex64> {
        if op.nrows() != self.dim() || op.ncols() != self.dim() {
            return Err(Error::Dimension(format!("state dim {} vs operator {}x{}", self.dim(), op.nrows(), op.ncols())));
        }
        Ok((&self.matrix * op).trace())
    }
}

/// Orthonormal basis (as columns) of the column space of `m`, using the
/// scale-relative rank threshold.
///
/// Singular values come from the Hermitian dilation `[[0, M], [M†, 0]]`,
/// whose eigenvalues are `±σ_i`: nalgebra's complex SVD can lose accuracy
/// on rank-deficient inputs, the Hermitian eigensolver does not.
pub(crate) fn orthonormal_range(m: &CMatrix) -> CMatrix {
    let (rows, cols) = (m.nrows(), m.ncols());
    if cols == 0 || rows == 0 {
        return CMatrix::zeros(rows, 0);
    }
    let mut h = CMatrix::zeros(rows + cols, rows + cols);
    h.view_mut((0, rows), (rows, cols)).copy_from(m);
    h.view_mut((rows, 0), (cols, rows)).copy_from(&m.adjoint());
    let eig = SymmetricEigen::new(h);
    // Relative to max(σmax, 1): a matrix that is pure rounding noise (the
    // complement of an identity, say) has rank zero, not full rank.
    let cut = RANK_RELATIVE_THRESHOLD * eig.eigenvalues.max().max(1.0);
    let keep: Vec<usize> = (0..rows + cols).filter(|&i| eig.eigenvalues[i] > cut).collect();
    if keep.is_empty() {
        return CMatrix::zeros(rows, 0);
    }
    // The upper halves of the positive eigenvectors, scaled by √2, are the
    // left singular vectors; QR restores exact orthonormality.
    let u = CMatrix::from_fn(rows, keep.len(), |r, c| eig.eigenvectors[(r, keep[c])]);
    u.qr().q()
}

/// Projector onto the column space of `columns` (columns need not be
/// orthogonal or normalized; dependent columns are deflated).
pub(crate) fn projector_onto_columns(columns: &CMatrix) -> Projector {
    let q = orthonormal_range(columns);
    let rank = q.ncols();
    let matrix = &q * q.adjoint();
    Projector { matrix, rank }
}

/// Orthogonal projector onto the linear span of `vectors`.
pub fn projector_from_span(vectors: &[StateVector]) -> Result<Projector> {
    let first = vectors
        .first()
        .ok_or_else(|| Error::Domain("cannot span an empty list of vectors".into()))?;
    let dim = first.dim();
    if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(Error::Dimension(format!("span mixes dims {dim} and {}", v.dim())));
    }
    let cols = CMatrix::from_fn(dim, vectors.len(), |r, c| vectors[c].amplitudes[r]);
    let p = projector_onto_columns(&cols);
    // Re-validate: the construction is exact up to rounding.
    Projector::new(p.matrix)
}

/// The trace rule `tr(W E)`, clamped to `[0, 1]` when within [`TAU_PROB`]
/// of the boundary.
pub fn gleason_measure(w: &DensityOperator, e: &Projector) -> Result<f64> {
    if w.dim() != e.dim() {
        return Err(Error::Dimension(format!("state dim {} vs projector dim {}", w.dim(), e.dim())));
    }
    let value = w.trace_with(e.matrix())?;
    clamp_probability(value)
}

/// Checks that a trace value is a real probability and clamps rounding noise.
pub(crate) fn clamp_probability(value: Complex64) -> Result<f64> {
    if value.im.abs() > TAU_PROB || !value.re.is_finite() {
        return Err(Error::Numerical(format!("trace {value} is not real")));
    }
    let x = value.re;
    if !(-TAU_PROB..=1.0 + TAU_PROB).contains(&x) {
        return Err(Error::Numerical(format!("trace {x} lies outside [0, 1]")));
    }
    Ok(x.clamp(0.0, 1.0))
}

/// Kronecker product.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Self;
}

impl Tensor for StateVector {
    fn tensor(&self, other: &Self) -> Self {
        StateVector { amplitudes: self.amplitudes.kronecker(&other.amplitudes) }
    }
}

impl Tensor for Operator {
    fn tensor(&self, other: &Self) -> Self {
        Operator { matrix: self.matrix.kronecker(&other.matrix) }
    }
}

impl Tensor for Projector {
    fn tensor(&self, other: &Self) -> Self {
        Projector { matrix: self.matrix.kronecker(&other.matrix), rank: self.rank * other.rank }
    }
}

impl Tensor for DensityOperator {
    fn tensor(&self, other: &Self) -> Self {
        DensityOperator { matrix: self.matrix.kronecker(&other.matrix) }
    }
}

/// Convenience wrapper over [`Tensor::tensor`].
pub fn tensor<T: Tensor>(x: &T, y: &T) -> T {
    x.tensor(y)
}

/// The `+1` eigenvector of `n·σ` for a unit direction `n`, with the first
/// nonzero component real and nonnegative.
pub fn spin_up_vector(direction: [f64; 3]) -> Result<StateVector> {
    let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm <= TAU_NORM {
        return Err(Error::Domain("spin direction is the zero vector".into()));
    }
    if (norm - 1.0).abs() > TAU_NORM {
        return Err(Error::Domain(format!("spin direction has norm {norm}, expected 1")));
    }
    let [x, y, z] = direction;
    // Closed form: (1+z, x+iy) for z > -1, (0, 1) at the south pole.
    let v = if 1.0 + z > TAU_NORM {
        let c = ((1.0 + z) / 2.0).sqrt();
        let scale = 1.0 / (2.0 * (1.0 + z)).sqrt();
        vec![Complex64::new(c, 0.0), Complex64::new(x * scale, y * scale)]
    } else {
        vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
    };
    let s = StateVector::normalized(v)?;
    Ok(s.with_canonical_phase())
}

/// The `-1` eigenvector of `n·σ` (same phase convention).
pub fn spin_down_vector(direction: [f64; 3]) -> Result<StateVector> {
    let [x, y, z] = direction;
    spin_up_vector([-x, -y, -z])
}

/// Unit vector in the x–z plane at `angle` radians from `+z` toward `+x`.
pub fn xz_direction(angle: f64) -> [f64; 3] {
    [angle.sin(), 0.0, angle.cos()]
}

/// `I ⊗ … ⊗ P ⊗ … ⊗ I` with `P` on `factor` of `factors` two-level systems.
pub fn embed_qubit_projector(p: &Projector, factor: usize, factors: usize) -> Result<Projector> {
    if p.dim() != 2 {
        return Err(Error::Dimension(format!("expected a single-qubit projector, got dim {}", p.dim())));
    }
    if factor >= factors {
        return Err(Error::Dimension(format!("factor {factor} out of range for {factors} factors")));
    }
    check_dim(1usize.checked_shl(factors as u32).unwrap_or(0))?;
    let id = Projector::identity(2)?;
    let mut out: Option<Projector> = None;
    for k in 0..factors {
        let piece = if k == factor { p } else { &id };
        out = Some(match out {
            None => piece.clone(),
            Some(acc) => acc.tensor(piece),
        });
    }
    Ok(out.expect("factors >= 1"))
}

/// The two-qubit singlet `(ψ₊ ⊗ ψ₋ − ψ₋ ⊗ ψ₊)/√2` built along `direction`.
pub fn singlet(direction: [f64; 3]) -> Result<StateVector> {
    let up = spin_up_vector(direction)?;
    let down = spin_down_vector(direction)?;
    let v = up.tensor(&down).amplitudes - down.tensor(&up).amplitudes;
    Ok(StateVector::from_unit_unchecked(v.unscale(2f64.sqrt())))
}

/// Builds a complex matrix from rows of `(re, im)` pairs.
pub fn matrix_from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    let m = rows[0].len();
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::Dimension("ragged matrix rows".into()));
    }
    Ok(CMatrix::from_fn(n, m, |r, c| Complex64::new(rows[r][c][0], rows[r][c][1])))
}

/// Inverse of [`matrix_from_pairs`].
pub fn matrix_to_pairs(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn span_of_axis_is_diagonal() {
        let p = projector_from_span(&[StateVector::basis(2, 0).unwrap()]).unwrap();
        assert_eq!(p.rank(), 1);
        let expected = CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        assert!(frobenius(&(p.matrix() - expected)) < 1e-12);
    }

    #[test]
    fn span_of_full_basis_is_identity() {
        let p = projector_from_span(&[StateVector::basis(2, 0).unwrap(), StateVector::basis(2, 1).unwrap()]).unwrap();
        assert_eq!(p.rank(), 2);
        assert!(p.approx_eq(&Projector::identity(2).unwrap()));
    }

    #[test]
    fn dependent_vectors_are_deflated() {
        let a = StateVector::from_real(&[1.0, 1.0, 0.0]).unwrap();
        let b = StateVector::from_real(&[1.0, 0.0, 0.0]).unwrap();
        let d = StateVector::from_real(&[0.0, 1.0, 0.0]).unwrap();
        let p = projector_from_span(&[a, b, d]).unwrap();
        assert_eq!(p.rank(), 2);
    }

    #[test]
    fn span_rejects_mixed_dims_and_empty() {
        let a = StateVector::basis(2, 0).unwrap();
        let b = StateVector::basis(3, 0).unwrap();
        assert!(matches!(projector_from_span(&[a, b]), Err(Error::Dimension(_))));
        assert!(projector_from_span(&[]).is_err());
    }

    #[test]
    fn spin_up_conventions() {
        let up_z = spin_up_vector([0.0, 0.0, 1.0]).unwrap();
        assert!((up_z.amplitudes()[0] - c(1.0)).norm() < 1e-15);
        assert!(up_z.amplitudes()[1].norm() < 1e-15);
        let down_z = spin_up_vector([0.0, 0.0, -1.0]).unwrap();
        assert!(down_z.amplitudes()[0].norm() < 1e-15);
        assert!((down_z.amplitudes()[1] - c(1.0)).norm() < 1e-15);
        assert!(matches!(spin_up_vector([0.0, 0.0, 0.0]), Err(Error::Domain(_))));
        assert!(spin_up_vector([0.0, 0.0, 2.0]).is_err());
    }

    #[test]
    fn spin_up_x_matches_numerical_eigenvector_of_sigma_x() {
        // Oracle: diagonalize σ_x directly.
        let sigma_x = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let eig = SymmetricEigen::new(sigma_x);
        let top = eig.eigenvalues.imax();
        assert!((eig.eigenvalues[top] - 1.0).abs() < 1e-12);
        let v = StateVector::normalized(eig.eigenvectors.column(top).iter().copied().collect())
            .unwrap()
            .with_canonical_phase();
        let up_x = spin_up_vector([1.0, 0.0, 0.0]).unwrap();
        let h = 0.5f64.sqrt();
        for k in 0..2 {
            assert!((up_x.amplitudes()[k] - c(h)).norm() < 1e-12);
            assert!((v.amplitudes()[k] - up_x.amplitudes()[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn spin_vectors_are_eigenvectors_of_pauli_combination() {
        for &(x, y, z) in &[(0.6, 0.0, 0.8), (0.0, 0.6, -0.8), (-1.0, 0.0, 0.0), (0.48, 0.6, 0.64)] {
            let n = [x, y, z];
            let i = Complex64::new(0.0, 1.0);
            let ns = CMatrix::from_row_slice(2, 2, &[c(z), c(x) - i * y, c(x) + i * y, c(-z)]);
            let up = spin_up_vector(n).unwrap();
            let down = spin_down_vector(n).unwrap();
            assert!((&ns * up.amplitudes() - up.amplitudes()).norm() < 1e-12);
            assert!((&ns * down.amplitudes() + down.amplitudes()).norm() < 1e-12);
        }
    }

    #[test]
    fn tensor_of_basis_vectors() {
        let z = [0.0, 0.0, 1.0];
        let v = spin_up_vector(z).unwrap().tensor(&spin_down_vector(z).unwrap());
        let expected = [0.0, 1.0, 0.0, 0.0];
        for (a, e) in v.amplitudes().iter().zip(expected) {
            assert!((a - c(e)).norm() < 1e-15);
        }
        let id = Operator::identity(2).unwrap().tensor(&Operator::identity(2).unwrap());
        assert_eq!(id, Operator::identity(4).unwrap());
    }

    #[test]
    fn trace_rule_on_full_space_is_one() {
        let w = DensityOperator::maximally_mixed(3).unwrap();
        assert!((gleason_measure(&w, &Projector::identity(3).unwrap()).unwrap() - 1.0).abs() < TAU_PROB);
        assert_eq!(gleason_measure(&w, &Projector::zero(3).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn trace_rule_example_one_value() {
        // cos²θ = 0.9
        let theta = 0.9f64.sqrt().acos();
        let w = DensityOperator::pure(&StateVector::basis(2, 0).unwrap());
        let e1 = projector_from_span(&[StateVector::from_real(&[theta.cos(), theta.sin()]).unwrap()]).unwrap();
        assert!((gleason_measure(&w, &e1).unwrap() - 0.9).abs() < TAU_PROB);
    }

    #[test]
    fn trace_rule_dimension_mismatch() {
        let w = DensityOperator::maximally_mixed(2).unwrap();
        assert!(matches!(gleason_measure(&w, &Projector::identity(3).unwrap()), Err(Error::Dimension(_))));
    }

    #[test]
    fn validators_reject_bad_matrices() {
        let not_herm = CMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(0.0), c(0.0)]);
        assert!(Projector::new(not_herm.clone()).is_err());
        assert!(DensityOperator::new(not_herm).is_err());
        let half = CMatrix::identity(2, 2).scale(0.5);
        assert!(Projector::new(half.clone()).is_err());
        assert!(DensityOperator::new(half).is_ok());
        let negative = CMatrix::from_row_slice(2, 2, &[c(1.5), c(0.0), c(0.0), c(-0.5)]);
        assert!(DensityOperator::new(negative).is_err());
        assert!(HilbertDim::new(0).is_err());
        assert!(HilbertDim::new(65).is_err());
    }

    #[test]
    fn singlet_is_unit_and_antisymmetric() {
        let s = singlet([0.0, 0.0, 1.0]).unwrap();
        assert!((s.amplitudes().norm() - 1.0).abs() < 1e-15);
        let h = 0.5f64.sqrt();
        assert!((s.amplitudes()[1] - c(h)).norm() < 1e-15);
        assert!((s.amplitudes()[2] + c(h)).norm() < 1e-15);
    }

    #[test]
    fn embedded_projectors_have_expected_rank() {
        let up = spin_up_vector([0.0, 0.0, 1.0]).unwrap().projector();
        let p = embed_qubit_projector(&up, 1, 3).unwrap();
        assert_eq!(p.dim(), 8);
        assert_eq!(p.rank(), 4);
        assert!(Projector::new(p.matrix().clone()).is_ok());
    }
}
