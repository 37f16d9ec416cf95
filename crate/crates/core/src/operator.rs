//! Dense complex operators and the spectral toolkit built on them.
//!
//! Every Hamiltonian, state and observable in the crate is a
//! [`ComplexOperator`]. Composite spaces are always ordered system ⊗ bath.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Relative Hermiticity tolerance: `max|M - M†| <= HERMITIAN_TOL * max|M|`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Allowed trace deviation for a density matrix.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues below `-POSITIVITY_TOL` make an operator non-positive.
pub const POSITIVITY_TOL: f64 = 1e-10;

const DEGENERACY_TOL: f64 = 1e-9;

/// Dense square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexOperator(DMatrix<C64>);

/// Which factor of a system ⊗ bath product to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    System,
    Bath,
}

impl ComplexOperator {
    /// Wraps a matrix after checking it is square with finite entries.
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        for (col, column) in matrix.column_iter().enumerate() {
            for (row, z) in column.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row, col });
                }
            }
        }
        Ok(Self(matrix))
    }

    pub(crate) fn wrap(matrix: DMatrix<C64>) -> Self {
        debug_assert_eq!(matrix.nrows(), matrix.ncols());
        Self(matrix)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_diagonal(diagonal: &[f64]) -> Self {
        let n = diagonal.len();
        Self(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diagonal[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    /// Builds an operator from real entries given in row-major order.
    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Self::new(DMatrix::from_fn(dim, dim, |i, j| {
            C64::new(entries[i * dim + j], 0.0)
        }))
    }

    /// `|ψ⟩⟨ψ|` for an unnormalized ket.
    pub fn projector(ket: &[C64]) -> Self {
        let n = ket.len();
        Self(DMatrix::from_fn(n, n, |i, j| ket[i] * ket[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// Largest off-diagonal entry modulus.
    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0_f64;
        for j in 0..n {
            for i in 0..n {
                if i != j {
                    m = m.max(self.0[(i, j)].norm());
                }
            }
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max|M - M†|`.
    pub fn hermiticity_violation(&self) -> f64 {
        let n = self.dim();
        let mut v = 0.0_f64;
        for j in 0..n {
            for i in 0..=j {
                v = v.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        v
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_violation() <= HERMITIAN_TOL * self.max_abs()
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(&self.0 * C64::new(factor, 0.0))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    /// `Re Tr(ρ A)`.
    pub fn expectation(&self, rho: &DensityMatrix) -> f64 {
        trace_of_product(rho.matrix(), &self.0).re
    }

    /// `max|A - B|` entrywise.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).norm()))
    }
}

/// `Tr(AB)` without forming the product.
pub fn trace_of_product(a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

impl Add for &ComplexOperator {
    type Output = ComplexOperator;
    fn add(self, rhs: Self) -> ComplexOperator {
        ComplexOperator(&self.0 + &rhs.0)
    }
}

impl Add for ComplexOperator {
    type Output = ComplexOperator;
    fn add(self, rhs: Self) -> ComplexOperator {
        ComplexOperator(self.0 + rhs.0)
    }
}

impl Sub for &ComplexOperator {
    type Output = ComplexOperator;
    fn sub(self, rhs: Self) -> ComplexOperator {
        ComplexOperator(&self.0 - &rhs.0)
    }
}

impl Sub for ComplexOperator {
    type Output = ComplexOperator;
    fn sub(self, rhs: Self) -> ComplexOperator {
        ComplexOperator(self.0 - rhs.0)
    }
}

impl Mul for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, rhs: Self) -> ComplexOperator {
        ComplexOperator(&self.0 * &rhs.0)
    }
}

impl Mul for ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, rhs: Self) -> ComplexOperator {
        ComplexOperator(self.0 * rhs.0)
    }
}

impl Mul<C64> for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, rhs: C64) -> ComplexOperator {
        ComplexOperator(&self.0 * rhs)
    }
}

impl Mul<f64> for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, rhs: f64) -> ComplexOperator {
        self.scale(rhs)
    }
}

impl Neg for &ComplexOperator {
    type Output = ComplexOperator;
    fn neg(self) -> ComplexOperator {
        self.scale(-1.0)
    }
}

/// Eigen-decomposition `M = V diag(λ) V†` of a Hermitian operator.
///
/// Eigenvalues are ascending. Each eigenvector is phase-fixed so that its
/// first largest-modulus component is real and positive, which makes the
/// output a deterministic function of the input.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<C64>,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary whose columns are the eigenvectors.
    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(f(λ)) V†` for a function that is finite on the spectrum.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<ComplexOperator> {
        let values = self
            .eigenvalues
            .iter()
            .map(|&l| {
                let v = f(l);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Domain { eigenvalue: l })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.compose(&values))
    }

    /// `V diag(values) V†` with caller-supplied spectral values.
    pub fn compose(&self, values: &[f64]) -> ComplexOperator {
        ComplexOperator(conjugate_diagonal(&self.eigenvectors, values))
    }

    /// `V diag(g(λ)) V†` for a complex-valued spectral function.
    pub fn compose_complex(&self, f: impl Fn(f64) -> C64) -> ComplexOperator {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= f(self.eigenvalues[k]);
        }
        ComplexOperator(scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexOperator {
        self.compose(&self.eigenvalues)
    }

    /// `V† M V`: an operator expressed in this eigenbasis.
    pub fn to_eigenbasis(&self, op: &ComplexOperator) -> DMatrix<C64> {
        self.eigenvectors.adjoint() * op.matrix() * &self.eigenvectors
    }
}

/// `V diag(d) V†`.
pub(crate) fn conjugate_diagonal(v: &DMatrix<C64>, d: &[f64]) -> DMatrix<C64> {
    let mut scaled = v.clone();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        col *= C64::new(d[k], 0.0);
    }
    scaled * v.adjoint()
}

/// Hermitian eigen-decomposition with ascending eigenvalues.
pub fn herm_eig(m: &ComplexOperator) -> Result<SpectralDecomposition> {
    let violation = m.hermiticity_violation();
    if violation > HERMITIAN_TOL * m.max_abs() {
        return Err(Error::NotHermitian { violation });
    }
    let n = m.dim();
    let max_iterations = 1000 * n.max(1);
    let eig = SymmetricEigen::try_new(m.hermitian_part().0, f64::EPSILON, max_iterations).ok_or(
        Error::NoConvergence {
            iterations: max_iterations,
        },
    )?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    for mut col in eigenvectors.column_iter_mut() {
        let max = col.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        if let Some(pivot) = col.iter().find(|z| z.norm() >= max * (1.0 - 1e-9)).copied() {
            let phase = pivot.conj() / pivot.norm();
            col *= phase;
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// `f(M)` for Hermitian `M` and a real scalar function.
pub fn mat_func(m: &ComplexOperator, f: impl Fn(f64) -> f64) -> Result<ComplexOperator> {
    herm_eig(m)?.map(f)
}

/// Clamps finite-precision negative drift in a positive semidefinite spectrum.
pub(crate) fn clamp_nonnegative(eigenvalue: f64) -> Result<f64> {
    if eigenvalue < -POSITIVITY_TOL {
        Err(Error::Domain { eigenvalue })
    } else {
        Ok(eigenvalue.max(0.0))
    }
}

/// `ln M` on the support of a positive semidefinite `M`.
///
/// Eigenvalues in `[-1e-10, 0]` are treated as exact zeros and contribute
/// nothing (`0 ln 0 = 0`); anything more negative is a domain error.
pub fn log_psd(m: &ComplexOperator) -> Result<ComplexOperator> {
    let eig = herm_eig(m)?;
    let values = eig
        .eigenvalues()
        .iter()
        .map(|&l| clamp_nonnegative(l).map(|p| if p > 0.0 { p.ln() } else { 0.0 }))
        .collect::<Result<Vec<_>>>()?;
    Ok(eig.compose(&values))
}

/// `M^a` for positive semidefinite `M` and `a > 0`.
pub fn power_psd(m: &ComplexOperator, a: f64) -> Result<ComplexOperator> {
    let eig = herm_eig(m)?;
    let values = eig
        .eigenvalues()
        .iter()
        .map(|&l| clamp_nonnegative(l).map(|p| if p > 0.0 { p.powf(a) } else { 0.0 }))
        .collect::<Result<Vec<_>>>()?;
    Ok(eig.compose(&values))
}

/// Kronecker product `A ⊗ B`.
pub fn tensor(a: &ComplexOperator, b: &ComplexOperator) -> ComplexOperator {
    ComplexOperator(a.0.kronecker(&b.0))
}

/// Traces out one factor of an operator on a `d_S ⊗ d_B` space.
pub fn partial_trace(m: &ComplexOperator, dims: (usize, usize), keep: Subsystem) -> Result<ComplexOperator> {
    let (ds, db) = dims;
    if m.dim() != ds * db {
        return Err(Error::DimensionMismatch {
            expected: ds * db,
            actual: m.dim(),
        });
    }
    let x = &m.0;
    let out = match keep {
        Subsystem::System => {
            DMatrix::from_fn(ds, ds, |i, j| (0..db).map(|b| x[(i * db + b, j * db + b)]).sum())
        }
        Subsystem::Bath => {
            DMatrix::from_fn(db, db, |a, b| (0..ds).map(|s| x[(s * db + a, s * db + b)]).sum())
        }
    };
    Ok(ComplexOperator(out))
}

/// Groups ascending eigenvalues into degenerate clusters.
fn degenerate_blocks(eigenvalues: &[f64]) -> Vec<usize> {
    let scale = eigenvalues.iter().fold(1.0_f64, |m, l| m.max(l.abs()));
    let mut labels = Vec::with_capacity(eigenvalues.len());
    let mut block = 0;
    for (k, l) in eigenvalues.iter().enumerate() {
        if k > 0 && l - eigenvalues[k - 1] > DEGENERACY_TOL * scale {
            block += 1;
        }
        labels.push(block);
    }
    labels
}

/// Removes coherences between distinct eigenspaces of `h`.
///
/// Coherences inside a degenerate eigenspace are kept, so the map commutes
/// with every unitary generated by `h`.
pub fn dephase(rho: &DensityMatrix, h: &ComplexOperator) -> Result<DensityMatrix> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            actual: rho.dim(),
        });
    }
    let eig = herm_eig(h)?;
    let labels = degenerate_blocks(eig.eigenvalues());
    let mut x = eig.to_eigenbasis(rho.operator());
    for j in 0..x.ncols() {
        for i in 0..x.nrows() {
            if labels[i] != labels[j] {
                x[(i, j)] = C64::new(0.0, 0.0);
            }
        }
    }
    let v = eig.eigenvectors();
    Ok(DensityMatrix(ComplexOperator(v * x * v.adjoint())))
}

/// Removes every coherence of `ρ` in the orthonormal basis given by the
/// columns of `basis`.
pub fn dephase_in_basis(rho: &DensityMatrix, basis: &DMatrix<C64>) -> Result<DensityMatrix> {
    if rho.dim() != basis.nrows() || basis.nrows() != basis.ncols() {
        return Err(Error::DimensionMismatch {
            expected: basis.nrows(),
            actual: rho.dim(),
        });
    }
    let x = basis.adjoint() * rho.matrix() * basis;
    let diag: Vec<f64> = (0..x.nrows()).map(|i| x[(i, i)].re).collect();
    Ok(DensityMatrix(ComplexOperator(conjugate_diagonal(basis, &diag))))
}

/// A positive semidefinite, unit-trace Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexOperator);

impl DensityMatrix {
    pub fn new(op: ComplexOperator) -> Result<Self> {
        let violation = op.hermiticity_violation();
        if violation > HERMITIAN_TOL * op.max_abs().max(1.0) {
            return Err(Error::InvalidState(format!(
                "not Hermitian (violation {violation:e})"
            )));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let eig = herm_eig(&op)?;
        let min = eig.eigenvalues()[0];
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self(op))
    }

    pub(crate) fn new_unchecked(op: ComplexOperator) -> Self {
        Self(op)
    }

    /// Normalizes `|ψ⟩` and returns `|ψ⟩⟨ψ|`.
    pub fn pure(ket: &[C64]) -> Result<Self> {
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite ket".into()));
        }
        let normalized: Vec<C64> = ket.iter().map(|z| z / norm).collect();
        Ok(Self(ComplexOperator::projector(&normalized)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexOperator::identity(dim).scale(1.0 / dim as f64))
    }

    /// Normalizes a positive semidefinite operator to unit trace.
    pub fn from_unnormalized(op: &ComplexOperator) -> Result<Self> {
        let tr = op.trace().re;
        if !(tr > 0.0) {
            return Err(Error::InvalidState(format!("non-positive trace {tr:e}")));
        }
        Self::new(op.hermitian_part().scale(1.0 / tr))
    }

    pub fn operator(&self) -> &ComplexOperator {
        &self.0
    }

    pub fn into_operator(self) -> ComplexOperator {
        self.0
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0 .0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn purity(&self) -> f64 {
        trace_of_product(self.matrix(), self.matrix()).re
    }

    /// Eigenvalues with rounding drift clamped to zero, ascending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        herm_eig(&self.0)?
            .eigenvalues()
            .iter()
            .map(|&l| clamp_nonnegative(l))
            .collect()
    }

    /// `-Tr ρ ln ρ`.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        Ok(shannon(&self.spectrum()?))
    }
}

/// `-Σ p ln p` with `0 ln 0 = 0`.
pub(crate) fn shannon(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn sigma_z() -> ComplexOperator {
        ComplexOperator::from_diagonal(&[1.0, -1.0])
    }

    #[test]
    fn identity_spectrum() {
        let eig = herm_eig(&ComplexOperator::identity(2)).unwrap();
        assert_eq!(eig.eigenvalues(), &[1.0, 1.0]);
    }

    #[test]
    fn pauli_z_spectrum_and_vectors() {
        let eig = herm_eig(&sigma_z()).unwrap();
        assert_eq!(eig.eigenvalues(), &[-1.0, 1.0]);
        let v = eig.eigenvectors();
        // -1 eigenvector is |1>, +1 eigenvector is |0>
        assert!((v[(1, 0)] - c(1.0)).norm() < 1e-15);
        assert!((v[(0, 1)] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexOperator::from_real_rows(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        match herm_eig(&m) {
            Err(Error::NotHermitian { violation }) => assert!((violation - 1.0).abs() < 1e-15),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_square_and_nan() {
        assert!(matches!(
            ComplexOperator::new(DMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(1, 0)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(
            ComplexOperator::new(m),
            Err(Error::NonFinite { row: 1, col: 0 })
        ));
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let e = mat_func(&ComplexOperator::zeros(3), f64::exp).unwrap();
        assert!(e.max_abs_diff(&ComplexOperator::identity(3)) < 1e-15);
    }

    #[test]
    fn log_inverts_exp() {
        let e = mat_func(&sigma_z(), f64::exp).unwrap();
        let l = mat_func(&e, f64::ln).unwrap();
        assert!(l.max_abs_diff(&sigma_z()) < 1e-12);
    }

    #[test]
    fn log_domain_error_names_eigenvalue() {
        let m = ComplexOperator::from_diagonal(&[1.0, -0.5]);
        match mat_func(&m, f64::ln) {
            Err(Error::Domain { eigenvalue }) => assert_eq!(eigenvalue, -0.5),
            other => panic!("expected domain error, got {other:?}"),
        }
        assert!(matches!(log_psd(&m), Err(Error::Domain { .. })));
        // rounding-level negativity is clamped
        let ok = ComplexOperator::from_diagonal(&[1.0, -1e-13]);
        assert!(log_psd(&ok).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn identity_tensor_identity() {
        let t = tensor(&ComplexOperator::identity(2), &ComplexOperator::identity(3));
        assert_eq!(t, ComplexOperator::identity(6));
    }

    #[test]
    fn tensor_block_structure() {
        let sz = ComplexOperator::from_diagonal(&[0.5, -0.5]);
        let t = tensor(&sz, &ComplexOperator::identity(3));
        assert_eq!(t.diagonal_real(), vec![0.5, 0.5, 0.5, -0.5, -0.5, -0.5]);
    }

    #[test]
    fn bell_state_reduces_to_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DensityMatrix::pure(&[c(s), c(0.0), c(0.0), c(s)]).unwrap();
        let r = partial_trace(bell.operator(), (2, 2), Subsystem::System).unwrap();
        assert!(r.max_abs_diff(&ComplexOperator::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        let m = ComplexOperator::identity(5);
        match partial_trace(&m, (2, 3), Subsystem::System) {
            Err(Error::DimensionMismatch { expected, actual }) => {
                assert_eq!((expected, actual), (6, 5))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dephase_plus_state() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityMatrix::pure(&[c(s), c(s)]).unwrap();
        let d = dephase(&plus, &sigma_z()).unwrap();
        assert!(
            d.operator()
                .max_abs_diff(&ComplexOperator::identity(2).scale(0.5))
                < 1e-15
        );
    }

    #[test]
    fn dephase_keeps_degenerate_block() {
        // H = diag(0, 1, 1): coherence between the two degenerate levels survives
        let h = ComplexOperator::from_diagonal(&[0.0, 1.0, 1.0]);
        let psi = [c(0.0), c(0.6), c(0.8)];
        let rho = DensityMatrix::pure(&psi).unwrap();
        let d = dephase(&rho, &h).unwrap();
        assert!(d.operator().max_abs_diff(rho.operator()) < 1e-14);

        let full = dephase_in_basis(&rho, &DMatrix::identity(3, 3)).unwrap();
        assert!(full.operator().entry(1, 2).norm() < 1e-15);
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexOperator::identity(2)).is_err());
        assert!(DensityMatrix::new(ComplexOperator::from_diagonal(&[1.5, -0.5])).is_err());
        assert!(DensityMatrix::new(ComplexOperator::from_diagonal(&[0.25, 0.75])).is_ok());
    }

    #[test]
    fn entropy_of_maximally_mixed() {
        let s = DensityMatrix::maximally_mixed(4).von_neumann_entropy().unwrap();
        assert!((s - 4f64.ln()).abs() < 1e-14);
    }
}
