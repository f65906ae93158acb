//! Truncated Fock spaces and bosonic ladder operators for the three-mode system.
//!
//! Mode order is fixed as (a, b, c) with mode a the slowest-varying index in
//! the tensor-product basis, i.e. basis state |n_a, n_b, n_c> has flat index
//! `n_a * dim_b * dim_c + n_b * dim_c + n_c`. Every operator in the crate uses
//! this convention, including the superoperator vectorization.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::liouvillian::DensityMatrix;

/// Number of bosonic modes (a, b, c).
pub const N_MODES: usize = 3;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FockError {
    #[error("mode index {0} out of range (modes are 0=a, 1=b, 2=c)")]
    InvalidMode(usize),
    #[error("every mode dimension must be at least 1, got {0:?}")]
    InvalidDims([usize; 3]),
    #[error("operands live on different Hilbert spaces: {0:?} vs {1:?}")]
    SpaceMismatch([usize; 3], [usize; 3]),
    #[error("occupation {occ:?} lies outside the truncation {dims:?}")]
    OccupationOutOfRange { occ: [usize; 3], dims: [usize; 3] },
}

/// Truncated tensor-product Hilbert space for the three cavity modes.
///
/// `dims[m]` is the number of retained Fock levels 0..dims[m]-1 of mode m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct HilbertSpace {
    dims: [usize; 3],
}

impl HilbertSpace {
    /// Builds a space from per-mode truncation dimensions. Each dimension must
    /// be at least 1 (a one-level mode is a frozen spectator, which the
    /// single-mode reference cases rely on).
    pub fn new(dims: [usize; 3]) -> Result<Self, FockError> {
        if dims.contains(&0) {
            return Err(FockError::InvalidDims(dims));
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn dim(&self, mode: usize) -> usize {
        self.dims[mode]
    }

    /// Product of the per-mode dimensions.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Flat index of the basis state |n_a, n_b, n_c>.
    pub fn basis_index(&self, occupation: [usize; 3]) -> usize {
        debug_assert!(occupation.iter().zip(&self.dims).all(|(n, d)| n < d));
        (occupation[0] * self.dims[1] + occupation[1]) * self.dims[2] + occupation[2]
    }

    /// Inverse of [`basis_index`](Self::basis_index).
    pub fn occupation(&self, index: usize) -> [usize; 3] {
        let nc = index % self.dims[2];
        let rest = index / self.dims[2];
        let nb = rest % self.dims[1];
        let na = rest / self.dims[1];
        [na, nb, nc]
    }
}

/// A complex matrix acting on a [`HilbertSpace`].
///
/// Operators are stored dense: at the truncations used here the space is at
/// most a few hundred dimensional, and only the superoperator is large enough
/// to need sparsity. Arithmetic is available through the standard operator traits;
/// mixing operators from different spaces panics, mirroring the dimension
/// checks `nalgebra` itself performs.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    space: HilbertSpace,
    matrix: DMatrix<Complex64>,
}

impl FockOperator {
    /// Wraps an explicit matrix. Panics if the matrix is not square with the
    /// space's total dimension.
    pub fn from_matrix(space: HilbertSpace, matrix: DMatrix<Complex64>) -> Self {
        let d = space.total_dim();
        assert_eq!(
            (matrix.nrows(), matrix.ncols()),
            (d, d),
            "operator matrix must be {d}x{d} for this space"
        );
        Self { space, matrix }
    }

    pub fn zeros(space: HilbertSpace) -> Self {
        let d = space.total_dim();
        Self { space, matrix: DMatrix::zeros(d, d) }
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self { space: self.space, matrix: self.matrix.adjoint() }
    }

    /// Largest absolute deviation from Hermiticity, max |O - O†|.
    pub fn hermiticity_defect(&self) -> f64 {
        let adj = self.matrix.adjoint();
        (&self.matrix - adj).camax()
    }

    fn assert_same_space(&self, other: &Self) {
        assert_eq!(
            self.space, other.space,
            "operands live on different Hilbert spaces: {:?} vs {:?}",
            self.space.dims, other.space.dims
        );
    }
}

impl std::ops::Add for &FockOperator {
    type Output = FockOperator;
    fn add(self, rhs: &FockOperator) -> FockOperator {
        self.assert_same_space(rhs);
        FockOperator { space: self.space, matrix: &self.matrix + &rhs.matrix }
    }
}

impl std::ops::Sub for &FockOperator {
    type Output = FockOperator;
    fn sub(self, rhs: &FockOperator) -> FockOperator {
        self.assert_same_space(rhs);
        FockOperator { space: self.space, matrix: &self.matrix - &rhs.matrix }
    }
}

impl std::ops::Mul for &FockOperator {
    type Output = FockOperator;
    fn mul(self, rhs: &FockOperator) -> FockOperator {
        self.assert_same_space(rhs);
        FockOperator { space: self.space, matrix: &self.matrix * &rhs.matrix }
    }
}

impl std::ops::Mul<&FockOperator> for Complex64 {
    type Output = FockOperator;
    fn mul(self, rhs: &FockOperator) -> FockOperator {
        FockOperator { space: rhs.space, matrix: &rhs.matrix * self }
    }
}

impl std::ops::Mul<&FockOperator> for f64 {
    type Output = FockOperator;
    fn mul(self, rhs: &FockOperator) -> FockOperator {
        Complex64::new(self, 0.0) * rhs
    }
}

impl std::ops::Neg for &FockOperator {
    type Output = FockOperator;
    fn neg(self) -> FockOperator {
        FockOperator { space: self.space, matrix: -&self.matrix }
    }
}

/// Single-mode lowering matrix <n-1|a|n> = sqrt(n) on `dim` levels.
fn lowering_matrix(dim: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    m
}

/// Embeds a single-mode matrix into the full space via Kronecker products
/// with identities on the other modes, in fixed (a, b, c) order.
fn embed(space: HilbertSpace, mode: usize, single: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eye = |d: usize| DMatrix::<Complex64>::identity(d, d);
    let [da, db, dc] = space.dims();
    match mode {
        0 => single.kronecker(&eye(db)).kronecker(&eye(dc)),
        1 => eye(da).kronecker(single).kronecker(&eye(dc)),
        2 => eye(da).kronecker(&eye(db)).kronecker(single),
        _ => unreachable!("mode validated by caller"),
    }
}

/// Annihilation operator of `mode`, embedded in the full space.
pub fn annihilation(space: HilbertSpace, mode: usize) -> Result<FockOperator, FockError> {
    if mode >= N_MODES {
        return Err(FockError::InvalidMode(mode));
    }
    let single = lowering_matrix(space.dim(mode));
    Ok(FockOperator { space, matrix: embed(space, mode, &single) })
}

/// Creation operator of `mode`: the adjoint of [`annihilation`]. Under hard
/// truncation the top level maps to zero.
pub fn creation(space: HilbertSpace, mode: usize) -> Result<FockOperator, FockError> {
    Ok(annihilation(space, mode)?.adjoint())
}

/// Number operator a†a of `mode`.
pub fn number(space: HilbertSpace, mode: usize) -> Result<FockOperator, FockError> {
    let a = annihilation(space, mode)?;
    Ok(&a.adjoint() * &a)
}

/// Identity operator on the full space.
pub fn identity(space: HilbertSpace) -> FockOperator {
    let d = space.total_dim();
    FockOperator { space, matrix: DMatrix::identity(d, d) }
}

/// Expectation value Tr(rho O).
pub fn expectation(rho: &DensityMatrix, op: &FockOperator) -> Result<Complex64, FockError> {
    if rho.space() != op.space() {
        return Err(FockError::SpaceMismatch(rho.space().dims(), op.space().dims()));
    }
    let r = rho.matrix();
    let o = op.matrix();
    let d = op.space().total_dim();
    let mut sum = Complex64::ZERO;
    for i in 0..d {
        for j in 0..d {
            sum += r[(i, j)] * o[(j, i)];
        }
    }
    Ok(sum)
}
