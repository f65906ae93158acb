//! Lindblad generator assembly, steady-state solvers, time evolution, and
//! photon-correlation observables.
//!
//! The master equation dρ/dt = −i[H,ρ] + Σ_k r_k D[o_k]ρ, with
//! D[o]ρ = oρo† − ½(o†oρ + ρo†o), is vectorized by column stacking
//! (vec(ρ)[j·D+i] = ρ_ij) into a sparse D²×D² generator. The steady state is
//! the kernel element with unit trace, obtained by replacing the first row of
//! the generator with the trace functional and solving against e₀. Small
//! systems go through a sparse direct LU; large ones through ILU(0)-
//! preconditioned restarted GMRES, which avoids the memory blow-up of LU
//! fill-in above roughly 10⁵ unknowns.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fock::{annihilation, FockError, FockOperator, HilbertSpace};
use crate::model::CollapseChannel;
use crate::sparse::{gmres, norm2, Csr, Ilu0};

type C = Complex64;

/// Largest vectorized dimension D² still sent to the direct LU solver when
/// the method is [`SolverMethod::Auto`]. Above this the LU fill-in is the
/// memory bottleneck and GMRES takes over.
const DIRECT_DIM_LIMIT: usize = 90_000;

const HERMITICITY_TOL: f64 = 1e-9;
const TRACE_TOL: f64 = 1e-9;
const POSITIVITY_TOL: f64 = -1e-8;

/// Mean photon numbers below this make normalized correlations meaningless.
const CORRELATION_FLOOR: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("operator acts on {found:?} but the generator was built on {expected:?}")]
    SpaceMismatch { expected: [usize; 3], found: [usize; 3] },
    #[error("steady state is not unique (the constrained system is rank-deficient)")]
    NonUnique,
    #[error("iterative solver stalled at relative residual {residual:.3e}")]
    NotConverged { residual: f64 },
    #[error("time integration became unstable at t = {time:.6}; reduce the step size")]
    Instability { time: f64 },
    #[error("time integration drifted the trace by {drift:.3e} (limit 1e-6)")]
    TraceDrift { drift: f64 },
    #[error("correlation undefined: mean photon number {mean:.3e} is below 1e-12")]
    UndefinedCorrelation { mean: f64 },
    #[error("correlation order {0} not supported (only 2 and 3)")]
    UnsupportedOrder(usize),
    #[error("solution violates density-matrix invariants: {0}")]
    InvalidState(String),
    #[error(transparent)]
    Fock(#[from] FockError),
}

/// A density matrix on a [`HilbertSpace`], validated to be Hermitian
/// (defect ≤ 1e-9), unit trace (within 1e-9), and positive semidefinite
/// (eigenvalues ≥ −1e-8).
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    space: HilbertSpace,
    matrix: DMatrix<C>,
}

impl DensityMatrix {
    /// Validates and wraps a candidate matrix.
    pub fn try_new(space: HilbertSpace, matrix: DMatrix<C>) -> Result<Self, SolverError> {
        let d = space.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(SolverError::InvalidState(format!(
                "matrix is {}x{}, space needs {d}x{d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = (&matrix - matrix.adjoint()).camax();
        if defect > HERMITICITY_TOL {
            return Err(SolverError::InvalidState(format!(
                "hermiticity defect {defect:.3e} exceeds {HERMITICITY_TOL:.0e}"
            )));
        }
        let trace = matrix.trace();
        if (trace - C::ONE).norm() > TRACE_TOL {
            return Err(SolverError::InvalidState(format!(
                "trace {trace} deviates from 1 by more than {TRACE_TOL:.0e}"
            )));
        }
        let hermitized = (&matrix + matrix.adjoint()) * C::new(0.5, 0.0);
        let min_eig = hermitized
            .symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |m, &e| m.min(e));
        if min_eig < POSITIVITY_TOL {
            return Err(SolverError::InvalidState(format!(
                "smallest eigenvalue {min_eig:.3e} below {POSITIVITY_TOL:.0e}"
            )));
        }
        Ok(Self { space, matrix })
    }

    /// |0,0,0><0,0,0|.
    pub fn vacuum(space: HilbertSpace) -> Self {
        Self::basis_projector(space, [0, 0, 0]).expect("vacuum always inside truncation")
    }

    /// Projector |n_a,n_b,n_c><n_a,n_b,n_c| onto a Fock basis state.
    pub fn basis_projector(space: HilbertSpace, occupation: [usize; 3]) -> Result<Self, FockError> {
        if occupation.iter().zip(&space.dims()).any(|(n, d)| n >= d) {
            return Err(FockError::OccupationOutOfRange { occ: occupation, dims: space.dims() });
        }
        let d = space.total_dim();
        let mut m = DMatrix::zeros(d, d);
        let idx = space.basis_index(occupation);
        m[(idx, idx)] = C::ONE;
        Ok(Self { space, matrix: m })
    }

    /// I/D: the maximally mixed state.
    pub fn maximally_mixed(space: HilbertSpace) -> Self {
        let d = space.total_dim();
        let m = DMatrix::identity(d, d) * C::new(1.0 / d as f64, 0.0);
        Self { space, matrix: m }
    }

    /// Product of truncated coherent states |α_a, α_b, α_c>, renormalized so
    /// the trace is exactly 1 despite truncation.
    pub fn coherent(space: HilbertSpace, alpha: [C; 3]) -> Self {
        let mut psi = DMatrix::from_element(1, 1, C::ONE);
        for (mode, &alpha) in alpha.iter().enumerate() {
            let dim = space.dim(mode);
            let mut v = DMatrix::zeros(dim, 1);
            let mut amp = C::ONE;
            for k in 0..dim {
                if k > 0 {
                    amp *= alpha / C::new((k as f64).sqrt(), 0.0);
                }
                v[(k, 0)] = amp;
            }
            let norm = v.camax().max(1.0);
            // Scale before normalizing to avoid overflow for large alpha.
            v /= C::new(norm, 0.0);
            let n2 = v.norm();
            v /= C::new(n2, 0.0);
            psi = psi.kronecker(&v);
        }
        let matrix = &psi * psi.adjoint();
        Self { space, matrix }
    }

    /// Product of truncated thermal states with the given mean occupations,
    /// renormalized over the truncated space.
    pub fn thermal(space: HilbertSpace, nbar: [f64; 3]) -> Self {
        assert!(nbar.iter().all(|&n| n >= 0.0), "thermal occupations must be non-negative");
        let mut diag: Vec<f64> = vec![1.0];
        for (mode, &nbar) in nbar.iter().enumerate() {
            let dim = space.dim(mode);
            let ratio = nbar / (nbar + 1.0);
            let mut weights = Vec::with_capacity(dim);
            let mut w = 1.0;
            for _ in 0..dim {
                weights.push(w);
                w *= ratio;
            }
            let z: f64 = weights.iter().sum();
            let mut next = Vec::with_capacity(diag.len() * dim);
            for &p in &diag {
                for &q in &weights {
                    next.push(p * q / z);
                }
            }
            diag = next;
        }
        let matrix = DMatrix::from_diagonal(&DVector::from_iterator(
            diag.len(),
            diag.iter().map(|&p| C::new(p, 0.0)),
        ));
        Self { space, matrix }
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn matrix(&self) -> &DMatrix<C> {
        &self.matrix
    }

    pub fn trace(&self) -> C {
        self.matrix.trace()
    }

    /// Max-norm of ρ − ρ†.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).camax()
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.matrix + self.matrix.adjoint()) * C::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().fold(f64::INFINITY, |m, &e| m.min(e))
    }

    /// Marginal occupation distribution of one mode (populations traced over
    /// the other two), clamped at zero against rounding noise.
    pub fn mode_occupation_distribution(&self, mode: usize) -> Vec<f64> {
        let mut dist = vec![0.0; self.space.dim(mode)];
        for idx in 0..self.space.total_dim() {
            let occ = self.space.occupation(idx);
            dist[occ[mode]] += self.matrix[(idx, idx)].re;
        }
        for p in &mut dist {
            *p = p.max(0.0);
        }
        dist
    }

    /// Column-stacked vectorization, vec(ρ)[j·D+i] = ρ_ij.
    pub fn to_vec(&self) -> Vec<C> {
        let d = self.space.total_dim();
        let mut v = vec![C::ZERO; d * d];
        for j in 0..d {
            for i in 0..d {
                v[j * d + i] = self.matrix[(i, j)];
            }
        }
        v
    }

    /// Hermitizes, renormalizes, and validates a raw solver output.
    fn from_solution(space: HilbertSpace, raw: DMatrix<C>) -> Result<Self, SolverError> {
        let hermitized = (&raw + raw.adjoint()) * C::new(0.5, 0.0);
        let trace = hermitized.trace().re;
        if trace.abs() < 1e-12 {
            return Err(SolverError::NonUnique);
        }
        Self::try_new(space, hermitized / C::new(trace, 0.0))
    }
}

fn matrix_from_vec(d: usize, x: &[C]) -> DMatrix<C> {
    DMatrix::from_fn(d, d, |i, j| x[j * d + i])
}

/// Sparse column-stacked representation of a Lindblad generator.
#[derive(Debug, Clone)]
pub struct Superoperator {
    space: HilbertSpace,
    matrix: Csr,
}

impl Superoperator {
    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    /// Dimension of the vectorized space, D².
    pub fn dim(&self) -> usize {
        self.matrix.n
    }

    pub fn nnz(&self) -> usize {
        self.matrix.nnz()
    }

    pub(crate) fn apply_vec(&self, x: &[C], y: &mut [C]) {
        self.matrix.matvec(x, y);
    }

    /// dρ/dt as an operator on the underlying space (traceless, not a state).
    pub fn apply(&self, rho: &DensityMatrix) -> Result<FockOperator, SolverError> {
        check_space(self.space, rho.space())?;
        let d = self.space.total_dim();
        let mut y = vec![C::ZERO; d * d];
        self.apply_vec(&rho.to_vec(), &mut y);
        Ok(FockOperator::from_matrix(self.space, matrix_from_vec(d, &y)))
    }

    /// Step size at which fixed-step RK4 integration of this generator stays
    /// stable: 2 over the Gershgorin bound on the spectral radius.
    pub fn suggest_dt(&self) -> f64 {
        2.0 / self.matrix.max_row_abs_sum()
    }

    /// ‖L vec(ρ)‖₂ / ‖vec(ρ)‖₂; zero exactly at a steady state.
    pub fn residual(&self, rho: &DensityMatrix) -> Result<f64, SolverError> {
        check_space(self.space, rho.space())?;
        let x = rho.to_vec();
        let mut y = vec![C::ZERO; x.len()];
        self.apply_vec(&x, &mut y);
        Ok(norm2(&y) / norm2(&x))
    }
}

fn check_space(expected: HilbertSpace, found: HilbertSpace) -> Result<(), SolverError> {
    if expected != found {
        return Err(SolverError::SpaceMismatch {
            expected: expected.dims(),
            found: found.dims(),
        });
    }
    Ok(())
}

/// Pushes α·vec(M X), i.e. α·(I ⊗ M), for every nonzero M[i,k].
fn push_left_mult(trip: &mut Vec<(usize, usize, C)>, alpha: C, m: &DMatrix<C>, d: usize) {
    for i in 0..d {
        for k in 0..d {
            let v = m[(i, k)];
            if v == C::ZERO {
                continue;
            }
            for j in 0..d {
                trip.push((j * d + i, j * d + k, alpha * v));
            }
        }
    }
}

/// Pushes α·vec(X M), i.e. α·(Mᵀ ⊗ I), for every nonzero M[r,p].
fn push_right_mult(trip: &mut Vec<(usize, usize, C)>, alpha: C, m: &DMatrix<C>, d: usize) {
    for r in 0..d {
        for p in 0..d {
            let v = m[(r, p)];
            if v == C::ZERO {
                continue;
            }
            for i in 0..d {
                trip.push((p * d + i, r * d + i, alpha * v));
            }
        }
    }
}

/// Pushes α·vec(o X o†), i.e. α·(ō ⊗ o).
fn push_sandwich(trip: &mut Vec<(usize, usize, C)>, alpha: C, o: &DMatrix<C>, d: usize) {
    let nz: Vec<(usize, usize, C)> = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .filter_map(|(i, j)| {
            let v = o[(i, j)];
            (v != C::ZERO).then_some((i, j, v))
        })
        .collect();
    for &(jo, jl, vj) in &nz {
        let left = alpha * vj.conj();
        for &(io, ik, vi) in &nz {
            trip.push((jo * d + io, jl * d + ik, left * vi));
        }
    }
}

/// Assembles the column-stacked generator for Hamiltonian `h` and the given
/// dissipation channels. All operators must share one space.
pub fn build_liouvillian(
    h: &FockOperator,
    channels: &[CollapseChannel],
) -> Result<Superoperator, SolverError> {
    let space = h.space();
    let d = space.total_dim();
    for ch in channels {
        check_space(space, ch.op.space())?;
    }

    let mut trip: Vec<(usize, usize, C)> = Vec::new();
    let minus_i = C::new(0.0, -1.0);
    push_left_mult(&mut trip, minus_i, h.matrix(), d);
    push_right_mult(&mut trip, -minus_i, h.matrix(), d);

    for ch in channels {
        let o = ch.op.matrix();
        let nn = ch.op.adjoint().matrix() * o;
        push_sandwich(&mut trip, C::new(ch.rate, 0.0), o, d);
        let half = C::new(-0.5 * ch.rate, 0.0);
        push_left_mult(&mut trip, half, &nn, d);
        push_right_mult(&mut trip, half, &nn, d);
    }

    Ok(Superoperator { space, matrix: Csr::from_triplets(d * d, &trip) })
}

/// How the constrained steady-state system is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SolverMethod {
    /// Direct LU for D² up to 90 000 unknowns, iterative above.
    #[default]
    Auto,
    Direct,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Acceptable steady-state residual ‖L vec(ρ)‖/‖vec(ρ)‖.
    pub tolerance: f64,
    /// Iteration budget for the iterative method (ignored by the direct one).
    pub max_iterations: usize,
    pub method: SolverMethod,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tolerance: 1e-10, max_iterations: 20_000, method: SolverMethod::Auto }
    }
}

/// Solves L vec(ρ) = 0, Tr ρ = 1 by trace replacement: row 0 of L (the
/// vacuum-vacuum component) becomes the trace functional and the right-hand
/// side e₀. Returns the hermitized, normalized, validated state.
pub fn steady_state(
    lv: &Superoperator,
    options: &SolverOptions,
) -> Result<DensityMatrix, SolverError> {
    let d = lv.space.total_dim();
    let n = d * d;

    let mut constrained: Vec<(usize, usize, C)> = lv
        .matrix
        .entries()
        .filter(|&(r, _, _)| r != 0)
        .collect();
    for i in 0..d {
        constrained.push((0, i * d + i, C::ONE));
    }

    let method = match options.method {
        SolverMethod::Auto if n <= DIRECT_DIM_LIMIT => SolverMethod::Direct,
        SolverMethod::Auto => SolverMethod::Iterative,
        m => m,
    };

    let x = match method {
        SolverMethod::Direct | SolverMethod::Auto => solve_direct(n, &constrained)?,
        SolverMethod::Iterative => solve_iterative(n, d, &mut constrained, options)?,
    };

    let rho = DensityMatrix::from_solution(lv.space, matrix_from_vec(d, &x))?;
    let residual = lv.residual(&rho)?;
    if residual > options.tolerance {
        return Err(SolverError::NotConverged { residual });
    }
    Ok(rho)
}

fn solve_direct(n: usize, constrained: &[(usize, usize, C)]) -> Result<Vec<C>, SolverError> {
    let faer_trip: Vec<Triplet<usize, usize, C>> = constrained
        .iter()
        .map(|&(r, c, v)| Triplet::new(r, c, v))
        .collect();
    let mat = SparseColMat::<usize, C>::try_new_from_triplets(n, n, &faer_trip)
        .expect("triplet indices are in range by construction");
    let lu = mat.sp_lu().map_err(|_| SolverError::NonUnique)?;
    let mut rhs = faer::Mat::<C>::zeros(n, 1);
    rhs[(0, 0)] = C::ONE;
    let sol = lu.solve(&rhs);
    let x: Vec<C> = (0..n).map(|i| sol[(i, 0)]).collect();
    if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(SolverError::NonUnique);
    }
    Ok(x)
}

fn solve_iterative(
    n: usize,
    d: usize,
    constrained: &mut Vec<(usize, usize, C)>,
    options: &SolverOptions,
) -> Result<Vec<C>, SolverError> {
    // Pin the full diagonal into the pattern so ILU(0) always has pivots.
    for i in 0..n {
        constrained.push((i, i, C::ZERO));
    }
    let a = Csr::from_triplets(n, constrained);
    let ilu = Ilu0::new(&a);
    let mut b = vec![C::ZERO; n];
    b[0] = C::ONE;
    // The linear residual ‖b − A x‖ bounds the steady-state residual only up
    // to a factor ~√D from the normalization, so aim lower than asked.
    let linear_tol = (options.tolerance * 0.05 / (d as f64).sqrt()).max(1e-15);
    let out = gmres(&a, Some(&ilu), &b, linear_tol, options.max_iterations, 60);
    if !out.converged {
        return Err(SolverError::NotConverged { residual: out.relative_residual });
    }
    Ok(out.x)
}

/// Fixed-step RK4 integration of dx/dt = L x from `rho0` over `duration`.
/// The step size is rounded down so an integer number of steps lands exactly
/// on `duration`. Fails on norm blow-up (unstable step) or trace drift
/// beyond 1e-6.
pub fn evolve(
    rho0: &DensityMatrix,
    lv: &Superoperator,
    duration: f64,
    dt: f64,
) -> Result<DensityMatrix, SolverError> {
    check_space(lv.space, rho0.space())?;
    assert!(duration >= 0.0 && duration.is_finite(), "duration must be non-negative");
    assert!(dt > 0.0 && dt.is_finite(), "step size must be positive");
    if duration == 0.0 {
        return Ok(rho0.clone());
    }

    let d = lv.space.total_dim();
    let n = d * d;
    let steps = (duration / dt).ceil().max(1.0) as usize;
    let h = duration / steps as f64;

    let mut x = rho0.to_vec();
    let trace0 = trace_of(&x, d);
    let mut k1 = vec![C::ZERO; n];
    let mut k2 = vec![C::ZERO; n];
    let mut k3 = vec![C::ZERO; n];
    let mut k4 = vec![C::ZERO; n];
    let mut stage = vec![C::ZERO; n];

    for step in 0..steps {
        lv.apply_vec(&x, &mut k1);
        for i in 0..n {
            stage[i] = x[i] + C::new(0.5 * h, 0.0) * k1[i];
        }
        lv.apply_vec(&stage, &mut k2);
        for i in 0..n {
            stage[i] = x[i] + C::new(0.5 * h, 0.0) * k2[i];
        }
        lv.apply_vec(&stage, &mut k3);
        for i in 0..n {
            stage[i] = x[i] + C::new(h, 0.0) * k3[i];
        }
        lv.apply_vec(&stage, &mut k4);
        let w = C::new(h / 6.0, 0.0);
        for i in 0..n {
            x[i] += w * (k1[i] + C::new(2.0, 0.0) * (k2[i] + k3[i]) + k4[i]);
        }

        let norm = norm2(&x);
        if !norm.is_finite() || norm > 1e3 {
            return Err(SolverError::Instability { time: (step + 1) as f64 * h });
        }
    }

    let drift = (trace_of(&x, d) - trace0).norm();
    if drift > 1e-6 {
        return Err(SolverError::TraceDrift { drift });
    }

    let raw = matrix_from_vec(d, &x);
    let hermitized = (&raw + raw.adjoint()) * C::new(0.5, 0.0);
    let trace = hermitized.trace().re;
    DensityMatrix::try_new(lv.space, hermitized / C::new(trace, 0.0))
}

fn trace_of(x: &[C], d: usize) -> C {
    (0..d).map(|i| x[i * d + i]).sum()
}

/// Equal-time normalized correlation g⁽ⁿ⁾(0) = ⟨a†ⁿaⁿ⟩/⟨a†a⟩ⁿ of the signal
/// mode, for n = 2 or 3. Undefined (error) when ⟨a†a⟩ < 1e-12.
pub fn correlation_g_n(rho: &DensityMatrix, order: usize) -> Result<f64, SolverError> {
    if order != 2 && order != 3 {
        return Err(SolverError::UnsupportedOrder(order));
    }
    let space = rho.space();
    let a = annihilation(space, 0)?;
    let mean = crate::fock::expectation(rho, &(&a.adjoint() * &a))?.re;
    if mean < CORRELATION_FLOOR {
        return Err(SolverError::UndefinedCorrelation { mean });
    }
    let mut a_n = a.clone();
    for _ in 1..order {
        a_n = &a_n * &a;
    }
    let moment = crate::fock::expectation(rho, &(&a_n.adjoint() * &a_n))?;
    assert!(
        moment.im.abs() < 1e-9,
        "correlation numerator has imaginary part {:.3e}",
        moment.im
    );
    Ok(moment.re.max(0.0) / mean.powi(order as i32))
}

/// Scalar summary of a state: signal-mode photon number, normalized
/// second- and third-order correlations (absent when undefined), the
/// steady-state residual under `lv`, and the signal-mode photon distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Observables {
    pub mean_n_a: f64,
    pub g2: Option<f64>,
    pub g3: Option<f64>,
    pub residual: f64,
    pub photon_distribution_a: Vec<f64>,
}

/// Evaluates the standard observable set for `rho` against the generator it
/// is supposed to be a steady state of.
pub fn observables(rho: &DensityMatrix, lv: &Superoperator) -> Result<Observables, SolverError> {
    check_space(lv.space, rho.space())?;
    let space = rho.space();
    let number_a = crate::fock::number(space, 0)?;
    let mean_n_a = crate::fock::expectation(rho, &number_a)?.re;
    let g_opt = |order: usize| -> Result<Option<f64>, SolverError> {
        match correlation_g_n(rho, order) {
            Ok(v) => Ok(Some(v)),
            Err(SolverError::UndefinedCorrelation { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    Ok(Observables {
        mean_n_a,
        g2: g_opt(2)?,
        g3: g_opt(3)?,
        residual: lv.residual(rho)?,
        photon_distribution_a: rho.mode_occupation_distribution(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_collapse_channels, build_hamiltonian, SystemParams};
    use approx::assert_abs_diff_eq;

    fn space1(dim: usize) -> HilbertSpace {
        HilbertSpace::new([dim, 1, 1]).unwrap()
    }

    fn damped_cavity(space: HilbertSpace, params: &SystemParams) -> Superoperator {
        let h = build_hamiltonian(params, space);
        let channels = build_collapse_channels(params, space).unwrap();
        build_liouvillian(&h, &channels).unwrap()
    }

    #[test]
    fn constructors_satisfy_invariants() {
        let s = HilbertSpace::new([4, 3, 2]).unwrap();
        let states = [
            DensityMatrix::vacuum(s),
            DensityMatrix::basis_projector(s, [2, 1, 0]).unwrap(),
            DensityMatrix::maximally_mixed(s),
            DensityMatrix::coherent(s, [C::new(0.3, 0.1), C::ZERO, C::new(0.0, 0.2)]),
            DensityMatrix::thermal(s, [0.4, 0.1, 0.0]),
        ];
        for rho in &states {
            assert!((rho.trace() - C::ONE).norm() < 1e-12);
            assert!(rho.hermiticity_defect() < 1e-12);
            assert!(rho.min_eigenvalue() > -1e-12);
        }
    }

    #[test]
    fn projector_outside_truncation_rejected() {
        let s = HilbertSpace::new([2, 2, 2]).unwrap();
        assert!(matches!(
            DensityMatrix::basis_projector(s, [2, 0, 0]),
            Err(FockError::OccupationOutOfRange { .. })
        ));
    }

    #[test]
    fn try_new_rejects_invalid_matrices() {
        let s = space1(2);
        let mut m = DMatrix::<C>::zeros(2, 2);
        m[(0, 0)] = C::ONE;
        m[(0, 1)] = C::new(0.5, 0.0);
        assert!(matches!(
            DensityMatrix::try_new(s, m.clone()),
            Err(SolverError::InvalidState(_))
        ));

        let bad_trace = DMatrix::<C>::identity(2, 2);
        assert!(DensityMatrix::try_new(s, bad_trace).is_err());

        let mut indefinite = DMatrix::<C>::zeros(2, 2);
        indefinite[(0, 0)] = C::new(1.5, 0.0);
        indefinite[(1, 1)] = C::new(-0.5, 0.0);
        assert!(DensityMatrix::try_new(s, indefinite).is_err());

        let ok = DMatrix::<C>::identity(2, 2) * C::new(0.5, 0.0);
        assert!(DensityMatrix::try_new(s, ok).is_ok());
    }

    #[test]
    fn zero_generator_is_zero() {
        let s = HilbertSpace::new([2, 2, 1]).unwrap();
        let h = FockOperator::zeros(s);
        let lv = build_liouvillian(&h, &[]).unwrap();
        let probe = DensityMatrix::maximally_mixed(s);
        assert_eq!(lv.apply(&probe).unwrap().matrix().camax(), 0.0);
    }

    #[test]
    fn single_decay_channel_action() {
        // For pure decay, L|1><1| = |0><0| - |1><1|.
        let s = space1(2);
        let lv = damped_cavity(s, &SystemParams::default());
        let rho = DensityMatrix::basis_projector(s, [1, 0, 0]).unwrap();
        let out = lv.apply(&rho).unwrap();
        let m = out.matrix();
        assert_abs_diff_eq!(m[(0, 0)].re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m[(1, 1)].re, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m[(0, 1)].norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn trace_functional_annihilates_generator() {
        // Tr(Lρ) = 0 for all ρ, i.e. summing the rows at diagonal positions
        // must give the zero functional.
        let s = HilbertSpace::new([3, 2, 2]).unwrap();
        let params = SystemParams {
            delta_a: 0.3,
            g: 2.0,
            f_a: 0.1,
            e: C::new(0.01, 0.0),
            n_th_a: 0.2,
            ..Default::default()
        };
        let lv = damped_cavity(s, &params);
        let d = s.total_dim();
        let mut column_sums = vec![C::ZERO; d * d];
        for (r, c, v) in lv.matrix.entries() {
            let (i, j) = (r % d, r / d);
            if i == j {
                column_sums[c] += v;
            }
        }
        let worst = column_sums.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(worst < 1e-12, "trace functional leakage {worst:.3e}");
    }

    #[test]
    fn undriven_cavity_settles_to_vacuum() {
        let s = HilbertSpace::new([3, 2, 2]).unwrap();
        let params = SystemParams { delta_a: 0.5, g: 1.0, ..Default::default() };
        let lv = damped_cavity(s, &params);
        let rho = steady_state(&lv, &SolverOptions::default()).unwrap();
        let vac = DensityMatrix::vacuum(s);
        assert!((rho.matrix() - vac.matrix()).camax() < 1e-12);
    }

    #[test]
    fn driven_linear_cavity_is_coherent() {
        // H = Δ n + F(a+a†) with decay κ has the exact coherent steady state
        // α = -F/(Δ - iκ/2).
        let s = space1(10);
        let params = SystemParams { delta_a: 0.3, f_a: 0.1, ..Default::default() };
        let lv = damped_cavity(s, &params);
        let rho = steady_state(&lv, &SolverOptions::default()).unwrap();
        let alpha = -C::new(params.f_a, 0.0) / C::new(params.delta_a, -0.5);
        let oracle = DensityMatrix::coherent(s, [alpha, C::ZERO, C::ZERO]);
        assert!(
            (rho.matrix() - oracle.matrix()).camax() < 1e-8,
            "deviation {:.3e}",
            (rho.matrix() - oracle.matrix()).camax()
        );
    }

    #[test]
    fn thermal_bath_gives_thermal_state() {
        let s = space1(15);
        let params = SystemParams { n_th_a: 0.3, ..Default::default() };
        let lv = damped_cavity(s, &params);
        let rho = steady_state(&lv, &SolverOptions::default()).unwrap();
        let oracle = DensityMatrix::thermal(s, [0.3, 0.0, 0.0]);
        assert!((rho.matrix() - oracle.matrix()).camax() < 1e-8);
    }

    #[test]
    fn zero_generator_has_no_unique_steady_state() {
        let s = space1(2);
        let lv = build_liouvillian(&FockOperator::zeros(s), &[]).unwrap();
        assert!(matches!(
            steady_state(&lv, &SolverOptions::default()),
            Err(SolverError::NonUnique) | Err(SolverError::NotConverged { .. })
        ));
    }

    #[test]
    fn iterative_matches_direct() {
        let s = HilbertSpace::new([4, 3, 3]).unwrap();
        let params = SystemParams {
            delta_a: 0.0,
            delta_b: 2.0,
            delta_c: -2.0,
            g: 4.0,
            f_a: 0.05,
            e: C::new(0.01, 0.0),
            ..Default::default()
        };
        let lv = damped_cavity(s, &params);
        let direct = steady_state(
            &lv,
            &SolverOptions { method: SolverMethod::Direct, ..Default::default() },
        )
        .unwrap();
        let iterative = steady_state(
            &lv,
            &SolverOptions { method: SolverMethod::Iterative, ..Default::default() },
        )
        .unwrap();
        let dev = (direct.matrix() - iterative.matrix()).camax();
        assert!(dev < 1e-9, "direct vs iterative deviation {dev:.3e}");
    }

    #[test]
    fn evolve_reproduces_exponential_decay() {
        let s = space1(2);
        let lv = damped_cavity(s, &SystemParams::default());
        let rho0 = DensityMatrix::basis_projector(s, [1, 0, 0]).unwrap();
        let t = 1.3;
        let rho = evolve(&rho0, &lv, t, 1e-3).unwrap();
        let p1 = rho.matrix()[(1, 1)].re;
        assert_abs_diff_eq!(p1, (-t).exp(), epsilon = 1e-6);
    }

    #[test]
    fn evolve_zero_generator_is_identity() {
        let s = HilbertSpace::new([2, 2, 1]).unwrap();
        let lv = build_liouvillian(&FockOperator::zeros(s), &[]).unwrap();
        let rho0 = DensityMatrix::maximally_mixed(s);
        let rho = evolve(&rho0, &lv, 5.0, 0.1).unwrap();
        assert!((rho.matrix() - rho0.matrix()).camax() < 1e-14);
    }

    #[test]
    fn evolve_detects_instability() {
        let s = space1(6);
        let params = SystemParams { delta_a: 3.0, f_a: 0.5, ..Default::default() };
        let lv = damped_cavity(s, &params);
        let rho0 = DensityMatrix::vacuum(s);
        // A step far beyond the stability bound must be reported, not return
        // garbage.
        let result = evolve(&rho0, &lv, 50.0, 2.0);
        assert!(matches!(result, Err(SolverError::Instability { .. })));
    }

    #[test]
    fn suggested_dt_is_stable() {
        let s = HilbertSpace::new([3, 2, 2]).unwrap();
        let params = SystemParams {
            delta_a: 1.0,
            g: 3.0,
            f_a: 0.1,
            e: C::new(0.01, 0.0),
            ..Default::default()
        };
        let lv = damped_cavity(s, &params);
        let dt = lv.suggest_dt();
        assert!(dt.is_finite() && dt > 0.0);
        let rho = evolve(&DensityMatrix::vacuum(s), &lv, 200.0 * dt, dt).unwrap();
        assert!((rho.trace() - C::ONE).norm() < 1e-9);
    }

    #[test]
    fn evolve_converges_to_steady_state() {
        let s = HilbertSpace::new([3, 2, 2]).unwrap();
        let params = SystemParams {
            delta_a: 0.2,
            g: 2.0,
            f_a: 0.1,
            e: C::new(0.005, 0.0),
            ..Default::default()
        };
        let lv = damped_cavity(s, &params);
        let ss = steady_state(&lv, &SolverOptions::default()).unwrap();
        let evolved = evolve(&DensityMatrix::vacuum(s), &lv, 40.0, 0.002).unwrap();
        assert!((ss.matrix() - evolved.matrix()).camax() < 1e-6);
    }

    #[test]
    fn correlation_reference_states() {
        let s = space1(16);
        let coherent = DensityMatrix::coherent(s, [C::new(0.5, 0.0), C::ZERO, C::ZERO]);
        assert_abs_diff_eq!(correlation_g_n(&coherent, 2).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(correlation_g_n(&coherent, 3).unwrap(), 1.0, epsilon = 1e-8);

        let s30 = space1(30);
        let thermal = DensityMatrix::thermal(s30, [0.4, 0.0, 0.0]);
        assert_abs_diff_eq!(correlation_g_n(&thermal, 2).unwrap(), 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(correlation_g_n(&thermal, 3).unwrap(), 6.0, epsilon = 1e-8);

        let one = DensityMatrix::basis_projector(space1(3), [1, 0, 0]).unwrap();
        assert_abs_diff_eq!(correlation_g_n(&one, 2).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn correlation_undefined_on_vacuum() {
        let vac = DensityMatrix::vacuum(space1(3));
        assert!(matches!(
            correlation_g_n(&vac, 2),
            Err(SolverError::UndefinedCorrelation { .. })
        ));
        assert!(matches!(correlation_g_n(&vac, 4), Err(SolverError::UnsupportedOrder(4))));
    }

    #[test]
    fn observables_summary() {
        let s = space1(12);
        let params = SystemParams { f_a: 0.2, ..Default::default() };
        let lv = damped_cavity(s, &params);
        let rho = steady_state(&lv, &SolverOptions::default()).unwrap();
        let obs = observables(&rho, &lv).unwrap();
        // Driven damped cavity: coherent state with |α|² = F²/(Δ²+κ²/4).
        assert_abs_diff_eq!(obs.mean_n_a, 0.16, epsilon = 1e-9);
        assert_abs_diff_eq!(obs.g2.unwrap(), 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(obs.g3.unwrap(), 1.0, epsilon = 1e-7);
        assert!(obs.residual < 1e-10);
        let total: f64 = obs.photon_distribution_a.iter().sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn observables_on_vacuum_have_no_correlations() {
        let s = space1(3);
        let lv = damped_cavity(s, &SystemParams::default());
        let rho = steady_state(&lv, &SolverOptions::default()).unwrap();
        let obs = observables(&rho, &lv).unwrap();
        assert!(obs.mean_n_a.abs() < 1e-12);
        assert_eq!(obs.g2, None);
        assert_eq!(obs.g3, None);
    }

    #[test]
    fn poissonian_photon_distribution() {
        let s = space1(16);
        let alpha = 0.5;
        let rho = DensityMatrix::coherent(s, [C::new(alpha, 0.0), C::ZERO, C::ZERO]);
        let dist = rho.mode_occupation_distribution(0);
        let nbar = alpha * alpha;
        let mut expected = Vec::with_capacity(16);
        let mut term = (-nbar).exp();
        for k in 0..16 {
            if k > 0 {
                term *= nbar / k as f64;
            }
            expected.push(term);
        }
        let tv: f64 = dist
            .iter()
            .zip(&expected)
            .map(|(p, q)| (p - q).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv < 1e-4, "total variation {tv:.3e}");
    }
}
