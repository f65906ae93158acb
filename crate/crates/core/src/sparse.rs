//! Minimal complex sparse kernels for the iterative steady-state path: a CSR
//! matrix, an ILU(0) factorization, and restarted GMRES with right
//! preconditioning. The direct solver is preferred for small spaces; these
//! kernels exist so that large Liouvillians (dimension above ~10⁵) can be
//! solved without the memory blow-up of sparse LU fill-in.

use num_complex::Complex64;

type C = Complex64;

/// Compressed sparse row matrix over Complex64. Column indices are sorted
/// within each row and duplicates are summed at construction.
#[derive(Debug, Clone)]
pub(crate) struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<C>,
}

impl Csr {
    /// Builds an n×n matrix from (row, col, value) triplets. Duplicate
    /// coordinates are summed; entries that sum to exactly zero are kept so
    /// that callers can pin pattern positions (e.g. diagonals for ILU).
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, C)]) -> Self {
        let mut entries: Vec<(usize, usize, C)> = triplets.to_vec();
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));

        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            debug_assert!(r < n && c < n, "triplet ({r},{c}) out of bounds for n={n}");
            if last == Some((r, c)) {
                *values.last_mut().expect("entry exists") += v;
                continue;
            }
            row_ptr[r + 1] += 1;
            col_idx.push(c);
            values.push(v);
            last = Some((r, c));
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        Csr { n, row_ptr, col_idx, values }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// y = A x.
    pub fn matvec(&self, x: &[C], y: &mut [C]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = C::ZERO;
            for idx in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[idx] * x[self.col_idx[idx]];
            }
            *out = acc;
        }
    }

    /// Maximum over rows of the row-wise absolute sum (an upper bound on the
    /// spectral radius by the Gershgorin circle theorem).
    pub fn max_row_abs_sum(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.n {
            let sum: f64 = (self.row_ptr[r]..self.row_ptr[r + 1])
                .map(|idx| self.values[idx].norm())
                .sum();
            worst = worst.max(sum);
        }
        worst
    }

    /// Iterates all stored entries as (row, col, value).
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C)> + '_ {
        (0..self.n).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1])
                .map(move |idx| (r, self.col_idx[idx], self.values[idx]))
        })
    }
}

/// ILU(0): incomplete LU with the sparsity pattern of A. L has unit diagonal
/// and is stored strictly below the diagonal of `values`; U occupies the rest.
pub(crate) struct Ilu0 {
    pattern: Csr,
    diag_ptr: Vec<Option<usize>>,
}

impl Ilu0 {
    pub fn new(a: &Csr) -> Self {
        let n = a.n;
        let mut f = a.clone();
        let mut diag_ptr: Vec<Option<usize>> = vec![None; n];
        for (r, slot) in diag_ptr.iter_mut().enumerate() {
            for idx in f.row_ptr[r]..f.row_ptr[r + 1] {
                if f.col_idx[idx] == r {
                    *slot = Some(idx);
                }
            }
        }

        // IKJ elimination restricted to the existing pattern (Saad, Alg. 10.4).
        let mut pos: Vec<usize> = vec![usize::MAX; n];
        for i in 0..n {
            let (lo, hi) = (f.row_ptr[i], f.row_ptr[i + 1]);
            for idx in lo..hi {
                pos[f.col_idx[idx]] = idx;
            }
            for idx in lo..hi {
                let k = f.col_idx[idx];
                if k >= i {
                    break;
                }
                let pivot = match diag_ptr[k] {
                    Some(p) if f.values[p].norm() > 1e-300 => f.values[p],
                    // Degenerate pivot: skip elimination against this row; the
                    // preconditioner stays valid (just less effective).
                    _ => continue,
                };
                let lik = f.values[idx] / pivot;
                f.values[idx] = lik;
                let kstart = diag_ptr[k].unwrap() + 1;
                for kidx in kstart..f.row_ptr[k + 1] {
                    let j = f.col_idx[kidx];
                    let p = pos[j];
                    if p != usize::MAX {
                        let update = lik * f.values[kidx];
                        f.values[p] -= update;
                    }
                }
            }
            for idx in lo..hi {
                pos[f.col_idx[idx]] = usize::MAX;
            }
        }
        Ilu0 { pattern: f, diag_ptr }
    }

    /// x = (LU)⁻¹ b via forward then backward substitution.
    pub fn solve(&self, b: &[C], x: &mut [C]) {
        let f = &self.pattern;
        let n = f.n;
        // Forward: L y = b with unit diagonal.
        for i in 0..n {
            let mut acc = b[i];
            for idx in f.row_ptr[i]..f.row_ptr[i + 1] {
                let j = f.col_idx[idx];
                if j >= i {
                    break;
                }
                acc -= f.values[idx] * x[j];
            }
            x[i] = acc;
        }
        // Backward: U x = y.
        for i in (0..n).rev() {
            let Some(dp) = self.diag_ptr[i] else {
                // No stored diagonal: leave x[i] as-is (identity action).
                continue;
            };
            let mut acc = x[i];
            for idx in (dp + 1)..f.row_ptr[i + 1] {
                acc -= f.values[idx] * x[f.col_idx[idx]];
            }
            let d = f.values[dp];
            x[i] = if d.norm() > 1e-300 { acc / d } else { acc };
        }
    }
}

fn dot(x: &[C], y: &[C]) -> C {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub(crate) fn norm2(x: &[C]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Complex Givens rotation zeroing g against f: returns (c, s, r) with
/// c real, c² + |s|² = 1, and [c s; -s̄ c]·[f g]ᵀ = [r 0]ᵀ.
fn givens(f: C, g: C) -> (f64, C, C) {
    if f.norm() == 0.0 {
        if g.norm() == 0.0 {
            return (1.0, C::ZERO, C::ZERO);
        }
        return (0.0, g.conj() / g.norm(), C::new(g.norm(), 0.0));
    }
    let t = (f.norm_sqr() + g.norm_sqr()).sqrt();
    let c = f.norm() / t;
    let phase = f / f.norm();
    let s = phase * g.conj() / t;
    (c, s, phase * t)
}

pub(crate) struct GmresOutcome {
    pub x: Vec<C>,
    /// ‖b − A x‖₂ / ‖b‖₂ at exit.
    pub relative_residual: f64,
    /// Diagnostic only; read by the unit tests.
    #[allow(dead_code)]
    pub iterations: usize,
    pub converged: bool,
}

/// Restarted GMRES(m) with right preconditioning: solves A x = b by iterating
/// on A M⁻¹ u = b, x = M⁻¹ u. The true (unpreconditioned) residual is checked
/// at each restart boundary and drives the convergence decision.
pub(crate) fn gmres(
    a: &Csr,
    precond: Option<&Ilu0>,
    b: &[C],
    tol: f64,
    max_iterations: usize,
    restart: usize,
) -> GmresOutcome {
    let n = a.n;
    let b_norm = norm2(b);
    if b_norm == 0.0 {
        return GmresOutcome { x: vec![C::ZERO; n], relative_residual: 0.0, iterations: 0, converged: true };
    }

    let apply_m = |v: &[C], out: &mut Vec<C>| match precond {
        Some(ilu) => ilu.solve(v, out),
        None => out.copy_from_slice(v),
    };

    let m = restart.max(1);
    let mut x = vec![C::ZERO; n];
    let mut r = b.to_vec();
    let mut iterations = 0usize;
    let mut scratch = vec![C::ZERO; n];

    loop {
        let beta = norm2(&r);
        if beta / b_norm <= tol {
            return GmresOutcome { x, relative_residual: beta / b_norm, iterations, converged: true };
        }
        if iterations >= max_iterations {
            return GmresOutcome { x, relative_residual: beta / b_norm, iterations, converged: false };
        }

        let mut basis: Vec<Vec<C>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|v| v / beta).collect());
        // Hessenberg columns after Givens, g = rotated beta*e1.
        let mut h_cols: Vec<Vec<C>> = Vec::with_capacity(m);
        let mut rotations: Vec<(f64, C)> = Vec::with_capacity(m);
        let mut g = vec![C::ZERO; m + 1];
        g[0] = C::new(beta, 0.0);
        let mut k = 0;

        while k < m && iterations < max_iterations {
            apply_m(&basis[k], &mut scratch);
            let mut w = vec![C::ZERO; n];
            a.matvec(&scratch, &mut w);

            let mut col = vec![C::ZERO; k + 2];
            for (i, vi) in basis.iter().enumerate() {
                let hik = dot(vi, &w);
                col[i] = hik;
                for (we, ve) in w.iter_mut().zip(vi) {
                    *we -= hik * ve;
                }
            }
            let wnorm = norm2(&w);
            col[k + 1] = C::new(wnorm, 0.0);

            for (i, &(c, s)) in rotations.iter().enumerate() {
                let (f0, g0) = (col[i], col[i + 1]);
                col[i] = c * f0 + s * g0;
                col[i + 1] = -s.conj() * f0 + c * g0;
            }
            let (c, s, rr) = givens(col[k], col[k + 1]);
            col[k] = rr;
            col[k + 1] = C::ZERO;
            rotations.push((c, s));
            let (f0, g0) = (g[k], g[k + 1]);
            g[k] = c * f0 + s * g0;
            g[k + 1] = -s.conj() * f0 + c * g0;

            h_cols.push(col);
            iterations += 1;
            k += 1;

            let breakdown = wnorm < 1e-14 * b_norm;
            if !breakdown {
                basis.push(w.iter().map(|v| v / wnorm).collect());
            }
            if g[k].norm() / b_norm <= tol || breakdown {
                break;
            }
        }

        // Back-substitute H y = g on the k×k leading block.
        let mut y = vec![C::ZERO; k];
        for i in (0..k).rev() {
            let mut acc = g[i];
            for j in (i + 1)..k {
                acc -= h_cols[j][i] * y[j];
            }
            y[i] = acc / h_cols[i][i];
        }
        let mut u = vec![C::ZERO; n];
        for (j, yj) in y.iter().enumerate() {
            for (ue, ve) in u.iter_mut().zip(&basis[j]) {
                *ue += yj * ve;
            }
        }
        apply_m(&u, &mut scratch);
        for (xe, de) in x.iter_mut().zip(&scratch) {
            *xe += de;
        }

        // True residual for the restart/convergence test.
        a.matvec(&x, &mut scratch);
        for i in 0..n {
            r[i] = b[i] - scratch[i];
        }
    }
}
