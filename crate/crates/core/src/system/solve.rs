//! Jacobi-preconditioned conjugate gradients and a dense direct oracle.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::system::{LinearSystem, SolveStats, SystemError};

fn norm(v: &[f64]) -> f64 {
    math::sqrt(v.iter().map(|x| x * x).sum())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Conjugate gradients with Jacobi preconditioning on the (SPD) system.
/// Stops once the true residual satisfies |b - Ax| <= tol * |b|; the
/// recurrence residual alone is never trusted for convergence. A reached
/// iteration cap is reported through `SolveStats::converged`, not an error.
pub fn solve_cg(
    sys: &LinearSystem,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, SolveStats), SystemError> {
    let a = &sys.matrix;
    let b = &sys.rhs;
    let n = a.n();
    assert_eq!(b.len(), n, "rhs length must match matrix dimension");

    let b_norm = norm(b);
    if b_norm == 0.0 {
        let stats = SolveStats { iterations: 0, final_residual: 0.0, converged: true };
        return Ok((vec![0.0; n], stats));
    }

    let mut inv_diag = a.diag();
    for d in inv_diag.iter_mut() {
        if !(*d > 0.0 && d.is_finite()) {
            return Err(SystemError::Breakdown { iteration: 0, what: "non-positive diagonal" });
        }
        *d = 1.0 / *d;
    }

    let mut x = vec![0.0; n];
    let mut r = b.clone();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut rho = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let threshold = tol * b_norm;

    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        a.mul_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0 && pap.is_finite()) {
            return Err(SystemError::Breakdown { iteration: iterations, what: "p.Ap <= 0" });
        }
        let alpha = rho / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let r_norm = norm(&r);
        if !r_norm.is_finite() {
            return Err(SystemError::Breakdown { iteration: iterations, what: "residual diverged" });
        }

        if r_norm <= threshold {
            // Confirm against the true residual; the recurrence can drift.
            a.mul_into(&x, &mut ap);
            let true_r: Vec<f64> = b.iter().zip(&ap).map(|(bi, ax)| bi - ax).collect();
            let true_norm = norm(&true_r);
            if true_norm <= threshold {
                let stats =
                    SolveStats { iterations, final_residual: true_norm, converged: true };
                return Ok((x, stats));
            }
            r = true_r;
        }

        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rho_next = dot(&r, &z);
        let beta = rho_next / rho;
        rho = rho_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }

    a.mul_into(&x, &mut ap);
    let final_residual = norm(&b.iter().zip(&ap).map(|(bi, ax)| bi - ax).collect::<Vec<_>>());
    let stats = SolveStats { iterations, final_residual, converged: final_residual <= threshold };
    Ok((x, stats))
}

/// Direct solve by dense LU with partial pivoting; the oracle for
/// `solve_cg`. Refuses systems larger than 500 unknowns.
pub fn solve_dense(sys: &LinearSystem) -> Result<Vec<f64>, SystemError> {
    let n = sys.matrix.n();
    if n > 500 {
        return Err(SystemError::TooLargeForDense { n });
    }
    assert_eq!(sys.rhs.len(), n, "rhs length must match matrix dimension");
    let mut a = sys.matrix.to_dense();
    let mut b = sys.rhs.clone();

    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = math::abs(a[col * n + col]);
        for row in (col + 1)..n {
            let mag = math::abs(a[row * n + col]);
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag == 0.0 {
            return Err(SystemError::Singular);
        }
        if pivot_row != col {
            for j in 0..n {
                a.swap(col * n + j, pivot_row * n + j);
            }
            b.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        for row in (col + 1)..n {
            let factor = a[row * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            a[row * n + col] = 0.0;
            for j in (col + 1)..n {
                a[row * n + j] -= factor * a[col * n + j];
            }
            b[row] -= factor * b[col];
        }
    }

    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for j in (row + 1)..n {
            acc -= a[row * n + j] * x[j];
        }
        x[row] = acc / a[row * n + row];
    }
    Ok(x)
}
