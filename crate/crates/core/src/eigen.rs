//! Hermitian eigen-decomposition by cyclic complex Jacobi rotations.
//!
//! The operators in this crate never exceed a few dozen dimensions, where
//! Jacobi is simple, accurate, and conditioning is benign.

use alloc::vec::Vec;

use num_complex::Complex;
// Builds that link std resolve these methods inherently; no_std needs the trait.
#[allow(unused_imports)]
use num_traits::Float;

use crate::matrix::ComplexMatrix;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues (ascending) and matching eigenvector columns of a Hermitian
/// matrix. The input is symmetrized first, so tiny Hermiticity drift from
/// upstream arithmetic is harmless; callers gate genuine non-Hermitian input.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    debug_assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return (Vec::new(), ComplexMatrix::zeros(0, 0));
    }

    // Work on the Hermitian part to keep the iteration exactly self-adjoint.
    let mut a = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = (m.get(i, j) + m.get(j, i).conj()) * Complex::new(0.5, 0.0);
            a.set(i, j, v);
        }
    }
    let mut v = ComplexMatrix::identity(n);

    let scale = a.max_abs().max(1.0);
    let target = scale * 1e-15;

    for _ in 0..MAX_SWEEPS {
        let mut largest = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                largest = largest.max(a.get(p, q).norm());
            }
        }
        if largest <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q, target);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, new_col, v.get(row, old_col));
        }
    }
    (values, vectors)
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// Annihilates `a[p][q]` with a unitary plane rotation; accumulates it into `v`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, target: f64) {
    let apq = a.get(p, q);
    let abs = apq.norm();
    if abs <= target * 1e-2 {
        return;
    }
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let phase = apq / abs;

    let theta = (app - aqq) / (2.0 * abs);
    let t = if theta >= 0.0 {
        -1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // Plane rotation: r_pp = c, r_pq = s*phase, r_qp = -s*conj(phase), r_qq = c.
    let rpq = phase * s;
    let rqp = -phase.conj() * s;
    let n = a.rows();

    // A <- A R (columns p, q).
    for i in 0..n {
        let aip = a.get(i, p);
        let aiq = a.get(i, q);
        a.set(i, p, aip * c + aiq * rqp);
        a.set(i, q, aip * rpq + aiq * c);
    }
    // A <- R^dagger A (rows p, q).
    for j in 0..n {
        let apj = a.get(p, j);
        let aqj = a.get(q, j);
        a.set(p, j, apj * c + aqj * rqp.conj());
        a.set(q, j, apj * rpq.conj() + aqj * c);
    }
    // Exact zeros on the annihilated pair keep the sweep clean.
    a.set(p, q, Complex::new(0.0, 0.0));
    a.set(q, p, Complex::new(0.0, 0.0));
    let app_new = a.get(p, p);
    let aqq_new = a.get(q, q);
    a.set(p, p, Complex::new(app_new.re, 0.0));
    a.set(q, q, Complex::new(aqq_new.re, 0.0));

    // V <- V R.
    for i in 0..n {
        let vip = v.get(i, p);
        let viq = v.get(i, q);
        v.set(i, p, vip * c + viq * rqp);
        v.set(i, q, vip * rpq + viq * c);
    }
}
