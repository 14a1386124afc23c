//! Small dense complex matrices and kets.
//!
//! Everything is row-major `Vec<C64>` with explicit dimensions; the spaces
//! in play never exceed a few dozen dimensions, so no effort is spent on
//! factorized storage or blocking.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex;
// Builds that link std resolve these methods inherently; no_std needs the trait.
#[allow(unused_imports)]
use num_traits::Float;

use crate::eigen::hermitian_eigen;
use crate::shape::SubsystemShape;
use crate::{Error, Result, ZERO_TRACE_TOL};

/// Complex scalar used throughout.
pub type C64 = Complex<f64>;

const ZERO: C64 = Complex::new(0.0, 0.0);
const ONE: C64 = Complex::new(1.0, 0.0);

/// Modulus threshold below which a ket component does not anchor the phase.
const PHASE_ANCHOR_TOL: f64 = 1e-10;

/// A complex column vector (pure-state amplitudes).
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amps: Vec<C64>,
}

impl Ket {
    pub fn new(amps: Vec<C64>) -> Self {
        Self { amps }
    }

    /// Builds a ket from real amplitudes.
    pub fn from_real(amps: &[f64]) -> Self {
        Self { amps: amps.iter().map(|&r| Complex::new(r, 0.0)).collect() }
    }

    /// Computational basis state `|index>` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Ket) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|self><self|` scaled by `weight`.
    pub fn outer_scaled(&self, weight: f64) -> ComplexMatrix {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.amps[i] * self.amps[j].conj() * weight);
            }
        }
        m
    }

    /// `|self><self|`.
    pub fn projector(&self) -> ComplexMatrix {
        self.outer_scaled(1.0)
    }

    /// `|self> (x) |other>`, with `self` indexing slowest.
    pub fn tensor(&self, other: &Ket) -> Ket {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ket { amps }
    }

    /// Returns the unit-norm ket with the first component of modulus above
    /// `1e-10` rotated to the positive real axis. Deterministic output for
    /// golden files.
    pub fn normalized_fixed_phase(&self) -> Ket {
        let n = self.norm();
        let mut amps: Vec<C64> = self.amps.iter().map(|a| a / n).collect();
        if let Some(anchor) = amps.iter().find(|a| a.norm() > PHASE_ANCHOR_TOL) {
            let phase = anchor / anchor.norm();
            let correction = phase.conj();
            for a in &mut amps {
                *a *= correction;
            }
        }
        Ket { amps }
    }

    pub fn scale(&self, factor: C64) -> Ket {
        Ket { amps: self.amps.iter().map(|a| a * factor).collect() }
    }

    pub fn add(&self, other: &Ket) -> Ket {
        debug_assert_eq!(self.dim(), other.dim());
        Ket { amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect() }
    }

    pub fn max_abs_diff(&self, other: &Ket) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: entries.len() });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ONE);
        }
        m
    }

    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            debug_assert_eq!(row.len(), c);
            entries.extend_from_slice(row);
        }
        Self { rows: r, cols: c, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn trace(&self) -> C64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).conj());
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.cols, other.rows);
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = m.get(i, j) + aik * other.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    /// `M |v>`.
    pub fn apply(&self, v: &Ket) -> Ket {
        debug_assert_eq!(self.cols, v.dim());
        let mut amps = vec![ZERO; self.rows];
        for (i, amp) in amps.iter_mut().enumerate() {
            let mut acc = ZERO;
            for j in 0..self.cols {
                acc += self.get(i, j) * v.amps()[j];
            }
            *amp = acc;
        }
        Ket::new(amps)
    }

    /// Largest entry-wise modulus of the difference. Element-wise equality
    /// within an explicit absolute tolerance is `max_abs_diff <= tol`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.max_abs_diff(other) <= tol
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// `max |A - A†|` over entries; zero for Hermitian matrices.
    pub fn hermiticity_residual(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..=i {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_residual() <= tol
    }
}

/// Kronecker product with `a`'s index slowest; dimensions multiply.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    let mut m = ComplexMatrix::zeros(rows, cols);
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let f = a.get(ia, ja);
            if f == ZERO {
                continue;
            }
            for ib in 0..b.rows() {
                for jb in 0..b.cols() {
                    m.set(ia * b.rows() + ib, ja * b.cols() + jb, f * b.get(ib, jb));
                }
            }
        }
    }
    m
}

/// Traces out `traced_sites` from an operator on the full space described by
/// `shape.local_dims`, leaving an operator on the remaining sites (in site
/// order). The total trace is preserved.
pub fn partial_trace(
    rho: &ComplexMatrix,
    shape: &SubsystemShape,
    traced_sites: &[usize],
) -> Result<ComplexMatrix> {
    if !rho.is_square() || rho.rows() != shape.total_dim() {
        return Err(Error::DimensionMismatch { expected: shape.total_dim(), got: rho.rows() });
    }
    for &s in traced_sites {
        if s >= shape.site_count() {
            return Err(Error::InvalidShape(alloc::format!(
                "traced site {s} out of range for {} sites",
                shape.site_count()
            )));
        }
    }
    let kept: Vec<usize> =
        (0..shape.site_count()).filter(|s| !traced_sites.contains(s)).collect();
    let traced: Vec<usize> = {
        let mut t: Vec<usize> = traced_sites.to_vec();
        t.sort_unstable();
        t.dedup();
        t
    };
    let kept_dim: usize = kept.iter().map(|&s| shape.local_dims()[s]).product();
    let traced_dim: usize = traced.iter().map(|&s| shape.local_dims()[s]).product();

    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    for ik in 0..kept_dim {
        let row_base = shape.scatter_index(&kept, ik);
        for jk in 0..kept_dim {
            let col_base = shape.scatter_index(&kept, jk);
            let mut acc = ZERO;
            for it in 0..traced_dim {
                let t_part = shape.scatter_index(&traced, it);
                acc += rho.get(row_base + t_part, col_base + t_part);
            }
            out.set(ik, jk, acc);
        }
    }
    Ok(out)
}

/// Outcome of a successful rank-one split: `rho = weight * |ket><ket|`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOne {
    pub weight: f64,
    pub ket: Ket,
}

/// Splits a Hermitian PSD operator into `(tr rho, principal eigenvector)` iff
/// it is rank one within `tol`, i.e. `lambda_max >= (1 - tol) * tr`. Returns
/// `None` for operators that are mixed or have negligible trace; the ket
/// carries the fixed phase convention.
pub fn rank_one_decompose(rho: &ComplexMatrix, tol: f64) -> Result<Option<RankOne>> {
    let herm = rho.hermiticity_residual();
    if herm > tol.max(1e-12) {
        return Err(Error::NotHermitian { residual: herm });
    }
    let trace = rho.trace().re;
    if trace <= ZERO_TRACE_TOL {
        return Ok(None);
    }
    let (eigvals, eigvecs) = hermitian_eigen(rho);
    let min = eigvals[0];
    if min < -tol * trace.max(1.0) {
        return Err(Error::NegativeEigenvalue { value: min });
    }
    let max = eigvals[eigvals.len() - 1];
    if max < (1.0 - tol) * trace {
        return Ok(None);
    }
    let n = rho.rows();
    let col = eigvals.len() - 1;
    let raw = Ket::new((0..n).map(|i| eigvecs.get(i, col)).collect());
    Ok(Some(RankOne { weight: trace, ket: raw.normalized_fixed_phase() }))
}

/// `|<a|b>|^2` for unit-norm kets; global-phase invariant.
pub fn projector_fidelity(ket_a: &Ket, ket_b: &Ket) -> Result<f64> {
    let overlap = ket_a.inner(ket_b)?;
    Ok(overlap.norm_sqr())
}
