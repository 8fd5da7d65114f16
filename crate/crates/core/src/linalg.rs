//! Dense complex matrices and the handful of factorizations the rest of the
//! crate needs: numerical rank of operator spans and Hermitian spectra.
//!
//! Storage is row-major. SVD, LU and eigendecomposition are delegated to
//! `faer`; everything else is written out directly.

use crate::config::check_dim;
use crate::{Error, Result};
use faer::prelude::*;
use faer::linalg::solvers::DenseSolveCore;
use faer::Side;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// A dense square complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixFile", into = "MatrixFile")]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

/// On-disk layout: `{"dim": n, "entries": [[re, im], ...]}`, row-major.
#[derive(Serialize, Deserialize)]
struct MatrixFile {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixFile> for ComplexMatrix {
    type Error = Error;

    fn try_from(file: MatrixFile) -> Result<Self> {
        let entries = file.entries.into_iter().map(|[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::new(file.dim, entries)
    }
}

impl From<ComplexMatrix> for MatrixFile {
    fn from(m: ComplexMatrix) -> Self {
        MatrixFile {
            dim: m.dim,
            entries: m.entries.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl ComplexMatrix {
    /// Validating constructor used for all external data.
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive".into()));
        }
        let expected = dim.checked_mul(dim).ok_or(Error::DimensionCeiling {
            dim,
            max: crate::config::max_dim(),
        })?;
        if entries.len() != expected {
            return Err(Error::InvalidMatrix(format!(
                "dimension {dim} needs {expected} entries, got {}",
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidMatrix(format!(
                "non-finite entry at ({}, {})",
                pos / dim,
                pos % dim
            )));
        }
        Ok(Self { dim, entries })
    }

    pub(crate) fn from_parts(dim: usize, entries: Vec<C64>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        Self { dim, entries }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self::from_parts(dim, entries)
    }

    pub fn from_real(dim: usize, values: &[f64]) -> Result<Self> {
        Self::new(dim, values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_parts(dim, vec![ZERO; dim * dim])
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diag(values: &[C64]) -> Self {
        let dim = values.len();
        Self::from_fn(dim, |i, j| if i == j { values[i] } else { ZERO })
    }

    /// Matrix unit `E_ij` (0-based).
    pub fn unit(dim: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.entries[row * dim + col] = ONE;
        m
    }

    pub fn pauli_x() -> Self {
        Self::from_parts(2, vec![ZERO, ONE, ONE, ZERO])
    }

    pub fn pauli_y() -> Self {
        Self::from_parts(2, vec![ZERO, -I, I, ZERO])
    }

    pub fn pauli_z() -> Self {
        Self::from_parts(2, vec![ONE, ZERO, ZERO, -ONE])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.entries[row * self.dim + col] = value;
    }

    /// Row-major entries; also the flattened vector in C^(dim^2).
    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.entries[k * n..(k + 1) * n];
                for (o, b) in row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Self::from_parts(n, out)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::from_parts(self.dim, self.entries.iter().map(|z| z * c).collect())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `self * rhs - rhs * self`
    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) - &rhs.matmul(self)
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius_norm(self)
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.to_faer().singular_values().expect("SVD failed to converge")
    }

    /// Invertible when the smallest singular value exceeds `tol` times the largest.
    pub fn check_invertible(&self, tol: f64) -> Result<()> {
        let sv = self.singular_values();
        let max = sv.first().copied().unwrap_or(0.0);
        let min = sv.last().copied().unwrap_or(0.0);
        let ratio = if max > 0.0 { min / max } else { 0.0 };
        if ratio > tol {
            Ok(())
        } else {
            Err(Error::SingularRMatrix { ratio, tolerance: tol })
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = Self::from_faer(self.to_faer().partial_piv_lu().inverse().as_ref());
        if !inv.is_finite() {
            return Err(Error::SingularRMatrix { ratio: 0.0, tolerance: 0.0 });
        }
        Ok(inv)
    }

    pub fn to_faer(&self) -> Mat<C64> {
        Mat::from_fn(self.dim, self.dim, |i, j| self.entries[i * self.dim + j])
    }

    pub fn from_faer(m: MatRef<'_, C64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "square matrices only");
        Self::from_fn(m.nrows(), |i, j| m[(i, j)])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect();
        ComplexMatrix::from_parts(self.dim, entries)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect();
        ComplexMatrix::from_parts(self.dim, entries)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Kronecker product, `out[(i*nb + k), (j*nb + l)] = a[i,j] * b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = a.dim.checked_mul(b.dim).ok_or(Error::DimensionCeiling {
        dim: usize::MAX,
        max: crate::config::max_dim(),
    })?;
    check_dim(dim)?;
    let nb = b.dim;
    let mut out = vec![ZERO; dim * dim];
    for i in 0..a.dim {
        for j in 0..a.dim {
            let aij = a.get(i, j);
            if aij == ZERO {
                continue;
            }
            for k in 0..nb {
                let row = (i * nb + k) * dim + j * nb;
                for l in 0..nb {
                    out[row + l] = aij * b.get(k, l);
                }
            }
        }
    }
    Ok(ComplexMatrix::from_parts(dim, out))
}

pub fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    a.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius inner product `<a, b> = tr(a^H b)`.
pub fn frobenius_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    a.entries.iter().zip(&b.entries).map(|(x, y)| x.conj() * y).sum()
}

fn count_above(sv: &[f64], tol_rank: f64) -> usize {
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol_rank * max).count()
}

fn stack_rows<'a>(rows: impl IntoIterator<Item = &'a [C64]>, width: usize) -> Mat<C64> {
    let rows: Vec<&[C64]> = rows.into_iter().collect();
    Mat::from_fn(rows.len(), width, |r, c| rows[r][c])
}

/// Singular values (descending) and the matching orthonormal basis of the
/// row space, one vector per singular value.
fn row_space(stacked: &Mat<C64>) -> Result<(Vec<f64>, Vec<Vec<C64>>)> {
    let svd = stacked
        .thin_svd()
        .map_err(|_| Error::InvalidMatrix("SVD failed to converge".into()))?;
    let s = svd.S().column_vector();
    let v = svd.V();
    let sv: Vec<f64> = (0..s.nrows()).map(|k| s[k].re).collect();
    // A = U S V^H, so row k of A lies in the span of conj(V[:, k]).
    let rows = (0..sv.len()).map(|k| (0..v.nrows()).map(|c| v[(c, k)].conj()).collect()).collect();
    Ok((sv, rows))
}

/// Numerical rank of the flattened matrices: singular values above
/// `tol_rank` times the largest one.
pub fn span_rank(mats: &[ComplexMatrix], tol_rank: f64) -> Result<usize> {
    let Some(first) = mats.first() else {
        return Ok(0);
    };
    let dim = first.dim;
    if let Some(bad) = mats.iter().find(|m| m.dim != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: bad.dim });
    }
    let stacked = stack_rows(mats.iter().map(|m| m.entries()), dim * dim);
    let sv = stacked
        .singular_values()
        .map_err(|_| Error::InvalidMatrix("SVD failed to converge".into()))?;
    Ok(count_above(&sv, tol_rank))
}

/// A subspace of End(C^ambient_dim), stored as a Frobenius-orthonormal basis.
#[derive(Clone, Debug)]
pub struct OperatorSpan {
    ambient_dim: usize,
    basis: Vec<ComplexMatrix>,
}

impl OperatorSpan {
    pub fn empty(ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: Vec::new() }
    }

    pub fn from_matrices(ambient_dim: usize, mats: &[ComplexMatrix], tol_rank: f64) -> Result<Self> {
        let mut span = Self::empty(ambient_dim);
        span.extend(mats, tol_rank)?;
        Ok(span)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient_dim * self.ambient_dim
    }

    /// Adds `candidates` to the span and returns an orthonormal set of new
    /// directions (orthogonal to the previous span) whose count is the rank
    /// increase.
    ///
    /// The rank is decided from the singular values of the stack formed by
    /// the current basis and the unit-normalized candidates. Candidates with
    /// norm at or below `tol_rank` times the largest candidate norm are
    /// treated as zero.
    pub fn extend(&mut self, candidates: &[ComplexMatrix], tol_rank: f64) -> Result<Vec<ComplexMatrix>> {
        let m = self.ambient_dim;
        let width = m * m;
        if let Some(bad) = candidates.iter().find(|c| c.dim != m) {
            return Err(Error::DimensionMismatch { expected: m, found: bad.dim });
        }
        let norms: Vec<f64> = candidates.iter().map(frobenius_norm).collect();
        let cutoff = tol_rank * norms.iter().copied().fold(0.0, f64::max);
        let unit: Vec<Vec<C64>> = candidates
            .iter()
            .zip(&norms)
            .filter(|(_, &n)| n > cutoff && n > 0.0)
            .map(|(c, &n)| c.entries.iter().map(|z| z / n).collect())
            .collect();
        if unit.is_empty() || self.is_full() {
            return Ok(Vec::new());
        }

        let old_rank = self.rank();
        let stacked = stack_rows(
            self.basis.iter().map(|b| b.entries()).chain(unit.iter().map(Vec::as_slice)),
            width,
        );
        let (sv, directions) = row_space(&stacked)?;
        let new_rank = count_above(&sv, tol_rank).max(old_rank);
        if new_rank == old_rank {
            return Ok(Vec::new());
        }

        // Leading right singular vectors span the enlarged space; project
        // out the old basis and keep the dominant residual directions.
        let mut residuals: Vec<Vec<C64>> = directions.into_iter().take(new_rank).collect();
        for res in &mut residuals {
            // Two passes of Gram-Schmidt against the old basis.
            for _ in 0..2 {
                for b in &self.basis {
                    let coeff: C64 = b.entries.iter().zip(res.iter()).map(|(x, y)| x.conj() * y).sum();
                    for (r, x) in res.iter_mut().zip(&b.entries) {
                        *r -= coeff * x;
                    }
                }
            }
        }
        let (_, fresh) = row_space(&stack_rows(residuals.iter().map(Vec::as_slice), width))?;
        let added: Vec<ComplexMatrix> = fresh
            .into_iter()
            .take(new_rank - old_rank)
            .map(|v| ComplexMatrix::from_parts(m, v))
            .collect();
        self.basis.extend(added.iter().cloned());
        Ok(added)
    }

    /// Distance of `a` from the span relative to its norm.
    pub fn relative_residual(&self, a: &ComplexMatrix) -> f64 {
        let norm = frobenius_norm(a);
        if norm == 0.0 {
            return 0.0;
        }
        let mut res = a.clone();
        for b in &self.basis {
            let coeff = frobenius_inner(b, &res);
            for (r, x) in res.entries.iter_mut().zip(&b.entries) {
                *r -= coeff * x;
            }
        }
        frobenius_norm(&res) / norm
    }
}

/// All eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(a: &ComplexMatrix, tol_herm: f64) -> Result<Vec<f64>> {
    let asymmetry = frobenius_norm(&(a - &a.adjoint()));
    let scale = frobenius_norm(a);
    if asymmetry > tol_herm * scale {
        return Err(Error::NotHermitian { asymmetry, tolerance: tol_herm });
    }
    // Symmetrize so the solver sees an exactly Hermitian input.
    let herm = (a + &a.adjoint()).scale(C64::new(0.5, 0.0));
    let mut values = herm
        .to_faer()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::InvalidMatrix("eigensolver failed to converge".into()))?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}
