//! Dense complex linear algebra on small Hilbert spaces.
//!
//! Composite indices are row-major over subsystems: subsystem 0 is the
//! slowest-varying digit. Every module in the crate relies on this.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance for structural identities (normalization, Hermiticity, trace).
pub const STRUCTURAL_TOL: f64 = 1e-12;
/// Tolerance for spectral quantities and eigenvalue sign tests.
pub const SPECTRAL_TOL: f64 = 1e-10;
/// Largest Hilbert-space dimension handled densely.
pub const MAX_DIM: usize = 1 << 14;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

fn check_cap(dim: usize) -> Result<()> {
    if dim > MAX_DIM {
        Err(Error::DimensionCap { dim, cap: MAX_DIM })
    } else {
        Ok(())
    }
}

/// A dense ket.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<C64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Invalid("empty vector".into()));
        }
        check_cap(entries.len())?;
        Ok(Self { entries })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::SubsystemIndex { index, count: dim });
        }
        let mut entries = vec![ZERO; dim];
        entries[index] = ONE;
        Self::new(entries)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self {
            entries: self.entries.iter().map(|z| z / n).collect(),
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.len() != other.len() {
            return Err(Error::ShapeMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in &self.entries {
            out.extend(other.entries.iter().map(|b| a * b));
        }
        Self::new(out)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> ComplexMatrix {
        let d = self.len();
        let mut data = Vec::with_capacity(d * d);
        for a in &self.entries {
            data.extend(self.entries.iter().map(|b| a * b.conj()));
        }
        ComplexMatrix {
            rows: d,
            cols: d,
            data,
        }
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.is_normalized(SPECTRAL_TOL) {
            Ok(())
        } else {
            Err(Error::NotNormalized { norm: self.norm() })
        }
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Invalid("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(l, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.len() {
            return Err(Error::ShapeMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let out = (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v.entries())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        ComplexVector::new(out)
    }

    /// Largest entrywise distance to another matrix of the same shape.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Checks Hermiticity and unit trace within [`STRUCTURAL_TOL`] and
    /// eigenvalues bounded below by `-SPECTRAL_TOL`.
    pub fn check_density(&self) -> Result<()> {
        self.require_square()?;
        let dev = self.hermiticity_deviation();
        if dev > STRUCTURAL_TOL {
            return Err(Error::NotDensity(format!("Hermiticity deviation {dev:e}")));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > STRUCTURAL_TOL || tr.im.abs() > STRUCTURAL_TOL {
            return Err(Error::NotDensity(format!("trace {tr}")));
        }
        let min = hermitian_eigenvalues(self)?[0];
        if min < -SPECTRAL_TOL {
            return Err(Error::NotDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// Two-party split `dim_a × dim_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteShape {
    pub dim_a: usize,
    pub dim_b: usize,
}

impl BipartiteShape {
    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::Invalid(
                "subsystem dimensions must be positive".into(),
            ));
        }
        Ok(Self { dim_a, dim_b })
    }

    pub fn total(&self) -> usize {
        self.dim_a * self.dim_b
    }

    fn check(&self, dim: usize) -> Result<()> {
        if self.total() != dim {
            Err(Error::ShapeMismatch {
                expected: self.total(),
                found: dim,
            })
        } else {
            Ok(())
        }
    }
}

/// Local dimensions of an `n`-party register, subsystem 0 first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultipartiteShape {
    local_dims: Vec<usize>,
}

impl MultipartiteShape {
    pub fn new(local_dims: Vec<usize>) -> Result<Self> {
        if local_dims.is_empty() || local_dims.contains(&0) {
            return Err(Error::Invalid(
                "local dimensions must be a non-empty list of positive integers".into(),
            ));
        }
        let total = local_dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .unwrap_or(usize::MAX);
        check_cap(total)?;
        Ok(Self { local_dims })
    }

    /// `n` qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn parties(&self) -> usize {
        self.local_dims.len()
    }

    pub fn total(&self) -> usize {
        self.local_dims.iter().product()
    }

    /// Stride of each subsystem digit in the composite index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.local_dims.len()];
        for i in (0..self.local_dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.local_dims[i + 1];
        }
        strides
    }

    fn check(&self, dim: usize) -> Result<()> {
        if self.total() != dim {
            Err(Error::ShapeMismatch {
                expected: self.total(),
                found: dim,
            })
        } else {
            Ok(())
        }
    }

    /// Offsets contributed by every joint configuration of `subset`
    /// (enumerated row-major over the subset in the order given).
    fn offsets(&self, subset: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut offsets = vec![0usize];
        for &s in subset {
            let d = self.local_dims[s];
            let mut next = Vec::with_capacity(offsets.len() * d);
            for &o in &offsets {
                next.extend((0..d).map(|x| o + x * strides[s]));
            }
            offsets = next;
        }
        offsets
    }

    fn split(&self, keep: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
        let n = self.parties();
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.len() != keep.len() {
            return Err(Error::Invalid("duplicate subsystem index".into()));
        }
        if let Some(&bad) = kept.iter().find(|&&i| i >= n) {
            return Err(Error::SubsystemIndex {
                index: bad,
                count: n,
            });
        }
        let traced = (0..n).filter(|i| !kept.contains(i)).collect();
        Ok((kept, traced))
    }
}

/// Which factor of a bipartite operator to transpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Schmidt coefficients, descending.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    coefficients: Vec<f64>,
}

impl SchmidtSpectrum {
    /// Validates nonnegativity and `Σλ² = 1` within [`SPECTRAL_TOL`]; sorts descending.
    pub fn new(mut coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Invalid("empty Schmidt spectrum".into()));
        }
        if let Some(&bad) = coefficients.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(crate::error::domain("Schmidt coefficient", bad, "[0, inf)"));
        }
        let norm_sq: f64 = coefficients.iter().map(|x| x * x).sum();
        if (norm_sq - 1.0).abs() > SPECTRAL_TOL {
            return Err(Error::NotNormalized {
                norm: norm_sq.sqrt(),
            });
        }
        coefficients.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { coefficients })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&x| x > tol).count()
    }

    /// Largest coefficient distance, padding the shorter list with zeros.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.coefficients.len().max(other.coefficients.len());
        (0..n)
            .map(|i| {
                let a = self.coefficients.get(i).copied().unwrap_or(0.0);
                let b = other.coefficients.get(i).copied().unwrap_or(0.0);
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// `A ⊗ B` with row index `i_A·rows_B + i_B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let x = a[(ia, ja)];
            if x == ZERO {
                continue;
            }
            for ib in 0..b.rows {
                let row = ia * b.rows + ib;
                for jb in 0..b.cols {
                    out.data[row * cols + ja * b.cols + jb] = x * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Reduced operator on the subsystems in `keep`, which come out in their
/// original (ascending) order.
pub fn partial_trace(
    rho: &ComplexMatrix,
    shape: &MultipartiteShape,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    let dim = rho.require_square()?;
    shape.check(dim)?;
    let (kept, traced) = shape.split(keep)?;
    let keep_off = shape.offsets(&kept);
    let trace_off = shape.offsets(&traced);
    let d = keep_off.len();
    let mut out = ComplexMatrix::zeros(d, d);
    for (a, &oa) in keep_off.iter().enumerate() {
        for (b, &ob) in keep_off.iter().enumerate() {
            out[(a, b)] = trace_off.iter().map(|&t| rho[(oa + t, ob + t)]).sum();
        }
    }
    Ok(out)
}

/// Reduced density matrix of a pure state without forming `|ψ⟩⟨ψ|`.
pub fn reduced_density_from_pure(
    psi: &ComplexVector,
    shape: &MultipartiteShape,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    shape.check(psi.len())?;
    let (kept, traced) = shape.split(keep)?;
    let keep_off = shape.offsets(&kept);
    let trace_off = shape.offsets(&traced);
    let amps = psi.entries();
    let d = keep_off.len();
    let mut out = ComplexMatrix::zeros(d, d);
    for (a, &oa) in keep_off.iter().enumerate() {
        for (b, &ob) in keep_off.iter().enumerate().skip(a) {
            let z: C64 = trace_off
                .iter()
                .map(|&t| amps[oa + t] * amps[ob + t].conj())
                .sum();
            out[(a, b)] = z;
            out[(b, a)] = z.conj();
        }
    }
    Ok(out)
}

/// Transpose of one tensor factor of a bipartite operator.
pub fn partial_transpose(
    rho: &ComplexMatrix,
    shape: BipartiteShape,
    which: Subsystem,
) -> Result<ComplexMatrix> {
    let dim = rho.require_square()?;
    shape.check(dim)?;
    let db = shape.dim_b;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for a in 0..shape.dim_a {
        for b in 0..db {
            for a2 in 0..shape.dim_a {
                for b2 in 0..db {
                    let (r, c) = match which {
                        Subsystem::A => (a2 * db + b, a * db + b2),
                        Subsystem::B => (a * db + b2, a2 * db + b),
                    };
                    out[(r, c)] = rho[(a * db + b, a2 * db + b2)];
                }
            }
        }
    }
    Ok(out)
}

/// All eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let dim = m.require_square()?;
    check_cap(dim)?;
    let dev = m.hermiticity_deviation();
    if dev > SPECTRAL_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let a = m.to_nalgebra();
    let sym = (&a + a.adjoint()).scale(0.5);
    let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Singular values of the `dim_a × dim_b` reshaping of `psi`, descending.
pub fn schmidt_decompose(psi: &ComplexVector, shape: BipartiteShape) -> Result<SchmidtSpectrum> {
    shape.check(psi.len())?;
    psi.require_normalized()?;
    let m = DMatrix::from_row_slice(shape.dim_a, shape.dim_b, psi.entries());
    let values: Vec<f64> = m.singular_values().iter().copied().collect();
    SchmidtSpectrum::new(values)
}

/// Reorders the subsystems of `psi` so that `order[0]` becomes the slowest digit.
pub fn permute_subsystems(
    psi: &ComplexVector,
    shape: &MultipartiteShape,
    order: &[usize],
) -> Result<(ComplexVector, MultipartiteShape)> {
    shape.check(psi.len())?;
    let n = shape.parties();
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n {
            return Err(Error::SubsystemIndex { index: i, count: n });
        }
        if core::mem::replace(&mut seen[i], true) {
            return Err(Error::Invalid("permutation repeats a subsystem".into()));
        }
    }
    if order.len() != n {
        return Err(Error::Invalid(
            "permutation must list every subsystem".into(),
        ));
    }
    // Enumerating offsets in the new order visits old indices in new-index order.
    let offsets = shape.offsets(order);
    let entries = offsets.iter().map(|&o| psi.entries()[o]).collect();
    let dims = order.iter().map(|&i| shape.local_dims[i]).collect();
    Ok((ComplexVector::new(entries)?, MultipartiteShape::new(dims)?))
}

/// Regroups `psi` as `(subsystems in group_a) | (the rest)`, each side in original order.
pub fn bipartition(
    psi: &ComplexVector,
    shape: &MultipartiteShape,
    group_a: &[usize],
) -> Result<(ComplexVector, BipartiteShape)> {
    let (a, b) = shape.split(group_a)?;
    let dim_a = a.iter().map(|&i| shape.local_dims[i]).product();
    let dim_b = b.iter().map(|&i| shape.local_dims[i]).product();
    let order: Vec<usize> = a.into_iter().chain(b).collect();
    let (v, _) = permute_subsystems(psi, shape, &order)?;
    Ok((v, BipartiteShape::new(dim_a, dim_b)?))
}
