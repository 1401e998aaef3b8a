//! Dense complex linear algebra sized for desk-scale quantum states.
//!
//! Matrices are row-major. Composite indices follow the usual Kronecker
//! convention: subsystem 0 is the most significant digit, so for two factors
//! the composite index is `i_a * dim_b + i_b`.

use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;

/// Eigenvalues above `-PSD_TOL` are treated as rounding noise and clamped to zero.
pub const PSD_TOL: f64 = 1e-10;

/// Entrywise tolerance for `M == M†`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues at or below this (relative) are treated as exact zeros.
pub const EIGEN_NOISE: f64 = 1e-13;

/// Ordered list of per-subsystem dimensions, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimList(Vec<usize>);

impl DimList {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Argument("dimension list is empty".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::Argument(format!("subsystem dimension {d} < 2 in {dims:?}")));
        }
        Ok(DimList(dims))
    }

    /// `n` subsystems of dimension `d`.
    pub fn uniform(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Dimensions of the listed subsystems, in the order given.
    pub fn select(&self, indices: &[usize]) -> Vec<usize> {
        indices.iter().map(|&i| self.0[i]).collect()
    }

    /// Splits a composite index into per-subsystem digits.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.0.len()];
        for (slot, &d) in out.iter_mut().zip(&self.0).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    /// Inverse of [`DimList::digits`].
    pub fn compose(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.0).fold(0, |acc, (&digit, &d)| acc * d + digit)
    }
}

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::Size(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = v[i] * v[j].conj();
            }
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

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Size(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Size(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols))
            .map(|i| self.data[i * self.cols + i])
            .sum()
    }

    /// Largest entrywise modulus of `M - M†`.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.rows;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let x = a[(ia, ja)];
            for ib in 0..b.rows {
                for jb in 0..b.cols {
                    out.data[(ia * b.rows + ib) * cols + ja * b.cols + jb] = x * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Kronecker product of two vectors.
pub fn tensor_vectors(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Sorted, deduplicated copy of an index set, checked against `n` subsystems.
pub(crate) fn normalize_index_set(indices: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut set = indices.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.len() != indices.len() {
        return Err(Error::Argument(format!("index set {indices:?} has duplicates")));
    }
    if let Some(&bad) = set.iter().find(|&&i| i >= n) {
        return Err(Error::Argument(format!(
            "subsystem index {bad} out of range for {n} subsystems"
        )));
    }
    Ok(set)
}

/// Reduced operator on the `keep` subsystems (kept in ascending order).
pub fn partial_trace(rho: &ComplexMatrix, dims: &DimList, keep: &[usize]) -> Result<ComplexMatrix> {
    if !rho.is_square() || rho.rows() != dims.total() {
        return Err(Error::Size(format!(
            "operator is {}x{} but dims {:?} need {}",
            rho.rows(),
            rho.cols(),
            dims.as_slice(),
            dims.total()
        )));
    }
    if keep.is_empty() {
        return Err(Error::Argument("keep set is empty".into()));
    }
    let keep = normalize_index_set(keep, dims.len())?;
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let dk: usize = dims.select(&keep).iter().product();
    let dt: usize = dims.select(&traced).iter().product();

    // full[ka * dt + t] = composite index of (kept digits of ka, traced digits of t)
    let keep_dims = DimList(dims.select(&keep));
    let traced_dims = DimList(dims.select(&traced));
    let mut full = vec![0usize; dk * dt];
    let mut digits = vec![0usize; dims.len()];
    for ka in 0..dk {
        let kd = keep_dims.digits(ka);
        for (&slot, &v) in keep.iter().zip(&kd) {
            digits[slot] = v;
        }
        for t in 0..dt {
            if !traced.is_empty() {
                let td = traced_dims.digits(t);
                for (&slot, &v) in traced.iter().zip(&td) {
                    digits[slot] = v;
                }
            }
            full[ka * dt + t] = dims.compose(&digits);
        }
    }

    let mut out = ComplexMatrix::zeros(dk, dk);
    for a in 0..dk {
        for b in 0..dk {
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..dt {
                acc += rho[(full[a * dt + t], full[b * dt + t])];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Index map for reordering subsystems: entry `i` is the new composite index
/// of old index `i` when new subsystem `s` is old subsystem `order[s]`.
fn permutation_map(dims: &DimList, order: &[usize]) -> Result<(Vec<usize>, DimList)> {
    let mut check = order.to_vec();
    check.sort_unstable();
    if check != (0..dims.len()).collect::<Vec<_>>() {
        return Err(Error::Argument(format!(
            "{order:?} is not a permutation of {} subsystems",
            dims.len()
        )));
    }
    let new_dims = DimList(dims.select(order));
    let map = (0..dims.total())
        .map(|i| {
            let old = dims.digits(i);
            let new: Vec<usize> = order.iter().map(|&s| old[s]).collect();
            new_dims.compose(&new)
        })
        .collect();
    Ok((map, new_dims))
}

/// Reorders the tensor factors of a state vector.
pub fn permute_vector(v: &[C64], dims: &DimList, order: &[usize]) -> Result<(Vec<C64>, DimList)> {
    if v.len() != dims.total() {
        return Err(Error::Size(format!(
            "vector has {} entries but dims need {}",
            v.len(),
            dims.total()
        )));
    }
    let (map, new_dims) = permutation_map(dims, order)?;
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for (i, &z) in v.iter().enumerate() {
        out[map[i]] = z;
    }
    Ok((out, new_dims))
}

/// Reorders the tensor factors of a square operator.
pub fn permute_matrix(m: &ComplexMatrix, dims: &DimList, order: &[usize]) -> Result<(ComplexMatrix, DimList)> {
    if !m.is_square() || m.rows() != dims.total() {
        return Err(Error::Size(format!(
            "operator is {}x{} but dims need {}",
            m.rows(),
            m.cols(),
            dims.total()
        )));
    }
    let (map, new_dims) = permutation_map(dims, order)?;
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(map[i], map[j])] = m[(i, j)];
        }
    }
    Ok((out, new_dims))
}

/// Eigenvalues (descending) and matching unit eigenvectors (as columns) of a
/// Hermitian matrix. The input is symmetrized before decomposition.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !m.is_square() {
        return Err(Error::Size(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n == 0 {
        return Ok((Vec::new(), ComplexMatrix::zeros(0, 0)));
    }
    let h = m.hermitian_part();
    let fm = faer::Mat::<C64>::from_fn(n, n, |i, j| h[(i, j)]);
    let eig = fm
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Numeric(format!("eigendecomposition failed: {e:?}")))?;
    let (s, u) = (eig.S(), eig.U());
    // faer sorts ascending
    let values: Vec<f64> = (0..n).rev().map(|i| s[i].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, i) in (0..n).rev().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = u[(row, i)];
        }
    }
    if values.iter().any(|v| !v.is_finite()) || vectors.data().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numeric("eigendecomposition produced non-finite values".into()));
    }
    Ok((values, vectors))
}

/// Eigenvalues of a Hermitian PSD matrix, descending, with rounding noise in
/// `(-PSD_TOL, 0)` clamped to zero.
pub fn psd_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let (values, _) = hermitian_eigen(m)?;
    clamp_psd(values)
}

pub(crate) fn clamp_psd(values: Vec<f64>) -> Result<Vec<f64>> {
    if let Some(&min) = values.last() {
        if min < -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
    }
    Ok(values.into_iter().map(|v| v.max(0.0)).collect())
}

/// `Σ λᵢᵖ` over the eigenvalues of a Hermitian PSD operator.
pub fn spectral_power_trace(rho: &ComplexMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::Domain {
            value: p,
            domain: "p > 0".into(),
        });
    }
    if !rho.is_hermitian(PSD_TOL) {
        return Err(Error::Validation(format!(
            "operator is not Hermitian (defect {:e})",
            rho.hermiticity_defect()
        )));
    }
    let values = psd_eigenvalues(rho)?;
    // Solver round-off leaves ~1e-16 ghosts that l^p inflates for p < 1.
    let floor = EIGEN_NOISE * values.first().copied().unwrap_or(0.0).max(1.0);
    Ok(values.iter().map(|&l| if l > floor { l.powf(p) } else { 0.0 }).sum())
}

/// Applies `f` to the spectrum of a Hermitian matrix: `V f(Λ) V†`.
pub fn hermitian_function(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let (values, vectors) = hermitian_eigen(m)?;
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &l) in values.iter().enumerate() {
        let fl = f(l);
        if fl == 0.0 {
            continue;
        }
        for i in 0..n {
            let vi = vectors[(i, k)] * fl;
            for j in 0..n {
                out[(i, j)] += vi * vectors[(j, k)].conj();
            }
        }
    }
    Ok(out)
}
