//! Dense complex linear algebra on small matrices: tensor products, partial
//! trace/transpose, subsystem permutations, Hermitian eigendecomposition,
//! purification and PSD square roots.
//!
//! Index convention used everywhere: subsystem 0 is the *most significant*
//! tensor index, i.e. a basis index of the composite space decomposes as
//! `i = ((i_0 * d_1 + i_1) * d_2 + i_2) * ...`.

mod eig;

pub use eig::{eig_hermitian, purify, sqrt_psd, EigH};

use crate::error::{Error, Result};
use num_complex::Complex;
use std::fmt;
use std::ops::{Index, IndexMut};

pub type C64 = Complex<f64>;

pub const ZERO: C64 = Complex::new(0.0, 0.0);
pub const ONE: C64 = Complex::new(1.0, 0.0);

/// Tolerance for Hermiticity checks on inputs to Hermitian-only operations.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in [-EIG_CLIP, 0) are clipped to zero.
pub const EIG_CLIP: f64 = 1e-12;

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        CMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &x) in entries.iter().enumerate() {
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

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum::<C64>()
            })
            .collect()
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> CMatrix {
        self.scale(C64::new(s, 0.0))
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// max |entry|
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// ‖M − M†‖∞ over entries.
    pub fn hermiticity_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn check_hermitian(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimMismatch(format!(
                "expected square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let defect = self.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(())
    }

    /// Frobenius inner product tr(A† B).
    pub fn frob_inner(&self, other: &CMatrix) -> C64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Modified Gram-Schmidt with one re-orthogonalization pass over the columns
/// (k ≤ n). The implied R factor has a positive diagonal, so applying this to
/// a Ginibre matrix yields a Haar isometry directly.
pub fn orthonormalize_columns(g: &CMatrix) -> CMatrix {
    let (n, k) = (g.rows(), g.cols());
    let mut q = g.clone();
    for j in 0..k {
        for _pass in 0..2 {
            for i in 0..j {
                let mut proj = ZERO;
                for row in 0..n {
                    proj += q[(row, i)].conj() * q[(row, j)];
                }
                for row in 0..n {
                    let qi = q[(row, i)];
                    q[(row, j)] -= proj * qi;
                }
            }
        }
        let mut nrm = 0.0;
        for row in 0..n {
            nrm += q[(row, j)].norm_sqr();
        }
        let nrm = nrm.sqrt();
        for row in 0..n {
            q[(row, j)] /= nrm;
        }
    }
    q
}

/// |u⟩⟨v|
pub fn outer(u: &[C64], v: &[C64]) -> CMatrix {
    CMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
}

pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalize(v: &mut [C64]) {
    let n = norm(v);
    if n > 0.0 {
        for a in v {
            *a /= n;
        }
    }
}

/// Kronecker product with the subsystem-0-most-significant ordering.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let x = a[(ia, ja)];
            if x == ZERO {
                continue;
            }
            for ib in 0..b.rows() {
                for jb in 0..b.cols() {
                    out[(ia * b.rows() + ib, ja * b.cols() + jb)] = x * b[(ib, jb)];
                }
            }
        }
    }
    out
}

pub fn tensor_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Ordered list of subsystem dimensions; subsystem 0 is most significant.
#[derive(Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct DimList(Vec<usize>);

impl DimList {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidArg("empty dimension list".into()));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidArg("zero subsystem dimension".into()));
        }
        Ok(DimList(dims))
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

    pub fn dim(&self, sys: usize) -> usize {
        self.0[sys]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Appends an extra (least significant) subsystem.
    pub fn with_appended(&self, d: usize) -> DimList {
        let mut v = self.0.clone();
        v.push(d);
        DimList(v)
    }

    /// Subsystems not in `keep`, in ascending order.
    pub fn complement(&self, keep: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|s| !keep.contains(s)).collect()
    }

    pub fn select(&self, subs: &[usize]) -> DimList {
        DimList(subs.iter().map(|&s| self.0[s]).collect())
    }

    /// Decomposes a flat index into per-subsystem digits.
    pub fn unravel(&self, mut idx: usize) -> Vec<usize> {
        let mut digits = vec![0usize; self.len()];
        for s in (0..self.len()).rev() {
            digits[s] = idx % self.0[s];
            idx /= self.0[s];
        }
        digits
    }

    /// Composes per-subsystem digits into a flat index.
    pub fn ravel(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.len());
        let mut idx = 0usize;
        for (s, &g) in digits.iter().enumerate() {
            debug_assert!(g < self.0[s]);
            idx = idx * self.0[s] + g;
        }
        idx
    }

    fn check_square_matrix(&self, m: &CMatrix) -> Result<()> {
        if !m.is_square() || m.rows() != self.total() {
            return Err(Error::DimMismatch(format!(
                "matrix is {}x{} but dims {:?} give total {}",
                m.rows(),
                m.cols(),
                self.0,
                self.total()
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for DimList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dims{:?}", self.0)
    }
}

impl fmt::Display for DimList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Reduced matrix on the `keep` subsystems (original ordering preserved);
/// trace is preserved.
pub fn partial_trace(m: &CMatrix, dims: &DimList, keep: &[usize]) -> Result<CMatrix> {
    dims.check_square_matrix(m)?;
    if keep.iter().any(|&s| s >= dims.len()) {
        return Err(Error::InvalidArg("keep index out of range".into()));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    let traced = dims.complement(&keep_sorted);
    let keep_dims = dims.select(&keep_sorted);
    let traced_dims_total: usize = traced.iter().map(|&s| dims.dim(s)).product();

    let kd = keep_dims.total();
    let mut out = CMatrix::zeros(kd, kd);
    let mut digits = vec![0usize; dims.len()];
    let mut digits_col = vec![0usize; dims.len()];

    // Enumerate traced multi-indices once, kept row/col indices inside.
    let traced_dims: Vec<usize> = traced.iter().map(|&s| dims.dim(s)).collect();
    for t in 0..traced_dims_total.max(1) {
        // digits of t over traced subsystems
        let mut tt = t;
        let mut tdigits = vec![0usize; traced.len()];
        for k in (0..traced.len()).rev() {
            tdigits[k] = tt % traced_dims[k];
            tt /= traced_dims[k];
        }
        for ik in 0..kd {
            let kdig = keep_dims.unravel(ik);
            for (pos, &s) in keep_sorted.iter().enumerate() {
                digits[s] = kdig[pos];
            }
            for (pos, &s) in traced.iter().enumerate() {
                digits[s] = tdigits[pos];
            }
            let row = dims.ravel(&digits);
            for jk in 0..kd {
                let kdig_c = keep_dims.unravel(jk);
                digits_col.copy_from_slice(&digits);
                for (pos, &s) in keep_sorted.iter().enumerate() {
                    digits_col[s] = kdig_c[pos];
                }
                let col = dims.ravel(&digits_col);
                out[(ik, jk)] += m[(row, col)];
            }
        }
    }
    Ok(out)
}

/// Transpose on one subsystem; Hermiticity is preserved for Hermitian input.
pub fn partial_transpose(m: &CMatrix, dims: &DimList, sys: usize) -> Result<CMatrix> {
    dims.check_square_matrix(m)?;
    if sys >= dims.len() {
        return Err(Error::InvalidArg("subsystem index out of range".into()));
    }
    let n = dims.total();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        let mut di = dims.unravel(i);
        for j in 0..n {
            let mut dj = dims.unravel(j);
            std::mem::swap(&mut di[sys], &mut dj[sys]);
            let (pi, pj) = (dims.ravel(&di), dims.ravel(&dj));
            out[(pi, pj)] = m[(i, j)];
            std::mem::swap(&mut di[sys], &mut dj[sys]);
        }
    }
    Ok(out)
}

/// Reorders subsystems: output subsystem k is input subsystem `perm[k]`.
pub fn permute_subsystems(
    m: &CMatrix,
    dims: &DimList,
    perm: &[usize],
) -> Result<(CMatrix, DimList)> {
    dims.check_square_matrix(m)?;
    check_perm(perm, dims.len())?;
    let new_dims = dims.select(perm);
    let n = dims.total();
    let mut out = CMatrix::zeros(n, n);
    let map: Vec<usize> = (0..n)
        .map(|i| {
            let d = dims.unravel(i);
            let nd: Vec<usize> = perm.iter().map(|&p| d[p]).collect();
            new_dims.ravel(&nd)
        })
        .collect();
    for i in 0..n {
        for j in 0..n {
            out[(map[i], map[j])] = m[(i, j)];
        }
    }
    Ok((out, new_dims))
}

/// Vector version of [`permute_subsystems`].
pub fn permute_subsystems_vec(
    v: &[C64],
    dims: &DimList,
    perm: &[usize],
) -> Result<(Vec<C64>, DimList)> {
    if v.len() != dims.total() {
        return Err(Error::DimMismatch(format!(
            "vector length {} vs dims total {}",
            v.len(),
            dims.total()
        )));
    }
    check_perm(perm, dims.len())?;
    let new_dims = dims.select(perm);
    let mut out = vec![ZERO; v.len()];
    for (i, &x) in v.iter().enumerate() {
        let d = dims.unravel(i);
        let nd: Vec<usize> = perm.iter().map(|&p| d[p]).collect();
        out[new_dims.ravel(&nd)] = x;
    }
    Ok((out, new_dims))
}

fn check_perm(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidArg("permutation length mismatch".into()));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidArg("invalid permutation".into()));
        }
        seen[p] = true;
    }
    Ok(())
}
