use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use matrixmultiply::CGemmOption;
use num_complex::Complex64;

use super::kernel::{axpy, dotc, dotu};
use super::ComplexVector;
use crate::error::{Error, Result};

/// Dense complex matrix stored row-major: entry `(r, c)` lives at `r * cols + c`.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "from_vec",
                lhs: (rows, cols),
                rhs: (data.len(), 1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from row slices. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// `n x 1` matrix holding `v`.
    pub fn column_vector(v: &ComplexVector) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.as_slice().to_vec(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [Complex64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> ComplexVector {
        ComplexVector::from_vec((0..self.rows).map(|r| self[(r, c)]).collect())
    }

    /// Columns `start..end` as a new matrix.
    pub fn columns(&self, start: usize, end: usize) -> Self {
        assert!(start <= end && end <= self.cols, "column range out of bounds");
        let width = end - start;
        let mut data = Vec::with_capacity(self.rows * width);
        for r in 0..self.rows {
            data.extend_from_slice(&self.row(r)[start..end]);
        }
        Self {
            rows: self.rows,
            cols: width,
            data,
        }
    }

    /// Overwrites columns `start..start + block.cols()` with `block`.
    pub fn set_columns(&mut self, start: usize, block: &ComplexMatrix) {
        assert_eq!(self.rows, block.rows, "row count mismatch");
        assert!(start + block.cols <= self.cols, "column range out of bounds");
        for r in 0..self.rows {
            let w = block.cols;
            self.row_mut(r)[start..start + w].copy_from_slice(block.row(r));
        }
    }

    /// `[self, other]`.
    pub fn hstack(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                op: "hstack",
                lhs: self.shape(),
                rhs: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        out.set_columns(0, self);
        out.set_columns(self.cols, other);
        Ok(out)
    }

    /// Checked matrix product.
    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                lhs: self.shape(),
                rhs: rhs.shape(),
            });
        }
        Ok(gemm(self.rows, self.cols, rhs.cols, self.as_slice(), (self.cols, 1), rhs.as_slice(), (rhs.cols, 1)))
    }

    /// Checked `self^H * rhs` without materializing the conjugate transpose.
    pub fn hermitian_matmul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "hermitian_matmul",
                lhs: self.shape(),
                rhs: rhs.shape(),
            });
        }
        let conj = self.conj();
        Ok(gemm(self.cols, self.rows, rhs.cols, conj.as_slice(), (1, self.cols), rhs.as_slice(), (rhs.cols, 1)))
    }

    /// Checked `self * rhs^H`.
    pub fn matmul_hermitian(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                op: "matmul_hermitian",
                lhs: self.shape(),
                rhs: rhs.shape(),
            });
        }
        let conj = rhs.conj();
        Ok(gemm(self.rows, self.cols, rhs.rows, self.as_slice(), (self.cols, 1), conj.as_slice(), (1, rhs.cols)))
    }

    /// `self * self^H`, with the result made exactly Hermitian.
    pub fn gram_rows(&self) -> Self {
        let conj = self.conj();
        let mut out = gemm(self.rows, self.cols, self.rows, self.as_slice(), (self.cols, 1), conj.as_slice(), (1, self.cols));
        let n = self.rows;
        for i in 0..n {
            for j in 0..i {
                let v = 0.5 * (out.data[i * n + j] + out.data[j * n + i].conj());
                out.data[i * n + j] = v;
                out.data[j * n + i] = v.conj();
            }
            out.data[i * n + i].im = 0.0;
        }
        out
    }

    /// Entrywise conjugate.
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                op: "mul_vec",
                lhs: self.shape(),
                rhs: (v.len(), 1),
            });
        }
        Ok(ComplexVector::from_vec(
            (0..self.rows)
                .map(|r| dotu(self.row(r), v.as_slice()))
                .collect(),
        ))
    }

    /// `self^H * v`.
    pub fn hermitian_mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.rows != v.len() {
            return Err(Error::DimensionMismatch {
                op: "hermitian_mul_vec",
                lhs: self.shape(),
                rhs: (v.len(), 1),
            });
        }
        // conj(sum_r conj(x_r) A[r, :])
        let mut acc = vec![Complex64::new(0.0, 0.0); self.cols];
        for (r, x) in v.as_slice().iter().enumerate() {
            axpy(x.conj(), self.row(r), &mut acc);
        }
        Ok(ComplexVector::from_vec(acc.into_iter().map(|z| z.conj()).collect()))
    }

    pub fn hermitian(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sq().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `trace(self^H * other)`.
    pub fn inner(&self, other: &ComplexMatrix) -> Complex64 {
        assert_eq!(self.shape(), other.shape(), "inner product shape mismatch");
        dotc(&self.data, &other.data)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// `self += alpha * other`.
    pub fn add_scaled(&mut self, alpha: Complex64, other: &ComplexMatrix) {
        assert_eq!(self.shape(), other.shape(), "add_scaled shape mismatch");
        axpy(alpha, &other.data, &mut self.data);
    }

    /// `self -= u * v^H` for column vectors `u`, `v`.
    pub fn sub_outer(&mut self, u: &[Complex64], v: &[Complex64]) {
        assert_eq!(self.rows, u.len());
        assert_eq!(self.cols, v.len());
        for (r, &ur) in u.iter().enumerate() {
            for (x, vc) in self.row_mut(r).iter_mut().zip(v) {
                *x -= ur * vc.conj();
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Unchecked product; panics on mismatched shapes. Use [`ComplexMatrix::matmul`]
/// where the shapes come from outside.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows.min(8) {
            write!(f, "  ")?;
            for c in 0..self.cols.min(8) {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            if self.cols > 8 {
                write!(f, "...")?;
            }
            writeln!(f)?;
        }
        if self.rows > 8 {
            writeln!(f, "  ...")?;
        }
        write!(f, "]")
    }
}

/// Free-function form of [`ComplexMatrix::matmul`].
/// Row-major `m x n` product of strided `m x k` and `k x n` operands.
#[allow(clippy::too_many_arguments)]
fn gemm(
    m: usize,
    k: usize,
    n: usize,
    a: &[Complex64],
    (rsa, csa): (usize, usize),
    b: &[Complex64],
    (rsb, csb): (usize, usize),
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(m, n);
    if m == 0 || n == 0 || k == 0 {
        return out;
    }
    debug_assert!(a.len() > (m - 1) * rsa + (k - 1) * csa);
    debug_assert!(b.len() > (k - 1) * rsb + (n - 1) * csb);
    // SAFETY: Complex<f64> is #[repr(C)] and layout-compatible with [f64; 2];
    // the strides above keep every access inside `a`, `b` and `out`.
    unsafe {
        matrixmultiply::zgemm(
            CGemmOption::Standard,
            CGemmOption::Standard,
            m,
            k,
            n,
            [1.0, 0.0],
            a.as_ptr().cast(),
            rsa as isize,
            csa as isize,
            b.as_ptr().cast(),
            rsb as isize,
            csb as isize,
            [0.0, 0.0],
            out.data.as_mut_ptr().cast(),
            n as isize,
            1,
        );
    }
    out
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

pub fn hermitian(a: &ComplexMatrix) -> ComplexMatrix {
    a.hermitian()
}

pub fn frobenius_norm_sq(a: &ComplexMatrix) -> f64 {
    a.frobenius_norm_sq()
}
