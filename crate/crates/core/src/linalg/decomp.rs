use num_complex::Complex64;

use super::kernel::{axpy, dotc};
use super::{ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};

/// Pivots below this fraction of the largest diagonal entry count as singular.
const PIVOT_RTOL: f64 = 1e-13;

/// Cholesky factor `G = L L^H` of a Hermitian positive definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    /// Lower-triangular factor, row-major `n x n`.
    l: ComplexMatrix,
}

impl Cholesky {
    pub fn factor(g: &ComplexMatrix) -> Result<Self> {
        if !g.is_square() {
            return Err(Error::DimensionMismatch {
                op: "cholesky",
                lhs: g.shape(),
                rhs: g.shape(),
            });
        }
        let n = g.rows();
        let max_diag = (0..n).map(|i| g[(i, i)].re.abs()).fold(0.0, f64::max);
        let threshold = PIVOT_RTOL * max_diag.max(f64::MIN_POSITIVE);
        let mut l = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            let lj = &l.row(j)[..j];
            let d = g[(j, j)].re - lj.iter().map(Complex64::norm_sqr).sum::<f64>();
            if !(d > threshold) {
                return Err(Error::NotPositiveDefinite { pivot: j, value: d });
            }
            let d = d.sqrt();
            l[(j, j)] = Complex64::new(d, 0.0);
            for i in j + 1..n {
                // sum_k L[i,k] conj(L[j,k])
                let s = dotc(&l.row(j)[..j], &l.row(i)[..j]);
                l[(i, j)] = (g[(i, j)] - s) / d;
            }
        }
        Ok(Self { l })
    }

    pub fn dim(&self) -> usize {
        self.l.rows()
    }

    /// Solves `G X = B` for every column of `B`.
    pub fn solve(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.dim();
        if b.rows() != n {
            return Err(Error::DimensionMismatch {
                op: "cholesky_solve",
                lhs: (n, n),
                rhs: b.shape(),
            });
        }
        if b.cols() > 2 * n {
            // Wide right-hand sides: one small inverse, then a single product.
            return self.solve(&ComplexMatrix::identity(n))?.matmul(b);
        }
        let mut x = b.clone();
        let m = b.cols();
        let mut scratch = vec![Complex64::new(0.0, 0.0); m];
        // L Z = B
        for i in 0..n {
            scratch.copy_from_slice(x.row(i));
            for k in 0..i {
                let lik = self.l[(i, k)];
                axpy(-lik, x.row(k), &mut scratch);
            }
            let inv = 1.0 / self.l[(i, i)].re;
            for (dst, s) in x.row_mut(i).iter_mut().zip(&scratch) {
                *dst = s * inv;
            }
        }
        // L^H X = Z
        for i in (0..n).rev() {
            scratch.copy_from_slice(x.row(i));
            for k in i + 1..n {
                let lki = self.l[(k, i)].conj();
                axpy(-lki, x.row(k), &mut scratch);
            }
            let inv = 1.0 / self.l[(i, i)].re;
            for (dst, s) in x.row_mut(i).iter_mut().zip(&scratch) {
                *dst = s * inv;
            }
        }
        Ok(x)
    }

    pub fn solve_vec(&self, b: &ComplexVector) -> Result<ComplexVector> {
        let x = self.solve(&ComplexMatrix::column_vector(b))?;
        Ok(ComplexVector::from_vec(x.as_slice().to_vec()))
    }
}

/// Solves `G X = B` for Hermitian positive definite `G` via Cholesky.
pub fn solve_hermitian_posdef(g: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let x = Cholesky::factor(g)?.solve(b)?;
    if !x.is_finite() {
        return Err(Error::RankDeficient("non-finite solution".into()));
    }
    Ok(x)
}

/// Right pseudo-inverse `S^H (S S^H)^{-1}` of a wide, full-row-rank matrix.
pub fn right_pseudo_inverse(s: &ComplexMatrix) -> Result<ComplexMatrix> {
    if s.rows() > s.cols() {
        return Err(Error::RankDeficient(format!(
            "right pseudo-inverse needs rows <= cols, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    let chol = Cholesky::factor(&s.gram_rows()).map_err(|e| match e {
        Error::NotPositiveDefinite { pivot, .. } => {
            Error::RankDeficient(format!("Gram matrix S S^H is singular at pivot {pivot}"))
        }
        other => other,
    })?;
    // (G^{-1} S)^H = S^H G^{-1} since G is Hermitian.
    Ok(chol.solve(s)?.hermitian())
}

/// `I - p p^H / |p|^2`, the orthogonal projector onto the complement of `span(p)`.
pub fn orth_complement_projector(p: &ComplexVector) -> Result<ComplexMatrix> {
    let norm_sq = p.norm_sq();
    if norm_sq == 0.0 || !norm_sq.is_finite() {
        return Err(Error::ZeroVector("orth_complement_projector"));
    }
    let n = p.len();
    let mut proj = ComplexMatrix::identity(n);
    let scaled: Vec<Complex64> = p.as_slice().iter().map(|z| z / norm_sq).collect();
    proj.sub_outer(&scaled, p.as_slice());
    Ok(proj)
}
