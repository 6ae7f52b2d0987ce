//! Power iteration for the dominant eigenvector of Hermitian PSD matrices.

use super::{ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};

pub const DEFAULT_POWER_TOL: f64 = 1e-6;
pub const DEFAULT_POWER_MAX_ITER: usize = 500;

/// Unit-norm dominant eigenvector of a Hermitian PSD matrix `m`.
///
/// Iterates `v <- M v / |M v|` until `|M v - lambda v| <= tol * lambda` with
/// `lambda = v^H M v`. Without a seed, starts from the column of `m` with the
/// largest norm, so the result is reproducible. The global phase of the
/// returned vector is arbitrary.
///
/// On hitting `max_iter`, returns [`Error::NotConverged`] carrying the iterate
/// with the smallest relative residual.
pub fn dominant_eigenvector(
    m: &ComplexMatrix,
    tol: f64,
    max_iter: usize,
    seed: Option<&ComplexVector>,
) -> Result<ComplexVector> {
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::DimensionMismatch {
            op: "dominant_eigenvector",
            lhs: m.shape(),
            rhs: m.shape(),
        });
    }
    let n = m.rows();
    let mut v = match seed {
        Some(s) if s.len() != n => {
            return Err(Error::DimensionMismatch {
                op: "dominant_eigenvector seed",
                lhs: m.shape(),
                rhs: (s.len(), 1),
            })
        }
        Some(s) => s.normalized()?,
        None => largest_column(m),
    };

    let mut best = (f64::INFINITY, v.clone());
    for _ in 0..max_iter {
        let w = m.mul_vec(&v)?;
        let lambda = v.dot(&w).re;
        let residual = w
            .as_slice()
            .iter()
            .zip(v.as_slice())
            .map(|(wi, vi)| (wi - vi * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual <= tol * lambda.max(0.0) {
            return Ok(v);
        }
        let rel = if lambda > 0.0 { residual / lambda } else { f64::INFINITY };
        if rel < best.0 {
            best = (rel, v.clone());
        }
        match w.normalized() {
            Ok(next) => v = next,
            // M v = 0 with v != 0 only happens for M = 0 restricted to the
            // iterate; any unit vector then meets the residual contract.
            Err(_) => return Ok(v),
        }
    }
    Err(Error::NotConverged {
        iterations: max_iter,
        residual: best.0,
        best: best.1,
    })
}

/// Single power step `M v / |M v|`.
pub fn power_step(m: &ComplexMatrix, v: &ComplexVector) -> Result<ComplexVector> {
    if v.norm_sq() == 0.0 {
        return Err(Error::ZeroVector("power_step input"));
    }
    m.mul_vec(v)?
        .normalized()
        .map_err(|_| Error::ZeroVector("power_step: M v = 0"))
}

fn largest_column(m: &ComplexMatrix) -> ComplexVector {
    let n = m.rows();
    let mut norms = vec![0.0; m.cols()];
    for r in 0..n {
        for (acc, z) in norms.iter_mut().zip(m.row(r)) {
            *acc += z.norm_sqr();
        }
    }
    let (idx, &best) = norms
        .iter()
        .enumerate()
        .fold((0, &0.0), |acc, (i, x)| if *x > *acc.1 { (i, x) } else { acc });
    if best == 0.0 {
        return ComplexVector::basis(n, 0);
    }
    m.column(idx).scale(1.0 / best.sqrt())
}
