//! Level-1 loops shared by the dense routines.

use num_complex::Complex64;

/// `y += a * x`.
#[inline]
pub(crate) fn axpy(a: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// `sum_i conj(x_i) y_i`.
#[inline]
pub(crate) fn dotc(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// `sum_i x_i y_i` (no conjugation).
#[inline]
pub(crate) fn dotu(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(n: usize, offset: f64) -> Vec<Complex64> {
        (0..n)
            .map(|i| Complex64::new((i as f64 + offset).sin(), (1.3 * i as f64 - offset).cos()))
            .collect()
    }

    #[test]
    fn kernels_match_scalar_loops() {
        for n in [0, 1, 3, 4, 5, 17, 96] {
            let x = seq(n, 0.3);
            let y = seq(n, 1.1);
            let a = Complex64::new(0.7, -1.9);
            let mut out = y.clone();
            axpy(a, &x, &mut out);
            for i in 0..n {
                assert!((out[i] - (y[i] + a * x[i])).norm() < 1e-14);
            }
            let dc: Complex64 = x.iter().zip(&y).map(|(p, q)| p.conj() * q).sum();
            let du: Complex64 = x.iter().zip(&y).map(|(p, q)| p * q).sum();
            assert!((dotc(&x, &y) - dc).norm() < 1e-12);
            assert!((dotu(&x, &y) - du).norm() < 1e-12);
        }
    }
}
