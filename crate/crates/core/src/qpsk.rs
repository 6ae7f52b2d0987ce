//! Gray-mapped QPSK: bit pair `(b_re, b_im)` maps to
//! `sqrt(Es/2) * ((1 - 2 b_re) + i (1 - 2 b_im))`.

use num_complex::Complex64;

use crate::linalg::ComplexMatrix;

/// Row-major boolean matrix. For a `U x D` symbol block the bit matrix is
/// `U x 2D`, with the real-part bit of symbol `d` in column `2d` and the
/// imaginary-part bit in column `2d + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            bits: vec![false; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        self.bits[r * self.cols + c] = b;
    }

    pub fn row(&self, r: usize) -> &[bool] {
        &self.bits[r * self.cols..(r + 1) * self.cols]
    }

    /// Bit errors per row against `other`.
    pub fn row_errors(&self, other: &BitMatrix) -> Vec<u64> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "bit matrix shape mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(other.row(r))
                    .filter(|(a, b)| a != b)
                    .count() as u64
            })
            .collect()
    }

    pub fn count_errors(&self, other: &BitMatrix) -> u64 {
        self.row_errors(other).iter().sum()
    }
}

/// Amplitude of each QPSK quadrature component.
#[inline]
pub fn qpsk_amplitude(es: f64) -> f64 {
    (es / 2.0).sqrt()
}

#[inline]
pub fn map_symbol(b_re: bool, b_im: bool, es: f64) -> Complex64 {
    let a = qpsk_amplitude(es);
    Complex64::new(if b_re { -a } else { a }, if b_im { -a } else { a })
}

/// Maps a `U x 2D` bit matrix to a `U x D` symbol matrix.
pub fn modulate(bits: &BitMatrix, es: f64) -> ComplexMatrix {
    assert!(bits.cols().is_multiple_of(2), "bit matrix needs an even column count");
    ComplexMatrix::from_fn(bits.rows(), bits.cols() / 2, |u, d| {
        map_symbol(bits.get(u, 2 * d), bits.get(u, 2 * d + 1), es)
    })
}

/// Nearest-QPSK-point decision per entry; an exact zero component decides `+`.
pub fn hard_decision(soft: &ComplexMatrix, es: f64) -> (ComplexMatrix, BitMatrix) {
    let mut bits = BitMatrix::zeros(soft.rows(), 2 * soft.cols());
    let hard = ComplexMatrix::from_fn(soft.rows(), soft.cols(), |u, d| {
        let z = soft[(u, d)];
        let b_re = z.re < 0.0;
        let b_im = z.im < 0.0;
        bits.set(u, 2 * d, b_re);
        bits.set(u, 2 * d + 1, b_im);
        map_symbol(b_re, b_im, es)
    });
    (hard, bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gray_map_points() {
        let a = qpsk_amplitude(2.0);
        assert_eq!(map_symbol(false, false, 2.0), c(a, a));
        assert_eq!(map_symbol(true, false, 2.0), c(-a, a));
        assert_eq!(map_symbol(false, true, 2.0), c(a, -a));
        assert_eq!(map_symbol(true, true, 2.0), c(-a, -a));
    }

    #[test]
    fn decision_examples() {
        let soft = ComplexMatrix::from_rows(&[vec![c(0.3, -0.2), c(0.0, 0.0)]]);
        let (hard, bits) = hard_decision(&soft, 2.0);
        assert_eq!(hard[(0, 0)], c(1.0, -1.0));
        assert_eq!(bits.row(0)[..2], [false, true]);
        assert_eq!(hard[(0, 1)], c(1.0, 1.0));
        assert_eq!(bits.row(0)[2..], [false, false]);
    }

    proptest! {
        #[test]
        fn decisions_invert_the_map(raw in proptest::collection::vec(any::<bool>(), 2..64), es in 0.1f64..10.0) {
            let n = raw.len() / 2 * 2;
            let mut bits = BitMatrix::zeros(1, n);
            for (i, &b) in raw[..n].iter().enumerate() {
                bits.set(0, i, b);
            }
            let symbols = modulate(&bits, es);
            for z in symbols.as_slice() {
                prop_assert!((z.norm_sqr() - es).abs() < 1e-12 * es);
            }
            let (hard, back) = hard_decision(&symbols, es);
            prop_assert_eq!(&back, &bits);
            prop_assert_eq!(hard, symbols);
        }
    }
}
