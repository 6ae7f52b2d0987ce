#![allow(dead_code)]

use maed::channel::{draw_complex_gaussian, SystemConfig};
use maed::linalg::{ComplexMatrix, ComplexVector};
use rand::Rng;

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| draw_complex_gaussian(rng))
}

pub fn random_vector<R: Rng>(rng: &mut R, len: usize) -> ComplexVector {
    ComplexVector::from_vec((0..len).map(|_| draw_complex_gaussian(rng)).collect())
}

/// A scaled-down system that keeps `T = U` and a short data block.
pub fn small_system() -> SystemConfig {
    SystemConfig {
        antennas: 16,
        users: 4,
        pilot_slots: 4,
        data_slots: 12,
        ..SystemConfig::default()
    }
}

/// Triple-loop product used as an oracle.
pub fn naive_matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows(), b.cols(), |i, j| (0..a.cols()).map(|k| a[(i, k)] * b[(k, j)]).sum())
}
