use std::ops::Index;

use num_complex::Complex64;

use super::kernel::dotc;
use crate::error::{Error, Result};

/// Dense complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex64>,
}

impl ComplexVector {
    /// Panics on empty input; every vector in this crate has positive length.
    pub fn from_vec(data: Vec<Complex64>) -> Self {
        assert!(!data.is_empty(), "ComplexVector must have positive length");
        Self { data }
    }

    pub fn zeros(len: usize) -> Self {
        Self::from_vec(vec![Complex64::new(0.0, 0.0); len])
    }

    /// Standard basis vector `e_index`.
    pub fn basis(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.data[index] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::from_vec(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `self^H other`.
    pub fn dot(&self, other: &ComplexVector) -> Complex64 {
        assert_eq!(self.len(), other.len(), "dot length mismatch");
        dotc(&self.data, &other.data)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_vec(self.data.iter().map(|z| z * s).collect())
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector("normalize"));
        }
        Ok(self.scale(1.0 / n))
    }

    /// `|<self, other>| / (|self| |other|)`: 1 for collinear vectors, phase-blind.
    pub fn alignment(&self, other: &ComplexVector) -> f64 {
        self.dot(other).norm() / (self.norm() * other.norm())
    }

    pub fn max_diff(&self, other: &ComplexVector) -> f64 {
        assert_eq!(self.len(), other.len());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alignment_ignores_phase() {
        let a = ComplexVector::from_real(&[1.0, 2.0, -1.0]);
        let b = ComplexVector::from_vec(a.as_slice().iter().map(|z| z * Complex64::new(0.0, 3.0)).collect());
        assert!((a.alignment(&b) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn normalizing_zero_fails() {
        assert!(ComplexVector::zeros(3).normalized().is_err());
    }

    #[test]
    #[should_panic]
    fn empty_vector_rejected() {
        ComplexVector::from_vec(Vec::new());
    }
}
