//! Points of `C^n`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A point of `C^n`. The dimension is the length of the entry list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexVec(Vec<Complex64>);

impl ComplexVec {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// Real coordinates, convenient for tests and CLI input.
    pub fn from_real(entries: &[f64]) -> Self {
        Self(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The `i`-th standard basis vector (0-based) scaled by `t`.
    pub fn basis(dim: usize, i: usize, t: Complex64) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = t;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian product `<self, other> = sum self_i * conj(other_i)`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn scale(&self, t: Complex64) -> Self {
        Self(self.0.iter().map(|c| c * t).collect())
    }

    pub fn scale_real(&self, t: f64) -> Self {
        Self(self.0.iter().map(|c| c * t).collect())
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn to_dvector(&self) -> DVector<Complex64> {
        DVector::from_column_slice(&self.0)
    }

    pub fn from_dvector(v: &DVector<Complex64>) -> Self {
        Self(v.iter().copied().collect())
    }
}

impl From<Vec<Complex64>> for ComplexVec {
    fn from(v: Vec<Complex64>) -> Self {
        Self(v)
    }
}

impl Index<usize> for ComplexVec {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for ComplexVec {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl Add<&ComplexVec> for &ComplexVec {
    type Output = ComplexVec;
    fn add(self, rhs: &ComplexVec) -> ComplexVec {
        ComplexVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&ComplexVec> for &ComplexVec {
    type Output = ComplexVec;
    fn sub(self, rhs: &ComplexVec) -> ComplexVec {
        ComplexVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<Complex64> for &ComplexVec {
    type Output = ComplexVec;
    fn mul(self, rhs: Complex64) -> ComplexVec {
        self.scale(rhs)
    }
}

impl Neg for &ComplexVec {
    type Output = ComplexVec;
    fn neg(self) -> ComplexVec {
        ComplexVec(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for ComplexVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "{}{:+}i", c.re, c.im)?;
            }
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_is_hermitian() {
        let z = ComplexVec::new(vec![Complex64::new(1.0, 2.0), Complex64::new(0.5, -1.0)]);
        let w = ComplexVec::new(vec![Complex64::new(-0.3, 0.1), Complex64::new(2.0, 0.0)]);
        assert_eq!(z.inner(&w), w.inner(&z).conj());
        assert!((z.inner(&z).re - z.norm_sqr()).abs() < 1e-15);
    }

    #[test]
    fn display_mixes_real_and_complex() {
        let z = ComplexVec::new(vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, -0.25)]);
        assert_eq!(z.to_string(), "(0.5, 0-0.25i)");
    }
}
