//! Sparse multivariate polynomials over `C`, keyed by multi-index.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

/// Exponent vector `m = (m_1, ..., m_n)` of the monomial `z^m = z_1^m_1 ... z_n^m_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn zero(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut m = Self::zero(nvars);
        m.0[i] = 1;
        m
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|m| = m_1 + ... + m_n`.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All multi-indices in `nvars` variables with total degree exactly `degree`,
    /// in lexicographic order.
    pub fn all_of_degree(nvars: usize, degree: usize) -> Vec<MultiIndex> {
        fn rec(prefix: &mut Vec<u32>, left: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
            if left == 1 {
                prefix.push(remaining);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=remaining).rev() {
                prefix.push(e);
                rec(prefix, left - 1, remaining - e, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            return out;
        }
        rec(&mut Vec::with_capacity(nvars), nvars, degree as u32, &mut out);
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Table of powers `z_i^e` for `e <= max_degree`, shared by all terms of one
/// evaluation.
pub(crate) struct PowerTable {
    rows: Vec<Vec<Complex64>>,
}

impl PowerTable {
    pub(crate) fn new(z: &[Complex64], max_degree: usize) -> Self {
        let rows = z
            .iter()
            .map(|&zi| {
                let mut row = Vec::with_capacity(max_degree + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                row.push(acc);
                for _ in 0..max_degree {
                    acc *= zi;
                    row.push(acc);
                }
                row
            })
            .collect();
        Self { rows }
    }

    fn monomial(&self, m: &MultiIndex) -> Complex64 {
        m.0.iter()
            .enumerate()
            .map(|(i, &e)| self.rows[i][e as usize])
            .product()
    }
}

/// A polynomial `sum_m c_m z^m` with sparse storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(MultiIndex::zero(nvars), c);
        p
    }

    /// The coordinate function `z_i` (0-based).
    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(MultiIndex::unit(nvars, i), Complex64::new(1.0, 0.0));
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &MultiIndex) -> Complex64 {
        self.terms
            .get(m)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Adds `c z^m`, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, m: MultiIndex, c: Complex64) {
        assert_eq!(m.nvars(), self.nvars, "multi-index arity");
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == Complex64::new(0.0, 0.0) {
                    o.remove();
                }
            }
        }
    }

    /// Total degree; `0` for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        let table = PowerTable::new(z, self.degree());
        self.eval_with(&table)
    }

    pub(crate) fn eval_with(&self, table: &PowerTable) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| c * table.monomial(m))
            .sum()
    }

    /// Sum of coefficient moduli; bounds `sup |p|` on the closed unit ball.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    pub fn scale(&self, t: Complex64) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * t);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    /// Product truncated at total degree `bound`. Returns the product and the
    /// `l1` mass of the discarded terms.
    pub fn mul_truncated(&self, other: &Self, bound: usize) -> (Self, f64) {
        let mut out = Self::zero(self.nvars);
        let mut dropped = BTreeMap::<MultiIndex, Complex64>::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.add(mb);
                if m.degree() > bound {
                    *dropped.entry(m).or_insert(Complex64::new(0.0, 0.0)) += ca * cb;
                } else {
                    out.add_term(m, ca * cb);
                }
            }
        }
        (out, dropped.values().map(|c| c.norm()).sum())
    }

    /// Keeps only terms of total degree `<= bound`; returns the dropped mass.
    pub fn truncate(&mut self, bound: usize) -> f64 {
        let mut dropped = 0.0;
        self.terms.retain(|m, c| {
            let keep = m.degree() <= bound;
            if !keep {
                dropped += c.norm();
            }
            keep
        });
        dropped
    }

    /// `d/dz_l`, exact term-wise.
    pub fn derivative(&self, l: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[l];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[l] -= 1;
            out.add_term(dm, c * e as f64);
        }
        out
    }

    /// The terms of total degree exactly `k`.
    pub fn homogeneous_part(&self, k: usize) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn multi_indices_of_degree() {
        let all = MultiIndex::all_of_degree(3, 2);
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|m| m.degree() == 2));
        assert_eq!(MultiIndex::all_of_degree(2, 0), vec![MultiIndex::zero(2)]);
    }

    #[test]
    fn cancellation_removes_term() {
        let mut p = Polynomial::variable(2, 0);
        p.add_term(MultiIndex::unit(2, 0), c(-1.0));
        assert!(p.is_zero());
    }

    #[test]
    fn product_and_truncation() {
        // (1 + z1)(1 + z1) = 1 + 2 z1 + z1^2, truncated at 1 drops z1^2
        let p = Polynomial::constant(2, c(1.0)).add(&Polynomial::variable(2, 0));
        let (full, dropped) = p.mul_truncated(&p, 4);
        assert_eq!(dropped, 0.0);
        assert_eq!(full.coefficient(&MultiIndex::new(vec![2, 0])), c(1.0));
        let (cut, dropped) = p.mul_truncated(&p, 1);
        assert_eq!(cut.degree(), 1);
        assert_eq!(dropped, 1.0);
    }

    #[test]
    fn derivative_power_rule() {
        let mut p = Polynomial::zero(1);
        p.add_term(MultiIndex::new(vec![3]), c(2.0));
        let d = p.derivative(0);
        assert_eq!(d.coefficient(&MultiIndex::new(vec![2])), c(6.0));
        assert!((d.eval(&[c(0.5)]) - c(1.5)).norm() < 1e-15);
    }
}
