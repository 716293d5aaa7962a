#![allow(dead_code)]

use std::f64::consts::PI;

use ergolab::linalg::CMatrix;
use ergolab::poly::{MultiIndex, Polynomial};
use ergolab::{Complex64, ComplexVec, HoloMap};
use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn certified(map: HoloMap) -> HoloMap {
    map.certify(64).expect("self-map")
}

pub fn diagonal(entries: &[Complex64]) -> HoloMap {
    certified(HoloMap::linear(CMatrix::from_diagonal(&DVector::from_column_slice(entries))).unwrap())
}

pub fn half() -> HoloMap {
    diagonal(&[c(0.5)])
}

pub fn slice_map() -> HoloMap {
    diagonal(&[c(0.5), c(1.0)])
}

pub fn rotation(angle: f64) -> HoloMap {
    diagonal(&[Complex64::from_polar(1.0, angle)])
}

pub fn third_turn() -> HoloMap {
    rotation(2.0 * PI / 3.0)
}

pub fn power(e: u32) -> HoloMap {
    let mut p = Polynomial::zero(1);
    p.add_term(MultiIndex::new(vec![e]), c(1.0));
    certified(HoloMap::from_components(vec![p], 16).unwrap())
}

/// `(1 + z) / 2`.
pub fn affine_half() -> HoloMap {
    let mut p = Polynomial::constant(1, c(0.5));
    p.add_term(MultiIndex::unit(1, 0), c(0.5));
    certified(HoloMap::from_components(vec![p], 4).unwrap())
}

/// `(z + 1/2) / (1 + z/2)`.
pub fn hyperbolic() -> HoloMap {
    certified(HoloMap::automorphism(ComplexVec::from_real(&[-0.5]), CMatrix::from_element(1, 1, c(-1.0))).unwrap())
}

pub fn identity(n: usize) -> HoloMap {
    diagonal(&vec![c(1.0); n])
}

pub fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Uniform in the unit ball of `C^n`.
pub fn ball_point<R: Rng>(rng: &mut R, n: usize) -> ComplexVec {
    let v = ComplexVec::new((0..n).map(|_| gaussian(rng)).collect());
    let r = rng.random::<f64>().powf(1.0 / (2 * n) as f64);
    v.scale_real(r / v.norm())
}

pub fn ball_point_within<R: Rng>(rng: &mut R, n: usize, radius: f64) -> ComplexVec {
    ball_point(rng, n).scale_real(radius)
}

/// Haar-like random unitary from the QR factor of a Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| gaussian(rng));
    g.qr().q()
}

/// Polynomial map of degree at most `degree` with every component of
/// coefficient mass `mass / sqrt(n)`, so it maps the closed ball into the
/// ball of radius `mass`.
pub fn random_polynomial_map<R: Rng>(rng: &mut R, n: usize, degree: usize, mass: f64, with_constant: bool) -> HoloMap {
    let lowest = if with_constant { 0 } else { 1 };
    let components = (0..n)
        .map(|_| {
            let mut p = Polynomial::zero(n);
            for d in lowest..=degree {
                for m in MultiIndex::all_of_degree(n, d) {
                    if rng.random::<f64>() < 0.6 {
                        p.add_term(m, gaussian(rng));
                    }
                }
            }
            if p.is_zero() {
                p = Polynomial::variable(n, 0);
            }
            let scale = mass / (n as f64).sqrt() / p.l1_norm();
            p.scale(c(scale))
        })
        .collect();
    HoloMap::from_components(components, 16).unwrap()
}

pub fn max_distance(a: &[ComplexVec], b: &[ComplexVec]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.distance(y)).fold(0.0, f64::max)
}
