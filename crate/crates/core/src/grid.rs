//! Sample grids standing in for `sup` over the open ball.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec::ComplexVec;

pub const DEFAULT_SEED: u64 = 0x005e_ed0f_ba11;

/// Radii times unit directions. All points are interior.
#[derive(Debug, Clone)]
pub struct SampleGrid {
    radii: Vec<f64>,
    directions: Vec<ComplexVec>,
}

/// Parameters of the boundary-ladder grid used by the ergodicity checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    /// Near-boundary radii `1 - 10^-m` for `m = 1..=depth`.
    pub depth: u32,
    pub directions: usize,
    pub seed: u64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            depth: 8,
            directions: 64,
            seed: DEFAULT_SEED,
        }
    }
}

impl GridConfig {
    pub fn build(&self, dim: usize) -> Result<SampleGrid> {
        SampleGrid::boundary_ladder(dim, self.depth, self.directions, self.seed)
    }
}

impl SampleGrid {
    pub fn new(radii: Vec<f64>, directions: Vec<ComplexVec>) -> Result<Self> {
        if radii.is_empty() || directions.is_empty() {
            return Err(Error::InvalidParameter("empty sample grid".into()));
        }
        if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(Error::InvalidParameter("grid radii must lie in (0, 1)".into()));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "grid radii must be strictly increasing".into(),
            ));
        }
        let dim = directions[0].dim();
        for d in &directions {
            if d.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: d.dim(),
                });
            }
            if (d.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::NotOnSphere { norm: d.norm() });
            }
        }
        Ok(Self { radii, directions })
    }

    /// Interior radii `0.25, 0.5, 0.75` followed by `1 - 10^-m`, `m = 1..=depth`.
    pub fn boundary_ladder(dim: usize, depth: u32, directions: usize, seed: u64) -> Result<Self> {
        let mut radii = vec![0.25, 0.5, 0.75];
        radii.extend((1..=depth).map(|m| 1.0 - 10f64.powi(-(m as i32))));
        Self::new(radii, unit_directions(dim, directions, seed))
    }

    /// `rings` equally spaced radii up to `radius`.
    pub fn compact(dim: usize, radius: f64, rings: usize, directions: usize, seed: u64) -> Result<Self> {
        let radii = (1..=rings)
            .map(|i| radius * i as f64 / rings as f64)
            .collect();
        Self::new(radii, unit_directions(dim, directions, seed))
    }

    pub fn dim(&self) -> usize {
        self.directions[0].dim()
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn directions(&self) -> &[ComplexVec] {
        &self.directions
    }

    pub fn max_radius(&self) -> f64 {
        *self.radii.last().expect("non-empty grid")
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points ordered radius-major.
    pub fn points(&self) -> Vec<ComplexVec> {
        self.radii
            .iter()
            .flat_map(|&r| self.directions.iter().map(move |d| d.scale_real(r)))
            .collect()
    }
}

/// Deterministic unit directions in `C^dim`.
///
/// In one dimension these are equally spaced angles starting at `1`. In
/// higher dimensions the coordinate axes (with phases `1, i, -1, -i`) and the
/// normalised diagonal come first, then Gaussian directions from a seeded
/// generator.
pub fn unit_directions(dim: usize, count: usize, seed: u64) -> Vec<ComplexVec> {
    if dim == 1 {
        return (0..count)
            .map(|t| {
                let theta = 2.0 * PI * t as f64 / count as f64;
                ComplexVec::new(vec![Complex64::from_polar(1.0, theta)])
            })
            .collect();
    }
    let mut out = Vec::with_capacity(count);
    let phases = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    for phase in phases {
        for l in 0..dim {
            out.push(ComplexVec::basis(dim, l, phase));
        }
    }
    out.push(ComplexVec::from_real(&vec![1.0 / (dim as f64).sqrt(); dim]));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
            .collect();
        let v = ComplexVec::new(v);
        let norm = v.norm();
        if norm > 1e-6 {
            out.push(v.scale_real(1.0 / norm));
        }
    }
    out.truncate(count);
    out
}

/// Deterministic quasi-random interior points with radii at most `max_radius`
/// (van der Corput radii, seeded directions).
pub fn interior_samples(dim: usize, count: usize, max_radius: f64, seed: u64) -> Vec<ComplexVec> {
    let dirs = unit_directions(dim, count.max(1), seed);
    (0..count)
        .map(|i| {
            let r = max_radius * van_der_corput(i as u64 + 1);
            dirs[i].scale_real(r)
        })
        .collect()
}

fn van_der_corput(mut i: u64) -> f64 {
    let mut out = 0.0;
    let mut base = 0.5;
    while i > 0 {
        if i & 1 == 1 {
            out += base;
        }
        base *= 0.5;
        i >>= 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_reaches_near_boundary() {
        let grid = SampleGrid::boundary_ladder(2, 8, 32, DEFAULT_SEED).unwrap();
        assert!((grid.max_radius() - (1.0 - 1e-8)).abs() < 1e-15);
        assert!(grid.points().iter().all(|p| p.norm() < 1.0));
        assert_eq!(grid.len(), 11 * 32);
    }

    #[test]
    fn directions_are_unit_and_deterministic() {
        let a = unit_directions(3, 40, 7);
        let b = unit_directions(3, 40, 7);
        assert_eq!(a, b);
        assert!(a.iter().all(|d| (d.norm() - 1.0).abs() < 1e-12));
        assert_ne!(a, unit_directions(3, 40, 8));
    }

    #[test]
    fn rejects_unsorted_radii() {
        let dirs = unit_directions(1, 4, 0);
        assert!(SampleGrid::new(vec![0.5, 0.25], dirs.clone()).is_err());
        assert!(SampleGrid::new(vec![0.5, 1.0], dirs).is_err());
    }

    #[test]
    fn interior_samples_respect_radius() {
        let pts = interior_samples(2, 200, 0.9, 1);
        assert_eq!(pts.len(), 200);
        assert!(pts.iter().all(|p| p.norm() <= 0.9 + 1e-15));
    }
}
