//! Dynamics of a self-map: interior fixed points, the retraction `rho` onto
//! the limit manifold of the iterates, the linear normal form
//! `V^-1 phi_j V = (first s components) (+) P_{n-s}`, and the Denjoy-Wolff
//! point when there is no interior fixed point.

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{self, SampleGrid};
use crate::holomap::{self, HoloMap};
use crate::linalg::{self, CMatrix};
use crate::vec::ComplexVec;

/// `|phi(p) - p|` accepted as a fixed point.
pub const FIXED_POINT_TOLERANCE: f64 = 1e-10;
/// Fixed points closer than this to the sphere are treated as boundary points.
pub const FIXED_POINT_BOUNDARY_MARGIN: f64 = 1e-9;
const NEWTON_STARTS: usize = 32;
const NEWTON_ITERATIONS: usize = 100;
const NEWTON_HALVINGS: usize = 30;
const NEWTON_PROJECTION_RADIUS: f64 = 1.0 - 1e-6;
const ORBIT_WARMUP: usize = 200;

/// Eigenvalues of `d_0 rho` must lie this close to `{0, 1}`.
pub const EIGENVALUE_CLUSTER_TOLERANCE: f64 = 0.1;
/// Residual threshold for the normal-form and linearity checks.
pub const NORMAL_FORM_TOLERANCE: f64 = 1e-6;
const NORMAL_FORM_SAMPLES: usize = 200;
const NORMAL_FORM_SAMPLE_RADIUS: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetractionConfig {
    /// Largest period tried.
    pub k_max: usize,
    /// Cauchy tolerance between successive doublings.
    pub cauchy_tolerance: f64,
    /// Radius of the compact test grid.
    pub grid_radius: f64,
    pub grid_rings: usize,
    pub grid_directions: usize,
    /// Largest iterate index used by the period search.
    pub search_budget: usize,
    pub seed: u64,
}

impl RetractionConfig {
    /// Every period needs at least two Cauchy steps within the search budget.
    pub fn validate(&self) -> Result<()> {
        if self.k_max == 0 || self.k_max.saturating_mul(4) > self.search_budget {
            return Err(Error::InvalidParameter(format!(
                "period bound {} needs a search budget of at least {}",
                self.k_max,
                self.k_max.saturating_mul(4)
            )));
        }
        if !(self.cauchy_tolerance > 0.0) || !(self.grid_radius > 0.0 && self.grid_radius < 1.0) {
            return Err(Error::InvalidParameter(
                "Cauchy tolerance must be positive and the grid radius in (0, 1)".into(),
            ));
        }
        if self.grid_rings == 0 || self.grid_directions == 0 {
            return Err(Error::InvalidParameter("empty retraction grid".into()));
        }
        Ok(())
    }
}

impl Default for RetractionConfig {
    fn default() -> Self {
        Self {
            k_max: 24,
            cauchy_tolerance: 1e-8,
            grid_radius: 0.5,
            grid_rings: 4,
            grid_directions: 16,
            search_budget: 4096,
            seed: grid::DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RetractionStatus {
    Converged,
    NoPeriodFound,
}

/// `sup` over the compact grid of `|phi_{next}(z) - phi_{iterate}(z)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CauchyStep {
    pub iterate: usize,
    pub next: usize,
    pub deviation: f64,
}

/// Smallest Cauchy deviation seen for a rejected period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodAttempt {
    pub period: usize,
    pub best_deviation: f64,
}

/// Limit data of a converged period search.
#[derive(Debug, Clone)]
pub struct RetractionLimit {
    /// The fitted limit: the iterate `phi_{iterate}`.
    pub rho: HoloMap,
    pub iterate: usize,
    pub d0_rho: CMatrix,
    pub eigenvalues: Vec<Complex64>,
    /// Number of eigenvalues near `0`; `dim M = n - s`.
    pub s: usize,
    /// Columns: kernel basis, then range basis of `d0_rho`.
    pub basis: CMatrix,
    /// The exact idempotent `V P_{n-s} V^-1` closest in structure to `d0_rho`.
    pub linear_rho: CMatrix,
}

#[derive(Debug, Clone)]
pub struct RetractionEstimate {
    pub status: RetractionStatus,
    pub period: Option<usize>,
    pub limit: Option<RetractionLimit>,
    /// Cauchy steps of the accepted period.
    pub convergence_trace: Vec<CauchyStep>,
    pub attempts: Vec<PeriodAttempt>,
    pub config: RetractionConfig,
}

impl RetractionEstimate {
    /// Period and limit of a converged estimate.
    pub fn converged(&self) -> Result<(usize, &RetractionLimit)> {
        match (self.status, self.period, &self.limit) {
            (RetractionStatus::Converged, Some(k), Some(limit)) => Ok((k, limit)),
            _ => Err(Error::NoPeriodFound),
        }
    }

    /// The linear retraction `rho(z) = linear_rho z` as a map.
    pub fn linear_map(&self) -> Result<HoloMap> {
        let (_, limit) = self.converged()?;
        HoloMap::linear(limit.linear_rho.clone())
    }

    pub fn s(&self) -> Option<usize> {
        self.limit.as_ref().map(|l| l.s)
    }
}

fn residual(map: &HoloMap, z: &ComplexVec) -> Result<f64> {
    Ok(map.evaluate(z)?.distance(z))
}

/// Damped Newton on `phi(z) - z` with least-squares steps (the Jacobian of
/// `phi - id` is singular for maps fixing a slice).
fn newton_fixed_point(map: &HoloMap, start: &ComplexVec) -> Option<ComplexVec> {
    let n = map.dim();
    let mut z = start.clone();
    let mut f_norm = residual(map, &z).ok()?;
    for _ in 0..NEWTON_ITERATIONS {
        if f_norm < 1e-14 {
            break;
        }
        let f = &map.evaluate(&z).ok()? - &z;
        let jac = map.jacobian(&z).ok()? - linalg::identity(n);
        let rhs: DVector<Complex64> = -f.to_dvector();
        let step = ComplexVec::from_dvector(&linalg::solve_least_squares(&jac, &rhs).ok()?);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..NEWTON_HALVINGS {
            let mut cand = &z + &step.scale_real(t);
            let norm = cand.norm();
            if norm >= NEWTON_PROJECTION_RADIUS {
                cand = cand.scale_real(NEWTON_PROJECTION_RADIUS / norm);
            }
            if let Ok(r) = residual(map, &cand) {
                if r < f_norm {
                    z = cand;
                    f_norm = r;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (f_norm < FIXED_POINT_TOLERANCE && z.norm() < 1.0 - FIXED_POINT_BOUNDARY_MARGIN).then_some(z)
}

/// Searches for `p` with `|phi(p) - p| < 1e-10` and `|p| < 1 - 1e-9`.
///
/// Starts from the orbit limit of `0` and then 32 quasi-random interior
/// points. `None` means every attempt left the ball or stagnated near the
/// boundary.
pub fn find_interior_fixed_point(map: &HoloMap) -> Result<Option<ComplexVec>> {
    map.require_certified()?;
    let n = map.dim();
    let mut starts = Vec::with_capacity(NEWTON_STARTS + 1);
    let origin = ComplexVec::zeros(n);
    let mut w = origin.clone();
    for _ in 0..ORBIT_WARMUP {
        match map.evaluate(&w) {
            Ok(next) if next.norm() < 1.0 - geometry_margin() => w = next,
            _ => break,
        }
    }
    starts.push(origin);
    starts.push(w);
    starts.extend(grid::interior_samples(n, NEWTON_STARTS, 0.9, grid::DEFAULT_SEED));
    for start in &starts {
        if let Some(p) = newton_fixed_point(map, start) {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

fn geometry_margin() -> f64 {
    crate::geometry::BOUNDARY_MARGIN
}

/// `psi = phi_p o phi o phi_p`, which fixes the origin. For `p = 0` the map
/// itself is returned.
pub fn conjugate_to_origin(map: &HoloMap, p: &ComplexVec) -> Result<HoloMap> {
    if p.dim() != map.dim() {
        return Err(Error::DimensionMismatch {
            expected: map.dim(),
            found: p.dim(),
        });
    }
    crate::geometry::check_interior(p)?;
    let r = residual(map, p)?;
    if r >= 1e-9 {
        return Err(Error::NotFixed { residual: r });
    }
    if p.norm_sqr() == 0.0 {
        return Ok(map.clone());
    }
    let mut aut = HoloMap::involution(p.clone())?;
    if map.is_certified() {
        aut = aut.certify(16)?;
    }
    let inner = holomap::compose(map, &aut)?.map;
    let psi = holomap::compose(&aut, &inner)?.map;
    let at_origin = psi.evaluate(&ComplexVec::zeros(map.dim()))?.norm();
    if at_origin >= 1e-8 {
        return Err(Error::NotFixed {
            residual: at_origin,
        });
    }
    Ok(psi)
}

fn require_origin_fixed(map: &HoloMap, tol: f64) -> Result<()> {
    let at_origin = map.evaluate(&ComplexVec::zeros(map.dim()))?.norm();
    if at_origin >= tol {
        return Err(Error::OriginNotFixed(at_origin));
    }
    Ok(())
}

/// Orbits of the grid points, `orbits[p][i] = phi_{i+1}(z_p)`.
fn grid_orbits(map: &HoloMap, points: &[ComplexVec], len: usize) -> Result<Vec<Vec<ComplexVec>>> {
    points
        .par_iter()
        .map(|z| map.orbit(z, len))
        .collect::<Result<Vec<_>>>()
}

fn sup_deviation(orbits: &[Vec<ComplexVec>], a: usize, b: usize) -> f64 {
    orbits
        .iter()
        .map(|o| o[a - 1].distance(&o[b - 1]))
        .fold(0.0, f64::max)
}

/// Searches a period `k <= k_max` such that `phi_{kj}` is Cauchy on a compact
/// grid along doublings of `j`, and fits the limit.
pub fn estimate_retraction(map: &HoloMap, config: &RetractionConfig) -> Result<RetractionEstimate> {
    map.require_certified()?;
    config.validate()?;
    require_origin_fixed(map, 1e-10)?;
    let n = map.dim();
    let grid = SampleGrid::compact(
        n,
        config.grid_radius,
        config.grid_rings,
        config.grid_directions,
        config.seed,
    )?;
    let points = grid.points();
    let orbits = grid_orbits(map, &points, config.search_budget)?;

    let mut attempts = Vec::new();
    for k in 1..=config.k_max {
        let mut indices = vec![k];
        while indices.last().unwrap() * 2 <= config.search_budget {
            indices.push(indices.last().unwrap() * 2);
        }
        let steps: Vec<CauchyStep> = indices
            .windows(2)
            .map(|w| CauchyStep {
                iterate: w[0],
                next: w[1],
                deviation: sup_deviation(&orbits, w[0], w[1]),
            })
            .collect();
        let hit = steps.windows(2).position(|w| {
            w[0].deviation < config.cauchy_tolerance && w[1].deviation < config.cauchy_tolerance
        });
        match hit {
            Some(m) => {
                let trace: Vec<CauchyStep> = steps[..=m + 1].to_vec();
                let iterate = trace.last().unwrap().next;
                let limit = fit_limit(map, iterate)?;
                return Ok(RetractionEstimate {
                    status: RetractionStatus::Converged,
                    period: Some(k),
                    limit: Some(limit),
                    convergence_trace: trace,
                    attempts,
                    config: *config,
                });
            }
            None => attempts.push(PeriodAttempt {
                period: k,
                best_deviation: steps.iter().map(|s| s.deviation).fold(f64::INFINITY, f64::min),
            }),
        }
    }
    Ok(RetractionEstimate {
        status: RetractionStatus::NoPeriodFound,
        period: None,
        limit: None,
        convergence_trace: Vec::new(),
        attempts,
        config: *config,
    })
}

fn fit_limit(map: &HoloMap, iterate: usize) -> Result<RetractionLimit> {
    let n = map.dim();
    let rho = holomap::iterate_pointwise(map, iterate)?;
    let d0_rho = rho.jacobian(&ComplexVec::zeros(n))?;
    let eigenvalues = linalg::eigenvalues(&d0_rho);
    let mut s = 0;
    for ev in &eigenvalues {
        let to_zero = ev.norm();
        let to_one = (ev - Complex64::new(1.0, 0.0)).norm();
        if to_zero <= EIGENVALUE_CLUSTER_TOLERANCE {
            s += 1;
        } else if to_one > EIGENVALUE_CLUSTER_TOLERANCE {
            return Err(Error::NotIdempotent {
                eigenvalue: format!("{ev}"),
            });
        }
    }
    let basis = if s == 0 || s == n {
        linalg::identity(n)
    } else {
        linalg::idempotent_basis(&d0_rho, s)?
    };
    let linear_rho = if s == 0 {
        linalg::identity(n)
    } else if s == n {
        CMatrix::zeros(n, n)
    } else {
        &basis * linalg::tail_projection(n, s) * linalg::inverse(&basis)?
    };
    Ok(RetractionLimit {
        rho,
        iterate,
        d0_rho,
        eigenvalues,
        s,
        basis,
        linear_rho,
    })
}

/// Diagnostics of the normal form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalFormResiduals {
    /// `|V^-1 d0(rho) V - P_{n-s}|` (Frobenius).
    pub derivative_residual: f64,
    /// `sup |V^-1 rho(V z) - P_{n-s} z|` over samples of `V^-1 B_n`.
    pub retraction_residual: f64,
    /// `sup` over samples and traced iterates of the deviation of the last
    /// `n - s` components of `V^-1 phi_{kj}(V z)` from `z`.
    pub fixed_block_residual: f64,
    pub samples: usize,
}

/// One row of the convergence table of `V^-1 phi_{kj} V` toward `P_{n-s}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BlockStep {
    pub iterate: usize,
    /// `sup |first s components of V^-1 phi_{kj}(V z)|` on the radius-0.5 grid.
    pub contracting: f64,
    /// `sup |V^-1 phi_{kj}(V z) - P_{n-s} z|` on the same grid.
    pub to_projection: f64,
}

#[derive(Debug, Clone)]
pub struct NormalForm {
    pub v: CMatrix,
    pub s: usize,
    pub projection: CMatrix,
    pub residuals: NormalFormResiduals,
    pub block_trace: Vec<BlockStep>,
}

fn apply(m: &CMatrix, z: &ComplexVec) -> ComplexVec {
    ComplexVec::from_dvector(&(m * z.to_dvector()))
}

fn track_worst(worst: &mut (f64, ComplexVec), value: f64, z: &ComplexVec) {
    if value > worst.0 {
        *worst = (value, z.clone());
    }
}

/// Builds `V` from kernel and range bases of `d0(rho)` and verifies the
/// conjugated structure numerically on 200 samples of `V^-1 B_n`.
pub fn normal_form(est: &RetractionEstimate, map: &HoloMap) -> Result<NormalForm> {
    let (k, limit) = est.converged()?;
    require_origin_fixed(map, 1e-10)?;
    let n = map.dim();
    let s = limit.s;
    let v = limit.basis.clone();
    let v_inv = linalg::inverse(&v)?;
    let projection = linalg::tail_projection(n, s);
    let derivative_residual = linalg::frobenius_norm(&(&v_inv * &limit.d0_rho * &v - &projection));

    let samples = grid::interior_samples(n, NORMAL_FORM_SAMPLES, NORMAL_FORM_SAMPLE_RADIUS, est.config.seed);
    let traced: Vec<usize> = std::iter::once(k)
        .chain(est.convergence_trace.iter().map(|c| c.next))
        .collect();
    let horizon = *traced.iter().max().unwrap();

    let mut retraction_residual = (0.0, ComplexVec::zeros(n));
    let mut fixed_block_residual = (0.0, ComplexVec::zeros(n));
    let mut base = (0.0, ComplexVec::zeros(n));
    let phi_k = holomap::iterate_pointwise(map, k)?;
    for w in &samples {
        let z = apply(&v_inv, w);
        let rho_w = limit.rho.evaluate(w)?;
        let r2 = apply(&v_inv, &rho_w).distance(&apply(&projection, &z));
        track_worst(&mut retraction_residual, r2, &z);

        match s {
            0 => track_worst(&mut base, phi_k.evaluate(w)?.distance(w), &z),
            _ if s == n => track_worst(&mut base, rho_w.norm(), &z),
            _ => {}
        }

        let orbit = map.orbit(w, horizon)?;
        for &j in &traced {
            let image = apply(&v_inv, &orbit[j - 1]);
            let r3 = (s..n).map(|i| (image[i] - z[i]).norm()).fold(0.0, f64::max);
            track_worst(&mut fixed_block_residual, r3, &z);
        }
    }
    if base.0 > NORMAL_FORM_TOLERANCE {
        return Err(Error::NormalFormMismatch {
            step: if s == 0 { "identity case" } else { "zero retraction case" },
            residual: base.0,
            worst: base.1,
        });
    }
    if derivative_residual > NORMAL_FORM_TOLERANCE {
        return Err(Error::NormalFormMismatch {
            step: "step 1",
            residual: derivative_residual,
            worst: ComplexVec::zeros(n),
        });
    }
    if retraction_residual.0 > NORMAL_FORM_TOLERANCE {
        return Err(Error::NormalFormMismatch {
            step: "step 2",
            residual: retraction_residual.0,
            worst: retraction_residual.1,
        });
    }
    if fixed_block_residual.0 > NORMAL_FORM_TOLERANCE {
        return Err(Error::NormalFormMismatch {
            step: "step 3",
            residual: fixed_block_residual.0,
            worst: fixed_block_residual.1,
        });
    }

    let grid = SampleGrid::compact(n, 0.5, 4, 16, est.config.seed)?;
    let grid_points = grid.points();
    let orbits = grid_orbits(map, &grid_points, horizon)?;
    let block_trace = traced
        .iter()
        .map(|&j| {
            let mut contracting: f64 = 0.0;
            let mut to_projection: f64 = 0.0;
            for (w, orbit) in grid_points.iter().zip(&orbits) {
                let z = apply(&v_inv, w);
                let image = apply(&v_inv, &orbit[j - 1]);
                let head = (0..s).map(|i| image[i].norm_sqr()).sum::<f64>().sqrt();
                contracting = contracting.max(head);
                to_projection = to_projection.max(image.distance(&apply(&projection, &z)));
            }
            BlockStep {
                iterate: j,
                contracting,
                to_projection,
            }
        })
        .collect();

    Ok(NormalForm {
        v,
        s,
        projection,
        residuals: NormalFormResiduals {
            derivative_residual,
            retraction_residual: retraction_residual.0,
            fixed_block_residual: fixed_block_residual.0,
            samples: samples.len(),
        },
        block_trace,
    })
}

/// `max |rho(z) - d0(rho) z|` over 200 interior samples.
pub fn verify_linear_retraction(est: &RetractionEstimate) -> Result<f64> {
    let (_, limit) = est.converged()?;
    let n = limit.rho.dim();
    let samples = grid::interior_samples(n, NORMAL_FORM_SAMPLES, NORMAL_FORM_SAMPLE_RADIUS, est.config.seed);
    let mut worst: f64 = 0.0;
    for z in &samples {
        let lhs = limit.rho.evaluate(z)?;
        worst = worst.max(lhs.distance(&apply(&limit.d0_rho, z)));
    }
    Ok(worst)
}

/// Sampled checks of the retraction identities for the linear model of `rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetractionResiduals {
    /// `sup |rho_fitted(z) - d0(rho) z|`.
    pub linear: f64,
    /// `sup |rho(rho(z)) - rho(z)|`.
    pub idempotency: f64,
    /// `sup |rho(phi(z)) - phi(rho(z))|`.
    pub commutation: f64,
    /// `sup |rho(phi_k(z)) - rho(z)|`.
    pub absorption: f64,
    pub samples: usize,
}

pub fn retraction_residuals(est: &RetractionEstimate, map: &HoloMap) -> Result<RetractionResiduals> {
    let (k, limit) = est.converged()?;
    let n = map.dim();
    let rho = &limit.linear_rho;
    let samples = grid::interior_samples(n, NORMAL_FORM_SAMPLES, NORMAL_FORM_SAMPLE_RADIUS, est.config.seed);
    let phi_k = holomap::iterate_pointwise(map, k)?;
    let mut out = RetractionResiduals {
        linear: verify_linear_retraction(est)?,
        idempotency: 0.0,
        commutation: 0.0,
        absorption: 0.0,
        samples: samples.len(),
    };
    for z in &samples {
        let rz = apply(rho, z);
        out.idempotency = out.idempotency.max(apply(rho, &rz).distance(&rz));
        out.commutation = out
            .commutation
            .max(apply(rho, &map.evaluate(z)?).distance(&map.evaluate(&rz)?));
        out.absorption = out.absorption.max(apply(rho, &phi_k.evaluate(z)?).distance(&rz));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenjoyWolff {
    /// Common limit of the seeds, normalised to the sphere.
    pub point: ComplexVec,
    /// Largest distance between normalised seed limits.
    pub scatter: f64,
    /// `1 - min |limit|` over seeds.
    pub boundary_gap: f64,
    pub max_steps: usize,
}

pub const DENJOY_WOLFF_STEP_TOLERANCE: f64 = 1e-9;
pub const DENJOY_WOLFF_MAX_STEPS: usize = 10_000;
pub const DENJOY_WOLFF_SCATTER_TOLERANCE: f64 = 1e-6;

/// Iterates a handful of seeds toward the boundary attracting point.
pub fn denjoy_wolff_estimate(map: &HoloMap) -> Result<DenjoyWolff> {
    map.require_certified()?;
    let n = map.dim();
    let mut seeds = vec![ComplexVec::zeros(n)];
    for l in 0..n {
        seeds.push(ComplexVec::basis(n, l, Complex64::new(0.5, 0.0)));
        seeds.push(ComplexVec::basis(n, l, Complex64::new(0.0, -0.4)));
    }
    let mut limits = Vec::with_capacity(seeds.len());
    let mut max_steps = 0;
    for seed in seeds {
        let mut z = seed;
        let mut steps = 0;
        while steps < DENJOY_WOLFF_MAX_STEPS {
            let next = match map.evaluate(&z) {
                Ok(w) if w.is_finite() => w,
                _ => break,
            };
            steps += 1;
            let moved = next.distance(&z);
            z = next;
            if moved < DENJOY_WOLFF_STEP_TOLERANCE {
                break;
            }
        }
        max_steps = max_steps.max(steps);
        limits.push(z);
    }
    let boundary_gap = limits.iter().map(|z| 1.0 - z.norm()).fold(f64::NEG_INFINITY, f64::max);
    let normalized: Vec<ComplexVec> = limits
        .iter()
        .map(|z| {
            let norm = z.norm();
            if norm > 0.0 {
                z.scale_real(1.0 / norm)
            } else {
                z.clone()
            }
        })
        .collect();
    let mut scatter: f64 = 0.0;
    for a in &normalized {
        for b in &normalized {
            scatter = scatter.max(a.distance(b));
        }
    }
    if scatter >= DENJOY_WOLFF_SCATTER_TOLERANCE {
        return Err(Error::NoCommonLimit { scatter });
    }
    Ok(DenjoyWolff {
        point: normalized[0].clone(),
        scatter,
        boundary_gap,
        max_steps,
    })
}
