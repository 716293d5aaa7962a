//! Mean-ergodicity of the composition operator `C_phi f = f o phi` on
//! `H^inf(B_n)`: sup-norm estimation, the decay test for
//! `|phi_{kj} - rho|_inf`, Cesaro means, the limit projection and the
//! classifier.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{self, DenjoyWolff, RetractionEstimate, RetractionStatus};
use crate::error::{Error, Result};
use crate::geometry;
use crate::grid::{self, GridConfig, SampleGrid};
use crate::holomap::{self, HoloMap, MapKind};
use crate::linalg::CMatrix;
use crate::poly::MultiIndex;
use crate::vec::ComplexVec;

const REFINEMENT_STEPS: usize = 20;
const REFINEMENT_INITIAL_STEP: f64 = 0.05;

/// Grid maximum of `g` followed by a coordinate-wise local search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupEstimate {
    pub value: f64,
    pub argmax: ComplexVec,
    /// Maximum over the grid points alone.
    pub grid_value: f64,
}

fn evaluation_error(z: &ComplexVec, e: Error) -> Error {
    match e {
        Error::Evaluation { .. } => e,
        other => Error::Evaluation {
            point: z.clone(),
            reason: other.to_string(),
        },
    }
}

/// `max |g|` over the grid, refined by 20 shrinking coordinate steps around
/// the argmax. Refinement never leaves the ball of the largest grid radius.
pub fn sup_norm_estimate<G>(g: G, grid: &SampleGrid) -> Result<SupEstimate>
where
    G: Fn(&ComplexVec) -> Result<f64> + Sync,
{
    let points = grid.points();
    let values = points
        .par_iter()
        .map(|z| g(z).map_err(|e| evaluation_error(z, e)))
        .collect::<Result<Vec<f64>>>()?;
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::Evaluation {
                point: points[i].clone(),
                reason: format!("non-finite value {v}"),
            });
        }
        if *v > values[best] {
            best = i;
        }
    }
    let grid_value = values[best];
    let mut value = grid_value;
    let mut argmax = points[best].clone();
    let r_max = grid.max_radius();
    let n = grid.dim();
    let units = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ];
    let mut step = REFINEMENT_INITIAL_STEP;
    for _ in 0..REFINEMENT_STEPS {
        let mut improved = false;
        for l in 0..n {
            for u in units {
                let mut cand = &argmax + &ComplexVec::basis(n, l, u * step);
                let norm = cand.norm();
                if norm > r_max {
                    cand = cand.scale_real(r_max / norm);
                }
                let v = g(&cand).map_err(|e| evaluation_error(&cand, e))?;
                if v.is_finite() && v > value {
                    value = v;
                    argmax = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(SupEstimate {
        value,
        argmax,
        grid_value,
    })
}

/// Thresholds and budgets of a classification run. Embedded in every report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErgodicityConfig {
    /// Largest iterate index in the decay trace.
    pub budget: usize,
    pub decay_threshold: f64,
    pub nondecay_factor: f64,
    /// Relative increase tolerated between consecutive trace values.
    pub monotone_slack: f64,
    /// Trace values below this are roundoff and exempt from the monotonicity test.
    pub noise_floor: f64,
    pub grid: GridConfig,
    pub retraction: dynamics::RetractionConfig,
    /// Averaging horizon of the Cesaro cross-check.
    pub cesaro_horizon: usize,
    /// Radius of the grid used for the Cesaro cross-check.
    pub crosscheck_radius: f64,
}

impl Default for ErgodicityConfig {
    fn default() -> Self {
        Self {
            budget: 1 << 10,
            decay_threshold: 1e-4,
            nondecay_factor: 0.5,
            monotone_slack: 0.1,
            noise_floor: 1e-12,
            grid: GridConfig::default(),
            retraction: dynamics::RetractionConfig::default(),
            cesaro_horizon: 1 << 10,
            crosscheck_radius: 0.9,
        }
    }
}

impl ErgodicityConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 || self.cesaro_horizon == 0 {
            return Err(Error::InvalidParameter("budget and Cesaro horizon must be positive".into()));
        }
        if !(self.decay_threshold > 0.0) || !(self.nondecay_factor > 0.0 && self.nondecay_factor <= 1.0) {
            return Err(Error::InvalidParameter(
                "decay threshold must be positive and the non-decay factor in (0, 1]".into(),
            ));
        }
        if !(self.monotone_slack >= 0.0) || !(self.noise_floor >= 0.0) {
            return Err(Error::InvalidParameter("negative monotonicity tolerance".into()));
        }
        if !(self.crosscheck_radius > 0.0 && self.crosscheck_radius < 1.0) {
            return Err(Error::InvalidParameter("cross-check radius must lie in (0, 1)".into()));
        }
        if self.grid.directions == 0 {
            return Err(Error::InvalidParameter("grid needs at least one direction".into()));
        }
        self.retraction.validate()
    }

    /// Uses one seed for every sampled quantity.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.grid.seed = seed;
        self.retraction.seed = seed;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CriterionOutcome {
    Holds,
    Fails,
    Undecided,
}

/// `sup |phi_iterate - rho|` with `iterate = k * j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub j: usize,
    pub iterate: usize,
    pub sup_deviation: f64,
    pub argmax: ComplexVec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionCheck {
    pub outcome: CriterionOutcome,
    pub trace: Vec<TraceEntry>,
}

impl CriterionCheck {
    pub fn holds(&self) -> Option<bool> {
        match self.outcome {
            CriterionOutcome::Holds => Some(true),
            CriterionOutcome::Fails => Some(false),
            CriterionOutcome::Undecided => None,
        }
    }
}

/// Iterate indices `k, 2k, 4k, ...` up to `budget`, stopping early once the
/// polynomial degree of the iterate would exceed `budget`.
pub fn trace_schedule(k: usize, budget: usize, growth_degree: u64) -> Vec<usize> {
    let within = |i: usize| {
        growth_degree == 1
            || u32::try_from(i)
                .ok()
                .and_then(|e| growth_degree.checked_pow(e))
                .is_some_and(|d| d <= budget as u64)
    };
    let mut out = vec![k];
    let mut i = 2 * k;
    while i <= budget && within(i) {
        out.push(i);
        i *= 2;
    }
    out
}

fn apply(m: &CMatrix, z: &ComplexVec) -> ComplexVec {
    ComplexVec::from_dvector(&(m * z.to_dvector()))
}

fn retraction_model(est: &RetractionEstimate) -> Result<(usize, CMatrix)> {
    let (k, limit) = est.converged()?;
    Ok((k, limit.linear_rho.clone()))
}

/// Traces `sup |phi_{kj} - rho|` over the grid along the doubling schedule
/// and decides decay (`Holds`), persistence (`Fails`) or neither.
pub fn decay_criterion_check(
    map: &HoloMap,
    est: &RetractionEstimate,
    grid: &SampleGrid,
    config: &ErgodicityConfig,
) -> Result<CriterionCheck> {
    let (k, rho) = retraction_model(est)?;
    let mut trace = Vec::new();
    for iterate in trace_schedule(k, config.budget, map.growth_degree()) {
        let phi = holomap::iterate_pointwise(map, iterate)?;
        let sup = sup_norm_estimate(|z| Ok(phi.evaluate(z)?.distance(&apply(&rho, z))), grid)?;
        trace.push(TraceEntry {
            j: iterate / k,
            iterate,
            sup_deviation: sup.value,
            argmax: sup.argmax,
        });
    }
    let outcome = decide(&trace, config);
    Ok(CriterionCheck { outcome, trace })
}

fn decide(trace: &[TraceEntry], config: &ErgodicityConfig) -> CriterionOutcome {
    let values: Vec<f64> = trace.iter().map(|t| t.sup_deviation).collect();
    let (Some(&first), Some(&last)) = (values.first(), values.last()) else {
        return CriterionOutcome::Undecided;
    };
    let monotone = values
        .windows(2)
        .all(|w| w[1] <= config.noise_floor || w[1] <= w[0] * (1.0 + config.monotone_slack));
    if last < config.decay_threshold && monotone {
        CriterionOutcome::Holds
    } else if values.iter().all(|&v| v >= config.nondecay_factor * first) {
        CriterionOutcome::Fails
    } else {
        CriterionOutcome::Undecided
    }
}

/// Bounded holomorphic test functions on `B_n`.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// `z^m`; the zero index is the constant `1`.
    Monomial(MultiIndex),
    /// `(1 + z_1) / 2`.
    HalfShift,
}

impl TestFunction {
    pub fn coordinate(n: usize, i: usize) -> Self {
        Self::Monomial(MultiIndex::unit(n, i))
    }

    pub fn eval(&self, z: &ComplexVec) -> Complex64 {
        match self {
            Self::Monomial(m) => m
                .exponents()
                .iter()
                .zip(z.iter())
                .map(|(&e, zi)| zi.powu(e))
                .product(),
            Self::HalfShift => (Complex64::new(1.0, 0.0) + z[0]) * 0.5,
        }
    }

    /// `sup |f|` over the ball. For `z^m` this is
    /// `sqrt(prod m_i^m_i / |m|^|m|)`.
    pub fn bound(&self) -> f64 {
        match self {
            Self::Monomial(m) => {
                let total = m.degree() as f64;
                if total == 0.0 {
                    return 1.0;
                }
                let log: f64 = m
                    .exponents()
                    .iter()
                    .filter(|&&e| e > 0)
                    .map(|&e| e as f64 * (e as f64).ln())
                    .sum::<f64>()
                    - total * total.ln();
                (0.5 * log).exp()
            }
            Self::HalfShift => 1.0,
        }
    }

    /// Lipschitz constant on the ball.
    pub fn lipschitz(&self) -> f64 {
        match self {
            Self::Monomial(m) => m.degree() as f64,
            Self::HalfShift => 0.5,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Monomial(m) if m.degree() == 0 => "1".into(),
            Self::Monomial(m) => m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| match e {
                    1 => format!("z{}", i + 1),
                    _ => format!("z{}^{e}", i + 1),
                })
                .collect::<Vec<_>>()
                .join(" "),
            Self::HalfShift => "(1+z1)/2".into(),
        }
    }
}

/// Monomials of degree at most 3 and `(1 + z_1) / 2`.
pub fn battery(n: usize) -> Vec<TestFunction> {
    let mut out: Vec<TestFunction> = (0..=3)
        .flat_map(|d| MultiIndex::all_of_degree(n, d))
        .map(TestFunction::Monomial)
        .collect();
    out.push(TestFunction::HalfShift);
    out
}

/// `(M_j f)(z) = (1/j) sum_{i=1..j} f(phi_i(z))` at each point.
pub fn cesaro_mean(map: &HoloMap, f: &TestFunction, j: usize, points: &[ComplexVec]) -> Result<Vec<Complex64>> {
    if j == 0 {
        return Err(Error::InvalidParameter("Cesaro index must be positive".into()));
    }
    let limit = f.bound() * (1.0 + 1e-9) + 1e-15;
    points
        .par_iter()
        .map(|z| {
            let mut w = z.clone();
            let mut sum = Complex64::new(0.0, 0.0);
            for _ in 0..j {
                w = map.evaluate(&w).map_err(|e| evaluation_error(z, e))?;
                let value = f.eval(&w);
                if !(value.norm() <= limit) {
                    return Err(Error::InvalidParameter(format!(
                        "test function {} exceeds its bound {} (|f| = {})",
                        f.name(),
                        f.bound(),
                        value.norm()
                    )));
                }
                sum += value;
            }
            Ok(sum / j as f64)
        })
        .collect()
}

/// `(P f)(z) = (1/k) sum_{i=0..k-1} f(rho(phi_i(z)))` for an arbitrary scalar `f`.
pub fn project_with<F>(map: &HoloMap, est: &RetractionEstimate, f: F, points: &[ComplexVec]) -> Result<Vec<Complex64>>
where
    F: Fn(&ComplexVec) -> Complex64 + Sync,
{
    let (k, rho) = retraction_model(est)?;
    points
        .par_iter()
        .map(|z| {
            let mut w = z.clone();
            let mut sum = Complex64::new(0.0, 0.0);
            for i in 0..k {
                if i > 0 {
                    w = map.evaluate(&w).map_err(|e| evaluation_error(z, e))?;
                }
                sum += f(&apply(&rho, &w));
            }
            Ok(sum / k as f64)
        })
        .collect()
}

/// The limit of the Cesaro means, `P f`, at each point.
pub fn limit_projection(
    map: &HoloMap,
    est: &RetractionEstimate,
    f: &TestFunction,
    points: &[ComplexVec],
) -> Result<Vec<Complex64>> {
    project_with(map, est, |w| f.eval(w), points)
}

/// Minimum of `(1 - |phi(z)|) / (1 - |z|)` over sampled `z` at Bergman
/// distance at least `eta` from `rho(z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRatioProbe {
    pub eta: f64,
    /// `None` when no sample lies at distance `eta` from its retraction.
    pub a_min: Option<f64>,
    pub count: usize,
    pub samples: usize,
}

pub const BOUNDARY_PROBE_RADIUS: f64 = 1.0 - 1e-6;

pub fn boundary_ratio_probe(map: &HoloMap, est: &RetractionEstimate, eta: f64, samples: usize) -> Result<BoundaryRatioProbe> {
    if !(eta > 0.0) {
        return Err(Error::InvalidParameter("eta must be positive".into()));
    }
    let (_, rho) = retraction_model(est)?;
    let n = map.dim();
    let origin = map.evaluate(&ComplexVec::zeros(n))?.norm();
    if origin >= 1e-10 {
        return Err(Error::OriginNotFixed(origin));
    }
    let points = grid::interior_samples(n, samples, BOUNDARY_PROBE_RADIUS, est.config.seed);
    let mut a_min: Option<f64> = None;
    let mut count = 0;
    for z in &points {
        let rz = apply(&rho, z);
        if rz.norm() >= 1.0 - geometry::BOUNDARY_MARGIN {
            continue;
        }
        if geometry::bergman_distance(z, &rz)? < eta {
            continue;
        }
        count += 1;
        let ratio = (1.0 - map.evaluate(z)?.norm()) / (1.0 - z.norm());
        a_min = Some(a_min.map_or(ratio, |a| a.min(ratio)));
    }
    Ok(BoundaryRatioProbe {
        eta,
        a_min,
        count,
        samples: points.len(),
    })
}

/// The disk map `z -> first component of phi_j(z, 0, ..., 0)`.
#[derive(Debug, Clone)]
pub struct DiskSlice {
    iterate: HoloMap,
}

impl DiskSlice {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let n = self.iterate.dim();
        Ok(self.iterate.evaluate(&ComplexVec::basis(n, 0, z))?[0])
    }
}

pub fn slice_first_component(map: &HoloMap, j: usize) -> Result<DiskSlice> {
    Ok(DiskSlice {
        iterate: holomap::iterate_pointwise(map, j)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "ME_AND_UME")]
    MeanErgodic,
    #[serde(rename = "NOT_ME")]
    NotMeanErgodic,
    #[serde(rename = "UNDECIDED")]
    Undecided,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::MeanErgodic => "ME_AND_UME",
            Self::NotMeanErgodic => "NOT_ME",
            Self::Undecided => "UNDECIDED",
        }
    }
}

/// What the verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictBasis {
    NoInteriorFixedPoint,
    CriterionHolds,
    CriterionFails,
    CriterionInconclusive,
    NoPeriodFound,
    NotIdempotent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Evidence {
    Theorem,
    Numerical,
}

/// Agreement of a Cesaro mean with the limit projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub function: String,
    pub horizon: usize,
    pub sup_difference: f64,
    /// `Lip(f) * eps + (k / J) * 2 * bound(f)` with `eps` the last trace value.
    pub predicted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub max_observed: f64,
    pub strict: bool,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetractionSummary {
    pub status: RetractionStatus,
    pub period: Option<usize>,
    pub fitted_iterate: Option<usize>,
    pub convergence_trace: Vec<dynamics::CauchyStep>,
    pub attempts: Vec<dynamics::PeriodAttempt>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErgodicityReport {
    pub verdict: Verdict,
    pub basis: VerdictBasis,
    pub evidence: Evidence,
    pub dimension: usize,
    pub map_kind: MapKind,
    pub certificate: Option<CertificateSummary>,
    pub fixed_point: Option<ComplexVec>,
    pub fixed_point_residual: Option<f64>,
    pub k: Option<usize>,
    pub s: Option<usize>,
    pub eigenvalues: Vec<Complex64>,
    pub retraction: Option<RetractionSummary>,
    pub criterion_outcome: Option<CriterionOutcome>,
    pub criterion_trace: Vec<TraceEntry>,
    pub denjoy_wolff: Option<DenjoyWolff>,
    pub witnesses: Vec<Witness>,
    pub config: ErgodicityConfig,
    pub notes: Vec<String>,
}

impl ErgodicityReport {
    fn new(map: &HoloMap, config: &ErgodicityConfig, verdict: Verdict, basis: VerdictBasis, evidence: Evidence) -> Self {
        Self {
            verdict,
            basis,
            evidence,
            dimension: map.dim(),
            map_kind: map.kind(),
            certificate: map.certificate().map(|c| CertificateSummary {
                max_observed: c.max_observed,
                strict: c.strict,
                samples: c.samples,
            }),
            fixed_point: None,
            fixed_point_residual: None,
            k: None,
            s: None,
            eigenvalues: Vec::new(),
            retraction: None,
            criterion_outcome: None,
            criterion_trace: Vec::new(),
            denjoy_wolff: None,
            witnesses: Vec::new(),
            config: *config,
            notes: Vec::new(),
        }
    }
}

fn summarize(est: &RetractionEstimate) -> RetractionSummary {
    RetractionSummary {
        status: est.status,
        period: est.period,
        fitted_iterate: est.limit.as_ref().map(|l| l.iterate),
        convergence_trace: est.convergence_trace.clone(),
        attempts: est.attempts.clone(),
    }
}

/// Cesaro mean at the configured horizon against the limit projection for
/// `z_1` and `(1 + z_1) / 2`.
fn cross_check(
    map: &HoloMap,
    est: &RetractionEstimate,
    epsilon: f64,
    config: &ErgodicityConfig,
) -> Result<Vec<Witness>> {
    let (k, _) = est.converged()?;
    let n = map.dim();
    let grid = SampleGrid::compact(n, config.crosscheck_radius, 4, 16, config.grid.seed)?;
    let points = grid.points();
    let horizon = config.cesaro_horizon;
    [TestFunction::coordinate(n, 0), TestFunction::HalfShift]
        .iter()
        .map(|f| {
            let mean = cesaro_mean(map, f, horizon, &points)?;
            let proj = limit_projection(map, est, f, &points)?;
            let sup_difference = mean
                .iter()
                .zip(&proj)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            Ok(Witness {
                function: f.name(),
                horizon,
                sup_difference,
                predicted: f.lipschitz() * epsilon + (k as f64 / horizon as f64) * 2.0 * f.bound(),
            })
        })
        .collect()
}

/// Decides mean ergodicity of `C_phi` for a certified self-map.
///
/// Without an interior fixed point the operator is not mean ergodic. With one,
/// the map is conjugated so that the fixed point sits at the origin and the
/// decay of `|phi_{kj} - rho|_inf` decides.
pub fn classify(map: &HoloMap, config: &ErgodicityConfig) -> Result<ErgodicityReport> {
    map.require_certified()?;
    config.validate()?;
    let Some(p) = dynamics::find_interior_fixed_point(map)? else {
        let mut report = ErgodicityReport::new(
            map,
            config,
            Verdict::NotMeanErgodic,
            VerdictBasis::NoInteriorFixedPoint,
            Evidence::Theorem,
        );
        report
            .notes
            .push("no interior fixed point: a self-map without one is never mean ergodic".into());
        match dynamics::denjoy_wolff_estimate(map) {
            Ok(dw) => report.denjoy_wolff = Some(dw),
            Err(e) => report.notes.push(format!("Denjoy-Wolff estimate unavailable: {e}")),
        }
        return Ok(report);
    };

    let residual = map.evaluate(&p)?.distance(&p);
    let psi = dynamics::conjugate_to_origin(map, &p)?;
    let start = |verdict, basis, evidence| {
        let mut r = ErgodicityReport::new(map, config, verdict, basis, evidence);
        r.fixed_point = Some(p.clone());
        r.fixed_point_residual = Some(residual);
        r
    };

    let est = match dynamics::estimate_retraction(&psi, &config.retraction) {
        Ok(est) => est,
        Err(Error::NotIdempotent { eigenvalue }) => {
            let mut report = start(Verdict::Undecided, VerdictBasis::NotIdempotent, Evidence::Numerical);
            report
                .notes
                .push(format!("iterate limit is not an idempotent: eigenvalue {eigenvalue}"));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };

    let Ok((k, limit)) = est.converged() else {
        let mut report = start(Verdict::Undecided, VerdictBasis::NoPeriodFound, Evidence::Numerical);
        report.retraction = Some(summarize(&est));
        report.notes.push(format!(
            "no period k <= {} makes the iterates Cauchy; no finite computation rules out a larger one",
            config.retraction.k_max
        ));
        return Ok(report);
    };

    let grid = config.grid.build(map.dim())?;
    let check = decay_criterion_check(&psi, &est, &grid, config)?;
    let (verdict, basis) = match check.outcome {
        CriterionOutcome::Holds => (Verdict::MeanErgodic, VerdictBasis::CriterionHolds),
        CriterionOutcome::Fails => (Verdict::NotMeanErgodic, VerdictBasis::CriterionFails),
        CriterionOutcome::Undecided => (Verdict::Undecided, VerdictBasis::CriterionInconclusive),
    };
    let mut report = start(verdict, basis, Evidence::Numerical);
    report.k = Some(k);
    report.s = Some(limit.s);
    report.eigenvalues = limit.eigenvalues.clone();
    report.retraction = Some(summarize(&est));
    report.criterion_outcome = Some(check.outcome);
    if verdict == Verdict::MeanErgodic {
        let epsilon = check.trace.last().map_or(0.0, |t| t.sup_deviation);
        report.witnesses = cross_check(&psi, &est, epsilon, config)?;
    }
    report.criterion_trace = check.trace;
    if p.norm_sqr() > 0.0 {
        report
            .notes
            .push("traces refer to the map conjugated by the involution exchanging the fixed point and 0".into());
    }
    match verdict {
        Verdict::NotMeanErgodic => report
            .notes
            .push("sup |phi_kj - rho| does not decay on the sampled ball: numerical evidence, not a proof".into()),
        Verdict::Undecided => report
            .notes
            .push("decay trace neither falls below the threshold nor stays above the non-decay level".into()),
        Verdict::MeanErgodic => {}
    }
    Ok(report)
}
