use std::path::Path;

use ergolab::dynamics::{self, BlockStep, CauchyStep, NormalFormResiduals, PeriodAttempt, RetractionResiduals, RetractionStatus};
use ergolab::ergodicity::{self, ErgodicityConfig};
use ergolab::geometry;
use ergolab::grid::SampleGrid;
use ergolab::mapfile;
use ergolab::report::{self, matrix_rows, Format};
use ergolab::{Complex64, ComplexVec, Error, HoloMap};
use serde::Serialize;

use crate::AnalysisArgs;

pub const EXIT_IO: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_CERTIFICATION: u8 = 3;
pub const EXIT_NUMERIC: u8 = 4;

const CERTIFICATE_DIRECTIONS: usize = 64;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }

    fn parse(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => EXIT_PARSE,
            Error::CertificateRefused { .. } | Error::NotCertified => EXIT_CERTIFICATION,
            _ => EXIT_NUMERIC,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<String, Failure>;

struct Loaded {
    map: HoloMap,
    config: ErgodicityConfig,
}

fn load(path: &Path, args: &AnalysisArgs) -> Result<Loaded, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    let spec = mapfile::parse(&text).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    let mut config = ErgodicityConfig::default();
    spec.overrides.apply(&mut config);
    if let Some(seed) = args.seed {
        config = config.with_seed(seed);
    }
    if let Some(depth) = args.grid_radii {
        config.grid.depth = depth;
    }
    if let Some(budget) = args.budget {
        config.budget = budget;
    }
    if let Some(kmax) = args.kmax {
        config.retraction.k_max = kmax;
    }
    config.validate()?;
    let mut map = spec.build()?;
    if let Some(d) = args.degree_bound {
        map = map.with_degree_bound(d)?;
    }
    let map = map.certify(CERTIFICATE_DIRECTIONS)?;
    Ok(Loaded { map, config })
}

fn render<T: Serialize>(value: &T, format: Format) -> Outcome {
    Ok(report::render(value, format)?)
}

pub fn analyze(path: &Path, args: &AnalysisArgs, format: Format) -> Outcome {
    let Loaded { map, config } = load(path, args)?;
    let report = ergodicity::classify(&map, &config)?;
    report::check_finite(&report)?;
    render(&report, format)
}

fn parse_point(text: &str) -> Result<ComplexVec, Failure> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<Complex64>()
                .map_err(|_| Failure::parse(format!("invalid coordinate '{}' in '{text}'", t.trim())))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(ComplexVec::new)
}

#[derive(Serialize)]
struct MetricReport {
    z: ComplexVec,
    w: ComplexVec,
    bergman_distance: f64,
    euclidean_distance: f64,
    /// `beta(z, w) - |z - w| / 2`, never negative.
    chord_gap: f64,
    /// `|phi_z(phi_z(w)) - w|`.
    involution_residual: f64,
    /// `|phi_z(z)|`.
    center_to_origin: f64,
    /// `|phi_z(0) - z|`.
    origin_to_center: f64,
}

pub fn metric(z: &str, w: &str, format: Format) -> Outcome {
    let z = parse_point(z)?;
    let w = parse_point(w)?;
    if z.dim() != w.dim() {
        return Err(Failure::parse(format!(
            "points have different dimensions {} and {}",
            z.dim(),
            w.dim()
        )));
    }
    let image = geometry::involution(&z, &w)?;
    let report = MetricReport {
        bergman_distance: geometry::bergman_distance(&z, &w)?,
        euclidean_distance: z.distance(&w),
        chord_gap: geometry::chord_gap(&z, &w)?,
        involution_residual: geometry::involution(&z, &image)?.distance(&w),
        center_to_origin: geometry::involution(&z, &z)?.norm(),
        origin_to_center: geometry::involution(&z, &ComplexVec::zeros(z.dim()))?.distance(&z),
        z,
        w,
    };
    render(&report, format)
}

/// The map itself, or its conjugate moving an interior fixed point to 0.
fn centred(map: &HoloMap, conjugate: bool) -> Result<(HoloMap, Option<ComplexVec>), Failure> {
    let n = map.dim();
    let at_origin = map.evaluate(&ComplexVec::zeros(n))?.norm();
    if at_origin < 1e-10 {
        return Ok((map.clone(), None));
    }
    if !conjugate {
        return Err(Error::OriginNotFixed(at_origin).into());
    }
    let p = dynamics::find_interior_fixed_point(map)?.ok_or_else(|| Failure {
        code: EXIT_NUMERIC,
        message: "no interior fixed point to conjugate through".into(),
    })?;
    let psi = dynamics::conjugate_to_origin(map, &p)?;
    Ok((psi, Some(p)))
}

#[derive(Serialize)]
struct RetractionReport {
    status: RetractionStatus,
    fixed_point: Option<ComplexVec>,
    k: Option<usize>,
    s: Option<usize>,
    fitted_iterate: Option<usize>,
    eigenvalues: Vec<Complex64>,
    d0_rho: Vec<Vec<Complex64>>,
    linear_rho: Vec<Vec<Complex64>>,
    residuals: Option<RetractionResiduals>,
    convergence_trace: Vec<CauchyStep>,
    attempts: Vec<PeriodAttempt>,
    config: dynamics::RetractionConfig,
}

pub fn retraction(path: &Path, args: &AnalysisArgs, conjugate: bool, format: Format) -> Outcome {
    let Loaded { map, config } = load(path, args)?;
    let (psi, fixed_point) = centred(&map, conjugate)?;
    let est = dynamics::estimate_retraction(&psi, &config.retraction)?;
    let limit = est.limit.as_ref();
    let report = RetractionReport {
        status: est.status,
        fixed_point,
        k: est.period,
        s: est.s(),
        fitted_iterate: limit.map(|l| l.iterate),
        eigenvalues: limit.map(|l| l.eigenvalues.clone()).unwrap_or_default(),
        d0_rho: limit.map(|l| matrix_rows(&l.d0_rho)).unwrap_or_default(),
        linear_rho: limit.map(|l| matrix_rows(&l.linear_rho)).unwrap_or_default(),
        residuals: match est.status {
            RetractionStatus::Converged => Some(dynamics::retraction_residuals(&est, &psi)?),
            RetractionStatus::NoPeriodFound => None,
        },
        convergence_trace: est.convergence_trace.clone(),
        attempts: est.attempts.clone(),
        config: config.retraction,
    };
    render(&report, format)
}

#[derive(Serialize)]
struct NormalFormReport {
    status: RetractionStatus,
    fixed_point: Option<ComplexVec>,
    k: Option<usize>,
    s: Option<usize>,
    v: Vec<Vec<Complex64>>,
    projection: Vec<Vec<Complex64>>,
    residuals: Option<NormalFormResiduals>,
    block_trace: Vec<BlockStep>,
    attempts: Vec<PeriodAttempt>,
    config: dynamics::RetractionConfig,
}

pub fn normal_form(path: &Path, args: &AnalysisArgs, conjugate: bool, format: Format) -> Outcome {
    let Loaded { map, config } = load(path, args)?;
    let (psi, fixed_point) = centred(&map, conjugate)?;
    let est = dynamics::estimate_retraction(&psi, &config.retraction)?;
    let report = match est.status {
        RetractionStatus::NoPeriodFound => NormalFormReport {
            status: est.status,
            fixed_point,
            k: None,
            s: None,
            v: Vec::new(),
            projection: Vec::new(),
            residuals: None,
            block_trace: Vec::new(),
            attempts: est.attempts.clone(),
            config: config.retraction,
        },
        RetractionStatus::Converged => {
            let nf = dynamics::normal_form(&est, &psi)?;
            NormalFormReport {
                status: est.status,
                fixed_point,
                k: est.period,
                s: Some(nf.s),
                v: matrix_rows(&nf.v),
                projection: matrix_rows(&nf.projection),
                residuals: Some(nf.residuals),
                block_trace: nf.block_trace,
                attempts: est.attempts.clone(),
                config: config.retraction,
            }
        }
    };
    render(&report, format)
}

#[derive(Serialize)]
struct CesaroRow {
    function: String,
    j: usize,
    /// `sup |M_j f|` over the grid.
    sup_mean: f64,
    /// `sup |M_j f - P f|` over the grid, when the limit projection is known.
    sup_to_projection: Option<f64>,
}

#[derive(Serialize)]
struct CesaroReport {
    k: Option<usize>,
    projection: &'static str,
    horizon: usize,
    radius: f64,
    points: usize,
    rows: Vec<CesaroRow>,
    config: ErgodicityConfig,
}

pub fn cesaro(path: &Path, args: &AnalysisArgs, horizon: Option<usize>, radius: f64, format: Format) -> Outcome {
    let Loaded { map, config } = load(path, args)?;
    let horizon = horizon.unwrap_or(config.cesaro_horizon);
    if horizon == 0 {
        return Err(Failure::parse("horizon must be positive"));
    }
    let n = map.dim();
    let grid = SampleGrid::compact(n, radius, 4, 16, config.grid.seed)?;
    let points = grid.points();
    let at_origin = map.evaluate(&ComplexVec::zeros(n))?.norm();
    let (est, projection) = if at_origin < 1e-10 {
        let est = dynamics::estimate_retraction(&map, &config.retraction)?;
        match est.status {
            RetractionStatus::Converged => (Some(est), "available"),
            RetractionStatus::NoPeriodFound => (None, "no period found"),
        }
    } else {
        (None, "origin not fixed")
    };

    let mut schedule = Vec::new();
    let mut j = 1;
    while j < horizon {
        schedule.push(j);
        j *= 2;
    }
    schedule.push(horizon);

    let mut rows = Vec::new();
    for f in ergodicity::battery(n) {
        let target = match &est {
            Some(est) => Some(ergodicity::limit_projection(&map, est, &f, &points)?),
            None => None,
        };
        for &j in &schedule {
            let mean = ergodicity::cesaro_mean(&map, &f, j, &points)?;
            rows.push(CesaroRow {
                function: f.name(),
                j,
                sup_mean: mean.iter().map(|c| c.norm()).fold(0.0, f64::max),
                sup_to_projection: target.as_ref().map(|t| sup_distance(&mean, t)),
            });
        }
    }
    let report = CesaroReport {
        k: est.as_ref().and_then(|e| e.period),
        projection,
        horizon,
        radius,
        points: points.len(),
        rows,
        config,
    };
    render(&report, format)
}

fn sup_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

