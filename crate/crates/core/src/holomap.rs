//! Holomorphic self-maps of `B_n`.
//!
//! A [`HoloMap`] is either a truncated power series (one sparse polynomial per
//! component), a linear map, a ball automorphism `U phi_a`, or an exact
//! composite of other maps. Composites come in two flavours: a pair
//! `outer o inner`, and a pointwise cascade `base o ... o base` that evaluates
//! iterates one application at a time and never truncates.

use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, BOUNDARY_MARGIN};
use crate::grid::{self, SampleGrid};
use crate::linalg::{self, CMatrix};
use crate::poly::{MultiIndex, Polynomial, PowerTable};
use crate::vec::ComplexVec;

pub const DEFAULT_DEGREE_BOUND: usize = 16;

/// Slack allowed on `|z| <= 1` for polynomial maps.
const CLOSED_BALL_SLACK: f64 = 1e-12;

/// Tolerances of the sampled self-map certificate.
pub const STRICT_SELF_MAP_LIMIT: f64 = 1.0 - 1e-12;
pub const BOUNDARY_SELF_MAP_LIMIT: f64 = 1.0 + 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapKind {
    PowerSeries,
    Linear,
    Automorphism,
    Composite,
}

#[derive(Debug, Clone)]
enum Repr {
    Series(Vec<Polynomial>),
    Linear(CMatrix),
    Automorphism { center: ComplexVec, unitary: CMatrix },
    Composite { outer: Arc<HoloMap>, inner: Arc<HoloMap> },
    Cascade { base: Arc<HoloMap>, times: usize },
}

/// Sampling evidence that `sup |phi| <= 1`. Not a proof.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfMapCertificate {
    pub max_observed: f64,
    pub argmax: ComplexVec,
    pub radii_used: Vec<f64>,
    pub samples: usize,
    /// `max_observed <= 1 - 1e-12`.
    pub strict: bool,
}

#[derive(Debug, Clone)]
pub struct HoloMap {
    dim: usize,
    degree_bound: usize,
    repr: Repr,
    certificate: Option<SelfMapCertificate>,
}

/// Degree-`k` homogeneous part `F_k` of a map.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPart {
    pub degree: usize,
    pub components: Vec<Polynomial>,
}

impl HomogeneousPart {
    pub fn eval(&self, z: &ComplexVec) -> ComplexVec {
        ComplexVec::new(self.components.iter().map(|p| p.eval(z.entries())).collect())
    }
}

/// Result of [`compose`]. `truncated` is set whenever a term above the degree
/// bound was discarded; `truncation_bound` then bounds the sup over the closed
/// ball of the discarded tail, per component.
#[derive(Debug, Clone)]
pub struct Composition {
    pub map: HoloMap,
    pub truncated: bool,
    pub truncation_bound: f64,
}

impl HoloMap {
    /// A truncated power series with one polynomial per component.
    pub fn from_components(components: Vec<Polynomial>, degree_bound: usize) -> Result<Self> {
        let dim = components.len();
        if dim == 0 {
            return Err(Error::InvalidParameter("map needs at least one component".into()));
        }
        for p in &components {
            if p.nvars() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.nvars(),
                });
            }
            if p.degree() > degree_bound {
                return Err(Error::InvalidParameter(format!(
                    "component of degree {} exceeds degree bound {degree_bound}",
                    p.degree()
                )));
            }
        }
        Ok(Self {
            dim,
            degree_bound,
            repr: Repr::Series(components),
            certificate: None,
        })
    }

    pub fn linear(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::InvalidParameter("linear map needs a square matrix".into()));
        }
        Ok(Self {
            dim: matrix.nrows(),
            degree_bound: DEFAULT_DEGREE_BOUND,
            repr: Repr::Linear(matrix),
            certificate: None,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self::linear(linalg::identity(dim)).expect("identity is square")
    }

    /// `z -> U phi_a(z)`.
    pub fn automorphism(center: ComplexVec, unitary: CMatrix) -> Result<Self> {
        let dim = center.dim();
        geometry::check_interior(&center)?;
        if unitary.nrows() != dim || unitary.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: unitary.nrows(),
            });
        }
        let defect = linalg::frobenius_norm(&(unitary.adjoint() * &unitary - linalg::identity(dim)));
        if defect > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "automorphism factor is not unitary (defect {defect:.3e})"
            )));
        }
        Ok(Self {
            dim,
            degree_bound: DEFAULT_DEGREE_BOUND,
            repr: Repr::Automorphism { center, unitary },
            certificate: None,
        })
    }

    /// The involution `phi_a`.
    pub fn involution(center: ComplexVec) -> Result<Self> {
        let dim = center.dim();
        Self::automorphism(center, linalg::identity(dim))
    }

    pub fn with_degree_bound(mut self, degree_bound: usize) -> Result<Self> {
        if let Repr::Series(components) = &self.repr {
            if let Some(p) = components.iter().find(|p| p.degree() > degree_bound) {
                return Err(Error::InvalidParameter(format!(
                    "component of degree {} exceeds degree bound {degree_bound}",
                    p.degree()
                )));
            }
        }
        self.degree_bound = degree_bound;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn kind(&self) -> MapKind {
        match self.repr {
            Repr::Series(_) => MapKind::PowerSeries,
            Repr::Linear(_) => MapKind::Linear,
            Repr::Automorphism { .. } => MapKind::Automorphism,
            Repr::Composite { .. } | Repr::Cascade { .. } => MapKind::Composite,
        }
    }

    /// The matrix of a linear map.
    pub fn matrix(&self) -> Option<&CMatrix> {
        match &self.repr {
            Repr::Linear(m) => Some(m),
            _ => None,
        }
    }

    /// Finite series (polynomial) maps may be evaluated on the closed ball.
    pub fn is_polynomial(&self) -> bool {
        match &self.repr {
            Repr::Series(_) | Repr::Linear(_) => true,
            Repr::Automorphism { .. } => false,
            Repr::Composite { outer, inner } => outer.is_polynomial() && inner.is_polynomial(),
            Repr::Cascade { base, .. } => base.is_polynomial(),
        }
    }

    /// Multiplicative growth of the polynomial degree under composition:
    /// the total degree for series, `1` for linear maps and automorphisms.
    pub fn growth_degree(&self) -> u64 {
        match &self.repr {
            Repr::Series(components) => {
                components.iter().map(|p| p.degree()).max().unwrap_or(1).max(1) as u64
            }
            Repr::Linear(_) | Repr::Automorphism { .. } => 1,
            Repr::Composite { outer, inner } => {
                outer.growth_degree().saturating_mul(inner.growth_degree())
            }
            Repr::Cascade { base, times } => {
                let d = base.growth_degree();
                let mut acc: u64 = 1;
                for _ in 0..*times {
                    acc = acc.saturating_mul(d);
                    if acc == u64::MAX || d == 1 {
                        break;
                    }
                }
                acc
            }
        }
    }

    pub fn certificate(&self) -> Option<&SelfMapCertificate> {
        self.certificate.as_ref()
    }

    pub fn is_certified(&self) -> bool {
        self.certificate.is_some()
    }

    pub(crate) fn require_certified(&self) -> Result<()> {
        if self.is_certified() {
            Ok(())
        } else {
            Err(Error::NotCertified)
        }
    }

    fn check_domain(&self, z: &ComplexVec) -> Result<()> {
        if z.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: z.dim(),
            });
        }
        let norm = z.norm();
        let limit = if self.is_polynomial() {
            1.0 + CLOSED_BALL_SLACK
        } else {
            1.0 - BOUNDARY_MARGIN
        };
        if !norm.is_finite() || norm > limit {
            return Err(Error::OutsideBall { norm, limit });
        }
        Ok(())
    }

    /// `phi(z)`.
    pub fn evaluate(&self, z: &ComplexVec) -> Result<ComplexVec> {
        self.check_domain(z)?;
        match &self.repr {
            Repr::Series(components) => {
                let max_deg = components.iter().map(|p| p.degree()).max().unwrap_or(0);
                let table = PowerTable::new(z.entries(), max_deg);
                Ok(ComplexVec::new(
                    components.iter().map(|p| p.eval_with(&table)).collect(),
                ))
            }
            Repr::Linear(m) => Ok(ComplexVec::from_dvector(&(m * z.to_dvector()))),
            Repr::Automorphism { center, unitary } => {
                let w = geometry::involution_unchecked(center, z);
                Ok(ComplexVec::from_dvector(&(unitary * w.to_dvector())))
            }
            Repr::Composite { outer, inner } => outer.evaluate(&inner.evaluate(z)?),
            Repr::Cascade { base, times } => {
                let mut w = z.clone();
                for _ in 0..*times {
                    w = base.evaluate(&w)?;
                }
                Ok(w)
            }
        }
    }

    /// The forward orbit `phi_1(z), ..., phi_len(z)`.
    pub fn orbit(&self, z: &ComplexVec, len: usize) -> Result<Vec<ComplexVec>> {
        let mut out = Vec::with_capacity(len);
        let mut w = z.clone();
        for _ in 0..len {
            w = self.evaluate(&w)?;
            out.push(w.clone());
        }
        Ok(out)
    }

    /// The Jacobian `d_z phi`, entry `(i, l) = d phi^i / d z_l`.
    pub fn jacobian(&self, z: &ComplexVec) -> Result<CMatrix> {
        self.check_domain(z)?;
        match &self.repr {
            Repr::Series(components) => {
                let n = self.dim;
                let mut out = CMatrix::zeros(n, n);
                let max_deg = components.iter().map(|p| p.degree()).max().unwrap_or(0);
                let table = PowerTable::new(z.entries(), max_deg);
                for (i, p) in components.iter().enumerate() {
                    for l in 0..n {
                        out[(i, l)] = p.derivative(l).eval_with(&table);
                    }
                }
                Ok(out)
            }
            Repr::Linear(m) => Ok(m.clone()),
            Repr::Automorphism { center, unitary } => {
                Ok(unitary * involution_jacobian(center, z))
            }
            Repr::Composite { outer, inner } => {
                let w = inner.evaluate(z)?;
                Ok(outer.jacobian(&w)? * inner.jacobian(z)?)
            }
            Repr::Cascade { base, times } => {
                let mut acc = linalg::identity(self.dim);
                let mut w = z.clone();
                for _ in 0..*times {
                    acc = base.jacobian(&w)? * acc;
                    w = base.evaluate(&w)?;
                }
                Ok(acc)
            }
        }
    }

    /// Power series of the map truncated at the degree bound.
    pub fn to_series(&self) -> Composition {
        let d = self.degree_bound;
        let n = self.dim;
        match &self.repr {
            Repr::Series(c) => Composition {
                map: self.clone(),
                truncated: false,
                truncation_bound: 0.0,
            }
            .with_components(c.clone(), d),
            Repr::Linear(m) => Composition {
                map: self.clone(),
                truncated: false,
                truncation_bound: 0.0,
            }
            .with_components(linear_components(m), d),
            Repr::Automorphism { center, unitary } => {
                let (comps, tail) = automorphism_series(center, unitary, d);
                Composition {
                    map: self.clone(),
                    truncated: tail > 0.0,
                    truncation_bound: tail,
                }
                .with_components(comps, d)
            }
            Repr::Composite { outer, inner } => {
                let o = outer.to_series();
                let i = inner.to_series();
                let mut c = compose_series(&o.map, &i.map, d.max(1));
                c.truncated |= o.truncated || i.truncated;
                c.truncation_bound += o.truncation_bound + i.truncation_bound;
                c
            }
            Repr::Cascade { base, times } => {
                let b = base.to_series();
                let mut acc = HoloMap::identity(n).to_series();
                acc.map.degree_bound = d;
                for _ in 0..*times {
                    let mut next = compose_series(&b.map, &acc.map, d);
                    next.truncated |= acc.truncated || b.truncated;
                    next.truncation_bound += acc.truncation_bound + b.truncation_bound;
                    acc = next;
                }
                acc
            }
        }
    }

    /// Polynomial components when the map is stored as a series.
    pub fn components(&self) -> Option<&[Polynomial]> {
        match &self.repr {
            Repr::Series(c) => Some(c),
            _ => None,
        }
    }

    /// Partition of the (truncated) series by total degree. Parts that vanish
    /// identically are omitted.
    pub fn homogeneous_parts(&self) -> Vec<HomogeneousPart> {
        let series = self.to_series().map;
        let comps = series.components().expect("series representation");
        let top = comps.iter().map(|p| p.degree()).max().unwrap_or(0);
        (0..=top)
            .map(|k| HomogeneousPart {
                degree: k,
                components: comps.iter().map(|p| p.homogeneous_part(k)).collect(),
            })
            .filter(|part| part.components.iter().any(|p| !p.is_zero()))
            .collect()
    }

    /// Samples `|phi|` on a boundary ladder (radii up to `1 - 1e-8`) with
    /// `samples` directions.
    pub fn is_self_map_estimate(&self, samples: usize) -> Result<SelfMapCertificate> {
        let grid = SampleGrid::boundary_ladder(self.dim, 8, samples.max(1), grid::DEFAULT_SEED)?;
        let mut radii = vec![0.0];
        radii.extend_from_slice(grid.radii());
        let mut points = vec![ComplexVec::zeros(self.dim)];
        points.extend(grid.points());
        let mut max_observed = 0.0;
        let mut argmax = points[0].clone();
        for z in &points {
            let value = self
                .evaluate(z)
                .map_err(|e| Error::Evaluation {
                    point: z.clone(),
                    reason: e.to_string(),
                })?
                .norm();
            if !value.is_finite() {
                return Err(Error::CertificateRefused {
                    observed: value,
                    witness: z.clone(),
                });
            }
            if value > max_observed {
                max_observed = value;
                argmax = z.clone();
            }
        }
        if max_observed > BOUNDARY_SELF_MAP_LIMIT {
            return Err(Error::CertificateRefused {
                observed: max_observed,
                witness: argmax,
            });
        }
        Ok(SelfMapCertificate {
            max_observed,
            argmax,
            radii_used: radii,
            samples: points.len(),
            strict: max_observed <= STRICT_SELF_MAP_LIMIT,
        })
    }

    /// Attaches a sampled self-map certificate, or refuses.
    pub fn certify(mut self, samples: usize) -> Result<Self> {
        let cert = self.is_self_map_estimate(samples)?;
        self.certificate = Some(cert);
        Ok(self)
    }

    /// Attaches the certificate of `outer` to a map built from certified
    /// self-maps (the image of a composite lies in the image of its outer map).
    fn inherit_certificate(mut self, outer: &HoloMap, inner: &HoloMap) -> Self {
        if inner.is_certified() {
            self.certificate = outer.certificate.clone();
        }
        self
    }
}

impl Composition {
    fn with_components(mut self, comps: Vec<Polynomial>, degree_bound: usize) -> Self {
        self.map = HoloMap {
            dim: comps.len(),
            degree_bound,
            repr: Repr::Series(comps),
            certificate: self.map.certificate.clone(),
        };
        self
    }
}

fn linear_components(m: &CMatrix) -> Vec<Polynomial> {
    let n = m.nrows();
    (0..n)
        .map(|i| {
            let mut p = Polynomial::zero(n);
            for l in 0..n {
                p.add_term(MultiIndex::unit(n, l), m[(i, l)]);
            }
            p
        })
        .collect()
}

/// Taylor series of `U phi_a` truncated at degree `d`, with the `l1` mass of
/// the first omitted geometric term as tail indicator.
fn automorphism_series(center: &ComplexVec, unitary: &CMatrix, d: usize) -> (Vec<Polynomial>, f64) {
    let n = center.dim();
    let a2 = center.norm_sqr();
    let one = Complex64::new(1.0, 0.0);
    // numerator a - P_a(z) - s_a Q_a(z) = a - s_a z - (1 - s_a) <z,a> a / |a|^2
    let mut inner = Polynomial::zero(n);
    for l in 0..n {
        inner.add_term(MultiIndex::unit(n, l), center[l].conj());
    }
    let numerators: Vec<Polynomial> = if a2 == 0.0 {
        (0..n).map(|i| Polynomial::variable(n, i).scale(-one)).collect()
    } else {
        let s_a = (1.0 - a2).sqrt();
        (0..n)
            .map(|i| {
                Polynomial::constant(n, center[i])
                    .add(&Polynomial::variable(n, i).scale(Complex64::new(-s_a, 0.0)))
                    .add(&inner.scale(-center[i] * ((1.0 - s_a) / a2)))
            })
            .collect()
    };
    // 1 / (1 - <z,a>) = sum_k <z,a>^k
    let mut geometric = Polynomial::constant(n, one);
    let mut power = Polynomial::constant(n, one);
    let mut tail = 0.0;
    if a2 > 0.0 {
        for _ in 1..=d {
            power = power.mul_truncated(&inner, d).0;
            geometric = geometric.add(&power);
        }
        tail = a2.sqrt().powi(d as i32 + 1) / (1.0 - a2.sqrt());
    }
    let phi: Vec<Polynomial> = numerators
        .iter()
        .map(|p| p.mul_truncated(&geometric, d).0)
        .collect();
    let out = (0..n)
        .map(|i| {
            let mut acc = Polynomial::zero(n);
            for (l, p) in phi.iter().enumerate() {
                acc = acc.add(&p.scale(unitary[(i, l)]));
            }
            acc
        })
        .collect();
    (out, tail)
}

/// Jacobian of `phi_a` at `z`: with `N(z) = a - A z`, `q(z) = 1 - <z,a>`,
/// `d/dz_l (N/q) = (-A e_l q + N conj(a_l)) / q^2`.
fn involution_jacobian(a: &ComplexVec, z: &ComplexVec) -> CMatrix {
    let n = a.dim();
    let a2 = a.norm_sqr();
    if a2 == 0.0 {
        return -linalg::identity(n);
    }
    let s_a = (1.0 - a2).sqrt();
    let av = a.to_dvector();
    // A = s_a I + (1 - s_a) a a^H / |a|^2
    let a_mat = linalg::identity(n) * Complex64::new(s_a, 0.0)
        + (&av * av.adjoint()) * Complex64::new((1.0 - s_a) / a2, 0.0);
    let q = Complex64::new(1.0, 0.0) - z.inner(a);
    let num: DVector<Complex64> = &av - &a_mat * z.to_dvector();
    let mut out = CMatrix::zeros(n, n);
    for l in 0..n {
        for i in 0..n {
            out[(i, l)] = (-a_mat[(i, l)] * q + num[i] * a[l].conj()) / (q * q);
        }
    }
    out
}

/// Substitutes `inner` into each component of `outer`, truncating at `d`.
fn compose_series(outer: &HoloMap, inner: &HoloMap, d: usize) -> Composition {
    let outer_c = outer.components().expect("series");
    let inner_c = inner.components().expect("series");
    let n = inner_c.len();
    let max_exp = outer_c.iter().map(|p| p.degree()).max().unwrap_or(0);

    // powers[i][e] = (inner_i)^e truncated, with a flag for truncation so far
    let mut powers: Vec<Vec<(Polynomial, bool)>> = Vec::with_capacity(n);
    let l1: Vec<f64> = inner_c.iter().map(Polynomial::l1_norm).collect();
    for p in inner_c {
        let mut row = vec![(Polynomial::constant(n, Complex64::new(1.0, 0.0)), false)];
        for e in 1..=max_exp {
            let (prev, prev_cut) = &row[e - 1];
            let (next, dropped) = prev.mul_truncated(p, d);
            row.push((next, *prev_cut || dropped > 0.0));
        }
        powers.push(row);
    }

    let mut truncated = false;
    let mut bound = 0.0f64;
    let mut comps = Vec::with_capacity(outer_c.len());
    for p in outer_c {
        let mut acc = Polynomial::zero(n);
        let mut comp_bound = 0.0;
        for (m, c) in p.terms() {
            let mut prod = Polynomial::constant(n, Complex64::new(1.0, 0.0));
            let mut cut = false;
            let mut full_l1 = 1.0;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let (pw, pw_cut) = &powers[i][e as usize];
                let (next, dropped) = prod.mul_truncated(pw, d);
                cut |= *pw_cut || dropped > 0.0;
                prod = next;
                full_l1 *= l1[i].powi(e as i32);
            }
            if cut {
                comp_bound += c.norm() * (full_l1 - prod.l1_norm()).max(0.0);
            }
            truncated |= cut;
            acc = acc.add(&prod.scale(*c));
        }
        bound = bound.max(comp_bound);
        comps.push(acc);
    }
    Composition {
        map: HoloMap {
            dim: n,
            degree_bound: d,
            repr: Repr::Series(comps),
            certificate: None,
        },
        truncated,
        truncation_bound: bound,
    }
}

fn is_series_like(m: &HoloMap) -> bool {
    matches!(m.repr, Repr::Series(_) | Repr::Linear(_))
}

/// `outer o inner`.
///
/// Linear pairs multiply matrices; series pairs are substituted symbolically
/// and truncated at the larger degree bound, with any truncation reported.
/// Anything involving an automorphism or composite stays exact and
/// evaluation-based.
pub fn compose(outer: &HoloMap, inner: &HoloMap) -> Result<Composition> {
    if outer.dim != inner.dim {
        return Err(Error::DimensionMismatch {
            expected: outer.dim,
            found: inner.dim,
        });
    }
    let d = outer.degree_bound.max(inner.degree_bound);
    let mut out = match (&outer.repr, &inner.repr) {
        (Repr::Linear(a), Repr::Linear(b)) => Composition {
            map: HoloMap {
                dim: outer.dim,
                degree_bound: d,
                repr: Repr::Linear(a * b),
                certificate: None,
            },
            truncated: false,
            truncation_bound: 0.0,
        },
        _ if is_series_like(outer) && is_series_like(inner) => {
            compose_series(&outer.to_series().map, &inner.to_series().map, d)
        }
        _ => Composition {
            map: HoloMap {
                dim: outer.dim,
                degree_bound: d,
                repr: Repr::Composite {
                    outer: Arc::new(outer.clone()),
                    inner: Arc::new(inner.clone()),
                },
                certificate: None,
            },
            truncated: false,
            truncation_bound: 0.0,
        },
    };
    out.map = out.map.inherit_certificate(outer, inner);
    Ok(out)
}

/// The exact pointwise iterate `phi_j`, evaluated by cascade.
pub fn iterate_pointwise(map: &HoloMap, j: usize) -> Result<HoloMap> {
    if j == 0 {
        return Err(Error::InvalidParameter("iterate index must be positive".into()));
    }
    if j == 1 {
        return Ok(map.clone());
    }
    Ok(HoloMap {
        dim: map.dim,
        degree_bound: map.degree_bound,
        repr: Repr::Cascade {
            base: Arc::new(map.clone()),
            times: j,
        },
        certificate: map.certificate.clone(),
    })
}

/// The symbolic iterate `phi_j` by binary splitting (`phi_2m = phi_m o phi_m`).
///
/// Linear maps use matrix powers. Series maps fail with
/// [`Error::DegreeOverflow`] as soon as a composition would truncate; callers
/// then switch to [`iterate_pointwise`]. Closed-form kinds return the exact
/// cascade.
pub fn iterate(map: &HoloMap, j: usize) -> Result<HoloMap> {
    if j == 0 {
        return Err(Error::InvalidParameter("iterate index must be positive".into()));
    }
    if !map.is_polynomial() || !is_series_like(map) {
        return iterate_pointwise(map, j);
    }
    let mut result: Option<HoloMap> = None;
    let mut square = map.clone();
    let mut k = j;
    loop {
        if k & 1 == 1 {
            result = Some(match result {
                None => square.clone(),
                Some(r) => checked_compose(&square, &r)?,
            });
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        square = checked_compose(&square, &square)?;
    }
    let mut out = result.expect("j >= 1");
    out.certificate = map.certificate.clone();
    Ok(out)
}

fn checked_compose(outer: &HoloMap, inner: &HoloMap) -> Result<HoloMap> {
    let c = compose(outer, inner)?;
    if c.truncated {
        return Err(Error::DegreeOverflow {
            bound: c.map.degree_bound,
            dropped_mass: c.truncation_bound,
        });
    }
    Ok(c.map)
}
