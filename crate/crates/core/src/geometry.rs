//! Invariant geometry of the unit ball `B_n`: the involutive automorphisms,
//! the Bergman (= Kobayashi) distance, Bergman balls and the boundary
//! ellipsoids `E(k, zeta)`.
//!
//! All inner products are Hermitian, `<z, a> = sum z_i conj(a_i)`, and the
//! distance uses the natural logarithm, so `beta(0, w) = atanh |w|`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::vec::ComplexVec;

/// Points closer than this to the unit sphere are rejected by the checked
/// operations; the distance diverges there.
pub const BOUNDARY_MARGIN: f64 = 1e-14;

/// Tolerance on `|zeta| = 1` for boundary directions.
pub const SPHERE_TOLERANCE: f64 = 1e-12;

pub(crate) fn check_dims(a: &ComplexVec, b: &ComplexVec) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// Rejects points with `1 - |z| < BOUNDARY_MARGIN` (and non-finite points).
pub fn check_interior(z: &ComplexVec) -> Result<()> {
    let norm = z.norm();
    if !norm.is_finite() || 1.0 - norm < BOUNDARY_MARGIN {
        return Err(Error::OutsideBall {
            norm,
            limit: 1.0 - BOUNDARY_MARGIN,
        });
    }
    Ok(())
}

/// `phi_a(z)` without domain checks. With `a = 0` this is `-z`.
pub(crate) fn involution_unchecked(a: &ComplexVec, z: &ComplexVec) -> ComplexVec {
    let a2 = a.norm_sqr();
    if a2 == 0.0 {
        return -z;
    }
    let za = z.inner(a);
    let s_a = (1.0 - a2).sqrt();
    let denom = Complex64::new(1.0, 0.0) - za;
    // P_a(z) = (<z,a>/|a|^2) a and Q_a(z) = z - P_a(z)
    let coeff = za / a2;
    let entries = a
        .iter()
        .zip(z.iter())
        .map(|(&ai, &zi)| {
            let p = coeff * ai;
            let q = zi - p;
            (ai - p - q * s_a) / denom
        })
        .collect();
    ComplexVec::new(entries)
}

/// The involutive automorphism
/// `phi_a(z) = (a - P_a(z) - s_a Q_a(z)) / (1 - <z, a>)`, `s_a = sqrt(1 - |a|^2)`.
///
/// `phi_a(0) = a`, `phi_a(a) = 0` and `phi_a(phi_a(z)) = z`. For `a = 0` the
/// convention `phi_0(z) = -z` is used.
pub fn involution(a: &ComplexVec, z: &ComplexVec) -> Result<ComplexVec> {
    check_dims(a, z)?;
    check_interior(a)?;
    check_interior(z)?;
    Ok(involution_unchecked(a, z))
}

/// `1 - |phi_z(w)|^2 = (1 - |z|^2)(1 - |w|^2) / |1 - <w, z>|^2`, computed
/// without cancellation near the sphere.
fn one_minus_pseudo_distance_sqr(z: &ComplexVec, w: &ComplexVec) -> f64 {
    let denom = (Complex64::new(1.0, 0.0) - w.inner(z)).norm_sqr();
    (1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr()) / denom
}

/// Bergman distance `beta(z, w) = (1/2) ln((1 + |phi_z(w)|) / (1 - |phi_z(w)|))`.
pub fn bergman_distance(z: &ComplexVec, w: &ComplexVec) -> Result<f64> {
    check_dims(z, w)?;
    check_interior(z)?;
    check_interior(w)?;
    Ok(bergman_distance_unchecked(z, w))
}

pub(crate) fn bergman_distance_unchecked(z: &ComplexVec, w: &ComplexVec) -> f64 {
    if z == w {
        return 0.0;
    }
    let x = involution_unchecked(z, w).norm();
    if x < 0.5 {
        return x.atanh();
    }
    // (1+x)/(1-x) = (1+x)^2 / (1-x^2)
    let q = one_minus_pseudo_distance_sqr(z, w);
    ((1.0 + x).ln() - 0.5 * q.ln()).max(0.0)
}

/// The Bergman ball `B(a, r) = { z : beta(a, z) < r }`, stored with the
/// parameters of its ellipsoid description.
#[derive(Debug, Clone)]
pub struct BergmanBall {
    center: ComplexVec,
    radius: f64,
    /// `R = tanh r`
    big_r: f64,
    /// `a_r = (1 - R^2) / (1 - R^2 |a|^2) a`
    a_r: ComplexVec,
    /// `s = (1 - |a|^2) / (1 - R^2 |a|^2)`
    s: f64,
}

impl BergmanBall {
    pub fn new(center: ComplexVec, radius: f64) -> Result<Self> {
        check_interior(&center)?;
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Bergman ball radius must be positive, got {radius}"
            )));
        }
        let big_r = radius.tanh();
        let a2 = center.norm_sqr();
        let denom = 1.0 - big_r * big_r * a2;
        let a_r = center.scale_real((1.0 - big_r * big_r) / denom);
        let s = (1.0 - a2) / denom;
        Ok(Self {
            center,
            radius,
            big_r,
            a_r,
            s,
        })
    }

    pub fn center(&self) -> &ComplexVec {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn euclidean_radius(&self) -> f64 {
        self.big_r
    }

    pub fn shifted_center(&self) -> &ComplexVec {
        &self.a_r
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// Ellipsoid membership
    /// `|P_a(zeta) - a_r|^2 / (R^2 s^2) + |Q_a(zeta)|^2 / (R^2 s) < 1`.
    pub fn contains(&self, zeta: &ComplexVec) -> Result<bool> {
        check_dims(&self.center, zeta)?;
        check_interior(zeta)?;
        let a2 = self.center.norm_sqr();
        let r2 = self.big_r * self.big_r;
        if a2 == 0.0 {
            return Ok(zeta.norm_sqr() < r2);
        }
        let coeff = zeta.inner(&self.center) / a2;
        let p = self.center.scale(coeff);
        let q = zeta - &p;
        let along = (&p - &self.a_r).norm_sqr() / (r2 * self.s * self.s);
        let across = q.norm_sqr() / (r2 * self.s);
        Ok(along + across < 1.0)
    }
}

/// Membership in `E(k, zeta) = { z : |1 - <z, zeta>|^2 <= k (1 - |z|^2) }`.
pub fn ellipsoid_e_contains(k: f64, zeta: &ComplexVec, z: &ComplexVec) -> Result<bool> {
    check_dims(zeta, z)?;
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "ellipsoid parameter k must be positive, got {k}"
        )));
    }
    let zn = zeta.norm();
    if (zn - 1.0).abs() > SPHERE_TOLERANCE {
        return Err(Error::NotOnSphere { norm: zn });
    }
    check_interior(z)?;
    let lhs = (Complex64::new(1.0, 0.0) - z.inner(zeta)).norm_sqr();
    Ok(lhs <= k * (1.0 - z.norm_sqr()))
}

/// `beta(z, w) - |z - w| / 2`, which is never negative.
pub fn chord_gap(z: &ComplexVec, w: &ComplexVec) -> Result<f64> {
    Ok(bergman_distance(z, w)? - 0.5 * z.distance(w))
}
