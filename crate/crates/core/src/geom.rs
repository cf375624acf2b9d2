//! Plane and space vectors, unit directions, and the spherical chart.
//!
//! The chart used throughout is
//! `u(θ, φ) = (sin φ cos θ, sin φ sin θ, cos φ)` with θ ∈ [0, 2π) and
//! φ ∈ [0, π]; its coordinate tangents are `u_θ` (norm sin φ) and `u_φ`
//! (norm 1). The chart degenerates at φ ∈ {0, π}; operations that need the
//! tangent basis refuse directions at the poles.

use crate::error::{CwError, Result};
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Vector in the plane. The 2D modules use coordinates (x, y) where x is the
/// horizontal axis and y the vertical symmetry axis; when a plane figure is
/// rotated into space, (x, y) maps to (radial, height).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Polar angle in [0, 2π).
    pub fn angle(self) -> f64 {
        let a = self.y.atan2(self.x);
        if a < 0.0 {
            a + 2.0 * std::f64::consts::PI
        } else {
            a
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

/// Vector in space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn normalized(self) -> Vec3 {
        let n = self.norm();
        Vec3::new(self.x / n, self.y / n, self.z / n)
    }

    pub fn dist(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// Unit direction in space. Constructed only through validation or
/// normalization, so downstream code may rely on |u| = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitVec3(Vec3);

impl UnitVec3 {
    /// Validates |v| = 1 within `tol.eps_unit`.
    pub fn new(v: Vec3, tol: &Tolerances) -> Result<UnitVec3> {
        if !v.is_finite() {
            return Err(CwError::Param {
                reason: "non-finite direction".into(),
            });
        }
        let n = v.norm();
        if (n - 1.0).abs() > tol.eps_unit {
            return Err(CwError::Param {
                reason: format!("direction norm {n} differs from 1 beyond eps_unit"),
            });
        }
        Ok(UnitVec3(v))
    }

    /// Normalizes a nonzero vector.
    pub fn from_normalized(v: Vec3) -> UnitVec3 {
        UnitVec3(v.normalized())
    }

    pub fn get(self) -> Vec3 {
        self.0
    }

    pub fn antipode(self) -> UnitVec3 {
        UnitVec3(-self.0)
    }
}

impl From<UnitVec3> for Vec3 {
    fn from(u: UnitVec3) -> Vec3 {
        u.0
    }
}

/// Spherical coordinates (θ azimuth in [0, 2π), φ colatitude in [0, π]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalAngles {
    pub theta: f64,
    pub phi: f64,
}

impl SphericalAngles {
    /// Validates the coordinate ranges.
    pub fn new(theta: f64, phi: f64) -> Result<SphericalAngles> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(CwError::Param {
                reason: "non-finite spherical angles".into(),
            });
        }
        if !(0.0..2.0 * std::f64::consts::PI).contains(&theta) {
            return Err(CwError::Param {
                reason: format!("theta = {theta} outside [0, 2*pi)"),
            });
        }
        if !(0.0..=std::f64::consts::PI).contains(&phi) {
            return Err(CwError::Param {
                reason: format!("phi = {phi} outside [0, pi]"),
            });
        }
        Ok(SphericalAngles { theta, phi })
    }
}

/// Chart map: `u(θ, φ) = (sin φ cos θ, sin φ sin θ, cos φ)`.
pub fn unit_from_spherical(a: SphericalAngles) -> UnitVec3 {
    let (st, ct) = a.theta.sin_cos();
    let (sp, cp) = a.phi.sin_cos();
    UnitVec3(Vec3::new(sp * ct, sp * st, cp))
}

/// Inverse chart: φ = acos(z), θ = atan2(y, x) normalized to [0, 2π).
/// At the poles θ is conventionally 0.
pub fn spherical_from_unit(u: UnitVec3) -> SphericalAngles {
    let v = u.get();
    let phi = v.z.clamp(-1.0, 1.0).acos();
    let mut theta = v.y.atan2(v.x);
    if theta < 0.0 {
        theta += 2.0 * std::f64::consts::PI;
    }
    if theta >= 2.0 * std::f64::consts::PI {
        theta = 0.0;
    }
    SphericalAngles { theta, phi }
}

/// A deterministic unit vector orthogonal to the given unit vector: the
/// coordinate axis least aligned with it, Gram-Schmidt-projected. Used
/// wherever a reproducible frame is needed on a circle or tangent plane.
pub fn orthonormal_to(n: Vec3) -> Vec3 {
    let axes = [
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.0, 1.0, 0.0),
        Vec3::new(0.0, 0.0, 1.0),
    ];
    let comps = [n.x.abs(), n.y.abs(), n.z.abs()];
    let mut k = 0;
    for i in 1..3 {
        if comps[i] < comps[k] {
            k = i;
        }
    }
    let r = axes[k] - n * axes[k].dot(n);
    r / r.norm()
}

/// Coordinate tangent vectors `(u_θ, u_φ)` of the chart at the given angles.
/// `|u_θ| = sin φ`, `|u_φ| = 1`. Fails with a pole error when φ is at a
/// chart pole (sin φ = 0 leaves u_θ undefined as a direction).
pub fn tangent_basis(a: SphericalAngles, tol: &Tolerances) -> Result<(Vec3, Vec3)> {
    let margin = tol.eps_unit;
    if a.phi <= margin || a.phi >= std::f64::consts::PI - margin {
        return Err(CwError::Pole {
            phi: a.phi,
            margin,
        });
    }
    let (st, ct) = a.theta.sin_cos();
    let (sp, cp) = a.phi.sin_cos();
    let u_theta = Vec3::new(-sp * st, sp * ct, 0.0);
    let u_phi = Vec3::new(cp * ct, cp * st, -sp);
    Ok((u_theta, u_phi))
}
