//! Serializable body descriptions: the JSON file schema the CLI reads and
//! writes, and construction of the internal bodies those files describe.
//!
//! A spec file is a single JSON object tagged by `kind`. Coordinates are in
//! width units (the constructed body has width 1). Building a spec funnels
//! into the same validated constructors the rest of the crate uses, so a
//! spec that builds is a spec whose geometry checks out.

use crate::ballpoly3d::{build_combinatorics, PointSet3, ReuleauxPolyhedron};
use crate::error::{CwError, Result};
use crate::geom::{Vec2, Vec3};
use crate::meissner3d::{
    build_meissner, rotate_generators, MeissnerBody, RotatedBody, SurgeryChoice,
};
use crate::reuleaux2d::ReuleauxPolygon;
use crate::support3d::AnalyticBody;
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};

/// File schema for describing a body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    /// Planar Reuleaux polygon given by its counterclockwise vertices.
    Reuleaux2d {
        vertices: Vec<[f64; 2]>,
        /// Require (and certify) mirror symmetry about a vertical axis
        /// with vertex 0 the apex.
        #[serde(default)]
        symmetric: bool,
    },
    /// Finite 3D point set; builds the combinatorics of its ball
    /// polyhedron (intersection of unit balls centered at the points).
    Pointset3 { points: Vec<[f64; 3]> },
    /// Surgered ball polyhedron: the point set plus one retained-edge bit
    /// per dual edge pair ('0' keeps the first edge of the pair, '1' the
    /// second).
    Meissner { points: Vec<[f64; 3]>, choice: String },
    /// Body of revolution of a mirror-symmetric Reuleaux polygon about
    /// its symmetry axis (stored vertically; the axis becomes z).
    Rotated { vertices: Vec<[f64; 2]> },
}

/// A body constructed from a spec, in its internal representation.
#[derive(Debug, Clone)]
pub enum BuiltBody {
    Planar(ReuleauxPolygon),
    Polyhedron(ReuleauxPolyhedron),
    Meissner(MeissnerBody),
    Rotated(RotatedBody),
}

/// Parses a JSON body spec.
pub fn spec_from_json(s: &str) -> Result<BodySpec> {
    serde_json::from_str(s).map_err(|e| CwError::Param {
        reason: format!("body spec: {e}"),
    })
}

/// Serializes a body spec as pretty-printed JSON.
pub fn spec_to_json(spec: &BodySpec) -> String {
    serde_json::to_string_pretty(spec).expect("a body spec always serializes")
}

fn require_finite<'a, I: IntoIterator<Item = &'a f64>>(values: I) -> Result<()> {
    if values.into_iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(CwError::Param {
            reason: "body spec: coordinates must be finite".into(),
        })
    }
}

fn parse_choice(s: &str) -> Result<SurgeryChoice> {
    let mut bits = Vec::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '0' => bits.push(false),
            '1' => bits.push(true),
            _ => {
                return Err(CwError::Param {
                    reason: format!("choice string: expected only '0'/'1', got {c:?}"),
                })
            }
        }
    }
    Ok(SurgeryChoice::new(bits))
}

fn choice_string(choice: &SurgeryChoice) -> String {
    choice
        .bits
        .iter()
        .map(|&b| if b { '1' } else { '0' })
        .collect()
}

fn planar_vertices(raw: &[[f64; 2]]) -> Result<Vec<Vec2>> {
    require_finite(raw.iter().flatten())?;
    Ok(raw.iter().map(|&[x, y]| Vec2::new(x, y)).collect())
}

fn spatial_points(raw: &[[f64; 3]]) -> Result<Vec<Vec3>> {
    require_finite(raw.iter().flatten())?;
    Ok(raw.iter().map(|&[x, y, z]| Vec3::new(x, y, z)).collect())
}

/// Builds the body a spec describes, running the full validation of the
/// underlying constructors.
pub fn build_body(spec: &BodySpec, tol: &Tolerances) -> Result<BuiltBody> {
    match spec {
        BodySpec::Reuleaux2d {
            vertices,
            symmetric,
        } => {
            let verts = planar_vertices(vertices)?;
            Ok(BuiltBody::Planar(crate::reuleaux2d::validate(
                &verts, *symmetric, tol,
            )?))
        }
        BodySpec::Pointset3 { points } => {
            let set = PointSet3::new(spatial_points(points)?, tol)?;
            Ok(BuiltBody::Polyhedron(build_combinatorics(set, tol)?))
        }
        BodySpec::Meissner { points, choice } => {
            let set = PointSet3::new(spatial_points(points)?, tol)?;
            let poly = build_combinatorics(set, tol)?;
            Ok(BuiltBody::Meissner(build_meissner(
                poly,
                parse_choice(choice)?,
                tol,
            )?))
        }
        BodySpec::Rotated { vertices } => {
            let verts = planar_vertices(vertices)?;
            let polygon = crate::reuleaux2d::validate(&verts, true, tol)?;
            Ok(BuiltBody::Rotated(rotate_generators(&polygon, tol)?))
        }
    }
}

/// Re-emits the spec of a built body. Building the result reproduces the
/// same body: the round trip spec → build → spec is idempotent (a rotated
/// body re-emits its re-centered generator polygon, which is already
/// centered, so a second trip changes nothing).
pub fn spec_from_body(body: &BuiltBody) -> BodySpec {
    match body {
        BuiltBody::Planar(p) => BodySpec::Reuleaux2d {
            vertices: p.vertices().iter().map(|v| [v.x, v.y]).collect(),
            symmetric: p.symmetric_tag().is_some(),
        },
        BuiltBody::Polyhedron(rp) => BodySpec::Pointset3 {
            points: rp.points().iter().map(|p| [p.x, p.y, p.z]).collect(),
        },
        BuiltBody::Meissner(m) => BodySpec::Meissner {
            points: m.source.points().iter().map(|p| [p.x, p.y, p.z]).collect(),
            choice: choice_string(&m.choice),
        },
        BuiltBody::Rotated(r) => BodySpec::Rotated {
            vertices: r
                .generator_polygon
                .vertices()
                .iter()
                .map(|v| [v.x, v.y])
                .collect(),
        },
    }
}

impl BuiltBody {
    /// The closed-form 3D support field of the body, for the kinds that
    /// define one. Planar bodies have no 3D field; a bare ball polyhedron
    /// is not constant-width (its width exceeds 1 across dual edge pairs)
    /// and needs a surgery choice first.
    pub fn analytic(&self, tol: &Tolerances) -> Result<AnalyticBody> {
        match self {
            BuiltBody::Planar(_) => Err(CwError::Param {
                reason: "a planar polygon has no 3D support field; rotate it".into(),
            }),
            BuiltBody::Polyhedron(_) => Err(CwError::Param {
                reason: "a ball polyhedron is not constant-width; apply a surgery choice".into(),
            }),
            BuiltBody::Meissner(m) => AnalyticBody::from_meissner(m, tol),
            BuiltBody::Rotated(r) => AnalyticBody::from_rotated(r, tol),
        }
    }
}

/// Spec of the regular Reuleaux polygon with `n` vertices.
pub fn regular_reuleaux_spec(n: usize, tol: &Tolerances) -> Result<BodySpec> {
    let polygon = crate::reuleaux2d::build_regular(n, tol)?;
    Ok(BodySpec::Reuleaux2d {
        vertices: polygon.vertices().iter().map(|v| [v.x, v.y]).collect(),
        symmetric: true,
    })
}

/// Spec of the unit-diameter regular tetrahedron point set.
pub fn tetrahedron_spec() -> BodySpec {
    BodySpec::Pointset3 {
        points: vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.5, 3.0_f64.sqrt() / 2.0, 0.0],
            [0.5, 3.0_f64.sqrt() / 6.0, (2.0_f64 / 3.0).sqrt()],
        ],
    }
}
