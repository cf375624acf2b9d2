//! Surgery on ball polyhedra and rotation of planar bodies: both produce
//! generator sets whose unit-ball intersection is a body of constant
//! width 1.
//!
//! Meissner surgery starts from the ball polyhedron of an extremal set.
//! Picking one edge from every dual pair and adding the picked arcs to the
//! center set X yields M = B(X ∪ arcs): near each *retained* arc the
//! boundary keeps its sharp two-sphere wedge, while the region around its
//! dual edge is replaced by the inner patch of the spindle torus swept by
//! the retained arc. One bit per dual pair selects the retained edge.
//!
//! Rotating a mirror-symmetric Reuleaux polygon about its axis gives the
//! other 3D family: each off-axis vertex (x₁, x₃) sweeps to the horizontal
//! circle of radius |x₁| at height x₃ (mirror partners sweep to the same
//! circle), the apex stays a point, and the body of revolution is exactly
//! the intersection of unit balls centered on those circles and the apex.

use crate::ballpoly3d::{Circle3, EdgeArc, ReuleauxPolyhedron};
use crate::error::{CwError, Result};
use crate::geom::Vec3;
use crate::reuleaux2d::ReuleauxPolygon;
use crate::support3d::SpindleTorus;
use crate::tol::Tolerances;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// One bit per dual edge pair: `false` retains the pair's first edge (in
/// the deterministic edge order of the source polyhedron), `true` the
/// second. Surgery smooths the boundary near the *other* edge of the pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryChoice {
    pub bits: Vec<bool>,
}

impl SurgeryChoice {
    pub fn new(bits: Vec<bool>) -> SurgeryChoice {
        SurgeryChoice { bits }
    }

    /// All-`false`: retain the first edge of every dual pair.
    pub fn zeros(len: usize) -> SurgeryChoice {
        SurgeryChoice { bits: vec![false; len] }
    }

    /// All-`true`: retain the second edge of every dual pair.
    pub fn ones(len: usize) -> SurgeryChoice {
        SurgeryChoice { bits: vec![true; len] }
    }

    /// Bits from the binary expansion of `mask` (bit p of the integer is
    /// choice bit p), for exhaustive sweeps over all 2^len choices.
    pub fn from_mask(mask: usize, len: usize) -> SurgeryChoice {
        SurgeryChoice {
            bits: (0..len).map(|p| mask >> p & 1 == 1).collect(),
        }
    }
}

/// A circular arc generator: part of a two-sphere intersection circle,
/// counterclockwise from `t_start` to `t_end` in the circle frame.
#[derive(Debug, Clone)]
pub struct GeneratorArc {
    pub circle: Circle3,
    pub t_start: f64,
    pub t_end: f64,
}

impl GeneratorArc {
    fn from_edge(e: &EdgeArc) -> GeneratorArc {
        GeneratorArc {
            circle: e.circle,
            t_start: e.t_start,
            t_end: e.t_end,
        }
    }

    pub fn point_at(&self, t: f64) -> Vec3 {
        self.circle.point_at(t)
    }

    pub fn angular_width(&self) -> f64 {
        self.t_end - self.t_start
    }

    /// Largest distance from z to any point of the arc. The squared
    /// distance is sinusoidal in the angle, so the maximum is either at the
    /// unconstrained peak (if the peak azimuth lies in the range) or at an
    /// endpoint.
    pub fn farthest_from(&self, z: Vec3) -> f64 {
        let c = &self.circle;
        let v = z - c.center;
        let a = v.dot(c.e1);
        let b = v.dot(c.e2);
        // |z − p(t)|² = |v|² + ρ² − 2ρ(a cos t + b sin t); peak at the
        // azimuth opposite (a, b).
        let peak = (-b).atan2(-a);
        let width = self.t_end - self.t_start;
        let offset = (peak - self.t_start).rem_euclid(TWO_PI);
        let t = if offset <= width {
            self.t_start + offset
        } else if z.dist(self.point_at(self.t_start)) >= z.dist(self.point_at(self.t_end)) {
            self.t_start
        } else {
            self.t_end
        };
        z.dist(self.point_at(t))
    }
}

/// A full-circle generator (from rotated bodies), stored by center, radius
/// and rotation axis.
#[derive(Debug, Clone)]
pub struct GeneratorCircle {
    pub center: Vec3,
    pub radius: f64,
    /// Unit normal of the circle's plane.
    pub axis: Vec3,
}

impl GeneratorCircle {
    /// Largest distance from z to any point of the circle.
    pub fn farthest_from(&self, z: Vec3) -> f64 {
        let v = z - self.center;
        let ax = v.dot(self.axis);
        let pl = (v - self.axis * ax).norm();
        ((pl + self.radius).powi(2) + ax * ax).sqrt()
    }

    /// Deterministic in-plane frame for sampling.
    pub fn frame(&self) -> (Vec3, Vec3) {
        let e1 = crate::geom::orthonormal_to(self.axis);
        (e1, self.axis.cross(e1))
    }

    pub fn point_at(&self, t: f64) -> Vec3 {
        let (e1, e2) = self.frame();
        self.center + (e1 * t.cos() + e2 * t.sin()) * self.radius
    }
}

/// Points, arcs, and full circles whose unit-ball intersection defines a
/// body. The union must be nonempty with diameter at most 1, so that the
/// generators themselves lie inside the body.
#[derive(Debug, Clone, Default)]
pub struct GeneratorSet {
    pub points: Vec<Vec3>,
    pub arcs: Vec<GeneratorArc>,
    pub circles: Vec<GeneratorCircle>,
}

impl GeneratorSet {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.arcs.is_empty() && self.circles.is_empty()
    }

    /// Largest distance from z to any generator element (exact per
    /// element).
    pub fn farthest_from(&self, z: Vec3) -> f64 {
        let mut best: f64 = f64::NEG_INFINITY;
        for &p in &self.points {
            best = best.max(z.dist(p));
        }
        for a in &self.arcs {
            best = best.max(a.farthest_from(z));
        }
        for c in &self.circles {
            best = best.max(c.farthest_from(z));
        }
        best
    }

    /// Diameter of the generator union, computed by probing each sampled
    /// generator point against every element's exact farthest-distance
    /// form. Point-to-point and point-to-curve contributions are exact;
    /// curve-to-curve is exact on one side and sampled (`samples` per
    /// curve, endpoints included) on the other, an underestimate by
    /// O(samples⁻²).
    pub fn diameter(&self, samples: usize) -> f64 {
        let mut probes: Vec<Vec3> = self.points.clone();
        for a in &self.arcs {
            for s in 0..=samples {
                let t = a.t_start + a.angular_width() * s as f64 / samples as f64;
                probes.push(a.point_at(t));
            }
        }
        for c in &self.circles {
            for s in 0..samples {
                probes.push(c.point_at(TWO_PI * s as f64 / samples as f64));
            }
        }
        let mut best: f64 = 0.0;
        for &z in &probes {
            best = best.max(self.farthest_from(z));
        }
        best
    }

    /// Checks nonemptiness and the diameter-1 bound.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        if self.is_empty() {
            return Err(CwError::Param {
                reason: "empty generator set".into(),
            });
        }
        let d = self.diameter(512);
        if d > 1.0 + tol.eps_len {
            return Err(CwError::Diameter {
                diameter: d,
                tol: tol.eps_len,
            });
        }
        Ok(())
    }

    /// Uniform-in-angle discretization: generator points, plus
    /// `samples_per_curve` points per arc (endpoints included) and per
    /// circle. This is the constraint set the numeric support oracle works
    /// against.
    pub fn sample_points(&self, samples_per_curve: usize) -> Vec<Vec3> {
        let mut out = self.points.clone();
        for a in &self.arcs {
            for s in 0..=samples_per_curve {
                let t = a.t_start + a.angular_width() * s as f64 / samples_per_curve as f64;
                out.push(a.point_at(t));
            }
        }
        for c in &self.circles {
            for s in 0..samples_per_curve {
                out.push(c.point_at(TWO_PI * s as f64 / samples_per_curve as f64));
            }
        }
        out
    }
}

/// A Meissner polyhedron: the ball polyhedron of X ∪ (one retained arc per
/// dual edge pair).
#[derive(Debug, Clone)]
pub struct MeissnerBody {
    pub source: ReuleauxPolyhedron,
    pub choice: SurgeryChoice,
    pub generators: GeneratorSet,
}

impl MeissnerBody {
    /// Edge indices (into the source polyhedron) that were retained as
    /// generators, in dual-pair order.
    pub fn retained_edges(&self) -> Vec<usize> {
        self.source
            .dual_pairs
            .iter()
            .zip(&self.choice.bits)
            .map(|(&(a, b), &bit)| if bit { b } else { a })
            .collect()
    }

    /// Edge indices near which surgery smooths the boundary (the duals of
    /// the retained edges).
    pub fn smoothed_edges(&self) -> Vec<usize> {
        self.source
            .dual_pairs
            .iter()
            .zip(&self.choice.bits)
            .map(|(&(a, b), &bit)| if bit { a } else { b })
            .collect()
    }
}

/// Performs surgery: generators = X plus the retained arc of each dual
/// pair. The resulting body B(generators) has constant width 1; the width
/// is verified downstream by the support-field checks, not assumed here.
pub fn build_meissner(
    source: ReuleauxPolyhedron,
    choice: SurgeryChoice,
    tol: &Tolerances,
) -> Result<MeissnerBody> {
    let need = source.dual_pairs.len();
    if choice.bits.len() != need {
        return Err(CwError::ChoiceLength {
            got: choice.bits.len(),
            need,
        });
    }
    let mut generators = GeneratorSet {
        points: source.points().to_vec(),
        ..GeneratorSet::default()
    };
    for (&(a, b), &bit) in source.dual_pairs.iter().zip(&choice.bits) {
        let edge = if bit { &source.edges[b] } else { &source.edges[a] };
        generators.arcs.push(GeneratorArc::from_edge(edge));
    }
    generators.validate(tol)?;
    Ok(MeissnerBody {
        source,
        choice,
        generators,
    })
}

/// A body of revolution of a symmetric Reuleaux polygon: the apex stays on
/// the axis; every other vertex sweeps to a horizontal circle. The
/// polygon is stored re-centered so the symmetry axis is x = 0 and the
/// rotation axis is the z-axis.
#[derive(Debug, Clone)]
pub struct RotatedBody {
    pub generator_polygon: ReuleauxPolygon,
    pub apex: Vec3,
    /// One circle per mirror pair of off-axis vertices (partners sweep to
    /// the same circle), in vertex order 1..=n.
    pub circles: Vec<GeneratorCircle>,
    /// Unit direction of the rotation axis.
    pub axis: Vec3,
}

impl RotatedBody {
    pub fn generator_set(&self) -> GeneratorSet {
        GeneratorSet {
            points: vec![self.apex],
            arcs: Vec::new(),
            circles: self.circles.clone(),
        }
    }
}

/// Builds the circle generators of the body of revolution. Requires the
/// polygon to carry its mirror-symmetry certificate; the vertex planar
/// coordinates (x, y) map to radius |x| and height y after shifting the
/// symmetry axis to x = 0.
pub fn rotate_generators(polygon: &ReuleauxPolygon, tol: &Tolerances) -> Result<RotatedBody> {
    let Some(tag) = polygon.symmetric_tag() else {
        return Err(CwError::NotSymmetric);
    };
    let n = polygon.half_count();
    let verts = polygon.vertices();
    let shifted: Vec<crate::geom::Vec2> = verts
        .iter()
        .map(|v| crate::geom::Vec2::new(v.x - tag.axis_x, v.y))
        .collect();
    let recentered = crate::reuleaux2d::validate(&shifted, true, tol)?;

    let apex = Vec3::new(0.0, 0.0, shifted[0].y);
    let axis = Vec3::new(0.0, 0.0, 1.0);
    // Mirror partners j and N−j have opposite x and equal y: one circle
    // per pair, taken from j = 1..=n.
    let circles: Vec<GeneratorCircle> = (1..=n)
        .map(|j| GeneratorCircle {
            center: Vec3::new(0.0, 0.0, shifted[j].y),
            radius: shifted[j].x.abs(),
            axis,
        })
        .collect();
    let body = RotatedBody {
        generator_polygon: recentered,
        apex,
        circles,
        axis,
    };
    body.generator_set().validate(tol)?;
    Ok(body)
}

/// The body of all points within distance 1 of a circle of radius r < 1 is
/// the inner portion of a spindle torus with tips at distance
/// a = √(1 − r²) above and below the circle plane; r = 0 degenerates to
/// the unit ball around the center.
pub fn spindle_of_circle(c: &GeneratorCircle, tol: &Tolerances) -> Result<SpindleTorus> {
    if !(0.0..1.0).contains(&c.radius) {
        return Err(CwError::Radius { radius: c.radius });
    }
    let a = (1.0 - c.radius * c.radius).sqrt();
    SpindleTorus::new(a, c.center, c.axis, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballpoly3d::{build_combinatorics, PointSet3};
    use crate::reuleaux2d::build_regular;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn tetrahedron_body() -> ReuleauxPolyhedron {
        let pts = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.5, 3.0_f64.sqrt() / 2.0, 0.0),
            Vec3::new(0.5, 3.0_f64.sqrt() / 6.0, (2.0_f64 / 3.0).sqrt()),
        ];
        build_combinatorics(PointSet3::new(pts, &tol()).unwrap(), &tol()).unwrap()
    }

    #[test]
    fn choice_length_is_enforced() {
        let rp = tetrahedron_body();
        let err = build_meissner(rp, SurgeryChoice::zeros(2), &tol()).unwrap_err();
        assert!(matches!(err, CwError::ChoiceLength { got: 2, need: 3 }));
    }

    #[test]
    fn zeros_choice_retains_one_face_boundary() {
        // With edges ordered by supporting pair, the first edge of each
        // dual pair is the one whose centers include point 0: the zeros
        // choice keeps the boundary of x0's face sharp and smooths the
        // three edges meeting at the vertex x0.
        let rp = tetrahedron_body();
        let m = build_meissner(rp, SurgeryChoice::zeros(3), &tol()).unwrap();
        assert_eq!(m.generators.points.len(), 4);
        assert_eq!(m.generators.arcs.len(), 3);
        for arc in &m.generators.arcs {
            // Every retained arc lies on the sphere around x0.
            for s in 0..=8 {
                let t = arc.t_start + arc.angular_width() * s as f64 / 8.0;
                let d = arc.point_at(t).dist(m.generators.points[0]);
                assert!((d - 1.0).abs() < 1e-12);
            }
        }
        for &ei in &m.smoothed_edges() {
            let (a, b) = m.source.edges[ei].endpoints;
            assert!(a == 0 || b == 0, "smoothed edges meet at vertex 0");
        }
    }

    #[test]
    fn ones_choice_smooths_one_face_boundary() {
        let rp = tetrahedron_body();
        let m = build_meissner(rp, SurgeryChoice::ones(3), &tol()).unwrap();
        for &ei in &m.retained_edges() {
            let (a, b) = m.source.edges[ei].endpoints;
            assert!(a == 0 || b == 0, "retained edges meet at vertex 0");
        }
        for &ei in &m.smoothed_edges() {
            let (i, j) = m.source.edges[ei].pair;
            assert!(i == 0 || j == 0, "smoothed edges border x0's face");
        }
    }

    #[test]
    fn generator_diameter_is_one() {
        let rp = tetrahedron_body();
        for mask in 0..8 {
            let m = build_meissner(rp.clone(), SurgeryChoice::from_mask(mask, 3), &tol()).unwrap();
            let d = m.generators.diameter(512);
            assert!(d <= 1.0 + 1e-9, "mask {mask}: diameter {d}");
            assert!(d >= 1.0 - 1e-9, "mask {mask}: diameter {d} (tips are unit-distant)");
        }
    }

    #[test]
    fn arc_farthest_matches_dense_sampling() {
        let rp = tetrahedron_body();
        let m = build_meissner(rp, SurgeryChoice::zeros(3), &tol()).unwrap();
        let arc = &m.generators.arcs[0];
        for &z in &[
            Vec3::new(0.3, 0.2, 0.1),
            Vec3::new(-0.5, 0.8, -0.2),
            Vec3::new(0.5, 0.29, 0.41),
        ] {
            let mut dense: f64 = 0.0;
            for s in 0..=20_000 {
                let t = arc.t_start + arc.angular_width() * s as f64 / 20_000.0;
                dense = dense.max(z.dist(arc.point_at(t)));
            }
            let exact = arc.farthest_from(z);
            assert!((exact - dense).abs() < 1e-9, "exact {exact} vs dense {dense}");
            assert!(exact >= dense - 1e-12);
        }
    }

    #[test]
    fn circle_farthest_matches_dense_sampling() {
        let c = GeneratorCircle {
            center: Vec3::new(0.1, -0.2, 0.3),
            radius: 0.7,
            axis: Vec3::new(0.0, 0.6, 0.8),
        };
        for &z in &[Vec3::new(0.9, 0.1, -0.4), Vec3::new(-0.3, 0.5, 0.2)] {
            let mut dense: f64 = 0.0;
            for s in 0..20_000 {
                dense = dense.max(z.dist(c.point_at(TWO_PI * s as f64 / 20_000.0)));
            }
            let exact = c.farthest_from(z);
            // The sampled peak undershoots the true one by O(step²).
            assert!(exact >= dense - 1e-12);
            assert!((exact - dense).abs() < 1e-7);
        }
    }

    #[test]
    fn five_point_set_has_sixteen_valid_choices() {
        let pts = {
            let rho = 3.0_f64.sqrt() / 2.0;
            let half = (1.0 / 3.0_f64.sqrt()).asin();
            let c = |az: f64| Vec3::new(rho * az.cos(), rho * az.sin(), 0.5);
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(0.0, 0.0, 1.0),
                c(-half),
                c(0.0),
                c(half),
            ]
        };
        let rp = build_combinatorics(PointSet3::new(pts, &tol()).unwrap(), &tol()).unwrap();
        assert_eq!(rp.dual_pairs.len(), 4);
        for mask in 0..16 {
            let m = build_meissner(rp.clone(), SurgeryChoice::from_mask(mask, 4), &tol()).unwrap();
            assert_eq!(m.generators.arcs.len(), 4);
            assert!(m.generators.diameter(256) <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn rotated_triangle_has_one_point_and_one_circle() {
        let p = build_regular(3, &tol()).unwrap();
        let rb = rotate_generators(&p, &tol()).unwrap();
        assert_eq!(rb.circles.len(), 1);
        assert!((rb.circles[0].radius - 0.5).abs() < 1e-12);
        let r_circ = 1.0 / 3.0_f64.sqrt();
        assert!((rb.apex.z - r_circ).abs() < 1e-12);
        assert!((rb.circles[0].center.z - (r_circ - 3.0_f64.sqrt() / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn rotated_heptagon_has_three_circles() {
        let p = build_regular(7, &tol()).unwrap();
        let rb = rotate_generators(&p, &tol()).unwrap();
        assert_eq!(rb.circles.len(), 3);
        // Radii are the |x| of the three mirror pairs, all distinct.
        let mut radii: Vec<f64> = rb.circles.iter().map(|c| c.radius).collect();
        radii.sort_by(f64::total_cmp);
        assert!(radii.windows(2).all(|w| w[1] - w[0] > 1e-3));
    }

    #[test]
    fn rotation_requires_symmetry_tag() {
        let v = vec![
            crate::geom::Vec2::new(0.0, 0.0),
            crate::geom::Vec2::new(1.0, 0.0),
            crate::geom::Vec2::new(0.5, 3.0_f64.sqrt() / 2.0),
        ];
        let p = crate::reuleaux2d::validate(&v, false, &tol()).unwrap();
        assert!(matches!(
            rotate_generators(&p, &tol()),
            Err(CwError::NotSymmetric)
        ));
    }

    #[test]
    fn off_axis_symmetric_polygon_is_recentered() {
        let p = build_regular(5, &tol()).unwrap();
        let moved: Vec<crate::geom::Vec2> = p
            .vertices()
            .iter()
            .map(|v| crate::geom::Vec2::new(v.x + 0.25, v.y))
            .collect();
        let q = crate::reuleaux2d::validate(&moved, true, &tol()).unwrap();
        let rb = rotate_generators(&q, &tol()).unwrap();
        assert_eq!(rb.apex.x, 0.0);
        assert_eq!(rb.apex.y, 0.0);
        let reference = rotate_generators(&build_regular(5, &tol()).unwrap(), &tol()).unwrap();
        for (a, b) in rb.circles.iter().zip(&reference.circles) {
            assert!((a.radius - b.radius).abs() < 1e-12);
            assert!((a.center.z - b.center.z).abs() < 1e-12);
        }
    }

    #[test]
    fn spindle_parameters_from_circles() {
        let t = tol();
        let mk = |r: f64| GeneratorCircle {
            center: Vec3::ZERO,
            radius: r,
            axis: Vec3::new(0.0, 0.0, 1.0),
        };
        let s = spindle_of_circle(&mk(3.0_f64.sqrt() / 2.0), &t).unwrap();
        assert!((s.a - 0.5).abs() < 1e-15);
        let s = spindle_of_circle(&mk(0.6), &t).unwrap();
        assert!((s.a - 0.8).abs() < 1e-15);
        let s = spindle_of_circle(&mk(0.0), &t).unwrap();
        assert!((s.a - 1.0).abs() < 1e-15);
        assert!(matches!(
            spindle_of_circle(&mk(1.0), &t),
            Err(CwError::Radius { .. })
        ));
    }
}
