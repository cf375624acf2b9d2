//! Reuleaux polygons in the plane.
//!
//! A Reuleaux polygon of width 1 has an odd number N = 2n+1 of vertices
//! x_0, …, x_2n in counterclockwise order; the boundary arc opposite x_j is
//! the unit-circle arc centered at x_j joining x_{j+n} and x_{j+n+1}
//! (indices mod N), which forces |x_j − x_{j+n}| = |x_j − x_{j+n+1}| = 1.
//!
//! Support evaluation classifies a direction into precomputed angular
//! sectors: arc sectors (where h(θ) = x_j·u(θ) + 1) alternate with vertex
//! cones (h(θ) = x_k·u(θ)) around the circle. Arc sectors have total width
//! π, and so do the vertex cones; the cone at x_k has the same width as the
//! arc centered at x_k.

use crate::error::{CwError, Result};
use crate::geom::Vec2;
use crate::tol::Tolerances;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Counterclockwise angular distance from `from` to `to`, in [0, 2π).
fn ccw_delta(from: f64, to: f64) -> f64 {
    (to - from).rem_euclid(TWO_PI)
}

/// Circular distance between two angles, in [0, π].
fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TWO_PI);
    d.min(TWO_PI - d)
}

/// What supports the body in a given direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorKind {
    /// Unit arc centered at the indexed vertex supports; local radius 1.
    Arc(usize),
    /// The indexed vertex supports; local radius 0.
    Vertex(usize),
}

#[derive(Debug, Clone, Copy)]
struct Sector {
    start: f64,
    width: f64,
    kind: SectorKind,
}

/// Mirror-symmetry certificate: the polygon is symmetric about the vertical
/// line x = `axis_x`, with vertex 0 the lone apex on that axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricTag {
    pub axis_x: f64,
}

/// Validated Reuleaux polygon of width 1.
#[derive(Debug, Clone)]
pub struct ReuleauxPolygon {
    vertices: Vec<Vec2>,
    sectors: Vec<Sector>,
    symmetric: Option<SymmetricTag>,
}

impl ReuleauxPolygon {
    /// Number of vertices N = 2n+1.
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// n, where N = 2n+1.
    pub fn half_count(&self) -> usize {
        (self.vertices.len() - 1) / 2
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn symmetric_tag(&self) -> Option<SymmetricTag> {
        self.symmetric
    }

    /// Boundary arcs as (center vertex index, start angle, end angle),
    /// counterclockwise; the arc is {x_j + u(t) : t ∈ [start, end]}.
    pub fn arcs(&self) -> Vec<(usize, f64, f64)> {
        self.sectors
            .iter()
            .filter_map(|s| match s.kind {
                SectorKind::Arc(j) => Some((j, s.start, s.start + s.width)),
                SectorKind::Vertex(_) => None,
            })
            .collect()
    }

    /// Classifies a direction angle: which feature supports there, and the
    /// circular distance to the nearest sector transition.
    pub fn classify(&self, theta: f64) -> (SectorKind, f64) {
        let t = theta.rem_euclid(TWO_PI);
        // Sectors are sorted by start angle and tile the circle; find the
        // last sector whose start is <= t (wrapping around below the first).
        let idx = match self.sectors.partition_point(|s| s.start <= t) {
            0 => self.sectors.len() - 1,
            k => k - 1,
        };
        let s = self.sectors[idx];
        let to_start = circ_dist(t, s.start);
        let to_end = circ_dist(t, s.start + s.width);
        (s.kind, to_start.min(to_end))
    }

    /// Support function h(θ) = max over the body of x·(cos θ, sin θ).
    pub fn support(&self, theta: f64) -> f64 {
        let u = Vec2::new(theta.cos(), theta.sin());
        match self.classify(theta).0 {
            SectorKind::Arc(j) => self.vertices[j].dot(u) + 1.0,
            SectorKind::Vertex(k) => self.vertices[k].dot(u),
        }
    }

    /// Curvature radius h″(θ) + h(θ) of the boundary point supporting in
    /// direction θ: exactly 1 on arcs, 0 at vertices. Directions within
    /// `tol.fd_step` of a sector transition are refused (the classification
    /// is discontinuous there).
    pub fn radius_profile(&self, theta: f64, tol: &Tolerances) -> Result<f64> {
        let (kind, dist) = self.classify(theta);
        if dist < tol.fd_step {
            return Err(CwError::BoundaryBand {
                theta,
                band: tol.fd_step,
            });
        }
        Ok(match kind {
            SectorKind::Arc(_) => 1.0,
            SectorKind::Vertex(_) => 0.0,
        })
    }
}

/// Validates a counterclockwise vertex list as a Reuleaux polygon of width 1
/// and precomputes its support sectors. With `symmetric` set, additionally
/// requires vertex 0 to be the lone apex on the vertical symmetry axis and
/// x_j to mirror x_{N−j}.
pub fn validate(vertices: &[Vec2], symmetric: bool, tol: &Tolerances) -> Result<ReuleauxPolygon> {
    let n_verts = vertices.len();
    if n_verts < 3 || n_verts % 2 == 0 {
        return Err(CwError::Parity { n: n_verts });
    }
    let n = (n_verts - 1) / 2;

    for (i, v) in vertices.iter().enumerate() {
        if !v.is_finite() {
            return Err(CwError::Param {
                reason: format!("vertex {i} is not finite"),
            });
        }
    }

    // Pairwise distinct, diameter exactly 1.
    let mut diameter: f64 = 0.0;
    for i in 0..n_verts {
        for j in (i + 1)..n_verts {
            let d = (vertices[i] - vertices[j]).norm();
            if d <= tol.eps_len {
                return Err(CwError::Param {
                    reason: format!("vertices {i} and {j} coincide"),
                });
            }
            diameter = diameter.max(d);
        }
    }
    if (diameter - 1.0).abs() > tol.eps_len {
        return Err(CwError::Diameter {
            diameter,
            tol: tol.eps_len,
        });
    }

    // Arc conditions: both far vertices of each arc at distance exactly 1.
    for j in 0..n_verts {
        for &k in &[(j + n) % n_verts, (j + n + 1) % n_verts] {
            let d = (vertices[j] - vertices[k]).norm();
            if (d - 1.0).abs() > tol.eps_len {
                return Err(CwError::ArcCondition { j, k, dist: d });
            }
        }
    }

    // Counterclockwise and strictly convex.
    for j in 0..n_verts {
        let a = vertices[j];
        let b = vertices[(j + 1) % n_verts];
        let c = vertices[(j + 2) % n_verts];
        let cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
        if cross <= 0.0 {
            return Err(CwError::Param {
                reason: format!("vertices are not in strictly convex counterclockwise order (turn at {})", (j + 1) % n_verts),
            });
        }
    }

    let tag = if symmetric {
        let axis_x = vertices[0].x;
        for j in 1..=n {
            let k = n_verts - j;
            let ex = (vertices[j].x + vertices[k].x - 2.0 * axis_x).abs();
            let ey = (vertices[j].y - vertices[k].y).abs();
            let err = ex.max(ey);
            if err > tol.eps_len {
                return Err(CwError::Symmetry { j, k, err });
            }
        }
        Some(SymmetricTag { axis_x })
    } else {
        None
    };

    // Sector table: arc j spans from the direction of x_{j+n} − x_j to the
    // direction of x_{j+n+1} − x_j; the vertex cone of x_{j+n+1} follows
    // until the next arc starts.
    let mut sectors = Vec::with_capacity(2 * n_verts);
    let arc_start = |j: usize| -> f64 { (vertices[(j + n) % n_verts] - vertices[j]).angle() };
    let arc_end = |j: usize| -> f64 { (vertices[(j + n + 1) % n_verts] - vertices[j]).angle() };
    let mut arc_width_total = 0.0;
    for j in 0..n_verts {
        let a = arc_start(j);
        let b = arc_end(j);
        let w = ccw_delta(a, b);
        arc_width_total += w;
        sectors.push(Sector {
            start: a,
            width: w,
            kind: SectorKind::Arc(j),
        });
        let next_a = arc_start((j + 1) % n_verts);
        sectors.push(Sector {
            start: b,
            width: ccw_delta(b, next_a),
            kind: SectorKind::Vertex((j + n + 1) % n_verts),
        });
    }
    // Arcs of a width-1 body turn through a total angle of exactly π.
    if (arc_width_total - std::f64::consts::PI).abs() > 1e-7 {
        return Err(CwError::Param {
            reason: format!(
                "arc sectors sum to {arc_width_total}, expected pi; vertex list is not a Reuleaux polygon"
            ),
        });
    }
    let total: f64 = sectors.iter().map(|s| s.width).sum();
    if (total - TWO_PI).abs() > 1e-7 {
        return Err(CwError::Param {
            reason: format!("support sectors cover {total} instead of the full circle"),
        });
    }
    sectors.sort_by(|a, b| a.start.total_cmp(&b.start));

    Ok(ReuleauxPolygon {
        vertices: vertices.to_vec(),
        sectors,
        symmetric: tag,
    })
}

/// Builds the regular Reuleaux polygon with `n_vertices` vertices (odd,
/// ≥ 3), width 1, apex vertex 0 at the top of the vertical symmetry axis
/// x = 0, counterclockwise. Mirror pairs are bitwise exact.
pub fn build_regular(n_vertices: usize, tol: &Tolerances) -> Result<ReuleauxPolygon> {
    if n_vertices < 3 || n_vertices % 2 == 0 {
        return Err(CwError::Parity { n: n_vertices });
    }
    let n = (n_vertices - 1) / 2;
    // Circumradius making the long chords (diameters) exactly 1.
    let r = 0.5 / (std::f64::consts::PI * n as f64 / n_vertices as f64).sin();

    let mut vertices = vec![Vec2::new(0.0, 0.0); n_vertices];
    vertices[0] = Vec2::new(0.0, r);
    for j in 1..=n {
        let ang = std::f64::consts::FRAC_PI_2 + TWO_PI * j as f64 / n_vertices as f64;
        let v = Vec2::new(r * ang.cos(), r * ang.sin());
        vertices[j] = v;
        vertices[n_vertices - j] = Vec2::new(-v.x, v.y);
    }
    validate(&vertices, true, tol)
}

/// Uniformly sampled 2π-periodic scalar field: value i lives at
/// θ_i = 2πi/N. Used for support-function samples.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarField {
    values: Vec<f64>,
}

impl PolarField {
    /// Wraps uniformly spaced samples (θ_i = 2πi/N). Needs at least 8.
    pub fn new(values: Vec<f64>) -> Result<PolarField> {
        if values.len() < 8 {
            return Err(CwError::Grid {
                reason: format!("{} samples are too few for a polar field", values.len()),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CwError::Grid {
                reason: "non-finite sample".into(),
            });
        }
        Ok(PolarField { values })
    }

    /// Validates explicit (θ_i, value) pairs: θ must be the uniform grid
    /// 2πi/N in order.
    pub fn from_points(points: &[(f64, f64)], tol: &Tolerances) -> Result<PolarField> {
        let n = points.len();
        for (i, &(theta, _)) in points.iter().enumerate() {
            let expect = TWO_PI * i as f64 / n as f64;
            if (theta - expect).abs() > tol.eps_len {
                return Err(CwError::Grid {
                    reason: format!(
                        "non-uniform grid: sample {i} at theta {theta}, expected {expect}"
                    ),
                });
            }
        }
        PolarField::new(points.iter().map(|&(_, v)| v).collect())
    }

    /// Samples a function on the uniform N-point grid.
    pub fn sample<F: Fn(f64) -> f64>(n: usize, f: F) -> Result<PolarField> {
        PolarField::new((0..n).map(|i| f(TWO_PI * i as f64 / n as f64)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn theta(&self, i: usize) -> f64 {
        TWO_PI * i as f64 / self.values.len() as f64
    }

    /// Grid spacing Δθ = 2π/N.
    pub fn spacing(&self) -> f64 {
        TWO_PI / self.values.len() as f64
    }
}

/// Mirror-symmetrizes a sampled support function about the vertical axis:
/// h₊(θ) = (h₀(θ) + h₀(π−θ)) / 2, the support function of the Minkowski
/// mean of the body and its vertical-axis reflection. The mirror θ ↦ π−θ
/// maps the uniform grid to itself only when the sample count is even; odd
/// counts are refused.
pub fn symmetrize(h0: &PolarField) -> Result<PolarField> {
    let n = h0.len();
    if n % 2 != 0 {
        return Err(CwError::Grid {
            reason: format!("symmetrize needs an even sample count, got {n}"),
        });
    }
    let vals = h0.values();
    let mirrored: Vec<f64> = (0..n)
        .map(|i| {
            let j = (n / 2 + n - i) % n; // θ_j = π − θ_i (mod 2π)
            0.5 * (vals[i] + vals[j])
        })
        .collect();
    PolarField::new(mirrored)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    /// The worked triangle: A=(0,0), B=(1,0), C=(1/2, √3/2).
    fn corner_triangle() -> ReuleauxPolygon {
        let v = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.5, 3.0_f64.sqrt() / 2.0),
        ];
        validate(&v, false, &tol()).unwrap()
    }

    /// Independent oracle: support by dense boundary sampling. Every
    /// boundary point of a Reuleaux polygon lies on some arc, so the max of
    /// x·u over densely sampled arcs converges to h(θ) from below at rate
    /// O(step²).
    fn support_oracle(p: &ReuleauxPolygon, theta: f64, samples_per_arc: usize) -> f64 {
        let u = Vec2::new(theta.cos(), theta.sin());
        let mut best = f64::NEG_INFINITY;
        for (j, a, b) in p.arcs() {
            let c = p.vertices()[j];
            for s in 0..=samples_per_arc {
                let t = a + (b - a) * s as f64 / samples_per_arc as f64;
                let x = c + Vec2::new(t.cos(), t.sin());
                best = best.max(x.dot(u));
            }
        }
        best
    }

    #[test]
    fn triangle_support_matches_worked_values() {
        let p = corner_triangle();
        // Downward: the arc centered at the top vertex C supports.
        let h_down = p.support(-FRAC_PI_2);
        assert!((h_down - (1.0 - 3.0_f64.sqrt() / 2.0)).abs() < 1e-15);
        // Upward: the vertex C itself supports.
        let h_up = p.support(FRAC_PI_2);
        assert!((h_up - 3.0_f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn support_agrees_with_dense_sampling_oracle() {
        let p = corner_triangle();
        for k in 0..200 {
            let theta = TWO_PI * k as f64 / 200.0 + 0.0013;
            let oracle = support_oracle(&p, theta, 20_000);
            let h = p.support(theta);
            assert!(
                (h - oracle).abs() < 1e-8,
                "theta {theta}: sector {h} vs oracle {oracle}"
            );
            assert!(h >= oracle - 1e-12, "sector value may not undershoot the oracle");
        }
    }

    #[test]
    fn regular_polygons_have_width_one() {
        for &n in &[3usize, 5, 7, 9, 13] {
            let p = build_regular(n, &tol()).unwrap();
            for k in 0..360 {
                let theta = TWO_PI * k as f64 / 360.0;
                let w = p.support(theta) + p.support(theta + PI);
                assert!((w - 1.0).abs() < 1e-12, "n = {n}, theta = {theta}: width {w}");
            }
        }
    }

    #[test]
    fn regular_pentagon_diameter_is_one() {
        let p = build_regular(5, &tol()).unwrap();
        let vs = p.vertices();
        let mut diam: f64 = 0.0;
        for i in 0..vs.len() {
            for j in (i + 1)..vs.len() {
                diam = diam.max((vs[i] - vs[j]).norm());
            }
        }
        assert!((diam - 1.0).abs() < 1e-12);
    }

    #[test]
    fn regular_build_is_exactly_symmetric_with_apex_up() {
        let p = build_regular(7, &tol()).unwrap();
        let tag = p.symmetric_tag().expect("regular polygon is symmetric");
        assert_eq!(tag.axis_x, 0.0);
        let vs = p.vertices();
        assert_eq!(vs[0].x, 0.0);
        assert!(vs.iter().all(|v| v.y <= vs[0].y), "vertex 0 is the apex");
        for j in 1..=3 {
            assert_eq!(vs[j].x, -vs[7 - j].x, "bitwise mirror");
            assert_eq!(vs[j].y, vs[7 - j].y);
        }
    }

    #[test]
    fn even_counts_are_parity_errors() {
        assert!(matches!(build_regular(4, &tol()), Err(CwError::Parity { n: 4 })));
        assert!(matches!(build_regular(1, &tol()), Err(CwError::Parity { .. })));
        let square = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        assert!(matches!(
            validate(&square, false, &tol()),
            Err(CwError::Parity { n: 4 })
        ));
    }

    #[test]
    fn scaled_triangle_is_a_diameter_error() {
        let v: Vec<Vec2> = corner_triangle()
            .vertices()
            .iter()
            .map(|p| *p * 1.1)
            .collect();
        assert!(matches!(
            validate(&v, false, &tol()),
            Err(CwError::Diameter { .. })
        ));
    }

    #[test]
    fn perturbed_vertex_breaks_arc_condition() {
        // Keep the diameter at 1 (the unperturbed pair still realizes it)
        // but shrink one unit chord.
        let p = build_regular(5, &tol());
        let mut v = p.unwrap().vertices().to_vec();
        let n = 2;
        let dir = (v[n] - v[0]) * (1e-6 / (v[n] - v[0]).norm());
        v[n] = v[n] - dir;
        let err = validate(&v, false, &tol()).unwrap_err();
        assert!(
            matches!(err, CwError::ArcCondition { .. } | CwError::Diameter { .. }),
            "got {err:?}"
        );
    }

    #[test]
    fn symmetric_flag_rejects_asymmetric_lists() {
        let p = corner_triangle();
        let err = validate(p.vertices(), true, &tol()).unwrap_err();
        assert!(matches!(err, CwError::Symmetry { .. }), "got {err:?}");
    }

    #[test]
    fn radius_profile_is_indicator_of_arcs() {
        let p = build_regular(3, &tol()).unwrap();
        // Downward direction: supported by the arc opposite the apex.
        assert_eq!(p.radius_profile(-FRAC_PI_2, &tol()).unwrap(), 1.0);
        // Upward: the apex vertex.
        assert_eq!(p.radius_profile(FRAC_PI_2, &tol()).unwrap(), 0.0);
    }

    #[test]
    fn radius_profile_refuses_transition_band() {
        let p = corner_triangle();
        // Arc centered at A=(0,0) starts exactly at direction of B−A, θ=0.
        let err = p.radius_profile(1e-5, &tol()).unwrap_err();
        assert!(matches!(err, CwError::BoundaryBand { .. }), "got {err:?}");
    }

    #[test]
    fn arc_sectors_total_half_turn() {
        for &n in &[3usize, 7, 11] {
            let p = build_regular(n, &tol()).unwrap();
            let total: f64 = p.arcs().iter().map(|&(_, a, b)| b - a).sum();
            assert!((total - PI).abs() < 1e-9, "n = {n}: arc total {total}");
        }
    }

    #[test]
    fn symmetrize_keeps_vertical_translation_only() {
        // h0 = symmetric body + translation (b1, b2); symmetrized result
        // must equal the symmetric body + (0, b2).
        let p = build_regular(5, &tol()).unwrap();
        let (b1, b2) = (0.37, -0.21);
        let n = 512;
        let h0 = PolarField::sample(n, |t| p.support(t) + b1 * t.cos() + b2 * t.sin()).unwrap();
        let hs = symmetrize(&h0).unwrap();
        for i in 0..n {
            let t = hs.theta(i);
            let expect = p.support(t) + b2 * t.sin();
            assert!(
                (hs.values()[i] - expect).abs() < 1e-12,
                "i = {i}: {} vs {expect}",
                hs.values()[i]
            );
        }
    }

    #[test]
    fn symmetrize_fixes_symmetric_fields() {
        let p = build_regular(7, &tol()).unwrap();
        let h0 = PolarField::sample(256, |t| p.support(t)).unwrap();
        let hs = symmetrize(&h0).unwrap();
        for i in 0..h0.len() {
            assert!((hs.values()[i] - h0.values()[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetrize_requires_even_grid() {
        let h = PolarField::sample(255, |t| t.cos().abs()).unwrap();
        assert!(matches!(symmetrize(&h), Err(CwError::Grid { .. })));
    }

    #[test]
    fn polar_field_rejects_nonuniform_points() {
        let pts: Vec<(f64, f64)> = (0..16)
            .map(|i| (TWO_PI * (i as f64 + 0.01 * (i % 2) as f64) / 16.0, 1.0))
            .collect();
        assert!(matches!(
            PolarField::from_points(&pts, &tol()),
            Err(CwError::Grid { .. })
        ));
        let pts: Vec<(f64, f64)> = (0..16).map(|i| (TWO_PI * i as f64 / 16.0, 1.0)).collect();
        assert!(PolarField::from_points(&pts, &tol()).is_ok());
    }
}
