//! Ball polyhedra of finite point sets and their combinatorics.
//!
//! For a finite set X of diameter 1, the ball polyhedron B(X) is the
//! intersection of the closed unit balls centered at the points of X. Its
//! boundary decomposes into spherical faces (one per center that actually
//! touches the boundary), circular edges (components of the pairwise sphere
//! intersections on the boundary, split at members of X), and vertices
//! (points on at least three spheres, plus members of X sitting in the
//! interior of a two-sphere intersection circle).
//!
//! A set X with exactly 2m−2 diametric pairs — the most a diameter-1 set of
//! m points can have — is *extremal*; equivalently, the vertex set of B(X)
//! is X itself. For extremal X the edge count is 2m−2 and edges come in
//! dual pairs: the edge supported by centers {i,j} with endpoint vertices
//! {k,l} is matched with the edge supported by {k,l} with endpoints {i,j}.
//!
//! Numerical notes: inputs are expected to be constructed, not measured;
//! validation rejects near-misses rather than snapping. Edge assembly
//! scans *all* center pairs, not only diametric ones: for m ≥ 5 an extremal
//! set can carry boundary arcs on non-diametric pairs (and a diametric pair
//! can carry zero or two arcs), so restricting the scan would break the
//! dual-pairing invariant.

use crate::error::{CwError, Result};
use crate::geom::{orthonormal_to, Vec3};
use crate::tol::Tolerances;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Matching tolerance for identifying computed vertex positions with input
/// points. Vertex solves are well-conditioned for width-scale geometry, so
/// this sits far above float noise and far below feature separation.
const VERTEX_MATCH_EPS: f64 = 1e-7;

/// Validated point set: m ≥ 4 distinct finite points, diameter exactly 1,
/// and tight (no point can be removed without changing B(X)).
#[derive(Debug, Clone)]
pub struct PointSet3 {
    points: Vec<Vec3>,
}

impl PointSet3 {
    pub fn new(points: Vec<Vec3>, tol: &Tolerances) -> Result<PointSet3> {
        if points.len() < 4 {
            return Err(CwError::Param {
                reason: format!("point set needs at least 4 points, got {}", points.len()),
            });
        }
        for (i, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(CwError::Param {
                    reason: format!("point {i} is not finite"),
                });
            }
        }
        let mut diameter: f64 = 0.0;
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let d = points[i].dist(points[j]);
                if d <= tol.eps_len {
                    return Err(CwError::Degenerate { dist: d });
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
        // Tightness: removing x may not leave B(X) unchanged, i.e. the ball
        // intersection of the remaining points must reach beyond distance 1
        // from x somewhere.
        for i in 0..points.len() {
            let rest: Vec<Vec3> = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| *p)
                .collect();
            let reach = farthest_in_ball_intersection(points[i], &rest, tol);
            if reach <= 1.0 + tol.eps_len {
                return Err(CwError::NotTight { index: i });
            }
        }
        Ok(PointSet3 { points })
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Is z within every unit ball centered at `centers` (distance ≤ 1 + eps)?
fn in_ball_intersection(z: Vec3, centers: &[Vec3], eps: f64) -> bool {
    centers.iter().all(|&c| z.dist(c) <= 1.0 + eps)
}

/// Intersection points of the three unit spheres centered at a, b, c:
/// zero, one (tangent), or two points. Degenerate center triples
/// (coincident/collinear) yield no points.
fn triple_sphere_points(a: Vec3, b: Vec3, c: Vec3) -> Vec<Vec3> {
    let d = b - a;
    let dist = d.norm();
    if dist < 1e-12 || dist >= 2.0 {
        return Vec::new();
    }
    let ex = d / dist;
    let ac = c - a;
    let i = ex.dot(ac);
    let ey_raw = ac - ex * i;
    let j = ey_raw.norm();
    if j < 1e-12 {
        return Vec::new(); // collinear centers: no isolated intersection
    }
    let ey = ey_raw / j;
    let ez = ex.cross(ey);
    // Equal radii 1: the radical plane of a,b sits at half distance.
    let px = dist / 2.0;
    let py = (i * i + j * j - 2.0 * i * px) / (2.0 * j);
    let h2 = 1.0 - px * px - py * py;
    if h2 < -1e-12 {
        return Vec::new();
    }
    let base = a + ex * px + ey * py;
    if h2 <= 1e-12 {
        return vec![base];
    }
    let h = h2.sqrt();
    vec![base + ez * h, base - ez * h]
}

/// Maximum distance from `from` to the intersection of unit balls centered
/// at `centers`. The maximizer of a convex function over a ball
/// intersection sits where the cone of active sphere normals contains the
/// ray from `from`: at a vertex (three active spheres), on an edge circle
/// (two), or on a face (one). All three candidate classes are enumerated
/// and feasibility-filtered; the per-sphere and per-circle candidates have
/// closed forms.
pub fn farthest_in_ball_intersection(from: Vec3, centers: &[Vec3], tol: &Tolerances) -> f64 {
    let eps = tol.eps_len;
    let mut best = f64::NEG_INFINITY;
    let mut consider = |z: Vec3| {
        if in_ball_intersection(z, centers, eps) {
            best = best.max(z.dist(from));
        }
    };

    let n = centers.len();
    // Face candidates: farthest point of each full ball.
    for &c in centers {
        let v = c - from;
        let vn = v.norm();
        if vn > 1e-12 {
            consider(c + v / vn);
        } else {
            consider(c + Vec3::new(1.0, 0.0, 0.0));
        }
    }
    // Edge candidates: farthest point of each pairwise intersection circle.
    for i in 0..n {
        for j in (i + 1)..n {
            let d = centers[i].dist(centers[j]);
            if d < 1e-12 || d >= 2.0 {
                continue;
            }
            let center = (centers[i] + centers[j]) * 0.5;
            let normal = (centers[j] - centers[i]) / d;
            let rho = (1.0 - d * d / 4.0).sqrt();
            let v = center - from;
            let v_plane = v - normal * v.dot(normal);
            let vn = v_plane.norm();
            if vn > 1e-12 {
                consider(center + v_plane * (rho / vn));
            } else {
                // `from` on the circle axis: every circle point is
                // equidistant; any representative works.
                let e1 = orthonormal_to(normal);
                consider(center + e1 * rho);
            }
        }
    }
    // Vertex candidates: triple-sphere intersections.
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                for z in triple_sphere_points(centers[i], centers[j], centers[k]) {
                    consider(z);
                }
            }
        }
    }
    best
}


/// The pairs of a point set at distance exactly 1 — the pairs realizing the
/// diameter.
#[derive(Debug, Clone)]
pub struct DiametricGraph {
    m: usize,
    pairs: Vec<(usize, usize)>,
    degree: Vec<usize>,
}

impl DiametricGraph {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn count(&self) -> usize {
        self.pairs.len()
    }

    /// The most diametric pairs a diameter-1 set of m points can have.
    pub fn bound(&self) -> usize {
        2 * self.m - 2
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degree[i]
    }

    /// Connectivity over the points that have at least one diametric
    /// partner (isolated points are vacuously outside the edge structure).
    pub fn is_connected(&self) -> bool {
        let active: Vec<usize> = (0..self.m).filter(|&i| self.degree[i] > 0).collect();
        let Some(&start) = active.first() else {
            return false;
        };
        let mut seen = vec![false; self.m];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.pairs {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        active.iter().all(|&i| seen[i]) && active.len() == self.m
    }
}

/// Collects all pairs at distance 1 within `eps_len` and enforces the
/// 2m−2 bound (a valid diameter-1 configuration can never exceed it; an
/// excess indicates tolerance misuse upstream).
pub fn diametric_pairs(x: &PointSet3, tol: &Tolerances) -> Result<DiametricGraph> {
    let m = x.len();
    let mut pairs = Vec::new();
    let mut degree = vec![0usize; m];
    for i in 0..m {
        for j in (i + 1)..m {
            if (x.points()[i].dist(x.points()[j]) - 1.0).abs() <= tol.eps_len {
                pairs.push((i, j));
                degree[i] += 1;
                degree[j] += 1;
            }
        }
    }
    let bound = 2 * m - 2;
    if pairs.len() > bound {
        return Err(CwError::BoundViolation {
            pairs: pairs.len(),
            bound,
        });
    }
    Ok(DiametricGraph { m, pairs, degree })
}

/// The intersection circle of two unit spheres, with a deterministic
/// in-plane frame: points are center + radius·(cos t · e1 + sin t · e2).
#[derive(Debug, Clone, Copy)]
pub struct Circle3 {
    pub center: Vec3,
    pub radius: f64,
    /// Unit normal of the circle's plane (direction from the first center
    /// to the second).
    pub normal: Vec3,
    pub e1: Vec3,
    pub e2: Vec3,
}

impl Circle3 {
    pub fn point_at(&self, t: f64) -> Vec3 {
        self.center + (self.e1 * t.cos() + self.e2 * t.sin()) * self.radius
    }

    /// Frame angle in [0, 2π) of a point assumed to lie on the circle.
    pub fn angle_of(&self, p: Vec3) -> f64 {
        let v = p - self.center;
        v.dot(self.e2).atan2(v.dot(self.e1)).rem_euclid(TWO_PI)
    }
}

/// ∂B(a) ∩ ∂B(b): center (a+b)/2, radius √(1 − |a−b|²/4), plane normal to
/// a−b. Coincident or ≥ 2-separated centers have no circle.
pub fn circle_of_pair(a: Vec3, b: Vec3, tol: &Tolerances) -> Result<Circle3> {
    let d = a.dist(b);
    if d <= tol.eps_len || d >= 2.0 - tol.eps_len {
        return Err(CwError::Degenerate { dist: d });
    }
    let normal = (b - a) / d;
    let e1 = orthonormal_to(normal);
    let e2 = normal.cross(e1);
    Ok(Circle3 {
        center: (a + b) * 0.5,
        radius: (1.0 - d * d / 4.0).sqrt(),
        normal,
        e1,
        e2,
    })
}

/// Boundary arc of a ball polyhedron: a connected piece of the circle
/// ∂B(x_i) ∩ ∂B(x_j) on the boundary, running counterclockwise (in the
/// circle frame) from angle `t_start` to `t_end`, with endpoint vertices
/// given as point indices.
#[derive(Debug, Clone)]
pub struct EdgeArc {
    /// Supporting centers (i, j), i < j.
    pub pair: (usize, usize),
    pub circle: Circle3,
    pub t_start: f64,
    /// Strictly greater than `t_start`; may exceed 2π when the arc wraps.
    pub t_end: f64,
    /// Point indices of the vertices at `t_start` and `t_end` respectively.
    pub endpoints: (usize, usize),
}

impl EdgeArc {
    pub fn point_at(&self, t: f64) -> Vec3 {
        self.circle.point_at(t)
    }

    pub fn midpoint(&self) -> Vec3 {
        self.circle.point_at(0.5 * (self.t_start + self.t_end))
    }

    pub fn angular_width(&self) -> f64 {
        self.t_end - self.t_start
    }
}

/// Spherical face of a ball polyhedron: the part of ∂B(x_center) on the
/// boundary, listed with the edges that border it.
#[derive(Debug, Clone)]
pub struct Face {
    pub center: usize,
    pub edges: Vec<usize>,
}

/// Vertex-set certificate from [`is_extremal`]: the computed vertices of
/// B(X) compared against X itself.
#[derive(Debug, Clone)]
pub struct ExtremalityCertificate {
    pub extremal: bool,
    /// All computed vertices of B(X) (triple-sphere points in the body,
    /// plus members of X with exactly two diametric partners).
    pub vertices: Vec<Vec3>,
    /// Computed vertices that match no member of X.
    pub extra: Vec<Vec3>,
    /// Indices of members of X that are not vertices of B(X).
    pub missing: Vec<usize>,
    pub diametric_count: usize,
    pub diametric_bound: usize,
    pub graph_connected: bool,
}

/// Decides X = vert(B(X)) by brute-force vertex enumeration: all feasible
/// triple-sphere intersection points, plus dangling vertices (members of X
/// on exactly two spheres, which sit in the interior of an edge circle and
/// split it). Extremal means the computed vertex set equals X.
pub fn is_extremal(x: &PointSet3, tol: &Tolerances) -> Result<ExtremalityCertificate> {
    let graph = diametric_pairs(x, tol)?;
    let pts = x.points();
    let mut vertices: Vec<Vec3> = Vec::new();
    let push_vertex = |z: Vec3, store: &mut Vec<Vec3>| {
        if !store.iter().any(|&v| v.dist(z) <= VERTEX_MATCH_EPS) {
            store.push(z);
        }
    };
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            for k in (j + 1)..pts.len() {
                for z in triple_sphere_points(pts[i], pts[j], pts[k]) {
                    if in_ball_intersection(z, pts, tol.eps_len) {
                        push_vertex(z, &mut vertices);
                    }
                }
            }
        }
    }
    for i in 0..pts.len() {
        if graph.degree(i) == 2 {
            push_vertex(pts[i], &mut vertices);
        }
    }

    let extra: Vec<Vec3> = vertices
        .iter()
        .copied()
        .filter(|&v| !pts.iter().any(|&p| p.dist(v) <= VERTEX_MATCH_EPS))
        .collect();
    let missing: Vec<usize> = (0..pts.len())
        .filter(|&i| !vertices.iter().any(|&v| v.dist(pts[i]) <= VERTEX_MATCH_EPS))
        .collect();
    let extremal = extra.is_empty() && missing.is_empty();
    Ok(ExtremalityCertificate {
        extremal,
        vertices,
        extra,
        missing,
        diametric_count: graph.count(),
        diametric_bound: graph.bound(),
        graph_connected: graph.is_connected(),
    })
}

/// Ball polyhedron of an extremal set, with full boundary combinatorics.
#[derive(Debug, Clone)]
pub struct ReuleauxPolyhedron {
    x: PointSet3,
    pub edges: Vec<EdgeArc>,
    pub faces: Vec<Face>,
    /// Perfect matching on edge indices: each edge paired with the edge
    /// whose supporting centers are its endpoints and vice versa.
    pub dual_pairs: Vec<(usize, usize)>,
    pub graph: DiametricGraph,
}

impl ReuleauxPolyhedron {
    pub fn points(&self) -> &[Vec3] {
        self.x.points()
    }

    pub fn point_set(&self) -> &PointSet3 {
        &self.x
    }

    /// (V, E, F) with V the distinct edge-endpoint vertices.
    pub fn euler_counts(&self) -> (usize, usize, usize) {
        let mut used: Vec<usize> = self
            .edges
            .iter()
            .flat_map(|e| [e.endpoints.0, e.endpoints.1])
            .collect();
        used.sort_unstable();
        used.dedup();
        (used.len(), self.edges.len(), self.faces.len())
    }
}

/// One ball's feasibility constraint on a circle, as an angular interval.
enum CircleConstraint {
    /// The whole circle is inside the ball.
    All,
    /// Nothing on the circle is inside the ball.
    None,
    /// Inside exactly for t with cos(t − phi) ≤ w; boundary angles
    /// phi ± acos(w).
    Band { phi: f64, w: f64 },
}

fn constraint_on_circle(circle: &Circle3, ball_center: Vec3) -> CircleConstraint {
    let v = circle.center - ball_center;
    let a = v.dot(circle.e1);
    let b = v.dot(circle.e2);
    let rv = (a * a + b * b).sqrt();
    let rho = circle.radius;
    if rv < 1e-12 {
        // Concentric in-plane: distance is constant around the circle.
        let d2 = v.norm_sq() + rho * rho;
        return if d2 <= 1.0 { CircleConstraint::All } else { CircleConstraint::None };
    }
    // |p(t) − c|² = |v|² + ρ² + 2ρ(a cos t + b sin t) ≤ 1
    let w = (1.0 - v.norm_sq() - rho * rho) / (2.0 * rho * rv);
    if w >= 1.0 {
        CircleConstraint::All
    } else if w <= -1.0 {
        CircleConstraint::None
    } else {
        CircleConstraint::Band {
            phi: b.atan2(a).rem_euclid(TWO_PI),
            w,
        }
    }
}

/// Connected feasible arcs of one pair's circle, already split at members
/// of X lying on the circle. Returns (t_start, t_end, wraps-full-circle).
fn feasible_arcs_on_circle(
    circle: &Circle3,
    pair: (usize, usize),
    pts: &[Vec3],
    tol: &Tolerances,
) -> Result<Vec<(f64, f64)>> {
    let (i, j) = pair;
    let mut breakpoints: Vec<f64> = Vec::new();
    let mut splits: Vec<f64> = Vec::new();
    for (k, &p) in pts.iter().enumerate() {
        if k == i || k == j {
            continue;
        }
        match constraint_on_circle(circle, p) {
            CircleConstraint::All => {}
            CircleConstraint::None => return Ok(Vec::new()),
            CircleConstraint::Band { phi, w } => {
                let psi = w.clamp(-1.0, 1.0).acos();
                breakpoints.push((phi - psi).rem_euclid(TWO_PI));
                breakpoints.push((phi + psi).rem_euclid(TWO_PI));
            }
        }
        // Members on the circle split the feasible set.
        if (p.dist(pts[i]) - 1.0).abs() <= tol.eps_len && (p.dist(pts[j]) - 1.0).abs() <= tol.eps_len
        {
            splits.push(circle.angle_of(p));
        }
    }
    breakpoints.extend_from_slice(&splits);
    breakpoints.sort_by(f64::total_cmp);
    breakpoints.dedup_by(|a, b| (*a - *b).abs() <= 1e-10);
    // Wrap-around duplicates (angles straddling 0 ≡ 2π).
    if breakpoints.len() >= 2 {
        let first = breakpoints[0];
        let last = *breakpoints.last().unwrap();
        if (first + TWO_PI - last).abs() <= 1e-10 {
            breakpoints.pop();
        }
    }

    let feasible_at = |t: f64| -> bool {
        let z = circle.point_at(t);
        pts.iter().enumerate().all(|(k, &p)| {
            if k == i || k == j {
                true
            } else {
                z.dist(p) <= 1.0 + tol.eps_len
            }
        })
    };

    if breakpoints.is_empty() {
        if feasible_at(0.0) {
            return Err(CwError::Combinatorics {
                reason: format!(
                    "pair ({i},{j}): entire intersection circle lies on the boundary"
                ),
            });
        }
        return Ok(Vec::new());
    }

    let nb = breakpoints.len();
    let is_split = |t: f64| splits.iter().any(|&s| {
        let d = (s - t).rem_euclid(TWO_PI);
        d.min(TWO_PI - d) <= 1e-10
    });
    let gap_feasible: Vec<bool> = (0..nb)
        .map(|b| {
            let t0 = breakpoints[b];
            let t1 = if b + 1 < nb { breakpoints[b + 1] } else { breakpoints[0] + TWO_PI };
            feasible_at(0.5 * (t0 + t1))
        })
        .collect();

    if gap_feasible.iter().all(|&f| f) && splits.is_empty() {
        return Err(CwError::Combinatorics {
            reason: format!("pair ({i},{j}): entire intersection circle lies on the boundary"),
        });
    }

    // Walk circularly, starting at a run boundary: a gap that is infeasible
    // or a breakpoint that is a split.
    let start = (0..nb)
        .find(|&b| !gap_feasible[b] || is_split(breakpoints[b]))
        .expect("some boundary exists: not all-feasible-splitless");
    let mut arcs = Vec::new();
    let mut run_start: Option<f64> = None;
    for step in 0..=nb {
        let b = (start + step) % nb;
        let t0 = breakpoints[b];
        if step > 0 || is_split(t0) {
            // Close any open run at t0 when the gap before t0 ended a run.
        }
        // A run boundary occurs at breakpoint t0 if the previous gap and
        // next gap are not connected there: split point or infeasibility.
        let prev_gap = (b + nb - 1) % nb;
        let boundary_here = is_split(t0) || !gap_feasible[prev_gap] || !gap_feasible[b];
        if boundary_here {
            if let Some(s) = run_start.take() {
                let mut e = t0;
                while e <= s + 1e-12 {
                    e += TWO_PI;
                }
                arcs.push((s, e));
            }
        }
        if step == nb {
            break;
        }
        if gap_feasible[b] && run_start.is_none() {
            run_start = Some(t0);
        }
    }
    // Discard isolated touch points (zero-width runs cannot arise: runs
    // span at least one gap). Sanity: no sliver arcs on constructed input.
    for &(s, e) in &arcs {
        if e - s < 1e-7 {
            return Err(CwError::Combinatorics {
                reason: format!("pair ({i},{j}): sliver arc of width {}", e - s),
            });
        }
    }
    Ok(arcs)
}

/// Assembles the full boundary combinatorics of B(X) for an extremal X:
/// edges (scanning all center pairs), faces, Euler count, and the dual-edge
/// perfect matching.
pub fn build_combinatorics(x: PointSet3, tol: &Tolerances) -> Result<ReuleauxPolyhedron> {
    let cert = is_extremal(&x, tol)?;
    if !cert.extremal {
        return Err(CwError::NotExtremal {
            reason: format!(
                "vertex set of B(X) differs from X: {} extra, {} missing (diametric pairs {} of bound {})",
                cert.extra.len(),
                cert.missing.len(),
                cert.diametric_count,
                cert.diametric_bound
            ),
        });
    }
    let graph = diametric_pairs(&x, tol)?;
    let pts = x.points().to_vec();
    let m = pts.len();

    let match_point = |z: Vec3| -> Option<usize> {
        (0..m).find(|&k| pts[k].dist(z) <= VERTEX_MATCH_EPS)
    };

    let mut edges: Vec<EdgeArc> = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            let circle = circle_of_pair(pts[i], pts[j], tol)?;
            for (s, e) in feasible_arcs_on_circle(&circle, (i, j), &pts, tol)? {
                let p_start = circle.point_at(s);
                let p_end = circle.point_at(e);
                let (Some(vs), Some(ve)) = (match_point(p_start), match_point(p_end)) else {
                    return Err(CwError::Combinatorics {
                        reason: format!(
                            "pair ({i},{j}): arc endpoint is not a member of X"
                        ),
                    });
                };
                edges.push(EdgeArc {
                    pair: (i, j),
                    circle,
                    t_start: s,
                    t_end: e,
                    endpoints: (vs, ve),
                });
            }
        }
    }
    // Deterministic order: by supporting pair, then start angle.
    edges.sort_by(|a, b| {
        (a.pair, a.t_start)
            .partial_cmp(&(b.pair, b.t_start))
            .expect("finite angles")
    });

    let faces: Vec<Face> = (0..m)
        .map(|c| Face {
            center: c,
            edges: edges
                .iter()
                .enumerate()
                .filter(|(_, e)| e.pair.0 == c || e.pair.1 == c)
                .map(|(idx, _)| idx)
                .collect(),
        })
        .collect();
    if faces.iter().any(|f| f.edges.is_empty()) {
        return Err(CwError::Combinatorics {
            reason: "a face has no boundary edges".into(),
        });
    }

    // Euler relation.
    let mut used: Vec<usize> = edges
        .iter()
        .flat_map(|e| [e.endpoints.0, e.endpoints.1])
        .collect();
    used.sort_unstable();
    used.dedup();
    let (v, e, f) = (used.len(), edges.len(), faces.len());
    if v as i64 - e as i64 + f as i64 != 2 {
        return Err(CwError::Combinatorics {
            reason: format!("Euler relation fails: V={v}, E={e}, F={f}"),
        });
    }

    // Dual pairing: centers {i,j} + endpoints {k,l} ↔ centers {k,l} +
    // endpoints {i,j}; must be a perfect matching.
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut dual_pairs = Vec::new();
    let mut partner = vec![usize::MAX; edges.len()];
    for (ei, edge) in edges.iter().enumerate() {
        let want_pair = key(edge.endpoints.0, edge.endpoints.1);
        let want_ends = edge.pair;
        let matches: Vec<usize> = edges
            .iter()
            .enumerate()
            .filter(|(_, o)| o.pair == want_pair && key(o.endpoints.0, o.endpoints.1) == want_ends)
            .map(|(oi, _)| oi)
            .collect();
        if matches.len() != 1 {
            return Err(CwError::Combinatorics {
                reason: format!(
                    "edge {ei} (centers {:?}, endpoints {:?}) has {} dual candidates, expected exactly 1",
                    edge.pair,
                    edge.endpoints,
                    matches.len()
                ),
            });
        }
        partner[ei] = matches[0];
    }
    for (ei, &pi) in partner.iter().enumerate() {
        if pi == ei || partner[pi] != ei {
            return Err(CwError::Combinatorics {
                reason: format!("dual pairing is not an involution at edge {ei}"),
            });
        }
        if ei < pi {
            dual_pairs.push((ei, pi));
        }
    }

    Ok(ReuleauxPolyhedron {
        x,
        edges,
        faces,
        dual_pairs,
        graph,
    })
}
