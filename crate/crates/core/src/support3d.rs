//! Support functions of 3D bodies: closed forms, feature classification,
//! and a numeric oracle.
//!
//! Every body here is handled through its support function
//! H(u) = max{x·u : x in the body}; a body has constant width 1 exactly
//! when H(u) + H(−u) = 1 for all directions. Three evaluation routes are
//! provided and cross-checked against each other:
//!
//! * closed forms: the spindle torus (all points within distance 1 of a
//!   circle of radius < 1) and the rotation identity that evaluates a body
//!   of revolution through its planar generator;
//! * feature classification: for a generator set (points, arcs, circles),
//!   the boundary of the unit-ball intersection consists of sphere caps,
//!   sharp vertex cones, spindle patches, and sharp edge arcs — the exact
//!   support is the best feasible candidate over those feature classes;
//! * a numeric oracle: projected ascent of x·u over the ball intersection
//!   of a dense sampling of the generators, sharing no geometry insight
//!   with the classification route.
//!
//! Boundary points are recovered from the support gradient,
//! DH(u) = ∇_{S²}H + H·u, either in the spherical chart (away from its
//! poles) or in a chart-free tangent frame that works everywhere.

use crate::error::{CwError, Result};
use crate::geom::{orthonormal_to, unit_from_spherical, SphericalAngles, UnitVec3, Vec3};
use crate::meissner3d::{GeneratorSet, MeissnerBody, RotatedBody};
use crate::reuleaux2d::ReuleauxPolygon;
use crate::tol::Tolerances;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// How a support value is produced: closed form, iterative solver, or
/// lookup in a sampled grid. Combining fields keeps the least exact kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FieldKind {
    Analytic,
    Numeric,
    Sampled,
}

impl FieldKind {
    /// The kind of a value computed from both operands.
    pub fn combine(self, other: FieldKind) -> FieldKind {
        self.max(other)
    }
}

/// A support function H(u) of a convex body.
pub trait SupportField {
    fn support(&self, u: UnitVec3) -> Result<f64>;
    fn kind(&self) -> FieldKind;
}

impl<F: SupportField + ?Sized> SupportField for &F {
    fn support(&self, u: UnitVec3) -> Result<f64> {
        (**self).support(u)
    }
    fn kind(&self) -> FieldKind {
        (**self).kind()
    }
}

impl<F: SupportField + ?Sized> SupportField for Box<F> {
    fn support(&self, u: UnitVec3) -> Result<f64> {
        (**self).support(u)
    }
    fn kind(&self) -> FieldKind {
        (**self).kind()
    }
}

/// Width of the body along ±u: H(u) + H(−u).
pub fn width<F: SupportField + ?Sized>(f: &F, u: UnitVec3) -> Result<f64> {
    Ok(f.support(u)? + f.support(u.antipode())?)
}

/// A ball: H(u) = radius + center·u.
#[derive(Debug, Clone, Copy)]
pub struct BallField {
    pub center: Vec3,
    pub radius: f64,
}

impl BallField {
    pub fn new(center: Vec3, radius: f64) -> Result<BallField> {
        if !(radius.is_finite() && radius >= 0.0) || !center.is_finite() {
            return Err(CwError::Param {
                reason: format!("invalid ball: center {center:?}, radius {radius}"),
            });
        }
        Ok(BallField { center, radius })
    }
}

impl SupportField for BallField {
    fn support(&self, u: UnitVec3) -> Result<f64> {
        Ok(self.radius + self.center.dot(u.get()))
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Analytic
    }
}

/// The central reflection −K of a body: H_{−K}(u) = H_K(−u).
#[derive(Debug, Clone)]
pub struct ReflectField<F> {
    pub inner: F,
}

impl<F: SupportField> SupportField for ReflectField<F> {
    fn support(&self, u: UnitVec3) -> Result<f64> {
        self.inner.support(u.antipode())
    }
    fn kind(&self) -> FieldKind {
        self.inner.kind()
    }
}

/// Minkowski combination (1−λ)A ⊕ λB: supports add with those weights.
#[derive(Debug, Clone)]
pub struct BlendField<A, B> {
    a: A,
    b: B,
    lambda: f64,
}

impl<A, B> BlendField<A, B> {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Builds the Minkowski average (1−λ)A ⊕ λB for λ in [0, 1].
pub fn minkowski_combine<A: SupportField, B: SupportField>(
    a: A,
    b: B,
    lambda: f64,
) -> Result<BlendField<A, B>> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(CwError::Param {
            reason: format!("blend weight {lambda} outside [0, 1]"),
        });
    }
    Ok(BlendField { a, b, lambda })
}

impl<A: SupportField, B: SupportField> SupportField for BlendField<A, B> {
    fn support(&self, u: UnitVec3) -> Result<f64> {
        Ok((1.0 - self.lambda) * self.a.support(u)? + self.lambda * self.b.support(u)?)
    }
    fn kind(&self) -> FieldKind {
        self.a.kind().combine(self.b.kind())
    }
}

// ---------------------------------------------------------------------------
// Spindle torus
// ---------------------------------------------------------------------------

/// The inner spindle-torus body: all points within distance 1 of a circle
/// of radius √(1−a²) < 1. Its tips sit on the axis at ±a from the circle
/// plane; a = 1 degenerates to the unit ball around the center.
#[derive(Debug, Clone, Copy)]
pub struct SpindleTorus {
    /// Tip height above the circle plane, in (0, 1].
    pub a: f64,
    /// Center of the generating circle.
    pub center: Vec3,
    /// Unit normal of the circle plane.
    pub axis: Vec3,
}

impl SpindleTorus {
    pub fn new(a: f64, center: Vec3, axis: Vec3, tol: &Tolerances) -> Result<SpindleTorus> {
        if !(a.is_finite() && 0.0 < a && a <= 1.0) {
            return Err(CwError::Param {
                reason: format!("spindle tip height {a} outside (0, 1]"),
            });
        }
        if (axis.norm() - 1.0).abs() > tol.eps_unit || !center.is_finite() {
            return Err(CwError::Param {
                reason: "spindle axis must be a unit vector".into(),
            });
        }
        Ok(SpindleTorus { a, center, axis })
    }

    /// Radius of the generating circle, √(1 − a²).
    pub fn ring_radius(&self) -> f64 {
        (1.0 - self.a * self.a).sqrt()
    }

    /// Tip positions on the axis.
    pub fn tips(&self) -> (Vec3, Vec3) {
        (
            self.center + self.axis * self.a,
            self.center - self.axis * self.a,
        )
    }

    /// Support in an arbitrary frame: the canonical three-case form shifted
    /// by the center and with u₃ = u·axis.
    pub fn support_value(&self, u: UnitVec3) -> f64 {
        let uv = u.get();
        let u3 = uv.dot(self.axis);
        let local = if u3 >= self.a {
            self.a * u3
        } else if u3 <= -self.a {
            -self.a * u3
        } else {
            1.0 - self.ring_radius() * (uv - self.axis * u3).norm()
        };
        self.center.dot(uv) + local
    }

    /// The unique supporting point: a tip in the polar cases, a point of
    /// the inner torus surface in the band |u·axis| < a.
    pub fn supporting_point(&self, u: UnitVec3) -> Vec3 {
        let uv = u.get();
        let u3 = uv.dot(self.axis);
        if u3 >= self.a {
            self.center + self.axis * self.a
        } else if u3 <= -self.a {
            self.center - self.axis * self.a
        } else {
            let u_pl = uv - self.axis * u3;
            let pl = u_pl.norm();
            let u_hat = u_pl / pl;
            self.center + u_hat * (pl - self.ring_radius()) + self.axis * u3
        }
    }

    /// The point of the generating circle realizing distance 1 to the
    /// supporting point (band case): azimuthally opposite the direction u.
    pub fn contact_on_circle(&self, u: UnitVec3) -> Option<Vec3> {
        let uv = u.get();
        let u3 = uv.dot(self.axis);
        if u3.abs() >= self.a {
            return None;
        }
        let u_pl = uv - self.axis * u3;
        let u_hat = u_pl / u_pl.norm();
        Some(self.center - u_hat * self.ring_radius())
    }
}

impl SupportField for SpindleTorus {
    fn support(&self, u: UnitVec3) -> Result<f64> {
        Ok(self.support_value(u))
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Analytic
    }
}

/// Canonical-frame spindle support (circle of radius √(1−a²) in the plane
/// z = 0, centered at the origin):
///
/// * H = a·u₃ for u₃ ≥ a (top tip),
/// * H = 1 − √(1−a²)·√(u₁²+u₂²) for |u₃| ≤ a (torus band),
/// * H = −a·u₃ for u₃ ≤ −a (bottom tip);
///
/// the cases agree on their common boundaries.
pub fn spindle_support(a: f64, u: UnitVec3, tol: &Tolerances) -> Result<f64> {
    let s = SpindleTorus::new(a, Vec3::ZERO, Vec3::new(0.0, 0.0, 1.0), tol)?;
    Ok(s.support_value(u))
}

/// Principal radii of curvature of the spindle boundary at the point
/// supporting direction u, as (radius, tangent direction) eigenpairs of
/// the support Hessian. Valid only in the open band |u₃| < a; the meridian
/// radius is always 1 (the meridian is a unit-circle arc) and the
/// azimuthal radius is 1 − √(1−a²)/√(1−u₃²).
pub fn spindle_curvature(a: f64, u: UnitVec3, tol: &Tolerances) -> Result<[(f64, Vec3); 2]> {
    let s = SpindleTorus::new(a, Vec3::ZERO, Vec3::new(0.0, 0.0, 1.0), tol)?;
    let uv = u.get();
    let u3 = uv.z;
    if u3.abs() >= a {
        return Err(CwError::Range {
            reason: format!("u3 = {u3} outside the open band (|u3| < {a})"),
        });
    }
    let e3 = Vec3::new(0.0, 0.0, 1.0);
    let meridian = (e3 - uv * u3).normalized();
    let azimuthal = uv.cross(e3).normalized();
    let r_az = 1.0 - s.ring_radius() / (1.0 - u3 * u3).sqrt();
    Ok([(1.0, meridian), (r_az, azimuthal)])
}

// ---------------------------------------------------------------------------
// Feature-classified analytic support of a generator set
// ---------------------------------------------------------------------------

/// The boundary feature carrying the supporting point of a direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feature {
    /// Smooth cap of the unit sphere around a generator point.
    SphereCap(usize),
    /// Sharp cone vertex at a generator point.
    Vertex(usize),
    /// Spindle patch swept by a generator arc.
    ArcSpindle(usize),
    /// Spindle patch swept by a generator circle.
    CircleSpindle(usize),
    /// Sharp edge along a generator arc.
    ArcEdge(usize),
    /// Sharp edge along a generator circle.
    CircleEdge(usize),
}

/// Closed-form support of the ball intersection B(G) of a generator set,
/// by feature classification.
///
/// Feasible candidates never overshoot the true support, and for generator
/// sets produced by surgery or rotation every boundary point lies on one
/// of the four feature classes, so the best candidate is exact:
///
/// * sphere caps: x·u + 1 with supporting point x + u, for each point
///   generator (and each curve generator's spindle tips);
/// * vertices: x·u at the generator points themselves;
/// * spindle patches: the spindle-torus support of each curve generator,
///   with the circle contact point required to lie in the arc's range;
/// * sharp edges: max of z·u along each curve generator.
///
/// Every candidate's supporting point must lie within distance 1 of all
/// generators (points of the body are feasible by definition; generator
/// points and curve points always are, since the generator union has
/// diameter ≤ 1).
#[derive(Debug, Clone)]
pub struct AnalyticBody {
    generators: GeneratorSet,
    arc_spindles: Vec<SpindleTorus>,
    circle_spindles: Vec<SpindleTorus>,
    tol: Tolerances,
}

impl AnalyticBody {
    pub fn new(generators: GeneratorSet, tol: &Tolerances) -> Result<AnalyticBody> {
        generators.validate(tol)?;
        let mut arc_spindles = Vec::with_capacity(generators.arcs.len());
        for arc in &generators.arcs {
            let r = arc.circle.radius;
            if !(0.0..1.0).contains(&r) {
                return Err(CwError::Radius { radius: r });
            }
            let a = (1.0 - r * r).sqrt();
            arc_spindles.push(SpindleTorus::new(a, arc.circle.center, arc.circle.normal, tol)?);
        }
        let mut circle_spindles = Vec::with_capacity(generators.circles.len());
        for c in &generators.circles {
            circle_spindles.push(crate::meissner3d::spindle_of_circle(c, tol)?);
        }
        Ok(AnalyticBody {
            generators,
            arc_spindles,
            circle_spindles,
            tol: *tol,
        })
    }

    pub fn from_meissner(m: &MeissnerBody, tol: &Tolerances) -> Result<AnalyticBody> {
        AnalyticBody::new(m.generators.clone(), tol)
    }

    pub fn from_rotated(r: &RotatedBody, tol: &Tolerances) -> Result<AnalyticBody> {
        AnalyticBody::new(r.generator_set(), tol)
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    /// Is z within distance 1 of every generator element?
    pub fn contains(&self, z: Vec3) -> bool {
        self.generators.farthest_from(z) <= 1.0 + self.tol.eps_len
    }

    /// Support value, the feature carrying the supporting point, and the
    /// supporting point itself. Candidate classes are scanned in the order
    /// caps, vertices, spindles, edges; a later class must beat the
    /// incumbent by more than rounding noise to win, so ties on
    /// feature-cone boundaries (e.g. a spindle tip coinciding with a
    /// vertex) classify deterministically as the earlier class.
    pub fn support_with_feature(&self, u: UnitVec3) -> Result<(f64, Feature, Vec3)> {
        // Far below any geometric feature separation, far above the float
        // noise of evaluating the same supporting point two ways.
        const TIE_EPS: f64 = 1e-12;
        let uv = u.get();
        let mut best: Option<(f64, Feature, Vec3)> = None;
        let mut consider = |value: f64, feature: Feature, point: Vec3| {
            if best.map_or(true, |(v, _, _)| value > v + TIE_EPS) {
                best = Some((value, feature, point));
            }
        };

        // Sphere caps of point generators.
        for (i, &p) in self.generators.points.iter().enumerate() {
            let z = p + uv;
            if self.contains(z) {
                consider(p.dot(uv) + 1.0, Feature::SphereCap(i), z);
            }
        }
        // Vertices (generator points are always in the body).
        for (i, &p) in self.generators.points.iter().enumerate() {
            consider(p.dot(uv), Feature::Vertex(i), p);
        }
        // Spindle patches of arcs: the circle contact must fall inside the
        // arc's angular range, otherwise the patch is not part of the
        // boundary in this direction.
        for (k, s) in self.arc_spindles.iter().enumerate() {
            let arc = &self.generators.arcs[k];
            let z = s.supporting_point(u);
            if let Some(w) = s.contact_on_circle(u) {
                let t = arc.circle.angle_of(w);
                let offset = (t - arc.t_start).rem_euclid(TWO_PI);
                if offset > arc.angular_width() {
                    continue;
                }
            }
            if self.contains(z) {
                consider(s.support_value(u), Feature::ArcSpindle(k), z);
            }
        }
        // Spindle patches of full circles (contact is always in range).
        for (k, s) in self.circle_spindles.iter().enumerate() {
            let z = s.supporting_point(u);
            if self.contains(z) {
                consider(s.support_value(u), Feature::CircleSpindle(k), z);
            }
        }
        // Sharp edges along arcs: max of z(t)·u, at the in-range peak or at
        // the better endpoint (arc points are always in the body).
        for (k, arc) in self.generators.arcs.iter().enumerate() {
            let c = &arc.circle;
            let peak = c.e2.dot(uv).atan2(c.e1.dot(uv));
            let offset = (peak - arc.t_start).rem_euclid(TWO_PI);
            let t = if offset <= arc.angular_width() {
                arc.t_start + offset
            } else {
                let (s, e) = (arc.t_start, arc.t_end);
                if arc.point_at(s).dot(uv) >= arc.point_at(e).dot(uv) {
                    s
                } else {
                    e
                }
            };
            let z = arc.point_at(t);
            consider(z.dot(uv), Feature::ArcEdge(k), z);
        }
        // Sharp edges along circles: the azimuthal peak always exists.
        for (k, circ) in self.generators.circles.iter().enumerate() {
            let u3 = uv.dot(circ.axis);
            let u_pl = uv - circ.axis * u3;
            let pl = u_pl.norm();
            let z = if pl > 1e-15 {
                circ.center + (u_pl / pl) * circ.radius
            } else {
                let (e1, _) = circ.frame();
                circ.center + e1 * circ.radius
            };
            consider(z.dot(uv), Feature::CircleEdge(k), z);
        }

        best.ok_or(CwError::Classification)
    }
}

impl SupportField for AnalyticBody {
    fn support(&self, u: UnitVec3) -> Result<f64> {
        Ok(self.support_with_feature(u)?.0)
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Analytic
    }
}

// ---------------------------------------------------------------------------
// Numeric support oracle
// ---------------------------------------------------------------------------

/// Settings of the numeric support oracle.
#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Samples per generator curve when discretizing (minimum 64).
    pub arc_samples: usize,
    /// Cap on ascent iterations per direction.
    pub max_iter: usize,
    /// Feasibility slack: points may violate a ball constraint by this
    /// much, which bounds the oracle's one-sided bias.
    pub tol_primal: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            arc_samples: 2048,
            max_iter: 4000,
            tol_primal: 1e-8,
        }
    }
}

/// Initial ascent step (radians-scale; the body has diameter 1).
const STEP_INIT: f64 = 0.25;
/// The ascent stops (converged) once the step underruns this.
const STEP_MIN: f64 = 1e-9;
/// Cap on cyclic-projection sweeps per feasibility restoration.
const MAX_RESTORE_PASSES: usize = 200;
/// Band (distance inside the unit shell) within which a ball constraint
/// counts as binding when the feasible ascent cone is assembled.
const ACTIVE_EPS: f64 = 1e-6;
/// The ascent stops once the feasible-cone projection of the objective
/// direction is shorter than this: the direction then lies in the positive
/// span of the active constraint normals, so the iterate is a constrained
/// maximum up to `ACTIVE_EPS` slack.
const RESIDUAL_TOL: f64 = 1e-6;
/// A step is accepted when it realizes at least this fraction of its
/// first-order model gain `step·(d·u)`. A flat absolute threshold would
/// deadlock instead: after an active-set change the surviving step can be
/// microscopic, making honest first-order gains smaller than any fixed
/// cutoff, and the step can only regrow through accepted moves.
const ARMIJO_FRACTION: f64 = 0.1;
/// Absolute floor under the acceptance threshold. Once the iterate is at
/// the optimum up to the feasibility slack, restored candidates still
/// scatter within that slack; accepting such noise-level "gains" sustains
/// a limit cycle instead of letting the step cascade to its floor.
const VALUE_FLOOR: f64 = 1e-12;

/// One ball-constraint family of the discretized generator set: a single
/// point, or a uniformly sampled curve. The binding sample of a curve is
/// found in O(1): the squared distance to the curve is sinusoidal in the
/// angle, so the farthest sample neighbors the analytic peak.
#[derive(Debug, Clone)]
enum OracleConstraint {
    Point(Vec3),
    Curve {
        center: Vec3,
        e1: Vec3,
        e2: Vec3,
        radius: f64,
        t0: f64,
        dt: f64,
        /// Index of the last sample; samples are k = 0..=last for arcs and
        /// k = 0..last (wrapping) for closed circles.
        last: usize,
        closed: bool,
    },
}

impl OracleConstraint {
    fn sample(&self, k: usize) -> Vec3 {
        match self {
            OracleConstraint::Point(p) => *p,
            OracleConstraint::Curve {
                center,
                e1,
                e2,
                radius,
                t0,
                dt,
                ..
            } => {
                let t = t0 + dt * k as f64;
                *center + (*e1 * t.cos() + *e2 * t.sin()) * *radius
            }
        }
    }

    /// Visits the O(1) candidate set guaranteed to contain the farthest
    /// sample from z (the two samples straddling the analytic peak of the
    /// sinusoidal distance, plus arc endpoints), passing each candidate and
    /// its distance.
    fn visit_extremal_samples(&self, z: Vec3, mut f: impl FnMut(Vec3, f64)) {
        match self {
            OracleConstraint::Point(p) => f(*p, z.dist(*p)),
            OracleConstraint::Curve {
                center,
                e1,
                e2,
                t0,
                dt,
                last,
                closed,
                ..
            } => {
                let v = z - *center;
                let peak = (-v.dot(*e2)).atan2(-v.dot(*e1));
                let kf = (peak - t0).rem_euclid(TWO_PI) / dt;
                let mut candidates = [0usize; 4];
                let mut n_cand = 0;
                let mut push = |k: usize| {
                    if !candidates[..n_cand].contains(&k) {
                        candidates[n_cand] = k;
                        n_cand += 1;
                    }
                };
                if *closed {
                    let k0 = (kf.floor() as usize) % (*last + 1);
                    push(k0);
                    push((k0 + 1) % (*last + 1));
                } else {
                    if kf <= *last as f64 + 1.0 {
                        push((kf.floor() as usize).min(*last));
                        push((kf.ceil() as usize).min(*last));
                    }
                    push(0);
                    push(*last);
                }
                for &k in &candidates[..n_cand] {
                    let s = self.sample(k);
                    f(s, z.dist(s));
                }
            }
        }
    }

    /// The sample farthest from z, with its distance.
    fn farthest_sample(&self, z: Vec3) -> (f64, Vec3) {
        let mut best = (f64::NEG_INFINITY, Vec3::ZERO);
        self.visit_extremal_samples(z, |s, d| {
            if d > best.0 {
                best = (d, s);
            }
        });
        best
    }
}

/// Euclidean projection of `u` onto the cone of feasible directions
/// `{ d : n·d ≤ 0 for every outward normal n }`. Solved exactly by
/// enumerating candidate active subsets (size ≤ 3 suffices in three
/// dimensions) and certifying sign-constrained multipliers; the certified
/// candidate is the unique projection.
fn cone_project(u: Vec3, normals: &[Vec3]) -> Vec3 {
    const FEAS: f64 = 1e-10;
    const LAMBDA_MIN: f64 = -1e-12;
    let feasible = |d: Vec3| normals.iter().all(|n| n.dot(d) <= FEAS);
    if feasible(u) {
        return u;
    }
    let k = normals.len();
    let mut best = Vec3::ZERO;
    let mut found = false;
    for i in 0..k {
        let n = normals[i];
        let l = n.dot(u);
        if l >= LAMBDA_MIN {
            let d = u - n * l;
            if feasible(d) && (!found || d.norm_sq() > best.norm_sq()) {
                best = d;
                found = true;
            }
        }
    }
    for i in 0..k {
        for j in (i + 1)..k {
            let (a, b) = (normals[i], normals[j]);
            let ab = a.dot(b);
            let det = 1.0 - ab * ab;
            if det.abs() < 1e-12 {
                continue;
            }
            let (ra, rb) = (a.dot(u), b.dot(u));
            let la = (ra - rb * ab) / det;
            let lb = (rb - ra * ab) / det;
            if la >= LAMBDA_MIN && lb >= LAMBDA_MIN {
                let d = u - a * la - b * lb;
                if feasible(d) && (!found || d.norm_sq() > best.norm_sq()) {
                    best = d;
                    found = true;
                }
            }
        }
    }
    if found {
        return best;
    }
    // Three independent normals pin the projection to the origin whenever u
    // lies in their positive span (a certified constrained maximum).
    for i in 0..k {
        for j in (i + 1)..k {
            for l in (j + 1)..k {
                let (a, b, c) = (normals[i], normals[j], normals[l]);
                let det = a.dot(b.cross(c));
                if det.abs() < 1e-12 {
                    continue;
                }
                let la = u.dot(b.cross(c)) / det;
                let lb = a.dot(u.cross(c)) / det;
                let lc = a.dot(b.cross(u)) / det;
                if la >= LAMBDA_MIN && lb >= LAMBDA_MIN && lc >= LAMBDA_MIN {
                    return Vec3::ZERO;
                }
            }
        }
    }
    // Degenerate normal sets (four or more mutually dependent directions)
    // fall back to cyclic halfspace projection; a result that is infeasible
    // or points away from u stops the ascent conservatively.
    let mut d = u;
    for _ in 0..64 {
        for n in normals {
            let l = n.dot(d);
            if l > 0.0 {
                d = d - *n * l;
            }
        }
    }
    if feasible(d) && d.dot(u) > 0.0 {
        d
    } else {
        Vec3::ZERO
    }
}

/// Numeric support oracle: projected ascent of x·u over the intersection
/// of unit balls centered at a dense sampling of the generators. Shares no
/// structural knowledge with [`AnalyticBody`] — it sees only ball
/// constraints — which makes it a genuine cross-check.
///
/// The ascent starts at the restored sample centroid, steps along the
/// projection of u onto the cone of feasible directions at the current
/// active set, restores feasibility by cyclic projection onto violated
/// balls, and accepts a move only when it clears a fraction of its
/// first-order model. A move blocked by a constraint that was inactive at
/// the iterate is shortened to the first crossing of that constraint's
/// shell, which turns the ascent onto sharp edges instead of zigzagging
/// across them; otherwise the step halves. It stops when the projected
/// direction vanishes (the iterate is a certified constrained maximum) or
/// the step underruns its floor. Fully deterministic.
#[derive(Debug, Clone)]
pub struct NumericSupport {
    constraints: Vec<OracleConstraint>,
    start: Vec3,
    cfg: OracleConfig,
}

impl NumericSupport {
    /// Discretizes the generators. Unlike the body constructors, this does
    /// not require the generator union to have diameter ≤ 1 — the oracle
    /// only needs the ball intersection to be nonempty (e.g. a lone circle
    /// of radius close to 1 is a valid input whose body is a thin spindle).
    pub fn new(g: &GeneratorSet, cfg: OracleConfig) -> Result<NumericSupport> {
        if cfg.arc_samples < 64 {
            return Err(CwError::Param {
                reason: format!("arc_samples = {} below the minimum 64", cfg.arc_samples),
            });
        }
        if g.is_empty() {
            return Err(CwError::Param {
                reason: "empty generator set".into(),
            });
        }
        let mut constraints = Vec::new();
        for &p in &g.points {
            constraints.push(OracleConstraint::Point(p));
        }
        for a in &g.arcs {
            constraints.push(OracleConstraint::Curve {
                center: a.circle.center,
                e1: a.circle.e1,
                e2: a.circle.e2,
                radius: a.circle.radius,
                t0: a.t_start,
                dt: a.angular_width() / cfg.arc_samples as f64,
                last: cfg.arc_samples,
                closed: false,
            });
        }
        for c in &g.circles {
            let (e1, e2) = c.frame();
            constraints.push(OracleConstraint::Curve {
                center: c.center,
                e1,
                e2,
                radius: c.radius,
                t0: 0.0,
                dt: TWO_PI / cfg.arc_samples as f64,
                last: cfg.arc_samples - 1,
                closed: true,
            });
        }
        // Start from the sample centroid, projected into the ball
        // intersection; failure to project means the body is (numerically)
        // empty.
        let mut sum = Vec3::ZERO;
        let mut count = 0usize;
        for c in &constraints {
            let last = match c {
                OracleConstraint::Point(_) => 0,
                OracleConstraint::Curve { last, .. } => *last,
            };
            for k in 0..=last {
                sum = sum + c.sample(k);
                count += 1;
            }
        }
        let mut oracle = NumericSupport {
            constraints,
            start: sum / count as f64,
            cfg,
        };
        match oracle.restore(oracle.start) {
            Some(z) => {
                oracle.start = z;
                Ok(oracle)
            }
            None => Err(CwError::Region {
                reason: "generator balls have empty intersection".into(),
            }),
        }
    }

    /// Worst constraint violation at z: (distance − 1) against the binding
    /// sample, with that sample.
    fn worst_violation(&self, z: Vec3) -> (f64, Vec3) {
        let mut worst = (f64::NEG_INFINITY, Vec3::ZERO);
        for c in &self.constraints {
            let (d, s) = c.farthest_sample(z);
            if d - 1.0 > worst.0 {
                worst = (d - 1.0, s);
            }
        }
        worst
    }

    /// Outward normals of the ball constraints binding at z (within
    /// `ACTIVE_EPS` of the unit shell), each tagged with the index of the
    /// constraint family it came from: one per binding point generator, up
    /// to two neighboring samples per binding curve. Near-duplicate normals
    /// are merged.
    fn active_normals(&self, z: Vec3, fams: &mut Vec<usize>, normals: &mut Vec<Vec3>) {
        fams.clear();
        normals.clear();
        for (f, c) in self.constraints.iter().enumerate() {
            c.visit_extremal_samples(z, |s, d| {
                if d >= 1.0 - ACTIVE_EPS && d > 0.0 {
                    let n = (z - s) / d;
                    if normals.iter().all(|m| m.dist(n) > 1e-9) {
                        fams.push(f);
                        normals.push(n);
                    }
                }
            });
        }
    }

    /// Largest prefix `t ∈ (0, step)` of the move `x + t·d` that stays
    /// inside every constraint family inactive at `x`, or None when no such
    /// family blocks the full move. The crossing is solved on the blocking
    /// family's farthest sample at the full-move endpoint; any other sample
    /// of that family that crosses marginally earlier differs by a
    /// curvature-scale violation the restoration absorbs.
    fn clip_to_new_family(&self, x: Vec3, d: Vec3, step: f64, active: &[usize]) -> Option<f64> {
        let end = x + d * step;
        let mut t_min: Option<f64> = None;
        for (f, c) in self.constraints.iter().enumerate() {
            if active.contains(&f) {
                continue;
            }
            let (dist, s) = c.farthest_sample(end);
            if dist <= 1.0 + self.cfg.tol_primal {
                continue;
            }
            // Exit root of |x + t·d − s|² = 1. An inactive family keeps x
            // strictly inside its shell (the active band is wider than the
            // feasibility slack), so the constant term is negative and the
            // quadratic has exactly one positive root.
            let w = x - s;
            let a = d.dot(d);
            let b = 2.0 * d.dot(w);
            let c0 = w.dot(w) - 1.0;
            let disc = b * b - 4.0 * a * c0;
            if a == 0.0 || disc <= 0.0 {
                continue;
            }
            let t = (-b + disc.sqrt()) / (2.0 * a);
            if t > 0.0 && t < step {
                t_min = Some(t_min.map_or(t, |m: f64| m.min(t)));
            }
        }
        t_min
    }

    /// Cyclic projection onto violated ball constraints until all are
    /// satisfied within `tol_primal`. Returns None if the sweep cap is hit.
    fn restore(&self, mut z: Vec3) -> Option<Vec3> {
        for _ in 0..MAX_RESTORE_PASSES {
            let mut violated = false;
            for c in &self.constraints {
                let (d, s) = c.farthest_sample(z);
                if d > 1.0 + self.cfg.tol_primal {
                    z = s + (z - s) / d;
                    violated = true;
                }
            }
            if !violated {
                return Some(z);
            }
        }
        None
    }
}

impl SupportField for NumericSupport {
    fn support(&self, u: UnitVec3) -> Result<f64> {
        let uv = u.get();
        let mut x = self.start;
        let mut best = x.dot(uv);
        let mut step = STEP_INIT;
        let mut iters = 0usize;
        let mut fams = Vec::new();
        let mut normals = Vec::new();
        while step >= STEP_MIN {
            if iters >= self.cfg.max_iter {
                return Err(CwError::NonConvergence {
                    iterations: iters,
                    final_step: step,
                    tol: STEP_MIN,
                });
            }
            iters += 1;
            // Ascend along the feasible-cone projection of u, not u itself:
            // stepping along raw u stalls near curved or sharp boundary
            // features, where the restoration cancels most of the step and
            // leaves a fixed-point bias proportional to the step size.
            self.active_normals(x, &mut fams, &mut normals);
            let d = cone_project(uv, &normals);
            if d.norm() <= RESIDUAL_TOL {
                // u lies in the positive span of the active normals: x is a
                // constrained maximum.
                return Ok(best);
            }
            let mut took_full = false;
            let mut took_clip = false;
            if let Some(y) = self.restore(x + d * step) {
                let val = y.dot(uv);
                if val > best + (ARMIJO_FRACTION * step * d.dot(uv)).max(VALUE_FLOOR) {
                    x = y;
                    best = val;
                    took_full = true;
                } else if let Some(t) = self.clip_to_new_family(x, d, step, &fams) {
                    // The full move was value-blocked by a constraint family
                    // that is inactive at x: shorten it to the first
                    // crossing of that family's shell. Landing on the
                    // crossing puts both features into the next active set,
                    // so the ascent turns onto the edge between them instead
                    // of zigzagging across it, which costs a geometric
                    // contraction episode per crossing.
                    if let Some(yc) = self.restore(x + d * t) {
                        let valc = yc.dot(uv);
                        if valc > best + (ARMIJO_FRACTION * t * d.dot(uv)).max(VALUE_FLOOR) {
                            x = yc;
                            best = valc;
                            took_clip = true;
                        }
                    }
                }
            }
            // Regrow the step after a full move so a long edge traverse runs
            // at the productive step size; halve it when the move overshoots.
            // A clipped move keeps the step: its length is dictated by where
            // the blocking shell sits, not by the local scale of progress.
            if took_full {
                step = (step * 2.0).min(STEP_INIT);
            } else if !took_clip {
                step *= 0.5;
            }
        }
        Ok(best)
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Numeric
    }
}

impl NumericSupport {
    /// Worst feasibility violation of an external point against the
    /// discretized constraint set (diagnostic; negative means interior).
    pub fn violation(&self, z: Vec3) -> f64 {
        self.worst_violation(z).0
    }
}

// ---------------------------------------------------------------------------
// Bodies of revolution: the rotation identity
// ---------------------------------------------------------------------------

/// Support of a body of revolution, evaluated through its planar
/// generator: for the polygon rotated about the vertical axis,
/// H(θ, φ) = h(π/2 − φ) independently of θ — the 2D support at the angle
/// the direction makes with the equatorial plane.
#[derive(Debug, Clone)]
pub struct RotatedField {
    polygon: ReuleauxPolygon,
}

impl RotatedField {
    /// Wraps the (re-centered) generator polygon of a rotated body.
    pub fn new(body: &RotatedBody) -> RotatedField {
        RotatedField {
            polygon: body.generator_polygon.clone(),
        }
    }

    pub fn polygon(&self) -> &ReuleauxPolygon {
        &self.polygon
    }

    /// The 2D support angle a direction maps to.
    pub fn planar_angle(u: UnitVec3) -> f64 {
        std::f64::consts::FRAC_PI_2 - u.get().z.clamp(-1.0, 1.0).acos()
    }
}

impl SupportField for RotatedField {
    fn support(&self, u: UnitVec3) -> Result<f64> {
        Ok(self.polygon.support(RotatedField::planar_angle(u)))
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Analytic
    }
}

// ---------------------------------------------------------------------------
// Boundary points from the support gradient
// ---------------------------------------------------------------------------

/// Boundary point DH(u) in the spherical chart:
/// DH = (h_θ/sin²φ)·u_θ + h_φ·u_φ + h·u with central differences of step
/// `tol.fd_step`. Refuses directions within the pole margin, where the
/// chart degenerates; use [`gradient_point`] there.
pub fn boundary_point<F: SupportField + ?Sized>(
    f: &F,
    angles: SphericalAngles,
    tol: &Tolerances,
) -> Result<Vec3> {
    let margin = tol.pole_margin();
    if angles.phi < margin || angles.phi > std::f64::consts::PI - margin {
        return Err(CwError::Pole {
            phi: angles.phi,
            margin,
        });
    }
    let fd = tol.fd_step;
    let eval = |theta: f64, phi: f64| -> Result<f64> {
        f.support(unit_from_spherical(SphericalAngles { theta, phi }))
    };
    let h = eval(angles.theta, angles.phi)?;
    let h_theta =
        (eval(angles.theta + fd, angles.phi)? - eval(angles.theta - fd, angles.phi)?) / (2.0 * fd);
    let h_phi =
        (eval(angles.theta, angles.phi + fd)? - eval(angles.theta, angles.phi - fd)?) / (2.0 * fd);
    let (u_theta, u_phi) = crate::geom::tangent_basis(angles, tol)?;
    let u = unit_from_spherical(angles).get();
    let sin_phi = angles.phi.sin();
    Ok(u_theta * (h_theta / (sin_phi * sin_phi)) + u_phi * h_phi + u * h)
}

/// Chart-free boundary point: the same DH(u) = ∇h + h·u, but differenced
/// along two geodesics through u in a deterministic tangent frame. Works
/// at every direction, poles included.
pub fn gradient_point<F: SupportField + ?Sized>(
    f: &F,
    u: UnitVec3,
    tol: &Tolerances,
) -> Result<Vec3> {
    let uv = u.get();
    let t1 = orthonormal_to(uv);
    let t2 = uv.cross(t1);
    let fd = tol.fd_step;
    let (sin_fd, cos_fd) = fd.sin_cos();
    let rotate = |t: Vec3, sign: f64| UnitVec3::from_normalized(uv * cos_fd + t * (sign * sin_fd));
    let h = f.support(u)?;
    let d1 = (f.support(rotate(t1, 1.0))? - f.support(rotate(t1, -1.0))?) / (2.0 * fd);
    let d2 = (f.support(rotate(t2, 1.0))? - f.support(rotate(t2, -1.0))?) / (2.0 * fd);
    Ok(t1 * d1 + t2 * d2 + uv * h)
}
