//! Shared fixtures and independent oracles for the integration suite.
//!
//! The oracles here deliberately avoid the code paths they check: planar
//! support values come from dense boundary sampling, volumes from Monte
//! Carlo membership counting, the five-point configuration from a bisection
//! search on its diametric condition, and congruence candidates from the
//! point set's own symmetries.

#![allow(dead_code)]

use cwb_core::ballpoly3d::{build_combinatorics, PointSet3, ReuleauxPolyhedron};
use cwb_core::extremality::{radii_profile, ProbeRegion};
use cwb_core::geom::{UnitVec3, Vec3};
use cwb_core::grid::DirectionGrid;
use cwb_core::meissner3d::{build_meissner, GeneratorSet, MeissnerBody, SurgeryChoice};
use cwb_core::reuleaux2d::ReuleauxPolygon;
use cwb_core::support3d::{minkowski_combine, AnalyticBody, ReflectField, SupportField};
use cwb_core::Tolerances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn tol() -> Tolerances {
    Tolerances::default()
}

/// Regular tetrahedron with unit edge length, one face in the z = 0 plane.
pub fn tetrahedron_points() -> Vec<Vec3> {
    vec![
        Vec3::new(0.0, 0.0, 0.0),
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.5, 3.0_f64.sqrt() / 2.0, 0.0),
        Vec3::new(0.5, 3.0_f64.sqrt() / 6.0, (2.0_f64 / 3.0).sqrt()),
    ]
}

/// The same tetrahedron translated so its centroid is the origin (the
/// frame in which its point symmetries are orthogonal matrices).
pub fn centered_tetrahedron_points() -> Vec<Vec3> {
    let pts = tetrahedron_points();
    let c = pts.iter().fold(Vec3::ZERO, |a, &p| a + p) * 0.25;
    pts.into_iter().map(|p| p - c).collect()
}

pub fn tetrahedron_polyhedron(points: Vec<Vec3>) -> ReuleauxPolyhedron {
    let t = tol();
    build_combinatorics(PointSet3::new(points, &t).unwrap(), &t).unwrap()
}

pub fn meissner(points: Vec<Vec3>, choice: SurgeryChoice) -> MeissnerBody {
    build_meissner(tetrahedron_polyhedron(points), choice, &tol()).unwrap()
}

pub fn analytic_meissner(choice: SurgeryChoice) -> AnalyticBody {
    AnalyticBody::from_meissner(&meissner(tetrahedron_points(), choice), &tol()).unwrap()
}

/// ½·M₀ ⊕ ½·(−M₁): Minkowski average of the vertex-surgered tetrahedron
/// with the point reflection of the face-surgered one. The reflection
/// moves every boundary feature off its partner's, so the average un-pins
/// the curvature eigenvalues on most of the sphere.
pub fn reflected_blend() -> impl SupportField {
    minkowski_combine(
        analytic_meissner(SurgeryChoice::zeros(3)),
        ReflectField {
            inner: analytic_meissner(SurgeryChoice::ones(3)),
        },
        0.5,
    )
    .unwrap()
}

pub fn random_unit(rng: &mut ChaCha8Rng) -> UnitVec3 {
    loop {
        let v = Vec3::new(
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
        );
        let n = v.norm();
        if (0.05..=1.0).contains(&n) {
            return UnitVec3::from_normalized(v / n);
        }
    }
}

/// Independent planar support oracle: densely samples every boundary arc
/// (endpoints included) and maximizes x·u directly. Discretization error
/// is O((arc span / samples)²), far below the tolerances it backs.
pub fn planar_support_oracle(polygon: &ReuleauxPolygon, theta: f64, samples_per_arc: usize) -> f64 {
    let u = (theta.cos(), theta.sin());
    let verts = polygon.vertices();
    let mut best = f64::NEG_INFINITY;
    for (j, start, end) in polygon.arcs() {
        let c = verts[j];
        for s in 0..=samples_per_arc {
            let t = start + (end - start) * s as f64 / samples_per_arc as f64;
            let x = (c.x + t.cos(), c.y + t.sin());
            best = best.max(x.0 * u.0 + x.1 * u.1);
        }
    }
    best
}

/// Monte Carlo volume of the unit-ball intersection of a generator set:
/// seeded uniform samples over the tightest per-axis bounding box the
/// generator points admit, counted by exact membership (farthest generator
/// distance at most 1). Standard error is well under 0.5% at 10⁶ samples
/// for the bodies checked here.
pub fn mc_volume(g: &GeneratorSet, samples: usize, seed: u64) -> f64 {
    assert!(
        !g.points.is_empty(),
        "the bounding box needs at least one generator point"
    );
    let mut lo = Vec3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut hi = Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
    for &p in &g.points {
        lo = Vec3::new(lo.x.max(p.x - 1.0), lo.y.max(p.y - 1.0), lo.z.max(p.z - 1.0));
        hi = Vec3::new(hi.x.min(p.x + 1.0), hi.y.min(p.y + 1.0), hi.z.min(p.z + 1.0));
    }
    let extent = hi - lo;
    let box_volume = extent.x * extent.y * extent.z;
    assert!(box_volume.is_finite() && box_volume > 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..samples {
        let z = Vec3::new(
            lo.x + extent.x * rng.random::<f64>(),
            lo.y + extent.y * rng.random::<f64>(),
            lo.z + extent.z * rng.random::<f64>(),
        );
        if g.farthest_from(z) <= 1.0 {
            hits += 1;
        }
    }
    box_volume * hits as f64 / samples as f64
}

/// Search oracle for a five-point extremal configuration: two poles of a
/// unit segment plus three points on the circle ∂B(p) ∩ ∂B(q), at azimuths
/// −t, 0, +t. Bisects t until the outer pair is exactly diametric (the
/// configuration is extremal exactly then; the caller certifies it with
/// the library's own check).
pub fn five_point_search() -> Vec<Vec3> {
    let rho = 3.0_f64.sqrt() / 2.0;
    let c = |az: f64| Vec3::new(rho * az.cos(), rho * az.sin(), 0.5);
    let outer_gap = |t: f64| c(-t).dist(c(t)) - 1.0;

    let (mut a, mut b) = (0.1_f64, 1.5_f64);
    assert!(outer_gap(a) < 0.0 && outer_gap(b) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if outer_gap(mid) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let t = 0.5 * (a + b);
    vec![
        Vec3::new(0.0, 0.0, 0.0),
        Vec3::new(0.0, 0.0, 1.0),
        c(-t),
        c(0.0),
        c(t),
    ]
}

/// Picks probe caps inside the deep un-pinned zones of a field: scan the
/// level-`level` profile, keep nodes whose margin min(r_min, 1 − r_max)
/// exceeds 0.1 with no shallow node within 0.25 radians, then greedily take
/// up to four centers pairwise (and antipodally) separated by more than 0.7.
pub fn deep_cap_region<F: SupportField + ?Sized>(
    field: &F,
    level: u32,
    delta: f64,
) -> ProbeRegion {
    let t = tol();
    let grid = DirectionGrid::new(level, &t).unwrap();
    let profile = radii_profile(field, &grid, &t).unwrap();
    let margins: Vec<Option<f64>> = (0..grid.len())
        .map(|i| profile.node(i).map(|r| r.r_min.min(1.0 - r.r_max)))
        .collect();
    let mut deep: Vec<(usize, f64)> = Vec::new();
    for i in 0..grid.len() {
        if margins[i].is_none_or(|m| m <= 0.1) {
            continue;
        }
        let mut depth = f64::INFINITY;
        for j in 0..grid.len() {
            if margins[j].is_none_or(|mj| mj <= 0.1) {
                let d = grid.node(i).get().dot(grid.node(j).get()).clamp(-1.0, 1.0);
                depth = depth.min(d.acos());
            }
        }
        if depth >= 0.25 {
            deep.push((i, depth));
        }
    }
    deep.sort_by(|a, b| b.1.total_cmp(&a.1));
    assert!(!deep.is_empty(), "no deep un-pinned region found");
    let mut centers: Vec<(usize, f64)> = Vec::new();
    for &(i, d) in &deep {
        let ci = grid.node(i).get();
        let ok = centers.iter().all(|&(j, _)| {
            let cj = grid.node(j).get();
            ci.dot(cj).clamp(-1.0, 1.0).acos() > 0.7 && ci.dot(-cj).clamp(-1.0, 1.0).acos() > 0.7
        });
        if ok {
            centers.push((i, d));
        }
        if centers.len() == 4 {
            break;
        }
    }
    let caps: Vec<(UnitVec3, f64)> = centers
        .iter()
        .map(|&(i, d)| (grid.node(i), (d - 0.05).min(0.3)))
        .collect();
    ProbeRegion::caps(caps, delta).unwrap()
}

/// The point symmetries of a centered point set: every permutation of the
/// points that extends to an orthogonal matrix. For a centered regular
/// tetrahedron this yields all 24 elements (12 rotations, 12 improper).
pub fn point_symmetries(pts: &[Vec3]) -> Vec<[[f64; 3]; 3]> {
    let n = pts.len();
    assert!(n >= 4, "need a full-dimensional point set");
    let base = [pts[0], pts[1], pts[2]];
    let inv = invert3(columns(base)).expect("first three points span space");

    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    permute_all(&mut perm, 0, &mut |p: &[usize]| {
        let image = [pts[p[0]], pts[p[1]], pts[p[2]]];
        let r = mat_mul(columns(image), inv);
        if !is_orthogonal(r) {
            return;
        }
        // The matrix determined by three points must also map the rest.
        for (k, &pk) in p.iter().enumerate().skip(3) {
            if apply(r, pts[k]).dist(pts[pk]) > 1e-9 {
                return;
            }
        }
        out.push(r);
    });
    out
}

pub fn apply(m: [[f64; 3]; 3], v: Vec3) -> Vec3 {
    Vec3::new(
        m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
        m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
        m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
    )
}

pub fn transpose(m: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

fn columns(c: [Vec3; 3]) -> [[f64; 3]; 3] {
    [
        [c[0].x, c[1].x, c[2].x],
        [c[0].y, c[1].y, c[2].y],
        [c[0].z, c[1].z, c[2].z],
    ]
}

fn mat_mul(a: [[f64; 3]; 3], b: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                m[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    m
}

fn invert3(m: [[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if det.abs() < 1e-12 {
        return None;
    }
    let cof = |r: usize, c: usize| {
        let (r1, r2) = ((r + 1) % 3, (r + 2) % 3);
        let (c1, c2) = ((c + 1) % 3, (c + 2) % 3);
        m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]
    };
    let mut inv = [[0.0; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            inv[c][r] = cof(r, c) / det;
        }
    }
    Some(inv)
}

fn is_orthogonal(m: [[f64; 3]; 3]) -> bool {
    let t = mat_mul(transpose(m), m);
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { 1.0 } else { 0.0 };
            if (t[i][j] - want).abs() > 1e-9 {
                return false;
            }
        }
    }
    true
}

fn permute_all(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute_all(perm, k + 1, visit);
        perm.swap(k, i);
    }
}
