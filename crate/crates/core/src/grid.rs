//! Antipodally closed direction grids from icosahedron subdivision.
//!
//! The base icosahedron's vertex set is closed under negation, and edge
//! midpoints of antipodal edges are exact floating-point negations of each
//! other (negation commutes with midpoint and normalization bit-for-bit), so
//! every subdivision level stays antipodally closed and the antipodal map is
//! an exact involution on node indices. Node count at level L is
//! 10·4^L + 2.

use crate::error::{CwError, Result};
use crate::geom::{UnitVec3, Vec3};
use crate::tol::Tolerances;
use std::collections::HashMap;

/// Maximum supported subdivision level (655,362 nodes).
pub const MAX_GRID_LEVEL: u32 = 8;

/// Triangulated unit sphere: subdivided icosahedron.
#[derive(Debug, Clone)]
pub struct Icosphere {
    /// Unit vertices.
    pub vertices: Vec<Vec3>,
    /// Counterclockwise (outward-facing) vertex-index triples.
    pub triangles: Vec<[usize; 3]>,
    /// Subdivision level.
    pub level: u32,
}

/// Icosahedron oriented with a five-fold axis along z: poles at ±e₃ and
/// two pentagonal rings at height ±1/√5, the lower ring offset by a half
/// step. Rotating about z by 2π/5 maps the vertex set to itself, and the
/// subdivision below preserves that symmetry, so grids built from this
/// base are azimuthally symmetric — the property boundary meshes of bodies
/// of revolution inherit.
fn polar_base_icosahedron() -> (Vec<Vec3>, Vec<[usize; 3]>) {
    let ring_z = 1.0 / 5.0_f64.sqrt();
    let ring_r = 2.0 / 5.0_f64.sqrt();
    let step = std::f64::consts::TAU / 5.0;
    let mut verts = vec![Vec3::new(0.0, 0.0, 1.0)];
    for k in 0..5 {
        let a = k as f64 * step;
        verts.push(Vec3::new(ring_r * a.cos(), ring_r * a.sin(), ring_z));
    }
    for k in 0..5 {
        let a = (k as f64 + 0.5) * step;
        verts.push(Vec3::new(ring_r * a.cos(), ring_r * a.sin(), -ring_z));
    }
    verts.push(Vec3::new(0.0, 0.0, -1.0));

    // Upper ring: 1..=5; lower ring: 6..=10. Lower vertex k sits between
    // upper vertices k and k+1 in azimuth. All faces wind outward.
    let up = |k: usize| 1 + k % 5;
    let lo = |k: usize| 6 + k % 5;
    let mut faces = Vec::with_capacity(20);
    for k in 0..5 {
        faces.push([0, up(k), up(k + 1)]);
        faces.push([up(k), lo(k + 4), lo(k)]);
        faces.push([up(k), lo(k), up(k + 1)]);
        faces.push([11, lo(k + 1), lo(k)]);
    }
    (verts, faces)
}

/// Golden ratio icosahedron, unnormalized coordinates (±1, ±t, 0) cyclic.
fn base_icosahedron() -> (Vec<Vec3>, Vec<[usize; 3]>) {
    let t = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let verts = vec![
        Vec3::new(-1.0, t, 0.0),
        Vec3::new(1.0, t, 0.0),
        Vec3::new(-1.0, -t, 0.0),
        Vec3::new(1.0, -t, 0.0),
        Vec3::new(0.0, -1.0, t),
        Vec3::new(0.0, 1.0, t),
        Vec3::new(0.0, -1.0, -t),
        Vec3::new(0.0, 1.0, -t),
        Vec3::new(t, 0.0, -1.0),
        Vec3::new(t, 0.0, 1.0),
        Vec3::new(-t, 0.0, -1.0),
        Vec3::new(-t, 0.0, 1.0),
    ];
    let faces = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    (verts, faces)
}

impl Icosphere {
    /// Builds the subdivided icosahedron at the given level, in the
    /// standard golden-ratio orientation.
    pub fn new(level: u32) -> Result<Icosphere> {
        let (verts, faces) = base_icosahedron();
        Self::subdivide(verts, faces, level)
    }

    /// Builds the subdivided icosahedron at the given level, oriented with
    /// a five-fold axis along z (nodes at both poles, node set invariant
    /// under azimuthal rotation by 2π/5).
    pub fn new_polar(level: u32) -> Result<Icosphere> {
        let (verts, faces) = polar_base_icosahedron();
        Self::subdivide(verts, faces, level)
    }

    fn subdivide(base_verts: Vec<Vec3>, base_faces: Vec<[usize; 3]>, level: u32) -> Result<Icosphere> {
        if level > MAX_GRID_LEVEL {
            return Err(CwError::Capacity {
                level,
                max: MAX_GRID_LEVEL,
            });
        }
        let mut vertices: Vec<Vec3> = base_verts.into_iter().map(Vec3::normalized).collect();
        let mut triangles = base_faces;

        for _ in 0..level {
            let mut midpoint_cache: HashMap<(usize, usize), usize> = HashMap::new();
            let mut next_triangles = Vec::with_capacity(triangles.len() * 4);
            for tri in &triangles {
                let mut mids = [0usize; 3];
                for k in 0..3 {
                    let (a, b) = (tri[k], tri[(k + 1) % 3]);
                    let key = (a.min(b), a.max(b));
                    mids[k] = *midpoint_cache.entry(key).or_insert_with(|| {
                        let m = ((vertices[a] + vertices[b]) * 0.5).normalized();
                        vertices.push(m);
                        vertices.len() - 1
                    });
                }
                let [v0, v1, v2] = *tri;
                let [m01, m12, m20] = mids;
                next_triangles.push([v0, m01, m20]);
                next_triangles.push([v1, m12, m01]);
                next_triangles.push([v2, m20, m12]);
                next_triangles.push([m01, m12, m20]);
            }
            triangles = next_triangles;
        }

        Ok(Icosphere {
            vertices,
            triangles,
            level,
        })
    }
}

/// Antipodally closed set of unit directions with its antipodal involution.
#[derive(Debug, Clone)]
pub struct DirectionGrid {
    nodes: Vec<UnitVec3>,
    antipode: Vec<usize>,
    level: u32,
}

/// Hash key that treats +0.0 and -0.0 alike.
fn bits_key(v: Vec3) -> [u64; 3] {
    let canon = |x: f64| if x == 0.0 { 0.0_f64 } else { x };
    [
        canon(v.x).to_bits(),
        canon(v.y).to_bits(),
        canon(v.z).to_bits(),
    ]
}

impl DirectionGrid {
    /// Builds the grid at the given subdivision level. Node count is
    /// 10·4^level + 2; levels above [`MAX_GRID_LEVEL`] are refused.
    pub fn new(level: u32, tol: &Tolerances) -> Result<DirectionGrid> {
        let sphere = Icosphere::new(level)?;
        Self::from_icosphere(&sphere, tol)
    }

    /// Extracts nodes and the antipodal map from an icosphere.
    pub fn from_icosphere(sphere: &Icosphere, tol: &Tolerances) -> Result<DirectionGrid> {
        let nodes: Vec<UnitVec3> = sphere
            .vertices
            .iter()
            .map(|&v| UnitVec3::from_normalized(v))
            .collect();

        let index: HashMap<[u64; 3], usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, u)| (bits_key(u.get()), i))
            .collect();

        let mut antipode = vec![usize::MAX; nodes.len()];
        for (i, u) in nodes.iter().enumerate() {
            let neg = -u.get();
            let j = match index.get(&bits_key(neg)) {
                Some(&j) => j,
                None => {
                    // Fallback: nearest node (exact negation is expected; this
                    // guards against platform-specific libm differences).
                    let (j, d) = nodes
                        .iter()
                        .enumerate()
                        .map(|(j, w)| (j, (w.get() - neg).norm()))
                        .min_by(|a, b| a.1.total_cmp(&b.1))
                        .expect("grid is nonempty");
                    if d > tol.eps_unit {
                        return Err(CwError::Grid {
                            reason: format!(
                                "node {i} has no antipodal partner within eps_unit (gap {d})"
                            ),
                        });
                    }
                    j
                }
            };
            antipode[i] = j;
        }

        // The involution must be fixed-point free and self-inverse.
        for (i, &j) in antipode.iter().enumerate() {
            if j == i || antipode[j] != i {
                return Err(CwError::Grid {
                    reason: format!("antipodal map is not an involution at node {i}"),
                });
            }
        }

        Ok(DirectionGrid {
            nodes,
            antipode,
            level: sphere.level,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn node(&self, i: usize) -> UnitVec3 {
        self.nodes[i]
    }

    pub fn nodes(&self) -> &[UnitVec3] {
        &self.nodes
    }

    /// Index of the node exactly opposite node `i`.
    pub fn antipode_index(&self, i: usize) -> usize {
        self.antipode[i]
    }

    /// Iterator over antipodal pairs (i, j), each unordered pair once.
    pub fn antipode_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.antipode
            .iter()
            .enumerate()
            .filter(|&(i, &j)| i < j)
            .map(|(i, &j)| (i, j))
    }
}

/// Builds an antipodally symmetric direction grid by icosahedron
/// subdivision. Level L has 10·4^L + 2 nodes; levels above
/// [`MAX_GRID_LEVEL`] raise a capacity error.
pub fn sphere_grid(level: u32, tol: &Tolerances) -> Result<DirectionGrid> {
    DirectionGrid::new(level, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_counts_follow_subdivision_formula() {
        let tol = Tolerances::default();
        assert_eq!(sphere_grid(0, &tol).unwrap().len(), 12);
        assert_eq!(sphere_grid(1, &tol).unwrap().len(), 42);
        assert_eq!(sphere_grid(2, &tol).unwrap().len(), 162);
        assert_eq!(sphere_grid(3, &tol).unwrap().len(), 642);
    }

    #[test]
    fn level_above_capacity_is_refused() {
        let tol = Tolerances::default();
        assert!(matches!(
            sphere_grid(MAX_GRID_LEVEL + 1, &tol),
            Err(CwError::Capacity { .. })
        ));
    }

    #[test]
    fn antipodal_map_is_exact_involution() {
        let tol = Tolerances::default();
        for level in 0..=4 {
            let g = sphere_grid(level, &tol).unwrap();
            for i in 0..g.len() {
                let j = g.antipode_index(i);
                assert_ne!(i, j);
                assert_eq!(g.antipode_index(j), i);
                // Exact bitwise negation.
                let s = g.node(i).get() + g.node(j).get();
                assert_eq!(s.norm(), 0.0, "level {level} node {i}");
            }
        }
    }

    #[test]
    fn all_nodes_are_unit() {
        let tol = Tolerances::default();
        let g = sphere_grid(3, &tol).unwrap();
        for u in g.nodes() {
            assert!((u.get().norm() - 1.0).abs() <= tol.eps_unit);
        }
    }

    /// Euler characteristic 2, every edge in exactly two triangle with
    /// opposite orientation, all windings outward.
    fn assert_closed_and_outward(sphere: &Icosphere) {
        let mut edge_count: HashMap<(usize, usize), i64> = HashMap::new();
        for t in &sphere.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *edge_count.entry((a.min(b), a.max(b))).or_insert(0) += if a < b { 1 } else { -1 };
            }
            let (a, b, c) = (
                sphere.vertices[t[0]],
                sphere.vertices[t[1]],
                sphere.vertices[t[2]],
            );
            let n = (b - a).cross(c - a);
            let centroid = (a + b + c) * (1.0 / 3.0);
            assert!(n.dot(centroid) > 0.0, "triangle {t:?} winds inward");
        }
        for (&e, &c) in &edge_count {
            assert_eq!(c, 0, "edge {e:?} appears with unbalanced orientation");
        }
        let v = sphere.vertices.len() as i64;
        let e = edge_count.len() as i64;
        let f = sphere.triangles.len() as i64;
        assert_eq!(v - e + f, 2);
    }

    #[test]
    fn icosphere_triangulation_is_closed_and_consistent() {
        for level in [1, 2] {
            assert_closed_and_outward(&Icosphere::new(level).unwrap());
            assert_closed_and_outward(&Icosphere::new_polar(level).unwrap());
        }
    }

    #[test]
    fn polar_icosphere_has_exact_poles_and_five_fold_symmetry() {
        let sphere = Icosphere::new_polar(2).unwrap();
        assert_eq!(sphere.vertices.len(), 162);
        assert!(sphere.vertices.contains(&Vec3::new(0.0, 0.0, 1.0)));
        assert!(sphere.vertices.contains(&Vec3::new(0.0, 0.0, -1.0)));
        // Azimuthal rotation by 2π/5 permutes the node set.
        let (s, c) = (std::f64::consts::TAU / 5.0).sin_cos();
        for &v in &sphere.vertices {
            let r = Vec3::new(c * v.x - s * v.y, s * v.x + c * v.y, v.z);
            let gap = sphere
                .vertices
                .iter()
                .map(|w| (*w - r).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(gap < 1e-12, "rotated node misses the set by {gap}");
        }
    }

    #[test]
    fn pairs_iterator_covers_each_pair_once() {
        let tol = Tolerances::default();
        let g = sphere_grid(1, &tol).unwrap();
        let pairs: Vec<_> = g.antipode_pairs().collect();
        assert_eq!(pairs.len(), g.len() / 2);
    }
}
