//! Triangulated boundary meshes of support fields: construction from a
//! direction grid, closure checking, volume and surface area, and OBJ
//! export.
//!
//! A mesh vertex is the boundary point DH(u) = ∇h(u) + h(u)·u of one grid
//! node u, evaluated chart-free so nodes at the coordinate poles need no
//! special casing; the grid's triangles are reused as connectivity, which
//! makes every generated mesh closed and consistently wound by
//! construction. The node direction that produced a vertex is kept as its
//! outward normal.

use crate::error::{CwError, Result};
use crate::geom::{UnitVec3, Vec3};
use crate::grid::Icosphere;
use crate::support3d::{gradient_point, SupportField};
use crate::tol::Tolerances;
use std::collections::HashMap;
use std::fmt::Write as _;

/// Closed triangle mesh of a body boundary.
#[derive(Debug, Clone)]
pub struct TriMesh {
    /// Boundary points, one per grid node.
    pub vertices: Vec<Vec3>,
    /// Outward unit normals: the grid direction that produced each vertex.
    pub normals: Vec<Vec3>,
    /// Vertex-index triples, counterclockwise seen from outside.
    pub triangles: Vec<[usize; 3]>,
}

impl TriMesh {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    /// Verifies the closed-orientable-surface invariant: indices in range,
    /// no degenerate triangles, and every edge shared by exactly two
    /// triangles with opposite orientation.
    pub fn check_closed(&self) -> Result<()> {
        let n = self.vertices.len();
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for (t_idx, t) in self.triangles.iter().enumerate() {
            if t[0] == t[1] || t[1] == t[2] || t[2] == t[0] {
                return Err(CwError::OpenMesh {
                    reason: format!("triangle {t_idx} repeats a vertex index"),
                });
            }
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                if a >= n || b >= n {
                    return Err(CwError::OpenMesh {
                        reason: format!("triangle {t_idx} references a missing vertex"),
                    });
                }
                if directed.insert((a, b), t_idx).is_some() {
                    return Err(CwError::OpenMesh {
                        reason: format!(
                            "edge ({a}, {b}) is traversed twice in the same direction"
                        ),
                    });
                }
            }
        }
        for &(a, b) in directed.keys() {
            if !directed.contains_key(&(b, a)) {
                return Err(CwError::OpenMesh {
                    reason: format!("edge ({a}, {b}) has no oppositely wound partner"),
                });
            }
        }
        Ok(())
    }
}

/// Triangulates the boundary of a support field at the given grid level.
///
/// The grid is an icosphere oriented with a five-fold axis along z, so the
/// mesh of a body of revolution about z inherits the grid's azimuthal
/// symmetry: rotating the vertex set by 2π/5 maps it to itself.
pub fn mesh_from_support<F: SupportField + ?Sized>(
    f: &F,
    grid_level: u32,
    tol: &Tolerances,
) -> Result<TriMesh> {
    let sphere = Icosphere::new_polar(grid_level)?;
    let mut vertices = Vec::with_capacity(sphere.vertices.len());
    for &v in &sphere.vertices {
        vertices.push(gradient_point(f, UnitVec3::from_normalized(v), tol)?);
    }
    Ok(TriMesh {
        vertices,
        normals: sphere.vertices,
        triangles: sphere.triangles,
    })
}

/// Enclosed volume by the divergence theorem: the sum of signed tetrahedra
/// spanned by each triangle and the origin. Translation-invariant for a
/// closed mesh; refuses open meshes.
pub fn mesh_volume(m: &TriMesh) -> Result<f64> {
    m.check_closed()?;
    let mut six_v = 0.0;
    for t in &m.triangles {
        let (a, b, c) = (m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]);
        six_v += a.dot(b.cross(c));
    }
    Ok(six_v / 6.0)
}

/// Surface area: the sum of triangle areas. Refuses open meshes.
pub fn mesh_area(m: &TriMesh) -> Result<f64> {
    m.check_closed()?;
    let mut area = 0.0;
    for t in &m.triangles {
        let (a, b, c) = (m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]);
        area += 0.5 * (b - a).cross(c - a).norm();
    }
    Ok(area)
}

/// Writes one float with 17 significant digits (enough to round-trip f64
/// exactly) in a fixed scientific format, so identical meshes serialize to
/// identical bytes.
fn push_f64(out: &mut String, x: f64) {
    let _ = write!(out, "{x:.16e}");
}

/// Serializes the mesh as Wavefront OBJ text: `v` position lines, `vn`
/// normal lines, and `f` faces indexing both (1-based). Output is a pure
/// function of the mesh, so identical inputs produce identical bytes.
pub fn obj_string(m: &TriMesh) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# closed triangle mesh: {} vertices, {} triangles",
        m.vertices.len(),
        m.triangles.len()
    );
    for v in &m.vertices {
        out.push_str("v ");
        push_f64(&mut out, v.x);
        out.push(' ');
        push_f64(&mut out, v.y);
        out.push(' ');
        push_f64(&mut out, v.z);
        out.push('\n');
    }
    for n in &m.normals {
        out.push_str("vn ");
        push_f64(&mut out, n.x);
        out.push(' ');
        push_f64(&mut out, n.y);
        out.push(' ');
        push_f64(&mut out, n.z);
        out.push('\n');
    }
    for t in &m.triangles {
        let _ = writeln!(
            out,
            "f {0}//{0} {1}//{1} {2}//{2}",
            t[0] + 1,
            t[1] + 1,
            t[2] + 1
        );
    }
    out
}
