//! Extremality tests for constant-width bodies.
//!
//! A constant-width body is *extreme* when it is not the proper Minkowski
//! average of two non-congruent constant-width bodies. Everything here
//! revolves around the curvature bound: for a constant-width support
//! function h, the eigenvalues of ∇²h + h·id lie in [0, 1] almost
//! everywhere, and extremality is tied to those eigenvalues pinning to the
//! endpoints {0, 1}:
//!
//! * [`curvature_matrix`] — the 2×2 matrix of ∇²h + h·id in the spherical
//!   coordinate basis, by central finite differences of any
//!   [`SupportField`];
//! * [`radii_profile`] — its eigenvalue pair (r_min, r_max) over a
//!   direction grid, the raw material of every test below;
//! * [`kallay_test_2d`] — the planar criterion: a 2D body is extreme iff
//!   h″ + h ∈ {0, 1} a.e.;
//! * [`conjecture_scan_3d`] — measures where min(r_min, 1 − r_max)
//!   exceeds a band, the 3D analogue of the planar criterion;
//! * [`probe_nonextreme`] — a constructive certificate generator: where
//!   the eigenvalues stay strictly inside (0, 1) on an open set, it builds
//!   an explicit decomposition h = ½h₊ + ½h₋ into two constant-width
//!   fields that are not translates of each other;
//! * [`translation_fit`] — least-squares detection of a pure-translation
//!   difference between two sampled fields.
//!
//! Grid scans cannot certify measure-zero statements, so every "almost
//! everywhere" condition is reported as a violating measure or fraction
//! against an explicit tolerance band, never as a boolean.

use crate::error::{CwError, Result};
use crate::geom::{unit_from_spherical, SphericalAngles, UnitVec3, Vec3};
use crate::grid::DirectionGrid;
use crate::reuleaux2d::PolarField;
use crate::support3d::{AnalyticBody, Feature, SupportField};
use crate::tol::Tolerances;
use std::f64::consts::{PI, TAU};

// ---------------------------------------------------------------------------
// Curvature matrices
// ---------------------------------------------------------------------------

/// The matrix of ∇²h + h·id restricted to the tangent plane, in the
/// spherical coordinate basis {u_θ, u_φ}:
///
/// ```text
/// | h_θθ/sin²φ + h_φ/tanφ + h    sinφ · ∂φ(h_θ/sinφ) |
/// | (1/sinφ) · ∂φ(h_θ/sinφ)      h_φφ + h            |
/// ```
///
/// The basis is orthogonal but not orthonormal (|u_θ| = sin φ), so the
/// matrix is not symmetric; it is similar to the symmetric matrix with
/// both off-diagonal entries replaced by ∂φ(h_θ/sinφ), which is what
/// [`CurvatureMatrix::eigenvalues`] diagonalizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureMatrix {
    /// Row-major entries in the {u_θ, u_φ} basis.
    pub m: [[f64; 2]; 2],
}

impl CurvatureMatrix {
    /// Eigenvalues (min, max). The off-diagonal product m₀₁·m₁₂ is a
    /// square (both entries carry the same mixed derivative), so the
    /// eigenvalues are real; a negative product from rounding is clamped.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let a = self.m[0][0];
        let d = self.m[1][1];
        let cross = (self.m[0][1] * self.m[1][0]).max(0.0);
        let mean = 0.5 * (a + d);
        let disc = (0.5 * (a - d)).powi(2) + cross;
        let r = disc.sqrt();
        (mean - r, mean + r)
    }
}

/// Evaluates h(θ, φ) = H(u(θ, φ)), wrapping θ into [0, 2π).
fn chart_value<F: SupportField + ?Sized>(f: &F, theta: f64, phi: f64) -> Result<f64> {
    let a = SphericalAngles::new(theta.rem_euclid(TAU), phi)?;
    f.support(unit_from_spherical(a))
}

/// Central-difference curvature matrix of a support field at chart
/// coordinates (θ, φ).
///
/// Nine support evaluations on the stencil {θ−ε, θ, θ+ε} × {φ−ε, φ, φ+ε}.
/// φ must stay at least 10·fd_step away from the chart poles, where the
/// 1/sin²φ entry amplifies truncation error beyond use.
pub fn curvature_matrix<F: SupportField + ?Sized>(
    f: &F,
    theta: f64,
    phi: f64,
    fd_step: f64,
) -> Result<CurvatureMatrix> {
    if !(fd_step.is_finite() && fd_step > 0.0) {
        return Err(CwError::Param {
            reason: format!("fd_step = {fd_step} is not positive"),
        });
    }
    let margin = 10.0 * fd_step;
    if !(phi > margin && phi < PI - margin) {
        return Err(CwError::Pole { phi, margin });
    }
    let e = fd_step;
    let h = chart_value(f, theta, phi)?;
    let h_tp = chart_value(f, theta + e, phi)?;
    let h_tm = chart_value(f, theta - e, phi)?;
    let h_pp = chart_value(f, theta, phi + e)?;
    let h_pm = chart_value(f, theta, phi - e)?;
    let h_tppp = chart_value(f, theta + e, phi + e)?;
    let h_tmpp = chart_value(f, theta - e, phi + e)?;
    let h_tppm = chart_value(f, theta + e, phi - e)?;
    let h_tmpm = chart_value(f, theta - e, phi - e)?;

    let sin_phi = phi.sin();
    let h_theta_theta = (h_tp - 2.0 * h + h_tm) / (e * e);
    let h_phi_phi = (h_pp - 2.0 * h + h_pm) / (e * e);
    let h_phi = (h_pp - h_pm) / (2.0 * e);
    // Mixed term c = ∂φ(h_θ / sinφ) via h_θ at the two neighbouring rows.
    let q_plus = (h_tppp - h_tmpp) / (2.0 * e) / (phi + e).sin();
    let q_minus = (h_tppm - h_tmpm) / (2.0 * e) / (phi - e).sin();
    let c = (q_plus - q_minus) / (2.0 * e);

    let a = h_theta_theta / (sin_phi * sin_phi) + h_phi / phi.tan() + h;
    let d = h_phi_phi + h;
    Ok(CurvatureMatrix {
        m: [[a, sin_phi * c], [c / sin_phi, d]],
    })
}

// ---------------------------------------------------------------------------
// Radii profiles over direction grids
// ---------------------------------------------------------------------------

/// Curvature eigenvalue pair at one grid node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeRadii {
    pub r_min: f64,
    pub r_max: f64,
}

/// Per-node curvature eigenvalues (r_min, r_max) of a support field over a
/// direction grid, with nodes inside the chart pole margin skipped and
/// reported as uncovered.
#[derive(Debug, Clone)]
pub struct RadiiProfile {
    grid: DirectionGrid,
    nodes: Vec<Option<NodeRadii>>,
    tags: Option<Vec<Feature>>,
    fd_step: f64,
}

impl RadiiProfile {
    pub fn grid(&self) -> &DirectionGrid {
        &self.grid
    }

    /// Eigenvalue pair at node `i`, or None when the node was skipped.
    pub fn node(&self, i: usize) -> Option<NodeRadii> {
        self.nodes[i]
    }

    /// Supporting-feature tag at node `i`, when tags were attached.
    pub fn tag(&self, i: usize) -> Option<Feature> {
        self.tags.as_ref().map(|t| t[i])
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    /// Number of nodes with an eigenvalue pair.
    pub fn covered(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_some()).count()
    }

    /// Fraction of grid nodes covered.
    pub fn coverage(&self) -> f64 {
        self.covered() as f64 / self.nodes.len() as f64
    }

    /// Labels every node with the boundary feature supporting its
    /// direction, for feature-resolved inspection of the eigenvalues.
    pub fn tag_features(&mut self, body: &AnalyticBody) -> Result<()> {
        let mut tags = Vec::with_capacity(self.nodes.len());
        for i in 0..self.nodes.len() {
            let (_, feat, _) = body.support_with_feature(self.grid.node(i))?;
            tags.push(feat);
        }
        self.tags = Some(tags);
        Ok(())
    }

    /// Checks the duality r_min(u) + r_max(−u) = 1 over antipode pairs
    /// with both nodes covered. Returns the fraction of checked pairs
    /// within `band`, the number checked, and the worst deviation.
    pub fn duality_report(&self, band: f64) -> (f64, usize, f64) {
        let mut checked = 0usize;
        let mut ok = 0usize;
        let mut worst = 0.0_f64;
        for (i, j) in self.grid.antipode_pairs() {
            let (Some(a), Some(b)) = (self.nodes[i], self.nodes[j]) else {
                continue;
            };
            // Both orientations of the identity on the unordered pair.
            for gap in [a.r_min + b.r_max - 1.0, b.r_min + a.r_max - 1.0] {
                checked += 1;
                if gap.abs() <= band {
                    ok += 1;
                }
                worst = worst.max(gap.abs());
            }
        }
        let fraction = if checked == 0 {
            0.0
        } else {
            ok as f64 / checked as f64
        };
        (fraction, checked, worst)
    }
}

/// Curvature eigenvalues of a support field at every grid node outside the
/// pole margin (10·fd_step around φ ∈ {0, π}); skipped nodes are recorded
/// as uncovered rather than failing the whole profile.
pub fn radii_profile<F: SupportField + ?Sized>(
    f: &F,
    grid: &DirectionGrid,
    tol: &Tolerances,
) -> Result<RadiiProfile> {
    let mut nodes = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let a = crate::geom::spherical_from_unit(grid.node(i));
        match curvature_matrix(f, a.theta, a.phi, tol.fd_step) {
            Ok(m) => {
                let (r_min, r_max) = m.eigenvalues();
                nodes.push(Some(NodeRadii { r_min, r_max }));
            }
            Err(CwError::Pole { .. }) => nodes.push(None),
            Err(e) => return Err(e),
        }
    }
    Ok(RadiiProfile {
        grid: grid.clone(),
        nodes,
        tags: None,
        fd_step: tol.fd_step,
    })
}

// ---------------------------------------------------------------------------
// 2D criterion
// ---------------------------------------------------------------------------

/// Outcome of the planar {0, 1}-curvature test.
#[derive(Debug, Clone, PartialEq)]
pub struct KallayReport {
    /// Total angle (radians) of nodes where h″ + h is farther than tau
    /// from both 0 and 1. Extreme curves drive this to 0 as the grid
    /// refines; the ball scores the full 2π.
    pub violation_measure: f64,
    /// Nodes checked (= grid size).
    pub checked: usize,
    /// Nodes violating the band.
    pub violating: usize,
    /// Largest distance from {0, 1} seen, and the angle where.
    pub worst_deviation: f64,
    pub worst_theta: f64,
}

/// The planar extremality criterion: a constant-width curve is extreme iff
/// its polar support function satisfies h″ + h ∈ {0, 1} almost everywhere.
/// Reports the measure of the grid where the banded membership fails;
/// needs at least 256 samples for the second difference to resolve arc
/// transitions.
pub fn kallay_test_2d(h: &PolarField, tau: f64) -> Result<KallayReport> {
    let n = h.len();
    if n < 256 {
        return Err(CwError::Grid {
            reason: format!("{n} samples are too few for the 2D curvature test (need 256)"),
        });
    }
    let dt = h.spacing();
    let v = h.values();
    let mut violating = 0usize;
    let mut worst = 0.0_f64;
    let mut worst_theta = 0.0_f64;
    for i in 0..n {
        let prev = v[(i + n - 1) % n];
        let next = v[(i + 1) % n];
        let r = (next - 2.0 * v[i] + prev) / (dt * dt) + v[i];
        let dev = r.abs().min((r - 1.0).abs());
        if dev > tau {
            violating += 1;
        }
        if dev > worst {
            worst = dev;
            worst_theta = h.theta(i);
        }
    }
    Ok(KallayReport {
        violation_measure: violating as f64 * dt,
        checked: n,
        violating,
        worst_deviation: worst,
        worst_theta,
    })
}

// ---------------------------------------------------------------------------
// 3D scan
// ---------------------------------------------------------------------------

/// Outcome of the 3D endpoint-pinning scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    /// Fraction of covered nodes violating the band.
    pub fraction: f64,
    pub covered: usize,
    pub violating: usize,
    /// Worst offenders: (node index, min(r_min, 1 − r_max)), descending.
    pub worst: Vec<(usize, f64)>,
}

/// Scans a radii profile for directions where neither eigenvalue pins to
/// its endpoint: min(r_min, 1 − r_max) > tau. For surgered and rotated
/// bodies the violating fraction is confined to finite-difference smear
/// around feature boundaries and shrinks under refinement; a genuine
/// Minkowski average violates on open regions.
pub fn conjecture_scan_3d(profile: &RadiiProfile, tau: f64) -> ScanReport {
    let mut covered = 0usize;
    let mut worst: Vec<(usize, f64)> = Vec::new();
    for i in 0..profile.grid().len() {
        let Some(r) = profile.node(i) else { continue };
        covered += 1;
        let margin = r.r_min.min(1.0 - r.r_max);
        if margin > tau {
            worst.push((i, margin));
        }
    }
    worst.sort_by(|a, b| b.1.total_cmp(&a.1));
    let violating = worst.len();
    worst.truncate(8);
    ScanReport {
        fraction: if covered == 0 {
            0.0
        } else {
            violating as f64 / covered as f64
        },
        covered,
        violating,
        worst,
    }
}

// ---------------------------------------------------------------------------
// Latitude–longitude sample grids
// ---------------------------------------------------------------------------

/// Number of φ rows excluded at each pole from lattice curvature checks:
/// the h_θθ/sin²φ entry amplifies second-difference noise without bound as
/// φ → 0, so the two rows nearest each pole carry no usable curvature.
const LATTICE_POLE_ROWS: usize = 2;

/// Uniform latitude–longitude grid, antipodally closed by construction:
/// θ_i = 2πi/n_theta with n_theta even, φ_j = (j + ½)π/n_phi, so the
/// antipodal map (θ, φ) ↦ (θ + π, π − φ) permutes the nodes exactly and no
/// node sits on a chart pole. Used where support samples must be
/// finite-differenced on their own lattice; direction sets for "almost
/// everywhere" scans use [`DirectionGrid`] instead, which has no pole
/// clustering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatLonGrid {
    n_theta: usize,
    n_phi: usize,
}

impl LatLonGrid {
    /// Validates the shape: n_theta even and ≥ 8 (antipodal closure in θ),
    /// n_phi even and ≥ 8 (mirror closure in φ plus pole margins).
    pub fn new(n_theta: usize, n_phi: usize) -> Result<LatLonGrid> {
        if n_theta < 8 || n_theta % 2 != 0 {
            return Err(CwError::Grid {
                reason: format!("n_theta = {n_theta} must be even and at least 8"),
            });
        }
        if n_phi < 8 || n_phi % 2 != 0 {
            return Err(CwError::Grid {
                reason: format!("n_phi = {n_phi} must be even and at least 8"),
            });
        }
        Ok(LatLonGrid { n_theta, n_phi })
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn delta_theta(&self) -> f64 {
        TAU / self.n_theta as f64
    }

    pub fn delta_phi(&self) -> f64 {
        PI / self.n_phi as f64
    }

    pub fn theta(&self, i: usize) -> f64 {
        TAU * i as f64 / self.n_theta as f64
    }

    pub fn phi(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * PI / self.n_phi as f64
    }

    /// Flat index of column i, row j.
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n_theta + i
    }

    /// Column and row of a flat index.
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.n_theta, idx / self.n_theta)
    }

    pub fn node(&self, idx: usize) -> UnitVec3 {
        let (i, j) = self.coords(idx);
        let a = SphericalAngles {
            theta: self.theta(i),
            phi: self.phi(j),
        };
        unit_from_spherical(a)
    }

    /// Flat index of the antipodal node (exact by construction).
    pub fn antipode(&self, idx: usize) -> usize {
        let (i, j) = self.coords(idx);
        self.index((i + self.n_theta / 2) % self.n_theta, self.n_phi - 1 - j)
    }

    /// Quadrature weight of row j (relative; ∝ the spherical area of the
    /// row's cells).
    pub fn weight(&self, j: usize) -> f64 {
        self.phi(j).sin()
    }

    /// Whether row j is outside the pole margin for lattice curvature.
    pub fn covered_row(&self, j: usize) -> bool {
        j >= LATTICE_POLE_ROWS && j + LATTICE_POLE_ROWS < self.n_phi
    }
}

/// A scalar field sampled on a [`LatLonGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    grid: LatLonGrid,
    values: Vec<f64>,
}

impl SampledField {
    /// Wraps sample values (flat-indexed per [`LatLonGrid::index`]).
    pub fn new(grid: LatLonGrid, values: Vec<f64>) -> Result<SampledField> {
        if values.len() != grid.len() {
            return Err(CwError::Grid {
                reason: format!(
                    "{} values for a grid of {} nodes",
                    values.len(),
                    grid.len()
                ),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CwError::Grid {
                reason: "non-finite sample".into(),
            });
        }
        Ok(SampledField { grid, values })
    }

    /// Samples a support field on the grid.
    pub fn from_field<F: SupportField + ?Sized>(
        f: &F,
        grid: LatLonGrid,
    ) -> Result<SampledField> {
        let mut values = Vec::with_capacity(grid.len());
        for idx in 0..grid.len() {
            values.push(f.support(grid.node(idx))?);
        }
        SampledField::new(grid, values)
    }

    pub fn grid(&self) -> LatLonGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    /// Pointwise combination a·self + b·other (same grid required).
    pub fn axpy(&self, a: f64, other: &SampledField, b: f64) -> Result<SampledField> {
        if self.grid != other.grid {
            return Err(CwError::Grid {
                reason: "fields sampled on different grids".into(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        SampledField::new(self.grid, values)
    }

    /// Lattice curvature matrix at a node, from second differences on the
    /// grid's own spacings. None on pole-margin rows.
    pub fn lattice_curvature(&self, idx: usize) -> Option<CurvatureMatrix> {
        let g = self.grid;
        let (i, j) = g.coords(idx);
        if !g.covered_row(j) {
            return None;
        }
        let nt = g.n_theta;
        let ip = (i + 1) % nt;
        let im = (i + nt - 1) % nt;
        let dt = g.delta_theta();
        let dp = g.delta_phi();
        let h = self.values[g.index(i, j)];
        let h_tp = self.values[g.index(ip, j)];
        let h_tm = self.values[g.index(im, j)];
        let h_pp = self.values[g.index(i, j + 1)];
        let h_pm = self.values[g.index(i, j - 1)];
        let phi = g.phi(j);
        let sin_phi = phi.sin();
        let h_theta_theta = (h_tp - 2.0 * h + h_tm) / (dt * dt);
        let h_phi_phi = (h_pp - 2.0 * h + h_pm) / (dp * dp);
        let h_phi = (h_pp - h_pm) / (2.0 * dp);
        let q = |row: usize| {
            (self.values[g.index(ip, row)] - self.values[g.index(im, row)])
                / (2.0 * dt)
                / g.phi(row).sin()
        };
        let c = (q(j + 1) - q(j - 1)) / (2.0 * dp);
        let a = h_theta_theta / (sin_phi * sin_phi) + h_phi / phi.tan() + h;
        let d = h_phi_phi + h;
        Some(CurvatureMatrix {
            m: [[a, sin_phi * c], [c / sin_phi, d]],
        })
    }
}

// ---------------------------------------------------------------------------
// Constant-width validation of sampled fields
// ---------------------------------------------------------------------------

/// Outcome of [`validate_constant_width`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidateReport {
    pub passed: bool,
    /// Antipode pairs checked for h(u) + h(−u) = 1.
    pub width_pairs: usize,
    pub worst_width_gap: f64,
    /// Nodes with a lattice curvature matrix (outside pole margins).
    pub covered_nodes: usize,
    /// Smallest curvature eigenvalue seen on covered nodes.
    pub min_eigenvalue: f64,
    /// Covered nodes whose smallest eigenvalue is below −tau.
    pub curvature_violations: usize,
}

/// Checks that a sampled field is a constant-width support function:
/// h(u) + h(−u) = 1 within tau on every antipode pair, and the smallest
/// lattice curvature eigenvalue is at least −tau on every covered node
/// (convexity); the upper eigenvalue bound follows from these two by
/// duality and is not checked separately.
pub fn validate_constant_width(h: &SampledField, tau: f64) -> ValidateReport {
    let g = h.grid();
    let mut width_pairs = 0usize;
    let mut worst_width = 0.0_f64;
    for idx in 0..g.len() {
        let anti = g.antipode(idx);
        if anti < idx {
            continue;
        }
        width_pairs += 1;
        worst_width = worst_width.max((h.value(idx) + h.value(anti) - 1.0).abs());
    }
    let mut covered = 0usize;
    let mut min_eig = f64::INFINITY;
    let mut violations = 0usize;
    for idx in 0..g.len() {
        let Some(m) = h.lattice_curvature(idx) else {
            continue;
        };
        covered += 1;
        let (lo, _) = m.eigenvalues();
        min_eig = min_eig.min(lo);
        if lo < -tau {
            violations += 1;
        }
    }
    ValidateReport {
        passed: worst_width <= tau && violations == 0,
        width_pairs,
        worst_width_gap: worst_width,
        covered_nodes: covered,
        min_eigenvalue: if covered == 0 { 0.0 } else { min_eig },
        curvature_violations: violations,
    }
}

/// Per-node mask of covered nodes whose smallest lattice eigenvalue is
/// below −tau (false on uncovered nodes).
fn curvature_floor_failures(h: &SampledField, tau: f64) -> Vec<bool> {
    (0..h.grid().len())
        .map(|idx| match h.lattice_curvature(idx) {
            Some(m) => m.eigenvalues().0 < -tau,
            None => false,
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Translation detection
// ---------------------------------------------------------------------------

/// Least-squares fit of hA − hB against the three linear fields u ↦ uᵢ
/// (the support-function signature of a pure translation), weighted by the
/// spherical quadrature weights of the grid. Returns the fitted offset b
/// and the weighted root-mean-square of the remainder hA − hB − b·u.
///
/// The 3×3 normal system is solved exactly rather than through the
/// continuum shortcut bᵢ = 3·mean((hA−hB)·uᵢ), so an exactly linear
/// difference yields a residual at rounding level on any grid size.
pub fn translation_fit(ha: &SampledField, hb: &SampledField) -> Result<(Vec3, f64)> {
    if ha.grid() != hb.grid() {
        return Err(CwError::Grid {
            reason: "fields sampled on different grids".into(),
        });
    }
    let g = ha.grid();
    let mut gram = [[0.0_f64; 3]; 3];
    let mut rhs = [0.0_f64; 3];
    let mut w_total = 0.0;
    for idx in 0..g.len() {
        let (_, j) = g.coords(idx);
        let w = g.weight(j);
        let u = g.node(idx).get();
        let uc = [u.x, u.y, u.z];
        let f = ha.value(idx) - hb.value(idx);
        for r in 0..3 {
            rhs[r] += w * f * uc[r];
            for col in 0..3 {
                gram[r][col] += w * uc[r] * uc[col];
            }
        }
        w_total += w;
    }
    let b = solve3(gram, rhs).ok_or_else(|| CwError::Grid {
        reason: "degenerate grid: translation normal system is singular".into(),
    })?;
    let bvec = Vec3::new(b[0], b[1], b[2]);
    let mut ss = 0.0;
    for idx in 0..g.len() {
        let (_, j) = g.coords(idx);
        let w = g.weight(j);
        let u = g.node(idx).get();
        let r = ha.value(idx) - hb.value(idx) - bvec.dot(u);
        ss += w * r * r;
    }
    Ok((bvec, (ss / w_total).sqrt()))
}

/// Cramer solve of a 3×3 system; None when the determinant vanishes.
fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    if d.abs() < 1e-300 {
        return None;
    }
    let mut out = [0.0; 3];
    for k in 0..3 {
        let mut m = a;
        for r in 0..3 {
            m[r][k] = b[r];
        }
        out[k] = det(m) / d;
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// Non-extremality prober
// ---------------------------------------------------------------------------

/// Open region A ⊂ S² (a union of spherical caps) on which the
/// perturbation bump lives, plus the eigenvalue clearance δ the
/// decomposition is allowed to consume. A and its antipodal image −A must
/// be disjoint; overlapping caps are shrunk automatically before use and
/// refused only if shrinking cannot separate them.
#[derive(Debug, Clone)]
pub struct ProbeRegion {
    caps: Vec<(UnitVec3, f64)>,
    delta: f64,
}

impl ProbeRegion {
    /// Single spherical cap {u : dist(u, center) < radius} (geodesic
    /// radians), with clearance delta ∈ (0, ½).
    pub fn cap(center: UnitVec3, radius: f64, delta: f64) -> Result<ProbeRegion> {
        ProbeRegion::caps(vec![(center, radius)], delta)
    }

    /// Union of caps.
    pub fn caps(caps: Vec<(UnitVec3, f64)>, delta: f64) -> Result<ProbeRegion> {
        if !(delta > 0.0 && delta < 0.5) {
            return Err(CwError::Param {
                reason: format!("delta = {delta} outside (0, 0.5)"),
            });
        }
        if caps.is_empty() {
            return Err(CwError::Region {
                reason: "no caps".into(),
            });
        }
        for &(_, r) in &caps {
            if !(r.is_finite() && r > 0.0 && r < PI) {
                return Err(CwError::Region {
                    reason: format!("cap radius {r} outside (0, pi)"),
                });
            }
        }
        Ok(ProbeRegion { caps, delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Caps with radii shrunk until A and −A are disjoint (uniform scaling
    /// with a 1% separation margin). Errors when a cap faces another's
    /// antipode head-on, which no shrinking separates.
    fn disjoint_caps(&self) -> Result<Vec<(UnitVec3, f64)>> {
        let mut scale = 1.0_f64;
        for (ci, ri) in &self.caps {
            for (cj, rj) in &self.caps {
                let gap = ci.get().dot(-cj.get()).clamp(-1.0, 1.0).acos();
                if gap <= 0.0 {
                    return Err(CwError::Region {
                        reason: "a cap is centered at another cap's antipode".into(),
                    });
                }
                let need = gap / (ri + rj) * 0.99;
                scale = scale.min(need);
            }
        }
        if scale < 1e-6 {
            return Err(CwError::Region {
                reason: "caps overlap their antipodes too much to shrink apart".into(),
            });
        }
        Ok(self
            .caps
            .iter()
            .map(|&(c, r)| (c, r * scale.min(1.0)))
            .collect())
    }
}

/// The measured bound that stopped a probe. The decomposition consumes
/// eigenvalue clearance on both sides; whichever side has none collapses
/// the perturbation scale to nothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlockingBound {
    /// min r_min over the region reached the floor 0: subtracting the bump
    /// would push an eigenvalue negative.
    CurvatureFloor { r_min: f64 },
    /// max r_max over the region reached the ceiling 1: adding the bump
    /// would push an eigenvalue past 1.
    CurvatureCeiling { r_max: f64 },
    /// A perturbed field failed the constant-width validation.
    Validation { plus: bool },
    /// The two perturbed fields are translates of each other (residual at
    /// or below the certification threshold).
    TranslationResidual { residual: f64 },
}

/// Outcome of [`probe_nonextreme`]: on success, a constructive certificate
/// h = ½h₊ + ½h₋ with both parts constant-width and not translates.
#[derive(Debug, Clone)]
pub struct ProbeResult {
    pub success: bool,
    /// Perturbation scale t actually used (0 when collapsed).
    pub t: f64,
    /// The antisymmetric perturbation g on the grid.
    pub g: SampledField,
    pub h_plus: SampledField,
    pub h_minus: SampledField,
    /// Non-translation certificate: translation_fit(h₊, h₋) residual.
    pub translation_residual: f64,
    /// What stopped the probe (None on success).
    pub blocking: Option<BlockingBound>,
    /// Curvature violations of h± at nodes where the unperturbed field
    /// already violates the same band: those carry no information about
    /// the perturbation and are excluded from the verdict.
    pub inherited_violations: usize,
    /// Measured eigenvalue range over the region A (the −A side is its
    /// dual and needs no separate measurement).
    pub region_r_min: f64,
    pub region_r_max: f64,
    /// Clearance actually available: min(delta, r_min, 1 − r_max).
    pub delta_used: f64,
}

/// Perturbation scales below this are treated as collapsed: the
/// decomposition they certify is numerically indistinguishable from none.
const PROBE_T_MIN: f64 = 1e-9;
/// Translation residual a successful probe must exceed: below this the two
/// halves could be translates and certify nothing.
const PROBE_RESIDUAL_MIN: f64 = 1e-3;
/// Default probe grid shape.
const PROBE_N_THETA: usize = 256;
const PROBE_N_PHI: usize = 128;

/// Constructive non-extremality probe on the default grid; see
/// [`probe_nonextreme_on`].
pub fn probe_nonextreme<F: SupportField + ?Sized>(
    f: &F,
    region: &ProbeRegion,
    bump_sharpness: f64,
    tol: &Tolerances,
) -> Result<ProbeResult> {
    let grid = LatLonGrid::new(PROBE_N_THETA, PROBE_N_PHI)?;
    probe_nonextreme_on(f, region, bump_sharpness, grid, tol)
}

/// Attempts to certify that the body behind `f` is NOT extreme, by
/// constructing an explicit decomposition:
///
/// 1. a C¹ bump g₀ = cos^(2·sharpness) in geodesic distance is placed on
///    the region A and extended antisymmetrically (g(−u) = −g(u));
/// 2. the spectral radius s of ∇²g₀ + g₀·id is measured over the grid,
///    and the available eigenvalue clearance δ = min(delta, r_min,
///    1 − r_max) over the bump support;
/// 3. the perturbed fields h± = h ± (δ/s)·g then keep their curvature
///    eigenvalues in [0, 1]: both are constant-width support functions,
///    and h = ½h₊ + ½h₋ reconstructs the input exactly.
///
/// Success further requires the two halves not to be translates of each
/// other (translation residual above 1e−3). Failure reports the bound
/// that collapsed the scale: a body whose eigenvalues pin to 0 or 1 on
/// the region leaves no clearance, which is exactly the extremality
/// conjecture's obstruction. Failure does NOT prove extremeness.
pub fn probe_nonextreme_on<F: SupportField + ?Sized>(
    f: &F,
    region: &ProbeRegion,
    bump_sharpness: f64,
    grid: LatLonGrid,
    tol: &Tolerances,
) -> Result<ProbeResult> {
    if !(bump_sharpness.is_finite() && bump_sharpness >= 1.0) {
        return Err(CwError::Param {
            reason: format!("bump_sharpness = {bump_sharpness} must be at least 1"),
        });
    }
    let caps = region.disjoint_caps()?;
    let h = SampledField::from_field(f, grid)?;

    // Precondition: the input must itself be constant-width on the grid.
    let mut worst_width = 0.0_f64;
    for idx in 0..grid.len() {
        worst_width = worst_width.max((h.value(idx) + h.value(grid.antipode(idx)) - 1.0).abs());
    }
    if worst_width > tol.eps_width {
        return Err(CwError::Param {
            reason: format!(
                "probe input is not constant-width: max |h(u)+h(-u)-1| = {worst_width:.3e}"
            ),
        });
    }

    // Bump on A, extended antisymmetrically: g(u) = g0(u) − g0(−u) equals
    // g0 on A, −g0(−·) on −A, and 0 elsewhere once A and −A are disjoint.
    let g0: Vec<f64> = (0..grid.len())
        .map(|idx| {
            let u = grid.node(idx).get();
            caps.iter()
                .map(|&(c, r)| {
                    let d = u.dot(c.get()).clamp(-1.0, 1.0).acos();
                    if d < r {
                        (PI * d / (2.0 * r)).cos().powf(2.0 * bump_sharpness)
                    } else {
                        0.0
                    }
                })
                .sum()
        })
        .collect();
    let g_values: Vec<f64> = (0..grid.len())
        .map(|idx| g0[idx] - g0[grid.antipode(idx)])
        .collect();
    let g = SampledField::new(grid, g_values)?;

    // Bump spectral radius from its own lattice, and the field's
    // eigenvalue clearance over A from sharp continuous finite
    // differences: lattice smear on the coarse sample grid would fake
    // clearance exactly where the eigenvalues pin to the endpoints, which
    // is the obstruction the probe must detect. Only the A side needs
    // measuring: h ± t·g stay constant-width, so their eigenvalue bounds
    // on −A are the duals of the bounds on A and hold automatically.
    let mut s = 0.0_f64;
    let mut r_min = f64::INFINITY;
    let mut r_max = f64::NEG_INFINITY;
    let mut support_nodes = 0usize;
    for idx in 0..grid.len() {
        if let Some(gm) = g.lattice_curvature(idx) {
            let (glo, ghi) = gm.eigenvalues();
            s = s.max(glo.abs().max(ghi.abs()));
        }
        if g0[idx] > 0.0 {
            let (i, j) = grid.coords(idx);
            match curvature_matrix(f, grid.theta(i), grid.phi(j), tol.fd_step) {
                Ok(hm) => {
                    support_nodes += 1;
                    let (lo, hi) = hm.eigenvalues();
                    r_min = r_min.min(lo);
                    r_max = r_max.max(hi);
                }
                Err(CwError::Pole { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    if support_nodes == 0 || s == 0.0 {
        return Err(CwError::Region {
            reason: "bump region has no support on the probe grid".into(),
        });
    }
    let delta_used = region.delta.min(r_min).min(1.0 - r_max);
    let t = delta_used / s;

    let fail = |t: f64,
                g: SampledField,
                h_plus: SampledField,
                h_minus: SampledField,
                residual: f64,
                blocking: BlockingBound,
                inherited: usize| ProbeResult {
        success: false,
        t,
        g,
        h_plus,
        h_minus,
        translation_residual: residual,
        blocking: Some(blocking),
        inherited_violations: inherited,
        region_r_min: r_min,
        region_r_max: r_max,
        delta_used,
    };

    if !(t >= PROBE_T_MIN) {
        // No clearance: name the side that collapsed.
        let blocking = if r_min <= 1.0 - r_max {
            BlockingBound::CurvatureFloor { r_min }
        } else {
            BlockingBound::CurvatureCeiling { r_max }
        };
        return Ok(fail(0.0, g.clone(), h.clone(), h, 0.0, blocking, 0));
    }

    let h_plus = h.axpy(1.0, &g, t)?;
    let h_minus = h.axpy(1.0, &g, -t)?;

    // Validate both halves, discounting curvature failures the unperturbed
    // field already has at the same node (finite-difference smear at sharp
    // features, not an effect of the perturbation).
    let baseline = curvature_floor_failures(&h, tol.tau_scan);
    let inherited = baseline.iter().filter(|&&b| b).count();
    let clean = |hp: &SampledField| -> (bool, f64) {
        let mut worst_w = 0.0_f64;
        for idx in 0..grid.len() {
            worst_w = worst_w.max((hp.value(idx) + hp.value(grid.antipode(idx)) - 1.0).abs());
        }
        let mask = curvature_floor_failures(hp, tol.tau_scan);
        let fresh = mask
            .iter()
            .zip(&baseline)
            .filter(|&(&m, &b)| m && !b)
            .count();
        (worst_w <= tol.eps_width && fresh == 0, worst_w)
    };
    let (plus_ok, _) = clean(&h_plus);
    let (minus_ok, _) = clean(&h_minus);
    let (_, residual) = translation_fit(&h_plus, &h_minus)?;

    if !plus_ok || !minus_ok {
        let blocking = BlockingBound::Validation { plus: !plus_ok };
        return Ok(fail(t, g, h_plus, h_minus, residual, blocking, inherited));
    }
    if residual <= PROBE_RESIDUAL_MIN {
        let blocking = BlockingBound::TranslationResidual { residual };
        return Ok(fail(t, g, h_plus, h_minus, residual, blocking, inherited));
    }
    Ok(ProbeResult {
        success: true,
        t,
        g,
        h_plus,
        h_minus,
        translation_residual: residual,
        blocking: None,
        inherited_violations: inherited,
        region_r_min: r_min,
        region_r_max: r_max,
        delta_used,
    })
}
