//! Error type shared by every module of the crate.
//!
//! Each variant corresponds to one failure mode of the geometric pipeline;
//! `kind()` returns the stable machine-readable name used by the CLI's JSON
//! error output.

use thiserror::Error;

/// Crate-wide error enum.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CwError {
    /// Spherical-coordinate operation at or too close to a chart pole.
    #[error("pole: phi = {phi} is within {margin} of a chart pole")]
    Pole { phi: f64, margin: f64 },

    /// Requested grid level exceeds the supported capacity.
    #[error("capacity: grid level {level} exceeds maximum {max}")]
    Capacity { level: u32, max: u32 },

    /// A Reuleaux polygon needs an odd vertex count >= 3.
    #[error("parity: vertex count {n} is not an odd number >= 3")]
    Parity { n: usize },

    /// Point-set diameter differs from 1 beyond tolerance.
    #[error("diameter: set diameter {diameter} differs from 1 by more than {tol}")]
    Diameter { diameter: f64, tol: f64 },

    /// A point set is not tight: some member can be removed without
    /// changing the ball intersection.
    #[error("not-tight: removing point {index} does not change the ball intersection")]
    NotTight { index: usize },

    /// Reuleaux arc condition |x_j - x_{j+n}| = |x_j - x_{j+n+1}| = 1 failed.
    #[error("arc-condition: |x_{j} - x_{k}| = {dist} differs from 1 beyond tolerance")]
    ArcCondition { j: usize, k: usize, dist: f64 },

    /// Symmetric flag set but the mirror condition fails.
    #[error("symmetry: vertex {j} is not the mirror of vertex {k} (error {err})")]
    Symmetry { j: usize, k: usize, err: f64 },

    /// Sampled field grid is unusable (non-uniform, too small, or odd
    /// length where mirror alignment is required).
    #[error("grid: {reason}")]
    Grid { reason: String },

    /// Evaluation requested inside a sector-transition band where the
    /// piecewise classification is ill-defined.
    #[error("boundary-band: theta = {theta} is within {band} of a sector transition")]
    BoundaryBand { theta: f64, band: f64 },

    /// More diametric pairs than the Grünbaum bound allows.
    #[error("bound-violation: {pairs} diametric pairs exceed the bound 2m-2 = {bound}")]
    BoundViolation { pairs: usize, bound: usize },

    /// Circle of a point pair is degenerate (coincident or too far apart).
    #[error("degenerate: |a - b| = {dist} admits no unit-sphere intersection circle")]
    Degenerate { dist: f64 },

    /// Combinatorial structure (edges, Euler count, dual pairing) failed.
    #[error("combinatorics: {reason}")]
    Combinatorics { reason: String },

    /// Operation requires an extremal point set.
    #[error("not-extremal: {reason}")]
    NotExtremal { reason: String },

    /// Surgery choice length does not match the number of dual pairs.
    #[error("choice-length: got {got} bits, need {need} (one per dual pair)")]
    ChoiceLength { got: usize, need: usize },

    /// Operation requires a polygon validated as symmetric.
    #[error("not-symmetric: polygon carries no symmetric tag")]
    NotSymmetric,

    /// Generator circle radius outside [0, 1).
    #[error("radius: generator circle radius {radius} is not in [0, 1)")]
    Radius { radius: f64 },

    /// Iterative solver hit its iteration cap before meeting tolerance.
    #[error("non-convergence: {iterations} iterations, final step {final_step} above tolerance {tol}")]
    NonConvergence {
        iterations: usize,
        final_step: f64,
        tol: f64,
    },

    /// Support evaluation found no feasible candidate feature.
    #[error("classification: no feasible supporting feature for the given direction")]
    Classification,

    /// Invalid parameter value.
    #[error("param: {reason}")]
    Param { reason: String },

    /// Query outside the valid range of a closed form.
    #[error("range: {reason}")]
    Range { reason: String },

    /// Probe region is unusable (e.g. a cap overlaps its own antipode and
    /// cannot be shrunk).
    #[error("region: {reason}")]
    Region { reason: String },

    /// Mesh is not closed/orientable.
    #[error("open-mesh: {reason}")]
    OpenMesh { reason: String },
}

impl CwError {
    /// Stable machine-readable error kind (used in CLI JSON output).
    pub fn kind(&self) -> &'static str {
        match self {
            CwError::Pole { .. } => "pole_error",
            CwError::Capacity { .. } => "capacity_error",
            CwError::Parity { .. } => "parity_error",
            CwError::Diameter { .. } => "diameter_error",
            CwError::NotTight { .. } => "not_tight_error",
            CwError::ArcCondition { .. } => "arc_condition_error",
            CwError::Symmetry { .. } => "symmetry_error",
            CwError::Grid { .. } => "grid_error",
            CwError::BoundaryBand { .. } => "boundary_band_error",
            CwError::BoundViolation { .. } => "bound_violation",
            CwError::Degenerate { .. } => "degenerate_error",
            CwError::Combinatorics { .. } => "combinatorics_error",
            CwError::NotExtremal { .. } => "not_extremal_error",
            CwError::ChoiceLength { .. } => "choice_length_error",
            CwError::NotSymmetric => "not_symmetric_error",
            CwError::Radius { .. } => "radius_error",
            CwError::NonConvergence { .. } => "non_convergence",
            CwError::Classification => "classification_error",
            CwError::Param { .. } => "param_error",
            CwError::Range { .. } => "range_error",
            CwError::Region { .. } => "region_error",
            CwError::OpenMesh { .. } => "open_mesh_error",
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, CwError>;
