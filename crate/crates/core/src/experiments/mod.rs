//! Study harness: η sweeps, convergence fits, domain-size study, three-body
//! tables and timing, all writing CSV (and optionally JSON) artifacts.

pub mod config;
pub mod fit;
pub mod reference;
pub mod studies;
pub mod table;

use crate::assembly::{assemble_1d, assemble_2d, AssemblyError, SoftnessConfig};
use crate::eigen::{solve_smallest, EigenError, EigenResult, SolverOptions};
use crate::problem::{Dimension, ProblemSpec};
use crate::sparse::SymMatrix;
use crate::spline::SplineSpace;
use config::DiscretizationConfig;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

pub use config::StudyConfig;

#[derive(Error, Debug)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error("reference eigenvalues unavailable: {0}")]
    ReferenceMissing(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed table {path}: {reason}")]
    Table { path: String, reason: String },
}

impl ExperimentError {
    /// Process exit status for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(_) | ExperimentError::Io { .. } | ExperimentError::Table { .. } => 2,
            ExperimentError::Eigen(_) | ExperimentError::Assembly(_) => 3,
            ExperimentError::ReferenceMissing(_) => 4,
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        ExperimentError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

/// The four discretizations compared throughout: degree 1 or 2, with or
/// without the jump penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "FEM")]
    Fem,
    #[serde(rename = "softFEM")]
    SoftFem,
    #[serde(rename = "IGA")]
    Iga,
    #[serde(rename = "softIGA")]
    SoftIga,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Fem, Method::SoftFem, Method::Iga, Method::SoftIga];

    pub fn classify(p: usize, eta: f64) -> Self {
        match (p, eta > 0.0) {
            (1, false) => Method::Fem,
            (1, true) => Method::SoftFem,
            (_, false) => Method::Iga,
            (_, true) => Method::SoftIga,
        }
    }

    pub fn degree(self) -> usize {
        match self {
            Method::Fem | Method::SoftFem => 1,
            Method::Iga | Method::SoftIga => 2,
        }
    }

    pub fn is_soft(self) -> bool {
        matches!(self, Method::SoftFem | Method::SoftIga)
    }

    /// The unpenalized counterpart.
    pub fn standard(self) -> Self {
        match self {
            Method::SoftFem => Method::Fem,
            Method::SoftIga => Method::Iga,
            m => m,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Method::Fem => "FEM",
            Method::SoftFem => "softFEM",
            Method::Iga => "IGA",
            Method::SoftIga => "softIGA",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A solve together with the space(s) it lives on.
#[derive(Debug, Clone)]
pub struct Solved {
    pub result: EigenResult,
    pub space_x: SplineSpace,
    pub space_y: Option<SplineSpace>,
}

/// Assembles and solves one configuration. 2D problems use the same mesh in
/// both directions.
pub fn solve_problem(
    spec: &ProblemSpec,
    disc: &DiscretizationConfig,
    eta: f64,
    opts: &SolverOptions,
    max_dofs_2d: usize,
) -> Result<Solved, ExperimentError> {
    let cfg = SoftnessConfig::new(eta)?;
    let space = disc.space(spec.half_width)?;
    let (q, qp) = disc.quadrature()?;
    match spec.dimension {
        Dimension::One => {
            let ops = assemble_1d(&space, spec, &q, &qp);
            let k = ops.soft(cfg)?;
            let result = solve_smallest(&k, &ops.mass, spec.gamma0, opts)?;
            Ok(Solved {
                result,
                space_x: space,
                space_y: None,
            })
        }
        Dimension::Two => {
            let ops = assemble_2d(&space, &space, spec, &q, &qp, max_dofs_2d)?;
            let k = ops.soft(cfg)?;
            let result = solve_smallest(&k, &ops.mass, spec.gamma0, opts)?;
            Ok(Solved {
                result,
                space_x: space.clone(),
                space_y: Some(space),
            })
        }
    }
}

/// `row,col,value` lines, 1-based, lower triangle included only once.
pub fn write_coordinates(path: &Path, a: &impl SymMatrix) -> Result<(), ExperimentError> {
    use std::io::Write;
    let file = std::fs::File::create(path).map_err(|e| ExperimentError::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    let io = |e| ExperimentError::io(path, e);
    writeln!(w, "row,col,value").map_err(io)?;
    for (i, j, v) in a.coordinates() {
        if j <= i {
            writeln!(w, "{},{},{:.16e}", i + 1, j + 1, v).map_err(io)?;
        }
    }
    w.flush().map_err(io)
}

/// Writes the assembled `K̃` and `M` of a configuration.
pub fn export_matrices(
    dir: &Path,
    spec: &ProblemSpec,
    disc: &DiscretizationConfig,
    eta: f64,
    max_dofs_2d: usize,
) -> Result<(), ExperimentError> {
    let cfg = SoftnessConfig::new(eta)?;
    let space = disc.space(spec.half_width)?;
    let (q, qp) = disc.quadrature()?;
    let (kp, mp) = (dir.join("k_tilde.txt"), dir.join("mass.txt"));
    match spec.dimension {
        Dimension::One => {
            let ops = assemble_1d(&space, spec, &q, &qp);
            write_coordinates(&kp, &ops.soft(cfg)?)?;
            write_coordinates(&mp, &ops.mass)
        }
        Dimension::Two => {
            let ops = assemble_2d(&space, &space, spec, &q, &qp, max_dofs_2d)?;
            write_coordinates(&kp, &ops.soft(cfg)?)?;
            write_coordinates(&mp, &ops.mass)
        }
    }
}
