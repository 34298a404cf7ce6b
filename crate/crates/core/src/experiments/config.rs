//! Study configuration, read from TOML.
//!
//! Every table is optional except `[problem]`. A minimal file:
//!
//! ```toml
//! study = "eta-sweep"
//! k = 2
//!
//! [problem]
//! dimension = 1
//! half_width = 20.0
//! shape = "lorentzian-cube"
//! beta = 5.0
//!
//! [discretization]
//! p = 1
//! n = 400
//!
//! [softness]
//! etas = [0.0, 0.041666666666666664, 0.08333333333333333]
//!
//! [reference]
//! p = 7
//! n = 5000
//! ```

use super::ExperimentError;
use crate::eigen::SolverOptions;
use crate::mesh::{graded_mesh, GradedMeshSpec, Mesh1D};
use crate::problem::{Dimension, PotentialShape, ProblemSpec};
use crate::quadrature::{gauss_rule, QuadratureRule, MAX_ORDER};
use crate::spline::SplineSpace;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StudyKind {
    Solve,
    Reference,
    EtaSweep,
    Convergence,
    DomainStudy,
    ThreeBody,
    Bench,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub dimension: usize,
    pub half_width: f64,
    pub shape: PotentialShape,
    pub beta: f64,
    /// Heavy-to-light mass ratio; 2D only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_ratio: Option<f64>,
    /// Potential shift; defaults to `d * beta + 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma0: Option<f64>,
}

impl ProblemConfig {
    pub fn two_body(shape: PotentialShape, beta: f64) -> Self {
        Self {
            dimension: 1,
            half_width: 20.0,
            shape,
            beta,
            mass_ratio: None,
            gamma0: None,
        }
    }

    pub fn three_body(shape: PotentialShape, beta: f64, mass_ratio: f64) -> Self {
        Self {
            dimension: 2,
            half_width: 20.0,
            shape,
            beta,
            mass_ratio: Some(mass_ratio),
            gamma0: None,
        }
    }

    pub fn to_spec(&self) -> Result<ProblemSpec, ExperimentError> {
        let dim = Dimension::from_usize(self.dimension).map_err(config)?;
        if dim == Dimension::One && self.mass_ratio.is_some() {
            return Err(ExperimentError::Config("mass_ratio is only meaningful in 2D".into()));
        }
        let ratio = match dim {
            Dimension::One => 1.0,
            Dimension::Two => self
                .mass_ratio
                .ok_or_else(|| ExperimentError::Config("2D problems need mass_ratio".into()))?,
        };
        ProblemSpec::new(dim, self.half_width, self.shape, self.beta, ratio, self.gamma0).map_err(config)
    }
}

impl Default for ProblemConfig {
    fn default() -> Self {
        Self::two_body(PotentialShape::LorentzianCube, 5.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiscretizationConfig {
    pub p: usize,
    /// Elements per direction.
    pub n: usize,
    /// Mesh grading; 0 gives a uniform mesh.
    pub growth: f64,
    /// Gauss points per element for mass and diffusion, default `p + 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad_order: Option<usize>,
    /// Gauss points per element for the potential, default `p + 4`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad_order_potential: Option<usize>,
}

impl Default for DiscretizationConfig {
    fn default() -> Self {
        Self {
            p: 2,
            n: 400,
            growth: 0.0,
            quad_order: None,
            quad_order_potential: None,
        }
    }
}

impl DiscretizationConfig {
    pub fn new(p: usize, n: usize) -> Self {
        Self {
            p,
            n,
            ..Self::default()
        }
    }

    pub fn with_growth(mut self, growth: f64) -> Self {
        self.growth = growth;
        self
    }

    pub fn with_degree(&self, p: usize) -> Self {
        Self {
            p,
            ..self.clone()
        }
    }

    pub fn with_elements(&self, n: usize) -> Self {
        Self {
            n,
            ..self.clone()
        }
    }

    pub fn mesh(&self, half_width: f64) -> Result<Mesh1D, ExperimentError> {
        if self.growth == 0.0 {
            crate::mesh::uniform_mesh(half_width, self.n).map_err(config)
        } else {
            graded_mesh(GradedMeshSpec {
                half_width,
                n: self.n,
                growth: self.growth,
            })
            .map_err(config)
        }
    }

    pub fn space(&self, half_width: f64) -> Result<SplineSpace, ExperimentError> {
        SplineSpace::new(self.p, self.mesh(half_width)?).map_err(config)
    }

    pub fn quadrature(&self) -> Result<(QuadratureRule, QuadratureRule), ExperimentError> {
        let q = self.quad_order.unwrap_or(self.p + 1);
        let qp = self.quad_order_potential.unwrap_or((self.p + 4).min(MAX_ORDER));
        Ok((gauss_rule(q).map_err(config)?, gauss_rule(qp).map_err(config)?))
    }

    /// Largest element size on `[-half_width, half_width]`.
    pub fn max_h(&self, half_width: f64) -> Result<f64, ExperimentError> {
        Ok(self.mesh(half_width)?.max_size())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SoftnessGrid {
    /// Single value for `solve`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    /// Grid for sweeps and convergence studies.
    pub etas: Vec<f64>,
}

/// Where reference eigenvalues come from. `values` wins over `file`, which
/// wins over an inline computation with `p` and `n`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReferenceConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<f64>,
    /// Domain of the reference run if it differs from the study's.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub tol: f64,
    pub dense_threshold: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let d = SolverOptions::default();
        Self {
            tol: d.tol,
            dense_threshold: d.dense_threshold,
            max_iter: d.max_iter,
            seed: d.seed,
        }
    }
}

impl SolverConfig {
    pub fn options(&self, k: usize) -> SolverOptions {
        SolverOptions {
            k,
            tol: self.tol,
            dense_threshold: self.dense_threshold,
            max_iter: self.max_iter,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergenceConfig {
    pub ns: Vec<usize>,
    /// Errors at or below this are discretization-independent noise.
    pub floor: f64,
    /// Points within `window_factor * floor` are left out of the fit.
    pub window_factor: f64,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self {
            ns: vec![120, 240, 480, 960, 2000, 4000],
            floor: 5e-12,
            window_factor: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DomainConfig {
    pub half_widths: Vec<f64>,
    /// Target element sizes; the element count is `round(2 x_eps / h)`.
    pub hs: Vec<f64>,
    pub floor: f64,
    pub window_factor: f64,
    /// Largest relative change between the two finest element sizes for a
    /// half-width to count as truncation-dominated.
    pub mesh_tolerance: f64,
}

impl Default for DomainConfig {
    fn default() -> Self {
        Self {
            half_widths: (8..=28).map(|i| i as f64 * 0.5).collect(),
            hs: vec![0.2, 0.1, 0.05, 0.025],
            floor: 5e-12,
            window_factor: 10.0,
            mesh_tolerance: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThreeBodyConfig {
    pub eta_fem: f64,
    pub eta_iga: f64,
    /// Samples per axis of the eigenfunction grids; 0 disables them.
    pub grid: usize,
    pub max_dofs: usize,
}

impl Default for ThreeBodyConfig {
    fn default() -> Self {
        Self {
            eta_fem: 1.0 / 12.0,
            eta_iga: 1.0 / 720.0,
            grid: 81,
            max_dofs: crate::assembly::DEFAULT_MAX_DOFS_2D,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BenchConfig {
    pub two_body: ProblemConfig,
    pub three_body: ProblemConfig,
    pub two_body_ns: Vec<usize>,
    pub three_body_ns: Vec<usize>,
    pub eta_fem: f64,
    pub eta_iga: f64,
    pub eta_fem_2d: f64,
    pub eta_iga_2d: f64,
    pub growth_2d: f64,
    pub repeats: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            two_body: ProblemConfig::two_body(PotentialShape::LorentzianCube, 5.0),
            three_body: ProblemConfig::three_body(PotentialShape::Gaussian, 0.344595351, 20.0),
            two_body_ns: vec![80, 400, 800],
            three_body_ns: vec![20, 40],
            eta_fem: 1.0 / 12.0,
            eta_iga: 1.0 / 720.0,
            eta_fem_2d: 1.0 / 48.0,
            eta_iga_2d: 1.0 / 1440.0,
            growth_2d: 0.2,
            repeats: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Also write eigenvalue tables as JSON.
    pub json: bool,
    /// Dump `K̃` and `M` as `row,col,value` text files (solve only).
    pub export_matrices: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            json: true,
            export_matrices: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub study: StudyKind,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub problem: ProblemConfig,
    #[serde(default)]
    pub discretization: DiscretizationConfig,
    #[serde(default)]
    pub softness: SoftnessGrid,
    #[serde(default)]
    pub reference: ReferenceConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub convergence: ConvergenceConfig,
    #[serde(default)]
    pub domain: DomainConfig,
    #[serde(default)]
    pub three_body: ThreeBodyConfig,
    #[serde(default)]
    pub bench: BenchConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_k() -> usize {
    2
}

fn config(e: impl std::fmt::Display) -> ExperimentError {
    ExperimentError::Config(e.to_string())
}

impl StudyConfig {
    pub fn new(study: StudyKind, problem: ProblemConfig, discretization: DiscretizationConfig) -> Self {
        Self {
            study,
            k: default_k(),
            problem,
            discretization,
            softness: SoftnessGrid::default(),
            reference: ReferenceConfig::default(),
            solver: SolverConfig::default(),
            convergence: ConvergenceConfig::default(),
            domain: DomainConfig::default(),
            three_body: ThreeBodyConfig::default(),
            bench: BenchConfig::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        let cfg: Self = toml::from_str(text).map_err(config)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ExperimentError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is serializable")
    }

    pub fn spec(&self) -> Result<ProblemSpec, ExperimentError> {
        self.problem.to_spec()
    }

    /// Range checks that do not need a solve.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let spec = self.spec()?;
        if self.k == 0 {
            return Err(config("k must be positive"));
        }
        let d = &self.discretization;
        if d.p == 0 {
            return Err(config("p must be positive"));
        }
        d.mesh(spec.half_width)?;
        d.quadrature()?;
        let etas = self.softness.etas.iter().chain(self.softness.eta.iter());
        for &eta in etas {
            crate::assembly::SoftnessConfig::new(eta).map_err(config)?;
        }
        if !(self.solver.tol > 0.0) {
            return Err(config("tol must be positive"));
        }
        let c = &self.convergence;
        if !(c.floor > 0.0 && c.window_factor >= 1.0) {
            return Err(config("convergence floor must be positive and window_factor at least 1"));
        }
        if self.domain.half_widths.windows(2).any(|w| w[1] <= w[0]) {
            return Err(config("domain half_widths must be increasing"));
        }
        if self.domain.hs.iter().any(|h| !(*h > 0.0)) {
            return Err(config("domain hs must be positive"));
        }
        match self.study {
            StudyKind::Convergence if c.ns.len() < 4 => Err(config("convergence study needs at least 4 mesh sizes")),
            StudyKind::ThreeBody if spec.dimension != Dimension::Two => {
                Err(config("three-body study needs a 2D problem"))
            }
            StudyKind::Bench if self.bench.repeats == 0 => Err(config("bench needs at least one repeat")),
            _ => Ok(()),
        }
    }
}
