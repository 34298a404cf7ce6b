//! High-order reference eigenvalues, cached on disk under a content hash of
//! everything that determines them.

use super::config::{DiscretizationConfig, StudyConfig};
use super::{solve_problem, ExperimentError};
use crate::eigen::SolverOptions;
use crate::problem::{PotentialShape, ProblemSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

/// Everything that determines a reference run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceKey {
    pub dimension: usize,
    pub half_width: f64,
    pub shape: PotentialShape,
    pub beta: f64,
    pub mass_ratio: f64,
    pub gamma0: f64,
    pub p: usize,
    pub n: usize,
    pub growth: f64,
    pub quad_order: usize,
    pub quad_order_potential: usize,
    pub k: usize,
}

impl ReferenceKey {
    pub fn new(spec: &ProblemSpec, disc: &DiscretizationConfig, k: usize) -> Result<Self, ExperimentError> {
        let (q, qp) = disc.quadrature()?;
        Ok(Self {
            dimension: spec.dimension.as_usize(),
            half_width: spec.half_width,
            shape: spec.shape,
            beta: spec.beta,
            mass_ratio: spec.mass_ratio,
            gamma0: spec.gamma0,
            p: disc.p,
            n: disc.n,
            growth: disc.growth,
            quad_order: q.order(),
            quad_order_potential: qp.order(),
            k,
        })
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("key is serializable");
        Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key: Option<ReferenceKey>,
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceOutcome {
    pub eigenvalues: Vec<f64>,
    /// Served from the cache without solving.
    pub cached: bool,
    pub path: Option<PathBuf>,
}

/// Rounds to 12 significant digits.
pub fn round12(v: f64) -> f64 {
    format!("{v:.11e}").parse().expect("formatted float parses")
}

pub fn read_reference_file(path: &Path) -> Result<ReferenceFile, ExperimentError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ExperimentError::ReferenceMissing(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| ExperimentError::ReferenceMissing(format!("{}: {e}", path.display())))
}

pub fn write_reference_file(path: &Path, file: &ReferenceFile) -> Result<(), ExperimentError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| ExperimentError::io(dir, e))?;
    }
    let text = serde_json::to_string_pretty(file).expect("reference is serializable");
    std::fs::write(path, text).map_err(|e| ExperimentError::io(path, e))
}

/// Solves `spec` with degree `disc.p` on `disc.n` elements, or loads the
/// cached result of an identical earlier request from `cache_dir`.
pub fn run_reference(
    spec: &ProblemSpec,
    disc: &DiscretizationConfig,
    k: usize,
    opts: &SolverOptions,
    cache_dir: Option<&Path>,
    max_dofs_2d: usize,
) -> Result<ReferenceOutcome, ExperimentError> {
    let key = ReferenceKey::new(spec, disc, k)?;
    let path = cache_dir.map(|d| d.join(format!("ref-{}.json", &key.hash()[..16])));
    if let Some(path) = &path {
        if let Ok(file) = read_reference_file(path) {
            if file.key.as_ref() == Some(&key) && file.eigenvalues.len() >= k {
                return Ok(ReferenceOutcome {
                    eigenvalues: file.eigenvalues,
                    cached: true,
                    path: Some(path.clone()),
                });
            }
        }
    }
    let opts = SolverOptions { k, ..opts.clone() };
    let solved = solve_problem(spec, disc, 0.0, &opts, max_dofs_2d)?;
    let eigenvalues: Vec<f64> = solved.result.eigenvalues.iter().map(|&v| round12(v)).collect();
    if let Some(path) = &path {
        write_reference_file(
            path,
            &ReferenceFile {
                key: Some(key),
                eigenvalues: eigenvalues.clone(),
            },
        )?;
    }
    Ok(ReferenceOutcome {
        eigenvalues,
        cached: false,
        path,
    })
}

/// The reference discretization of a study, validated against the study's
/// own degree and largest element size.
pub fn reference_discretization(
    cfg: &StudyConfig,
    study_p: usize,
    study_h: f64,
) -> Result<(ProblemSpec, DiscretizationConfig), ExperimentError> {
    let r = &cfg.reference;
    let (Some(p), Some(n)) = (r.p, r.n) else {
        return Err(ExperimentError::ReferenceMissing(
            "no reference values, file, or (p, n) to compute one".into(),
        ));
    };
    if p < study_p + 2 {
        return Err(ExperimentError::Config(format!(
            "reference degree {p} must be at least study degree {study_p} + 2"
        )));
    }
    let mut spec = cfg.spec()?;
    if let Some(hw) = r.half_width {
        spec = ProblemSpec::new(spec.dimension, hw, spec.shape, spec.beta, spec.mass_ratio, Some(spec.gamma0))
            .map_err(|e| ExperimentError::Config(e.to_string()))?;
    }
    let disc = DiscretizationConfig {
        p,
        n,
        growth: r.growth.unwrap_or(cfg.discretization.growth),
        quad_order: None,
        quad_order_potential: None,
    };
    let h_ref = disc.max_h(spec.half_width)?;
    if h_ref >= study_h {
        return Err(ExperimentError::Config(format!(
            "reference mesh (h = {h_ref}) must be finer than the study mesh (h = {study_h})"
        )));
    }
    Ok((spec, disc))
}

/// Reference eigenvalues of a study: inline values, a file, or a cached
/// computation, in that order of preference.
pub fn resolve_reference(
    cfg: &StudyConfig,
    study_p: usize,
    study_h: f64,
    k: usize,
) -> Result<Vec<f64>, ExperimentError> {
    let r = &cfg.reference;
    let values = if let Some(v) = &r.values {
        v.clone()
    } else if let Some(path) = &r.file {
        read_reference_file(path)?.eigenvalues
    } else {
        let (spec, disc) = reference_discretization(cfg, study_p, study_h)?;
        let cache = r.cache_dir.clone().unwrap_or_else(|| cfg.output.dir.join("cache"));
        run_reference(
            &spec,
            &disc,
            k,
            &cfg.solver.options(k),
            Some(&cache),
            usize::MAX,
        )?
        .eigenvalues
    };
    if values.len() < k {
        return Err(ExperimentError::ReferenceMissing(format!(
            "{} reference values for {k} eigenvalues",
            values.len()
        )));
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::{ProblemConfig, StudyKind};

    fn small_cfg(dir: &Path) -> StudyConfig {
        let mut cfg = StudyConfig::new(
            StudyKind::EtaSweep,
            ProblemConfig::two_body(PotentialShape::Gaussian, 1.0),
            DiscretizationConfig::new(1, 40),
        );
        cfg.problem.half_width = 8.0;
        cfg.reference.p = Some(4);
        cfg.reference.n = Some(80);
        cfg.output.dir = dir.to_path_buf();
        cfg
    }

    #[test]
    fn rounding() {
        assert_eq!(round12(-2.914918563022345), -2.91491856302);
        assert_eq!(round12(1.0), 1.0);
    }

    #[test]
    fn hash_depends_on_every_field() {
        let spec = ProblemSpec::one_body(20.0, PotentialShape::Gaussian, 1.0).unwrap();
        let disc = DiscretizationConfig::new(5, 100);
        let base = ReferenceKey::new(&spec, &disc, 2).unwrap();
        assert_eq!(base.hash(), ReferenceKey::new(&spec, &disc, 2).unwrap().hash());
        assert_eq!(base.hash().len(), 64);
        let others = [
            ReferenceKey::new(&spec, &disc, 3).unwrap(),
            ReferenceKey::new(&spec, &disc.clone().with_elements(102), 2).unwrap(),
            ReferenceKey::new(&spec, &disc.clone().with_growth(0.1), 2).unwrap(),
            ReferenceKey::new(&spec.clone().with_gamma0(3.0).unwrap(), &disc, 2).unwrap(),
        ];
        for o in others {
            assert_ne!(o.hash(), base.hash());
        }
    }

    #[test]
    fn cache_is_reused() {
        let dir = tempfile::tempdir().unwrap();
        let spec = ProblemSpec::one_body(8.0, PotentialShape::Gaussian, 1.0).unwrap();
        let disc = DiscretizationConfig::new(3, 60);
        let opts = SolverOptions::default();
        let first = run_reference(&spec, &disc, 1, &opts, Some(dir.path()), 0).unwrap();
        assert!(!first.cached);
        let path = first.path.clone().unwrap();
        let second = run_reference(&spec, &disc, 1, &opts, Some(dir.path()), 0).unwrap();
        assert!(second.cached);
        assert_eq!(second.eigenvalues, first.eigenvalues);
        // a planted value proves the second call never solved
        let mut file = read_reference_file(&path).unwrap();
        file.eigenvalues[0] = 123.0;
        write_reference_file(&path, &file).unwrap();
        let third = run_reference(&spec, &disc, 1, &opts, Some(dir.path()), 0).unwrap();
        assert_eq!(third.eigenvalues, vec![123.0]);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("\"eigenvalues\""));
    }

    #[test]
    fn resolution_order_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = small_cfg(dir.path());
        let computed = resolve_reference(&cfg, 1, 0.4, 2).unwrap();
        assert_eq!(computed.len(), 2);
        assert!(computed[0] < 0.0 && computed[0] < computed[1]);

        cfg.reference.values = Some(vec![-1.0]);
        assert!(matches!(resolve_reference(&cfg, 1, 0.4, 2), Err(ExperimentError::ReferenceMissing(_))));
        cfg.reference.values = None;
        cfg.reference.file = Some(dir.path().join("absent.json"));
        let err = resolve_reference(&cfg, 1, 0.4, 1).unwrap_err();
        assert_eq!(err.exit_code(), 4);
        cfg.reference.file = None;

        cfg.reference.p = Some(2);
        assert!(matches!(resolve_reference(&cfg, 1, 0.4, 1), Err(ExperimentError::Config(_))));
        cfg.reference.p = Some(4);
        cfg.reference.n = Some(20);
        assert!(matches!(resolve_reference(&cfg, 1, 0.4, 1), Err(ExperimentError::Config(_))));
        cfg.reference.n = None;
        assert!(matches!(resolve_reference(&cfg, 1, 0.4, 1), Err(ExperimentError::ReferenceMissing(_))));
    }
}
