//! The individual studies. Each returns an in-memory result that can be
//! written as CSV and read back.

use super::config::{DiscretizationConfig, ProblemConfig, StudyConfig, StudyKind};
use super::fit::{ConvergenceFit, EnvelopeFit};
use super::reference::{
    reference_discretization, resolve_reference, run_reference, write_reference_file, ReferenceFile, ReferenceKey,
};
use super::table::{Cell, RawTable, Table};
use super::{export_matrices, solve_problem, ExperimentError, Method};
use crate::eigen::{eigen_error, sample_eigenfunction_2d, EigenError};
use crate::problem::{PotentialShape, ProblemSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Built-in configuration of each study, following the benchmark scenarios.
pub fn preset(kind: StudyKind, p: Option<usize>) -> StudyConfig {
    let lorentzian = ProblemConfig::two_body(PotentialShape::LorentzianCube, 5.0);
    let gaussian = ProblemConfig::two_body(PotentialShape::Gaussian, 1.0);
    let p1 = p.unwrap_or(1);
    let eta_opt = if p1 == 1 { 1.0 / 12.0 } else { 1.0 / 720.0 };
    let mut cfg = match kind {
        StudyKind::Solve => StudyConfig::new(kind, lorentzian, DiscretizationConfig::new(p.unwrap_or(2), 400)),
        StudyKind::Reference => {
            let mut c = StudyConfig::new(kind, lorentzian, DiscretizationConfig::new(5, 400));
            c.reference.p = Some(p.unwrap_or(7));
            c.reference.n = Some(5000);
            c
        }
        StudyKind::EtaSweep => {
            let mut c = StudyConfig::new(kind, lorentzian, DiscretizationConfig::new(p1, 400));
            c.softness.etas = (0..=24).map(|j| eta_opt * (j as f64 / 10.0)).collect();
            c
        }
        StudyKind::Convergence => {
            let mut c = StudyConfig::new(kind, gaussian, DiscretizationConfig::new(p1, 400));
            c.k = 1;
            c.softness.etas = vec![0.0, eta_opt / 2.0, eta_opt];
            c
        }
        StudyKind::DomainStudy => {
            let p2 = p.unwrap_or(2);
            let mut c = StudyConfig::new(kind, gaussian, DiscretizationConfig::new(p2, 400));
            c.k = 1;
            c.softness.etas = vec![0.0, if p2 == 1 { 1.0 / 12.0 } else { 1.0 / 720.0 }];
            c
        }
        StudyKind::ThreeBody => {
            let mut c = StudyConfig::new(
                kind,
                ProblemConfig::three_body(PotentialShape::Gaussian, 1.0, 1.0),
                DiscretizationConfig::new(2, 80).with_growth(0.2),
            );
            c.reference.p = Some(6);
            c.reference.n = Some(120);
            c
        }
        StudyKind::Bench => StudyConfig::new(kind, lorentzian, DiscretizationConfig::new(2, 400)),
    };
    if matches!(kind, StudyKind::EtaSweep | StudyKind::Convergence | StudyKind::DomainStudy) {
        cfg.reference.p = Some(7);
        cfg.reference.n = Some(5000);
    }
    cfg
}

fn has_reference(cfg: &StudyConfig) -> bool {
    let r = &cfg.reference;
    r.values.is_some() || r.file.is_some() || r.p.is_some() || r.n.is_some()
}

fn errors_of(computed: &[f64], reference: &[f64]) -> Result<Vec<f64>, ExperimentError> {
    Ok(eigen_error(computed, reference)?.iter().map(|r| r.error).collect())
}

fn etas_or_single(cfg: &StudyConfig) -> Vec<f64> {
    if cfg.softness.etas.is_empty() {
        vec![cfg.softness.eta.unwrap_or(0.0)]
    } else {
        cfg.softness.etas.clone()
    }
}

fn create_dir(dir: &Path) -> Result<(), ExperimentError> {
    std::fs::create_dir_all(dir).map_err(|e| ExperimentError::io(dir, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), ExperimentError> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    std::fs::write(path, text).map_err(|e| ExperimentError::io(path, e))
}

/// One row of an eigenvalue table, also the JSON record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenTableRow {
    pub method: Method,
    pub p: usize,
    pub eta: f64,
    pub eigenvalues: Vec<f64>,
    /// Empty when no reference is available.
    pub errors: Vec<f64>,
}

fn eigen_table(rows: &[EigenTableRow], k: usize) -> Table {
    let header = ["method", "p", "eta"]
        .into_iter()
        .map(String::from)
        .chain(Table::numbered("lambda", k))
        .chain(Table::numbered("err", k));
    let mut t = Table::new(header);
    for r in rows {
        let mut cells: Vec<Cell> = vec![r.method.label().into(), r.p.into(), r.eta.into()];
        cells.extend(r.eigenvalues.iter().map(|&v| Cell::Num(v)));
        cells.extend((0..k).map(|i| Cell::Num(r.errors.get(i).copied().unwrap_or(f64::NAN))));
        t.push(cells);
    }
    t
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub row: EigenTableRow,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

pub fn solve_study(cfg: &StudyConfig) -> Result<SolveReport, ExperimentError> {
    let spec = cfg.spec()?;
    let disc = &cfg.discretization;
    let eta = cfg.softness.eta.unwrap_or(0.0);
    let solved = solve_problem(&spec, disc, eta, &cfg.solver.options(cfg.k), cfg.three_body.max_dofs)?;
    let errors = if has_reference(cfg) {
        let reference = resolve_reference(cfg, disc.p, disc.max_h(spec.half_width)?, cfg.k)?;
        errors_of(&solved.result.eigenvalues, &reference)?
    } else {
        Vec::new()
    };
    Ok(SolveReport {
        row: EigenTableRow {
            method: Method::classify(disc.p, eta),
            p: disc.p,
            eta,
            eigenvalues: solved.result.eigenvalues,
            errors,
        },
        residuals: solved.result.residuals,
        iterations: solved.result.iterations,
    })
}

/// Eigenvalue errors over a grid of softness parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaSweep {
    pub etas: Vec<f64>,
    /// `errors[row][j]`; `NaN` where the softened stiffness lost definiteness.
    pub errors: Vec<Vec<f64>>,
}

impl EtaSweep {
    pub fn header(k: usize) -> Vec<String> {
        std::iter::once("eta".to_string()).chain(Table::numbered("err", k)).collect()
    }

    pub fn k(&self) -> usize {
        self.errors.first().map_or(0, Vec::len)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(Self::header(self.k()));
        for (eta, errs) in self.etas.iter().zip(&self.errors) {
            t.push(std::iter::once(*eta).chain(errs.iter().copied()).map(Cell::Num).collect());
        }
        t
    }

    pub fn from_table(raw: &RawTable) -> Result<Self, ExperimentError> {
        let k = raw.header.len().saturating_sub(1);
        raw.expect_header(&Self::header(k))?;
        let mut out = Self {
            etas: Vec::new(),
            errors: Vec::new(),
        };
        for i in 0..raw.rows.len() {
            out.etas.push(raw.f64(i, 0)?);
            out.errors.push((1..=k).map(|j| raw.f64(i, j)).collect::<Result<_, _>>()?);
        }
        Ok(out)
    }

    /// Row with the smallest first-eigenvalue error.
    pub fn argmin(&self) -> Option<usize> {
        (0..self.etas.len())
            .filter(|&i| self.errors[i][0].is_finite())
            .min_by(|&a, &b| self.errors[a][0].total_cmp(&self.errors[b][0]))
    }
}

pub fn eta_sweep(cfg: &StudyConfig) -> Result<EtaSweep, ExperimentError> {
    let spec = cfg.spec()?;
    let disc = &cfg.discretization;
    let reference = resolve_reference(cfg, disc.p, disc.max_h(spec.half_width)?, cfg.k)?;
    let opts = cfg.solver.options(cfg.k);
    let rows: Vec<Result<Vec<f64>, ExperimentError>> = cfg
        .softness
        .etas
        .par_iter()
        .map(|&eta| match solve_problem(&spec, disc, eta, &opts, cfg.three_body.max_dofs) {
            Ok(s) => errors_of(&s.result.eigenvalues, &reference),
            Err(ExperimentError::Eigen(EigenError::SoftnessTooLarge { .. })) => Ok(vec![f64::NAN; cfg.k]),
            Err(e) => Err(e),
        })
        .collect();
    Ok(EtaSweep {
        etas: cfg.softness.etas.clone(),
        errors: rows.into_iter().collect::<Result<_, _>>()?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub eta: f64,
    pub errors: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    /// One fit per `(eta, eigenvalue)` pair.
    pub fits: Vec<ConvergenceFit>,
}

impl ConvergenceStudy {
    pub fn header(k: usize) -> Vec<String> {
        ["n", "h", "eta"].into_iter().map(String::from).chain(Table::numbered("err", k)).collect()
    }

    pub fn to_table(&self) -> Table {
        let k = self.rows.first().map_or(0, |r| r.errors.len());
        let mut t = Table::new(Self::header(k));
        for r in &self.rows {
            let mut cells = vec![Cell::Int(r.n), Cell::Num(r.h), Cell::Num(r.eta)];
            cells.extend(r.errors.iter().map(|&e| Cell::Num(e)));
            t.push(cells);
        }
        t
    }

    pub fn rows_from_table(raw: &RawTable) -> Result<Vec<ConvergenceRow>, ExperimentError> {
        let k = raw.header.len().saturating_sub(3);
        raw.expect_header(&Self::header(k))?;
        (0..raw.rows.len())
            .map(|i| {
                Ok(ConvergenceRow {
                    n: raw.usize(i, 0)?,
                    h: raw.f64(i, 1)?,
                    eta: raw.f64(i, 2)?,
                    errors: (3..3 + k).map(|j| raw.f64(i, j)).collect::<Result<_, _>>()?,
                })
            })
            .collect()
    }

    pub fn fit_table(&self) -> Table {
        let mut t = Table::new(["eta", "index", "order", "intercept", "points_used"]);
        for f in &self.fits {
            t.push(vec![
                f.eta.into(),
                (f.index + 1).into(),
                f.order.unwrap_or(f64::NAN).into(),
                f.intercept.unwrap_or(f64::NAN).into(),
                f.points_used.into(),
            ]);
        }
        t
    }

    pub fn fit(&self, eta: f64, index: usize) -> Option<&ConvergenceFit> {
        self.fits.iter().find(|f| f.eta == eta && f.index == index)
    }
}

pub fn convergence_study(cfg: &StudyConfig) -> Result<ConvergenceStudy, ExperimentError> {
    let spec = cfg.spec()?;
    let c = &cfg.convergence;
    let finest = c.ns.iter().copied().max().unwrap_or(1);
    let h_min = cfg.discretization.clone().with_elements(finest).max_h(spec.half_width)?;
    let reference = resolve_reference(cfg, cfg.discretization.p, h_min, cfg.k)?;
    let opts = cfg.solver.options(cfg.k);
    let etas = etas_or_single(cfg);
    let jobs: Vec<(f64, usize)> = etas.iter().flat_map(|&eta| c.ns.iter().map(move |&n| (eta, n))).collect();
    let rows: Vec<Result<ConvergenceRow, ExperimentError>> = jobs
        .par_iter()
        .map(|&(eta, n)| {
            let disc = cfg.discretization.with_elements(n);
            let s = solve_problem(&spec, &disc, eta, &opts, cfg.three_body.max_dofs)?;
            Ok(ConvergenceRow {
                n,
                h: disc.max_h(spec.half_width)?,
                eta,
                errors: errors_of(&s.result.eigenvalues, &reference)?,
            })
        })
        .collect();
    let rows: Vec<ConvergenceRow> = rows.into_iter().collect::<Result<_, _>>()?;
    let mut fits = Vec::new();
    for &eta in &etas {
        let sel: Vec<&ConvergenceRow> = rows.iter().filter(|r| r.eta == eta).collect();
        for j in 0..cfg.k {
            fits.push(ConvergenceFit::new(
                eta,
                j,
                sel.iter().map(|r| r.h).collect(),
                sel.iter().map(|r| r.errors[j]).collect(),
                c.floor,
                c.window_factor,
            ));
        }
    }
    Ok(ConvergenceStudy { rows, fits })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainRow {
    pub half_width: f64,
    pub h: f64,
    pub eta: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainStudy {
    pub rows: Vec<DomainRow>,
    /// `(eta, fit)` per softness value.
    pub fits: Vec<(f64, EnvelopeFit)>,
}

impl DomainStudy {
    pub fn header() -> Vec<String> {
        ["x_eps", "h", "eta", "err1"].into_iter().map(String::from).collect()
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(Self::header());
        for r in &self.rows {
            t.push(vec![r.half_width.into(), r.h.into(), r.eta.into(), r.error.into()]);
        }
        t
    }

    pub fn rows_from_table(raw: &RawTable) -> Result<Vec<DomainRow>, ExperimentError> {
        raw.expect_header(&Self::header())?;
        (0..raw.rows.len())
            .map(|i| {
                Ok(DomainRow {
                    half_width: raw.f64(i, 0)?,
                    h: raw.f64(i, 1)?,
                    eta: raw.f64(i, 2)?,
                    error: raw.f64(i, 3)?,
                })
            })
            .collect()
    }

    pub fn fit_table(&self) -> Table {
        let mut t = Table::new(["eta", "slope", "intercept", "points_used"]);
        for (eta, f) in &self.fits {
            t.push(vec![
                (*eta).into(),
                f.slope.unwrap_or(f64::NAN).into(),
                f.intercept.unwrap_or(f64::NAN).into(),
                f.points_used.into(),
            ]);
        }
        t
    }

    pub fn fit(&self, eta: f64) -> Option<&EnvelopeFit> {
        self.fits.iter().find(|(e, _)| *e == eta).map(|(_, f)| f)
    }
}

pub fn domain_study(cfg: &StudyConfig) -> Result<DomainStudy, ExperimentError> {
    let base = cfg.spec()?;
    let d = &cfg.domain;
    let h_min = d.hs.iter().copied().fold(f64::INFINITY, f64::min);
    let reference = resolve_reference(cfg, cfg.discretization.p, h_min, 1)?;
    let opts = cfg.solver.options(1);
    let etas = etas_or_single(cfg);
    let mut jobs = Vec::new();
    for &eta in &etas {
        for &x in &d.half_widths {
            for &h in &d.hs {
                jobs.push((eta, x, h));
            }
        }
    }
    let rows: Vec<Result<DomainRow, ExperimentError>> = jobs
        .par_iter()
        .map(|&(eta, x, h)| {
            let spec = ProblemSpec::new(base.dimension, x, base.shape, base.beta, base.mass_ratio, Some(base.gamma0))
                .map_err(|e| ExperimentError::Config(e.to_string()))?;
            let n = ((2.0 * x / h).round() as usize).max(1);
            let disc = cfg.discretization.with_elements(n);
            let s = solve_problem(&spec, &disc, eta, &opts, cfg.three_body.max_dofs)?;
            Ok(DomainRow {
                half_width: x,
                h,
                eta,
                error: (s.result.eigenvalues[0] - reference[0]).abs(),
            })
        })
        .collect();
    let rows: Vec<DomainRow> = rows.into_iter().collect::<Result<_, _>>()?;
    let fits = etas
        .iter()
        .map(|&eta| {
            let (envelope, converged): (Vec<f64>, Vec<bool>) = d
                .half_widths
                .iter()
                .map(|&x| {
                    let mut by_h: Vec<&DomainRow> =
                        rows.iter().filter(|r| r.eta == eta && r.half_width == x).collect();
                    by_h.sort_by(|a, b| a.h.total_cmp(&b.h));
                    let best = by_h.iter().map(|r| r.error).fold(f64::INFINITY, f64::min);
                    let converged = match by_h.as_slice() {
                        [finest, next, ..] => {
                            (finest.error - next.error).abs() <= d.mesh_tolerance * finest.error
                        }
                        _ => true,
                    };
                    (best, converged)
                })
                .unzip();
            (eta, EnvelopeFit::new(d.half_widths.clone(), envelope, converged, d.floor, d.window_factor))
        })
        .collect();
    Ok(DomainStudy { rows, fits })
}

/// A sampled eigenfunction on a uniform tensor grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    pub method: Method,
    /// Zero-based mode index.
    pub mode: usize,
    pub points: Vec<(f64, f64, f64)>,
}

impl ModeGrid {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["x", "y", "value"]);
        for &(x, y, v) in &self.points {
            t.push(vec![x.into(), y.into(), v.into()]);
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThreeBodyStudy {
    pub reference: Vec<f64>,
    pub rows: Vec<EigenTableRow>,
    pub modes: Vec<ModeGrid>,
}

impl ThreeBodyStudy {
    pub fn row(&self, method: Method) -> Option<&EigenTableRow> {
        self.rows.iter().find(|r| r.method == method)
    }
}

pub fn three_body(cfg: &StudyConfig) -> Result<ThreeBodyStudy, ExperimentError> {
    let spec = cfg.spec()?;
    let tb = &cfg.three_body;
    let h_min = cfg.discretization.max_h(spec.half_width)?;
    let reference = resolve_reference(cfg, 2, h_min, cfg.k)?;
    let opts = cfg.solver.options(cfg.k);
    let solved: Vec<Result<(EigenTableRow, Vec<ModeGrid>), ExperimentError>> = Method::ALL
        .par_iter()
        .map(|&method| {
            let p = method.degree();
            let eta = match method {
                Method::SoftFem => tb.eta_fem,
                Method::SoftIga => tb.eta_iga,
                _ => 0.0,
            };
            let disc = cfg.discretization.with_degree(p);
            let s = solve_problem(&spec, &disc, eta, &opts, tb.max_dofs)?;
            let mut modes = Vec::new();
            if tb.grid > 1 {
                let hw = spec.half_width;
                let step = 2.0 * hw / (tb.grid - 1) as f64;
                let axis: Vec<f64> = (0..tb.grid).map(|i| (-hw + i as f64 * step).clamp(-hw, hw)).collect();
                let grid: Vec<(f64, f64)> = axis.iter().flat_map(|&x| axis.iter().map(move |&y| (x, y))).collect();
                let sy = s.space_y.as_ref().expect("2D solve");
                for (mode, u) in s.result.vectors.iter().enumerate() {
                    let vals = sample_eigenfunction_2d(&s.space_x, sy, u, &grid)?;
                    modes.push(ModeGrid {
                        method,
                        mode,
                        points: grid.iter().zip(vals).map(|(&(x, y), v)| (x, y, v)).collect(),
                    });
                }
            }
            let row = EigenTableRow {
                method,
                p,
                eta,
                errors: errors_of(&s.result.eigenvalues, &reference)?,
                eigenvalues: s.result.eigenvalues,
            };
            Ok((row, modes))
        })
        .collect();
    let mut rows = Vec::new();
    let mut modes = Vec::new();
    for r in solved {
        let (row, m) = r?;
        rows.push(row);
        modes.extend(m);
    }
    Ok(ThreeBodyStudy { reference, rows, modes })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: Method,
    pub problem: String,
    pub n: usize,
    pub dofs: usize,
    /// Median wall time of assembly plus solve, seconds.
    pub wall_time: f64,
    pub mean: f64,
    /// Sample standard deviation over the mean.
    pub rel_std: f64,
    pub iterations: usize,
}

pub fn bench_table(rows: &[BenchRow]) -> Table {
    let mut t = Table::new(["method", "problem", "n", "dofs", "wall_time", "mean", "rel_std", "iterations"]);
    for r in rows {
        t.push(vec![
            r.method.label().into(),
            r.problem.as_str().into(),
            r.n.into(),
            r.dofs.into(),
            r.wall_time.into(),
            r.mean.into(),
            r.rel_std.into(),
            r.iterations.into(),
        ]);
    }
    t
}

fn median(times: &[f64]) -> f64 {
    let mut sorted = times.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    }
}

/// Serial timings of the four methods on the two benchmark problems.
pub fn bench(cfg: &StudyConfig) -> Result<Vec<BenchRow>, ExperimentError> {
    let b = &cfg.bench;
    let opts = cfg.solver.options(cfg.k);
    let two = b.two_body.to_spec()?;
    let three = b.three_body.to_spec()?;
    let mut cases = Vec::new();
    for &n in &b.two_body_ns {
        cases.push(("two-body", &two, n, 0.0, b.eta_fem, b.eta_iga));
    }
    for &n in &b.three_body_ns {
        cases.push(("three-body", &three, n, b.growth_2d, b.eta_fem_2d, b.eta_iga_2d));
    }
    let mut rows = Vec::new();
    for (problem, spec, n, growth, eta_fem, eta_iga) in cases {
        for method in Method::ALL {
            let eta = match method {
                Method::SoftFem => eta_fem,
                Method::SoftIga => eta_iga,
                _ => 0.0,
            };
            let disc = DiscretizationConfig::new(method.degree(), n).with_growth(growth);
            let mut times = Vec::with_capacity(b.repeats);
            let mut last = None;
            for _ in 0..b.repeats {
                let t0 = Instant::now();
                let s = solve_problem(spec, &disc, eta, &opts, usize::MAX)?;
                times.push(t0.elapsed().as_secs_f64());
                last = Some(s);
            }
            let s = last.expect("at least one repeat");
            let mean = times.iter().sum::<f64>() / times.len() as f64;
            let var = if times.len() > 1 {
                times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (times.len() - 1) as f64
            } else {
                0.0
            };
            rows.push(BenchRow {
                method,
                problem: problem.to_string(),
                n,
                dofs: s.result.vectors.first().map_or(0, Vec::len),
                wall_time: median(&times),
                mean,
                rel_std: if mean > 0.0 { var.sqrt() / mean } else { 0.0 },
                iterations: s.result.iterations,
            });
        }
    }
    Ok(rows)
}

/// Runs the configured study and writes its artifacts into
/// `cfg.output.dir`; returns the files written.
pub fn run(cfg: &StudyConfig) -> Result<Vec<PathBuf>, ExperimentError> {
    cfg.validate()?;
    let dir = cfg.output.dir.clone();
    create_dir(&dir)?;
    let mut written = Vec::new();
    let mut json = Vec::new();
    let mut table = |name: &str, t: &Table| -> Result<(), ExperimentError> {
        let path = dir.join(name);
        t.write_csv(&path)?;
        written.push(path);
        Ok(())
    };
    match cfg.study {
        StudyKind::Solve => {
            let report = solve_study(cfg)?;
            let mut t = Table::new(["index", "eigenvalue", "residual", "error"]);
            for (i, (&v, &r)) in report.row.eigenvalues.iter().zip(&report.residuals).enumerate() {
                let e = report.row.errors.get(i).copied().unwrap_or(f64::NAN);
                t.push(vec![(i + 1).into(), v.into(), r.into(), e.into()]);
            }
            table("solve.csv", &t)?;
            json.push(("solve.json", serde_json::to_value(vec![&report.row]).expect("json")));
            if cfg.output.export_matrices {
                let eta = cfg.softness.eta.unwrap_or(0.0);
                export_matrices(&dir, &cfg.spec()?, &cfg.discretization, eta, cfg.three_body.max_dofs)?;
                written.push(dir.join("k_tilde.txt"));
                written.push(dir.join("mass.txt"));
            }
        }
        StudyKind::Reference => {
            // checked against a nominal degree-1 study, so p >= 3
            let (spec, disc) = reference_discretization(cfg, 1, f64::INFINITY).map_err(|e| match e {
                ExperimentError::ReferenceMissing(_) => {
                    ExperimentError::Config("reference study needs [reference] p and n".into())
                }
                e => e,
            })?;
            let cache = cfg.reference.cache_dir.clone().unwrap_or_else(|| dir.join("cache"));
            let out = run_reference(&spec, &disc, cfg.k, &cfg.solver.options(cfg.k), Some(&cache), usize::MAX)?;
            let path = dir.join("reference.json");
            let file = ReferenceFile {
                key: Some(ReferenceKey::new(&spec, &disc, cfg.k)?),
                eigenvalues: out.eigenvalues,
            };
            write_reference_file(&path, &file)?;
            written.push(path);
        }
        StudyKind::EtaSweep => table("eta_sweep.csv", &eta_sweep(cfg)?.to_table())?,
        StudyKind::Convergence => {
            let c = convergence_study(cfg)?;
            table("convergence.csv", &c.to_table())?;
            table("convergence_fit.csv", &c.fit_table())?;
        }
        StudyKind::DomainStudy => {
            let d = domain_study(cfg)?;
            table("domain_study.csv", &d.to_table())?;
            table("domain_fit.csv", &d.fit_table())?;
        }
        StudyKind::ThreeBody => {
            let s = three_body(cfg)?;
            table("three_body.csv", &eigen_table(&s.rows, cfg.k))?;
            for m in &s.modes {
                table(&format!("mode_{}_{}.csv", m.method.label(), m.mode + 1), &m.to_table())?;
            }
            json.push(("three_body.json", serde_json::to_value(&s.rows).expect("json")));
        }
        StudyKind::Bench => table("bench.csv", &bench_table(&bench(cfg)?))?,
    }
    if cfg.output.json {
        for (name, value) in json {
            let path = dir.join(name);
            write_json(&path, &value)?;
            written.push(path);
        }
    }
    Ok(written)
}
