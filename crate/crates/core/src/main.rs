use clap::{Args, Parser, Subcommand};
use softiga::experiments::config::StudyKind;
use softiga::experiments::studies::{preset, run};
use softiga::experiments::{ExperimentError, StudyConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Soft finite element and isogeometric eigenvalue experiments.
#[derive(Debug, Parser)]
#[command(name = "softiga", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Smallest eigenpairs of one discretization.
    Solve(Overrides),
    /// High-degree reference eigenvalues, cached on disk.
    Reference(Overrides),
    /// Eigenvalue errors across a grid of softness parameters.
    EtaSweep(Overrides),
    /// Errors and fitted orders under mesh refinement.
    Convergence(Overrides),
    /// Domain-truncation error against the half-width.
    DomainStudy(Overrides),
    /// The four methods on the two-dimensional three-body problem.
    ThreeBody(Overrides),
    /// Wall-clock timings of the four methods.
    Bench(Overrides),
}

#[derive(Debug, Args)]
struct Overrides {
    /// TOML study configuration; the built-in preset when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Spline degree (the reference degree for `reference`).
    #[arg(long)]
    p: Option<usize>,
    /// Number of elements (the reference mesh for `reference`).
    #[arg(long)]
    n: Option<usize>,
    /// Softness parameter; replaces the grid of a sweep.
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    /// Number of eigenpairs.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    quad_order: Option<usize>,
    #[arg(long)]
    quad_order_potential: Option<usize>,
    #[arg(long)]
    dense_threshold: Option<usize>,
    /// Relative residual tolerance of the eigensolver.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed of the Lanczos start vector.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the assembled matrices in coordinate format (`solve`).
    #[arg(long)]
    export_matrices: bool,
}

impl Command {
    fn split(self) -> (StudyKind, Overrides) {
        match self {
            Command::Solve(o) => (StudyKind::Solve, o),
            Command::Reference(o) => (StudyKind::Reference, o),
            Command::EtaSweep(o) => (StudyKind::EtaSweep, o),
            Command::Convergence(o) => (StudyKind::Convergence, o),
            Command::DomainStudy(o) => (StudyKind::DomainStudy, o),
            Command::ThreeBody(o) => (StudyKind::ThreeBody, o),
            Command::Bench(o) => (StudyKind::Bench, o),
        }
    }
}

fn configure(kind: StudyKind, o: Overrides) -> Result<StudyConfig, ExperimentError> {
    let mut cfg = match &o.config {
        Some(path) => {
            let cfg = StudyConfig::load(path)?;
            if cfg.study != kind {
                return Err(ExperimentError::Config(format!(
                    "{} describes a {:?} study, not {kind:?}",
                    path.display(),
                    cfg.study
                )));
            }
            cfg
        }
        None => preset(kind, o.p),
    };
    if let Some(out) = o.out {
        cfg.output.dir = out;
    }
    if kind == StudyKind::Reference {
        cfg.reference.p = o.p.or(cfg.reference.p);
        cfg.reference.n = o.n.or(cfg.reference.n);
    } else {
        if let Some(p) = o.p {
            cfg.discretization.p = p;
        }
        if let Some(n) = o.n {
            cfg.discretization.n = n;
        }
    }
    if let Some(eta) = o.eta {
        match kind {
            StudyKind::Solve => cfg.softness.eta = Some(eta),
            StudyKind::EtaSweep | StudyKind::Convergence | StudyKind::DomainStudy => cfg.softness.etas = vec![eta],
            _ => return Err(ExperimentError::Config(format!("--eta does not apply to {kind:?}"))),
        }
    }
    if let Some(k) = o.k {
        cfg.k = k;
    }
    if o.quad_order.is_some() {
        cfg.discretization.quad_order = o.quad_order;
    }
    if o.quad_order_potential.is_some() {
        cfg.discretization.quad_order_potential = o.quad_order_potential;
    }
    if let Some(d) = o.dense_threshold {
        cfg.solver.dense_threshold = d;
    }
    if let Some(tol) = o.tol {
        cfg.solver.tol = tol;
    }
    if let Some(seed) = o.seed {
        cfg.solver.seed = seed;
    }
    cfg.output.export_matrices |= o.export_matrices;
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let (kind, overrides) = Cli::parse().command.split();
    let result = configure(kind, overrides).and_then(|cfg| run(&cfg));
    match result {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
