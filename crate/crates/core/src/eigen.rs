//! Smallest eigenpairs of the pencil `(K̃, M)`.
//!
//! Small problems go through a dense Cholesky reduction to a standard
//! symmetric problem. Larger ones use Lanczos on `K̃⁻¹ M` in the
//! `M`-inner product with full reorthogonalization; `K̃` is factored once
//! with a banded Cholesky, which doubles as the coercivity check.

use crate::sparse::{BandedCholesky, SparseError, SymMatrix};
use crate::spline::{Side, SplineError, SplineSpace};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum EigenError {
    #[error("softened stiffness is not positive definite (pivot {pivot:e} at row {row}); eta is at or above eta_max")]
    SoftnessTooLarge { row: usize, pivot: f64 },
    #[error("no convergence after {iterations} iterations (worst relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("mass matrix is not positive definite")]
    SingularMass,
    #[error("requested {k} eigenpairs from a problem of size {n}")]
    InvalidCount { k: usize, n: usize },
    #[error("stiffness has size {0} but mass has size {1}")]
    DimensionMismatch(usize, usize),
    #[error("{computed} computed eigenvalues but only {reference} reference values")]
    ReferenceTooShort { computed: usize, reference: usize },
    #[error("coefficient vector has length {got}, space dimension is {expected}")]
    CoefficientLength { got: usize, expected: usize },
    #[error(transparent)]
    Spline(#[from] SplineError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMethod {
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub k: usize,
    /// Accept a pair when `‖K̃u − μMu‖₂ ≤ tol · ‖K̃‖_∞`.
    pub tol: f64,
    /// Problems with at most this many unknowns are solved densely.
    pub dense_threshold: usize,
    /// Lanczos step cap; `None` uses `max(50 k, 300)`.
    pub max_iter: Option<usize>,
    /// Seed of the Lanczos start vector.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            k: 2,
            tol: 1e-10,
            dense_threshold: 400,
            max_iter: None,
            seed: 0x5eed,
        }
    }
}

impl SolverOptions {
    pub fn with_k(k: usize) -> Self {
        Self { k, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Physical eigenvalues `μ − γ₀`, ascending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues `μ` of the shifted pencil.
    pub shifted: Vec<f64>,
    /// `M`-orthonormal coefficient vectors; the entry of largest magnitude is
    /// positive.
    pub vectors: Vec<Vec<f64>>,
    /// `‖K̃u − μMu‖₂` per pair.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub method: SolveMethod,
}

fn factor(k_tilde: &impl SymMatrix) -> Result<BandedCholesky, EigenError> {
    k_tilde.to_banded().cholesky().map_err(|e| match e {
        SparseError::NotPositiveDefinite { row, value } => EigenError::SoftnessTooLarge { row, pivot: value },
        SparseError::DimensionMismatch(a, b) => EigenError::DimensionMismatch(a, b),
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn fix_sign(v: &mut [f64]) {
    let best = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    // ties between mirror-image entries go to the lowest index
    let lead = v.iter().find(|x| x.abs() >= best * (1.0 - 1e-6)).copied();
    if lead.is_some_and(|x| x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn residual(k_tilde: &impl SymMatrix, mass: &impl SymMatrix, mu: f64, u: &[f64]) -> f64 {
    let ku = k_tilde.mul(u);
    let mu_m = mass.mul(u);
    ku.iter().zip(&mu_m).map(|(a, b)| (a - mu * b).powi(2)).sum::<f64>().sqrt()
}

/// The `k` smallest eigenpairs of `K̃ u = μ M u`, reported as `μ − γ₀`.
pub fn solve_smallest(
    k_tilde: &impl SymMatrix,
    mass: &impl SymMatrix,
    gamma0: f64,
    opts: &SolverOptions,
) -> Result<EigenResult, EigenError> {
    let n = k_tilde.dim();
    if mass.dim() != n {
        return Err(EigenError::DimensionMismatch(n, mass.dim()));
    }
    if opts.k == 0 || opts.k > n {
        return Err(EigenError::InvalidCount { k: opts.k, n });
    }
    let chol = factor(k_tilde)?;
    let mut out = if n <= opts.dense_threshold {
        solve_dense(k_tilde, mass, opts.k)?
    } else {
        solve_lanczos(k_tilde, mass, &chol, opts)?
    };
    let knorm = k_tilde.norm_inf();
    let worst = out.residuals.iter().fold(0.0f64, |m, r| m.max(r / knorm));
    if worst > opts.tol {
        return Err(EigenError::NoConvergence {
            iterations: out.iterations,
            residual: worst,
        });
    }
    out.eigenvalues = out.shifted.iter().map(|mu| mu - gamma0).collect();
    Ok(out)
}

fn solve_dense(k_tilde: &impl SymMatrix, mass: &impl SymMatrix, k: usize) -> Result<EigenResult, EigenError> {
    let kd = k_tilde.to_dense();
    let md = mass.to_dense();
    let chol = md.cholesky().ok_or(EigenError::SingularMass)?;
    let l = chol.l();
    let x = l.solve_lower_triangular(&kd).ok_or(EigenError::SingularMass)?;
    let c = l
        .solve_lower_triangular(&x.transpose())
        .ok_or(EigenError::SingularMass)?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut shifted = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for &j in order.iter().take(k) {
        let y: DVector<f64> = eig.eigenvectors.column(j).into_owned();
        let u = l.tr_solve_lower_triangular(&y).ok_or(EigenError::SingularMass)?;
        let mut u: Vec<f64> = u.iter().copied().collect();
        let mu = eig.eigenvalues[j];
        // one step of M-normalization to remove rounding drift
        let nrm = dot(&u, &mass.mul(&u)).sqrt();
        u.iter_mut().for_each(|v| *v /= nrm);
        fix_sign(&mut u);
        residuals.push(residual(k_tilde, mass, mu, &u));
        shifted.push(mu);
        vectors.push(u);
    }
    Ok(EigenResult {
        eigenvalues: Vec::new(),
        shifted,
        vectors,
        residuals,
        iterations: 1,
        method: SolveMethod::Dense,
    })
}

fn solve_lanczos(
    k_tilde: &impl SymMatrix,
    mass: &impl SymMatrix,
    chol: &BandedCholesky,
    opts: &SolverOptions,
) -> Result<EigenResult, EigenError> {
    let n = k_tilde.dim();
    let k = opts.k;
    let max_iter = opts.max_iter.unwrap_or((50 * k).max(300)).min(n).max(k);
    let knorm = k_tilde.norm_inf();
    mass.to_banded().cholesky().map_err(|_| EigenError::SingularMass)?;

    let mut rng = rand::rngs::StdRng::seed_from_u64(opts.seed);
    let mut random_vector = |basis: &[Vec<f64>], mbasis: &[Vec<f64>]| -> Option<(Vec<f64>, Vec<f64>)> {
        for _ in 0..5 {
            let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            for _ in 0..2 {
                for (b, mb) in basis.iter().zip(mbasis) {
                    let c = dot(mb, &v);
                    axpy(-c, b, &mut v);
                }
            }
            let mv = mass.mul(&v);
            let nrm = dot(&v, &mv).sqrt();
            if nrm > 1e-8 {
                return Some((v.iter().map(|x| x / nrm).collect(), mv.iter().map(|x| x / nrm).collect()));
            }
        }
        None
    };

    // V is M-orthonormal, Z = M V
    let mut vs: Vec<Vec<f64>> = Vec::with_capacity(max_iter + 1);
    let mut zs: Vec<Vec<f64>> = Vec::with_capacity(max_iter + 1);
    let mut alpha: Vec<f64> = Vec::with_capacity(max_iter);
    let mut beta: Vec<f64> = Vec::with_capacity(max_iter);
    let (v0, z0) = random_vector(&[], &[]).expect("nonzero start vector");
    vs.push(v0);
    zs.push(z0);

    let mut last_worst = f64::INFINITY;
    let check_every = 5;
    for j in 0..max_iter {
        let mut w = zs[j].clone();
        chol.solve_in_place(&mut w);
        let a = dot(&zs[j], &w);
        alpha.push(a);
        axpy(-a, &vs[j], &mut w);
        if j > 0 {
            axpy(-beta[j - 1], &vs[j - 1], &mut w);
        }
        for _ in 0..2 {
            for (v, z) in vs.iter().zip(&zs) {
                let c = dot(z, &w);
                axpy(-c, v, &mut w);
            }
        }
        let mw = mass.mul(&w);
        let b = dot(&w, &mw).max(0.0).sqrt();
        let m = j + 1;

        let exhausted = m == n;
        let breakdown = b <= 1e-12 * a.abs().max(f64::MIN_POSITIVE);
        let at_check = m >= k && (m % check_every == 0 || m == max_iter || exhausted || breakdown);

        if at_check {
            let t = tridiagonal(&alpha, &beta);
            let eig = SymmetricEigen::new(t);
            let mut order: Vec<usize> = (0..m).collect();
            // largest Ritz values of the inverse operator first
            order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
            let top: Vec<usize> = order.into_iter().take(k).collect();
            let estimate = top
                .iter()
                .map(|&i| (b * eig.eigenvectors[(m - 1, i)]).abs() / eig.eigenvalues[i].abs())
                .fold(0.0f64, f64::max);
            let finishing = exhausted || m == max_iter;
            if estimate < 1e-3 * opts.tol || finishing || (breakdown && m >= k) {
                let mut shifted = Vec::with_capacity(k);
                let mut vectors = Vec::with_capacity(k);
                let mut residuals = Vec::with_capacity(k);
                for &i in top.iter().rev() {
                    let s = eig.eigenvectors.column(i);
                    let mut u = vec![0.0; n];
                    for (c, v) in s.iter().zip(&vs) {
                        axpy(*c, v, &mut u);
                    }
                    let nrm = dot(&u, &mass.mul(&u)).sqrt();
                    u.iter_mut().for_each(|x| *x /= nrm);
                    // Rayleigh quotient in the original pencil
                    let mu = dot(&u, &k_tilde.mul(&u));
                    fix_sign(&mut u);
                    residuals.push(residual(k_tilde, mass, mu, &u));
                    shifted.push(mu);
                    vectors.push(u);
                }
                let mut idx: Vec<usize> = (0..k).collect();
                idx.sort_by(|&x, &y| shifted[x].total_cmp(&shifted[y]));
                let shifted: Vec<f64> = idx.iter().map(|&i| shifted[i]).collect();
                let vectors: Vec<Vec<f64>> = idx.iter().map(|&i| vectors[i].clone()).collect();
                let residuals: Vec<f64> = idx.iter().map(|&i| residuals[i]).collect();
                let worst = residuals.iter().fold(0.0f64, |acc, r| acc.max(r / knorm));
                last_worst = worst;
                if worst <= opts.tol || finishing {
                    return Ok(EigenResult {
                        eigenvalues: Vec::new(),
                        shifted,
                        vectors,
                        residuals,
                        iterations: m,
                        method: SolveMethod::Lanczos,
                    });
                }
            }
        }
        if exhausted {
            break;
        }
        if breakdown {
            // invariant subspace found: continue with a fresh direction
            match random_vector(&vs, &zs) {
                Some((v, z)) => {
                    beta.push(0.0);
                    vs.push(v);
                    zs.push(z);
                }
                None => break,
            }
        } else {
            beta.push(b);
            vs.push(w.iter().map(|x| x / b).collect());
            zs.push(mw.iter().map(|x| x / b).collect());
        }
    }
    Err(EigenError::NoConvergence {
        iterations: alpha.len(),
        residual: last_worst,
    })
}

fn tridiagonal(alpha: &[f64], beta: &[f64]) -> DMatrix<f64> {
    let m = alpha.len();
    DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    })
}

/// Eigenvalue error against a reference value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub index: usize,
    pub computed: f64,
    pub reference: f64,
    pub error: f64,
}

/// `|λ_j − λ̂_j|` for each computed eigenvalue; extra reference values are
/// ignored.
pub fn eigen_error(computed: &[f64], reference: &[f64]) -> Result<Vec<ErrorRecord>, EigenError> {
    if computed.len() > reference.len() {
        return Err(EigenError::ReferenceTooShort {
            computed: computed.len(),
            reference: reference.len(),
        });
    }
    Ok(computed
        .iter()
        .zip(reference)
        .enumerate()
        .map(|(index, (&c, &r))| ErrorRecord {
            index,
            computed: c,
            reference: r,
            error: (c - r).abs(),
        })
        .collect())
}

fn check_len(space_dim: usize, coeffs: &[f64]) -> Result<(), EigenError> {
    if coeffs.len() != space_dim {
        return Err(EigenError::CoefficientLength {
            got: coeffs.len(),
            expected: space_dim,
        });
    }
    Ok(())
}

/// `u(x) = Σ_j c_j φ_j(x)` over the Dirichlet basis.
pub fn sample_eigenfunction(space: &SplineSpace, coeffs: &[f64], grid: &[f64]) -> Result<Vec<f64>, EigenError> {
    check_len(space.dimension(), coeffs)?;
    grid.iter()
        .map(|&x| {
            let vals = space.eval_basis(x, 0, Side::Right)?;
            Ok(vals
                .into_iter()
                .filter_map(|(j, v)| space.dof(j).map(|d| coeffs[d] * v))
                .sum())
        })
        .collect()
}

/// Tensor-product evaluation; coefficient `(i, j)` sits at `i * Ny + j`.
pub fn sample_eigenfunction_2d(
    space_x: &SplineSpace,
    space_y: &SplineSpace,
    coeffs: &[f64],
    grid: &[(f64, f64)],
) -> Result<Vec<f64>, EigenError> {
    check_len(space_x.dimension() * space_y.dimension(), coeffs)?;
    let ny = space_y.dimension();
    grid.iter()
        .map(|&(x, y)| {
            let bx = space_x.eval_basis(x, 0, Side::Right)?;
            let by = space_y.eval_basis(y, 0, Side::Right)?;
            let mut s = 0.0;
            for &(jx, vx) in &bx {
                let Some(ix) = space_x.dof(jx) else { continue };
                for &(jy, vy) in &by {
                    let Some(iy) = space_y.dof(jy) else { continue };
                    s += coeffs[ix * ny + iy] * vx * vy;
                }
            }
            Ok(s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{assemble_1d, assemble_mass, assemble_stiffness};
    use crate::mesh::uniform_mesh;
    use crate::problem::{PotentialShape, ProblemSpec};
    use crate::quadrature::gauss_rule;
    use crate::sparse::BandedSym;
    use std::f64::consts::PI;

    fn diag(vals: &[f64]) -> BandedSym {
        let mut a = BandedSym::zeros(vals.len(), 0);
        for (i, &v) in vals.iter().enumerate() {
            a.add(i, i, v);
        }
        a
    }

    #[test]
    fn diagonal_problem() {
        let k = diag(&[6.0, 2.0]);
        let m = diag(&[1.0, 1.0]);
        let r = solve_smallest(&k, &m, 0.0, &SolverOptions::with_k(2)).unwrap();
        assert_eq!(r.eigenvalues.len(), 2);
        assert!((r.eigenvalues[0] - 2.0).abs() < 1e-14);
        assert!((r.eigenvalues[1] - 6.0).abs() < 1e-14);
        assert!(r.vectors.iter().all(|v| v.iter().cloned().fold(f64::MIN, f64::max) > 0.0));
    }

    #[test]
    fn invalid_requests() {
        let k = diag(&[1.0, 2.0]);
        let m = diag(&[1.0, 1.0]);
        assert_eq!(
            solve_smallest(&k, &m, 0.0, &SolverOptions::with_k(3)),
            Err(EigenError::InvalidCount { k: 3, n: 2 })
        );
        assert_eq!(
            solve_smallest(&k, &diag(&[1.0]), 0.0, &SolverOptions::with_k(1)),
            Err(EigenError::DimensionMismatch(2, 1))
        );
        assert!(matches!(
            solve_smallest(&diag(&[1.0, -2.0]), &m, 0.0, &SolverOptions::with_k(1)),
            Err(EigenError::SoftnessTooLarge { row: 1, .. })
        ));
        assert_eq!(
            solve_smallest(&k, &diag(&[1.0, 0.0]), 0.0, &SolverOptions::with_k(1)),
            Err(EigenError::SingularMass)
        );
        let mut lanczos = SolverOptions::with_k(1);
        lanczos.dense_threshold = 0;
        assert_eq!(solve_smallest(&k, &diag(&[1.0, -1.0]), 0.0, &lanczos), Err(EigenError::SingularMass));
    }

    /// Linear FEM on [0, π] for -u'' = λu: λ_1^h = (6/h²)(1 − cos h)/(2 + cos h).
    #[test]
    fn linear_fem_dispersion() {
        let n = 40;
        let h = PI / n as f64;
        let mesh = crate::mesh::Mesh1D::new((0..=n).map(|i| i as f64 * h).collect()).unwrap();
        let space = SplineSpace::new(1, mesh).unwrap();
        let q = gauss_rule(4).unwrap();
        let gamma0 = 3.0;
        let k = assemble_stiffness(&space, &q, 1.0)
            .linear_combination(1.0, &assemble_mass(&space, &q), gamma0)
            .unwrap();
        let m = assemble_mass(&space, &q);
        let expect = 6.0 / (h * h) * (1.0 - h.cos()) / (2.0 + h.cos());
        for threshold in [1000, 0] {
            let opts = SolverOptions {
                k: 1,
                dense_threshold: threshold,
                ..SolverOptions::default()
            };
            let r = solve_smallest(&k, &m, gamma0, &opts).unwrap();
            assert!((r.eigenvalues[0] - expect).abs() < 1e-11, "{} vs {expect}", r.eigenvalues[0]);
        }
    }

    #[test]
    fn dense_and_lanczos_agree() {
        let spec = ProblemSpec::one_body(20.0, PotentialShape::LorentzianCube, 5.0).unwrap();
        for p in [1, 2] {
            let space = SplineSpace::new(p, uniform_mesh(20.0, 200).unwrap()).unwrap();
            let q = gauss_rule(p + 3).unwrap();
            let ops = assemble_1d(&space, &spec, &q, &q);
            let k = ops.soft(crate::assembly::SoftnessConfig { eta: 0.02 / p as f64 }).unwrap();
            let dense = solve_smallest(&k, &ops.mass, spec.gamma0, &SolverOptions { k: 4, dense_threshold: 10_000, ..Default::default() }).unwrap();
            let lanczos = solve_smallest(&k, &ops.mass, spec.gamma0, &SolverOptions { k: 4, dense_threshold: 0, ..Default::default() }).unwrap();
            assert_eq!(dense.method, SolveMethod::Dense);
            assert_eq!(lanczos.method, SolveMethod::Lanczos);
            for (a, b) in dense.eigenvalues.iter().zip(&lanczos.eigenvalues) {
                assert!((a - b).abs() <= 1e-10 * a.abs(), "{a} vs {b}");
            }
            for (u, w) in dense.vectors.iter().zip(&lanczos.vectors).take(2) {
                let diff = u.iter().zip(w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                assert!(diff < 1e-6, "vector mismatch {diff}");
            }
        }
    }

    #[test]
    fn m_orthonormal_vectors() {
        let spec = ProblemSpec::one_body(10.0, PotentialShape::Gaussian, 1.0).unwrap();
        let space = SplineSpace::new(2, uniform_mesh(10.0, 600).unwrap()).unwrap();
        let q = gauss_rule(5).unwrap();
        let ops = assemble_1d(&space, &spec, &q, &q);
        let r = solve_smallest(&ops.stiffness, &ops.mass, spec.gamma0, &SolverOptions::with_k(3)).unwrap();
        assert_eq!(r.method, SolveMethod::Lanczos);
        for i in 0..3 {
            let mu = ops.mass.mul(&r.vectors[i]);
            for j in 0..3 {
                let g = dot(&r.vectors[j], &mu);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((g - expect).abs() < 1e-10);
            }
        }
        assert!(r.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn errors_against_reference() {
        let e = eigen_error(&[-2.9148964], &[-2.9149186, -1.0]).unwrap();
        assert_eq!(e.len(), 1);
        assert!((e[0].error - 2.22e-5).abs() < 1e-7);
        assert!(eigen_error(&[1.0, 2.0], &[1.0, 2.0]).unwrap().iter().all(|r| r.error == 0.0));
        assert_eq!(
            eigen_error(&[1.0, 2.0], &[1.0]),
            Err(EigenError::ReferenceTooShort { computed: 2, reference: 1 })
        );
    }

    #[test]
    fn sampling() {
        let spec = ProblemSpec::one_body(20.0, PotentialShape::LorentzianCube, 5.0).unwrap();
        let space = SplineSpace::new(2, uniform_mesh(20.0, 200).unwrap()).unwrap();
        let q = gauss_rule(5).unwrap();
        let ops = assemble_1d(&space, &spec, &q, &q);
        let r = solve_smallest(&ops.stiffness, &ops.mass, spec.gamma0, &SolverOptions::with_k(2)).unwrap();

        let zeros = sample_eigenfunction(&space, &vec![0.0; space.dimension()], &[-3.0, 0.0, 5.5]).unwrap();
        assert!(zeros.iter().all(|&v| v == 0.0));
        let ends = sample_eigenfunction(&space, &r.vectors[0], &[-20.0, 20.0]).unwrap();
        assert!(ends.iter().all(|v| v.abs() < 1e-14));
        // L2 norm by composite Gauss quadrature on the mesh
        let fine = gauss_rule(6).unwrap();
        let bp = space.mesh().breakpoints();
        let mut norm2 = 0.0;
        for e in 0..space.num_elements() {
            let (pts, wts): (Vec<f64>, Vec<f64>) = fine.mapped(bp[e], bp[e + 1]).unzip();
            let vals = sample_eigenfunction(&space, &r.vectors[1], &pts).unwrap();
            norm2 += vals.iter().zip(&wts).map(|(v, w)| w * v * v).sum::<f64>();
        }
        assert!((norm2 - 1.0).abs() < 1e-12);
        assert!(matches!(
            sample_eigenfunction(&space, &r.vectors[0], &[21.0]),
            Err(EigenError::Spline(SplineError::OutsideDomain { .. }))
        ));
        assert!(matches!(
            sample_eigenfunction(&space, &[1.0], &[0.0]),
            Err(EigenError::CoefficientLength { .. })
        ));
    }
}
