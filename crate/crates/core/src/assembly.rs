//! Galerkin matrices of the bilinear forms: mass, diffusion, weighted mass
//! (shifted potential) and the p-th derivative jump penalty, plus their 2D
//! tensor-product compositions.

use crate::problem::{Dimension, ProblemSpec};
use crate::quadrature::QuadratureRule;
use crate::sparse::{BandedSym, CsrSym, SparseError};
use crate::spline::SplineSpace;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum AssemblyError {
    #[error("softness penalty is implemented for degrees 1 and 2 only, got {0}")]
    UnsupportedDegree(usize),
    #[error("softness parameter must be finite and non-negative, got {0}")]
    InvalidEta(f64),
    #[error("2D assembly needs a 2D problem")]
    NotTwoDimensional,
    #[error("x and y spaces must share the degree ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error("{dofs} unknowns exceed the configured cap of {cap}")]
    TooLarge { dofs: usize, cap: usize },
    #[error(transparent)]
    Sparse(#[from] SparseError),
}

/// Whether the two boundary-interpolatory functions are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dofs {
    /// Homogeneous Dirichlet: first and last functions removed.
    Dirichlet,
    /// Every untrimmed function.
    Full,
}

impl Dofs {
    fn size(self, space: &SplineSpace) -> usize {
        match self {
            Dofs::Dirichlet => space.dimension(),
            Dofs::Full => space.num_untrimmed(),
        }
    }

    #[inline]
    fn map(self, space: &SplineSpace, untrimmed: usize) -> Option<usize> {
        match self {
            Dofs::Dirichlet => space.dof(untrimmed),
            Dofs::Full => Some(untrimmed),
        }
    }
}

/// Softness parameter `eta` of `K - eta S`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SoftnessConfig {
    pub eta: f64,
}

impl SoftnessConfig {
    pub fn new(eta: f64) -> Result<Self, AssemblyError> {
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(AssemblyError::InvalidEta(eta));
        }
        Ok(Self { eta })
    }
}

/// Element loop for `∫ w(x) D^r φ_k D^r φ_l`, with `r = deriv`.
fn element_assembly(
    space: &SplineSpace,
    quad: &QuadratureRule,
    dofs: Dofs,
    deriv: usize,
    weight: impl Fn(f64) -> f64,
) -> BandedSym {
    let p = space.degree();
    let mut out = BandedSym::zeros(dofs.size(space), p);
    let bp = space.mesh().breakpoints();
    let mut local = vec![0.0; (p + 1) * (p + 1)];
    for e in 0..space.num_elements() {
        local.iter_mut().for_each(|v| *v = 0.0);
        for (x, w) in quad.mapped(bp[e], bp[e + 1]) {
            let d = space.element_derivatives(e, x, deriv);
            let vals = &d[deriv];
            let ww = w * weight(x);
            for a in 0..=p {
                let wa = ww * vals[a];
                for c in 0..=a {
                    local[a * (p + 1) + c] += wa * vals[c];
                }
            }
        }
        for a in 0..=p {
            let Some(i) = dofs.map(space, e + a) else { continue };
            for c in 0..=a {
                let Some(j) = dofs.map(space, e + c) else { continue };
                out.add(i, j, local[a * (p + 1) + c]);
            }
        }
    }
    out
}

pub fn mass_matrix(space: &SplineSpace, quad: &QuadratureRule, dofs: Dofs) -> BandedSym {
    element_assembly(space, quad, dofs, 0, |_| 1.0)
}

pub fn stiffness_matrix(space: &SplineSpace, quad: &QuadratureRule, kappa: f64, dofs: Dofs) -> BandedSym {
    element_assembly(space, quad, dofs, 1, |_| kappa)
}

pub fn potential_matrix(
    space: &SplineSpace,
    quad: &QuadratureRule,
    weight: impl Fn(f64) -> f64,
    dofs: Dofs,
) -> BandedSym {
    element_assembly(space, quad, dofs, 0, weight)
}

/// Jump penalty `Σ_F h_F^{2p-1} κ [∂ᵖw·n][∂ᵖv·n]` over interior faces, plus
/// twice the boundary-face terms when `p` is even.
///
/// `h_F` is the mean of the adjacent element sizes at interior faces and the
/// adjacent element size at boundary faces.
pub fn softness_matrix(space: &SplineSpace, kappa: f64, dofs: Dofs) -> Result<BandedSym, AssemblyError> {
    let p = space.degree();
    if !(1..=2).contains(&p) {
        return Err(AssemblyError::UnsupportedDegree(p));
    }
    let mesh = space.mesh();
    let n = mesh.num_elements();
    let mut out = BandedSym::zeros(dofs.size(space), p + 1);
    let expo = (2 * p - 1) as i32;
    let mut add_face = |face: usize, scale: f64| -> Result<(), AssemblyError> {
        let jumps = space
            .pth_derivative_jumps(face)
            .expect("face index within mesh");
        for (ai, &(ja, va)) in jumps.iter().enumerate() {
            let Some(i) = dofs.map(space, ja) else { continue };
            for &(jc, vc) in &jumps[..=ai] {
                let Some(j) = dofs.map(space, jc) else { continue };
                out.add(i, j, scale * va * vc);
            }
        }
        Ok(())
    };
    for face in 1..n {
        let hf = 0.5 * (mesh.element_size(face - 1) + mesh.element_size(face));
        add_face(face, kappa * hf.powi(expo))?;
    }
    if p % 2 == 0 {
        add_face(0, 2.0 * kappa * mesh.element_size(0).powi(expo))?;
        add_face(n, 2.0 * kappa * mesh.element_size(n - 1).powi(expo))?;
    }
    Ok(out)
}

/// `M_kl = ∫ φ_k φ_l` on the Dirichlet space.
pub fn assemble_mass(space: &SplineSpace, quad: &QuadratureRule) -> BandedSym {
    mass_matrix(space, quad, Dofs::Dirichlet)
}

/// `K_kl = κ ∫ φ_k' φ_l'` on the Dirichlet space.
pub fn assemble_stiffness(space: &SplineSpace, quad: &QuadratureRule, kappa: f64) -> BandedSym {
    stiffness_matrix(space, quad, kappa, Dofs::Dirichlet)
}

/// `Q_kl = ∫ w φ_k φ_l` on the Dirichlet space.
pub fn assemble_potential(space: &SplineSpace, quad: &QuadratureRule, w: impl Fn(f64) -> f64) -> BandedSym {
    potential_matrix(space, quad, w, Dofs::Dirichlet)
}

pub fn assemble_softness(space: &SplineSpace, kappa: f64) -> Result<BandedSym, AssemblyError> {
    softness_matrix(space, kappa, Dofs::Dirichlet)
}

/// `K - eta S`.
pub fn soft_stiffness(k: &BandedSym, s: &BandedSym, cfg: SoftnessConfig) -> Result<BandedSym, AssemblyError> {
    Ok(k.linear_combination(1.0, s, -cfg.eta)?)
}

/// Assembled 1D operators of the two-body problem.
#[derive(Debug, Clone)]
pub struct Operators1D {
    /// Diffusion plus shifted potential, `K + Q`.
    pub stiffness: BandedSym,
    pub mass: BandedSym,
    /// Jump penalty; `None` when the degree has no softness form.
    pub softness: Option<BandedSym>,
    pub degree: usize,
}

impl Operators1D {
    /// `K + Q - eta S`.
    pub fn soft(&self, cfg: SoftnessConfig) -> Result<BandedSym, AssemblyError> {
        match (&self.softness, cfg.eta) {
            (_, eta) if eta == 0.0 => Ok(self.stiffness.clone()),
            (Some(s), _) => soft_stiffness(&self.stiffness, s, cfg),
            (None, _) => Err(AssemblyError::UnsupportedDegree(self.degree)),
        }
    }
}

pub fn assemble_1d(
    space: &SplineSpace,
    spec: &ProblemSpec,
    quad: &QuadratureRule,
    quad_potential: &QuadratureRule,
) -> Operators1D {
    let kappa = spec.kappa().kx;
    let k = assemble_stiffness(space, quad, kappa);
    let q = assemble_potential(space, quad_potential, |x| spec.gamma_hat_1d(x));
    let stiffness = k.linear_combination(1.0, &q, 1.0).expect("same space");
    let softness = assemble_softness(space, kappa).ok();
    Operators1D {
        stiffness,
        mass: assemble_mass(space, quad),
        softness,
        degree: space.degree(),
    }
}

/// Tensor-product operators of the three-body problem. DOF `(i, j)` of the
/// x/y spaces maps to `i * Ny + j`.
#[derive(Debug, Clone)]
pub struct Operators2D {
    /// `Kx ⊗ My + Mx ⊗ Ky + Q`.
    pub stiffness: CsrSym,
    pub mass: CsrSym,
    /// `Sx ⊗ My + Mx ⊗ Sy`; `None` for degrees without a softness form.
    pub softness: Option<CsrSym>,
    /// The non-separable potential part `Q` alone.
    pub potential: CsrSym,
    pub degree: usize,
}

impl Operators2D {
    pub fn soft(&self, cfg: SoftnessConfig) -> Result<CsrSym, AssemblyError> {
        match (&self.softness, cfg.eta) {
            (_, eta) if eta == 0.0 => Ok(self.stiffness.clone()),
            (Some(s), eta) => Ok(self.stiffness.linear_combination(1.0, s, -eta)?),
            (None, _) => Err(AssemblyError::UnsupportedDegree(self.degree)),
        }
    }
}

/// Direct tensor-element quadrature of `∫∫ w(x, y) φ_i(x) ψ_j(y) φ_k(x) ψ_l(y)`
/// into the Kronecker pattern of the two 1D mass matrices.
pub fn potential_matrix_2d(
    space_x: &SplineSpace,
    space_y: &SplineSpace,
    quad: &QuadratureRule,
    pattern: &CsrSym,
    weight: impl Fn(f64, f64) -> f64,
) -> CsrSym {
    struct Tab {
        pts: Vec<Vec<f64>>,
        wts: Vec<Vec<f64>>,
        // vals[e][q][a]
        vals: Vec<Vec<Vec<f64>>>,
    }
    let tabulate = |s: &SplineSpace| {
        let bp = s.mesh().breakpoints();
        let mut t = Tab {
            pts: Vec::new(),
            wts: Vec::new(),
            vals: Vec::new(),
        };
        for e in 0..s.num_elements() {
            let (pts, wts): (Vec<f64>, Vec<f64>) = quad.mapped(bp[e], bp[e + 1]).unzip();
            let vals = pts.iter().map(|&x| s.element_derivatives(e, x, 0).swap_remove(0)).collect();
            t.pts.push(pts);
            t.wts.push(wts);
            t.vals.push(vals);
        }
        t
    };
    let tx = tabulate(space_x);
    let ty = tabulate(space_y);
    let p = space_x.degree();
    let nb = p + 1;
    let nq = quad.order();
    let ny = space_y.dimension();
    let mut out = pattern.zeros_like();
    let mut w = vec![0.0; nq * nq];
    let mut t = vec![0.0; nb * nb * nq];
    for ex in 0..space_x.num_elements() {
        for ey in 0..space_y.num_elements() {
            for qi in 0..nq {
                for qj in 0..nq {
                    w[qi * nq + qj] =
                        tx.wts[ex][qi] * ty.wts[ey][qj] * weight(tx.pts[ex][qi], ty.pts[ey][qj]);
                }
            }
            // t[a][c][qj] = Σ_qi φa φc w
            t.iter_mut().for_each(|v| *v = 0.0);
            for qi in 0..nq {
                let bx = &tx.vals[ex][qi];
                for a in 0..nb {
                    for c in 0..=a {
                        let f = bx[a] * bx[c];
                        let row = &mut t[(a * nb + c) * nq..(a * nb + c + 1) * nq];
                        for (r, &wv) in row.iter_mut().zip(&w[qi * nq..(qi + 1) * nq]) {
                            *r += f * wv;
                        }
                    }
                }
            }
            for a in 0..nb {
                let Some(ia) = space_x.dof(ex + a) else { continue };
                for c in 0..=a {
                    let Some(ic) = space_x.dof(ex + c) else { continue };
                    let trow = &t[(a * nb + c) * nq..(a * nb + c + 1) * nq];
                    for b in 0..nb {
                        let Some(jb) = space_y.dof(ey + b) else { continue };
                        for d in 0..nb {
                            let Some(jd) = space_y.dof(ey + d) else { continue };
                            let mut v = 0.0;
                            for (qj, &tv) in trow.iter().enumerate() {
                                let by = &ty.vals[ey][qj];
                                v += tv * (by[b] * by[d]);
                            }
                            let row = ia * ny + jb;
                            let col = ic * ny + jd;
                            out.add_entry(row, col, v);
                            if a != c {
                                out.add_entry(col, row, v);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Default cap on 2D unknowns.
pub const DEFAULT_MAX_DOFS_2D: usize = 200_000;

/// Assemble the three-body operators. Directional stiffness and softness
/// factors carry `kx`, `ky`; every potential and shift contribution lives in
/// the directly integrated `Q`.
pub fn assemble_2d(
    space_x: &SplineSpace,
    space_y: &SplineSpace,
    spec: &ProblemSpec,
    quad: &QuadratureRule,
    quad_potential: &QuadratureRule,
    max_dofs: usize,
) -> Result<Operators2D, AssemblyError> {
    if spec.dimension != Dimension::Two {
        return Err(AssemblyError::NotTwoDimensional);
    }
    if space_x.degree() != space_y.degree() {
        return Err(AssemblyError::DegreeMismatch(space_x.degree(), space_y.degree()));
    }
    let dofs = space_x.dimension().saturating_mul(space_y.dimension());
    if dofs > max_dofs {
        return Err(AssemblyError::TooLarge { dofs, cap: max_dofs });
    }
    let kappa = spec.kappa();
    let mx = assemble_mass(space_x, quad);
    let my = assemble_mass(space_y, quad);
    let kx = assemble_stiffness(space_x, quad, kappa.kx);
    let ky = assemble_stiffness(space_y, quad, kappa.ky);
    let mass = CsrSym::kron(&mx, &my);
    let laplace = CsrSym::kron(&kx, &my).linear_combination(1.0, &CsrSym::kron(&mx, &ky), 1.0)?;
    let potential = potential_matrix_2d(space_x, space_y, quad_potential, &mass, |x, y| {
        spec.gamma_hat_2d(x, y)
    });
    let stiffness = laplace.linear_combination(1.0, &potential, 1.0)?;
    let softness = match (assemble_softness(space_x, kappa.kx), assemble_softness(space_y, kappa.ky)) {
        (Ok(sx), Ok(sy)) => Some(CsrSym::kron(&sx, &my).linear_combination(1.0, &CsrSym::kron(&mx, &sy), 1.0)?),
        _ => None,
    };
    Ok(Operators2D {
        stiffness,
        mass,
        softness,
        potential,
        degree: space_x.degree(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{graded_mesh, uniform_mesh, GradedMeshSpec};
    use crate::problem::PotentialShape;
    use crate::quadrature::gauss_rule;
    use crate::sparse::SymMatrix;
    use rand::{Rng, SeedableRng};

    fn uniform_space(p: usize, hw: f64, n: usize) -> SplineSpace {
        SplineSpace::new(p, uniform_mesh(hw, n).unwrap()).unwrap()
    }

    /// Closed-form uniform quadratic B-spline on support [0, 3h].
    fn quadratic_bspline(x: f64, h: f64) -> f64 {
        let t = x / h;
        if (0.0..1.0).contains(&t) {
            0.5 * t * t
        } else if (1.0..2.0).contains(&t) {
            0.5 * (-2.0 * t * t + 6.0 * t - 3.0)
        } else if (2.0..=3.0).contains(&t) {
            0.5 * (3.0 - t) * (3.0 - t)
        } else {
            0.0
        }
    }

    #[test]
    fn linear_mass_and_stiffness_stencils() {
        let s = uniform_space(1, 1.0, 10);
        let h = 0.2;
        let q = gauss_rule(4).unwrap();
        let m = assemble_mass(&s, &q);
        let k = assemble_stiffness(&s, &q, 1.0);
        let i = 4;
        for (off, mv, kv) in [(-1i32, 1.0, -1.0), (0, 4.0, 2.0), (1, 1.0, -1.0)] {
            let j = (i as i32 + off) as usize;
            assert!((m.get(i, j) - h / 6.0 * mv).abs() < 1e-15);
            assert!((k.get(i, j) - kv / h).abs() < 1e-12);
        }
        let half = assemble_stiffness(&s, &q, 0.5);
        assert_eq!(half, k.scaled(0.5));
    }

    #[test]
    fn quadratic_mass_diagonal() {
        let h = 0.25;
        let s = uniform_space(2, 2.0, 16);
        let m = assemble_mass(&s, &gauss_rule(5).unwrap());
        // oracle: fine composite quadrature of the closed-form B-spline
        let fine = gauss_rule(10).unwrap();
        let oracle: f64 = (0..3).map(|k| fine.integrate(k as f64 * h, (k + 1) as f64 * h, |x| quadratic_bspline(x, h).powi(2))).sum();
        assert!((oracle - 11.0 / 20.0 * h).abs() < 1e-14);
        assert!((m.get(6, 6) - oracle).abs() < 1e-14);
    }

    #[test]
    fn partition_of_unity_row_sums() {
        for p in 1..=5 {
            let s = SplineSpace::new(
                p,
                graded_mesh(GradedMeshSpec { half_width: 3.0, n: 10, growth: 0.3 }).unwrap(),
            )
            .unwrap();
            let q = gauss_rule(p + 3).unwrap();
            let m = mass_matrix(&s, &q, Dofs::Full);
            let ones = vec![1.0; s.num_untrimmed()];
            let row_sums = m.mul(&ones);
            assert!((row_sums.iter().sum::<f64>() - 6.0).abs() < 1e-12);
            let k = stiffness_matrix(&s, &q, 1.0, Dofs::Full);
            assert!(k.mul(&ones).iter().all(|v| v.abs() < 1e-10));
            // row sums of M are the integrals of each basis function
            for (j, r) in row_sums.iter().enumerate() {
                let integral: f64 = (0..s.num_elements())
                    .map(|e| {
                        let bp = s.mesh().breakpoints();
                        q.mapped(bp[e], bp[e + 1])
                            .map(|(x, w)| {
                                let d = s.element_derivatives(e, x, 0);
                                if j >= e && j <= e + p { w * d[0][j - e] } else { 0.0 }
                            })
                            .sum::<f64>()
                    })
                    .sum();
                assert!((r - integral).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn potential_matrix_linearity() {
        let s = uniform_space(2, 2.0, 12);
        let q = gauss_rule(5).unwrap();
        let m = assemble_mass(&s, &q);
        assert_eq!(assemble_potential(&s, &q, |_| 1.0), m);
        let c = 3.7;
        let qc = assemble_potential(&s, &q, |_| c);
        for i in 0..s.dimension() {
            for j in 0..s.dimension() {
                assert!((qc.get(i, j) - c * m.get(i, j)).abs() < 1e-14);
            }
        }
        let spec = ProblemSpec::one_body(2.0, PotentialShape::LorentzianCube, 5.0).unwrap();
        assert!(assemble_potential(&s, &q, |x| spec.gamma_hat_1d(x)).cholesky().is_ok());
    }

    fn dense_softness_oracle(s: &SplineSpace, kappa: f64) -> Vec<Vec<f64>> {
        let n = s.num_untrimmed();
        let p = s.degree();
        let ne = s.num_elements();
        let mesh = s.mesh();
        let mut out = vec![vec![0.0; n]; n];
        let mut face = |f: usize, scale: f64| {
            let mut jv = vec![0.0; n];
            for (j, v) in s.pth_derivative_jumps(f).unwrap() {
                jv[j] += v;
            }
            for a in 0..n {
                for b in 0..n {
                    out[a][b] += scale * jv[a] * jv[b];
                }
            }
        };
        let ex = (2 * p - 1) as i32;
        for f in 1..ne {
            face(f, kappa * (0.5 * (mesh.element_size(f - 1) + mesh.element_size(f))).powi(ex));
        }
        if p == 2 {
            face(0, 2.0 * kappa * mesh.element_size(0).powi(ex));
            face(ne, 2.0 * kappa * mesh.element_size(ne - 1).powi(ex));
        }
        out
    }

    #[test]
    fn linear_softness_stencil() {
        for (n, kappa) in [(10usize, 1.0), (20, 0.5), (40, 1.0)] {
            let s = uniform_space(1, 1.0, n);
            let h = 2.0 / n as f64;
            let sm = assemble_softness(&s, kappa).unwrap();
            let i = 5;
            let stencil = [1.0, -4.0, 6.0, -4.0, 1.0];
            for (k, c) in stencil.iter().enumerate() {
                let j = i + k - 2;
                assert!((sm.get(i, j) - kappa / h * c).abs() < 1e-12 * kappa / h);
            }
        }
        // halving h doubles the stencil
        let a = assemble_softness(&uniform_space(1, 1.0, 10), 1.0).unwrap();
        let b = assemble_softness(&uniform_space(1, 1.0, 20), 1.0).unwrap();
        assert!((b.get(8, 8) - 2.0 * a.get(4, 4)).abs() < 1e-12);
        assert!((b.get(8, 9) - 2.0 * a.get(4, 5)).abs() < 1e-12);
    }

    #[test]
    fn softness_matches_dense_oracle() {
        let mesh = graded_mesh(GradedMeshSpec { half_width: 2.0, n: 8, growth: 0.4 }).unwrap();
        for p in 1..=2 {
            let s = SplineSpace::new(p, mesh.clone()).unwrap();
            let full = softness_matrix(&s, 0.7, Dofs::Full).unwrap();
            let oracle = dense_softness_oracle(&s, 0.7);
            for (i, row) in oracle.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    assert!((full.get(i, j) - v).abs() < 1e-10 * (1.0 + v.abs()));
                }
            }
            let trimmed = assemble_softness(&s, 0.7).unwrap();
            for i in 0..s.dimension() {
                for j in 0..s.dimension() {
                    assert_eq!(trimmed.get(i, j), full.get(i + 1, j + 1));
                }
            }
            let half = assemble_softness(&s, 0.35).unwrap();
            assert_eq!(half, trimmed.scaled(0.5));
        }
    }

    #[test]
    fn softness_constants_and_psd() {
        let s1 = uniform_space(1, 1.0, 12);
        let full = softness_matrix(&s1, 1.0, Dofs::Full).unwrap();
        assert!(full.mul(&vec![1.0; s1.num_untrimmed()]).iter().all(|v| v.abs() < 1e-10));

        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for p in 1..=2 {
            let s = SplineSpace::new(
                p,
                graded_mesh(GradedMeshSpec { half_width: 4.0, n: 20, growth: 0.2 }).unwrap(),
            )
            .unwrap();
            let sm = assemble_softness(&s, 0.5).unwrap();
            for _ in 0..100 {
                let v: Vec<f64> = (0..s.dimension()).map(|_| rng.random_range(-1.0..1.0)).collect();
                let sv = sm.mul(&v);
                let quad: f64 = v.iter().zip(&sv).map(|(a, b)| a * b).sum();
                let nrm: f64 = v.iter().map(|a| a * a).sum();
                assert!(quad >= -1e-12 * nrm);
            }
        }
        assert_eq!(
            assemble_softness(&uniform_space(3, 1.0, 4), 1.0),
            Err(AssemblyError::UnsupportedDegree(3))
        );
    }

    #[test]
    fn soft_stiffness_identity_and_mismatch() {
        let s = uniform_space(1, 1.0, 6);
        let q = gauss_rule(4).unwrap();
        let k = assemble_stiffness(&s, &q, 1.0);
        let sm = assemble_softness(&s, 1.0).unwrap();
        let same = soft_stiffness(&k, &sm, SoftnessConfig::new(0.0).unwrap()).unwrap();
        for i in 0..s.dimension() {
            for j in 0..s.dimension() {
                assert_eq!(same.get(i, j), k.get(i, j));
            }
        }
        let other = assemble_stiffness(&uniform_space(1, 1.0, 7), &q, 1.0);
        assert!(soft_stiffness(&other, &sm, SoftnessConfig::default()).is_err());
        assert!(SoftnessConfig::new(-1.0).is_err());
        assert!(SoftnessConfig::new(f64::NAN).is_err());
    }

    #[test]
    fn constant_potential_2d_is_scaled_mass() {
        let sx = uniform_space(2, 3.0, 6);
        let sy = SplineSpace::new(2, graded_mesh(GradedMeshSpec { half_width: 3.0, n: 6, growth: 0.5 }).unwrap()).unwrap();
        let q = gauss_rule(5).unwrap();
        let mass = CsrSym::kron(&assemble_mass(&sx, &q), &assemble_mass(&sy, &q));
        let c = 2.5;
        let qc = potential_matrix_2d(&sx, &sy, &q, &mass, |_, _| c);
        for (i, j, v) in mass.coordinates() {
            assert!((qc.get(i, j) - c * v).abs() < 1e-12);
        }
        assert_eq!(qc.asymmetry(), 0.0);
    }

    #[test]
    fn kronecker_laplacian_matches_direct_2d_assembly() {
        let p = 1;
        let sx = uniform_space(p, 1.0, 4);
        let sy = uniform_space(p, 1.0, 4);
        let q = gauss_rule(4).unwrap();
        let (kx, ky) = (0.3, 0.7);
        let composed = CsrSym::kron(&assemble_stiffness(&sx, &q, kx), &assemble_mass(&sy, &q))
            .linear_combination(1.0, &CsrSym::kron(&assemble_mass(&sx, &q), &assemble_stiffness(&sy, &q, ky)), 1.0)
            .unwrap();
        // direct tensor-element assembly of ∫ kx ∂xu ∂xv + ky ∂yu ∂yv
        let ny = sy.dimension();
        let n = sx.dimension() * ny;
        let mut direct = vec![vec![0.0; n]; n];
        let (bx, by) = (sx.mesh().breakpoints(), sy.mesh().breakpoints());
        for ex in 0..4 {
            for ey in 0..4 {
                for (x, wx) in q.mapped(bx[ex], bx[ex + 1]) {
                    for (y, wy) in q.mapped(by[ey], by[ey + 1]) {
                        let dx = sx.element_derivatives(ex, x, 1);
                        let dy = sy.element_derivatives(ey, y, 1);
                        for a in 0..=p {
                            for b in 0..=p {
                                let (Some(ia), Some(jb)) = (sx.dof(ex + a), sy.dof(ey + b)) else { continue };
                                for c in 0..=p {
                                    for d in 0..=p {
                                        let (Some(ic), Some(jd)) = (sx.dof(ex + c), sy.dof(ey + d)) else { continue };
                                        let v = kx * dx[1][a] * dy[0][b] * dx[1][c] * dy[0][d]
                                            + ky * dx[0][a] * dy[1][b] * dx[0][c] * dy[1][d];
                                        direct[ia * ny + jb][ic * ny + jd] += wx * wy * v;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for (i, row) in direct.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert!((composed.get(i, j) - v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn operators_2d_structure() {
        let spec = ProblemSpec::three_body(20.0, PotentialShape::Gaussian, 0.344595351, 20.0).unwrap();
        let k = spec.kappa();
        assert!((k.kx - 41.0 / 84.0).abs() < 1e-15 && (k.ky - 1.0 / 21.0).abs() < 1e-15);
        let s = uniform_space(2, 20.0, 8);
        let q = gauss_rule(5).unwrap();
        let ops = assemble_2d(&s, &s, &spec, &q, &q, 10_000).unwrap();
        assert_eq!(ops.stiffness.asymmetry(), 0.0);
        assert_eq!(ops.mass.asymmetry(), 0.0);
        assert_eq!(ops.softness.as_ref().unwrap().asymmetry(), 0.0);
        // directional factors carry kx and ky
        let m1 = assemble_mass(&s, &q);
        let expect = CsrSym::kron(&assemble_softness(&s, k.kx).unwrap(), &m1)
            .linear_combination(1.0, &CsrSym::kron(&m1, &assemble_softness(&s, k.ky).unwrap()), 1.0)
            .unwrap();
        assert_eq!(ops.softness.as_ref().unwrap(), &expect);
        assert!(matches!(
            assemble_2d(&s, &s, &spec, &q, &q, 10),
            Err(AssemblyError::TooLarge { dofs: 64, cap: 10 })
        ));
        let one = ProblemSpec::one_body(20.0, PotentialShape::Gaussian, 1.0).unwrap();
        assert_eq!(assemble_2d(&s, &s, &one, &q, &q, 10_000).unwrap_err(), AssemblyError::NotTwoDimensional);
        assert!(matches!(
            assemble_2d(&s, &uniform_space(1, 20.0, 8), &spec, &q, &q, 10_000),
            Err(AssemblyError::DegreeMismatch(2, 1))
        ));
    }
}
