//! Open-knot B-spline spaces of maximal continuity.
//!
//! A [`SplineSpace`] of degree `p` on a mesh with `n` elements has `n + p`
//! untrimmed basis functions. The first and last of them are the only ones
//! that do not vanish at the domain endpoints; dropping them yields the
//! `n + p - 2` functions that satisfy homogeneous Dirichlet conditions.
//! Untrimmed index `j` maps to degree of freedom `j - 1`.

use crate::mesh::Mesh1D;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SplineError {
    #[error("spline degree must be at least 1, got {0}")]
    InvalidDegree(usize),
    #[error("point {x} lies outside the domain [{start}, {end}]")]
    OutsideDomain { x: f64, start: f64, end: f64 },
    #[error("derivative order {order} exceeds the degree {degree}")]
    DerivativeTooHigh { order: usize, degree: usize },
    #[error("face index {face} is invalid for a mesh with {elements} elements")]
    InvalidFace { face: usize, elements: usize },
}

/// Which one-sided limit to take when a point sits on a knot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Side {
    Left,
    #[default]
    Right,
}

#[derive(Debug, Clone)]
pub struct SplineSpace {
    degree: usize,
    mesh: Mesh1D,
    knots: Vec<f64>,
}

impl SplineSpace {
    /// Build the open knot vector over `mesh` with simple interior knots.
    pub fn new(degree: usize, mesh: Mesh1D) -> Result<Self, SplineError> {
        if degree < 1 {
            return Err(SplineError::InvalidDegree(degree));
        }
        let bp = mesh.breakpoints();
        let mut knots = Vec::with_capacity(bp.len() + 2 * degree);
        knots.extend(std::iter::repeat_n(bp[0], degree));
        knots.extend_from_slice(bp);
        knots.extend(std::iter::repeat_n(bp[bp.len() - 1], degree));
        Ok(Self {
            degree,
            mesh,
            knots,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn num_elements(&self) -> usize {
        self.mesh.num_elements()
    }

    /// Number of basis functions before Dirichlet trimming.
    pub fn num_untrimmed(&self) -> usize {
        self.num_elements() + self.degree
    }

    /// Number of degrees of freedom after dropping the two boundary functions.
    pub fn dimension(&self) -> usize {
        self.num_untrimmed() - 2
    }

    /// Degree of freedom of an untrimmed basis function, `None` for the two
    /// boundary-interpolatory ones.
    #[inline]
    pub fn dof(&self, untrimmed: usize) -> Option<usize> {
        (untrimmed >= 1 && untrimmed + 1 < self.num_untrimmed()).then(|| untrimmed - 1)
    }

    /// Element holding `x` for the requested one-sided limit.
    pub fn element_of(&self, x: f64, side: Side) -> Result<usize, SplineError> {
        let bp = self.mesh.breakpoints();
        let e = self.mesh.locate(x).ok_or(SplineError::OutsideDomain {
            x,
            start: self.mesh.start(),
            end: self.mesh.end(),
        })?;
        Ok(match side {
            Side::Right => e,
            Side::Left if e > 0 && x == bp[e] => e - 1,
            Side::Left => e,
        })
    }

    /// Derivatives `0..=nders` of the `p + 1` functions supported on element
    /// `e`, evaluated at `x` using the polynomial piece of that element.
    /// `out[k][a]` is the k-th derivative of untrimmed function `e + a`.
    pub fn element_derivatives(&self, e: usize, x: f64, nders: usize) -> Vec<Vec<f64>> {
        let p = self.degree;
        let span = e + p;
        let u = &self.knots;
        let mut ndu = vec![vec![0.0; p + 1]; p + 1];
        let mut left = vec![0.0; p + 1];
        let mut right = vec![0.0; p + 1];
        ndu[0][0] = 1.0;
        for j in 1..=p {
            left[j] = x - u[span + 1 - j];
            right[j] = u[span + j] - x;
            let mut saved = 0.0;
            for r in 0..j {
                ndu[j][r] = right[r + 1] + left[j - r];
                let temp = ndu[r][j - 1] / ndu[j][r];
                ndu[r][j] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            ndu[j][j] = saved;
        }

        let mut ders = vec![vec![0.0; p + 1]; nders + 1];
        for (j, d) in ders[0].iter_mut().enumerate() {
            *d = ndu[j][p];
        }
        let top = nders.min(p);
        let mut a = [vec![0.0; p + 1], vec![0.0; p + 1]];
        for r in 0..=p {
            let (mut s1, mut s2) = (0usize, 1usize);
            a[0][0] = 1.0;
            for k in 1..=top {
                let mut d = 0.0;
                let rk = r as isize - k as isize;
                let pk = p - k;
                if r >= k {
                    let rk = rk as usize;
                    a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                    d = a[s2][0] * ndu[rk][pk];
                }
                let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
                let j2 = if r as isize - 1 <= pk as isize { k - 1 } else { p - r };
                for j in j1..=j2 {
                    let idx = (rk + j as isize) as usize;
                    a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][idx];
                    d += a[s2][j] * ndu[idx][pk];
                }
                if r <= pk {
                    a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                    d += a[s2][k] * ndu[r][pk];
                }
                ders[k][r] = d;
                std::mem::swap(&mut s1, &mut s2);
            }
        }
        let mut factor = p as f64;
        for (k, row) in ders.iter_mut().enumerate().take(top + 1).skip(1) {
            for v in row.iter_mut() {
                *v *= factor;
            }
            factor *= (p - k) as f64;
        }
        ders
    }

    /// The r-th derivative of every untrimmed basis function supported at `x`,
    /// as `(untrimmed index, value)` pairs.
    pub fn eval_basis(&self, x: f64, r: usize, side: Side) -> Result<Vec<(usize, f64)>, SplineError> {
        if r > self.degree {
            return Err(SplineError::DerivativeTooHigh {
                order: r,
                degree: self.degree,
            });
        }
        let e = self.element_of(x, side)?;
        let ders = self.element_derivatives(e, x, r);
        Ok(ders[r].iter().enumerate().map(|(a, &v)| (e + a, v)).collect())
    }

    /// Jump of the p-th derivative across a face, weighted by outward normals.
    ///
    /// For an interior breakpoint the value is `v⁽ᵖ⁾|left - v⁽ᵖ⁾|right`; at
    /// the two boundary breakpoints it is the one-sided trace times the
    /// outward normal (`-1` on the left end, `+1` on the right end).
    /// Entries are indexed by untrimmed basis function.
    pub fn pth_derivative_jumps(&self, face: usize) -> Result<Vec<(usize, f64)>, SplineError> {
        let n = self.num_elements();
        if face > n {
            return Err(SplineError::InvalidFace { face, elements: n });
        }
        let p = self.degree;
        let bp = self.mesh.breakpoints();
        let x = bp[face];
        let mut out: Vec<(usize, f64)> = Vec::with_capacity(p + 2);
        if face > 0 {
            let e = face - 1;
            let d = self.element_derivatives(e, x, p);
            out.extend(d[p].iter().enumerate().map(|(a, &v)| (e + a, v)));
        }
        if face < n {
            let e = face;
            let d = self.element_derivatives(e, x, p);
            for (a, &v) in d[p].iter().enumerate() {
                let j = e + a;
                match out.iter_mut().find(|(i, _)| *i == j) {
                    Some(entry) => entry.1 -= v,
                    None => out.push((j, -v)),
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{graded_mesh, uniform_mesh, GradedMeshSpec};
    use proptest::prelude::*;

    fn space(p: usize, bp: &[f64]) -> SplineSpace {
        SplineSpace::new(p, Mesh1D::new(bp.to_vec()).unwrap()).unwrap()
    }

    /// Direct Cox-de Boor recursion, used as an independent check.
    fn cox_de_boor(knots: &[f64], j: usize, p: usize, x: f64) -> f64 {
        if p == 0 {
            return if knots[j] <= x && x < knots[j + 1] { 1.0 } else { 0.0 };
        }
        let mut v = 0.0;
        let d1 = knots[j + p] - knots[j];
        if d1 > 0.0 {
            v += (x - knots[j]) / d1 * cox_de_boor(knots, j, p - 1, x);
        }
        let d2 = knots[j + p + 1] - knots[j + 1];
        if d2 > 0.0 {
            v += (knots[j + p + 1] - x) / d2 * cox_de_boor(knots, j + 1, p - 1, x);
        }
        v
    }

    #[test]
    fn knot_vectors_and_counts() {
        let s = space(1, &[0.0, 0.5, 1.0]);
        assert_eq!(s.knots(), &[0.0, 0.0, 0.5, 1.0, 1.0]);
        assert_eq!(s.num_untrimmed(), 3);
        assert_eq!(s.dimension(), 1);

        let s = space(2, &[-1.0, 0.0, 1.0]);
        assert_eq!(s.knots(), &[-1.0, -1.0, -1.0, 0.0, 1.0, 1.0, 1.0]);
        assert_eq!(s.num_untrimmed(), 4);
        assert_eq!(s.dimension(), 2);

        let s = SplineSpace::new(7, uniform_mesh(20.0, 5000).unwrap()).unwrap();
        assert_eq!(s.num_untrimmed(), 5007);
        assert_eq!(s.dimension(), 5005);
    }

    #[test]
    fn degree_zero_rejected() {
        let m = uniform_mesh(1.0, 2).unwrap();
        assert_eq!(SplineSpace::new(0, m).unwrap_err(), SplineError::InvalidDegree(0));
    }

    #[test]
    fn eval_errors() {
        let s = space(2, &[-1.0, 0.0, 1.0]);
        assert!(matches!(s.eval_basis(1.5, 0, Side::Right), Err(SplineError::OutsideDomain { .. })));
        assert_eq!(
            s.eval_basis(0.0, 3, Side::Right),
            Err(SplineError::DerivativeTooHigh { order: 3, degree: 2 })
        );
        assert_eq!(
            s.pth_derivative_jumps(3),
            Err(SplineError::InvalidFace { face: 3, elements: 2 })
        );
    }

    #[test]
    fn hats_are_nodal() {
        let s = SplineSpace::new(1, uniform_mesh(1.0, 4).unwrap()).unwrap();
        for (i, &x) in s.mesh().breakpoints().iter().enumerate() {
            for (j, v) in s.eval_basis(x, 0, Side::Right).unwrap() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((v - expect).abs() < 1e-15, "node {i} fn {j}: {v}");
            }
        }
    }

    #[test]
    fn quadratic_at_uniform_interior_knot() {
        let s = SplineSpace::new(2, uniform_mesh(3.0, 6).unwrap()).unwrap();
        // interior knot away from the boundary-affected functions
        let x = s.mesh().breakpoints()[3];
        let vals: Vec<f64> = s
            .eval_basis(x, 0, Side::Right)
            .unwrap()
            .into_iter()
            .map(|(_, v)| v)
            .filter(|v| v.abs() > 1e-15)
            .collect();
        assert_eq!(vals.len(), 2);
        for v in vals {
            assert!((v - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn matches_cox_de_boor_recursion() {
        let mesh = graded_mesh(GradedMeshSpec {
            half_width: 3.0,
            n: 8,
            growth: 0.4,
        })
        .unwrap();
        for p in 1..=5 {
            let s = SplineSpace::new(p, mesh.clone()).unwrap();
            for k in 0..97 {
                let x = -3.0 + 6.0 * (k as f64 + 0.37) / 97.0;
                for (j, v) in s.eval_basis(x, 0, Side::Right).unwrap() {
                    let reference = cox_de_boor(s.knots(), j, p, x);
                    assert!((v - reference).abs() < 1e-13, "p={p} j={j} x={x}");
                }
            }
        }
    }

    #[test]
    fn quadratic_continuity_at_knots() {
        let mesh = graded_mesh(GradedMeshSpec {
            half_width: 2.0,
            n: 6,
            growth: 0.5,
        })
        .unwrap();
        let s = SplineSpace::new(2, mesh).unwrap();
        let bp = s.mesh().breakpoints().to_vec();
        let mut second_jump = 0.0f64;
        for &x in &bp[1..bp.len() - 1] {
            for r in 0..=2 {
                let l = s.eval_basis(x, r, Side::Left).unwrap();
                let rt = s.eval_basis(x, r, Side::Right).unwrap();
                let mut dense = vec![0.0; s.num_untrimmed()];
                for (j, v) in l {
                    dense[j] += v;
                }
                for (j, v) in rt {
                    dense[j] -= v;
                }
                let diff = dense.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if r < 2 {
                    assert!(diff < 1e-12, "r={r} x={x} diff={diff}");
                } else {
                    second_jump = second_jump.max(diff);
                }
            }
        }
        assert!(second_jump > 1e-3);
    }

    #[test]
    fn linear_jumps() {
        let h = 0.25;
        let s = SplineSpace::new(1, uniform_mesh(1.0, 8).unwrap()).unwrap();
        let i = 3;
        let own: f64 = s.pth_derivative_jumps(i).unwrap().into_iter().find(|(j, _)| *j == i).unwrap().1;
        assert!((own - 2.0 / h).abs() < 1e-12);
        let next: f64 = s.pth_derivative_jumps(i + 1).unwrap().into_iter().find(|(j, _)| *j == i).unwrap().1;
        assert!((next + 1.0 / h).abs() < 1e-12);
        // no support at face i + 2
        assert!(s.pth_derivative_jumps(i + 2).unwrap().iter().all(|&(j, v)| j != i || v == 0.0));
    }

    #[test]
    fn jumps_match_one_sided_derivatives() {
        let mesh = graded_mesh(GradedMeshSpec {
            half_width: 2.0,
            n: 6,
            growth: 0.5,
        })
        .unwrap();
        for p in 1..=3 {
            let s = SplineSpace::new(p, mesh.clone()).unwrap();
            let bp = s.mesh().breakpoints().to_vec();
            let n = bp.len() - 1;
            for face in 0..=n {
                let mut expect = vec![0.0; s.num_untrimmed()];
                if face > 0 {
                    for (j, v) in s.eval_basis(bp[face], p, Side::Left).unwrap() {
                        expect[j] += v;
                    }
                }
                if face < n {
                    for (j, v) in s.eval_basis(bp[face], p, Side::Right).unwrap() {
                        expect[j] -= v;
                    }
                }
                let mut got = vec![0.0; s.num_untrimmed()];
                let jumps = s.pth_derivative_jumps(face).unwrap();
                assert!(jumps.len() <= 2 * p + 1);
                for (j, v) in jumps {
                    got[j] += v;
                    // support of function j is elements j-p..=j
                    let lo = j.saturating_sub(p);
                    assert!(face >= lo && face <= j + 1, "face {face} outside support of {j}");
                }
                for (a, b) in got.iter().zip(&expect) {
                    assert!((a - b).abs() < 1e-10 * (1.0 + b.abs()));
                }
            }
        }
    }

    #[test]
    fn trimmed_functions_vanish_at_ends() {
        for p in 1..=7 {
            let s = SplineSpace::new(p, uniform_mesh(2.0, 9).unwrap()).unwrap();
            for x in [-2.0, 2.0] {
                for (j, v) in s.eval_basis(x, 0, Side::Right).unwrap() {
                    if s.dof(j).is_some() {
                        assert!(v.abs() < 1e-15, "p={p} j={j} x={x} v={v}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn partition_of_unity(p in 1usize..=7, n in 1usize..40, g in 0.0f64..1.0, xs in prop::collection::vec(0.0f64..=1.0, 1000)) {
            let n = 2 * n;
            let s = SplineSpace::new(p, graded_mesh(GradedMeshSpec { half_width: 5.0, n, growth: g }).unwrap()).unwrap();
            for t in xs {
                let x = -5.0 + 10.0 * t;
                let sum: f64 = s.eval_basis(x, 0, Side::Right).unwrap().iter().map(|(_, v)| v).sum();
                prop_assert!((sum - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn first_derivative_matches_finite_differences(p in 1usize..=6, t in 0.01f64..0.99, e in 0usize..10) {
            let s = SplineSpace::new(p, uniform_mesh(2.0, 10).unwrap()).unwrap();
            let bp = s.mesh().breakpoints();
            let x = bp[e] + t * (bp[e + 1] - bp[e]);
            let step = 1e-6;
            let d1 = s.element_derivatives(e, x, 1);
            let plus = s.element_derivatives(e, x + step, 0);
            let minus = s.element_derivatives(e, x - step, 0);
            for a in 0..=p {
                let fd = (plus[0][a] - minus[0][a]) / (2.0 * step);
                prop_assert!((fd - d1[1][a]).abs() < 1e-6);
            }
        }
    }
}
