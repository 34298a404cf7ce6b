//! Symmetric sparse storage: lower-banded for 1D operators, row-compressed
//! for 2D Kronecker compositions, and a banded Cholesky factorization.

use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SparseError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("non-positive pivot {value:e} at row {row}")]
    NotPositiveDefinite { row: usize, value: f64 },
}

/// Operations the eigensolver needs from a symmetric matrix.
pub trait SymMatrix: Sync {
    fn dim(&self) -> usize;

    /// `y = A x`
    fn matvec(&self, x: &[f64], y: &mut [f64]);

    fn to_dense(&self) -> DMatrix<f64>;

    fn to_banded(&self) -> BandedSym;

    /// Maximum absolute row sum.
    fn norm_inf(&self) -> f64;

    /// `(row, col, value)` over every stored nonzero of the full matrix.
    fn coordinates(&self) -> Vec<(usize, usize, f64)>;

    fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.matvec(x, &mut y);
        y
    }
}

/// Symmetric matrix with `bandwidth` sub-diagonals; only the lower band is
/// stored, so symmetry holds structurally.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSym {
    n: usize,
    bw: usize,
    // row i holds columns i-bw..=i at offsets 0..=bw
    data: Vec<f64>,
}

impl BandedSym {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        Self {
            n,
            bw: bandwidth,
            data: vec![0.0; n * (bandwidth + 1)],
        }
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.bw);
        i * (self.bw + 1) + self.bw + j - i
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bw {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    /// Adds `v` to entry `(i, j)` (and thereby `(j, i)`).
    ///
    /// Panics if the entry lies outside the band.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        assert!(i - j <= self.bw, "entry ({i}, {j}) outside bandwidth {}", self.bw);
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            n: self.n,
            bw: self.bw,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    /// `a * self + b * other`, with the wider of the two bandwidths.
    pub fn linear_combination(&self, a: f64, other: &BandedSym, b: f64) -> Result<Self, SparseError> {
        if self.n != other.n {
            return Err(SparseError::DimensionMismatch(self.n, other.n));
        }
        let bw = self.bw.max(other.bw);
        let mut out = Self::zeros(self.n, bw);
        for i in 0..self.n {
            for j in i.saturating_sub(bw)..=i {
                let k = out.idx(i, j);
                out.data[k] = a * self.get(i, j) + b * other.get(i, j);
            }
        }
        Ok(out)
    }

    pub fn cholesky(&self) -> Result<BandedCholesky, SparseError> {
        BandedCholesky::factor(self)
    }
}

impl SymMatrix for BandedSym {
    fn dim(&self) -> usize {
        self.n
    }

    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let bw = self.bw;
        y.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..self.n {
            let row = &self.data[i * (bw + 1)..(i + 1) * (bw + 1)];
            let lo = i.saturating_sub(bw);
            let mut acc = row[bw] * x[i];
            for j in lo..i {
                let a = row[bw + j - i];
                acc += a * x[j];
                y[j] += a * x[i];
            }
            y[i] += acc;
        }
    }

    fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    fn to_banded(&self) -> BandedSym {
        self.clone()
    }

    fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.bw);
                let hi = (i + self.bw).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j).abs()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    fn coordinates(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            let lo = i.saturating_sub(self.bw);
            let hi = (i + self.bw).min(self.n.saturating_sub(1));
            for j in lo..=hi {
                let v = self.get(i, j);
                if v != 0.0 {
                    out.push((i, j, v));
                }
            }
        }
        out
    }
}

/// Lower factor `L` of `A = L Lᵀ`, same band layout as [`BandedSym`].
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    l: BandedSym,
}

impl BandedCholesky {
    pub fn factor(a: &BandedSym) -> Result<Self, SparseError> {
        let n = a.n;
        let bw = a.bw;
        let w = bw + 1;
        let mut l = a.clone();
        for i in 0..n {
            let lo_i = i.saturating_sub(bw);
            for j in lo_i..=i {
                let lo = lo_i.max(j.saturating_sub(bw));
                // L(i, lo..j) · L(j, lo..j)
                let ri = i * w + bw + lo - i;
                let rj = j * w + bw + lo - j;
                let len = j - lo;
                let dot: f64 = {
                    let (a_row, b_row) = (&l.data[ri..ri + len], &l.data[rj..rj + len]);
                    a_row.iter().zip(b_row).map(|(x, y)| x * y).sum()
                };
                let k = i * w + bw + j - i;
                let s = l.data[k] - dot;
                if i == j {
                    if !(s > 0.0) {
                        return Err(SparseError::NotPositiveDefinite { row: i, value: s });
                    }
                    l.data[k] = s.sqrt();
                } else {
                    l.data[k] = s / l.data[j * w + bw];
                }
            }
        }
        Ok(Self { l })
    }

    pub fn dim(&self) -> usize {
        self.l.n
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.l.n;
        let bw = self.l.bw;
        let w = bw + 1;
        let d = &self.l.data;
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let row = &d[i * w..(i + 1) * w];
            let mut s = b[i];
            for j in lo..i {
                s -= row[bw + j - i] * b[j];
            }
            b[i] = s / row[bw];
        }
        for i in (0..n).rev() {
            let xi = b[i] / d[i * w + bw];
            b[i] = xi;
            let lo = i.saturating_sub(bw);
            let row = &d[i * w..(i + 1) * w];
            for j in lo..i {
                b[j] -= row[bw + j - i] * xi;
            }
        }
    }

    /// Solves `L y = b` in place (forward substitution only).
    pub fn solve_lower_in_place(&self, b: &mut [f64]) {
        let n = self.l.n;
        let bw = self.l.bw;
        let w = bw + 1;
        let d = &self.l.data;
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            let row = &d[i * w..(i + 1) * w];
            let mut s = b[i];
            for j in lo..i {
                s -= row[bw + j - i] * b[j];
            }
            b[i] = s / row[bw];
        }
    }
}

/// Symmetric matrix in compressed-row form with both triangles stored.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrSym {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<f64>,
}

impl CsrSym {
    /// Builds from lower-triangle contributions `(i, j, v)` with `j <= i`;
    /// duplicates are summed and each entry is mirrored.
    pub fn from_lower_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, v) in triplets {
            debug_assert!(j <= i);
            rows[i].push((j, v));
            if i != j {
                rows[j].push((i, v));
            }
        }
        Self::from_rows(n, rows)
    }

    fn from_rows(n: usize, mut rows: Vec<Vec<(usize, f64)>>) -> Self {
        let mut indptr = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut data = Vec::new();
        indptr.push(0);
        for row in rows.iter_mut() {
            row.sort_unstable_by_key(|&(j, _)| j);
            let mut last: Option<usize> = None;
            for &(j, v) in row.iter() {
                if last == Some(j) {
                    *data.last_mut().unwrap() += v;
                } else {
                    indices.push(j);
                    data.push(v);
                    last = Some(j);
                }
            }
            indptr.push(indices.len());
        }
        Self {
            n,
            indptr,
            indices,
            data,
        }
    }

    /// Kronecker product `A ⊗ B`; index `(i, k)` maps to `i * B.dim() + k`.
    pub fn kron(a: &BandedSym, b: &BandedSym) -> Self {
        let (na, nb) = (a.n, b.n);
        let n = na * nb;
        let mut indptr = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut data = Vec::new();
        indptr.push(0);
        for i in 0..na {
            let ja = i.saturating_sub(a.bw)..=(i + a.bw).min(na - 1);
            for k in 0..nb {
                let jb = k.saturating_sub(b.bw)..=(k + b.bw).min(nb - 1);
                for j in ja.clone() {
                    let aij = a.get(i, j);
                    for l in jb.clone() {
                        indices.push(j * nb + l);
                        data.push(aij * b.get(k, l));
                    }
                }
                indptr.push(indices.len());
            }
        }
        Self {
            n,
            indptr,
            indices,
            data,
        }
    }

    /// `a * self + b * other` over the union of the two patterns.
    pub fn linear_combination(&self, a: f64, other: &CsrSym, b: f64) -> Result<Self, SparseError> {
        if self.n != other.n {
            return Err(SparseError::DimensionMismatch(self.n, other.n));
        }
        let mut indptr = Vec::with_capacity(self.n + 1);
        let mut indices = Vec::with_capacity(self.indices.len().max(other.indices.len()));
        let mut data = Vec::with_capacity(indices.capacity());
        indptr.push(0);
        for i in 0..self.n {
            let (mut p, pe) = (self.indptr[i], self.indptr[i + 1]);
            let (mut q, qe) = (other.indptr[i], other.indptr[i + 1]);
            while p < pe || q < qe {
                let cp = if p < pe { self.indices[p] } else { usize::MAX };
                let cq = if q < qe { other.indices[q] } else { usize::MAX };
                if cp == cq {
                    indices.push(cp);
                    data.push(a * self.data[p] + b * other.data[q]);
                    p += 1;
                    q += 1;
                } else if cp < cq {
                    indices.push(cp);
                    data.push(a * self.data[p]);
                    p += 1;
                } else {
                    indices.push(cq);
                    data.push(b * other.data[q]);
                    q += 1;
                }
            }
            indptr.push(indices.len());
        }
        Ok(Self {
            n: self.n,
            indptr,
            indices,
            data,
        })
    }

    /// Same pattern, all values zero.
    pub fn zeros_like(&self) -> Self {
        Self {
            data: vec![0.0; self.data.len()],
            ..self.clone()
        }
    }

    /// Adds `v` to the stored entry `(i, j)` only; callers keep symmetry.
    ///
    /// Panics if `(i, j)` is not in the pattern.
    #[inline]
    pub fn add_entry(&mut self, i: usize, j: usize, v: f64) {
        let s = self.indptr[i];
        let k = self.indices[s..self.indptr[i + 1]]
            .binary_search(&j)
            .unwrap_or_else(|_| panic!("entry ({i}, {j}) not in sparsity pattern"));
        self.data[s + k] += v;
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let cols = &self.indices[self.indptr[i]..self.indptr[i + 1]];
        match cols.binary_search(&j) {
            Ok(k) => self.data[self.indptr[i] + k],
            Err(_) => 0.0,
        }
    }

    pub fn bandwidth(&self) -> usize {
        (0..self.n)
            .filter_map(|i| {
                let s = self.indptr[i];
                (s < self.indptr[i + 1]).then(|| i.saturating_sub(self.indices[s]))
            })
            .max()
            .unwrap_or(0)
    }

    /// Largest `|A_ij - A_ji|`; zero when the pattern and values are symmetric.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for k in self.indptr[i]..self.indptr[i + 1] {
                let j = self.indices[k];
                worst = worst.max((self.data[k] - self.get(j, i)).abs());
            }
        }
        worst
    }
}

impl SymMatrix for CsrSym {
    fn dim(&self) -> usize {
        self.n
    }

    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let (s, e) = (self.indptr[i], self.indptr[i + 1]);
            *yi = self.indices[s..e]
                .iter()
                .zip(&self.data[s..e])
                .map(|(&j, &v)| v * x[j])
                .sum();
        }
    }

    fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for k in self.indptr[i]..self.indptr[i + 1] {
                m[(i, self.indices[k])] = self.data[k];
            }
        }
        m
    }

    fn to_banded(&self) -> BandedSym {
        let mut b = BandedSym::zeros(self.n, self.bandwidth());
        for i in 0..self.n {
            for k in self.indptr[i]..self.indptr[i + 1] {
                let j = self.indices[k];
                if j <= i {
                    let idx = b.idx(i, j);
                    b.data[idx] = self.data[k];
                }
            }
        }
        b
    }

    fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.data[self.indptr[i]..self.indptr[i + 1]].iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn coordinates(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for i in 0..self.n {
            for k in self.indptr[i]..self.indptr[i + 1] {
                out.push((i, self.indices[k], self.data[k]));
            }
        }
        out
    }
}
