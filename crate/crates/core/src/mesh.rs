//! One-dimensional meshes on the truncated domain `[-x_eps, x_eps]`.
//!
//! Two constructions are provided: uniform meshes and symmetric meshes
//! whose element sizes grow in arithmetic progression from the origin
//! towards both boundaries.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum MeshError {
    #[error("mesh needs at least one element")]
    NoElements,
    #[error("breakpoints must be finite and strictly increasing (violated at index {0})")]
    NotIncreasing(usize),
    #[error("half-width must be positive and finite, got {0}")]
    InvalidHalfWidth(f64),
    #[error("graded mesh needs an even, positive element count, got {0}")]
    OddElementCount(usize),
    #[error("growth rate must be finite and non-negative, got {0}")]
    NegativeGrowth(f64),
}

/// Ordered breakpoints of a 1D mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    breakpoints: Vec<f64>,
}

impl Mesh1D {
    pub fn new(breakpoints: Vec<f64>) -> Result<Self, MeshError> {
        if breakpoints.len() < 2 {
            return Err(MeshError::NoElements);
        }
        if let Some(i) = breakpoints.iter().position(|x| !x.is_finite()) {
            return Err(MeshError::NotIncreasing(i));
        }
        if let Some(i) = breakpoints.windows(2).position(|w| w[1] <= w[0]) {
            return Err(MeshError::NotIncreasing(i + 1));
        }
        Ok(Self { breakpoints })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn num_elements(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn element_size(&self, e: usize) -> f64 {
        self.breakpoints[e + 1] - self.breakpoints[e]
    }

    pub fn element_sizes(&self) -> Vec<f64> {
        self.breakpoints.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Largest element diameter.
    pub fn max_size(&self) -> f64 {
        self.element_sizes().into_iter().fold(0.0, f64::max)
    }

    pub fn start(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn end(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1]
    }

    /// Index of the element containing `x`; points on an interior breakpoint
    /// belong to the element on their right, the last breakpoint to the last
    /// element. Returns `None` outside the mesh.
    pub fn locate(&self, x: f64) -> Option<usize> {
        if !(x >= self.start() && x <= self.end()) {
            return None;
        }
        let n = self.num_elements();
        // first breakpoint strictly greater than x, minus one
        let idx = self.breakpoints.partition_point(|&b| b <= x);
        Some(idx.saturating_sub(1).min(n - 1))
    }

    /// Maximum of `|b[i] + b[n-i]|`; zero for a perfectly symmetric mesh.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.num_elements();
        (0..=n)
            .map(|i| (self.breakpoints[i] + self.breakpoints[n - i]).abs())
            .fold(0.0, f64::max)
    }
}

/// `n` equal elements on `[-half_width, half_width]`.
pub fn uniform_mesh(half_width: f64, n: usize) -> Result<Mesh1D, MeshError> {
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(MeshError::InvalidHalfWidth(half_width));
    }
    if n == 0 {
        return Err(MeshError::NoElements);
    }
    let h = 2.0 * half_width / n as f64;
    let mut bp: Vec<f64> = (0..=n).map(|i| -half_width + i as f64 * h).collect();
    // exact endpoints, and exact mirror symmetry
    for i in 0..=n / 2 {
        let v = if 2 * i == n { 0.0 } else { -half_width + i as f64 * h };
        bp[i] = v;
        bp[n - i] = -v;
    }
    Mesh1D::new(bp)
}

/// Center-graded symmetric mesh description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradedMeshSpec {
    pub half_width: f64,
    /// Total element count, must be even.
    pub n: usize,
    /// Relative size increase per element moving outward: the i-th element
    /// from the origin has size `s * (1 + growth * i)`.
    pub growth: f64,
}

pub fn graded_mesh(spec: GradedMeshSpec) -> Result<Mesh1D, MeshError> {
    let GradedMeshSpec {
        half_width,
        n,
        growth,
    } = spec;
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(MeshError::InvalidHalfWidth(half_width));
    }
    if n == 0 || n % 2 != 0 {
        return Err(MeshError::OddElementCount(n));
    }
    if !(growth >= 0.0 && growth.is_finite()) {
        return Err(MeshError::NegativeGrowth(growth));
    }
    if growth == 0.0 {
        return uniform_mesh(half_width, n);
    }
    let m = n / 2;
    let weights: Vec<f64> = (0..m).map(|i| 1.0 + growth * i as f64).collect();
    let total: f64 = weights.iter().sum();
    let mut half = Vec::with_capacity(m + 1);
    half.push(0.0);
    let mut acc = 0.0;
    for w in &weights[..m - 1] {
        acc += w;
        half.push(half_width * acc / total);
    }
    half.push(half_width);

    let mut bp = Vec::with_capacity(n + 1);
    bp.extend(half.iter().rev().map(|x| -x));
    bp.extend(half.iter().skip(1).copied());
    Mesh1D::new(bp)
}
