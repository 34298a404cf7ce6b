//! The unified two-/three-body eigenproblem
//! `-div(kappa grad u) + (gamma0 - gamma) u = (lambda + gamma0) u` on
//! `[-x_eps, x_eps]^d` with homogeneous Dirichlet conditions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ProblemError {
    #[error("dimension must be 1 or 2, got {0}")]
    InvalidDimension(usize),
    #[error("half-width must be positive, got {0}")]
    InvalidHalfWidth(f64),
    #[error("potential magnitude must be positive, got {0}")]
    InvalidBeta(f64),
    #[error("mass ratio must be positive, got {0}")]
    InvalidMassRatio(f64),
    #[error("shift {gamma0} does not keep gamma0 - gamma non-negative (sup gamma = {sup})")]
    ShiftTooSmall { gamma0: f64, sup: f64 },
    #[error("{dimension}D problem evaluated with {given} coordinate(s)")]
    DimensionMismatch { dimension: usize, given: usize },
}

/// Shape `f` of the pair interaction `v(xi) = beta f(xi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialShape {
    /// `1 / (1 + xi^2)^3`
    LorentzianCube,
    /// `exp(-xi^2)`
    Gaussian,
}

impl PotentialShape {
    #[inline]
    pub fn eval(self, xi: f64) -> f64 {
        match self {
            PotentialShape::LorentzianCube => {
                let d = 1.0 + xi * xi;
                1.0 / (d * d * d)
            }
            PotentialShape::Gaussian => (-xi * xi).exp(),
        }
    }

    /// Supremum of `f`; both shapes peak at the origin.
    pub fn max(self) -> f64 {
        1.0
    }
}

/// Shape hook for potentials beyond the built-in closed forms.
pub trait PotentialFn: Send + Sync {
    fn value(&self, xi: f64) -> f64;
    fn sup(&self) -> f64;
}

impl PotentialFn for PotentialShape {
    fn value(&self, xi: f64) -> f64 {
        self.eval(xi)
    }

    fn sup(&self) -> f64 {
        self.max()
    }
}

pub fn potential_value(shape: PotentialShape, beta: f64, xi: f64) -> f64 {
    beta * shape.eval(xi)
}

/// Diagonal diffusion tensor `diag(kx, ky)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffusionCoeffs {
    pub kx: f64,
    pub ky: f64,
}

/// Diffusion coefficients of the reduced three-body operator for heavy/light
/// mass ratio `ratio`: `kx = (1/2 + R) / (2 (1 + R))`, `ky = 1 / (1 + R)`.
pub fn kappa_from_mass_ratio(ratio: f64) -> Result<DiffusionCoeffs, ProblemError> {
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(ProblemError::InvalidMassRatio(ratio));
    }
    Ok(DiffusionCoeffs {
        kx: (0.5 + ratio) / (2.0 * (1.0 + ratio)),
        ky: 1.0 / (1.0 + ratio),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Dimension {
    /// Two-body problem on a line.
    One,
    /// Three-body problem in relative coordinates.
    Two,
}

impl Dimension {
    pub fn as_usize(self) -> usize {
        match self {
            Dimension::One => 1,
            Dimension::Two => 2,
        }
    }

    pub fn from_usize(d: usize) -> Result<Self, ProblemError> {
        match d {
            1 => Ok(Dimension::One),
            2 => Ok(Dimension::Two),
            _ => Err(ProblemError::InvalidDimension(d)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub dimension: Dimension,
    pub half_width: f64,
    pub shape: PotentialShape,
    pub beta: f64,
    /// Heavy/light mass ratio; only used in 2D.
    pub mass_ratio: f64,
    pub gamma0: f64,
}

impl ProblemSpec {
    /// A validated spec; `gamma0 = None` selects [`default_shift`].
    pub fn new(
        dimension: Dimension,
        half_width: f64,
        shape: PotentialShape,
        beta: f64,
        mass_ratio: f64,
        gamma0: Option<f64>,
    ) -> Result<Self, ProblemError> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(ProblemError::InvalidHalfWidth(half_width));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(ProblemError::InvalidBeta(beta));
        }
        if dimension == Dimension::Two && !(mass_ratio > 0.0 && mass_ratio.is_finite()) {
            return Err(ProblemError::InvalidMassRatio(mass_ratio));
        }
        let mut spec = Self {
            dimension,
            half_width,
            shape,
            beta,
            mass_ratio,
            gamma0: 0.0,
        };
        spec.gamma0 = gamma0.unwrap_or_else(|| default_shift(&spec));
        let sup = spec.gamma_sup();
        if !(spec.gamma0 >= sup) {
            return Err(ProblemError::ShiftTooSmall {
                gamma0: spec.gamma0,
                sup,
            });
        }
        Ok(spec)
    }

    pub fn one_body(half_width: f64, shape: PotentialShape, beta: f64) -> Result<Self, ProblemError> {
        Self::new(Dimension::One, half_width, shape, beta, 1.0, None)
    }

    pub fn three_body(
        half_width: f64,
        shape: PotentialShape,
        beta: f64,
        mass_ratio: f64,
    ) -> Result<Self, ProblemError> {
        Self::new(Dimension::Two, half_width, shape, beta, mass_ratio, None)
    }

    pub fn with_gamma0(mut self, gamma0: f64) -> Result<Self, ProblemError> {
        let sup = self.gamma_sup();
        if !(gamma0 >= sup) {
            return Err(ProblemError::ShiftTooSmall { gamma0, sup });
        }
        self.gamma0 = gamma0;
        Ok(self)
    }

    fn gamma_sup(&self) -> f64 {
        self.dimension.as_usize() as f64 * self.beta * self.shape.max()
    }

    pub fn kappa(&self) -> DiffusionCoeffs {
        match self.dimension {
            Dimension::One => DiffusionCoeffs { kx: 0.5, ky: 0.5 },
            // validated in `new`
            Dimension::Two => kappa_from_mass_ratio(self.mass_ratio).expect("validated mass ratio"),
        }
    }

    #[inline]
    pub fn v(&self, xi: f64) -> f64 {
        self.beta * self.shape.eval(xi)
    }

    /// `gamma(x)` in 1D.
    #[inline]
    pub fn gamma_1d(&self, x: f64) -> f64 {
        self.v(x)
    }

    /// `gamma(x, y) = v(x + y/2) + v(x - y/2)` in 2D.
    #[inline]
    pub fn gamma_2d(&self, x: f64, y: f64) -> f64 {
        self.v(x + 0.5 * y) + self.v(x - 0.5 * y)
    }

    /// Shifted potential `gamma0 - gamma`, 1D.
    #[inline]
    pub fn gamma_hat_1d(&self, x: f64) -> f64 {
        self.gamma0 - self.gamma_1d(x)
    }

    #[inline]
    pub fn gamma_hat_2d(&self, x: f64, y: f64) -> f64 {
        self.gamma0 - self.gamma_2d(x, y)
    }
}

/// Dimension-checked evaluation of `gamma`.
pub fn gamma_field(spec: &ProblemSpec, x: f64, y: Option<f64>) -> Result<f64, ProblemError> {
    match (spec.dimension, y) {
        (Dimension::One, None) => Ok(spec.gamma_1d(x)),
        (Dimension::Two, Some(y)) => Ok(spec.gamma_2d(x, y)),
        (d, y) => Err(ProblemError::DimensionMismatch {
            dimension: d.as_usize(),
            given: 1 + y.is_some() as usize,
        }),
    }
}

/// `d * beta * max f + 1`, strictly above the supremum of `gamma`.
pub fn default_shift(spec: &ProblemSpec) -> f64 {
    spec.gamma_sup() + 1.0
}
