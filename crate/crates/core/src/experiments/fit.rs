//! Least-squares rates: `log e` against `log h` for convergence orders,
//! `log10 e` against `x_eps` for the domain-size envelope.

use serde::{Deserialize, Serialize};

/// Slope and intercept of the least-squares line through `(x, y)`; `None`
/// with fewer than two distinct abscissae.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let n = x.len().min(y.len());
    if n < 2 {
        return None;
    }
    let mx = x[..n].iter().sum::<f64>() / n as f64;
    let my = y[..n].iter().sum::<f64>() / n as f64;
    let sxx: f64 = x[..n].iter().map(|a| (a - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = x[..n].iter().zip(&y[..n]).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceFit {
    pub eta: f64,
    /// Zero-based eigenvalue index.
    pub index: usize,
    pub hs: Vec<f64>,
    pub errors: Vec<f64>,
    /// Fitted order; `None` when fewer than two points survive the window.
    pub order: Option<f64>,
    /// Natural-log intercept of `log e = order * log h + c`.
    pub intercept: Option<f64>,
    pub points_used: usize,
}

impl ConvergenceFit {
    /// Fits over the points with `e > window_factor * floor`.
    pub fn new(eta: f64, index: usize, hs: Vec<f64>, errors: Vec<f64>, floor: f64, window_factor: f64) -> Self {
        let cutoff = floor * window_factor;
        let (lx, ly): (Vec<f64>, Vec<f64>) = hs
            .iter()
            .zip(&errors)
            .filter(|(_, e)| e.is_finite() && **e > cutoff)
            .map(|(h, e)| (h.ln(), e.ln()))
            .unzip();
        let fit = linear_fit(&lx, &ly);
        Self {
            eta,
            index,
            hs,
            errors,
            order: fit.map(|f| f.0),
            intercept: fit.map(|f| f.1),
            points_used: if fit.is_some() { lx.len() } else { 0 },
        }
    }

    pub fn is_valid(&self) -> bool {
        self.order.is_some()
    }
}

/// `log10 e = slope * x_eps + intercept` over the truncation-dominated part
/// of the envelope of a domain study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeFit {
    pub half_widths: Vec<f64>,
    /// Smallest error over the element sizes at each half-width.
    pub envelope: Vec<f64>,
    /// Whether the envelope at each half-width is converged in `h`.
    pub converged: Vec<bool>,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub points_used: usize,
}

impl EnvelopeFit {
    /// Fits over the points that are converged in `h` and above
    /// `window_factor * floor`.
    pub fn new(half_widths: Vec<f64>, envelope: Vec<f64>, converged: Vec<bool>, floor: f64, window_factor: f64) -> Self {
        let cutoff = floor * window_factor;
        let (x, y): (Vec<f64>, Vec<f64>) = half_widths
            .iter()
            .zip(&envelope)
            .zip(&converged)
            .filter(|((_, e), ok)| **ok && e.is_finite() && **e > cutoff)
            .map(|((x, e), _)| (*x, e.log10()))
            .unzip();
        let fit = linear_fit(&x, &y);
        Self {
            half_widths,
            envelope,
            converged,
            slope: fit.map(|f| f.0),
            intercept: fit.map(|f| f.1),
            points_used: if fit.is_some() { x.len() } else { 0 },
        }
    }
}
