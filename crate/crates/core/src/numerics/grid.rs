use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quadrature rule attached to a uniform grid.
///
/// `Periodic` samples the half-open interval `[lo, hi)` with equal weights; it
/// is the trapezoid rule for periodic or boundary-decaying integrands and the
/// grid the FFT paths expect. `Trapezoid` includes both endpoints with half
/// weights there. `EndCorrected` is the trapezoid rule with Gregory endpoint
/// corrections and integrates cubics exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    #[default]
    Periodic,
    Trapezoid,
    EndCorrected,
}

impl Rule {
    pub fn tag(self) -> u8 {
        match self {
            Rule::Periodic => 0,
            Rule::Trapezoid => 1,
            Rule::EndCorrected => 2,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(Rule::Periodic),
            1 => Some(Rule::Trapezoid),
            2 => Some(Rule::EndCorrected),
            _ => None,
        }
    }
}

/// Uniform one-dimensional grid with quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    lo: f64,
    hi: f64,
    n_points: usize,
    rule: Rule,
    weights: Vec<f64>,
}

impl Grid1D {
    pub fn new(lo: f64, hi: f64, n_points: usize, rule: Rule) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::Configuration(format!(
                "grid bounds must satisfy lo < hi, got [{lo}, {hi}]"
            )));
        }
        let min_points = if rule == Rule::EndCorrected { 6 } else { 2 };
        if n_points < min_points {
            return Err(Error::Configuration(format!(
                "{rule:?} grid needs at least {min_points} points, got {n_points}"
            )));
        }
        let mut grid = Grid1D {
            lo,
            hi,
            n_points,
            rule,
            weights: Vec::new(),
        };
        let h = grid.spacing();
        grid.weights = match rule {
            Rule::Periodic => vec![h; n_points],
            Rule::Trapezoid => {
                let mut w = vec![h; n_points];
                w[0] = 0.5 * h;
                w[n_points - 1] = 0.5 * h;
                w
            }
            Rule::EndCorrected => {
                let mut w = vec![h; n_points];
                let ends = [3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0];
                for (i, c) in ends.iter().enumerate() {
                    w[i] = c * h;
                    w[n_points - 1 - i] = c * h;
                }
                w
            }
        };
        Ok(grid)
    }

    /// Half-open periodic grid on `[lo, hi)`, the default rule.
    pub fn uniform(lo: f64, hi: f64, n_points: usize) -> Result<Self> {
        Self::new(lo, hi, n_points, Rule::Periodic)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn spacing(&self) -> f64 {
        match self.rule {
            Rule::Periodic => (self.hi - self.lo) / self.n_points as f64,
            Rule::Trapezoid | Rule::EndCorrected => {
                (self.hi - self.lo) / (self.n_points - 1) as f64
            }
        }
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Same grid with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut g = self.clone();
        g.weights.iter_mut().for_each(|w| *w *= factor);
        g
    }

    /// Index of `x` if it coincides with a grid point (relative tolerance on the spacing).
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let h = self.spacing();
        let k = ((x - self.lo) / h).round();
        if k < 0.0 || k >= self.n_points as f64 {
            return None;
        }
        if (self.lo + k * h - x).abs() <= 1e-9 * h.max(1.0) {
            Some(k as usize)
        } else {
            None
        }
    }
}

/// Tensor product of one-dimensional quadrature weights in row-major order.
pub fn tensor_weights(axes: &[&[f64]]) -> Vec<f64> {
    let mut out = vec![1.0];
    for w in axes {
        let mut next = Vec::with_capacity(out.len() * w.len());
        for &a in &out {
            next.extend(w.iter().map(|&b| a * b));
        }
        out = next;
    }
    out
}

/// Weighted sum of samples: the quadrature of the sampled integrand.
pub fn quadrature_integrate(samples: &[Complex64], weights: &[f64]) -> Result<Complex64> {
    if samples.len() != weights.len() {
        return Err(Error::Dimension {
            expected: weights.len(),
            actual: samples.len(),
        });
    }
    Ok(samples.iter().zip(weights).map(|(s, &w)| s * w).sum())
}

/// Real-valued convenience wrapper over [`quadrature_integrate`].
pub fn quadrature_integrate_real(samples: &[f64], weights: &[f64]) -> Result<f64> {
    if samples.len() != weights.len() {
        return Err(Error::Dimension {
            expected: weights.len(),
            actual: samples.len(),
        });
    }
    Ok(samples.iter().zip(weights).map(|(s, w)| s * w).sum())
}
