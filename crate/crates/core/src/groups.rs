//! Concrete group instances: parametrization, Haar measure, dual grids and
//! Plancherel weights.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{tensor_weights, Grid1D, Rule};

/// Which group a signal lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupKind {
    /// ℝⁿ, `dim` in 1..=3.
    Euclidean { dim: usize },
    /// Heisenberg group H₁ on coordinates (x, y, t).
    Heisenberg1,
    /// Euclidean motion group SO(2)⋉ℝ² on coordinates (θ, x₁, x₂).
    Motion2,
    /// ℝ × ℤ_m on coordinates (x, j).
    ProductRFinite { m: usize },
}

impl GroupKind {
    pub fn tag(self) -> u8 {
        match self {
            GroupKind::Euclidean { .. } => 0,
            GroupKind::Heisenberg1 => 1,
            GroupKind::Motion2 => 2,
            GroupKind::ProductRFinite { .. } => 3,
        }
    }

    pub fn param(self) -> u32 {
        match self {
            GroupKind::Euclidean { dim } => dim as u32,
            GroupKind::ProductRFinite { m } => m as u32,
            _ => 0,
        }
    }

    pub fn from_tag(tag: u8, param: u32) -> Option<Self> {
        match tag {
            0 => Some(GroupKind::Euclidean {
                dim: param as usize,
            }),
            1 => Some(GroupKind::Heisenberg1),
            2 => Some(GroupKind::Motion2),
            3 => Some(GroupKind::ProductRFinite { m: param as usize }),
            _ => None,
        }
    }

    /// Number of grid coordinates a configuration must supply.
    pub fn configured_axes(self) -> usize {
        match self {
            GroupKind::Euclidean { dim } => dim,
            GroupKind::Heisenberg1 | GroupKind::Motion2 => 3,
            GroupKind::ProductRFinite { .. } => 1,
        }
    }

    pub fn is_abelian(self) -> bool {
        matches!(
            self,
            GroupKind::Euclidean { .. } | GroupKind::ProductRFinite { .. }
        )
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Euclidean { dim } => write!(f, "euclidean{dim}"),
            GroupKind::Heisenberg1 => write!(f, "heisenberg1"),
            GroupKind::Motion2 => write!(f, "motion2"),
            GroupKind::ProductRFinite { m } => write!(f, "product_r_z{m}"),
        }
    }
}

/// One coordinate of a group parametrization.
#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    /// A real line with Lebesgue measure.
    Line(Grid1D),
    /// The circle SO(2) as angles in [0, 2π), normalized Haar measure.
    Circle(Grid1D),
    /// ℤ_m with normalized counting measure.
    Cyclic(usize),
}

impl Axis {
    pub fn len(&self) -> usize {
        match self {
            Axis::Line(g) | Axis::Circle(g) => g.len(),
            Axis::Cyclic(m) => *m,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn weights(&self) -> Vec<f64> {
        match self {
            Axis::Line(g) => g.weights().to_vec(),
            Axis::Circle(g) => {
                let total = g.length();
                g.weights().iter().map(|w| w / total).collect()
            }
            Axis::Cyclic(m) => vec![1.0 / *m as f64; *m],
        }
    }

    pub fn points(&self) -> Vec<f64> {
        match self {
            Axis::Line(g) | Axis::Circle(g) => g.points(),
            Axis::Cyclic(m) => (0..*m).map(|j| j as f64).collect(),
        }
    }

    pub fn grid(&self) -> Option<&Grid1D> {
        match self {
            Axis::Line(g) | Axis::Circle(g) => Some(g),
            Axis::Cyclic(_) => None,
        }
    }

    pub fn is_line(&self) -> bool {
        matches!(self, Axis::Line(_))
    }
}

/// Kernel and normalization conventions carried by every group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConventionSet {
    pub euclidean_kernel: &'static str,
    pub induced_kernel: &'static str,
    pub heisenberg_rep: &'static str,
    pub plancherel_normalizer: f64,
}

impl ConventionSet {
    pub fn for_kind(kind: GroupKind) -> Self {
        // Euclidean and ℝ×ℤ_m: the 2π-in-exponent transform is unitary with
        // counting measure on characters. H₁: ∫|f|² = (2π)^{-2}∫‖π_λ(f)‖²|λ|dλ.
        // M(2): ∫|f|² = (2π)^{-1}∫‖π_r(f)‖² r dr.
        let plancherel_normalizer = match kind {
            GroupKind::Euclidean { .. } | GroupKind::ProductRFinite { .. } => 1.0,
            GroupKind::Heisenberg1 => 1.0 / (4.0 * PI * PI),
            GroupKind::Motion2 => 1.0 / (2.0 * PI),
        };
        ConventionSet {
            euclidean_kernel: "exp(-2 pi i <x,y>)",
            induced_kernel: "exp(i <s.l, x>)",
            heisenberg_rep: "exp(i lambda t) exp(i lambda (x u + x y / 2)) phi(u + y)",
            plancherel_normalizer,
        }
    }
}

/// Grid configuration for one coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    pub n: usize,
    #[serde(default)]
    pub rule: Rule,
}

impl AxisConfig {
    pub fn line(lo: f64, hi: f64, n: usize) -> Self {
        AxisConfig {
            lo: Some(lo),
            hi: Some(hi),
            n,
            rule: Rule::Periodic,
        }
    }

    pub fn circle(n: usize) -> Self {
        AxisConfig {
            lo: None,
            hi: None,
            n,
            rule: Rule::Periodic,
        }
    }
}

/// A validated group instance with its sampling grids.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    kind: GroupKind,
    axes: Vec<Axis>,
    conventions: ConventionSet,
}

fn line_axis(cfg: &AxisConfig, name: &str) -> Result<Axis> {
    let (lo, hi) = match (cfg.lo, cfg.hi) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => {
            return Err(Error::Configuration(format!(
                "coordinate {name} needs both lo and hi"
            )))
        }
    };
    Ok(Axis::Line(Grid1D::new(lo, hi, cfg.n, cfg.rule)?))
}

/// Builds a validated [`GroupSpec`] from per-coordinate grid configurations.
///
/// `grids` lists the configured coordinates in parametrization order:
/// `x₁..xₙ` for Euclidean, `(x, y, t)` for H₁, `(θ, x₁, x₂)` for M(2) and `x`
/// for ℝ×ℤ_m (the ℤ_m factor needs no grid).
pub fn make_group(kind: GroupKind, grids: &[AxisConfig]) -> Result<GroupSpec> {
    match kind {
        GroupKind::Euclidean { dim } if !(1..=3).contains(&dim) => {
            return Err(Error::Configuration(format!(
                "Euclidean dimension must be 1..=3, got {dim}"
            )))
        }
        GroupKind::ProductRFinite { m } if !(2..=64).contains(&m) => {
            return Err(Error::Configuration(format!(
                "finite factor order must be 2..=64, got {m}"
            )))
        }
        _ => {}
    }
    let need = kind.configured_axes();
    if grids.len() != need {
        return Err(Error::Configuration(format!(
            "{kind} needs {need} coordinate grids, got {}",
            grids.len()
        )));
    }
    let axes = match kind {
        GroupKind::Euclidean { .. } => grids
            .iter()
            .enumerate()
            .map(|(i, g)| line_axis(g, &format!("x{}", i + 1)))
            .collect::<Result<Vec<_>>>()?,
        GroupKind::Heisenberg1 => vec![
            line_axis(&grids[0], "x")?,
            line_axis(&grids[1], "y")?,
            line_axis(&grids[2], "t")?,
        ],
        GroupKind::Motion2 => {
            let th = &grids[0];
            let lo = th.lo.unwrap_or(0.0);
            let hi = th.hi.unwrap_or(2.0 * PI);
            if lo.abs() > 1e-12 || (hi - 2.0 * PI).abs() > 1e-12 || th.rule != Rule::Periodic {
                return Err(Error::Configuration(
                    "the rotation coordinate must be a periodic grid on [0, 2π)".into(),
                ));
            }
            vec![
                Axis::Circle(Grid1D::new(0.0, 2.0 * PI, th.n, Rule::Periodic)?),
                line_axis(&grids[1], "x1")?,
                line_axis(&grids[2], "x2")?,
            ]
        }
        GroupKind::ProductRFinite { m } => vec![line_axis(&grids[0], "x")?, Axis::Cyclic(m)],
    };
    Ok(GroupSpec {
        kind,
        axes,
        conventions: ConventionSet::for_kind(kind),
    })
}

impl GroupSpec {
    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn conventions(&self) -> &ConventionSet {
        &self.conventions
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::len).collect()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(Axis::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Haar weight of each grid cell in row-major order: product of coordinate
    /// weights, compact and finite factors normalized to total mass 1.
    pub fn haar_cell_measure(&self) -> Vec<f64> {
        let ws: Vec<Vec<f64>> = self.axes.iter().map(Axis::weights).collect();
        let refs: Vec<&[f64]> = ws.iter().map(Vec::as_slice).collect();
        tensor_weights(&refs)
    }

    /// Coordinates of every grid cell in row-major order.
    pub fn cell_points(&self) -> Vec<Vec<f64>> {
        let pts: Vec<Vec<f64>> = self.axes.iter().map(Axis::points).collect();
        let mut out: Vec<Vec<f64>> = vec![Vec::new()];
        for axis in &pts {
            let mut next = Vec::with_capacity(out.len() * axis.len());
            for prefix in &out {
                for &p in axis {
                    let mut v = prefix.clone();
                    v.push(p);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    /// Indices of the real-line coordinates used by the time moment: every ℝ
    /// coordinate, except H₁ which uses only the central `t`.
    pub fn moment_axes(&self) -> Vec<usize> {
        match self.kind {
            GroupKind::Heisenberg1 => vec![2],
            _ => (0..self.axes.len())
                .filter(|&i| self.axes[i].is_line())
                .collect(),
        }
    }

    /// Same group with the given coordinate grids replaced (used for refinement sweeps).
    pub fn with_grids(&self, grids: &[AxisConfig]) -> Result<GroupSpec> {
        make_group(self.kind, grids)
    }
}

/// Resolution of the dual truncation window for the nonabelian kinds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualConfig {
    #[serde(default = "default_lambda_max")]
    pub lambda_max: f64,
    #[serde(default = "default_points")]
    pub lambda_points: usize,
    #[serde(default = "default_r_max")]
    pub r_max: f64,
    #[serde(default = "default_points")]
    pub r_points: usize,
}

fn default_lambda_max() -> f64 {
    4.0
}
fn default_r_max() -> f64 {
    8.0
}
fn default_points() -> usize {
    64
}

impl Default for DualConfig {
    fn default() -> Self {
        DualConfig {
            lambda_max: default_lambda_max(),
            lambda_points: default_points(),
            r_max: default_r_max(),
            r_points: default_points(),
        }
    }
}

/// Coordinates of the dual points.
#[derive(Debug, Clone, PartialEq)]
pub enum DualLayout {
    /// FFT-conjugate frequency grid per coordinate, row-major.
    Frequency { axes: Vec<Vec<f64>> },
    /// Schrödinger parameters λ ≠ 0.
    Lambda { lambdas: Vec<f64> },
    /// Orbit radii r > 0 of M(2).
    Radius { radii: Vec<f64> },
    /// Frequencies of the ℝ factor × characters of ℤ_m (frequency-major).
    FrequencyCharacter { freqs: Vec<f64>, characters: usize },
}

/// Dual parameters with Plancherel weights (normalizer included).
#[derive(Debug, Clone, PartialEq)]
pub struct DualGrid {
    layout: DualLayout,
    weights: Vec<f64>,
    magnitudes: Vec<f64>,
    truncation: f64,
}

/// FFT-conjugate frequencies of a grid, in FFT-shifted order.
pub fn conjugate_frequencies(grid: &Grid1D) -> Vec<f64> {
    let n = grid.len();
    let span = n as f64 * grid.spacing();
    (0..n).map(|q| (q as f64 - (n / 2) as f64) / span).collect()
}

impl DualGrid {
    pub fn layout(&self) -> &DualLayout {
        &self.layout
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Plancherel weight of each dual point, normalizer included.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// ‖γ‖ for each dual point: |ω|, |λ|, r or |z|.
    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    /// Largest representable dual magnitude (per-axis Nyquist, λ_max or r_max).
    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    /// A λ-grid with caller-chosen nodes and `dλ` weights; the `|λ|` density
    /// and normalizer are applied here.
    pub fn heisenberg_nodes(lambdas: Vec<f64>, dlambda: Vec<f64>) -> Result<Self> {
        if lambdas.len() != dlambda.len() {
            return Err(Error::Dimension {
                expected: lambdas.len(),
                actual: dlambda.len(),
            });
        }
        let norm = ConventionSet::for_kind(GroupKind::Heisenberg1).plancherel_normalizer;
        let weights = lambdas
            .iter()
            .zip(&dlambda)
            .map(|(l, d)| d * l.abs() * norm)
            .collect();
        let magnitudes: Vec<f64> = lambdas.iter().map(|l| l.abs()).collect();
        let truncation = magnitudes.iter().cloned().fold(0.0, f64::max);
        Ok(DualGrid {
            layout: DualLayout::Lambda { lambdas },
            weights,
            magnitudes,
            truncation,
        })
    }

    /// An r-grid with caller-chosen nodes and `dr` weights; the `r` density
    /// and normalizer are applied here.
    pub fn motion_nodes(radii: Vec<f64>, dr: Vec<f64>) -> Result<Self> {
        if radii.len() != dr.len() {
            return Err(Error::Dimension {
                expected: radii.len(),
                actual: dr.len(),
            });
        }
        let norm = ConventionSet::for_kind(GroupKind::Motion2).plancherel_normalizer;
        let weights = radii.iter().zip(&dr).map(|(r, d)| d * r * norm).collect();
        let truncation = radii.iter().cloned().fold(0.0, f64::max);
        Ok(DualGrid {
            magnitudes: radii.clone(),
            layout: DualLayout::Radius { radii },
            weights,
            truncation,
        })
    }
}

/// Builds the dual grid and Plancherel weights for a group.
pub fn dual_grid(g: &GroupSpec, cfg: &DualConfig) -> Result<DualGrid> {
    match g.kind() {
        GroupKind::Euclidean { .. } => {
            let axes: Vec<Vec<f64>> = g
                .axes()
                .iter()
                .map(|a| conjugate_frequencies(a.grid().expect("line axis")))
                .collect();
            let cell: f64 = g
                .axes()
                .iter()
                .map(|a| {
                    let gr = a.grid().expect("line axis");
                    1.0 / (gr.len() as f64 * gr.spacing())
                })
                .product();
            let mut mags = vec![0.0f64];
            for axis in &axes {
                let mut next = Vec::with_capacity(mags.len() * axis.len());
                for &m in &mags {
                    next.extend(axis.iter().map(|w| m + w * w));
                }
                mags = next;
            }
            let magnitudes: Vec<f64> = mags.into_iter().map(f64::sqrt).collect();
            let truncation = axes
                .iter()
                .map(|a| a.iter().map(|w| w.abs()).fold(0.0, f64::max))
                .fold(f64::INFINITY, f64::min);
            Ok(DualGrid {
                weights: vec![cell; magnitudes.len()],
                magnitudes,
                layout: DualLayout::Frequency { axes },
                truncation,
            })
        }
        GroupKind::ProductRFinite { m } => {
            let grid = g.axes()[0].grid().expect("line axis");
            let freqs = conjugate_frequencies(grid);
            let dz = 1.0 / (grid.len() as f64 * grid.spacing());
            let magnitudes: Vec<f64> = freqs
                .iter()
                .flat_map(|z| std::iter::repeat_n(z.abs(), m))
                .collect();
            let truncation = freqs.iter().map(|z| z.abs()).fold(0.0, f64::max);
            Ok(DualGrid {
                weights: vec![dz; magnitudes.len()],
                magnitudes,
                layout: DualLayout::FrequencyCharacter {
                    freqs,
                    characters: m,
                },
                truncation,
            })
        }
        GroupKind::Heisenberg1 => {
            if !(cfg.lambda_max > 0.0) || cfg.lambda_points < 2 || cfg.lambda_points % 2 == 1 {
                return Err(Error::Configuration(format!(
                    "λ-grid needs lambda_max > 0 and an even, positive point count (got {}, {})",
                    cfg.lambda_max, cfg.lambda_points
                )));
            }
            // midpoint nodes: symmetric about 0 and never hit λ = 0
            let n = cfg.lambda_points;
            let d = 2.0 * cfg.lambda_max / n as f64;
            let lambdas: Vec<f64> = (0..n)
                .map(|i| -cfg.lambda_max + (i as f64 + 0.5) * d)
                .collect();
            let mut dual = DualGrid::heisenberg_nodes(lambdas, vec![d; n])?;
            dual.truncation = cfg.lambda_max;
            Ok(dual)
        }
        GroupKind::Motion2 => {
            if !(cfg.r_max > 0.0) || cfg.r_points < 1 {
                return Err(Error::Configuration(format!(
                    "r-grid needs r_max > 0 and a positive point count (got {}, {})",
                    cfg.r_max, cfg.r_points
                )));
            }
            // trapezoid on [0, r_max]; the r = 0 node carries zero r·dr weight
            let n = cfg.r_points;
            let d = cfg.r_max / n as f64;
            let radii: Vec<f64> = (1..=n).map(|i| i as f64 * d).collect();
            let mut dr = vec![d; n];
            dr[n - 1] = 0.5 * d;
            let mut dual = DualGrid::motion_nodes(radii, dr)?;
            dual.truncation = cfg.r_max;
            Ok(dual)
        }
    }
}
