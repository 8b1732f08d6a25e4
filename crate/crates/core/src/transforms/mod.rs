//! Group Fourier transforms, the Plancherel verifier and the
//! derivative/Fourier identity check.

mod euclidean;
mod heisenberg;
mod motion;
mod signal;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{dual_grid, Axis, DualConfig, DualGrid, GroupKind};
use crate::numerics::{hs_norm_sq, ComplexMatrix};

pub use euclidean::{fourier_euclidean, fourier_euclidean_direct, fourier_product_rfinite};
pub use heisenberg::fourier_heisenberg;
pub use motion::{fourier_motion2, fourier_motion2_direct, motion2_rep_apply};
pub use signal::SampledSignal;

/// Basis in which an operator-valued coefficient is truncated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "basis", rename_all = "snake_case")]
pub enum Basis {
    /// `h_0^λ .. h_{order-1}^λ`, Hermite functions dilated by `scale = √|λ|`.
    Hermite { order: usize, scale: f64 },
    /// Circular modes `e^{inθ}`, `n = -cutoff..=cutoff`.
    Circular { cutoff: usize },
}

impl Basis {
    pub fn dim(&self) -> usize {
        match self {
            Basis::Hermite { order, .. } => *order,
            Basis::Circular { cutoff } => 2 * cutoff + 1,
        }
    }
}

/// Truncated matrix of `π(f)` at one dual point.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub basis: Basis,
    pub matrix: ComplexMatrix,
    pub dual_point: f64,
}

impl OperatorMatrix {
    pub fn new(basis: Basis, matrix: ComplexMatrix, dual_point: f64) -> Result<Self> {
        let d = basis.dim();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::Dimension {
                expected: d,
                actual: matrix.rows().max(matrix.cols()),
            });
        }
        Ok(OperatorMatrix {
            basis,
            matrix,
            dual_point,
        })
    }

    pub fn hs_norm_sq(&self) -> f64 {
        hs_norm_sq(&self.matrix)
    }
}

/// Per-dual-point coefficients.
#[derive(Debug, Clone, PartialEq)]
pub enum FourierEntries {
    Scalar(Vec<Complex64>),
    Operator(Vec<OperatorMatrix>),
}

impl FourierEntries {
    pub fn len(&self) -> usize {
        match self {
            FourierEntries::Scalar(v) => v.len(),
            FourierEntries::Operator(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `|f̂|²` or `‖π(f)‖²_HS` at dual point `i`.
    pub fn energy(&self, i: usize) -> f64 {
        match self {
            FourierEntries::Scalar(v) => v[i].norm_sqr(),
            FourierEntries::Operator(v) => v[i].hs_norm_sq(),
        }
    }

    pub fn energies(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.energy(i)).collect()
    }

    /// 1 for scalars, the matrix dimension otherwise.
    pub fn entry_dim(&self) -> usize {
        match self {
            FourierEntries::Scalar(_) => 1,
            FourierEntries::Operator(v) => v.first().map_or(0, |m| m.basis.dim()),
        }
    }
}

/// Truncation parameters surfaced in every report.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Truncation {
    pub hermite_order: Option<usize>,
    pub mode_cutoff: Option<usize>,
    pub dual_max: f64,
    pub dual_points: usize,
}

/// Fourier coefficients of a sampled signal over a dual grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierData {
    pub dual: DualGrid,
    pub entries: FourierEntries,
    pub truncation: Truncation,
    /// Plancherel-weighted dual mass over `∫|f|²`; `None` for the zero signal.
    pub captured_fraction: Option<f64>,
}

impl FourierData {
    fn assemble(
        dual: DualGrid,
        entries: FourierEntries,
        truncation: Truncation,
        norm_sq: f64,
    ) -> Self {
        let mut fd = FourierData {
            dual,
            entries,
            truncation,
            captured_fraction: None,
        };
        if norm_sq > 0.0 {
            fd.captured_fraction = Some(fd.weighted_energy() / norm_sq);
        }
        fd
    }

    /// Σ w_γ ‖π_γ(f)‖²: the dual side of the Plancherel identity.
    pub fn weighted_energy(&self) -> f64 {
        self.dual
            .weights()
            .iter()
            .enumerate()
            .map(|(i, w)| w * self.entries.energy(i))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// How the M(2) coefficients are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MotionPath {
    /// Plane waves expanded in Bessel functions; exact in the circle variable.
    #[default]
    Bessel,
    /// Quadrature of the induced representation on an explicit circle grid.
    Direct,
}

/// Truncation orders and dual resolution for [`fourier`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformConfig {
    #[serde(default)]
    pub dual: DualConfig,
    #[serde(default = "default_hermite_order")]
    pub hermite_order: usize,
    #[serde(default = "default_mode_cutoff")]
    pub mode_cutoff: usize,
    #[serde(default)]
    pub motion_path: MotionPath,
    /// Circle samples for the direct M(2) path; 0 picks a safe default.
    #[serde(default)]
    pub circle_points: usize,
}

fn default_hermite_order() -> usize {
    32
}
fn default_mode_cutoff() -> usize {
    16
}

impl Default for TransformConfig {
    fn default() -> Self {
        TransformConfig {
            dual: DualConfig::default(),
            hermite_order: default_hermite_order(),
            mode_cutoff: default_mode_cutoff(),
            motion_path: MotionPath::default(),
            circle_points: 0,
        }
    }
}

/// Fourier transform on the dual grid built from `cfg.dual`.
pub fn fourier(f: &SampledSignal, cfg: &TransformConfig) -> Result<FourierData> {
    let dual = dual_grid(f.group(), &cfg.dual)?;
    fourier_on(f, &dual, cfg)
}

/// Dispatches to the transform of the signal's group kind.
pub fn fourier_on(
    f: &SampledSignal,
    dual: &DualGrid,
    cfg: &TransformConfig,
) -> Result<FourierData> {
    match f.group().kind() {
        GroupKind::Euclidean { .. } => fourier_euclidean(f),
        GroupKind::ProductRFinite { .. } => fourier_product_rfinite(f),
        GroupKind::Heisenberg1 => fourier_heisenberg(f, dual, cfg.hermite_order),
        GroupKind::Motion2 => match cfg.motion_path {
            MotionPath::Bessel => fourier_motion2(f, dual, cfg.mode_cutoff),
            MotionPath::Direct => {
                fourier_motion2_direct(f, dual, cfg.mode_cutoff, cfg.circle_points)
            }
        },
    }
}

/// Both sides of the Plancherel identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlancherelCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
}

pub fn plancherel_check(f: &SampledSignal, fd: &FourierData) -> Result<PlancherelCheck> {
    if fd.entries.len() != fd.dual.len() {
        return Err(Error::Dimension {
            expected: fd.dual.len(),
            actual: fd.entries.len(),
        });
    }
    let lhs = f.l2_norm_sq();
    if lhs == 0.0 {
        return Err(Error::Degenerate("∫|f|² = 0".into()));
    }
    let rhs = fd.weighted_energy();
    Ok(PlancherelCheck {
        lhs,
        rhs,
        rel_error: (lhs - rhs).abs() / lhs,
    })
}

/// Right-hand central-difference coefficients `c_k`, with
/// `f'(x) ≈ Σ c_k (f(x+kh) − f(x−kh)) / h`.
fn stencil(order: usize) -> Result<&'static [f64]> {
    match order {
        2 => Ok(&[0.5]),
        4 => Ok(&[2.0 / 3.0, -1.0 / 12.0]),
        6 => Ok(&[0.75, -0.15, 1.0 / 60.0]),
        8 => Ok(&[0.8, -0.2, 4.0 / 105.0, -1.0 / 280.0]),
        _ => Err(Error::Configuration(format!(
            "central-difference order must be 2, 4, 6 or 8, got {order}"
        ))),
    }
}

/// Default stencil order of [`fourier_derivative_identity_check`].
pub const DERIVATIVE_STENCIL_ORDER: usize = 6;

/// Relative L² gap between `FT(∂f/∂x_c)` and `2πi ω_c FT(f)` with the
/// default stencil order.
pub fn fourier_derivative_identity_check(f: &SampledSignal, coordinate: usize) -> Result<f64> {
    fourier_derivative_identity_check_with(f, coordinate, DERIVATIVE_STENCIL_ORDER)
}

/// As [`fourier_derivative_identity_check`] with a chosen central-difference order.
pub fn fourier_derivative_identity_check_with(
    f: &SampledSignal,
    coordinate: usize,
    order: usize,
) -> Result<f64> {
    let coeffs = stencil(order)?;
    let g = f.group();
    let grid = match g.axes().get(coordinate) {
        Some(Axis::Line(grid)) => grid.clone(),
        Some(_) => {
            return Err(Error::Kind(format!(
                "coordinate {coordinate} is not a real-line coordinate"
            )))
        }
        None => {
            return Err(Error::Dimension {
                expected: g.axes().len(),
                actual: coordinate,
            })
        }
    };
    let shape = g.shape();
    let n = shape[coordinate];
    if n < 2 * coeffs.len() + 2 {
        return Err(Error::Resolution(format!(
            "{n} points cannot carry an order-{order} stencil"
        )));
    }
    if f.is_zero() {
        return Ok(0.0);
    }
    let h = grid.spacing();
    let inner: usize = shape[coordinate + 1..].iter().product();
    let vals = f.values();
    let mut deriv = vec![Complex64::new(0.0, 0.0); vals.len()];
    for (idx, d) in deriv.iter_mut().enumerate() {
        let i = (idx / inner) % n;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in coeffs.iter().enumerate() {
            let k = k + 1;
            let fwd = if i + k < n {
                vals[idx + k * inner]
            } else {
                Complex64::new(0.0, 0.0)
            };
            let back = if i >= k {
                vals[idx - k * inner]
            } else {
                Complex64::new(0.0, 0.0)
            };
            acc += (fwd - back) * c;
        }
        *d = acc / h;
    }
    let ft_f = euclidean::partial_transform(vals, &shape, coordinate, &grid);
    let ft_d = euclidean::partial_transform(&deriv, &shape, coordinate, &grid);
    let freqs = crate::groups::conjugate_frequencies(&grid);

    // a band-limited test signal keeps its spectrum well inside Nyquist
    let half_nyquist = 0.25 / h;
    let (mut total, mut outer_band) = (0.0, 0.0);
    for (idx, v) in ft_f.iter().enumerate() {
        let e = v.norm_sqr();
        total += e;
        if freqs[(idx / inner) % n].abs() > half_nyquist {
            outer_band += e;
        }
    }
    if outer_band > 1e-8 * total {
        return Err(Error::Resolution(format!(
            "spectral mass above half Nyquist is {:.3e} of the total",
            outer_band / total
        )));
    }

    let weights = f.group().haar_cell_measure();
    let (mut num, mut den) = (0.0, 0.0);
    for idx in 0..ft_f.len() {
        let w = weights[idx];
        let omega = freqs[(idx / inner) % n];
        let expect = ft_f[idx] * Complex64::new(0.0, 2.0 * std::f64::consts::PI * omega);
        num += w * (ft_d[idx] - expect).norm_sqr();
        den += w * expect.norm_sqr();
    }
    if den == 0.0 {
        return Ok(num.sqrt());
    }
    Ok((num / den).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{make_group, AxisConfig};
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn line(n: usize) -> Arc<crate::groups::GroupSpec> {
        Arc::new(
            make_group(
                GroupKind::Euclidean { dim: 1 },
                &[AxisConfig::line(-8.0, 8.0, n)],
            )
            .unwrap(),
        )
    }

    #[test]
    fn derivative_identity_on_gaussian() {
        let f = SampledSignal::from_real_fn(line(4096), |x| (-PI * x[0] * x[0]).exp()).unwrap();
        let r = fourier_derivative_identity_check(&f, 0).unwrap();
        assert!(r < 1e-6, "residual {r}");
    }

    #[test]
    fn second_order_stencil_is_limited_by_truncation() {
        // h²·(2π ω)²/6 error at the spectral peak: ≈ 3e-5 on this grid
        let f = SampledSignal::from_real_fn(line(4096), |x| (-PI * x[0] * x[0]).exp()).unwrap();
        let r = fourier_derivative_identity_check_with(&f, 0, 2).unwrap();
        assert!(r > 1e-6 && r < 1e-4, "residual {r}");
    }

    #[test]
    fn derivative_identity_on_sine_gaussian() {
        let f = SampledSignal::from_real_fn(line(4096), |x| {
            (2.0 * PI * 3.0 * x[0]).sin() * (-PI * x[0] * x[0]).exp()
        })
        .unwrap();
        let r = fourier_derivative_identity_check(&f, 0).unwrap();
        assert!(r < 1e-5, "residual {r}");
    }

    #[test]
    fn derivative_identity_of_zero_is_zero() {
        let f = SampledSignal::zeros(line(256));
        assert_eq!(fourier_derivative_identity_check(&f, 0).unwrap(), 0.0);
    }

    #[test]
    fn derivative_identity_rejects_coarse_grid() {
        let f = SampledSignal::from_real_fn(line(64), |x| if x[0].abs() < 1.0 { 1.0 } else { 0.0 })
            .unwrap();
        assert!(matches!(
            fourier_derivative_identity_check(&f, 0),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn plancherel_rejects_zero_signal() {
        let f = SampledSignal::zeros(line(64));
        let fd = fourier_euclidean(&f).unwrap();
        assert!(matches!(
            plancherel_check(&f, &fd),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn bad_stencil_order_is_a_config_error() {
        let f = SampledSignal::zeros(line(64));
        assert!(matches!(
            fourier_derivative_identity_check_with(&f, 0, 3),
            Err(Error::Configuration(_))
        ));
    }
}
