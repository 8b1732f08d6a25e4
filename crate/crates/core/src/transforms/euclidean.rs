use std::f64::consts::PI;

use num_complex::Complex64;

use super::{FourierData, FourierEntries, SampledSignal, Truncation};
use crate::error::{Error, Result};
use crate::groups::{dual_grid, Axis, DualConfig, GroupKind};
use crate::numerics::fft::fft_along_axis;
use crate::numerics::Grid1D;

/// Reorders an unshifted DFT along `axis` into ascending frequency order and
/// applies the `e^{-2πiω·lo}` phase of the grid origin.
fn shift_and_phase(data: &mut [Complex64], shape: &[usize], axis: usize, grid: &Grid1D) {
    let n = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let span = n as f64 * grid.spacing();
    let phases: Vec<Complex64> = (0..n)
        .map(|q| {
            let omega = (q as f64 - (n / 2) as f64) / span;
            Complex64::from_polar(1.0, -2.0 * PI * omega * grid.lo())
        })
        .collect();
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for o in 0..outer {
        let base = o * n * inner;
        for i in 0..inner {
            for (q, v) in line.iter_mut().enumerate() {
                let src = (q + n - n / 2) % n;
                *v = data[base + src * inner + i];
            }
            for (q, v) in line.iter().enumerate() {
                data[base + q * inner + i] = v * phases[q];
            }
        }
    }
}

/// Quadrature FT along one line coordinate only, other coordinates untouched
/// (weights of the transformed coordinate applied).
pub(super) fn partial_transform(
    values: &[Complex64],
    shape: &[usize],
    axis: usize,
    grid: &Grid1D,
) -> Vec<Complex64> {
    let n = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let w = grid.weights();
    let mut data: Vec<Complex64> = values
        .iter()
        .enumerate()
        .map(|(idx, v)| v * w[(idx / inner) % n])
        .collect();
    fft_along_axis(&mut data, shape, axis);
    shift_and_phase(&mut data, shape, axis, grid);
    data
}

fn transform_all(f: &SampledSignal) -> Vec<Complex64> {
    let g = f.group();
    let shape = g.shape();
    let mut data: Vec<Complex64> = f
        .values()
        .iter()
        .zip(g.haar_cell_measure())
        .map(|(v, w)| v * w)
        .collect();
    for (axis, a) in g.axes().iter().enumerate() {
        fft_along_axis(&mut data, &shape, axis);
        if let Axis::Line(grid) = a {
            shift_and_phase(&mut data, &shape, axis, grid);
        }
    }
    data
}

fn scalar_data(f: &SampledSignal, values: Vec<Complex64>) -> Result<FourierData> {
    let dual = dual_grid(f.group(), &DualConfig::default())?;
    let truncation = Truncation {
        hermite_order: None,
        mode_cutoff: None,
        dual_max: dual.truncation(),
        dual_points: dual.len(),
    };
    Ok(FourierData::assemble(
        dual,
        FourierEntries::Scalar(values),
        truncation,
        f.l2_norm_sq(),
    ))
}

/// `f̂(ω) = ∫ f(x) e^{-2πi⟨ω,x⟩} dx` on the FFT-conjugate frequency grid.
pub fn fourier_euclidean(f: &SampledSignal) -> Result<FourierData> {
    match f.group().kind() {
        GroupKind::Euclidean { .. } => scalar_data(f, transform_all(f)),
        other => Err(Error::Kind(format!(
            "Euclidean transform called on {other}"
        ))),
    }
}

/// Same transform as [`fourier_euclidean`] by direct quadrature of the kernel,
/// one coordinate at a time (`O(n²)` per line).
pub fn fourier_euclidean_direct(f: &SampledSignal) -> Result<FourierData> {
    let g = f.group();
    if !matches!(g.kind(), GroupKind::Euclidean { .. }) {
        return Err(Error::Kind(format!(
            "Euclidean transform called on {}",
            g.kind()
        )));
    }
    let shape = g.shape();
    let mut data = f.values().to_vec();
    for (axis, a) in g.axes().iter().enumerate() {
        let grid = a.grid().expect("line axis");
        let n = shape[axis];
        let inner: usize = shape[axis + 1..].iter().product();
        let outer: usize = shape[..axis].iter().product();
        let x = grid.points();
        let w = grid.weights();
        let omega = crate::groups::conjugate_frequencies(grid);
        let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
        for o in 0..outer {
            for i in 0..inner {
                let at = |k: usize| o * n * inner + k * inner + i;
                for (q, om) in omega.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..n {
                        acc +=
                            data[at(j)] * w[j] * Complex64::from_polar(1.0, -2.0 * PI * om * x[j]);
                    }
                    out[at(q)] = acc;
                }
            }
        }
        data = out;
    }
    scalar_data(f, data)
}

/// `f̂(z,p) = Σ_j m⁻¹ e^{-2πi jp/m} ∫ f(x,j) e^{-2πizx} dx`, frequency-major.
pub fn fourier_product_rfinite(f: &SampledSignal) -> Result<FourierData> {
    match f.group().kind() {
        GroupKind::ProductRFinite { .. } => scalar_data(f, transform_all(f)),
        other => Err(Error::Kind(format!("ℝ×ℤ_m transform called on {other}"))),
    }
}
