//! Continuous Gabor transform `G_ψf(u, π) = π(f · conj(ψ(u⁻¹ ·)))` over a base
//! grid of group points, and its isometry verifier.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{Axis, DualGrid, GroupSpec};
use crate::transforms::{fourier_on, FourierEntries, SampledSignal, TransformConfig, Truncation};

/// A nonzero window function on the same grid as the analysed signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    signal: SampledSignal,
    norm_sq: f64,
}

impl Window {
    pub fn new(signal: SampledSignal) -> Result<Self> {
        let norm_sq = signal.l2_norm_sq();
        if !(norm_sq > 0.0) {
            return Err(Error::Degenerate("window has zero norm".into()));
        }
        Ok(Window { signal, norm_sq })
    }

    pub fn signal(&self) -> &SampledSignal {
        &self.signal
    }

    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }
}

/// Base points: every `stride`-th sample of each coordinate of the signal grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseGrid {
    strides: Vec<usize>,
    counts: Vec<usize>,
    coords: Vec<Vec<f64>>,
    weights: Vec<Vec<f64>>,
}

impl BaseGrid {
    /// The full signal grid.
    pub fn full(g: &GroupSpec) -> Result<Self> {
        Self::strided(g, &vec![1; g.axes().len()])
    }

    pub fn strided(g: &GroupSpec, strides: &[usize]) -> Result<Self> {
        let axes = g.axes();
        if strides.len() != axes.len() {
            return Err(Error::Dimension {
                expected: axes.len(),
                actual: strides.len(),
            });
        }
        let mut counts = Vec::new();
        let mut coords = Vec::new();
        let mut weights = Vec::new();
        for (axis, &s) in axes.iter().zip(strides) {
            let n = axis.len();
            if s == 0 || s > n {
                return Err(Error::Configuration(format!(
                    "base stride {s} invalid for {n} samples"
                )));
            }
            let pts = axis.points();
            let (w, sub): (f64, Vec<f64>) = match axis {
                Axis::Line(grid) => {
                    let h = grid.spacing();
                    let off = grid.lo() / h;
                    if (off - off.round()).abs() > 1e-9 {
                        return Err(Error::Alignment(format!(
                            "grid origin {} is not on the lattice hℤ (h = {h})",
                            grid.lo()
                        )));
                    }
                    (s as f64 * h, pts.into_iter().step_by(s).collect())
                }
                Axis::Circle(_) | Axis::Cyclic(_) => {
                    if n % s != 0 {
                        return Err(Error::Alignment(format!(
                            "stride {s} does not divide the {n}-point compact factor"
                        )));
                    }
                    (s as f64 / n as f64, pts.into_iter().step_by(s).collect())
                }
            };
            counts.push(sub.len());
            weights.push(vec![w; sub.len()]);
            coords.push(sub);
        }
        Ok(BaseGrid {
            strides: strides.to_vec(),
            counts,
            coords,
            weights,
        })
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Number of base points per coordinate.
    pub fn shape(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn multi_index(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![0; self.counts.len()];
        for ax in (0..self.counts.len()).rev() {
            out[ax] = i % self.counts[ax];
            i /= self.counts[ax];
        }
        out
    }

    /// Coordinates of base point `i` (row-major).
    pub fn point(&self, i: usize) -> Vec<f64> {
        self.multi_index(i)
            .iter()
            .enumerate()
            .map(|(ax, &k)| self.coords[ax][k])
            .collect()
    }

    /// Haar weight of base point `i`.
    pub fn weight(&self, i: usize) -> f64 {
        self.multi_index(i)
            .iter()
            .enumerate()
            .map(|(ax, &k)| self.weights[ax][k])
            .product()
    }

    pub fn coords(&self) -> &[Vec<f64>] {
        &self.coords
    }
}

/// Integer lattice shift of a group coordinate, or an alignment error.
fn lattice_shift(axis: &Axis, value: f64) -> Result<i64> {
    let step = match axis {
        Axis::Line(g) | Axis::Circle(g) => g.spacing(),
        Axis::Cyclic(_) => 1.0,
    };
    let d = value / step;
    if !d.is_finite() || (d - d.round()).abs() > 1e-9 * d.abs().max(1.0) {
        return Err(Error::Alignment(format!(
            "base coordinate {value} is not a multiple of the spacing {step}"
        )));
    }
    Ok(d.round() as i64)
}

/// `f(g) · conj(ψ(u⁻¹g))` for the base point `u`, coordinate-wise: zero-filled
/// translation on real lines, cyclic on compact and finite factors.
pub fn windowed_slice(f: &SampledSignal, psi: &Window, base: &[f64]) -> Result<SampledSignal> {
    let g = f.group();
    if g != psi.signal().group() {
        return Err(Error::Kind(
            "signal and window live on different groups".into(),
        ));
    }
    let axes = g.axes();
    if base.len() != axes.len() {
        return Err(Error::Dimension {
            expected: axes.len(),
            actual: base.len(),
        });
    }
    let shifts = axes
        .iter()
        .zip(base)
        .map(|(a, &v)| lattice_shift(a, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(slice_by_shift(f, psi, &shifts))
}

fn slice_by_shift(f: &SampledSignal, psi: &Window, shifts: &[i64]) -> SampledSignal {
    let g = f.group();
    let axes = g.axes();
    let shape = g.shape();
    let rank = shape.len();
    let fv = f.values();
    let pv = psi.signal().values();
    let mut out = vec![Complex64::new(0.0, 0.0); fv.len()];
    let mut idx = vec![0usize; rank];
    for (lin, slot) in out.iter_mut().enumerate() {
        let mut rem = lin;
        for ax in (0..rank).rev() {
            idx[ax] = rem % shape[ax];
            rem /= shape[ax];
        }
        let mut src = 0usize;
        let mut inside = true;
        for ax in 0..rank {
            let n = shape[ax] as i64;
            let k = idx[ax] as i64 - shifts[ax];
            let k = match axes[ax] {
                Axis::Line(_) => {
                    if k < 0 || k >= n {
                        inside = false;
                        break;
                    }
                    k
                }
                _ => k.rem_euclid(n),
            };
            src = src * shape[ax] + k as usize;
        }
        if inside {
            *slot = fv[lin] * pv[src].conj();
        }
    }
    SampledSignal::new(f.group_arc().clone(), out).expect("shape preserved")
}

/// Gabor coefficients for every (base point, dual point).
#[derive(Debug, Clone, PartialEq)]
pub struct GaborField {
    pub group: Arc<GroupSpec>,
    pub base: BaseGrid,
    pub dual: DualGrid,
    /// One entry set per base point, in base row-major order.
    pub coeffs: Vec<FourierEntries>,
    pub truncation: Truncation,
}

impl GaborField {
    /// `|G|²` or `‖G‖²_HS` at (base `b`, dual `d`).
    pub fn energy(&self, b: usize, d: usize) -> f64 {
        self.coeffs[b].energy(d)
    }

    /// Σ_u w_u Σ_γ w_γ ‖G_ψf(u,γ)‖².
    pub fn weighted_energy(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(b, c)| {
                let inner: f64 = self
                    .dual
                    .weights()
                    .iter()
                    .enumerate()
                    .map(|(d, w)| w * c.energy(d))
                    .sum();
                self.base.weight(b) * inner
            })
            .sum()
    }

    pub fn entry_dim(&self) -> usize {
        self.coeffs.first().map_or(0, FourierEntries::entry_dim)
    }
}

/// Gabor transform of `f` with window `ψ` on the given base and dual grids.
pub fn gabor_transform(
    f: &SampledSignal,
    psi: &Window,
    base: &BaseGrid,
    dual: &DualGrid,
    cfg: &TransformConfig,
) -> Result<GaborField> {
    let g = f.group();
    if g != psi.signal().group() {
        return Err(Error::Kind(format!(
            "signal on {} and window on {} differ",
            g.kind(),
            psi.signal().group().kind()
        )));
    }
    if base.shape().len() != g.axes().len() {
        return Err(Error::Dimension {
            expected: g.axes().len(),
            actual: base.shape().len(),
        });
    }
    let axes = g.axes();
    let results = (0..base.len())
        .into_par_iter()
        .map(|b| {
            let pt = base.point(b);
            let shifts = axes
                .iter()
                .zip(&pt)
                .map(|(a, &v)| lattice_shift(a, v))
                .collect::<Result<Vec<_>>>()?;
            let slice = slice_by_shift(f, psi, &shifts);
            fourier_on(&slice, dual, cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    let (dual, truncation) = match results.first() {
        Some(fd) => (fd.dual.clone(), fd.truncation),
        None => return Err(Error::Configuration("empty base grid".into())),
    };
    Ok(GaborField {
        group: f.group_arc().clone(),
        base: base.clone(),
        dual,
        coeffs: results.into_iter().map(|fd| fd.entries).collect(),
        truncation,
    })
}

/// Both sides of `‖G_ψf‖² = ‖ψ‖²‖f‖²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsometryCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
}

pub fn gabor_isometry_check(
    field: &GaborField,
    f: &SampledSignal,
    psi: &Window,
) -> Result<IsometryCheck> {
    let nf = f.l2_norm_sq();
    if nf == 0.0 {
        return Err(Error::Degenerate("∫|f|² = 0".into()));
    }
    let lhs = field.weighted_energy();
    let rhs = psi.norm_sq() * nf;
    Ok(IsometryCheck {
        lhs,
        rhs,
        rel_error: (lhs - rhs).abs() / rhs,
    })
}
