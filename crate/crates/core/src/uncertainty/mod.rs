//! Moments, minimal-constant reports for Heisenberg-type inequalities, the
//! Hölder interpolation check and window optimization.

mod optimize;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gabor::{GaborField, Window};
use crate::groups::{DualGrid, GroupKind};
use crate::transforms::{FourierData, SampledSignal, Truncation};

pub use optimize::{optimize_window, Evaluation, OptimizeSettings, WindowFamily, WindowOptimum};

/// Share of the dual moment allowed in the top octave before it is flagged divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 0.05;

/// Relative slack of the sharp 4π bound on ℝ.
pub const SHARP_BOUND_TOLERANCE: f64 = 1e-6;

/// Time and frequency exponents, both ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSpec {
    pub a: f64,
    pub b: f64,
}

impl MomentSpec {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_exponent("a", a)?;
        check_exponent("b", b)?;
        Ok(MomentSpec { a, b })
    }
}

impl Default for MomentSpec {
    fn default() -> Self {
        MomentSpec { a: 1.0, b: 1.0 }
    }
}

fn check_exponent(name: &str, v: f64) -> Result<()> {
    if !(v >= 1.0) || !v.is_finite() {
        return Err(Error::Domain(format!(
            "exponent {name} must be a finite value ≥ 1, got {v}"
        )));
    }
    Ok(())
}

/// `∫ ‖x‖^{2a} |f|²` over the real-line coordinates (only `t` on H₁).
pub fn time_moment(f: &SampledSignal, a: f64) -> Result<f64> {
    check_exponent("a", a)?;
    let g = f.group();
    let axes = g.moment_axes();
    let shape = g.shape();
    let pts: Vec<Vec<f64>> = g.axes().iter().map(|ax| ax.points()).collect();
    let weights = g.haar_cell_measure();
    let mut total = 0.0;
    for (idx, (v, w)) in f.values().iter().zip(&weights).enumerate() {
        let e = v.norm_sqr();
        if e == 0.0 {
            continue;
        }
        let mut rem = idx;
        let mut r2 = 0.0;
        for ax in (0..shape.len()).rev() {
            let i = rem % shape[ax];
            rem /= shape[ax];
            if axes.contains(&ax) {
                r2 += pts[ax][i] * pts[ax][i];
            }
        }
        total += w * r2.powf(a) * e;
    }
    Ok(total)
}

/// Dual moment with its top-octave diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualMoment {
    pub value: f64,
    /// Share of `value` carried by dual points above half the truncation magnitude.
    pub top_octave_fraction: f64,
    pub divergent: bool,
}

fn moment_over(dual: &DualGrid, energies: impl Fn(usize) -> f64, b: f64) -> DualMoment {
    let half = 0.5 * dual.truncation();
    let (mut value, mut top) = (0.0, 0.0);
    for (i, (&w, &m)) in dual.weights().iter().zip(dual.magnitudes()).enumerate() {
        let c = w * m.powf(2.0 * b) * energies(i);
        value += c;
        if m > half {
            top += c;
        }
    }
    let top_octave_fraction = if value > 0.0 { top / value } else { 0.0 };
    DualMoment {
        value,
        top_octave_fraction,
        divergent: top_octave_fraction > DIVERGENCE_THRESHOLD,
    }
}

/// `Σ w_γ ‖γ‖^{2b} ‖π_γ(f)‖²`.
pub fn freq_moment(fd: &FourierData, b: f64) -> Result<f64> {
    Ok(freq_moment_detail(fd, b)?.value)
}

/// [`freq_moment`] together with the divergence diagnostic.
pub fn freq_moment_detail(fd: &FourierData, b: f64) -> Result<DualMoment> {
    check_exponent("b", b)?;
    Ok(moment_over(&fd.dual, |i| fd.entries.energy(i), b))
}

/// Gabor variant: `Σ_u w_u Σ_γ w_γ ‖γ‖^{2b} ‖G_ψf(u,γ)‖²`.
pub fn gabor_freq_moment(field: &GaborField, b: f64) -> Result<DualMoment> {
    check_exponent("b", b)?;
    let mut value = 0.0;
    let mut top = 0.0;
    for (u, c) in field.coeffs.iter().enumerate() {
        let m = moment_over(&field.dual, |i| c.energy(i), b);
        let wu = field.base.weight(u);
        value += wu * m.value;
        top += wu * m.value * m.top_octave_fraction;
    }
    let top_octave_fraction = if value > 0.0 { top / value } else { 0.0 };
    Ok(DualMoment {
        value,
        top_octave_fraction,
        divergent: top_octave_fraction > DIVERGENCE_THRESHOLD,
    })
}

/// The proved sharp bound `min_constant ≤ 4π` on ℝ with `a = b = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpBound {
    pub constant: f64,
    pub tolerance: f64,
    pub holds: bool,
}

/// Both sides of one uncertainty inequality and the minimal admissible constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UncertaintyReport {
    pub group: GroupKind,
    pub moments: MomentSpec,
    pub norm_sq: f64,
    pub window_norm_sq: Option<f64>,
    pub time_moment: f64,
    pub freq_moment: f64,
    pub lhs: f64,
    pub rhs_without_constant: f64,
    pub min_constant: f64,
    pub divergence_flag: bool,
    pub top_octave_fraction: f64,
    pub truncation: Truncation,
    pub sharp_bound: Option<SharpBound>,
}

impl UncertaintyReport {
    /// Fails with an inequality error when a proved sharp bound is violated.
    pub fn assert_sharp_bound(&self) -> Result<()> {
        match self.sharp_bound {
            Some(sb) if !sb.holds => Err(Error::Inequality(format!(
                "min_constant {} exceeds {} on {}",
                self.min_constant, sb.constant, self.group
            ))),
            _ => Ok(()),
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    group: GroupKind,
    spec: MomentSpec,
    norm_sq: f64,
    window_norm_sq: Option<f64>,
    t: f64,
    dm: DualMoment,
    truncation: Truncation,
) -> Result<UncertaintyReport> {
    if t == 0.0 && dm.value == 0.0 {
        return Err(Error::Degenerate("both moments vanish".into()));
    }
    let mut lhs = norm_sq.sqrt().powf(1.0 / spec.a + 1.0 / spec.b);
    if let Some(wn) = window_norm_sq {
        lhs *= wn.sqrt().powf(1.0 / spec.b);
    }
    let rhs = t.powf(0.5 / spec.a) * dm.value.powf(0.5 / spec.b);
    let min_constant = if rhs > 0.0 { lhs / rhs } else { f64::INFINITY };
    let sharp_bound =
        if group == (GroupKind::Euclidean { dim: 1 }) && spec.a == 1.0 && spec.b == 1.0 {
            let constant = 4.0 * PI;
            Some(SharpBound {
                constant,
                tolerance: SHARP_BOUND_TOLERANCE,
                holds: dm.divergent || min_constant <= constant * (1.0 + SHARP_BOUND_TOLERANCE),
            })
        } else {
            None
        };
    Ok(UncertaintyReport {
        group,
        moments: spec,
        norm_sq,
        window_norm_sq,
        time_moment: t,
        freq_moment: dm.value,
        lhs,
        rhs_without_constant: rhs,
        min_constant,
        divergence_flag: dm.divergent,
        top_octave_fraction: dm.top_octave_fraction,
        truncation,
        sharp_bound,
    })
}

/// `‖f‖^{1/a+1/b} ≤ C (∫‖x‖^{2a}|f|²)^{1/2a} (Σ‖γ‖^{2b}‖π(f)‖²)^{1/2b}` for one signal.
pub fn heisenberg_report(
    f: &SampledSignal,
    fd: &FourierData,
    spec: MomentSpec,
) -> Result<UncertaintyReport> {
    MomentSpec::new(spec.a, spec.b)?;
    let norm_sq = f.l2_norm_sq();
    if norm_sq == 0.0 {
        return Err(Error::Degenerate("zero signal".into()));
    }
    let t = time_moment(f, spec.a)?;
    let dm = freq_moment_detail(fd, spec.b)?;
    assemble(f.group().kind(), spec, norm_sq, None, t, dm, fd.truncation)
}

/// Gabor variant with the `‖ψ‖^{1/b}` factor on the left and base-point
/// integration on the frequency side.
pub fn gabor_heisenberg_report(
    f: &SampledSignal,
    psi: &Window,
    field: &GaborField,
    spec: MomentSpec,
) -> Result<UncertaintyReport> {
    MomentSpec::new(spec.a, spec.b)?;
    let norm_sq = f.l2_norm_sq();
    if norm_sq == 0.0 {
        return Err(Error::Degenerate("zero signal".into()));
    }
    let t = time_moment(f, spec.a)?;
    let dm = gabor_freq_moment(field, spec.b)?;
    assemble(
        f.group().kind(),
        spec,
        norm_sq,
        Some(psi.norm_sq()),
        t,
        dm,
        field.truncation,
    )
}

/// Both sides of the discrete Hölder interpolation step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HoelderCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Relative slack allowed by [`hoelder_interpolation_check`].
pub const HOELDER_SLACK: f64 = 1e-12;

/// `Σ‖γ‖²E ≤ (Σ‖γ‖^{2b}E)^{1/b} (ΣE)^{1−1/b}` with `E = w_γ‖π_γ(f)‖²`.
pub fn hoelder_interpolation_check(fd: &FourierData, b: f64) -> Result<HoelderCheck> {
    check_exponent("b", b)?;
    let (mut lhs, mut high, mut mass) = (0.0, 0.0, 0.0);
    for (i, (&w, &m)) in fd
        .dual
        .weights()
        .iter()
        .zip(fd.dual.magnitudes())
        .enumerate()
    {
        let e = w * fd.entries.energy(i);
        lhs += m * m * e;
        high += m.powf(2.0 * b) * e;
        mass += e;
    }
    let rhs = high.powf(1.0 / b) * mass.powf(1.0 - 1.0 / b);
    Ok(HoelderCheck {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + HOELDER_SLACK),
    })
}
