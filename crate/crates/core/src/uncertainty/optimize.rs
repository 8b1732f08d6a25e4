//! Derivative-free search over parametric window families.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{gabor_heisenberg_report, MomentSpec, UncertaintyReport};
use crate::error::{Error, Result};
use crate::gabor::{gabor_transform, BaseGrid, Window};
use crate::groups::{dual_grid, GroupSpec};
use crate::numerics::hermite_functions;
use crate::transforms::{SampledSignal, TransformConfig};

/// Parametric window families; each field is a `[lo, hi]` search interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WindowFamily {
    /// `exp(−π (x/s)²)` on every real-line coordinate.
    GaussianWidth { width: [f64; 2] },
    /// `exp(−π ((x₁−c)/s)²)` on the first real-line coordinate.
    GaussianWidthCenter { width: [f64; 2], center: [f64; 2] },
    /// `h₀(u) + c·h₂(u)` with `u = √(2π) x₁/s`.
    GaussianHermiteMix { width: [f64; 2], mix: [f64; 2] },
}

impl WindowFamily {
    pub fn dim(&self) -> usize {
        match self {
            WindowFamily::GaussianWidth { .. } => 1,
            _ => 2,
        }
    }

    pub fn bounds(&self) -> Vec<[f64; 2]> {
        match *self {
            WindowFamily::GaussianWidth { width } => vec![width],
            WindowFamily::GaussianWidthCenter { width, center } => vec![width, center],
            WindowFamily::GaussianHermiteMix { width, mix } => vec![width, mix],
        }
    }

    fn validate(&self) -> Result<()> {
        for (i, [lo, hi]) in self.bounds().into_iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Configuration(format!(
                    "parameter {i} needs lo < hi, got [{lo}, {hi}]"
                )));
            }
        }
        if self.bounds()[0][0] <= 0.0 {
            return Err(Error::Configuration(
                "window widths must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Samples the window with parameters `p` on the group grid.
    pub fn build(&self, group: &Arc<GroupSpec>, p: &[f64]) -> Result<SampledSignal> {
        if p.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                actual: p.len(),
            });
        }
        let lines: Vec<usize> = (0..group.axes().len())
            .filter(|&i| group.axes()[i].is_line())
            .collect();
        let Some(&first) = lines.first() else {
            return Err(Error::Capability(format!(
                "window families need a real-line coordinate, {} has none",
                group.kind()
            )));
        };
        let width = p[0];
        let gauss = |x: f64| (-PI * (x / width).powi(2)).exp();
        let family = *self;
        SampledSignal::from_fn(group.clone(), move |x| {
            let rest: f64 = lines
                .iter()
                .filter(|&&i| i != first)
                .map(|&i| gauss(x[i]))
                .product();
            let v = match family {
                WindowFamily::GaussianWidth { .. } => gauss(x[first]),
                WindowFamily::GaussianWidthCenter { .. } => gauss(x[first] - p[1]),
                WindowFamily::GaussianHermiteMix { .. } => {
                    let u = (2.0 * PI).sqrt() * x[first] / width;
                    let h = hermite_functions(2, u).expect("order 2 is supported");
                    h[0] + p[1] * h[2]
                }
            };
            Complex64::new(v * rest, 0.0)
        })
    }
}

/// Search settings: evaluation budget, seed and the grids of each evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeSettings {
    pub budget: usize,
    #[serde(default)]
    pub seed: u64,
    /// Base-grid strides (`None` uses the full signal grid).
    #[serde(default)]
    pub base_strides: Option<Vec<usize>>,
    #[serde(default)]
    pub transform: TransformConfig,
}

impl OptimizeSettings {
    pub fn with_budget(budget: usize) -> Self {
        OptimizeSettings {
            budget,
            seed: 0,
            base_strides: None,
            transform: TransformConfig::default(),
        }
    }
}

/// One objective evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub params: Vec<f64>,
    /// `rhs_without_constant / lhs`; `+∞` when the window is degenerate.
    pub objective: f64,
    pub divergence_flag: bool,
}

/// Result of [`optimize_window`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowOptimum {
    pub params: Vec<f64>,
    pub objective: f64,
    pub min_constant: f64,
    pub divergence_flag: bool,
    /// Some parameter sits on its search bound.
    pub at_boundary: bool,
    pub report: Option<UncertaintyReport>,
    pub trace: Vec<Evaluation>,
}

struct Objective<'a> {
    family: WindowFamily,
    f: &'a SampledSignal,
    spec: MomentSpec,
    base: BaseGrid,
    dual: crate::groups::DualGrid,
    cfg: TransformConfig,
    trace: Vec<Evaluation>,
    budget: usize,
}

impl Objective<'_> {
    fn report(&self, p: &[f64]) -> Result<UncertaintyReport> {
        let psi = Window::new(self.family.build(self.f.group_arc(), p)?)?;
        let field = gabor_transform(self.f, &psi, &self.base, &self.dual, &self.cfg)?;
        gabor_heisenberg_report(self.f, &psi, &field, self.spec)
    }

    fn exhausted(&self) -> bool {
        self.trace.len() >= self.budget
    }

    fn eval(&mut self, p: &[f64]) -> f64 {
        let (objective, divergence_flag) = match self.report(p) {
            Ok(r) if r.lhs > 0.0 => (r.rhs_without_constant / r.lhs, r.divergence_flag),
            _ => (f64::INFINITY, false),
        };
        self.trace.push(Evaluation {
            params: p.to_vec(),
            objective,
            divergence_flag,
        });
        objective
    }
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

/// Smaller objective first, ties broken by the lexicographically smaller parameters.
fn better(a: &Evaluation, b: &Evaluation) -> bool {
    match a.objective.total_cmp(&b.objective) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => lexicographic(&a.params, &b.params) == Ordering::Less,
    }
}

fn golden_section(obj: &mut Objective<'_>, [lo, hi]: [f64; 2]) {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    obj.eval(&[lo]);
    obj.eval(&[hi]);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    if obj.exhausted() {
        return;
    }
    let mut fc = obj.eval(&[c]);
    if obj.exhausted() {
        return;
    }
    let mut fd = obj.eval(&[d]);
    while !obj.exhausted() {
        // ties keep the left (smaller) point
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = obj.eval(&[c]);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = obj.eval(&[d]);
        }
    }
}

fn clamp_into(p: &mut [f64], bounds: &[[f64; 2]]) {
    for (v, [lo, hi]) in p.iter_mut().zip(bounds) {
        *v = v.clamp(*lo, *hi);
    }
}

fn nelder_mead(obj: &mut Objective<'_>, bounds: &[[f64; 2]], seed: u64) {
    let n = bounds.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x0: Vec<f64> = bounds
        .iter()
        .map(|[lo, hi]| 0.5 * (lo + hi) + 0.01 * (hi - lo) * rng.gen_range(-1.0..1.0))
        .collect();
    clamp_into(&mut x0, bounds);
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = obj.eval(&x0);
    simplex.push((x0.clone(), f0));
    for i in 0..n {
        if obj.exhausted() {
            return;
        }
        let mut x = x0.clone();
        x[i] += 0.25 * (bounds[i][1] - bounds[i][0]);
        clamp_into(&mut x, bounds);
        let fx = obj.eval(&x);
        simplex.push((x, fx));
    }
    let order = |s: &mut Vec<(Vec<f64>, f64)>| {
        s.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| lexicographic(&a.0, &b.0)));
    };
    let toward = |base: &[f64], dir: &[f64], t: f64| -> Vec<f64> {
        let mut p: Vec<f64> = base.iter().zip(dir).map(|(b, d)| b + t * (d - b)).collect();
        clamp_into(&mut p, bounds);
        p
    };
    while !obj.exhausted() {
        order(&mut simplex);
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(x, _)| x[k]).sum::<f64>() / n as f64)
            .collect();
        let (worst, fw) = simplex[n].clone();
        let xr = toward(&centroid, &worst, -1.0);
        let fr = obj.eval(&xr);
        if fr < simplex[0].1 {
            if obj.exhausted() {
                simplex[n] = (xr, fr);
                break;
            }
            let xe = toward(&centroid, &worst, -2.0);
            let fe = obj.eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            if obj.exhausted() {
                break;
            }
            let (xc, fc) = if fr < fw {
                let x = toward(&centroid, &xr, 0.5);
                let v = obj.eval(&x);
                (x, v)
            } else {
                let x = toward(&centroid, &worst, 0.5);
                let v = obj.eval(&x);
                (x, v)
            };
            if fc < fw.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for item in simplex.iter_mut().skip(1) {
                    if obj.exhausted() {
                        break;
                    }
                    let x = toward(&best, &item.0, 0.5);
                    let v = obj.eval(&x);
                    *item = (x, v);
                }
            }
        }
    }
}

/// Minimizes `rhs_without_constant / lhs` of the Gabor uncertainty report over
/// the window family. Golden-section search for one parameter, Nelder–Mead
/// with box clamping for two or three; deterministic given seed and budget.
pub fn optimize_window(
    family: &WindowFamily,
    f: &SampledSignal,
    spec: MomentSpec,
    settings: &OptimizeSettings,
) -> Result<WindowOptimum> {
    family.validate()?;
    MomentSpec::new(spec.a, spec.b)?;
    if settings.budget < 10 {
        return Err(Error::Configuration(format!(
            "optimizer budget must be at least 10, got {}",
            settings.budget
        )));
    }
    if f.is_zero() {
        return Err(Error::Degenerate("zero signal".into()));
    }
    let g = f.group();
    let base = match &settings.base_strides {
        Some(s) => BaseGrid::strided(g, s)?,
        None => BaseGrid::full(g)?,
    };
    let dual = dual_grid(g, &settings.transform.dual)?;
    // surface configuration errors before the search swallows them
    family.build(
        f.group_arc(),
        &family.bounds().iter().map(|b| b[0]).collect::<Vec<_>>(),
    )?;
    let mut obj = Objective {
        family: *family,
        f,
        spec,
        base,
        dual,
        cfg: settings.transform,
        trace: Vec::new(),
        budget: settings.budget,
    };
    let bounds = family.bounds();
    match bounds.len() {
        1 => golden_section(&mut obj, bounds[0]),
        2 | 3 => nelder_mead(&mut obj, &bounds, settings.seed),
        d => {
            return Err(Error::Capability(format!(
                "{d}-parameter families are not supported"
            )))
        }
    }
    let best = obj
        .trace
        .iter()
        .fold(None::<&Evaluation>, |acc, e| match acc {
            Some(b) if !better(e, b) => Some(b),
            _ => Some(e),
        })
        .cloned()
        .expect("budget ≥ 10 guarantees evaluations");
    let report = obj.report(&best.params).ok();
    let at_boundary = best.params.iter().zip(&bounds).any(|(v, [lo, hi])| {
        (v - lo).abs() <= 1e-12 * lo.abs().max(1.0) || (v - hi).abs() <= 1e-12 * hi.abs().max(1.0)
    });
    Ok(WindowOptimum {
        min_constant: report.as_ref().map_or(f64::NAN, |r| r.min_constant),
        divergence_flag: best.divergence_flag,
        params: best.params,
        objective: best.objective,
        at_boundary,
        report,
        trace: obj.trace,
    })
}
