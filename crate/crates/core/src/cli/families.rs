use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::GroupSpec;
use crate::io::ingest_signal;
use crate::numerics::{hermite_functions, HERMITE_MAX_ORDER};
use crate::transforms::SampledSignal;

/// Named signal families. Real-line coordinates not shaped by the family
/// carry a unit-width Gaussian `exp(−πx²)`; compact coordinates are constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum SignalSource {
    /// `Π exp(−π((xᵢ−cᵢ)/wᵢ)²)` over the real-line coordinates; one value
    /// broadcasts to every coordinate.
    Gaussian {
        width: Vec<f64>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        center: Vec<f64>,
    },
    /// `Σₖ weights[k]·hₖ(√(2π)x/width)`, `k ≤ order`, on the first real-line coordinate.
    HermiteMix {
        order: usize,
        weights: Vec<f64>,
        #[serde(default = "unit")]
        width: f64,
    },
    /// Indicator of `[lo, hi]` on the first real-line coordinate.
    Box { lo: f64, hi: f64 },
    /// `sin(2π·freq·x)·exp(−π(x/width)²)` on the first real-line coordinate.
    SineGaussian { freq: f64, width: f64 },
    /// Samples from a dense binary signal file.
    File { path: PathBuf },
}

fn unit() -> f64 {
    1.0
}

impl SignalSource {
    pub(crate) fn resolve_paths(&mut self, dir: &Path) {
        if let SignalSource::File { path } = self {
            if path.is_relative() {
                *path = dir.join(&*path);
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            SignalSource::Gaussian { width, center } => {
                format!("gaussian(w={width:?},c={center:?})")
            }
            SignalSource::HermiteMix {
                order,
                weights,
                width,
            } => {
                format!("hermite_mix(N={order},w={weights:?},s={width})")
            }
            SignalSource::Box { lo, hi } => format!("box({lo},{hi})"),
            SignalSource::SineGaussian { freq, width } => {
                format!("sine_gaussian(f={freq},w={width})")
            }
            SignalSource::File { path } => format!("file({})", path.display()),
        }
    }

    pub fn build(&self, group: &Arc<GroupSpec>) -> Result<SampledSignal> {
        let lines: Vec<usize> = (0..group.axes().len())
            .filter(|&i| group.axes()[i].is_line())
            .collect();
        if lines.is_empty() && !matches!(self, SignalSource::File { .. }) {
            return Err(Error::Capability(format!(
                "{} has no real-line coordinate",
                group.kind()
            )));
        }
        let first = lines.first().copied().unwrap_or(0);
        let bell = |x: f64| (-PI * x * x).exp();
        let others = {
            let lines = lines.clone();
            move |x: &[f64]| -> f64 {
                lines
                    .iter()
                    .filter(|&&i| i != first)
                    .map(|&i| bell(x[i]))
                    .product()
            }
        };
        match self {
            SignalSource::Gaussian { width, center } => {
                let w = broadcast("width", width, lines.len())?;
                let c = if center.is_empty() {
                    vec![0.0; lines.len()]
                } else {
                    broadcast("center", center, lines.len())?
                };
                if w.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
                    return Err(Error::Configuration(
                        "gaussian widths must be positive".into(),
                    ));
                }
                SampledSignal::from_real_fn(group.clone(), move |x| {
                    lines
                        .iter()
                        .enumerate()
                        .map(|(k, &i)| bell((x[i] - c[k]) / w[k]))
                        .product()
                })
            }
            SignalSource::HermiteMix {
                order,
                weights,
                width,
            } => {
                let (order, width) = (*order, *width);
                if order > HERMITE_MAX_ORDER {
                    return Err(Error::Capability(format!(
                        "hermite_mix order {order} exceeds {HERMITE_MAX_ORDER}"
                    )));
                }
                if weights.len() != order + 1 {
                    return Err(Error::Configuration(format!(
                        "hermite_mix of order {order} needs {} weights, got {}",
                        order + 1,
                        weights.len()
                    )));
                }
                if !(width > 0.0 && width.is_finite()) {
                    return Err(Error::Configuration(
                        "hermite_mix width must be positive".into(),
                    ));
                }
                let weights = weights.clone();
                let scale = (2.0 * PI).sqrt() / width;
                SampledSignal::from_real_fn(group.clone(), move |x| {
                    let h = hermite_functions(order, scale * x[first]).expect("order checked");
                    let v: f64 = h.iter().zip(&weights).map(|(a, b)| a * b).sum();
                    v * others(x)
                })
            }
            SignalSource::Box { lo, hi } => {
                let (lo, hi) = (*lo, *hi);
                if !(lo < hi) {
                    return Err(Error::Configuration(format!(
                        "box needs lo < hi, got [{lo}, {hi}]"
                    )));
                }
                SampledSignal::from_real_fn(group.clone(), move |x| {
                    let t = x[first];
                    if (lo..=hi).contains(&t) {
                        others(x)
                    } else {
                        0.0
                    }
                })
            }
            SignalSource::SineGaussian { freq, width } => {
                let (freq, width) = (*freq, *width);
                if !(width > 0.0 && width.is_finite() && freq.is_finite()) {
                    return Err(Error::Configuration(
                        "sine_gaussian needs finite freq and positive width".into(),
                    ));
                }
                SampledSignal::from_real_fn(group.clone(), move |x| {
                    let t = x[first];
                    (2.0 * PI * freq * t).sin() * bell(t / width) * others(x)
                })
            }
            SignalSource::File { path } => ingest_signal(path, group),
        }
    }
}

fn broadcast(name: &str, v: &[f64], n: usize) -> Result<Vec<f64>> {
    match v.len() {
        1 => Ok(vec![v[0]; n]),
        k if k == n => Ok(v.to_vec()),
        k => Err(Error::Configuration(format!(
            "{name} has {k} entries, expected 1 or {n}"
        ))),
    }
}
