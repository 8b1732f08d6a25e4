use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::groups::{AxisConfig, GroupKind};
use crate::numerics::Rule;
use crate::transforms::TransformConfig;
use crate::uncertainty::{MomentSpec, WindowFamily};

use super::families::SignalSource;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Plancherel,
    Isometry,
    Uncertainty,
    GaborUncertainty,
    Hoelder,
    OptimizeWindow,
    Sweep,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Plancherel => "plancherel",
            ExperimentKind::Isometry => "isometry",
            ExperimentKind::Uncertainty => "uncertainty",
            ExperimentKind::GaborUncertainty => "gabor-uncertainty",
            ExperimentKind::Hoelder => "hoelder",
            ExperimentKind::OptimizeWindow => "optimize-window",
            ExperimentKind::Sweep => "sweep",
        }
    }

    fn needs_window(self) -> bool {
        matches!(
            self,
            ExperimentKind::Isometry | ExperimentKind::GaborUncertainty
        )
    }
}

/// Base-grid choice for Gabor experiments.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaborConfig {
    /// Per-axis strides into the signal grid; absent means every sample.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_strides: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeConfig {
    pub window: WindowFamily,
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HoelderConfig {
    pub b: Vec<f64>,
}

impl Default for HoelderConfig {
    fn default() -> Self {
        HoelderConfig {
            b: vec![1.5, 2.0, 3.0],
        }
    }
}

/// What a grid level doubles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Refine {
    #[serde(default = "yes")]
    pub grids: bool,
    #[serde(default = "yes")]
    pub dual: bool,
    #[serde(default)]
    pub orders: bool,
}

fn yes() -> bool {
    true
}

impl Default for Refine {
    fn default() -> Self {
        Refine {
            grids: true,
            dual: true,
            orders: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Experiment run at every sweep point.
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
    /// Number of dyadic grid levels, level 0 being the configured grids.
    #[serde(default = "one")]
    pub levels: usize,
    #[serde(default)]
    pub refine: Refine,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_csv")]
    pub csv: String,
    #[serde(default = "default_json")]
    pub json: String,
    /// Optional dense dump of the Gabor field (isometry and gabor-uncertainty).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}

fn default_dir() -> PathBuf {
    PathBuf::from(".")
}
fn default_csv() -> String {
    "report.csv".into()
}
fn default_json() -> String {
    "summary.json".into()
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs {
            dir: default_dir(),
            csv: default_csv(),
            json: default_json(),
            field: None,
        }
    }
}

/// One experiment, as read from a JSON config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    pub group: GroupKind,
    pub grids: Vec<AxisConfig>,
    pub signal: SignalSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<SignalSource>,
    #[serde(default)]
    pub moments: MomentSpec,
    #[serde(default)]
    pub transform: TransformConfig,
    #[serde(default)]
    pub gabor: GaborConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimize: Option<OptimizeConfig>,
    #[serde(default)]
    pub hoelder: HoelderConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub outputs: Outputs,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::Configuration(format!("config parse error: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| {
            Error::Configuration(format!("cannot read config {}: {e}", path.display()))
        })?;
        let mut cfg = Self::from_json(&text)?;
        // relative sample paths are resolved against the config location
        if let Some(dir) = path.parent() {
            cfg.signal.resolve_paths(dir);
            if let Some(w) = cfg.window.as_mut() {
                w.resolve_paths(dir);
            }
        }
        Ok(cfg)
    }

    pub fn kind(&self) -> Result<ExperimentKind> {
        self.experiment
            .ok_or_else(|| Error::Configuration("no experiment kind given".into()))
    }

    /// Checks that the experiment kind's required fields are present.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Configuration(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let kind = self.kind()?;
        MomentSpec::new(self.moments.a, self.moments.b).map_err(as_config)?;
        if self.grids.len() != self.group.configured_axes() {
            return Err(Error::Configuration(format!(
                "{} needs {} grids, got {}",
                self.group,
                self.group.configured_axes(),
                self.grids.len()
            )));
        }
        let inner = match kind {
            ExperimentKind::Sweep => {
                let s = self.sweep.as_ref().ok_or_else(|| {
                    Error::Configuration("sweep experiment needs a sweep section".into())
                })?;
                if matches!(s.experiment, ExperimentKind::Sweep) {
                    return Err(Error::Configuration("sweeps cannot nest".into()));
                }
                if s.levels == 0 {
                    return Err(Error::Configuration(
                        "sweep needs at least one level".into(),
                    ));
                }
                for (name, vals) in [("a", &s.a), ("b", &s.b)] {
                    if let Some(v) = vals {
                        if v.is_empty() {
                            return Err(Error::Configuration(format!(
                                "sweep range {name} is empty"
                            )));
                        }
                        for &x in v {
                            if !(x >= 1.0 && x.is_finite()) {
                                return Err(Error::Configuration(format!(
                                    "sweep value {name} = {x} must be ≥ 1"
                                )));
                            }
                        }
                    }
                }
                s.experiment
            }
            k => k,
        };
        if inner.needs_window() && self.window.is_none() {
            return Err(Error::Configuration(format!(
                "{} needs a window",
                inner.name()
            )));
        }
        if matches!(inner, ExperimentKind::OptimizeWindow) && self.optimize.is_none() {
            return Err(Error::Configuration(
                "optimize-window needs an optimize section".into(),
            ));
        }
        if matches!(inner, ExperimentKind::Hoelder) {
            if self.hoelder.b.is_empty() {
                return Err(Error::Configuration("hoelder needs at least one b".into()));
            }
            for &b in &self.hoelder.b {
                MomentSpec::new(1.0, b).map_err(as_config)?;
            }
        }
        Ok(())
    }

    /// Canonical JSON: sorted keys, outputs excluded, compact separators.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("outputs");
        }
        v.to_string()
    }

    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }

    /// The single-experiment config of one sweep point.
    pub fn at_point(
        &self,
        inner: ExperimentKind,
        a: f64,
        b: f64,
        level: usize,
        refine: Refine,
    ) -> Self {
        let mut c = self.clone();
        c.experiment = Some(inner);
        c.sweep = None;
        c.moments = MomentSpec { a, b };
        let k = 1usize << level;
        if refine.grids {
            for g in &mut c.grids {
                g.n = match g.rule {
                    Rule::Periodic => g.n * k,
                    Rule::Trapezoid | Rule::EndCorrected => (g.n.max(1) - 1) * k + 1,
                };
            }
        }
        if refine.dual {
            c.transform.dual.lambda_points *= k;
            c.transform.dual.r_points *= k;
        }
        if refine.orders {
            c.transform.hermite_order *= k;
            c.transform.mode_cutoff *= k;
        }
        c
    }
}

fn as_config(e: Error) -> Error {
    Error::Configuration(e.to_string())
}
