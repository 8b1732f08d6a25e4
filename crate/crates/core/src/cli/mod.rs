//! Config-driven experiments and their CSV/JSON reports.
//!
//! CSV layout: a `# generated_at=<RFC 3339>` line, a header, then one row per
//! result with the columns of [`ReportRecord`] in declaration order. Fields
//! that do not apply to an experiment are left empty. Apart from the first
//! line the file is a pure function of the config and seed.

mod config;
mod families;

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gabor::{gabor_isometry_check, gabor_transform, BaseGrid, GaborField, Window};
use crate::groups::{dual_grid, make_group, GroupSpec};
use crate::io::write_gabor_field;
use crate::transforms::{fourier, plancherel_check, FourierData, SampledSignal, Truncation};
use crate::uncertainty::{
    gabor_heisenberg_report, heisenberg_report, hoelder_interpolation_check, optimize_window,
    MomentSpec, OptimizeSettings, UncertaintyReport,
};

pub use config::{
    ExperimentConfig, ExperimentKind, GaborConfig, HoelderConfig, OptimizeConfig, Outputs, Refine,
    SweepConfig, SCHEMA_VERSION,
};
pub use families::SignalSource;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_INEQUALITY: i32 = 4;

/// Exit status for an error surfaced by an experiment.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Inequality(_) => EXIT_INEQUALITY,
        Error::Degenerate(_) | Error::Resolution(_) | Error::Precondition(_) => EXIT_DEGENERATE,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRecord {
    pub experiment: String,
    pub group: String,
    pub level: usize,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub norm_sq: Option<f64>,
    pub time_moment: Option<f64>,
    pub freq_moment: Option<f64>,
    pub lhs: Option<f64>,
    pub rhs_without_constant: Option<f64>,
    pub min_constant: Option<f64>,
    pub divergence_flag: Option<bool>,
    pub hermite_order: Option<usize>,
    pub mode_cutoff: Option<usize>,
    pub dual_max: Option<f64>,
    pub dual_points: Option<usize>,
    /// Both sides of a Plancherel, isometry or Hölder check.
    pub check_lhs: Option<f64>,
    pub check_rhs: Option<f64>,
    pub rel_error: Option<f64>,
    pub captured_fraction: Option<f64>,
    /// Sharp-bound or Hölder verdict where one is asserted.
    pub holds: Option<bool>,
    pub window_params: Option<String>,
    pub fingerprint: String,
    pub version: String,
}

impl ReportRecord {
    fn blank(cfg: &ExperimentConfig, kind: ExperimentKind, level: usize) -> Self {
        ReportRecord {
            experiment: kind.name().into(),
            group: cfg.group.to_string(),
            level,
            a: None,
            b: None,
            norm_sq: None,
            time_moment: None,
            freq_moment: None,
            lhs: None,
            rhs_without_constant: None,
            min_constant: None,
            divergence_flag: None,
            hermite_order: None,
            mode_cutoff: None,
            dual_max: None,
            dual_points: None,
            check_lhs: None,
            check_rhs: None,
            rel_error: None,
            captured_fraction: None,
            holds: None,
            window_params: None,
            fingerprint: cfg.fingerprint(),
            version: VERSION.into(),
        }
    }

    fn truncation(&mut self, t: &Truncation) {
        self.hermite_order = t.hermite_order;
        self.mode_cutoff = t.mode_cutoff;
        self.dual_max = Some(t.dual_max);
        self.dual_points = Some(t.dual_points);
    }

    fn report(&mut self, r: &UncertaintyReport) {
        self.a = Some(r.moments.a);
        self.b = Some(r.moments.b);
        self.norm_sq = Some(r.norm_sq);
        self.time_moment = Some(r.time_moment);
        self.freq_moment = Some(r.freq_moment);
        self.lhs = Some(r.lhs);
        self.rhs_without_constant = Some(r.rhs_without_constant);
        self.min_constant = Some(r.min_constant);
        self.divergence_flag = Some(r.divergence_flag);
        self.holds = r.sharp_bound.map(|s| s.holds);
        self.truncation(&r.truncation);
    }

    /// True when this row records a failed asserted inequality.
    pub fn failed(&self) -> bool {
        self.holds == Some(false)
    }
}

struct Prepared {
    group: Arc<GroupSpec>,
    signal: SampledSignal,
}

fn prepare(cfg: &ExperimentConfig) -> Result<Prepared> {
    let group = Arc::new(make_group(cfg.group, &cfg.grids)?);
    let signal = cfg.signal.build(&group)?;
    Ok(Prepared { group, signal })
}

fn gabor_field(cfg: &ExperimentConfig, p: &Prepared) -> Result<(Window, GaborField)> {
    let w = cfg
        .window
        .as_ref()
        .ok_or_else(|| Error::Configuration("window missing".into()))?;
    let psi = Window::new(w.build(&p.group)?)?;
    let base = match &cfg.gabor.base_strides {
        Some(s) => BaseGrid::strided(&p.group, s)?,
        None => BaseGrid::full(&p.group)?,
    };
    let dual = dual_grid(&p.group, &cfg.transform.dual)?;
    let field = gabor_transform(&p.signal, &psi, &base, &dual, &cfg.transform)?;
    Ok((psi, field))
}

fn fourier_data(cfg: &ExperimentConfig, p: &Prepared) -> Result<FourierData> {
    fourier(&p.signal, &cfg.transform)
}

/// Runs one non-sweep experiment; `field_out` receives the Gabor field dump.
fn run_point(
    cfg: &ExperimentConfig,
    level: usize,
    field_out: Option<&Path>,
) -> Result<Vec<ReportRecord>> {
    let kind = cfg.kind()?;
    let p = prepare(cfg)?;
    let mut rec = ReportRecord::blank(cfg, kind, level);
    let spec = MomentSpec::new(cfg.moments.a, cfg.moments.b)?;
    match kind {
        ExperimentKind::Plancherel => {
            let fd = fourier_data(cfg, &p)?;
            let c = plancherel_check(&p.signal, &fd)?;
            rec.norm_sq = Some(c.lhs);
            rec.check_lhs = Some(c.lhs);
            rec.check_rhs = Some(c.rhs);
            rec.rel_error = Some(c.rel_error);
            rec.captured_fraction = fd.captured_fraction;
            rec.truncation(&fd.truncation);
        }
        ExperimentKind::Isometry => {
            let (psi, field) = gabor_field(cfg, &p)?;
            if let Some(path) = field_out {
                write_gabor_field(path, &field)?;
            }
            let c = gabor_isometry_check(&field, &p.signal, &psi)?;
            rec.norm_sq = Some(p.signal.l2_norm_sq());
            rec.check_lhs = Some(c.lhs);
            rec.check_rhs = Some(c.rhs);
            rec.rel_error = Some(c.rel_error);
            rec.truncation(&field.truncation);
        }
        ExperimentKind::Uncertainty => {
            let fd = fourier_data(cfg, &p)?;
            let r = heisenberg_report(&p.signal, &fd, spec)?;
            rec.report(&r);
            rec.captured_fraction = fd.captured_fraction;
        }
        ExperimentKind::GaborUncertainty => {
            let (psi, field) = gabor_field(cfg, &p)?;
            if let Some(path) = field_out {
                write_gabor_field(path, &field)?;
            }
            let r = gabor_heisenberg_report(&p.signal, &psi, &field, spec)?;
            rec.report(&r);
        }
        ExperimentKind::Hoelder => {
            let fd = fourier_data(cfg, &p)?;
            let mut rows = Vec::new();
            for &b in &cfg.hoelder.b {
                let h = hoelder_interpolation_check(&fd, b)?;
                let mut r = rec.clone();
                r.b = Some(b);
                r.check_lhs = Some(h.lhs);
                r.check_rhs = Some(h.rhs);
                r.holds = Some(h.holds);
                r.truncation(&fd.truncation);
                rows.push(r);
            }
            return Ok(rows);
        }
        ExperimentKind::OptimizeWindow => {
            let o = cfg
                .optimize
                .as_ref()
                .ok_or_else(|| Error::Configuration("optimize section missing".into()))?;
            let settings = OptimizeSettings {
                budget: o.budget,
                seed: cfg.seed,
                base_strides: cfg.gabor.base_strides.clone(),
                transform: cfg.transform,
            };
            let opt = optimize_window(&o.window, &p.signal, spec, &settings)?;
            if let Some(r) = &opt.report {
                rec.report(r);
            }
            rec.min_constant = Some(opt.min_constant);
            rec.divergence_flag = Some(opt.divergence_flag);
            rec.window_params = Some(
                opt.params
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(";"),
            );
        }
        ExperimentKind::Sweep => return Err(Error::Configuration("nested sweep".into())),
    }
    Ok(vec![rec])
}

/// Cross product of the sweep ranges, one set of rows per point, ordered by
/// `(a, b, level)`. Points run concurrently.
pub fn sweep(cfg: &ExperimentConfig) -> Result<Vec<ReportRecord>> {
    cfg.validate()?;
    let s = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Configuration("sweep section missing".into()))?;
    let a_vals = s.a.clone().unwrap_or_else(|| vec![cfg.moments.a]);
    let b_vals = s.b.clone().unwrap_or_else(|| vec![cfg.moments.b]);
    let mut points = Vec::new();
    for &a in &a_vals {
        for &b in &b_vals {
            for level in 0..s.levels {
                points.push((a, b, level));
            }
        }
    }
    points.sort_by(|x, y| {
        x.0.total_cmp(&y.0)
            .then(x.1.total_cmp(&y.1))
            .then(x.2.cmp(&y.2))
    });
    let rows = points
        .par_iter()
        .map(|&(a, b, level)| {
            run_point(
                &cfg.at_point(s.experiment, a, b, level, s.refine),
                level,
                None,
            )
        })
        .collect::<Vec<_>>();
    let mut out = Vec::new();
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

/// Computes the rows of a config without writing anything.
pub fn compute(cfg: &ExperimentConfig) -> Result<Vec<ReportRecord>> {
    cfg.validate()?;
    match cfg.kind()? {
        ExperimentKind::Sweep => sweep(cfg),
        _ => run_point(cfg, 0, None),
    }
}

/// CSV text with the timestamp line first.
pub fn render_csv(records: &[ReportRecord], generated_at: &str) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(|e| Error::Format(e.to_string()))?;
    }
    let body = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    let body = String::from_utf8(body).map_err(|e| Error::Format(e.to_string()))?;
    Ok(format!("# generated_at={generated_at}\n{body}"))
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    schema_version: u32,
    experiment: &'static str,
    fingerprint: String,
    version: &'static str,
    generated_at: &'a str,
    exit_code: i32,
    inequality_failures: usize,
    config: serde_json::Value,
    records: &'a [ReportRecord],
}

/// Result of [`run_experiment`].
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub records: Vec<ReportRecord>,
    pub csv_path: PathBuf,
    pub json_path: PathBuf,
    pub inequality_failures: usize,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.inequality_failures > 0 {
            EXIT_INEQUALITY
        } else {
            EXIT_OK
        }
    }
}

/// Validates, computes and writes the CSV and JSON reports.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let kind = cfg.kind()?;
    let dir = &cfg.outputs.dir;
    fs::create_dir_all(dir)?;
    let field_out = cfg.outputs.field.as_ref().map(|f| dir.join(f));
    let records = match kind {
        ExperimentKind::Sweep => sweep(cfg)?,
        _ => run_point(cfg, 0, field_out.as_deref())?,
    };
    let failures = records.iter().filter(|r| r.failed()).count();
    let generated_at = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let csv_path = dir.join(&cfg.outputs.csv);
    let json_path = dir.join(&cfg.outputs.json);
    fs::write(&csv_path, render_csv(&records, &generated_at)?)?;
    let summary = Summary {
        schema_version: SCHEMA_VERSION,
        experiment: kind.name(),
        fingerprint: cfg.fingerprint(),
        version: VERSION,
        generated_at: &generated_at,
        exit_code: if failures > 0 {
            EXIT_INEQUALITY
        } else {
            EXIT_OK
        },
        inequality_failures: failures,
        config: serde_json::from_str(&cfg.canonical_json()).expect("canonical json parses"),
        records: &records,
    };
    let json = serde_json::to_string_pretty(&summary).map_err(|e| Error::Format(e.to_string()))?;
    fs::write(&json_path, json + "\n")?;
    Ok(RunOutcome {
        records,
        csv_path,
        json_path,
        inequality_failures: failures,
    })
}

#[derive(Debug, Parser)]
#[command(
    name = "ncwave",
    version,
    about = "Group Fourier and Gabor transforms with uncertainty checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Experiment config (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory, overriding the config.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed, overriding the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Suppress the stdout summary.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Compare ∫|f|² with the dual-side Plancherel sum
    Plancherel,
    /// Compare ‖G_ψf‖² with ‖ψ‖²‖f‖²
    Isometry,
    /// Moments and minimal constant of the group uncertainty inequality
    Uncertainty,
    /// The same for the Gabor transform with the configured window
    GaborUncertainty,
    /// Hölder interpolation of dual moments for each configured b
    Hoelder,
    /// Search a window family for the smallest Gabor minimal constant
    OptimizeWindow,
    /// Repeat an experiment over (a, b) and refinement levels
    Sweep,
}

impl Command {
    pub fn kind(self) -> ExperimentKind {
        match self {
            Command::Plancherel => ExperimentKind::Plancherel,
            Command::Isometry => ExperimentKind::Isometry,
            Command::Uncertainty => ExperimentKind::Uncertainty,
            Command::GaborUncertainty => ExperimentKind::GaborUncertainty,
            Command::Hoelder => ExperimentKind::Hoelder,
            Command::OptimizeWindow => ExperimentKind::OptimizeWindow,
            Command::Sweep => ExperimentKind::Sweep,
        }
    }
}

/// Applies the command-line overrides to a loaded config.
pub fn effective_config(cli: &Cli) -> Result<ExperimentConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Configuration("--config <path> is required".into()))?;
    let mut cfg = ExperimentConfig::load(path)?;
    let kind = cli.command.kind();
    match cfg.experiment {
        Some(k) if k != kind => {
            return Err(Error::Configuration(format!(
                "config is for {} but {} was requested",
                k.name(),
                kind.name()
            )))
        }
        _ => cfg.experiment = Some(kind),
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.outputs.dir = o.clone();
    }
    Ok(cfg)
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let outcome = effective_config(&cli).and_then(|cfg| run_experiment(&cfg));
    match outcome {
        Ok(o) => {
            if !cli.quiet {
                for r in &o.records {
                    println!("{}", summary_line(r));
                }
                println!(
                    "wrote {} and {}",
                    o.csv_path.display(),
                    o.json_path.display()
                );
            }
            if o.inequality_failures > 0 {
                eprintln!(
                    "error: {} asserted inequality check(s) failed",
                    o.inequality_failures
                );
            }
            o.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn summary_line(r: &ReportRecord) -> String {
    let mut s = format!("{} {} level={}", r.experiment, r.group, r.level);
    let mut push = |name: &str, v: Option<String>| {
        if let Some(v) = v {
            s.push_str(&format!(" {name}={v}"));
        }
    };
    push("a", r.a.map(|v| v.to_string()));
    push("b", r.b.map(|v| v.to_string()));
    push("min_constant", r.min_constant.map(|v| format!("{v:.9}")));
    push("rel_error", r.rel_error.map(|v| format!("{v:.3e}")));
    push("divergent", r.divergence_flag.map(|v| v.to_string()));
    push("holds", r.holds.map(|v| v.to_string()));
    push("window", r.window_params.clone());
    s
}
