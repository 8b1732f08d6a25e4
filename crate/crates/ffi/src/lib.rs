//! C ABI over `ncwave`.
//!
//! Every function returns an [`NcwStatus`]; on failure the message is
//! available from [`ncw_last_error_message`] on the same thread. Handles are
//! opaque and must be released with their `_free` function. Panics are caught
//! at the boundary and reported as `NCW_STATUS_PANIC`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;
use std::sync::Arc;

use ncwave::groups::{make_group, AxisConfig, DualConfig, GroupKind, GroupSpec};
use ncwave::numerics::Rule;
use ncwave::transforms::{
    fourier, plancherel_check, FourierData, MotionPath, SampledSignal, TransformConfig,
};
use ncwave::uncertainty::{heisenberg_report, MomentSpec};
use ncwave::{io, Error};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcwStatus {
    Ok = 0,
    NullPointer = 1,
    Dimension = 2,
    Capability = 3,
    Configuration = 4,
    Precondition = 5,
    Kind = 6,
    Degenerate = 7,
    Domain = 8,
    Resolution = 9,
    Alignment = 10,
    Format = 11,
    Io = 12,
    Inequality = 13,
    Panic = 14,
}

impl From<&Error> for NcwStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Dimension { .. } => NcwStatus::Dimension,
            Error::Capability(_) => NcwStatus::Capability,
            Error::Configuration(_) => NcwStatus::Configuration,
            Error::Precondition(_) => NcwStatus::Precondition,
            Error::Kind(_) => NcwStatus::Kind,
            Error::Degenerate(_) => NcwStatus::Degenerate,
            Error::Domain(_) => NcwStatus::Domain,
            Error::Resolution(_) => NcwStatus::Resolution,
            Error::Alignment(_) => NcwStatus::Alignment,
            Error::Format(_) => NcwStatus::Format,
            Error::Io(_) => NcwStatus::Io,
            Error::Inequality(_) => NcwStatus::Inequality,
        }
    }
}

/// Group kind tags accepted by [`ncw_group_new`].
pub const NCW_KIND_EUCLIDEAN: u8 = 0;
pub const NCW_KIND_HEISENBERG1: u8 = 1;
pub const NCW_KIND_MOTION2: u8 = 2;
pub const NCW_KIND_PRODUCT_R_Z: u8 = 3;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcwRule {
    Periodic = 0,
    Trapezoid = 1,
    EndCorrected = 2,
}

/// Grid of one configured coordinate. `has_bounds = 0` leaves `lo`/`hi`
/// unset, as for the angle of M(2).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct NcwAxis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub rule: NcwRule,
    pub has_bounds: u8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NcwMotionPath {
    Bessel = 0,
    Direct = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct NcwTransformOptions {
    pub lambda_max: f64,
    pub lambda_points: usize,
    pub r_max: f64,
    pub r_points: usize,
    pub hermite_order: usize,
    pub mode_cutoff: usize,
    pub motion_path: NcwMotionPath,
    pub circle_points: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct NcwPlancherel {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct NcwUncertainty {
    pub norm_sq: f64,
    pub time_moment: f64,
    pub freq_moment: f64,
    pub lhs: f64,
    pub rhs_without_constant: f64,
    pub min_constant: f64,
    pub divergence_flag: u8,
    /// 1 holds, 0 violated, −1 when no sharp constant applies.
    pub sharp_bound_holds: i8,
}

pub struct NcwGroup(Arc<GroupSpec>);
pub struct NcwSignal(SampledSignal);
pub struct NcwFourier(FourierData);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), (NcwStatus, String)>) -> NcwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            NcwStatus::Ok
        }
        Ok(Err((s, m))) => {
            set_error(&m);
            s
        }
        Err(p) => {
            let m = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {m}"));
            NcwStatus::Panic
        }
    }
}

fn lift(e: Error) -> (NcwStatus, String) {
    (NcwStatus::from(&e), e.to_string())
}

fn null(name: &str) -> (NcwStatus, String) {
    (NcwStatus::NullPointer, format!("{name} is null"))
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, (NcwStatus, String)> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn path_arg(p: *const c_char) -> Result<String, (NcwStatus, String)> {
    if p.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(str::to_owned)
        .map_err(|_| (NcwStatus::Configuration, "path is not valid UTF-8".into()))
}

/// Message of the last failing call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn ncw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub unsafe extern "C" fn ncw_group_new(
    kind: u8,
    param: u32,
    axes: *const NcwAxis,
    n_axes: usize,
    out: *mut *mut NcwGroup,
) -> NcwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let kind = GroupKind::from_tag(kind, param).ok_or_else(|| {
            (
                NcwStatus::Configuration,
                format!("unknown group kind tag {kind}"),
            )
        })?;
        let axes = if n_axes == 0 {
            &[][..]
        } else {
            if axes.is_null() {
                return Err(null("axes"));
            }
            slice::from_raw_parts(axes, n_axes)
        };
        let cfg: Vec<AxisConfig> = axes
            .iter()
            .map(|a| AxisConfig {
                lo: (a.has_bounds != 0).then_some(a.lo),
                hi: (a.has_bounds != 0).then_some(a.hi),
                n: a.n,
                rule: match a.rule {
                    NcwRule::Periodic => Rule::Periodic,
                    NcwRule::Trapezoid => Rule::Trapezoid,
                    NcwRule::EndCorrected => Rule::EndCorrected,
                },
            })
            .collect();
        let g = make_group(kind, &cfg).map_err(lift)?;
        *out = Box::into_raw(Box::new(NcwGroup(Arc::new(g))));
        Ok(())
    })
}

/// Number of samples a signal on this group holds.
#[no_mangle]
pub unsafe extern "C" fn ncw_group_len(group: *const NcwGroup, out: *mut usize) -> NcwStatus {
    guard(|| {
        let g = deref(group, "group")?;
        *out.as_mut().ok_or_else(|| null("out"))? = g.0.len();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ncw_group_free(group: *mut NcwGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Builds a signal from `len` samples in row-major order. `im` may be null
/// for a real signal.
#[no_mangle]
pub unsafe extern "C" fn ncw_signal_from_samples(
    group: *const NcwGroup,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut NcwSignal,
) -> NcwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let g = deref(group, "group")?;
        if re.is_null() {
            return Err(null("re"));
        }
        let re = slice::from_raw_parts(re, len);
        let values: Vec<Complex64> = if im.is_null() {
            re.iter().map(|&r| Complex64::new(r, 0.0)).collect()
        } else {
            let im = slice::from_raw_parts(im, len);
            re.iter()
                .zip(im)
                .map(|(&r, &i)| Complex64::new(r, i))
                .collect()
        };
        let s = SampledSignal::new(g.0.clone(), values).map_err(lift)?;
        *out = Box::into_raw(Box::new(NcwSignal(s)));
        Ok(())
    })
}

/// Reads a dense binary signal whose grids must match `group`.
#[no_mangle]
pub unsafe extern "C" fn ncw_signal_read(
    group: *const NcwGroup,
    path: *const c_char,
    out: *mut *mut NcwSignal,
) -> NcwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let g = deref(group, "group")?;
        let s = io::ingest_signal(path_arg(path)?, &g.0).map_err(lift)?;
        *out = Box::into_raw(Box::new(NcwSignal(s)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ncw_signal_write(
    signal: *const NcwSignal,
    path: *const c_char,
) -> NcwStatus {
    guard(|| {
        let s = deref(signal, "signal")?;
        io::write_signal(path_arg(path)?, &s.0).map_err(lift)
    })
}

/// Copies the samples into caller buffers of length `len`; `im` may be null.
#[no_mangle]
pub unsafe extern "C" fn ncw_signal_samples(
    signal: *const NcwSignal,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> NcwStatus {
    guard(|| {
        let s = deref(signal, "signal")?;
        let v = s.0.values();
        if len != v.len() {
            return Err(lift(Error::Dimension {
                expected: v.len(),
                actual: len,
            }));
        }
        if re.is_null() {
            return Err(null("re"));
        }
        let re = slice::from_raw_parts_mut(re, len);
        for (r, z) in re.iter_mut().zip(v) {
            *r = z.re;
        }
        if !im.is_null() {
            for (i, z) in slice::from_raw_parts_mut(im, len).iter_mut().zip(v) {
                *i = z.im;
            }
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ncw_signal_norm_sq(signal: *const NcwSignal, out: *mut f64) -> NcwStatus {
    guard(|| {
        let s = deref(signal, "signal")?;
        *out.as_mut().ok_or_else(|| null("out"))? = s.0.l2_norm_sq();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ncw_signal_free(signal: *mut NcwSignal) {
    if !signal.is_null() {
        drop(Box::from_raw(signal));
    }
}

/// Library defaults for [`ncw_fourier`].
#[no_mangle]
pub extern "C" fn ncw_transform_options_default() -> NcwTransformOptions {
    let c = TransformConfig::default();
    NcwTransformOptions {
        lambda_max: c.dual.lambda_max,
        lambda_points: c.dual.lambda_points,
        r_max: c.dual.r_max,
        r_points: c.dual.r_points,
        hermite_order: c.hermite_order,
        mode_cutoff: c.mode_cutoff,
        motion_path: NcwMotionPath::Bessel,
        circle_points: c.circle_points,
    }
}

/// Group Fourier transform; `options` may be null for the defaults.
#[no_mangle]
pub unsafe extern "C" fn ncw_fourier(
    signal: *const NcwSignal,
    options: *const NcwTransformOptions,
    out: *mut *mut NcwFourier,
) -> NcwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let s = deref(signal, "signal")?;
        let o = options
            .as_ref()
            .copied()
            .unwrap_or_else(|| ncw_transform_options_default());
        let cfg = TransformConfig {
            dual: DualConfig {
                lambda_max: o.lambda_max,
                lambda_points: o.lambda_points,
                r_max: o.r_max,
                r_points: o.r_points,
            },
            hermite_order: o.hermite_order,
            mode_cutoff: o.mode_cutoff,
            motion_path: match o.motion_path {
                NcwMotionPath::Bessel => MotionPath::Bessel,
                NcwMotionPath::Direct => MotionPath::Direct,
            },
            circle_points: o.circle_points,
        };
        let fd = fourier(&s.0, &cfg).map_err(lift)?;
        *out = Box::into_raw(Box::new(NcwFourier(fd)));
        Ok(())
    })
}

/// Number of dual points.
#[no_mangle]
pub unsafe extern "C" fn ncw_fourier_len(fd: *const NcwFourier, out: *mut usize) -> NcwStatus {
    guard(|| {
        let f = deref(fd, "fourier")?;
        *out.as_mut().ok_or_else(|| null("out"))? = f.0.len();
        Ok(())
    })
}

/// `|f̂|²` or `‖f̂‖²_HS` at dual point `index`, together with its Plancherel weight.
#[no_mangle]
pub unsafe extern "C" fn ncw_fourier_energy(
    fd: *const NcwFourier,
    index: usize,
    energy: *mut f64,
    weight: *mut f64,
) -> NcwStatus {
    guard(|| {
        let f = deref(fd, "fourier")?;
        if index >= f.0.len() {
            return Err(lift(Error::Dimension {
                expected: f.0.len(),
                actual: index,
            }));
        }
        *energy.as_mut().ok_or_else(|| null("energy"))? = f.0.entries.energy(index);
        if let Some(w) = weight.as_mut() {
            *w = f.0.dual.weights()[index];
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ncw_fourier_free(fd: *mut NcwFourier) {
    if !fd.is_null() {
        drop(Box::from_raw(fd));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ncw_plancherel(
    signal: *const NcwSignal,
    fd: *const NcwFourier,
    out: *mut NcwPlancherel,
) -> NcwStatus {
    guard(|| {
        let s = deref(signal, "signal")?;
        let f = deref(fd, "fourier")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let c = plancherel_check(&s.0, &f.0).map_err(lift)?;
        *out = NcwPlancherel {
            lhs: c.lhs,
            rhs: c.rhs,
            rel_error: c.rel_error,
        };
        Ok(())
    })
}

/// Uncertainty report for moment exponents `a, b ≥ 1`.
#[no_mangle]
pub unsafe extern "C" fn ncw_uncertainty(
    signal: *const NcwSignal,
    fd: *const NcwFourier,
    a: f64,
    b: f64,
    out: *mut NcwUncertainty,
) -> NcwStatus {
    guard(|| {
        let s = deref(signal, "signal")?;
        let f = deref(fd, "fourier")?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let spec = MomentSpec::new(a, b).map_err(lift)?;
        let r = heisenberg_report(&s.0, &f.0, spec).map_err(lift)?;
        *out = NcwUncertainty {
            norm_sq: r.norm_sq,
            time_moment: r.time_moment,
            freq_moment: r.freq_moment,
            lhs: r.lhs,
            rhs_without_constant: r.rhs_without_constant,
            min_constant: r.min_constant,
            divergence_flag: r.divergence_flag as u8,
            sharp_bound_holds: r.sharp_bound.map_or(-1, |sb| sb.holds as i8),
        };
        Ok(())
    })
}
