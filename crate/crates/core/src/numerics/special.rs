//! Hermite functions and integer-order Bessel functions of the first kind.

use crate::error::{Error, Result};

/// Highest Hermite order accepted by [`hermite_function`].
pub const HERMITE_MAX_ORDER: usize = 512;

/// Highest absolute Bessel order accepted by [`bessel_j`].
pub const BESSEL_MAX_ORDER: usize = 2048;

const LOG_PI_QUARTER: f64 = -0.286_182_471_462_350_04; // ln(pi^{-1/4})

/// L²(ℝ)-orthonormal Hermite functions `h_0(u) .. h_{n_max}(u)`.
///
/// Uses the normalized three-term recurrence on a rescaled sequence and applies
/// the Gaussian envelope in log space, so large `|u|` neither underflows early
/// nor overflows.
pub fn hermite_functions(n_max: usize, u: f64) -> Result<Vec<f64>> {
    if n_max > HERMITE_MAX_ORDER {
        return Err(Error::Capability(format!(
            "Hermite order {n_max} exceeds maximum {HERMITE_MAX_ORDER}"
        )));
    }
    let mut out = vec![0.0; n_max + 1];
    let log_env = LOG_PI_QUARTER - 0.5 * u * u;
    // scaled values s_k with h_k = s_k * exp(log_env + log_scale)
    let mut log_scale = 0.0f64;
    let mut prev = 0.0f64;
    let mut cur = 1.0f64;
    out[0] = cur;
    let mut scales = vec![0.0f64; n_max + 1];
    for k in 0..n_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > 1e200 {
            prev *= 1e-200;
            cur *= 1e-200;
            log_scale += 200.0 * std::f64::consts::LN_10;
        }
        out[k + 1] = cur;
        scales[k + 1] = log_scale;
    }
    for (v, s) in out.iter_mut().zip(&scales) {
        if *v != 0.0 {
            let mag = (v.abs().ln() + s + log_env).exp();
            *v = mag.copysign(*v);
        }
    }
    Ok(out)
}

/// The L²-orthonormal Hermite function `h_k(u)`.
pub fn hermite_function(k: usize, u: f64) -> Result<f64> {
    Ok(hermite_functions(k, u)?[k])
}

/// `J_0(x) .. J_{n_max}(x)` by Miller's backward recurrence, normalized with
/// `J_0 + 2 Σ J_{2k} = 1`.
pub fn bessel_j_orders(n_max: usize, x: f64) -> Result<Vec<f64>> {
    if n_max > BESSEL_MAX_ORDER {
        return Err(Error::Capability(format!(
            "Bessel order {n_max} exceeds maximum {BESSEL_MAX_ORDER}"
        )));
    }
    if !x.is_finite() {
        return Err(Error::Domain(format!(
            "Bessel argument must be finite, got {x}"
        )));
    }
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return Ok(out);
    }
    let ax = x.abs();
    let base = n_max.max(ax.ceil() as usize);
    let mut start = base + 30 + (12.0 * ax.cbrt()).ceil() as usize;
    if start % 2 == 1 {
        start += 1;
    }
    let mut above = 0.0f64;
    let mut cur = 1e-30f64;
    let mut norm = 0.0f64;
    for k in (1..=start).rev() {
        if k <= n_max {
            out[k] = cur;
        }
        if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        let below = (2.0 * k as f64 / ax) * cur - above;
        above = cur;
        cur = below;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            norm *= 1e-250;
            // entries below k are still zero
            out.iter_mut().for_each(|v| *v *= 1e-250);
        }
    }
    out[0] = cur;
    norm += cur;
    let inv = 1.0 / norm;
    for (k, v) in out.iter_mut().enumerate() {
        *v *= inv;
        if x < 0.0 && k % 2 == 1 {
            *v = -*v;
        }
    }
    Ok(out)
}

/// Bessel function of the first kind `J_n(x)` for integer `n`.
pub fn bessel_j(n: i64, x: f64) -> Result<f64> {
    let order = n.unsigned_abs() as usize;
    if order > BESSEL_MAX_ORDER {
        return Err(Error::Capability(format!(
            "Bessel order {n} exceeds maximum {BESSEL_MAX_ORDER}"
        )));
    }
    let v = bessel_j_orders(order, x)?[order];
    Ok(if n < 0 && order % 2 == 1 { -v } else { v })
}
