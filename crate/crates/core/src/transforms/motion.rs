//! `π_r(f)` on M(2) = SO(2)⋉ℝ² in the circular basis `e_n(s) = e^{ins}`.
//!
//! `π_r(k,x)ξ(s) = e^{ir⟨e_s,x⟩} ξ(s−k)` on L²(SO(2), ds/2π), `e_s = (cos s, sin s)`.
//! The matrix of `π_r(f) = ∫ f(g) π_r(g)* dg` is
//! `A_nm = ∫ f(k,x) e^{ink} ∫ e^{i(m−n)φ} e^{−ir⟨e_φ,x⟩} dφ/2π dk dx`,
//! and the inner integral equals `(−i)^p e^{ipα} J_p(r|x|)` with `p = m − n`
//! and `α` the polar angle of `x`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{Basis, FourierData, FourierEntries, OperatorMatrix, SampledSignal, Truncation};
use crate::error::{Error, Result};
use crate::groups::{DualGrid, DualLayout, GroupKind};
use crate::numerics::{bessel_j_orders, ComplexMatrix, BESSEL_MAX_ORDER};

struct Grids {
    theta: Vec<f64>,
    w_theta: Vec<f64>,
    x1: Vec<f64>,
    w1: Vec<f64>,
    x2: Vec<f64>,
    w2: Vec<f64>,
}

fn prepare<'a>(
    f: &'a SampledSignal,
    dual: &'a DualGrid,
    cutoff: usize,
) -> Result<(Grids, &'a [f64])> {
    let g = f.group();
    if g.kind() != GroupKind::Motion2 {
        return Err(Error::Kind(format!(
            "motion-group transform called on {}",
            g.kind()
        )));
    }
    if 2 * cutoff > BESSEL_MAX_ORDER {
        return Err(Error::Capability(format!(
            "mode cutoff {cutoff} needs Bessel orders beyond {BESSEL_MAX_ORDER}"
        )));
    }
    let radii = match dual.layout() {
        DualLayout::Radius { radii } => radii.as_slice(),
        _ => {
            return Err(Error::Kind(
                "motion-group transform needs a radius dual grid".into(),
            ))
        }
    };
    if radii.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
        return Err(Error::Precondition("orbit radii must be positive".into()));
    }
    let a = g.axes();
    Ok((
        Grids {
            theta: a[0].points(),
            w_theta: a[0].weights(),
            x1: a[1].points(),
            w1: a[1].weights(),
            x2: a[2].points(),
            w2: a[2].weights(),
        },
        radii,
    ))
}

/// Weight of angular mode `n` in the trigonometric interpolant of `nt`
/// equispaced samples: modes past Nyquist vanish instead of aliasing, and an
/// even grid's Nyquist mode is shared between `±nt/2`.
fn mode_mask(n: i64, nt: usize) -> f64 {
    let twice = 2 * n.unsigned_abs() as usize;
    if twice < nt {
        1.0
    } else if twice == nt {
        0.5
    } else {
        0.0
    }
}

fn finish(
    f: &SampledSignal,
    dual: &DualGrid,
    cutoff: usize,
    mats: Vec<ComplexMatrix>,
    radii: &[f64],
) -> Result<FourierData> {
    let entries = mats
        .into_iter()
        .zip(radii)
        .map(|(m, &r)| OperatorMatrix::new(Basis::Circular { cutoff }, m, r))
        .collect::<Result<Vec<_>>>()?;
    let truncation = Truncation {
        hermite_order: None,
        mode_cutoff: Some(cutoff),
        dual_max: dual.truncation(),
        dual_points: dual.len(),
    };
    Ok(FourierData::assemble(
        dual.clone(),
        FourierEntries::Operator(entries),
        truncation,
        f.l2_norm_sq(),
    ))
}

/// `(−i)^p` for integer `p`.
fn neg_i_pow(p: i64) -> Complex64 {
    match p.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Matrices of `π_r(f)` for modes `−cutoff..=cutoff`, by the Bessel expansion
/// of the plane-wave kernel (exact in the circle variable).
pub fn fourier_motion2(f: &SampledSignal, dual: &DualGrid, cutoff: usize) -> Result<FourierData> {
    let (gr, radii) = prepare(f, dual, cutoff)?;
    let dim = 2 * cutoff + 1;
    let (n1, n2) = (gr.x1.len(), gr.x2.len());
    let nx = n1 * n2;
    let vals = f.values();

    // f̃_n(x) = Σ_k w_k f(k,x) e^{ink}, stored [x][n]
    let mut ftil = vec![Complex64::new(0.0, 0.0); nx * dim];
    let nt = gr.theta.len();
    for (i, (&th, &wt)) in gr.theta.iter().zip(&gr.w_theta).enumerate() {
        let chars: Vec<Complex64> = (0..dim)
            .map(|ni| {
                let n = ni as i64 - cutoff as i64;
                Complex64::from_polar(wt * mode_mask(n, nt), n as f64 * th)
            })
            .collect();
        for x in 0..nx {
            let v = vals[i * nx + x];
            if v.norm_sqr() == 0.0 {
                continue;
            }
            let row = &mut ftil[x * dim..(x + 1) * dim];
            for (dst, c) in row.iter_mut().zip(&chars) {
                *dst += v * c;
            }
        }
    }
    let mags: Vec<f64> = (0..nx)
        .map(|x| {
            ftil[x * dim..(x + 1) * dim]
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max)
        })
        .collect();
    let global = mags.iter().cloned().fold(0.0, f64::max);
    let active: Vec<usize> = (0..nx).filter(|&x| mags[x] > 1e-17 * global).collect();

    let polar: Vec<(f64, f64, f64)> = (0..nx)
        .map(|x| {
            let (a, b) = (x / n2, x % n2);
            let (u, v) = (gr.x1[a], gr.x2[b]);
            ((u * u + v * v).sqrt(), v.atan2(u), gr.w1[a] * gr.w2[b])
        })
        .collect();

    let span = 4 * cutoff + 1;
    let mats = radii
        .par_iter()
        .map(|&r| {
            let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
            let mut g = vec![Complex64::new(0.0, 0.0); span];
            for &x in &active {
                let (rho, alpha, w) = polar[x];
                let j = bessel_j_orders(2 * cutoff, r * rho)?;
                // g[p + 2M] = w (−i)^p e^{ipα} J_p(rρ), p = −2M..=2M
                for (idx, slot) in g.iter_mut().enumerate() {
                    let p = idx as i64 - 2 * cutoff as i64;
                    let jp = if p < 0 && p % 2 != 0 {
                        -j[p.unsigned_abs() as usize]
                    } else {
                        j[p.unsigned_abs() as usize]
                    };
                    *slot = neg_i_pow(p) * Complex64::from_polar(w * jp, p as f64 * alpha);
                }
                let fx = &ftil[x * dim..(x + 1) * dim];
                for (ni, fnv) in fx.iter().enumerate() {
                    if fnv.norm_sqr() == 0.0 {
                        continue;
                    }
                    let gs = &g[2 * cutoff - ni..2 * cutoff - ni + dim];
                    let row = &mut m[ni * dim..(ni + 1) * dim];
                    for (dst, gv) in row.iter_mut().zip(gs) {
                        *dst += gv * fnv;
                    }
                }
            }
            ComplexMatrix::from_vec(dim, dim, m)
        })
        .collect::<Result<Vec<_>>>()?;
    finish(f, dual, cutoff, mats, radii)
}

/// Circle samples used by the direct path when the caller passes 0.
fn default_circle_points(cutoff: usize, radii: &[f64], gr: &Grids) -> usize {
    let r_max = radii.iter().cloned().fold(0.0, f64::max);
    let ext = gr
        .x1
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max)
        .hypot(gr.x2.iter().map(|v| v.abs()).fold(0.0, f64::max));
    let n = 2 * (2 * cutoff + (r_max * ext).ceil() as usize) + 16;
    n + n % 2
}

/// Same matrices by direct quadrature of the induced representation on an
/// explicit grid of `circle_points` samples of SO(2) (0 picks a default).
pub fn fourier_motion2_direct(
    f: &SampledSignal,
    dual: &DualGrid,
    cutoff: usize,
    circle_points: usize,
) -> Result<FourierData> {
    let (gr, radii) = prepare(f, dual, cutoff)?;
    let ns = if circle_points == 0 {
        default_circle_points(cutoff, radii, &gr)
    } else {
        circle_points
    };
    let dim = 2 * cutoff + 1;
    let span = 4 * cutoff + 1;
    let (nt, n1, n2) = (gr.theta.len(), gr.x1.len(), gr.x2.len());
    let vals = f.values();
    let weighted: Vec<Complex64> = vals
        .iter()
        .enumerate()
        .map(|(idx, v)| v * gr.w1[(idx / n2) % n1] * gr.w2[idx % n2])
        .collect();
    let s: Vec<f64> = (0..ns).map(|q| 2.0 * PI * q as f64 / ns as f64).collect();

    let mats = radii
        .par_iter()
        .map(|&r| {
            let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
            let mut e1 = vec![Complex64::new(0.0, 0.0); n1];
            let mut e2 = vec![Complex64::new(0.0, 0.0); n2];
            for i in 0..nt {
                let slab = &weighted[i * n1 * n2..(i + 1) * n1 * n2];
                // C[p + 2M] = (1/n_s) Σ_q E(k_i, s_q) e^{ip s_q}
                let mut c = vec![Complex64::new(0.0, 0.0); span];
                for &sq in &s {
                    let phi = gr.theta[i] + sq;
                    let (sn, cs) = phi.sin_cos();
                    for (dst, &x) in e1.iter_mut().zip(&gr.x1) {
                        *dst = Complex64::from_polar(1.0, -r * x * cs);
                    }
                    for (dst, &x) in e2.iter_mut().zip(&gr.x2) {
                        *dst = Complex64::from_polar(1.0, -r * x * sn);
                    }
                    let mut e = Complex64::new(0.0, 0.0);
                    for a in 0..n1 {
                        let row = &slab[a * n2..(a + 1) * n2];
                        let inner: Complex64 = row.iter().zip(&e2).map(|(v, z)| v * z).sum();
                        e += e1[a] * inner;
                    }
                    for (idx, slot) in c.iter_mut().enumerate() {
                        let p = idx as f64 - 2.0 * cutoff as f64;
                        *slot += e * Complex64::from_polar(1.0 / ns as f64, p * sq);
                    }
                }
                for ni in 0..dim {
                    let mask = mode_mask(ni as i64 - cutoff as i64, nt);
                    if mask == 0.0 {
                        continue;
                    }
                    for mi in 0..dim {
                        let mm = mi as f64 - cutoff as f64;
                        let ph = Complex64::from_polar(mask * gr.w_theta[i], mm * gr.theta[i]);
                        m[ni * dim + mi] += ph * c[mi + 2 * cutoff - ni];
                    }
                }
            }
            ComplexMatrix::from_vec(dim, dim, m)
        })
        .collect::<Result<Vec<_>>>()?;
    finish(f, dual, cutoff, mats, radii)
}

/// Applies `π_r(k,x)` to `ξ` sampled on the `n`-point circle grid, where
/// `k = 2π·shift/n`; on this grid the operator is a cyclic shift times a phase.
pub fn motion2_rep_apply(
    r: f64,
    shift: usize,
    x: [f64; 2],
    xi: &[Complex64],
) -> Result<Vec<Complex64>> {
    if !(r > 0.0) {
        return Err(Error::Precondition("orbit radius must be positive".into()));
    }
    let n = xi.len();
    if n == 0 {
        return Err(Error::Dimension {
            expected: 1,
            actual: 0,
        });
    }
    Ok((0..n)
        .map(|q| {
            let s = 2.0 * PI * q as f64 / n as f64;
            let phase = Complex64::from_polar(1.0, r * (s.cos() * x[0] + s.sin() * x[1]));
            phase * xi[(q + n - shift % n) % n]
        })
        .collect())
}
