//! `π_λ(f) = ∫ f(g) π_λ(g)* dg` on H₁ in the λ-scaled Hermite basis.
//!
//! With `F(x,y,λ) = ∫ f(x,y,t) e^{-iλt} dt`,
//! `(π_λ(f)φ)(u) = ∫∫ F(x,y,λ) e^{-iλx(u - y/2)} φ(u - y) dx dy`.
//! The `u`-quadrature runs on a lattice `y_lo + h_u ℤ` with `h_u = h_y / r`, so
//! every shift `u - y_b` is itself a lattice point and one Hermite table
//! serves all `y`-samples.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{Basis, FourierData, FourierEntries, OperatorMatrix, SampledSignal, Truncation};
use crate::error::{Error, Result};
use crate::groups::{DualGrid, DualLayout, GroupKind};
use crate::numerics::{hermite_functions, ComplexMatrix, HERMITE_MAX_ORDER};

/// Distance (in scaled units) kept beyond the outermost Hermite turning point.
const TAIL_MARGIN: f64 = 8.0;

struct Layout<'a> {
    values: &'a [Complex64],
    x: Vec<f64>,
    wx: Vec<f64>,
    y_lo: f64,
    hy: f64,
    wy: Vec<f64>,
    t: Vec<f64>,
    wt: Vec<f64>,
    x_ext: f64,
}

fn scaled_hermite_table(
    order: usize,
    alpha: f64,
    pts: impl Iterator<Item = f64>,
) -> Result<Vec<f64>> {
    let s = alpha.sqrt();
    let mut out = Vec::new();
    for v in pts {
        out.extend(
            hermite_functions(order - 1, alpha * v)?
                .into_iter()
                .map(|h| h * s),
        );
    }
    Ok(out)
}

fn matrix_at(l: &Layout<'_>, lambda: f64, order: usize) -> Result<ComplexMatrix> {
    let (nx, ny, nt) = (l.x.len(), l.wy.len(), l.t.len());

    // F(x_a, y_b) with the t-quadrature folded in
    let t_phase: Vec<Complex64> =
        l.t.iter()
            .zip(&l.wt)
            .map(|(t, w)| Complex64::from_polar(*w, -lambda * t))
            .collect();
    let mut big_f = vec![Complex64::new(0.0, 0.0); nx * ny];
    for (ab, out) in big_f.iter_mut().enumerate() {
        let row = &l.values[ab * nt..(ab + 1) * nt];
        *out = row.iter().zip(&t_phase).map(|(v, p)| v * p).sum();
    }
    let f_max = big_f.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if f_max == 0.0 {
        return Ok(ComplexMatrix::zeros(order, order));
    }

    let alpha = lambda.abs().sqrt();
    let turning = (2.0 * order as f64 + 1.0).sqrt();
    let u_max = (turning + TAIL_MARGIN) / alpha;
    let band = 2.0 * alpha * (turning + 3.0) + lambda.abs() * l.x_ext + 4.0;
    let refine = (l.hy * band / (2.0 * PI)).ceil().max(1.0) as usize;
    let hu = l.hy / refine as f64;

    let p0 = ((-u_max - l.y_lo) / hu).ceil() as i64;
    let p1 = ((u_max - l.y_lo) / hu).floor() as i64;
    let q0 = (-u_max / hu).ceil() as i64;
    let q1 = (u_max / hu).floor() as i64;
    if p1 < p0 || q1 < q0 {
        return Err(Error::Resolution("empty u-lattice".into()));
    }
    let nu = (p1 - p0 + 1) as usize;
    let nv = (q1 - q0 + 1) as usize;
    let u_at = |p: usize| l.y_lo + (p0 + p as i64) as f64 * hu;
    let hv = scaled_hermite_table(order, alpha, (0..nv).map(|q| (q0 + q as i64) as f64 * hu))?;
    let hu_tab = scaled_hermite_table(order, alpha, (0..nu).map(u_at))?;

    // G[b][p] = Σ_a w_x F(a,b) e^{-iλ x_a (u_p - y_b/2)}
    let cutoff = 1e-17 * f_max;
    let mut g = vec![Complex64::new(0.0, 0.0); ny * nu];
    for b in 0..ny {
        let yb = l.y_lo + b as f64 * l.hy;
        let row = &mut g[b * nu..(b + 1) * nu];
        for a in 0..nx {
            let fab = big_f[a * ny + b];
            if fab.norm() <= cutoff {
                continue;
            }
            let coef = fab * l.wx[a];
            let k = -lambda * l.x[a];
            let step = Complex64::from_polar(1.0, k * hu);
            let mut z = Complex64::from_polar(1.0, k * (u_at(0) - 0.5 * yb));
            for (p, slot) in row.iter_mut().enumerate() {
                if p % 256 == 0 {
                    z = Complex64::from_polar(1.0, k * (u_at(p) - 0.5 * yb));
                }
                *slot += coef * z;
                z *= step;
            }
        }
    }

    // Φ[p][j] = Σ_b w_y G[b][p] h_j(u_p - y_b), with u_p - y_b = (p + p0 - r b) h_u
    let mut phi = vec![Complex64::new(0.0, 0.0); nu * order];
    for b in 0..ny {
        let wyb = l.wy[b];
        let shift = p0 - (refine * b) as i64 - q0;
        for p in 0..nu {
            let q = p as i64 + shift;
            if q < 0 || q >= nv as i64 {
                continue;
            }
            let c = g[b * nu + p] * wyb;
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let hrow = &hv[q as usize * order..(q as usize + 1) * order];
            let prow = &mut phi[p * order..(p + 1) * order];
            for (dst, h) in prow.iter_mut().zip(hrow) {
                *dst += c * *h;
            }
        }
    }

    // M[k][j] = Σ_p h_u h_k(u_p) Φ[p][j]
    let mut m = vec![Complex64::new(0.0, 0.0); order * order];
    for p in 0..nu {
        let prow = &phi[p * order..(p + 1) * order];
        for k in 0..order {
            let hk = hu_tab[p * order + k] * hu;
            if hk == 0.0 {
                continue;
            }
            let mrow = &mut m[k * order..(k + 1) * order];
            for (dst, v) in mrow.iter_mut().zip(prow) {
                *dst += v * hk;
            }
        }
    }
    ComplexMatrix::from_vec(order, order, m)
}

/// Matrices `⟨π_λ(f) h_j^λ, h_k^λ⟩`, `0 ≤ j,k < order`, for every λ of `dual`.
pub fn fourier_heisenberg(f: &SampledSignal, dual: &DualGrid, order: usize) -> Result<FourierData> {
    let g = f.group();
    if g.kind() != GroupKind::Heisenberg1 {
        return Err(Error::Kind(format!(
            "Heisenberg transform called on {}",
            g.kind()
        )));
    }
    if order == 0 || order > HERMITE_MAX_ORDER {
        return Err(Error::Capability(format!(
            "Hermite truncation order must be 1..={HERMITE_MAX_ORDER}, got {order}"
        )));
    }
    let lambdas = match dual.layout() {
        DualLayout::Lambda { lambdas } => lambdas,
        _ => {
            return Err(Error::Kind(
                "Heisenberg transform needs a λ dual grid".into(),
            ))
        }
    };
    if lambdas.iter().any(|&l| l == 0.0 || !l.is_finite()) {
        return Err(Error::Precondition(
            "λ = 0 is not in the Schrödinger dual".into(),
        ));
    }
    let axes = g.axes();
    let (gx, gy, gt) = (
        axes[0].grid().expect("line axis"),
        axes[1].grid().expect("line axis"),
        axes[2].grid().expect("line axis"),
    );
    let x = gx.points();
    let layout = Layout {
        values: f.values(),
        x_ext: x.iter().map(|v| v.abs()).fold(0.0, f64::max),
        x,
        wx: gx.weights().to_vec(),
        y_lo: gy.lo(),
        hy: gy.spacing(),
        wy: gy.weights().to_vec(),
        t: gt.points(),
        wt: gt.weights().to_vec(),
    };
    let mats = lambdas
        .par_iter()
        .map(|&lambda| {
            let m = matrix_at(&layout, lambda, order)?;
            OperatorMatrix::new(
                Basis::Hermite {
                    order,
                    scale: lambda.abs().sqrt(),
                },
                m,
                lambda,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let truncation = Truncation {
        hermite_order: Some(order),
        mode_cutoff: None,
        dual_max: dual.truncation(),
        dual_points: dual.len(),
    };
    Ok(FourierData::assemble(
        dual.clone(),
        FourierEntries::Operator(mats),
        truncation,
        f.l2_norm_sq(),
    ))
}
