//! `P_π` on bounded symbols, defined modulo `span{e^{iπx}, e^{−iπx}}`.
//!
//! Beyond `|t| = 3R` the kernel `sinc(t − z)` is replaced by
//! `sin(π(t−z))/π · (1/(t−z) − 1/t)`, which decays like `t⁻²`. The two
//! differ by `sin(π(t−z))/(πt)`, a combination of `cos(πz)` and `sin(πz)`, so
//! the result is well defined modulo that span provided one `R` serves every
//! evaluation point.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{integrate_against, Symbol, TailModel};
use crate::bandlimited::{sin_pi_c, sinc};
use crate::error::{Error, Result};
use crate::numerics::{ExpSum, ExpTerm, QuadratureSpec};

/// Values of `P_π g` at the requested points, one representative of the class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinfProjection {
    pub values: Vec<Complex64>,
    pub r: f64,
    /// Largest quadrature error estimate over the points.
    pub error: f64,
    /// Nonzero when a bounded (non-analytic) tail was truncated at the grid edge.
    pub ignored_tail_bound: f64,
}

/// Default `R`: `max(5, 2·max|Re z|)`.
pub fn default_radius(zs: &[Complex64]) -> f64 {
    zs.iter().map(|z| 2.0 * z.re.abs()).fold(5.0, f64::max)
}

/// `sin(π(t−z))/π · z/((t−z)t)` as an exponential sum in `t`.
fn compensated_tail(z: Complex64) -> ExpSum {
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    let e_minus = (-Complex64::i() * PI * z).exp();
    let e_plus = (Complex64::i() * PI * z).exp();
    let mut s = ExpSum::new();
    s.push(ExpTerm::new(PI, move |t| e_minus * z / (i2pi * (t - z) * t)));
    s.push(ExpTerm::new(-PI, move |t| -e_plus * z / (i2pi * (t - z) * t)));
    s
}

/// `P_π g` at each `z`, with the split point `3R`.
pub fn project_linf<S: Symbol + ?Sized>(
    g: &S,
    zs: &[Complex64],
    r: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<LinfProjection> {
    if !g.tail().is_declared() {
        return Err(Error::MissingTailModel);
    }
    let r = r.unwrap_or_else(|| default_radius(zs));
    if let Some(z) = zs.iter().find(|z| z.re.abs() > r) {
        return Err(Error::PrecondViolated(format!("|Re z| = {} exceeds R = {r}", z.re.abs())));
    }
    let inner = 3.0 * r;
    let cut = g.core_extent().unwrap_or(0.0).max(inner);
    let results = zs
        .par_iter()
        .map(|&z| {
            let kernel = |t: f64| {
                let tz = Complex64::new(t, 0.0) - z;
                if t.abs() <= inner {
                    sinc(tz)
                } else {
                    sin_pi_c(tz) / PI * (1.0 / tz - 1.0 / t)
                }
            };
            integrate_against(g, kernel, &compensated_tail(z), cut, &[-inner, inner], PI, spec)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LinfProjection {
        values: results.iter().map(|k| k.quad.value).collect(),
        r,
        error: results.iter().map(|k| k.quad.error).fold(0.0, f64::max),
        ignored_tail_bound: match g.tail() {
            TailModel::Analytic { .. } => 0.0,
            _ => results.iter().map(|k| k.ignored_tail_bound).fold(0.0, f64::max),
        },
    })
}

/// Least-squares fit of `c₊e^{iπx} + c₋e^{−iπx}` to data on real points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanFit {
    pub c_plus: Complex64,
    pub c_minus: Complex64,
    /// Data minus the fit.
    pub residual: Vec<Complex64>,
    pub max_residual: f64,
}

/// Removes the best `span{e^{±iπx}}` component from `values` sampled at `xs`.
pub fn mod_out_span(xs: &[f64], values: &[Complex64]) -> Result<SpanFit> {
    if xs.len() != values.len() || xs.len() < 2 {
        return Err(Error::invalid("mod-out needs matching point and value lists of length >= 2"));
    }
    let ep: Vec<Complex64> = xs.iter().map(|&x| Complex64::from_polar(1.0, PI * x)).collect();
    // Normal equations for the 2×2 system.
    let n = xs.len() as f64;
    let g12: Complex64 = ep.iter().map(|e| e.conj() * e.conj()).sum();
    let b1: Complex64 = ep.iter().zip(values).map(|(e, v)| e.conj() * v).sum();
    let b2: Complex64 = ep.iter().zip(values).map(|(e, v)| e * v).sum();
    let det = n * n - g12.norm_sqr();
    if det.abs() <= 1e-12 * n * n {
        return Err(Error::invalid("points do not separate e^{iπx} from e^{−iπx}"));
    }
    let c_plus = (b1 * n - g12 * b2) / det;
    let c_minus = (b2 * n - g12.conj() * b1) / det;
    let residual: Vec<Complex64> = ep
        .iter()
        .zip(values)
        .map(|(e, v)| v - c_plus * e - c_minus * e.conj())
        .collect();
    let max_residual = residual.iter().map(|r| r.norm()).fold(0.0, f64::max);
    Ok(SpanFit {
        c_plus,
        c_minus,
        residual,
        max_residual,
    })
}
