//! Mean oscillation of grid functions: `BMO(ℝ)`, small-scale (VMO) profiles
//! and the `BMO(e^{−iπz})` norm.
//!
//! Intervals have dyadic lengths `2h, 4h, …` up to the grid span and slide
//! by one grid step; the mean oscillation is the discrete average over the
//! nodes inside. Restricting to dyadic lengths loses at most a factor 2
//! against the full supremum.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::GridFunction;
use crate::bandlimited::{interpolate, SampledBandlimited};
use crate::error::{Error, Result};

/// BMO norm estimate together with the scales that were scanned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BmoEstimate {
    pub value: f64,
    pub finest_scale: f64,
    pub coarsest_scale: f64,
}

/// Supremum of mean oscillation at each scanned interval length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleProfile {
    pub lengths: Vec<f64>,
    pub sup: Vec<f64>,
}

/// Node counts (minus one) of the scanned intervals: dyadic, then the span.
fn scale_steps(n_nodes: usize) -> Vec<usize> {
    let span = n_nodes.saturating_sub(1);
    let mut steps = Vec::new();
    let mut m = 2;
    while m <= span {
        steps.push(m);
        m *= 2;
    }
    if span >= 2 && steps.last() != Some(&span) {
        steps.push(span);
    }
    steps
}

fn oscillation(v: &[Complex64], prefix: &[Complex64], i: usize, m: usize) -> f64 {
    let count = (m + 1) as f64;
    let mean = (prefix[i + m + 1] - prefix[i]) / count;
    v[i..=i + m].iter().map(|x| (x - mean).norm()).sum::<f64>() / count
}

/// Per-scale suprema of mean oscillation for values on a uniform grid.
pub fn scale_profile(values: &[Complex64], h: f64) -> ScaleProfile {
    let mut prefix = vec![Complex64::new(0.0, 0.0); values.len() + 1];
    for (i, &x) in values.iter().enumerate() {
        prefix[i + 1] = prefix[i] + x;
    }
    let steps = scale_steps(values.len());
    let sup = steps
        .iter()
        .map(|&m| {
            (0..values.len() - m)
                .into_par_iter()
                .map(|i| oscillation(values, &prefix, i, m))
                .reduce(|| 0.0, f64::max)
        })
        .collect();
    ScaleProfile {
        lengths: steps.iter().map(|&m| m as f64 * h).collect(),
        sup,
    }
}

/// BMO norm of grid values on step `h`.
pub fn bmo_of_grid_values(values: &[Complex64], h: f64) -> BmoEstimate {
    let p = scale_profile(values, h);
    BmoEstimate {
        value: p.sup.iter().copied().fold(0.0, f64::max),
        finest_scale: p.lengths.first().copied().unwrap_or(0.0),
        coarsest_scale: p.lengths.last().copied().unwrap_or(0.0),
    }
}

/// BMO norm of `g` over the dyadic interval family on its grid.
pub fn bmo_r_norm(g: &GridFunction) -> BmoEstimate {
    bmo_of_grid_values(g.values(), g.step())
}

/// For each `δ`, the supremum of mean oscillation over intervals of length `<= δ`.
pub fn vmo_profile(g: &GridFunction, deltas: &[f64]) -> Result<Vec<f64>> {
    let p = scale_profile(g.values(), g.step());
    let (lo, hi) = (2.0 * g.step(), 2.0 * g.extent());
    deltas
        .iter()
        .map(|&d| {
            if d < lo * (1.0 - 1e-12) || d > hi * (1.0 + 1e-12) {
                return Err(Error::invalid(format!("δ = {d} outside the scanned range [{lo}, {hi}]")));
            }
            Ok(p.lengths
                .iter()
                .zip(&p.sup)
                .filter(|(l, _)| **l <= d * (1.0 + 1e-12))
                .map(|(_, s)| *s)
                .fold(0.0, f64::max))
        })
        .collect()
}

/// Grid on which `BMO(e^{−iπz})` norms are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub h: f64,
    pub t: f64,
}

impl GridSpec {
    pub fn nodes(&self) -> Result<Vec<f64>> {
        if !(self.h > 0.0 && self.t >= 2.0 * self.h) {
            return Err(Error::invalid(format!("bad grid h = {}, T = {}", self.h, self.t)));
        }
        let k = (self.t / self.h + 1e-9).floor() as i64;
        Ok((-k..=k).map(|j| j as f64 * self.h).collect())
    }
}

/// `BMO(e^{−iπz})` norm with the values of the two optimal constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BmoeEstimate {
    pub value: f64,
    pub plus: f64,
    pub minus: f64,
    pub c_plus: Complex64,
    pub c_minus: Complex64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn golden<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if b - a <= tol {
            return Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) });
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    Err(Error::no_conv("bmoe_norm", "golden-section search did not converge"))
}

/// `inf_c bmo(u + c·v)` over complex `c`.
///
/// The map is convex in `c`; the outer golden section runs on `Re c` over the
/// partial minimum in `Im c`, which is again convex. Since
/// `bmo(u + cv) >= |c|·bmo(v) − bmo(u)`, the minimizer lies in
/// `|c| <= 2·bmo(u)/bmo(v)`.
fn inf_over_c(u: &[Complex64], v: &[Complex64], h: f64, rel_tol: f64) -> Result<(f64, Complex64)> {
    let bmo = |c: Complex64| {
        let w: Vec<Complex64> = u.iter().zip(v).map(|(a, b)| a + c * b).collect();
        bmo_of_grid_values(&w, h).value
    };
    let v0 = bmo(Complex64::new(0.0, 0.0));
    let beta = bmo_of_grid_values(v, h).value;
    if v0 == 0.0 || beta == 0.0 {
        return Ok((v0, Complex64::new(0.0, 0.0)));
    }
    let rho = 2.0 * v0 / beta;
    let tol = rel_tol * rho;
    let inner = |re: f64| -> f64 {
        golden(|im| bmo(Complex64::new(re, im)), -rho, rho, tol)
            .map(|(_, f)| f)
            .unwrap_or(f64::INFINITY)
    };
    let (re, _) = golden(inner, -rho, rho, tol)?;
    let (im, value) = golden(|im| bmo(Complex64::new(re, im)), -rho, rho, tol)?;
    let best = value.min(v0);
    Ok((best, if value <= v0 { Complex64::new(re, im) } else { Complex64::new(0.0, 0.0) }))
}

/// `BMO(e^{−iπz})` norm of the function with real-axis values `f0` on `xs`:
///
/// ```text
/// inf_c bmo(e^{iπx} f₀ + c e^{2iπx}) + inf_c bmo(e^{−iπx} f₀ + c e^{−2iπx})
/// ```
pub fn bmoe_norm_values(xs: &[f64], f0: &[Complex64], h: f64, rel_tol: f64) -> Result<BmoeEstimate> {
    if xs.len() != f0.len() {
        return Err(Error::invalid("point and value lists differ in length"));
    }
    let e = |k: f64| -> Vec<Complex64> { xs.iter().map(|&x| Complex64::from_polar(1.0, k * PI * x)).collect() };
    let (e1, e2, em1, em2) = (e(1.0), e(2.0), e(-1.0), e(-2.0));
    let up: Vec<Complex64> = f0.iter().zip(&e1).map(|(f, e)| f * e).collect();
    let um: Vec<Complex64> = f0.iter().zip(&em1).map(|(f, e)| f * e).collect();
    let (plus, c_plus) = inf_over_c(&up, &e2, h, rel_tol)?;
    let (minus, c_minus) = inf_over_c(&um, &em2, h, rel_tol)?;
    Ok(BmoeEstimate {
        value: plus + minus,
        plus,
        minus,
        c_plus,
        c_minus,
    })
}

/// `BMO(e^{−iπz})` norm of a closed-form function on a grid.
pub fn bmoe_norm_fn<F: Fn(f64) -> Complex64>(f: F, grid: GridSpec, rel_tol: f64) -> Result<BmoeEstimate> {
    let xs = grid.nodes()?;
    let vals: Vec<Complex64> = xs.iter().map(|&x| f(x)).collect();
    bmoe_norm_values(&xs, &vals, grid.h, rel_tol)
}

/// `BMO(e^{−iπz})` norm of a sampled function on the band `κ = π`.
pub fn bmoe_norm(f: &SampledBandlimited, grid: GridSpec, rel_tol: f64) -> Result<BmoeEstimate> {
    if (f.band().kappa() - PI).abs() > 1e-12 {
        return Err(Error::PrecondViolated(format!(
            "BMO(e^{{-iπz}}) needs band π, got {}",
            f.band().kappa()
        )));
    }
    bmoe_norm_fn(|x| interpolate(f, Complex64::new(x, 0.0)), grid, rel_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::grid::TailModel;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn constant_has_zero_oscillation() {
        let g = GridFunction::from_fn(0.1, 5.0, TailModel::None, |_| c(2.5)).unwrap();
        assert_eq!(bmo_r_norm(&g).value, 0.0);
        assert!(vmo_profile(&g, &[0.2, 1.0, 10.0]).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn sign_is_near_one() {
        let g = GridFunction::from_fn(1.0 / 64.0, 4.0, TailModel::None, |x| c(x.signum() * (x != 0.0) as i32 as f64))
            .unwrap();
        let b = bmo_r_norm(&g);
        assert!((b.value - 1.0).abs() < 5e-3, "{b:?}");
        let prof = vmo_profile(&g, &[2.0 / 64.0, 0.25, 4.0]).unwrap();
        assert!(prof.iter().all(|&p| p > 0.6), "{prof:?}");
    }

    #[test]
    fn span_representatives_vanish() {
        let cp = Complex64::new(0.7, 0.2);
        let cm = Complex64::new(-0.4, 1.0);
        let f = |x: f64| cp * Complex64::from_polar(1.0, PI * x) + cm * Complex64::from_polar(1.0, -PI * x);
        let e = bmoe_norm_fn(f, GridSpec { h: 1.0 / 16.0, t: 4.0 }, 1e-10).unwrap();
        assert!(e.value < 1e-6, "{e:?}");
    }

    #[test]
    fn zero_function() {
        let e = bmoe_norm_fn(|_| c(0.0), GridSpec { h: 0.25, t: 2.0 }, 1e-6).unwrap();
        assert_eq!(e.value, 0.0);
    }

    #[test]
    fn delta_outside_range_rejected() {
        let g = GridFunction::from_fn(0.5, 2.0, TailModel::None, |x| c(x)).unwrap();
        assert!(vmo_profile(&g, &[0.1]).is_err());
    }
}
