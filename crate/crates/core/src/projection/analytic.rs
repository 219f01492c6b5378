//! Half-line spectral projections `P_±` of bounded functions.
//!
//! For `x` inside `I* = [−3R, 3R]`,
//!
//! ```text
//! P₊g(x) = g(x)/2 + (1/2πi) [ p.v.∫_{I*} g(t)/(t−x) dt + ∫_{ℝ∖I*} g(t) (1/(t−x) − 1/t) dt ]
//! ```
//!
//! (the Plemelj boundary value of the Cauchy integral, with the kernel
//! compensated at infinity). The result is defined up to an additive
//! constant, fixed here by zero mean over `[−1/2, 1/2]`. `P₋ = I − P₊`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{GridFunction, Symbol, TailModel};
use crate::error::{Error, Result};
use crate::numerics::{
    integrate_two_sided, integrate_with_breaks, principal_value_with_breaks, ExpSum, Interval,
    Quadrature, QuadratureSpec,
};

/// Which half-line of the spectrum is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

/// `P₊g` at real points `xs` with a common radius `R >= max|x|`, before the
/// constant is normalized.
fn plus_raw(g: &GridFunction, xs: &[f64], r: f64, spec: &QuadratureSpec) -> Result<Vec<Complex64>> {
    let inner = 3.0 * r;
    let cut = g.extent().max(inner);
    let mut local = spec.clone();
    let freq = g.max_freq();
    local.max_panel_width = Some(if freq > 0.0 { (PI / freq).min(1.0) } else { 1.0 });
    let tails = match g.tail() {
        TailModel::Analytic { left, right } => Some((left.clone(), right.clone())),
        _ => None,
    };
    xs.par_iter()
        .map(|&x| {
            let mut breaks = g.breaks(-inner, inner);
            breaks.push(x);
            let pv = principal_value_with_breaks(
                |t| g.eval(t) / (t - x),
                x,
                Interval::new(-inner, inner)?,
                &breaks,
                &local,
            )?;
            let mut outer = Quadrature::zero();
            let comp = |t: f64| g.eval(t) * (1.0 / (t - x) - 1.0 / t);
            if cut > inner {
                let b = g.breaks(inner, cut);
                outer = outer + integrate_with_breaks(comp, Interval::new(inner, cut)?, &b, &local)?;
                let b = g.breaks(-cut, -inner);
                outer = outer + integrate_with_breaks(comp, Interval::new(-cut, -inner)?, &b, &local)?;
            }
            if let Some((left, right)) = &tails {
                let kernel = ExpSum::single(0.0, move |t| x / ((t - x) * t));
                outer = outer
                    + integrate_two_sided(
                        &right.to_exp_sum().product(&kernel),
                        &left.to_exp_sum().product(&kernel),
                        cut,
                        spec,
                    )?;
            }
            Ok(g.eval(x) * 0.5 + (pv.value + outer.value) / Complex64::new(0.0, 2.0 * PI))
        })
        .collect()
}

/// Trapezoid mean of grid values over `[−1/2, 1/2]`.
fn central_mean(g: &GridFunction, values: &[Complex64]) -> Complex64 {
    let h = g.step();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut weight = 0.0;
    for (i, v) in values.iter().enumerate() {
        let x = g.node(i);
        if x.abs() <= 0.5 + 1e-12 {
            let w = if (x.abs() - 0.5).abs() < 1e-9 { 0.5 * h } else { h };
            acc += v * w;
            weight += w;
        }
    }
    if weight == 0.0 {
        // grid coarser than the unit interval: use the node nearest 0
        return values[g.half_len()];
    }
    acc / weight
}

/// Boundary values of `P_±g` on the nodes of `g`.
pub fn analytic_project(g: &GridFunction, side: Side, spec: &QuadratureSpec) -> Result<GridFunction> {
    if !g.tail().is_bounded() {
        return Err(Error::MissingTailModel);
    }
    let xs: Vec<f64> = g.nodes().collect();
    let r = xs.iter().map(|x| 2.0 * x.abs()).fold(5.0, f64::max);
    let mut values = plus_raw(g, &xs, r, spec)?;
    if side == Side::Minus {
        for (v, &x) in values.iter_mut().zip(&xs) {
            *v = g.eval(x) - *v;
        }
    }
    let mean = central_mean(g, &values);
    for v in &mut values {
        *v -= mean;
    }
    GridFunction::new(g.step(), values, TailModel::None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::grid::TrigPolynomial;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::with_tolerance(1e-9, 1e-11)
    }

    #[test]
    fn positive_exponential_is_kept() {
        let g = GridFunction::from_trig(&TrigPolynomial::exp(PI), 1.0 / 32.0, 3.0).unwrap();
        let p = analytic_project(&g, Side::Plus, &spec()).unwrap();
        // equal up to a constant: compare after removing the central mean
        let target = g.map(|_, v| v);
        let shift = central_mean(&g, target.values());
        for (a, b) in p.values().iter().zip(target.values()) {
            assert!((a - (b - shift)).norm() < 1e-4, "{a} vs {b}");
        }
    }

    #[test]
    fn negative_exponential_is_removed() {
        let g = GridFunction::from_trig(&TrigPolynomial::exp(-PI), 1.0 / 32.0, 3.0).unwrap();
        let p = analytic_project(&g, Side::Plus, &spec()).unwrap();
        assert!(p.values().iter().all(|v| v.norm() < 1e-4));
    }
}
