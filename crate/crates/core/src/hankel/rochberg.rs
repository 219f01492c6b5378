//! Splitting a band-reduced symbol into anti-analytic, central and analytic
//! parts by smooth frequency cutoffs.

use serde::{Deserialize, Serialize};

use super::SymbolSpec;
use crate::bandlimited::Band;
use crate::error::{Error, Result};
use crate::projection::{bmo_r_norm, GridFunction, TrigPolynomial};

/// `3s² − 2s³` clamped to `[0, 1]`.
fn smoothstep(s: f64) -> f64 {
    let s = s.clamp(0.0, 1.0);
    s * s * (3.0 - 2.0 * s)
}

/// `η_L`: supported in `[−4κ, −κ/2]`, equal to 1 on `[−3κ, −κ]`.
pub fn cutoff_left(xi: f64, kappa: f64) -> f64 {
    if xi <= -3.0 * kappa {
        smoothstep((xi + 4.0 * kappa) / kappa)
    } else if xi <= -kappa {
        1.0
    } else {
        smoothstep((-kappa / 2.0 - xi) / (kappa / 2.0))
    }
}

/// `η_R(ξ) = η_L(−ξ)`.
pub fn cutoff_right(xi: f64, kappa: f64) -> f64 {
    cutoff_left(-xi, kappa)
}

/// `η_C = χ_{[−2κ,2κ]} − η_L − η_R`.
pub fn cutoff_center(xi: f64, kappa: f64) -> f64 {
    let chi = if xi.abs() <= 2.0 * kappa { 1.0 } else { 0.0 };
    chi - cutoff_left(xi, kappa) - cutoff_right(xi, kappa)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RochbergSplit {
    pub kappa: f64,
    pub phi_l: SymbolSpec,
    pub phi_c: SymbolSpec,
    pub phi_r: SymbolSpec,
}

/// `φ_L = F⁻¹(η_L φ̂)` and likewise for `C`, `R`.
///
/// Needs a known spectrum inside `[−2κ, 2κ]`; tabulated symbols are refused.
pub fn rochberg_split(phi: &SymbolSpec, band: Band) -> Result<RochbergSplit> {
    let kappa = band.kappa();
    let SymbolSpec::Trig(p) = phi else {
        return Err(Error::UnknownSpectrum(
            "splitting needs a closed-form spectrum; tabulated symbols are not supported".into(),
        ));
    };
    if p.max_abs_freq() > 2.0 * kappa * (1.0 + 1e-14) {
        return Err(Error::PrecondViolated(format!(
            "symbol has frequency {} outside [−2κ, 2κ]; band-reduce it first",
            p.max_abs_freq()
        )));
    }
    let part = |w: fn(f64, f64) -> f64| SymbolSpec::Trig(p.weighted(|f| w(f, kappa)).filter(|_| true));
    Ok(RochbergSplit {
        kappa,
        phi_l: part(cutoff_left),
        phi_c: part(cutoff_center),
        phi_r: part(cutoff_right),
    })
}

/// `(q_L, q_C, q_R)`: BMO norms of `P₋(e^{−2iκx}φ_L)` and `P₊(e^{2iκx}φ_R)`,
/// and `sup|φ_C|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RochbergQuantities {
    pub q_l: f64,
    pub q_c: f64,
    pub q_r: f64,
}

impl RochbergQuantities {
    pub fn total(&self) -> f64 {
        self.q_l + self.q_c + self.q_r
    }
}

fn trig(s: &SymbolSpec) -> Result<&TrigPolynomial> {
    match s {
        SymbolSpec::Trig(p) => Ok(p),
        SymbolSpec::Grid(_) => Err(Error::UnknownSpectrum("split parts must be trigonometric".into())),
    }
}

/// BMO norm of a trigonometric polynomial on a grid resolving its fastest
/// and slowest nonzero frequencies.
fn trig_bmo(p: &TrigPolynomial) -> Result<f64> {
    let p = p.filter(|f| f != 0.0);
    if p.is_zero() {
        return Ok(0.0);
    }
    let fmax = p.max_abs_freq();
    let fmin = p.terms().iter().map(|t| t.0.abs()).fold(f64::INFINITY, f64::min);
    let h = (std::f64::consts::PI / (16.0 * fmax)).min(0.125);
    let t = (8.0 * std::f64::consts::TAU / fmin).clamp(16.0, 400.0);
    Ok(bmo_r_norm(&GridFunction::from_trig(&p, h, t)?).value)
}

/// Sampled `sup|p|` over a window long against the slowest frequency.
fn trig_sup(p: &TrigPolynomial) -> f64 {
    if p.is_zero() {
        return 0.0;
    }
    let fmax = p.max_abs_freq().max(1.0);
    let h = std::f64::consts::PI / (32.0 * fmax);
    let k = (200.0 / h) as i64;
    (-k..=k).map(|j| p.eval_real(j as f64 * h).norm()).fold(0.0, f64::max)
}

pub fn rochberg_quantities(split: &RochbergSplit) -> Result<RochbergQuantities> {
    let k = split.kappa;
    let l = trig(&split.phi_l)?.modulate(-2.0 * k).filter(|f| f < 0.0);
    let r = trig(&split.phi_r)?.modulate(2.0 * k).filter(|f| f > 0.0);
    Ok(RochbergQuantities {
        q_l: trig_bmo(&l)?,
        q_c: trig_sup(trig(&split.phi_c)?),
        q_r: trig_bmo(&r)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn partition_of_unity() {
        let k = PI / 2.0;
        for i in -400..=400 {
            let xi = i as f64 * 0.01 * k;
            let sum = cutoff_left(xi, k) + cutoff_center(xi, k) + cutoff_right(xi, k);
            let chi = if xi.abs() <= 2.0 * k { 1.0 } else { 0.0 };
            assert!((sum - chi).abs() < 1e-15);
            assert!((0.0..=1.0).contains(&cutoff_left(xi, k)));
        }
        assert_eq!(cutoff_left(-2.0 * k, k), 1.0);
        assert_eq!(cutoff_left(-0.4 * k, k), 0.0);
    }

    #[test]
    fn top_frequency_goes_right() {
        let band = Band::new(PI / 2.0).unwrap();
        let s = rochberg_split(&SymbolSpec::Trig(TrigPolynomial::exp(PI)), band).unwrap();
        assert_eq!(s.phi_r, SymbolSpec::Trig(TrigPolynomial::exp(PI)));
        assert!(trig(&s.phi_l).unwrap().is_zero() && trig(&s.phi_c).unwrap().is_zero());
    }

    #[test]
    fn zero_symbol() {
        let band = Band::new(PI / 2.0).unwrap();
        let s = rochberg_split(&SymbolSpec::Trig(TrigPolynomial::default()), band).unwrap();
        let q = rochberg_quantities(&s).unwrap();
        assert_eq!((q.q_l, q.q_c, q.q_r), (0.0, 0.0, 0.0));
    }

    #[test]
    fn low_frequencies_are_central() {
        let band = Band::new(PI / 2.0).unwrap();
        let p = TrigPolynomial::cos(0.3).add(&TrigPolynomial::constant(Complex64::new(0.5, 0.0)));
        let s = rochberg_split(&SymbolSpec::Trig(p.clone()), band).unwrap();
        assert_eq!(s.phi_c, SymbolSpec::Trig(p));
        assert!(trig(&s.phi_l).unwrap().is_zero() && trig(&s.phi_r).unwrap().is_zero());
    }
}
