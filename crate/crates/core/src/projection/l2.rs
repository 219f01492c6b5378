//! The orthogonal projection `P_κ` onto `B²_κ`, realized as convolution with
//! `(κ/π) sinc(κ·/π)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{integrate_against, KernelIntegral, Symbol};
use crate::bandlimited::{sinc, Band, LatticeOffset, SampledBandlimited};
use crate::error::Result;
use crate::numerics::{ExpSum, ExpTerm, QuadratureSpec};

/// `(κ/π) sinc((κ/π)(z − t))` as an exponential sum in `t`.
pub(crate) fn band_kernel_tail(kappa: f64, z: Complex64) -> ExpSum {
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    let ez = (Complex64::i() * kappa * z).exp();
    let ez_inv = (-Complex64::i() * kappa * z).exp();
    let mut s = ExpSum::new();
    s.push(ExpTerm::new(-kappa, move |t| ez / (i2pi * (z - t))));
    s.push(ExpTerm::new(kappa, move |t| -ez_inv / (i2pi * (z - t))));
    s
}

/// `(P_κ g)(z) = ∫ g(t) (κ/π) sinc((κ/π)(z − t)) dt`.
///
/// Bounded symbols that do not decay are integrated in the oscillatory
/// (Abel) sense through their analytic tails.
pub fn band_limit_at<S: Symbol + ?Sized>(
    g: &S,
    band: Band,
    z: Complex64,
    spec: &QuadratureSpec,
) -> Result<KernelIntegral> {
    let kappa = band.kappa();
    let cut = g
        .core_extent()
        .unwrap_or(0.0)
        .max(z.re.abs() + 4.0 * band.spacing())
        .max(8.0 * band.spacing());
    let kernel = |t: f64| (kappa / PI) * sinc((Complex64::new(t, 0.0) - z) * (kappa / PI));
    integrate_against(g, kernel, &band_kernel_tail(kappa, z), cut, &[], kappa, spec)
}

/// Samples of `P_κ g` on the lattice `(π/κ)(n+α)`, `|n| <= N`.
pub fn project_l2<S: Symbol + ?Sized>(
    g: &S,
    band: Band,
    offset: LatticeOffset,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<SampledBandlimited> {
    let n = n as i64;
    let samples = (-n..=n)
        .into_par_iter()
        .map(|k| {
            let x = band.spacing() * (k as f64 + offset.alpha());
            band_limit_at(g, band, Complex64::new(x, 0.0), spec).map(|r| r.quad.value)
        })
        .collect::<Result<Vec<_>>>()?;
    SampledBandlimited::new(band, offset, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projection::grid::{GridFunction, TailModel, TrigPolynomial};

    #[test]
    fn sinc_is_fixed() {
        let g = GridFunction::from_fn(1.0 / 32.0, 40.0, TailModel::DecayQuadratic { constant: 1.0 }, |x| {
            sinc(Complex64::new(x, 0.0))
        })
        .unwrap();
        let s = project_l2(&g, Band::pi(), LatticeOffset::zero(), 4, &QuadratureSpec::default()).unwrap();
        for (n, c) in s.indexed() {
            let expected = if n == 0 { 1.0 } else { 0.0 };
            // sinc is cut off at |x| = 40, which costs about 1/(π²·40)
            assert!((c.re - expected).abs() < 5e-3, "{n}: {c}");
        }
    }

    #[test]
    fn in_band_cosine_is_fixed() {
        let p = TrigPolynomial::cos(0.4 * PI);
        let s = project_l2(&p, Band::pi(), LatticeOffset::zero(), 3, &QuadratureSpec::default()).unwrap();
        for (n, c) in s.indexed() {
            assert!((c - Complex64::new((0.4 * PI * n as f64).cos(), 0.0)).norm() < 1e-8, "{n}: {c}");
        }
    }

    #[test]
    fn out_of_band_exponential_vanishes() {
        let p = TrigPolynomial::exp(3.0 * PI);
        let v = band_limit_at(&p, Band::pi(), Complex64::new(0.3, 0.0), &QuadratureSpec::default()).unwrap();
        assert!(v.quad.value.norm() < 1e-8, "{}", v.quad.value);
    }
}
