//! Bandlimited functions stored by their samples on a shifted lattice.
//!
//! A [`SampledBandlimited`] with band `κ`, offset `α` and window `N` holds
//! `c_n = f((π/κ)(n+α))` for `|n| <= N` and represents
//!
//! ```text
//! f(z) = Σ c_n sinc((κ/π) z − n − α)
//! ```
//!
//! The orthonormal basis of `B²_κ` is `√(κ/π) sinc((κ/π)z − n − α)`, so the
//! basis coefficients are `√(π/κ) c_n`. That factor is applied exactly once,
//! in [`pw_norm`]; at `κ = π` samples and coefficients coincide.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex evaluation point `x + iy`.
pub type ComplexPoint = Complex64;

/// Exponential type bound `κ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    kappa: f64,
}

impl Band {
    pub fn new(kappa: f64) -> Result<Self> {
        if kappa.is_finite() && kappa > 0.0 {
            Ok(Self { kappa })
        } else {
            Err(Error::invalid(format!("band width must be positive, got {kappa}")))
        }
    }

    /// The band `κ = π`.
    pub fn pi() -> Self {
        Self { kappa: PI }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Lattice spacing `π/κ`.
    pub fn spacing(&self) -> f64 {
        PI / self.kappa
    }
}

/// Lattice offset `α ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeOffset {
    alpha: f64,
}

impl LatticeOffset {
    pub fn new(alpha: f64) -> Result<Self> {
        if (0.0..1.0).contains(&alpha) {
            Ok(Self { alpha })
        } else {
            Err(Error::invalid(format!("lattice offset must lie in [0, 1), got {alpha}")))
        }
    }

    pub fn zero() -> Self {
        Self { alpha: 0.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// `sin(πx)` with exact argument reduction; zero at every integer.
pub fn sin_pi(x: f64) -> f64 {
    let n = (2.0 * x).round();
    let y = x - 0.5 * n;
    match (n as i64).rem_euclid(4) {
        0 => (PI * y).sin(),
        1 => (PI * y).cos(),
        2 => -(PI * y).sin(),
        _ => -(PI * y).cos(),
    }
}

/// `cos(πx)` with exact argument reduction.
pub fn cos_pi(x: f64) -> f64 {
    let n = (2.0 * x).round();
    let y = x - 0.5 * n;
    match (n as i64).rem_euclid(4) {
        0 => (PI * y).cos(),
        1 => -(PI * y).sin(),
        2 => -(PI * y).cos(),
        _ => (PI * y).sin(),
    }
}

/// `sin(πz)·e^{−π|Im z|}`, finite for every finite `z`.
pub fn sin_pi_scaled(z: Complex64) -> Complex64 {
    let t = PI * z.im.abs();
    let e = (-2.0 * t).exp();
    let ch = 0.5 * (1.0 + e);
    let sh = 0.5 * (1.0 - e) * z.im.signum();
    Complex64::new(sin_pi(z.re) * ch, cos_pi(z.re) * sh)
}

/// `sin(πz)`.
pub fn sin_pi_c(z: Complex64) -> Complex64 {
    Complex64::new(
        sin_pi(z.re) * (PI * z.im).cosh(),
        cos_pi(z.re) * (PI * z.im).sinh(),
    )
}

/// `cos(πz)`.
pub fn cos_pi_c(z: Complex64) -> Complex64 {
    Complex64::new(
        cos_pi(z.re) * (PI * z.im).cosh(),
        -sin_pi(z.re) * (PI * z.im).sinh(),
    )
}

fn sinc_exact(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        let p2 = (PI * z) * (PI * z);
        return 1.0 - p2 / 6.0 + p2 * p2 / 120.0;
    }
    sin_pi_c(z) / (PI * z)
}

/// Normalized cardinal sine `sin(πz)/(πz)`.
pub fn sinc(z: Complex64) -> Complex64 {
    #[cfg(feature = "mutant-sinc")]
    {
        sinc_exact(z - 1.0)
    }
    #[cfg(not(feature = "mutant-sinc"))]
    {
        sinc_exact(z)
    }
}

/// Real-argument [`sinc`].
pub fn sinc_real(x: f64) -> f64 {
    sinc(Complex64::new(x, 0.0)).re
}

/// `sinc(z)·e^{−π|Im z|}`.
fn sinc_scaled(z: Complex64) -> Complex64 {
    #[cfg(feature = "mutant-sinc")]
    let z = z - 1.0;
    if z.norm() < 1e-4 {
        return sinc_exact(z) * (-PI * z.im.abs()).exp();
    }
    sin_pi_scaled(z) / (PI * z)
}

/// Finitely many lattice samples of a function in `B²_κ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledBandlimited {
    band: Band,
    offset: LatticeOffset,
    samples: Vec<Complex64>,
}

impl SampledBandlimited {
    /// `samples[i]` is `c_{i−N}`; the length must be `2N+1`.
    pub fn new(band: Band, offset: LatticeOffset, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() % 2 == 0 {
            return Err(Error::invalid(format!(
                "sample count must be odd (2N+1), got {}",
                samples.len()
            )));
        }
        if samples.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::invalid("samples must be finite"));
        }
        Ok(Self {
            band,
            offset,
            samples,
        })
    }

    /// Samples `f` at the lattice points `(π/κ)(n+α)`, `|n| <= N`.
    pub fn from_fn<F>(band: Band, offset: LatticeOffset, n: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64,
    {
        let n = n as i64;
        let samples = (-n..=n)
            .map(|k| f(band.spacing() * (k as f64 + offset.alpha)))
            .collect();
        Self::new(band, offset, samples)
    }

    /// A single unit sample at index `m` on window `N`.
    pub fn unit(band: Band, offset: LatticeOffset, n: usize, m: i64) -> Result<Self> {
        if m.unsigned_abs() as usize > n {
            return Err(Error::invalid(format!("index {m} outside window {n}")));
        }
        let mut samples = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        samples[(m + n as i64) as usize] = Complex64::new(1.0, 0.0);
        Self::new(band, offset, samples)
    }

    pub fn band(&self) -> Band {
        self.band
    }

    pub fn offset(&self) -> LatticeOffset {
        self.offset
    }

    pub fn window(&self) -> usize {
        self.samples.len() / 2
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// `c_n`, zero outside the window.
    pub fn sample(&self, n: i64) -> Complex64 {
        let i = n + self.window() as i64;
        if i < 0 || i as usize >= self.samples.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.samples[i as usize]
        }
    }

    /// `(π/κ)(n+α)`.
    pub fn lattice_point(&self, n: i64) -> f64 {
        self.band.spacing() * (n as f64 + self.offset.alpha)
    }

    /// `(n, c_n)` pairs in increasing `n`.
    pub fn indexed(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.window() as i64;
        self.samples.iter().enumerate().map(move |(i, &c)| (i as i64 - n, c))
    }

    /// Same samples on band `λκ`; the result `g` satisfies `g(z/λ) = f(z)`.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        Self::new(Band::new(self.band.kappa * lambda)?, self.offset, self.samples.clone())
    }

    /// Pointwise sum; both must share band, offset and window.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.samples.len() != other.samples.len() {
            return Err(Error::WindowMismatch {
                expected: self.window(),
                got: other.window(),
            });
        }
        if self.band != other.band || self.offset != other.offset {
            return Err(Error::invalid("band or offset differ"));
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect();
        Self::new(self.band, self.offset, samples)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            band: self.band,
            offset: self.offset,
            samples: self.samples.iter().map(|&s| s * c).collect(),
        }
    }

    /// Bound on the truncation error at `z` for samples that continue with the
    /// size of the current ones: `sup|c_n|·e^{κ|Im z|}/N`.
    pub fn tail_bound(&self, z: ComplexPoint) -> f64 {
        let sup = self.samples.iter().map(|c| c.norm()).fold(0.0, f64::max);
        sup * (self.band.kappa * z.im.abs()).exp() / (self.window().max(1) as f64)
    }
}

/// Sinc series at `z`.
pub fn interpolate(s: &SampledBandlimited, z: ComplexPoint) -> Complex64 {
    let w = z * (s.band.kappa / PI) - s.offset.alpha;
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, c) in s.indexed() {
        if c != Complex64::new(0.0, 0.0) {
            acc += c * sinc(w - n as f64);
        }
    }
    acc
}

/// Sinc series at `z`, logging a warning when the truncation bound exceeds `tol`.
pub fn interpolate_checked(s: &SampledBandlimited, z: ComplexPoint, tol: f64) -> Complex64 {
    let bound = s.tail_bound(z);
    if z.im != 0.0 && bound > tol {
        log::warn!("truncation bound {bound:.3e} at z = {z} exceeds tolerance {tol:.1e}");
    }
    interpolate(s, z)
}

/// `B²_κ` norm of the truncated series, `√((π/κ) Σ|c_n|²)`.
pub fn pw_norm(s: &SampledBandlimited) -> f64 {
    let sum: f64 = s.samples.iter().map(|c| c.norm_sqr()).sum();
    (s.band.spacing() * sum).sqrt()
}

/// `f^#(z) = conj(f(conj z))`; on real lattice points this conjugates samples.
pub fn involution(s: &SampledBandlimited) -> SampledBandlimited {
    SampledBandlimited {
        band: s.band,
        offset: s.offset,
        samples: s.samples.iter().map(|c| c.conj()).collect(),
    }
}

/// How [`growth_ratio_y`] evaluates `|f(iy)|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GrowthMode {
    /// `e^{κ|y|}` is factored out before summing; never overflows.
    #[default]
    LogScaled,
    /// Direct evaluation; fails once `e^{κ|y|}` leaves the double range.
    Naive,
}

/// `log|f(iy)| − log|y| − κ|y|` for each `y`.
///
/// A function satisfies the growth condition (Y) when this tends to `−∞`;
/// see [`satisfies_growth_y`].
pub fn growth_ratio_y(s: &SampledBandlimited, ys: &[f64], mode: GrowthMode) -> Result<Vec<f64>> {
    let kappa = s.band.kappa;
    ys.iter()
        .map(|&y| {
            if y == 0.0 || !y.is_finite() {
                return Err(Error::invalid(format!("growth ratio needs finite nonzero y, got {y}")));
            }
            match mode {
                GrowthMode::Naive => {
                    if kappa * y.abs() > 709.0 {
                        return Err(Error::Overflow(format!(
                            "e^(κ|y|) with κ|y| = {:.1} is out of range",
                            kappa * y.abs()
                        )));
                    }
                    let v = interpolate(s, Complex64::new(0.0, y));
                    Ok(v.norm().ln() - y.abs().ln() - kappa * y.abs())
                }
                GrowthMode::LogScaled => {
                    let w = Complex64::new(-s.offset.alpha, kappa * y / PI);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (n, c) in s.indexed() {
                        acc += c * sinc_scaled(w - n as f64);
                    }
                    Ok(acc.norm().ln() - y.abs().ln())
                }
            }
        })
        .collect()
}

/// Log-ratios from closed-form values `log|f(iy)|`.
pub fn growth_ratio_from_log_abs(log_abs: &[f64], ys: &[f64], kappa: f64) -> Vec<f64> {
    log_abs
        .iter()
        .zip(ys)
        .map(|(l, y)| l - y.abs().ln() - kappa * y.abs())
        .collect()
}

/// Empirical verdict on condition (Y): the ratios, taken along increasing
/// `|y|`, decrease monotonically and drop by at least `ln 2` overall.
pub fn satisfies_growth_y(ratios: &[f64]) -> bool {
    if ratios.len() < 2 {
        return false;
    }
    let monotone = ratios.windows(2).all(|w| w[1] <= w[0] || w[1] == f64::NEG_INFINITY);
    monotone && ratios[0] - ratios[ratios.len() - 1] >= std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(c(0.0)), c(1.0));
        assert_eq!(sinc(c(1.0)), c(0.0));
        assert_eq!(sinc(c(-7.0)), c(0.0));
        assert!((sinc(c(0.5)).re - 2.0 / PI).abs() < 1e-15);
        // Taylor branch is continuous with the direct formula
        let z = Complex64::new(0.99e-4, 0.0);
        let direct = (PI * z.re).sin() / (PI * z.re);
        assert!((sinc(z).re - direct).abs() < 1e-16);
    }

    #[test]
    fn complex_sinc_matches_library_sin() {
        let z = Complex64::new(0.3, 1.2);
        let expected = (PI * z).sin() / (PI * z);
        assert!((sinc(z) - expected).norm() < 1e-14);
    }

    #[test]
    fn trig_reduction() {
        for k in -20..20 {
            assert_eq!(sin_pi(k as f64), 0.0);
            assert_eq!(cos_pi(k as f64 + 0.5), 0.0);
        }
        assert!((sin_pi(0.3) - (0.3 * PI).sin()).abs() < 1e-15);
        assert!((cos_pi(2.7) - (2.7 * PI).cos()).abs() < 1e-14);
    }

    #[test]
    fn unit_sample_is_sinc() {
        let s = SampledBandlimited::unit(Band::pi(), LatticeOffset::zero(), 3, 0).unwrap();
        for z in [c(0.3), Complex64::new(1.7, 0.4)] {
            assert!((interpolate(&s, z) - sinc(z)).norm() < 1e-15);
        }
        assert_eq!(pw_norm(&s), 1.0);
    }

    #[test]
    fn two_unit_samples() {
        let mut v = vec![c(0.0); 5];
        v[1] = c(1.0);
        v[3] = c(1.0);
        let s = SampledBandlimited::new(Band::pi(), LatticeOffset::zero(), v).unwrap();
        assert!((pw_norm(&s) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn cosine_reconstruction() {
        let s = SampledBandlimited::from_fn(Band::pi(), LatticeOffset::zero(), 400, |x| {
            c((0.4 * PI * x).cos())
        })
        .unwrap();
        let v = interpolate(&s, c(1.3));
        assert!((v.re - (0.4 * PI * 1.3).cos()).abs() < 1e-4, "{v}");
    }

    #[test]
    fn involution_examples() {
        let band = Band::pi();
        let real = SampledBandlimited::from_fn(band, LatticeOffset::zero(), 3, |x| c(x)).unwrap();
        assert_eq!(involution(&real), real);
        let s = SampledBandlimited::unit(band, LatticeOffset::zero(), 2, 0)
            .unwrap()
            .scale(Complex64::i());
        assert_eq!(involution(&s).sample(0), -Complex64::i());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Band::new(0.0).is_err());
        assert!(LatticeOffset::new(1.0).is_err());
        assert!(SampledBandlimited::new(Band::pi(), LatticeOffset::zero(), vec![c(0.0); 4]).is_err());
        assert!(SampledBandlimited::new(Band::pi(), LatticeOffset::zero(), vec![c(f64::NAN)]).is_err());
    }

    #[test]
    fn naive_growth_overflows() {
        let s = SampledBandlimited::unit(Band::pi(), LatticeOffset::zero(), 1, 0).unwrap();
        let err = growth_ratio_y(&s, &[300.0], GrowthMode::Naive).unwrap_err();
        assert!(matches!(err, Error::Overflow(_)));
        let r = growth_ratio_y(&s, &[300.0], GrowthMode::LogScaled).unwrap();
        assert!(r[0].is_finite());
    }

    #[test]
    fn scaled_and_naive_growth_agree() {
        let s = SampledBandlimited::from_fn(Band::new(2.0).unwrap(), LatticeOffset::new(0.3).unwrap(), 6, |x| {
            c(1.0 / (1.0 + x * x))
        })
        .unwrap();
        let ys = [0.5, 3.0, 40.0];
        let a = growth_ratio_y(&s, &ys, GrowthMode::Naive).unwrap();
        let b = growth_ratio_y(&s, &ys, GrowthMode::LogScaled).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }
}
