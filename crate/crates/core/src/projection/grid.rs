//! Symbols on the real line: tabulated grids and trigonometric polynomials.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bandlimited::{interpolate, SampledBandlimited};
use crate::error::{Error, Result};
use crate::numerics::{
    integrate_two_sided, integrate_with_breaks, ExpSum, ExpTerm, Interval, Quadrature, QuadratureSpec,
};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `Σ c_k e^{iν_k x}`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrigPolynomial {
    terms: Vec<(f64, Complex64)>,
}

impl TrigPolynomial {
    /// Terms with equal frequency are merged; zero coefficients dropped.
    pub fn new(terms: Vec<(f64, Complex64)>) -> Result<Self> {
        if terms
            .iter()
            .any(|(f, c)| !f.is_finite() || !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::invalid("trigonometric terms must be finite"));
        }
        let mut merged: Vec<(f64, Complex64)> = Vec::new();
        for (f, c) in terms {
            match merged.iter_mut().find(|(g, _)| *g == f) {
                Some((_, d)) => *d += c,
                None => merged.push((f, c)),
            }
        }
        merged.retain(|(_, c)| *c != ZERO);
        merged.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self { terms: merged })
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![(0.0, c)]).expect("finite")
    }

    pub fn exp(freq: f64) -> Self {
        Self::new(vec![(freq, Complex64::new(1.0, 0.0))]).expect("finite")
    }

    /// `cos(νx)`.
    pub fn cos(freq: f64) -> Self {
        Self::new(vec![(freq, Complex64::new(0.5, 0.0)), (-freq, Complex64::new(0.5, 0.0))])
            .expect("finite")
    }

    pub fn terms(&self) -> &[(f64, Complex64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(f, c)| c * (Complex64::i() * f * z).exp())
            .sum()
    }

    pub fn eval_real(&self, x: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(f, c)| c * Complex64::from_polar(1.0, f * x))
            .sum()
    }

    /// `Σ|c_k|`, an upper bound for the sup norm.
    pub fn coefficient_l1(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).sum()
    }

    pub fn max_abs_freq(&self) -> f64 {
        self.terms.iter().map(|(f, _)| f.abs()).fold(0.0, f64::max)
    }

    /// Keeps the terms whose frequency satisfies `keep`.
    pub fn filter<F: Fn(f64) -> bool>(&self, keep: F) -> Self {
        Self {
            terms: self.terms.iter().copied().filter(|(f, _)| keep(*f)).collect(),
        }
    }

    /// Multiplies each coefficient by `w(ν)`.
    pub fn weighted<F: Fn(f64) -> f64>(&self, w: F) -> Self {
        let terms = self.terms.iter().map(|&(f, c)| (f, c * w(f))).collect();
        Self::new(terms).expect("finite weights")
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.terms.iter().map(|&(f, c)| (f, c * s)).collect()).expect("finite")
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.terms.iter().chain(&other.terms).copied().collect()).expect("finite")
    }

    /// Multiplies by `e^{iνx}`.
    pub fn modulate(&self, freq: f64) -> Self {
        Self::new(self.terms.iter().map(|&(f, c)| (f + freq, c)).collect()).expect("finite")
    }

    pub fn to_exp_sum(&self) -> ExpSum {
        let mut s = ExpSum::new();
        for &(f, c) in &self.terms {
            s.push(ExpTerm::new(f, move |_| c));
        }
        s
    }
}

/// What is known about a grid symbol outside its tabulated range.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailModel {
    /// Nothing; operations that need the tail refuse the symbol.
    #[default]
    None,
    /// `|g(t)| <= M`; treated as zero outside the grid, with the bound reported.
    BoundedBy { constant: f64 },
    /// `|g(t)| <= C/t²`; treated as zero outside the grid.
    DecayQuadratic { constant: f64 },
    /// Exactly equal to the given trigonometric polynomials beyond each end.
    Analytic {
        left: TrigPolynomial,
        right: TrigPolynomial,
    },
}

impl TailModel {
    pub fn is_declared(&self) -> bool {
        !matches!(self, TailModel::None)
    }

    pub fn is_bounded(&self) -> bool {
        matches!(
            self,
            TailModel::BoundedBy { .. } | TailModel::DecayQuadratic { .. } | TailModel::Analytic { .. }
        )
    }
}

/// Complex values on `x_k = k·h`, `|k| <= K`, with `K = floor(T/h)`.
///
/// Between nodes the function is the local cubic through the four nearest
/// nodes; outside `[−Kh, Kh]` it follows the tail model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    h: f64,
    values: Vec<Complex64>,
    tail: TailModel,
}

impl GridFunction {
    /// `values[i]` sits at `(i − K)·h`; the length must be `2K+1`.
    pub fn new(h: f64, values: Vec<Complex64>, tail: TailModel) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::invalid(format!("grid step must be positive, got {h}")));
        }
        if values.len() % 2 == 0 || values.len() < 5 {
            return Err(Error::invalid(format!(
                "grid needs an odd number (>= 5) of values, got {}",
                values.len()
            )));
        }
        if values.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::invalid("grid values must be finite"));
        }
        Ok(Self { h, values, tail })
    }

    /// Tabulates `f` on `[−T, T]` with step `h`.
    pub fn from_fn<F: Fn(f64) -> Complex64>(h: f64, t: f64, tail: TailModel, f: F) -> Result<Self> {
        if !(h > 0.0 && t >= h) {
            return Err(Error::invalid(format!("bad grid h = {h}, T = {t}")));
        }
        let k = (t / h + 1e-9).floor() as i64;
        Self::new(h, (-k..=k).map(|j| f(j as f64 * h)).collect(), tail)
    }

    /// Tabulates a trigonometric polynomial and declares it as both tails.
    pub fn from_trig(p: &TrigPolynomial, h: f64, t: f64) -> Result<Self> {
        let tail = TailModel::Analytic {
            left: p.clone(),
            right: p.clone(),
        };
        Self::from_fn(h, t, tail, |x| p.eval_real(x))
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    /// `K`, the largest grid index.
    pub fn half_len(&self) -> usize {
        self.values.len() / 2
    }

    /// `K·h`, the extent of the tabulated range.
    pub fn extent(&self) -> f64 {
        self.half_len() as f64 * self.h
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn tail(&self) -> &TailModel {
        &self.tail
    }

    pub fn with_tail(mut self, tail: TailModel) -> Self {
        self.tail = tail;
        self
    }

    pub fn node(&self, i: usize) -> f64 {
        (i as f64 - self.half_len() as f64) * self.h
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |i| self.node(i))
    }

    pub fn map<F: Fn(f64, Complex64) -> Complex64>(&self, f: F) -> Self {
        let values = self.values.iter().enumerate().map(|(i, &v)| f(self.node(i), v)).collect();
        Self {
            h: self.h,
            values,
            tail: TailModel::None,
        }
    }

    /// Multiplies by `e^{iνx}`, modulating analytic tails as well.
    pub fn modulate(&self, freq: f64) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| v * Complex64::from_polar(1.0, freq * self.node(i)))
            .collect();
        let tail = match &self.tail {
            TailModel::Analytic { left, right } => TailModel::Analytic {
                left: left.modulate(freq),
                right: right.modulate(freq),
            },
            other => other.clone(),
        };
        Self { h: self.h, values, tail }
    }

    pub fn sup_norm(&self) -> f64 {
        let grid = self.values.iter().map(|c| c.norm()).fold(0.0, f64::max);
        match &self.tail {
            TailModel::BoundedBy { constant } => grid.max(*constant),
            TailModel::Analytic { left, right } => {
                grid.max(left.coefficient_l1()).max(right.coefficient_l1())
            }
            _ => grid,
        }
    }

    /// Value at `x`; zero outside the grid unless the tail is analytic.
    pub fn eval(&self, x: f64) -> Complex64 {
        let ext = self.extent();
        if x.abs() > ext * (1.0 + 1e-14) {
            return match &self.tail {
                TailModel::Analytic { left, right } => {
                    if x > 0.0 {
                        right.eval_real(x)
                    } else {
                        left.eval_real(x)
                    }
                }
                _ => ZERO,
            };
        }
        let u = (x + ext) / self.h;
        let last = self.values.len() - 1;
        let i = u.floor().clamp(0.0, last as f64) as usize;
        if (u - i as f64).abs() < 1e-12 {
            return self.values[i];
        }
        let start = i.saturating_sub(1).min(last - 3);
        let xs = [start as f64, start as f64 + 1.0, start as f64 + 2.0, start as f64 + 3.0];
        let mut acc = ZERO;
        for j in 0..4 {
            let mut w = 1.0;
            for m in 0..4 {
                if m != j {
                    w *= (u - xs[m]) / (xs[j] - xs[m]);
                }
            }
            acc += self.values[start + j] * w;
        }
        acc
    }
}

/// A function on ℝ that projections and Hankel assembly can integrate.
pub trait Symbol: Sync {
    fn eval(&self, x: f64) -> Complex64;

    /// Half-width of the tabulated core, `None` for closed forms.
    fn core_extent(&self) -> Option<f64>;

    /// Points in `[lo, hi]` where the symbol is not smooth.
    fn breaks(&self, lo: f64, hi: f64) -> Vec<f64>;

    fn tail(&self) -> TailModel;

    /// Largest frequency present, for panel sizing.
    fn max_freq(&self) -> f64;

    fn sup_bound(&self) -> f64;

    /// Exact exponential-sum form beyond the core, `(left, right)`.
    fn analytic_tail(&self) -> Option<(ExpSum, ExpSum)> {
        match self.tail() {
            TailModel::Analytic { left, right } => Some((left.to_exp_sum(), right.to_exp_sum())),
            _ => None,
        }
    }
}

impl Symbol for GridFunction {
    fn eval(&self, x: f64) -> Complex64 {
        GridFunction::eval(self, x)
    }

    fn core_extent(&self) -> Option<f64> {
        Some(self.extent())
    }

    fn breaks(&self, lo: f64, hi: f64) -> Vec<f64> {
        let ext = self.extent();
        let (a, b) = (lo.max(-ext), hi.min(ext));
        let mut out = Vec::new();
        if a < b {
            let k0 = ((a + ext) / self.h).ceil() as usize;
            let k1 = ((b + ext) / self.h).floor() as usize;
            out.extend((k0..=k1.min(self.values.len() - 1)).map(|i| self.node(i)));
        }
        out
    }

    fn tail(&self) -> TailModel {
        self.tail.clone()
    }

    fn max_freq(&self) -> f64 {
        match &self.tail {
            TailModel::Analytic { left, right } => left.max_abs_freq().max(right.max_abs_freq()),
            _ => 0.0,
        }
    }

    fn sup_bound(&self) -> f64 {
        self.sup_norm()
    }
}

impl Symbol for TrigPolynomial {
    fn eval(&self, x: f64) -> Complex64 {
        self.eval_real(x)
    }

    fn core_extent(&self) -> Option<f64> {
        None
    }

    fn breaks(&self, _lo: f64, _hi: f64) -> Vec<f64> {
        Vec::new()
    }

    fn tail(&self) -> TailModel {
        TailModel::Analytic {
            left: self.clone(),
            right: self.clone(),
        }
    }

    fn max_freq(&self) -> f64 {
        self.max_abs_freq()
    }

    fn sup_bound(&self) -> f64 {
        self.coefficient_l1()
    }
}

/// A sampled bandlimited function as a symbol. Its sinc series is exact
/// everywhere, so beyond the last sample it is
/// `e^{iκt} A₊(t) + e^{−iκt} A₋(t)` with `A_± = ±Σ c_n e^{∓iπ(n+α)}/(2i(κt − π(n+α)))`.
impl Symbol for SampledBandlimited {
    fn eval(&self, x: f64) -> Complex64 {
        interpolate(self, Complex64::new(x, 0.0))
    }

    fn core_extent(&self) -> Option<f64> {
        let n = self.window() as i64;
        Some(self.lattice_point(n).abs().max(self.lattice_point(-n).abs()) + self.band().spacing())
    }

    fn breaks(&self, _lo: f64, _hi: f64) -> Vec<f64> {
        Vec::new()
    }

    fn tail(&self) -> TailModel {
        TailModel::BoundedBy {
            constant: self.sup_bound(),
        }
    }

    fn max_freq(&self) -> f64 {
        self.band().kappa()
    }

    fn sup_bound(&self) -> f64 {
        self.samples().iter().map(|c| c.norm()).sum()
    }

    fn analytic_tail(&self) -> Option<(ExpSum, ExpSum)> {
        let kappa = self.band().kappa();
        let poles: Vec<(f64, Complex64, Complex64)> = self
            .indexed()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(|(n, c)| {
                let m = n as f64 + self.offset().alpha();
                (PI * m, c * Complex64::from_polar(1.0, -PI * m), c * Complex64::from_polar(1.0, PI * m))
            })
            .collect();
        let poles = std::sync::Arc::new(poles);
        let two_i = Complex64::new(0.0, 2.0);
        let mut s = ExpSum::new();
        let p = poles.clone();
        s.push(ExpTerm::new(kappa, move |t| {
            p.iter().map(|&(x, a, _)| a / (two_i * (t * kappa - x))).sum()
        }));
        s.push(ExpTerm::new(-kappa, move |t| {
            -poles.iter().map(|&(x, _, b)| b / (two_i * (t * kappa - x))).sum::<Complex64>()
        }));
        Some((s.clone(), s))
    }
}

/// Result of integrating a symbol against a kernel over ℝ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelIntegral {
    pub quad: Quadrature,
    /// Bound on `|g|` for the part of the line that was treated as zero.
    pub ignored_tail_bound: f64,
}

/// `∫_ℝ g(t) k(t) dt`.
///
/// `[−cut, cut]` is integrated directly with `kernel`; beyond it the symbol's
/// analytic tail is multiplied with `kernel_tail`, which must equal the kernel
/// for `|t| >= cut` as an exponential sum. Bounded tails are taken as zero.
pub fn integrate_against<S, K>(
    g: &S,
    kernel: K,
    kernel_tail: &ExpSum,
    cut: f64,
    extra_breaks: &[f64],
    kernel_freq: f64,
    spec: &QuadratureSpec,
) -> Result<KernelIntegral>
where
    S: Symbol + ?Sized,
    K: Fn(f64) -> Complex64,
{
    let mut breaks = g.breaks(-cut, cut);
    breaks.extend_from_slice(extra_breaks);
    let freq = g.max_freq() + kernel_freq;
    let mut local = spec.clone();
    if freq > 0.0 {
        local = local.with_period(2.0 * PI / freq);
    }
    if local.max_panel_width.is_none_or(|w| w > 1.0) {
        local.max_panel_width = Some(1.0);
    }
    let central = integrate_with_breaks(|t| g.eval(t) * kernel(t), Interval::new(-cut, cut)?, &breaks, &local)?;
    let (tail, bound) = match (g.analytic_tail(), g.tail()) {
        (Some((left, right)), _) => (
            integrate_two_sided(&right.product(kernel_tail), &left.product(kernel_tail), cut, spec)?,
            0.0,
        ),
        (None, TailModel::BoundedBy { constant }) => (Quadrature::zero(), constant),
        (None, TailModel::DecayQuadratic { constant }) => (Quadrature::zero(), constant / (cut * cut)),
        (None, _) => (Quadrature::zero(), 0.0),
    };
    Ok(KernelIntegral {
        quad: central + tail,
        ignored_tail_bound: bound,
    })
}
