//! The synthesis map `T_α`, the spaces `X_α`, discrete pairings and the
//! Clark measures of `e^{−iπz}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bandlimited::{sinc, Band, LatticeOffset, SampledBandlimited};
use crate::discrete_hardy::{bmo_z_norm, discrete_hilbert, summability_check, FiniteSequence, WindowedValue};
use crate::error::{Error, Result};
use crate::projection::TrigPolynomial;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `T_α a(z) = e^{−iπα} [ Σ_{n≠0} (−1)^n a_n (w/n) sinc(w−n) + a_0 sinc(w) ]`, `w = z − α`.
///
/// This is the series with summand `(1/(w−n) + 1/n) sin(π(w−n))/π`, regrouped
/// so that neither the difference of reciprocals nor the sine loses digits.
/// Terms are summed by increasing `|n|`, negative index first.
pub fn t_alpha(a: &FiniteSequence, alpha: LatticeOffset, z: Complex64) -> Complex64 {
    let w = z - alpha.alpha();
    let n_max = a.window() as i64;
    let mut acc = a.get(0) * sinc(w);
    for m in 1..=n_max {
        for n in [-m, m] {
            let c = a.get(n);
            if c != ZERO {
                let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                acc += c * sign * (w / n as f64) * sinc(w - n as f64);
            }
        }
    }
    Complex64::from_polar(1.0, -PI * alpha.alpha()) * acc
}

/// Closed-form description carried alongside the samples of an `X_α` element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedForm {
    /// `T_β a` for a finitely supported `a`.
    TAlpha { beta: f64, seq: FiniteSequence },
    Trig(TrigPolynomial),
}

impl ClosedForm {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            ClosedForm::TAlpha { beta, seq } => {
                t_alpha(seq, LatticeOffset::new(*beta).expect("validated offset"), z)
            }
            ClosedForm::Trig(p) => p.eval(z),
        }
    }
}

/// An element of `X_α`: samples `f(n+α)`, `|n| <= N`, on the band `π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XAlphaElement {
    samples: SampledBandlimited,
    closed_form: Option<ClosedForm>,
    /// Summability of `((−1)^n f(n+α))` against `1/(1+n²)`.
    pub summability: WindowedValue,
}

impl XAlphaElement {
    pub fn from_samples(samples: SampledBandlimited) -> Result<Self> {
        if (samples.band().kappa() - PI).abs() > 1e-12 {
            return Err(Error::PrecondViolated("X_α elements live on the band π".into()));
        }
        let summability = summability_check(&transformed(&samples));
        if summability.divergent {
            log::warn!("transformed samples fail the summability check");
        }
        Ok(Self {
            samples,
            closed_form: None,
            summability,
        })
    }

    /// Samples a closed form on the lattice `n+α`, `|n| <= N`.
    pub fn from_closed_form(form: ClosedForm, alpha: LatticeOffset, n: usize) -> Result<Self> {
        if let ClosedForm::TAlpha { beta, .. } = &form {
            LatticeOffset::new(*beta)?;
        }
        let samples = SampledBandlimited::from_fn(Band::pi(), alpha, n, |x| form.eval(Complex64::new(x, 0.0)))?;
        let mut out = Self::from_samples(samples)?;
        out.closed_form = Some(form);
        Ok(out)
    }

    /// `T_α a` sampled on its own lattice.
    pub fn t_alpha(a: &FiniteSequence, alpha: LatticeOffset, n: usize) -> Result<Self> {
        Self::from_closed_form(
            ClosedForm::TAlpha {
                beta: alpha.alpha(),
                seq: a.clone(),
            },
            alpha,
            n,
        )
    }

    pub fn samples(&self) -> &SampledBandlimited {
        &self.samples
    }

    pub fn closed_form(&self) -> Option<&ClosedForm> {
        self.closed_form.as_ref()
    }

    pub fn alpha(&self) -> LatticeOffset {
        self.samples.offset()
    }

    pub fn window(&self) -> usize {
        self.samples.window()
    }

    /// `f(x)` at a real point; lattice points use the stored samples.
    pub fn value_at(&self, x: f64) -> Result<Complex64> {
        let u = x - self.alpha().alpha();
        let n = u.round();
        if (u - n).abs() < 1e-12 && n.abs() <= self.window() as f64 {
            return Ok(self.samples.sample(n as i64));
        }
        match &self.closed_form {
            Some(form) => Ok(form.eval(Complex64::new(x, 0.0))),
            None => Err(Error::invalid(format!(
                "{x} is off the sample lattice and no closed form is attached"
            ))),
        }
    }

    /// The transformed sequence `((−1)^n f(n+α))`.
    pub fn transformed(&self) -> FiniteSequence {
        transformed(&self.samples)
    }
}

fn transformed(s: &SampledBandlimited) -> FiniteSequence {
    FiniteSequence::from_fn(s.window(), |n| {
        let c = s.sample(n);
        if n.rem_euclid(2) == 0 {
            c
        } else {
            -c
        }
    })
}

/// `‖f‖_{X_α}`: the `BMO(ℤ)` norm of `((−1)^n f(n+α))`.
pub fn x_alpha_norm(f: &XAlphaElement) -> f64 {
    bmo_z_norm(&f.transformed())
}

/// A windowed sum with its last-octave increment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingValue {
    pub value: Complex64,
    /// Sum over `N/2 < |n| <= N`.
    pub increment: Complex64,
}

/// `Σ_{|n|<=N} h(n+α) f(n+α)` on the lattice of `h`.
pub fn pairing_discrete(h: &SampledBandlimited, f: &XAlphaElement) -> Result<PairingValue> {
    if (h.band().kappa() - PI).abs() > 1e-12 {
        return Err(Error::PrecondViolated("pairing needs h on the band π".into()));
    }
    let n = h.window() as i64;
    let terms: Vec<Complex64> = (-n..=n)
        .into_par_iter()
        .map(|k| -> Result<Complex64> {
            let c = h.sample(k);
            if c == ZERO {
                return Ok(ZERO);
            }
            Ok(c * f.value_at(h.lattice_point(k))?)
        })
        .collect::<Result<_>>()?;
    // increasing |n|, negative index first
    let mut value = terms[n as usize];
    let mut increment = ZERO;
    for m in 1..=n {
        let pair = terms[(n - m) as usize] + terms[(n + m) as usize];
        value += pair;
        if m > n / 2 {
            increment += pair;
        }
    }
    Ok(PairingValue { value, increment })
}

/// Outcome of comparing `(−1)^n f(n+α)` with the discrete Hilbert transform
/// of `R₀f = ((−1)^n f(n))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RAlphaReport {
    /// `sup_n |(−1)^n f(n+α) − (sin(πα)/π)(H_{d,α}R₀f)(n) − C|` with the
    /// best constant `C` (the midrange of the differences).
    pub discrepancy: f64,
    /// The constant `C`; it equals `(sin πα/π) Σ a_n/n` for `f = T_0 a`.
    pub constant: Complex64,
    /// `sup_n |e^{−iπα}(−1)^n f(n+α) − (1/π)(H_{d,α}R₀f)(n)|`.
    pub unit_factor_discrepancy: f64,
    /// Central half-window on which both sides were compared.
    pub window: usize,
}

/// Checks the relation between lattice values at `n+α` and the discrete
/// Hilbert transform of the integer samples, after removing `f(0)·sinc`.
///
/// Needs a closed form (values at integers and at `n+α`) and `0 < α < 1`.
pub fn r_alpha_check(f: &XAlphaElement, alpha: LatticeOffset) -> Result<RAlphaReport> {
    let al = alpha.alpha();
    if al == 0.0 {
        return Err(Error::invalid("the relation is stated for 0 < α < 1"));
    }
    let Some(form) = f.closed_form() else {
        return Err(Error::invalid("r_alpha_check needs a closed form to evaluate off the lattice"));
    };
    let n = f.window();
    let f0 = form.eval(ZERO);
    let reduced = |z: Complex64| form.eval(z) - f0 * sinc(z);
    let r0 = FiniteSequence::from_fn(n, |k| {
        let v = reduced(Complex64::new(k as f64, 0.0));
        if k.rem_euclid(2) == 0 {
            v
        } else {
            -v
        }
    });
    if r0.get(0).norm() > 1e-12 * (1.0 + r0.sup_norm()) {
        return Err(Error::PrecondViolated(format!(
            "zeroth entry {} does not vanish after reduction",
            r0.get(0)
        )));
    }
    let m = n / 2;
    let h = discrete_hilbert(&r0, alpha, m);
    let s = (PI * al).sin() / PI;
    let rot = Complex64::from_polar(1.0, -PI * al);
    let mut diffs = Vec::with_capacity(2 * m + 1);
    let mut unit = 0.0_f64;
    for k in -(m as i64)..=(m as i64) {
        let v = reduced(Complex64::new(k as f64 + al, 0.0));
        let lhs = if k.rem_euclid(2) == 0 { v } else { -v };
        diffs.push(lhs - h.get(k) * s);
        unit = unit.max((rot * lhs - h.get(k) / PI).norm());
    }
    let (re_lo, re_hi) = diffs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), d| (a.min(d.re), b.max(d.re)));
    let (im_lo, im_hi) = diffs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), d| (a.min(d.im), b.max(d.im)));
    let constant = Complex64::new(0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi));
    let discrepancy = diffs.iter().map(|d| (d - constant).norm()).fold(0.0, f64::max);
    Ok(RAlphaReport {
        discrepancy,
        constant,
        unit_factor_discrepancy: unit,
        window: m,
    })
}

/// Point masses `1/π` at `n+α`, `|n| <= N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClarkMeasure {
    pub alpha: f64,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ClarkMeasure {
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// The Clark measure `σ_α` of `e^{−iπz}`, truncated to `|n| <= N`.
pub fn clark_measure(alpha: LatticeOffset, n: usize) -> ClarkMeasure {
    let n = n as i64;
    ClarkMeasure {
        alpha: alpha.alpha(),
        points: (-n..=n).map(|k| k as f64 + alpha.alpha()).collect(),
        weights: vec![1.0 / PI; (2 * n + 1) as usize],
    }
}

/// `π ‖e^{iπx} f‖_{BMO(σ_α)}`.
///
/// Averages are taken against `σ_α`; the oscillation over an interval `I`
/// that covers the atoms `A` is normalized by its length `|I| = #A` (the
/// union of the unit cells around the atoms). With that normalization the
/// norm coincides with [`x_alpha_norm`].
pub fn bmo_clark_norm(f: &XAlphaElement, alpha: LatticeOffset) -> Result<f64> {
    if (f.alpha().alpha() - alpha.alpha()).abs() > 1e-15 {
        return Err(Error::invalid("f is sampled on a different lattice than σ_α"));
    }
    let sigma = clark_measure(alpha, f.window());
    let g: Vec<Complex64> = sigma
        .points
        .iter()
        .enumerate()
        .map(|(i, &t)| Complex64::from_polar(1.0, PI * t) * f.samples().samples()[i])
        .collect();
    let w = &sigma.weights;
    let len = g.len();
    let best = (0..len)
        .into_par_iter()
        .map(|i| {
            let mut best = 0.0_f64;
            let mut mass = 0.0;
            let mut moment = ZERO;
            for j in i..len {
                mass += w[j];
                moment += g[j] * w[j];
                let mean = moment / mass;
                let spread: f64 = (i..=j).map(|k| w[k] * (g[k] - mean).norm()).sum();
                best = best.max(spread / (j - i + 1) as f64);
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    Ok(PI * best)
}
