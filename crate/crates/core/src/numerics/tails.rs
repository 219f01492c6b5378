//! Half-line integrals of exponential sums `Σ e^{iνt} a_ν(t)`.
//!
//! Each amplitude `a_ν` must extend analytically to a neighbourhood of the
//! closed half-plane `Re t >= X` (for the right tail) and decay there. The
//! contour is then rotated onto the vertical ray where `e^{iνt}` decays
//! exponentially, which turns slowly converging oscillatory integrals into
//! smooth, rapidly decaying ones. Non-oscillating terms (`ν = 0`) fall back
//! to the `t = X/v` compactification and need `a_0(t) = O(t^-2)`.

use std::sync::Arc;

use num_complex::Complex64;

use super::quadrature::{integrate_with_breaks, Interval, Quadrature, QuadratureSpec};
use crate::error::Result;

type Amplitude = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// One term `e^{iνt} a(t)`.
#[derive(Clone)]
pub struct ExpTerm {
    pub freq: f64,
    amplitude: Amplitude,
}

impl ExpTerm {
    pub fn new<F>(freq: f64, amplitude: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            freq,
            amplitude: Arc::new(amplitude),
        }
    }

    pub fn amplitude(&self, t: Complex64) -> Complex64 {
        (self.amplitude)(t)
    }
}

impl std::fmt::Debug for ExpTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExpTerm").field("freq", &self.freq).finish_non_exhaustive()
    }
}

/// A finite sum of exponentially modulated analytic amplitudes.
#[derive(Clone, Debug, Default)]
pub struct ExpSum {
    terms: Vec<ExpTerm>,
}

impl ExpSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single<F>(freq: f64, amplitude: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            terms: vec![ExpTerm::new(freq, amplitude)],
        }
    }

    pub fn push(&mut self, term: ExpTerm) {
        self.terms.push(term);
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Termwise product; frequencies add and amplitudes multiply.
    pub fn product(&self, other: &ExpSum) -> ExpSum {
        let mut out = ExpSum::new();
        for a in &self.terms {
            for b in &other.terms {
                let (fa, fb) = (a.amplitude.clone(), b.amplitude.clone());
                out.terms.push(ExpTerm {
                    freq: a.freq + b.freq,
                    amplitude: Arc::new(move |t| fa(t) * fb(t)),
                });
            }
        }
        out
    }

    /// Multiplies every amplitude by `g`.
    pub fn times<F>(&self, g: F) -> ExpSum
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        let g: Amplitude = Arc::new(g);
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let (a, g) = (t.amplitude.clone(), g.clone());
                ExpTerm {
                    freq: t.freq,
                    amplitude: Arc::new(move |z| a(z) * g(z)),
                }
            })
            .collect();
        ExpSum { terms }
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|term| (Complex64::i() * term.freq * t).exp() * term.amplitude(t))
            .sum()
    }

    pub fn eval_real(&self, t: f64) -> Complex64 {
        self.eval(Complex64::new(t, 0.0))
    }

    /// `∫_X^∞` of the sum.
    pub fn integrate_right(&self, x: f64, spec: &QuadratureSpec) -> Result<Quadrature> {
        let mut total = Quadrature::zero();
        for term in &self.terms {
            let a = term.amplitude.clone();
            total = total + half_line(term.freq, &move |t| a(t), x, spec)?;
        }
        Ok(total)
    }

    /// `∫_{-∞}^{-X}` of the sum, by reflection `t -> -t`.
    pub fn integrate_left(&self, x: f64, spec: &QuadratureSpec) -> Result<Quadrature> {
        let mut total = Quadrature::zero();
        for term in &self.terms {
            let a = term.amplitude.clone();
            total = total + half_line(-term.freq, &move |t| a(-t), x, spec)?;
        }
        Ok(total)
    }

    /// `∫_{|t|>X}` of the sum.
    pub fn integrate_outside(&self, x: f64, spec: &QuadratureSpec) -> Result<Quadrature> {
        integrate_two_sided(self, self, x, spec)
    }
}

/// `∫_X^∞ right + ∫_{-∞}^{-X} left`.
///
/// Non-oscillating terms of the two sides are folded together before
/// integrating, so a pair like `1/(z−t)` on both sides, whose halves diverge
/// logarithmically, is summed symmetrically.
pub fn integrate_two_sided(
    right: &ExpSum,
    left: &ExpSum,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    let mut total = Quadrature::zero();
    let mut flat_right: Vec<Amplitude> = Vec::new();
    let mut flat_left: Vec<Amplitude> = Vec::new();
    for term in &right.terms {
        if term.freq.abs() <= FREQ_EPS {
            flat_right.push(term.amplitude.clone());
        } else {
            let a = term.amplitude.clone();
            total = total + half_line(term.freq, &move |t| a(t), x, spec)?;
        }
    }
    for term in &left.terms {
        if term.freq.abs() <= FREQ_EPS {
            flat_left.push(term.amplitude.clone());
        } else {
            let a = term.amplitude.clone();
            total = total + half_line(-term.freq, &move |t| a(-t), x, spec)?;
        }
    }
    if !flat_right.is_empty() || !flat_left.is_empty() {
        let folded = move |t: Complex64| {
            flat_right.iter().map(|a| a(t)).sum::<Complex64>()
                + flat_left.iter().map(|a| a(-t)).sum::<Complex64>()
        };
        total = total + half_line(0.0, &folded, x, spec)?;
    }
    Ok(total)
}

// Below this |ν| a term is treated as non-oscillating.
const FREQ_EPS: f64 = 1e-12;
// e^{-46} < 1e-20: the rotated integrand is negligible past s = 46/|ν|.
const DECAY_LENGTHS: f64 = 46.0;

/// `∫_X^∞ e^{iνt} a(t) dt` for a single term.
fn half_line<F>(freq: f64, a: &F, x: f64, spec: &QuadratureSpec) -> Result<Quadrature>
where
    F: Fn(Complex64) -> Complex64,
{
    let inner = QuadratureSpec {
        max_panel_width: None,
        ..spec.clone()
    };
    if freq.abs() <= FREQ_EPS {
        // t = X / v on (0, 1].
        let g = |v: f64| {
            let t = x / v;
            a(Complex64::new(t, 0.0)) * (x / (v * v))
        };
        return integrate_with_breaks(g, Interval::new(0.0, 1.0)?, &[1e-3, 1e-2, 0.1], &inner);
    }
    let nu = freq.abs();
    let dir = freq.signum();
    // t = X + i·dir·s, dt = i·dir·ds, e^{iνt} = e^{iνX} e^{-|ν|s}.
    let s_max = DECAY_LENGTHS / nu;
    let g = |s: f64| (-nu * s).exp() * a(Complex64::new(x, dir * s));
    let breaks = [0.25 / nu, 1.0 / nu, 4.0 / nu, 16.0 / nu];
    let q = integrate_with_breaks(g, Interval::new(0.0, s_max)?, &breaks, &inner)?;
    let phase = Complex64::new(0.0, dir) * (Complex64::i() * freq * x).exp();
    Ok(q.scaled(phase))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn non_oscillating_inverse_square() {
        let s = ExpSum::single(0.0, |t| 1.0 / (t * t));
        let q = s.integrate_right(2.0, &QuadratureSpec::default()).unwrap();
        assert!((q.value.re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn oscillating_reciprocal_matches_sine_integral() {
        // ∫_X^∞ sin(t)/t dt = π/2 - Si(X); Si(π) = 1.851937051982466.
        let spec = QuadratureSpec::default();
        let mut s = ExpSum::single(1.0, |t| 1.0 / (Complex64::new(0.0, 2.0) * t));
        s.push(ExpTerm::new(-1.0, |t| -1.0 / (Complex64::new(0.0, 2.0) * t)));
        let q = s.integrate_right(PI, &spec).unwrap();
        let expected = PI / 2.0 - 1.851_937_051_982_466;
        assert!((q.value.re - expected).abs() < 1e-12, "{}", q.value);
        assert!(q.value.im.abs() < 1e-12);
    }

    #[test]
    fn left_tail_reflects() {
        let spec = QuadratureSpec::default();
        let s = ExpSum::single(2.0, |t| 1.0 / (1.0 + t * t));
        let left = s.integrate_left(3.0, &spec).unwrap().value;
        let right = s.integrate_right(3.0, &spec).unwrap().value;
        // the integrand is the conjugate of its reflection
        assert!((left - right.conj()).norm() < 1e-13);
    }

    #[test]
    fn folds_non_oscillating_pairs() {
        // 1/(z−t) alone diverges on each half-line; the symmetric sum is
        // ∫_X^∞ 2z/(z²−t²) dt = −ln((X+z)/(X−z)).
        let z = 0.4;
        let s = ExpSum::single(0.0, move |t| 1.0 / (z - t));
        let q = s.integrate_outside(2.0, &QuadratureSpec::default()).unwrap();
        assert!((q.value.re + (2.4f64 / 1.6).ln()).abs() < 1e-12, "{}", q.value);
    }

    #[test]
    fn product_adds_frequencies() {
        let a = ExpSum::single(1.0, |_| Complex64::new(2.0, 0.0));
        let b = ExpSum::single(-0.5, |t| t);
        let p = a.product(&b);
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.terms()[0].freq, 0.5);
        let t = Complex64::new(0.7, 0.0);
        assert!((p.eval(t) - a.eval(t) * b.eval(t)).norm() < 1e-15);
    }
}
