//! Self-check suite: identity- and property-based criteria with fixed seeds.
//!
//! A few criteria cannot hold as literally phrased; they are run as stated,
//! flagged `known_defect`, and paired with a corrected companion (`AC3b`,
//! `AC11b`, `AC12b`) that must pass.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bandlimited::{pw_norm, sinc, Band, LatticeOffset, SampledBandlimited};
use crate::discrete_hardy::{atom_to_b1, bmo_z_norm, discrete_hilbert, make_atom, FiniteSequence};
use crate::dual_map::{bmo_clark_norm, pairing_discrete, t_alpha, x_alpha_norm, ClosedForm, XAlphaElement};
use crate::hankel::{assemble, band_reduce, op_norm, SymbolSpec};
use crate::numerics::{integrate, integrate_tail, singular_values, Interval, QuadratureSpec};
use crate::projection::{
    bmoe_norm_values, mod_out_span, project_l2, project_linf, GridFunction, TailModel, TrigPolynomial,
};
use crate::{Complex64, Error, Result};

/// Criteria whose literal statement is known not to hold.
pub const KNOWN_DEFECTS: &[&str] = &["AC3", "AC11", "AC12"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Every criterion at its stated size; Hankel truncations capped at 64.
    Fast,
    /// Adds one more window doubling to the convergence studies.
    Full,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: &'static str,
    pub name: &'static str,
    pub pass: bool,
    pub known_defect: bool,
    pub detail: String,
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub level: Level,
    pub results: Vec<CriterionResult>,
}

impl SuiteReport {
    /// Failures not covered by `KNOWN_DEFECTS`.
    pub fn unexpected_failures(&self) -> Vec<&'static str> {
        self.results.iter().filter(|r| !r.pass && !r.known_defect).map(|r| r.id).collect()
    }
}

type Check = Result<(bool, String)>;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_seq(r: &mut ChaCha8Rng, window: usize, support: i64) -> FiniteSequence {
    let vals: Vec<Complex64> = (0..=2 * support)
        .map(|_| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
        .collect();
    FiniteSequence::from_fn(window, |n| if n.abs() <= support { vals[(n + support) as usize] } else { c(0.0) })
}

fn half() -> Band {
    Band::new(PI / 2.0).expect("π/2 is a valid band")
}

fn run(id: &'static str, name: &'static str, limit: Option<f64>, f: impl FnOnce() -> Check) -> CriterionResult {
    let start = Instant::now();
    let (mut pass, mut detail) = match f() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    let seconds = start.elapsed().as_secs_f64();
    if let Some(limit) = limit {
        if seconds > limit {
            pass = false;
            detail.push_str(&format!("; runtime over {limit} s"));
        }
    }
    CriterionResult {
        id,
        name,
        pass,
        known_defect: KNOWN_DEFECTS.contains(&id),
        detail,
        seconds,
    }
}

// ---------------------------------------------------------------- lattice, cosine

fn lattice_identity() -> Check {
    let mut r = rng(1);
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let support = r.random_range(0..=32);
        let a = random_seq(&mut r, 32, support);
        for al in [0.0, 0.17, 0.5, 0.73, 0.99] {
            let off = LatticeOffset::new(al)?;
            for k in -32..=32_i64 {
                let x = k as f64 + al;
                let v = Complex64::from_polar(1.0, PI * x) * t_alpha(&a, off, c(x));
                worst = worst.max((v - a.get(k)).norm());
            }
        }
    }
    Ok((worst <= 1e-10, format!("max |e^(iπ(k+α)) T_α a(k+α) − a_k| = {worst:.2e} (tol 1e-10)")))
}

fn cosine_identity(level: Level) -> Check {
    let windows: &[usize] = match level {
        Level::Fast => &[2000, 4000],
        Level::Full => &[2000, 4000, 8000],
    };
    let points: Vec<Complex64> = (0..10)
        .map(|i| Complex64::new(-2.7 + 0.61 * i as f64, if i % 3 == 0 { 0.3 } else { 0.0 }))
        .collect();
    let mut worst = 0.0_f64;
    let mut worst_ratio = 0.0_f64;
    for al in [0.25, 0.5] {
        let off = LatticeOffset::new(al)?;
        let errs: Vec<Vec<f64>> = windows
            .iter()
            .map(|&n| {
                let ones = FiniteSequence::from_fn(n, |_| c(1.0));
                points
                    .iter()
                    .map(|&z| {
                        let exact = Complex64::from_polar(1.0, -PI * al) * (PI * (z - al)).cos();
                        (t_alpha(&ones, off, z) - exact).norm()
                    })
                    .collect()
            })
            .collect();
        worst = errs[0].iter().copied().fold(worst, f64::max);
        for pair in errs.windows(2) {
            for (a, b) in pair[0].iter().zip(&pair[1]) {
                worst_ratio = worst_ratio.max(b / a);
            }
        }
    }
    let pass = worst <= 5e-3 && (0.4..=0.6).contains(&worst_ratio);
    Ok((
        pass,
        format!("max err at N=2000 {worst:.2e} (tol 5e-3); worst error ratio per doubling = {worst_ratio:.3}"),
    ))
}

// ---------------------------------------------------------------- composition

fn composition_windows(level: Level) -> &'static [usize] {
    match level {
        Level::Fast => &[256, 512, 1024],
        Level::Full => &[256, 512, 1024, 2048],
    }
}

/// Central errors of `H_{1−α} H_α a` against `target·S a`, one per window.
fn composition_errors(level: Level, target: impl Fn(f64) -> f64) -> Result<(Vec<f64>, bool)> {
    let windows = composition_windows(level);
    let mut r = rng(3);
    let center = 32;
    let mut worst = vec![0.0_f64; windows.len()];
    let mut monotone = true;
    for al in [0.25, 0.5, 0.9] {
        let a = random_seq(&mut r, 16, 16);
        let s = FiniteSequence::from_fn(center, |n| a.get(n + 1));
        let k = target(al);
        let mut errs = Vec::new();
        for &w in windows {
            let h = discrete_hilbert(&a.rewindow(w), LatticeOffset::new(al)?, w);
            let hh = discrete_hilbert(&h, LatticeOffset::new(1.0 - al)?, center);
            errs.push(hh.indexed().map(|(n, v)| (v - s.get(n) * k).norm()).fold(0.0, f64::max));
        }
        monotone &= errs.windows(2).all(|p| p[1] < p[0]);
        for (w, e) in worst.iter_mut().zip(&errs) {
            *w = w.max(*e);
        }
    }
    Ok((worst, monotone))
}

fn composition_detail(label: &str, level: Level, errs: &[f64], monotone: bool) -> String {
    let ws: Vec<String> = composition_windows(level).iter().map(|w| w.to_string()).collect();
    let es: Vec<String> = errs.iter().map(|e| format!("{e:.3e}")).collect();
    format!(
        "sup error vs {label} at {}: {} (tol 0.05 at the last window), decreasing: {monotone}",
        ws.join("/"),
        es.join(" ")
    )
}

fn composition_literal(level: Level) -> Check {
    let (errs, monotone) = composition_errors(level, |_| -1.0)?;
    let pass = errs[errs.len() - 1] <= 0.05 && monotone;
    Ok((pass, composition_detail("−S", level, &errs, monotone)))
}

fn composition_scaled(level: Level) -> Check {
    let (errs, monotone) = composition_errors(level, |al| -(PI / (PI * al).sin()).powi(2))?;
    let pass = errs[errs.len() - 1] <= 0.05 && monotone;
    Ok((pass, composition_detail("−(π/sin πα)²S", level, &errs, monotone)))
}

// ---------------------------------------------------------------- Shannon

/// `∫|f|²` from quadrature on `[−X, X]` plus the averaged tail: beyond the
/// samples `f = sin(κt − πα) S(t)` with non-oscillating `S`.
fn energy_oracle(f: &SampledBandlimited) -> Result<f64> {
    let kappa = f.band().kappa();
    let al = f.offset().alpha();
    let x = 400.0;
    let spec = QuadratureSpec::with_tolerance(1e-12, 1e-14).with_period(PI / kappa);
    let inner = integrate(
        |t| {
            let v: Complex64 = f.indexed().map(|(n, cn)| cn * sinc(c(kappa * t / PI - n as f64 - al))).sum();
            c(v.norm_sqr())
        },
        Interval::new(-x, x)?,
        &spec,
    )?
    .value
    .re;
    let s_sq = |t: f64| {
        let s: Complex64 = f
            .indexed()
            .map(|(n, cn)| {
                let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                cn * sign / (kappa * t - PI * (n as f64 + al))
            })
            .sum();
        s.norm_sqr()
    };
    // sin² averages to 1/2 against the slowly varying S²
    let tail = integrate_tail(|t| c(0.5 * s_sq(t)), &QuadratureSpec::default().with_tail_cutoff(x))?.value.re;
    Ok(inner + tail)
}

fn shannon() -> Check {
    let mut r = rng(4);
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let kappa = r.random_range(1.0..4.0);
        let al = r.random_range(0.0..1.0);
        let n = r.random_range(2..=8);
        let vals = (0..2 * n + 1)
            .map(|_| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
            .collect();
        let f = SampledBandlimited::new(Band::new(kappa)?, LatticeOffset::new(al)?, vals)?;
        let lhs = pw_norm(&f).powi(2);
        let rhs = energy_oracle(&f)?;
        worst = worst.max((lhs - rhs).abs() / rhs);
    }
    Ok((worst <= 1e-5, format!("max relative gap pw_norm² vs ∫|f|² = {worst:.2e} (tol 1e-5)")))
}

// ---------------------------------------------------------------- Hankel

fn random_trig(r: &mut ChaCha8Rng, fmax: f64) -> Result<TrigPolynomial> {
    let k = r.random_range(1..=4);
    TrigPolynomial::new(
        (0..k)
            .map(|_| {
                (
                    r.random_range(-fmax..fmax),
                    Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)),
                )
            })
            .collect(),
    )
}

fn sampled_sup(p: &TrigPolynomial) -> f64 {
    (-60000..=60000).map(|i| p.eval_real(i as f64 * 0.005).norm()).fold(0.0, f64::max)
}

fn hankel_basics() -> Check {
    let spec = QuadratureSpec::default();
    let one = SymbolSpec::Trig(TrigPolynomial::constant(c(1.0)));
    let m = assemble(&one, half(), 8, &spec)?;
    let mut id_dev = 0.0_f64;
    for a in 0..m.dim() {
        for b in 0..m.dim() {
            id_dev = id_dev.max((m.entries[(a, b)] - if a == b { 1.0 } else { 0.0 }).norm());
        }
    }
    let mut r = rng(5);
    let mut slack = f64::INFINITY;
    for _ in 0..10 {
        let p = random_trig(&mut r, 4.0)?;
        let norm = op_norm(&assemble(&SymbolSpec::Trig(p.clone()), half(), 16, &spec)?)?;
        slack = slack.min(sampled_sup(&p) + 1e-6 - norm);
    }
    let out = assemble(&SymbolSpec::Trig(TrigPolynomial::exp(3.0 * PI)), half(), 16, &spec)?.frobenius();
    let pass = id_dev <= 1e-8 && slack >= 0.0 && out <= 1e-6;
    Ok((
        pass,
        format!("identity dev {id_dev:.2e} (tol 1e-8); min(sup|φ| + 1e-6 − ‖H‖) = {slack:.3e} (≥ 0); ‖H(e^(3πix))‖_F = {out:.2e} (tol 1e-6)"),
    ))
}

fn band_reduction() -> Check {
    let spec = QuadratureSpec::default();
    let mut r = rng(6);
    let mut worst = 0.0_f64;
    for _ in 0..5 {
        // one term in band, one out, plus random extras
        let p = random_trig(&mut r, 6.0)?
            .add(&TrigPolynomial::exp(r.random_range(-3.0..3.0)))
            .add(&TrigPolynomial::exp(r.random_range(3.5..6.0)).scale(c(0.8)));
        let sym = SymbolSpec::Trig(p);
        let before = op_norm(&assemble(&sym, half(), 12, &spec)?)?;
        let red = band_reduce(&sym, half(), &spec)?;
        let after = op_norm(&assemble(&red, half(), 12, &spec)?)?;
        worst = worst.max((before - after).abs());
    }
    Ok((worst <= 1e-6, format!("max |‖H_φ‖ − ‖H_(reduced φ)‖| = {worst:.2e} (tol 1e-6)")))
}

// ---------------------------------------------------------------- Clark, isomorphism

fn test_functions(r: &mut ChaCha8Rng, count: usize) -> Result<Vec<(XAlphaElement, LatticeOffset)>> {
    (0..count)
        .map(|i| {
            let al = LatticeOffset::new(r.random_range(0.0..1.0))?;
            let f = if i % 2 == 0 {
                let support = r.random_range(1..=12);
                let a = random_seq(r, 12, support);
                XAlphaElement::t_alpha(&a, al, 24)?
            } else {
                XAlphaElement::from_closed_form(ClosedForm::Trig(random_trig(r, 4.0)?), al, 24)?
            };
            Ok((f, al))
        })
        .collect()
}

fn clark_identity() -> Check {
    let mut r = rng(7);
    let mut worst = 0.0_f64;
    for (f, al) in test_functions(&mut r, 20)? {
        worst = worst.max((bmo_clark_norm(&f, al)? - x_alpha_norm(&f)).abs());
    }
    Ok((worst <= 1e-12, format!("max |Clark norm − X_α norm| = {worst:.2e} (tol 1e-12)")))
}

fn isomorphism() -> Check {
    let mut r = rng(8);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let al = LatticeOffset::new(r.random_range(0.0..1.0))?;
        let support = r.random_range(1..=20);
        let a = random_seq(&mut r, 20, support);
        let f = XAlphaElement::t_alpha(&a, al, 20)?;
        worst = worst.max((x_alpha_norm(&f) - bmo_z_norm(&a)).abs());
    }
    Ok((worst <= 1e-10, format!("max |‖T_α a‖_X − ‖a‖_BMO(ℤ)| = {worst:.2e} (tol 1e-10)")))
}

// ---------------------------------------------------------------- projection

fn bounded_symbols() -> Result<Vec<GridFunction>> {
    let h = 1.0 / 16.0;
    let t = 40.0;
    let trig0 = TrigPolynomial::default();
    let analytic = |l: TrigPolynomial, r: TrigPolynomial| TailModel::Analytic { left: l, right: r };
    let one = TrigPolynomial::constant(c(1.0));
    let minus = TrigPolynomial::constant(c(-1.0));
    let sgn = |x: f64| if x > 0.0 { 1.0 } else if x < 0.0 { -1.0 } else { 0.0 };
    let mk = |tail: TailModel, f: &dyn Fn(f64) -> Complex64| GridFunction::from_fn(h, t, tail, f);
    let sin3 = TrigPolynomial::new(vec![(3.0, Complex64::new(0.0, -0.5)), (-3.0, Complex64::new(0.0, 0.5))])?;
    Ok(vec![
        mk(analytic(minus.clone(), one.clone()), &|x| c(sgn(x)))?,
        mk(analytic(trig0.clone(), trig0.clone()), &|x| c(if x.abs() <= 1.0 { 1.0 } else { 0.0 }))?,
        mk(analytic(trig0.clone(), trig0.clone()), &|x| c((1.0 - x.abs() / 2.0).max(0.0)))?,
        mk(analytic(TrigPolynomial::cos(2.0).scale(c(-1.0)), TrigPolynomial::cos(2.0)), &|x| c(sgn(x) * (2.0 * x).cos()))?,
        mk(analytic(trig0.clone(), TrigPolynomial::exp(1.0)), &|x| {
            if x > 0.0 {
                Complex64::from_polar(1.0, x)
            } else {
                c(0.0)
            }
        })?,
        mk(analytic(minus, one), &|x| c(x.tanh()))?,
        GridFunction::from_trig(&sin3, h, t)?,
        mk(analytic(TrigPolynomial::constant(c(-0.5)), TrigPolynomial::constant(c(0.5))), &|x| {
            c(x.clamp(-3.0, 3.0).round() / 6.0)
        })?,
        mk(TailModel::DecayQuadratic { constant: 1.0 }, &|x| c(1.0 / (1.0 + x * x)))?,
        mk(analytic(trig0.clone(), trig0), &|x| c(if x.abs() <= 5.0 { (PI * x / 2.0).cos() } else { 0.0 }))?,
    ])
}

fn projection_sanity() -> Check {
    let spec = QuadratureSpec::with_tolerance(1e-9, 1e-11);
    let gh = 1.0 / 8.0;
    let xs: Vec<f64> = (-48..=48).map(|k| k as f64 * gh).collect();
    let zs: Vec<Complex64> = xs.iter().map(|&x| c(x)).collect();
    let mut worst_ratio = 0.0_f64;
    for g in bounded_symbols()? {
        let p = project_linf(&g, &zs, None, &spec)?;
        let e = bmoe_norm_values(&xs, &p.values, gh, 1e-6)?;
        worst_ratio = worst_ratio.max(e.value / (4.0 * g.sup_norm()));
    }
    // cos(0.4πx) is already in the band
    let cx: Vec<f64> = (-40..=40).map(|k| k as f64 * 0.1).collect();
    let cz: Vec<Complex64> = cx.iter().map(|&x| c(x)).collect();
    let p = project_linf(&TrigPolynomial::cos(0.4 * PI), &cz, None, &QuadratureSpec::default())?;
    let diff: Vec<Complex64> = p.values.iter().zip(&cx).map(|(v, &x)| v - (0.4 * PI * x).cos()).collect();
    let resid = mod_out_span(&cx, &diff)?.max_residual;
    let qs = QuadratureSpec::default();
    let g = GridFunction::from_fn(1.0 / 32.0, 12.0, TailModel::DecayQuadratic { constant: 1e-30 }, |x| {
        Complex64::new(1.0, x / 3.0) * (-x * x / 2.0).exp()
    })?;
    let s1 = project_l2(&g, Band::pi(), LatticeOffset::zero(), 16, &qs)?;
    let s2 = project_l2(&s1, Band::pi(), LatticeOffset::zero(), 16, &qs)?;
    let idem = s1.samples().iter().zip(s2.samples()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let scale = s1.samples().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let idem_tol = 2.0 * (qs.rel_tol * scale).max(qs.abs_tol);
    let pass = worst_ratio <= 1.05 && resid <= 1e-3 && idem <= idem_tol;
    Ok((
        pass,
        format!(
            "max bmoe/(4 sup) = {worst_ratio:.3} (≤ 1.05); cos(0.4πx) residual {resid:.2e} (tol 1e-3); P_π idempotence {idem:.2e} (tol {idem_tol:.1e})"
        ),
    ))
}

// ---------------------------------------------------------------- duality

type RealFn = Box<dyn Fn(f64) -> Complex64>;

fn duality_alpha_independence(level: Level) -> Check {
    let windows: &[usize] = match level {
        Level::Fast => &[64, 128],
        Level::Full => &[64, 128, 256],
    };
    let hs: Vec<RealFn> = vec![
        Box::new(|x| c(sinc(c(x / 3.0)).re.powi(3))),
        Box::new(|x| c(sinc(c(x / 4.0)).re.powi(4))),
        Box::new(|x| c(sinc(c((x - 0.7) / 3.0)).re.powi(3))),
        Box::new(|x| Complex64::new(sinc(c(x / 4.0)).re.powi(4), sinc(c((x + 2.0) / 3.0)).re.powi(3))),
        Box::new(|x| c(sinc(c(x / 6.0)).re.powi(6))),
    ];
    let mut r = rng(10);
    let fs: Vec<ClosedForm> = vec![
        ClosedForm::TAlpha { beta: 0.0, seq: random_seq(&mut r, 6, 6) },
        ClosedForm::TAlpha { beta: 0.0, seq: random_seq(&mut r, 6, 3) },
        ClosedForm::Trig(TrigPolynomial::cos(PI).add(&TrigPolynomial::constant(c(0.5)))),
        ClosedForm::Trig(TrigPolynomial::cos(0.4 * PI)),
        ClosedForm::TAlpha { beta: 0.0, seq: random_seq(&mut r, 6, 6) },
    ];
    let mut worst = 0.0_f64;
    let mut worst_inc = 0.0_f64;
    let mut worst_int = 0.0_f64;
    let spec = QuadratureSpec::with_tolerance(1e-11, 1e-13).with_period(2.0);
    for (h, fc) in hs.iter().zip(&fs) {
        let f = XAlphaElement::from_closed_form(fc.clone(), LatticeOffset::zero(), 2)?;
        let pair = |al: f64, n: usize| -> Result<Complex64> {
            let hs = SampledBandlimited::from_fn(Band::pi(), LatticeOffset::new(al)?, n, |x| h(x))?;
            Ok(pairing_discrete(&hs, &f)?.value)
        };
        let p0 = windows.iter().map(|&n| pair(0.0, n)).collect::<Result<Vec<_>>>()?;
        let p1 = windows.iter().map(|&n| pair(0.5, n)).collect::<Result<Vec<_>>>()?;
        let last = windows.len() - 1;
        worst = worst.max((p0[last] - p1[last]).norm());
        worst_inc = worst_inc.max((p0[last] - p0[last - 1]).norm()).max((p1[last] - p1[last - 1]).norm());
        let integral = integrate(|x| h(x) * fc.eval(c(x)), Interval::new(-400.0, 400.0)?, &spec)?.value;
        worst_int = worst_int.max((p0[last] - integral).norm());
    }
    let n = windows[windows.len() - 1];
    Ok((
        worst <= 1e-3,
        format!("max |pairing_0 − pairing_(1/2)| at N={n}: {worst:.2e} (tol 1e-3); last doubling change {worst_inc:.1e}; vs ∫hf {worst_int:.1e}"),
    ))
}

// ---------------------------------------------------------------- compactness

struct Profiles {
    ns: Vec<usize>,
    bump: Vec<Vec<f64>>,
    sign: Vec<Vec<f64>>,
}

/// The literal criterion is stated on these truncations.
const PROFILE_N: [usize; 4] = [8, 16, 32, 64];

fn profiles(level: Level) -> Result<Profiles> {
    let mut ns = PROFILE_N.to_vec();
    if level == Level::Full {
        ns.push(128);
    }
    let spec = QuadratureSpec::with_tolerance(1e-8, 1e-10);
    let t = 160.0;
    // P_π of the triangle max(0, 1 − |x|/2)
    let tri_spec = QuadratureSpec::with_tolerance(1e-11, 1e-13);
    let tri = |x: f64| -> Complex64 {
        let piece = |lo: f64, hi: f64| {
            integrate(|s| c((1.0 - s.abs() / 2.0) * sinc(c(x - s)).re), Interval::new(lo, hi).expect("fixed interval"), &tri_spec)
                .map(|q| q.value)
                .unwrap_or(Complex64::new(f64::NAN, 0.0))
        };
        piece(-2.0, 0.0) + piece(0.0, 2.0)
    };
    let bump = GridFunction::from_fn(0.125, t, TailModel::DecayQuadratic { constant: 1.0 }, tri)?;
    if bump.values().iter().any(|v| !v.re.is_finite()) {
        return Err(Error::NonConvergence {
            routine: "suite",
            detail: "band-limited triangle did not converge".into(),
        });
    }
    let sign = GridFunction::from_fn(
        0.25,
        t,
        TailModel::Analytic {
            left: TrigPolynomial::constant(c(-1.0)),
            right: TrigPolynomial::constant(c(1.0)),
        },
        |x| c(if x > 0.0 { 1.0 } else if x < 0.0 { -1.0 } else { 0.0 }),
    )?;
    let sign = band_reduce(&SymbolSpec::Grid(sign), half(), &spec)?;
    let bump = SymbolSpec::Grid(bump);
    let sv = |s: &SymbolSpec| -> Result<Vec<Vec<f64>>> {
        ns.iter().map(|&n| singular_values(&assemble(s, half(), n, &spec)?.entries)).collect()
    };
    let (bump, sign) = (sv(&bump)?, sv(&sign)?);
    Ok(Profiles { ns, bump, sign })
}

fn fmt_row(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(" ")
}

fn compactness_literal(p: &Profiles) -> Check {
    let k = PROFILE_N.len();
    let b5: Vec<f64> = p.bump[..k].iter().map(|s| s[4]).collect();
    let s5: Vec<f64> = p.sign[..k].iter().map(|s| s[4]).collect();
    let decreasing = b5.windows(2).all(|w| w[1] < w[0]);
    let pass = decreasing && b5[k - 1] < 0.2 * b5[0] && s5.iter().all(|&v| v > 0.5 * s5[0]);
    Ok((pass, format!("σ_5(N), N=8..64: bump [{}], sign [{}]", fmt_row(&b5), fmt_row(&s5))))
}

/// Truncations interlace, so `σ_k(N)` can only grow with `N`; the dichotomy
/// shows up in `k` instead: for the compact symbol `σ_5` settles far below
/// `σ_1`, for the sign-type symbol it stays comparable to `σ_1`.
fn compactness_in_k(p: &Profiles) -> Check {
    let last = p.ns.len() - 1;
    let b = &p.bump[last];
    let s = &p.sign[last];
    let b5: Vec<f64> = p.bump.iter().map(|s| s[4]).collect();
    let change = (b5[last] - b5[last - 1]).abs() / b5[last];
    let pass = b[4] <= 0.2 * b[0] && change <= 0.05 && s[4] >= 0.5 * s[0];
    Ok((
        pass,
        format!(
            "N={}: bump σ_5/σ_1 = {:.3e} (≤ 0.2), σ_5 change over last doubling {change:.1e} rel (≤ 0.05); sign σ_5/σ_1 = {:.3} (≥ 0.5)",
            p.ns[last],
            b[4] / b[0],
            s[4] / s[0]
        ),
    ))
}

// ---------------------------------------------------------------- atoms

fn random_atoms(r: &mut ChaCha8Rng) -> Vec<(Vec<i64>, Vec<Complex64>)> {
    let mut out = vec![(vec![0, 1], vec![c(0.5), c(-0.5)])];
    while out.len() < 10 {
        let len = r.random_range(2..=7);
        let start = r.random_range(-10..10);
        let mut v: Vec<Complex64> =
            (0..len).map(|_| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).collect();
        let mean: Complex64 = v.iter().sum::<Complex64>() / len as f64;
        v.iter_mut().for_each(|x| *x -= mean);
        let m = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
        v.iter_mut().for_each(|x| *x *= 1.0 / (len as f64 * m));
        let mean: Complex64 = v.iter().sum::<Complex64>() / len as f64;
        v.iter_mut().for_each(|x| *x -= mean);
        if v.iter().all(|x| x.norm() <= 1.0 / len as f64) {
            out.push(((start..start + len as i64).collect(), v));
        }
    }
    out
}

fn rejections_ok() -> bool {
    let too_big = make_atom(&[0, 1], &[c(0.9), c(-0.9)]);
    let not_zero = make_atom(&[0, 1], &[c(0.5), c(-0.25)]);
    let gap = make_atom(&[0, 2], &[c(0.5), c(-0.5)]);
    matches!(too_big, Err(Error::SupTooLarge { .. }))
        && matches!(not_zero, Err(Error::NotMeanZero { .. }))
        && matches!(gap, Err(Error::NonContiguousSupport))
}

/// `(|∫ a|, |Σ (−1)^n a(n)|)` per atom; `∫ Σ c_n sinc(x − n) dx = Σ c_n`.
fn atom_integrals() -> Result<Vec<(f64, f64)>> {
    let mut r = rng(12);
    random_atoms(&mut r)
        .into_iter()
        .map(|(s, v)| {
            let b1 = atom_to_b1(&make_atom(&s, &v)?);
            let integral: Complex64 = b1.samples().iter().sum();
            let alternating: Complex64 = b1.indexed().map(|(n, c)| if n.rem_euclid(2) == 0 { c } else { -c }).sum();
            Ok((integral.norm(), alternating.norm()))
        })
        .collect()
}

fn atoms_literal() -> Check {
    let worst = atom_integrals()?.iter().map(|p| p.0).fold(0.0, f64::max);
    let rej = rejections_ok();
    Ok((worst <= 1e-6 && rej, format!("max |∫ a| = {worst:.3e} (tol 1e-6); invalid atoms rejected: {rej}")))
}

fn atoms_alternating() -> Check {
    let worst = atom_integrals()?.iter().map(|p| p.1).fold(0.0, f64::max);
    let rej = rejections_ok();
    Ok((
        worst <= 1e-12 && rej,
        format!("max |Σ (−1)^n a(n)| = {worst:.2e} (tol 1e-12); invalid atoms rejected: {rej}"),
    ))
}

// ----------------------------------------------------------------

/// The lattice identity alone: the quickest check that the sinc kernel is sound.
pub fn lattice_check() -> CriterionResult {
    run("AC1", "lattice identity", Some(5.0), lattice_identity)
}

/// Run every criterion. Runtime limits apply at the fast level only, where
/// the sizes match the stated ones.
pub fn run_suite(level: Level) -> SuiteReport {
    let lim = |s: f64| if level == Level::Fast { Some(s) } else { None };
    let mut results = vec![lattice_check()];
    results.push(run("AC2", "cosine identity", lim(10.0), || cosine_identity(level)));
    results.push(run("AC3", "composition identity (as stated, −S)", lim(20.0), || composition_literal(level)));
    results.push(run("AC3b", "composition identity with (π/sin πα)²", lim(20.0), || composition_scaled(level)));
    results.push(run("AC4", "Shannon consistency", None, shannon));
    results.push(run("AC5", "Hankel basics", None, hankel_basics));
    results.push(run("AC6", "band-reduction invariance", None, band_reduction));
    results.push(run("AC7", "Clark / X_α identity", None, clark_identity));
    results.push(run("AC8", "isomorphism witness", None, isomorphism));
    results.push(run("AC9", "projection sanity", None, projection_sanity));
    results.push(run("AC10", "α-independence of pairing", None, || duality_alpha_independence(level)));

    let start = Instant::now();
    let prof = profiles(level);
    let shared = start.elapsed().as_secs_f64();
    let with_prof = |f: fn(&Profiles) -> Check| prof.as_ref().map_err(clone_err).and_then(f);
    let mut r11 = run("AC11", "compactness dichotomy (as stated, in N)", None, || with_prof(compactness_literal));
    let mut r11b = run("AC11b", "compactness dichotomy in k", None, || with_prof(compactness_in_k));
    for r in [&mut r11, &mut r11b] {
        r.seconds += shared;
        if level == Level::Fast && r.seconds > 120.0 {
            r.pass = false;
            r.detail.push_str("; runtime over 120 s");
        }
    }
    results.push(r11);
    results.push(r11b);
    results.push(run("AC12", "atoms integrate to zero (as stated)", None, atoms_literal));
    results.push(run("AC12b", "atoms: alternating samples sum to zero", None, atoms_alternating));
    SuiteReport { level, results }
}

fn clone_err(e: &Error) -> Error {
    if e.is_numerical() {
        Error::no_conv("suite", e.to_string())
    } else {
        Error::invalid(e.to_string())
    }
}
