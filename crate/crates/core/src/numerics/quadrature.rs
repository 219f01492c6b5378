//! Composite Gauss-Legendre quadrature with adaptive bisection.
//!
//! Every routine returns a [`Quadrature`] carrying the value, the summed
//! panel error estimate and the number of panels used. Panels are summed in
//! order of their left endpoint, so results do not depend on the order in
//! which the adaptive loop refined them.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_ORDER: usize = 64;

static RULES: [OnceLock<Vec<(f64, f64)>>; MAX_ORDER + 1] = [const { OnceLock::new() }; MAX_ORDER + 1];

/// Gauss-Legendre nodes and weights on [-1, 1].
fn rule(order: usize) -> &'static [(f64, f64)] {
    let order = order.clamp(2, MAX_ORDER);
    RULES[order].get_or_init(|| {
        GaussLegendre::new(order)
            .expect("order >= 2")
            .into_node_weight_pairs()
    })
}

/// A finite interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::invalid(format!("bad interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Tolerances and limits shared by all quadrature routines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on the number of panels before giving up.
    pub max_panels: usize,
    /// Cutoff `T` for improper integrals over `|t| > T`.
    pub tail_cutoff: f64,
    /// Gauss-Legendre nodes per half panel.
    pub order: usize,
    /// Initial panels are no wider than this; set it to half the shortest
    /// period of an oscillatory integrand.
    pub max_panel_width: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_panels: 200_000,
            tail_cutoff: 10.0,
            order: 10,
            max_panel_width: None,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerance(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    /// Limits initial panels to half of `period`.
    pub fn with_period(mut self, period: f64) -> Self {
        if period.is_finite() && period > 0.0 {
            self.max_panel_width = Some(0.5 * period);
        }
        self
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn with_tail_cutoff(mut self, cutoff: f64) -> Self {
        self.tail_cutoff = cutoff;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.max_panels >= 1
            && self.tail_cutoff > 0.0
            && self.tail_cutoff.is_finite()
            && (2..=MAX_ORDER).contains(&self.order)
            && self.max_panel_width.is_none_or(|w| w > 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("bad quadrature spec {self:?}")))
        }
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

/// Value of a quadrature together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
}

impl Quadrature {
    pub fn zero() -> Self {
        Self {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            panels: 0,
        }
    }

    pub fn scaled(self, c: Complex64) -> Self {
        Self {
            value: self.value * c,
            error: self.error * c.norm(),
            panels: self.panels,
        }
    }
}

impl std::ops::Add for Quadrature {
    type Output = Quadrature;

    fn add(self, rhs: Quadrature) -> Quadrature {
        Quadrature {
            value: self.value + rhs.value,
            error: self.error + rhs.error,
            panels: self.panels + rhs.panels,
        }
    }
}

impl std::iter::Sum for Quadrature {
    fn sum<I: Iterator<Item = Quadrature>>(iter: I) -> Self {
        iter.fold(Quadrature::zero(), |a, b| a + b)
    }
}

fn gauss<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, nodes: &[(f64, f64)]) -> Complex64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = Complex64::new(0.0, 0.0);
    for &(x, w) in nodes {
        acc += f(c + h * x) * w;
    }
    acc * h
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, nodes: &[(f64, f64)]) -> Self {
        let m = 0.5 * (a + b);
        let whole = gauss(f, a, b, nodes);
        let halves = gauss(f, a, m, nodes) + gauss(f, m, b, nodes);
        let error = (whole - halves).norm();
        Panel {
            a,
            b,
            value: halves,
            error: if error.is_nan() { f64::INFINITY } else { error },
        }
    }
}

// Heap entry ordered by error, ties broken by position for determinism.
struct Ranked(Panel);

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Ranked {}
impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .error
            .total_cmp(&other.0.error)
            .then_with(|| other.0.a.total_cmp(&self.0.a))
    }
}

/// Splits `[lo, hi]` at the given interior points and then so that no piece
/// is wider than `max_width`.
fn initial_partition(lo: f64, hi: f64, breaks: &[f64], max_width: Option<f64>) -> Vec<(f64, f64)> {
    let mut pts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&x| x > lo && x < hi && x.is_finite())
        .collect();
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut out = Vec::with_capacity(pts.len());
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let pieces = match max_width {
            Some(mw) => ((b - a) / mw).ceil().max(1.0) as usize,
            None => 1,
        };
        let step = (b - a) / pieces as f64;
        for k in 0..pieces {
            let pa = a + step * k as f64;
            let pb = if k + 1 == pieces { b } else { a + step * (k + 1) as f64 };
            out.push((pa, pb));
        }
    }
    out
}

fn adaptive<F: Fn(f64) -> Complex64>(
    f: &F,
    partition: Vec<(f64, f64)>,
    spec: &QuadratureSpec,
    routine: &'static str,
) -> Result<Quadrature> {
    spec.validate()?;
    let nodes = rule(spec.order);
    if partition.len() > spec.max_panels {
        return Err(Error::no_conv(
            routine,
            format!("initial partition needs {} panels", partition.len()),
        ));
    }
    let scale = partition
        .iter()
        .map(|&(a, b)| a.abs().max(b.abs()))
        .fold(0.0_f64, f64::max)
        .max(1e-300);

    let mut heap: BinaryHeap<Ranked> = partition
        .iter()
        .map(|&(a, b)| Ranked(Panel::new(f, a, b, nodes)))
        .collect();
    let mut frozen: Vec<Panel> = Vec::new();

    let mut value: Complex64 = heap.iter().map(|p| p.0.value).sum();
    let mut error: f64 = heap.iter().map(|p| p.0.error).sum();

    loop {
        if error <= spec.target(value) {
            // Re-sum exactly; the running totals drift after many updates.
            let (v, e) = exact_totals(&heap, &frozen);
            value = v;
            error = e;
            if error <= spec.target(value) {
                break;
            }
        }
        let Some(Ranked(worst)) = heap.pop() else {
            break;
        };
        if !worst.error.is_finite() && worst.b - worst.a <= 1e-15 * scale {
            return Err(Error::no_conv(routine, "integrand is not finite"));
        }
        if worst.b - worst.a <= 1e-13 * scale {
            frozen.push(worst);
            continue;
        }
        if heap.len() + frozen.len() + 2 > spec.max_panels {
            let (v, e) = exact_totals(&heap, &frozen);
            let e = e + worst.error;
            return Err(Error::no_conv(
                routine,
                format!(
                    "panel limit {} reached; value {:.6e}{:+.6e}i, error estimate {:.3e}",
                    spec.max_panels,
                    (v + worst.value).re,
                    (v + worst.value).im,
                    e
                ),
            ));
        }
        let m = 0.5 * (worst.a + worst.b);
        let left = Panel::new(f, worst.a, m, nodes);
        let right = Panel::new(f, m, worst.b, nodes);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(Ranked(left));
        heap.push(Ranked(right));
    }

    let mut panels: Vec<Panel> = heap.into_iter().map(|r| r.0).chain(frozen).collect();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().map(|p| p.value).sum();
    let error: f64 = panels.iter().map(|p| p.error).sum();
    if !error.is_finite() {
        return Err(Error::no_conv(routine, "integrand is not finite"));
    }
    Ok(Quadrature {
        value,
        error,
        panels: panels.len(),
    })
}

fn exact_totals(heap: &BinaryHeap<Ranked>, frozen: &[Panel]) -> (Complex64, f64) {
    let mut panels: Vec<&Panel> = heap.iter().map(|r| &r.0).chain(frozen.iter()).collect();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    (
        panels.iter().map(|p| p.value).sum(),
        panels.iter().map(|p| p.error).sum(),
    )
}

/// Integral of `f` over `iv`.
pub fn integrate<F>(f: F, iv: Interval, spec: &QuadratureSpec) -> Result<Quadrature>
where
    F: Fn(f64) -> Complex64,
{
    integrate_with_breaks(f, iv, &[], spec)
}

/// Integral of `f` over `iv`, with panel boundaries forced at `breaks`
/// (kinks, grid nodes, integrable singularities).
pub fn integrate_with_breaks<F>(
    f: F,
    iv: Interval,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Quadrature>
where
    F: Fn(f64) -> Complex64,
{
    let partition = initial_partition(iv.lo, iv.hi, breaks, spec.max_panel_width);
    adaptive(&f, partition, spec, "integrate")
}

/// Integral of `f` over `|t| > spec.tail_cutoff`.
///
/// The two half-lines are folded together and mapped onto `(0, 1/T]` by
/// `t = 1/u`. The caller certifies `|f(t)| <= C t^-2` beyond the cutoff.
pub fn integrate_tail<F>(f: F, spec: &QuadratureSpec) -> Result<Quadrature>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    let t0 = spec.tail_cutoff;
    let g = |u: f64| {
        let t = 1.0 / u;
        (f(t) + f(-t)) / (u * u)
    };
    // Oscillation is not tracked in the u variable.
    let inner = QuadratureSpec {
        max_panel_width: None,
        ..spec.clone()
    };
    let partition = initial_partition(0.0, 1.0 / t0, &[], None);
    adaptive(&g, partition, &inner, "integrate_tail")
}

/// Cauchy principal value of `f` over `iv`, where `f` has a simple pole at
/// `x0` in the interior of `iv`.
///
/// The symmetric excision `|x - x0| < r` is folded onto `(0, r]`, where the
/// pole cancels; this is the limit of vanishing excision radius.
pub fn principal_value<F>(f: F, x0: f64, iv: Interval, spec: &QuadratureSpec) -> Result<Quadrature>
where
    F: Fn(f64) -> Complex64,
{
    principal_value_with_breaks(f, x0, iv, &[], spec)
}

/// As [`principal_value`], with extra panel boundaries.
pub fn principal_value_with_breaks<F>(
    f: F,
    x0: f64,
    iv: Interval,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Quadrature>
where
    F: Fn(f64) -> Complex64,
{
    if !(x0 > iv.lo && x0 < iv.hi) {
        return Err(Error::invalid(format!(
            "singularity {x0} is not interior to [{}, {}]",
            iv.lo, iv.hi
        )));
    }
    let r = (x0 - iv.lo).min(iv.hi - x0);
    let folded = |s: f64| f(x0 + s) + f(x0 - s);
    let fold_breaks: Vec<f64> = breaks
        .iter()
        .map(|&b| (b - x0).abs())
        .filter(|&s| s > 0.0 && s < r)
        .collect();
    let inner = adaptive(
        &folded,
        initial_partition(0.0, r, &fold_breaks, spec.max_panel_width),
        spec,
        "principal_value",
    )?;
    let outer = if iv.hi - x0 > r {
        let a = x0 + r;
        if iv.hi - a > 1e-15 * iv.hi.abs().max(1.0) {
            integrate_with_breaks(&f, Interval::new(a, iv.hi)?, breaks, spec)?
        } else {
            Quadrature::zero()
        }
    } else if x0 - iv.lo > r {
        let b = x0 - r;
        if b - iv.lo > 1e-15 * iv.lo.abs().max(1.0) {
            integrate_with_breaks(&f, Interval::new(iv.lo, b)?, breaks, spec)?
        } else {
            Quadrature::zero()
        }
    } else {
        Quadrature::zero()
    };
    Ok(inner + outer)
}
