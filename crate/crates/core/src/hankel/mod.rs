//! Truncated Hankel operators `H_φ f = P_κ(φ·f̄)` on `B²_κ`.
//!
//! The operator is represented in the real orthonormal basis
//! `e_n(x) = √(κ/π) sinc((κ/π)x − n)` by the complex-symmetric matrix
//! `M_{jk} = ∫ φ e_j e_k`, acting as `c ↦ M·c̄`. The operator norm of that
//! antilinear map is the largest singular value of `M`.
//!
//! With `u = κx/π`, the partial fraction
//! `e_j e_k = (κ/π³)(−1)^{j+k} sin²(κx) (1/(u−j) − 1/(u−k)) / (j−k)` gives
//!
//! ```text
//! M_{jk} = (−1)^{j+k} (F_j − F_k)/(j − k),   F_n = (κ/π³) ∫ φ sin²(κx) (1/(u−n) − u/(1+u²)) dx
//! ```
//!
//! so only `2N+1` line integrals `F_n` and `2N+1` diagonal ones are needed.
//! The `u/(1+u²)` term makes each `F_n` absolutely convergent and drops out of
//! the differences.

mod rochberg;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bandlimited::{Band, LatticeOffset, SampledBandlimited};
use crate::error::{Error, Result};
use crate::numerics::{singular_values, top_singular_value, ExpSum, ExpTerm, QuadratureSpec};
use crate::projection::{band_limit_at, integrate_against, GridFunction, Symbol, TailModel, TrigPolynomial};

pub use rochberg::{cutoff_center, cutoff_left, cutoff_right, rochberg_quantities, rochberg_split, RochbergQuantities, RochbergSplit};

/// A Hankel symbol: a trigonometric polynomial or a tabulated function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolSpec {
    Trig(TrigPolynomial),
    Grid(GridFunction),
}

impl SymbolSpec {
    pub fn symbol(&self) -> &dyn Symbol {
        match self {
            SymbolSpec::Trig(p) => p,
            SymbolSpec::Grid(g) => g,
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.symbol().eval(x)
    }

    /// Smallest interval known to contain the spectrum, when it is known.
    pub fn spectral_support(&self) -> Option<(f64, f64)> {
        match self {
            SymbolSpec::Trig(p) if p.is_zero() => Some((0.0, 0.0)),
            SymbolSpec::Trig(p) => {
                let lo = p.terms().iter().map(|t| t.0).fold(f64::INFINITY, f64::min);
                let hi = p.terms().iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
                Some((lo, hi))
            }
            SymbolSpec::Grid(_) => None,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        match self {
            SymbolSpec::Trig(p) => SymbolSpec::Trig(p.scale(c)),
            SymbolSpec::Grid(g) => {
                let tail = match g.tail() {
                    TailModel::Analytic { left, right } => TailModel::Analytic {
                        left: left.scale(c),
                        right: right.scale(c),
                    },
                    TailModel::BoundedBy { constant } => TailModel::BoundedBy { constant: constant * c.norm() },
                    TailModel::DecayQuadratic { constant } => TailModel::DecayQuadratic {
                        constant: constant * c.norm(),
                    },
                    TailModel::None => TailModel::None,
                };
                SymbolSpec::Grid(g.map(|_, v| v * c).with_tail(tail))
            }
        }
    }
}

/// Keeps the part of the spectrum in `[−2κ, 2κ]`, the only part `H_φ` sees.
///
/// Trigonometric symbols are filtered exactly. Grid symbols are replaced by
/// `P_{2κ}φ` on the same nodes, with analytic tails filtered termwise.
pub fn band_reduce(phi: &SymbolSpec, band: Band, spec: &QuadratureSpec) -> Result<SymbolSpec> {
    let limit = 2.0 * band.kappa();
    match phi {
        SymbolSpec::Trig(p) => Ok(SymbolSpec::Trig(p.filter(|f| f.abs() <= limit * (1.0 + 1e-14)))),
        SymbolSpec::Grid(g) => {
            let wide = Band::new(limit)?;
            let needed = 8.0 * wide.spacing();
            if g.extent() < needed {
                return Err(Error::UnknownSpectrum(format!(
                    "grid extent {} is below {needed}, too short to band-limit",
                    g.extent()
                )));
            }
            let tail = match g.tail() {
                TailModel::Analytic { left, right } => TailModel::Analytic {
                    left: left.filter(|f| f.abs() <= limit),
                    right: right.filter(|f| f.abs() <= limit),
                },
                TailModel::None => {
                    return Err(Error::UnknownSpectrum("grid symbol without a tail model".into()));
                }
                other => other.clone(),
            };
            let nodes: Vec<f64> = g.nodes().collect();
            let values = nodes
                .par_iter()
                .map(|&x| band_limit_at(g, wide, Complex64::new(x, 0.0), spec).map(|r| r.quad.value))
                .collect::<Result<Vec<_>>>()?;
            Ok(SymbolSpec::Grid(GridFunction::new(g.step(), values, tail)?))
        }
    }
}

/// `M_{jk} = ∫ φ e_j e_k`, `|j|, |k| <= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelMatrix {
    pub band: Band,
    pub n: usize,
    pub entries: DMatrix<Complex64>,
    /// `max |M − Mᵀ|` before symmetrization.
    pub asymmetry: f64,
    /// Largest quadrature error estimate over the line integrals.
    pub quad_error: f64,
    /// Bound on the symbol tail that was dropped outside the grid.
    pub ignored_tail_bound: f64,
}

impl HankelMatrix {
    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    /// Entry for basis indices `j, k` in `[−N, N]`.
    pub fn get(&self, j: i64, k: i64) -> Complex64 {
        let n = self.n as i64;
        self.entries[((j + n) as usize, (k + n) as usize)]
    }

    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// `sin²(κt)·a(t)` as an exponential sum.
fn sin_sq_tail<F>(kappa: f64, a: F) -> ExpSum
where
    F: Fn(Complex64) -> Complex64 + Send + Sync + Clone + 'static,
{
    let mut s = ExpSum::new();
    let a0 = a.clone();
    s.push(ExpTerm::new(0.0, move |t| 0.5 * a0(t)));
    let a1 = a.clone();
    s.push(ExpTerm::new(2.0 * kappa, move |t| -0.25 * a1(t)));
    s.push(ExpTerm::new(-2.0 * kappa, move |t| -0.25 * a(t)));
    s
}

struct LineIntegral {
    value: Complex64,
    error: f64,
    ignored: f64,
}

fn line_integral<S, K>(phi: &S, kernel: K, tail: ExpSum, cut: f64, kappa: f64, spec: &QuadratureSpec) -> Result<LineIntegral>
where
    S: Symbol + ?Sized,
    K: Fn(f64) -> Complex64,
{
    let r = integrate_against(phi, kernel, &tail, cut, &[], 2.0 * kappa, spec)?;
    Ok(LineIntegral {
        value: r.quad.value,
        error: r.quad.error,
        ignored: r.ignored_tail_bound,
    })
}

/// Assembles the `(2N+1)×(2N+1)` Hankel matrix of `φ` on `B²_κ`.
pub fn assemble(phi: &SymbolSpec, band: Band, n: usize, spec: &QuadratureSpec) -> Result<HankelMatrix> {
    let sym = phi.symbol();
    if !sym.tail().is_declared() {
        return Err(Error::MissingTailModel);
    }
    let kappa = band.kappa();
    let scale = band.spacing();
    let c = kappa / (PI * PI * PI);
    let ni = n as i64;
    let cut = sym.core_extent().unwrap_or(0.0).max((n as f64 + 8.0) * scale);

    let mut jobs: Vec<(bool, i64)> = (-ni..=ni).map(|m| (false, m)).collect();
    jobs.extend((-ni..=ni).map(|m| (true, m)));
    let results = jobs
        .par_iter()
        .map(|&(diag, m)| {
            let mf = m as f64;
            if diag {
                // e_m² = (κ/π³) sin²(κx)/(u−m)²
                let kernel = move |t: f64| {
                    let u = t / scale;
                    let s = crate::bandlimited::sinc_real(u - mf);
                    Complex64::new(kappa / PI * s * s, 0.0)
                };
                let tail = sin_sq_tail(kappa, move |t: Complex64| {
                    let d = t / scale - mf;
                    c / (d * d)
                });
                line_integral(sym, kernel, tail, cut, kappa, spec)
            } else {
                let kernel = move |t: f64| {
                    let u = t / scale;
                    let s = crate::bandlimited::sin_pi(u);
                    let w = if u == mf { 0.0 } else { s * s / (u - mf) };
                    Complex64::new(c * (w - s * s * u / (1.0 + u * u)), 0.0)
                };
                let tail = sin_sq_tail(kappa, move |t: Complex64| {
                    let u = t / scale;
                    c * (1.0 + mf * u) / ((u - mf) * (u * u + 1.0))
                });
                line_integral(sym, kernel, tail, cut, kappa, spec)
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let dim = 2 * n + 1;
    let (f, d) = results.split_at(dim);
    let mut entries = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for a in 0..dim {
        entries[(a, a)] = d[a].value;
        for b in 0..a {
            let (j, k) = (a as i64 - ni, b as i64 - ni);
            let sign = if (j + k).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let v = (f[a].value - f[b].value) * (sign / (j - k) as f64);
            entries[(a, b)] = v;
            entries[(b, a)] = v;
        }
    }
    let asymmetry = symmetrize(&mut entries);
    Ok(HankelMatrix {
        band,
        n,
        entries,
        asymmetry,
        quad_error: results.iter().map(|r| r.error).fold(0.0, f64::max),
        ignored_tail_bound: results.iter().map(|r| r.ignored).fold(0.0, f64::max),
    })
}

/// Replaces `M` by `(M + Mᵀ)/2` in a fixed order and returns `max |M − Mᵀ|`.
fn symmetrize(m: &mut DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0_f64;
    for a in 0..m.nrows() {
        for b in 0..a {
            let (x, y) = (m[(a, b)], m[(b, a)]);
            worst = worst.max((x - y).norm());
            let avg = (x + y) * 0.5;
            m[(a, b)] = avg;
            m[(b, a)] = avg;
        }
    }
    worst
}

/// `H_φ f` in the same basis: output coefficients `M · conj(input)`.
///
/// `f` must sit on the unshifted lattice of the matrix band with the same window.
pub fn apply(m: &HankelMatrix, f: &SampledBandlimited) -> Result<SampledBandlimited> {
    if f.window() != m.n {
        return Err(Error::WindowMismatch {
            expected: m.n,
            got: f.window(),
        });
    }
    if (f.band().kappa() - m.band.kappa()).abs() > 1e-12 * m.band.kappa() || f.offset().alpha() != 0.0 {
        return Err(Error::PrecondViolated("f must live on the matrix band and the unshifted lattice".into()));
    }
    // samples c_n relate to orthonormal coefficients by a_n = √(π/κ) c_n
    let root = m.band.spacing().sqrt();
    let a: Vec<Complex64> = f.samples().iter().map(|c| c.conj() * root).collect();
    let b = &m.entries * nalgebra::DVector::from_vec(a);
    SampledBandlimited::new(m.band, LatticeOffset::zero(), b.iter().map(|x| x / root).collect())
}

/// Relative gap tolerated between the dense SVD and the power iteration.
const NORM_CROSS_CHECK: f64 = 1e-6;

/// Operator norm `σ_max(M)`, from the dense SVD and checked against power iteration.
pub fn op_norm(m: &HankelMatrix) -> Result<f64> {
    let sv = singular_values(&m.entries)?;
    let top = sv.first().copied().unwrap_or(0.0);
    let power = top_singular_value(&m.entries)?;
    if (top - power).abs() > NORM_CROSS_CHECK * top.max(1e-300) {
        log::warn!("power iteration gives {power}, dense SVD {top}");
    }
    Ok(top)
}

/// One row of a compactness profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub n: usize,
    /// Leading singular values, nonincreasing.
    pub sigma: Vec<f64>,
    /// `σ_k` for the tracked index `k` (1-based).
    pub sigma_k: f64,
}

/// Leading `k` singular values of the truncations at each `N`.
pub fn compactness_profile(
    phi: &SymbolSpec,
    band: Band,
    n_list: &[usize],
    k: usize,
    spec: &QuadratureSpec,
) -> Result<Vec<ProfileRow>> {
    if k == 0 {
        return Err(Error::invalid("tracked singular value index is 1-based"));
    }
    n_list
        .iter()
        .map(|&n| {
            let m = assemble(phi, band, n, spec)?;
            let sv = singular_values(&m.entries)?;
            Ok(ProfileRow {
                n,
                sigma_k: sv.get(k - 1).copied().unwrap_or(0.0),
                sigma: sv.into_iter().take(k.max(1)).collect(),
            })
        })
        .collect()
}
