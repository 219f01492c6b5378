//! Sequences on ℤ: discrete Hilbert transforms, `H¹(ℤ)` and `BMO(ℤ)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bandlimited::{Band, LatticeOffset, SampledBandlimited};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Complex sequence supported on `|n| <= N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteSequence {
    values: Vec<Complex64>,
}

impl FiniteSequence {
    /// `values[i]` is `a_{i−N}`; the length must be `2N+1`.
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.len() % 2 == 0 {
            return Err(Error::invalid(format!(
                "sequence length must be odd (2N+1), got {}",
                values.len()
            )));
        }
        if values.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::invalid("sequence values must be finite"));
        }
        Ok(Self { values })
    }

    pub fn from_fn<F: Fn(i64) -> Complex64>(n: usize, f: F) -> Self {
        let n = n as i64;
        Self {
            values: (-n..=n).map(f).collect(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![ZERO; 2 * n + 1],
        }
    }

    pub fn window(&self) -> usize {
        self.values.len() / 2
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `a_n`, zero outside the window.
    pub fn get(&self, n: i64) -> Complex64 {
        let i = n + self.window() as i64;
        if i < 0 || i as usize >= self.values.len() {
            ZERO
        } else {
            self.values[i as usize]
        }
    }

    pub fn indexed(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.window() as i64;
        self.values.iter().enumerate().map(move |(i, &c)| (i as i64 - n, c))
    }

    /// Largest `|n|` with `a_n != 0`, or `None` for the zero sequence.
    pub fn support_radius(&self) -> Option<usize> {
        self.indexed()
            .filter(|(_, c)| *c != ZERO)
            .map(|(n, _)| n.unsigned_abs() as usize)
            .max()
    }

    /// Same values, restricted or zero-padded to window `m`.
    pub fn rewindow(&self, m: usize) -> Self {
        Self::from_fn(m, |n| self.get(n))
    }

    /// Left shift `(Sa)(n) = a(n+1)`, on the same window.
    pub fn shift(&self) -> Self {
        Self::from_fn(self.window(), |n| self.get(n + 1))
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|c| c.norm()).sum()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn map<F: Fn(i64, Complex64) -> Complex64>(&self, f: F) -> Self {
        Self::from_fn(self.window(), |n| f(n, self.get(n)))
    }
}

/// `(H_{d,α} a)(n) = Σ_k a_k/(n−k+α)` for `|n| <= m`.
///
/// For `α = 0` the term `k = n` is omitted; otherwise it contributes `a_n/α`.
pub fn discrete_hilbert(a: &FiniteSequence, alpha: LatticeOffset, m: usize) -> FiniteSequence {
    let alpha = alpha.alpha();
    let support: Vec<(i64, Complex64)> = a.indexed().filter(|(_, c)| *c != ZERO).collect();
    let m = m as i64;
    let values = (-m..=m)
        .into_par_iter()
        .map(|n| {
            let mut acc = ZERO;
            for &(k, c) in &support {
                let d = (n - k) as f64 + alpha;
                if d != 0.0 {
                    acc += c / d;
                }
            }
            acc
        })
        .collect();
    FiniteSequence { values }
}

/// A windowed quantity together with its growth under window doubling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowedValue {
    /// Value on the largest window.
    pub value: f64,
    /// Windows used, increasing.
    pub windows: Vec<usize>,
    /// `value(W_{i+1}) − value(W_i)`.
    pub increments: Vec<f64>,
    /// Set when the last increment did not shrink below 3/4 of the previous.
    pub divergent: bool,
}

impl WindowedValue {
    fn from_values(windows: Vec<usize>, values: Vec<f64>) -> Self {
        let increments: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
        let divergent = match increments.as_slice() {
            [.., p, l] => {
                let scale = values.last().unwrap().abs().max(1.0);
                l.abs() > 1e-13 * scale && l.abs() >= 0.75 * p.abs()
            }
            _ => false,
        };
        Self {
            value: *values.last().unwrap_or(&0.0),
            windows,
            increments,
            divergent,
        }
    }

    pub fn last_increment(&self) -> f64 {
        self.increments.last().copied().unwrap_or(0.0)
    }
}

/// `‖a‖₁ + ‖H_{d,α}a‖₁` with the transform summed over windows 4, 8 and 16
/// times the support radius.
///
/// For `a` in `H¹(ℤ)` the transform decays like `n⁻²` and the increments
/// shrink; a sequence with nonzero sum gives a transform decaying like `1/n`,
/// whose windowed norm grows like `2|Σa| log W` and is flagged divergent.
pub fn h1_norm(a: &FiniteSequence, alpha: LatticeOffset) -> WindowedValue {
    let Some(r) = a.support_radius() else {
        return WindowedValue::from_values(vec![4, 8, 16], vec![0.0; 3]);
    };
    let base = 4 * r.max(1);
    let windows = vec![base, 2 * base, 4 * base];
    let h = discrete_hilbert(a, alpha, 4 * base);
    let l1 = a.l1_norm();
    let values = windows
        .iter()
        .map(|&w| {
            let w = w as i64;
            l1 + (-w..=w).map(|n| h.get(n).norm()).sum::<f64>()
        })
        .collect();
    WindowedValue::from_values(windows, values)
}

/// `sup_A (1/#A) Σ_{n∈A} |b_n − b_A|` over every integer interval `A` inside
/// the window. Exhaustive, `O(N³)`.
pub fn bmo_z_norm(b: &FiniteSequence) -> f64 {
    bmo_of_values(b.values())
}

/// [`bmo_z_norm`] of an arbitrary slice.
pub fn bmo_of_values(v: &[Complex64]) -> f64 {
    let len = v.len();
    if len < 2 {
        return 0.0;
    }
    let mut prefix = vec![ZERO; len + 1];
    for (i, &x) in v.iter().enumerate() {
        prefix[i + 1] = prefix[i] + x;
    }
    (0..len - 1)
        .into_par_iter()
        .map(|i| {
            let mut best = 0.0_f64;
            for j in i + 1..len {
                let count = (j - i + 1) as f64;
                let mean = (prefix[j + 1] - prefix[i]) / count;
                let osc: f64 = v[i..=j].iter().map(|x| (x - mean).norm()).sum::<f64>() / count;
                best = best.max(osc);
            }
            best
        })
        .reduce(|| 0.0, f64::max)
}

/// [`bmo_z_norm`] on the quarter, half and full window; a bounded-oscillation
/// sequence has vanishing increments.
pub fn bmo_z_window_study(b: &FiniteSequence) -> WindowedValue {
    let n = b.window();
    let windows = vec![n / 4, n / 2, n];
    let values = windows.iter().map(|&w| bmo_z_norm(&b.rewindow(w))).collect();
    WindowedValue::from_values(windows, values)
}

/// `Σ |b_n|/(1+n²)` on the quarter, half and full window.
pub fn summability_check(b: &FiniteSequence) -> WindowedValue {
    let n = b.window();
    let windows = vec![n / 4, n / 2, n];
    let values = windows
        .iter()
        .map(|&w| {
            let w = w as i64;
            (-w..=w)
                .map(|k| b.get(k).norm() / (1.0 + (k * k) as f64))
                .sum()
        })
        .collect();
    WindowedValue::from_values(windows, values)
}

/// Tolerance on the mean of an atom.
pub const ATOM_MEAN_TOL: f64 = 1e-12;

/// An atom of `H¹(ℤ)`: contiguous finite support `A`, `|α_n| <= 1/#A`, mean zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteAtom {
    start: i64,
    values: Vec<Complex64>,
}

impl DiscreteAtom {
    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn indexed(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.values.iter().enumerate().map(|(i, &c)| (self.start + i as i64, c))
    }

    /// `Σ α_n b_n`.
    pub fn pair(&self, b: &FiniteSequence) -> Complex64 {
        self.indexed().map(|(n, c)| c * b.get(n)).sum()
    }

    pub fn to_sequence(&self, window: usize) -> FiniteSequence {
        FiniteSequence::from_fn(window, |n| {
            let i = n - self.start;
            if i >= 0 && (i as usize) < self.values.len() {
                self.values[i as usize]
            } else {
                ZERO
            }
        })
    }
}

/// Validates an atom; `support[i]` carries `values[i]`.
pub fn make_atom(support: &[i64], values: &[Complex64]) -> Result<DiscreteAtom> {
    if support.is_empty() || support.len() != values.len() {
        return Err(Error::invalid(format!(
            "atom needs matching nonempty support and values ({} vs {})",
            support.len(),
            values.len()
        )));
    }
    if support.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(Error::NonContiguousSupport);
    }
    let bound = 1.0 / support.len() as f64;
    for v in values {
        if v.norm() > bound * (1.0 + 4.0 * f64::EPSILON) {
            return Err(Error::SupTooLarge {
                value: v.norm(),
                bound,
            });
        }
    }
    let sum: Complex64 = values.iter().sum();
    if sum.norm() > ATOM_MEAN_TOL {
        return Err(Error::NotMeanZero { sum: sum.norm() });
    }
    Ok(DiscreteAtom {
        start: support[0],
        values: values.to_vec(),
    })
}

/// `a(z) = Σ (−1)^n α_n sinc(z − n)` on `κ = π`, `α = 0`.
pub fn atom_to_b1(atom: &DiscreteAtom) -> SampledBandlimited {
    let window = atom
        .indexed()
        .map(|(n, _)| n.unsigned_abs() as usize)
        .max()
        .unwrap_or(0);
    let seq = atom.to_sequence(window);
    let samples = seq
        .indexed()
        .map(|(n, c)| if n.rem_euclid(2) == 0 { c } else { -c })
        .collect();
    SampledBandlimited::new(Band::pi(), LatticeOffset::zero(), samples)
        .expect("atom values are finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn delta(n: usize) -> FiniteSequence {
        FiniteSequence::from_fn(n, |k| if k == 0 { c(1.0) } else { ZERO })
    }

    #[test]
    fn hilbert_of_delta() {
        let half = discrete_hilbert(&delta(4), LatticeOffset::new(0.5).unwrap(), 4);
        assert_eq!(half.get(0), c(2.0));
        for n in [-3, -1, 1, 4] {
            assert!((half.get(n) - c(1.0 / (n as f64 + 0.5))).norm() < 1e-15);
        }
        let zero = discrete_hilbert(&delta(4), LatticeOffset::zero(), 4);
        assert_eq!(zero.get(0), ZERO);
        assert!((zero.get(3) - c(1.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn bmo_examples() {
        assert_eq!(bmo_z_norm(&FiniteSequence::from_fn(10, |_| c(3.0))), 0.0);
        let alt = FiniteSequence::from_fn(20, |n| c(if n % 2 == 0 { 1.0 } else { -1.0 }));
        assert!((bmo_z_norm(&alt) - 1.0).abs() < 1e-15);
        let lin = FiniteSequence::from_fn(64, |n| c(n as f64));
        assert!(bmo_z_window_study(&lin).divergent);
        assert!(!bmo_z_window_study(&alt.rewindow(64).map(|n, _| c(if n % 2 == 0 { 1.0 } else { -1.0 }))).divergent);
    }

    #[test]
    fn h1_examples() {
        assert_eq!(h1_norm(&FiniteSequence::zeros(3), LatticeOffset::zero()).value, 0.0);
        let atom = FiniteSequence::from_fn(1, |n| match n {
            0 => c(0.5),
            1 => c(-0.5),
            _ => ZERO,
        });
        let h = h1_norm(&atom, LatticeOffset::new(0.5).unwrap());
        assert!(h.value.is_finite() && !h.divergent, "{h:?}");
        assert!(h1_norm(&delta(1), LatticeOffset::new(0.5).unwrap()).divergent);
    }

    #[test]
    fn summability_examples() {
        assert_eq!(summability_check(&FiniteSequence::zeros(16)).value, 0.0);
        let alt = FiniteSequence::from_fn(256, |n| c(if n % 2 == 0 { 1.0 } else { -1.0 }));
        assert!(!summability_check(&alt).divergent);
        let sq = FiniteSequence::from_fn(256, |n| c((n * n) as f64));
        assert!(summability_check(&sq).divergent);
    }

    #[test]
    fn atoms() {
        assert!(make_atom(&[0, 1], &[c(0.5), c(-0.5)]).is_ok());
        assert!(matches!(
            make_atom(&[0, 1], &[c(1.0), c(-1.0)]),
            Err(Error::SupTooLarge { .. })
        ));
        assert!(matches!(
            make_atom(&[0, 1, 2], &[c(1.0 / 3.0), c(0.0), c(-0.25)]),
            Err(Error::NotMeanZero { .. })
        ));
        assert!(matches!(
            make_atom(&[0, 2], &[c(0.5), c(-0.5)]),
            Err(Error::NonContiguousSupport)
        ));
    }

    #[test]
    fn atom_samples_flip_sign() {
        let a = make_atom(&[0, 1], &[c(0.5), c(-0.5)]).unwrap();
        let s = atom_to_b1(&a);
        assert_eq!(s.sample(0), c(0.5));
        assert_eq!(s.sample(1), c(0.5));
        let zero = make_atom(&[3], &[c(0.0)]).unwrap();
        assert!(atom_to_b1(&zero).samples().iter().all(|x| *x == ZERO));
    }
}
