use std::f64::consts::PI;

use bernstein_core::bandlimited::{pw_norm, Band, LatticeOffset, SampledBandlimited};
use bernstein_core::hankel::{apply, assemble, band_reduce, op_norm, SymbolSpec};
use bernstein_core::numerics::{integrate, Interval, QuadratureSpec};
use bernstein_core::projection::TrigPolynomial;
use bernstein_core::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn half() -> Band {
    Band::new(PI / 2.0).unwrap()
}

/// `∫ e^{iνx} e_j e_k dx` from the Fourier transforms of the basis:
/// `ê_n = √(π/κ) χ_{[−κ,κ]} e^{−iξ nπ/κ}`.
fn exp_entry(nu: f64, kappa: f64, j: i64, k: i64) -> Complex64 {
    let xj = j as f64 * PI / kappa;
    let d = (k - j) as f64 * PI / kappa;
    let (a, b) = ((-kappa).max(nu - kappa), kappa.min(nu + kappa));
    if b <= a {
        return Complex64::new(0.0, 0.0);
    }
    let span = if d == 0.0 {
        Complex64::new(b - a, 0.0)
    } else {
        ((Complex64::i() * b * d).exp() - (Complex64::i() * a * d).exp()) / (Complex64::i() * d)
    };
    Complex64::from_polar(1.0 / (2.0 * kappa), nu * xj) * span
}

fn trig_entry(p: &TrigPolynomial, kappa: f64, j: i64, k: i64) -> Complex64 {
    p.terms().iter().map(|&(f, c)| c * exp_entry(f, kappa, j, k)).sum()
}

#[test]
fn cosine_matches_fourier_oracle() {
    let p = TrigPolynomial::cos(0.5);
    let m = assemble(&SymbolSpec::Trig(p.clone()), half(), 16, &QuadratureSpec::default()).unwrap();
    let mut worst = 0.0_f64;
    for j in -16..=16 {
        for k in -16..=16 {
            worst = worst.max((m.get(j, k) - trig_entry(&p, PI / 2.0, j, k)).norm());
        }
    }
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn out_of_band_symbol_vanishes() {
    let m = assemble(&SymbolSpec::Trig(TrigPolynomial::exp(3.0 * PI)), half(), 16, &QuadratureSpec::default()).unwrap();
    assert!(m.frobenius() < 1e-6, "{}", m.frobenius());
}

#[test]
fn mixed_symbol_matches_oracle_and_reduction() {
    let p = TrigPolynomial::new(vec![
        (-2.5, Complex64::new(0.4, 0.1)),
        (0.0, Complex64::new(0.2, 0.0)),
        (1.3, Complex64::new(-0.3, 0.5)),
        (4.0, Complex64::new(1.0, 0.0)),
    ])
    .unwrap();
    let spec = QuadratureSpec::default();
    let m = assemble(&SymbolSpec::Trig(p.clone()), half(), 8, &spec).unwrap();
    for j in -8..=8 {
        for k in -8..=8 {
            assert!((m.get(j, k) - trig_entry(&p, PI / 2.0, j, k)).norm() < 1e-7);
        }
    }
    let r = band_reduce(&SymbolSpec::Trig(p), half(), &spec).unwrap();
    let mr = assemble(&r, half(), 8, &spec).unwrap();
    assert!((op_norm(&m).unwrap() - op_norm(&mr).unwrap()).abs() < 1e-6);
}

#[test]
fn apply_matches_direct_pairing() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let p = TrigPolynomial::new(vec![(0.7, Complex64::new(0.5, -0.2)), (-1.9, Complex64::new(0.1, 0.3))]).unwrap();
    let n = 6;
    let spec = QuadratureSpec::default();
    let m = assemble(&SymbolSpec::Trig(p.clone()), half(), n, &spec).unwrap();
    let mut draw = || {
        let v = (0..2 * n + 1)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        SampledBandlimited::new(half(), LatticeOffset::zero(), v).unwrap()
    };
    let (f, g) = (draw(), draw());
    let hf = apply(&m, &f).unwrap();
    // ⟨H f | g⟩ in B² equals the spacing-weighted sample sum
    let lhs: Complex64 = hf.samples().iter().zip(g.samples()).map(|(a, b)| a * b.conj()).sum::<Complex64>() * half().spacing();
    // ∫ φ f̄ ḡ, summed termwise through the oracle
    let mut rhs = Complex64::new(0.0, 0.0);
    let root = half().spacing().sqrt();
    for (j, a) in f.indexed() {
        for (k, b) in g.indexed() {
            rhs += (a * root).conj() * (b * root).conj() * trig_entry(&p, PI / 2.0, j, k);
        }
    }
    assert!((lhs - rhs).norm() < 1e-7, "{lhs} vs {rhs}");
}

#[test]
fn duality_bridge_single_product() {
    let p = TrigPolynomial::new(vec![(0.9, Complex64::new(0.6, 0.0)), (-0.4, Complex64::new(0.0, 0.7))]).unwrap();
    let n = 10;
    let spec = QuadratureSpec::default();
    let m = assemble(&SymbolSpec::Trig(p.clone()), half(), n, &spec).unwrap();
    let norm = op_norm(&m).unwrap();
    let f = SampledBandlimited::from_fn(half(), LatticeOffset::zero(), n, |x| Complex64::new((-0.05 * x * x).exp(), 0.0)).unwrap();
    let g = SampledBandlimited::from_fn(half(), LatticeOffset::zero(), n, |x| Complex64::new(0.0, (-(x - 1.0).powi(2) / 30.0).exp())).unwrap();
    let fg = |x: f64| {
        let z = Complex64::new(x, 0.0);
        bernstein_core::bandlimited::interpolate(&f, z) * bernstein_core::bandlimited::interpolate(&g, z) * p.eval_real(x)
    };
    let wide = QuadratureSpec::default().with_period(4.0);
    let pairing = integrate(fg, Interval::new(-400.0, 400.0).unwrap(), &wide).unwrap().value;
    assert!(pairing.norm() <= norm * pw_norm(&f) * pw_norm(&g) + 1e-4, "{} > {}", pairing.norm(), norm);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn scaling_is_linear(re in -2.0..2.0f64, im in -2.0..2.0f64, f in -3.0..3.0f64) {
        let spec = QuadratureSpec::default();
        let p = SymbolSpec::Trig(TrigPolynomial::exp(f).add(&TrigPolynomial::constant(Complex64::new(0.3, 0.0))));
        let c = Complex64::new(re, im);
        let a = op_norm(&assemble(&p, half(), 4, &spec).unwrap()).unwrap();
        let b = op_norm(&assemble(&p.scale(c), half(), 4, &spec).unwrap()).unwrap();
        prop_assert!((b - c.norm() * a).abs() <= 1e-8 * (1.0 + b));
    }

    #[test]
    fn symmetric_and_interlaced(f1 in -3.0..3.0f64, f2 in -3.0..3.0f64, c in -1.0..1.0f64) {
        let spec = QuadratureSpec::default();
        let p = SymbolSpec::Trig(TrigPolynomial::new(vec![(f1, Complex64::new(1.0, 0.0)), (f2, Complex64::new(0.0, c))]).unwrap());
        let small = assemble(&p, half(), 3, &spec).unwrap();
        let large = assemble(&p, half(), 6, &spec).unwrap();
        prop_assert!(small.asymmetry <= 10.0 * spec.abs_tol.max(spec.rel_tol));
        let sv = bernstein_core::numerics::singular_values(&large.entries).unwrap();
        prop_assert!(sv.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(op_norm(&small).unwrap() <= op_norm(&large).unwrap() + 1e-9);
    }
}
