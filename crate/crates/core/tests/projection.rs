use std::f64::consts::PI;

use bernstein_core::bandlimited::Band;
use bernstein_core::numerics::{integrate, Interval, QuadratureSpec};
use bernstein_core::projection::{
    analytic_project, band_limit_at, bmo_r_norm, mod_out_span, project_linf, vmo_profile, GridFunction, Side,
    TailModel, TrigPolynomial,
};
use bernstein_core::Complex64;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn band_limiting_is_self_adjoint() {
    let spec = QuadratureSpec::with_tolerance(1e-11, 1e-13);
    let tail = TailModel::DecayQuadratic { constant: 1e-30 };
    let f = GridFunction::from_fn(1.0 / 64.0, 10.0, tail.clone(), |x| Complex64::new(1.0, x) * (-x * x).exp()).unwrap();
    let g = GridFunction::from_fn(1.0 / 64.0, 10.0, tail, |x| {
        Complex64::from_polar((-(x - 0.5) * (x - 0.5)).exp(), x)
    })
    .unwrap();
    let band = Band::pi();
    let iv = Interval::new(-8.0, 8.0).unwrap();
    let outer = QuadratureSpec::with_tolerance(1e-10, 1e-12);
    let pf_g = integrate(
        |x| band_limit_at(&f, band, c(x), &spec).unwrap().quad.value * g.eval(x).conj(),
        iv,
        &outer,
    )
    .unwrap()
    .value;
    let f_pg = integrate(
        |x| f.eval(x) * band_limit_at(&g, band, c(x), &spec).unwrap().quad.value.conj(),
        iv,
        &outer,
    )
    .unwrap()
    .value;
    assert!((pf_g - f_pg).norm() < 1e-8, "{pf_g} vs {f_pg}");
}

/// `P_π g = e^{−iπx} P₊(e^{iπx} g) − e^{iπx} P₊(e^{−iπx} g)` modulo `span{e^{±iπx}}`.
#[test]
fn half_line_formula_agrees_with_direct_projection() {
    let spec = QuadratureSpec::with_tolerance(1e-9, 1e-11);
    let p = TrigPolynomial::cos(0.4 * PI).add(&TrigPolynomial::cos(1.5 * PI));
    let g = GridFunction::from_trig(&p, 1.0 / 32.0, 3.0).unwrap();
    let plus = analytic_project(&g.modulate(PI), Side::Plus, &spec).unwrap();
    let minus = analytic_project(&g.modulate(-PI), Side::Plus, &spec).unwrap();
    let (mut xs, mut via_halves) = (Vec::new(), Vec::new());
    for (i, x) in g.nodes().enumerate() {
        if x.abs() <= 1.0 + 1e-12 {
            xs.push(x);
            via_halves.push(Complex64::from_polar(1.0, -PI * x) * plus.values()[i] - Complex64::from_polar(1.0, PI * x) * minus.values()[i]);
        }
    }
    let zs: Vec<Complex64> = xs.iter().map(|&x| c(x)).collect();
    let direct = project_linf(&p, &zs, None, &QuadratureSpec::default()).unwrap();
    let diff: Vec<Complex64> = direct.values.iter().zip(&via_halves).map(|(a, b)| a - b).collect();
    assert!(mod_out_span(&xs, &diff).unwrap().max_residual < 1e-3);
    // and both equal the in-band part
    let target: Vec<Complex64> = direct.values.iter().zip(&xs).map(|(v, &x)| v - (0.4 * PI * x).cos()).collect();
    assert!(mod_out_span(&xs, &target).unwrap().max_residual < 1e-6);
}

#[test]
fn minus_side_complements_plus_side() {
    let spec = QuadratureSpec::with_tolerance(1e-9, 1e-11);
    let g = GridFunction::from_trig(&TrigPolynomial::cos(PI / 2.0), 1.0 / 32.0, 2.0).unwrap();
    let p = analytic_project(&g, Side::Plus, &spec).unwrap();
    let m = analytic_project(&g, Side::Minus, &spec).unwrap();
    // P₊ + P₋ = I up to the normalizing constants
    let sum: Vec<Complex64> = p.values().iter().zip(m.values()).zip(g.values()).map(|((a, b), v)| a + b - v).collect();
    let spread = sum.iter().map(|s| (s - sum[sum.len() / 2]).norm()).fold(0.0, f64::max);
    assert!(spread < 1e-9, "{spread}");
    // e^{ix/2}/2 survives P₊, e^{−ix/2}/2 survives P₋: both have the BMO norm of a half-cosine
    assert!((bmo_r_norm(&p).value - bmo_r_norm(&m).value).abs() < 1e-3);
}

#[test]
fn continuous_symbols_have_vanishing_small_scale_oscillation() {
    let smooth = GridFunction::from_fn(1.0 / 64.0, 8.0, TailModel::None, |x| c((-x * x).exp())).unwrap();
    let jump = GridFunction::from_fn(1.0 / 64.0, 8.0, TailModel::None, |x| c(if x > 0.0 { 1.0 } else { -1.0 })).unwrap();
    let deltas = [1.0 / 32.0, 1.0 / 8.0, 1.0];
    let s = vmo_profile(&smooth, &deltas).unwrap();
    let j = vmo_profile(&jump, &deltas).unwrap();
    assert!(s[0] < 0.02 && s.windows(2).all(|w| w[0] <= w[1]));
    assert!(j.iter().all(|&v| v > 0.6));
}
