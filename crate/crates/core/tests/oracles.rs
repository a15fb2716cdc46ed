//! Cross-checks against independent double-precision oracles.

use num_complex::Complex64;

use rayclass::classfield::{check_hypothesis, make_field, ray_class_degree, reduced_forms};
use rayclass::qseries::{eta, siegel, wp, wp_prime, FractionPair, LevelOne, ModularPoint};
use rayclass::reciprocity::{conjugate_values, w_group, Descriptor};
use rayclass::verify::{check_lemma52, minpoly};
use rayclass::{ComplexValue, PrecisionContext};

const TAU_PI: f64 = 2.0 * std::f64::consts::PI;

fn ctx() -> PrecisionContext {
    PrecisionContext::new(256, 1e-40).unwrap()
}

fn c64(z: &ComplexValue) -> Complex64 {
    let (re, im) = z.to_f64_pair();
    Complex64::new(re, im)
}

/// Symmetric square lattice sum for `℘(z)` on `ℤτ + ℤ`.
fn wp_lattice(z: Complex64, tau: Complex64, m: i64) -> Complex64 {
    let mut sum = z.powi(-2);
    for a in -m..=m {
        for b in -m..=m {
            if a == 0 && b == 0 {
                continue;
            }
            let w = tau * a as f64 + b as f64;
            sum += (z - w).powi(-2) - w.powi(-2);
        }
    }
    sum
}

/// Richardson step on the `1/M²` tail of the square sum.
fn wp_oracle(z: Complex64, tau: Complex64) -> Complex64 {
    let a = wp_lattice(z, tau, 120);
    let b = wp_lattice(z, tau, 240);
    (b * 4.0 - a) / 3.0
}

#[test]
fn wp_matches_lattice_sum() {
    let c = ctx();
    for &(re, im, p1, p2, n) in &[(0.0, 1.0, 0, 1, 2), (0.2, 1.3, 1, 2, 5), (-0.4, 1.1, 1, 1, 3)] {
        let pt = ModularPoint::from_f64(re, im, &c).unwrap();
        let r = FractionPair::new(p1, p2, n).unwrap();
        let ours = c64(&wp(&r.point(pt.tau()), &pt).unwrap());
        let oracle = wp_oracle(c64(&r.point(pt.tau())), Complex64::new(re, im));
        assert!((ours - oracle).norm() / ours.norm() < 1e-5, "{ours} vs {oracle}");
    }
}

#[test]
fn eta_matches_pentagonal_series() {
    let c = ctx();
    let tau = Complex64::new(0.17, 0.93);
    let q = (Complex64::i() * TAU_PI * tau).exp();
    let mut series = Complex64::new(0.0, 0.0);
    for k in -30i64..=30 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        series += q.powf((k * (3 * k - 1) / 2) as f64) * sign;
    }
    // η with the √(2π)ζ₈ normalization
    let norm = (TAU_PI).sqrt() * Complex64::from_polar(1.0, TAU_PI / 8.0);
    let oracle = norm * (Complex64::i() * TAU_PI * tau / 24.0).exp() * series;
    let ours = c64(&eta(&ModularPoint::from_f64(0.17, 0.93, &c).unwrap()));
    assert!((ours - oracle).norm() / oracle.norm() < 1e-13, "{ours} vs {oracle}");
}

#[test]
fn j_matches_q_expansion() {
    let c = ctx();
    let coeffs = [744.0, 196884.0, 21493760.0, 864299970.0, 20245856256.0, 333202640600.0];
    for &(re, im) in &[(0.0, 2.0), (0.31, 1.7), (-0.45, 2.5)] {
        let tau = Complex64::new(re, im);
        let q = (Complex64::i() * TAU_PI * tau).exp();
        let mut oracle = q.inv();
        for (k, a) in coeffs.iter().enumerate() {
            oracle += q.powi(k as i32) * *a;
        }
        let ours = c64(&LevelOne::new(&ModularPoint::from_f64(re, im, &c).unwrap()).unwrap().j());
        assert!((ours - oracle).norm() / oracle.norm() < 1e-12, "{ours} vs {oracle}");
    }
}

#[test]
fn siegel_addition_law_against_lattice_wp() {
    // ℘(z_r) − ℘(z_s) = −η⁴·g_{r+s}·g_{r−s}/(g_r²·g_s²)
    let c = ctx();
    let (re, im) = (0.1, 1.2);
    let pt = ModularPoint::from_f64(re, im, &c).unwrap();
    let tau = Complex64::new(re, im);
    let r = FractionPair::new(1, 2, 7).unwrap();
    let s = FractionPair::new(3, 1, 7).unwrap();
    let sum = FractionPair::new(4, 3, 7).unwrap();
    let diff = FractionPair::new(-2, 1, 7).unwrap();
    let g = |x: &FractionPair| c64(&siegel(x, &pt).unwrap());
    let e = c64(&eta(&pt));
    let rhs = -e.powi(4) * g(&sum) * g(&diff) / (g(&r).powi(2) * g(&s).powi(2));
    let lhs = wp_oracle(c64(&r.point(pt.tau())), tau) - wp_oracle(c64(&s.point(pt.tau())), tau);
    assert!((lhs - rhs).norm() / lhs.norm() < 1e-5, "{lhs} vs {rhs}");
}

#[test]
fn siegel_at_half_period_of_square_lattice() {
    // the 2-torsion values on the square lattice, same addition law
    let c = ctx();
    let pt = ModularPoint::from_f64(0.0, 1.0, &c).unwrap();
    let tau = Complex64::new(0.0, 1.0);
    let a = FractionPair::new(0, 1, 2).unwrap();
    let b = FractionPair::new(1, 0, 2).unwrap();
    let g = |p1, p2| c64(&siegel(&FractionPair::new(p1, p2, 2).unwrap(), &pt).unwrap());
    let e = c64(&eta(&pt));
    let rhs = -e.powi(4) * g(1, 1) * g(-1, 1) / (g(0, 1).powi(2) * g(1, 0).powi(2));
    let lhs = wp_oracle(c64(&a.point(pt.tau())), tau) - wp_oracle(c64(&b.point(pt.tau())), tau);
    assert!((lhs - rhs).norm() / lhs.norm() < 1e-5, "{lhs} vs {rhs}");
}

#[test]
fn wp_prime_matches_finite_difference_of_oracle() {
    let c = ctx();
    let (re, im) = (-0.15, 1.4);
    let pt = ModularPoint::from_f64(re, im, &c).unwrap();
    let tau = Complex64::new(re, im);
    let r = FractionPair::new(2, 1, 5).unwrap();
    let z = c64(&r.point(pt.tau()));
    let h = 1e-3;
    let f = |k: f64| wp_oracle(z + k * h, tau);
    let fd = (f(-2.0) - f(2.0) + (f(1.0) - f(-1.0)) * 8.0) / (12.0 * h);
    let ours = c64(&wp_prime(&r, &pt).unwrap());
    assert!((ours - fd).norm() / ours.norm() < 1e-4, "{ours} vs {fd}");
}

#[test]
fn precision_doubling_is_stable() {
    let c = ctx();
    let d = c.doubled();
    let tau = (0.23, 1.31);
    let r = FractionPair::new(1, 3, 8).unwrap();
    let lo = siegel(&r, &ModularPoint::from_f64(tau.0, tau.1, &c).unwrap()).unwrap();
    let hi = siegel(&r, &ModularPoint::from_f64(tau.0, tau.1, &d).unwrap()).unwrap();
    assert!(lo.with_prec(d.bits()).rel_dist(&hi).to_f64() < 1e-40);
    let jl = LevelOne::new(&ModularPoint::from_f64(tau.0, tau.1, &c).unwrap()).unwrap().j();
    let jh = LevelOne::new(&ModularPoint::from_f64(tau.0, tau.1, &d).unwrap()).unwrap().j();
    assert!(jl.with_prec(d.bits()).rel_dist(&jh).to_f64() < 1e-40);
}

#[test]
fn siegel_order_matches_growth_rate() {
    let c = ctx();
    for &(p1, p2, n) in &[(1, 0, 8), (1, 2, 5), (0, 1, 7), (3, 1, 7)] {
        let r = FractionPair::new(p1, p2, n).unwrap();
        let log_abs = |y: f64| siegel(&r, &ModularPoint::from_f64(0.0, y, &c).unwrap()).unwrap().abs().ln().to_f64();
        let slope = (log_abs(30.0) - log_abs(20.0)) / 10.0;
        let expected = -TAU_PI * rayclass::qseries::siegel_order(&r).to_f64();
        assert!((slope - expected).abs() < 1e-6, "{r:?}: {slope} vs {expected}");
    }
}

#[test]
fn degree_agrees_with_orbit_and_hypothesis() {
    for &(dk, n) in &[(-39, 8), (-40, 12), (-7, 3), (-52, 5), (-84, 7)] {
        let k = make_field(dk).unwrap();
        let deg = ray_class_degree(&k, n).unwrap();
        assert_eq!(deg, k.h as u64 * w_group(&k, n).unwrap().len() as u64);
        assert_eq!(check_hypothesis(&k, n).unwrap().degree, deg);
    }
}

#[test]
fn orbit_polynomial_descends_to_k() {
    let c = ctx();
    let k = make_field(-7).unwrap();
    let vals: Vec<ComplexValue> = conjugate_values(&k, 3, Descriptor::YPow(4), &c)
        .unwrap()
        .into_iter()
        .map(|cj| cj.value.components()[0].clone())
        .collect();
    let poly = minpoly(&vals, &k, 1000, 1e-30, &c).unwrap();
    assert!(poly.fully_recognized());
    let dens: Vec<u32> = poly.recognized.iter().flatten().map(|r| r.den).collect();
    assert_eq!(dens, vec![729, 81, 27, 3, 1]);
}

#[test]
fn lemma52_holds_for_several_fields() {
    let c = ctx();
    for dk in [-39, -52, -84] {
        let k = make_field(dk).unwrap();
        assert!(reduced_forms(dk).unwrap().iter().any(|f| f.a >= 2));
        let rep = check_lemma52(&k, 8, &c).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
}
