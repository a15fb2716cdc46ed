//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::Float;

use rayclass::classfield::{is_fundamental, make_field, ray_class_degree, reduced_forms};
use rayclass::matrix::gcd;
use rayclass::qseries::{delta, eisenstein, eta, wp, wp_prime, FractionPair, LevelOne, ModularPoint};
use rayclass::reciprocity::{w_group, Descriptor};
use rayclass::verify::{
    check_curve_point, check_generation, check_lemma51, check_lemma52, check_surface_point, check_t_bound, check_unit_identity,
    elliptic_point_distinctness, hilbert_class_poly,
};
use rayclass::{ComplexValue, PrecisionContext};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn ctx256() -> PrecisionContext {
    PrecisionContext::new(256, 1e-40).unwrap()
}

fn rel(a: &ComplexValue, b: &ComplexValue) -> f64 {
    let d = a.dist(b);
    Float::with_val(d.prec(), &d / b.abs()).to_f64()
}

fn criterion1() -> Outcome {
    let ctx = ctx256();
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let mut worst_eta = 0.0f64;
    let mut worst_disc = 0.0f64;
    for _ in 0..10 {
        let re = rng.gen_range(-0.5..0.5);
        let im = rng.gen_range(0.9..3.0);
        let pt = ModularPoint::from_f64(re, im, &ctx).unwrap();
        let d = delta(&pt);
        let e24 = eta(&pt).powi(24);
        let (g2, g3) = eisenstein(&pt).unwrap();
        let disc = &g2.powi(3) - &g3.square().scale_i64(27);
        worst_eta = worst_eta.max(rel(&e24, &d));
        worst_disc = worst_disc.max(rel(&disc, &d));
    }
    outcome(
        worst_eta < 1e-40 && worst_disc < 1e-40,
        format!("max |eta^24-Delta|/|Delta| = {worst_eta:e}, max |g2^3-27g3^2-Delta|/|Delta| = {worst_disc:e}"),
    )
}

fn criterion2() -> Outcome {
    let ctx = ctx256();
    let j_at = |re: f64, im: f64| LevelOne::new(&ModularPoint::from_f64(re, im, &ctx).unwrap()).unwrap().j();
    let j_i = j_at(0.0, 1.0);
    let zeta3 = ModularPoint::new(&ComplexValue::root_of_unity(256, &rug::Rational::from((1, 3))), &ctx).unwrap();
    let j_rho = LevelOne::new(&zeta3).unwrap().j();
    let err_i = j_i.dist(&ComplexValue::from_f64(256, 1728.0, 0.0)).to_f64();
    let err_rho = j_rho.abs().to_f64();

    // j(it) − 1/q = c0 + c1·q + O(q²) at two heights
    let reduced = |t: f64| {
        let pt = ModularPoint::from_f64(0.0, t, &ctx).unwrap();
        let q = pt.q().clone();
        let j = LevelOne::new(&pt).unwrap().j();
        (&j - &q.recip(), q)
    };
    let (f4, q4) = reduced(4.0);
    let (f5, q5) = reduced(5.0);
    let c1 = (&f4 - &f5).checked_div(&(&q4 - &q5), &ctx).unwrap();
    let c0 = &f5 - &(&c1 * &q5);
    let c0_err = (c0.re().to_f64() - 744.0).abs() / 744.0;
    let c1_err = (c1.re().to_f64() - 196884.0).abs() / 196884.0;
    outcome(
        err_i < 1e-30 && err_rho < 1e-30 && c0_err < 1e-6 && c1_err < 1e-6,
        format!("|j(i)-1728| = {err_i:e}, |j(zeta3)| = {err_rho:e}, c0 rel err = {c0_err:e}, c1 rel err = {c1_err:e}"),
    )
}

fn criterion3() -> Outcome {
    let ctx = ctx256();
    let cases = [((0.1, 1.2), (1, 2, 5)), ((-0.3, 1.05), (1, 0, 3)), ((0.45, 2.1), (3, 1, 7))];
    let mut worst_fd = 0.0f64;
    let mut worst_cubic = 0.0f64;
    for ((re, im), (p1, p2, n)) in cases {
        let pt = ModularPoint::from_f64(re, im, &ctx).unwrap();
        let r = FractionPair::new(p1, p2, n).unwrap();
        let z = r.point(pt.tau());
        let h = ComplexValue::from_real(rayclass::numerics::pow10(256, -12));
        let at = |k: i64| wp(&(&z + &h.scale_i64(k)), &pt).unwrap();
        let num = &(&at(-2) - &at(2)) + &(&at(1) - &at(-1)).scale_i64(8);
        let fd = num.checked_div(&h.scale_i64(12), &ctx).unwrap();
        let d = wp_prime(&r, &pt).unwrap();
        worst_fd = worst_fd.max(rel(&fd, &d));

        let p = wp(&z, &pt).unwrap();
        let (g2, g3) = eisenstein(&pt).unwrap();
        let rhs = &(&p.powi(3).scale_i64(4) - &(&g2 * &p)) - &g3;
        let scale = p.powi(3).abs().to_f64().max(d.square().abs().to_f64()) * 4.0;
        worst_cubic = worst_cubic.max(d.square().dist(&rhs).to_f64() / scale);
    }
    outcome(
        worst_fd < 1e-20 && worst_cubic < 1e-30,
        format!("max finite-difference rel err = {worst_fd:e}, max cubic residual = {worst_cubic:e}"),
    )
}

fn criterion4() -> Outcome {
    let ctx = ctx256();
    let mut worst = 0.0f64;
    let mut pass = true;
    for (dk, n) in [(-39, 8), (-40, 8), (-52, 12)] {
        let rep = check_curve_point(&make_field(dk).unwrap(), n, false, &ctx).unwrap();
        pass &= rep.pass;
        for r in &rep.residuals {
            pass &= r.value < 1e-30;
            worst = worst.max(r.value);
        }
    }
    for (re, im, n) in [(0.3, 1.7, 8), (-0.2, 1.1, 12)] {
        let rep = check_surface_point(&ctx.complex(re, im), n, &ctx).unwrap();
        pass &= rep.pass;
        for r in &rep.residuals {
            pass &= r.value < 1e-30;
            worst = worst.max(r.value);
        }
    }
    outcome(pass, format!("3 curve points and 2 surface points, worst relative residual = {worst:e}"))
}

fn brute_forms(d: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    let amax = ((-d) as f64 / 3.0).sqrt() as i64 + 1;
    for a in 1..=amax {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if gcd(gcd(a, b), c) != 1 {
                continue;
            }
            out.push((a, b, c));
        }
    }
    out.sort();
    out
}

fn criterion5() -> Outcome {
    let mut mismatches = Vec::new();
    let mut count = 0;
    for d in -200..=-3 {
        if !is_fundamental(d) {
            continue;
        }
        count += 1;
        let mut ours: Vec<_> = reduced_forms(d).unwrap().iter().map(|f| (f.a, f.b, f.c)).collect();
        ours.sort();
        if ours != brute_forms(d) {
            mismatches.push(d);
        }
    }
    let ctx = PrecisionContext::new(300, 1e-50).unwrap();
    let mut hcp_ok = true;
    let mut worst = 0.0f64;
    for dk in [-7, -8, -11, -19, -23, -31] {
        let field = make_field(dk).unwrap();
        let poly = hilbert_class_poly(&field, &ctx, 1e-10).unwrap();
        let integral = poly.fully_recognized() && poly.recognized.iter().flatten().all(|r| r.is_rational_integer());
        hcp_ok &= integral && poly.degree() == field.h;
        let Some(exact) = poly.recognized_poly(&field.theta(300)) else {
            hcp_ok = false;
            continue;
        };
        let js: Vec<ComplexValue> = field
            .forms()
            .iter()
            .map(|f| {
                LevelOne::new(&ModularPoint::new(&f.cm_point(dk).to_complex(300), &ctx).unwrap())
                    .unwrap()
                    .j()
            })
            .collect();
        let res = exact.relative_residual(&js);
        worst = worst.max(res);
        hcp_ok &= res < 1e-10;
    }
    outcome(
        mismatches.is_empty() && hcp_ok,
        format!(
            "{count} fundamental discriminants, form mismatches {mismatches:?}; class polynomials integral, worst re-expansion residual = {worst:e}"
        ),
    )
}

fn criterion6() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for d in -163..=-7 {
        if !is_fundamental(d) {
            continue;
        }
        let field = make_field(d).unwrap();
        for n in [3i64, 4, 5, 7, 8, 9, 12] {
            count += 1;
            let invertible = (0..n)
                .flat_map(|t| (0..n).map(move |s| (t, s)))
                .filter(|&(t, s)| gcd(t * t - field.b_theta * s * t + field.c_theta * s * s, n) == 1)
                .count() as u64;
            let lhs = field.h as u64 * invertible / 2;
            let rhs = ray_class_degree(&field, n).unwrap();
            let grouped = field.h as u64 * w_group(&field, n).unwrap().len() as u64;
            if lhs != rhs || grouped != rhs {
                bad.push((d, n, lhs, rhs));
            }
        }
    }
    outcome(bad.is_empty(), format!("{count} (d_K, N) pairs, mismatches {bad:?}"))
}

fn criterion7() -> Outcome {
    let ctx = ctx256();
    let mut pass = true;
    let mut grid = 0;
    for dk in [-7i64, -39, -163] {
        let big_d = ((-dk) as f64 / 3.0).sqrt();
        for a in [1.0, big_d] {
            for x in [0.5, 1.0, 5.0] {
                grid += 1;
                pass &= check_lemma51(dk, a, x, &ctx).unwrap().pass;
            }
        }
    }
    let mut margins = Vec::new();
    for (dk, n) in [(-39, 8), (-43, 9), (-56, 8)] {
        let rep = check_lemma52(&make_field(dk).unwrap(), n, &ctx).unwrap();
        pass &= rep.pass;
        margins.push(format!("({dk},{n}): {:e}", -rep.residuals[0].value));
    }
    let mut tmax = (0.0f64, 0.0f64, 0.0f64);
    for (dk, n) in [(-39, 8), (-56, 8), (-52, 12)] {
        let rep = check_t_bound(n, &make_field(dk).unwrap()).unwrap();
        pass &= rep.pass;
        tmax.0 = tmax.0.max(rep.residuals[0].value);
        tmax.1 = tmax.1.max(rep.residuals[1].value);
        tmax.2 = tmax.2.max(rep.residuals[2].value);
    }
    outcome(
        pass,
        format!(
            "lemma51 grid {grid}/18 strict, lemma52 log margins [{}], T(s=0) <= {:.6}, T(s!=0) <= {:.6}, majorant <= {:.6}",
            margins.join(", "),
            tmax.0,
            tmax.1,
            tmax.2
        ),
    )
}

fn criterion8() -> Outcome {
    let ctx = ctx256();
    let mut pass = true;
    let mut parts = Vec::new();
    let cases = [
        (-39, 8, Descriptor::Pair),
        (-40, 12, Descriptor::Pair),
        (-7, 3, Descriptor::YPow(4)),
        (-7, 9, Descriptor::YPow(4)),
        (-39, 3, Descriptor::YPow(4)),
    ];
    for (dk, n, desc) in cases {
        let field = make_field(dk).unwrap();
        let rep = check_generation(&field, n, desc, &ctx).unwrap();
        pass &= rep.pass;
        parts.push(format!("({dk},{n},{desc}) degree {}", rep.inputs["degree"]));
        let unit = check_unit_identity(&field, n, &ctx).unwrap();
        pass &= unit.pass && unit.residuals[0].value < 1e-20;
    }
    outcome(pass, format!("generation and unit identity for {}", parts.join("; ")))
}

fn criterion9() -> Outcome {
    let rep = elliptic_point_distinctness(&ctx256()).unwrap();
    outcome(rep.pass, format!("20 points, threshold/min distance = {:e}", rep.residuals[0].value))
}

fn criterion10() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_rayclass");
    let commands: [&[&str]; 4] = [
        &["field", "--dk", "-39"],
        &["conjugates", "--dk", "-7", "--level", "3", "--descriptor", "y4"],
        &["check", "curve", "--dk", "-40", "--level", "8"],
        &["eval", "j", "--tau", "0.1,1.3"],
    ];
    let run = |args: &[&str]| Command::new(exe).args(args).output().expect("spawn cli").stdout;
    let mut same = true;
    for args in commands {
        let a = run(args);
        let b = run(args);
        same &= !a.is_empty() && a == b;
    }
    outcome(same, "4 commands, two runs each, byte-identical stdout")
}

type Criterion = (u32, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, Duration::from_secs(5), criterion1),
        (2, Duration::from_secs(60), criterion2),
        (3, Duration::from_secs(10), criterion3),
        (4, Duration::from_secs(60), criterion4),
        (5, Duration::from_secs(60), criterion5),
        (6, Duration::from_secs(10), criterion6),
        (7, Duration::from_secs(120), criterion7),
        (8, Duration::from_secs(300), criterion8),
        (9, Duration::from_secs(60), criterion9),
        (10, Duration::from_secs(120), criterion10),
    ];
    let mut failed = Vec::new();
    for (k, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let pass = out.pass && in_time;
        let tag = if pass { "PASS" } else { "FAIL" };
        println!(
            "{tag} criterion {k}: {} [{:.2}s, limit {}s]",
            out.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        if !pass {
            failed.push(k);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
