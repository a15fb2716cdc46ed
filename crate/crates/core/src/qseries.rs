//! q-expansions of η, the Eisenstein series, Δ, j, Siegel functions and ℘,
//! together with the normalized coordinates `(u, v, x, y)` of the torsion
//! point `r₁τ + r₂` and cusp-order bookkeeping.
//!
//! Normalizations: `η(τ) = √(2π)·ζ₈·q^{1/24}·∏(1 − qⁿ)`, so that
//! `η²⁴ = Δ = (2π)¹²·q·∏(1 − qⁿ)²⁴`, and the Siegel function is
//! `g_r(τ) = −q^{B₂(r₁)/2}·e^{πi r₂(r₁−1)}·(1 − q_z)·∏(1 − qⁿq_z)(1 − qⁿ/q_z)`.

use std::fmt;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Mat2;
use crate::numerics::{truncation_terms, weighted_truncation_terms, ComplexValue, PrecisionContext, TAIL_GUARD_BITS};

/// A point of the upper half-plane with `Im τ ≥ 0.1` and its cached `q = e^{2πiτ}`.
#[derive(Debug, Clone)]
pub struct ModularPoint {
    tau: ComplexValue,
    q: ComplexValue,
    ctx: PrecisionContext,
    terms: usize,
}

impl ModularPoint {
    pub fn new(tau: &ComplexValue, ctx: &PrecisionContext) -> Result<Self> {
        let tau = tau.with_prec(ctx.bits());
        let im = tau.im().to_f64();
        let terms = truncation_terms(im, ctx.eps())?;
        let q = two_pi_i(&tau).exp();
        Ok(ModularPoint { tau, q, ctx: *ctx, terms })
    }

    pub fn from_f64(re: f64, im: f64, ctx: &PrecisionContext) -> Result<Self> {
        ModularPoint::new(&ctx.complex(re, im), ctx)
    }

    pub fn tau(&self) -> &ComplexValue {
        &self.tau
    }

    pub fn q(&self) -> &ComplexValue {
        &self.q
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// Truncation index `M` of the products.
    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn prec(&self) -> u32 {
        self.ctx.bits()
    }

    fn im_f64(&self) -> f64 {
        self.tau.im().to_f64()
    }
}

/// `2πi·z`.
fn two_pi_i(z: &ComplexValue) -> ComplexValue {
    let two_pi = Float::with_val(z.prec(), rug::float::Constant::Pi) * 2u32;
    z.scale(&two_pi).mul_i()
}

/// An index `(p₁/N, p₂/N)` of a Siegel or Fricke function. Numerators are
/// kept unreduced; [`FractionPair::reduced`] gives the representative in `[0, 1)²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FractionPair {
    pub p1: i64,
    pub p2: i64,
    pub n: i64,
}

impl fmt::Display for FractionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}/{}, {}/{})", self.p1, self.n, self.p2, self.n)
    }
}

impl FractionPair {
    pub fn new(p1: i64, p2: i64, n: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("denominator {n} must be at least 2")));
        }
        let r = FractionPair { p1, p2, n };
        if r.is_integral() {
            return Err(Error::DegenerateIndex(r.to_string()));
        }
        Ok(r)
    }

    /// The index `(0, 1/N)`.
    pub fn basic(n: i64) -> Result<Self> {
        FractionPair::new(0, 1, n)
    }

    /// Parse `"p1/N,p2/N"` (both denominators must agree).
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse index {s:?}; expected p1/N,p2/N"));
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let parse_one = |t: &str| -> Result<(i64, i64)> {
            let (num, den) = t.trim().split_once('/').ok_or_else(bad)?;
            Ok((num.trim().parse().map_err(|_| bad())?, den.trim().parse().map_err(|_| bad())?))
        };
        let (p1, n1) = parse_one(a)?;
        let (p2, n2) = parse_one(b)?;
        if n1 != n2 {
            return Err(bad());
        }
        FractionPair::new(p1, p2, n1)
    }

    pub fn is_integral(&self) -> bool {
        self.p1 % self.n == 0 && self.p2 % self.n == 0
    }

    pub fn r1(&self) -> Rational {
        Rational::from((self.p1, self.n))
    }

    pub fn r2(&self) -> Rational {
        Rational::from((self.p2, self.n))
    }

    /// Representative with numerators in `[0, N)`.
    pub fn reduced(&self) -> FractionPair {
        FractionPair {
            p1: self.p1.rem_euclid(self.n),
            p2: self.p2.rem_euclid(self.n),
            n: self.n,
        }
    }

    /// `k·r`, possibly integral.
    pub fn scaled(&self, k: i64) -> FractionPair {
        FractionPair {
            p1: k * self.p1,
            p2: k * self.p2,
            n: self.n,
        }
    }

    pub fn doubled(&self) -> FractionPair {
        self.scaled(2)
    }

    /// Row-vector action `r·m` without reduction.
    pub fn act(&self, m: &Mat2) -> FractionPair {
        FractionPair {
            p1: self.p1 * m.a + self.p2 * m.c,
            p2: self.p1 * m.b + self.p2 * m.d,
            n: self.n,
        }
    }

    /// The point `r₁τ + r₂`.
    pub fn point(&self, tau: &ComplexValue) -> ComplexValue {
        let prec = tau.prec();
        let r1 = Float::with_val(prec, &self.r1());
        let r2 = Float::with_val(prec, &self.r2());
        tau.scale(&r1) + ComplexValue::from_real(r2)
    }
}

/// A cusp `s = α(∞)` of width `w`, carried by its transporter `α ∈ SL₂(ℤ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspData {
    transporter: Mat2,
    width: i64,
}

impl CuspData {
    pub fn new(transporter: Mat2, width: i64) -> Result<Self> {
        if transporter.det() != 1 {
            return Err(Error::InvalidArgument(format!("transporter {transporter} must have det 1")));
        }
        if width < 1 {
            return Err(Error::InvalidArgument(format!("cusp width {width} must be positive")));
        }
        Ok(CuspData { transporter, width })
    }

    /// `a/c`, or `None` for the cusp at infinity.
    pub fn cusp(&self) -> Option<Rational> {
        let Mat2 { a, c, .. } = self.transporter;
        (c != 0).then(|| Rational::from((a, c)))
    }

    pub fn width(&self) -> i64 {
        self.width
    }

    pub fn transporter(&self) -> Mat2 {
        self.transporter
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    let floor = x.clone().floor();
    Rational::from(x - &floor)
}

/// `B₂(x) = x² − x + 1/6`.
pub fn bernoulli2(x: &Rational) -> Rational {
    let x2 = Rational::from(x * x);
    x2 - x + Rational::from((1, 6))
}

/// Order of `g_r` at infinity in `q`: `½·B₂(⟨r₁⟩)`.
pub fn siegel_order(r: &FractionPair) -> Rational {
    bernoulli2(&frac(&r.r1())) / 2u32
}

/// Order of `y_{(0,1/N)}` at the cusp, in the local parameter `q^{1/w}`.
pub fn y_cusp_order(r: &FractionPair, cusp: &CuspData) -> Result<Rational> {
    if r.p1.rem_euclid(r.n) != 0 || r.p2.rem_euclid(r.n) != 1 || r.n <= 2 {
        return Err(Error::InvalidArgument(format!("cusp order needs r = (0, 1/N) with N > 2, got {r}")));
    }
    let c = frac(&Rational::from((cusp.transporter.c, r.n)));
    let w = Rational::from(cusp.width);
    let half = Rational::from((1, 2));
    let body = if c < half {
        c - Rational::from((1, 4))
    } else {
        Rational::from((3, 4)) - c
    };
    Ok(w * body)
}

/// `∏_{n=1}^{M}(1 − qⁿ)`.
fn euler_product(pt: &ModularPoint) -> ComplexValue {
    let prec = pt.prec();
    let one = ComplexValue::one(prec);
    let mut qn = pt.q.clone();
    let mut acc = one.clone();
    for _ in 0..pt.terms {
        acc = &acc * &(&one - &qn);
        qn = &qn * &pt.q;
    }
    acc
}

/// Dedekind η in the normalization `√(2π)·ζ₈·q^{1/24}·∏(1 − qⁿ)`.
pub fn eta(pt: &ModularPoint) -> ComplexValue {
    let prec = pt.prec();
    let pi = pt.ctx.pi();
    let sqrt_2pi = Float::with_val(prec, &pi * 2u32).sqrt();
    let zeta8 = ComplexValue::root_of_unity(prec, &Rational::from((1, 8)));
    let q24 = two_pi_i(&pt.tau.scale(&Float::with_val(prec, Rational::from((1, 24))))).exp();
    (&zeta8 * &q24).scale(&sqrt_2pi) * euler_product(pt)
}

/// Lambert sum `Σ_{n ≤ terms} n^k qⁿ/(1 − qⁿ) = Σ σ_k(n) qⁿ`.
fn lambert_sum(pt: &ModularPoint, k: u32, terms: usize) -> ComplexValue {
    let prec = pt.prec();
    let one = ComplexValue::one(prec);
    let mut qn = pt.q.clone();
    let mut acc = ComplexValue::zero(prec);
    for n in 1..=terms {
        let coeff = Integer::from(n).pow(k);
        let term = &qn * &(&one - &qn).recip();
        acc = acc + term.scale(&Float::with_val(prec, &coeff));
        qn = &qn * &pt.q;
    }
    acc
}

/// `(g₂, g₃)` from their Fourier series.
pub fn eisenstein(pt: &ModularPoint) -> Result<(ComplexValue, ComplexValue)> {
    let prec = pt.prec();
    let im = pt.im_f64();
    // g₂³ − 27g₃² cancels down to Δ ~ |q|, so the sums are cut |q|·10⁻⁴ below eps.
    let log_target =
        pt.ctx.eps().ln() - f64::from(TAIL_GUARD_BITS) * std::f64::consts::LN_2 - 2.0 * std::f64::consts::PI * im - 4.0 * std::f64::consts::LN_10;
    let m3 = weighted_truncation_terms(im, log_target, 3, 240.0)?;
    let m5 = weighted_truncation_terms(im, log_target, 5, 504.0)?;
    let two_pi = pt.ctx.pi() * 2u32;
    let one = ComplexValue::one(prec);
    let s3 = lambert_sum(pt, 3, m3);
    let s5 = lambert_sum(pt, 5, m5);
    let c2 = Float::with_val(prec, two_pi.clone().pow(4u32)) / 12u32;
    let c3 = Float::with_val(prec, two_pi.pow(6u32)) / 216u32;
    let g2 = (&one + &s3.scale_i64(240)).scale(&c2);
    let g3 = (&one - &s5.scale_i64(504)).scale(&c3);
    Ok((g2, g3))
}

/// `Δ = (2π)¹²·q·∏(1 − qⁿ)²⁴`.
pub fn delta(pt: &ModularPoint) -> ComplexValue {
    let two_pi = pt.ctx.pi() * 2u32;
    let c = Float::with_val(pt.prec(), two_pi.pow(12u32));
    (&pt.q * &euler_product(pt).powi(24)).scale(&c)
}

/// `j = 1728·g₂³/Δ`.
pub fn j(pt: &ModularPoint) -> Result<ComplexValue> {
    let (g2, _) = eisenstein(pt)?;
    Ok(j_from(&g2, &delta(pt)))
}

fn j_from(g2: &ComplexValue, delta: &ComplexValue) -> ComplexValue {
    (g2.powi(3) * delta.recip()).scale_i64(1728)
}

/// Siegel function `g_r(τ)` by its q-product. Unreduced indices are allowed.
pub fn siegel(r: &FractionPair, pt: &ModularPoint) -> Result<ComplexValue> {
    if r.is_integral() {
        return Err(Error::DegenerateIndex(r.to_string()));
    }
    let prec = pt.prec();
    let r1 = r.r1();
    let r2 = r.r2();
    let half_b2 = bernoulli2(&r1) / 2u32;
    // exponent of the prefactor: 2πi·(B₂(r₁)/2)·τ + πi·r₂(r₁ − 1)
    let phase = (&r2 * Rational::from(&r1 - 1u32)) / 2u32;
    let mut pre = pt.tau.scale(&Float::with_val(prec, &half_b2));
    pre = pre + ComplexValue::from_real(Float::with_val(prec, &phase));
    let pre = two_pi_i(&pre).exp();

    let qz = two_pi_i(&r.point(&pt.tau)).exp();
    let qz_inv = qz.recip();
    let one = ComplexValue::one(prec);
    let shift = r1.clone().abs().ceil();
    let extra = shift.numer().to_usize().unwrap_or(usize::MAX - pt.terms - 1);
    let terms = pt.terms + extra + 1;
    let mut acc = &one - &qz;
    let mut a = &pt.q * &qz;
    let mut b = &pt.q * &qz_inv;
    for _ in 0..terms {
        acc = &acc * &(&(&one - &a) * &(&one - &b));
        a = &a * &pt.q;
        b = &b * &pt.q;
    }
    Ok(-(&pre * &acc))
}

/// Weierstrass ℘ for the lattice `[τ, 1]`.
pub fn wp(z: &ComplexValue, pt: &ModularPoint) -> Result<ComplexValue> {
    let prec = pt.prec();
    let tau = &pt.tau;
    let z = z.with_prec(prec);
    // Move z into |Im z| ≤ Im τ / 2 and |Re z| ≤ 1/2.
    let k = (Float::with_val(prec, z.im() / tau.im())).to_f64().round() as i64;
    let z = &z - &tau.scale_i64(k);
    let l = z.re().to_f64().round() as i64;
    let z = &z - &ComplexValue::from_f64(prec, l as f64, 0.0);
    let guard = pt.ctx.eps().sqrt();
    for m in -1i64..=1 {
        for n in -1i64..=1 {
            let lattice = &tau.scale_i64(m) + &ComplexValue::from_f64(prec, n as f64, 0.0);
            if z.dist(&lattice) < guard {
                return Err(Error::OnLattice);
            }
        }
    }
    let one = ComplexValue::one(prec);
    let u = two_pi_i(&z).exp();
    let u_inv = u.recip();
    let frac_sq = |w: &ComplexValue| -> ComplexValue {
        let den = &one - w;
        w * &den.square().recip()
    };
    let mut acc = ComplexValue::from_real(Float::with_val(prec, Rational::from((1, 12)))) + frac_sq(&u);
    let mut qn = pt.q.clone();
    for _ in 0..=pt.terms {
        let a = &qn * &u;
        let b = &qn * &u_inv;
        acc = acc + frac_sq(&a) + frac_sq(&b) - frac_sq(&qn).scale_i64(2);
        qn = &qn * &pt.q;
    }
    // (2πi)² = −4π²
    let four_pi2 = Float::with_val(prec, pt.ctx.pi().square()) * 4u32;
    Ok(-acc.scale(&four_pi2))
}

/// `℘′(r₁τ + r₂) = −g_{2r}·η⁶/g_r⁴`; exactly zero at 2-torsion.
pub fn wp_prime(r: &FractionPair, pt: &ModularPoint) -> Result<ComplexValue> {
    if r.is_integral() {
        return Err(Error::DegenerateIndex(r.to_string()));
    }
    if r.doubled().is_integral() {
        return Ok(ComplexValue::zero(pt.prec()));
    }
    let y = y_coordinate(r, pt)?;
    Ok(&y * &eta(pt).powi(6))
}

/// `y_r = −g_{2r}/g_r⁴`, zero at 2-torsion.
pub fn y_coordinate(r: &FractionPair, pt: &ModularPoint) -> Result<ComplexValue> {
    if r.is_integral() {
        return Err(Error::DegenerateIndex(r.to_string()));
    }
    if r.doubled().is_integral() {
        return Ok(ComplexValue::zero(pt.prec()));
    }
    let g2r = siegel(&r.doubled(), pt)?;
    let gr = siegel(r, pt)?;
    Ok(-(g2r.checked_div(&gr.powi(4), &pt.ctx)?))
}

/// Level-one data at a point, shared by every index evaluated there.
#[derive(Debug, Clone)]
pub struct LevelOne {
    pub eta: ComplexValue,
    pub g2: ComplexValue,
    pub g3: ComplexValue,
    pub delta: ComplexValue,
}

impl LevelOne {
    pub fn new(pt: &ModularPoint) -> Result<Self> {
        let (g2, g3) = eisenstein(pt)?;
        Ok(LevelOne {
            eta: eta(pt),
            g2,
            g3,
            delta: delta(pt),
        })
    }

    pub fn j(&self) -> ComplexValue {
        j_from(&self.g2, &self.delta)
    }

    /// `u = g₂³/η²⁴`.
    pub fn u(&self) -> ComplexValue {
        &self.g2.powi(3) * &self.eta.powi(24).recip()
    }

    /// `v = g₃/η¹²`.
    pub fn v(&self) -> ComplexValue {
        &self.g3 * &self.eta.powi(12).recip()
    }

    /// `x_r = g₂g₃℘(r₁τ + r₂)/Δ`.
    pub fn x(&self, r: &FractionPair, pt: &ModularPoint) -> Result<ComplexValue> {
        if r.is_integral() {
            return Err(Error::DegenerateIndex(r.to_string()));
        }
        let p = wp(&r.point(&pt.tau), pt)?;
        Ok(&(&self.g2 * &self.g3) * &(&p * &self.delta.recip()))
    }
}

/// The coordinates `(u, v, x, y)` of the point `r₁τ + r₂`.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub u: ComplexValue,
    pub v: ComplexValue,
    pub x: ComplexValue,
    pub y: ComplexValue,
}

impl Normalized {
    /// `u·v³·y² − (4x³ − u·v²·x − u·v⁴)` and the largest monomial magnitude.
    pub fn curve_residual(&self) -> (Float, Float) {
        let Normalized { u, v, x, y } = self;
        let v2 = v.square();
        let lhs = &(u * &v.powi(3)) * &y.square();
        let m1 = x.powi(3).scale_i64(4);
        let m2 = &(u * &v2) * x;
        let m3 = u * &v2.square();
        let res = &lhs - &(&(&m1 - &m2) - &m3);
        let scale = [lhs.abs(), m1.abs(), m2.abs(), m3.abs()]
            .into_iter()
            .fold(Float::new(u.prec()), |a, b| a.max(&b));
        (res.abs(), scale)
    }

    /// `u − 27v² − 1` and its monomial scale.
    pub fn unit_residual(&self) -> (Float, Float) {
        let one = ComplexValue::one(self.u.prec());
        let v27 = self.v.square().scale_i64(27);
        let res = &(&self.u - &v27) - &one;
        let scale = self.u.abs().max(&v27.abs()).max(&Float::with_val(self.u.prec(), 1));
        (res.abs(), scale)
    }
}

/// `(u, v, x_r, y_r)` at `τ`.
pub fn normalized(pt: &ModularPoint, r: &FractionPair) -> Result<Normalized> {
    let lvl = LevelOne::new(pt)?;
    normalized_with(&lvl, pt, r)
}

pub fn normalized_with(lvl: &LevelOne, pt: &ModularPoint, r: &FractionPair) -> Result<Normalized> {
    Ok(Normalized {
        u: lvl.u(),
        v: lvl.v(),
        x: lvl.x(r, pt)?,
        y: y_coordinate(r, pt)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256, 1e-40).unwrap()
    }

    fn rel(a: &ComplexValue, b: &ComplexValue) -> f64 {
        (a.dist(b) / b.abs()).to_f64()
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli2(&Rational::from(0)), Rational::from((1, 6)));
        assert_eq!(bernoulli2(&Rational::from((1, 2))), Rational::from((-1, 12)));
        let x = Rational::from((3, 7));
        assert_eq!(bernoulli2(&x), bernoulli2(&(Rational::from(1) - &x)));
        assert_eq!(siegel_order(&FractionPair::basic(5).unwrap()), Rational::from((1, 12)));
        assert_eq!(siegel_order(&FractionPair::new(3, 1, 6).unwrap()), Rational::from((-1, 24)));
        assert_eq!(siegel_order(&FractionPair::new(-3, 1, 6).unwrap()), Rational::from((-1, 24)));
    }

    #[test]
    fn cusp_orders() {
        let r = FractionPair::basic(8).unwrap();
        let inf = CuspData::new(Mat2::identity(), 1).unwrap();
        assert_eq!(y_cusp_order(&r, &inf).unwrap(), Rational::from((-1, 4)));
        let half = CuspData::new(Mat2::new(1, 0, 4, 1), 2).unwrap();
        assert_eq!(y_cusp_order(&r, &half).unwrap(), Rational::from((1, 2)));
        assert_eq!(half.cusp(), Some(Rational::from((1, 4))));
        assert!(y_cusp_order(&FractionPair::basic(2).unwrap(), &inf).is_err());
    }

    #[test]
    fn fraction_pair_parsing() {
        let r = FractionPair::parse("1/8, -3/8").unwrap();
        assert_eq!((r.p1, r.p2, r.n), (1, -3, 8));
        assert_eq!(r.reduced().p2, 5);
        assert!(FractionPair::parse("1/8,1/4").is_err());
        assert!(matches!(FractionPair::new(8, 16, 8), Err(Error::DegenerateIndex(_))));
    }

    #[test]
    fn eta_matches_delta() {
        let c = ctx();
        let pt = ModularPoint::from_f64(0.13, 1.21, &c).unwrap();
        let e = eta(&pt).powi(24);
        assert!(rel(&e, &delta(&pt)) < 1e-42);
        let (g2, g3) = eisenstein(&pt).unwrap();
        let disc = &g2.powi(3) - &g3.square().scale_i64(27);
        assert!(rel(&disc, &delta(&pt)) < 1e-45);
    }

    #[test]
    fn eta_at_i_against_gamma_quarter() {
        // classical η(i) = Γ(1/4) / (2 π^{3/4})
        let c = ctx();
        let pt = ModularPoint::from_f64(0.0, 1.0, &c).unwrap();
        let pi = c.pi();
        let gamma = Float::with_val(256, 0.25).gamma();
        let classical = gamma / (Float::with_val(256, pi.clone().pow(Float::with_val(256, 0.75))) * 2u32);
        let zeta8 = ComplexValue::root_of_unity(256, &Rational::from((1, 8)));
        let expect = zeta8.scale(&(Float::with_val(256, &pi * 2u32).sqrt() * classical));
        assert!(eta(&pt).dist(&expect) < 1e-42);
    }

    #[test]
    fn j_special_values() {
        let c = ctx();
        let i = ModularPoint::from_f64(0.0, 1.0, &c).unwrap();
        assert!(j(&i).unwrap().dist(&c.complex(1728.0, 0.0)) < 1e-38);
        let rho = ModularPoint::new(&ComplexValue::new(c.float(-0.5), c.float(3).sqrt() / 2u32), &c).unwrap();
        assert!(j(&rho).unwrap().abs() < 1e-38);
    }

    #[test]
    fn siegel_integer_shift_keeps_modulus() {
        let c = ctx();
        let pt = ModularPoint::from_f64(0.2, 1.1, &c).unwrap();
        let r = FractionPair::new(2, 3, 7).unwrap();
        let base = siegel(&r, &pt).unwrap().abs();
        for (a, b) in [(7, 0), (-7, 14), (14, -21), (0, 7)] {
            let s = FractionPair::new(r.p1 + a, r.p2 + b, 7).unwrap();
            let v = siegel(&s, &pt).unwrap().abs();
            assert!((Float::with_val(256, &v - &base) / &base).abs() < 1e-42, "shift {a},{b}");
        }
    }

    #[test]
    fn siegel_s_transform() {
        let c = ctx();
        let tau = c.complex(0.31, 1.4);
        let pt = ModularPoint::new(&tau, &c).unwrap();
        let spt = ModularPoint::new(&crate::matrix::S.apply(&tau), &c).unwrap();
        let r = FractionPair::new(1, 3, 5).unwrap();
        let lhs = siegel(&r, &spt).unwrap();
        let zeta = ComplexValue::root_of_unity(256, &Rational::from((9, 12)));
        let rhs = &zeta * &siegel(&FractionPair::new(3, -1, 5).unwrap(), &pt).unwrap();
        assert!(rel(&lhs, &rhs) < 1e-42);
    }

    #[test]
    fn wp_periodic_and_even() {
        let c = ctx();
        let pt = ModularPoint::from_f64(0.1, 1.3, &c).unwrap();
        let z = c.complex(0.23, 0.41);
        let base = wp(&z, &pt).unwrap();
        let shifted = &z + &pt.tau().clone();
        assert!(rel(&wp(&shifted, &pt).unwrap(), &base) < 1e-42);
        assert!(rel(&wp(&(&z + &c.complex(1.0, 0.0)), &pt).unwrap(), &base) < 1e-42);
        assert!(rel(&wp(&-&z, &pt).unwrap(), &base) < 1e-42);
        assert_eq!(wp(&c.complex(1.0, 0.0), &pt).unwrap_err(), Error::OnLattice);
    }

    #[test]
    fn weierstrass_cubic() {
        let c = ctx();
        let pt = ModularPoint::from_f64(0.0, 2.0, &c).unwrap();
        let r = FractionPair::new(3, 2, 10).unwrap();
        let p = wp(&r.point(pt.tau()), &pt).unwrap();
        let dp = wp_prime(&r, &pt).unwrap();
        let (g2, g3) = eisenstein(&pt).unwrap();
        let rhs = &(&p.powi(3).scale_i64(4) - &(&g2 * &p)) - &g3;
        let scale = p.powi(3).abs() * 4u32;
        assert!((dp.square().dist(&rhs) / scale).to_f64() < 1e-42);
    }

    #[test]
    fn two_torsion_is_zero() {
        let c = ctx();
        let pt = ModularPoint::from_f64(0.0, 1.5, &c).unwrap();
        assert!(wp_prime(&FractionPair::new(1, 0, 2).unwrap(), &pt).unwrap().is_zero());
        assert!(wp_prime(&FractionPair::new(2, 2, 4).unwrap(), &pt).unwrap().is_zero());
    }

    #[test]
    fn normalized_identities() {
        let c = ctx();
        let pt = ModularPoint::from_f64(0.3, 1.7, &c).unwrap();
        let r = FractionPair::new(1, 2, 7).unwrap();
        let n = normalized(&pt, &r).unwrap();
        let (res, scale) = n.curve_residual();
        assert!((res / scale).to_f64() < 1e-42);
        let (res, scale) = n.unit_residual();
        assert!((res / scale).to_f64() < 1e-42);
        let dp = wp_prime(&r, &pt).unwrap();
        assert!(rel(&(&n.y * &eta(&pt).powi(6)), &dp) < 1e-42);
    }
}
