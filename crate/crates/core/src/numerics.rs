//! Arbitrary-precision complex arithmetic and truncation control.
//!
//! Every evaluator in the crate works with a [`PrecisionContext`] (working
//! mantissa bits plus the target absolute error `eps`) and produces
//! [`ComplexValue`]s at that precision. Values are immutable once built and
//! all operations are deterministic functions of their inputs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Guard factor applied to `eps` when deciding where to cut a q-product.
pub const TAIL_GUARD_BITS: i32 = 16;

/// Working precision and error target shared by every evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionContext {
    bits: u32,
    eps: f64,
}

impl PrecisionContext {
    pub fn new(bits: u32, eps: f64) -> Result<Self> {
        if bits < 64 {
            return Err(Error::InvalidPrecision(format!("bits = {bits} < 64")));
        }
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::InvalidPrecision(format!("eps = {eps} must be positive")));
        }
        // eps >= 2^(16 - bits), compared in log2 so large `bits` do not underflow.
        if eps.log2() < f64::from(TAIL_GUARD_BITS) - f64::from(bits) {
            return Err(Error::InvalidPrecision(format!("eps = {eps:e} leaves no guard digits at {bits} bits")));
        }
        Ok(PrecisionContext { bits, eps })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Same `eps`, twice the mantissa.
    pub fn doubled(&self) -> Self {
        PrecisionContext {
            bits: self.bits * 2,
            eps: self.eps,
        }
    }

    pub fn float<T>(&self, val: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits, val)
    }

    pub fn rational(&self, val: &Rational) -> Float {
        Float::with_val(self.bits, val)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits, Constant::Pi)
    }

    pub fn eps_float(&self) -> Float {
        Float::with_val(self.bits, self.eps)
    }

    pub fn complex(&self, re: f64, im: f64) -> ComplexValue {
        ComplexValue::from_f64(self.bits, re, im)
    }
}

/// Smallest `M` with `|q|^M < eps * 2^-16`, where `|q| = exp(-2 pi im_tau)`.
pub fn truncation_terms(im_tau: f64, eps: f64) -> Result<usize> {
    if !(im_tau >= 0.1) {
        return Err(Error::ImTooSmall { im: im_tau });
    }
    let target = -eps.ln() + f64::from(TAIL_GUARD_BITS) * std::f64::consts::LN_2;
    let x = target / (2.0 * std::f64::consts::PI * im_tau);
    if !x.is_finite() || x < 0.0 {
        return Ok(1);
    }
    Ok(x.floor() as usize + 1)
}

/// Number of terms after which `weight * n^degree * |q|^n / (1 - |q|)` drops
/// below `exp(log_target)`; used for the divisor sums of Eisenstein series.
pub(crate) fn weighted_truncation_terms(im_tau: f64, log_target: f64, degree: u32, weight: f64) -> Result<usize> {
    if !(im_tau >= 0.1) {
        return Err(Error::ImTooSmall { im: im_tau });
    }
    let log_q = -2.0 * std::f64::consts::PI * im_tau;
    // n^degree |q|^n is decreasing once n > degree / |log q|.
    let mut n = ((f64::from(degree) / -log_q).ceil() as usize).max(1);
    loop {
        let log_term = weight.ln() + f64::from(degree) * (n as f64).ln() + n as f64 * log_q - (1.0 - log_q.exp()).ln();
        if log_term < log_target {
            return Ok(n);
        }
        n += 1;
    }
}

/// Complex number with MPFR real and imaginary parts.
#[derive(Clone, PartialEq)]
pub struct ComplexValue {
    re: Float,
    im: Float,
}

impl fmt::Debug for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.20e} {:+.20e}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_decimal_strings();
        write!(f, "{re} + {im}i")
    }
}

impl ComplexValue {
    pub fn new(re: Float, im: Float) -> Self {
        let prec = re.prec().max(im.prec());
        ComplexValue {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        ComplexValue { re, im }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        ComplexValue {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn zero(prec: u32) -> Self {
        ComplexValue {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        ComplexValue {
            re: Float::with_val(prec, 1),
            im: Float::new(prec),
        }
    }

    /// `i`.
    pub fn i(prec: u32) -> Self {
        ComplexValue {
            re: Float::new(prec),
            im: Float::with_val(prec, 1),
        }
    }

    /// `exp(i * angle)`.
    pub fn cis(angle: &Float) -> Self {
        let (s, c) = angle.clone().sin_cos(Float::new(angle.prec()));
        ComplexValue { re: c, im: s }
    }

    /// `exp(2 pi i * frac)` for an exact rational `frac`.
    pub fn root_of_unity(prec: u32, frac: &Rational) -> Self {
        let angle = Float::with_val(prec, Constant::Pi) * Float::with_val(prec, frac) * 2u32;
        ComplexValue::cis(&angle)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ComplexValue {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    pub fn norm_sqr(&self) -> Float {
        Float::with_val(self.prec(), self.re.square_ref()) + Float::with_val(self.prec(), self.im.square_ref())
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self) -> Float {
        self.im.clone().atan2(&self.re)
    }

    pub fn scale(&self, k: &Float) -> Self {
        ComplexValue {
            re: Float::with_val(self.prec(), &self.re * k),
            im: Float::with_val(self.prec(), &self.im * k),
        }
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        ComplexValue {
            re: Float::with_val(self.prec(), &self.re * k),
            im: Float::with_val(self.prec(), &self.im * k),
        }
    }

    /// Multiply by `i`.
    pub fn mul_i(&self) -> Self {
        ComplexValue {
            re: -self.im.clone(),
            im: self.re.clone(),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn exp(&self) -> Self {
        let modulus = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(self.prec()));
        ComplexValue {
            re: Float::with_val(self.prec(), &modulus * &c),
            im: modulus * s,
        }
    }

    /// `1 / self`; the caller guarantees `self != 0`.
    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        ComplexValue {
            re: Float::with_val(self.prec(), &self.re / &n),
            im: -Float::with_val(self.prec(), &self.im / &n),
        }
    }

    /// Division that refuses denominators with `|rhs| < eps`.
    pub fn checked_div(&self, rhs: &ComplexValue, ctx: &PrecisionContext) -> Result<Self> {
        if rhs.abs() < ctx.eps() {
            return Err(Error::NearZero("division"));
        }
        Ok(self * &rhs.recip())
    }

    /// Principal logarithm; refuses `|self| < eps`.
    pub fn ln(&self, ctx: &PrecisionContext) -> Result<Self> {
        if self.abs() < ctx.eps() {
            return Err(Error::NearZero("logarithm"));
        }
        Ok(self.ln_unchecked())
    }

    /// Principal logarithm without the magnitude guard (any nonzero value).
    pub fn ln_unchecked(&self) -> Self {
        ComplexValue {
            re: self.abs().ln(),
            im: self.arg(),
        }
    }

    /// Principal n-th root `exp(Log(z) / n)`; refuses `|self| < eps`.
    pub fn checked_root(&self, n: u32, ctx: &PrecisionContext) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("zeroth root".into()));
        }
        let log = self.ln(ctx)?;
        let inv = Float::with_val(self.prec(), 1) / n;
        Ok(log.scale(&inv).exp())
    }

    /// Integer power by repeated squaring; negative exponents invert.
    pub fn powi(&self, exp: i64) -> Self {
        let mut base = if exp < 0 { self.recip() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = ComplexValue::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// `|self - other|`.
    pub fn dist(&self, other: &ComplexValue) -> Float {
        (self - other).abs()
    }

    /// Distance scaled by the larger magnitude (absolute when both are below 1).
    pub fn rel_dist(&self, other: &ComplexValue) -> Float {
        let scale = self.abs().max(&other.abs()).max(&Float::with_val(self.prec(), 1));
        self.dist(other) / scale
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Decimal strings carrying every significant digit of the mantissa.
    pub fn to_decimal_strings(&self) -> (String, String) {
        (float_to_decimal(&self.re), float_to_decimal(&self.im))
    }

    /// Round to a different precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        ComplexValue {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }
}

/// Decimal rendering of a float with enough digits to round-trip.
pub fn float_to_decimal(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, None)
}

/// Nearest integer to `x` (ties away from zero), exact.
pub fn round_to_integer(x: &Float) -> Option<Integer> {
    let mut r = x.clone();
    r.round_mut();
    r.to_integer_round(Round::Nearest).map(|(i, _)| i)
}

/// `10^k` as a float, handy for tolerances far below f64 range.
pub fn pow10(prec: u32, k: i32) -> Float {
    Float::with_val(prec, 10).pow(k)
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a ComplexValue> for &'a ComplexValue {
            type Output = ComplexValue;
            fn $method(self, rhs: &'a ComplexValue) -> ComplexValue {
                let f: fn(&ComplexValue, &ComplexValue) -> ComplexValue = $body;
                f(self, rhs)
            }
        }
        impl $trait<ComplexValue> for ComplexValue {
            type Output = ComplexValue;
            fn $method(self, rhs: ComplexValue) -> ComplexValue {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a ComplexValue> for ComplexValue {
            type Output = ComplexValue;
            fn $method(self, rhs: &'a ComplexValue) -> ComplexValue {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<ComplexValue> for &'a ComplexValue {
            type Output = ComplexValue;
            fn $method(self, rhs: ComplexValue) -> ComplexValue {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| {
    let p = a.prec().max(b.prec());
    ComplexValue {
        re: Float::with_val(p, &a.re + &b.re),
        im: Float::with_val(p, &a.im + &b.im),
    }
});

binop!(Sub, sub, |a, b| {
    let p = a.prec().max(b.prec());
    ComplexValue {
        re: Float::with_val(p, &a.re - &b.re),
        im: Float::with_val(p, &a.im - &b.im),
    }
});

binop!(Mul, mul, |a, b| {
    let p = a.prec().max(b.prec());
    let re = Float::with_val(p, &a.re * &b.re) - Float::with_val(p, &a.im * &b.im);
    let im = Float::with_val(p, &a.re * &b.im) + Float::with_val(p, &a.im * &b.re);
    ComplexValue { re, im }
});

impl Neg for ComplexValue {
    type Output = ComplexValue;
    fn neg(self) -> ComplexValue {
        ComplexValue { re: -self.re, im: -self.im }
    }
}

impl Neg for &ComplexValue {
    type Output = ComplexValue;
    fn neg(self) -> ComplexValue {
        -(self.clone())
    }
}
