//! Integer 2×2 matrices and the congruence arithmetic behind index actions.

use std::fmt;

use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::ComplexValue;

/// `(a b; c d)` with integer entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

pub const S: Mat2 = Mat2 { a: 0, b: -1, c: 1, d: 0 };
pub const T: Mat2 = Mat2 { a: 1, b: 1, c: 0, d: 1 };

impl Mat2 {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub const fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    pub const fn scalar(k: i64) -> Self {
        Mat2::new(k, 0, 0, k)
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(-self.a, -self.b, -self.c, -self.d)
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse_sl2(&self) -> Mat2 {
        debug_assert_eq!(self.det(), 1);
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    /// Entries reduced to `[0, n)`.
    pub fn reduce_mod(&self, n: i64) -> Mat2 {
        Mat2::new(self.a.rem_euclid(n), self.b.rem_euclid(n), self.c.rem_euclid(n), self.d.rem_euclid(n))
    }

    pub fn mul_mod(&self, o: &Mat2, n: i64) -> Mat2 {
        self.mul(o).reduce_mod(n)
    }

    pub fn det_mod(&self, n: i64) -> i64 {
        self.det().rem_euclid(n)
    }

    pub fn is_invertible_mod(&self, n: i64) -> bool {
        gcd(self.det(), n) == 1
    }

    /// Inverse modulo `n`, entries in `[0, n)`.
    pub fn inverse_mod(&self, n: i64) -> Result<Mat2> {
        let inv = mod_inverse(self.det(), n).ok_or_else(|| Error::NonInvertible {
            modulus: n,
            detail: format!("det of {self} is {}", self.det()),
        })?;
        Ok(Mat2::new(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv).reduce_mod(n))
    }

    /// Möbius action `(aτ + b) / (cτ + d)`.
    pub fn apply(&self, tau: &ComplexValue) -> ComplexValue {
        let num = tau.scale_i64(self.a) + ComplexValue::from_real(Float::with_val(tau.prec(), self.b));
        let den = tau.scale_i64(self.c) + ComplexValue::from_real(Float::with_val(tau.prec(), self.d));
        &num * &den.recip()
    }

    /// `cτ + d`.
    pub fn automorphy(&self, tau: &ComplexValue) -> ComplexValue {
        tau.scale_i64(self.c) + ComplexValue::from_real(Float::with_val(tau.prec(), self.d))
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Returns `(g, x, y)` with `x·a + y·b = g = gcd(a, b) ≥ 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i64, 0i64);
    let (mut y0, mut y1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

pub fn mod_inverse(a: i64, n: i64) -> Option<i64> {
    if n == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a.rem_euclid(n), n);
    (g == 1).then(|| x.rem_euclid(n))
}

/// Prime factorization as `(p, e)` pairs in increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Solve `x ≡ r_i mod m_i` for pairwise coprime moduli; result in `[0, ∏m_i)`.
pub fn crt(residues: &[(i64, i64)]) -> i64 {
    let mut x = 0i64;
    let mut m = 1i64;
    for &(r, mi) in residues {
        let inv = mod_inverse(m, mi).expect("CRT moduli must be coprime");
        let t = ((r - x).rem_euclid(mi) * inv).rem_euclid(mi);
        x += m * t;
        m *= mi;
    }
    x.rem_euclid(m)
}

/// Lift `m ∈ SL₂(ℤ/n)` to `SL₂(ℤ)`.
pub fn lift_sl2(m: &Mat2, n: i64) -> Result<Mat2> {
    let m = m.reduce_mod(n);
    if m.det_mod(n) != 1 % n {
        return Err(Error::NonInvertible {
            modulus: n,
            detail: format!("{m} has det != 1"),
        });
    }
    if n == 1 {
        return Ok(Mat2::identity());
    }
    let c = if m.c == 0 { n } else { m.c };
    let mut d = m.d;
    while gcd(c, d) != 1 {
        d += n;
    }
    let (_, x, y) = ext_gcd(c, d);
    // y·d - (-x)·c = 1
    let (a0, b0) = (y, -x);
    let k = ((m.a - a0) * x + (m.b - b0) * y).rem_euclid(n);
    let lifted = Mat2::new(a0 + k * c, b0 + k * d, c, d);
    debug_assert_eq!(lifted.det(), 1);
    debug_assert_eq!(lifted.reduce_mod(n), m);
    Ok(lifted)
}

/// Exponent `φ(γ) mod 12` of the η² multiplier:
/// `η(γτ)² = ζ₁₂^φ(γ) · (cτ + d) · η(τ)²` for `γ ∈ SL₂(ℤ)`.
pub fn eta2_multiplier_exp(g: &Mat2) -> i64 {
    assert_eq!(g.det(), 1, "multiplier needs det 1: {g}");
    let mut m = *g;
    let mut phi = 0i64;
    while m.c != 0 {
        // m = T^k S m' with |lower-left of m'| < |c|
        let k = m.a.div_euclid(m.c);
        let a1 = m.a - k * m.c;
        let b1 = m.b - k * m.d;
        m = Mat2::new(m.c, m.d, -a1, -b1);
        phi += k + 9;
    }
    phi += if m.a == 1 { m.b } else { 6 - m.b };
    phi.rem_euclid(12)
}

/// Write `tau = γ·w` with `w` in the standard fundamental domain.
pub fn reduce_to_fundamental(tau: &ComplexValue) -> (ComplexValue, Mat2) {
    // g accumulates w = g·tau; γ = g⁻¹.
    let mut g = Mat2::identity();
    let mut w = tau.clone();
    for _ in 0..10_000 {
        let (re, _) = w.to_f64_pair();
        let k = re.round() as i64;
        if k != 0 {
            let shift = Mat2::new(1, -k, 0, 1);
            g = shift.mul(&g);
            w = g.apply(tau);
        }
        if w.norm_sqr() < 1.0 - 1e-12 {
            g = S.mul(&g);
            w = g.apply(tau);
        } else {
            break;
        }
    }
    (w, g.inverse_sl2())
}
