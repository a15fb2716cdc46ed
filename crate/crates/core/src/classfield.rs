//! Imaginary quadratic field data: θ, reduced forms, CM points, the β
//! matrices of the reciprocity law, prime splitting and ray class degrees
//! for conductors `N·O_K`.

use std::collections::BTreeMap;
use std::fmt;

use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{crt, factorize, gcd, Mat2};
use crate::numerics::ComplexValue;

/// `K = ℚ(√d_K)` with `O_K = [θ, 1]` and `θ² + B·θ + C = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Field {
    pub dk: i64,
    pub b_theta: i64,
    pub c_theta: i64,
    pub h: usize,
    #[serde(skip)]
    forms: Vec<ReducedForm>,
}

impl Field {
    /// `θ` as an exact string.
    pub fn theta_string(&self) -> String {
        if self.b_theta == 1 {
            format!("(-1+sqrt({}))/2", self.dk)
        } else {
            format!("sqrt({})/2", self.dk)
        }
    }

    /// `θ` as a complex number.
    pub fn theta(&self, prec: u32) -> ComplexValue {
        self.principal_form().cm_point(self.dk).to_complex(prec)
    }

    pub fn forms(&self) -> &[ReducedForm] {
        &self.forms
    }

    pub fn principal_form(&self) -> ReducedForm {
        self.forms[0]
    }

    /// Real and imaginary parts of θ in f64, for coefficient recognition.
    pub fn theta_f64(&self) -> (f64, f64) {
        (-(self.b_theta as f64) / 2.0, (-self.dk as f64).sqrt() / 2.0)
    }

    fn require_large(&self) -> Result<()> {
        if self.dk > -7 {
            return Err(Error::UnsupportedDiscriminant(self.dk));
        }
        Ok(())
    }
}

/// A reduced primitive positive definite form `aX² + bXY + cY²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ReducedForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for ReducedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

impl ReducedForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let ReducedForm { a, b, c } = *self;
        let shape = (-a < b && b <= a && a < c) || (0 <= b && b <= a && a == c);
        shape && gcd(gcd(a, b), c) == 1
    }

    pub fn cm_point(&self, dk: i64) -> CmPoint {
        CmPoint { a: self.a, b: self.b, dk }
    }
}

/// The root `(−b + √d_K)/(2a)` of a form, kept exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CmPoint {
    pub a: i64,
    pub b: i64,
    pub dk: i64,
}

impl fmt::Display for CmPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+sqrt({}))/({})", -self.b, self.dk, 2 * self.a)
    }
}

impl Serialize for CmPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl CmPoint {
    pub fn to_complex(&self, prec: u32) -> ComplexValue {
        let two_a = Float::with_val(prec, 2 * self.a);
        let re = Float::with_val(prec, -self.b) / &two_a;
        let im = Float::with_val(prec, -self.dk).sqrt() / &two_a;
        ComplexValue::new(re, im)
    }
}

fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Whether `d` is a negative fundamental discriminant.
pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let m = d.unsigned_abs();
    match d.rem_euclid(4) {
        1 => is_squarefree(m),
        0 => {
            let q = d / 4;
            matches!(q.rem_euclid(4), 2 | 3) && is_squarefree(q.unsigned_abs())
        }
        _ => false,
    }
}

pub fn make_field(dk: i64) -> Result<Field> {
    if dk >= 0 {
        return Err(Error::NotImaginary(dk));
    }
    if !is_fundamental(dk) {
        return Err(Error::NotFundamental(dk));
    }
    let (b_theta, c_theta) = if dk.rem_euclid(4) == 0 { (0, -dk / 4) } else { (1, (1 - dk) / 4) };
    let forms = reduced_forms(dk)?;
    Ok(Field {
        dk,
        b_theta,
        c_theta,
        h: forms.len(),
        forms,
    })
}

/// All reduced forms of discriminant `dk`, ordered by `a` then `b`.
pub fn reduced_forms(dk: i64) -> Result<Vec<ReducedForm>> {
    if dk >= 0 {
        return Err(Error::NotImaginary(dk));
    }
    if !is_fundamental(dk) {
        return Err(Error::NotFundamental(dk));
    }
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -dk {
        for b in (-a + 1)..=a {
            let num = b * b - dk;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = ReducedForm { a, b, c: num / (4 * a) };
            if f.is_reduced() {
                out.push(f);
            }
        }
        a += 1;
    }
    Ok(out)
}

/// β_p for each prime `p` in `primes`.
pub fn beta_matrices(q: &ReducedForm, dk: i64, primes: &[i64]) -> BTreeMap<i64, Mat2> {
    let ReducedForm { a, b, c } = *q;
    let even = dk.rem_euclid(4) == 0;
    primes
        .iter()
        .map(|&p| {
            let m = if a % p != 0 {
                if even {
                    Mat2::new(a, b / 2, 0, 1)
                } else {
                    Mat2::new(a, (b - 1) / 2, 0, 1)
                }
            } else if c % p != 0 {
                if even {
                    Mat2::new(-b / 2, -c, 1, 0)
                } else {
                    Mat2::new((-b - 1) / 2, -c, 1, 0)
                }
            } else if even {
                Mat2::new(-b / 2 - a, -b / 2 - c, 1, -1)
            } else {
                Mat2::new((-b - 1) / 2 - a, (1 - b) / 2 - c, 1, -1)
            };
            (p, m)
        })
        .collect()
}

/// The matrix `β_Q` mod `n`, congruent to β_p modulo every prime power of `n`.
pub fn beta_lift(q: &ReducedForm, dk: i64, n: i64) -> Result<Mat2> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("level {n} must be at least 2")));
    }
    let parts: Vec<(i64, i64)> = factorize(n as u64).iter().map(|&(p, e)| (p as i64, (p as i64).pow(e))).collect();
    let primes: Vec<i64> = parts.iter().map(|&(p, _)| p).collect();
    let betas = beta_matrices(q, dk, &primes);
    let entry = |f: fn(&Mat2) -> i64| crt(&parts.iter().map(|&(p, pe)| (f(&betas[&p]), pe)).collect::<Vec<_>>());
    let lifted = Mat2::new(entry(|m| m.a), entry(|m| m.b), entry(|m| m.c), entry(|m| m.d));
    if !lifted.is_invertible_mod(n) {
        return Err(Error::NonInvertible {
            modulus: n,
            detail: format!("beta lift {lifted} for form {q}"),
        });
    }
    Ok(lifted)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Splitting::Split => "split",
            Splitting::Inert => "inert",
            Splitting::Ramified => "ramified",
        })
    }
}

fn pow_mod(mut b: i64, mut e: i64, m: i64) -> i64 {
    let mut acc = 1i64;
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Kronecker symbol `(d | p)` for a prime `p`.
pub fn kronecker(d: i64, p: i64) -> i64 {
    if d.rem_euclid(p) == 0 {
        return 0;
    }
    if p == 2 {
        return if matches!(d.rem_euclid(8), 1 | 7) { 1 } else { -1 };
    }
    if pow_mod(d, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn splitting(p: i64, dk: i64) -> Splitting {
    match kronecker(dk, p) {
        0 => Splitting::Ramified,
        1 => Splitting::Split,
        _ => Splitting::Inert,
    }
}

/// A prime ideal power `𝔭^e` dividing `N·O_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdealFactor {
    pub p: i64,
    pub splitting: Splitting,
    pub e: u32,
    pub norm: i64,
}

impl IdealFactor {
    /// `φ(𝔭^e) = (N𝔭 − 1)·N𝔭^{e−1}`.
    pub fn phi(&self) -> u64 {
        let nm = self.norm as u64;
        (nm - 1) * nm.pow(self.e - 1)
    }

    /// Exponent of 𝔭 in `2·O_K`.
    fn exponent_in_two(&self) -> u32 {
        match (self.p, self.splitting) {
            (2, Splitting::Ramified) => 2,
            (2, _) => 1,
            _ => 0,
        }
    }
}

/// Prime-ideal factorization of `N·O_K`; a split prime contributes two factors.
pub fn ideal_factors(dk: i64, n: i64) -> Vec<IdealFactor> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    for (p, k) in factorize(n as u64) {
        let p = p as i64;
        match splitting(p, dk) {
            Splitting::Split => {
                let f = IdealFactor {
                    p,
                    splitting: Splitting::Split,
                    e: k,
                    norm: p,
                };
                out.push(f);
                out.push(f);
            }
            Splitting::Inert => out.push(IdealFactor {
                p,
                splitting: Splitting::Inert,
                e: k,
                norm: p * p,
            }),
            Splitting::Ramified => out.push(IdealFactor {
                p,
                splitting: Splitting::Ramified,
                e: 2 * k,
                norm: p,
            }),
        }
    }
    out
}

/// `[K_𝔣 : K]` for the ideal `𝔣 = ∏ factors`.
pub fn degree_of_ideal(h: usize, factors: &[IdealFactor]) -> u64 {
    let phi: u64 = factors.iter().map(IdealFactor::phi).product();
    // w(𝔣) = 2 exactly when −1 ≡ 1 mod 𝔣, i.e. 𝔣 | 2·O_K.
    let divides_two = factors.iter().all(|f| f.exponent_in_two() >= f.e);
    let w = if divides_two { 2 } else { 1 };
    h as u64 * phi * w / 2
}

/// `[K_(N) : K]` for `d_K ≤ −7`.
pub fn ray_class_degree(field: &Field, n: i64) -> Result<u64> {
    field.require_large()?;
    if n < 1 {
        return Err(Error::InvalidArgument(format!("level {n} must be positive")));
    }
    Ok(degree_of_ideal(field.h, &ideal_factors(field.dk, n)))
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorContribution {
    pub p: i64,
    pub splitting: Splitting,
    pub e: u32,
    pub phi: u64,
    /// `[K_{𝔣·𝔭^{−e}} : K]`.
    pub sub_degree: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub holds: bool,
    pub degree: u64,
    /// `2·Σ_k [K_{𝔣𝔭_k^{−e_k}} : K]`.
    pub bound: u64,
    /// `1/2 > Σ 1/φ(𝔭_k^{e_k})`, only for two or more prime factors.
    pub reciprocal_test: Option<bool>,
    pub factors: Vec<FactorContribution>,
}

/// Whether `[K_𝔣:K] > 2·Σ_k [K_{𝔣𝔭_k^{−e_k}}:K]` for `𝔣 = N·O_K`.
pub fn check_hypothesis(field: &Field, n: i64) -> Result<HypothesisReport> {
    let degree = ray_class_degree(field, n)?;
    let factors = ideal_factors(field.dk, n);
    let contributions: Vec<FactorContribution> = (0..factors.len())
        .map(|k| {
            let rest: Vec<IdealFactor> = factors.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, f)| *f).collect();
            let f = factors[k];
            FactorContribution {
                p: f.p,
                splitting: f.splitting,
                e: f.e,
                phi: f.phi(),
                sub_degree: degree_of_ideal(field.h, &rest),
            }
        })
        .collect();
    let bound = 2 * contributions.iter().map(|c| c.sub_degree).sum::<u64>();
    let reciprocal_test = (factors.len() >= 2).then(|| {
        // 1/2 > Σ 1/φ_k  ⟺  ∏φ > 2·Σ_k ∏_{i≠k} φ_i
        let prod: u128 = factors.iter().map(|f| f.phi() as u128).product();
        let sum: u128 = factors.iter().map(|f| prod / f.phi() as u128).sum();
        prod > 2 * sum
    });
    Ok(HypothesisReport {
        holds: n > 1 && degree > bound,
        degree,
        bound,
        reciprocal_test,
        factors: contributions,
    })
}
