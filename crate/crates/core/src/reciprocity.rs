//! Explicit Shimura reciprocity for `K_(N)/K`: the group `W_{N,θ}`, its
//! action on indices and the Galois conjugates of singular values, labelled
//! by pairs `(α, Q)` with `α ∈ W_{N,θ}/{±1}` and `Q` a reduced form.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use crate::classfield::{beta_lift, Field, ReducedForm};
use crate::error::{Error, Result};
use crate::matrix::{eta2_multiplier_exp, gcd, lift_sl2, mod_inverse, Mat2};
use crate::numerics::{ComplexValue, PrecisionContext};
use crate::qseries::{siegel, y_coordinate, FractionPair, LevelOne, ModularPoint};

/// `(t − B·s, −C·s; s, t)` mod `N`, stored by its canonical `(t, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WElement {
    pub t: i64,
    pub s: i64,
    #[serde(skip)]
    pub n: i64,
    #[serde(skip)]
    pub matrix: Mat2,
}

impl WElement {
    pub fn new(field: &Field, n: i64, t: i64, s: i64) -> Result<Self> {
        let (t, s) = (t.rem_euclid(n), s.rem_euclid(n));
        let (nt, ns) = ((-t).rem_euclid(n), (-s).rem_euclid(n));
        let (t, s) = if (t, s) <= (nt, ns) { (t, s) } else { (nt, ns) };
        let matrix = Mat2::new(t - field.b_theta * s, -field.c_theta * s, s, t).reduce_mod(n);
        if !matrix.is_invertible_mod(n) {
            return Err(Error::NonInvertible {
                modulus: n,
                detail: format!("W element (t, s) = ({t}, {s})"),
            });
        }
        Ok(WElement { t, s, n, matrix })
    }

    pub fn identity(field: &Field, n: i64) -> Self {
        WElement::new(field, n, 1, 0).expect("identity is invertible")
    }
}

/// `W_{N,θ}/{±1}` in increasing canonical `(t, s)`.
pub fn w_group(field: &Field, n: i64) -> Result<Vec<WElement>> {
    if field.dk > -7 {
        return Err(Error::UnsupportedDiscriminant(field.dk));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("level {n} must be at least 2")));
    }
    let mut out = Vec::new();
    for t in 0..n {
        for s in 0..n {
            let det = t * t - field.b_theta * s * t + field.c_theta * s * s;
            if gcd(det, n) != 1 {
                continue;
            }
            let (nt, ns) = ((-t).rem_euclid(n), (-s).rem_euclid(n));
            if (t, s) <= (nt, ns) {
                out.push(WElement::new(field, n, t, s)?);
            }
        }
    }
    Ok(out)
}

/// `r·m` reduced to numerators in `[0, N)`.
pub fn act_index(r: &FractionPair, m: &Mat2) -> FractionPair {
    r.act(m).reduced()
}

/// Which singular value to conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Descriptor {
    /// `y_{(0,1/N)}^{12N} = g_{(0,2/N)}^{12N}/g_{(0,1/N)}^{48N}`.
    Y12N,
    /// `y_{(0,1/N)}^k`; `k` must be a multiple of `4/gcd(4, N)`.
    YPow(u32),
    /// `x_{(0,1/N)}`.
    X,
    /// `(x_{(0,1/N)}, y_{(0,1/N)}^{4/gcd(4,N)})`.
    Pair,
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Y12N => f.write_str("y12N"),
            Descriptor::YPow(k) => write!(f, "y{k}"),
            Descriptor::X => f.write_str("x"),
            Descriptor::Pair => f.write_str("pair"),
        }
    }
}

impl FromStr for Descriptor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "y12N" | "y12n" => Ok(Descriptor::Y12N),
            "x" => Ok(Descriptor::X),
            "pair" => Ok(Descriptor::Pair),
            _ => s
                .strip_prefix('y')
                .and_then(|k| k.parse::<u32>().ok())
                .filter(|&k| k > 0)
                .map(Descriptor::YPow)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown descriptor {s:?}"))),
        }
    }
}

/// Smallest power of `y_{(0,1/N)}` that lies in the level-`N` function field.
pub fn y_exponent_unit(n: i64) -> u32 {
    (4 / gcd(4, n)) as u32
}

impl Descriptor {
    fn validate(&self, n: i64) -> Result<()> {
        if let Descriptor::YPow(k) = self {
            if k % y_exponent_unit(n) != 0 {
                return Err(Error::InvalidArgument(format!(
                    "exponent {k} is not a multiple of {} at level {n}",
                    y_exponent_unit(n)
                )));
            }
        }
        Ok(())
    }
}

/// One element `(α, Q)` of `Gal(K_(N)/K)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GaloisLabel {
    pub alpha: WElement,
    pub form: ReducedForm,
    pub beta: Mat2,
}

impl GaloisLabel {
    /// `α·β_Q` mod `N`.
    pub fn matrix(&self) -> Mat2 {
        self.alpha.matrix.mul_mod(&self.beta, self.alpha.n)
    }
}

#[derive(Debug, Clone)]
pub enum ConjugateValue {
    Single(ComplexValue),
    Pair(ComplexValue, ComplexValue),
}

impl ConjugateValue {
    pub fn components(&self) -> Vec<&ComplexValue> {
        match self {
            ConjugateValue::Single(v) => vec![v],
            ConjugateValue::Pair(a, b) => vec![a, b],
        }
    }

    /// Largest relative difference over the components.
    pub fn rel_dist(&self, other: &ConjugateValue) -> f64 {
        self.components()
            .iter()
            .zip(other.components())
            .map(|(a, b)| a.rel_dist(b).to_f64())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct Conjugate {
    pub label: GaloisLabel,
    pub value: ConjugateValue,
}

/// Level-one data at `θ_Q`, shared by every label with that form.
pub struct FormPoint {
    pub form: ReducedForm,
    pub point: ModularPoint,
    pub beta: Mat2,
    level_one: Option<LevelOne>,
}

impl FormPoint {
    pub fn new(field: &Field, form: &ReducedForm, n: i64, ctx: &PrecisionContext, with_level_one: bool) -> Result<Self> {
        let point = ModularPoint::new(&form.cm_point(field.dk).to_complex(ctx.bits()), ctx)?;
        let beta = beta_lift(form, field.dk, n)?;
        let level_one = if with_level_one { Some(LevelOne::new(&point)?) } else { None };
        Ok(FormPoint {
            form: *form,
            point,
            beta,
            level_one,
        })
    }

    fn level_one(&mut self) -> Result<&LevelOne> {
        if self.level_one.is_none() {
            self.level_one = Some(LevelOne::new(&self.point)?);
        }
        Ok(self.level_one.as_ref().expect("just filled"))
    }
}

/// `(g_{2r}/g_r⁴)^{12N}` with `r = (0, 1/N)·m`.
fn y12n_value(m: &Mat2, n: i64, pt: &ModularPoint) -> Result<ComplexValue> {
    let r = act_index(&FractionPair { p1: 0, p2: 1, n }, m);
    if r.doubled().is_integral() {
        return Err(Error::DegenerateIndex(r.doubled().to_string()));
    }
    let g2r = siegel(&r.doubled().reduced(), pt)?;
    let gr = siegel(&r, pt)?;
    Ok((&g2r * &gr.powi(4).recip()).powi(12 * n))
}

/// `y_{(0,1/N)}^k` conjugated by `m ∈ GL₂(ℤ/N)`: write `m = diag(1, d)·γ`,
/// lift `γ` to `γ′ ∈ SL₂(ℤ)`, and evaluate `ε(γ′)^{−3k}·y_{(0,d/N)γ′}^k`.
fn ypow_value(m: &Mat2, n: i64, k: u32, pt: &ModularPoint) -> Result<ComplexValue> {
    let d = m.det_mod(n);
    let d_inv = mod_inverse(d, n).ok_or_else(|| Error::NonInvertible {
        modulus: n,
        detail: format!("{m}"),
    })?;
    let gamma = Mat2::new(m.a, m.b, m.c * d_inv, m.d * d_inv).reduce_mod(n);
    let lifted = lift_sl2(&gamma, n)?;
    let phi = eta2_multiplier_exp(&lifted);
    let r = FractionPair {
        p1: d * lifted.c,
        p2: d * lifted.d,
        n,
    }
    .reduced();
    let y = y_coordinate(&r, pt)?;
    let root = ComplexValue::root_of_unity(pt.prec(), &Rational::from(((-3 * i64::from(k) * phi).rem_euclid(12), 12)));
    Ok(&root * &y.powi(i64::from(k)))
}

fn x_value(m: &Mat2, n: i64, fp: &mut FormPoint) -> Result<ComplexValue> {
    let r = act_index(&FractionPair { p1: 0, p2: 1, n }, m);
    let point = fp.point.clone();
    fp.level_one()?.x(&r, &point)
}

/// The descriptor's value conjugated by the matrix `m` at the CM point of `fp`.
pub fn conjugate_at(fp: &mut FormPoint, n: i64, descriptor: Descriptor, m: &Mat2) -> Result<ConjugateValue> {
    descriptor.validate(n)?;
    let m = m.reduce_mod(n);
    Ok(match descriptor {
        Descriptor::Y12N => ConjugateValue::Single(y12n_value(&m, n, &fp.point)?),
        Descriptor::YPow(k) => ConjugateValue::Single(ypow_value(&m, n, k, &fp.point)?),
        Descriptor::X => ConjugateValue::Single(x_value(&m, n, fp)?),
        Descriptor::Pair => {
            let x = x_value(&m, n, fp)?;
            let y = ypow_value(&m, n, y_exponent_unit(n), &fp.point)?;
            ConjugateValue::Pair(x, y)
        }
    })
}

/// Every label `(α, Q)`, ordered by form and then by canonical `(t, s)`.
pub fn galois_labels(field: &Field, n: i64) -> Result<Vec<GaloisLabel>> {
    let w = w_group(field, n)?;
    let mut out = Vec::with_capacity(w.len() * field.h);
    for form in field.forms() {
        let beta = beta_lift(form, field.dk, n)?;
        for alpha in &w {
            let label = GaloisLabel {
                alpha: *alpha,
                form: *form,
                beta,
            };
            debug_assert!(label.matrix().is_invertible_mod(n));
            out.push(label);
        }
    }
    Ok(out)
}

/// All Galois conjugates of the descriptor's singular value over `K`.
pub fn conjugate_values(field: &Field, n: i64, descriptor: Descriptor, ctx: &PrecisionContext) -> Result<Vec<Conjugate>> {
    descriptor.validate(n)?;
    let labels = galois_labels(field, n)?;
    let needs_level_one = matches!(descriptor, Descriptor::X | Descriptor::Pair);
    let points: Vec<FormPoint> = field
        .forms()
        .par_iter()
        .map(|f| FormPoint::new(field, f, n, ctx, needs_level_one))
        .collect::<Result<_>>()?;
    labels
        .par_iter()
        .map(|label| {
            let idx = field.forms().iter().position(|f| *f == label.form).expect("label form comes from field");
            let src = &points[idx];
            // level-one data was filled above, so this clone never recomputes it
            let mut fp = FormPoint {
                form: src.form,
                point: src.point.clone(),
                beta: src.beta,
                level_one: src.level_one.clone(),
            };
            let value = conjugate_at(&mut fp, n, descriptor, &label.matrix())?;
            Ok(Conjugate { label: *label, value })
        })
        .collect()
}

/// `g_{(0,1/N)}(θ)^{12N}`, the invariant of the unit ray class.
pub fn siegel_ramachandra_unit(field: &Field, n: i64, ctx: &PrecisionContext) -> Result<ComplexValue> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("level {n} must be at least 2")));
    }
    let pt = ModularPoint::new(&field.theta(ctx.bits()), ctx)?;
    Ok(siegel(&FractionPair::basic(n)?, &pt)?.powi(12 * n))
}
