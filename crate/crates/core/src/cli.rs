//! The `rayclass` command line.
//!
//! Every command prints one JSON document (or a flat text rendering of it)
//! that embeds the run configuration. Exit codes: 0 success or passing
//! check, 1 failed check, 2 usage or validation error, 3 numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Float;
use serde_json::{json, Map, Value};

use crate::classfield::{check_hypothesis, ideal_factors, make_field, ray_class_degree, Field};
use crate::error::{Error, Result};
use crate::numerics::{ComplexValue, PrecisionContext};
use crate::qseries::{self, FractionPair, LevelOne, ModularPoint};
use crate::reciprocity::{conjugate_values, ConjugateValue, Descriptor};
use crate::verify::{self, CheckReport, Polynomial};
use crate::TOOL_VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "rayclass", version, about = "Siegel functions, Shimura reciprocity and ray class invariants")]
pub struct Cli {
    #[command(flatten)]
    pub config: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Working mantissa precision in bits.
    #[arg(long, global = true, default_value_t = 256)]
    pub precision_bits: u32,
    /// Target absolute error of results.
    #[arg(long, global = true, default_value_t = 1e-40)]
    pub eps: f64,
    /// Largest denominator tried when recognizing coefficients.
    #[arg(long, global = true, default_value_t = 48)]
    pub den_max: u32,
    /// Relative tolerance for accepting a recognized coefficient.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub recog_tol: f64,
    /// Worker threads, or "auto".
    #[arg(long, global = true, env = "RAYCLASS_THREADS", default_value = "auto")]
    pub threads: String,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    /// Include wall-clock time in the output (breaks byte-for-byte reproducibility).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalFn {
    Eta,
    G2,
    G3,
    Delta,
    J,
    Siegel,
    Wp,
    WpPrime,
    U,
    V,
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Curve,
    Surface,
    Lemma51,
    Lemma52,
    Tbound,
    Generation,
    Elliptic4,
    Hypothesis,
    UnitIdentity,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a modular function at a point.
    Eval {
        #[arg(value_enum)]
        function: EvalFn,
        /// The point as "re,im".
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        /// Index as "p1/N,p2/N" (siegel, wp, wp-prime, x, y).
        #[arg(long, allow_hyphen_values = true)]
        r: Option<String>,
    },
    /// Reduced forms of a discriminant.
    Forms {
        #[arg(long, allow_hyphen_values = true)]
        dk: i64,
    },
    /// Field data for a discriminant.
    Field {
        #[arg(long, allow_hyphen_values = true)]
        dk: i64,
    },
    /// Degree of the ray class field of conductor N.
    Degree {
        #[arg(long, allow_hyphen_values = true)]
        dk: i64,
        #[arg(long)]
        level: i64,
    },
    /// All Galois conjugates of a singular value.
    Conjugates {
        #[arg(long, allow_hyphen_values = true)]
        dk: i64,
        #[arg(long)]
        level: i64,
        /// y12N, y<k>, x or pair.
        #[arg(long, default_value = "y12N")]
        descriptor: String,
    },
    /// Minimal polynomial over K of a singular value.
    Minpoly {
        #[arg(long, allow_hyphen_values = true)]
        dk: i64,
        #[arg(long)]
        level: i64,
        /// y12N, y<k> or x.
        #[arg(long, default_value = "x")]
        descriptor: String,
    },
    /// Hilbert class polynomial.
    Hcp {
        #[arg(long, allow_hyphen_values = true)]
        dk: i64,
    },
    /// Run one numerical check.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        #[arg(long, allow_hyphen_values = true)]
        dk: Option<i64>,
        #[arg(long)]
        level: Option<i64>,
        /// Point for the surface check, "re,im".
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
        /// Form coefficient a for lemma51 ("D" for the upper bound).
        #[arg(long)]
        a: Option<String>,
        /// Exponent X for lemma51.
        #[arg(long)]
        x: Option<f64>,
        /// Descriptor for the generation check.
        #[arg(long, default_value = "pair")]
        descriptor: String,
        /// Allow curve checks outside the theorem's range.
        #[arg(long)]
        relaxed: bool,
    },
}

/// Run with the given argument vector; returns the exit code and the text to print.
pub fn execute<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.to_string());
        }
    };
    let format = cli.config.output;
    match dispatch(&cli) {
        Ok((payload, code)) => (code, render(&payload, format)),
        Err(err) => {
            let code = if err.is_numerical() { EXIT_NUMERICAL } else { EXIT_USAGE };
            let payload = json!({ "error": err.to_string(), "tool_version": TOOL_VERSION });
            (code, render(&payload, format))
        }
    }
}

/// Entry point for the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (code, text) = execute(args);
    // a closed pipe on the reader's side is not our error
    if code == EXIT_USAGE && !text.starts_with('{') {
        let _ = write!(std::io::stderr(), "{text}");
    } else {
        let _ = writeln!(std::io::stdout(), "{}", text.trim_end());
    }
    code
}

fn render(payload: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(payload).expect("serializable"),
        OutputFormat::Text => {
            let mut out = String::new();
            if let Value::Object(map) = payload {
                for (k, v) in map {
                    match v {
                        Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                        other => out.push_str(&format!("{k}: {other}\n")),
                    }
                }
            } else {
                out.push_str(&payload.to_string());
            }
            out
        }
    }
}

fn configure_threads(spec: &str) -> Result<()> {
    if spec == "auto" {
        return Ok(());
    }
    let n: usize = spec
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidArgument(format!("threads must be a positive integer or auto, got {spec:?}")))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn complex_json(z: &ComplexValue) -> Value {
    let (re, im) = z.to_decimal_strings();
    json!([re, im])
}

fn parse_tau(s: &str, prec: u32) -> Result<ComplexValue> {
    let bad = || Error::InvalidArgument(format!("cannot parse point {s:?}; expected re,im"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let re = Float::parse(re.trim()).map_err(|_| bad())?;
    let im = Float::parse(im.trim()).map_err(|_| bad())?;
    Ok(ComplexValue::new(Float::with_val(prec, re), Float::with_val(prec, im)))
}

fn require<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidArgument(format!("--{what} is required here")))
}

fn envelope(cfg: &GlobalOpts, dk: Option<i64>, level: Option<i64>, result: Value) -> Value {
    let mut map = Map::new();
    map.insert("dk".into(), json!(dk));
    map.insert("level".into(), json!(level));
    map.insert("precision_bits".into(), json!(cfg.precision_bits));
    map.insert("eps".into(), json!(format!("{:e}", cfg.eps)));
    map.insert("tool_version".into(), json!(TOOL_VERSION));
    map.insert("result".into(), result);
    Value::Object(map)
}

fn dispatch(cli: &Cli) -> Result<(Value, i32)> {
    let cfg = &cli.config;
    configure_threads(&cfg.threads)?;
    let ctx = PrecisionContext::new(cfg.precision_bits, cfg.eps)?;
    let start = Instant::now();
    let (dk, level, result, code) = match &cli.command {
        Command::Eval { function, tau, r } => {
            let tau = parse_tau(tau, ctx.bits())?;
            let r = r.as_deref().map(FractionPair::parse).transpose()?;
            let value = eval(*function, &tau, r.as_ref(), &ctx)?;
            let mut res = json!({ "function": format!("{function:?}").to_lowercase(), "value": complex_json(&value) });
            if let Some(r) = r {
                res["r"] = json!([format!("{}/{}", r.p1, r.n), format!("{}/{}", r.p2, r.n)]);
            }
            (None, None, res, EXIT_OK)
        }
        Command::Forms { dk } => {
            let field = make_field(*dk)?;
            let forms: Vec<Value> = field
                .forms()
                .iter()
                .map(|f| json!({ "a": f.a, "b": f.b, "c": f.c, "theta_Q": f.cm_point(*dk).to_string() }))
                .collect();
            (Some(*dk), None, Value::Array(forms), EXIT_OK)
        }
        Command::Field { dk } => {
            let field = make_field(*dk)?;
            let res = json!({ "theta": field.theta_string(), "h": field.h, "B": field.b_theta, "C": field.c_theta });
            (Some(*dk), None, res, EXIT_OK)
        }
        Command::Degree { dk, level } => {
            let field = make_field(*dk)?;
            let degree = ray_class_degree(&field, *level)?;
            let factorization: Vec<Value> = ideal_factors(*dk, *level)
                .iter()
                .map(|f| json!({ "p": f.p, "splitting": f.splitting, "e": f.e, "norm": f.norm, "phi": f.phi() }))
                .collect();
            (
                Some(*dk),
                Some(*level),
                json!({ "degree": degree, "factorization": factorization }),
                EXIT_OK,
            )
        }
        Command::Conjugates { dk, level, descriptor } => {
            let field = make_field(*dk)?;
            let descriptor: Descriptor = descriptor.parse()?;
            let conj = conjugate_values(&field, *level, descriptor, &ctx)?;
            let list: Vec<Value> = conj
                .iter()
                .map(|c| {
                    let l = &c.label;
                    let value = match &c.value {
                        ConjugateValue::Single(v) => complex_json(v),
                        ConjugateValue::Pair(x, y) => json!({ "x": complex_json(x), "y": complex_json(y) }),
                    };
                    json!({ "t": l.alpha.t, "s": l.alpha.s, "form": [l.form.a, l.form.b, l.form.c], "value": value })
                })
                .collect();
            let res = json!({ "descriptor": descriptor.to_string(), "count": list.len(), "conjugates": list });
            (Some(*dk), Some(*level), res, EXIT_OK)
        }
        Command::Minpoly { dk, level, descriptor } => {
            let field = make_field(*dk)?;
            let descriptor: Descriptor = descriptor.parse()?;
            if descriptor == Descriptor::Pair {
                return Err(Error::InvalidArgument("minpoly needs a single-valued descriptor".into()));
            }
            let values: Vec<ComplexValue> = conjugate_values(&field, *level, descriptor, &ctx)?
                .into_iter()
                .map(|c| match c.value {
                    ConjugateValue::Single(v) => v,
                    ConjugateValue::Pair(v, _) => v,
                })
                .collect();
            let poly = verify::minpoly(&values, &field, cfg.den_max, cfg.recog_tol, &ctx)?;
            let mut res = polynomial_json(&poly, &field, &values);
            res["descriptor"] = json!(descriptor.to_string());
            (Some(*dk), Some(*level), res, EXIT_OK)
        }
        Command::Hcp { dk } => {
            let field = make_field(*dk)?;
            let poly = verify::hilbert_class_poly(&field, &ctx, cfg.recog_tol)?;
            (Some(*dk), None, polynomial_json(&poly, &field, &[]), EXIT_OK)
        }
        Command::Check {
            kind,
            dk,
            level,
            tau,
            a,
            x,
            descriptor,
            relaxed,
        } => {
            let report = run_check(*kind, *dk, *level, tau.as_deref(), a.as_deref(), *x, descriptor, *relaxed, &ctx)?;
            let code = if report.pass { EXIT_OK } else { EXIT_CHECK_FAILED };
            let value = serde_json::to_value(&report).expect("serializable");
            (*dk, *level, value, code)
        }
    };
    let mut payload = envelope(cfg, dk, level, result);
    if cfg.timing {
        payload["elapsed_seconds"] = json!(format!("{:.3}", start.elapsed().as_secs_f64()));
    }
    Ok((payload, code))
}

fn polynomial_json(poly: &Polynomial, field: &Field, roots: &[ComplexValue]) -> Value {
    let coeffs: Vec<Value> = poly.coeffs.iter().map(complex_json).collect();
    let recognized: Vec<Value> = poly.recognized.iter().map(|r| serde_json::to_value(r).expect("serializable")).collect();
    let mut res = json!({
        "degree": poly.degree(),
        "coefficients": coeffs,
        "recognized": recognized,
        "fully_recognized": poly.fully_recognized(),
        "basis": ["1", field.theta_string()],
    });
    if let Some(rec) = poly.recognized_poly(&field.theta(poly.coeffs[0].prec())) {
        if !roots.is_empty() {
            res["recognized_residual"] = json!(format!("{:e}", rec.relative_residual(roots)));
        }
    }
    res
}

fn eval(function: EvalFn, tau: &ComplexValue, r: Option<&FractionPair>, ctx: &PrecisionContext) -> Result<ComplexValue> {
    let pt = ModularPoint::new(tau, ctx)?;
    let index = || {
        r.copied()
            .ok_or_else(|| Error::InvalidArgument("--r is required for this function".into()))
    };
    Ok(match function {
        EvalFn::Eta => qseries::eta(&pt),
        EvalFn::G2 => qseries::eisenstein(&pt)?.0,
        EvalFn::G3 => qseries::eisenstein(&pt)?.1,
        EvalFn::Delta => qseries::delta(&pt),
        EvalFn::J => qseries::j(&pt)?,
        EvalFn::Siegel => qseries::siegel(&index()?, &pt)?,
        EvalFn::Wp => qseries::wp(&index()?.point(pt.tau()), &pt)?,
        EvalFn::WpPrime => qseries::wp_prime(&index()?, &pt)?,
        EvalFn::U => LevelOne::new(&pt)?.u(),
        EvalFn::V => LevelOne::new(&pt)?.v(),
        EvalFn::X => LevelOne::new(&pt)?.x(&index()?, &pt)?,
        EvalFn::Y => qseries::y_coordinate(&index()?, &pt)?,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_check(
    kind: CheckKind,
    dk: Option<i64>,
    level: Option<i64>,
    tau: Option<&str>,
    a: Option<&str>,
    x: Option<f64>,
    descriptor: &str,
    relaxed: bool,
    ctx: &PrecisionContext,
) -> Result<CheckReport> {
    let field = || make_field(require(dk, "dk")?);
    let level = || require(level, "level");
    match kind {
        CheckKind::Curve => verify::check_curve_point(&field()?, level()?, relaxed, ctx),
        CheckKind::Surface => {
            let tau = parse_tau(require(tau, "tau")?, ctx.bits())?;
            verify::check_surface_point(&tau, level()?, ctx)
        }
        CheckKind::Lemma51 => {
            let dk = require(dk, "dk")?;
            let a = match require(a, "a")? {
                "D" => (-(dk as f64) / 3.0).sqrt(),
                s => s.parse().map_err(|_| Error::InvalidArgument(format!("cannot parse a = {s:?}")))?,
            };
            verify::check_lemma51(dk, a, require(x, "x")?, ctx)
        }
        CheckKind::Lemma52 => verify::check_lemma52(&field()?, level()?, ctx),
        CheckKind::Tbound => verify::check_t_bound(level()?, &field()?),
        CheckKind::Generation => verify::check_generation(&field()?, level()?, descriptor.parse()?, ctx),
        CheckKind::Elliptic4 => verify::elliptic_point_distinctness(ctx),
        CheckKind::UnitIdentity => verify::check_unit_identity(&field()?, level()?, ctx),
        CheckKind::Hypothesis => {
            let f = field()?;
            let n = level()?;
            let rep = check_hypothesis(&f, n)?;
            let mut report = CheckReport {
                name: "hypothesis".into(),
                inputs: [("dk".to_string(), json!(f.dk)), ("level".to_string(), json!(n))].into_iter().collect(),
                residuals: vec![verify::Residual::new("bound - degree", rep.bound as f64 - rep.degree as f64, 0.0)],
                tolerance: 0.0,
                pass: rep.holds,
                elapsed: None,
                notes: vec![],
            };
            if let Some(t) = rep.reciprocal_test {
                report.notes.push(format!("1/2 > sum 1/phi: {t}"));
            }
            for c in &rep.factors {
                report
                    .notes
                    .push(format!("p={} {} e={} phi={} sub_degree={}", c.p, c.splitting, c.e, c.phi, c.sub_degree));
            }
            Ok(report)
        }
    }
}
