//! Command-line front end.
//!
//! Every successful invocation prints one canonical JSON envelope
//! `{command, conditional, inputs, provenance, result}` with sorted keys and
//! all integers rendered as decimal strings. Exit codes: 0 success, 2 invalid
//! input (with an error envelope), 64 unknown subcommand, 70 internal error.

use std::collections::BTreeMap;
use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::bounds::{compose_intro_bound, eval_bound, field_tower_constants, BoundId, BoundInputs, BoundReport};
use crate::brauer::{
    brauer_order_bound_nonmaximal, brauer_shape_maximal, divisibility_bound, uniform_bound_ee, BrauerShape,
    GaloisFlags,
};
use crate::certified::{decimal_string, Certificate, Precision};
use crate::cm_census::{
    cm_count_per_field, cm_count_total, conductor_bound, conductor_bound_over_degree, d_permissible_conductors,
    singular_k3_bound, singular_k3_refined_sum, singular_k3_strong_bound, ConductorBoundReport,
};
use crate::grossencharakter::{estimate_m, CurveOverQ};
use crate::lattices::{disc_hom, disc_ns_kummer, disc_ns_product, parse_lattice, CmPair, LatticeDescriptor, LatticeKind};
use crate::minkowski::minkowski_m;
use crate::quadratic::{
    class_number_order, enumerate_fields_by_class_number, fundamental_discriminant, FundamentalDiscriminant, Order,
};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNKNOWN_COMMAND: i32 = 64;
pub const EXIT_INTERNAL: i32 = 70;

/// Provenance ids that envelopes may carry, besides `bound:<id>` for every
/// [`BoundId`].
pub const PROVENANCE_REGISTRY: &[&str] = &[
    "class-number-formula",
    "class-number-enumeration",
    "minkowski-constant",
    "conductor-bound",
    "cm-census",
    "singular-k3-census",
    "lattice-discriminants",
    "brauer:shape",
    "brauer:nonmaximal-order",
    "brauer:divisibility",
    "grossencharakter-valuation",
    "tower-constants",
    "bound:intro",
];

pub fn is_registered_provenance(id: &str) -> bool {
    PROVENANCE_REGISTRY.contains(&id) || BoundId::ALL.iter().any(|b| b.provenance() == id)
}

#[derive(Parser, Debug)]
#[command(name = "cmbrauer", version, about = "Class numbers, CM censuses and certified Brauer group bounds")]
struct Cli {
    /// Acknowledge that GRH-conditional bounds may be reported.
    #[arg(long, global = true)]
    assume_grh: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write the canonical serialization to this file.
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    /// Lossy, human-oriented view.
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class number of the order of conductor f in Q(sqrt(disc)).
    Classnum {
        #[arg(long, allow_hyphen_values = true)]
        disc: BigInt,
        #[arg(long)]
        conductor: Option<BigInt>,
    },
    /// Imaginary quadratic fields with class number at most h.
    FieldsByH {
        #[arg(long)]
        h_max: u64,
        #[arg(long, default_value_t = 20_000)]
        bound: u64,
    },
    /// Minkowski's constant M(n).
    Minkowski {
        #[arg(long)]
        n: u32,
    },
    /// Largest conductor for a given degree, optionally for a given field.
    ConductorBound {
        #[arg(long, allow_hyphen_values = true)]
        disc: Option<BigInt>,
        #[arg(long)]
        degree: u64,
    },
    /// Count CM j-invariants of degree d, in total or for one field.
    CmCount {
        #[arg(long)]
        degree: u64,
        #[arg(long, allow_hyphen_values = true)]
        disc: Option<BigInt>,
        #[arg(long, default_value_t = 20_000)]
        bound: u64,
    },
    /// Bounds on the number of singular K3 surfaces over fields of degree d.
    K3Census {
        #[arg(long)]
        degree: u64,
        #[arg(long, default_value_t = 20_000)]
        bound: u64,
        /// Number of fields with h_K <= M(20) d, for the rank-free bound.
        #[arg(long)]
        strong_field_count: Option<u64>,
    },
    /// Lattice discriminants of a CM pair, or the inverse from a discriminant.
    Lattice(LatticeArgs),
    /// Shape of the l-part of Br(E x E)/Br_1, or its order bound for a non-maximal order.
    BrauerShape(BrauerArgs),
    /// Divisibility and uniform bounds on |Br(E x E)/Br_1|.
    Divisibility {
        #[arg(long, default_value_t = BigInt::from(1))]
        conductor: BigInt,
        #[arg(long)]
        degree: u64,
        #[arg(long, allow_hyphen_values = true)]
        disc: BigInt,
    },
    /// Upper bound on m_l(E) for y^2 = x^3 + a4 x + a6 by sampling primes.
    MellEstimate {
        #[arg(long, allow_hyphen_values = true)]
        a4: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        a6: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        cm_disc: BigInt,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
    },
    /// Evaluate a named bound to a certified integer.
    Bound {
        /// Bound id, or `intro` for the composed unconditional bound.
        #[arg(long)]
        id: String,
        /// `name=value`, repeatable.
        #[arg(long = "input", value_parser = parse_input, allow_hyphen_values = true)]
        inputs: Vec<(String, BigInt)>,
        /// Boolean flag name, repeatable.
        #[arg(long = "flag")]
        flags: Vec<String>,
        /// Decimal digits of working precision.
        #[arg(long, default_value_t = 6)]
        precision: u32,
    },
    /// Field-tower constants and the Minkowski constants they use.
    Constants,
}

#[derive(Args, Debug)]
struct LatticeArgs {
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    #[arg(long)]
    rank: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    disc: Option<BigInt>,
    #[arg(long, allow_hyphen_values = true)]
    field_disc: Option<BigInt>,
    #[arg(long)]
    f1: Option<BigInt>,
    #[arg(long)]
    f2: Option<BigInt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Abelian,
    Kummer,
}

#[derive(Args, Debug)]
struct BrauerArgs {
    #[arg(long)]
    ell: u64,
    /// m_l(E), or m_l(E') when a conductor is given.
    #[arg(long)]
    m: u32,
    #[arg(long)]
    cm_in_base: bool,
    #[arg(long)]
    two_torsion_rational: bool,
    #[arg(long)]
    conductor: Option<BigInt>,
    #[arg(long, allow_hyphen_values = true)]
    disc: Option<BigInt>,
    /// Whether E'[2] is rational, when known.
    #[arg(long)]
    isogenous_two_torsion_rational: Option<bool>,
}

fn parse_input(s: &str) -> std::result::Result<(String, BigInt), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let value = value.trim().parse::<BigInt>().map_err(|e| format!("{name}: {e}"))?;
    Ok((name.trim().to_string(), value))
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn obj(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

struct Response {
    inputs: Value,
    result: Value,
    provenance: String,
    conditional: bool,
}

fn response(inputs: Vec<(&str, Value)>, result: Value, provenance: &str) -> Response {
    Response { inputs: obj(inputs), result, provenance: provenance.to_string(), conditional: false }
}

fn field(disc: &BigInt) -> Result<FundamentalDiscriminant> {
    FundamentalDiscriminant::new(disc.clone())
}

fn conductor_json(r: &ConductorBoundReport) -> Value {
    obj(vec![
        ("bound", s(r.bound)),
        ("case", s(r.case.label())),
        ("degree", s(r.degree)),
        ("field", r.field.as_ref().map(s).unwrap_or_else(|| s("generic"))),
    ])
}

fn shape_json(shape: &BrauerShape) -> Value {
    obj(vec![
        ("cyclic_factors", Value::Array(shape.cyclic_factors.iter().map(s).collect())),
        ("order", s(shape.order())),
        ("shape", s(shape)),
    ])
}

fn certificate_json(c: &Certificate) -> Value {
    let interval = |lo: &num_rational::BigRational, hi: &num_rational::BigRational| {
        obj(vec![("lo", s(lo)), ("hi", s(hi))])
    };
    let named = |v: &[(String, crate::certified::Interval)]| {
        Value::Array(
            v.iter()
                .map(|(arg, i)| obj(vec![("argument", s(arg)), ("enclosure", interval(&i.lo, &i.hi))]))
                .collect(),
        )
    };
    obj(vec![
        ("pi", c.pi.as_ref().map(|i| interval(&i.lo, &i.hi)).unwrap_or(Value::Null)),
        ("logs", named(&c.logs)),
        ("square_roots", named(&c.roots)),
    ])
}

fn bound_json(r: &BoundReport) -> Value {
    obj(vec![
        ("id", s(r.id)),
        ("integer_bound", s(&r.integer_bound)),
        ("exact_symbolic", s(&r.exact_symbolic)),
        ("lower_decimal", s(decimal_string(&r.enclosure.lo, 6))),
        ("precision_digits", s(r.precision.digits())),
        ("rounding_certificate", certificate_json(&r.certificate)),
        ("conditional", Value::Bool(r.conditional)),
    ])
}

fn execute(command: &Command, assume_grh: bool) -> Result<Response> {
    match command {
        Command::Classnum { disc, conductor } => {
            let (field, base) = match conductor {
                Some(f) => (field(disc)?, f.clone()),
                None => fundamental_discriminant(disc)?,
            };
            let order = Order::new(field.clone(), base.clone())?;
            let h = class_number_order(&order)?;
            let mut inputs = vec![("disc", s(disc))];
            if let Some(f) = conductor {
                inputs.push(("conductor", s(f)));
            }
            Ok(response(
                inputs,
                obj(vec![
                    ("class_number", s(&h)),
                    ("conductor", s(&base)),
                    ("field_disc", s(&field)),
                    ("order_disc", s(order.discriminant())),
                ]),
                "class-number-formula",
            ))
        }
        Command::FieldsByH { h_max, bound } => {
            if *h_max == 0 || *bound > 10_000_000 {
                return Err(Error::invalid("need h_max >= 1 and bound <= 10^7"));
            }
            let e = enumerate_fields_by_class_number(*h_max, *bound);
            let fields: Vec<Value> =
                e.fields.iter().map(|(d, h)| obj(vec![("disc", s(d)), ("class_number", s(h))])).collect();
            Ok(response(
                vec![("h_max", s(h_max)), ("bound", s(bound))],
                obj(vec![
                    ("count", s(e.len())),
                    ("certified_complete", Value::Bool(e.certified_complete)),
                    ("fields", Value::Array(fields)),
                ]),
                "class-number-enumeration",
            ))
        }
        Command::Minkowski { n } => {
            if *n > 10_000 {
                return Err(Error::invalid("n is limited to 10000"));
            }
            let m = minkowski_m(*n)?;
            let factors: Vec<Value> =
                m.factorization.iter().map(|(p, e)| obj(vec![("prime", s(p)), ("exponent", s(e))])).collect();
            Ok(response(
                vec![("n", s(n))],
                obj(vec![("value", s(&m.value)), ("factorization", s(&m)), ("factors", Value::Array(factors))]),
                "minkowski-constant",
            ))
        }
        Command::ConductorBound { disc, degree } => {
            let mut inputs = vec![("degree", s(degree))];
            let report = match disc {
                Some(d) => {
                    inputs.push(("disc", s(d)));
                    conductor_bound(&field(d)?, *degree)?
                }
                None => conductor_bound_over_degree(*degree)?,
            };
            Ok(response(inputs, conductor_json(&report), "conductor-bound"))
        }
        Command::CmCount { degree, disc, bound } => {
            if let Some(d) = disc {
                let k = field(d)?;
                let count = cm_count_per_field(&k, *degree)?;
                let conductors: Vec<Value> = d_permissible_conductors(&k, *degree)?
                    .iter()
                    .map(|(f, h)| obj(vec![("conductor", s(f)), ("class_number", s(h))]))
                    .collect();
                return Ok(response(
                    vec![("degree", s(degree)), ("disc", s(d))],
                    obj(vec![("count", s(count)), ("permissible_conductors", Value::Array(conductors))]),
                    "cm-census",
                ));
            }
            if *bound > 1_000_000 {
                return Err(Error::invalid("search bound is limited to 10^6"));
            }
            let r = cm_count_total(*degree, *bound)?;
            let per_field: Vec<Value> =
                r.per_field_counts.iter().map(|(k, c)| obj(vec![("disc", s(k)), ("count", s(c))])).collect();
            Ok(response(
                vec![("degree", s(degree)), ("bound", s(bound))],
                obj(vec![
                    ("total", s(&r.total)),
                    ("certified_complete", Value::Bool(r.certified_complete)),
                    ("closed_form_bound", r.closed_form_bound.as_ref().map(s).unwrap_or(Value::Null)),
                    ("per_field_counts", Value::Array(per_field)),
                ]),
                "cm-census",
            ))
        }
        Command::K3Census { degree, bound, strong_field_count } => {
            if *bound > 1_000_000 || *degree > 100 {
                return Err(Error::invalid("k3-census needs degree <= 100 and bound <= 10^6"));
            }
            let fields = enumerate_fields_by_class_number(*degree, *bound);
            let count = fields.len() as u64;
            let mut result = vec![
                ("field_count", s(count)),
                ("certified_complete", Value::Bool(fields.certified_complete)),
                ("closed_form_bound", s(singular_k3_bound(*degree, count)?)),
                ("refined_sum", s(singular_k3_refined_sum(*degree, *bound)?)),
            ];
            let mut inputs = vec![("degree", s(degree)), ("bound", s(bound))];
            if let Some(n) = strong_field_count {
                inputs.push(("strong_field_count", s(n)));
                result.push(("strong_bound", s(singular_k3_strong_bound(*degree, *n)?)));
            }
            Ok(response(inputs, obj(result), "singular-k3-census"))
        }
        Command::Lattice(a) => lattice(a),
        Command::BrauerShape(a) => brauer(a),
        Command::Divisibility { conductor, degree, disc } => {
            let k = field(disc)?;
            Ok(response(
                vec![("conductor", s(conductor)), ("degree", s(degree)), ("disc", s(disc))],
                obj(vec![
                    ("divisibility_bound", s(divisibility_bound(conductor, *degree, &k)?)),
                    ("uniform_bound", s(uniform_bound_ee(Some(conductor), *degree, &k)?)),
                ]),
                "brauer:divisibility",
            ))
        }
        Command::MellEstimate { a4, a6, cm_disc, ell, budget } => {
            let curve = CurveOverQ::new(a4.clone(), a6.clone(), cm_disc.clone())?;
            let est = estimate_m(&curve, *ell, *budget)?;
            Ok(response(
                vec![("a4", s(a4)), ("a6", s(a6)), ("cm_disc", s(cm_disc)), ("ell", s(ell)), ("budget", s(budget))],
                obj(vec![
                    ("m_hat", s(est.m_hat)),
                    ("kind", s("upper_bound")),
                    ("samples_used", s(est.samples_used)),
                    ("witness_prime", s(est.witness)),
                ]),
                "grossencharakter-valuation",
            ))
        }
        Command::Bound { id, inputs, flags, precision } => {
            let precision = Precision::new(*precision)?;
            let mut echo: Vec<(&str, Value)> = vec![("id", s(id))];
            let in_map: BTreeMap<String, Value> = inputs.iter().map(|(k, v)| (k.clone(), s(v))).collect();
            echo.push(("inputs", Value::Object(in_map.into_iter().collect())));
            echo.push(("flags", Value::Array(flags.iter().map(s).collect())));
            echo.push(("precision", s(precision.digits())));
            let mut bound_inputs = BoundInputs::new();
            for (k, v) in inputs {
                if bound_inputs.values.insert(k.clone(), v.clone()).is_some() {
                    return Err(Error::invalid(format!("input {k:?} given twice")));
                }
            }
            bound_inputs.flags = flags.iter().cloned().collect();
            if id == "intro" {
                if !bound_inputs.flags.is_empty() || bound_inputs.values.keys().any(|k| k != "disc" && k != "degree") {
                    return Err(Error::invalid("intro takes exactly the inputs disc and degree"));
                }
                let disc = bound_inputs.values.get("disc").ok_or_else(|| Error::invalid("missing input \"disc\""))?;
                let d = bound_inputs.values.get("degree").ok_or_else(|| Error::invalid("missing input \"degree\""))?;
                let r = compose_intro_bound(disc, d, precision)?;
                return Ok(response(
                    echo,
                    obj(vec![
                        ("field_disc", s(&r.field)),
                        ("closed_form", bound_json(&r.closed_form)),
                        ("expanded", bound_json(&r.expanded)),
                        ("ratio_expanded_over_closed_form", s(&r.ratio)),
                        ("constant_identity_holds", Value::Bool(r.constant_identity)),
                    ]),
                    "bound:intro",
                ));
            }
            let bid: BoundId = id.parse()?;
            let r = eval_bound(bid, &bound_inputs, assume_grh, precision)?;
            let mut resp = response(echo, bound_json(&r), &bid.provenance());
            resp.conditional = r.conditional;
            Ok(resp)
        }
        Command::Constants => {
            let towers: Vec<Value> = field_tower_constants()?
                .into_iter()
                .map(|c| {
                    obj(vec![
                        ("name", s(c.name)),
                        ("value", s(&c.value)),
                        ("symbolic", s(c.symbolic)),
                        ("used_by", s(c.provenance)),
                    ])
                })
                .collect();
            Ok(response(
                vec![],
                obj(vec![
                    ("tower_constants", Value::Array(towers)),
                    ("M(18)", s(minkowski_m(18)?.value)),
                    ("M(20)", s(minkowski_m(20)?.value)),
                ]),
                "tower-constants",
            ))
        }
    }
}

fn lattice(a: &LatticeArgs) -> Result<Response> {
    if let Some(disc) = &a.disc {
        if a.field_disc.is_some() || a.f1.is_some() || a.f2.is_some() {
            return Err(Error::invalid("give either --disc or --field-disc/--f1/--f2, not both"));
        }
        let kind = match a.kind.unwrap_or(Kind::Abelian) {
            Kind::Abelian => LatticeKind::Abelian,
            Kind::Kummer => LatticeKind::Kummer,
        };
        let rank = a.rank.unwrap_or(if kind == LatticeKind::Abelian { 4 } else { 20 });
        let desc = LatticeDescriptor::new(kind, rank, disc.clone())?;
        let mut inputs = vec![("disc", s(disc)), ("kind", s(format!("{kind:?}").to_lowercase())), ("rank", s(rank))];
        inputs.sort_by(|x, y| x.0.cmp(y.0));
        let result = if kind == LatticeKind::Abelian && rank == 3 {
            obj(vec![("cyclic_isogeny_degree", s(desc.cyclic_isogeny_degree()?))])
        } else {
            let summary = parse_lattice(&desc)?;
            obj(vec![("field_disc", s(&summary.field)), ("lcm", s(&summary.lcm))])
        };
        return Ok(response(inputs, result, "lattice-discriminants"));
    }
    let (Some(d), Some(f1), Some(f2)) = (&a.field_disc, &a.f1, &a.f2) else {
        return Err(Error::invalid("lattice needs --disc, or all of --field-disc, --f1, --f2"));
    };
    let pair = CmPair::new(field(d)?, f1.clone(), f2.clone())?;
    Ok(response(
        vec![("field_disc", s(d)), ("f1", s(f1)), ("f2", s(f2))],
        obj(vec![
            ("lcm", s(pair.lcm())),
            ("disc_hom", s(disc_hom(&pair))),
            ("disc_ns_product", s(disc_ns_product(&pair))),
            ("disc_ns_kummer", s(disc_ns_kummer(&pair))),
        ]),
        "lattice-discriminants",
    ))
}

fn brauer(a: &BrauerArgs) -> Result<Response> {
    let flags = GaloisFlags { cm_field_in_base: a.cm_in_base, two_torsion_rational: a.two_torsion_rational };
    let mut inputs = vec![
        ("ell", s(a.ell)),
        ("m", s(a.m)),
        ("cm_in_base", Value::Bool(a.cm_in_base)),
        ("two_torsion_rational", Value::Bool(a.two_torsion_rational)),
    ];
    let Some(f) = &a.conductor else {
        if a.disc.is_some() || a.isogenous_two_torsion_rational.is_some() {
            return Err(Error::invalid("--disc and --isogenous-two-torsion-rational need --conductor"));
        }
        let shape = brauer_shape_maximal(a.ell, a.m, flags)?;
        return Ok(response(inputs, shape_json(&shape), "brauer:shape"));
    };
    let disc = a.disc.as_ref().ok_or_else(|| Error::invalid("--conductor needs --disc"))?;
    inputs.push(("conductor", s(f)));
    inputs.push(("disc", s(disc)));
    if let Some(e) = a.isogenous_two_torsion_rational {
        inputs.push(("isogenous_two_torsion_rational", Value::Bool(e)));
    }
    let bound = brauer_order_bound_nonmaximal(a.ell, f, a.m, flags, &field(disc)?, a.isogenous_two_torsion_rational)?;
    Ok(response(inputs, obj(vec![("order_bound", s(bound))]), "brauer:nonmaximal-order"))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classnum { .. } => "classnum",
        Command::FieldsByH { .. } => "fields-by-h",
        Command::Minkowski { .. } => "minkowski",
        Command::ConductorBound { .. } => "conductor-bound",
        Command::CmCount { .. } => "cm-count",
        Command::K3Census { .. } => "k3-census",
        Command::Lattice(_) => "lattice",
        Command::BrauerShape(_) => "brauer-shape",
        Command::Divisibility { .. } => "divisibility",
        Command::MellEstimate { .. } => "mell-estimate",
        Command::Bound { .. } => "bound",
        Command::Constants => "constants",
    }
}

/// Canonical serialization: sorted keys, compact, trailing newline.
pub fn canonical(v: &Value) -> String {
    let mut out = serde_json::to_string(v).expect("JSON values always serialize");
    out.push('\n');
    out
}

fn table(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                table(x, &key, out);
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                table(x, &format!("{prefix}[{i}]"), out);
            }
        }
        Value::String(x) => out.push_str(&format!("{prefix:<40} {x}\n")),
        other => out.push_str(&format!("{prefix:<40} {other}\n")),
    }
}

fn error_envelope(command: &str, kind: &str, message: &str) -> Value {
    json!({
        "command": command,
        "error": { "kind": kind, "message": message },
    })
}

/// Parses `argv` (including the program name) and runs one command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                ErrorKind::InvalidSubcommand
                | ErrorKind::MissingSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_UNKNOWN_COMMAND,
                _ => EXIT_INVALID,
            };
            let rendered = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                let kind = if code == EXIT_INVALID { "usage" } else { "unknown_command" };
                Outcome { code, stdout: canonical(&error_envelope("", kind, rendered.trim())), stderr: rendered }
            };
        }
    };
    let name = command_name(&cli.command);
    let (code, value) = match execute(&cli.command, cli.assume_grh) {
        Ok(r) => {
            debug_assert!(is_registered_provenance(&r.provenance));
            let v = json!({
                "command": name,
                "inputs": r.inputs,
                "result": r.result,
                "provenance": r.provenance,
                "conditional": r.conditional,
            });
            (EXIT_OK, v)
        }
        Err(Error::Invalid(m)) => (EXIT_INVALID, error_envelope(name, "validation", &m)),
        Err(Error::GrhNotAcknowledged(id)) => (
            EXIT_INVALID,
            error_envelope(name, "grh_not_acknowledged", &format!("{id} is conditional on GRH; pass --assume-grh")),
        ),
        Err(Error::Internal(m)) => (EXIT_INTERNAL, error_envelope(name, "internal", &m)),
    };
    let serialized = canonical(&value);
    let mut stderr = String::new();
    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, &serialized) {
            return Outcome {
                code: EXIT_INVALID,
                stdout: canonical(&error_envelope(name, "validation", &format!("cannot write {}: {e}", path.display()))),
                stderr: e.to_string(),
            };
        }
    }
    let stdout = match cli.format {
        Format::Json => serialized,
        Format::Table => {
            let mut out = String::new();
            table(&value, "", &mut out);
            out
        }
    };
    if code != EXIT_OK {
        stderr = value["error"]["message"].as_str().unwrap_or_default().to_string();
    }
    Outcome { code, stdout, stderr }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, Value) {
        let mut argv = vec!["cmbrauer"];
        argv.extend_from_slice(args);
        let out = run(argv);
        (out.code, serde_json::from_str(&out.stdout).unwrap())
    }

    #[test]
    fn classnum_examples() {
        let (code, v) = run_args(&["classnum", "--disc", "-4", "--conductor", "4"]);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["class_number"], "2");
        let (_, v) = run_args(&["classnum", "--disc", "-12"]);
        assert_eq!(v["result"]["field_disc"], "-3");
        assert_eq!(v["result"]["conductor"], "2");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_UNKNOWN_COMMAND);
        assert_eq!(run_args(&["classnum", "--disc", "-5"]).0, EXIT_INVALID);
        let (code, v) = run_args(&["bound", "--id", "faltings_GRH", "--input", "degree=2"]);
        assert_eq!(code, EXIT_INVALID);
        assert_eq!(v["error"]["kind"], "grh_not_acknowledged");
        assert_eq!(run_args(&["classnum", "--disc", "x"]).0, EXIT_INVALID);
    }

    #[test]
    fn registry_covers_bounds() {
        for id in BoundId::ALL {
            assert!(is_registered_provenance(&id.provenance()));
        }
        assert!(!is_registered_provenance("thm:made-up"));
    }
}
