//! Closed-form upper bounds on transcendental Brauer groups, evaluated to
//! certified integers.
//!
//! Each [`BoundId`] names one formula with named integer inputs. Decimal
//! constants such as `3.4` and `2.73` are exact rationals and `log` is the
//! natural logarithm. The conditional (GRH) formulas refuse to evaluate unless
//! the caller acknowledges the hypothesis.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed};

use crate::certified::{upper_floor, Certificate, Expr, Interval, Precision};
use crate::lattices::{parse_lattice, LatticeDescriptor, LatticeKind};
use crate::minkowski::minkowski_m;
use crate::quadratic::{class_number_field, FundamentalDiscriminant};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundId {
    UncondLattice,
    LatticeKIsog,
    AbLattice,
    AbGrh,
    KummerGrh,
    SingularCoverGrh,
    IsogPair,
    IsogPairGrh,
    NonisogGrh,
    KummerNonisogGrh,
    IsogenyDegree,
    IsogenyDegreeGrh,
    FaltingsGrh,
    IsogenyBrauerMultiplier,
}

impl BoundId {
    pub const ALL: [BoundId; 14] = [
        BoundId::UncondLattice,
        BoundId::LatticeKIsog,
        BoundId::AbLattice,
        BoundId::AbGrh,
        BoundId::KummerGrh,
        BoundId::SingularCoverGrh,
        BoundId::IsogPair,
        BoundId::IsogPairGrh,
        BoundId::NonisogGrh,
        BoundId::KummerNonisogGrh,
        BoundId::IsogenyDegree,
        BoundId::IsogenyDegreeGrh,
        BoundId::FaltingsGrh,
        BoundId::IsogenyBrauerMultiplier,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundId::UncondLattice => "uncond_lattice",
            BoundId::LatticeKIsog => "lattice_k_isog",
            BoundId::AbLattice => "ab_lattice",
            BoundId::AbGrh => "ab_GRH",
            BoundId::KummerGrh => "kummer_GRH",
            BoundId::SingularCoverGrh => "singular_cover_GRH",
            BoundId::IsogPair => "isog_pair",
            BoundId::IsogPairGrh => "isog_pair_GRH",
            BoundId::NonisogGrh => "nonisog_GRH",
            BoundId::KummerNonisogGrh => "kummer_nonisog_GRH",
            BoundId::IsogenyDegree => "isogeny_degree",
            BoundId::IsogenyDegreeGrh => "isogeny_degree_GRH",
            BoundId::FaltingsGrh => "faltings_GRH",
            BoundId::IsogenyBrauerMultiplier => "isogeny_brauer_multiplier",
        }
    }

    pub fn is_conditional(self) -> bool {
        self.name().ends_with("_GRH")
    }

    /// Registry id used as the provenance of reports.
    pub fn provenance(self) -> String {
        format!("bound:{}", self.name())
    }

    /// Required inputs; a `|` separates mutually exclusive alternatives.
    pub fn inputs(self) -> &'static [&'static str] {
        match self {
            BoundId::UncondLattice => &["disc", "degree"],
            BoundId::LatticeKIsog => &["disc", "degree"],
            BoundId::AbLattice => &["disc", "l_degree"],
            BoundId::AbGrh | BoundId::KummerGrh => &["l_degree|base_degree"],
            BoundId::SingularCoverGrh => &["degree"],
            BoundId::IsogPair => &["f1", "f2", "field_disc", "m_degree"],
            BoundId::IsogPairGrh => &["m_over_k", "degree"],
            BoundId::NonisogGrh => &["compositum_degree", "degree"],
            BoundId::KummerNonisogGrh => &["degree"],
            BoundId::IsogenyDegree => &["f1", "f2", "field_disc"],
            BoundId::IsogenyDegreeGrh | BoundId::FaltingsGrh => &["degree"],
            BoundId::IsogenyBrauerMultiplier => &["g", "d", "rho"],
        }
    }

    /// Optional boolean flags.
    pub fn flags(self) -> &'static [&'static str] {
        match self {
            BoundId::LatticeKIsog | BoundId::AbLattice | BoundId::IsogPair => &["class_number_one"],
            _ => &[],
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown bound id {s:?}")))
    }
}

/// Named integer inputs and boolean flags for [`eval_bound`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BoundInputs {
    pub values: BTreeMap<String, BigInt>,
    pub flags: BTreeSet<String>,
}

impl BoundInputs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: impl Into<BigInt>) -> Self {
        self.values.insert(name.to_string(), value.into());
        self
    }

    pub fn flag(mut self, name: &str) -> Self {
        self.flags.insert(name.to_string());
        self
    }

    fn get(&self, name: &str) -> Result<&BigInt> {
        self.values.get(name).ok_or_else(|| Error::invalid(format!("missing input {name:?}")))
    }

    fn positive(&self, name: &str) -> Result<BigInt> {
        let v = self.get(name)?;
        if !v.is_positive() {
            return Err(Error::invalid(format!("input {name} must be a positive integer, got {v}")));
        }
        Ok(v.clone())
    }

    fn has(&self, flag: &str) -> bool {
        self.flags.contains(flag)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub id: BoundId,
    pub inputs: BTreeMap<String, BigInt>,
    pub flags: BTreeSet<String>,
    /// The formula with the inputs substituted.
    pub exact_symbolic: String,
    /// `floor` of the certified upper endpoint.
    pub integer_bound: BigInt,
    pub enclosure: Interval,
    pub certificate: Certificate,
    pub precision: Precision,
    pub conditional: bool,
}

/// Descent-degree constants `[L : k]` used to reach a field of definition
/// where the relevant structure is split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerConstant {
    pub name: &'static str,
    pub value: BigInt,
    pub symbolic: &'static str,
    pub provenance: &'static str,
}

pub fn field_tower_constants() -> Result<Vec<TowerConstant>> {
    let m18 = BigInt::from(minkowski_m(18)?.value);
    let m20 = BigInt::from(minkowski_m(20)?.value);
    let c = |name, value, symbolic, provenance| TowerConstant { name, value, symbolic, provenance };
    Ok(vec![
        c("ab_endo", BigInt::from(48), "2^4 * 3", "bound:ab_lattice"),
        c("kummer_full", BigInt::from(1536) * &m20, "2^9 * 3 * M(20)", "bound:uncond_lattice"),
        c("kummer_nonisog", BigInt::from(64) * &m18, "2^6 * M(18)", "bound:kummer_nonisog_GRH"),
        c("singular_cover", BigInt::from(3072) * &m20, "2^10 * 3 * M(20)", "bound:singular_cover_GRH"),
    ])
}

pub fn tower_constant(name: &str) -> Result<BigInt> {
    field_tower_constants()?
        .into_iter()
        .find(|c| c.name == name)
        .map(|c| c.value)
        .ok_or_else(|| Error::invalid(format!("unknown tower constant {name:?}")))
}

fn two_pow(e: i32) -> Expr {
    Expr::int(2).pow(e)
}

fn m_const(n: u32) -> Result<Expr> {
    Ok(Expr::named(format!("M({n})"), BigInt::from(minkowski_m(n)?.value)))
}

/// `(3.23·log(D) + 2.73·109)`.
fn height_term(degree: Expr) -> Expr {
    Expr::sum(vec![
        Expr::product(vec![Expr::decimal("3.23"), degree.ln()]),
        Expr::product(vec![Expr::decimal("2.73"), Expr::int(109)]),
    ])
}

/// `(3.4)²·10⁸·D¹²·(3.23·log D + 2.73·109)⁴`.
fn grh_abelian(degree: Expr) -> Expr {
    Expr::product(vec![
        Expr::decimal("3.4").pow(2),
        Expr::int(10).pow(8),
        degree.clone().pow(12),
        height_term(degree).pow(4),
    ])
}

/// `(5.46·(109 + log x) + 3)^24`.
fn nonisog_term(log_arg: Expr) -> Expr {
    Expr::sum(vec![
        Expr::product(vec![Expr::decimal("5.46"), Expr::sum(vec![Expr::int(109), log_arg.ln()])]),
        Expr::int(3),
    ])
    .pow(24)
}

fn parsed_field(inputs: &BoundInputs, kind: LatticeKind) -> Result<(FundamentalDiscriminant, BigInt)> {
    let disc = inputs.get("disc")?.clone();
    let rank = match kind {
        LatticeKind::Abelian => 4,
        LatticeKind::Kummer => 20,
    };
    let summary = parse_lattice(&LatticeDescriptor::new(kind, rank, disc.clone())?)?;
    Ok((summary.field, disc.abs()))
}

fn field_input(inputs: &BoundInputs) -> Result<FundamentalDiscriminant> {
    FundamentalDiscriminant::new(inputs.get("field_disc")?.clone())
}

fn class_number_one(inputs: &BoundInputs, field: &FundamentalDiscriminant) -> Result<bool> {
    if !inputs.has("class_number_one") {
        return Ok(false);
    }
    if !class_number_field(field).is_one() {
        return Err(Error::invalid(format!("class_number_one was set but Q(sqrt({field})) has h > 1")));
    }
    Ok(true)
}

/// `[L : Q]` given directly or as `base_degree` times a tower constant.
fn tower_degree(inputs: &BoundInputs, constant: &str) -> Result<Expr> {
    match (inputs.values.contains_key("l_degree"), inputs.values.contains_key("base_degree")) {
        (true, false) => Ok(Expr::int(inputs.positive("l_degree")?)),
        (false, true) => {
            let c = tower_constant(constant)?;
            Ok(Expr::product(vec![Expr::named(constant, c), Expr::int(inputs.positive("base_degree")?)]))
        }
        (true, true) => Err(Error::invalid("give exactly one of l_degree and base_degree")),
        (false, false) => Err(Error::invalid("missing input \"l_degree\" (or \"base_degree\")")),
    }
}

fn build(id: BoundId, inputs: &BoundInputs) -> Result<Expr> {
    Ok(match id {
        BoundId::UncondLattice => {
            let (_, disc) = parsed_field(inputs, LatticeKind::Kummer)?;
            Expr::product(vec![
                two_pow(34),
                Expr::int(3).pow(3),
                Expr::Pi.pow(-2),
                m_const(20)?.pow(4),
                Expr::int(disc).pow(2),
                Expr::int(inputs.positive("degree")?).pow(4),
            ])
        }
        BoundId::LatticeKIsog | BoundId::AbLattice => {
            let (kind, degree, scale) = if id == BoundId::LatticeKIsog {
                (LatticeKind::Kummer, "degree", -2)
            } else {
                (LatticeKind::Abelian, "l_degree", 2)
            };
            let (field, disc) = parsed_field(inputs, kind)?;
            let tail = [Expr::int(disc).pow(2), Expr::int(inputs.positive(degree)?).pow(4)];
            let mut factors = if class_number_one(inputs, &field)? {
                let mut f = vec![Expr::int(field.abs()).pow(-2)];
                if id == BoundId::LatticeKIsog {
                    f.insert(0, two_pow(-4));
                }
                f
            } else {
                vec![two_pow(scale), Expr::Pi.pow(-2), Expr::int(field.abs()).pow(-1)]
            };
            factors.extend(tail);
            Expr::product(factors)
        }
        BoundId::AbGrh => grh_abelian(tower_degree(inputs, "ab_endo")?),
        BoundId::KummerGrh => grh_abelian(tower_degree(inputs, "kummer_full")?),
        BoundId::SingularCoverGrh => {
            let d = Expr::int(inputs.positive("degree")?);
            let m20 = m_const(20)?;
            let log_arg = Expr::product(vec![two_pow(10), Expr::int(3), m20.clone(), d.clone()]);
            Expr::product(vec![
                two_pow(130),
                Expr::int(3).pow(12),
                Expr::int(5).pow(8),
                Expr::decimal("3.4").pow(2),
                m20.pow(12),
                d.pow(12),
                height_term(log_arg).pow(4),
            ])
        }
        BoundId::IsogPair => {
            let field = field_input(inputs)?;
            let (f1, f2) = (inputs.positive("f1")?, inputs.positive("f2")?);
            let m = inputs.positive("m_degree")?;
            if m.is_odd() {
                return Err(Error::invalid(format!("[M:Q] contains K, so it is even; got {m}")));
            }
            let tail = [Expr::int(f1).pow(2), Expr::int(f2).pow(2)];
            let mut factors = if class_number_one(inputs, &field)? {
                tail.to_vec()
            } else {
                let mut v = vec![two_pow(2), Expr::Pi.pow(-2)];
                v.extend(tail);
                v.push(Expr::int(field.abs()));
                v
            };
            factors.push(Expr::int(m).pow(4));
            Expr::product(factors)
        }
        BoundId::IsogPairGrh => {
            let d = Expr::int(inputs.positive("degree")?);
            Expr::product(vec![
                Expr::decimal("3.4").pow(2),
                Expr::int(10).pow(8),
                Expr::int(inputs.positive("m_over_k")?).pow(4),
                d.clone().pow(12),
                height_term(d).pow(4),
            ])
        }
        BoundId::NonisogGrh => {
            let big = inputs.positive("compositum_degree")?;
            let d = inputs.positive("degree")?;
            if !big.is_multiple_of(&d) || big > BigInt::from(4u8) * &d {
                return Err(Error::invalid(format!(
                    "[kK1K2:Q] = {big} must be a multiple of [k:Q] = {d} and at most 4 times it"
                )));
            }
            Expr::product(vec![
                two_pow(316),
                Expr::int(241).pow(24),
                Expr::int(big).pow(24),
                nonisog_term(Expr::int(d)),
            ])
        }
        BoundId::KummerNonisogGrh => {
            let d = Expr::int(inputs.positive("degree")?);
            let m18 = m_const(18)?;
            let log_arg = Expr::product(vec![two_pow(6), m18.clone(), d.clone()]);
            Expr::product(vec![
                two_pow(508),
                Expr::int(241).pow(24),
                m18.pow(24),
                d.pow(24),
                nonisog_term(log_arg),
            ])
        }
        BoundId::IsogenyDegree => {
            let field = field_input(inputs)?;
            Expr::product(vec![
                Expr::int(2),
                Expr::Pi.pow(-1),
                Expr::int(inputs.positive("f1")?),
                Expr::int(inputs.positive("f2")?),
                Expr::int(field.abs()).sqrt(),
            ])
        }
        BoundId::IsogenyDegreeGrh => {
            let d = Expr::int(inputs.positive("degree")?);
            Expr::product(vec![
                Expr::decimal("3.4"),
                Expr::int(10).pow(4),
                d.clone().pow(2),
                height_term(d).pow(2),
            ])
        }
        BoundId::FaltingsGrh => {
            let d = Expr::int(inputs.positive("degree")?);
            Expr::product(vec![Expr::decimal("2.73"), Expr::sum(vec![Expr::int(109), d.ln()])])
        }
        BoundId::IsogenyBrauerMultiplier => {
            let g = inputs.positive("g")?;
            let rho = inputs.positive("rho")?;
            if rho > &g * &g {
                return Err(Error::invalid(format!("rho must lie in [1, g^2], got {rho} with g = {g}")));
            }
            let exponent = &g * (BigInt::from(2u8) * &g - 1u8) - rho;
            let exponent = i32::try_from(exponent)
                .map_err(|_| Error::invalid("isogeny multiplier exponent is too large"))?;
            Expr::int(inputs.positive("d")?).pow(exponent)
        }
    })
}

fn check_known_inputs(id: BoundId, inputs: &BoundInputs) -> Result<()> {
    let known: BTreeSet<&str> = id.inputs().iter().flat_map(|s| s.split('|')).collect();
    if let Some(extra) = inputs.values.keys().find(|k| !known.contains(k.as_str())) {
        return Err(Error::invalid(format!("input {extra:?} is not used by {id}")));
    }
    if let Some(extra) = inputs.flags.iter().find(|f| !id.flags().contains(&f.as_str())) {
        return Err(Error::invalid(format!("flag {extra:?} is not used by {id}")));
    }
    Ok(())
}

/// Evaluates the bound `id` on `inputs` to a certified integer.
pub fn eval_bound(id: BoundId, inputs: &BoundInputs, assume_grh: bool, precision: Precision) -> Result<BoundReport> {
    if id.is_conditional() && !assume_grh {
        return Err(Error::GrhNotAcknowledged(id.name().to_string()));
    }
    check_known_inputs(id, inputs)?;
    let expr = build(id, inputs)?;
    let (integer_bound, enclosure, certificate) = upper_floor(&expr, precision)?;
    Ok(BoundReport {
        id,
        inputs: inputs.values.clone(),
        flags: inputs.flags.clone(),
        exact_symbolic: expr.to_string(),
        integer_bound,
        enclosure,
        certificate,
        precision,
        conditional: id.is_conditional(),
    })
}

/// The unconditional bound for a Kummer lattice compared against the lattice
/// formula with `[L:Q] = 2⁹·3·M(20)·d` substituted.
#[derive(Debug, Clone, PartialEq)]
pub struct IntroBoundReport {
    pub field: FundamentalDiscriminant,
    /// `2³⁴·3³·π⁻²·M(20)⁴·|disc Λ|²·d⁴`.
    pub closed_form: BoundReport,
    /// The lattice formula at the maximal descent degree.
    pub expanded: BoundReport,
    /// `expanded / closed_form`, exactly `3/|Δ_K|`.
    pub ratio: BigRational,
    /// `2⁻²·(2⁹·3)⁴ = 2³⁴·3⁴`, checked exactly.
    pub constant_identity: bool,
}

pub fn compose_intro_bound(disc: &BigInt, d: &BigInt, precision: Precision) -> Result<IntroBoundReport> {
    let field = parse_lattice(&LatticeDescriptor::new(LatticeKind::Kummer, 20, disc.clone())?)?.field;
    let closed_form = eval_bound(
        BoundId::UncondLattice,
        &BoundInputs::new().with("disc", disc.clone()).with("degree", d.clone()),
        false,
        precision,
    )?;
    if !d.is_positive() {
        return Err(Error::invalid("degree must be a positive integer"));
    }
    let l_degree = tower_constant("kummer_full")? * d;
    let expanded = eval_bound(
        BoundId::LatticeKIsog,
        &BoundInputs::new().with("disc", disc.clone()).with("degree", l_degree),
        false,
        precision,
    )?;
    let lhs = BigRational::new(BigInt::from(1536u32).pow(4u32), BigInt::from(4u8));
    let rhs = BigRational::from_integer(BigInt::from(2u8).pow(34u32) * BigInt::from(3u8).pow(4u32));
    let ratio = BigRational::new(BigInt::from(3u8), field.abs());
    Ok(IntroBoundReport { field, closed_form, expanded, ratio, constant_identity: lhs == rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(id: BoundId, inputs: BoundInputs) -> BigInt {
        eval_bound(id, &inputs, true, Precision::DEFAULT).unwrap().integer_bound
    }

    #[test]
    fn examples() {
        let pair = BoundInputs::new().with("f1", 1).with("f2", 1).with("field_disc", -4).with("m_degree", 2);
        assert_eq!(eval(BoundId::IsogPair, pair.clone()), BigInt::from(25));
        assert_eq!(eval(BoundId::IsogPair, pair.flag("class_number_one")), BigInt::from(16));
        let deg = BoundInputs::new().with("f1", 1).with("f2", 1).with("field_disc", -3);
        assert_eq!(eval(BoundId::IsogenyDegree, deg), BigInt::from(1));
        let mult = BoundInputs::new().with("g", 2).with("d", 3).with("rho", 4);
        assert_eq!(eval(BoundId::IsogenyBrauerMultiplier, mult), BigInt::from(9));
        // 2.73·(109 + 0) = 297.57
        assert_eq!(eval(BoundId::FaltingsGrh, BoundInputs::new().with("degree", 1)), BigInt::from(297));
    }

    #[test]
    fn grh_gating_and_labels() {
        let inputs = BoundInputs::new().with("degree", 2);
        let err = eval_bound(BoundId::FaltingsGrh, &inputs, false, Precision::DEFAULT).unwrap_err();
        assert!(matches!(err, Error::GrhNotAcknowledged(_)));
        for id in BoundId::ALL {
            assert_eq!(id.is_conditional(), id.name().contains("GRH"));
            assert_eq!(id.name().parse::<BoundId>().unwrap(), id);
        }
        assert!("nope".parse::<BoundId>().is_err());
    }

    #[test]
    fn input_validation() {
        let missing = BoundInputs::new().with("f1", 1);
        assert!(eval_bound(BoundId::IsogenyDegree, &missing, false, Precision::DEFAULT).is_err());
        let extra = BoundInputs::new().with("degree", 1).with("bogus", 1);
        assert!(eval_bound(BoundId::FaltingsGrh, &extra, true, Precision::DEFAULT).is_err());
        let bad_flag = BoundInputs::new().with("f1", 1).with("f2", 1).with("field_disc", -23).with("m_degree", 2);
        assert!(eval_bound(BoundId::IsogPair, &bad_flag.clone().flag("class_number_one"), false, Precision::DEFAULT).is_err());
        assert!(eval_bound(BoundId::IsogPair, &bad_flag.with("m_degree", 3), false, Precision::DEFAULT).is_err());
        let nonisog = BoundInputs::new().with("compositum_degree", 12).with("degree", 2);
        assert!(eval_bound(BoundId::NonisogGrh, &nonisog, true, Precision::DEFAULT).is_err());
        let rho = BoundInputs::new().with("g", 2).with("d", 3).with("rho", 5);
        assert!(eval_bound(BoundId::IsogenyBrauerMultiplier, &rho, false, Precision::DEFAULT).is_err());
        let both = BoundInputs::new().with("l_degree", 48).with("base_degree", 1);
        assert!(eval_bound(BoundId::AbGrh, &both, true, Precision::DEFAULT).is_err());
    }

    #[test]
    fn tower_constants() {
        assert_eq!(tower_constant("ab_endo").unwrap(), BigInt::from(48));
        let m20 = BigInt::from(minkowski_m(20).unwrap().value);
        let m18 = BigInt::from(minkowski_m(18).unwrap().value);
        assert_eq!(tower_constant("kummer_full").unwrap(), BigInt::from(512 * 3) * &m20);
        assert_eq!(tower_constant("kummer_nonisog").unwrap(), BigInt::from(64) * m18);
        assert_eq!(tower_constant("singular_cover").unwrap(), BigInt::from(1024 * 3) * m20);
        // base_degree expands through the constant
        let a = eval(BoundId::AbGrh, BoundInputs::new().with("base_degree", 1));
        let b = eval(BoundId::AbGrh, BoundInputs::new().with("l_degree", 48));
        assert_eq!(a, b);
    }

    #[test]
    fn every_formula_is_monotone_in_degree() {
        let cases: Vec<(BoundId, BoundInputs, &str)> = vec![
            (BoundId::UncondLattice, BoundInputs::new().with("disc", 64), "degree"),
            (BoundId::LatticeKIsog, BoundInputs::new().with("disc", 64), "degree"),
            (BoundId::AbLattice, BoundInputs::new().with("disc", -16), "l_degree"),
            (BoundId::AbGrh, BoundInputs::new(), "l_degree"),
            (BoundId::KummerGrh, BoundInputs::new(), "base_degree"),
            (BoundId::SingularCoverGrh, BoundInputs::new(), "degree"),
            (BoundId::IsogPairGrh, BoundInputs::new().with("m_over_k", 2), "degree"),
            (BoundId::KummerNonisogGrh, BoundInputs::new(), "degree"),
            (BoundId::IsogenyDegreeGrh, BoundInputs::new(), "degree"),
            (BoundId::FaltingsGrh, BoundInputs::new(), "degree"),
        ];
        for (id, base, name) in cases {
            let mut prev = BigInt::from(-1);
            for d in 1..=6 {
                let v = eval(id, base.clone().with(name, d));
                assert!(v >= prev, "{id} not monotone in {name}");
                prev = v;
            }
        }
    }

    #[test]
    fn intro_composition() {
        let r = compose_intro_bound(&BigInt::from(64), &BigInt::from(1), Precision::DEFAULT).unwrap();
        assert!(r.constant_identity);
        assert_eq!(r.ratio, BigRational::new(BigInt::from(3), BigInt::from(4)));
        assert!(r.expanded.integer_bound <= r.closed_form.integer_bound);
        assert!(compose_intro_bound(&BigInt::from(-5), &BigInt::from(1), Precision::DEFAULT).is_err());
    }
}
