//! Conductor bounds and censuses of CM elliptic curves of bounded degree,
//! plus the resulting bounds on the number of singular K3 surfaces.
//!
//! Permissibility is approximated by its necessary condition
//! `h(O_f) ≤ d` together with the conductor bound, so per-field counts are
//! upper bounds except at the handful of small cases where exact values are
//! known.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::certified::{upper_floor, Expr, Precision};
use crate::minkowski::minkowski_m;
use crate::primes::divisors;
use crate::quadratic::{
    class_number_field, class_number_order_with, enumerate_fields_by_class_number,
    FundamentalDiscriminant, Order,
};
use crate::{Error, Result};

/// Which clause of the conductor bound produced the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConductorCase {
    SqrtMinusSeven,
    Gaussian,
    Eisenstein,
    Generic,
    /// The universal `3d²` cap was sharper than the field clause.
    Universal,
}

impl ConductorCase {
    pub fn label(self) -> &'static str {
        match self {
            ConductorCase::SqrtMinusSeven => "sqrt(-7): max(d^2, 2)",
            ConductorCase::Gaussian => "Q(i): max(d^2, 5)",
            ConductorCase::Eisenstein => "Q(zeta_3): max(d^2, 7)",
            ConductorCase::Generic => "generic: d^2",
            ConductorCase::Universal => "all fields: 3 d^2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConductorBoundReport {
    /// `None` for the field-independent bound.
    pub field: Option<FundamentalDiscriminant>,
    pub degree: u64,
    pub bound: u64,
    pub case: ConductorCase,
}

fn check_degree(d: u64) -> Result<()> {
    if d == 0 {
        return Err(Error::invalid("degree must be a positive integer"));
    }
    if d > 1 << 20 {
        return Err(Error::invalid(format!("degree {d} is too large to census")));
    }
    Ok(())
}

/// Largest conductor `f` of an order in `K` with `[K_f : K] = d`.
pub fn conductor_bound(field: &FundamentalDiscriminant, d: u64) -> Result<ConductorBoundReport> {
    check_degree(d)?;
    let sq = d * d;
    let (clause, case) = if field.is_sqrt_minus_seven() {
        (sq.max(2), ConductorCase::SqrtMinusSeven)
    } else if field.is_gaussian() {
        (sq.max(5), ConductorCase::Gaussian)
    } else if field.is_eisenstein() {
        (sq.max(7), ConductorCase::Eisenstein)
    } else {
        (sq, ConductorCase::Generic)
    };
    let (bound, case) = if 3 * sq < clause { (3 * sq, ConductorCase::Universal) } else { (clause, case) };
    Ok(ConductorBoundReport { field: Some(field.clone()), degree: d, bound, case })
}

/// Conductor bound in terms of the degree `[k : Q]` of a field of definition.
pub fn conductor_bound_over_degree(d: u64) -> Result<ConductorBoundReport> {
    check_degree(d)?;
    let sq = d * d;
    let (bound, case) = if 3 * sq < sq.max(7) {
        (3 * sq, ConductorCase::Universal)
    } else {
        (sq.max(7), ConductorCase::Eisenstein)
    };
    Ok(ConductorBoundReport { field: None, degree: d, bound, case })
}

/// Conductors `f ≤ conductor_bound(K, d)` with `h(O_f) ≤ d`, with their class
/// numbers. This is a superset of the truly `d`-permissible conductors.
pub fn d_permissible_conductors(field: &FundamentalDiscriminant, d: u64) -> Result<Vec<(u64, BigInt)>> {
    let bound = conductor_bound(field, d)?.bound;
    let h_k = class_number_field(field);
    let cap = BigInt::from(d);
    if h_k > cap {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for f in 1..=bound {
        let h = class_number_order_with(&Order::new(field.clone(), f)?, &h_k)?;
        if h <= cap {
            out.push((f, h));
        }
    }
    Ok(out)
}

/// The four `(d, Δ_K)` pairs where the per-field count exceeds `d³`.
fn exceptional_count(field: &FundamentalDiscriminant, d: u64) -> Option<u64> {
    match (d, field.value().to_i64()?) {
        (1, -7) => Some(2),
        (1, -4) => Some(2),
        (1, -3) => Some(3),
        (2, -3) => Some(9),
        _ => None,
    }
}

pub fn is_exceptional(field: &FundamentalDiscriminant, d: u64) -> bool {
    exceptional_count(field, d).is_some()
}

/// Number of `C`-isomorphism classes of elliptic curves with CM by an order
/// in `K` definable over a field of degree `d` (an upper bound in general).
pub fn cm_count_per_field(field: &FundamentalDiscriminant, d: u64) -> Result<BigInt> {
    if let Some(exact) = exceptional_count(field, d) {
        return Ok(BigInt::from(exact));
    }
    Ok(d_permissible_conductors(field, d)?.into_iter().map(|(_, h)| h).sum())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub degree: u64,
    pub search_bound: u64,
    pub per_field_counts: Vec<(FundamentalDiscriminant, BigInt)>,
    pub total: BigInt,
    pub certified_complete: bool,
    /// `d³ · #fields`, the closed-form bound (reported for `d ≥ 2`).
    pub closed_form_bound: Option<BigInt>,
}

pub fn cm_count_total(d: u64, search_bound: u64) -> Result<CensusReport> {
    check_degree(d)?;
    let fields = enumerate_fields_by_class_number(d, search_bound);
    let per_field_counts: Vec<(FundamentalDiscriminant, BigInt)> = fields
        .fields
        .par_iter()
        .map(|(k, _)| cm_count_per_field(k, d).map(|c| (k.clone(), c)))
        .collect::<Result<_>>()?;
    let total: BigInt = per_field_counts.iter().map(|(_, c)| c).sum();
    if d == 1 && fields.certified_complete && total != BigInt::from(13) {
        return Err(Error::internal(format!("rational CM census gave {total}, expected 13")));
    }
    let closed_form_bound =
        (d >= 2).then(|| BigInt::from(d).pow(3) * BigInt::from(per_field_counts.len()));
    Ok(CensusReport {
        degree: d,
        search_bound,
        per_field_counts,
        total,
        certified_complete: fields.certified_complete,
        closed_form_bound,
    })
}

fn harmonic_form(d: u64, field_count: u64, scale: Option<BigInt>) -> Expr {
    // 3·(s·d)³·(ln(3·(s·d)²) + 1)·N
    let sd = match &scale {
        Some(m) => Expr::product(vec![Expr::named("M(20)", m.clone()), Expr::int(d)]),
        None => Expr::int(d),
    };
    Expr::product(vec![
        Expr::int(3),
        sd.clone().pow(3),
        Expr::sum(vec![Expr::product(vec![Expr::int(3), sd.pow(2)]).ln(), Expr::int(1)]),
        Expr::int(field_count),
    ])
}

/// `floor(3d³(ln(3d²) + 1)·N)`, bounding singular K3 surfaces over fields of
/// degree `d` given `N` imaginary quadratic fields with `h_K ≤ d`.
pub fn singular_k3_bound(d: u64, field_count: u64) -> Result<BigInt> {
    check_degree(d)?;
    if field_count == 0 {
        return Ok(BigInt::zero());
    }
    Ok(upper_floor(&harmonic_form(d, field_count, None), Precision::DEFAULT)?.0)
}

/// `Σ_K Σ_{f ≤ 3d²} Σ_{g | f} min(h(O_g), d)` over fields with `h_K ≤ d` and
/// `|Δ_K| ≤ search_bound`.
pub fn singular_k3_refined_sum(d: u64, search_bound: u64) -> Result<BigInt> {
    check_degree(d)?;
    let fields = enumerate_fields_by_class_number(d, search_bound);
    let cap = BigInt::from(d);
    let fmax = 3 * d * d;
    let parts: Vec<BigInt> = fields
        .fields
        .par_iter()
        .map(|(k, h_k)| -> Result<BigInt> {
            let mut capped = vec![BigInt::zero(); fmax as usize + 1];
            for (g, slot) in capped.iter_mut().enumerate().skip(1) {
                let h = class_number_order_with(&Order::new(k.clone(), g as u64)?, h_k)?;
                *slot = h.min(cap.clone());
            }
            let mut sum = BigInt::zero();
            for f in 1..=fmax {
                for g in divisors(f) {
                    sum += &capped[g as usize];
                }
            }
            Ok(sum)
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().sum())
}

/// The rank-independent version with `M(20)·d` in place of `d`.
pub fn singular_k3_strong_bound(d: u64, field_count: u64) -> Result<BigInt> {
    check_degree(d)?;
    if field_count == 0 {
        return Ok(BigInt::zero());
    }
    let m20 = BigInt::from(minkowski_m(20)?.value);
    Ok(upper_floor(&harmonic_form(d, field_count, Some(m20)), Precision::DEFAULT)?.0)
}

/// Whether `cm_count_per_field(K, d) ≤ d³` is expected.
pub fn within_cubic_bound(count: &BigInt, d: u64) -> bool {
    count <= &BigInt::from(d).pow(3)
}
