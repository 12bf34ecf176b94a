//! Imaginary quadratic fields and their orders.
//!
//! A field is identified by its fundamental discriminant `Δ_K < 0`, an order
//! by the pair `(Δ_K, f)` with discriminant `f²·Δ_K`. Class numbers of orders
//! come from the classical conductor formula
//!
//! ```text
//! h(O_f) = h_K · f / [O_K^× : O_f^×] · ∏_{p | f} (1 − (Δ_K/p)/p)
//! ```
//!
//! evaluated in exact rationals, with `h_K` itself obtained by counting
//! reduced positive-definite binary quadratic forms.
//!
//! All values are arbitrary precision. Form enumeration takes an exact `u64`
//! fast path whenever `|D| < 2^62`, where no intermediate can overflow.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::primes;
use crate::{Error, Result};

/// Fundamental discriminant of an imaginary quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FundamentalDiscriminant(BigInt);

impl FundamentalDiscriminant {
    /// Validates `value` as a negative fundamental discriminant.
    pub fn new(value: impl Into<BigInt>) -> Result<Self> {
        let value = value.into();
        if !value.is_negative() {
            return Err(Error::invalid(format!(
                "fundamental discriminant must be negative, got {value}"
            )));
        }
        let r = value.mod_floor(&BigInt::from(4u8));
        let ok = if r.is_one() {
            is_squarefree(&value)
        } else if r.is_zero() {
            let q: BigInt = &value / 4;
            let q4 = q.mod_floor(&BigInt::from(4u8));
            is_squarefree(&q) && (q4 == BigInt::from(2u8) || q4 == BigInt::from(3u8))
        } else {
            false
        };
        if ok {
            Ok(FundamentalDiscriminant(value))
        } else {
            Err(Error::invalid(format!("{value} is not a fundamental discriminant")))
        }
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }

    /// `|Δ_K|`.
    pub fn abs(&self) -> BigInt {
        self.0.abs()
    }

    /// Number of roots of unity in `O_K`: 4 for `Q(i)`, 6 for `Q(ζ₃)`, else 2.
    pub fn roots_of_unity(&self) -> u32 {
        match self.0.to_i64() {
            Some(-4) => 4,
            Some(-3) => 6,
            _ => 2,
        }
    }

    pub fn is_gaussian(&self) -> bool {
        self.0 == BigInt::from(-4)
    }

    pub fn is_eisenstein(&self) -> bool {
        self.0 == BigInt::from(-3)
    }

    pub fn is_sqrt_minus_seven(&self) -> bool {
        self.0 == BigInt::from(-7)
    }
}

impl fmt::Display for FundamentalDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The order of conductor `f` in an imaginary quadratic field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Order {
    field: FundamentalDiscriminant,
    conductor: BigInt,
}

impl Order {
    pub fn new(field: FundamentalDiscriminant, conductor: impl Into<BigInt>) -> Result<Self> {
        let conductor = conductor.into();
        if !conductor.is_positive() {
            return Err(Error::invalid(format!("conductor must be positive, got {conductor}")));
        }
        Ok(Order { field, conductor })
    }

    pub fn maximal(field: FundamentalDiscriminant) -> Self {
        Order { field, conductor: BigInt::one() }
    }

    pub fn field(&self) -> &FundamentalDiscriminant {
        &self.field
    }

    pub fn conductor(&self) -> &BigInt {
        &self.conductor
    }

    /// `f²·Δ_K`.
    pub fn discriminant(&self) -> BigInt {
        &self.conductor * &self.conductor * self.field.value()
    }

    pub fn unit_index(&self) -> UnitIndex {
        UnitIndex::of(&self.field, &self.conductor)
    }
}

/// `[O_K^× : O_f^×]`, which is 1, 2 or 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct UnitIndex(u8);

impl UnitIndex {
    pub fn of(field: &FundamentalDiscriminant, conductor: &BigInt) -> Self {
        if conductor.is_one() {
            return UnitIndex(1);
        }
        if field.is_gaussian() {
            UnitIndex(2)
        } else if field.is_eisenstein() {
            UnitIndex(3)
        } else {
            UnitIndex(1)
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

/// A binary quadratic form `a·x² + b·xy + c·y²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl QuadraticForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        QuadraticForm { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4u8) * &self.a * &self.c
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a.is_positive() && self.discriminant().is_negative()
    }

    /// `|b| ≤ a ≤ c`, with `b ≥ 0` on the boundary `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        if !self.is_positive_definite() {
            return false;
        }
        let abs_b = self.b.abs();
        if abs_b > self.a || self.a > self.c {
            return false;
        }
        if (abs_b == self.a || self.a == self.c) && self.b.is_negative() {
            return false;
        }
        true
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

fn is_squarefree(n: &BigInt) -> bool {
    if n.is_zero() {
        return false;
    }
    primes::prime_divisors(n)
        .iter()
        .all(|p| !(n % (p * p)).is_zero())
}

fn check_order_discriminant(n: &BigInt) -> Result<()> {
    if !n.is_negative() {
        return Err(Error::invalid(format!("discriminant must be negative, got {n}")));
    }
    let r = n.mod_floor(&BigInt::from(4u8));
    if !(r.is_zero() || r.is_one()) {
        return Err(Error::invalid(format!("{n} is not congruent to 0 or 1 mod 4")));
    }
    Ok(())
}

/// Splits an order discriminant `n = f²·Δ_K` into its field and conductor.
pub fn fundamental_discriminant(n: &BigInt) -> Result<(FundamentalDiscriminant, BigInt)> {
    check_order_discriminant(n)?;
    // n = -s·q² with s squarefree
    let mut s = BigInt::one();
    let mut q = BigInt::one();
    for p in primes::prime_divisors(n) {
        let e = count_power(n, &p);
        q *= num_traits::pow(p.clone(), (e / 2) as usize);
        if e % 2 == 1 {
            s *= &p;
        }
    }
    let s = -s;
    let (disc, conductor) = if s.mod_floor(&BigInt::from(4u8)).is_one() {
        (s, q)
    } else {
        // q is even here, since n ≡ 0 mod 4 and s ≡ 2, 3 mod 4
        (s * 4, q / 2)
    };
    let field = FundamentalDiscriminant::new(disc)
        .map_err(|e| Error::internal(format!("discriminant split of {n} failed: {e}")))?;
    Ok((field, conductor))
}

fn count_power(n: &BigInt, p: &BigInt) -> u32 {
    let mut n = n.abs();
    let mut e = 0;
    while (&n % p).is_zero() {
        n /= p;
        e += 1;
    }
    e
}

/// Kronecker symbol `(Δ/p)` for a prime `p`.
///
/// For odd `p` this is the Legendre symbol. For `p = 2` it is 0 when `Δ` is
/// even, 1 when `Δ ≡ ±1 (mod 8)` and −1 when `Δ ≡ ±3 (mod 8)`; on
/// discriminants this is the usual rule `1` for `Δ ≡ 1`, `−1` for `Δ ≡ 5 (mod 8)`.
pub fn kronecker_symbol(delta: &BigInt, p: &BigInt) -> Result<i8> {
    if !primes::is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if p == &BigInt::from(2u8) {
        let r = delta.mod_floor(&BigInt::from(8u8)).to_u8().unwrap_or(0);
        return Ok(match r {
            0 | 2 | 4 | 6 => 0,
            1 | 7 => 1,
            _ => -1,
        });
    }
    let a = delta.mod_floor(p);
    if a.is_zero() {
        return Ok(0);
    }
    let e = (p - 1u8) / 2u8;
    let r = a.modpow(&e, p);
    Ok(if r.is_one() { 1 } else { -1 })
}

fn kronecker_u64(delta: &BigInt, p: u64) -> i8 {
    kronecker_symbol(delta, &BigInt::from(p)).expect("caller passes a prime")
}

/// Counts primitive reduced positive-definite forms of discriminant `d < 0`,
/// which is `h(O)` for the order of that discriminant.
pub fn count_reduced_forms(d: &BigInt) -> Result<BigInt> {
    check_order_discriminant(d)?;
    if let Some(n) = d.abs().to_u64().filter(|&n| n < (1u64 << 62)) {
        return Ok(BigInt::from(count_reduced_forms_small(n)));
    }
    Ok(BigInt::from(reduced_forms(d)?.len()))
}

/// Exact counting for `|D| < 2^62`: every intermediate is at most `|D| + a² < 2^63`.
fn count_reduced_forms_small(n: u64) -> u64 {
    let parity = n % 2;
    let mut count = 0u64;
    let mut a = 1u64;
    while 3 * a * a <= n {
        let mut b = parity;
        while b <= a {
            let num = b * b + n;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                if c >= a && a.gcd(&b).gcd(&c) == 1 {
                    count += 1;
                    // (a, -b, c) is reduced too unless on the boundary
                    if b > 0 && b < a && a < c {
                        count += 1;
                    }
                }
            }
            b += 2;
        }
        a += 1;
    }
    count
}

/// All primitive reduced forms of discriminant `d`, ordered by `(a, b)`.
pub fn reduced_forms(d: &BigInt) -> Result<Vec<QuadraticForm>> {
    check_order_discriminant(d)?;
    let n = d.abs();
    let mut out = Vec::new();
    let mut a = BigInt::one();
    while BigInt::from(3u8) * &a * &a <= n {
        let four_a = BigInt::from(4u8) * &a;
        let mut b = -a.clone();
        while b <= a {
            let num = &b * &b - d;
            if (&num % &four_a).is_zero() {
                let form = QuadraticForm::new(a.clone(), b.clone(), &num / &four_a);
                if form.is_reduced() && form.a.gcd(&form.b).gcd(&form.c).is_one() {
                    out.push(form);
                }
            }
            b += 1u8;
        }
        a += 1u8;
    }
    Ok(out)
}

/// `h_K`, the number of reduced forms of discriminant `Δ_K`.
pub fn class_number_field(field: &FundamentalDiscriminant) -> BigInt {
    count_reduced_forms(field.value()).expect("fundamental discriminants are order discriminants")
}

/// `h(O_f)` via the conductor formula.
pub fn class_number_order(order: &Order) -> Result<BigInt> {
    let h_k = class_number_field(order.field());
    class_number_order_with(order, &h_k)
}

/// The conductor formula with a precomputed `h_K`.
pub fn class_number_order_with(order: &Order, h_k: &BigInt) -> Result<BigInt> {
    conductor_formula(order.field(), order.conductor(), h_k, order.unit_index().value())
}

fn conductor_formula(
    field: &FundamentalDiscriminant,
    f: &BigInt,
    h_k: &BigInt,
    unit_index: u8,
) -> Result<BigInt> {
    let delta = field.value();
    let mut value = BigRational::from_integer(h_k * f);
    for p in primes::prime_divisors(f) {
        let chi = kronecker_symbol(delta, &p)?;
        value *= BigRational::one() - BigRational::new(BigInt::from(chi), p);
    }
    // the unit index is divided out last so the product stays exact
    value /= BigRational::from_integer(BigInt::from(unit_index));
    if !value.is_integer() || !value.is_positive() {
        return Err(Error::internal(format!(
            "class number formula gave {value} for Δ_K = {delta}, f = {f}"
        )));
    }
    Ok(value.to_integer())
}

/// Largest `|Δ_K|` with class number exactly `h`, for `h = 1..=10`, from the
/// unconditional determination of all imaginary quadratic fields of small
/// class number (Watkins, 2004).
const LARGEST_DISCRIMINANT_BY_CLASS_NUMBER: [u64; 10] =
    [163, 427, 907, 1555, 2683, 3763, 5923, 6307, 10627, 13843];

/// Field counts `#{K : h_K = h}` for `h = 1..=10`, from the same source.
pub const FIELD_COUNT_BY_CLASS_NUMBER: [usize; 10] = [9, 18, 16, 54, 25, 51, 31, 131, 34, 87];

/// Whether a search up to `|Δ_K| ≤ bound` is known to find every field with
/// `h_K ≤ h_max`.
pub fn search_is_complete(h_max: u64, bound: u64) -> bool {
    if h_max == 0 {
        return true;
    }
    if h_max > LARGEST_DISCRIMINANT_BY_CLASS_NUMBER.len() as u64 {
        return false;
    }
    let needed = LARGEST_DISCRIMINANT_BY_CLASS_NUMBER[..h_max as usize]
        .iter()
        .copied()
        .max()
        .unwrap_or(0);
    bound >= needed
}

/// Fields with `h_K ≤ h_max` and `|Δ_K| ≤ search_bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldEnumeration {
    pub h_max: u64,
    pub search_bound: u64,
    /// `(Δ_K, h_K)` sorted by `|Δ_K|`.
    pub fields: Vec<(FundamentalDiscriminant, BigInt)>,
    /// True only when the literature table certifies nothing lies beyond the bound.
    pub certified_complete: bool,
}

impl FieldEnumeration {
    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn discriminants(&self) -> impl Iterator<Item = &FundamentalDiscriminant> {
        self.fields.iter().map(|(d, _)| d)
    }
}

pub fn enumerate_fields_by_class_number(h_max: u64, search_bound: u64) -> FieldEnumeration {
    let fields = if h_max == 0 || search_bound < 3 {
        Vec::new()
    } else {
        let cap = BigInt::from(h_max);
        (3..=search_bound)
            .into_par_iter()
            .filter_map(|n| {
                let field = FundamentalDiscriminant::new(-BigInt::from(n)).ok()?;
                let h = class_number_field(&field);
                (h <= cap).then_some((field, h))
            })
            .collect()
    };
    FieldEnumeration {
        h_max,
        search_bound,
        fields,
        certified_complete: search_is_complete(h_max, search_bound),
    }
}

/// `(Δ_K/p)` for a small prime, used by other modules.
pub(crate) fn chi(field: &FundamentalDiscriminant, p: u64) -> i8 {
    kronecker_u64(field.value(), p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(n: i64) -> FundamentalDiscriminant {
        FundamentalDiscriminant::new(n).unwrap()
    }

    fn order(d: i64, f: i64) -> Order {
        Order::new(fd(d), f).unwrap()
    }

    #[test]
    fn fundamental_discriminant_validation() {
        for d in [-3, -4, -7, -8, -11, -15, -20, -24, -163] {
            assert!(FundamentalDiscriminant::new(d).is_ok(), "{d}");
        }
        for d in [-1, -2, -12, -16, -5, -9, -28, 5, 0] {
            assert!(FundamentalDiscriminant::new(d).is_err(), "{d}");
        }
    }

    #[test]
    fn splits_order_discriminants() {
        let split = |n: i64| {
            let (d, f) = fundamental_discriminant(&BigInt::from(n)).unwrap();
            (d.value().to_i64().unwrap(), f.to_i64().unwrap())
        };
        assert_eq!(split(-4), (-4, 1));
        assert_eq!(split(-16), (-4, 2));
        assert_eq!(split(-12), (-3, 2));
        assert_eq!(split(-3 * 36), (-3, 6));
        assert_eq!(split(-8 * 9), (-8, 3));
        assert_eq!(split(-7 * 4), (-7, 2));
        assert!(fundamental_discriminant(&BigInt::from(4)).is_err());
        assert!(fundamental_discriminant(&BigInt::from(-5)).is_err());
        assert!(fundamental_discriminant(&BigInt::from(-6)).is_err());
    }

    #[test]
    fn kronecker_at_two_and_odd_primes() {
        let k = |d: i64, p: i64| kronecker_symbol(&BigInt::from(d), &BigInt::from(p)).unwrap();
        assert_eq!(k(-4, 2), 0);
        assert_eq!(k(-7, 2), 1);
        assert_eq!(k(-3, 2), -1);
        assert_eq!(k(-4, 3), -1);
        assert_eq!(k(-4, 5), 1);
        assert_eq!(k(-3, 3), 0);
        assert_eq!(k(-20, 3), 1);
        assert!(kronecker_symbol(&BigInt::from(-4), &BigInt::from(9)).is_err());
    }

    #[test]
    fn reduced_form_predicate() {
        assert!(QuadraticForm::new(1, 0, 5).is_reduced());
        assert!(QuadraticForm::new(2, 2, 3).is_reduced());
        assert!(!QuadraticForm::new(2, -2, 3).is_reduced());
        assert!(!QuadraticForm::new(3, 2, 2).is_reduced());
        assert!(!QuadraticForm::new(-1, 0, -5).is_reduced());
    }

    #[test]
    fn field_class_numbers() {
        assert_eq!(class_number_field(&fd(-4)), BigInt::from(1));
        assert_eq!(class_number_field(&fd(-3)), BigInt::from(1));
        assert_eq!(class_number_field(&fd(-20)), BigInt::from(2));
        let forms = reduced_forms(&BigInt::from(-20)).unwrap();
        assert_eq!(forms, vec![QuadraticForm::new(1, 0, 5), QuadraticForm::new(2, 2, 3)]);
        assert_eq!(class_number_field(&fd(-23)), BigInt::from(3));
        assert_eq!(class_number_field(&fd(-56)), BigInt::from(4));
    }

    #[test]
    fn only_primitive_forms_count() {
        // (2, 0, 2) is reduced of discriminant −16 but not primitive
        assert_eq!(count_reduced_forms(&BigInt::from(-16)).unwrap(), BigInt::from(1));
        assert_eq!(count_reduced_forms(&BigInt::from(-36)).unwrap(), BigInt::from(2));
        for (d, f) in [(-4, 3), (-3, 6), (-7, 4), (-20, 3)] {
            let o = order(d, f);
            assert_eq!(count_reduced_forms(&o.discriminant()).unwrap(), class_number_order(&o).unwrap());
        }
    }

    #[test]
    fn fast_and_generic_counts_agree() {
        for n in (3..2000u64).filter(|n| n % 4 == 0 || n % 4 == 3) {
            let d = -BigInt::from(n);
            assert_eq!(
                BigInt::from(count_reduced_forms_small(n)),
                BigInt::from(reduced_forms(&d).unwrap().len()),
                "D = -{n}"
            );
        }
    }

    #[test]
    fn order_class_numbers() {
        let h = |d, f| class_number_order(&order(d, f)).unwrap().to_i64().unwrap();
        assert_eq!(h(-4, 4), 2);
        assert_eq!(h(-3, 6), 3);
        assert_eq!(h(-7, 3), 4);
        assert_eq!(h(-4, 2), 1);
        assert_eq!(h(-3, 7), 2);
    }

    #[test]
    fn non_integral_formula_is_internal_error() {
        // a wrong unit index breaks integrality: 1·2·(1 + 1/2)/5 = 3/5
        let err = conductor_formula(&fd(-3), &BigInt::from(2), &BigInt::one(), 5);
        assert!(matches!(err, Err(Error::Internal(_))));
        let ok = conductor_formula(&fd(-3), &BigInt::from(2), &BigInt::one(), 3);
        assert_eq!(ok.unwrap(), BigInt::one());
    }

    #[test]
    fn unit_index_cases() {
        assert_eq!(order(-4, 2).unit_index().value(), 2);
        assert_eq!(order(-3, 5).unit_index().value(), 3);
        assert_eq!(order(-4, 1).unit_index().value(), 1);
        assert_eq!(order(-7, 9).unit_index().value(), 1);
    }

    #[test]
    fn field_enumeration() {
        let one = enumerate_fields_by_class_number(1, 200);
        assert_eq!(one.len(), 9);
        assert!(one.certified_complete);
        let small = enumerate_fields_by_class_number(1, 10);
        let ds: Vec<i64> = small.discriminants().map(|d| d.value().to_i64().unwrap()).collect();
        assert_eq!(ds, vec![-3, -4, -7, -8]);
        assert!(!small.certified_complete);
        assert!(enumerate_fields_by_class_number(0, 100).is_empty());
    }
}
