//! Certified evaluation of positive real expressions with rational enclosures.
//!
//! An [`Expr`] is a product/sum/power tree over exact rationals, `π`, natural
//! logarithms and square roots. Evaluation returns an [`Interval`] of exact
//! rationals guaranteed to contain the true value, so `floor(hi)` is an
//! integer upper bound on any integer the expression bounds.
//!
//! Enclosures are nested across precisions: every primitive is computed by a
//! series whose upper (lower) partial bounds decrease (increase) with the
//! number of terms, and endpoints are rounded outward onto the decimal grid
//! `10^-(digits + 3)`, which refines as `digits` grows. Since all tree
//! operations are monotone, raising the precision can only shrink the final
//! enclosure.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::{Error, Result};

/// Working precision: enclosures of `π` have relative width about `10^-digits`,
/// logarithms and square roots are accurate to about `10^-(digits + 3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    /// `π ∈ [355/113·(1 − 10⁻⁶), 355/113]`, logarithms to `10⁻⁹`.
    pub const DEFAULT: Precision = Precision { digits: 6 };
    pub const FINE: Precision = Precision { digits: 12 };

    pub fn new(digits: u32) -> Result<Self> {
        if !(1..=200).contains(&digits) {
            return Err(Error::invalid(format!("precision digits must lie in [1, 200], got {digits}")));
        }
        Ok(Precision { digits })
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    fn grid(self) -> BigInt {
        BigInt::from(10u8).pow(self.digits + 3)
    }

    fn tolerance(self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(10u8).pow(self.digits + 4))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

/// A closed interval `[lo, hi]` of non-negative rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(v: BigRational) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn floor_hi(&self) -> BigInt {
        self.hi.floor().to_integer()
    }

    pub fn floor_lo(&self) -> BigInt {
        self.lo.floor().to_integer()
    }

    fn outward(&self, grid: &BigInt) -> Interval {
        Interval { lo: round_down(&self.lo, grid), hi: round_up(&self.hi, grid) }
    }

    fn intersect(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().min(other.hi.clone()),
        }
    }
}

fn round_down(x: &BigRational, grid: &BigInt) -> BigRational {
    if x.denom().is_one() {
        return x.clone();
    }
    BigRational::new((x * BigRational::from_integer(grid.clone())).floor().to_integer(), grid.clone())
}

fn round_up(x: &BigRational, grid: &BigInt) -> BigRational {
    if x.denom().is_one() {
        return x.clone();
    }
    BigRational::new((x * BigRational::from_integer(grid.clone())).ceil().to_integer(), grid.clone())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Enclosure of `π` at the given precision.
pub fn pi_enclosure(precision: Precision) -> Interval {
    let hi = rat(355, 113);
    let lo = &hi * (BigRational::one() - rat(1, 1_000_000));
    let coarse = Interval { lo, hi };
    if precision.digits <= 6 {
        return coarse;
    }
    // Machin: π = 16·atan(1/5) − 4·atan(1/239)
    let tol = precision.tolerance() / BigRational::from_integer(BigInt::from(20u8));
    let a = atan_inverse(5, &tol);
    let b = atan_inverse(239, &tol);
    let sixteen = BigRational::from_integer(BigInt::from(16u8));
    let four = BigRational::from_integer(BigInt::from(4u8));
    let machin = Interval {
        lo: &sixteen * &a.lo - &four * &b.hi,
        hi: &sixteen * &a.hi - &four * &b.lo,
    };
    machin.outward(&precision.grid()).intersect(&coarse)
}

/// `atan(1/x)` by its alternating series, bracketed by consecutive partial sums.
fn atan_inverse(x: u64, tol: &BigRational) -> Interval {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = x.clone();
    let mut sum = BigRational::zero();
    let mut j = 0u64;
    loop {
        let term = BigRational::new(BigInt::one(), BigInt::from(2 * j + 1) * &power);
        let next = if j % 2 == 0 { &sum + &term } else { &sum - &term };
        if &term <= tol && j > 0 {
            let (lo, hi) = if next < sum { (next, sum) } else { (sum, next) };
            return Interval { lo, hi };
        }
        sum = next;
        power *= &x2;
        j += 1;
    }
}

/// `ln(r)` for `1 ≤ r ≤ 2` via `2·atanh((r−1)/(r+1))`; upper bounds decrease
/// and lower bounds increase with the number of terms.
fn ln_reduced(r: &BigRational, tol: &BigRational) -> Interval {
    if r.is_one() {
        return Interval::point(BigRational::zero());
    }
    let y = (r - BigRational::one()) / (r + BigRational::one());
    let y2 = &y * &y;
    let one_minus_y2 = BigRational::one() - &y2;
    let two = BigRational::from_integer(BigInt::from(2u8));
    let mut power = y.clone();
    let mut sum = BigRational::zero();
    let mut j = 0u64;
    loop {
        sum += &two * &power / BigRational::from_integer(BigInt::from(2 * j + 1));
        power *= &y2;
        let tail = &two * &power
            / (BigRational::from_integer(BigInt::from(2 * j + 3)) * &one_minus_y2);
        if &tail <= tol {
            return Interval { hi: &sum + &tail, lo: sum };
        }
        j += 1;
    }
}

/// Enclosure of `ln(x)` for rational `x ≥ 1`.
pub fn ln_enclosure(x: &BigRational, precision: Precision) -> Result<Interval> {
    if x < &BigRational::one() {
        return Err(Error::invalid(format!("logarithm argument {x} is below 1")));
    }
    if x.is_one() {
        return Ok(Interval::point(BigRational::zero()));
    }
    // x = 2^k · r with 1 ≤ r < 2
    let k = x.floor().to_integer().bits() - 1;
    let r = x / BigRational::from_integer(BigInt::one() << k);
    let tol = precision.tolerance() / BigRational::from_integer(BigInt::from(k + 2));
    let reduced = ln_reduced(&r, &tol);
    let mut out = reduced;
    if k > 0 {
        let ln2 = ln_reduced(&BigRational::from_integer(BigInt::from(2u8)), &tol);
        let kk = BigRational::from_integer(BigInt::from(k));
        out = Interval { lo: out.lo + &kk * ln2.lo, hi: out.hi + &kk * ln2.hi };
    }
    Ok(out.outward(&precision.grid()))
}

/// Enclosure of `√x` for rational `x ≥ 0`.
pub fn sqrt_enclosure(x: &BigRational, precision: Precision) -> Result<Interval> {
    if x.is_negative() {
        return Err(Error::invalid(format!("square root of negative {x}")));
    }
    // √(p/q) = √(p·q)/q
    let pq = x.numer() * x.denom();
    let root = pq.sqrt();
    if &root * &root == pq {
        return Ok(Interval::point(BigRational::new(root, x.denom().clone())));
    }
    let scale = precision.grid();
    let scaled = (&pq * &scale * &scale).sqrt();
    let denom = x.denom() * &scale;
    Ok(Interval {
        lo: BigRational::new(scaled.clone(), denom.clone()),
        hi: BigRational::new(scaled + 1u8, denom),
    })
}

/// A positive real expression over exact rationals and `π`, `ln`, `√`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// An exact non-negative rational, optionally printed under a name.
    Const { value: BigRational, label: Option<String> },
    Pi,
    Ln(Box<Expr>),
    Sqrt(Box<Expr>),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, i32),
}

impl Expr {
    pub fn int(v: impl Into<BigInt>) -> Self {
        Expr::Const { value: BigRational::from_integer(v.into()), label: None }
    }

    pub fn uint(v: &BigUint) -> Self {
        Expr::int(BigInt::from(v.clone()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Expr::Const { value: rat(n, d), label: None }
    }

    /// A decimal literal such as `3.4`, kept exact as `34/10`.
    pub fn decimal(text: &str) -> Self {
        let (int, frac) = text.split_once('.').unwrap_or((text, ""));
        let digits: BigInt = format!("{int}{frac}").parse().expect("decimal literal");
        let value = BigRational::new(digits, BigInt::from(10u8).pow(frac.len() as u32));
        Expr::Const { value, label: Some(text.to_string()) }
    }

    pub fn named(label: impl Into<String>, value: impl Into<BigInt>) -> Self {
        Expr::Const { value: BigRational::from_integer(value.into()), label: Some(label.into()) }
    }

    pub fn ln(self) -> Self {
        Expr::Ln(Box::new(self))
    }

    pub fn sqrt(self) -> Self {
        Expr::Sqrt(Box::new(self))
    }

    pub fn pow(self, k: i32) -> Self {
        Expr::Pow(Box::new(self), k)
    }

    pub fn product(factors: Vec<Expr>) -> Self {
        Expr::Mul(factors)
    }

    pub fn sum(terms: Vec<Expr>) -> Self {
        Expr::Add(terms)
    }

    /// Evaluates to a rational enclosure, recording every transcendental
    /// enclosure used in `cert`.
    pub fn eval(&self, precision: Precision, cert: &mut Certificate) -> Result<Interval> {
        match self {
            Expr::Const { value, .. } => {
                if value.is_negative() {
                    return Err(Error::invalid(format!("negative constant {value}")));
                }
                Ok(Interval::point(value.clone()))
            }
            Expr::Pi => {
                let pi = pi_enclosure(precision);
                cert.pi = Some(pi.clone());
                Ok(pi)
            }
            Expr::Ln(arg) => {
                let a = arg.eval(precision, cert)?;
                let lo = ln_enclosure(&a.lo, precision)?.lo;
                let hi = ln_enclosure(&a.hi, precision)?.hi;
                let out = Interval { lo, hi };
                cert.logs.push((arg.to_string(), out.clone()));
                Ok(out)
            }
            Expr::Sqrt(arg) => {
                let a = arg.eval(precision, cert)?;
                let out = Interval {
                    lo: sqrt_enclosure(&a.lo, precision)?.lo,
                    hi: sqrt_enclosure(&a.hi, precision)?.hi,
                };
                cert.roots.push((arg.to_string(), out.clone()));
                Ok(out)
            }
            Expr::Add(terms) => {
                let mut acc = Interval::point(BigRational::zero());
                for t in terms {
                    let v = t.eval(precision, cert)?;
                    acc = Interval { lo: acc.lo + v.lo, hi: acc.hi + v.hi };
                }
                Ok(acc)
            }
            Expr::Mul(factors) => {
                let mut acc = Interval::point(BigRational::one());
                for f in factors {
                    let v = f.eval(precision, cert)?;
                    acc = Interval { lo: acc.lo * v.lo, hi: acc.hi * v.hi };
                }
                Ok(acc)
            }
            Expr::Pow(base, k) => {
                let v = base.eval(precision, cert)?;
                let e = k.unsigned_abs();
                if *k >= 0 {
                    return Ok(Interval { lo: v.lo.pow(e), hi: v.hi.pow(e) });
                }
                if !v.lo.is_positive() {
                    return Err(Error::invalid(format!("negative power of non-positive {base}")));
                }
                Ok(Interval { lo: v.hi.pow(e).recip(), hi: v.lo.pow(e).recip() })
            }
        }
    }
}

fn needs_parens(e: &Expr) -> bool {
    matches!(e, Expr::Add(_) | Expr::Mul(_))
        || matches!(e, Expr::Const { value, label: None } if !value.is_integer())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const { label: Some(l), .. } => write!(f, "{l}"),
            Expr::Const { value, label: None } => write!(f, "{value}"),
            Expr::Pi => write!(f, "pi"),
            Expr::Ln(a) => write!(f, "log({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Add(ts) => {
                let parts: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
                write!(f, "({})", parts.join(" + "))
            }
            Expr::Mul(fs) => {
                let parts: Vec<String> = fs
                    .iter()
                    .map(|x| match x {
                        Expr::Mul(_) => format!("({x})"),
                        _ => x.to_string(),
                    })
                    .collect();
                write!(f, "{}", parts.join(" * "))
            }
            Expr::Pow(b, k) => {
                if needs_parens(b) && !matches!(**b, Expr::Add(_)) {
                    write!(f, "({b})^{k}")
                } else {
                    write!(f, "{b}^{k}")
                }
            }
        }
    }
}

/// The rational enclosures that an evaluation relied on.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Certificate {
    pub pi: Option<Interval>,
    /// `(argument, enclosure of its natural log)`.
    pub logs: Vec<(String, Interval)>,
    pub roots: Vec<(String, Interval)>,
}

/// Evaluates `expr` and returns the certified integer upper bound `floor(hi)`
/// together with the enclosure and certificate.
pub fn upper_floor(expr: &Expr, precision: Precision) -> Result<(BigInt, Interval, Certificate)> {
    let mut cert = Certificate::default();
    let value = expr.eval(precision, &mut cert)?;
    Ok((value.floor_hi(), value, cert))
}

/// Decimal rendering of a rational truncated to `digits` places, for reports.
pub fn decimal_string(x: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u8).pow(digits);
    let scaled = (x * BigRational::from_integer(scale.clone())).floor().to_integer();
    let (int, frac) = scaled.div_mod_floor(&scale);
    if digits == 0 {
        return int.to_string();
    }
    format!("{int}.{:0>width$}", frac.to_string(), width = digits as usize)
}
