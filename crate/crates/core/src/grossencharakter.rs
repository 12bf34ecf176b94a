//! Sampling the Grössencharakter of a CM elliptic curve over `Q`.
//!
//! For a good ordinary prime `p`, `ψ(p)` is the root of `T² − a_p T + p`
//! in `O_K`; writing it as `x + yω` with `ω = (Δ_K + √Δ_K)/2`, it lies in the
//! order `Z + ℓⁿ O_K` exactly when `ℓⁿ | y`. The minimum of `ord_ℓ(y)` over
//! sampled primes is therefore an upper bound on `m_ℓ(E)` that can only
//! drop as more primes are sampled.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::primes::{is_prime_u64, primes_up_to, valuation};
use crate::quadratic::FundamentalDiscriminant;
use crate::{Error, Result};

/// Largest prime accepted by the naive point count.
pub const MAX_POINT_COUNT_PRIME: u64 = 1_000_000;
/// Largest sampling budget for [`estimate_m`]; total work is quadratic in it.
pub const MAX_PRIME_BUDGET: u64 = 100_000;

/// `y² = x³ + a4·x + a6` over `Q`, with CM by the asserted order discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveOverQ {
    pub a4: BigInt,
    pub a6: BigInt,
    pub cm_disc: BigInt,
}

impl CurveOverQ {
    pub fn new(a4: impl Into<BigInt>, a6: impl Into<BigInt>, cm_disc: impl Into<BigInt>) -> Result<Self> {
        let curve = CurveOverQ { a4: a4.into(), a6: a6.into(), cm_disc: cm_disc.into() };
        if curve.discriminant_core().is_zero() {
            return Err(Error::invalid(format!(
                "y^2 = x^3 + {}x + {} is singular",
                curve.a4, curve.a6
            )));
        }
        Ok(curve)
    }

    /// `4a4³ + 27a6²`, which vanishes exactly on singular curves.
    pub fn discriminant_core(&self) -> BigInt {
        BigInt::from(4u8) * &self.a4 * &self.a4 * &self.a4 + BigInt::from(27u8) * &self.a6 * &self.a6
    }

    pub fn is_good_prime(&self, p: u64) -> bool {
        p > 3 && !(self.discriminant_core() % BigInt::from(p)).is_zero()
    }

    fn field(&self) -> Result<FundamentalDiscriminant> {
        FundamentalDiscriminant::new(self.cm_disc.clone()).map_err(|_| {
            Error::invalid(format!(
                "m_l is only defined here for CM by a maximal order; {} is not a fundamental discriminant",
                self.cm_disc
            ))
        })
    }
}

fn residue(v: &BigInt, p: u64) -> u64 {
    let r = v % BigInt::from(p);
    let r = if r.is_negative() { r + p } else { r };
    r.to_u64().expect("residue below p")
}

/// `a_p = p + 1 − #E(F_p)`, by summing Legendre symbols from a table of squares.
pub fn count_points_ap(curve: &CurveOverQ, p: u64) -> Result<i64> {
    if !is_prime_u64(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if p > MAX_POINT_COUNT_PRIME {
        return Err(Error::invalid(format!("naive point count is limited to p <= {MAX_POINT_COUNT_PRIME}")));
    }
    if !curve.is_good_prime(p) {
        return Err(Error::invalid(format!("{p} is a prime of bad reduction (or divides 6)")));
    }
    let (a4, a6) = (residue(&curve.a4, p), residue(&curve.a6, p));
    let mut square = vec![false; p as usize];
    for y in 0..p {
        square[(y * y % p) as usize] = true;
    }
    let mut sum = 0i64;
    for x in 1..p {
        let rhs = ((x * x % p * x % p) + a4 * x % p + a6) % p;
        if rhs != 0 {
            sum += if square[rhs as usize] { 1 } else { -1 };
        }
    }
    // x = 0
    if a6 != 0 {
        sum += if square[a6 as usize] { 1 } else { -1 };
    }
    Ok(-sum)
}

/// `ψ = x + y·ω` with `ω = (Δ_K + √Δ_K)/2`, determined up to conjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiValue {
    pub x: BigInt,
    pub y: BigInt,
    pub p: u64,
    pub field: FundamentalDiscriminant,
}

impl PsiValue {
    /// `N(x + yω) = x² + Δ·xy + (Δ² − Δ)/4·y²`.
    pub fn norm(&self) -> BigInt {
        let d = self.field.value();
        let n_omega = (d * d - d) / 4;
        &self.x * &self.x + d * &self.x * &self.y + n_omega * &self.y * &self.y
    }

    pub fn trace(&self) -> BigInt {
        BigInt::from(2u8) * &self.x + self.field.value() * &self.y
    }

    /// `ord_ℓ(y)`: the largest `n` with `ψ ∈ Z + ℓⁿ O_K`.
    pub fn valuation(&self, l: u64) -> u32 {
        valuation(&self.y, l)
    }
}

pub fn psi_from_ap(a_p: i64, p: u64, field: &FundamentalDiscriminant) -> Result<PsiValue> {
    if a_p == 0 {
        return Err(Error::invalid(format!("a_{p} = 0: supersingular prime carries no psi data")));
    }
    let a = BigInt::from(a_p);
    let n = &a * &a - BigInt::from(4 * p);
    if !n.is_negative() {
        return Err(Error::invalid(format!("a_{p} = {a_p} violates the Hasse bound")));
    }
    let (t2, r) = (&n / field.value(), &n % field.value());
    let t = t2.sqrt();
    if !r.is_zero() || &t * &t != t2 {
        return Err(Error::invalid(format!(
            "a_p^2 - 4p = {n} is not t^2 * {}; wrong CM field for this curve?",
            field.value()
        )));
    }
    let x = (&a - &t * field.value()) / 2;
    let psi = PsiValue { x, y: t, p, field: field.clone() };
    if psi.norm() != BigInt::from(p) || psi.trace() != a {
        return Err(Error::internal(format!("psi reconstruction failed at p = {p}")));
    }
    Ok(psi)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MEstimate {
    pub l: u64,
    /// Upper bound `m̂ ≥ m_ℓ(E)`.
    pub m_hat: u32,
    pub samples_used: usize,
    /// A sampled prime attaining the minimum.
    pub witness: u64,
}

/// Samples ordinary good primes `5 ≤ p ≤ prime_budget`, `p ≠ ℓ`, and returns
/// the least `ord_ℓ(y(ψ(p)))`.
pub fn estimate_m(curve: &CurveOverQ, l: u64, prime_budget: u64) -> Result<MEstimate> {
    if !is_prime_u64(l) {
        return Err(Error::invalid(format!("{l} is not prime")));
    }
    if prime_budget > MAX_PRIME_BUDGET {
        return Err(Error::invalid(format!("prime budget is limited to {MAX_PRIME_BUDGET}")));
    }
    let field = curve.field()?;
    let samples: Vec<(u64, u32)> = primes_up_to(prime_budget)
        .into_par_iter()
        .filter(|&p| p >= 5 && p != l && curve.is_good_prime(p))
        .map(|p| -> Result<Option<(u64, u32)>> {
            let a_p = count_points_ap(curve, p)?;
            if a_p == 0 {
                return Ok(None);
            }
            Ok(Some((p, psi_from_ap(a_p, p, &field)?.valuation(l))))
        })
        .filter_map(|r| r.transpose())
        .collect::<Result<_>>()?;
    let &(witness, m_hat) = samples
        .iter()
        .min_by_key(|&&(p, v)| (v, p))
        .ok_or_else(|| Error::invalid(format!("no ordinary good prime up to {prime_budget}")))?;
    Ok(MEstimate { l, m_hat, samples_used: samples.len(), witness })
}
