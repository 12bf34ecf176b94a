//! Minkowski's constant `M(n)`: the least common multiple of the orders of
//! the finite subgroups of `GL_n(Z)`.
//!
//! For each prime `p ≤ n + 1` the exponent of `p` in `M(n)` is
//! `Σ_{i ≥ 0} ⌊n / (p^i·(p − 1))⌋`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow};

use crate::primes::primes_up_to;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinkowskiConstant {
    pub n: u32,
    pub value: BigUint,
    /// `(p, e_p)` with `e_p > 0`, increasing in `p`.
    pub factorization: Vec<(u64, u32)>,
}

impl fmt::Display for MinkowskiConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factorization
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

fn exponent(n: u64, p: u64) -> u32 {
    let mut e = 0u64;
    let mut denom = p - 1;
    while denom <= n {
        e += n / denom;
        denom *= p;
    }
    e as u32
}

pub fn minkowski_m(n: u32) -> Result<MinkowskiConstant> {
    if n == 0 {
        return Err(Error::invalid("Minkowski constant needs n >= 1"));
    }
    let factorization: Vec<(u64, u32)> = primes_up_to(n as u64 + 1)
        .into_iter()
        .map(|p| (p, exponent(n as u64, p)))
        .filter(|&(_, e)| e > 0)
        .collect();
    let value = factorization
        .iter()
        .fold(BigUint::one(), |acc, &(p, e)| acc * BigUint::from(p).pow(e));
    Ok(MinkowskiConstant { n, value, factorization })
}

/// `M(r)^r`, the divisibility bound on the algebraic Brauer group of a K3
/// surface of geometric Picard rank `r`.
pub fn algebraic_brauer_bound(r: u32) -> Result<BigUint> {
    if !(1..=20).contains(&r) {
        return Err(Error::invalid(format!(
            "Picard rank of a K3 surface lies in [1, 20], got {r}"
        )));
    }
    Ok(minkowski_m(r)?.value.pow(r))
}
