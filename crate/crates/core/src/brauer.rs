//! The transcendental Brauer group of `E × E` for a CM elliptic curve `E`:
//! its `ℓ`-primary shape, order bounds for non-maximal orders and the
//! uniform bounds in terms of the degree of the field of definition.
//!
//! Everything here takes the valuations `m_ℓ` as inputs; estimating them is
//! the job of [`crate::grossencharakter`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed};

use crate::primes::{is_prime_u64, primes_up_to, valuation};
use crate::quadratic::{chi, FundamentalDiscriminant};
use crate::{Error, Result};

/// Galois data of `E/k` needed to pin down the shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GaloisFlags {
    /// `K ⊂ k`.
    pub cm_field_in_base: bool,
    /// `E[2] = E[2](k)`.
    pub two_torsion_rational: bool,
}

/// A finite abelian group as a list of cyclic factor orders, trivial factors
/// omitted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BrauerShape {
    pub cyclic_factors: Vec<BigInt>,
}

impl BrauerShape {
    fn from_factors(factors: impl IntoIterator<Item = BigInt>) -> Self {
        BrauerShape { cyclic_factors: factors.into_iter().filter(|n| !n.is_one()).collect() }
    }

    pub fn order(&self) -> BigInt {
        self.cyclic_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.cyclic_factors.is_empty()
    }
}

impl fmt::Display for BrauerShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.cyclic_factors.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

fn check_prime(l: u64) -> Result<()> {
    if !is_prime_u64(l) {
        return Err(Error::invalid(format!("{l} is not prime")));
    }
    Ok(())
}

fn prime_power(l: u64, e: u32) -> BigInt {
    BigInt::from(l).pow(e)
}

/// `ℓ`-part of `Br(E × E)/Br₁(E × E)` for `E` with CM by `O_K` and
/// `m = m_ℓ(E)`.
pub fn brauer_shape_maximal(l: u64, m: u32, flags: GaloisFlags) -> Result<BrauerShape> {
    check_prime(l)?;
    // E[2] = E[2](k) forces m₂(E) ≥ 1
    if l == 2 && flags.two_torsion_rational && m == 0 {
        return Err(Error::invalid("rational 2-torsion forces m_2 >= 1"));
    }
    let q = prime_power(l, m);
    Ok(if flags.cm_field_in_base {
        BrauerShape::from_factors([q.clone(), q])
    } else if l == 2 && flags.two_torsion_rational {
        BrauerShape::from_factors([q, BigInt::from(2u8)])
    } else {
        BrauerShape::from_factors([q])
    })
}

fn check_positive(name: &str, v: &BigInt) -> Result<()> {
    if !v.is_positive() {
        return Err(Error::invalid(format!("{name} must be a positive integer, got {v}")));
    }
    Ok(())
}

/// Structure of `End_{Γ_k}(E[n])`-fixed quotient used to bound denominators.
pub fn fixed_endomorphisms(
    f: &BigInt,
    field: &FundamentalDiscriminant,
    n: &BigInt,
    cm_field_in_base: bool,
) -> Result<BrauerShape> {
    check_positive("conductor", f)?;
    check_positive("n", n)?;
    Ok(if cm_field_in_base {
        BrauerShape::from_factors([n.clone(), n.clone()])
    } else if (f * field.value()).is_even() && n.is_even() {
        BrauerShape::from_factors([n.clone(), BigInt::from(2u8)])
    } else {
        BrauerShape::from_factors([n.clone()])
    })
}

/// Upper bound on the order of the `ℓ`-part for `E` with CM by the order of
/// conductor `f`, in terms of `m' = m_ℓ(E')` for an `f`-isogenous `E'` with CM
/// by `O_K`.
///
/// `isogenous_two_torsion_rational` is `E'[2] = E'[2](k)` when known; `None`
/// falls back to the weaker bound.
pub fn brauer_order_bound_nonmaximal(
    l: u64,
    f: &BigInt,
    m_prime: u32,
    flags: GaloisFlags,
    field: &FundamentalDiscriminant,
    isogenous_two_torsion_rational: Option<bool>,
) -> Result<BigInt> {
    check_prime(l)?;
    check_positive("conductor", f)?;
    let two_divides_fd = (f * field.value()).is_even();
    let two_divides_d = field.value().is_even();
    if !flags.cm_field_in_base && flags.two_torsion_rational && !two_divides_fd {
        return Err(Error::invalid("K not in k with E[2] rational requires 2 | f * Delta_K"));
    }
    if let Some(e2) = isogenous_two_torsion_rational {
        if f.is_odd() && e2 != flags.two_torsion_rational {
            return Err(Error::invalid("for odd f, E[2] and E'[2] are rational together or not at all"));
        }
        if e2 && !flags.cm_field_in_base && !two_divides_d {
            return Err(Error::invalid("K not in k with E'[2] rational requires 2 | Delta_K"));
        }
        if e2 && l == 2 && m_prime == 0 {
            return Err(Error::invalid("rational 2-torsion on E' forces m_2(E') >= 1"));
        }
    }
    let e = m_prime + valuation(f, l);
    Ok(if flags.cm_field_in_base {
        prime_power(l, 2 * e)
    } else if l == 2 && flags.two_torsion_rational {
        let loose = two_divides_d && isogenous_two_torsion_rational != Some(true);
        let a_max = if loose { e + 1 } else { e };
        prime_power(2, a_max + 1)
    } else {
        prime_power(l, e)
    })
}

/// `[O_K^× : O_ℓ^×]` for any prime `ℓ`: 2 for `Q(i)`, 3 for `Q(ζ₃)`, else 1.
fn unit_index(field: &FundamentalDiscriminant) -> u64 {
    field.roots_of_unity() as u64 / 2
}

/// `2·f²·d⁴·∏ ℓ²` over primes `ℓ ∤ d` with `(ℓ − (Δ_K/ℓ)) | [O_K^×:O_ℓ^×]·d`,
/// a multiple of the order of `Br(E × E)/Br₁(E × E)` when `[k : Q] = d`.
pub fn divisibility_bound(f: &BigInt, d: u64, field: &FundamentalDiscriminant) -> Result<BigInt> {
    check_positive("conductor", f)?;
    if d == 0 {
        return Err(Error::invalid("degree must be a positive integer"));
    }
    let u = unit_index(field) * d;
    let mut out = BigInt::from(2u8) * f * f * BigInt::from(d).pow(4u32);
    // ℓ − χ(ℓ) ≥ ℓ − 1 and the unit index is at most 3, so ℓ ≤ 3d + 1 ≤ 6d + 1.
    for l in primes_up_to(6 * d + 1) {
        if d % l == 0 {
            continue;
        }
        let norm_index = (l as i64 - chi(field, l) as i64) as u64;
        if u % norm_index == 0 {
            out *= l * l;
        }
    }
    Ok(out)
}

/// Uniform bound on `|Br(E × E)/Br₁(E × E)|` over fields of degree `d`.
/// With `f` unknown and `d ≥ 2` this is `d⁸`.
pub fn uniform_bound_ee(f: Option<&BigInt>, d: u64, field: &FundamentalDiscriminant) -> Result<BigInt> {
    if d == 0 {
        return Err(Error::invalid("degree must be a positive integer"));
    }
    if let Some(f) = f {
        check_positive("conductor", f)?;
    }
    if d == 1 {
        let v: u8 = if field.is_sqrt_minus_seven() {
            4
        } else if field.is_gaussian() {
            8
        } else if field.is_eisenstein() {
            9
        } else {
            1
        };
        return Ok(BigInt::from(v));
    }
    let d4 = BigInt::from(d).pow(4u32);
    Ok(match f {
        Some(f) => f * f * d4,
        None => &d4 * &d4,
    })
}

/// The valuations `m_ℓ(E)`; absent primes have `m_ℓ = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MValuation {
    pub by_prime: BTreeMap<u64, u32>,
}

impl MValuation {
    pub fn new(entries: impl IntoIterator<Item = (u64, u32)>) -> Result<Self> {
        let mut by_prime = BTreeMap::new();
        for (l, m) in entries {
            check_prime(l)?;
            if m > 0 {
                by_prime.insert(l, m);
            }
        }
        Ok(MValuation { by_prime })
    }

    /// `c = ∏ ℓ^{m_ℓ}`.
    pub fn conductor(&self) -> BigInt {
        self.by_prime.iter().map(|(&l, &m)| prime_power(l, m)).product()
    }
}

/// `|Δ_K|·c²`, the order of the Galois-invariant transcendental classes of
/// `E_{k̄} × E_{k̄}` for `E` with CM by `O_K`.
pub fn geometric_brauer_invariants_order(field: &FundamentalDiscriminant, m: &MValuation) -> BigInt {
    let c = m.conductor();
    field.abs() * &c * &c
}

/// `9·|Δ_K|·d⁴`, the bound on [`geometric_brauer_invariants_order`] when
/// `K_c ⊂ kK` and `[k : Q] = d`.
pub fn geometric_invariants_bound(field: &FundamentalDiscriminant, d: u64) -> BigInt {
    BigInt::from(9u8) * field.abs() * BigInt::from(d).pow(4u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(n: i64) -> FundamentalDiscriminant {
        FundamentalDiscriminant::new(n).unwrap()
    }

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    const IN_K: GaloisFlags = GaloisFlags { cm_field_in_base: true, two_torsion_rational: false };
    const OUT: GaloisFlags = GaloisFlags { cm_field_in_base: false, two_torsion_rational: false };
    const OUT_2: GaloisFlags = GaloisFlags { cm_field_in_base: false, two_torsion_rational: true };

    #[test]
    fn maximal_shapes() {
        assert_eq!(brauer_shape_maximal(3, 1, IN_K).unwrap().to_string(), "Z/3 x Z/3");
        assert_eq!(brauer_shape_maximal(2, 1, OUT_2).unwrap().to_string(), "Z/2 x Z/2");
        assert!(brauer_shape_maximal(5, 0, OUT).unwrap().is_trivial());
        assert_eq!(brauer_shape_maximal(2, 3, OUT).unwrap().order(), int(8));
        assert!(brauer_shape_maximal(2, 0, OUT_2).is_err());
        assert!(brauer_shape_maximal(4, 1, OUT).is_err());
    }

    #[test]
    fn fixed_endomorphism_shapes() {
        let shape = |f, d, n, k| fixed_endomorphisms(&int(f), &fd(d), &int(n), k).unwrap().to_string();
        assert_eq!(shape(1, -3, 5, true), "Z/5 x Z/5");
        assert_eq!(shape(2, -3, 4, false), "Z/4 x Z/2");
        assert_eq!(shape(1, -3, 4, false), "Z/4");
        assert_eq!(shape(1, -4, 6, false), "Z/6 x Z/2");
    }

    #[test]
    fn nonmaximal_bounds() {
        let b = |l, f, m, flags, d, e2| brauer_order_bound_nonmaximal(l, &int(f), m, flags, &fd(d), e2);
        assert_eq!(b(3, 1, 1, IN_K, -3, None).unwrap(), int(9));
        assert_eq!(b(2, 2, 0, OUT, -3, None).unwrap(), int(2));
        assert_eq!(b(5, 1, 0, OUT, -3, None).unwrap(), int(1));
        // ℓ = 2 with rational 2-torsion: 2^{a+1}, a ≤ e + 1 only when 2 | Δ_K
        // and E'[2] is not known to be rational.
        assert_eq!(b(2, 1, 1, OUT_2, -4, None).unwrap(), int(8));
        assert_eq!(b(2, 1, 1, OUT_2, -4, Some(true)).unwrap(), int(4));
        assert_eq!(b(2, 2, 0, OUT_2, -3, Some(false)).unwrap(), int(4));
        assert!(b(2, 1, 1, OUT_2, -3, None).is_err());
        assert!(b(2, 3, 1, OUT_2, -4, Some(false)).is_err());
        assert!(b(2, 2, 0, OUT, -4, Some(true)).is_err());
    }

    #[test]
    fn nonmaximal_with_trivial_conductor_bounds_maximal_orders() {
        for l in [2u64, 3, 5, 7] {
            for m in 0..4 {
                for flags in [IN_K, OUT, OUT_2] {
                    if flags.two_torsion_rational && l == 2 && m == 0 {
                        continue;
                    }
                    let Ok(shape) = brauer_shape_maximal(l, m, flags) else { continue };
                    let e2 = flags.two_torsion_rational.then_some(true);
                    let bound = brauer_order_bound_nonmaximal(l, &int(1), m, flags, &fd(-4), e2).unwrap();
                    assert!(shape.order() <= bound, "l={l} m={m} {flags:?}");
                }
            }
        }
    }

    #[test]
    fn divisibility() {
        assert_eq!(divisibility_bound(&int(1), 2, &fd(-20)).unwrap(), int(288));
        assert_eq!(divisibility_bound(&int(1), 1, &fd(-163)).unwrap(), int(2));
        // d = 1, Q(i): ℓ = 2 (χ = 0, 2 | 2) and ℓ = 3 (χ = −1, 4 ∤ 2) ⇒ 2·4
        assert_eq!(divisibility_bound(&int(1), 1, &fd(-4)).unwrap(), int(8));
        for f in 1..6 {
            for d in 1..6u64 {
                let v = divisibility_bound(&int(f), d, &fd(-7)).unwrap();
                assert!(v.is_multiple_of(&(int(2) * int(f * f) * int(d as i64).pow(4u32))));
            }
        }
    }

    #[test]
    fn uniform_bounds() {
        let table: Vec<BigInt> =
            [-7, -4, -3, -11].iter().map(|&d| uniform_bound_ee(None, 1, &fd(d)).unwrap()).collect();
        assert_eq!(table, [4, 8, 9, 1].map(int).to_vec());
        assert_eq!(uniform_bound_ee(Some(&int(2)), 3, &fd(-11)).unwrap(), int(324));
        assert_eq!(uniform_bound_ee(None, 2, &fd(-11)).unwrap(), int(256));
    }

    #[test]
    fn geometric_invariants() {
        let none = MValuation::default();
        assert_eq!(geometric_brauer_invariants_order(&fd(-4), &none), int(4));
        let m2 = MValuation::new([(2, 1)]).unwrap();
        assert_eq!(geometric_brauer_invariants_order(&fd(-3), &m2), int(12));
        assert!(int(12) <= geometric_invariants_bound(&fd(-3), 1));
        assert!(MValuation::new([(9, 1)]).is_err());
    }
}
