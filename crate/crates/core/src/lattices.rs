//! Discriminants of the lattices attached to a pair of CM elliptic curves:
//! `Hom(E₁, E₂)`, `NS(E₁ × E₂)` and `NS(Km(E₁ × E₂))`, with inverses.
//!
//! A lattice discriminant only determines `Δ_K` and `lcm(f₁, f₂)`; the
//! individual conductors are not recoverable.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::quadratic::{fundamental_discriminant, FundamentalDiscriminant};
use crate::{Error, Result};

/// Rank of the Kummer lattice inside `NS(Km(A))`.
pub const KUMMER_LATTICE_RANK: u32 = 16;
/// `|disc|` of the Kummer lattice, `2⁶`.
pub const KUMMER_LATTICE_DISC: u32 = 64;

/// Two elliptic curves with CM by orders of conductors `f1`, `f2` in one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmPair {
    pub field: FundamentalDiscriminant,
    pub f1: BigInt,
    pub f2: BigInt,
}

impl CmPair {
    pub fn new(field: FundamentalDiscriminant, f1: impl Into<BigInt>, f2: impl Into<BigInt>) -> Result<Self> {
        let (f1, f2) = (f1.into(), f2.into());
        if !f1.is_positive() || !f2.is_positive() {
            return Err(Error::invalid(format!("conductors must be positive, got {f1}, {f2}")));
        }
        Ok(CmPair { field, f1, f2 })
    }

    pub fn lcm(&self) -> BigInt {
        self.f1.lcm(&self.f2)
    }
}

/// `disc Hom(E₁, E₂) = −lcm(f₁, f₂)²·Δ_K / 4`.
pub fn disc_hom(pair: &CmPair) -> BigRational {
    let l = pair.lcm();
    BigRational::new(-(&l * &l) * pair.field.value(), BigInt::from(4u8))
}

/// `disc NS(E₁ × E₂) = lcm(f₁, f₂)²·Δ_K`.
pub fn disc_ns_product(pair: &CmPair) -> BigInt {
    let l = pair.lcm();
    &l * &l * pair.field.value()
}

/// `|disc NS(Km(E₁ × E₂))| = 4·lcm(f₁, f₂)²·|Δ_K|`.
pub fn disc_ns_kummer(pair: &CmPair) -> BigInt {
    let l = pair.lcm();
    BigInt::from(4u8) * &l * &l * pair.field.abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    /// `NS` of an abelian surface; rank in `{2, 3, 4}`.
    Abelian,
    /// `NS` of the associated Kummer surface; rank in `{18, 19, 20}`.
    Kummer,
}

impl LatticeKind {
    fn cm_rank(self) -> u32 {
        match self {
            LatticeKind::Abelian => 4,
            LatticeKind::Kummer => 20,
        }
    }

    fn valid_ranks(self) -> std::ops::RangeInclusive<u32> {
        match self {
            LatticeKind::Abelian => 2..=4,
            LatticeKind::Kummer => 18..=20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeDescriptor {
    pub kind: LatticeKind,
    pub rank: u32,
    pub disc: BigInt,
}

impl LatticeDescriptor {
    pub fn new(kind: LatticeKind, rank: u32, disc: impl Into<BigInt>) -> Result<Self> {
        let disc = disc.into();
        if !kind.valid_ranks().contains(&rank) {
            return Err(Error::invalid(format!("rank {rank} is not a possible {kind:?} Picard rank")));
        }
        if disc.is_zero() {
            return Err(Error::invalid("lattice discriminant must be nonzero"));
        }
        Ok(LatticeDescriptor { kind, rank, disc })
    }

    /// For an abelian surface of Picard rank 3 isogenous to `E × E'` without
    /// CM, the minimal cyclic isogeny degree `E → E'` is `disc / 2`.
    pub fn cyclic_isogeny_degree(&self) -> Result<BigInt> {
        if self.kind != LatticeKind::Abelian || self.rank != 3 {
            return Err(Error::invalid("cyclic isogeny degree needs an abelian lattice of rank 3"));
        }
        let (q, r) = self.disc.abs().div_rem(&BigInt::from(2u8));
        if !r.is_zero() {
            return Err(Error::invalid(format!("rank-3 discriminant {} is odd", self.disc)));
        }
        Ok(q)
    }
}

/// What a CM lattice discriminant determines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmSummary {
    pub field: FundamentalDiscriminant,
    pub lcm: BigInt,
}

/// Recovers `(Δ_K, lcm(f₁, f₂))` from the discriminant of a maximal-rank
/// lattice.
pub fn parse_lattice(desc: &LatticeDescriptor) -> Result<CmSummary> {
    if desc.rank != desc.kind.cm_rank() {
        return Err(Error::invalid(format!(
            "only the CM rank {} determines a quadratic field, got rank {}",
            desc.kind.cm_rank(),
            desc.rank
        )));
    }
    let order_disc = match desc.kind {
        LatticeKind::Abelian => {
            if !desc.disc.is_negative() {
                return Err(Error::invalid(format!(
                    "NS discriminant of a CM abelian surface is negative, got {}",
                    desc.disc
                )));
            }
            desc.disc.clone()
        }
        LatticeKind::Kummer => {
            let (q, r) = desc.disc.abs().div_rem(&BigInt::from(4u8));
            if !r.is_zero() {
                return Err(Error::invalid(format!(
                    "Kummer NS discriminant {} is not divisible by 4",
                    desc.disc
                )));
            }
            -q
        }
    };
    let (field, lcm) = fundamental_discriminant(&order_disc)?;
    Ok(CmSummary { field, lcm })
}

/// Corank of `Br(A_{k̄})` for an abelian surface with `rank NS = ρ`: `6 − ρ`.
pub fn geometric_brauer_corank(rho: u32) -> Result<u32> {
    if !(1..=4).contains(&rho) {
        return Err(Error::invalid(format!("abelian surface Picard rank lies in [1, 4], got {rho}")));
    }
    Ok(6 - rho)
}

/// `−(−2)^{ρ−2}·disc Hom`, the NS discriminant predicted from `Hom`.
pub fn ns_from_hom(hom: &BigRational, rho: u32) -> BigRational {
    let sign_pow = BigRational::from_integer((-BigInt::from(2u8)).pow(rho - 2));
    -(sign_pow * hom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair(d: i64, f1: i64, f2: i64) -> CmPair {
        CmPair::new(FundamentalDiscriminant::new(d).unwrap(), f1, f2).unwrap()
    }

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn forward_examples() {
        assert_eq!(disc_hom(&pair(-4, 1, 1)), BigRational::from_integer(int(1)));
        assert_eq!(disc_hom(&pair(-4, 1, 2)), BigRational::from_integer(int(4)));
        assert_eq!(disc_hom(&pair(-3, 2, 3)), BigRational::from_integer(int(27)));
        assert_eq!(disc_hom(&pair(-3, 1, 1)), BigRational::new(int(3), int(4)));
        assert_eq!(disc_ns_product(&pair(-4, 1, 2)), int(-16));
        assert_eq!(disc_ns_product(&pair(-3, 1, 1)), int(-3));
        assert_eq!(disc_ns_product(&pair(-7, 2, 2)), int(-28));
        assert_eq!(disc_ns_kummer(&pair(-4, 1, 2)), int(64));
        assert_eq!(disc_ns_kummer(&pair(-3, 1, 1)), int(12));
        assert_eq!(disc_ns_kummer(&pair(-8, 1, 3)), int(288));
    }

    #[test]
    fn inverse_examples() {
        let a = parse_lattice(&LatticeDescriptor::new(LatticeKind::Abelian, 4, -16).unwrap()).unwrap();
        assert_eq!((a.field.value().clone(), a.lcm), (int(-4), int(2)));
        let k = parse_lattice(&LatticeDescriptor::new(LatticeKind::Kummer, 20, 64).unwrap()).unwrap();
        assert_eq!((k.field.value().clone(), k.lcm), (int(-4), int(2)));
        let bad = LatticeDescriptor::new(LatticeKind::Abelian, 4, -5).unwrap();
        assert!(parse_lattice(&bad).is_err());
        assert!(parse_lattice(&LatticeDescriptor::new(LatticeKind::Abelian, 4, 16).unwrap()).is_err());
        assert!(parse_lattice(&LatticeDescriptor::new(LatticeKind::Kummer, 20, 6).unwrap()).is_err());
        assert!(parse_lattice(&LatticeDescriptor::new(LatticeKind::Abelian, 3, -16).unwrap()).is_err());
        assert!(LatticeDescriptor::new(LatticeKind::Kummer, 4, 16).is_err());
    }

    #[test]
    fn rank_three_and_corank() {
        let d = LatticeDescriptor::new(LatticeKind::Abelian, 3, 10).unwrap();
        assert_eq!(d.cyclic_isogeny_degree().unwrap(), int(5));
        assert_eq!(geometric_brauer_corank(4).unwrap(), 2);
        assert_eq!(geometric_brauer_corank(2).unwrap(), 4);
        assert_eq!(geometric_brauer_corank(1).unwrap(), 5);
        assert!(geometric_brauer_corank(5).is_err());
        assert_eq!(KUMMER_LATTICE_DISC, 1 << 6);
    }

    fn fundamental(n: i64) -> Option<FundamentalDiscriminant> {
        FundamentalDiscriminant::new(-n).ok()
    }

    proptest! {
        #[test]
        fn identities_and_inverses(n in 3i64..1000, f1 in 1i64..60, f2 in 1i64..60) {
            prop_assume!(fundamental(n).is_some());
            let p = CmPair::new(fundamental(n).unwrap(), f1, f2).unwrap();
            let hom = disc_hom(&p);
            prop_assert_eq!(ns_from_hom(&hom, 4), BigRational::from_integer(disc_ns_product(&p)));
            prop_assert_eq!(
                BigRational::from_integer(disc_ns_kummer(&p)),
                hom.abs() * BigRational::from_integer(int(16))
            );
            let back = parse_lattice(&LatticeDescriptor::new(LatticeKind::Abelian, 4, disc_ns_product(&p)).unwrap()).unwrap();
            prop_assert_eq!(&back.field, &p.field);
            prop_assert_eq!(&back.lcm, &p.lcm());
            let back = parse_lattice(&LatticeDescriptor::new(LatticeKind::Kummer, 20, disc_ns_kummer(&p)).unwrap()).unwrap();
            prop_assert_eq!(back.lcm, p.lcm());
        }
    }
}
