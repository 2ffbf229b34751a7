//! The abstract value group for commutation scalars.
//!
//! Scalars live in a finitely generated abelian group `Z^a ⊕ Z/m` written
//! multiplicatively: an element is an exponent vector over the `a` free
//! generators plus one exponent modulo `m` over the torsion generator (a
//! primitive m-th root of unity in the target field). All arithmetic is on
//! exponents and exact.
//!
//! `HalfElement` represents an element of the "index two" extension in which
//! square roots live: free exponents are stored doubled (so the value is
//! `generator^(stored/2)`), and the torsion exponent is an ordinary exponent
//! mod `m` — for odd `m` squaring is a bijection on `Z/m`, so square roots
//! stay inside the torsion part.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarGroup {
    free_rank: usize,
    #[serde(with = "crate::serde_util::bigint_str")]
    torsion_order: BigInt,
    char_two: bool,
}

/// `generator_1^free[0] * ... * generator_a^free[a-1] * u^torsion` with `u`
/// the torsion generator. The torsion exponent is kept reduced into `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    free: Vec<BigInt>,
    torsion: BigInt,
}

/// A square root of a group element; free exponents stored doubled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfElement {
    doubled_free: Vec<BigInt>,
    torsion: BigInt,
}

impl ScalarGroup {
    pub fn new(free_rank: usize, torsion_order: BigInt, char_two: bool) -> Result<Self> {
        if torsion_order < BigInt::one() {
            return Err(Error::InvalidInput(
                "torsion order must be a positive integer (1 = no torsion)".into(),
            ));
        }
        Ok(ScalarGroup {
            free_rank,
            torsion_order,
            char_two,
        })
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_order(&self) -> &BigInt {
        &self.torsion_order
    }

    pub fn char_two(&self) -> bool {
        self.char_two
    }

    pub fn has_torsion(&self) -> bool {
        self.torsion_order > BigInt::one()
    }

    /// Whether −1 lies in the group as realized in the target field: true
    /// exactly when the torsion order is even and the characteristic is not 2.
    pub fn contains_minus_one(&self) -> bool {
        self.torsion_order.is_even() && !self.char_two
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            free: vec![BigInt::zero(); self.free_rank],
            torsion: BigInt::zero(),
        }
    }

    pub fn element(&self, free: Vec<BigInt>, torsion: BigInt) -> Result<GroupElement> {
        if free.len() != self.free_rank {
            return Err(Error::DimensionMismatch(format!(
                "expected {} free exponents, got {}",
                self.free_rank,
                free.len()
            )));
        }
        Ok(GroupElement {
            free,
            torsion: torsion.mod_floor(&self.torsion_order),
        })
    }

    /// The l-th free generator (0-based).
    pub fn free_generator(&self, l: usize) -> GroupElement {
        let mut free = vec![BigInt::zero(); self.free_rank];
        free[l] = BigInt::one();
        GroupElement {
            free,
            torsion: BigInt::zero(),
        }
    }

    pub fn torsion_generator(&self) -> GroupElement {
        GroupElement {
            free: vec![BigInt::zero(); self.free_rank],
            torsion: BigInt::one().mod_floor(&self.torsion_order),
        }
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            torsion: (&a.torsion + &b.torsion).mod_floor(&self.torsion_order),
        }
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            free: a.free.iter().map(|x| -x).collect(),
            torsion: (-&a.torsion).mod_floor(&self.torsion_order),
        }
    }

    pub fn pow(&self, a: &GroupElement, k: &BigInt) -> GroupElement {
        GroupElement {
            free: a.free.iter().map(|x| x * k).collect(),
            torsion: (&a.torsion * k).mod_floor(&self.torsion_order),
        }
    }

    /// The unique square root, which exists iff the torsion part has odd
    /// order. On `Z/m` with odd `m` the inverse of doubling is multiplication
    /// by `(m+1)/2`; free exponents move to the doubled representation.
    pub fn sqrt_element(&self, a: &GroupElement) -> Result<HalfElement> {
        if self.torsion_order.is_even() {
            return Err(Error::Hypothesis(
                "the torsion order is even, so squaring is not injective and unique square \
                 roots do not exist (a field of characteristic 2 cannot contain even-order \
                 roots of unity, so a consistent input always has odd torsion here)"
                    .into(),
            ));
        }
        let half = (&self.torsion_order + BigInt::one()) / BigInt::from(2);
        Ok(HalfElement {
            doubled_free: a.free.clone(),
            torsion: (&a.torsion * half).mod_floor(&self.torsion_order),
        })
    }

    pub fn half_identity(&self) -> HalfElement {
        HalfElement {
            doubled_free: vec![BigInt::zero(); self.free_rank],
            torsion: BigInt::zero(),
        }
    }

    pub fn half_element(&self, doubled_free: Vec<BigInt>, torsion: BigInt) -> Result<HalfElement> {
        if doubled_free.len() != self.free_rank {
            return Err(Error::DimensionMismatch(format!(
                "expected {} free exponents, got {}",
                self.free_rank,
                doubled_free.len()
            )));
        }
        Ok(HalfElement {
            doubled_free,
            torsion: torsion.mod_floor(&self.torsion_order),
        })
    }

    pub fn half_mul(&self, a: &HalfElement, b: &HalfElement) -> HalfElement {
        HalfElement {
            doubled_free: a
                .doubled_free
                .iter()
                .zip(&b.doubled_free)
                .map(|(x, y)| x + y)
                .collect(),
            torsion: (&a.torsion + &b.torsion).mod_floor(&self.torsion_order),
        }
    }

    pub fn half_inverse(&self, a: &HalfElement) -> HalfElement {
        HalfElement {
            doubled_free: a.doubled_free.iter().map(|x| -x).collect(),
            torsion: (-&a.torsion).mod_floor(&self.torsion_order),
        }
    }

    pub fn half_pow(&self, a: &HalfElement, k: &BigInt) -> HalfElement {
        HalfElement {
            doubled_free: a.doubled_free.iter().map(|x| x * k).collect(),
            torsion: (&a.torsion * k).mod_floor(&self.torsion_order),
        }
    }

    pub fn half_square(&self, a: &HalfElement) -> GroupElement {
        GroupElement {
            free: a.doubled_free.clone(),
            torsion: (&a.torsion * BigInt::from(2)).mod_floor(&self.torsion_order),
        }
    }

    /// Embed a full element into the half representation.
    pub fn half_from_element(&self, a: &GroupElement) -> HalfElement {
        HalfElement {
            doubled_free: a.free.iter().map(|x| x * BigInt::from(2)).collect(),
            torsion: a.torsion.clone(),
        }
    }

    pub fn coeff_one(&self, n: usize) -> SymbolicCoefficient {
        SymbolicCoefficient {
            rational: BigRational::one(),
            scalar: self.half_identity(),
            lambda: vec![BigInt::zero(); n],
        }
    }

    pub fn coeff_zero(&self, n: usize) -> SymbolicCoefficient {
        SymbolicCoefficient {
            rational: BigRational::zero(),
            scalar: self.half_identity(),
            lambda: vec![BigInt::zero(); n],
        }
    }

    pub fn coeff_mul(
        &self,
        a: &SymbolicCoefficient,
        b: &SymbolicCoefficient,
    ) -> Result<SymbolicCoefficient> {
        if a.lambda.len() != b.lambda.len() {
            return Err(Error::DimensionMismatch(
                "coefficients carry different symbol counts".into(),
            ));
        }
        let rational = &a.rational * &b.rational;
        if rational.is_zero() {
            return Ok(self.coeff_zero(a.lambda.len()));
        }
        Ok(SymbolicCoefficient {
            rational,
            scalar: self.half_mul(&a.scalar, &b.scalar),
            lambda: a.lambda.iter().zip(&b.lambda).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn coeff_inverse(&self, a: &SymbolicCoefficient) -> Result<SymbolicCoefficient> {
        if a.rational.is_zero() {
            return Err(Error::InvalidInput("cannot invert a zero coefficient".into()));
        }
        Ok(SymbolicCoefficient {
            rational: a.rational.recip(),
            scalar: self.half_inverse(&a.scalar),
            lambda: a.lambda.iter().map(|x| -x).collect(),
        })
    }
}

impl GroupElement {
    pub fn free_exponents(&self) -> &[BigInt] {
        &self.free
    }

    pub fn torsion_exponent(&self) -> &BigInt {
        &self.torsion
    }

    pub fn is_identity(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.is_zero()
    }
}

impl HalfElement {
    pub fn doubled_free_exponents(&self) -> &[BigInt] {
        &self.doubled_free
    }

    pub fn torsion_exponent(&self) -> &BigInt {
        &self.torsion
    }

    pub fn is_identity(&self) -> bool {
        self.doubled_free.iter().all(Zero::is_zero) && self.torsion.is_zero()
    }
}

/// Exact coefficient in the symbolic ideal calculus: a rational number, a
/// scalar from the (half) value group, and formal exponents over the point
/// symbols λ_1, ..., λ_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicCoefficient {
    pub(crate) rational: BigRational,
    pub(crate) scalar: HalfElement,
    pub(crate) lambda: Vec<BigInt>,
}

impl SymbolicCoefficient {
    pub fn rational(&self) -> &BigRational {
        &self.rational
    }

    pub fn scalar(&self) -> &HalfElement {
        &self.scalar
    }

    pub fn lambda_exponents(&self) -> &[BigInt] {
        &self.lambda
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rational.is_one()
            && self.scalar.is_identity()
            && self.lambda.iter().all(Zero::is_zero)
    }

    /// True when the coefficient is a pure rational (no scalar, no symbols).
    pub fn is_plain_rational(&self) -> bool {
        self.scalar.is_identity() && self.lambda.iter().all(Zero::is_zero)
    }
}

// --- serde representations (exponents as decimal strings) ---

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    free: Vec<String>,
    torsion: String,
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr {
            free: self.free.iter().map(|x| x.to_string()).collect(),
            torsion: self.torsion.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ElementRepr::deserialize(d)?;
        Ok(GroupElement {
            free: parse_bigints::<D>(&repr.free)?,
            torsion: BigInt::from_str(&repr.torsion).map_err(serde::de::Error::custom)?,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct HalfRepr {
    doubled_free: Vec<String>,
    torsion: String,
}

impl Serialize for HalfElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HalfRepr {
            doubled_free: self.doubled_free.iter().map(|x| x.to_string()).collect(),
            torsion: self.torsion.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HalfElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = HalfRepr::deserialize(d)?;
        Ok(HalfElement {
            doubled_free: parse_bigints::<D>(&repr.doubled_free)?,
            torsion: BigInt::from_str(&repr.torsion).map_err(serde::de::Error::custom)?,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffRepr {
    rational: String,
    scalar: HalfElement,
    lambda: Vec<String>,
}

impl Serialize for SymbolicCoefficient {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoeffRepr {
            rational: self.rational.to_string(),
            scalar: self.scalar.clone(),
            lambda: self.lambda.iter().map(|x| x.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymbolicCoefficient {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CoeffRepr::deserialize(d)?;
        Ok(SymbolicCoefficient {
            rational: crate::serde_util::parse_rational(&repr.rational)
                .map_err(serde::de::Error::custom)?,
            scalar: repr.scalar,
            lambda: parse_bigints::<D>(&repr.lambda)?,
        })
    }
}

fn parse_bigints<'de, D: Deserializer<'de>>(
    raw: &[String],
) -> std::result::Result<Vec<BigInt>, D::Error> {
    raw.iter()
        .map(|x| BigInt::from_str(x).map_err(serde::de::Error::custom))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(a: usize, m: i64, char_two: bool) -> ScalarGroup {
        ScalarGroup::new(a, BigInt::from(m), char_two).unwrap()
    }

    #[test]
    fn minus_one_detection() {
        assert!(!group(2, 1, false).contains_minus_one());
        assert!(!group(0, 5, false).contains_minus_one());
        assert!(group(0, 2, false).contains_minus_one());
        assert!(!group(0, 2, true).contains_minus_one());
    }

    #[test]
    fn element_arithmetic_reduces_torsion() {
        let g = group(1, 5, false);
        let a = g.element(vec![BigInt::from(2)], BigInt::from(4)).unwrap();
        let b = g.element(vec![BigInt::from(-2)], BigInt::from(1)).unwrap();
        let prod = g.mul(&a, &b);
        assert!(prod.is_identity());
        assert!(g.mul(&a, &g.inverse(&a)).is_identity());
        let p = g.pow(&a, &BigInt::from(5));
        assert_eq!(p.free_exponents(), &[BigInt::from(10)]);
        assert_eq!(p.torsion_exponent(), &BigInt::zero());
    }

    #[test]
    fn sqrt_on_odd_torsion_inverts_doubling() {
        let g = group(0, 5, false);
        let a = g.element(vec![], BigInt::from(3)).unwrap();
        let h = g.sqrt_element(&a).unwrap();
        assert_eq!(h.torsion_exponent(), &BigInt::from(4));
        assert_eq!(g.half_square(&h), a);
    }

    #[test]
    fn sqrt_refuses_even_torsion() {
        let g = group(0, 2, false);
        let a = g.torsion_generator();
        assert!(matches!(g.sqrt_element(&a), Err(Error::Hypothesis(_))));
        // The flag does not create square roots that cannot exist.
        let g2 = group(0, 2, true);
        assert!(g2.sqrt_element(&g2.torsion_generator()).is_err());
    }

    #[test]
    fn sqrt_is_a_homomorphism() {
        let g = group(2, 9, false);
        let a = g
            .element(vec![BigInt::from(3), BigInt::from(-1)], BigInt::from(7))
            .unwrap();
        let b = g
            .element(vec![BigInt::from(-5), BigInt::from(2)], BigInt::from(4))
            .unwrap();
        let lhs = g.sqrt_element(&g.mul(&a, &b)).unwrap();
        let rhs = g.half_mul(&g.sqrt_element(&a).unwrap(), &g.sqrt_element(&b).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn odd_torsion_has_no_involutions() {
        for m in [1i64, 3, 5, 7, 9, 15] {
            let g = group(0, m, false);
            for e in 0..m {
                let a = g.element(vec![], BigInt::from(e)).unwrap();
                if g.mul(&a, &a).is_identity() {
                    assert!(a.is_identity(), "m={m} e={e}");
                }
            }
        }
    }

    #[test]
    fn coefficient_cancellation() {
        let g = group(1, 1, false);
        let n = 3;
        // p^{-1} λ_2  times  p λ_2^{-1}  = 1
        let mut a = g.coeff_one(n);
        a.scalar = g.half_inverse(&g.sqrt_element(&g.free_generator(0)).unwrap());
        a.lambda[1] = BigInt::one();
        let mut b = g.coeff_one(n);
        b.scalar = g.sqrt_element(&g.free_generator(0)).unwrap();
        b.lambda[1] = -BigInt::one();
        let prod = g.coeff_mul(&a, &b).unwrap();
        assert!(prod.is_one());
        let inv = g.coeff_inverse(&a).unwrap();
        assert_eq!(inv, b);
    }

    #[test]
    fn serde_round_trip() {
        let g = group(2, 7, false);
        let a = g
            .element(vec![BigInt::from(11), BigInt::from(-3)], BigInt::from(6))
            .unwrap();
        let json = serde_json::to_string(&a).unwrap();
        let back: GroupElement = serde_json::from_str(&json).unwrap();
        assert_eq!(a, back);
        let h = g.sqrt_element(&a).unwrap();
        let json = serde_json::to_string(&h).unwrap();
        let back: HalfElement = serde_json::from_str(&json).unwrap();
        assert_eq!(h, back);
    }
}
