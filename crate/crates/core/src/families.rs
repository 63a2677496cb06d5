//! Parametric hypersurface families with closed-form expectations, and the
//! weight solver for cyclic polynomials x^a₀y + y^a₁z + z^a₂t + t^a₃x.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{LinkError, Result};
use crate::polyspec::{WeightSystem, WeightedPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyTag {
    CaseI,
    CaseII,
    Cyclic,
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Closed form stated for the family.
    ClosedForm,
    /// Obtained by direct arithmetic on the instance.
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected<T> {
    pub value: T,
    pub provenance: Provenance,
}

fn closed<T>(value: T) -> Expected<T> {
    Expected {
        value,
        provenance: Provenance::ClosedForm,
    }
}

fn derived<T>(value: T) -> Expected<T> {
    Expected {
        value,
        provenance: Provenance::Derived,
    }
}

/// (ramification, genus) of an expected branch curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedBranch {
    pub m: u64,
    pub genus: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedValues {
    pub b2: Option<Expected<u64>>,
    pub branch: Option<Expected<Vec<ExpectedBranch>>>,
    pub index_gap: Option<Expected<i128>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyInstance {
    pub family: FamilyTag,
    pub parameters: Vec<u64>,
    pub polynomial: WeightedPolynomial,
    pub expected: ExpectedValues,
}

fn overflow() -> LinkError {
    LinkError::InvalidParameter("parameter too large".into())
}

fn as_u32(v: u64) -> Result<u32> {
    u32::try_from(v).map_err(|_| overflow())
}

/// x⁴ + y² + zᵏ + tᵏ in P(k, 2k, 4, 4), degree 4k, k odd.
pub fn case_i(k: u64) -> Result<FamilyInstance> {
    if k == 0 {
        return Err(LinkError::InvalidParameter("k must be positive".into()));
    }
    if k.is_even() {
        return Err(LinkError::EvenK { k });
    }
    let two_k = k.checked_mul(2).ok_or_else(overflow)?;
    let four_k = k.checked_mul(4).ok_or_else(overflow)?;
    let e = as_u32(k)?;
    let polynomial = WeightedPolynomial::from_exponents(
        vec![k, two_k, 4, 4],
        vec![vec![4, 0, 0, 0], vec![0, 2, 0, 0], vec![0, 0, e, 0], vec![0, 0, 0, e]],
    )?;
    debug_assert_eq!(polynomial.degree(), four_k);
    Ok(FamilyInstance {
        family: FamilyTag::CaseI,
        parameters: vec![k],
        polynomial,
        expected: ExpectedValues {
            b2: Some(closed(k - 1)),
            branch: Some(closed(vec![ExpectedBranch { m: 2, genus: 0 }])),
            index_gap: Some(derived(k as i128 - 8)),
        },
    })
}

/// x⁴ + y^{8k+2} + z^{4k+1}t + t^{2k+1}z in
/// P((4k+1)(4k+3), 2(4k+3), 4(4k+1), 8(4k+1)), degree 4(4k+1)(4k+3).
pub fn case_ii(k: u64) -> Result<FamilyInstance> {
    if k == 0 {
        return Err(LinkError::InvalidParameter("k must be at least 1".into()));
    }
    if k > 1 << 20 {
        return Err(overflow());
    }
    let a = 4 * k + 1;
    let b = 4 * k + 3;
    let polynomial = WeightedPolynomial::from_exponents(
        vec![a * b, 2 * b, 4 * a, 8 * a],
        vec![
            vec![4, 0, 0, 0],
            vec![0, as_u32(8 * k + 2)?, 0, 0],
            vec![0, 0, as_u32(a)?, 1],
            vec![0, 0, 1, as_u32(2 * k + 1)?],
        ],
    )?;
    debug_assert_eq!(polynomial.degree(), 4 * a * b);
    let k = k as i128;
    Ok(FamilyInstance {
        family: FamilyTag::CaseII,
        parameters: vec![k as u64],
        polynomial,
        expected: ExpectedValues {
            b2: Some(closed(2 * k as u64 + 1)),
            branch: Some(closed(vec![
                ExpectedBranch { m: 2, genus: 0 },
                ExpectedBranch { m: a, genus: 0 },
            ])),
            index_gap: Some(closed(8 * k * (8 * k + 2) - (4 * k + 3) * (4 * k + 3))),
        },
    })
}

/// Primitive weights and degree making x^a₀y + y^a₁z + z^a₂t + t^a₃x weighted
/// homogeneous: a₀w₀ + w₁ = a₁w₁ + w₂ = a₂w₂ + w₃ = a₃w₃ + w₀ = d.
pub fn cyclic_weights(exponents: [u64; 4]) -> Result<WeightSystem> {
    let [a0, a1, a2, a3] = exponents.map(BigInt::from);
    if exponents.contains(&0) {
        return Err(LinkError::DegenerateSystem { exponents });
    }
    let product = &a0 * &a1 * &a2 * &a3;
    let denominator = BigInt::one() - &product;
    if denominator.is_zero() {
        // All exponents 1: the system only forces w₀ = w₂, w₁ = w₃.
        return WeightSystem::new(vec![1, 1, 1, 1], 2);
    }
    // w₀/d = (1 − a₃ + a₃a₂ − a₃a₂a₁) / (1 − a₀a₁a₂a₃); take d = denominator.
    let numerator = BigInt::one() - &a3 + &a3 * &a2 - &a3 * &a2 * &a1;
    let d = denominator.clone();
    let w0 = numerator;
    let w1 = &d - &a0 * &w0;
    let w2 = &d - &a1 * &w1;
    let w3 = &d - &a2 * &w2;
    debug_assert_eq!(&a3 * &w3 + &w0, d);
    let mut all = [w0, w1, w2, w3, d];
    if all[4].is_negative() {
        for v in &mut all {
            *v = -v.clone();
        }
    }
    if all.iter().any(|v| !v.is_positive()) {
        return Err(LinkError::DegenerateSystem { exponents });
    }
    let g = all.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    let vals = all
        .iter()
        .map(|v| (v / &g).to_u64().ok_or_else(overflow))
        .collect::<Result<Vec<_>>>()?;
    WeightSystem::new(vals[..4].to_vec(), vals[4])
}

pub fn cyclic(exponents: [u64; 4]) -> Result<FamilyInstance> {
    let ws = cyclic_weights(exponents)?;
    let [a0, a1, a2, a3] = [0, 1, 2, 3].map(|i| as_u32(exponents[i]));
    let polynomial = WeightedPolynomial::from_exponents(
        ws.weights().to_vec(),
        vec![
            vec![a0?, 1, 0, 0],
            vec![0, a1?, 1, 0],
            vec![0, 0, a2?, 1],
            vec![1, 0, 0, a3?],
        ],
    )?;
    let b2 = match exponents {
        [4, 7, 10, 13] => Some(closed(4)),
        [6, 11, 16, 21] => Some(closed(6)),
        _ => None,
    };
    let index_gap = ws.degree() as i128 - ws.weight_sum() as i128;
    Ok(FamilyInstance {
        family: FamilyTag::Cyclic,
        parameters: exponents.to_vec(),
        polynomial,
        expected: ExpectedValues {
            branch: b2.is_some().then(|| closed(Vec::new())),
            b2,
            index_gap: Some(derived(index_gap)),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_i_examples() {
        let inst = case_i(9).unwrap();
        assert_eq!(inst.polynomial.weights(), &[9, 18, 4, 4]);
        assert_eq!(inst.polynomial.degree(), 36);
        assert_eq!(inst.expected.b2.unwrap().value, 8);
        let inst = case_i(3).unwrap();
        assert_eq!(inst.expected.index_gap.unwrap().value, -5);
        assert_eq!(inst.expected.b2.unwrap().value, 2);
        assert_eq!(case_i(4).unwrap_err(), LinkError::EvenK { k: 4 });
    }

    #[test]
    fn case_ii_examples() {
        let inst = case_ii(1).unwrap();
        assert_eq!(inst.polynomial.weights(), &[35, 14, 20, 40]);
        assert_eq!(inst.polynomial.degree(), 140);
        assert_eq!(inst.expected.b2.unwrap().value, 3);
        assert_eq!(inst.expected.index_gap.unwrap().value, 31);
        let inst = case_ii(2).unwrap();
        assert_eq!(inst.polynomial.weights(), &[99, 22, 36, 72]);
        assert_eq!(inst.polynomial.degree(), 396);
        assert_eq!(inst.expected.b2.unwrap().value, 5);
        assert_eq!(case_ii(10).unwrap().expected.b2.unwrap().value, 21);
        assert!(case_ii(0).is_err());
    }

    #[test]
    fn cyclic_examples() {
        let ws = cyclic_weights([4, 7, 10, 13]).unwrap();
        assert_eq!((ws.weights(), ws.degree()), (&[264, 157, 114, 73][..], 1213));
        let ws = cyclic_weights([6, 11, 16, 21]).unwrap();
        assert_eq!((ws.weights(), ws.degree()), (&[676, 379, 266, 179][..], 4435));
        let ws = cyclic_weights([2, 2, 2, 2]).unwrap();
        assert_eq!((ws.weights(), ws.degree()), (&[1, 1, 1, 1][..], 3));
        let ws = cyclic_weights([1, 1, 1, 1]).unwrap();
        assert_eq!((ws.weights(), ws.degree()), (&[1, 1, 1, 1][..], 2));
        let inst = cyclic([4, 7, 10, 13]).unwrap();
        assert_eq!(inst.polynomial.to_string(), "x^4*y + y^7*z + z^10*t + x*t^13");
    }

    #[test]
    fn cyclic_nonpositive_solution_is_degenerate() {
        // a = (1,1,1,2): w₀ = 0 in the only solution.
        assert!(matches!(
            cyclic_weights([1, 1, 1, 2]),
            Err(LinkError::DegenerateSystem { .. })
        ));
    }
}
