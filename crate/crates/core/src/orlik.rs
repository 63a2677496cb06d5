//! Divisor calculus for the Alexander polynomial of a weighted homogeneous
//! singularity.
//!
//! `Λ_j` stands for div(tʲ − 1), the sum of all j-th roots of unity in
//! Z[C*]. Products obey Λ_a·Λ_b = gcd(a, b)·Λ_lcm(a, b), and Λ₁ = div(t − 1)
//! is the identity. The divisor of the Alexander polynomial of a
//! 4-variable weighted homogeneous f is ∏ᵢ (Λ_{uᵢ}/vᵢ − Λ₁), with
//! uᵢ/vᵢ = d/wᵢ in lowest terms. Each Λ_j contains the root 1 exactly once,
//! so b₂ of the link is the sum of all coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{LinkError, Result};
use crate::polyspec::WeightSystem;

/// Element of Z[C*] ⊗ Q spanned by the Λ_j.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DivisorElement {
    terms: BTreeMap<BigUint, BigRational>,
}

impl DivisorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Λ₁, the multiplicative identity.
    pub fn one() -> Self {
        Self::lambda(1u32)
    }

    pub fn lambda(index: impl Into<BigUint>) -> Self {
        Self::term(index, BigRational::one())
    }

    pub fn term(index: impl Into<BigUint>, coefficient: BigRational) -> Self {
        let mut out = Self::zero();
        out.add_term(index.into(), coefficient);
        out
    }

    pub fn from_terms<I, J>(terms: I) -> Self
    where
        I: IntoIterator<Item = (J, BigRational)>,
        J: Into<BigUint>,
    {
        let mut out = Self::zero();
        for (j, c) in terms {
            out.add_term(j.into(), c);
        }
        out
    }

    fn add_term(&mut self, index: BigUint, coefficient: BigRational) {
        assert!(!index.is_zero(), "Λ indices start at 1");
        if coefficient.is_zero() {
            return;
        }
        let slot = self.terms.entry(index.clone()).or_insert_with(BigRational::zero);
        *slot += coefficient;
        if slot.is_zero() {
            self.terms.remove(&index);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending index order; no zero coefficients.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&BigUint, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, index: impl Into<BigUint>) -> BigRational {
        self.terms
            .get(&index.into())
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Multiplicity of the root 1.
    pub fn coefficient_sum(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |acc, c| acc + c)
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(j, c)| (j.clone(), c * factor)))
    }
}

/// Bilinear extension of Λ_a·Λ_b = gcd(a, b)·Λ_lcm(a, b).
pub fn lambda_mul(a: &DivisorElement, b: &DivisorElement) -> DivisorElement {
    let mut out = DivisorElement::zero();
    for (i, ci) in &a.terms {
        for (j, cj) in &b.terms {
            let g = i.gcd(j);
            let l = i / &g * j;
            let c = ci * cj * BigRational::from_integer(BigInt::from(g));
            out.add_term(l, c);
        }
    }
    out
}

impl Add for &DivisorElement {
    type Output = DivisorElement;

    fn add(self, rhs: &DivisorElement) -> DivisorElement {
        let mut out = self.clone();
        for (j, c) in &rhs.terms {
            out.add_term(j.clone(), c.clone());
        }
        out
    }
}

impl Sub for &DivisorElement {
    type Output = DivisorElement;

    fn sub(self, rhs: &DivisorElement) -> DivisorElement {
        self + &(-rhs)
    }
}

impl Neg for &DivisorElement {
    type Output = DivisorElement;

    fn neg(self) -> DivisorElement {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &DivisorElement {
    type Output = DivisorElement;

    fn mul(self, rhs: &DivisorElement) -> DivisorElement {
        lambda_mul(self, rhs)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for DivisorElement {
            type Output = DivisorElement;
            fn $method(self, rhs: DivisorElement) -> DivisorElement {
                (&self).$method(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for DivisorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (j, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            match (k, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            let mag = c.abs();
            let coeff = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format!("({mag})")
            };
            if j.is_one() {
                write!(f, "{coeff}")?;
            } else if mag.is_one() {
                write!(f, "Λ{j}")?;
            } else {
                write!(f, "{coeff}Λ{j}")?;
            }
        }
        Ok(())
    }
}

/// Integer that serializes as a JSON number when it fits 64 bits and as a
/// decimal string otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
struct WideInt(BigInt);

impl Serialize for WideInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if let Some(v) = self.0.to_i64() {
            s.serialize_i64(v)
        } else if let Some(v) = self.0.to_u64() {
            s.serialize_u64(v)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for WideInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Signed(i64),
            Unsigned(u64),
            Text(String),
        }
        Ok(WideInt(match Repr::deserialize(d)? {
            Repr::Signed(v) => v.into(),
            Repr::Unsigned(v) => v.into(),
            Repr::Text(s) => s.parse().map_err(de::Error::custom)?,
        }))
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    index: WideInt,
    numerator: WideInt,
    denominator: WideInt,
}

impl Serialize for DivisorElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let records: Vec<TermRecord> = self
            .terms
            .iter()
            .map(|(j, c)| TermRecord {
                index: WideInt(BigInt::from(j.clone())),
                numerator: WideInt(c.numer().clone()),
                denominator: WideInt(c.denom().clone()),
            })
            .collect();
        records.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DivisorElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(d)?;
        let mut out = DivisorElement::zero();
        for r in records {
            let index = r
                .index
                .0
                .to_biguint()
                .filter(|j| !j.is_zero())
                .ok_or_else(|| de::Error::custom("Λ index must be positive"))?;
            if r.denominator.0.is_zero() {
                return Err(de::Error::custom("zero denominator"));
            }
            out.add_term(index, BigRational::new(r.numerator.0, r.denominator.0));
        }
        Ok(out)
    }
}

/// d/w written as u/v in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedRatio {
    pub u: u64,
    pub v: u64,
}

impl ReducedRatio {
    pub fn new(degree: u64, weight: u64) -> Self {
        let g = degree.gcd(&weight);
        ReducedRatio {
            u: degree / g,
            v: weight / g,
        }
    }
}

pub fn reduced_ratios(ws: &WeightSystem) -> Vec<ReducedRatio> {
    ws.weights()
        .iter()
        .map(|&w| ReducedRatio::new(ws.degree(), w))
        .collect()
}

/// ∏ᵢ ((1/vᵢ)·Λ_{uᵢ} − Λ₁).
pub fn alexander_divisor(ws: &WeightSystem) -> DivisorElement {
    reduced_ratios(ws)
        .into_iter()
        .fold(DivisorElement::one(), |acc, r| {
            let factor = &DivisorElement::term(
                r.u,
                BigRational::new(BigInt::one(), BigInt::from(r.v)),
            ) - &DivisorElement::one();
            &acc * &factor
        })
}

fn nonnegative_integer(value: &BigRational) -> Option<u64> {
    value
        .is_integer()
        .then(|| value.numer().to_u64())
        .flatten()
}

/// Second Betti number of the link: the coefficient sum of the divisor.
pub fn betti2(ws: &WeightSystem) -> Result<u64> {
    let sum = alexander_divisor(ws).coefficient_sum();
    nonnegative_integer(&sum).ok_or_else(|| LinkError::NonIntegralBetti {
        value: sum.to_string(),
    })
}

/// Default bound on the cyclic group size used by [`betti2_oracle`].
pub const DEFAULT_ORACLE_CAP: u64 = 1_000_000;

/// b₂ computed in the group ring Q[Z/L], L = lcm(uᵢ): Λ_u becomes the sum of
/// the u-th roots of unity ⟨a/u⟩ and the answer is the coefficient of ⟨0⟩.
///
/// Each factor Λ_u/v − 1 is multiplied by v so the expansion stays integral;
/// the product of the vᵢ is divided out at the end.
pub fn betti2_oracle(ws: &WeightSystem, cap: u64) -> Result<u64> {
    let ratios = reduced_ratios(ws);
    let order = ratios.iter().try_fold(1u64, |l, r| {
        let next = l.lcm(&r.u);
        (next <= cap).then_some(next).ok_or(next)
    });
    let order = match order {
        Ok(l) => l,
        Err(l) => return Err(LinkError::CapExceeded { order: l, cap }),
    } as usize;
    let overflow = || LinkError::InvalidParameter("oracle coefficients overflow i128".into());

    let mut acc = vec![0i128; order];
    acc[0] = 1;
    let mut scale: i128 = 1;
    for r in &ratios {
        // Λ_u is the indicator of the subgroup generated by `step`; convolving
        // with it replaces each entry by the sum over its coset.
        let step = order / r.u as usize;
        let mut coset = vec![0i128; step];
        for (x, &a) in acc.iter().enumerate() {
            coset[x % step] = coset[x % step].checked_add(a).ok_or_else(overflow)?;
        }
        let v = r.v as i128;
        for (x, a) in acc.iter_mut().enumerate() {
            *a = coset[x % step]
                .checked_sub(a.checked_mul(v).ok_or_else(overflow)?)
                .ok_or_else(overflow)?;
        }
        scale = scale.checked_mul(v).ok_or_else(overflow)?;
    }
    let value = BigRational::new(BigInt::from(acc[0]), BigInt::from(scale));
    nonnegative_integer(&value).ok_or_else(|| LinkError::NonIntegralBetti {
        value: value.to_string(),
    })
}
