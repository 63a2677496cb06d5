//! Weight systems, weighted homogeneous polynomials and the polynomial text
//! front-end.
//!
//! Variables are named `x, y, z, t` (indices 0..3) or `z0, z1, z2, z3`; the
//! two styles cannot be mixed in one polynomial.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{LinkError, Result};

pub const VARIABLE_NAMES: [&str; 4] = ["x", "y", "z", "t"];

/// Positive integer weights together with a positive degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWeightSystem")]
pub struct WeightSystem {
    weights: Vec<u64>,
    degree: u64,
}

#[derive(Deserialize)]
struct RawWeightSystem {
    weights: Vec<u64>,
    degree: u64,
}

impl TryFrom<RawWeightSystem> for WeightSystem {
    type Error = LinkError;

    fn try_from(raw: RawWeightSystem) -> Result<Self> {
        WeightSystem::new(raw.weights, raw.degree)
    }
}

impl WeightSystem {
    pub fn new(weights: Vec<u64>, degree: u64) -> Result<Self> {
        if weights.is_empty() || weights.len() > 4 {
            return Err(LinkError::InvalidWeights(format!(
                "expected 1 to 4 weights, found {}",
                weights.len()
            )));
        }
        if let Some(i) = weights.iter().position(|&w| w == 0) {
            return Err(LinkError::InvalidWeights(format!("weight {i} is zero")));
        }
        if degree == 0 {
            return Err(LinkError::ZeroDegree);
        }
        Ok(WeightSystem { weights, degree })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight_sum(&self) -> u128 {
        self.weights.iter().map(|&w| w as u128).sum()
    }

    /// gcd of all weights.
    pub fn weight_gcd(&self) -> u64 {
        self.weights.iter().fold(0, |g, &w| g.gcd(&w))
    }

    pub fn is_primitive(&self) -> bool {
        self.weight_gcd() == 1
    }

    /// Divide weights and degree by the overall weight gcd.
    pub fn normalized(&self) -> Result<WeightSystem> {
        let (weights, degree) = crate::ambient::normalize(&self.weights, self.degree)?;
        WeightSystem::new(weights, degree)
    }

    /// Multiply every weight and the degree by `factor`.
    pub fn scaled(&self, factor: u64) -> Result<WeightSystem> {
        let overflow = || LinkError::InvalidWeights("scaled weights overflow".into());
        let weights = self
            .weights
            .iter()
            .map(|&w| w.checked_mul(factor).ok_or_else(overflow))
            .collect::<Result<Vec<_>>>()?;
        let degree = self.degree.checked_mul(factor).ok_or_else(overflow)?;
        WeightSystem::new(weights, degree)
    }

    /// Weights reordered by `perm`: new index `i` carries old weight `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> WeightSystem {
        WeightSystem {
            weights: perm.iter().map(|&p| self.weights[p]).collect(),
            degree: self.degree,
        }
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ws: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        write!(f, "P({}) degree {}", ws.join(","), self.degree)
    }
}

/// Weighted degree Σ eᵢwᵢ.
pub fn monomial_degree(exponents: &[u32], weights: &[u64]) -> Result<u64> {
    if exponents.len() != weights.len() {
        return Err(LinkError::LengthMismatch {
            expected: weights.len(),
            found: exponents.len(),
        });
    }
    exponents
        .iter()
        .zip(weights)
        .try_fold(0u64, |acc, (&e, &w)| {
            (e as u64).checked_mul(w).and_then(|t| acc.checked_add(t))
        })
        .ok_or_else(|| LinkError::InvalidWeights("weighted degree overflows u64".into()))
}

/// All exponent vectors of weighted degree `d`, i.e. the monomial basis of
/// O(d), in descending lexicographic order.
pub fn degree_d_monomials(weights: &WeightSystem) -> Vec<Vec<u32>> {
    fn walk(ws: &[u64], rest: u64, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        match ws {
            [] => {
                if rest == 0 {
                    out.push(prefix.clone());
                }
            }
            [w] => {
                if rest % w == 0 {
                    prefix.push((rest / w) as u32);
                    out.push(prefix.clone());
                    prefix.pop();
                }
            }
            [w, tail @ ..] => {
                for e in (0..=rest / w).rev() {
                    prefix.push(e as u32);
                    walk(tail, rest - e * w, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(weights.weights(), weights.degree(), &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coefficient: BigRational,
}

impl Monomial {
    pub fn unit(exponents: Vec<u32>) -> Self {
        Monomial {
            exponents,
            coefficient: BigRational::one(),
        }
    }

    /// Indices with a positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    pub fn total_degree(&self) -> u64 {
        self.exponents.iter().map(|&e| e as u64).sum()
    }

    /// True when every variable with nonzero exponent lies in `allowed`.
    pub fn supported_in(&self, allowed: &[usize]) -> bool {
        self.support().all(|i| allowed.contains(&i))
    }
}

/// A weighted homogeneous polynomial, stored by its monomial support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPolynomial {
    weight_system: WeightSystem,
    monomials: Vec<Monomial>,
}

impl WeightedPolynomial {
    pub fn new(weights: Vec<u64>, monomials: Vec<Monomial>) -> Result<Self> {
        let first = monomials.first().ok_or(LinkError::ZeroPolynomial)?;
        let degree = monomial_degree(&first.exponents, &weights)?;
        let mut seen = std::collections::HashSet::new();
        for m in &monomials {
            if m.coefficient.is_zero() {
                return Err(LinkError::InvalidParameter("zero coefficient".into()));
            }
            let d = monomial_degree(&m.exponents, &weights)?;
            if d != degree {
                return Err(LinkError::NotHomogeneous {
                    first: degree,
                    second: d,
                });
            }
            if !seen.insert(m.exponents.clone()) {
                return Err(LinkError::InvalidParameter(format!(
                    "repeated exponent vector {:?}",
                    m.exponents
                )));
            }
        }
        let weight_system = WeightSystem::new(weights, degree)?;
        Ok(WeightedPolynomial {
            weight_system,
            monomials,
        })
    }

    /// Polynomial with unit coefficients on the given support.
    pub fn from_exponents(weights: Vec<u64>, support: Vec<Vec<u32>>) -> Result<Self> {
        Self::new(weights, support.into_iter().map(Monomial::unit).collect())
    }

    pub fn weight_system(&self) -> &WeightSystem {
        &self.weight_system
    }

    pub fn weights(&self) -> &[u64] {
        self.weight_system.weights()
    }

    pub fn degree(&self) -> u64 {
        self.weight_system.degree()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn num_variables(&self) -> usize {
        self.weight_system.len()
    }

    /// Same support over weights divided by their gcd.
    pub fn normalized(&self) -> Result<WeightedPolynomial> {
        let ws = self.weight_system.normalized()?;
        Ok(WeightedPolynomial {
            weight_system: ws,
            monomials: self.monomials.clone(),
        })
    }

    /// Same polynomial over weights multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Result<WeightedPolynomial> {
        Ok(WeightedPolynomial {
            weight_system: self.weight_system.scaled(factor)?,
            monomials: self.monomials.clone(),
        })
    }

    /// Rename variables: new variable `i` is old variable `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> WeightedPolynomial {
        let monomials = self
            .monomials
            .iter()
            .map(|m| Monomial {
                exponents: perm.iter().map(|&p| m.exponents[p]).collect(),
                coefficient: m.coefficient.clone(),
            })
            .collect();
        WeightedPolynomial {
            weight_system: self.weight_system.permuted(perm),
            monomials,
        }
    }

    pub fn exponent_vectors(&self) -> Vec<Vec<u32>> {
        self.monomials.iter().map(|m| m.exponents.clone()).collect()
    }
}

fn variable_name(index: usize, indexed: bool) -> String {
    if indexed {
        format!("z{index}")
    } else {
        VARIABLE_NAMES[index].to_string()
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, first: bool) -> fmt::Result {
    let negative = m.coefficient.is_negative();
    let magnitude = m.coefficient.abs();
    if first {
        if negative {
            write!(f, "-")?;
        }
    } else {
        write!(f, "{}", if negative { " - " } else { " + " })?;
    }
    let mut factors = Vec::new();
    if !magnitude.is_one() {
        factors.push(magnitude.to_string());
    }
    for (i, &e) in m.exponents.iter().enumerate() {
        match e {
            0 => {}
            1 => factors.push(variable_name(i, false)),
            _ => factors.push(format!("{}^{}", variable_name(i, false), e)),
        }
    }
    if factors.is_empty() {
        factors.push("1".into());
    }
    write!(f, "{}", factors.join("*"))
}

impl fmt::Display for WeightedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.monomials.iter().enumerate() {
            write_monomial(f, m, k == 0)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NamingStyle {
    Letters,
    Indexed,
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    nvars: usize,
    style: Option<NamingStyle>,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(LinkError::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.text[start..self.pos])
    }

    fn set_style(&mut self, style: NamingStyle) -> Result<()> {
        match self.style {
            Some(s) if s != style => self.error("cannot mix x,y,z,t with z0..z3 naming"),
            _ => {
                self.style = Some(style);
                Ok(())
            }
        }
    }

    /// Variable index if a variable starts here.
    fn variable(&mut self) -> Result<Option<usize>> {
        self.skip_ws();
        let index = match self.bytes.get(self.pos) {
            Some(b'x') => Some((1, 0, NamingStyle::Letters)),
            Some(b'y') => Some((1, 1, NamingStyle::Letters)),
            Some(b't') => Some((1, 3, NamingStyle::Letters)),
            Some(b'z') => match self.bytes.get(self.pos + 1) {
                Some(c) if c.is_ascii_digit() => {
                    let idx = (c - b'0') as usize;
                    if self
                        .bytes
                        .get(self.pos + 2)
                        .is_some_and(|c| c.is_ascii_digit())
                    {
                        return self.error("variable index out of range");
                    }
                    Some((2, idx, NamingStyle::Indexed))
                }
                _ => Some((1, 2, NamingStyle::Letters)),
            },
            _ => None,
        };
        let Some((len, idx, style)) = index else {
            return Ok(None);
        };
        self.set_style(style)?;
        if idx >= self.nvars {
            return self.error(format!(
                "variable {} needs at least {} weights, got {}",
                variable_name(idx, style == NamingStyle::Indexed),
                idx + 1,
                self.nvars
            ));
        }
        self.pos += len;
        Ok(Some(idx))
    }

    fn coefficient(&mut self) -> Result<Option<BigRational>> {
        self.skip_ws();
        let Some(num) = self.digits() else {
            return Ok(None);
        };
        let num: BigInt = num.parse().expect("digits");
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let Some(den) = self.digits() else {
                return self.error("expected denominator");
            };
            let den: BigInt = den.parse().expect("digits");
            if den.is_zero() {
                return self.error("zero denominator");
            }
            return Ok(Some(BigRational::new(num, den)));
        }
        Ok(Some(BigRational::from_integer(num)))
    }

    fn term(&mut self, negative: bool) -> Result<(Vec<u32>, BigRational)> {
        let coefficient = self.coefficient()?;
        let mut exponents = vec![0u32; self.nvars];
        let mut factors = 0usize;
        loop {
            let star = self.peek() == Some(b'*');
            if star {
                if coefficient.is_none() && factors == 0 {
                    return self.error("term cannot start with '*'");
                }
                self.pos += 1;
            }
            let idx = match self.variable()? {
                Some(idx) => idx,
                None if star => return self.error("expected a variable after '*'"),
                None => break,
            };
            let mut e = 1u32;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                self.skip_ws();
                let Some(digits) = self.digits() else {
                    return self.error("expected exponent after '^'");
                };
                e = match digits.parse() {
                    Ok(e) => e,
                    Err(_) => return self.error("exponent too large"),
                };
            }
            exponents[idx] = match exponents[idx].checked_add(e) {
                Some(v) => v,
                None => return self.error("exponent too large"),
            };
            factors += 1;
        }
        let Some(mut coefficient) = coefficient.or_else(|| (factors > 0).then(BigRational::one))
        else {
            return self.error("expected a term");
        };
        if negative {
            coefficient = -coefficient;
        }
        Ok((exponents, coefficient))
    }
}

/// Parse polynomial text over `weights`; the degree is inferred from the first
/// monomial and weighted homogeneity is verified.
pub fn parse_polynomial(text: &str, weights: &[u64]) -> Result<WeightedPolynomial> {
    if weights.is_empty() || weights.len() > 4 {
        return Err(LinkError::InvalidWeights(format!(
            "expected 1 to 4 weights, found {}",
            weights.len()
        )));
    }
    let mut p = Parser {
        text,
        bytes: text.as_bytes(),
        pos: 0,
        nvars: weights.len(),
        style: None,
    };
    let mut terms: Vec<(Vec<u32>, BigRational)> = Vec::new();
    let mut negative = false;
    match p.peek() {
        Some(b'-') => {
            negative = true;
            p.pos += 1;
        }
        Some(b'+') => p.pos += 1,
        None => return Err(LinkError::ZeroPolynomial),
        _ => {}
    }
    loop {
        terms.push(p.term(negative)?);
        match p.peek() {
            None => break,
            Some(b'+') => negative = false,
            Some(b'-') => negative = true,
            Some(c) => return p.error(format!("unexpected character '{}'", c as char)),
        }
        p.pos += 1;
    }

    // Degree is read off the first term; mixed degrees are reported before merging.
    let mut degree = None;
    for (exps, _) in &terms {
        let d = monomial_degree(exps, weights)?;
        match degree {
            None => degree = Some(d),
            Some(first) if first != d => {
                return Err(LinkError::NotHomogeneous { first, second: d })
            }
            _ => {}
        }
    }

    let mut order = Vec::new();
    let mut merged: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    for (exps, c) in terms {
        if !merged.contains_key(&exps) {
            order.push(exps.clone());
        }
        *merged.entry(exps).or_insert_with(BigRational::zero) += c;
    }
    let monomials: Vec<Monomial> = order
        .into_iter()
        .filter_map(|exps| {
            let c = merged.remove(&exps)?;
            (!c.is_zero()).then_some(Monomial {
                exponents: exps,
                coefficient: c,
            })
        })
        .collect();
    if monomials.is_empty() {
        return Err(LinkError::ZeroPolynomial);
    }
    if degree == Some(0) {
        return Err(LinkError::ZeroDegree);
    }
    WeightedPolynomial::new(weights.to_vec(), monomials)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_case_one_quartic() {
        let f = parse_polynomial("x^4 + y^2 + z^9 + t^9", &[9, 18, 4, 4]).unwrap();
        assert_eq!(f.degree(), 36);
        assert_eq!(f.monomials().len(), 4);
    }

    #[test]
    fn parses_cyclic_polynomial() {
        let f = parse_polynomial("x^4*y + y^7*z + z^10*t + t^13*x", &[264, 157, 114, 73]).unwrap();
        assert_eq!(f.degree(), 1213);
        assert_eq!(f.exponent_vectors()[0], vec![4, 1, 0, 0]);
    }

    #[test]
    fn implicit_products_and_indexed_names() {
        let f = parse_polynomial("x^4y + 3 y^7 z", &[264, 157, 114, 73]).unwrap();
        assert_eq!(f.to_string(), "x^4*y + 3*y^7*z");
        let f = parse_polynomial("z0^4 z1 + 2*z1^7*z2", &[264, 157, 114, 73]).unwrap();
        assert_eq!(f.exponent_vectors(), vec![vec![4, 1, 0, 0], vec![0, 7, 1, 0]]);
        assert_eq!(f.monomials()[1].coefficient, BigRational::from_integer(2.into()));
    }

    #[test]
    fn rejects_mixed_degrees() {
        assert_eq!(
            parse_polynomial("x^4 + y^3", &[1, 1]),
            Err(LinkError::NotHomogeneous { first: 4, second: 3 })
        );
    }

    #[test]
    fn rejects_bad_text() {
        for bad in ["x^", "x + + y", "x^4 + q", "x^4 z1", "", "x*"] {
            assert!(parse_polynomial(bad, &[1, 1, 1, 1]).is_err(), "{bad:?}");
        }
        assert!(matches!(
            parse_polynomial("x^2 - x^2", &[1, 1]),
            Err(LinkError::ZeroPolynomial)
        ));
        assert!(matches!(
            parse_polynomial("t^2", &[1, 1]),
            Err(LinkError::Syntax { .. })
        ));
    }

    #[test]
    fn duplicate_terms_merge() {
        let f = parse_polynomial("x^2 + 2x^2 + y^2", &[1, 1]).unwrap();
        assert_eq!(f.monomials().len(), 2);
        assert_eq!(f.to_string(), "3*x^2 + y^2");
    }

    #[test]
    fn monomial_degree_examples() {
        assert_eq!(monomial_degree(&[4, 1, 0, 0], &[264, 157, 114, 73]), Ok(1213));
        assert_eq!(monomial_degree(&[0, 0, 0, 0], &[5, 6, 7, 8]), Ok(0));
        assert_eq!(monomial_degree(&[2, 1], &[3, 5]), Ok(11));
        assert!(matches!(
            monomial_degree(&[1, 2, 3], &[1, 1]),
            Err(LinkError::LengthMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn degree_d_monomial_examples() {
        let ws = WeightSystem::new(vec![1, 1], 2).unwrap();
        assert_eq!(degree_d_monomials(&ws), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);

        let ws = WeightSystem::new(vec![9, 18, 4, 4], 36).unwrap();
        let all = degree_d_monomials(&ws);
        for m in [[4, 0, 0, 0], [0, 2, 0, 0], [0, 0, 9, 0], [0, 0, 0, 9]] {
            assert!(all.contains(&m.to_vec()));
        }

        let ws = WeightSystem::new(vec![5, 7], 3).unwrap();
        assert!(degree_d_monomials(&ws).is_empty());
    }

    #[test]
    fn weight_system_validation() {
        assert!(WeightSystem::new(vec![1, 0, 2], 4).is_err());
        assert!(WeightSystem::new(vec![1, 2], 0).is_err());
        assert!(WeightSystem::new(vec![], 3).is_err());
        let ws: WeightSystem = serde_json::from_str(r#"{"weights":[9,18,4,4],"degree":36}"#).unwrap();
        assert_eq!(ws.weight_sum(), 35);
        assert!(serde_json::from_str::<WeightSystem>(r#"{"weights":[0],"degree":3}"#).is_err());
    }
}
