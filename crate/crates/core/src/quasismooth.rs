//! Quasismoothness of hypersurfaces in P(w₀,…,w₃) via the three monomial
//! conditions.
//!
//! Monomial existence is answered either from the support of a concrete
//! polynomial or from the whole linear system O(d) (the general member).

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{LinkError, Result};
use crate::polyspec::{WeightSystem, WeightedPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    /// Only monomials present in the given polynomial.
    Support,
    /// Every monomial of O(d).
    LinearSystem,
}

/// Where monomials are looked up.
#[derive(Debug, Clone, Copy)]
pub enum MonomialSource<'a> {
    Support(&'a WeightedPolynomial),
    LinearSystem(&'a WeightSystem),
}

/// Nonnegative `e` with Σ e_k·w_k = target over the listed variables, largest
/// leading exponent first. Returns exponents aligned with `vars`.
fn represent(target: u64, vars: &[(usize, u64)]) -> Option<Vec<u32>> {
    match vars {
        [] => (target == 0).then(Vec::new),
        [(_, w)] => (target % w == 0).then(|| vec![(target / w) as u32]),
        [(_, w), rest @ ..] => (0..=target / w).rev().find_map(|e| {
            represent(target - e * w, rest).map(|mut tail| {
                tail.insert(0, e as u32);
                tail
            })
        }),
    }
}

impl<'a> MonomialSource<'a> {
    pub fn new(f: &'a WeightedPolynomial, mode: CheckMode) -> Self {
        match mode {
            CheckMode::Support => MonomialSource::Support(f),
            CheckMode::LinearSystem => MonomialSource::LinearSystem(f.weight_system()),
        }
    }

    pub fn weights(&self) -> &'a [u64] {
        match self {
            MonomialSource::Support(f) => f.weights(),
            MonomialSource::LinearSystem(ws) => ws.weights(),
        }
    }

    pub fn degree(&self) -> u64 {
        match self {
            MonomialSource::Support(f) => f.degree(),
            MonomialSource::LinearSystem(ws) => ws.degree(),
        }
    }

    pub fn mode(&self) -> CheckMode {
        match self {
            MonomialSource::Support(_) => CheckMode::Support,
            MonomialSource::LinearSystem(_) => CheckMode::LinearSystem,
        }
    }

    fn find_in_support(&self, pred: impl Fn(&[u32]) -> bool) -> Option<Vec<u32>> {
        match self {
            MonomialSource::Support(f) => f
                .monomials()
                .iter()
                .find(|m| pred(&m.exponents))
                .map(|m| m.exponents.clone()),
            MonomialSource::LinearSystem(_) => unreachable!("support lookup on linear system"),
        }
    }

    /// Solve Σ e_k w_k = target over `vars`, spread into a full exponent vector.
    fn solve(&self, target: u64, vars: &[usize]) -> Option<Vec<u32>> {
        let w = self.weights();
        let tagged: Vec<(usize, u64)> = vars.iter().map(|&k| (k, w[k])).collect();
        let es = represent(target, &tagged)?;
        let mut exps = vec![0u32; w.len()];
        for (&k, e) in vars.iter().zip(es) {
            exps[k] += e;
        }
        Some(exps)
    }

    /// Index of a variable appearing as a linear monomial, if any.
    pub fn linear_term(&self) -> Option<usize> {
        match self {
            MonomialSource::Support(f) => f
                .monomials()
                .iter()
                .find(|m| m.total_degree() == 1)
                .and_then(|m| m.support().next()),
            MonomialSource::LinearSystem(ws) => ws.weights().iter().position(|&w| w == ws.degree()),
        }
    }

    /// A monomial z_i^m z_j with m ≥ 1; j = i is allowed.
    pub fn pointing_monomial(&self, i: usize) -> Option<Vec<u32>> {
        let n = self.weights().len();
        match self {
            MonomialSource::Support(_) => self.find_in_support(|e| {
                let others: Vec<usize> = (0..n).filter(|&k| k != i && e[k] > 0).collect();
                match others.as_slice() {
                    [] => e[i] >= 2,
                    [j] => e[i] >= 1 && e[*j] == 1,
                    _ => false,
                }
            }),
            MonomialSource::LinearSystem(_) => {
                let (w, d) = (self.weights(), self.degree());
                (0..n).find_map(|j| {
                    let rest = d.checked_sub(w[j])?;
                    (rest > 0 && rest % w[i] == 0).then(|| {
                        let mut exps = vec![0u32; n];
                        exps[i] += (rest / w[i]) as u32;
                        exps[j] += 1;
                        exps
                    })
                })
            }
        }
    }

    /// A monomial z_i^a z_j^b (zero exponents allowed).
    pub fn pair_monomial(&self, i: usize, j: usize) -> Option<Vec<u32>> {
        match self {
            MonomialSource::Support(_) => self.find_in_support(|e| {
                e.iter()
                    .enumerate()
                    .all(|(k, &ek)| ek == 0 || k == i || k == j)
            }),
            MonomialSource::LinearSystem(_) => self.solve(self.degree(), &[i, j]),
        }
    }

    /// A monomial z_i^a z_j^b z_k.
    pub fn escape_monomial(&self, i: usize, j: usize, k: usize) -> Option<Vec<u32>> {
        match self {
            MonomialSource::Support(_) => self.find_in_support(|e| {
                e[k] == 1
                    && e.iter()
                        .enumerate()
                        .all(|(m, &em)| em == 0 || m == i || m == j || m == k)
            }),
            MonomialSource::LinearSystem(_) => {
                let rest = self.degree().checked_sub(self.weights()[k])?;
                let mut exps = self.solve(rest, &[i, j])?;
                exps[k] += 1;
                Some(exps)
            }
        }
    }

    /// Some monomial not involving z_i.
    pub fn omitting_monomial(&self, i: usize) -> Option<Vec<u32>> {
        match self {
            MonomialSource::Support(_) => self.find_in_support(|e| e[i] == 0),
            MonomialSource::LinearSystem(_) => {
                let others: Vec<usize> = (0..self.weights().len()).filter(|&k| k != i).collect();
                self.solve(self.degree(), &others)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: u8,
    pub indices: Vec<usize>,
    pub explanation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub condition: u8,
    pub indices: Vec<usize>,
    pub exponents: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasismoothVerdict {
    pub mode: CheckMode,
    pub passed: bool,
    pub failures: Vec<ConditionReport>,
    pub witnesses: Vec<Witness>,
    /// Pairs with gcd(wᵢ, wⱼ) > 1 but no monomial in zᵢ, zⱼ alone: the
    /// hypersurface then contains the line {z_k = z_l = 0} of the singular
    /// locus. Informational; quasismoothness is decided by conditions 1 and 3.
    pub advisories: Vec<ConditionReport>,
}

fn var(i: usize) -> &'static str {
    crate::polyspec::VARIABLE_NAMES[i]
}

/// Run the three quasismoothness conditions against `source`.
pub fn check_quasismooth(source: MonomialSource<'_>) -> Result<QuasismoothVerdict> {
    let weights = source.weights();
    if weights.len() != 4 {
        return Err(LinkError::WrongArity {
            found: weights.len(),
        });
    }
    if let Some(index) = source.linear_term() {
        return Err(LinkError::LinearTermPresent { index });
    }
    let n = weights.len();
    let mut failures = Vec::new();
    let mut witnesses = Vec::new();
    let mut advisories = Vec::new();

    for i in 0..n {
        match source.pointing_monomial(i) {
            Some(e) => witnesses.push(Witness {
                condition: 1,
                indices: vec![i],
                exponents: vec![e],
            }),
            None => failures.push(ConditionReport {
                condition: 1,
                indices: vec![i],
                explanation: format!("no monomial {0}^m*z_j of degree {1} with m >= 1", var(i), source.degree()),
            }),
        }
    }

    for i in 0..n {
        for j in i + 1..n {
            let g = weights[i].gcd(&weights[j]);
            if g == 1 {
                continue;
            }
            match source.pair_monomial(i, j) {
                Some(e) => witnesses.push(Witness {
                    condition: 2,
                    indices: vec![i, j],
                    exponents: vec![e],
                }),
                None => advisories.push(ConditionReport {
                    condition: 2,
                    indices: vec![i, j],
                    explanation: format!(
                        "gcd({}, {}) = {g} but no monomial in {} and {} alone; the hypersurface contains a Z_{g} line",
                        weights[i],
                        weights[j],
                        var(i),
                        var(j)
                    ),
                }),
            }
        }
    }

    for i in 0..n {
        for j in i + 1..n {
            if let Some(e) = source.pair_monomial(i, j) {
                witnesses.push(Witness {
                    condition: 3,
                    indices: vec![i, j],
                    exponents: vec![e],
                });
                continue;
            }
            let rest: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
            let (k, l) = (rest[0], rest[1]);
            match (source.escape_monomial(i, j, k), source.escape_monomial(i, j, l)) {
                (Some(ek), Some(el)) => witnesses.push(Witness {
                    condition: 3,
                    indices: vec![i, j],
                    exponents: vec![ek, el],
                }),
                _ => failures.push(ConditionReport {
                    condition: 3,
                    indices: vec![i, j],
                    explanation: format!(
                        "no monomial in {0},{1} alone and not both {0}^a*{1}^b*{2} and {0}^c*{1}^d*{3}",
                        var(i),
                        var(j),
                        var(k),
                        var(l)
                    ),
                }),
            }
        }
    }

    Ok(QuasismoothVerdict {
        mode: source.mode(),
        passed: failures.is_empty(),
        failures,
        witnesses,
        advisories,
    })
}

/// Check a concrete polynomial, reading monomials from its support or from O(d).
pub fn check_polynomial(f: &WeightedPolynomial, mode: CheckMode) -> Result<QuasismoothVerdict> {
    check_quasismooth(MonomialSource::new(f, mode))
}

/// Check the general member of O(d).
pub fn check_weights(ws: &WeightSystem) -> Result<QuasismoothVerdict> {
    check_quasismooth(MonomialSource::LinearSystem(ws))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyspec::{degree_d_monomials, monomial_degree, parse_polynomial};

    #[test]
    fn case_one_passes_on_support() {
        let f = parse_polynomial("x^4 + y^2 + z^9 + t^9", &[9, 18, 4, 4]).unwrap();
        let v = check_polynomial(&f, CheckMode::Support).unwrap();
        assert!(v.passed, "{:?}", v.failures);
        assert!(v.advisories.is_empty());
    }

    #[test]
    fn cyclic_passes_via_escape_monomials() {
        let f = parse_polynomial("x^4*y + y^7*z + z^10*t + t^13*x", &[264, 157, 114, 73]).unwrap();
        let v = check_polynomial(&f, CheckMode::Support).unwrap();
        assert!(v.passed, "{:?}", v.failures);
        // x and z share the factor 6 but no degree-1213 monomial lives in x, z alone.
        assert_eq!(v.advisories.len(), 1);
        assert_eq!(v.advisories[0].indices, vec![0, 2]);
        let w = v
            .witnesses
            .iter()
            .find(|w| w.condition == 3 && w.indices == vec![0, 2])
            .unwrap();
        assert_eq!(w.exponents, vec![vec![4, 1, 0, 0], vec![0, 0, 10, 1]]);
    }

    #[test]
    fn missing_variable_fails_condition_one() {
        let f = parse_polynomial("x^4 + y^4 + z^4", &[1, 1, 1, 1]).unwrap();
        let v = check_polynomial(&f, CheckMode::Support).unwrap();
        assert!(!v.passed);
        assert_eq!(v.failures[0].condition, 1);
        assert_eq!(v.failures[0].indices, vec![3]);
        assert!(check_polynomial(&f, CheckMode::LinearSystem).unwrap().passed);
    }

    #[test]
    fn preconditions() {
        let f = parse_polynomial("x^2 + y", &[1, 2]).unwrap();
        assert_eq!(
            check_polynomial(&f, CheckMode::Support),
            Err(LinkError::WrongArity { found: 2 })
        );
        let f = parse_polynomial("x^2 + y + z^2 + t^2", &[1, 2, 1, 1]).unwrap();
        assert_eq!(
            check_polynomial(&f, CheckMode::Support),
            Err(LinkError::LinearTermPresent { index: 1 })
        );
        let ws = WeightSystem::new(vec![1, 2, 3, 6], 6).unwrap();
        assert_eq!(check_weights(&ws), Err(LinkError::LinearTermPresent { index: 3 }));
    }

    #[test]
    fn witnesses_have_degree_d() {
        for (w, d) in [(vec![9, 18, 4, 4], 36), (vec![35, 14, 20, 40], 140), (vec![264, 157, 114, 73], 1213)] {
            let ws = WeightSystem::new(w.clone(), d).unwrap();
            let v = check_weights(&ws).unwrap();
            assert!(v.passed);
            for wit in &v.witnesses {
                for e in &wit.exponents {
                    assert_eq!(monomial_degree(e, &w).unwrap(), d);
                }
            }
        }
    }

    #[test]
    fn direct_queries_agree_with_enumeration() {
        // Cross-check the Diophantine shortcuts against the materialized O(d).
        for w0 in 1..=5u64 {
            for w1 in w0..=6 {
                for d in 2..=20u64 {
                    let ws = WeightSystem::new(vec![w0, w1, 2, 3], d).unwrap();
                    let all = degree_d_monomials(&ws);
                    let f = WeightedPolynomial::from_exponents(ws.weights().to_vec(), all.clone());
                    let Ok(f) = f else { continue };
                    let lin = MonomialSource::LinearSystem(&ws);
                    let sup = MonomialSource::Support(&f);
                    for i in 0..4 {
                        assert_eq!(lin.pointing_monomial(i).is_some(), sup.pointing_monomial(i).is_some());
                        assert_eq!(lin.omitting_monomial(i).is_some(), sup.omitting_monomial(i).is_some());
                        for j in 0..4 {
                            assert_eq!(lin.pair_monomial(i, j).is_some(), sup.pair_monomial(i, j).is_some());
                            for k in 0..4 {
                                if k != i && k != j {
                                    assert_eq!(
                                        lin.escape_monomial(i, j, k).is_some(),
                                        sup.escape_monomial(i, j, k).is_some(),
                                        "{ws} {i} {j} {k}"
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
