//! Branch divisor along coordinate hyperplanes, genus of weighted plane
//! curves, and assembly of H₂ of the link.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::ambient::normalize;
use crate::error::{LinkError, Result};
use crate::polyspec::{WeightSystem, WeightedPolynomial};
use crate::quasismooth::MonomialSource;

/// One curve Dᵢ = {zᵢ = 0} of the branch divisor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchComponent {
    #[serde(rename = "index")]
    pub coordinate_index: usize,
    #[serde(rename = "m")]
    pub ramification: u64,
    #[serde(rename = "weights")]
    pub curve_weights: [u64; 3],
    #[serde(rename = "degree")]
    pub curve_degree: u64,
    pub genus: u64,
}

impl BranchComponent {
    /// Whether P(curve_weights) is itself well-formed.
    pub fn curve_ambient_well_formed(&self) -> bool {
        let [a, b, c] = self.curve_weights;
        a.gcd(&b) == 1 && a.gcd(&c) == 1 && b.gcd(&c) == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionFactor {
    pub order: u64,
    pub exponent: u64,
}

/// H₂(M, Z) = Z^rank ⊕ ⊕ (Z/mᵢ)^{2g(Dᵢ)}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub rank: u64,
    pub torsion: Vec<TorsionFactor>,
}

impl HomologySummary {
    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl std::fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("(Z/{})^{}", t.order, t.exponent));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

fn rational(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Twice the genus of a quasismooth curve of degree `d` in P(w₀, w₁, w₂),
/// as an exact rational.
pub fn twice_genus(curve_weights: [u64; 3], degree: u64) -> BigRational {
    let w = curve_weights.map(rational);
    let d = rational(degree);
    let mut two_g = &d * &d / (&w[0] * &w[1] * &w[2]);
    for i in 0..3 {
        for j in i + 1..3 {
            let g = rational(curve_weights[i].gcd(&curve_weights[j]));
            two_g -= &d * g / (&w[i] * &w[j]);
        }
    }
    for (i, wi) in w.iter().enumerate() {
        two_g += rational(degree.gcd(&curve_weights[i])) / wi;
    }
    two_g - rational(1)
}

pub fn curve_genus(curve_weights: [u64; 3], degree: u64) -> Result<u64> {
    if curve_weights.contains(&0) || degree == 0 {
        return Err(LinkError::InvalidWeights("curve weights and degree must be positive".into()));
    }
    let g = curve_weights.iter().fold(0, |g, w| w.gcd(&g));
    if g != 1 {
        return Err(LinkError::NotPrimitive { gcd: g });
    }
    let two_g = twice_genus(curve_weights, degree);
    let integral = two_g.is_integer() && !two_g.numer().is_negative();
    let even = integral && two_g.numer().is_even();
    if !even {
        return Err(LinkError::NonIntegralGenus {
            value: two_g.to_string(),
        });
    }
    (two_g.numer() / 2u32)
        .to_u64()
        .ok_or_else(|| LinkError::NonIntegralGenus {
            value: two_g.to_string(),
        })
}

pub fn branch_components(source: &MonomialSource<'_>) -> Result<Vec<BranchComponent>> {
    let weights = source.weights();
    if weights.len() != 4 {
        return Err(LinkError::WrongArity {
            found: weights.len(),
        });
    }
    let overall = weights.iter().fold(0, |g, w| w.gcd(&g));
    if overall != 1 {
        return Err(LinkError::NotPrimitive { gcd: overall });
    }
    let mut out = Vec::new();
    for i in 0..4 {
        let rest: Vec<u64> = (0..4).filter(|&k| k != i).map(|k| weights[k]).collect();
        let m = rest.iter().fold(0, |g, w| w.gcd(&g));
        if m == 1 {
            continue;
        }
        if source.omitting_monomial(i).is_none() {
            return Err(LinkError::ContainsCoordinateHyperplane { index: i });
        }
        let (cw, cd) = normalize(&rest, source.degree())?;
        let curve_weights = [cw[0], cw[1], cw[2]];
        let genus = curve_genus(curve_weights, cd)?;
        out.push(BranchComponent {
            coordinate_index: i,
            ramification: m,
            curve_weights,
            curve_degree: cd,
            genus,
        });
    }
    Ok(out)
}

/// Branch curves {zᵢ = 0} of the hypersurface {f = 0}.
pub fn branch_divisor(f: &WeightedPolynomial) -> Result<Vec<BranchComponent>> {
    branch_components(&MonomialSource::Support(f))
}

/// Branch curves of the general member of O(d): containment is excluded
/// whenever some degree-d monomial omits zᵢ.
pub fn branch_divisor_general(ws: &WeightSystem) -> Result<Vec<BranchComponent>> {
    branch_components(&MonomialSource::LinearSystem(ws))
}

pub fn second_homology(b2: u64, components: &[BranchComponent]) -> HomologySummary {
    HomologySummary {
        rank: b2,
        torsion: components
            .iter()
            .filter(|c| c.genus > 0)
            .map(|c| TorsionFactor {
                order: c.ramification,
                exponent: 2 * c.genus,
            })
            .collect(),
    }
}
