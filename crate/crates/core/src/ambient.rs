//! The ambient weighted projective space: normalization, well-formedness and
//! the orbifold singular strata S_P.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{LinkError, Result};
use crate::polyspec::{WeightSystem, WeightedPolynomial};
use crate::quasismooth::{CheckMode, MonomialSource};

fn gcd_all(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(0, |g, w| g.gcd(&w))
}

fn gcd_except(weights: &[u64], skip: &[usize]) -> u64 {
    gcd_all(
        weights
            .iter()
            .enumerate()
            .filter(|(i, _)| !skip.contains(i))
            .map(|(_, &w)| w),
    )
}

fn require_primitive(weights: &[u64]) -> Result<()> {
    match gcd_all(weights.iter().copied()) {
        1 => Ok(()),
        gcd => Err(LinkError::NotPrimitive { gcd }),
    }
}

/// Divide weights and degree by the gcd of the weights.
pub fn normalize(weights: &[u64], degree: u64) -> Result<(Vec<u64>, u64)> {
    if weights.is_empty() || weights.contains(&0) {
        return Err(LinkError::InvalidWeights("weights must be positive".into()));
    }
    let g = gcd_all(weights.iter().copied());
    if degree % g != 0 {
        return Err(LinkError::DegreeNotDivisible { degree, gcd: g });
    }
    Ok((weights.iter().map(|w| w / g).collect(), degree / g))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceWellFormedness {
    pub well_formed: bool,
    /// First index whose removal leaves weights with a common factor.
    pub offending_index: Option<usize>,
    pub offending_gcd: Option<u64>,
}

pub fn is_well_formed_space(weights: &[u64]) -> Result<SpaceWellFormedness> {
    require_primitive(weights)?;
    for i in 0..weights.len() {
        let g = gcd_except(weights, &[i]);
        if g > 1 {
            return Ok(SpaceWellFormedness {
                well_formed: false,
                offending_index: Some(i),
                offending_gcd: Some(g),
            });
        }
    }
    Ok(SpaceWellFormedness {
        well_formed: true,
        offending_index: None,
        offending_gcd: None,
    })
}

/// A stratum S_P of P(w) with nontrivial cyclic isotropy.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Stratum {
    /// Coordinates set to zero.
    #[serde(rename = "indices")]
    pub zero_set: Vec<usize>,
    /// Order of the local uniformizing group, gcd of the weights outside `zero_set`.
    #[serde(rename = "order")]
    pub group_order: u64,
}

/// All proper nonempty zero sets P with gcd of the complementary weights > 1,
/// ordered by |P| and then lexicographically.
pub fn singular_strata(weights: &[u64]) -> Result<Vec<Stratum>> {
    require_primitive(weights)?;
    let n = weights.len();
    let mut subsets: Vec<Vec<usize>> = (1u32..(1 << n) - 1)
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(subsets
        .into_iter()
        .filter_map(|zero_set| {
            let group_order = gcd_except(weights, &zero_set);
            (group_order > 1).then_some(Stratum {
                zero_set,
                group_order,
            })
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WellFormedWitness {
    /// The ambient space is not well-formed at this index.
    AmbientNotWellFormed { index: usize, gcd: u64 },
    /// The hypersurface contains this codimension-2 stratum.
    ContainsStratum { stratum: Stratum },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypersurfaceWellFormedness {
    pub well_formed: bool,
    pub mode: CheckMode,
    pub witness: Option<WellFormedWitness>,
}

fn hypersurface_well_formed(source: &MonomialSource<'_>) -> Result<HypersurfaceWellFormedness> {
    let weights = source.weights();
    let space = is_well_formed_space(weights)?;
    let mode = source.mode();
    if let (Some(index), Some(gcd)) = (space.offending_index, space.offending_gcd) {
        return Ok(HypersurfaceWellFormedness {
            well_formed: false,
            mode,
            witness: Some(WellFormedWitness::AmbientNotWellFormed { index, gcd }),
        });
    }
    let n = weights.len();
    for k in 0..n {
        for l in k + 1..n {
            let g = weights[k].gcd(&weights[l]);
            if g > 1 && source.pair_monomial(k, l).is_none() {
                let zero_set = (0..n).filter(|&i| i != k && i != l).collect();
                return Ok(HypersurfaceWellFormedness {
                    well_formed: false,
                    mode,
                    witness: Some(WellFormedWitness::ContainsStratum {
                        stratum: Stratum {
                            zero_set,
                            group_order: g,
                        },
                    }),
                });
            }
        }
    }
    Ok(HypersurfaceWellFormedness {
        well_formed: true,
        mode,
        witness: None,
    })
}

/// Well-formedness of the hypersurface {f = 0}, judged on the support of `f`.
pub fn is_well_formed_hypersurface(f: &WeightedPolynomial) -> Result<HypersurfaceWellFormedness> {
    hypersurface_well_formed(&MonomialSource::Support(f))
}

/// Well-formedness of the general member of O(d).
pub fn is_well_formed_general_hypersurface(
    weights: &WeightSystem,
) -> Result<HypersurfaceWellFormedness> {
    hypersurface_well_formed(&MonomialSource::LinearSystem(weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyspec::parse_polynomial;

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&[18, 4, 4], 36), Ok((vec![9, 2, 2], 18)));
        assert_eq!(normalize(&[35, 20, 40], 140), Ok((vec![7, 4, 8], 28)));
        assert_eq!(normalize(&[1, 1, 1, 1], 2), Ok((vec![1, 1, 1, 1], 2)));
        assert_eq!(
            normalize(&[2, 4], 5),
            Err(LinkError::DegreeNotDivisible { degree: 5, gcd: 2 })
        );
    }

    #[test]
    fn well_formed_space_examples() {
        assert!(is_well_formed_space(&[264, 157, 114, 73]).unwrap().well_formed);
        let r = is_well_formed_space(&[9, 18, 4, 4]).unwrap();
        assert!(!r.well_formed);
        assert_eq!((r.offending_index, r.offending_gcd), (Some(0), Some(2)));
        assert!(is_well_formed_space(&[1, 1]).unwrap().well_formed);
        assert_eq!(
            is_well_formed_space(&[2, 4, 6]),
            Err(LinkError::NotPrimitive { gcd: 2 })
        );
    }

    #[test]
    fn strata_of_small_spaces() {
        let strata = singular_strata(&[1, 2, 3]).unwrap();
        assert_eq!(
            strata,
            vec![
                Stratum { zero_set: vec![0, 1], group_order: 3 },
                Stratum { zero_set: vec![0, 2], group_order: 2 },
            ]
        );
        assert!(singular_strata(&[1, 1, 1, 1]).unwrap().is_empty());

        let strata = singular_strata(&[35, 14, 20, 40]).unwrap();
        assert!(strata.contains(&Stratum { zero_set: vec![0], group_order: 2 }));
        assert!(strata.contains(&Stratum { zero_set: vec![1], group_order: 5 }));
    }

    #[test]
    fn hypersurface_examples() {
        let f = parse_polynomial("x^4 + y^2 + z^9 + t^9", &[9, 18, 4, 4]).unwrap();
        let r = is_well_formed_hypersurface(&f).unwrap();
        assert!(!r.well_formed);
        assert_eq!(
            r.witness,
            Some(WellFormedWitness::AmbientNotWellFormed { index: 0, gcd: 2 })
        );

        let f = parse_polynomial("x^2 + y^2 + z^2 + t^2", &[1, 1, 1, 1]).unwrap();
        assert!(is_well_formed_hypersurface(&f).unwrap().well_formed);

        // gcd(264, 114) = 6 does not divide 1213, so the line {y = t = 0} lies on
        // every member of O(1213).
        let f = parse_polynomial("x^4*y + y^7*z + z^10*t + t^13*x", &[264, 157, 114, 73]).unwrap();
        let r = is_well_formed_hypersurface(&f).unwrap();
        assert_eq!(
            r.witness,
            Some(WellFormedWitness::ContainsStratum {
                stratum: Stratum { zero_set: vec![1, 3], group_order: 6 }
            })
        );
        let ws = f.weight_system();
        assert!(!is_well_formed_general_hypersurface(ws).unwrap().well_formed);
    }

    #[test]
    fn support_mode_is_stricter_than_linear_system() {
        // Fermat quartic in P(1,1,2,2) contains no 2-stratum, but a support
        // without z^2, t^2 or z*t would.
        let ws = WeightSystem::new(vec![1, 1, 2, 2], 4).unwrap();
        assert!(is_well_formed_general_hypersurface(&ws).unwrap().well_formed);
        let f = parse_polynomial("x^4 + y^4 + x*y*z + x*y*t", &[1, 1, 2, 2]).unwrap();
        let r = is_well_formed_hypersurface(&f).unwrap();
        assert!(!r.well_formed);
        assert_eq!(
            r.witness,
            Some(WellFormedWitness::ContainsStratum {
                stratum: Stratum { zero_set: vec![0, 1], group_order: 2 }
            })
        );
    }
}
