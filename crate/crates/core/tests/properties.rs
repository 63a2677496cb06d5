use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;

use wlink_core::ambient::{is_well_formed_space, normalize, singular_strata};
use wlink_core::classify::{classify_link, ClassifyOptions, LinkInput};
use wlink_core::orlik::{betti2, betti2_oracle, lambda_mul, reduced_ratios, DivisorElement};
use wlink_core::polyspec::{degree_d_monomials, monomial_degree};
use wlink_core::quasismooth::{check_polynomial, check_weights, CheckMode};
use wlink_core::topology::{branch_divisor, second_homology};
use wlink_core::{parse_polynomial, Monomial, WeightSystem, WeightedPolynomial};

fn element() -> impl Strategy<Value = DivisorElement> {
    prop::collection::vec((1u64..=10_000, -20i64..=20, 1i64..=6), 0..=6).prop_map(|terms| {
        DivisorElement::from_terms(
            terms
                .into_iter()
                .map(|(i, n, d)| (i, BigRational::new(BigInt::from(n), BigInt::from(d)))),
        )
    })
}

/// Weights in 1..=max with a degree that is a positive combination of them.
fn realizable(max: u64, n: usize) -> impl Strategy<Value = WeightSystem> {
    (
        prop::collection::vec(1..=max, n),
        prop::collection::vec(0u64..=4, n),
        0..n,
    )
        .prop_map(|(w, mut e, k)| {
            e[k] += 1;
            let d = w.iter().zip(&e).map(|(a, b)| a * b).sum();
            WeightSystem::new(w, d).unwrap()
        })
}

fn permutation() -> impl Strategy<Value = Vec<usize>> {
    Just(vec![0usize, 1, 2, 3]).prop_shuffle()
}

/// A polynomial whose support is a nonempty subset of O(d).
fn polynomial(max: u64) -> impl Strategy<Value = WeightedPolynomial> {
    realizable(max, 4)
        .prop_filter("O(d) not too large", |ws| degree_d_monomials(ws).len() <= 400)
        .prop_flat_map(|ws| {
            let all = degree_d_monomials(&ws);
            let n = all.len();
            (
                Just(ws),
                prop::sample::subsequence(all, 1..=n.min(8)),
                prop::collection::vec((-9i64..=9).prop_filter("nonzero", |c| *c != 0), 8),
                prop::collection::vec(1i64..=4, 8),
            )
        })
        .prop_map(|(ws, support, nums, dens)| {
            let monomials = support
                .into_iter()
                .zip(nums.into_iter().zip(dens))
                .map(|(exponents, (n, d))| Monomial {
                    exponents,
                    coefficient: BigRational::new(n.into(), d.into()),
                })
                .collect();
            WeightedPolynomial::new(ws.weights().to_vec(), monomials).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn multiplication_commutes(a in element(), b in element()) {
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn multiplication_associates(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn multiplication_distributes(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn lambda_one_is_identity(a in element()) {
        prop_assert_eq!(&a * &DivisorElement::one(), a.clone());
        prop_assert_eq!(&a + &DivisorElement::zero(), a);
    }

    #[test]
    fn basis_product_is_gcd_times_lcm(a in 1u64..=100_000, b in 1u64..=100_000) {
        let p = lambda_mul(&DivisorElement::lambda(a), &DivisorElement::lambda(b));
        let terms: Vec<_> = p.terms().collect();
        prop_assert_eq!(terms.len(), 1);
        prop_assert_eq!(terms[0].0, &a.lcm(&b).into());
        prop_assert_eq!(terms[0].1, &BigRational::from_integer(a.gcd(&b).into()));
        prop_assert_eq!(a.gcd(&b) as u128 * a.lcm(&b) as u128, a as u128 * b as u128);
    }

    #[test]
    fn reduced_ratios_are_coprime(ws in realizable(60, 4)) {
        for r in reduced_ratios(&ws) {
            prop_assert_eq!(r.u.gcd(&r.v), 1);
        }
    }

    #[test]
    fn betti_matches_oracle(ws in realizable(50, 4)) {
        let ws = ws.normalized().unwrap();
        if let Ok(oracle) = betti2_oracle(&ws, 2_000_000) {
            prop_assert_eq!(betti2(&ws).unwrap(), oracle);
        }
    }

    #[test]
    fn degree_d_monomials_have_degree_d(ws in realizable(12, 4)) {
        for e in degree_d_monomials(&ws) {
            prop_assert_eq!(monomial_degree(&e, ws.weights()).unwrap(), ws.degree());
        }
    }

    #[test]
    fn parse_round_trip_is_fixed_point(f in polynomial(10)) {
        let text = f.to_string();
        let once = parse_polynomial(&text, f.weights()).unwrap();
        let twice = parse_polynomial(&once.to_string(), f.weights()).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(once.to_string(), twice.to_string());
    }

    #[test]
    fn mixed_degrees_are_rejected(ws in realizable(10, 3), extra in 1u32..=3) {
        let first = degree_d_monomials(&ws)[0].clone();
        let mut second = first.clone();
        second[0] += extra;
        let r = WeightedPolynomial::from_exponents(ws.weights().to_vec(), vec![first, second]);
        let is_inhomogeneous = matches!(r, Err(wlink_core::LinkError::NotHomogeneous { .. }));
        prop_assert!(is_inhomogeneous);
    }

    #[test]
    fn normalize_is_idempotent(w in prop::collection::vec(1u64..=40, 4), c in 1u64..=12, k in 1u64..=30) {
        let g = w.iter().fold(0, |g, x| x.gcd(&g));
        let scaled: Vec<u64> = w.iter().map(|x| x * c).collect();
        let (n1, d1) = normalize(&scaled, k * g * c).unwrap();
        prop_assert_eq!(n1.iter().fold(0, |g, x| x.gcd(&g)), 1);
        let (n2, d2) = normalize(&n1, d1).unwrap();
        prop_assert_eq!((n1, d1), (n2, d2));
    }

    #[test]
    fn strata_orders_are_complementary_gcds(w in prop::collection::vec(1u64..=30, 4)) {
        prop_assume!(w.iter().fold(0, |g, x| x.gcd(&g)) == 1);
        let strata = singular_strata(&w).unwrap();
        for s in &strata {
            prop_assert!(s.group_order > 1);
            let g = (0..4).filter(|i| !s.zero_set.contains(i)).fold(0, |g, i| w[i].gcd(&g));
            prop_assert_eq!(s.group_order, g);
        }
        if is_well_formed_space(&w).unwrap().well_formed {
            prop_assert!(strata.iter().all(|s| s.zero_set.len() != 1));
        }
    }

    #[test]
    fn support_pass_implies_linear_system_pass(f in polynomial(10)) {
        if let Ok(v) = check_polynomial(&f, CheckMode::Support) {
            if v.passed {
                match check_polynomial(&f, CheckMode::LinearSystem) {
                    Ok(general) => prop_assert!(general.passed),
                    // Some wᵢ = d puts zᵢ itself in O(d).
                    Err(e) => prop_assert_eq!(e.code(), "linear_term_present"),
                }
            }
        }
    }

    #[test]
    fn witnesses_have_degree_d(f in polynomial(10)) {
        for mode in [CheckMode::Support, CheckMode::LinearSystem] {
            if let Ok(v) = check_polynomial(&f, mode) {
                for w in &v.witnesses {
                    for e in &w.exponents {
                        prop_assert_eq!(monomial_degree(e, f.weights()).unwrap(), f.degree());
                    }
                }
            }
        }
    }

    #[test]
    fn verdict_is_permutation_invariant(ws in realizable(15, 4), perm in permutation()) {
        let a = check_weights(&ws);
        let b = check_weights(&ws.permuted(&perm));
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.passed, b.passed);
                let relabel = |ix: &[usize]| {
                    let mut v: Vec<usize> = ix.iter().map(|&i| perm[i]).collect();
                    v.sort();
                    v
                };
                let mut fa: Vec<(u8, Vec<usize>)> = a.failures.iter().map(|f| (f.condition, f.indices.clone())).collect();
                let mut fb: Vec<(u8, Vec<usize>)> = b.failures.iter().map(|f| (f.condition, relabel(&f.indices))).collect();
                fa.sort();
                fb.sort();
                prop_assert_eq!(fa, fb);
            }
            (Err(a), Err(b)) => prop_assert_eq!(a.code(), b.code()),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.map(|v| v.passed), b.map(|v| v.passed)),
        }
    }

    #[test]
    fn branch_divisor_is_permutation_invariant(f in polynomial(10), perm in permutation()) {
        let Ok(f) = f.normalized() else { return Ok(()) };
        let a = branch_divisor(&f);
        let b = branch_divisor(&f.permuted(&perm));
        match (a, b) {
            (Ok(a), Ok(b)) => {
                let mut ka: Vec<(usize, u64, u64, u64)> =
                    a.iter().map(|c| (c.coordinate_index, c.ramification, c.curve_degree, c.genus)).collect();
                let mut kb: Vec<(usize, u64, u64, u64)> =
                    b.iter().map(|c| (perm[c.coordinate_index], c.ramification, c.curve_degree, c.genus)).collect();
                ka.sort();
                kb.sort();
                prop_assert_eq!(ka, kb);
            }
            // Which defect is hit first depends on the variable order.
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn torsion_free_iff_all_genera_vanish(f in polynomial(10)) {
        let Ok(f) = f.normalized() else { return Ok(()) };
        if let Ok(c) = branch_divisor(&f) {
            let h = second_homology(1, &c);
            prop_assert_eq!(h.is_torsion_free(), c.iter().all(|c| c.genus == 0));
        }
    }

    #[test]
    fn scale_invariance(ws in realizable(20, 4), c in 2u64..=7) {
        let opts = ClassifyOptions::default();
        let base = classify_link(&LinkInput::Weights(ws.clone()), opts);
        let scaled = classify_link(&LinkInput::Weights(ws.scaled(c).unwrap()), opts);
        match (base, scaled) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.is_ok(), b.is_ok()),
        }
    }

    #[test]
    fn report_consistency(ws in realizable(20, 4)) {
        if let Ok(r) = classify_link(&LinkInput::Weights(ws), ClassifyOptions::default()) {
            if r.flags.negative_eta_einstein || r.flags.lorentzian_sasaki_einstein {
                prop_assert_eq!(r.sign, wlink_core::classify::Sign::Negative);
            }
            if let Some(name) = &r.diffeo_type {
                let h = r.homology.as_ref().unwrap();
                prop_assert!(h.torsion.is_empty());
                prop_assert_eq!(h.rank, r.b2);
                let expected = if r.b2 == 0 { "S^5".to_string() } else { format!("#{} S^2 x S^3", r.b2) };
                prop_assert_eq!(name, &expected);
            }
        }
    }
}

/// Every exponent vector with Σ eᵢwᵢ = d, by bounded nested loops.
fn brute_force(w: &[u64], d: u64) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let bound = |i: usize| (d / w[i]) as u32;
    for a in 0..=bound(0) {
        for b in 0..=bound(1) {
            for c in 0..=bound(2) {
                let used = a as u64 * w[0] + b as u64 * w[1] + c as u64 * w[2];
                if used <= d && (d - used) % w[3] == 0 {
                    out.push(vec![a, b, c, ((d - used) / w[3]) as u32]);
                }
            }
        }
    }
    out
}

#[test]
fn degree_d_monomials_are_exhaustive() {
    let systems = [[1, 1, 1, 1], [1, 2, 3, 4], [2, 3, 5, 7], [3, 3, 4, 6], [1, 5, 6, 9], [4, 6, 9, 10]];
    for w in systems {
        for d in 1..=60 {
            let ws = WeightSystem::new(w.to_vec(), d).unwrap();
            let mut got = degree_d_monomials(&ws);
            let mut want = brute_force(&w, d);
            got.sort();
            want.sort();
            assert_eq!(got, want, "weights {w:?} degree {d}");
        }
    }
}
