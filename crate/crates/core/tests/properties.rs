//! Property suites: algebraic laws of the polynomial and cyclotomic layers,
//! and structural properties of stabilizers on seeded random actions.

use proptest::prelude::*;

use csp_core::abelian_action::{
    canonicalize, compute_orbits, element_index, stabilizer_data, subgroup_closure,
    validate_action,
};
use csp_core::cyclotomic::{factorize, CyclotomicNumber};
use csp_core::multipoly::{EvaluationPoint, MultiPoly, VariableProfile};
use csp_core::oracle::{
    self, coset_action, random_action, GeneratedAction, RandomActionParams,
};
use csp_core::rational::{rat, Rational};
use csp_core::sieving::{cyclic_csp_polynomial, interpolate_polynomial, GridValues, SieveOptions};
use num_traits::Zero;

fn arb_profile() -> impl Strategy<Value = VariableProfile> {
    prop::collection::vec(1u64..=6, 1..=3)
        .prop_map(|orders| VariableProfile::new(orders).unwrap())
}

fn arb_poly(profile: VariableProfile) -> impl Strategy<Value = MultiPoly> {
    let arity = profile.arity();
    prop::collection::vec(
        (
            prop::collection::vec(-12i64..=12, arity),
            (-6i64..=6, 1i64..=4),
        ),
        0..=6,
    )
    .prop_map(move |raw| {
        MultiPoly::from_terms(
            profile.clone(),
            raw.into_iter().map(|(exps, (n, d))| (exps, rat(n, d))),
        )
        .unwrap()
    })
}

fn arb_profile_and_polys() -> impl Strategy<Value = (VariableProfile, MultiPoly, MultiPoly)> {
    arb_profile().prop_flat_map(|p| {
        (Just(p.clone()), arb_poly(p.clone()), arb_poly(p))
    })
}

fn grid_points(profile: &VariableProfile) -> Vec<Vec<i64>> {
    let mut points = vec![vec![]];
    for &n in profile.orders() {
        let mut next = Vec::new();
        for p in &points {
            for b in 0..n as i64 {
                let mut q = p.clone();
                q.push(b);
                next.push(q);
            }
        }
        points = next;
    }
    points
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalization_is_idempotent((_, p, _) in arb_profile_and_polys()) {
        let renorm = MultiPoly::from_terms(
            p.profile().clone(),
            p.terms().map(|(e, c)| (e.iter().map(|&x| x as i64).collect(), c.clone())),
        )
        .unwrap();
        prop_assert_eq!(renorm, p);
    }

    #[test]
    fn ring_laws((_, p, q) in arb_profile_and_polys()) {
        prop_assert_eq!(p.add(&q).unwrap(), q.add(&p).unwrap());
        prop_assert_eq!(p.mul(&q).unwrap(), q.mul(&p).unwrap());
        prop_assert_eq!(p.sub(&p).unwrap(), MultiPoly::zero(p.profile().clone()));
        let half = rat(1, 2);
        prop_assert_eq!(
            p.add(&q).unwrap().scalar_mul(&half),
            p.scalar_mul(&half).add(&q.scalar_mul(&half)).unwrap()
        );
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism((profile, p, q) in arb_profile_and_polys()) {
        // Check at every point of the (small) grid.
        for b in grid_points(&profile) {
            let pt = EvaluationPoint::new(b);
            let lhs = p.mul(&q).unwrap().evaluate(&pt).unwrap();
            let rhs = p.evaluate(&pt).unwrap().mul(&q.evaluate(&pt).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let lhs = p.add(&q).unwrap().evaluate(&pt).unwrap();
            let rhs = p.evaluate(&pt).unwrap().add(&q.evaluate(&pt).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn distinct_normal_forms_differ_somewhere((profile, p, q) in arb_profile_and_polys()) {
        // Uniqueness over the full grid: structurally distinct normalized
        // polynomials cannot agree at every grid point.
        if p != q {
            let mut differ = false;
            for b in grid_points(&profile) {
                let pt = EvaluationPoint::new(b);
                if p.evaluate(&pt).unwrap() != q.evaluate(&pt).unwrap() {
                    differ = true;
                    break;
                }
            }
            prop_assert!(differ, "equal on the grid but distinct normal forms");
        }
    }

    #[test]
    fn json_round_trip((_, p, _) in arb_profile_and_polys()) {
        let back = MultiPoly::from_json(&p.to_json()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn embed_is_multiplicative(j in 0i64..24, k in 0i64..24, d in prop::sample::select(vec![1u64, 2, 3, 4, 6, 8, 12, 24])) {
        let a = CyclotomicNumber::root_power(d, j).unwrap();
        let b = CyclotomicNumber::root_power(d, k).unwrap();
        let lhs = a.mul(&b).unwrap().embed(24).unwrap();
        let rhs = a.embed(24).unwrap().mul(&b.embed(24).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn constants_round_trip_through_as_rational(n in -40i64..40, d in 1i64..12, l in 1u64..20) {
        let r = rat(n, d);
        let c = CyclotomicNumber::from_rational(l, r.clone()).unwrap();
        prop_assert_eq!(c.as_rational(), Some(r));
    }
}

/// Interpolation inverts evaluation on Galois-stable inputs: rational
/// combinations of subgroup indicators interpolate to polynomials that
/// reproduce the values at every grid point.
#[test]
fn interpolation_matches_subgroup_indicator_values() {
    for seed in 0..40u64 {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let m = 1 + (next() % 3) as usize;
        let palette = [2u64, 3, 4, 5, 6];
        let orders: Vec<u64> = (0..m).map(|_| palette[(next() % 5) as usize]).collect();
        let profile = VariableProfile::new(orders.clone()).unwrap();

        // Random subgroups with rational weights.
        let mut weighted: Vec<(Vec<Vec<u64>>, Rational)> = Vec::new();
        for _ in 0..=(next() % 3) {
            let gen: Vec<u64> = orders.iter().map(|&n| next() % n).collect();
            let subgroup = subgroup_closure(&[gen], &orders);
            let weight = rat((next() % 9) as i64 - 4, 1 + (next() % 3) as i64);
            weighted.push((subgroup, weight));
        }
        let values = GridValues::from_fn(profile.clone(), |b| {
            let mut v = Rational::zero();
            for (subgroup, w) in &weighted {
                if subgroup.binary_search(&b.to_vec()).is_ok() {
                    v += w;
                }
            }
            v
        })
        .unwrap();
        let poly = interpolate_polynomial(&values).unwrap();
        let mut coords = vec![0i64; m];
        loop {
            let got = poly
                .evaluate(&EvaluationPoint::new(coords.clone()))
                .unwrap()
                .as_rational();
            let expected = values.get(&coords.iter().map(|&c| c as u64).collect::<Vec<_>>());
            assert_eq!(got.as_ref(), Some(expected), "seed {seed} at {coords:?}");
            let mut i = m;
            loop {
                if i == 0 {
                    break;
                }
                coords[i - 1] += 1;
                if (coords[i - 1] as u64) < orders[i - 1] {
                    break;
                }
                coords[i - 1] = 0;
                i -= 1;
            }
            if i == 0 {
                break;
            }
        }
    }
}

/// Structural properties of stabilizers on seeded random actions, with the
/// reduced-group size kept at desk scale:
///
/// * orbits partition the set and are closed under every generator;
/// * the orbit-stabilizer product is exact;
/// * every nonzero stabilizer element is an integer multiple of exactly one
///   minimal element;
/// * every stabilizer element of prime-power order has its support at orders
///   of that single prime (the element-wise claim without the order
///   restriction is false; see below);
/// * the index formula reproduces the BFS orbit size.
#[test]
fn stabilizer_structure_on_random_actions() {
    let mut orbits_checked = 0usize;
    for seed in 0..150u64 {
        let params = RandomActionParams {
            max_set_size: 60,
            ..RandomActionParams::abelian_defaults(seed)
        };
        let spec = match random_action(&params).unwrap() {
            GeneratedAction::Abelian(spec) => spec,
            GeneratedAction::Dihedral(_) => unreachable!(),
        };
        let action = validate_action(spec).unwrap();
        let canonical = canonicalize(&action).unwrap();
        let cact = &canonical.action;
        let orbits = compute_orbits(cact);

        // Partition: disjoint cover, closed under the generators.
        let mut covered = vec![false; cact.set_size()];
        for orbit in &orbits {
            for &p in &orbit.members {
                assert!(!covered[p], "seed {seed}: orbits overlap");
                covered[p] = true;
            }
            let members: std::collections::HashSet<usize> =
                orbit.members.iter().copied().collect();
            for &p in &orbit.members {
                for i in 0..cact.num_generators() {
                    assert!(
                        members.contains(&cact.apply_generator_power(i, 1, p)),
                        "seed {seed}: orbit not closed"
                    );
                }
            }
        }
        assert!(covered.iter().all(|&c| c), "seed {seed}: orbits do not cover");

        for orbit in &orbits {
            let data = stabilizer_data(cact, orbit).unwrap();
            let total: u64 = data.reduced_orders.iter().product();
            if total > 2000 {
                continue;
            }
            orbits_checked += 1;

            // Orbit-stabilizer.
            assert_eq!(
                data.stabilizer_elements.len() as u64 * orbit.members.len() as u64,
                total,
                "seed {seed}: orbit-stabilizer"
            );

            // Index formula against BFS.
            assert_eq!(
                csp_core::abelian_action::orbit_size_formula(&data).ok(),
                Some(orbit.members.len() as u64),
                "seed {seed}: index formula"
            );

            // Exactly one minimal element divides each nonzero element.
            let zero = vec![0u64; data.reduced_orders.len()];
            for h in &data.stabilizer_elements {
                if h == &zero {
                    continue;
                }
                let divisors_count = data
                    .minimal_elements
                    .iter()
                    .filter(|m| *m != &zero && divides_integerwise(m, h))
                    .count();
                assert_eq!(divisors_count, 1, "seed {seed}: element {h:?}");
            }

            // Corrected single-prime-support claim: it holds for elements of
            // prime-power order. (Without the order restriction it is false:
            // see `mixed_support_counterexample_is_real` below.)
            for h in &data.stabilizer_elements {
                let order = element_index(h, &data.reduced_orders);
                if factorize(order).len() == 1 {
                    let mut primes: Vec<u64> = h
                        .iter()
                        .zip(&data.reduced_orders)
                        .filter(|(&a, _)| a != 0)
                        .flat_map(|(_, &n)| factorize(n).into_iter().map(|(p, _)| p))
                        .collect();
                    primes.sort_unstable();
                    primes.dedup();
                    assert!(
                        primes.len() <= 1,
                        "seed {seed}: prime-power-order element {h:?} has mixed support"
                    );
                }
            }
        }
    }
    assert!(orbits_checked >= 100, "not enough desk-scale orbits ({orbits_checked})");
}

fn divides_integerwise(m: &[u64], h: &[u64]) -> bool {
    // h = k * m for some positive integer k, coordinates as plain integers.
    let mut k: Option<u64> = None;
    for (&mi, &hi) in m.iter().zip(h) {
        match (mi, hi) {
            (0, 0) => {}
            (0, _) => return false,
            (_, _) => {
                if hi % mi != 0 {
                    return false;
                }
                let q = hi / mi;
                if let Some(prev) = k {
                    if prev != q {
                        return false;
                    }
                } else {
                    k = Some(q);
                }
            }
        }
    }
    k.is_some_and(|q| q >= 1)
}

/// The element-wise single-prime-support claim is genuinely false: the
/// five-factor example stabilizer contains an element supported at both a
/// 2-power and a 3-power coordinate. This documents the counterexample
/// rather than weakening the corrected property above.
#[test]
fn mixed_support_counterexample_is_real() {
    let moduli = [4u64, 8, 8, 9, 9];
    let gens = vec![
        vec![2u64, 4, 0, 0, 0],
        vec![0, 4, 4, 0, 0],
        vec![0, 0, 0, 6, 3],
    ];
    let subgroup = subgroup_closure(&gens, &moduli);
    let witness = vec![0u64, 4, 4, 3, 6];
    assert!(subgroup.binary_search(&witness).is_ok());
    // Its support touches orders 8 (a 2-power) and 9 (a 3-power), and its
    // order is 6, not a prime power.
    assert_eq!(element_index(&witness, &moduli), 6);
}

/// Fixed-point counts are constant on conjugacy classes of the dihedral
/// group: reflections two rotation steps apart are conjugate, so their
/// counts agree.
#[test]
fn dihedral_reflection_counts_are_conjugation_invariant() {
    for seed in 0..80u64 {
        let params = RandomActionParams::dihedral_defaults(seed);
        let spec = match random_action(&params).unwrap() {
            GeneratedAction::Dihedral(spec) => spec,
            GeneratedAction::Abelian(_) => unreachable!(),
        };
        let n = spec.n;
        let action = csp_core::dihedral::validate_dihedral(spec).unwrap();
        for j in 0..n {
            assert_eq!(
                oracle::fixed_points_dihedral(&action, 1, j),
                oracle::fixed_points_dihedral(&action, 1, (j + 2) % n),
                "seed {seed}, j = {j}"
            );
        }
    }
}

/// For a single cyclic factor the assembled pipeline polynomial equals the
/// classical orbit-sum construction, across random cyclic actions.
#[test]
fn cyclic_specialization_holds_on_random_actions() {
    for seed in 0..60u64 {
        let mut state = seed.wrapping_mul(0x2545f4914f6cdd1d).wrapping_add(11);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let n = [2u64, 3, 4, 6, 8, 9, 12][(next() % 7) as usize];
        // Random disjoint unions of coset actions of Z_n, i.e. cycles of
        // length dividing n.
        let mut components = Vec::new();
        let mut budget = 30u64;
        while budget > 0 && components.len() < 4 {
            let k = next() % n + 1;
            let h = vec![vec![k % n]];
            let spec = coset_action(&[n], &h).unwrap();
            if (spec.set_size as u64) <= budget {
                budget -= spec.set_size as u64;
                components.push(spec);
            } else {
                break;
            }
        }
        if components.is_empty() {
            continue;
        }
        let spec = oracle::disjoint_union(&components).unwrap();
        let action = validate_action(spec).unwrap();
        let report =
            csp_core::sieving::action_polynomial(&action, &SieveOptions::default()).unwrap();
        let cyclic = cyclic_csp_polynomial(&action).unwrap();
        assert!(report.all_pass(), "seed {seed}");
        if factorize(n).len() == 1 {
            // Prime-power order: the canonicalization is the identity and
            // the normal forms must coincide.
            assert_eq!(report.polynomial, cyclic, "seed {seed}");
        } else {
            // Composite order: the pipeline works over the CRT splitting of
            // Z_n, so compare values through the coordinate projection.
            let canonical = canonicalize(&action).unwrap();
            for a in 0..n as i64 {
                let projected: Vec<i64> = canonical
                    .project(&[a as u64])
                    .into_iter()
                    .map(|c| c as i64)
                    .collect();
                let lhs = report
                    .polynomial
                    .evaluate(&EvaluationPoint::new(projected))
                    .unwrap()
                    .as_rational();
                let rhs = cyclic
                    .evaluate(&EvaluationPoint::new(vec![a]))
                    .unwrap()
                    .as_rational();
                assert_eq!(lhs, rhs, "seed {seed}, element {a}");
            }
        }
    }
}
