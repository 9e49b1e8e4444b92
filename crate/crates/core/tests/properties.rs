//! Property tests: algebraic laws and structural invariants on random inputs.

use eqbundle_core::classify::{build_structure, decompose, verify_certificate};
use eqbundle_core::equivariant::{canonical_structure, structure_quotient, structures_equivalent, Canonical};
use eqbundle_core::exactalg::parse_laurent;
use eqbundle_core::fuzz::{
    planted_bundle, planted_structure, random_character, random_invertible, random_model_automorphism,
    random_poly,
};
use eqbundle_core::{CycNum, GroupSpec, LaurentMatrix, LaurentPoly, VectorBundle};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn any_group() -> impl Strategy<Value = GroupSpec> {
    prop_oneof![
        (2u32..=5).prop_map(|n| GroupSpec::cyclic(n).unwrap()),
        Just(GroupSpec::klein()),
    ]
}

fn laurent(seed: u64, m: u32) -> LaurentPoly {
    let mut r = rng(seed);
    random_poly(&mut r, m, 4).shift((seed % 7) as i32 - 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn laurent_ring_laws(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), m in 1u32..=6) {
        let (x, y, z) = (laurent(a, m), laurent(b, m), laurent(c, m));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn laurent_text_round_trips(a in any::<u64>(), m in 1u32..=6) {
        let x = laurent(a, m);
        prop_assert_eq!(parse_laurent(&x.to_string(), m).unwrap(), x);
    }

    #[test]
    fn cyclotomic_inverses(k in -20i64..20, n in 1i64..6, m in 1u32..=8) {
        let x = &CycNum::root_of_unity(m, k) + &CycNum::from_i64(m, n);
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
        prop_assert!(CycNum::root_of_unity(m, k).pow(m as i64).unwrap().is_one());
    }

    #[test]
    fn unimodular_frames_invert(seed in any::<u64>(), m in 1u32..=4, r in 1usize..=3) {
        let mut g = rng(seed);
        let a = eqbundle_core::fuzz::random_unimodular(&mut g, m, r, 3, 2);
        let inv = a.inverse().unwrap();
        prop_assert!((&a * &inv).is_identity());
        prop_assert_eq!(a.unit_monomial_det().unwrap().1, 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn degree_is_sum_of_splitting_type(seed in any::<u64>(), m in 1u32..=4, r in 1usize..=4) {
        let p = planted_bundle(&mut rng(seed), m, r, -4, 4);
        let t = p.bundle.splitting_type().unwrap();
        prop_assert_eq!(t.total_degree(), p.bundle.degree());
        prop_assert_eq!(t.degrees(), p.degrees.as_slice());
    }

    #[test]
    fn h0_differences_are_monotone(seed in any::<u64>(), m in 1u32..=4, r in 1usize..=4) {
        let p = planted_bundle(&mut rng(seed), m, r, -4, 4);
        let profile = p.bundle.h0_profile();
        prop_assert!(profile.is_consistent());
        for (&k, &h) in &profile.values {
            let t = eqbundle_core::SplittingType::new(p.degrees.clone());
            prop_assert_eq!(h, t.h0(k));
        }
    }

    #[test]
    fn splitting_type_is_functorial(seed in any::<u64>(), m in 1u32..=4, k in -3i32..=3) {
        let mut g = rng(seed);
        let a = planted_bundle(&mut g, m, 2, -3, 3);
        let b = planted_bundle(&mut g, m, 2, -3, 3);
        let neg: Vec<i32> = a.degrees.iter().rev().map(|d| -d).collect();
        let dual = a.bundle.dual().splitting_type().unwrap();
        prop_assert_eq!(dual.degrees(), neg.as_slice());
        let shifted: Vec<i32> = a.degrees.iter().map(|d| d + k).collect();
        let twisted = a.bundle.twist(k).splitting_type().unwrap();
        prop_assert_eq!(twisted.degrees(), shifted.as_slice());
        let mut both: Vec<i32> = a.degrees.iter().chain(&b.degrees).copied().collect();
        both.sort_unstable_by(|x, y| y.cmp(x));
        let sum = a.bundle.direct_sum(&b.bundle).unwrap();
        let sum = sum.splitting_type().unwrap();
        prop_assert_eq!(sum.degrees(), both.as_slice());
        let mut prods: Vec<i32> = a.degrees.iter().flat_map(|x| b.degrees.iter().map(move |y| x + y)).collect();
        prods.sort_unstable_by(|x, y| y.cmp(x));
        let tensor = a.bundle.tensor(&b.bundle).unwrap();
        let tensor = tensor.splitting_type().unwrap();
        prop_assert_eq!(tensor.degrees(), prods.as_slice());
    }

    #[test]
    fn model_isomorphisms_certify(seed in any::<u64>(), m in 1u32..=4, r in 1usize..=4) {
        let p = planted_bundle(&mut rng(seed), m, r, -4, 4);
        let iso = p.bundle.model_isomorphism().unwrap();
        prop_assert!(iso.certifies(&p.bundle).unwrap());
        prop_assert_eq!(iso.model.degrees(), p.degrees.as_slice());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn group_laws(group in any_group()) {
        let n = group.order();
        for a in 0..n {
            prop_assert_eq!(group.mul(0, a), a);
            prop_assert_eq!(group.mul(a, group.inverse(a)), 0);
            prop_assert!(group.moebius(a).compose(&group.moebius(group.inverse(a))).is_identity());
            for b in 0..n {
                prop_assert_eq!(group.mul(a, b), group.mul(b, a));
                prop_assert_eq!(group.moebius(group.mul(a, b)), group.moebius(a).compose(&group.moebius(b)));
                for c in 0..n {
                    prop_assert_eq!(group.mul(group.mul(a, b), c), group.mul(a, group.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn characters_are_homomorphisms(group in any_group()) {
        for chi in group.characters() {
            for a in 0..group.order() {
                for b in 0..group.order() {
                    prop_assert_eq!(chi.value(group.mul(a, b)), &chi.value(a) * &chi.value(b));
                }
            }
            prop_assert!(chi.mul(&chi.inverse()).is_trivial());
        }
    }

    #[test]
    fn canonical_structures_close_under_operations(group in any_group(), d in -3i32..=3, e in -3i32..=3, seed in any::<u64>()) {
        let even = |x: i32| if group.is_klein() { 2 * x.div_euclid(2) } else { x };
        let a = canonical_structure(group, Canonical::Line(even(d))).unwrap();
        let b = canonical_structure(group, Canonical::Line(even(e))).unwrap();
        let chi = random_character(&mut rng(seed), group);
        for s in [
            a.twist_by_character(&chi).unwrap(),
            a.dual().unwrap(),
            a.tensor(&b).unwrap(),
            a.direct_sum(&b).unwrap(),
        ] {
            prop_assert!(s.validate().unwrap());
        }
    }

    #[test]
    fn twisting_is_a_torsor_action(group in any_group(), d in -2i32..=2, seed in any::<u64>()) {
        let d = if group.is_klein() { 2 * d } else { d };
        let base = canonical_structure(group, Canonical::Line(d)).unwrap();
        let mut g = rng(seed);
        let (chi, psi) = (random_character(&mut g, group), random_character(&mut g, group));
        let twisted = base.twist_by_character(&chi).unwrap();
        prop_assert_eq!(structure_quotient(&twisted, &base).unwrap(), chi);
        let twice = twisted.twist_by_character(&psi).unwrap();
        prop_assert_eq!(twice, base.twist_by_character(&chi.mul(&psi)).unwrap());
        prop_assert_eq!(structures_equivalent(&base, &twisted).unwrap(), chi.is_trivial());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn automorphisms_preserve_equivalence(group in any_group(), seed in any::<u64>(), r in 1usize..=3) {
        let mut g = rng(seed);
        let p = planted_structure(&mut g, group, r, -2, 2).unwrap();
        let s = p.structure;
        // A constant automorphism of the split model, transported to the planted frame.
        let iso = s.bundle().model_isomorphism().unwrap();
        let u_model = random_model_automorphism(&mut g, group.conductor(), iso.model.degrees());
        let u = &(&iso.psi * &u_model) * &iso.psi.inverse().unwrap();
        let moved = s.push_forward(&u, s.bundle().clone()).unwrap();
        prop_assert!(moved.validate().unwrap());
        prop_assert!(structures_equivalent(&s, &moved).unwrap());
    }

    #[test]
    fn decompose_round_trips(group in any_group(), seed in any::<u64>(), r in 1usize..=4) {
        let p = planted_structure(&mut rng(seed), group, r, -3, 3).unwrap();
        let cert = decompose(&p.structure).unwrap();
        prop_assert_eq!(&cert.blocks, &p.blocks);
        prop_assert!(verify_certificate(&cert, &p.structure).ok);
        let rebuilt = build_structure(&cert, Some(p.structure.bundle())).unwrap();
        prop_assert_eq!(rebuilt, p.structure);
    }

    #[test]
    fn constant_change_of_basis_is_detected(seed in any::<u64>(), m in 1u32..=4) {
        let a = random_invertible(&mut rng(seed), m, 3);
        let u = LaurentMatrix::from_constant(&a);
        let trivial = VectorBundle::trivial(m, 3);
        prop_assert!(trivial.is_model_frame(&[0, 0, 0], &u).unwrap());
    }
}
