use eqbundle_core::classify::{verify_certificate, Block};
use eqbundle_core::equivariant::{canonical_structure, Canonical};
use eqbundle_core::{build_structure, decompose, GroupSpec, LaurentMatrix, Matrix};

#[test]
fn klein_odd_pair_has_one_paired_block() {
    let s = canonical_structure(GroupSpec::klein(), Canonical::OddPair(-1)).unwrap();
    let cert = decompose(&s).unwrap();
    assert_eq!((cert.m(), cert.n()), (0, 1));
    assert_eq!(cert.odd_blocks(), vec![-1]);
    assert!(verify_certificate(&cert, &s).ok);
}

#[test]
fn klein_even_sum_has_two_line_blocks() {
    let k = GroupSpec::klein();
    let s = canonical_structure(k, Canonical::Line(2))
        .unwrap()
        .direct_sum(&canonical_structure(k, Canonical::Line(0)).unwrap())
        .unwrap();
    let cert = decompose(&s).unwrap();
    assert_eq!((cert.m(), cert.n()), (2, 0));
    let degrees: Vec<i32> = cert.even_blocks().iter().map(|b| b.0).collect();
    assert_eq!(degrees, vec![2, 0]);
    assert!(cert.even_blocks().iter().all(|b| b.1.is_trivial()));
}

#[test]
fn cyclic_line_is_a_single_trivial_block() {
    for n in 1..=4 {
        let g = GroupSpec::cyclic(n).unwrap();
        for d in -2..=2 {
            let s = canonical_structure(g, Canonical::Line(d)).unwrap();
            let cert = decompose(&s).unwrap();
            assert_eq!(cert.blocks.len(), 1);
            assert_eq!(cert.even_blocks()[0].0, d);
            assert!(cert.even_blocks()[0].1.is_trivial());
        }
    }
}

#[test]
fn mutated_certificates_are_rejected() {
    let g = GroupSpec::cyclic(3).unwrap();
    let s = canonical_structure(g, Canonical::Line(1))
        .unwrap()
        .twist_by_character(&g.characters()[1])
        .unwrap();
    let cert = decompose(&s).unwrap();
    assert!(verify_certificate(&cert, &s).ok);
    let mut shifted = cert.clone();
    if let Block::Line { degree, .. } = &mut shifted.blocks[0] {
        *degree += 1;
    }
    assert!(!verify_certificate(&shifted, &s).ok);
    let mut swapped = cert.clone();
    if let Block::Line { character, .. } = &mut swapped.blocks[0] {
        *character = g.characters()[2];
    }
    let verdict = verify_certificate(&swapped, &s);
    assert!(!verdict.ok);
    assert!(verdict.reason.unwrap().starts_with("E_MISMATCH"));
}

#[test]
fn decompose_after_constant_conjugation() {
    let k = GroupSpec::klein();
    let s = canonical_structure(k, Canonical::OddPair(1))
        .unwrap()
        .direct_sum(&canonical_structure(k, Canonical::OddPair(1)).unwrap())
        .unwrap();
    let u = LaurentMatrix::from_constant(&Matrix::from_i64(
        4,
        &[&[1, 2, 0, 1], &[0, 1, 3, 0], &[1, 0, 1, 0], &[0, 0, 1, 1]],
    ));
    let conj = s.push_forward(&u, s.bundle().clone()).unwrap();
    assert!(conj.validate().unwrap());
    let cert = decompose(&conj).unwrap();
    assert_eq!(cert.odd_blocks(), vec![1, 1]);
    let rebuilt = build_structure(&cert, Some(conj.bundle())).unwrap();
    assert_eq!(rebuilt, conj);
}
