use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactalg::{CycNum, LaurentMatrix, LaurentPoly, Matrix};

use super::EquivariantStructure;

const SEED: u64 = 0x6571_7569_7661_6c74;
const RETRIES: usize = 32;

/// Pulls every map back to the split model: `N'_γ = Ψ(γz)⁻¹·N_γ·Ψ(z)`.
pub(crate) fn pull_to_model(
    s: &EquivariantStructure,
    psi: &LaurentMatrix,
    psi_inv: &LaurentMatrix,
) -> Vec<LaurentMatrix> {
    s.maps()
        .iter()
        .enumerate()
        .map(|(g, n)| {
            let moved_inv = s.acting().moebius(g).pull_matrix(psi_inv);
            &(&moved_inv * n) * psi
        })
        .collect()
}

/// The space of model endomorphisms `U'` with `U'(γz)·A_γ = B_γ·U'(z)` for every element:
/// entry `(i, j)` ranges over polynomials of degree `≤ d_i − d_j`.
pub(crate) fn intertwiner_space(
    s: &EquivariantStructure,
    degrees: &[i32],
    a: &[LaurentMatrix],
    b: &[LaurentMatrix],
) -> Vec<LaurentMatrix> {
    let m = s.conductor();
    let r = degrees.len();
    let mut unknowns: Vec<(usize, usize, i32)> = Vec::new();
    for i in 0..r {
        for j in 0..r {
            for k in 0..=(degrees[i] - degrees[j]) {
                unknowns.push((i, j, k));
            }
        }
    }
    let basis: Vec<LaurentMatrix> = unknowns
        .iter()
        .map(|&(i, j, k)| {
            let mut e = LaurentMatrix::zeros(m, r, r);
            e.set(i, j, LaurentPoly::z_pow(m, k));
            e
        })
        .collect();
    let images: Vec<Vec<LaurentMatrix>> = basis
        .iter()
        .map(|e| {
            (0..a.len())
                .map(|g| {
                    let moved = s.acting().moebius(g).pull_matrix(e);
                    &(&moved * &a[g]) - &(&b[g] * e)
                })
                .collect()
        })
        .collect();
    let mut keys: BTreeSet<(usize, usize, usize, i32)> = BTreeSet::new();
    for img in &images {
        for (g, mat) in img.iter().enumerate() {
            for i in 0..r {
                for j in 0..r {
                    for (e, _) in mat.get(i, j).terms() {
                        keys.insert((g, i, j, e));
                    }
                }
            }
        }
    }
    if keys.is_empty() {
        return basis;
    }
    let keys: Vec<_> = keys.into_iter().collect();
    let system = Matrix::from_fn(m, keys.len(), basis.len(), |row, col| {
        let (g, i, j, e) = keys[row];
        images[col][g].get(i, j).coeff(e)
    });
    system
        .kernel()
        .into_iter()
        .map(|v| {
            let mut u = LaurentMatrix::zeros(m, r, r);
            for (coeff, e) in v.iter().zip(&basis) {
                if !coeff.is_zero() {
                    u = &u + &e.scale_scalar(coeff);
                }
            }
            u
        })
        .collect()
}

/// A model endomorphism is an automorphism iff the constant parts of its equal-degree blocks
/// form an invertible matrix (the remaining entries are strictly block-triangular).
pub(crate) fn is_model_automorphism(u: &LaurentMatrix, degrees: &[i32]) -> bool {
    let r = degrees.len();
    let c = Matrix::from_fn(u.conductor(), r, r, |i, j| {
        if degrees[i] == degrees[j] {
            u.get(i, j).coeff(0)
        } else {
            CycNum::zero(u.conductor())
        }
    });
    c.is_invertible()
}

/// Seeded search for an invertible element of a linear space of model endomorphisms.
pub(crate) fn random_automorphism(
    space: &[LaurentMatrix],
    degrees: &[i32],
    seed: u64,
) -> Option<LaurentMatrix> {
    if space.is_empty() {
        return None;
    }
    let m = space[0].conductor();
    if let Some(u) = space.iter().find(|u| is_model_automorphism(u, degrees)) {
        return Some(u.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRIES {
        let mut u = LaurentMatrix::zeros(m, degrees.len(), degrees.len());
        for b in space {
            let c: i64 = rng.gen_range(-4..=4);
            if c != 0 {
                u = &u + &b.scale_scalar(&CycNum::from_i64(m, c));
            }
        }
        if is_model_automorphism(&u, degrees) {
            return Some(u);
        }
    }
    None
}

/// An automorphism `U` of the bundle with `U(γz)·N¹_γ(z) = N²_γ(z)·U(z)` for every `γ`, if
/// one is found.
pub fn find_intertwiner(
    s1: &EquivariantStructure,
    s2: &EquivariantStructure,
) -> Result<Option<LaurentMatrix>> {
    if s1.bundle() != s2.bundle() {
        return Err(Error::NotComparable(
            "structures live on different bundles".into(),
        ));
    }
    if s1.acting() != s2.acting() {
        return Err(Error::NotComparable(format!(
            "acting groups {} and {}",
            s1.acting(),
            s2.acting()
        )));
    }
    let iso = s1.bundle().model_isomorphism()?;
    let psi_inv = iso.psi.inverse()?;
    let degrees = iso.model.degrees().to_vec();
    let a = pull_to_model(s1, &iso.psi, &psi_inv);
    let b = pull_to_model(s2, &iso.psi, &psi_inv);
    let space = intertwiner_space(s1, &degrees, &a, &b);
    let Some(u_model) = random_automorphism(&space, &degrees, SEED) else {
        return Ok(None);
    };
    let u = &(&iso.psi * &u_model) * &psi_inv;
    for g in 0..s1.acting().order() {
        let lhs = &s1.acting().moebius(g).pull_matrix(&u) * s1.map(g);
        if lhs != s2.map(g) * &u {
            return Err(Error::InternalInconsistency(
                "intertwiner fails on the bundle frame".into(),
            ));
        }
    }
    Ok(Some(u))
}

/// Whether two structures on the same bundle are isomorphic through a bundle automorphism.
pub fn structures_equivalent(s1: &EquivariantStructure, s2: &EquivariantStructure) -> Result<bool> {
    Ok(find_intertwiner(s1, s2)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivariant::{canonical_structure, Canonical};
    use crate::group::{Acting, GroupSpec};

    #[test]
    fn self_equivalence_and_characters() {
        let g = GroupSpec::cyclic(3).unwrap();
        let s = canonical_structure(g, Canonical::Line(1)).unwrap();
        assert!(structures_equivalent(&s, &s).unwrap());
        let t = s.twist_by_character(&g.characters()[2]).unwrap();
        assert!(!structures_equivalent(&s, &t).unwrap());
    }

    #[test]
    fn constant_conjugate_of_odd_pair() {
        let k = GroupSpec::klein();
        let s = canonical_structure(k, Canonical::OddPair(-1)).unwrap();
        // Any constant invertible U gives an equivalent structure U·N_γ·U⁻¹.
        let u = LaurentMatrix::from_constant(&Matrix::from_i64(4, &[&[2, 1], &[1, 1]]));
        let conj = s.push_forward(&u, s.bundle().clone());
        // The bundle O(−1)⊕O(−1) has scalar transition, so U is an automorphism.
        let conj = conj.unwrap();
        assert!(conj.validate().unwrap());
        assert!(structures_equivalent(&s, &conj).unwrap());
        let w = find_intertwiner(&s, &conj).unwrap().unwrap();
        for g in 0..4 {
            assert_eq!(&k.moebius(g).pull_matrix(&w) * s.map(g), conj.map(g) * &w);
        }
    }

    #[test]
    fn mismatched_bundles_are_not_comparable() {
        let g = GroupSpec::cyclic(2).unwrap();
        let a = canonical_structure(g, Canonical::Line(0)).unwrap();
        let b = canonical_structure(g, Canonical::Line(1)).unwrap();
        assert!(matches!(
            structures_equivalent(&a, &b),
            Err(Error::NotComparable(_))
        ));
        let lift = canonical_structure(GroupSpec::klein(), Canonical::LiftLine(0)).unwrap();
        assert_eq!(lift.acting(), Acting::KleinLift(GroupSpec::klein()));
        assert!(structures_equivalent(&lift, &lift).unwrap());
    }
}
