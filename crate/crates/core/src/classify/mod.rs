//! The classification pipeline.
//!
//! A structure is pulled back to the split model `⊕O(d_j)` along an explicit isomorphism,
//! where its maps become block upper-triangular (maps `O(a) → O(b)` vanish for `b < a`).
//! Averaging over the group produces a unipotent intertwiner onto the block-diagonal part;
//! each diagonal block is a reference line cocycle times a constant representation, which is
//! then decomposed into characters or, for odd degrees under the Klein group, into paired
//! two-dimensional blocks.

mod certificate;
mod rep;

use crate::bundle::{ModelIso, SplittingType, VectorBundle};
use crate::equivariant::{reference_cocycle, EquivariantStructure};
use crate::error::{Error, Result};
use crate::exactalg::{rational, CycNum, LaurentMatrix, Matrix};
use crate::group::Acting;

pub use certificate::{
    build_structure, decompose, verify_certificate, Block, DecompositionCertificate, Verdict,
};
pub use rep::{rep_decompose, RepBlocks, RepMode};

/// A cocycle on the split model `⊕O(d_j)`, degrees descending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelStructure {
    pub model: SplittingType,
    pub acting: Acting,
    pub maps: Vec<LaurentMatrix>,
}

impl ModelStructure {
    pub fn degrees(&self) -> &[i32] {
        self.model.degrees()
    }

    pub fn conductor(&self) -> u32 {
        self.acting.conductor()
    }

    pub fn bundle(&self) -> VectorBundle {
        VectorBundle::split(self.conductor(), self.degrees())
    }

    pub fn to_structure(&self) -> Result<EquivariantStructure> {
        EquivariantStructure::new(self.bundle(), self.acting, self.maps.clone())
    }

    /// Entry `(i, j)` vanishes whenever `d_i < d_j`.
    pub fn is_block_triangular(&self) -> bool {
        let d = self.degrees();
        self.maps
            .iter()
            .all(|n| (0..d.len()).all(|i| (0..d.len()).all(|j| d[i] >= d[j] || n.get(i, j).is_zero())))
    }

    /// The same maps with every entry between different degrees set to zero.
    pub fn block_diagonal_part(&self) -> ModelStructure {
        let d = self.degrees().to_vec();
        let maps = self
            .maps
            .iter()
            .map(|n| {
                let mut out = n.clone();
                for i in 0..d.len() {
                    for j in 0..d.len() {
                        if d[i] != d[j] {
                            out.set(i, j, crate::exactalg::LaurentPoly::zero(n.conductor()));
                        }
                    }
                }
                out
            })
            .collect();
        ModelStructure {
            model: self.model.clone(),
            acting: self.acting,
            maps,
        }
    }

    /// Index range of the degree-`d` block.
    pub fn block_range(&self, d: i32) -> Option<std::ops::Range<usize>> {
        let degs = self.degrees();
        let start = degs.iter().position(|&x| x == d)?;
        let len = degs.iter().filter(|&&x| x == d).count();
        Some(start..start + len)
    }
}

/// `N'_γ(z) = Ψ(γz)⁻¹·N_γ(z)·Ψ(z)`, checked for block triangularity.
pub fn pullback_structure(s: &EquivariantStructure, iso: &ModelIso) -> Result<ModelStructure> {
    if !iso.certifies(s.bundle())? {
        return Err(Error::InvalidArgument(
            "the model frame does not certify an isomorphism onto the bundle".into(),
        ));
    }
    let psi_inv = iso.psi.inverse()?;
    let maps = (0..s.acting().order())
        .map(|g| {
            let moved = s.acting().moebius(g).pull_matrix(&psi_inv);
            &(&moved * s.map(g)) * &iso.psi
        })
        .collect();
    let out = ModelStructure {
        model: iso.model.clone(),
        acting: s.acting(),
        maps,
    };
    if !out.is_block_triangular() {
        return Err(Error::TriangularityViolation);
    }
    Ok(out)
}

/// `S(z) = (1/|G|)·Σ_γ N_γ(z)⁻¹·R_γ(z)`, a unipotent intertwiner with
/// `N_γ(z)·S(z) = S(γz)·R_γ(z)`.
pub fn averaging_intertwiner(n: &ModelStructure, r: &ModelStructure) -> Result<LaurentMatrix> {
    if n.model != r.model || n.acting != r.acting || n.block_diagonal_part() != *r {
        return Err(Error::NotBlockDiagonalPart);
    }
    let m = n.conductor();
    let rank = n.model.rank();
    let mut sum = LaurentMatrix::zeros(m, rank, rank);
    for (ng, rg) in n.maps.iter().zip(&r.maps) {
        sum = &sum + &(&ng.inverse()? * rg);
    }
    let order = rational(1, n.maps.len() as i64);
    let s = sum.scale_scalar(&CycNum::from_rational(m, order));
    if !is_unipotent(&s, n.degrees()) {
        return Err(Error::InternalInconsistency(
            "averaged intertwiner is not unipotent".into(),
        ));
    }
    for g in 0..n.maps.len() {
        let lhs = &n.maps[g] * &s;
        let rhs = &n.acting.moebius(g).pull_matrix(&s) * &r.maps[g];
        if lhs != rhs {
            return Err(Error::InternalInconsistency(format!(
                "averaged intertwiner fails at {}",
                n.acting.name(g)
            )));
        }
    }
    Ok(s)
}

/// Identity on equal-degree blocks and zero below them.
pub fn is_unipotent(s: &LaurentMatrix, degrees: &[i32]) -> bool {
    let r = degrees.len();
    (0..r).all(|i| {
        (0..r).all(|j| {
            let e = s.get(i, j);
            if i == j {
                e.is_one()
            } else if degrees[i] <= degrees[j] {
                e.is_zero()
            } else {
                true
            }
        })
    })
}

/// The constant representation on the degree-`d` block of a block-diagonal model cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualRep {
    pub degree: i32,
    /// The genuine group, or the Klein lift for odd degrees under the Klein group.
    pub acting: Acting,
    pub rho: Vec<Matrix>,
}

/// Factors the degree-`d` block as `D_γ(z) = ν_γ(z)·ρ_γ` with `ν` the reference cocycle of
/// `O(d)`. Odd degrees under the Klein group yield a representation of the lift group in
/// which the center acts by `−1`.
pub fn extract_residual_rep(r: &ModelStructure, d: i32) -> Result<ResidualRep> {
    let range = r
        .block_range(d)
        .ok_or_else(|| Error::InvalidArgument(format!("degree {d} is not in the model")))?;
    let group = r.acting.spec();
    let acting = if group.is_klein() && d.rem_euclid(2) == 1 {
        Acting::KleinLift(group)
    } else {
        r.acting
    };
    let m = r.conductor();
    let rho = (0..acting.order())
        .map(|g| {
            let block = r.maps[g % r.maps.len()].submatrix(range.clone(), range.clone());
            let nu = reference_cocycle(&acting, d, g);
            let mut out = Matrix::zeros(m, range.len(), range.len());
            for i in 0..range.len() {
                for j in 0..range.len() {
                    let q = block.get(i, j).exact_div(&nu)?;
                    let c = q.as_ref().and_then(|q| q.as_constant()).ok_or_else(|| {
                        Error::FactorizationFailure(format!(
                            "block entry {} over {} is not constant",
                            block.get(i, j),
                            nu
                        ))
                    })?;
                    out.set(i, j, c);
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualRep {
        degree: d,
        acting,
        rho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivariant::{canonical_structure, Canonical};
    use crate::exactalg::{parse_laurent, LaurentPoly};
    use crate::group::GroupSpec;

    fn model(s: &EquivariantStructure) -> ModelStructure {
        let iso = s.bundle().model_isomorphism().unwrap();
        pullback_structure(s, &iso).unwrap()
    }

    /// O(1)⊕O(0) under ℤ/2 with N_g = [[1, b·z], [0, 1]].
    #[test]
    fn averaging_halves_the_planted_entry() {
        let g = GroupSpec::cyclic(2).unwrap();
        let ng = LaurentMatrix::from_rows(
            2,
            vec![
                vec![LaurentPoly::one(2), parse_laurent("3*z", 2).unwrap()],
                vec![LaurentPoly::zero(2), LaurentPoly::one(2)],
            ],
        )
        .unwrap();
        let s = EquivariantStructure::new(
            VectorBundle::split(2, &[1, 0]),
            Acting::Genuine(g),
            vec![LaurentMatrix::identity(2, 2), ng],
        )
        .unwrap();
        assert!(s.validate().unwrap());
        let n = model(&s);
        let r = n.block_diagonal_part();
        let avg = averaging_intertwiner(&n, &r).unwrap();
        assert_eq!(avg.get(0, 1), &parse_laurent("-3/2*z", 2).unwrap());
        assert!(is_unipotent(&avg, n.degrees()));
        let wrong = n.clone();
        assert_eq!(
            averaging_intertwiner(&n, &wrong),
            Err(Error::NotBlockDiagonalPart)
        );
    }

    #[test]
    fn odd_pair_residual_anticommutes() {
        let s = canonical_structure(GroupSpec::klein(), Canonical::OddPair(-1)).unwrap();
        let n = model(&s);
        assert_eq!(n.maps, s.maps());
        let rep = extract_residual_rep(&n.block_diagonal_part(), -1).unwrap();
        assert!(rep.acting.is_lift());
        let (a1, a2) = (&rep.rho[1], &rep.rho[2]);
        assert_eq!(a1, &Matrix::from_i64(4, &[&[-1, 0], &[0, 1]]));
        assert_eq!(a2, &Matrix::from_i64(4, &[&[0, 1], &[1, 0]]));
        assert_eq!(a1 * a2, (a2 * a1).scale(&CycNum::from_i64(4, -1)));
        assert_eq!(rep.rho[4], Matrix::identity(4, 2).scale(&CycNum::from_i64(4, -1)));
    }

    #[test]
    fn cyclic_residual_on_trivial_block() {
        let g = GroupSpec::cyclic(2).unwrap();
        let diag = Matrix::diagonal(2, &[CycNum::one(2), CycNum::from_i64(2, -1)]);
        let s = EquivariantStructure::new(
            VectorBundle::trivial(2, 2),
            Acting::Genuine(g),
            vec![LaurentMatrix::identity(2, 2), LaurentMatrix::from_constant(&diag)],
        )
        .unwrap();
        let rep = extract_residual_rep(&model(&s).block_diagonal_part(), 0).unwrap();
        assert_eq!(rep.rho[1], diag);
    }
}
