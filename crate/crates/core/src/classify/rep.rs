use crate::error::{Error, Result};
use crate::exactalg::{CycNum, Matrix};
use crate::group::{Acting, Character};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepMode {
    /// Simultaneous eigenspaces of a representation of an abelian group.
    Abelian,
    /// A representation of the Klein lift group with the center acting by `−1`.
    KleinLift,
}

/// Output of [`rep_decompose`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepBlocks {
    /// One eigenvector per character occurrence, characters in canonical order.
    Characters(Vec<(Character, Vec<CycNum>)>),
    /// Pairs `(v, ρ(A2)·v)` with `v` running over the echelon basis of `V⁺ = ker(ρ(A1) − 1)`.
    Pairs(Vec<(Vec<CycNum>, Vec<CycNum>)>),
}

impl RepBlocks {
    /// Change of basis to the normal form: characters diagonal; each pair as the standard
    /// block `ρ(A1) = diag(−1, 1)`, `ρ(A2) = antidiag(1, 1)`, i.e. columns `[ρ(A2)v, v]`.
    pub fn frame(&self, conductor: u32, dim: usize) -> Matrix {
        let cols: Vec<Vec<CycNum>> = match self {
            RepBlocks::Characters(list) => list.iter().map(|(_, v)| v.clone()).collect(),
            RepBlocks::Pairs(list) => list.iter().flat_map(|(v, w)| [w.clone(), v.clone()]).collect(),
        };
        Matrix::from_columns(conductor, dim, &cols)
    }
}

fn check_relations(acting: &Acting, rho: &[Matrix]) -> Result<()> {
    if rho.len() != acting.order() {
        return Err(Error::RelationViolation(format!(
            "{} matrices for a group of order {}",
            rho.len(),
            acting.order()
        )));
    }
    let dim = rho[0].rows();
    if rho.iter().any(|r| r.rows() != dim || r.cols() != dim) {
        return Err(Error::RelationViolation("matrices of different sizes".into()));
    }
    if !rho[0].is_identity() {
        return Err(Error::RelationViolation(
            "the identity does not act trivially".into(),
        ));
    }
    for g in 0..rho.len() {
        for h in 0..rho.len() {
            if &rho[g] * &rho[h] != rho[acting.mul(g, h)] {
                return Err(Error::RelationViolation(format!(
                    "ρ({})·ρ({}) ≠ ρ({})",
                    acting.name(g),
                    acting.name(h),
                    acting.name(acting.mul(g, h))
                )));
            }
        }
    }
    Ok(())
}

fn eigenspace(rho: &[Matrix], generators: &[usize], values: &[CycNum]) -> Vec<Vec<CycNum>> {
    let dim = rho[0].rows();
    let m = rho[0].conductor();
    let mut stacked: Option<Matrix> = None;
    for (&g, v) in generators.iter().zip(values) {
        let shifted = rho[g].sub(&Matrix::identity(m, dim).scale(v));
        stacked = Some(match stacked {
            None => shifted,
            Some(s) => s.vstack(&shifted),
        });
    }
    match stacked {
        Some(s) => s.kernel(),
        None => (0..dim)
            .map(|i| (0..dim).map(|j| CycNum::from_i64(m, (i == j) as i64)).collect())
            .collect(),
    }
}

/// Decomposes a constant representation after checking the group relations exactly.
pub fn rep_decompose(acting: &Acting, rho: &[Matrix], mode: RepMode) -> Result<RepBlocks> {
    check_relations(acting, rho)?;
    let dim = rho[0].rows();
    let m = rho[0].conductor();
    match mode {
        RepMode::Abelian => {
            let Acting::Genuine(group) = *acting else {
                return Err(Error::RelationViolation(
                    "abelian decomposition needs a genuine group".into(),
                ));
            };
            let gens = group.generators();
            let mut out = Vec::new();
            for chi in group.characters() {
                let values: Vec<CycNum> = gens.iter().map(|&g| chi.value(g)).collect();
                for v in eigenspace(rho, &gens, &values) {
                    out.push((chi, v));
                }
            }
            if out.len() != dim {
                return Err(Error::RelationViolation(format!(
                    "eigenspaces span {} of {} dimensions",
                    out.len(),
                    dim
                )));
            }
            Ok(RepBlocks::Characters(out))
        }
        RepMode::KleinLift => {
            if !acting.is_lift() {
                return Err(Error::RelationViolation(
                    "pairing needs the Klein lift group".into(),
                ));
            }
            let minus = CycNum::from_i64(m, -1);
            if rho[4] != Matrix::identity(m, dim).scale(&minus) {
                return Err(Error::RelationViolation("the center does not act by −1".into()));
            }
            let plus = eigenspace(rho, &[1], &[CycNum::one(m)]);
            let minus_space = eigenspace(rho, &[1], &[minus]);
            if plus.len() != minus_space.len() || 2 * plus.len() != dim {
                return Err(Error::RelationViolation(format!(
                    "dim V+ = {}, dim V- = {} in dimension {}",
                    plus.len(),
                    minus_space.len(),
                    dim
                )));
            }
            let pairs: Vec<_> = plus
                .into_iter()
                .map(|v| {
                    let w = rho[2].mul_vec(&v);
                    (v, w)
                })
                .collect();
            let frame = RepBlocks::Pairs(pairs.clone()).frame(m, dim);
            if !frame.is_invertible() {
                return Err(Error::RelationViolation("paired vectors are not a basis".into()));
            }
            Ok(RepBlocks::Pairs(pairs))
        }
    }
}

/// The standard two-dimensional representation of the lift group, as used for pairs.
#[cfg(test)]
fn standard_pair_rep(conductor: u32) -> Vec<Matrix> {
    let g = crate::group::GroupSpec::klein_in(conductor).expect("conductor divisible by 4");
    crate::group::lift_group(&g)
        .into_iter()
        .map(|e| e.matrix)
        .collect()
}
