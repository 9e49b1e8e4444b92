use crate::bundle::VectorBundle;
use crate::error::{Error, Result};
use crate::exactalg::{CycNum, LaurentMatrix, LaurentPoly};
use crate::group::{lift::lift_matrix, Acting, GroupSpec};

use super::EquivariantStructure;

/// Targets with a distinguished structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Canonical {
    /// `O(d)`: cyclic groups act by `N = 1` (powers of the tautological action); the Klein
    /// group acts by `(γ')^{d/2}` for even `d` and has no structure for odd `d`.
    Line(i32),
    /// `O(d)` with the Klein lift group acting; the center acts by `(−1)^d`.
    LiftLine(i32),
    /// `O(d)⊕O(d)` for odd `d` with the Klein group acting by `ν_g(z)·A_g`, where `ν` is the
    /// lift structure on `O(d)`.
    OddPair(i32),
    /// The tangent bundle (transition `−z²`) with `N_γ = γ'(z)`.
    Tangent,
}

fn scalar(m: u32, p: LaurentPoly) -> LaurentMatrix {
    LaurentMatrix::diagonal(m, vec![p])
}

/// The lift cocycle on `O(d)`, `d` odd: `N_{A1} = 1`, `N_{A2} = z` on `O(−1)`, tensored with
/// `(γ')^{(d+1)/2}`, and `N_{−g} = −N_g`.
pub(crate) fn lift_line_cocycle(g: &GroupSpec, d: i32, element: usize) -> LaurentPoly {
    let m = g.conductor();
    let k = element % 4;
    let base = if k & 2 == 2 {
        LaurentPoly::z_pow(m, 1)
    } else {
        LaurentPoly::one(m)
    };
    let v = &base * &monomial_pow(&g.moebius(k).derivative(), (d + 1) / 2);
    if element >= 4 {
        -v
    } else {
        v
    }
}

/// Integer power of a nonzero monomial.
fn monomial_pow(p: &LaurentPoly, e: i32) -> LaurentPoly {
    if e >= 0 {
        return p.pow(e as u32);
    }
    let (c, k) = p.as_monomial().expect("monomial");
    LaurentPoly::monomial(c.inv().expect("nonzero"), -k).pow((-e) as u32)
}

/// `(γ')^{d/2}` for even `d`.
pub(crate) fn even_line_cocycle(g: &GroupSpec, d: i32, element: usize) -> LaurentPoly {
    monomial_pow(&g.moebius(element).derivative(), d / 2)
}

/// The scalar reference cocycle on `O(d)`: `1` for cyclic groups, `(γ')^{d/2}` for even `d`
/// and the lift cocycle for odd `d` under the Klein group.
pub fn reference_cocycle(acting: &Acting, d: i32, element: usize) -> LaurentPoly {
    let g = acting.spec();
    let m = g.conductor();
    if !g.is_klein() {
        return LaurentPoly::one(m);
    }
    if d.rem_euclid(2) == 1 {
        lift_line_cocycle(&g, d, element)
    } else {
        even_line_cocycle(&g, d, element % 4)
    }
}

/// The distinguished structure on `target`. The result is validated before it is returned.
pub fn canonical_structure(group: GroupSpec, target: Canonical) -> Result<EquivariantStructure> {
    let m = group.conductor();
    let s = match target {
        Canonical::Line(d) => {
            if group.is_klein() && d.rem_euclid(2) == 1 {
                return Err(Error::NoSuchStructure(format!(
                    "O({d}) has odd degree, and the Klein group only acts on it through its lift"
                )));
            }
            let acting = Acting::Genuine(group);
            let maps = (0..group.order())
                .map(|g| scalar(m, reference_cocycle(&acting, d, g)))
                .collect();
            EquivariantStructure::new(VectorBundle::line(m, d), acting, maps)?
        }
        Canonical::LiftLine(d) => {
            if !group.is_klein() {
                return Err(Error::InvalidArgument(
                    "the lift group exists only for the Klein group".into(),
                ));
            }
            let acting = Acting::KleinLift(group);
            let maps = (0..8)
                .map(|g| scalar(m, reference_cocycle(&acting, d, g)))
                .collect();
            EquivariantStructure::new(VectorBundle::line(m, d), acting, maps)?
        }
        Canonical::OddPair(d) => {
            if !group.is_klein() || d.rem_euclid(2) != 1 {
                return Err(Error::InvalidArgument(format!(
                    "paired blocks O({d})⊕O({d}) need the Klein group and odd degree"
                )));
            }
            let maps = (0..4)
                .map(|g| {
                    let nu = lift_line_cocycle(&group, d, g);
                    LaurentMatrix::from_constant(&lift_matrix(m, g)).scale(&nu)
                })
                .collect();
            EquivariantStructure::new(VectorBundle::split(m, &[d, d]), Acting::Genuine(group), maps)?
        }
        Canonical::Tangent => {
            let maps = (0..group.order())
                .map(|g| scalar(m, group.moebius(g).derivative()))
                .collect();
            EquivariantStructure::new(VectorBundle::tangent(m), Acting::Genuine(group), maps)?
        }
    };
    match s.violation()? {
        None => Ok(s),
        Some(v) => Err(Error::InternalInconsistency(format!(
            "canonical structure for {target:?} is invalid: {v}"
        ))),
    }
}

/// Whether `bundle` admits a structure: always for cyclic groups; for the Klein group iff
/// every odd degree occurs in the splitting type with even multiplicity.
pub fn existence(bundle: &VectorBundle, group: &GroupSpec) -> Result<bool> {
    if !group.is_klein() {
        return Ok(true);
    }
    Ok(bundle
        .splitting_type()?
        .grouped()
        .iter()
        .all(|&(d, mult)| d.rem_euclid(2) == 0 || mult % 2 == 0))
}

/// All valid structures on a line bundle whose maps are constants. Any such cocycle takes
/// roots of unity as values, so the candidates `±ζ_m^k` on the generators are exhaustive.
pub fn constant_line_structures(
    bundle: &VectorBundle,
    group: GroupSpec,
) -> Result<Vec<EquivariantStructure>> {
    if bundle.rank() != 1 {
        return Err(Error::InvalidArgument(
            "constant structures are enumerated on line bundles".into(),
        ));
    }
    let m = group.conductor();
    let roots: Vec<CycNum> = {
        let mut v: Vec<CycNum> = (0..m as i64)
            .flat_map(|k| [CycNum::root_of_unity(m, k), -CycNum::root_of_unity(m, k)])
            .collect();
        v.sort_by_key(|c| c.to_string());
        v.dedup();
        v
    };
    let gens = group.generators();
    let mut choices: Vec<Vec<CycNum>> = vec![vec![]];
    for _ in &gens {
        choices = choices
            .into_iter()
            .flat_map(|prefix| {
                roots.iter().map(move |r| {
                    let mut p = prefix.clone();
                    p.push(r.clone());
                    p
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for values in choices {
        let generators = gens
            .iter()
            .zip(values)
            .map(|(&g, c)| (g, scalar(m, LaurentPoly::constant(c))))
            .collect();
        let s = EquivariantStructure::from_generators(bundle.clone(), Acting::Genuine(group), generators)?;
        if s.validate()? {
            out.push(s);
        }
    }
    Ok(out)
}
