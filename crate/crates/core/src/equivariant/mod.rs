//! Equivariant structures: one bundle map `N_γ(z)` per group element.
//!
//! A bundle map over `γ` transports sections by `(φs)₀(γz) = N_γ(z)·s₀(z)`, with the
//! `∞`-chart data derived through the transition matrix. Composition gives the cocycle
//! `N_{γδ}(z) = N_γ(δz)·N_δ(z)`.

mod canonical;
mod equivalence;

use std::collections::VecDeque;
use std::fmt;

use crate::bundle::VectorBundle;
use crate::error::{Error, Result};
use crate::exactalg::{CycNum, LaurentMatrix, LaurentPoly, Point};
use crate::group::{Acting, Character, GroupSpec, Moebius};

pub use canonical::{canonical_structure, constant_line_structures, existence, reference_cocycle, Canonical};
pub use equivalence::{find_intertwiner, structures_equivalent};

/// A bundle map over the group element with the given index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleMap {
    pub element: usize,
    pub matrix: LaurentMatrix,
}

/// Whether `n` defines a bundle map `E → E` over the Möbius map `gamma`.
///
/// For `z ↦ c·z`: `N` regular-invertible at `0` and `T(γz)⁻¹·N·T` at `∞`. For `z ↦ c/z`:
/// `T(γz)⁻¹·N` regular-invertible at `0` and `N·T` at `∞`.
pub fn is_bundle_map(bundle: &VectorBundle, gamma: &Moebius, n: &LaurentMatrix) -> Result<bool> {
    let r = bundle.rank();
    if n.rows() != r || n.cols() != r {
        return Err(Error::DimensionMismatch(format!(
            "bundle map is {}x{} on a rank {} bundle",
            n.rows(),
            n.cols(),
            r
        )));
    }
    if n.conductor() != bundle.conductor() {
        return Err(Error::ConductorMismatch {
            left: bundle.conductor(),
            right: n.conductor(),
        });
    }
    if n.unit_monomial_det().is_err() {
        return Ok(false);
    }
    let t = bundle.transition();
    let t_inv_moved = gamma.pull_matrix(bundle.inverse_transition());
    if gamma.e == 1 {
        Ok(n.regular_invertible_at(Point::Zero)?
            && (&(&t_inv_moved * n) * t).regular_invertible_at(Point::Infinity)?)
    } else {
        Ok((&t_inv_moved * n).regular_invertible_at(Point::Zero)?
            && (n * t).regular_invertible_at(Point::Infinity)?)
    }
}

/// Why a structure failed validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    IdentityNotTrivial,
    Cocycle { left: String, right: String },
    NotBundleMap(String),
    CenterNotScalar,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IdentityNotTrivial => write!(f, "N_e is not the identity"),
            Violation::Cocycle { left, right } => {
                write!(f, "cocycle fails for {left}·{right}")
            }
            Violation::NotBundleMap(g) => write!(f, "N_{g} is not a bundle map"),
            Violation::CenterNotScalar => write!(f, "the central element does not act by ±1"),
        }
    }
}

/// Per-element bundle maps on a bundle, indexed by the acting group.
#[derive(Clone, PartialEq, Eq)]
pub struct EquivariantStructure {
    bundle: VectorBundle,
    acting: Acting,
    maps: Vec<LaurentMatrix>,
}

impl EquivariantStructure {
    /// Assembles a structure without validating it; see [`EquivariantStructure::violation`].
    pub fn new(bundle: VectorBundle, acting: Acting, maps: Vec<LaurentMatrix>) -> Result<Self> {
        if bundle.conductor() != acting.conductor() {
            return Err(Error::ConductorMismatch {
                left: bundle.conductor(),
                right: acting.conductor(),
            });
        }
        if maps.len() != acting.order() {
            return Err(Error::MissingElement(format!(
                "{} maps given for a group of order {}",
                maps.len(),
                acting.order()
            )));
        }
        let r = bundle.rank();
        for (i, n) in maps.iter().enumerate() {
            if n.rows() != r || n.cols() != r {
                return Err(Error::DimensionMismatch(format!(
                    "N_{} is {}x{} on a rank {} bundle",
                    acting.name(i),
                    n.rows(),
                    n.cols(),
                    r
                )));
            }
            if n.conductor() != bundle.conductor() {
                return Err(Error::ConductorMismatch {
                    left: bundle.conductor(),
                    right: n.conductor(),
                });
            }
        }
        Ok(EquivariantStructure { bundle, acting, maps })
    }

    /// From maps keyed by element name; every element must be present.
    pub fn from_named(
        bundle: VectorBundle,
        acting: Acting,
        named: Vec<(String, LaurentMatrix)>,
    ) -> Result<Self> {
        let mut maps: Vec<Option<LaurentMatrix>> = vec![None; acting.order()];
        for (name, m) in named {
            let i = acting
                .index_of(&name)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown group element {name:?}")))?;
            maps[i] = Some(m);
        }
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| Error::MissingElement(acting.name(i))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(bundle, acting, maps)
    }

    /// Extends maps on generators to every element along the first word found by
    /// breadth-first search, `N_{γδ} = N_γ(δz)·N_δ(z)`. Relations are not checked.
    pub fn from_generators(
        bundle: VectorBundle,
        acting: Acting,
        generators: Vec<(usize, LaurentMatrix)>,
    ) -> Result<Self> {
        let m = bundle.conductor();
        let r = bundle.rank();
        let mut maps: Vec<Option<LaurentMatrix>> = vec![None; acting.order()];
        maps[0] = Some(LaurentMatrix::identity(m, r));
        let mut queue = VecDeque::from([0usize]);
        while let Some(delta) = queue.pop_front() {
            for (g, n_g) in &generators {
                let prod = acting.mul(*g, delta);
                if maps[prod].is_none() {
                    let moved = acting.moebius(delta).pull_matrix(n_g);
                    maps[prod] = Some(moved.checked_mul(maps[delta].as_ref().expect("visited"))?);
                    queue.push_back(prod);
                }
            }
        }
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| Error::MissingElement(acting.name(i))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(bundle, acting, maps)
    }

    pub fn bundle(&self) -> &VectorBundle {
        &self.bundle
    }

    pub fn acting(&self) -> Acting {
        self.acting
    }

    pub fn group(&self) -> GroupSpec {
        self.acting.spec()
    }

    pub fn is_genuine(&self) -> bool {
        !self.acting.is_lift()
    }

    pub fn rank(&self) -> usize {
        self.bundle.rank()
    }

    pub fn conductor(&self) -> u32 {
        self.bundle.conductor()
    }

    pub fn map(&self, element: usize) -> &LaurentMatrix {
        &self.maps[element]
    }

    pub fn maps(&self) -> &[LaurentMatrix] {
        &self.maps
    }

    pub fn bundle_maps(&self) -> Vec<BundleMap> {
        self.maps
            .iter()
            .enumerate()
            .map(|(element, matrix)| BundleMap {
                element,
                matrix: matrix.clone(),
            })
            .collect()
    }

    /// The first failed condition, or `None` if the structure is valid.
    pub fn violation(&self) -> Result<Option<Violation>> {
        if !self.maps[0].is_identity() {
            return Ok(Some(Violation::IdentityNotTrivial));
        }
        let n = self.acting.order();
        for g in 0..n {
            for d in 0..n {
                let lhs = &self.maps[self.acting.mul(g, d)];
                let rhs = &self.acting.moebius(d).pull_matrix(&self.maps[g]) * &self.maps[d];
                if lhs != &rhs {
                    return Ok(Some(Violation::Cocycle {
                        left: self.acting.name(g),
                        right: self.acting.name(d),
                    }));
                }
            }
        }
        for g in 0..n {
            if !is_bundle_map(&self.bundle, &self.acting.moebius(g), &self.maps[g])? {
                return Ok(Some(Violation::NotBundleMap(self.acting.name(g))));
            }
        }
        if self.acting.is_lift() && self.central_sign().is_none() {
            return Ok(Some(Violation::CenterNotScalar));
        }
        Ok(None)
    }

    /// Identity, full cocycle table, and the bundle-map conditions for every element.
    pub fn validate(&self) -> Result<bool> {
        Ok(self.violation()?.is_none())
    }

    /// For a lift structure: `±1` if the central element acts by that scalar.
    pub fn central_sign(&self) -> Option<i32> {
        let c = self.acting.center()?;
        let n = &self.maps[c];
        let r = self.rank();
        let m = self.conductor();
        if n.is_identity() {
            Some(1)
        } else if n == &LaurentMatrix::identity(m, r).neg() {
            Some(-1)
        } else {
            None
        }
    }

    /// `N'_γ = χ(γ)·N_γ`.
    pub fn twist_by_character(&self, chi: &Character) -> Result<Self> {
        if !self.is_genuine() {
            return Err(Error::NotGenuine);
        }
        if chi.group() != self.group() {
            return Err(Error::NotComparable(format!(
                "character of {} on a {} structure",
                chi.group(),
                self.group()
            )));
        }
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(g, n)| n.scale_scalar(&chi.value(g)))
            .collect();
        Self::new(self.bundle.clone(), self.acting, maps)
    }

    /// The structure on `E ⊗ O(k)` with the same maps, valid when `O(k)` carries the
    /// trivial cyclic structure (`N = 1`).
    pub fn twist_bundle_cyclic(&self, k: i32) -> Result<Self> {
        if self.group().is_klein() {
            return Err(Error::InvalidArgument(
                "twisting by O(k) needs a structure on O(k) for the Klein group".into(),
            ));
        }
        Self::new(self.bundle.twist(k), self.acting, self.maps.clone())
    }

    /// The dual structure `N_γ^{-T}` on `E^*`.
    pub fn dual(&self) -> Result<Self> {
        let maps = self
            .maps
            .iter()
            .map(|n| Ok(n.inverse()?.transpose()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.bundle.dual(), self.acting, maps)
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        match (self.acting, other.acting) {
            (a, b) if a == b => Ok((self.clone(), other.clone())),
            (Acting::KleinLift(_), Acting::Genuine(_)) => Ok((self.clone(), other.to_lift()?)),
            (Acting::Genuine(_), Acting::KleinLift(_)) => Ok((self.to_lift()?, other.clone())),
            (a, b) => Err(Error::NotComparable(format!("{a} vs {b}"))),
        }
    }

    /// Kronecker-product structure on `E ⊗ F`. Mixing a genuine Klein structure with a lift
    /// structure pulls the genuine one back to the lift.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let bundle = a.bundle.tensor(&b.bundle)?;
        let maps = a
            .maps
            .iter()
            .zip(&b.maps)
            .map(|(x, y)| x.kronecker(y))
            .collect::<Result<Vec<_>>>()?;
        Self::new(bundle, a.acting, maps)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let bundle = a.bundle.direct_sum(&b.bundle)?;
        let maps = a
            .maps
            .iter()
            .zip(&b.maps)
            .map(|(x, y)| x.block_diag(y))
            .collect::<Result<Vec<_>>>()?;
        Self::new(bundle, a.acting, maps)
    }

    /// Pulls a genuine Klein structure back to the lift group (`N_{±g} = N_g`).
    pub fn to_lift(&self) -> Result<Self> {
        match self.acting {
            Acting::KleinLift(_) => Ok(self.clone()),
            Acting::Genuine(g) if g.is_klein() => {
                let maps = (0..8).map(|i| self.maps[i % 4].clone()).collect();
                Self::new(self.bundle.clone(), Acting::KleinLift(g), maps)
            }
            Acting::Genuine(_) => Err(Error::InvalidArgument("only Klein structures have a lift".into())),
        }
    }

    /// Descends a lift structure whose center acts trivially.
    pub fn descend(&self) -> Result<Self> {
        match self.acting {
            Acting::Genuine(_) => Ok(self.clone()),
            Acting::KleinLift(g) => {
                if self.central_sign() != Some(1) {
                    return Err(Error::NotGenuine);
                }
                Self::new(self.bundle.clone(), Acting::Genuine(g), self.maps[..4].to_vec())
            }
        }
    }

    /// Transports the structure along a frame change `F: E → E'` (`s₀ ↦ F·s₀`):
    /// `N'_γ(z) = F(γz)·N_γ(z)·F(z)⁻¹`.
    pub fn push_forward(&self, frame: &LaurentMatrix, target: VectorBundle) -> Result<Self> {
        let f_inv = frame.inverse()?;
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(g, n)| {
                let moved = self.acting.moebius(g).pull_matrix(frame);
                (&moved * n).checked_mul(&f_inv)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(target, self.acting, maps)
    }

    /// Re-expresses all data over a larger cyclotomic field.
    pub fn embed(&self, conductor: u32) -> Result<Self> {
        let acting = match self.acting {
            Acting::Genuine(g) => Acting::Genuine(g.with_conductor(conductor)?),
            Acting::KleinLift(g) => Acting::KleinLift(g.with_conductor(conductor)?),
        };
        let maps = self
            .maps
            .iter()
            .map(|n| n.embed(conductor))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.bundle.embed(conductor)?, acting, maps)
    }
}

/// The character `χ` with `S1 = χ·S2`, for two structures on the same line bundle.
pub fn structure_quotient(s1: &EquivariantStructure, s2: &EquivariantStructure) -> Result<Character> {
    if s1.bundle != s2.bundle {
        return Err(Error::NotComparable(
            "structures live on different bundles".into(),
        ));
    }
    if s1.acting != s2.acting || !s1.is_genuine() {
        return Err(Error::NotComparable(format!(
            "acting groups {} and {}",
            s1.acting, s2.acting
        )));
    }
    if s1.rank() != 1 {
        return Err(Error::NotComparable(format!(
            "quotients are defined on line bundles, not rank {}",
            s1.rank()
        )));
    }
    let values = s1
        .maps
        .iter()
        .zip(&s2.maps)
        .map(|(a, b)| -> Result<CycNum> {
            let q = a.get(0, 0).exact_div(b.get(0, 0))?;
            q.as_ref()
                .and_then(LaurentPoly::as_constant)
                .ok_or_else(|| Error::NotComparable("quotient is not a constant".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Character::from_values(s1.group(), &values)
        .ok_or_else(|| Error::NotComparable("quotient is not a character".into()))
}

impl fmt::Debug for EquivariantStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EquivariantStructure<{}> on {:?} {{", self.acting, self.bundle)?;
        for (i, n) in self.maps.iter().enumerate() {
            write!(f, " {}: {}", self.acting.name(i), n)?;
        }
        write!(f, " }}")
    }
}
