//! Finite abelian groups acting on the projective line by monomial Möbius maps.
//!
//! Only the two standard forms occur: the cyclic group generated by `z ↦ ζ_n·z`, and the
//! Klein four-group generated by `a1: z ↦ −z` and `a2: z ↦ 1/z`. Every element therefore acts
//! as `z ↦ c·z^{±1}`, which keeps all pulled-back matrix data Laurent.

mod action;
mod character;
pub(crate) mod lift;

use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::{CycNum, LaurentMatrix, LaurentPoly, Point};

pub use action::Acting;
pub use character::Character;
pub use lift::{lift_group, LiftedElement};

/// `z ↦ c·z^e` with `e = ±1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moebius {
    pub c: CycNum,
    pub e: i32,
}

impl Moebius {
    pub fn identity(conductor: u32) -> Self {
        Moebius {
            c: CycNum::one(conductor),
            e: 1,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Moebius) -> Moebius {
        // c1·(c2·z^e2)^e1 = c1·c2^e1·z^{e1·e2}
        let c2 = if self.e == 1 {
            other.c.clone()
        } else {
            other.c.inv().expect("nonzero")
        };
        Moebius {
            c: &self.c * &c2,
            e: self.e * other.e,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.e == 1 && self.c.is_one()
    }

    /// `p(γz)`.
    pub fn pull(&self, p: &LaurentPoly) -> LaurentPoly {
        p.substitute(&self.c, self.e).expect("unit substitution")
    }

    /// `M(γz)`.
    pub fn pull_matrix(&self, m: &LaurentMatrix) -> LaurentMatrix {
        m.substitute(&self.c, self.e).expect("unit substitution")
    }

    /// The derivative `γ'(z)` as a Laurent monomial.
    pub fn derivative(&self) -> LaurentPoly {
        if self.e == 1 {
            LaurentPoly::constant(self.c.clone())
        } else {
            LaurentPoly::monomial(-&self.c, -2)
        }
    }

    /// Image of a point of the projective line.
    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        match (p, self.e) {
            (ProjPoint::Finite(x), _) if x.is_zero() => self.apply(&ProjPoint::Zero),
            (ProjPoint::Zero, 1) => ProjPoint::Zero,
            (ProjPoint::Zero, _) => ProjPoint::Infinity,
            (ProjPoint::Infinity, 1) => ProjPoint::Infinity,
            (ProjPoint::Infinity, _) => ProjPoint::Zero,
            (ProjPoint::Finite(x), 1) => ProjPoint::Finite(&self.c * x),
            (ProjPoint::Finite(x), _) => ProjPoint::Finite(&self.c * &x.inv().expect("nonzero")),
        }
    }

    /// Fixed points of a non-identity map. `z ↦ c/z` fixes the square roots of `c`, which are
    /// searched among the roots of unity of the field; `None` if they are not representable.
    pub fn fixed_points(&self) -> Option<Vec<ProjPoint>> {
        if self.is_identity() {
            return None;
        }
        if self.e == 1 {
            return Some(vec![ProjPoint::Zero, ProjPoint::Infinity]);
        }
        let m = self.c.conductor();
        let mut roots: Vec<CycNum> = (0..m as i64)
            .map(|k| CycNum::root_of_unity(m, k))
            .filter(|x| (x * x) == self.c)
            .collect();
        if roots.is_empty() {
            let neg: Vec<CycNum> = (0..m as i64)
                .map(|k| -CycNum::root_of_unity(m, k))
                .filter(|x| (x * x) == self.c)
                .collect();
            roots = neg;
        }
        roots.dedup();
        if roots.len() == 1 {
            let other = -&roots[0];
            roots.push(other);
        }
        if roots.is_empty() {
            None
        } else {
            Some(roots.into_iter().map(ProjPoint::Finite).collect())
        }
    }
}

/// A point of the projective line with coordinates in the scalar field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjPoint {
    Zero,
    Infinity,
    Finite(CycNum),
}

impl From<Point> for ProjPoint {
    fn from(p: Point) -> Self {
        match p {
            Point::Zero => ProjPoint::Zero,
            Point::Infinity => ProjPoint::Infinity,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Cyclic(u32),
    Klein,
}

/// A finite abelian group in standard form, together with the scalar field it is realized in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    kind: GroupKind,
    conductor: u32,
}

/// A group element with its canonical name and Möbius action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub index: usize,
    pub name: String,
    pub moebius: Moebius,
}

impl GroupSpec {
    /// `ℤ/n` realized over `ℚ(ζ_n)`.
    pub fn cyclic(n: u32) -> Result<Self> {
        Self::cyclic_in(n, n)
    }

    /// `ℤ/n` realized over `ℚ(ζ_m)` with `n | m`.
    pub fn cyclic_in(n: u32, conductor: u32) -> Result<Self> {
        if n == 0 || conductor == 0 || !conductor.is_multiple_of(n) {
            return Err(Error::InvalidArgument(format!(
                "cyclic group of order {n} needs a conductor divisible by {n}, got {conductor}"
            )));
        }
        Ok(GroupSpec {
            kind: GroupKind::Cyclic(n),
            conductor,
        })
    }

    /// The Klein four-group over `ℚ(ζ_4)`.
    pub fn klein() -> Self {
        GroupSpec {
            kind: GroupKind::Klein,
            conductor: 4,
        }
    }

    pub fn klein_in(conductor: u32) -> Result<Self> {
        if conductor == 0 || !conductor.is_multiple_of(4) {
            return Err(Error::InvalidArgument(format!(
                "the Klein group needs a conductor divisible by 4, got {conductor}"
            )));
        }
        Ok(GroupSpec {
            kind: GroupKind::Klein,
            conductor,
        })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_klein(&self) -> bool {
        self.kind == GroupKind::Klein
    }

    pub fn with_conductor(&self, conductor: u32) -> Result<Self> {
        match self.kind {
            GroupKind::Cyclic(n) => Self::cyclic_in(n, conductor),
            GroupKind::Klein => Self::klein_in(conductor),
        }
    }

    pub fn order(&self) -> usize {
        match self.kind {
            GroupKind::Cyclic(n) => n as usize,
            GroupKind::Klein => 4,
        }
    }

    /// Product of elements by index. Cyclic `g^i·g^j = g^{i+j}`; Klein indices are bit
    /// vectors `(a1, a2)`, so the product is XOR.
    pub fn mul(&self, i: usize, j: usize) -> usize {
        match self.kind {
            GroupKind::Cyclic(n) => (i + j) % n as usize,
            GroupKind::Klein => i ^ j,
        }
    }

    pub fn inverse(&self, i: usize) -> usize {
        match self.kind {
            GroupKind::Cyclic(n) => (n as usize - i) % n as usize,
            GroupKind::Klein => i,
        }
    }

    pub fn name(&self, i: usize) -> String {
        match self.kind {
            GroupKind::Cyclic(_) => match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                k => format!("g^{k}"),
            },
            GroupKind::Klein => ["e", "a1", "a2", "a1a2"][i].to_string(),
        }
    }

    /// Accepts the canonical names plus `g^0`, `g^1`.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        let name = name.trim();
        match self.kind {
            GroupKind::Cyclic(n) => {
                let k = match name {
                    "e" => 0,
                    "g" => 1,
                    _ => name.strip_prefix("g^")?.parse::<usize>().ok()?,
                };
                (k < n as usize).then_some(k)
            }
            GroupKind::Klein => ["e", "a1", "a2", "a1a2"].iter().position(|&s| s == name),
        }
    }

    pub fn moebius(&self, i: usize) -> Moebius {
        let m = self.conductor;
        match self.kind {
            GroupKind::Cyclic(n) => Moebius {
                c: CycNum::root_of_unity(m, (i as i64) * (m / n) as i64),
                e: 1,
            },
            GroupKind::Klein => Moebius {
                c: CycNum::from_i64(m, if i & 1 == 1 { -1 } else { 1 }),
                e: if i & 2 == 2 { -1 } else { 1 },
            },
        }
    }

    pub fn element(&self, i: usize) -> GroupElement {
        GroupElement {
            index: i,
            name: self.name(i),
            moebius: self.moebius(i),
        }
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        (0..self.order()).map(|i| self.element(i)).collect()
    }

    /// Generators in canonical order: `g` for cyclic groups, `a1, a2` for Klein.
    pub fn generators(&self) -> Vec<usize> {
        match self.kind {
            GroupKind::Cyclic(1) => vec![],
            GroupKind::Cyclic(_) => vec![1],
            GroupKind::Klein => vec![1, 2],
        }
    }

    /// All characters in canonical order.
    pub fn characters(&self) -> Vec<Character> {
        (0..self.order()).map(|k| Character::new(*self, k)).collect()
    }

    pub fn label(&self) -> String {
        match self.kind {
            GroupKind::Cyclic(n) => format!("cyclic({n})"),
            GroupKind::Klein => "klein".to_string(),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}
