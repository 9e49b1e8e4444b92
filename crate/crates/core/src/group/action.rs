use std::fmt;

use crate::group::lift::{lift_index_of, lift_moebius, lift_mul, lift_name};
use crate::group::{GroupSpec, Moebius};

/// The group whose elements index the bundle maps of a structure: either the group itself,
/// or (for the Klein group) its order-8 lift, which acts on the line through its image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Acting {
    Genuine(GroupSpec),
    KleinLift(GroupSpec),
}

impl Acting {
    pub fn spec(&self) -> GroupSpec {
        match self {
            Acting::Genuine(g) | Acting::KleinLift(g) => *g,
        }
    }

    pub fn is_lift(&self) -> bool {
        matches!(self, Acting::KleinLift(_))
    }

    pub fn conductor(&self) -> u32 {
        self.spec().conductor()
    }

    pub fn order(&self) -> usize {
        match self {
            Acting::Genuine(g) => g.order(),
            Acting::KleinLift(_) => 8,
        }
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        match self {
            Acting::Genuine(g) => g.mul(i, j),
            Acting::KleinLift(_) => lift_mul(i, j),
        }
    }

    pub fn name(&self, i: usize) -> String {
        match self {
            Acting::Genuine(g) => g.name(i),
            Acting::KleinLift(_) => lift_name(i).to_string(),
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        match self {
            Acting::Genuine(g) => g.index_of(name),
            Acting::KleinLift(_) => lift_index_of(name),
        }
    }

    pub fn moebius(&self, i: usize) -> Moebius {
        match self {
            Acting::Genuine(g) => g.moebius(i),
            Acting::KleinLift(g) => lift_moebius(g, i),
        }
    }

    /// Generators: `g`, or `a1, a2`, or `A1, A2, −I` for the lift.
    pub fn generators(&self) -> Vec<usize> {
        match self {
            Acting::Genuine(g) => g.generators(),
            Acting::KleinLift(_) => vec![1, 2, 4],
        }
    }

    /// The central element `−I` of the lift.
    pub fn center(&self) -> Option<usize> {
        self.is_lift().then_some(4)
    }
}

impl fmt::Display for Acting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Acting::Genuine(g) => write!(f, "{g}"),
            Acting::KleinLift(_) => write!(f, "klein-lift"),
        }
    }
}
