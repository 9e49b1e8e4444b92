use std::fmt;

use crate::exactalg::CycNum;
use crate::group::{GroupKind, GroupSpec};

/// A homomorphism `G → K^*`, identified by its canonical index.
///
/// Cyclic: `χ_k(g^j) = ζ_n^{kj}`. Klein: index `2·[χ(a1) = −1] + [χ(a2) = −1]`, which lists
/// `(+1,+1), (+1,−1), (−1,+1), (−1,−1)` in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    group: GroupSpec,
    index: usize,
}

impl PartialOrd for GroupSpec {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupSpec {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.label()
            .cmp(&other.label())
            .then(self.conductor().cmp(&other.conductor()))
    }
}

impl Character {
    pub(crate) fn new(group: GroupSpec, index: usize) -> Self {
        assert!(index < group.order(), "character index out of range");
        Character { group, index }
    }

    pub fn trivial(group: GroupSpec) -> Self {
        Character::new(group, 0)
    }

    /// The character with index `index`, if it exists.
    pub fn from_index(group: GroupSpec, index: usize) -> Option<Self> {
        (index < group.order()).then(|| Character::new(group, index))
    }

    /// Klein character with prescribed signs on `a1` and `a2`.
    pub fn klein_signs(group: GroupSpec, a1: i32, a2: i32) -> Option<Self> {
        if !group.is_klein() || a1.abs() != 1 || a2.abs() != 1 {
            return None;
        }
        Some(Character::new(
            group,
            2 * usize::from(a1 == -1) + usize::from(a2 == -1),
        ))
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }

    /// Value on the element with index `element`.
    pub fn value(&self, element: usize) -> CycNum {
        let m = self.group.conductor();
        match self.group.kind() {
            GroupKind::Cyclic(n) => {
                let k = (self.index * element) % n as usize;
                CycNum::root_of_unity(m, (k as u32 * (m / n)) as i64)
            }
            GroupKind::Klein => {
                let (x, y) = (element & 1, (element >> 1) & 1);
                let (c1, c0) = ((self.index >> 1) & 1, self.index & 1);
                let odd = (x * c1 + y * c0) % 2 == 1;
                CycNum::from_i64(m, if odd { -1 } else { 1 })
            }
        }
    }

    pub fn values(&self) -> Vec<CycNum> {
        (0..self.group.order()).map(|g| self.value(g)).collect()
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Character) -> Character {
        assert_eq!(self.group, other.group, "characters of different groups");
        let index = match self.group.kind() {
            GroupKind::Cyclic(n) => (self.index + other.index) % n as usize,
            GroupKind::Klein => self.index ^ other.index,
        };
        Character::new(self.group, index)
    }

    pub fn inverse(&self) -> Character {
        let index = match self.group.kind() {
            GroupKind::Cyclic(n) => (n as usize - self.index) % n as usize,
            GroupKind::Klein => self.index,
        };
        Character::new(self.group, index)
    }

    /// Recovers a character from its values, if they form one.
    pub fn from_values(group: GroupSpec, values: &[CycNum]) -> Option<Character> {
        group
            .characters()
            .into_iter()
            .find(|c| values.len() == group.order() && c.values() == values)
    }

    /// `chi{k}` for cyclic groups, `chi(±1,±1)` for Klein.
    pub fn label(&self) -> String {
        match self.group.kind() {
            GroupKind::Cyclic(_) => format!("chi{}", self.index),
            GroupKind::Klein => {
                let s = |b: usize| if b == 1 { "-1" } else { "+1" };
                format!("chi({},{})", s((self.index >> 1) & 1), s(self.index & 1))
            }
        }
    }

    pub fn parse(group: GroupSpec, label: &str) -> Option<Character> {
        group.characters().into_iter().find(|c| c.label() == label.trim())
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}
