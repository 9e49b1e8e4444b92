use crate::exactalg::{CycNum, Matrix};
use crate::group::{GroupSpec, Moebius};

const NAMES: [&str; 8] = ["I", "A1", "A2", "A1A2", "-I", "-A1", "-A2", "-A1A2"];

/// An element `±A1^x·A2^y` of the order-8 lift of the Klein group to `GL(2)`.
///
/// `index = 4·sign + x + 2y`, so `index % 4` is the image in the Klein group and `4` is the
/// central element `−I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedElement {
    pub index: usize,
    pub name: &'static str,
    pub matrix: Matrix,
}

impl LiftedElement {
    pub fn image(&self) -> usize {
        self.index % 4
    }

    pub fn is_central(&self) -> bool {
        self.index.is_multiple_of(4)
    }
}

/// `A1 = diag(−1, 1)`, `A2 = antidiag(1, 1)`; so `A2·A1 = −A1·A2`.
pub(crate) fn lift_matrix(conductor: u32, index: usize) -> Matrix {
    let a1 = Matrix::from_i64(conductor, &[&[-1, 0], &[0, 1]]);
    let a2 = Matrix::from_i64(conductor, &[&[0, 1], &[1, 0]]);
    let mut m = Matrix::identity(conductor, 2);
    if index & 1 == 1 {
        m = &m * &a1;
    }
    if index & 2 == 2 {
        m = &m * &a2;
    }
    if index & 4 == 4 {
        m = m.scale(&CycNum::from_i64(conductor, -1));
    }
    m
}

pub(crate) fn lift_mul(i: usize, j: usize) -> usize {
    // A1^x1 A2^y1 · A1^x2 A2^y2 = (−1)^{y1·x2} A1^{x1+x2} A2^{y1+y2}
    let (x2, y1) = (j & 1, (i >> 1) & 1);
    let klein = (i ^ j) & 3;
    let sign = ((i >> 2) ^ (j >> 2) ^ (y1 & x2)) & 1;
    sign * 4 + klein
}

pub(crate) fn lift_name(i: usize) -> &'static str {
    NAMES[i]
}

pub(crate) fn lift_index_of(name: &str) -> Option<usize> {
    NAMES.iter().position(|&n| n == name.trim())
}

/// The eight elements of the lift group, with matrices over `ℚ(ζ_conductor)`.
pub fn lift_group(group: &GroupSpec) -> Vec<LiftedElement> {
    (0..8)
        .map(|i| LiftedElement {
            index: i,
            name: NAMES[i],
            matrix: lift_matrix(group.conductor(), i),
        })
        .collect()
}

/// A lifted element acts on the line through its image in the Klein group.
pub(crate) fn lift_moebius(group: &GroupSpec, i: usize) -> Moebius {
    group.moebius(i % 4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        let g = GroupSpec::klein();
        let els = lift_group(&g);
        let a1 = &els[1].matrix;
        let a2 = &els[2].matrix;
        let minus_i = Matrix::identity(4, 2).scale(&CycNum::from_i64(4, -1));
        assert_eq!(a1 * a2, Matrix::from_i64(4, &[&[0, -1], &[1, 0]]));
        assert_eq!(a2 * a1, Matrix::from_i64(4, &[&[0, 1], &[-1, 0]]));
        assert!((a1 * a1).is_identity());
        assert_eq!(&els[3].matrix * &els[3].matrix, minus_i);
        let central: Vec<usize> = (0..8)
            .filter(|&i| (0..8).all(|j| lift_mul(i, j) == lift_mul(j, i)))
            .collect();
        assert_eq!(central, vec![0, 4]);
    }

    #[test]
    fn multiplication_matches_matrices() {
        let els = lift_group(&GroupSpec::klein());
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(&els[i].matrix * &els[j].matrix, els[lift_mul(i, j)].matrix);
            }
            let sq = &els[i].matrix * &els[i].matrix;
            assert!(sq.is_identity() || sq == els[4].matrix);
        }
    }
}
