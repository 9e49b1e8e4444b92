//! Vector bundles on the projective line, given by Laurent transition matrices.

mod sections;
mod splitting;

use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::{CycNum, LaurentMatrix, LaurentPoly, Point};

pub use sections::Section;
pub use splitting::{H0Profile, ModelIso};

/// A bundle glued from the charts around `0` and `∞` by `T(z)`.
///
/// Sections satisfy `s₀(z) = T(z)·s_∞(1/z)`, so `T = z^n` is `O(n)`.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorBundle {
    transition: LaurentMatrix,
    inverse: LaurentMatrix,
    det_scale: CycNum,
    degree: i32,
}

impl VectorBundle {
    /// Validates that the determinant is a unit monomial.
    pub fn new(transition: LaurentMatrix) -> Result<Self> {
        if !transition.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "transition matrix is {}x{}",
                transition.rows(),
                transition.cols()
            )));
        }
        if transition.rows() == 0 {
            return Err(Error::ZeroRank);
        }
        let (det_scale, degree) = transition.unit_monomial_det()?;
        let inverse = transition.inverse()?;
        Ok(VectorBundle {
            transition,
            inverse,
            det_scale,
            degree,
        })
    }

    /// `O(d)`.
    pub fn line(conductor: u32, d: i32) -> Self {
        Self::split(conductor, &[d])
    }

    /// `⊕ O(d_i)` with diagonal transition.
    pub fn split(conductor: u32, degrees: &[i32]) -> Self {
        Self::new(LaurentMatrix::diag_z_pows(conductor, degrees)).expect("diagonal monomials")
    }

    pub fn trivial(conductor: u32, rank: usize) -> Self {
        Self::split(conductor, &vec![0; rank])
    }

    /// The tangent bundle in the coordinate frames `∂_z`, `∂_w`: `∂_z = -z^{-2}∂_w`, so the
    /// transition is `-z^2`.
    pub fn tangent(conductor: u32) -> Self {
        Self::new(LaurentMatrix::diagonal(
            conductor,
            vec![LaurentPoly::monomial(CycNum::from_i64(conductor, -1), 2)],
        ))
        .expect("monomial")
    }

    pub fn rank(&self) -> usize {
        self.transition.rows()
    }

    pub fn conductor(&self) -> u32 {
        self.transition.conductor()
    }

    pub fn transition(&self) -> &LaurentMatrix {
        &self.transition
    }

    /// `T(z)^{-1}`.
    pub fn inverse_transition(&self) -> &LaurentMatrix {
        &self.inverse
    }

    /// The exponent `k` with `det T = c·z^k`.
    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn det_scale(&self) -> &CycNum {
        &self.det_scale
    }

    fn check(&self, other: &VectorBundle) -> Result<()> {
        if self.conductor() != other.conductor() {
            return Err(Error::ConductorMismatch {
                left: self.conductor(),
                right: other.conductor(),
            });
        }
        Ok(())
    }

    /// `E ⊗ O(k)`.
    pub fn twist(&self, k: i32) -> VectorBundle {
        let r = self.rank() as i32;
        VectorBundle {
            transition: self.transition.shift(k),
            inverse: self.inverse.shift(-k),
            det_scale: self.det_scale.clone(),
            degree: self.degree + r * k,
        }
    }

    /// The dual bundle, with transition `T^{-T}`.
    pub fn dual(&self) -> VectorBundle {
        VectorBundle {
            transition: self.inverse.transpose(),
            inverse: self.transition.transpose(),
            det_scale: self.det_scale.inv().expect("nonzero determinant"),
            degree: -self.degree,
        }
    }

    /// `Hom(self, other) = other ⊗ self^*`, with Kronecker-product transition.
    pub fn hom(&self, other: &VectorBundle) -> Result<VectorBundle> {
        self.check(other)?;
        let dual = self.dual();
        VectorBundle::new(other.transition.kronecker(&dual.transition)?)
    }

    /// Tensor product with Kronecker-product transition.
    pub fn tensor(&self, other: &VectorBundle) -> Result<VectorBundle> {
        self.check(other)?;
        VectorBundle::new(self.transition.kronecker(&other.transition)?)
    }

    pub fn direct_sum(&self, other: &VectorBundle) -> Result<VectorBundle> {
        self.check(other)?;
        VectorBundle::new(self.transition.block_diag(&other.transition)?)
    }

    pub fn embed(&self, target: u32) -> Result<VectorBundle> {
        VectorBundle::new(self.transition.embed(target)?)
    }

    /// Harder–Narasimhan data: the splitting type grouped by degree, descending.
    pub fn hn_data(&self) -> Result<HNData> {
        Ok(HNData::from_splitting(&self.splitting_type()?))
    }

    /// Whether `psi` is a bundle isomorphism from `⊕O(d_j)` (degrees `model`) onto `self`:
    /// `Ψ` regular-invertible at `0` and `T^{-1}·Ψ·diag(z^{d_j})` regular-invertible at `∞`.
    pub fn is_model_frame(&self, model: &[i32], psi: &LaurentMatrix) -> Result<bool> {
        if psi.rows() != self.rank() || psi.cols() != model.len() || !psi.is_square() {
            return Ok(false);
        }
        if psi.conductor() != self.conductor() {
            return Err(Error::ConductorMismatch {
                left: self.conductor(),
                right: psi.conductor(),
            });
        }
        if !psi.regular_invertible_at(Point::Zero)? {
            return Ok(false);
        }
        let at_inf = &(&self.inverse * psi) * &LaurentMatrix::diag_z_pows(self.conductor(), model);
        at_inf.regular_invertible_at(Point::Infinity)
    }
}

impl fmt::Debug for VectorBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorBundle<{}>{}", self.conductor(), self.transition)
    }
}

/// The multiset of degrees `n_1 ≥ … ≥ n_r` with `E ≅ ⊕ O(n_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SplittingType {
    degrees: Vec<i32>,
}

impl SplittingType {
    pub fn new(mut degrees: Vec<i32>) -> Self {
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        SplittingType { degrees }
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn total_degree(&self) -> i32 {
        self.degrees.iter().sum()
    }

    /// Distinct degrees (descending) with multiplicities.
    pub fn grouped(&self) -> Vec<(i32, usize)> {
        let mut out: Vec<(i32, usize)> = Vec::new();
        for &d in &self.degrees {
            match out.last_mut() {
                Some((last, m)) if *last == d => *m += 1,
                _ => out.push((d, 1)),
            }
        }
        out
    }

    /// `h⁰(⊕O(n_i + k)) = Σ max(0, n_i + k + 1)`.
    pub fn h0(&self, k: i32) -> usize {
        self.degrees.iter().map(|&n| (n + k + 1).max(0) as usize).sum()
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, d) in self.degrees.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", d)?;
        }
        write!(f, "}}")
    }
}

/// The graded pieces `W_i/W_{i-1} ≅ O(slope)^{rank}` of the Harder–Narasimhan filtration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HNData {
    pub steps: Vec<(i32, usize)>,
}

impl HNData {
    pub fn from_splitting(t: &SplittingType) -> Self {
        HNData { steps: t.grouped() }
    }

    pub fn is_semistable(&self) -> bool {
        self.steps.len() == 1
    }
}

impl fmt::Display for HNData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (s, r)) in self.steps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({}, {})", s, r)?;
        }
        write!(f, "]")
    }
}
