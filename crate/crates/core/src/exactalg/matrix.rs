//! Matrices with Laurent-polynomial entries.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::exactalg::cyclotomic::CycNum;
use crate::exactalg::dense::Matrix;
use crate::exactalg::laurent::LaurentPoly;

/// The two points of the projective line that anchor the standard charts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Point {
    Zero,
    Infinity,
}

/// Row-major matrix of Laurent polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    conductor: u32,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn new(conductor: u32, rows: usize, cols: usize, entries: Vec<LaurentPoly>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                rows,
                cols
            )));
        }
        if let Some(bad) = entries.iter().find(|e| e.conductor() != conductor) {
            return Err(Error::ConductorMismatch {
                left: conductor,
                right: bad.conductor(),
            });
        }
        Ok(LaurentMatrix {
            rows,
            cols,
            conductor,
            entries,
        })
    }

    /// Builds from rows of polynomials.
    pub fn from_rows(conductor: u32, rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(conductor, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(
        conductor: u32,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> LaurentPoly,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        LaurentMatrix {
            rows,
            cols,
            conductor,
            entries,
        }
    }

    pub fn zeros(conductor: u32, rows: usize, cols: usize) -> Self {
        Self::from_fn(conductor, rows, cols, |_, _| LaurentPoly::zero(conductor))
    }

    pub fn identity(conductor: u32, n: usize) -> Self {
        Self::from_fn(conductor, n, n, |i, j| {
            if i == j {
                LaurentPoly::one(conductor)
            } else {
                LaurentPoly::zero(conductor)
            }
        })
    }

    pub fn diagonal(conductor: u32, diag: Vec<LaurentPoly>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(conductor, n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// `diag(z^{d_1}, …, z^{d_r})`.
    pub fn diag_z_pows(conductor: u32, degrees: &[i32]) -> Self {
        Self::diagonal(
            conductor,
            degrees
                .iter()
                .map(|&d| LaurentPoly::z_pow(conductor, d))
                .collect(),
        )
    }

    pub fn from_constant(m: &Matrix) -> Self {
        Self::from_fn(m.conductor(), m.rows(), m.cols(), |i, j| {
            LaurentPoly::constant(m.get(i, j).clone())
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<LaurentPoly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    fn check_conductor(&self, other: &LaurentMatrix) -> Result<()> {
        if self.conductor != other.conductor {
            return Err(Error::ConductorMismatch {
                left: self.conductor,
                right: other.conductor,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &LaurentMatrix) -> Result<LaurentMatrix> {
        self.check_conductor(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        Ok(LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            conductor: self.conductor,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &LaurentMatrix) -> Result<LaurentMatrix> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &LaurentMatrix) -> Result<LaurentMatrix> {
        self.check_conductor(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.conductor, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> LaurentMatrix {
        self.map(|p| -p)
    }

    pub fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> LaurentMatrix {
        LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            conductor: self.conductor,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map(&self, f: impl Fn(&LaurentPoly) -> Result<LaurentPoly>) -> Result<LaurentMatrix> {
        Ok(LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            conductor: self.conductor,
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// Multiplies every entry by a Laurent polynomial.
    pub fn scale(&self, p: &LaurentPoly) -> LaurentMatrix {
        self.map(|e| e * p)
    }

    pub fn scale_scalar(&self, c: &CycNum) -> LaurentMatrix {
        self.map(|e| e.scale(c))
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i32) -> LaurentMatrix {
        self.map(|e| e.shift(k))
    }

    /// Entrywise substitution `z ↦ c·z^sign`.
    pub fn substitute(&self, c: &CycNum, sign: i32) -> Result<LaurentMatrix> {
        self.try_map(|e| e.substitute(c, sign))
    }

    pub fn transpose(&self) -> LaurentMatrix {
        Self::from_fn(self.conductor, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kronecker(&self, other: &LaurentMatrix) -> Result<LaurentMatrix> {
        self.check_conductor(other)?;
        let (r, c) = (other.rows, other.cols);
        Ok(Self::from_fn(
            self.conductor,
            self.rows * r,
            self.cols * c,
            |i, j| self.get(i / r, j / c) * other.get(i % r, j % c),
        ))
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &LaurentMatrix) -> Result<LaurentMatrix> {
        self.check_conductor(other)?;
        let mut out = Self::zeros(self.conductor, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// The submatrix on the given row and column index ranges.
    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> LaurentMatrix {
        let (r0, c0) = (rows.start, cols.start);
        Self::from_fn(self.conductor, rows.len(), cols.len(), |i, j| {
            self.get(r0 + i, c0 + j).clone()
        })
    }

    /// Reorders columns: column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> LaurentMatrix {
        Self::from_fn(self.conductor, self.rows, perm.len(), |i, j| {
            self.get(i, perm[j]).clone()
        })
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.entries.iter().filter_map(LaurentPoly::min_exp).min()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.entries.iter().filter_map(LaurentPoly::max_exp).max()
    }

    /// Largest absolute exponent over all entries.
    pub fn max_abs_exp(&self) -> i32 {
        self.min_exp()
            .map(i32::abs)
            .max(self.max_exp().map(i32::abs))
            .unwrap_or(0)
    }

    /// The dense matrix of `z^e` coefficients.
    pub fn coefficient(&self, e: i32) -> Matrix {
        Matrix::from_fn(self.conductor, self.rows, self.cols, |i, j| {
            self.get(i, j).coeff(e)
        })
    }

    /// The constant matrix, when every entry is constant.
    pub fn as_constant(&self) -> Option<Matrix> {
        if self.entries.iter().all(|e| e.as_constant().is_some()) {
            Some(self.coefficient(0))
        } else {
            None
        }
    }

    pub fn embed(&self, target: u32) -> Result<LaurentMatrix> {
        Ok(LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            conductor: target,
            entries: self
                .entries
                .iter()
                .map(|e| e.embed(target))
                .collect::<Result<_>>()?,
        })
    }

    fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix is not square",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    /// Determinant: cofactor expansion up to size 4, fraction-free Bareiss elimination above.
    pub fn det(&self) -> Result<LaurentPoly> {
        self.require_square()?;
        if self.rows <= 4 {
            let idx: Vec<usize> = (0..self.rows).collect();
            Ok(self.cofactor_det(&idx, &idx))
        } else {
            Ok(self.bareiss_det())
        }
    }

    fn cofactor_det(&self, rows: &[usize], cols: &[usize]) -> LaurentPoly {
        match rows.len() {
            0 => LaurentPoly::one(self.conductor),
            1 => self.get(rows[0], cols[0]).clone(),
            2 => {
                self.get(rows[0], cols[0]) * self.get(rows[1], cols[1])
                    - self.get(rows[0], cols[1]) * self.get(rows[1], cols[0])
            }
            _ => {
                let mut acc = LaurentPoly::zero(self.conductor);
                let sub_rows = &rows[1..];
                for (k, &c) in cols.iter().enumerate() {
                    let a = self.get(rows[0], c);
                    if a.is_zero() {
                        continue;
                    }
                    let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let term = a * &self.cofactor_det(sub_rows, &sub_cols);
                    acc = if k % 2 == 0 { acc + term } else { acc - term };
                }
                acc
            }
        }
    }

    fn bareiss_det(&self) -> LaurentPoly {
        let n = self.rows;
        let mut m = self.clone();
        let mut prev = LaurentPoly::one(self.conductor);
        let mut negate = false;
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m.get(r, k).is_zero()) else {
                return LaurentPoly::zero(self.conductor);
            };
            if p != k {
                m.swap_rows(p, k);
                negate = !negate;
            }
            m.bareiss_step(k, &prev, k + 1..n);
            prev = m.get(k, k).clone();
        }
        if negate {
            -prev
        } else {
            prev
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// One fraction-free elimination step with pivot `(k, k)` on the given rows.
    fn bareiss_step(&mut self, k: usize, prev: &LaurentPoly, rows: std::ops::Range<usize>) {
        let pivot = self.get(k, k).clone();
        for i in rows {
            let f = self.get(i, k).clone();
            for j in k + 1..self.cols {
                let num = &pivot * self.get(i, j) - &f * self.get(k, j);
                let q = num
                    .exact_div(prev)
                    .expect("conductors agree")
                    .expect("Bareiss division is exact");
                self.set(i, j, q);
            }
            self.set(i, k, LaurentPoly::zero(self.conductor));
        }
    }

    /// `(c, k)` with `det = c·z^k`, or `NonUnimodular`.
    pub fn unit_monomial_det(&self) -> Result<(CycNum, i32)> {
        let det = self.det()?;
        match det.as_monomial() {
            Some((c, k)) => Ok((c.clone(), k)),
            None => Err(Error::NonUnimodular),
        }
    }

    /// Inverse of a matrix whose determinant is a unit monomial: the adjugate divided by the
    /// determinant.
    pub fn inverse(&self) -> Result<LaurentMatrix> {
        self.require_square()?;
        let (c, k) = self.unit_monomial_det()?;
        let n = self.rows;
        if n <= 4 {
            let det_inv = LaurentPoly::monomial(c.inv()?, -k);
            let idx: Vec<usize> = (0..n).collect();
            let mut out = Self::zeros(self.conductor, n, n);
            for i in 0..n {
                for j in 0..n {
                    // adj[i][j] = (-1)^{i+j} · minor(j, i)
                    let rows: Vec<usize> = idx.iter().copied().filter(|&x| x != j).collect();
                    let cols: Vec<usize> = idx.iter().copied().filter(|&x| x != i).collect();
                    let minor = self.cofactor_det(&rows, &cols);
                    let v = &minor * &det_inv;
                    out.set(i, j, if (i + j) % 2 == 0 { v } else { -v });
                }
            }
            return Ok(out);
        }
        self.inverse_by_elimination()
    }

    /// Fraction-free forward elimination on `[A | I]` followed by exact back substitution;
    /// every division is exact because the inverse has Laurent entries.
    fn inverse_by_elimination(&self) -> Result<LaurentMatrix> {
        let n = self.rows;
        let mut aug = Self::zeros(self.conductor, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, LaurentPoly::one(self.conductor));
        }
        let mut prev = LaurentPoly::one(self.conductor);
        for k in 0..n {
            let p = (k..n)
                .find(|&r| !aug.get(r, k).is_zero())
                .ok_or(Error::NonUnimodular)?;
            if p != k {
                aug.swap_rows(p, k);
            }
            aug.bareiss_step(k, &prev, k + 1..n);
            prev = aug.get(k, k).clone();
        }
        let mut out = Self::zeros(self.conductor, n, n);
        for c in 0..n {
            for i in (0..n).rev() {
                let mut num = aug.get(i, n + c).clone();
                for j in i + 1..n {
                    num = num - aug.get(i, j) * out.get(j, c);
                }
                let x = num
                    .exact_div(aug.get(i, i))?
                    .ok_or_else(|| Error::InternalInconsistency("inexact back substitution".into()))?;
                out.set(i, c, x);
            }
        }
        Ok(out)
    }

    /// Whether the matrix is holomorphic and invertible in a neighborhood of the point.
    ///
    /// At zero: no negative exponents and an invertible constant term. At infinity: the same
    /// after `z ↦ 1/z`, i.e. no positive exponents.
    pub fn regular_invertible_at(&self, point: Point) -> Result<bool> {
        self.require_square()?;
        let regular = match point {
            Point::Zero => self.min_exp().is_none_or(|e| e >= 0),
            Point::Infinity => self.max_exp().is_none_or(|e| e <= 0),
        };
        if !regular {
            return Ok(false);
        }
        Ok(!self.coefficient(0).det().is_zero())
    }
}

impl Add<&LaurentMatrix> for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn add(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{}", e))
    }
}

impl Sub<&LaurentMatrix> for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn sub(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{}", e))
    }
}

impl Mul<&LaurentMatrix> for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn mul(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{}", e))
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentMatrix<{}>{}", self.conductor, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(e: i32) -> LaurentPoly {
        LaurentPoly::z_pow(1, e)
    }

    fn c(v: i64) -> LaurentPoly {
        LaurentPoly::from_i64(1, v)
    }

    fn m2(a: LaurentPoly, b: LaurentPoly, cc: LaurentPoly, d: LaurentPoly) -> LaurentMatrix {
        LaurentMatrix::from_rows(1, vec![vec![a, b], vec![cc, d]]).unwrap()
    }

    #[test]
    fn det_of_diagonal() {
        let m = LaurentMatrix::diag_z_pows(1, &[3, -1]);
        assert_eq!(m.det().unwrap(), z(2));
    }

    #[test]
    fn inverse_of_upper_triangular() {
        let m = m2(z(1), c(1), c(0), z(1));
        let inv = m.inverse().unwrap();
        assert_eq!(inv, m2(z(-1), -z(-2), c(0), z(-1)));
        assert!((&m * &inv).is_identity());
    }

    #[test]
    fn inverse_with_constant_det() {
        let m = m2(c(1), z(1), z(-1), c(0));
        assert_eq!(m.det().unwrap(), c(-1));
        let inv = m.inverse().unwrap();
        assert_eq!(inv, m2(c(0), z(1), z(-1), c(-1)));
        assert!((&m * &inv).is_identity());
        assert!((&inv * &m).is_identity());
    }

    #[test]
    fn non_unimodular_inverse_is_rejected() {
        let m = m2(z(1) + c(1), c(0), c(0), c(1));
        assert_eq!(m.inverse(), Err(Error::NonUnimodular));
    }

    #[test]
    fn regularity_checks() {
        let id = LaurentMatrix::identity(1, 2);
        assert!(id.regular_invertible_at(Point::Zero).unwrap());
        let zz = LaurentMatrix::diagonal(1, vec![z(1)]);
        assert!(!zz.regular_invertible_at(Point::Zero).unwrap());
        let u = m2(c(1), z(-1), c(0), c(1));
        assert!(!u.regular_invertible_at(Point::Zero).unwrap());
        assert!(u.regular_invertible_at(Point::Infinity).unwrap());
    }

    #[test]
    fn large_inverse_by_elimination() {
        // A 6x6 unipotent product; exercises the Bareiss paths.
        let n = 6;
        let mut a = LaurentMatrix::identity(1, n);
        for i in 0..n - 1 {
            let mut e = LaurentMatrix::identity(1, n);
            e.set(i, i + 1, z(1) + c(2));
            e.set(i + 1, i, z(-1));
            a = &a * &e;
        }
        assert!(a.det().unwrap().as_monomial().is_some());
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
    }
}
