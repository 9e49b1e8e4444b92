//! Sparse Laurent polynomials in one variable over `Q(ζ_m)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::exactalg::cyclotomic::CycNum;

/// A Laurent polynomial `Σ c_e z^e`, stored sparsely by exponent with no zero entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    conductor: u32,
    terms: BTreeMap<i32, CycNum>,
}

impl LaurentPoly {
    pub fn zero(conductor: u32) -> Self {
        LaurentPoly {
            conductor,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(conductor: u32) -> Self {
        Self::constant(CycNum::one(conductor))
    }

    pub fn constant(c: CycNum) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_i64(conductor: u32, v: i64) -> Self {
        Self::constant(CycNum::from_i64(conductor, v))
    }

    /// `c·z^e`.
    pub fn monomial(c: CycNum, e: i32) -> Self {
        let conductor = c.conductor();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentPoly { conductor, terms }
    }

    /// `z^e`.
    pub fn z_pow(conductor: u32, e: i32) -> Self {
        Self::monomial(CycNum::one(conductor), e)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms(conductor: u32, terms: impl IntoIterator<Item = (i32, CycNum)>) -> Result<Self> {
        let mut out = Self::zero(conductor);
        for (e, c) in terms {
            if c.conductor() != conductor {
                return Err(Error::ConductorMismatch {
                    left: conductor,
                    right: c.conductor(),
                });
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, e: i32, c: CycNum) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(CycNum::is_one)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &CycNum)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i32) -> CycNum {
        self.terms
            .get(&e)
            .cloned()
            .unwrap_or_else(|| CycNum::zero(self.conductor))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// `Some((c, k))` when the polynomial is a single nonzero term `c·z^k`.
    pub fn as_monomial(&self) -> Option<(&CycNum, i32)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(&e, c)| (c, e))
        } else {
            None
        }
    }

    /// The constant value, if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<CycNum> {
        match self.terms.len() {
            0 => Some(CycNum::zero(self.conductor)),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    fn check(&self, other: &LaurentPoly) -> Result<()> {
        if self.conductor != other.conductor {
            Err(Error::ConductorMismatch {
                left: self.conductor,
                right: other.conductor,
            })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check(other)?;
        let mut out = Self::zero(self.conductor);
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                out.add_term(a + b, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &CycNum) -> LaurentPoly {
        if c.is_zero() {
            return Self::zero(self.conductor);
        }
        LaurentPoly {
            conductor: self.conductor,
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i32) -> LaurentPoly {
        LaurentPoly {
            conductor: self.conductor,
            terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut acc = Self::one(self.conductor);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `z ↦ c·z^sign` (`sign = ±1`), term by term.
    pub fn substitute(&self, c: &CycNum, sign: i32) -> Result<LaurentPoly> {
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidArgument(format!("substitution sign {sign}")));
        }
        if c.conductor() != self.conductor {
            return Err(Error::ConductorMismatch {
                left: self.conductor,
                right: c.conductor(),
            });
        }
        let mut out = Self::zero(self.conductor);
        let trivial = c.is_one();
        for (&e, v) in &self.terms {
            let coeff = if trivial { v.clone() } else { v * &c.pow(e as i64)? };
            out.add_term(sign * e, coeff);
        }
        Ok(out)
    }

    /// Evaluates at a nonzero scalar.
    pub fn eval(&self, x: &CycNum) -> Result<CycNum> {
        let mut acc = CycNum::zero(self.conductor);
        for (&e, c) in &self.terms {
            acc = acc.checked_add(&c.checked_mul(&x.pow(e as i64)?)?)?;
        }
        Ok(acc)
    }

    /// Exact quotient `self / divisor` in `K[z, z^-1]`, or `None` when not divisible.
    pub fn exact_div(&self, divisor: &LaurentPoly) -> Result<Option<LaurentPoly>> {
        self.check(divisor)?;
        let (dlo, dhi) = match (divisor.min_exp(), divisor.max_exp()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Err(Error::DivisionByZero),
        };
        if self.is_zero() {
            return Ok(Some(self.clone()));
        }
        if dlo == dhi {
            let inv = divisor.terms[&dlo].inv()?;
            return Ok(Some(self.shift(-dlo).scale(&inv)));
        }
        // Long division from the top; the divisor has a nonzero lowest term, so
        // divisibility in the Laurent ring is divisibility of the shifted polynomials.
        let lead_inv = divisor.terms[&dhi].inv()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.conductor);
        let lo = self.min_exp().unwrap();
        while let Some(top) = rem.max_exp() {
            let qe = top - dhi;
            if qe + dlo < lo {
                return Ok(None);
            }
            let qc = &rem.terms[&top] * &lead_inv;
            for (&e, c) in &divisor.terms {
                rem.add_term(e + qe, -(c * &qc));
            }
            quot.add_term(qe, qc);
        }
        Ok(Some(quot))
    }

    /// Re-expresses coefficients in a larger cyclotomic field.
    pub fn embed(&self, target: u32) -> Result<LaurentPoly> {
        let mut terms = BTreeMap::new();
        for (&e, c) in &self.terms {
            terms.insert(e, c.embed(target)?);
        }
        Ok(LaurentPoly {
            conductor: target,
            terms,
        })
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            conductor: self.conductor,
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{}", e))
            }
        }
        impl $trait<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl fmt::Display for LaurentPoly {
    /// Canonical text, highest exponent first: `z^2-z^-2`, `(1+z4)·z^3+2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&e, c)) in self.terms.iter().rev().enumerate() {
            let text = c.to_string();
            let (sign, body) = if c.term_count() == 1 {
                match text.strip_prefix('-') {
                    Some(rest) => ("-", rest.to_string()),
                    None => ("+", text),
                }
            } else {
                ("+", format!("({})", text))
            };
            if sign == "-" {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            let var = match e {
                0 => None,
                1 => Some("z".to_string()),
                _ => Some(format!("z^{}", e)),
            };
            match var {
                None => write!(f, "{}", body)?,
                Some(v) if body == "1" => write!(f, "{}", v)?,
                Some(v) => write!(f, "{}·{}", body, v)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly<{}>({})", self.conductor, self)
    }
}
