//! Elements of cyclotomic fields `Q(ζ_m)` in the power basis of `Q[x]/Φ_m(x)`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::rc::Rc;

use dashu_int::{IBig, Sign, UBig};
use dashu_ratio::ops::Abs;
use num_integer::Integer;

use crate::error::{Error, Result};

/// Exact rationals; small values are stored inline, so the common case avoids allocation.
pub type Rational = dashu_ratio::RBig;

/// `n/d` as an exact rational. Panics when `d = 0`.
pub fn rational(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::from_parts_signed(IBig::from(n), IBig::from(d))
}

fn recip(q: &Rational) -> Rational {
    &Rational::ONE / q
}

/// Euler's totient.
pub fn totient(m: u32) -> usize {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn divisors(m: u32) -> Vec<u32> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

/// Integer coefficients of the `m`-th cyclotomic polynomial, lowest degree first.
///
/// Computed by dividing `x^m - 1` by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    assert!(m >= 1, "conductor must be positive");
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in divisors(m) {
        if d == m {
            continue;
        }
        num = div_monic_exact(&num, &cyclotomic_polynomial(d));
    }
    num
}

fn div_monic_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for j in (dn..num.len()).rev() {
        let c = rem[j];
        if c == 0 {
            continue;
        }
        quot[j - dn] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[j - dn + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

#[derive(Debug)]
struct FieldData {
    degree: usize,
    phi: Vec<i64>,
}

thread_local! {
    static FIELDS: RefCell<HashMap<u32, Rc<FieldData>>> = RefCell::new(HashMap::new());
}

fn field(m: u32) -> Rc<FieldData> {
    FIELDS.with(|cache| {
        cache
            .borrow_mut()
            .entry(m)
            .or_insert_with(|| {
                let phi = cyclotomic_polynomial(m);
                Rc::new(FieldData {
                    degree: phi.len() - 1,
                    phi,
                })
            })
            .clone()
    })
}

fn sub_scaled_int(target: &mut Rational, c: &Rational, k: i64) {
    match k {
        0 => {}
        1 => *target -= c,
        -1 => *target += c,
        _ => *target -= c * Rational::from(IBig::from(k)),
    }
}

/// Reduces a coefficient vector modulo `Φ_m` into a vector of length `φ(m)`.
fn reduce(f: &FieldData, mut p: Vec<Rational>) -> Vec<Rational> {
    let deg = f.degree;
    if p.len() > deg {
        for j in (deg..p.len()).rev() {
            if p[j].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut p[j], Rational::ZERO);
            for i in 0..deg {
                sub_scaled_int(&mut p[j - deg + i], &c, f.phi[i]);
            }
        }
        p.truncate(deg);
    }
    p.resize(deg, Rational::ZERO);
    p
}

/// An element `Σ c_k ζ_m^k` of the cyclotomic field of conductor `m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl CycNum {
    pub fn zero(conductor: u32) -> Self {
        let f = field(conductor);
        CycNum {
            conductor,
            coeffs: vec![Rational::ZERO; f.degree],
        }
    }

    pub fn one(conductor: u32) -> Self {
        Self::from_rational(conductor, Rational::ONE)
    }

    pub fn from_i64(conductor: u32, v: i64) -> Self {
        Self::from_rational(conductor, Rational::from(IBig::from(v)))
    }

    pub fn from_rational(conductor: u32, v: Rational) -> Self {
        let mut out = Self::zero(conductor);
        out.coeffs[0] = v;
        out
    }

    /// Builds `Σ coeffs[k] ζ^k`, reducing modulo `Φ_m`. Any length is accepted.
    pub fn from_coeffs(conductor: u32, coeffs: Vec<Rational>) -> Self {
        let f = field(conductor);
        CycNum {
            conductor,
            coeffs: reduce(&f, coeffs),
        }
    }

    /// The primitive root `ζ_m`.
    pub fn primitive_root(conductor: u32) -> Self {
        Self::root_of_unity(conductor, 1)
    }

    /// `ζ_m^k` for any integer `k`.
    pub fn root_of_unity(conductor: u32, k: i64) -> Self {
        let e = k.rem_euclid(conductor as i64) as usize;
        let mut p = vec![Rational::ZERO; e + 1];
        p[e] = Rational::ONE;
        Self::from_coeffs(conductor, p)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Power-basis coefficients, length `φ(m)`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Rational::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Rational::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check(&self, other: &CycNum) -> Result<()> {
        if self.conductor != other.conductor {
            Err(Error::ConductorMismatch {
                left: self.conductor,
                right: other.conductor,
            })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &CycNum) -> Result<CycNum> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &CycNum) -> Result<CycNum> {
        self.check(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn checked_mul(&self, other: &CycNum) -> Result<CycNum> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &CycNum) -> Result<CycNum> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    fn add_unchecked(&self, other: &CycNum) -> CycNum {
        CycNum {
            conductor: self.conductor,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn sub_unchecked(&self, other: &CycNum) -> CycNum {
        CycNum {
            conductor: self.conductor,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    fn mul_unchecked(&self, other: &CycNum) -> CycNum {
        let n = self.coeffs.len();
        if n == 1 {
            return CycNum {
                conductor: self.conductor,
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            };
        }
        if let Some(q) = other.as_rational() {
            return self.scale(q);
        }
        if let Some(q) = self.as_rational() {
            return other.scale(q);
        }
        let mut prod = vec![Rational::ZERO; 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(self.conductor, prod)
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, q: &Rational) -> CycNum {
        CycNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Φ_m`.
    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(CycNum::from_rational(self.conductor, recip(q)));
        }
        let f = field(self.conductor);
        let modulus: Vec<Rational> = f.phi.iter().map(|&c| Rational::from(IBig::from(c))).collect();
        let s = poly_inverse_mod(&trim(self.coeffs.clone()), &modulus);
        Ok(Self::from_coeffs(self.conductor, s))
    }

    pub fn pow(&self, e: i64) -> Result<CycNum> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = CycNum::one(self.conductor);
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&sq);
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.mul_unchecked(&sq);
            }
        }
        Ok(acc)
    }

    /// Re-expresses the element in `Q(ζ_M)` for a multiple `M` of the conductor.
    pub fn embed(&self, target: u32) -> Result<CycNum> {
        if !target.is_multiple_of(self.conductor) {
            return Err(Error::ConductorMismatch {
                left: self.conductor,
                right: target,
            });
        }
        if target == self.conductor {
            return Ok(self.clone());
        }
        let step = (target / self.conductor) as usize;
        let mut p = vec![Rational::ZERO; step * (self.coeffs.len() - 1) + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            p[k * step] = c.clone();
        }
        Ok(Self::from_coeffs(target, p))
    }

    /// Applies the Galois automorphism `ζ ↦ ζ^j` (`j` coprime to the conductor).
    pub fn galois(&self, j: i64) -> CycNum {
        let m = self.conductor as i64;
        debug_assert_eq!(j.rem_euclid(m).gcd(&m), 1);
        let mut p = vec![Rational::ZERO; m as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = ((k as i64) * j).rem_euclid(m) as usize;
            p[e] += c;
        }
        Self::from_coeffs(self.conductor, p)
    }

    /// Complex conjugation.
    pub fn conj(&self) -> CycNum {
        self.galois(-1)
    }

    /// Returns `k` with `self = ζ_L^k`, `L = lcm(2, m)`, when the element is a root of unity.
    pub fn root_of_unity_exponent(&self) -> Option<(u32, u32)> {
        let l = self.conductor.lcm(&2);
        let target = self.embed(l).ok()?;
        (0..l).find_map(|k| {
            if CycNum::root_of_unity(l, k as i64) == target {
                Some((l, k))
            } else {
                None
            }
        })
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(Rational::is_zero) {
        p.pop();
    }
    p
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead_inv = recip(&b[db]);
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (vec![Rational::ZERO], rem);
    }
    let mut quot = vec![Rational::ZERO; rem.len() - db];
    for j in (db..rem.len()).rev() {
        if rem[j].is_zero() {
            continue;
        }
        let c = &rem[j] * &lead_inv;
        for (i, bc) in b.iter().enumerate() {
            let t = &c * bc;
            rem[j - db + i] -= t;
        }
        quot[j - db] = c;
    }
    rem.truncate(db.max(1));
    (trim(quot), trim(rem))
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let zero = Rational::ZERO;
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

fn is_zero_poly(p: &[Rational]) -> bool {
    p.iter().all(Rational::is_zero)
}

/// Inverse of `a` modulo the irreducible `m`, by the extended Euclidean algorithm.
fn poly_inverse_mod(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
    let (mut r0, mut r1) = (m.to_vec(), poly_divrem(a, m).1);
    let (mut t0, mut t1) = (vec![Rational::ZERO], vec![Rational::ONE]);
    while !is_zero_poly(&r1) {
        let (q, r) = poly_divrem(&r0, &r1);
        let t2 = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t2);
    }
    // r0 is a nonzero constant since m is irreducible and a is nonzero mod m.
    let c = recip(&r0[0]);
    t0.iter().map(|t| t * &c).collect()
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&CycNum> for &CycNum {
            type Output = CycNum;
            /// Panics on conductor mismatch (or division by zero); use the `checked_*` form
            /// when operands come from untrusted input.
            fn $method(self, rhs: &CycNum) -> CycNum {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{}", e))
            }
        }
        impl $trait<CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

fn render_rational(q: &Rational) -> String {
    if q.denominator() == &UBig::ONE {
        q.numerator().to_string()
    } else {
        format!("{}/{}", q.numerator(), q.denominator())
    }
}

impl CycNum {
    /// Number of nonzero power-basis terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Display for CycNum {
    /// Canonical text: `3/4`, `-1`, `1+z4`, `-1/2+3·z3^2`; `z<m>` denotes `ζ_m`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.sign() == Sign::Negative;
            let mag = c.clone().abs();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let root = match k {
                0 => None,
                1 => Some(format!("z{}", self.conductor)),
                _ => Some(format!("z{}^{}", self.conductor, k)),
            };
            match root {
                None => write!(f, "{}", render_rational(&mag))?,
                Some(r) if mag.is_one() => write!(f, "{}", r)?,
                Some(r) => write!(f, "{}·{}", render_rational(&mag), r)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum<{}>({})", self.conductor, self)
    }
}
