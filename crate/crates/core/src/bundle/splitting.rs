//! Splitting type by an `h⁰` scan, and explicit model isomorphisms `⊕O(d_j) → E`.

use std::collections::BTreeMap;

use crate::bundle::{SplittingType, VectorBundle};
use crate::error::{Error, Result};
use crate::exactalg::{CycNum, LaurentMatrix, LaurentPoly, Matrix};

/// Values `f(k) = h⁰(E(k))` on the scanned window, which starts where `f` vanishes and ends
/// where `f(k) − f(k−1) = r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H0Profile {
    pub rank: usize,
    pub values: BTreeMap<i32, usize>,
}

impl H0Profile {
    /// `f(k) − f(k−1) = #{i : n_i ≥ −k}` for every scanned `k` past the first.
    pub fn differences(&self) -> Vec<(i32, i64)> {
        self.values
            .iter()
            .zip(self.values.iter().skip(1))
            .map(|((_, a), (&k, b))| (k, *b as i64 - *a as i64))
            .collect()
    }

    /// Nondecreasing differences with values in `[0, r]`.
    pub fn is_consistent(&self) -> bool {
        let diffs = self.differences();
        diffs.iter().all(|&(_, d)| d >= 0 && d <= self.rank as i64)
            && diffs.windows(2).all(|w| w[0].1 <= w[1].1)
    }
}

/// An isomorphism `Ψ` from the model `⊕O(d_j)` onto a bundle, in the `0`-chart frame:
/// columns of `Ψ` are the `s₀`-parts of sections of `E(−d_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelIso {
    pub model: SplittingType,
    pub psi: LaurentMatrix,
}

impl ModelIso {
    pub fn model_transition(&self) -> LaurentMatrix {
        LaurentMatrix::diag_z_pows(self.psi.conductor(), self.model.degrees())
    }

    /// Checks both regularity certificates against `bundle`.
    pub fn certifies(&self, bundle: &VectorBundle) -> Result<bool> {
        bundle.is_model_frame(self.model.degrees(), &self.psi)
    }
}

fn ceil_div(a: i32, b: i32) -> i32 {
    let q = a.div_euclid(b);
    if a.rem_euclid(b) == 0 {
        q
    } else {
        q + 1
    }
}

impl VectorBundle {
    /// The `h⁰` profile, scanning twists outward from `−⌈deg/rank⌉`.
    pub fn h0_profile(&self) -> H0Profile {
        let r = self.rank();
        let mut values = BTreeMap::new();
        let f = |k: i32, values: &mut BTreeMap<i32, usize>| -> usize {
            *values.entry(k).or_insert_with(|| self.h0(k))
        };
        let start = -ceil_div(self.degree(), r as i32);
        let mut low = start;
        while f(low, &mut values) > 0 {
            low -= 1;
        }
        let mut k = low + 1;
        loop {
            let now = f(k, &mut values);
            let before = f(k - 1, &mut values);
            if now >= before + r {
                break;
            }
            k += 1;
        }
        let high = k;
        values.retain(|&x, _| x >= low && x <= high);
        H0Profile { rank: r, values }
    }

    /// The Grothendieck splitting type, recovered from `h⁰(E(k)) = Σ max(0, n_i + k + 1)`.
    pub fn splitting_type(&self) -> Result<SplittingType> {
        let profile = self.h0_profile();
        if !profile.is_consistent() {
            return Err(Error::InternalInconsistency(format!(
                "h0 differences {:?} are not monotone in [0, {}]",
                profile.differences(),
                profile.rank
            )));
        }
        let diffs = profile.differences();
        let mut degrees = Vec::with_capacity(self.rank());
        let mut prev = 0i64;
        for &(k, d) in &diffs {
            for _ in 0..(d - prev) {
                degrees.push(-k);
            }
            prev = d;
        }
        let t = SplittingType::new(degrees);
        if t.rank() != self.rank() || t.total_degree() != self.degree() {
            return Err(Error::InternalInconsistency(format!(
                "recovered {} does not account for rank {} and degree {}",
                t,
                self.rank(),
                self.degree()
            )));
        }
        Ok(t)
    }

    /// An explicit isomorphism from `⊕O(d_j)` (degrees descending) onto the bundle.
    ///
    /// Writes `w^N·T(1/w)` as a polynomial matrix over `K[w]` and column-reduces it by
    /// unimodular column operations until the leading-coefficient matrix is invertible. The
    /// reduced matrix `W̃` with column degrees `δ_j` gives `T(z) = A(z)·diag(z^{N−δ_j})·B(1/z)`
    /// with `A(z) = W̃(1/z)·diag(z^{δ_j})` invertible over `K[z]`, so `Ψ = A`.
    pub fn model_isomorphism(&self) -> Result<ModelIso> {
        let m = self.conductor();
        let r = self.rank();
        let t = self.transition();
        let top = t.max_exp().unwrap_or(0);
        let one = CycNum::one(m);
        let mut w = t.substitute(&one, -1)?.shift(top);
        let mut budget = (r as i64) * (top as i64 - t.min_exp().unwrap_or(0) as i64 + 1) + 1;
        loop {
            let degs: Vec<i32> = (0..r)
                .map(|j| column_degree(&w, j))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::InternalInconsistency("zero column".into()))?;
            let lead = Matrix::from_fn(m, r, r, |i, j| w.get(i, j).coeff(degs[j]));
            let kernel = lead.kernel();
            let Some(v) = kernel.into_iter().next() else {
                return self.finish_model(&w, &degs, top);
            };
            budget -= 1;
            if budget < 0 {
                return Err(Error::SearchExhausted(
                    "column reduction did not terminate".into(),
                ));
            }
            let support: Vec<usize> = (0..r).filter(|&j| !v[j].is_zero()).collect();
            let p = *support
                .iter()
                .max_by_key(|&&j| (degs[j], j))
                .expect("nonzero kernel vector");
            let vp_inv = v[p].inv()?;
            let mut col: Vec<LaurentPoly> = vec![LaurentPoly::zero(m); r];
            for &j in &support {
                let factor = LaurentPoly::monomial(&v[j] * &vp_inv, degs[p] - degs[j]);
                for (i, c) in col.iter_mut().enumerate() {
                    *c = &*c + &(w.get(i, j) * &factor);
                }
            }
            for (i, c) in col.into_iter().enumerate() {
                w.set(i, p, c);
            }
        }
    }

    fn finish_model(&self, w: &LaurentMatrix, degs: &[i32], top: i32) -> Result<ModelIso> {
        let m = self.conductor();
        let r = self.rank();
        let one = CycNum::one(m);
        let a = w.substitute(&one, -1)?;
        let mut a = LaurentMatrix::from_fn(m, r, r, |i, j| a.get(i, j).shift(degs[j]));
        let mut order: Vec<usize> = (0..r).collect();
        order.sort_by_key(|&j| degs[j]);
        a = a.permute_columns(&order);
        let model = SplittingType::new(order.iter().map(|&j| top - degs[j]).collect());
        let iso = ModelIso { model, psi: a };
        if !iso.certifies(self)? {
            return Err(Error::InternalInconsistency(
                "column-reduced frame failed its regularity certificate".into(),
            ));
        }
        Ok(iso)
    }
}

fn column_degree(w: &LaurentMatrix, j: usize) -> Option<i32> {
    (0..w.rows()).filter_map(|i| w.get(i, j).max_exp()).max()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(e: i32) -> LaurentPoly {
        LaurentPoly::z_pow(1, e)
    }

    fn jordan() -> VectorBundle {
        VectorBundle::new(
            LaurentMatrix::from_rows(1, vec![vec![z(1), z(0)], vec![LaurentPoly::zero(1), z(1)]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn splitting_types() {
        assert_eq!(
            VectorBundle::trivial(1, 3).splitting_type().unwrap().degrees(),
            &[0, 0, 0]
        );
        assert_eq!(
            VectorBundle::split(1, &[3, -1])
                .splitting_type()
                .unwrap()
                .degrees(),
            &[3, -1]
        );
        // h0(E) = 4, h0(E(-1)) = 2, h0(E(-2)) = 0 forces {1, 1}.
        let t = jordan().splitting_type().unwrap();
        assert_eq!(t.degrees(), &[1, 1]);
        assert_eq!(t.to_string(), "{1,1}");
    }

    #[test]
    fn model_isomorphisms() {
        let iso = VectorBundle::line(1, 4).model_isomorphism().unwrap();
        assert!(iso.psi.is_identity());
        let iso = VectorBundle::split(1, &[-2, 3]).model_isomorphism().unwrap();
        assert_eq!(iso.model.degrees(), &[3, -2]);
        let iso = jordan().model_isomorphism().unwrap();
        assert_eq!(iso.model.degrees(), &[1, 1]);
        assert!(iso.certifies(&jordan()).unwrap());
        assert!(iso.psi.unit_monomial_det().is_ok());
    }

    #[test]
    fn removable_extension_class() {
        // The off-diagonal z is cleared by a column operation over K[1/z].
        let e = VectorBundle::new(
            LaurentMatrix::from_rows(1, vec![vec![z(2), z(1)], vec![LaurentPoly::zero(1), z(0)]]).unwrap(),
        )
        .unwrap();
        assert_eq!(e.splitting_type().unwrap().degrees(), &[2, 0]);
        assert_eq!(e.model_isomorphism().unwrap().model.degrees(), &[2, 0]);
    }
}
