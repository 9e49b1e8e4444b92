use crate::bundle::VectorBundle;
use crate::exactalg::{CycNum, LaurentPoly, SparseEchelon};

/// A global section `(s₀(z), s_∞(w))` with `s₀(z) = T(z)·s_∞(1/z)`, both polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    /// Polynomials in `w = 1/z` (nonnegative exponents of `w`).
    pub s_infty: Vec<LaurentPoly>,
    /// Polynomials in `z`.
    pub s_zero: Vec<LaurentPoly>,
}

/// The linear system whose kernel is `H⁰(E(k))`, in echelon form.
struct SectionSystem {
    /// Coefficients of `s_∞` are indexed `(j, l) ↦ j·r + l` for `w^j` in component `l`.
    echelon: SparseEchelon,
    max_w_degree: usize,
}

impl VectorBundle {
    /// Largest `w`-degree a section of `E(k)` can have, or `None` when `H⁰(E(k)) = 0`.
    ///
    /// From `s_∞(1/z) = T_k^{-1}·s₀(z)` with `s₀` polynomial, every exponent of `s_∞(1/z)` is at
    /// least `min_exp(T_k^{-1})`; and `s₀ = T_k·s_∞(1/z)` has degree at most `max_exp(T_k)`.
    fn section_degree_bound(&self, k: i32) -> Option<usize> {
        let hi = self.transition().max_exp()? + k;
        let lo_inv = self.inverse_transition().min_exp()? - k;
        if hi < 0 || lo_inv > 0 {
            None
        } else {
            Some((-lo_inv) as usize)
        }
    }

    fn section_system(&self, k: i32) -> Option<SectionSystem> {
        let b = self.section_degree_bound(k)?;
        let r = self.rank();
        let m = self.conductor();
        let t = self.transition();
        let mut echelon = SparseEchelon::new(m, r * (b + 1));
        for i in 0..r {
            let lo = t.row(i).iter().filter_map(LaurentPoly::min_exp).min();
            let Some(lo) = lo else { continue };
            // Coefficient of z^e in row i of z^k·T(z)·Σ_j c_j z^{-j}, for every e < 0.
            for e in (lo + k - b as i32)..0 {
                let mut row = Vec::new();
                for (l, entry) in t.row(i).iter().enumerate() {
                    for (exp, c) in entry.terms() {
                        let j = exp + k - e;
                        if j >= 0 && (j as usize) <= b {
                            row.push((j as usize * r + l, c.clone()));
                        }
                    }
                }
                echelon.insert(row);
            }
        }
        Some(SectionSystem {
            echelon,
            max_w_degree: b,
        })
    }

    /// `dim H⁰(E ⊗ O(k))`.
    pub fn h0(&self, k: i32) -> usize {
        match self.section_system(k) {
            None => 0,
            Some(sys) => sys.echelon.cols() - sys.echelon.rank(),
        }
    }

    /// A basis of `H⁰(E)`.
    pub fn global_sections(&self) -> Vec<Section> {
        self.twisted_sections(0)
    }

    /// A basis of `H⁰(E ⊗ O(k))`, as sections of the twisted bundle.
    pub fn twisted_sections(&self, k: i32) -> Vec<Section> {
        let Some(sys) = self.section_system(k) else {
            return Vec::new();
        };
        let r = self.rank();
        let m = self.conductor();
        let twisted = self.transition().shift(k);
        sys.echelon
            .kernel()
            .into_iter()
            .map(|v| {
                let s_infty: Vec<LaurentPoly> = (0..r)
                    .map(|l| {
                        LaurentPoly::from_terms(
                            m,
                            (0..=sys.max_w_degree).map(|j| (j as i32, v[j * r + l].clone())),
                        )
                        .expect("single conductor")
                    })
                    .collect();
                let s_zero = (0..r)
                    .map(|i| {
                        let mut acc = LaurentPoly::zero(m);
                        for (l, s) in s_infty.iter().enumerate() {
                            let flipped = s.substitute(&CycNum::one(m), -1).expect("unit");
                            acc = acc + twisted.get(i, l) * &flipped;
                        }
                        acc
                    })
                    .collect();
                Section { s_infty, s_zero }
            })
            .collect()
    }
}
