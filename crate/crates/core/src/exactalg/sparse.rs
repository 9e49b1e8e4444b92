use std::collections::BTreeMap;

use super::CycNum;

/// A sparse row: `(column, value)` pairs, columns strictly increasing, values nonzero.
pub type SparseRow = Vec<(usize, CycNum)>;

/// Incremental row-echelon form for sparse systems.
///
/// Each inserted row is reduced against the stored pivots (keyed by leading column) and kept
/// when a nonzero remainder survives. Banded systems such as the section equations stay banded,
/// so the cost is proportional to the band rather than to the full width.
#[derive(Clone, Debug)]
pub struct SparseEchelon {
    conductor: u32,
    cols: usize,
    /// Leading column ↦ row normalized to a leading one.
    pivots: BTreeMap<usize, SparseRow>,
}

fn axpy(target: &SparseRow, factor: &CycNum, source: &SparseRow) -> SparseRow {
    // target − factor·source
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut a, mut b) = (target.iter().peekable(), source.iter().peekable());
    loop {
        match (a.peek(), b.peek()) {
            (Some((ca, va)), Some((cb, vb))) => {
                if ca < cb {
                    out.push((*ca, va.clone()));
                    a.next();
                } else if cb < ca {
                    out.push((*cb, -&(factor * vb)));
                    b.next();
                } else {
                    let v = va - &(factor * vb);
                    if !v.is_zero() {
                        out.push((*ca, v));
                    }
                    a.next();
                    b.next();
                }
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                a.next();
            }
            (None, Some((cb, vb))) => {
                out.push((*cb, -&(factor * vb)));
                b.next();
            }
            (None, None) => break,
        }
    }
    out
}

impl SparseEchelon {
    pub fn new(conductor: u32, cols: usize) -> Self {
        SparseEchelon {
            conductor,
            cols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds a row (entries in any order; zeros are dropped). Returns whether the rank grew.
    pub fn insert(&mut self, row: impl IntoIterator<Item = (usize, CycNum)>) -> bool {
        let mut entries: Vec<(usize, CycNum)> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        entries.sort_by_key(|(c, _)| *c);
        let mut merged: SparseRow = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            match merged.last_mut() {
                Some((lc, lv)) if *lc == c => *lv = &*lv + &v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        let mut row = merged;
        // Reduce every entry that sits on a pivot column so the remainder's leading column is
        // new; later entries are reduced only at their leading position.
        while let Some((lead, lv)) = row.first().cloned() {
            match self.pivots.get(&lead) {
                Some(p) => row = axpy(&row, &lv, p),
                None => {
                    let inv = lv.inv().expect("nonzero leading entry");
                    let normalized: SparseRow = row.into_iter().map(|(c, v)| (c, &v * &inv)).collect();
                    self.pivots.insert(lead, normalized);
                    return true;
                }
            }
        }
        false
    }

    /// Basis of the right kernel, one vector per free column (1 there, 0 on other free columns).
    pub fn kernel(&self) -> Vec<Vec<CycNum>> {
        let m = self.conductor;
        // Back-substitute bottom-up so every pivot row is free of later pivot columns.
        let mut reduced: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for (&lead, row) in self.pivots.iter().rev() {
            let mut r = row.clone();
            let mut idx = 1;
            while idx < r.len() {
                let (c, v) = r[idx].clone();
                if let Some(p) = reduced.get(&c) {
                    r = axpy(&r, &v, p);
                } else {
                    idx += 1;
                }
            }
            reduced.insert(lead, r);
        }
        (0..self.cols)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|free| {
                let mut v = vec![CycNum::zero(m); self.cols];
                v[free] = CycNum::one(m);
                for (&lead, row) in &reduced {
                    if let Some((_, x)) = row.iter().find(|(c, _)| *c == free) {
                        v[lead] = -x;
                    }
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Matrix;

    #[test]
    fn agrees_with_dense_elimination() {
        let rows: [&[i64]; 4] = [
            &[1, 2, 0, 3, 0],
            &[0, 0, 1, 1, 0],
            &[2, 4, 1, 7, 0],
            &[0, 1, 0, 0, 5],
        ];
        let dense = Matrix::from_i64(1, &rows);
        let mut sp = SparseEchelon::new(1, 5);
        for r in rows {
            sp.insert(r.iter().enumerate().map(|(c, &v)| (c, CycNum::from_i64(1, v))));
        }
        assert_eq!(sp.rank(), dense.rank());
        let k = sp.kernel();
        assert_eq!(k.len(), 5 - dense.rank());
        for v in &k {
            assert!(dense.mul_vec(v).iter().all(CycNum::is_zero));
        }
    }
}
