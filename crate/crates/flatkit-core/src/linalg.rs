//! Sparse exact Gaussian elimination over `Q` with combination tracking.
//!
//! Columns are sparse vectors indexed by abstract row numbers. The
//! [`Echelon`] accumulates independent columns as pivots, each remembering
//! how it was combined from the inserted originals, so that dependencies come
//! out as explicit exact linear combinations. This is the workhorse of the
//! torsion oracle: rows are monomials of a free module, columns are relation
//! multiples and candidate witnesses.

use crate::polynomial::Coef;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_traits::{One, Zero};

/// Sparse column: `(row, coefficient)` pairs, sorted by row, no zeros.
pub type SparseVec = Vec<(usize, Coef)>;

/// `a + c * b` for sparse columns.
pub fn add_scaled(a: &SparseVec, c: &Coef, b: &SparseVec) -> SparseVec {
    let mut out = SparseVec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut j = 0;
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            core::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                let v = c * &b[j].1;
                if !v.is_zero() {
                    out.push((b[j].0, v));
                }
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                let v = &a[i].1 + &(c * &b[j].1);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for (r, v) in &b[j..] {
        let v = c * v;
        if !v.is_zero() {
            out.push((*r, v));
        }
    }
    out
}

struct PivotEntry {
    /// Normalized column: coefficient 1 at the pivot row, which is its
    /// smallest row index.
    col: SparseVec,
    /// The pivot as a combination of inserted columns, by tag.
    provenance: SparseVec,
}

/// Outcome of inserting a column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    Independent,
    /// The column equals the returned combination of previously inserted
    /// columns (by tag).
    Dependent { combination: SparseVec },
}

#[derive(Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, PivotEntry>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon {
            pivots: BTreeMap::new(),
        }
    }

    pub fn pivot_count(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `col` against the pivots. Returns `(residue, combination)`
    /// with `col = combination-of-inserted + residue`; the residue is empty
    /// exactly when `col` lies in the span of the inserted columns.
    pub fn reduce(&self, mut col: SparseVec) -> (SparseVec, SparseVec) {
        let mut comb: SparseVec = Vec::new();
        while let Some((row, coef)) = col.first().cloned() {
            let Some(p) = self.pivots.get(&row) else {
                break;
            };
            let neg = -coef.clone();
            col = add_scaled(&col, &neg, &p.col);
            comb = add_scaled(&comb, &coef, &p.provenance);
        }
        (col, comb)
    }

    /// Inserts a column under a caller-chosen tag. Tags must be distinct.
    pub fn insert(&mut self, col: SparseVec, tag: usize) -> Insertion {
        let (residue, comb) = self.reduce(col);
        if residue.is_empty() {
            return Insertion::Dependent { combination: comb };
        }
        let lc = residue[0].1.clone();
        let row = residue[0].0;
        let inv = Coef::one() / lc;
        let norm: SparseVec = residue
            .iter()
            .map(|(r, c)| (*r, c * &inv))
            .collect();
        // pivot = (col - comb·inserted) / lc, so provenance is
        // tag/lc - comb/lc.
        let mut provenance: SparseVec = alloc::vec![(tag, inv.clone())];
        let neg_inv = -inv;
        provenance = add_scaled(&provenance, &neg_inv, &comb);
        provenance.sort_by_key(|(t, _)| *t);
        self.pivots.insert(
            row,
            PivotEntry {
                col: norm,
                provenance,
            },
        );
        Insertion::Independent
    }
}
