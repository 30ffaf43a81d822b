//! Dense exponent vectors.
//!
//! A monomial stores one exponent per variable of its universe. The variable
//! count is implicit in the vector length; mixing monomials from different
//! universes is a logic error and guarded by debug assertions.

use crate::variable::VarId;
use alloc::vec;
use alloc::vec::Vec;

/// A power product, stored as a dense exponent vector.
///
/// The derived `Ord` (lexicographic on the exponent vector) is a structural
/// order used for canonical storage and deduplication only; term orders for
/// Groebner computations live in [`crate::order`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    pub fn var(id: VarId, nvars: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[id.0] = 1;
        Monomial { exps }
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exp(&self, id: VarId) -> u32 {
        self.exps[id.0]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// Sum of the exponents of the given variables.
    pub fn degree_on(&self, ids: &[VarId]) -> u32 {
        ids.iter().map(|id| self.exps[id.0]).sum()
    }

    /// Non-zero entries as `(variable, exponent)`, in variable order.
    pub fn support(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (VarId(i), e))
    }

    pub fn uses(&self, id: VarId) -> bool {
        self.exps[id.0] > 0
    }

    /// True when every variable with a positive exponent satisfies `keep`.
    pub fn supported_within(&self, keep: impl Fn(VarId) -> bool) -> bool {
        self.support().all(|(id, _)| keep(id))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial { exps })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn is_coprime_with(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Copies the exponents into a universe with `nvars_out` variables using
    /// the position map `f`. Distinct variables must stay distinct.
    pub fn map_vars(&self, nvars_out: usize, f: impl Fn(VarId) -> VarId) -> Monomial {
        let mut exps = vec![0; nvars_out];
        for (id, e) in self.support() {
            let t = f(id);
            debug_assert_eq!(exps[t.0], 0);
            exps[t.0] = e;
        }
        Monomial { exps }
    }

    /// Restriction to the variables satisfying `keep`; other exponents are
    /// zeroed, the universe stays the same.
    pub fn restricted(&self, keep: impl Fn(VarId) -> bool) -> Monomial {
        let mut exps = self.exps.clone();
        for (i, e) in exps.iter_mut().enumerate() {
            if !keep(VarId(i)) {
                *e = 0;
            }
        }
        Monomial { exps }
    }
}
