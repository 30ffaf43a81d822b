//! Elements of free modules `S^b`.

use crate::polynomial::{Coef, Polynomial};
use crate::monomial::Monomial;
use crate::variable::{VarId, VarSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// An element of a free module, one polynomial entry per component.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeVector {
    entries: Vec<Polynomial>,
}

impl FreeVector {
    pub fn new(entries: Vec<Polynomial>) -> Self {
        debug_assert!(!entries.is_empty());
        FreeVector { entries }
    }

    pub fn zero(rank: usize) -> Self {
        FreeVector {
            entries: alloc::vec![Polynomial::zero(); rank],
        }
    }

    pub fn basis(rank: usize, index: usize, nvars: usize) -> Self {
        let mut v = Self::zero(rank);
        v.entries[index] = Polynomial::one(nvars);
        v
    }

    /// Wraps a ring element as a rank-1 vector.
    pub fn scalar(p: Polynomial) -> Self {
        FreeVector {
            entries: alloc::vec![p],
        }
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize) -> &Polynomial {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Polynomial> {
        self.entries
    }

    /// The underlying ring element of a rank-1 vector.
    pub fn expect_scalar(&self) -> &Polynomial {
        debug_assert_eq!(self.entries.len(), 1);
        &self.entries[0]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.entries.iter().filter_map(Polynomial::total_degree).max()
    }

    pub fn add(&self, other: &FreeVector) -> FreeVector {
        debug_assert_eq!(self.rank(), other.rank());
        FreeVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &FreeVector) -> FreeVector {
        debug_assert_eq!(self.rank(), other.rank());
        FreeVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> FreeVector {
        FreeVector {
            entries: self.entries.iter().map(Polynomial::neg).collect(),
        }
    }

    pub fn scale_poly(&self, p: &Polynomial) -> FreeVector {
        FreeVector {
            entries: self.entries.iter().map(|e| e.mul(p)).collect(),
        }
    }

    pub fn scale(&self, c: &Coef) -> FreeVector {
        FreeVector {
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coef) -> FreeVector {
        FreeVector {
            entries: self.entries.iter().map(|e| e.mul_term(m, c)).collect(),
        }
    }

    pub fn map_entries(&self, f: impl Fn(&Polynomial) -> Polynomial) -> FreeVector {
        FreeVector {
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Renames variables in every entry.
    pub fn map_vars(&self, nvars_out: usize, f: impl Fn(VarId) -> VarId + Copy) -> FreeVector {
        self.map_entries(|p| p.map_vars(nvars_out, f))
    }

    pub fn supported_within(&self, keep: impl Fn(VarId) -> bool + Copy) -> bool {
        self.entries.iter().all(|p| p.supported_within(keep))
    }

    /// Appends zero entries up to `rank`.
    pub fn padded(&self, rank: usize) -> FreeVector {
        debug_assert!(rank >= self.rank());
        let mut entries = self.entries.clone();
        entries.resize(rank, Polynomial::zero());
        FreeVector { entries }
    }

    pub fn display<'a>(&'a self, vars: &'a VarSet) -> VectorDisplay<'a> {
        VectorDisplay { vec: self, vars }
    }

    pub fn to_display_string(&self, vars: &VarSet) -> String {
        use alloc::string::ToString;
        self.display(vars).to_string()
    }
}

pub struct VectorDisplay<'a> {
    vec: &'a FreeVector,
    vars: &'a VarSet,
}

impl fmt::Display for VectorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vec.rank() == 1 {
            return write!(f, "{}", self.vec.entries[0].display(self.vars));
        }
        write!(f, "[")?;
        for (i, e) in self.vec.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", e.display(self.vars))?;
        }
        write!(f, "]")
    }
}
