//! Ring towers `R -> A`.
//!
//! A tower describes a finite-type algebra `A = R[x..] / I` over the base
//! `R = Q[y..]`: the variable universe carries the split into base and fiber
//! blocks, and `relations` generates the ideal `I`. A tower with several
//! fiber blocks arises from tensor products, where each factor keeps its own
//! renamed copy of the fiber coordinates.

use crate::polynomial::Polynomial;
use crate::variable::{Block, VarId, VarSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerError {
    /// Auxiliary variables are internal to the engine and cannot appear in a
    /// tower universe.
    AuxInUniverse(String),
    /// A relation has no variables, i.e. is a non-zero constant; the algebra
    /// would collapse to zero in a way better stated explicitly.
    ConstantRelation,
}

impl fmt::Display for TowerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerError::AuxInUniverse(n) => {
                write!(f, "auxiliary variable `{n}` not allowed in a ring tower")
            }
            TowerError::ConstantRelation => write!(f, "relation is a non-zero constant"),
        }
    }
}

/// `A = Q[base][fiber] / (relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingTower {
    vars: VarSet,
    relations: Vec<Polynomial>,
}

impl RingTower {
    pub fn new(vars: VarSet, relations: Vec<Polynomial>) -> Result<Self, TowerError> {
        if let Some((_, v)) = vars.iter().find(|(_, v)| v.block == Block::Aux) {
            return Err(TowerError::AuxInUniverse(v.name.clone()));
        }
        let mut kept = Vec::new();
        for r in relations {
            if r.is_zero() {
                continue;
            }
            if r.is_constant() {
                return Err(TowerError::ConstantRelation);
            }
            if !kept.contains(&r) {
                kept.push(r);
            }
        }
        Ok(RingTower {
            vars,
            relations: kept,
        })
    }

    /// A polynomial ring `Q[base][fiber]` with no relations.
    pub fn polynomial(vars: VarSet) -> Result<Self, TowerError> {
        Self::new(vars, Vec::new())
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn n_base(&self) -> usize {
        self.vars.n_base()
    }

    pub fn base_ids(&self) -> Vec<VarId> {
        self.vars.base_ids()
    }

    pub fn fiber_blocks(&self) -> Vec<Block> {
        self.vars.fiber_blocks()
    }

    /// True when the base coordinate names agree in order; towers can only be
    /// tensored over a shared base.
    pub fn same_base(&self, other: &RingTower) -> bool {
        let a: Vec<&str> = self.base_ids().iter().map(|id| self.vars.name(*id)).collect();
        let b: Vec<&str> = other
            .base_ids()
            .iter()
            .map(|id| other.vars.name(*id))
            .collect();
        a == b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::Polynomial;
    use crate::variable::Variable;
    use alloc::vec;

    #[test]
    fn constructor_filters_and_validates() {
        let vs = VarSet::new(vec![
            Variable::new("y", Block::Base),
            Variable::new("x", Block::Fiber(1)),
        ])
        .unwrap();
        let x = Polynomial::variable(VarId(1), 2);
        let t = RingTower::new(vs.clone(), vec![Polynomial::zero(), x.clone(), x.clone()]).unwrap();
        assert_eq!(t.relations().len(), 1);
        assert_eq!(t.n_base(), 1);
        assert_eq!(t.fiber_blocks(), vec![Block::Fiber(1)]);

        let c = Polynomial::one(2);
        assert_eq!(
            RingTower::new(vs.clone(), vec![c]).unwrap_err(),
            TowerError::ConstantRelation
        );

        let with_aux = VarSet::new(vec![
            Variable::new("y", Block::Base),
            Variable::new("t", Block::Aux),
        ])
        .unwrap();
        assert!(matches!(
            RingTower::polynomial(with_aux),
            Err(TowerError::AuxInUniverse(_))
        ));
    }

    #[test]
    fn base_compatibility() {
        let a = RingTower::polynomial(
            VarSet::new(vec![
                Variable::new("y1", Block::Base),
                Variable::new("u", Block::Fiber(1)),
            ])
            .unwrap(),
        )
        .unwrap();
        let b = RingTower::polynomial(
            VarSet::new(vec![
                Variable::new("y1", Block::Base),
                Variable::new("v", Block::Fiber(1)),
            ])
            .unwrap(),
        )
        .unwrap();
        let c = RingTower::polynomial(
            VarSet::new(vec![Variable::new("z", Block::Base)]).unwrap(),
        )
        .unwrap();
        assert!(a.same_base(&b));
        assert!(!a.same_base(&c));
    }
}
