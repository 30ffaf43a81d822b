//! Finitely presented modules and their tensor powers over the base.
//!
//! A presentation is `F = S^rank / N` for `S` the polynomial ring of a
//! [`RingTower`], where `N` is generated by the user-supplied rows plus the
//! folded ring relations `g * e_i` for every tower relation `g` and basis
//! vector `e_i`. Tensor products over the base `R` are formed syntactically:
//! the fiber blocks of each factor are renamed into disjoint blocks of one
//! combined universe, the ambient rank is the product of the factor ranks,
//! and each factor relation is spread over every choice of basis vectors of
//! the other factors.

use crate::groebner::{groebner_basis, GroebnerBasis};
use crate::limits::{Budget, EngineError};
use crate::order::ModuleOrder;
use crate::polynomial::Polynomial;
use crate::tower::RingTower;
use crate::variable::{Block, VarId, VarSet, Variable};
use crate::vector::FreeVector;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresentationError {
    ZeroRank,
    RowRankMismatch { expected: usize, found: usize },
}

impl fmt::Display for PresentationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresentationError::ZeroRank => write!(f, "presentation rank must be positive"),
            PresentationError::RowRankMismatch { expected, found } => {
                write!(f, "relation row has {found} entries, presentation has rank {expected}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TensorError {
    NoFactors,
    MixedBase,
    ZeroPower,
}

impl fmt::Display for TensorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TensorError::NoFactors => write!(f, "tensor product needs at least one factor"),
            TensorError::MixedBase => write!(f, "tensor factors must share the base coordinates"),
            TensorError::ZeroPower => write!(f, "tensor power exponent must be positive"),
        }
    }
}

/// `F = S^rank / N`, with `N` spanned by `relations`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    tower: RingTower,
    rank: usize,
    rows: Vec<FreeVector>,
    relations: Vec<FreeVector>,
}

impl ModulePresentation {
    pub fn new(
        tower: RingTower,
        rank: usize,
        rows: Vec<FreeVector>,
    ) -> Result<Self, PresentationError> {
        if rank == 0 {
            return Err(PresentationError::ZeroRank);
        }
        let nv = tower.nvars();
        let mut kept_rows: Vec<FreeVector> = Vec::new();
        for r in rows {
            if r.rank() != rank {
                return Err(PresentationError::RowRankMismatch {
                    expected: rank,
                    found: r.rank(),
                });
            }
            if !r.is_zero() && !kept_rows.contains(&r) {
                kept_rows.push(r);
            }
        }
        let mut relations = kept_rows.clone();
        for g in tower.relations() {
            for i in 0..rank {
                let v = FreeVector::basis(rank, i, nv).scale_poly(g);
                if !relations.contains(&v) {
                    relations.push(v);
                }
            }
        }
        Ok(ModulePresentation {
            tower,
            rank,
            rows: kept_rows,
            relations,
        })
    }

    /// The algebra itself as a module: `F = A`, rank 1, no extra rows.
    pub fn algebra(tower: RingTower) -> Self {
        Self::new(tower, 1, Vec::new()).expect("rank 1 is valid")
    }

    pub fn tower(&self) -> &RingTower {
        &self.tower
    }

    pub fn vars(&self) -> &VarSet {
        self.tower.vars()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The user-supplied rows, without the folded ring relations.
    pub fn rows(&self) -> &[FreeVector] {
        &self.rows
    }

    /// Generators of `N`: rows plus ring relations on every component.
    pub fn relations(&self) -> &[FreeVector] {
        &self.relations
    }

    /// Reduced basis of `N` under the canonical reference order.
    pub fn reduced_relations(
        &self,
        budget: &mut Budget<'_>,
    ) -> Result<GroebnerBasis, EngineError> {
        groebner_basis(
            self.vars(),
            self.rank,
            &self.relations,
            &ModuleOrder::pot_grevlex(),
            budget,
        )
    }

    /// True when every ambient basis vector already lies in `N`.
    pub fn is_zero_module(&self, budget: &mut Budget<'_>) -> Result<bool, EngineError> {
        let gb = self.reduced_relations(budget)?;
        let nv = self.tower.nvars();
        Ok((0..self.rank).all(|i| gb.contains(&FreeVector::basis(self.rank, i, nv))))
    }

    /// `self tensor other` over the base.
    pub fn tensor(&self, other: &ModulePresentation) -> Result<ModulePresentation, TensorError> {
        tensor_many(&[self, other])
    }

    /// The `k`-fold tensor power over the base, formed in one step so the
    /// fiber copies come out labelled 1 through `k`.
    pub fn tensor_power(&self, k: u32) -> Result<ModulePresentation, TensorError> {
        if k == 0 {
            return Err(TensorError::ZeroPower);
        }
        let factors: Vec<&ModulePresentation> = (0..k).map(|_| self).collect();
        tensor_many(&factors)
    }
}

/// Builds renamed fiber names for every factor, using the shortest separator
/// that makes the combined universe collision-free.
fn renamed_fiber_names(
    factors: &[&ModulePresentation],
    base_names: &[String],
) -> Vec<Vec<String>> {
    let mut sep_len = 0usize;
    loop {
        let mut sep = String::new();
        for _ in 0..sep_len {
            sep.push('_');
        }
        let mut all: Vec<String> = base_names.to_vec();
        let mut per_factor: Vec<Vec<String>> = Vec::new();
        for (t, f) in factors.iter().enumerate() {
            let names: Vec<String> = f
                .vars()
                .iter()
                .filter(|(_, v)| v.block.is_fiber())
                .map(|(_, v)| alloc::format!("{}{}{}", v.name, sep, t + 1))
                .collect();
            all.extend(names.iter().cloned());
            per_factor.push(names);
        }
        let unique = (0..all.len()).all(|i| !all[i + 1..].contains(&all[i]));
        if unique {
            return per_factor;
        }
        sep_len += 1;
    }
}

/// Walks every index tuple over `ranks` with the slot `skip` fixed to
/// `fixed`; calls `f` with the full tuple.
fn for_each_tuple(ranks: &[usize], skip: usize, fixed: usize, f: &mut impl FnMut(&[usize])) {
    let mut tuple: Vec<usize> = alloc::vec![0; ranks.len()];
    tuple[skip] = fixed;
    loop {
        f(&tuple);
        // Odometer step over all slots except `skip`.
        let mut pos = ranks.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if pos == skip {
                continue;
            }
            tuple[pos] += 1;
            if tuple[pos] < ranks[pos] {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

fn combined_index(ranks: &[usize], tuple: &[usize]) -> usize {
    let mut idx = 0;
    for (r, i) in ranks.iter().zip(tuple) {
        idx = idx * r + i;
    }
    idx
}

/// Tensor product over the base of any number of presentations.
pub fn tensor_many(
    factors: &[&ModulePresentation],
) -> Result<ModulePresentation, TensorError> {
    let first = *factors.first().ok_or(TensorError::NoFactors)?;
    if factors
        .iter()
        .any(|f| !f.tower().same_base(first.tower()))
    {
        return Err(TensorError::MixedBase);
    }
    if factors.len() == 1 {
        return Ok(first.clone());
    }

    let base_names: Vec<String> = first
        .tower()
        .base_ids()
        .iter()
        .map(|id| String::from(first.vars().name(*id)))
        .collect();
    let fiber_names = renamed_fiber_names(factors, &base_names);

    // Combined universe: shared base, then each factor's fiber blocks with
    // fresh labels, in factor order.
    let mut combined: Vec<Variable> = base_names
        .iter()
        .map(|n| Variable::new(n.clone(), Block::Base))
        .collect();
    let mut maps: Vec<Vec<VarId>> = Vec::new();
    let mut next_label = 1u32;
    for (t, f) in factors.iter().enumerate() {
        let mut map: Vec<VarId> = alloc::vec![VarId(0); f.vars().len()];
        for (pos, id) in f.tower().base_ids().into_iter().enumerate() {
            map[id.0] = VarId(pos);
        }
        let mut fiber_iter = fiber_names[t].iter();
        let mut current_old_label: Option<u32> = None;
        for (id, v) in f.vars().iter() {
            if let Block::Fiber(old_label) = v.block {
                if current_old_label != Some(old_label) {
                    if current_old_label.is_some() {
                        next_label += 1;
                    }
                    current_old_label = Some(old_label);
                }
                let name = fiber_iter.next().expect("one renamed name per fiber var");
                map[id.0] = VarId(combined.len());
                combined.push(Variable::new(name.clone(), Block::Fiber(next_label)));
            }
        }
        if current_old_label.is_some() {
            next_label += 1;
        }
        maps.push(map);
    }
    let combined_vars = VarSet::new(combined).expect("renaming made names unique");
    let nv = combined_vars.len();

    let mut relations: Vec<Polynomial> = Vec::new();
    for (t, f) in factors.iter().enumerate() {
        let map = &maps[t];
        for g in f.tower().relations() {
            relations.push(g.map_vars(nv, |id| map[id.0]));
        }
    }
    let tower = RingTower::new(combined_vars, relations)
        .expect("renamed tower relations stay valid");

    let ranks: Vec<usize> = factors.iter().map(|f| f.rank()).collect();
    let total: usize = ranks.iter().product();
    let mut rows: Vec<FreeVector> = Vec::new();
    for (t, f) in factors.iter().enumerate() {
        let map = &maps[t];
        for row in f.rows() {
            let renamed: Vec<Polynomial> = row
                .entries()
                .iter()
                .map(|p| p.map_vars(nv, |id| map[id.0]))
                .collect();
            for_each_tuple(&ranks, t, 0, &mut |tuple| {
                let mut entries = alloc::vec![Polynomial::zero(); total];
                let mut tuple = tuple.to_vec();
                for (j, p) in renamed.iter().enumerate() {
                    if !p.is_zero() {
                        tuple[t] = j;
                        entries[combined_index(&ranks, &tuple)] = p.clone();
                    }
                }
                rows.push(FreeVector::new(entries));
            });
        }
    }
    Ok(ModulePresentation::new(tower, total, rows).expect("tensor rank is positive"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::Polynomial;
    use alloc::vec;

    fn blowup_algebra() -> ModulePresentation {
        // A = Q[y1, y2][x] / (x*y1 - y2).
        let vs = VarSet::new(vec![
            Variable::new("y1", Block::Base),
            Variable::new("y2", Block::Base),
            Variable::new("x", Block::Fiber(1)),
        ])
        .unwrap();
        let y1 = Polynomial::variable(VarId(0), 3);
        let y2 = Polynomial::variable(VarId(1), 3);
        let x = Polynomial::variable(VarId(2), 3);
        let rel = &(&x * &y1) - &y2;
        ModulePresentation::algebra(RingTower::new(vs, vec![rel]).unwrap())
    }

    fn maximal_ideal_module() -> ModulePresentation {
        // (y1, y2) <= R presented as R^2 / <(y2, -y1)>.
        let vs = VarSet::new(vec![
            Variable::new("y1", Block::Base),
            Variable::new("y2", Block::Base),
        ])
        .unwrap();
        let y1 = Polynomial::variable(VarId(0), 2);
        let y2 = Polynomial::variable(VarId(1), 2);
        let tower = RingTower::polynomial(vs).unwrap();
        ModulePresentation::new(tower, 2, vec![FreeVector::new(vec![y2, y1.neg()])]).unwrap()
    }

    #[test]
    fn folding_ring_relations() {
        let a = blowup_algebra();
        assert_eq!(a.rank(), 1);
        assert!(a.rows().is_empty());
        assert_eq!(a.relations().len(), 1);
    }

    #[test]
    fn tensor_square_renames_disjointly() {
        let a = blowup_algebra();
        let sq = a.tensor_power(2).unwrap();
        let names: Vec<_> = sq.vars().iter().map(|(_, v)| v.name.clone()).collect();
        assert_eq!(names, vec!["y1", "y2", "x1", "x2"]);
        assert_eq!(
            sq.vars().fiber_blocks(),
            vec![Block::Fiber(1), Block::Fiber(2)]
        );
        assert_eq!(sq.rank(), 1);
        let printed: Vec<_> = sq
            .relations()
            .iter()
            .map(|r| r.to_display_string(sq.vars()))
            .collect();
        assert_eq!(printed, vec!["y1*x1 - y2", "y1*x2 - y2"]);
    }

    #[test]
    fn tensor_power_one_is_identity() {
        let a = blowup_algebra();
        let p = a.tensor_power(1).unwrap();
        assert_eq!(p, a);
        assert!(a.tensor_power(0).is_err());
    }

    #[test]
    fn module_square_spreads_rows() {
        let m = maximal_ideal_module();
        let sq = m.tensor_power(2).unwrap();
        assert_eq!(sq.rank(), 4);
        assert_eq!(sq.rows().len(), 4);
        let vs = sq.vars();
        let printed: Vec<_> = sq
            .rows()
            .iter()
            .map(|r| r.to_display_string(vs))
            .collect();
        // Factor-1 row spread over the second slot, then factor-2 over the first.
        assert_eq!(
            printed,
            vec![
                "[y2, 0, -y1, 0]",
                "[0, y2, 0, -y1]",
                "[y2, -y1, 0, 0]",
                "[0, 0, y2, -y1]",
            ]
        );
    }

    #[test]
    fn name_collision_falls_back_to_separator() {
        // Base y1 with fiber named y: the plain scheme would mint a second
        // "y1", so the underscore scheme is used for every copy.
        let vs = VarSet::new(vec![
            Variable::new("y1", Block::Base),
            Variable::new("y", Block::Fiber(1)),
        ])
        .unwrap();
        let a = ModulePresentation::algebra(RingTower::polynomial(vs).unwrap());
        let sq = a.tensor_power(2).unwrap();
        let names: Vec<_> = sq.vars().iter().map(|(_, v)| v.name.clone()).collect();
        assert_eq!(names, vec!["y1", "y_1", "y_2"]);
    }

    #[test]
    fn mixed_bases_rejected() {
        let a = blowup_algebra();
        let other = ModulePresentation::algebra(
            RingTower::polynomial(
                VarSet::new(vec![Variable::new("z", Block::Base)]).unwrap(),
            )
            .unwrap(),
        );
        assert_eq!(a.tensor(&other), Err(TensorError::MixedBase));
    }

    #[test]
    fn zero_module_detection() {
        let vs = VarSet::new(vec![Variable::new("y1", Block::Base)]).unwrap();
        let tower = RingTower::polynomial(vs).unwrap();
        let one_row = FreeVector::scalar(Polynomial::one(1));
        let z = ModulePresentation::new(tower.clone(), 1, vec![one_row]).unwrap();
        let mut bud = Budget::unbounded();
        assert!(z.is_zero_module(&mut bud).unwrap());
        let free = ModulePresentation::algebra(tower);
        assert!(!free.is_zero_module(&mut bud).unwrap());
    }

    #[test]
    fn row_validation() {
        let m = maximal_ideal_module();
        let bad = ModulePresentation::new(
            m.tower().clone(),
            2,
            vec![FreeVector::scalar(Polynomial::one(2))],
        );
        assert_eq!(
            bad,
            Err(PresentationError::RowRankMismatch {
                expected: 2,
                found: 1
            })
        );
    }
}
