//! Derived submodule operations: elimination, intersection, colon,
//! saturation, Krull dimension.
//!
//! The extension tricks (intersection and saturation) adjoin one fresh
//! auxiliary variable, compute a basis under an order whose dominant level
//! kills that variable, keep the elements free of it and project back. Inputs
//! must not already contain auxiliary variables; each operation owns the one
//! it introduces.

use crate::groebner::{groebner_basis, GroebnerBasis};
use crate::limits::{Budget, EngineError};
use crate::order::ModuleOrder;
use crate::polynomial::Polynomial;
use crate::variable::{Block, VarId, VarSet};
use crate::vector::FreeVector;
use alloc::vec::Vec;

/// Generators of `N` intersected with the subring generated by the variables
/// outside the killed blocks: the elements of an elimination basis whose
/// terms avoid the killed variables.
pub fn eliminate_blocks(
    vars: &VarSet,
    rank: usize,
    gens: &[FreeVector],
    kill: &[Block],
    budget: &mut Budget<'_>,
) -> Result<Vec<FreeVector>, EngineError> {
    let order = ModuleOrder::elimination(kill.to_vec());
    let gb = groebner_basis(vars, rank, gens, &order, budget)?;
    let keep = |id: VarId| !kill.contains(&vars.block(id));
    Ok(gb
        .elements
        .into_iter()
        .filter(|v| v.supported_within(keep))
        .collect())
}

/// Rank-1 elimination returning ring elements.
pub fn eliminate_blocks_ring(
    vars: &VarSet,
    gens: &[Polynomial],
    kill: &[Block],
    budget: &mut Budget<'_>,
) -> Result<Vec<Polynomial>, EngineError> {
    let wrapped: Vec<FreeVector> = gens.iter().cloned().map(FreeVector::scalar).collect();
    let out = eliminate_blocks(vars, 1, &wrapped, kill, budget)?;
    Ok(out.into_iter().map(|v| v.expect_scalar().clone()).collect())
}

fn project_from_aux(vars: &VarSet, v: &FreeVector) -> FreeVector {
    // The element is free of the trailing auxiliary variable; dropping the
    // last exponent slot is a plain renaming.
    v.map_vars(vars.len(), |id| id)
}

/// Intersection `N1 cap N2` via the one-variable trick: eliminate `t` from
/// `t*N1 + (1 - t)*N2`.
pub fn intersect(
    vars: &VarSet,
    rank: usize,
    n1: &[FreeVector],
    n2: &[FreeVector],
    budget: &mut Budget<'_>,
) -> Result<Vec<FreeVector>, EngineError> {
    debug_assert!(!vars.has_aux(), "inputs must be free of auxiliary variables");
    let (ext, t) = vars.with_aux("t");
    let nv = ext.len();
    let lift = |v: &FreeVector| v.map_vars(nv, |id| id);
    let tp = Polynomial::variable(t, nv);
    let one_minus_t = Polynomial::one(nv).sub(&tp);
    let mut gens: Vec<FreeVector> = Vec::new();
    for v in n1 {
        gens.push(lift(v).scale_poly(&tp));
    }
    for v in n2 {
        gens.push(lift(v).scale_poly(&one_minus_t));
    }
    let kept = eliminate_blocks(&ext, rank, &gens, &[Block::Aux], budget)?;
    Ok(kept.iter().map(|v| project_from_aux(vars, v)).collect())
}

/// The colon module `(N : m) = { s in S : s*m in N }` for a vector `m`, an
/// ideal of `S`. Computed with one extra ambient component: the submodule of
/// `S^(b+1)` generated by `(n_i, 0)` and `(m, 1)` is intersected with the
/// last component by a position-over-term basis in which that component is
/// least.
pub fn colon(
    vars: &VarSet,
    rank: usize,
    gens: &[FreeVector],
    m: &FreeVector,
    budget: &mut Budget<'_>,
) -> Result<Vec<Polynomial>, EngineError> {
    debug_assert_eq!(m.rank(), rank);
    let mut ext_gens: Vec<FreeVector> = gens.iter().map(|v| v.padded(rank + 1)).collect();
    let mut tagged = m.clone().into_entries();
    tagged.push(Polynomial::one(vars.len()));
    ext_gens.push(FreeVector::new(tagged));
    let gb = groebner_basis(vars, rank + 1, &ext_gens, &ModuleOrder::pot_grevlex(), budget)?;
    let mut out = Vec::new();
    for v in gb.elements {
        if v.entries()[..rank].iter().all(Polynomial::is_zero) {
            out.push(v.entry(rank).clone());
        }
    }
    Ok(out)
}

/// Exact division `p / d` when `d` divides `p`; `None` when it does not.
pub fn divide_exact(p: &Polynomial, d: &Polynomial) -> Option<Polynomial> {
    debug_assert!(!d.is_zero());
    let mut rem = p.clone();
    let mut quot = Polynomial::zero();
    let (dm, dc) = d.display_lead().map(|(m, c)| (m.clone(), c.clone()))?;
    while !rem.is_zero() {
        let (rm, rc) = rem.display_lead().unwrap();
        let m = rm.try_div(&dm)?;
        let c = rc / &dc;
        let t = Polynomial::monomial(m.clone(), c.clone());
        quot = quot.add(&t);
        rem = rem.sub(&d.mul_term(&m, &c));
    }
    Some(quot)
}

/// One colon step by a ring element: `(N : h) = { v : h*v in N }`, computed
/// as `(N cap h*S^b) / h`.
pub fn colon_by_poly(
    vars: &VarSet,
    rank: usize,
    gens: &[FreeVector],
    h: &Polynomial,
    budget: &mut Budget<'_>,
) -> Result<Vec<FreeVector>, EngineError> {
    debug_assert!(!h.is_zero());
    let nv = vars.len();
    let h_basis: Vec<FreeVector> = (0..rank)
        .map(|i| FreeVector::basis(rank, i, nv).scale_poly(h))
        .collect();
    let inter = intersect(vars, rank, gens, &h_basis, budget)?;
    Ok(inter
        .into_iter()
        .map(|v| {
            v.map_entries(|p| {
                divide_exact(p, h).expect("intersection with h*S^b is divisible by h")
            })
        })
        .collect())
}

/// Saturation `(N : h^inf)` via the one-variable trick: adjoin `t`, add the
/// relations `(1 - t*h) e_i`, eliminate `t`.
pub fn saturate(
    vars: &VarSet,
    rank: usize,
    gens: &[FreeVector],
    h: &Polynomial,
    budget: &mut Budget<'_>,
) -> Result<Vec<FreeVector>, EngineError> {
    debug_assert!(!h.is_zero());
    debug_assert!(!vars.has_aux(), "inputs must be free of auxiliary variables");
    if h.is_constant() {
        // Saturating by a unit changes nothing; return the canonical basis.
        let gb = groebner_basis(vars, rank, gens, &ModuleOrder::pot_grevlex(), budget)?;
        return Ok(gb.elements);
    }
    let (ext, t) = vars.with_aux("t");
    let nv = ext.len();
    let lift = |v: &FreeVector| v.map_vars(nv, |id| id);
    let th = Polynomial::variable(t, nv).mul(&h.map_vars(nv, |id| id));
    let one_minus_th = Polynomial::one(nv).sub(&th);
    let mut ext_gens: Vec<FreeVector> = gens.iter().map(lift).collect();
    for i in 0..rank {
        ext_gens.push(FreeVector::basis(rank, i, nv).scale_poly(&one_minus_th));
    }
    let kept = eliminate_blocks(&ext, rank, &ext_gens, &[Block::Aux], budget)?;
    Ok(kept.iter().map(|v| project_from_aux(vars, v)).collect())
}

/// Saturation by iterated colon: repeat `N <- (N : h)` until the chain
/// stabilizes. Agrees with [`saturate`]; kept as an independent route for
/// cross-checking and as a fallback that avoids the extra variable.
pub fn saturate_iterated(
    vars: &VarSet,
    rank: usize,
    gens: &[FreeVector],
    h: &Polynomial,
    budget: &mut Budget<'_>,
) -> Result<Vec<FreeVector>, EngineError> {
    debug_assert!(!h.is_zero());
    if h.is_constant() {
        let gb = groebner_basis(vars, rank, gens, &ModuleOrder::pot_grevlex(), budget)?;
        return Ok(gb.elements);
    }
    let mut current: Vec<FreeVector> = gens.to_vec();
    loop {
        let next = colon_by_poly(vars, rank, &current, h, budget)?;
        let gb_cur = groebner_basis(vars, rank, &current, &ModuleOrder::pot_grevlex(), budget)?;
        if next.iter().all(|v| gb_cur.contains(v)) {
            return Ok(gb_cur.elements);
        }
        current = next;
    }
}

/// Dimension of an affine variety; the empty variety gets its own variant so
/// that the usual convention `dim(empty) = -1` survives in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    EmptyVariety,
    Of(usize),
}

impl Dimension {
    pub fn as_i64(&self) -> i64 {
        match self {
            Dimension::EmptyVariety => -1,
            Dimension::Of(d) => *d as i64,
        }
    }
}

impl core::fmt::Display for Dimension {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.as_i64())
    }
}

/// Krull dimension of `K[ambient] / (gens)`, by the combinatorial rule: the
/// dimension equals the largest cardinality of a variable subset `U` such
/// that no lead monomial of the ideal is supported inside `U`.
///
/// Generators must be supported within the ambient blocks. Subsets are
/// enumerated by bitmask; ambient sizes in this crate stay small (tensor
/// powers of handfuls of variables), and the enumeration is exact.
pub fn krull_dimension(
    vars: &VarSet,
    gens: &[Polynomial],
    ambient: &[Block],
    budget: &mut Budget<'_>,
) -> Result<Dimension, EngineError> {
    let ids: Vec<VarId> = vars.ids_in_blocks(ambient).collect();
    debug_assert!(
        gens.iter()
            .all(|g| g.supported_within(|id| ids.contains(&id))),
        "generators must live in the ambient blocks"
    );
    assert!(ids.len() <= 24, "ambient too large for exact subset search");
    let wrapped: Vec<FreeVector> = gens.iter().cloned().map(FreeVector::scalar).collect();
    let order = ModuleOrder::blocks_grevlex(ambient.to_vec());
    let gb = groebner_basis(vars, 1, &wrapped, &order, budget)?;
    if gb.is_unit_ideal() {
        return Ok(Dimension::EmptyVariety);
    }
    let lead_masks: Vec<u32> = gb
        .working()
        .iter()
        .map(|w| {
            let mut mask = 0u32;
            for (pos, id) in ids.iter().enumerate() {
                if w.lead().mono.uses(*id) {
                    mask |= 1 << pos;
                }
            }
            debug_assert!(mask != 0, "non-unit reduced basis with constant lead");
            mask
        })
        .collect();
    let n = ids.len();
    let mut best = 0usize;
    for subset in 0u32..(1u32 << n) {
        let size = subset.count_ones() as usize;
        if size <= best {
            continue;
        }
        // U is independent iff no lead monomial is fully supported inside U.
        if lead_masks.iter().all(|m| m & !subset != 0) {
            best = size;
        }
    }
    budget.check_deadline()?;
    Ok(Dimension::Of(best))
}

/// The distinct monic base-variable contents of a polynomial set, multiplied
/// together. Helper for torsion clearing denominators; exposed for tests.
pub fn product_of_distinct(polys: &[Polynomial], nvars: usize) -> Polynomial {
    let mut distinct: Vec<Polynomial> = Vec::new();
    for p in polys {
        let m = p.monic_by_display_lead();
        if !m.is_zero() && !m.is_constant() && !distinct.contains(&m) {
            distinct.push(m);
        }
    }
    let mut h = Polynomial::one(nvars);
    for p in distinct {
        h = h.mul(&p);
    }
    h
}

/// The reduced basis under the canonical reference order, as plain
/// generators. Convenience used by several drivers.
pub fn reduced_generators(
    vars: &VarSet,
    rank: usize,
    gens: &[FreeVector],
    budget: &mut Budget<'_>,
) -> Result<GroebnerBasis, EngineError> {
    groebner_basis(vars, rank, gens, &ModuleOrder::pot_grevlex(), budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::coef_int;
    use crate::variable::Variable;
    use alloc::vec;

    fn tri_universe() -> VarSet {
        VarSet::new(vec![
            Variable::new("a", Block::Base),
            Variable::new("b", Block::Base),
            Variable::new("x", Block::Fiber(1)),
        ])
        .unwrap()
    }

    fn pv(i: usize, n: usize) -> Polynomial {
        Polynomial::variable(VarId(i), n)
    }

    #[test]
    fn eliminate_implicitizes_parabola() {
        // a = x, b = x^2: eliminating x leaves (a^2 - b).
        let vs = tri_universe();
        let a = pv(0, 3);
        let b = pv(1, 3);
        let x = pv(2, 3);
        let gens = vec![&a - &x, &b - &(&x * &x)];
        let mut bud = Budget::unbounded();
        let out = eliminate_blocks_ring(&vs, &gens, &[Block::Fiber(1)], &mut bud).unwrap();
        let printed: Vec<_> = out.iter().map(|p| p.to_display_string(&vs)).collect();
        assert_eq!(printed, vec!["a^2 - b"]);
    }

    #[test]
    fn intersection_of_principal_ideals() {
        // (a) cap (b) = (a*b).
        let vs = tri_universe();
        let a = FreeVector::scalar(pv(0, 3));
        let b = FreeVector::scalar(pv(1, 3));
        let mut bud = Budget::unbounded();
        let out = intersect(&vs, 1, &[a], &[b], &mut bud).unwrap();
        let printed: Vec<_> = out
            .iter()
            .map(|v| v.to_display_string(&vs))
            .collect();
        assert_eq!(printed, vec!["a*b"]);
    }

    #[test]
    fn colon_recovers_cofactor() {
        // ((a*b) : a) = (b).
        let vs = tri_universe();
        let ab = FreeVector::scalar(pv(0, 3).mul(&pv(1, 3)));
        let a = FreeVector::scalar(pv(0, 3));
        let mut bud = Budget::unbounded();
        let out = colon(&vs, 1, &[ab], &a, &mut bud).unwrap();
        let printed: Vec<_> = out.iter().map(|p| p.to_display_string(&vs)).collect();
        assert_eq!(printed, vec!["b"]);
    }

    #[test]
    fn colon_of_free_module_is_zero() {
        // N = 0 in S^1: (0 : m) = 0 for m != 0.
        let vs = tri_universe();
        let m = FreeVector::scalar(pv(2, 3));
        let mut bud = Budget::unbounded();
        let out = colon(&vs, 1, &[], &m, &mut bud).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn exact_division() {
        let a = pv(0, 3);
        let b = pv(1, 3);
        let d = &a + &b;
        let p = &d * &(&a - &b);
        assert_eq!(divide_exact(&p, &d), Some(&a - &b));
        assert_eq!(divide_exact(&a, &d), None);
        assert_eq!(divide_exact(&Polynomial::zero(), &d), Some(Polynomial::zero()));
    }

    #[test]
    fn saturation_routes_agree() {
        // N = (a^2 * x) in Q[a, b][x]: (N : a^inf) = (x).
        let vs = tri_universe();
        let a = pv(0, 3);
        let x = pv(2, 3);
        let n = vec![FreeVector::scalar(&(&a * &a) * &x)];
        let mut bud = Budget::unbounded();
        let s1 = saturate(&vs, 1, &n, &a, &mut bud).unwrap();
        let s2 = saturate_iterated(&vs, 1, &n, &a, &mut bud).unwrap();
        assert_eq!(s1, s2);
        let printed: Vec<_> = s1.iter().map(|v| v.to_display_string(&vs)).collect();
        assert_eq!(printed, vec!["x"]);
    }

    #[test]
    fn saturation_by_unit_is_identity() {
        let vs = tri_universe();
        let a = pv(0, 3);
        let n = vec![FreeVector::scalar(a.clone())];
        let mut bud = Budget::unbounded();
        let one = Polynomial::constant(coef_int(3), 3);
        let s = saturate(&vs, 1, &n, &one, &mut bud).unwrap();
        let printed: Vec<_> = s.iter().map(|v| v.to_display_string(&vs)).collect();
        assert_eq!(printed, vec!["a"]);
    }

    #[test]
    fn module_saturation() {
        // N = <(a*x, 0), (0, a)> in S^2: (N : a^inf) = <(x, 0), (0, 1)>.
        let vs = tri_universe();
        let a = pv(0, 3);
        let x = pv(2, 3);
        let n = vec![
            FreeVector::new(vec![&a * &x, Polynomial::zero()]),
            FreeVector::new(vec![Polynomial::zero(), a.clone()]),
        ];
        let mut bud = Budget::unbounded();
        let s1 = saturate(&vs, 2, &n, &a, &mut bud).unwrap();
        let s2 = saturate_iterated(&vs, 2, &n, &a, &mut bud).unwrap();
        assert_eq!(s1, s2);
        // Ascending by lead: the basis order puts lower components last.
        let printed: Vec<_> = s1.iter().map(|v| v.to_display_string(&vs)).collect();
        assert_eq!(printed, vec!["[0, 1]", "[x, 0]"]);
    }

    #[test]
    fn dimension_of_hypersurface_and_points() {
        let vs = tri_universe();
        let a = pv(0, 3);
        let b = pv(1, 3);
        let x = pv(2, 3);
        let all = [Block::Base, Block::Fiber(1)];
        let mut bud = Budget::unbounded();
        // V(0) in 3-space.
        assert_eq!(
            krull_dimension(&vs, &[], &all, &mut bud).unwrap(),
            Dimension::Of(3)
        );
        // A hypersurface.
        assert_eq!(
            krull_dimension(&vs, &[&(&x * &a) - &b], &all, &mut bud).unwrap(),
            Dimension::Of(2)
        );
        // A point.
        assert_eq!(
            krull_dimension(&vs, &[a.clone(), b.clone(), x.clone()], &all, &mut bud).unwrap(),
            Dimension::Of(0)
        );
        // Empty.
        let one = Polynomial::one(3);
        assert_eq!(
            krull_dimension(&vs, &[one], &all, &mut bud).unwrap(),
            Dimension::EmptyVariety
        );
        // The union of two coordinate lines in the (a, b) plane.
        assert_eq!(
            krull_dimension(&vs, &[&a * &b], &[Block::Base], &mut bud).unwrap(),
            Dimension::Of(1)
        );
    }

    #[test]
    fn distinct_content_product() {
        let a = pv(0, 3);
        let b = pv(1, 3);
        let two_a = a.scale(&coef_int(2));
        let h = product_of_distinct(&[a.clone(), two_a, b.clone(), Polynomial::one(3)], 3);
        assert_eq!(h, &a * &b);
    }
}
