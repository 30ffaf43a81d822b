//! Buchberger's algorithm for submodules of free modules.
//!
//! The engine computes reduced Groebner bases of submodules `N <= S^b` for
//! `S` a polynomial ring over `Q`, under any [`ModuleOrder`]. Ideals are the
//! rank-1 case. The reduced basis (monic elements, minimal lead terms, fully
//! tail-reduced, sorted ascending by lead) is unique for a given submodule
//! and order, which the rest of the crate relies on for canonical output.
//!
//! Pair selection follows the normal strategy: smallest lcm degree first,
//! ties broken by the lcm exponent vector, component and generator indices,
//! so runs are deterministic. The coprimality criterion is applied only for
//! rank 1 (its proof rewrites `S(f, g)` using commutativity of the two tails,
//! which needs ring elements); the chain criterion is sound for modules and
//! is applied with the treated-pair bookkeeping that keeps it so.

use crate::limits::{Budget, EngineError};
use crate::monomial::Monomial;
use crate::order::{CompiledOrder, ModuleOrder};
use crate::polynomial::{Coef, Polynomial};
use crate::variable::VarSet;
use crate::vector::FreeVector;
use alloc::collections::{BTreeSet, BinaryHeap};
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};
use num_traits::One;

/// A module term: ambient component plus monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ModTerm {
    pub comp: usize,
    pub mono: Monomial,
}

/// Working polynomial: terms sorted strictly descending under the active
/// order, with a cached maximal total degree for budget checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct WPoly {
    pub terms: Vec<(ModTerm, Coef)>,
    pub max_deg: u32,
}

impl WPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &ModTerm {
        &self.terms[0].0
    }

    pub fn lead_coef(&self) -> &Coef {
        &self.terms[0].1
    }

    pub fn monic(mut self) -> WPoly {
        let lc = self.terms[0].1.clone();
        if !lc.is_one() {
            for (_, c) in &mut self.terms {
                *c /= &lc;
            }
        }
        self
    }

    pub fn from_vector(v: &FreeVector, ord: &CompiledOrder) -> WPoly {
        let mut terms: Vec<(ModTerm, Coef)> = Vec::new();
        let mut max_deg = 0;
        for (comp, p) in v.entries().iter().enumerate() {
            for (m, c) in p.terms() {
                debug_assert!(ord.covers(m), "monomial outside the order's coverage");
                max_deg = max_deg.max(m.total_degree());
                terms.push((
                    ModTerm {
                        comp,
                        mono: m.clone(),
                    },
                    c.clone(),
                ));
            }
        }
        terms.sort_by(|(a, _), (b, _)| ord.cmp(b.comp, &b.mono, a.comp, &a.mono));
        WPoly { terms, max_deg }
    }

    pub fn to_vector(&self, rank: usize) -> FreeVector {
        let mut per_comp: Vec<Vec<(Monomial, Coef)>> = alloc::vec![Vec::new(); rank];
        for (t, c) in &self.terms {
            per_comp[t.comp].push((t.mono.clone(), c.clone()));
        }
        FreeVector::new(
            per_comp
                .into_iter()
                .map(Polynomial::from_terms)
                .collect(),
        )
    }
}

/// `a - c * (m * g)`, merging the two descending term lists.
fn sub_mul(a: &WPoly, m: &Monomial, c: &Coef, g: &WPoly, ord: &CompiledOrder) -> WPoly {
    let mut out: Vec<(ModTerm, Coef)> = Vec::with_capacity(a.terms.len() + g.terms.len());
    let mut max_deg = 0;
    let mut i = 0;
    let mut j = 0;
    let mut push = |t: ModTerm, c: Coef, max_deg: &mut u32| {
        *max_deg = (*max_deg).max(t.mono.total_degree());
        out.push((t, c));
    };
    while i < a.terms.len() && j < g.terms.len() {
        let (ta, ca) = &a.terms[i];
        let (tg, cg) = &g.terms[j];
        let tg_mono = tg.mono.mul(m);
        match ord.cmp(ta.comp, &ta.mono, tg.comp, &tg_mono) {
            Ordering::Greater => {
                push(ta.clone(), ca.clone(), &mut max_deg);
                i += 1;
            }
            Ordering::Less => {
                push(
                    ModTerm {
                        comp: tg.comp,
                        mono: tg_mono,
                    },
                    -(cg * c),
                    &mut max_deg,
                );
                j += 1;
            }
            Ordering::Equal => {
                let s = ca - &(cg * c);
                if !num_traits::Zero::is_zero(&s) {
                    push(ta.clone(), s, &mut max_deg);
                }
                i += 1;
                j += 1;
            }
        }
    }
    while i < a.terms.len() {
        let (ta, ca) = &a.terms[i];
        push(ta.clone(), ca.clone(), &mut max_deg);
        i += 1;
    }
    while j < g.terms.len() {
        let (tg, cg) = &g.terms[j];
        push(
            ModTerm {
                comp: tg.comp,
                mono: tg.mono.mul(m),
            },
            -(cg * c),
            &mut max_deg,
        );
        j += 1;
    }
    WPoly {
        terms: out,
        max_deg,
    }
}

/// Full normal form: every term of the result is irreducible modulo the lead
/// terms of `basis`. With a budget present, degree and wall-clock caps are
/// enforced; without one the reduction runs to completion (it terminates
/// because the processed lead strictly decreases in a well-order).
fn normal_form_w(
    mut p: WPoly,
    basis: &[&WPoly],
    ord: &CompiledOrder,
    mut budget: Option<&mut Budget<'_>>,
) -> Result<WPoly, EngineError> {
    let mut out: Vec<(ModTerm, Coef)> = Vec::new();
    let mut out_deg = 0;
    while !p.is_zero() {
        let (lt, lc) = (&p.terms[0].0, &p.terms[0].1);
        let divisor = basis.iter().find(|g| {
            let gl = g.lead();
            gl.comp == lt.comp && gl.mono.divides(&lt.mono)
        });
        match divisor {
            None => {
                out_deg = out_deg.max(lt.mono.total_degree());
                out.push(p.terms.remove(0));
            }
            Some(g) => {
                let m = lt.mono.try_div(&g.lead().mono).unwrap();
                let c = lc / g.lead_coef();
                p = sub_mul(&p, &m, &c, g, ord);
                if let Some(b) = budget.as_deref_mut() {
                    b.stats.reduction_steps += 1;
                    b.check_degree(p.max_deg)?;
                    b.tick()?;
                }
            }
        }
    }
    Ok(WPoly {
        terms: out,
        max_deg: out_deg,
    })
}

fn nf_against(
    p: WPoly,
    basis: &[WPoly],
    ord: &CompiledOrder,
    budget: Option<&mut Budget<'_>>,
) -> Result<WPoly, EngineError> {
    let refs: Vec<&WPoly> = basis.iter().collect();
    normal_form_w(p, &refs, ord, budget)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    degree: u32,
    lcm: Monomial,
    comp: usize,
    i: usize,
    j: usize,
}

fn pair_key(basis: &[WPoly], i: usize, j: usize) -> PairKey {
    let li = basis[i].lead();
    let lj = basis[j].lead();
    debug_assert_eq!(li.comp, lj.comp);
    let lcm = li.mono.lcm(&lj.mono);
    PairKey {
        degree: lcm.total_degree(),
        lcm,
        comp: li.comp,
        i,
        j,
    }
}

fn spair(f: &WPoly, g: &WPoly, lcm: &Monomial, ord: &CompiledOrder) -> WPoly {
    let uf = lcm.try_div(&f.lead().mono).unwrap();
    let ug = lcm.try_div(&g.lead().mono).unwrap();
    let cf = Coef::one() / f.lead_coef();
    let scaled_f = WPoly {
        terms: f
            .terms
            .iter()
            .map(|(t, c)| {
                (
                    ModTerm {
                        comp: t.comp,
                        mono: t.mono.mul(&uf),
                    },
                    c * &cf,
                )
            })
            .collect(),
        max_deg: f.max_deg + uf.total_degree(),
    };
    let cg = Coef::one() / g.lead_coef();
    sub_mul(&scaled_f, &ug, &cg, g, ord)
}

/// A reduced Groebner basis together with the order it was computed under.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    pub order: ModuleOrder,
    pub rank: usize,
    /// Reduced, monic, sorted ascending by lead term. Unique for the
    /// submodule and order.
    pub elements: Vec<FreeVector>,
    compiled: CompiledOrder,
    working: Vec<WPoly>,
}

impl GroebnerBasis {
    /// Full normal form of `v` modulo the basis. Infallible: reduction always
    /// terminates, and a reduced basis keeps it small in practice.
    pub fn normal_form(&self, v: &FreeVector) -> FreeVector {
        let w = WPoly::from_vector(v, &self.compiled);
        let r = nf_against(w, &self.working, &self.compiled, None)
            .expect("unbudgeted reduction cannot fail");
        r.to_vector(self.rank)
    }

    pub fn contains(&self, v: &FreeVector) -> bool {
        self.normal_form(v).is_zero()
    }

    /// Rank-1 convenience: the basis elements as ring elements.
    pub fn ring_elements(&self) -> Vec<Polynomial> {
        debug_assert_eq!(self.rank, 1);
        self.elements
            .iter()
            .map(|v| v.expect_scalar().clone())
            .collect()
    }

    /// True for rank 1 when the ideal is the whole ring.
    pub fn is_unit_ideal(&self) -> bool {
        self.rank == 1
            && self
                .elements
                .first()
                .is_some_and(|v| v.expect_scalar().is_constant() && !v.is_zero())
    }

    pub(crate) fn working(&self) -> &[WPoly] {
        &self.working
    }

    pub(crate) fn compiled(&self) -> &CompiledOrder {
        &self.compiled
    }
}

/// Computes the reduced Groebner basis of the submodule generated by `gens`
/// inside `S^rank`.
pub fn groebner_basis(
    vars: &VarSet,
    rank: usize,
    gens: &[FreeVector],
    order: &ModuleOrder,
    budget: &mut Budget<'_>,
) -> Result<GroebnerBasis, EngineError> {
    let compiled = order.compile(vars);
    let mut basis: Vec<WPoly> = Vec::new();
    for g in gens {
        debug_assert_eq!(g.rank(), rank);
        let w = WPoly::from_vector(g, &compiled);
        if !w.is_zero() {
            budget.check_degree(w.max_deg)?;
            basis.push(w.monic());
        }
    }

    let mut heap: BinaryHeap<Reverse<PairKey>> = BinaryHeap::new();
    let mut treated: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 1..basis.len() {
        for i in 0..j {
            if basis[i].lead().comp == basis[j].lead().comp {
                heap.push(Reverse(pair_key(&basis, i, j)));
            }
        }
    }
    budget.check_pair_queue(heap.len())?;

    while let Some(Reverse(pk)) = heap.pop() {
        budget.stats.spairs_considered += 1;
        budget.tick()?;
        budget.check_degree(pk.degree)?;
        let (i, j) = (pk.i, pk.j);
        if rank == 1
            && basis[i]
                .lead()
                .mono
                .is_coprime_with(&basis[j].lead().mono)
        {
            treated.insert((i, j));
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lead().comp == pk.comp
                && basis[k].lead().mono.divides(&pk.lcm)
                && treated.contains(&ordered(i, k))
                && treated.contains(&ordered(j, k))
        });
        if chain {
            treated.insert((i, j));
            continue;
        }
        let s = spair(&basis[i], &basis[j], &pk.lcm, &compiled);
        let h = nf_against(s, &basis, &compiled, Some(budget))?;
        budget.stats.spairs_reduced += 1;
        treated.insert((i, j));
        if !h.is_zero() {
            budget.check_degree(h.max_deg)?;
            basis.push(h.monic());
            budget.check_basis(basis.len())?;
            let t = basis.len() - 1;
            for i in 0..t {
                if basis[i].lead().comp == basis[t].lead().comp {
                    heap.push(Reverse(pair_key(&basis, i, t)));
                }
            }
            budget.check_pair_queue(heap.len())?;
        }
    }
    budget.stats.bases_computed += 1;

    let working = interreduce(basis, &compiled);
    let elements = working.iter().map(|w| w.to_vector(rank)).collect();
    Ok(GroebnerBasis {
        order: order.clone(),
        rank,
        elements,
        compiled,
        working,
    })
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Minimalizes lead terms, then tail-reduces to the fixpoint. The result is
/// the reduced basis, sorted ascending by lead.
fn interreduce(basis: Vec<WPoly>, ord: &CompiledOrder) -> Vec<WPoly> {
    let mut idx: Vec<usize> = (0..basis.len()).collect();
    idx.sort_by(|&a, &b| {
        let la = basis[a].lead();
        let lb = basis[b].lead();
        ord.cmp(la.comp, &la.mono, lb.comp, &lb.mono)
            .then(a.cmp(&b))
    });
    let mut kept: Vec<WPoly> = Vec::new();
    for i in idx {
        let w = &basis[i];
        let redundant = kept.iter().any(|k| {
            k.lead().comp == w.lead().comp && k.lead().mono.divides(&w.lead().mono)
        });
        if !redundant {
            kept.push(w.clone());
        }
    }
    loop {
        let mut changed = false;
        for i in 0..kept.len() {
            let me = kept[i].clone();
            let others: Vec<&WPoly> = kept
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, w)| w)
                .collect();
            let r = normal_form_w(me, &others, ord, None)
                .expect("unbudgeted reduction cannot fail");
            debug_assert!(!r.is_zero(), "minimal element reduced to zero");
            let r = r.monic();
            if r != kept[i] {
                kept[i] = r;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    kept.sort_by(|a, b| {
        let la = a.lead();
        let lb = b.lead();
        ord.cmp(la.comp, &la.mono, lb.comp, &lb.mono)
    });
    kept
}

/// Groebner-driven membership test `v in <gens>`.
pub fn membership(
    vars: &VarSet,
    rank: usize,
    v: &FreeVector,
    gens: &[FreeVector],
    budget: &mut Budget<'_>,
) -> Result<bool, EngineError> {
    let gb = groebner_basis(vars, rank, gens, &ModuleOrder::pot_grevlex(), budget)?;
    Ok(gb.contains(v))
}

/// Equality of the submodules generated by `a` and `b`, by mutual membership.
pub fn submodules_equal(
    vars: &VarSet,
    rank: usize,
    a: &[FreeVector],
    b: &[FreeVector],
    budget: &mut Budget<'_>,
) -> Result<bool, EngineError> {
    let gb_a = groebner_basis(vars, rank, a, &ModuleOrder::pot_grevlex(), budget)?;
    let gb_b = groebner_basis(vars, rank, b, &ModuleOrder::pot_grevlex(), budget)?;
    Ok(a.iter().all(|v| gb_b.contains(v)) && b.iter().all(|v| gb_a.contains(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::coef_int;
    use crate::variable::{Block, VarId, Variable};
    use alloc::vec;

    fn xy_universe() -> VarSet {
        VarSet::new(vec![
            Variable::new("y", Block::Base),
            Variable::new("x", Block::Fiber(1)),
        ])
        .unwrap()
    }

    fn pv(i: usize, n: usize) -> Polynomial {
        Polynomial::variable(VarId(i), n)
    }

    #[test]
    fn normal_form_single_divisor() {
        let vs = xy_universe();
        let y = pv(0, 2);
        let x = pv(1, 2);
        let f = &(&x * &x) - &y;
        let p = &(&x * &x) + &y;
        let mut b = Budget::unbounded();
        let gb = groebner_basis(
            &vs,
            1,
            &[FreeVector::scalar(f)],
            &ModuleOrder::pot_grevlex(),
            &mut b,
        )
        .unwrap();
        let nf = gb.normal_form(&FreeVector::scalar(p));
        assert_eq!(nf.expect_scalar(), &y.scale(&coef_int(2)));
    }

    #[test]
    fn reduced_basis_classic_ideal() {
        // (x^2 + y^2, x*y) has reduced grevlex basis {y*x, y^2 + x^2, x^3}.
        let vs = xy_universe();
        let y = pv(0, 2);
        let x = pv(1, 2);
        let f = &(&x * &x) + &(&y * &y);
        let g = &x * &y;
        let mut b = Budget::unbounded();
        let gb = groebner_basis(
            &vs,
            1,
            &[FreeVector::scalar(f), FreeVector::scalar(g)],
            &ModuleOrder::pot_grevlex(),
            &mut b,
        )
        .unwrap();
        let printed: Vec<_> = gb
            .elements
            .iter()
            .map(|e| e.to_display_string(&vs))
            .collect();
        assert_eq!(printed, vec!["y*x", "y^2 + x^2", "x^3"]);
    }

    #[test]
    fn reduced_basis_is_generator_order_independent() {
        let vs = xy_universe();
        let y = pv(0, 2);
        let x = pv(1, 2);
        let gens = vec![
            FreeVector::scalar(&(&x * &x) + &(&y * &y)),
            FreeVector::scalar(&x * &y),
            FreeVector::scalar(&(&x * &(&x * &y)) + &y),
        ];
        let mut shuffled = gens.clone();
        shuffled.reverse();
        let mut b = Budget::unbounded();
        let gb1 =
            groebner_basis(&vs, 1, &gens, &ModuleOrder::pot_grevlex(), &mut b).unwrap();
        let gb2 =
            groebner_basis(&vs, 1, &shuffled, &ModuleOrder::pot_grevlex(), &mut b).unwrap();
        assert_eq!(gb1.elements, gb2.elements);
    }

    #[test]
    fn module_spair_produces_syzygy_element() {
        // N = <(y, x), (x, y)> in S^2 over Q[y, x].
        let vs = xy_universe();
        let y = pv(0, 2);
        let x = pv(1, 2);
        let g1 = FreeVector::new(vec![y.clone(), x.clone()]);
        let g2 = FreeVector::new(vec![x.clone(), y.clone()]);
        let mut b = Budget::unbounded();
        let gb = groebner_basis(&vs, 2, &[g1.clone(), g2.clone()], &ModuleOrder::pot_grevlex(), &mut b)
            .unwrap();
        assert!(gb.contains(&g1));
        assert!(gb.contains(&g2));
        // (0, x^2 - y^2) = x*(y, x) - y*(x, y).
        let sy = FreeVector::new(vec![Polynomial::zero(), &(&x * &x) - &(&y * &y)]);
        assert!(gb.contains(&sy));
        assert!(!gb.contains(&FreeVector::new(vec![Polynomial::zero(), x.clone()])));
    }

    #[test]
    fn membership_empty_generators() {
        let vs = xy_universe();
        let mut b = Budget::unbounded();
        let v = FreeVector::new(vec![pv(0, 2)]);
        assert!(!membership(&vs, 1, &v, &[], &mut b).unwrap());
        assert!(membership(&vs, 1, &FreeVector::zero(1), &[], &mut b).unwrap());
    }

    #[test]
    fn degree_cap_aborts() {
        let vs = xy_universe();
        let y = pv(0, 2);
        let x = pv(1, 2);
        let f = &(&x * &(&x * &(&x * &x))) - &y;
        let mut b = Budget::new(crate::limits::ResourceLimits {
            max_total_degree: 2,
            ..crate::limits::ResourceLimits::unbounded()
        });
        let r = groebner_basis(
            &vs,
            1,
            &[FreeVector::scalar(f)],
            &ModuleOrder::pot_grevlex(),
            &mut b,
        );
        assert!(matches!(
            r,
            Err(EngineError::ResourceExceeded(
                crate::limits::LimitKind::TotalDegree
            ))
        ));
    }

    #[test]
    fn submodule_equality() {
        let vs = xy_universe();
        let y = pv(0, 2);
        let x = pv(1, 2);
        let a = vec![FreeVector::scalar(x.clone()), FreeVector::scalar(y.clone())];
        let b2 = vec![
            FreeVector::scalar(&x + &y),
            FreeVector::scalar(&x - &y),
        ];
        let mut b = Budget::unbounded();
        assert!(submodules_equal(&vs, 1, &a, &b2, &mut b).unwrap());
        let c = vec![FreeVector::scalar(x.clone())];
        assert!(!submodules_equal(&vs, 1, &a, &c, &mut b).unwrap());
    }
}
