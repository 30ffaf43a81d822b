//! Torsion of a presented module over the base ring, with certificates.
//!
//! For `F = S^b / N` over `R = Q[y..]`, the torsion submodule is computed by
//! contraction and saturation. A basis of `N` is taken under the contraction
//! order (fiber exponents first, then component, then base exponents); the
//! lead of each element then agrees with its lead over the rational function
//! field `K = Q(y..)`, so the base-variable lead coefficients can be read
//! off. Dividing by those coefficients is the only denominator source when
//! reducing over `K`, hence with `h` their product, an element has torsion
//! class exactly when some power of `h` multiplies it into `N`. The torsion
//! preimage is therefore the saturation `(N : h^inf)`, and `F` is
//! torsion-free exactly when that saturation collapses back to `N`. When
//! every lead coefficient is a unit, `N` is already saturated and the torsion
//! vanishes without further work.
//!
//! A non-trivial torsion class yields a [`TorsionCertificate`] `(m, r)`:
//! `m` outside `N`, `r` a non-zero base polynomial with `r*m` inside `N`.
//! Both facts are plain membership tests, re-checkable without trusting the
//! saturation route that found them.

use crate::groebner::{groebner_basis, GroebnerBasis};
use crate::ideal_ops::{colon, eliminate_blocks_ring, product_of_distinct, saturate};
use crate::limits::{Budget, EngineError};
use crate::order::ModuleOrder;
use crate::polynomial::Polynomial;
use crate::presentation::ModulePresentation;
use crate::variable::{Block, VarId};
use crate::vector::FreeVector;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Result of the torsion computation.
#[derive(Clone, Debug)]
pub struct TorsionComputation {
    /// Product of the distinct non-unit base lead coefficients.
    pub clearing: Polynomial,
    /// Reduced basis of the saturation `(N : clearing^inf)`.
    pub saturation: Vec<FreeVector>,
    /// Saturation elements with non-zero normal form modulo `N`. Their
    /// classes generate the torsion submodule; empty iff torsion-free.
    pub generators: Vec<FreeVector>,
}

/// Computes the torsion submodule of `F` over the base.
pub fn torsion_submodule(
    m: &ModulePresentation,
    budget: &mut Budget<'_>,
) -> Result<TorsionComputation, EngineError> {
    let vars = m.vars();
    let nv = vars.len();
    let rank = m.rank();
    if vars.n_base() == 0 {
        // Base is the field itself; everything is free of torsion.
        let gb = m.reduced_relations(budget)?;
        return Ok(TorsionComputation {
            clearing: Polynomial::one(nv),
            saturation: gb.elements,
            generators: Vec::new(),
        });
    }
    let fiber = vars.fiber_blocks();
    let contraction = ModuleOrder::elimination(fiber.clone());
    let gb_c = groebner_basis(vars, rank, m.relations(), &contraction, budget)?;

    // Base lead coefficient of each element: the sum of the terms sharing
    // the lead's fiber exponents and component, restricted to base
    // variables. The contraction order has exactly [fiber, position, base]
    // levels, so a two-level prefix comparison does the grouping.
    let compiled = gb_c.compiled();
    let is_fiber = |id: VarId| fiber.contains(&vars.block(id));
    let mut lead_coefs: Vec<Polynomial> = Vec::new();
    for w in gb_c.working() {
        let lead = &w.terms[0].0;
        let coef_terms: Vec<_> = w
            .terms
            .iter()
            .filter(|(t, _)| {
                compiled.cmp_prefix(2, t.comp, &t.mono, lead.comp, &lead.mono) == Ordering::Equal
            })
            .map(|(t, c)| (t.mono.restricted(|id| !is_fiber(id)), c.clone()))
            .collect();
        lead_coefs.push(Polynomial::from_terms(coef_terms));
    }
    let clearing = product_of_distinct(&lead_coefs, nv);

    let gb_ref = m.reduced_relations(budget)?;
    if clearing.is_constant() {
        // All lead coefficients are units: N is saturated as it stands.
        return Ok(TorsionComputation {
            clearing,
            saturation: gb_ref.elements,
            generators: Vec::new(),
        });
    }
    let saturation = saturate(vars, rank, m.relations(), &clearing, budget)?;
    let generators: Vec<FreeVector> = saturation
        .iter()
        .filter(|v| !gb_ref.contains(v))
        .cloned()
        .collect();
    Ok(TorsionComputation {
        clearing,
        saturation,
        generators,
    })
}

/// True when the module has no base torsion.
pub fn is_torsion_free(
    m: &ModulePresentation,
    budget: &mut Budget<'_>,
) -> Result<bool, EngineError> {
    Ok(torsion_submodule(m, budget)?.generators.is_empty())
}

/// Generators of `{ r in Q[base] : r * elem in N }`: the colon ideal of the
/// element, contracted to the base by eliminating the fiber blocks. Returns
/// `[1]` when the element already lies in `N`, and an empty set when the
/// class of the element is a free generator (zero annihilator).
pub fn annihilator_in_base(
    m: &ModulePresentation,
    elem: &FreeVector,
    budget: &mut Budget<'_>,
) -> Result<Vec<Polynomial>, EngineError> {
    let vars = m.vars();
    let gb_ref = m.reduced_relations(budget)?;
    if gb_ref.contains(elem) {
        return Ok(alloc::vec![Polynomial::one(vars.len())]);
    }
    let full = colon(vars, m.rank(), m.relations(), elem, budget)?;
    eliminate_blocks_ring(vars, &full, &vars.fiber_blocks(), budget)
}

/// The two membership facts backing a certificate, recorded explicitly so
/// reports can show what was checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertificateTrace {
    /// `element` reduced to a non-zero normal form modulo `N`.
    pub element_outside: bool,
    /// `annihilator * element` reduced to zero modulo `N`.
    pub product_inside: bool,
    /// The annihilator involves base variables only and is not a constant.
    pub annihilator_proper: bool,
}

/// A self-contained witness that the module has base torsion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionCertificate {
    pub element: FreeVector,
    pub annihilator: Polynomial,
    pub trace: CertificateTrace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateError {
    Engine(EngineError),
    /// Construction or re-verification contradicted the claimed torsion;
    /// this indicates an engine bug and is reported loudly.
    Inconsistent(&'static str),
}

impl From<EngineError> for CertificateError {
    fn from(e: EngineError) -> Self {
        CertificateError::Engine(e)
    }
}

impl fmt::Display for CertificateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateError::Engine(e) => write!(f, "{e}"),
            CertificateError::Inconsistent(msg) => {
                write!(f, "certificate verification failed: {msg}")
            }
        }
    }
}

/// Deterministic pick among annihilator generators: lowest total degree
/// first, then first in the display ordering.
fn pick_annihilator(mut gens: Vec<Polynomial>) -> Option<Polynomial> {
    gens.retain(|p| !p.is_zero());
    gens.sort_by(|a, b| {
        let da = a.total_degree().unwrap_or(0);
        let db = b.total_degree().unwrap_or(0);
        da.cmp(&db).then_with(|| b.cmp(a))
    });
    gens.into_iter().next()
}

/// Builds a machine-checked torsion certificate for a claimed torsion
/// element. Every failure mode signals an engine inconsistency rather than a
/// property of the input.
pub fn make_certificate(
    m: &ModulePresentation,
    elem: &FreeVector,
    budget: &mut Budget<'_>,
) -> Result<TorsionCertificate, CertificateError> {
    let ann = annihilator_in_base(m, elem, budget)?;
    let Some(r) = pick_annihilator(ann) else {
        return Err(CertificateError::Inconsistent(
            "claimed torsion element has zero annihilator",
        ));
    };
    if r.is_constant() {
        return Err(CertificateError::Inconsistent(
            "annihilator is a unit, element already lies in the module",
        ));
    }
    let cert = TorsionCertificate {
        element: elem.clone(),
        annihilator: r,
        trace: CertificateTrace {
            element_outside: false,
            product_inside: false,
            annihilator_proper: false,
        },
    };
    verify_certificate(m, &cert, budget)
}

/// Re-checks a certificate by membership alone and returns it with a fresh
/// trace. Independent of the saturation route: only a basis of `N` and two
/// normal forms are used.
pub fn verify_certificate(
    m: &ModulePresentation,
    cert: &TorsionCertificate,
    budget: &mut Budget<'_>,
) -> Result<TorsionCertificate, CertificateError> {
    let vars = m.vars();
    let base_only = cert
        .annihilator
        .supported_within(|id| vars.block(id) == Block::Base);
    let annihilator_proper =
        base_only && !cert.annihilator.is_constant() && !cert.annihilator.is_zero();
    if !annihilator_proper {
        return Err(CertificateError::Inconsistent(
            "annihilator is not a proper base polynomial",
        ));
    }
    let gb: GroebnerBasis = m.reduced_relations(budget)?;
    let element_outside = !gb.contains(&cert.element);
    if !element_outside {
        return Err(CertificateError::Inconsistent(
            "certificate element lies in the relation module",
        ));
    }
    let product_inside = gb.contains(&cert.element.scale_poly(&cert.annihilator));
    if !product_inside {
        return Err(CertificateError::Inconsistent(
            "annihilator times element escapes the relation module",
        ));
    }
    Ok(TorsionCertificate {
        element: cert.element.clone(),
        annihilator: cert.annihilator.clone(),
        trace: CertificateTrace {
            element_outside,
            product_inside,
            annihilator_proper,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::RingTower;
    use crate::variable::{VarSet, Variable};
    use alloc::vec;

    fn blowup_square() -> ModulePresentation {
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
        let a = ModulePresentation::algebra(RingTower::new(vs, vec![rel]).unwrap());
        a.tensor_power(2).unwrap()
    }

    fn maximal_ideal_module() -> ModulePresentation {
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
    fn blowup_square_has_diagonal_torsion() {
        let sq = blowup_square();
        let mut bud = Budget::unbounded();
        let t = torsion_submodule(&sq, &mut bud).unwrap();
        let vs = sq.vars();
        assert_eq!(t.clearing.to_display_string(vs), "y1*y2");
        let gens: Vec<_> = t
            .generators
            .iter()
            .map(|g| g.to_display_string(vs))
            .collect();
        assert_eq!(gens, vec!["x1 - x2"]);
        assert!(!is_torsion_free(&sq, &mut bud).unwrap());
    }

    #[test]
    fn blowup_square_certificate_is_canonical() {
        let sq = blowup_square();
        let mut bud = Budget::unbounded();
        let t = torsion_submodule(&sq, &mut bud).unwrap();
        let cert = make_certificate(&sq, &t.generators[0], &mut bud).unwrap();
        let vs = sq.vars();
        assert_eq!(cert.element.to_display_string(vs), "x1 - x2");
        assert_eq!(cert.annihilator.to_display_string(vs), "y1");
        assert!(cert.trace.element_outside);
        assert!(cert.trace.product_inside);
        assert!(cert.trace.annihilator_proper);
        let again = verify_certificate(&sq, &cert, &mut bud).unwrap();
        assert_eq!(again, cert);
    }

    #[test]
    fn blowup_square_annihilator_is_the_maximal_ideal() {
        let sq = blowup_square();
        let mut bud = Budget::unbounded();
        let t = torsion_submodule(&sq, &mut bud).unwrap();
        let ann = annihilator_in_base(&sq, &t.generators[0], &mut bud).unwrap();
        let vs = sq.vars();
        let printed: Vec<_> = ann.iter().map(|p| p.to_display_string(vs)).collect();
        assert_eq!(printed, vec!["y2", "y1"]);
    }

    #[test]
    fn maximal_ideal_is_torsion_free_but_square_is_not() {
        let m = maximal_ideal_module();
        let mut bud = Budget::unbounded();
        assert!(is_torsion_free(&m, &mut bud).unwrap());
        let sq = m.tensor_power(2).unwrap();
        let t = torsion_submodule(&sq, &mut bud).unwrap();
        let vs = sq.vars();
        let gens: Vec<_> = t
            .generators
            .iter()
            .map(|g| g.to_display_string(vs))
            .collect();
        assert_eq!(gens, vec!["[0, 1, -1, 0]"]);
        let cert = make_certificate(&sq, &t.generators[0], &mut bud).unwrap();
        assert_eq!(cert.annihilator.to_display_string(vs), "y1");
    }

    #[test]
    fn quotient_by_base_hyperplane_certificate() {
        // A = Q[y1] / (y1), F = A: annihilated by y1 entirely.
        let vs = VarSet::new(vec![Variable::new("y1", Block::Base)]).unwrap();
        let y1 = Polynomial::variable(VarId(0), 1);
        let a = ModulePresentation::algebra(RingTower::new(vs, vec![y1]).unwrap());
        let mut bud = Budget::unbounded();
        let t = torsion_submodule(&a, &mut bud).unwrap();
        let vs = a.vars();
        assert_eq!(t.clearing.to_display_string(vs), "y1");
        let gens: Vec<_> = t
            .generators
            .iter()
            .map(|g| g.to_display_string(vs))
            .collect();
        assert_eq!(gens, vec!["1"]);
        let cert = make_certificate(&a, &t.generators[0], &mut bud).unwrap();
        assert_eq!(cert.element.to_display_string(vs), "1");
        assert_eq!(cert.annihilator.to_display_string(vs), "y1");
    }

    #[test]
    fn double_cover_is_torsion_free_without_saturating() {
        // A = Q[y1][x] / (x^2 - y1): free as a module, unit lead coefficient.
        let vs = VarSet::new(vec![
            Variable::new("y1", Block::Base),
            Variable::new("x", Block::Fiber(1)),
        ])
        .unwrap();
        let y1 = Polynomial::variable(VarId(0), 2);
        let x = Polynomial::variable(VarId(1), 2);
        let rel = &(&x * &x) - &y1;
        let a = ModulePresentation::algebra(RingTower::new(vs, vec![rel]).unwrap());
        let mut bud = Budget::unbounded();
        let t = torsion_submodule(&a, &mut bud).unwrap();
        assert!(t.clearing.is_constant());
        assert!(t.generators.is_empty());
    }

    #[test]
    fn annihilator_of_free_generator_is_zero() {
        let vs = VarSet::new(vec![
            Variable::new("y1", Block::Base),
            Variable::new("x", Block::Fiber(1)),
        ])
        .unwrap();
        let a = ModulePresentation::algebra(RingTower::polynomial(vs).unwrap());
        let mut bud = Budget::unbounded();
        let one = FreeVector::scalar(Polynomial::one(2));
        let ann = annihilator_in_base(&a, &one, &mut bud).unwrap();
        assert!(ann.is_empty());
    }

    #[test]
    fn swapping_tensor_factors_keeps_the_verdict() {
        let m = maximal_ideal_module();
        let free = ModulePresentation::algebra(m.tower().clone());
        let ab = m.tensor(&free).unwrap();
        let ba = free.tensor(&m).unwrap();
        let mut bud = Budget::unbounded();
        assert_eq!(
            is_torsion_free(&ab, &mut bud).unwrap(),
            is_torsion_free(&ba, &mut bud).unwrap()
        );
        let sq = m.tensor_power(2).unwrap();
        let rev = tensor_swap_probe(&m);
        assert_eq!(
            is_torsion_free(&sq, &mut bud).unwrap(),
            is_torsion_free(&rev, &mut bud).unwrap()
        );
    }

    fn tensor_swap_probe(m: &ModulePresentation) -> ModulePresentation {
        crate::presentation::tensor_many(&[m, m]).unwrap()
    }

    #[test]
    fn certificate_rejects_member_elements() {
        let m = maximal_ideal_module();
        let mut bud = Budget::unbounded();
        let inside = m.relations()[0].clone();
        let err = make_certificate(&m, &inside, &mut bud).unwrap_err();
        assert!(matches!(err, CertificateError::Inconsistent(_)));
    }
}
