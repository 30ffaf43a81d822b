//! Geometry of the projection to the base: fibre dimensions, image
//! closures, dominance and vertical components.
//!
//! Everything here sees the source `V(I)` inside the product of base and
//! fiber coordinates and asks how it sits over the base. The image closure
//! is the elimination ideal in the base variables; a component is
//! algebraically vertical when that ideal is nonzero, i.e. its image is
//! squeezed into a proper subvariety. Fibre dimension over a rational base
//! point is the Krull dimension of the evaluated ideal in the fiber
//! variables alone.
//!
//! Generic fibre dimension is computed as `dim V(I) - dim(image closure)`.
//! That identity is valid when `V(I)` is irreducible; for reducible sources
//! it describes only the dominating part, so per-component queries should be
//! used instead (caller-supplied, since primary decomposition is out of
//! scope here).

use crate::ideal_ops::{eliminate_blocks_ring, krull_dimension, reduced_generators, Dimension};
use crate::limits::{Budget, EngineError};
use crate::polynomial::{Coef, Polynomial};
use crate::tower::RingTower;
use crate::vector::FreeVector;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FibredError {
    /// The base point must list one coordinate per base variable.
    PointArity { expected: usize, got: usize },
    /// `openness_witness` requires every component to contain the ambient
    /// relation ideal.
    ComponentMissingIdeal(String),
    Engine(EngineError),
}

impl From<EngineError> for FibredError {
    fn from(e: EngineError) -> Self {
        FibredError::Engine(e)
    }
}

impl fmt::Display for FibredError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FibredError::PointArity { expected, got } => {
                write!(f, "base point has {got} coordinates, expected {expected}")
            }
            FibredError::ComponentMissingIdeal(label) => {
                write!(f, "component '{label}' does not contain the ambient relation ideal")
            }
            FibredError::Engine(e) => write!(f, "{e}"),
        }
    }
}

/// A caller-supplied candidate component of the source, tagged for reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentIdeal {
    pub label: String,
    pub generators: Vec<Polynomial>,
}

/// Outcome of a verticality test. `empty_component` flags the degenerate
/// unit ideal, which is reported vertical by convention (its image closure
/// is everything, hence nonzero) but describes the empty set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerticalityCheck {
    pub vertical: bool,
    pub empty_component: bool,
}

fn all_blocks(tower: &RingTower) -> Vec<crate::variable::Block> {
    let mut blocks = alloc::vec![crate::variable::Block::Base];
    blocks.extend(tower.vars().fiber_blocks());
    blocks
}

/// Dimension of the fibre over a rational base point: evaluate the
/// relations at `point` and measure the zero set in the fiber coordinates.
pub fn fibre_dimension_at(
    tower: &RingTower,
    point: &[Coef],
    budget: &mut Budget<'_>,
) -> Result<Dimension, FibredError> {
    let vars = tower.vars();
    let base = vars.base_ids();
    if point.len() != base.len() {
        return Err(FibredError::PointArity {
            expected: base.len(),
            got: point.len(),
        });
    }
    let assignment: alloc::collections::BTreeMap<_, _> = base
        .iter()
        .zip(point.iter())
        .map(|(id, c)| (*id, c.clone()))
        .collect();
    let evaluated: Vec<Polynomial> = tower
        .relations()
        .iter()
        .map(|g| g.evaluate(&assignment))
        .filter(|g| !g.is_zero())
        .collect();
    let fiber = vars.fiber_blocks();
    Ok(krull_dimension(vars, &evaluated, &fiber, budget)?)
}

/// The closure of the image in the base: eliminate every fiber block from
/// the relation ideal. Empty output means the ideal is `(0)`, i.e. the
/// projection is dominant.
pub fn image_closure(
    tower: &RingTower,
    budget: &mut Budget<'_>,
) -> Result<Vec<Polynomial>, EngineError> {
    image_closure_of(tower, tower.relations(), budget)
}

fn image_closure_of(
    tower: &RingTower,
    gens: &[Polynomial],
    budget: &mut Budget<'_>,
) -> Result<Vec<Polynomial>, EngineError> {
    eliminate_blocks_ring(tower.vars(), gens, &tower.vars().fiber_blocks(), budget)
}

/// `dim V(I) - dim(image closure)`; see the module notes for the
/// irreducibility caveat. The empty source or empty image reports
/// [`Dimension::EmptyVariety`].
pub fn generic_fibre_dimension(
    tower: &RingTower,
    budget: &mut Budget<'_>,
) -> Result<Dimension, EngineError> {
    let vars = tower.vars();
    let total = krull_dimension(vars, tower.relations(), &all_blocks(tower), budget)?;
    let closure = image_closure(tower, budget)?;
    let image = krull_dimension(vars, &closure, &[crate::variable::Block::Base], budget)?;
    match (total, image) {
        (Dimension::EmptyVariety, _) | (_, Dimension::EmptyVariety) => {
            Ok(Dimension::EmptyVariety)
        }
        (Dimension::Of(t), Dimension::Of(i)) => {
            debug_assert!(t >= i, "image closure cannot exceed source dimension");
            Ok(Dimension::Of(t - i))
        }
    }
}

/// A component is algebraically vertical when its image closure is a proper
/// subvariety of the base, i.e. the elimination ideal is nonzero.
pub fn is_algebraically_vertical(
    tower: &RingTower,
    q: &ComponentIdeal,
    budget: &mut Budget<'_>,
) -> Result<VerticalityCheck, EngineError> {
    let closure = image_closure_of(tower, &q.generators, budget)?;
    let empty_component = closure.iter().any(|p| p.is_constant() && !p.is_zero());
    Ok(VerticalityCheck {
        vertical: !closure.is_empty(),
        empty_component,
    })
}

/// Labels of the supplied components that are algebraically vertical. A
/// nonempty answer is the openness obstruction: some component of the
/// source maps into a proper subvariety of the base. Each component must
/// contain the ambient relation ideal.
pub fn openness_witness(
    tower: &RingTower,
    components: &[ComponentIdeal],
    budget: &mut Budget<'_>,
) -> Result<Vec<String>, FibredError> {
    let vars = tower.vars();
    for q in components {
        let wrapped: Vec<FreeVector> = q
            .generators
            .iter()
            .cloned()
            .map(FreeVector::scalar)
            .collect();
        let gb = reduced_generators(vars, 1, &wrapped, budget)?;
        for rel in tower.relations() {
            if !gb.contains(&FreeVector::scalar(rel.clone())) {
                return Err(FibredError::ComponentMissingIdeal(q.label.clone()));
            }
        }
    }
    let mut vertical = Vec::new();
    for q in components {
        if is_algebraically_vertical(tower, q, budget)?.vertical {
            vertical.push(q.label.clone());
        }
    }
    Ok(vertical)
}

/// Summary of how the source sits over the base at one point.
#[derive(Clone, Debug)]
pub struct FibreReport {
    pub point: Vec<Coef>,
    pub fibre_dimension: Dimension,
    pub generic_fibre_dimension: Dimension,
    pub image_closure: Vec<Polynomial>,
    pub dominant: bool,
}

pub fn fibre_report(
    tower: &RingTower,
    point: &[Coef],
    budget: &mut Budget<'_>,
) -> Result<FibreReport, FibredError> {
    let fibre_dimension = fibre_dimension_at(tower, point, budget)?;
    let image_closure = image_closure(tower, budget)?;
    let generic = generic_fibre_dimension(tower, budget)?;
    let dominant = image_closure.is_empty();
    Ok(FibreReport {
        point: point.to_vec(),
        fibre_dimension,
        generic_fibre_dimension: generic,
        image_closure,
        dominant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::coef_int;
    use crate::presentation::ModulePresentation;
    use crate::variable::{Block, VarId, VarSet, Variable};
    use alloc::string::ToString;
    use alloc::vec;

    fn blowup_tower() -> RingTower {
        let vs = VarSet::new(vec![
            Variable::new("y1", Block::Base),
            Variable::new("y2", Block::Base),
            Variable::new("x", Block::Fiber(1)),
        ])
        .unwrap();
        let y1 = Polynomial::variable(VarId(0), 3);
        let y2 = Polynomial::variable(VarId(1), 3);
        let x = Polynomial::variable(VarId(2), 3);
        RingTower::new(vs, vec![&(&x * &y1) - &y2]).unwrap()
    }

    fn pt(a: i64, b: i64) -> Vec<Coef> {
        vec![coef_int(a), coef_int(b)]
    }

    #[test]
    fn blowup_fibre_dimensions() {
        let t = blowup_tower();
        let mut bud = Budget::unbounded();
        assert_eq!(
            fibre_dimension_at(&t, &pt(0, 0), &mut bud).unwrap(),
            Dimension::Of(1)
        );
        assert_eq!(
            fibre_dimension_at(&t, &pt(1, 0), &mut bud).unwrap(),
            Dimension::Of(0)
        );
        assert_eq!(
            fibre_dimension_at(&t, &pt(0, 1), &mut bud).unwrap(),
            Dimension::EmptyVariety
        );
    }

    #[test]
    fn point_arity_checked() {
        let t = blowup_tower();
        let mut bud = Budget::unbounded();
        assert_eq!(
            fibre_dimension_at(&t, &[coef_int(1)], &mut bud).unwrap_err(),
            FibredError::PointArity { expected: 2, got: 1 }
        );
    }

    #[test]
    fn blowup_is_dominant_with_generic_fibre_dimension_zero() {
        let t = blowup_tower();
        let mut bud = Budget::unbounded();
        let report = fibre_report(&t, &pt(0, 0), &mut bud).unwrap();
        assert!(report.dominant);
        assert!(report.image_closure.is_empty());
        assert_eq!(report.generic_fibre_dimension, Dimension::Of(0));
        assert_eq!(report.fibre_dimension, Dimension::Of(1));
    }

    #[test]
    fn free_line_over_plane() {
        let vs = VarSet::new(vec![
            Variable::new("y1", Block::Base),
            Variable::new("y2", Block::Base),
            Variable::new("x", Block::Fiber(1)),
        ])
        .unwrap();
        let t = RingTower::polynomial(vs).unwrap();
        let mut bud = Budget::unbounded();
        let report = fibre_report(&t, &pt(3, -2), &mut bud).unwrap();
        assert!(report.dominant);
        assert_eq!(report.fibre_dimension, Dimension::Of(1));
        assert_eq!(report.generic_fibre_dimension, Dimension::Of(1));
    }

    #[test]
    fn non_dominant_image_closure() {
        let vs = VarSet::new(vec![
            Variable::new("y1", Block::Base),
            Variable::new("y2", Block::Base),
            Variable::new("x", Block::Fiber(1)),
        ])
        .unwrap();
        let y1 = Polynomial::variable(VarId(0), 3);
        let x = Polynomial::variable(VarId(2), 3);
        let t = RingTower::new(vs, vec![x, y1]).unwrap();
        let mut bud = Budget::unbounded();
        let closure = image_closure(&t, &mut bud).unwrap();
        let printed: Vec<_> = closure
            .iter()
            .map(|p| p.to_display_string(t.vars()))
            .collect();
        assert_eq!(printed, ["y1"]);
    }

    #[test]
    fn unit_component_is_vertical_and_degenerate() {
        let t = blowup_tower();
        let mut bud = Budget::unbounded();
        let q = ComponentIdeal {
            label: "degenerate".to_string(),
            generators: vec![Polynomial::one(3)],
        };
        let check = is_algebraically_vertical(&t, &q, &mut bud).unwrap();
        assert!(check.vertical);
        assert!(check.empty_component);
    }

    #[test]
    fn upper_semicontinuity_on_a_grid() {
        let t = blowup_tower();
        let mut bud = Budget::unbounded();
        for a in -2..=2i64 {
            for b in -2..=2i64 {
                let d = fibre_dimension_at(&t, &pt(a, b), &mut bud).unwrap();
                if a == 0 && b == 0 {
                    assert_eq!(d, Dimension::Of(1));
                } else {
                    // Off the exceptional locus the fibre is a point or empty.
                    assert!(d == Dimension::Of(0) || d == Dimension::EmptyVariety);
                    if b == 0 || (a != 0 && b % a == 0) {
                        assert_eq!(d, Dimension::Of(0), "point ({a}, {b}) lies in the image");
                    }
                }
            }
        }
    }

    #[test]
    fn openness_witness_flags_the_exceptional_component() {
        let pres = ModulePresentation::algebra(blowup_tower());
        let square = pres.tensor_power(2).unwrap();
        let tower = square.tower();
        let rels = tower.relations().to_vec();
        let nv = tower.vars().len();
        let y1 = Polynomial::variable(VarId(0), nv);
        let y2 = Polynomial::variable(VarId(1), nv);

        let mut exceptional = rels.clone();
        exceptional.push(y1);
        exceptional.push(y2);
        let components = vec![
            ComponentIdeal {
                label: "exceptional".to_string(),
                generators: exceptional,
            },
            ComponentIdeal {
                label: "whole".to_string(),
                generators: rels,
            },
        ];
        let mut bud = Budget::unbounded();
        let flagged = openness_witness(tower, &components, &mut bud).unwrap();
        assert_eq!(flagged, ["exceptional"]);
    }

    #[test]
    fn openness_witness_validates_containment() {
        let t = blowup_tower();
        let mut bud = Budget::unbounded();
        let bogus = ComponentIdeal {
            label: "bogus".to_string(),
            generators: vec![Polynomial::variable(VarId(0), 3)],
        };
        assert_eq!(
            openness_witness(&t, &[bogus], &mut bud).unwrap_err(),
            FibredError::ComponentMissingIdeal("bogus".to_string())
        );
    }
}
