//! Term orders on free modules.
//!
//! An order is a sequence of comparison levels, applied until one decides.
//! A level either compares exponents of a group of variable blocks (graded
//! reverse lexicographic or lexicographic within the group) or compares the
//! ambient component, lower index first. This one mechanism covers all the
//! orders the engine needs:
//!
//! * position-over-term: `[Position, Rest(Grevlex)]`, the default and the
//!   canonical reference order for reduced bases;
//! * elimination of a block group: `[Vars(kill, Grevlex), Position, Rest]`,
//!   where any element whose lead avoids the killed variables avoids them
//!   entirely;
//! * the contraction order `[Vars(fiber, Grevlex), Position, Rest]`, under
//!   which the lead of an element agrees with its lead over the rational
//!   function field of the base, so base-variable lead coefficients can be
//!   read off directly.
//!
//! Every level grades by a degree before breaking ties, and components are
//! finitely many, so each order is a well-order compatible with monomial
//! multiplication.

use crate::monomial::Monomial;
use crate::variable::{Block, VarId, VarSet};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerOrder {
    Lex,
    Grevlex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderLevel {
    /// Compare exponents of the variables in the given blocks.
    Vars { blocks: Vec<Block>, inner: InnerOrder },
    /// Compare ambient components; a lower index is greater.
    Position,
    /// Compare exponents of every variable not consumed by an earlier level.
    Rest(InnerOrder),
}

/// A module term order described independently of a concrete universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleOrder {
    levels: Vec<OrderLevel>,
}

impl ModuleOrder {
    pub fn new(levels: Vec<OrderLevel>) -> Self {
        ModuleOrder { levels }
    }

    /// Position over term, grevlex on all variables. The default order and
    /// the one reduced bases are canonicalized against.
    pub fn pot_grevlex() -> Self {
        ModuleOrder::new(alloc::vec![
            OrderLevel::Position,
            OrderLevel::Rest(InnerOrder::Grevlex),
        ])
    }

    /// Position over term, lexicographic on all variables.
    pub fn pot_lex() -> Self {
        ModuleOrder::new(alloc::vec![
            OrderLevel::Position,
            OrderLevel::Rest(InnerOrder::Lex),
        ])
    }

    /// Elimination order killing the given blocks: any exponent there
    /// dominates position and the remaining variables.
    pub fn elimination(kill: Vec<Block>) -> Self {
        ModuleOrder::new(alloc::vec![
            OrderLevel::Vars {
                blocks: kill,
                inner: InnerOrder::Grevlex,
            },
            OrderLevel::Position,
            OrderLevel::Rest(InnerOrder::Grevlex),
        ])
    }

    /// Grevlex restricted to the given blocks, position-over-term. Inputs
    /// must be supported inside those blocks.
    pub fn blocks_grevlex(blocks: Vec<Block>) -> Self {
        ModuleOrder::new(alloc::vec![
            OrderLevel::Position,
            OrderLevel::Vars {
                blocks,
                inner: InnerOrder::Grevlex,
            },
        ])
    }

    pub fn levels(&self) -> &[OrderLevel] {
        &self.levels
    }

    /// Resolves block references against a universe.
    pub fn compile(&self, vars: &VarSet) -> CompiledOrder {
        let mut consumed = alloc::vec![false; vars.len()];
        let mut levels = Vec::with_capacity(self.levels.len());
        for level in &self.levels {
            match level {
                OrderLevel::Position => levels.push(CompiledLevel::Position),
                OrderLevel::Vars { blocks, inner } => {
                    let ids: Vec<VarId> = vars
                        .ids()
                        .filter(|id| blocks.contains(&vars.block(*id)) && !consumed[id.0])
                        .collect();
                    for id in &ids {
                        consumed[id.0] = true;
                    }
                    levels.push(CompiledLevel::Exps { ids, inner: *inner });
                }
                OrderLevel::Rest(inner) => {
                    let ids: Vec<VarId> = vars.ids().filter(|id| !consumed[id.0]).collect();
                    for id in &ids {
                        consumed[id.0] = true;
                    }
                    levels.push(CompiledLevel::Exps { ids, inner: *inner });
                }
            }
        }
        CompiledOrder { levels, covered: consumed }
    }
}

impl fmt::Display for ModuleOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for level in &self.levels {
            if !first {
                write!(f, " > ")?;
            }
            first = false;
            match level {
                OrderLevel::Position => write!(f, "position")?,
                OrderLevel::Vars { blocks, inner } => {
                    write!(f, "{:?}{:?}", blocks, inner)?;
                }
                OrderLevel::Rest(inner) => write!(f, "rest{:?}", inner)?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum CompiledLevel {
    Position,
    Exps { ids: Vec<VarId>, inner: InnerOrder },
}

/// A term order resolved against a concrete universe.
#[derive(Clone, Debug)]
pub struct CompiledOrder {
    levels: Vec<CompiledLevel>,
    covered: Vec<bool>,
}

fn cmp_exps(ids: &[VarId], inner: InnerOrder, a: &Monomial, b: &Monomial) -> Ordering {
    match inner {
        InnerOrder::Lex => {
            for id in ids {
                match a.exp(*id).cmp(&b.exp(*id)) {
                    Ordering::Equal => {}
                    other => return other,
                }
            }
            Ordering::Equal
        }
        InnerOrder::Grevlex => {
            let da: u32 = ids.iter().map(|id| a.exp(*id)).sum();
            let db: u32 = ids.iter().map(|id| b.exp(*id)).sum();
            match da.cmp(&db) {
                Ordering::Equal => {}
                other => return other,
            }
            for id in ids.iter().rev() {
                // Smaller exponent in the last differing variable wins.
                match b.exp(*id).cmp(&a.exp(*id)) {
                    Ordering::Equal => {}
                    other => return other,
                }
            }
            Ordering::Equal
        }
    }
}

impl CompiledOrder {
    /// Compares module terms `(component, monomial)`.
    pub fn cmp(&self, ca: usize, ma: &Monomial, cb: usize, mb: &Monomial) -> Ordering {
        self.cmp_prefix(self.levels.len(), ca, ma, cb, mb)
    }

    /// Compares using only the first `n` levels. Used to group terms that
    /// share the dominant part of the order, e.g. the fiber exponents and the
    /// component under the contraction order.
    pub fn cmp_prefix(
        &self,
        n: usize,
        ca: usize,
        ma: &Monomial,
        cb: usize,
        mb: &Monomial,
    ) -> Ordering {
        for level in &self.levels[..n] {
            let r = match level {
                CompiledLevel::Position => cb.cmp(&ca),
                CompiledLevel::Exps { ids, inner } => cmp_exps(ids, *inner, ma, mb),
            };
            if r != Ordering::Equal {
                return r;
            }
        }
        Ordering::Equal
    }

    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.cmp(0, a, 0, b)
    }

    pub fn levels(&self) -> &[CompiledLevel] {
        &self.levels
    }

    /// True when every variable with positive exponent in `m` is consumed by
    /// some level, i.e. the order is total on terms built from `m`'s support.
    pub fn covers(&self, m: &Monomial) -> bool {
        m.supported_within(|id| self.covered[id.0])
    }
}
