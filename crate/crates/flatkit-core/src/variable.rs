//! Variable universes.
//!
//! Every polynomial in this crate lives over a fixed, ordered list of
//! variables, the [`VarSet`]. Exponent vectors are indexed by position in that
//! list, so a polynomial is only meaningful together with the universe it was
//! built against. Universes are immutable; operations that need extra helper
//! variables (saturation, intersection) build an extended universe, work
//! there, and project back.
//!
//! Variables are tagged with the tier of the ring tower they belong to. The
//! base block holds the coordinates of the ring we test flatness over; fiber
//! blocks hold one renamed copy of the fiber coordinates per tensor factor;
//! the auxiliary block is reserved for variables introduced internally and is
//! never allowed in user-facing input.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Tier of the ring tower a variable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Block {
    /// Coordinates of the base ring `R = Q[y1..yn]`.
    Base,
    /// One copy of the fiber coordinates; copies are labelled from 1.
    Fiber(u32),
    /// Helper variables introduced by saturation and intersection tricks.
    Aux,
}

impl Block {
    pub fn is_fiber(&self) -> bool {
        matches!(self, Block::Fiber(_))
    }
}

/// A named variable together with its block tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub block: Block,
}

impl Variable {
    pub fn new(name: impl Into<String>, block: Block) -> Self {
        Variable {
            name: name.into(),
            block,
        }
    }
}

/// Index of a variable inside its [`VarSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarSetError {
    /// Two variables share a name.
    DuplicateName(String),
    /// Variables are not grouped as base, then fiber blocks by label, then aux.
    NonCanonicalLayout(String),
}

impl fmt::Display for VarSetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarSetError::DuplicateName(n) => write!(f, "duplicate variable name `{n}`"),
            VarSetError::NonCanonicalLayout(n) => {
                write!(f, "variable `{n}` breaks the base / fiber / aux block layout")
            }
        }
    }
}

/// An immutable ordered variable universe.
///
/// Layout invariant: base variables first, then fiber blocks in increasing
/// label order, then auxiliary variables. Within a block the declaration
/// order is kept. The invariant makes variable indices stable across the
/// extension tricks and keeps renaming maps trivial to build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSet {
    vars: Vec<Variable>,
}

fn block_rank(b: Block) -> (u8, u32) {
    match b {
        Block::Base => (0, 0),
        Block::Fiber(l) => (1, l),
        Block::Aux => (2, 0),
    }
}

impl VarSet {
    pub fn new(vars: Vec<Variable>) -> Result<Self, VarSetError> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(VarSetError::DuplicateName(v.name.clone()));
            }
        }
        for w in vars.windows(2) {
            if block_rank(w[1].block) < block_rank(w[0].block) {
                return Err(VarSetError::NonCanonicalLayout(w[1].name.clone()));
            }
        }
        Ok(VarSet { vars })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn get(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.vars[id.0].name
    }

    pub fn block(&self, id: VarId) -> Block {
        self.vars[id.0].block
    }

    pub fn index_of(&self, name: &str) -> Option<VarId> {
        self.vars.iter().position(|v| v.name == name).map(VarId)
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.vars.len()).map(VarId)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &Variable)> {
        self.vars.iter().enumerate().map(|(i, v)| (VarId(i), v))
    }

    pub fn ids_in_blocks<'a>(&'a self, blocks: &'a [Block]) -> impl Iterator<Item = VarId> + 'a {
        self.iter()
            .filter(move |(_, v)| blocks.contains(&v.block))
            .map(|(id, _)| id)
    }

    pub fn base_ids(&self) -> Vec<VarId> {
        self.ids_in_blocks(&[Block::Base]).collect()
    }

    pub fn n_base(&self) -> usize {
        self.vars.iter().filter(|v| v.block == Block::Base).count()
    }

    /// Labels of the fiber blocks present, in increasing order.
    pub fn fiber_labels(&self) -> Vec<u32> {
        let mut labels: Vec<u32> = Vec::new();
        for v in &self.vars {
            if let Block::Fiber(l) = v.block {
                if labels.last() != Some(&l) {
                    labels.push(l);
                }
            }
        }
        labels
    }

    pub fn fiber_blocks(&self) -> Vec<Block> {
        self.fiber_labels().into_iter().map(Block::Fiber).collect()
    }

    pub fn has_aux(&self) -> bool {
        self.vars.iter().any(|v| v.block == Block::Aux)
    }

    /// Extends the universe with a fresh auxiliary variable appended at the
    /// end. The name is derived from `stem` and uniquified if needed.
    pub fn with_aux(&self, stem: &str) -> (VarSet, VarId) {
        let mut name = String::from(stem);
        while self.index_of(&name).is_some() {
            name.push('_');
        }
        let mut vars = self.vars.clone();
        vars.push(Variable::new(name, Block::Aux));
        let id = VarId(vars.len() - 1);
        (VarSet { vars }, id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn universe() -> VarSet {
        VarSet::new(vec![
            Variable::new("y1", Block::Base),
            Variable::new("y2", Block::Base),
            Variable::new("x", Block::Fiber(1)),
        ])
        .unwrap()
    }

    #[test]
    fn lookup_and_blocks() {
        let vs = universe();
        assert_eq!(vs.len(), 3);
        assert_eq!(vs.index_of("x"), Some(VarId(2)));
        assert_eq!(vs.index_of("z"), None);
        assert_eq!(vs.block(VarId(0)), Block::Base);
        assert_eq!(vs.base_ids(), vec![VarId(0), VarId(1)]);
        assert_eq!(vs.fiber_labels(), vec![1]);
    }

    #[test]
    fn rejects_duplicates() {
        let err = VarSet::new(vec![
            Variable::new("x", Block::Base),
            Variable::new("x", Block::Fiber(1)),
        ])
        .unwrap_err();
        assert_eq!(err, VarSetError::DuplicateName("x".into()));
    }

    #[test]
    fn rejects_interleaved_blocks() {
        let err = VarSet::new(vec![
            Variable::new("x", Block::Fiber(1)),
            Variable::new("y", Block::Base),
        ])
        .unwrap_err();
        assert!(matches!(err, VarSetError::NonCanonicalLayout(_)));
    }

    #[test]
    fn aux_extension_uniquifies() {
        let vs = VarSet::new(vec![Variable::new("t", Block::Base)]).unwrap();
        let (ext, id) = vs.with_aux("t");
        assert_eq!(ext.name(id), "t_");
        assert_eq!(ext.block(id), Block::Aux);
        assert_eq!(ext.len(), 2);
    }
}
