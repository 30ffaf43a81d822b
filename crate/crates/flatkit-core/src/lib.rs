//! Exact commutative-algebra kernel for flatness testing over polynomial base rings.
//!
//! Everything here is computed over `Q` with arbitrary-precision rational
//! arithmetic; there is no floating point anywhere. The crate decides whether a
//! finitely presented module `F` over a polynomial algebra `A` of finite type
//! over a base ring `R = Q[y1..yn]` is `R`-flat, by testing the `n`-fold tensor
//! power of `F` over `R` for `R`-torsion. A failed test is returned together
//! with a torsion certificate `(m, r)` that can be re-checked by two membership
//! tests alone.
//!
//! Working over `Q` instead of an algebraically closed field is sound for
//! `Q`-defined input: Groebner bases, elimination and saturation are computed
//! from the input coefficients by field operations only, so they commute with
//! the coefficient extension `Q -> C`. In particular a torsion witness found
//! over `Q` stays a witness over `C`, and a vanishing torsion module stays zero
//! after extension (the saturation of the extended module is the extension of
//! the saturation).
//!
//! The crate is `no_std` (with `alloc`). Wall-clock budgets are enforced
//! through the [`limits::Deadline`] trait so that a host environment can plug
//! in a real clock; see the companion CLI crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod fibred;
pub mod flatness;
pub mod groebner;
pub mod ideal_ops;
pub mod limits;
pub mod linalg;
pub mod monomial;
pub mod oracle;
pub mod order;
pub mod polynomial;
pub mod presentation;
pub mod torsion;
pub mod tower;
pub mod variable;
pub mod vector;

pub use monomial::Monomial;
pub use polynomial::{Coef, Polynomial};
pub use variable::{Block, VarId, VarSet, Variable};
pub use vector::FreeVector;
