//! Host-side companion to `flatkit-core`: problem files, wall clocks,
//! corpus running and report rendering. The `flatkit` binary is a thin
//! argument-parsing layer over this library.

pub mod clock;
pub mod corpus;
pub mod problem;
pub mod render;

pub use problem::{parse_problem, ParseError, ProblemFile};
