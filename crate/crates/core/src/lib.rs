//! Symbol calculus on `K_2` of fields: local Hilbert and tame symbols over
//! `Q`, the decomposition of `K_2(Q)`, reciprocity over `F_q(T)`, quadratic
//! forms and quaternion algebras, differential forms in characteristic `p`,
//! zeta identities for function fields and the dilogarithm residue formula.

pub mod arith;
pub mod error;

pub use error::{Error, Result};
pub mod localsym;
pub mod oracles;
pub mod k2q;
pub mod symexpr;
pub mod funcfield;
pub mod quadforms;
pub mod charpforms;
pub mod zeta;
pub mod regnum;
pub mod selftest;
