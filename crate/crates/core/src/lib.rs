//! Generalized Kuperberg sl(3) bracket for virtual and free knots.
//!
//! A Gauss code is expanded over its `2^n` crossing states into trivalent
//! bipartite webs; each web is rewritten by the loop, bigon and square rules
//! into a combination of irreducible webs with Laurent polynomial
//! coefficients.

pub mod algebra;
pub mod bracket;
pub mod canon;
pub mod cli;
pub mod diagram;
pub mod error;
pub mod reduce;
pub mod web;

pub use error::Error;
