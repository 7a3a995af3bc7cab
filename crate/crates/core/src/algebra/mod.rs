//! Coefficient ring and the graph module the bracket takes values in.

mod element;
mod laurent;

pub use element::{Coefficient, Combination, IntModuleElement, ModuleElement, Monomial};
pub use laurent::{bigon_value, loop_value, LaurentPoly};
