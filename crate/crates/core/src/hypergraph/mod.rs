//! Algebraic (di)hypergraphs: instances, the edge rule, and materialized stores.

pub mod formula;
pub mod instance;
pub mod store;

pub use formula::{BoolFormula, MAX_FORMULA_DEPTH};
pub use instance::{build_instance, AlgebraicInstance, ErSide, InstanceKind, InstanceSpec, VertexGenerator};
pub use store::{check_parts, EdgeStore, DEFAULT_BUDGET, MAX_BITSET_ARITY};
