//! Finite-domain workbench for the Galois connection between B-valued
//! functions on A and A-to-B relational constraints.
//!
//! Elements are indices `0..size`; tuples, relations and function tables
//! are all addressed by lexicographic rank with the first coordinate most
//! significant. Every enumeration that can blow up is guarded by a
//! [`Config`] budget.

pub mod bitset;
pub mod class;
pub mod config;
pub mod constraint_closures;
pub mod domain;
pub mod error;
pub mod function;
pub mod function_closures;
pub mod galois_lab;
pub mod minors;
mod par;
pub mod relation;
pub mod sampling;
pub mod satisfaction;

pub use class::{ConstraintSet, FunctionClass, ObjectSet};
pub use config::{Config, Execution};
pub use domain::{Domain, DomainSpec, Elem, Tuple};
pub use error::{Error, Result};
pub use function::{enumerate_functions, projection, FunctionTable};
pub use minors::{MinorMode, Scheme, Slot};
pub use relation::{canonical_constraint, relaxation_of, CanonicalKind, Constraint, Relation};
