//! Reconfiguration of homomorphisms between reflexive oriented cycles.
//!
//! Oriented cycles are written as strings over `+`, `-` and `*`. The crate
//! decides whether two homomorphisms `C -> D` lie in the same component of
//! the Hom-graph, describes all its components, and cross-checks both
//! answers against exhaustive enumeration on small instances.

pub mod bench;
pub mod cli;
pub mod engine;
pub mod error;
pub mod hom;
pub mod oracle;
pub mod orientation;
pub mod star;

pub use engine::{characterize, decide, ClassMode, ComponentReport, Decision, DecisionReason, Reconfigurer};
pub use error::{HomError, OracleError, OrientationError};
pub use hom::{validate_hom, CycleHom};
pub use orientation::{OrientationString, OrientationSymbol};
