//! Exact computations in oriented graph complexes.
//!
//! The crate builds bases of the bigraded slices of the oriented graph
//! complex and of its one-reduced skeleton model, assembles the
//! edge-contraction differential with exact signs, splits everything under
//! the direction-reversing involution, and certifies cohomology statements
//! (acyclicity of the minus part, skeleton quasi-isomorphisms, the core-graph
//! filtration argument) by sparse rank computations over large prime fields
//! with a rational fallback.

pub mod basis;
pub mod cache;
pub mod canon;
pub mod corephi;
pub mod complex;
pub mod error;
pub mod graph;
pub mod homology;
pub mod involution;
pub mod lie;
pub mod matrix;
pub mod skeleton;
pub mod verify;

pub use canon::{canonicalize, CanonOutcome, GraphClass, Parity, SignedClass};
pub use error::OgcError;
pub use graph::{AdmissibilityRules, LabeledGraph};
