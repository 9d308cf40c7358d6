//! Galois closures, generalized stabilizers, rank calculus and
//! reconstruction maps, computed exactly on finite-field vector spaces,
//! pure sets and explicit finite structures.

pub mod auto;
pub mod backend;
pub mod element;
pub mod error;
pub mod expanded;
pub mod field;
pub mod finite;
pub mod geometry;
pub mod perm;
pub mod rank;
pub mod reconstruction;
pub mod report;
pub mod sample;
pub mod stabilizer;
pub mod vector;

pub use auto::{Automorphism, Semilinear};
pub use backend::{Backend, Capabilities, ClosedSet, ClosureKind, Depth, FiniteBackend, Orbit};
pub use element::{Element, PartialMap};
pub use error::{Error, Result};
pub use field::Gf;
pub use finite::{aut_group_finite, FiniteStructure, Relation};
pub use perm::{Perm, PermGroup, Table};
pub use vector::{Matrix, SparseVec, Span};
pub use stabilizer::{GsDescriptor, LascarWitness, SubgroupHandle};
pub use rank::{AxiomReport, IndependenceWitness, RankFunction, Status};
pub use geometry::{canonical_geometry, ClosureOp, Geometry, GeometryAutomorphism};
pub use expanded::{ExpandedWindow, Triple, WindowMap};
pub use reconstruction::{DiagramReport, HomomorphismRecord, KernelElement};
pub use report::{list_suites, replay, run, RunConfig, RunReport, SuiteReport};
