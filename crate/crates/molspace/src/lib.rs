//! Molecular spaces: finite graphs treated as digital models of continuous
//! spaces, with contractible transformations, clique-complex invariants,
//! recognition of normal spaces, constructions, box coordinates, covers and
//! digitization, and discrete dynamics on graphs.

pub mod budget;
pub mod canon;
pub mod charfn;
pub mod catalog;
pub mod construct;
pub mod digitize;
pub mod dim;
pub mod error;
pub mod euler;
pub mod family;
pub mod graph;
pub mod homology;
pub mod io;
pub mod lattice;
pub mod pde;
pub mod local;
pub mod snf;
pub mod transform;

pub use error::{Error, Result};
pub use graph::{Distance, MolecularSpace, Subspace, VertexId};
