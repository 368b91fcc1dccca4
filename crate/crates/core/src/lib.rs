//! Point-hyperplane anti-flags of PG(n-1, q) over small finite fields.
//!
//! Two distinct anti-flags stand in exactly one of four relations. This
//! crate enumerates anti-flags, builds the four relation graphs, recovers
//! every relation from each single graph (with the documented exception of
//! Γ1 over GF(2)), and at q = 2 rebuilds the hyperbolic polar space
//! O+(2n, 2) from Γ1 alone. Every procedure is checked against the direct
//! geometric classification.

pub mod antiflags;
pub mod error;
pub mod gfq;
pub mod group;
pub mod hyperbolic;
pub mod matrix;
pub mod projgeom;
pub mod recovery;
pub mod relgraphs;
pub mod verify;

pub use antiflags::{AntiFlag, AntiFlags, RelationKind};
pub use error::{Error, Result};
pub use gfq::{Elem, Field};
pub use projgeom::Space;
pub use recovery::PairLabeling;
pub use relgraphs::RelGraph;
