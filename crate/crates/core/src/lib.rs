//! Exact lattice, cluster and valuation computations for adjacency
//! problems between families of arcs on surface singularities.
//!
//! Everything is computed over the integers and rationals; nothing here
//! touches floating point.
//!
//! ```
//! use wedgekit::fixtures::two_directions;
//! use wedgekit::valuation::{compare, Comparison};
//!
//! let c = two_directions();
//! assert_eq!(compare(&c, 0, 1).unwrap(), Comparison::LessEq);
//! assert_eq!(compare(&c, 1, 2).unwrap(), Comparison::Incomparable);
//! ```

pub mod canon;
pub mod cluster;
pub mod dfd;
pub mod document;
pub mod error;
pub mod euler;
pub mod fixtures;
pub mod graph;
pub mod kb;
pub mod matrix;
pub mod obstruction;
pub mod poly;
pub mod rational;
pub mod valuation;

pub use canon::{canonical_key, CanonicalKey};
pub use cluster::{BlowupCluster, ClusterPoint, Tangent};
pub use error::{Error, Result};
pub use graph::{DualGraph, Vertex, VertexId};
pub use matrix::ExactMatrix;
pub use obstruction::{ObstructionVerdict, Status, Witness};
pub use poly::LocalPolynomial;
pub use rational::Rational;
pub use valuation::Comparison;

// The guide's Rust snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lattices.md")]
    mod lattices {}
    #[doc = include_str!("../../../book/src/clusters.md")]
    mod clusters {}
    #[doc = include_str!("../../../book/src/valuations.md")]
    mod valuations {}
    #[doc = include_str!("../../../book/src/obstructions.md")]
    mod obstructions {}
    #[doc = include_str!("../../../book/src/euler.md")]
    mod euler {}
    #[doc = include_str!("../../../book/src/dfd.md")]
    mod dfd {}
    #[doc = include_str!("../../../book/src/canon.md")]
    mod canon {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
