//! Weighted partition posets: construction, Möbius invariants, an EL-labeling,
//! bicolored tree bases and exact (co)homology computations.

pub mod acceptance;
pub mod chains;
pub mod error;
pub mod homology;
pub mod invariants;
pub mod labeling;
pub mod linalg;
pub mod partition;
pub mod poly;
pub mod poset;
pub mod report;
pub mod straighten;
pub mod trees;

pub use error::{Caps, Error, Result};
pub use partition::{WeightedBlock, WeightedPartition};
pub use poly::IntPolynomial;
pub use poset::{Element, Poset, Variant};
