//! Exact computations in twisted Brin–Thompson groups `SV_G` and their
//! groupoids.
//!
//! Elements of the groupoid are stored as paired dyadic partitions of
//! multi-cube Cantor spaces `C^S(m)` with a group label per brick pair. The
//! crate covers element arithmetic, normal forms and factorizations, the
//! coset poset used for finiteness properties, and homology of the
//! descending-link complexes built from it.

pub mod action;
pub mod cantor;
pub mod checks;
pub mod complex;
pub mod element;
pub mod error;
pub mod par;
pub mod sample;
pub mod words;

pub use action::GroupAction;
pub use cantor::{BinaryWord, Brick, Color, Dyadic, Partition, PointPrefix};
pub use element::{Element, Forest, Piece, TwistedPermutation};
pub use error::{Error, Result};
pub use words::Word;
