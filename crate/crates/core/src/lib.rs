//! Exact combinatorics of convex-polygon dissections and their relatives.
//!
//! The crate models four families of planar objects on a disc boundary —
//! polygon dissections with face sizes ≡ 2 (mod s), pointed dissections,
//! spider collections (non-crossing partitions into s-blocks, with an
//! optional annular hole marking) and labeled non-crossing pairings — and
//! ships three executable bijections between them, closed-form counts with
//! arbitrary-precision arithmetic, independent brute-force enumerators, and
//! a self-verification sweep that cross-checks all of it at desk scale.

pub mod counting;
pub mod dissection;
pub mod pairings;
pub mod psi;
pub mod render;
pub mod spiders;
pub mod verify;

mod error;

pub use error::Error;
