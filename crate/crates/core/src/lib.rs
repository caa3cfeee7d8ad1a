//! Exact arithmetic for the minimal representation of the simply connected
//! Chevalley group of type E7.
//!
//! The crate builds, from scratch and in integer arithmetic, the E8 root
//! system, a consistent table of Chevalley structure constants, the action of
//! the (extended) E7 Chevalley group on the 56-dimensional module `V`, the
//! invariant symplectic form `h` and four-linear form `f`, and the system of
//! 133 quadrics cutting out the highest weight orbit.  On top of those tables
//! it provides exact linear-algebra decision procedures: degree-2 ideal
//! membership, Lie-algebra stabilizer dimensions, and group membership tests.
//!
//! Everything is computed over pluggable exact rings (arbitrary-precision
//! integers, rationals, prime fields); no floating point is used anywhere.
//!
//! The crate is `no_std` (with `alloc`); IO, serialization and the command
//! line front end live in the companion `e756-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
#[macro_use]
extern crate std;

pub mod chevalley;
pub mod forms;
pub mod matrix;
pub mod quadrics;
pub mod rep56;
pub mod ring;
pub mod roots;
pub mod solve;
pub mod stabilizer;

pub use chevalley::ChevalleyBasis;
pub use matrix::Matrix;
pub use ring::{Field, IntRing, PrimeField, RatField, Ring, RingKind};
pub use roots::{Root, RootSystem, Weight};
