//! Exact-arithmetic kernel for Kirillov-Reshetikhin character series and
//! Bethe-type counting.
//!
//! The crate computes, over any finite-dimensional simple Lie algebra:
//!
//! - the fermionic counting numbers R(nu, N) and K(nu, N) and the weight
//!   multiplicities they sum to ([`fermionic`]);
//! - the truncated power series they generate, which solve the Q-system
//!   ([`series`], [`qsystem`]);
//! - the string center equation and its off-diagonal solution counts, by
//!   Mobius inversion over set-partition lattices and independently by brute
//!   force through a Smith normal form ([`sce`]);
//! - classical characters via Freudenthal's recursion as an independent
//!   oracle ([`characters`]);
//! - the generating-series identities in the w/v/z variables and the
//!   three-way closed forms of the constant series K^0 ([`genseries`]).
//!
//! All arithmetic is exact: big integers, big rationals, and rationals mod 1
//! for string centers.  No floating point anywhere.

pub mod cartan;
pub mod characters;
pub mod error;
pub mod fermionic;
pub mod genseries;
mod linalg;
pub mod qsystem;
pub mod sce;
pub mod series;

pub use cartan::{build_cartan, simple_reflection, AlgebraId, CartanData, Family, WeightVector};
pub use error::{Error, Result};
pub use fermionic::ModeMap;
pub use series::{GroupAlgebraElement, TruncatedSeries, TruncationSpec};
