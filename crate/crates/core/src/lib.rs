//! Exact solver for transferable-utility cooperative games.
//!
//! Games are stored over bitmask coalitions with arbitrary-precision rational
//! worths. The crate computes pre-kernel points through the least-squares
//! characterisation of the maximum-surplus balance conditions, computes the
//! pre-nucleolus by sequential linear programming, certifies singleton
//! pre-kernels, and generates families of related games that keep a given
//! pre-kernel point.
//!
//! ```
//! use tugames::{fixtures, prekernel, prenucleolus};
//!
//! let game = fixtures::average_convex_default();
//! let x = prekernel::prekernel_point(&game).unwrap();
//! assert_eq!(x, prenucleolus::prenucleolus(&game));
//! assert_eq!(x.to_string(), "(44/9, 4, 32/9, 32/9)");
//! ```

pub mod cli;
pub mod coalition;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod prekernel;
pub mod prenucleolus;
pub mod rational;
pub mod replication;

pub use coalition::Coalition;
pub use error::{Error, Result};
pub use game::{Payoff, TuGame};
pub use rational::Rational;
