//! Numerical laboratory for holomorphic self-maps of the unit ball `B_n` and
//! the mean-ergodic behaviour of their composition operators on `H^inf(B_n)`.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: automorphisms, Bergman distance, Bergman balls.
//! - [`holomap`]: representation, evaluation, composition, iteration and
//!   differentiation of self-maps.
//! - [`dynamics`]: fixed points, retractions of iterate limits, normal forms,
//!   Denjoy-Wolff points.
//! - [`ergodicity`]: sup-norm estimates, the decay criterion, Cesaro means and
//!   the classifier.
//! - [`mapfile`] and [`report`]: the text formats used by the CLI.

pub mod dynamics;
pub mod ergodicity;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod holomap;
pub mod linalg;
pub mod mapfile;
pub mod poly;
pub mod report;
pub mod vec;

pub use error::{Error, Result};
pub use holomap::{HoloMap, MapKind};
pub use num_complex::Complex64;
pub use vec::ComplexVec;
