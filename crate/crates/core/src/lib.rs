//! Instrument design and Markov-order inference for noisy chaotic maps.
//!
//! The pipeline: iterate a noisy map ([`dynamics`]), coarse-grain it with a
//! threshold partition ([`symbolize`]), collect word statistics
//! ([`counts`]), compute exact Dirichlet-multinomial evidence
//! ([`inference`]), select a Markov order ([`order`]) and estimate the
//! entropy rate of the selected model ([`entropy`]). [`sweep`] runs the
//! whole thing over a grid of decision points.

pub mod counts;
pub mod dynamics;
pub mod entropy;
pub mod error;
pub mod inference;
pub mod order;
pub mod special;
pub mod sweep;
pub mod symbolize;

pub use error::{Error, Result};
