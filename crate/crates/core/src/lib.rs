//! Closed-cell foam modelling: periodic RVE generation, frame-FE homogenization,
//! fuzzy material description and bending of layered foam beams.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beam;
pub mod config;
pub mod dataset;
pub mod error;
pub mod fem;
pub mod fuzzy;
pub mod material;
pub mod rve;

pub use error::{Error, Result};
