//! Entanglement dynamics of two dipole-coupled atoms under collective
//! spontaneous emission, with local unitary switching used to avoid, delay or
//! hasten entanglement sudden death.

// `!(x > 0.0)` style guards are intentional: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod esd;
pub mod io;
pub mod metrics;
pub mod operator;
pub mod parallel;
pub mod state;
pub mod sweep;
pub mod switching;
pub mod tables;

pub use error::{Error, Result};
