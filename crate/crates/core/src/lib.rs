//! Codimension bounds for loci of homogeneous form tuples whose common zero
//! set has excess dimension, plus a finite-field laboratory that counts such
//! tuples by brute force.

pub mod bounds;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod exactmath;
pub mod gfpoly;

pub use error::{Error, Result};
pub use exactmath::ExactInt;
