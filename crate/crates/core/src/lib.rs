//! Numerical reconstruction of the eight-dimensional sphere packing
//! certificate: quasimodular forms, the E8 lattice, the magic function and
//! the linear programming bound it saturates.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod axis;
pub mod cohn_elkies;
pub mod error;
pub mod forms;
pub mod lattice;
pub mod magic;
pub mod packing;
pub mod quadrature;
pub mod series;

pub use error::{Error, Result};
