// Negated comparisons such as `!(x < 1.0)` are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ball;
pub mod boundary;
pub mod disc;
pub mod error;
pub mod herglotz;
pub mod holomap;
pub mod numeric;
pub mod report;
pub mod rigidity;
pub mod series;

pub use error::{Error, Result};
