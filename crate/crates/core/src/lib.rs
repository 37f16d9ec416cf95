// Negated float comparisons are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod divided;
pub mod error;
pub mod fd;
pub mod mean_force;
pub mod model;
pub mod observables;
pub mod operator;
pub mod sweep;
pub mod work;

pub use error::{Error, Result};
