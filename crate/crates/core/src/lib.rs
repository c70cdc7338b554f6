// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod intelligent;
pub mod matrix;
pub mod measure;
mod mp;
pub mod specfun;
pub mod spectrum;
pub mod states;

pub use error::{Error, Result};
pub use matrix::OperatorMatrix;
pub use spectrum::ModelParams;
pub use states::{CoherentLabel, FockVector};
