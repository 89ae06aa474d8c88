// negated comparisons below are deliberate: they reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod certify;
pub mod error;
pub mod factory;
pub mod hankel;
pub mod laurent;
pub mod linalg;
mod optim;
pub mod schmidt;
pub mod weights;

pub use error::{Error, Result};
pub use laurent::{MatrixLaurentPoly, GridSampling, SingularProfile};
