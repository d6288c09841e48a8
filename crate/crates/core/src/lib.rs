//! Deciding, constructing and verifying `(Gamma, S)`-dense vectors for
//! translation operators on weighted `l^p(Z)`, `l^p(Z^d)` and `L^p(R)`.

// `!(x >= y)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod cli;
pub mod criteria;
pub mod error;
pub mod gamma;
pub mod group;
pub mod io;
pub mod repro;
pub mod shifts;
pub mod synthesis;
pub mod weights;
