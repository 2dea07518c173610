//! Exact arithmetic for weakly holomorphic modular forms of level one and
//! prime level `p in {2, 3, 5}`, and a certificate engine for p-adic
//! divisibility of the coefficients of the canonical basis `f_{k,m}`.

pub mod cache;
pub mod error;
pub mod forms;
pub mod integral_bases;
pub mod level_one;
pub mod level_p;
pub mod qseries;
pub mod tables;
pub mod verifier;

pub use error::{Error, Result};
pub use qseries::{QSeries, Valuation};
