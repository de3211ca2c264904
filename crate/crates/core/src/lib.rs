//! Exact computations with one-sided topological Markov shifts: continuous
//! full groups given by prefix-exchange tables, integer cocycles, continuous
//! orbit equivalences and conjugacy witnesses.

pub mod cocycle;
pub mod coe;
pub mod conjugacy;
pub mod error;
pub mod format;
pub mod locfun;
pub mod selftest;
pub mod sft;
pub mod table;

pub use error::{Error, Result};
pub use locfun::LocFun;
pub use table::TableElement;
