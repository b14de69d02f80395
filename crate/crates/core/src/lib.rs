//! Exact computations around nodal quartic threefolds: node discovery and
//! certification, the degree-3 defect of the node set, the factoriality
//! decision tree, point-configuration incidence checks, intersection numbers on
//! Hirzebruch surfaces, and the `QQ' - LC` family with its birational models.

pub mod arith;
pub mod cli;
pub mod defect;
pub mod enumerate;
pub mod error;
pub mod piclattice;
pub mod poly;
pub mod projgeo;
pub mod quartic;
pub mod surfgeo;

pub use error::{Error, Result};
