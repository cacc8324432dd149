//! Exact arithmetic in hyperalgebras of Chevalley groups over `F_p`:
//! PBW normal forms, the Frobenius map and its splitting, torus idempotents
//! and rank checks for multiplication maps.

pub mod chevalley;
pub mod commute;
pub mod error;
pub mod fp;
pub mod frobenius;
pub mod grammar;
pub mod hpart;
pub mod idempotents;
pub mod isocheck;
pub mod linalg;
pub mod qoracle;
pub mod rootdata;
pub mod straighten;
pub mod suite;

pub use error::{Error, Result};
