//! Exact computational toolkit for statifications of modules on toric
//! varieties: polyhedral fans, Gröbner stratifications, staticity via Koszul
//! homology, statification certificates, and chip firing on graphs.

pub mod error;
pub mod groebner;
pub mod json;
pub mod linalg;
pub mod polyhedral;
pub mod staticity;
pub mod statify;
pub mod tropical_pic;

pub use error::{Error, Result};
