//! Gröbner bases for submodules of free modules over (Laurent) polynomial
//! rings with rational coefficients, initial modules and Gröbner stratifications.

mod buchberger;
mod gb;
mod initial;
mod order;
mod poly;
mod stratification;

pub use gb::{colon, laurent_canonical, membership, reduced_gb, saturate, syzygies, MarkedGB, Submodule};
pub use initial::{initial_form, initial_module, InitialModuleOracle};
pub use order::{integer_weights, TermOrder};
pub use poly::{fmt_rational, parse_rational, var_name, Exponent, ModuleVector, Poly, PolyMatrix, Q};
pub use stratification::{groebner_stratification, GroebnerStratification};
