//! Arbitrary-precision scalars and the number-theoretic helpers built on them.

mod complex;
mod moebius;
mod real;
mod zeta;

pub use complex::HPComplex;
pub use moebius::moebius;
pub use real::{check_precision, HPReal, DEFAULT_PRECISION, MIN_PRECISION};
pub use zeta::{rational_to_hp, zeta};
