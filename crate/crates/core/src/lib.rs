pub mod corpus;
pub mod error;
pub mod mellin;
pub mod numerics;
pub mod quadrature;
pub mod rates;
pub mod tables;

pub use error::{Error, Result};
pub use numerics::{HPComplex, HPReal};
