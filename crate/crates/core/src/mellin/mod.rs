//! Integrand descriptors and the Mellin calculus on them.

mod distance;
pub mod envelope;
mod ops;
mod spec;
mod transform;

pub use distance::{dist_infinity, DistGrid, Distance};
pub use envelope::{Decay, Envelope, Side, Term};
pub use ops::{mellin_even_part, mellin_odd_part, mellin_translate};
pub use spec::{
    EnvelopeFn, FastEvaluator, FunctionSpec, LogEvaluator, MellinPoint, Metadata, TailSupFn,
    TransformFn,
};
pub use transform::{mellin_transform_numeric, mellin_transform_numeric_with, NumericOptions};
