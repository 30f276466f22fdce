//! The exponentially spaced trapezoidal rule, its truncation planners and
//! its remainder.

mod plan;
mod series;
mod sum;

pub use plan::{
    plan_branch_point, plan_from_envelope, plan_gamma, plan_sinc_power, TruncationPlan,
};
pub use series::richardson;
pub use sum::{
    poisson_identity_residual, quad_sum, quad_sum_untruncated, remainder_empirical,
    remainder_from_transform, PoissonResidual, QuadratureResult, RemainderSeries,
};
