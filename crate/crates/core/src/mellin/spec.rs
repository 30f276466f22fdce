use std::fmt;
use std::sync::Arc;

use super::envelope::Envelope;
use crate::numerics::{HPComplex, HPReal};

/// `x -> f(e^x)` at the precision of `x`.
pub type LogEvaluator = Arc<dyn Fn(&HPReal) -> HPComplex + Send + Sync>;
/// Double-precision `x -> f(e^x)` for real-valued integrands, used far out in
/// algebraically decaying tails where the working precision is wasted.
pub type FastEvaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// `(c, v, precision) -> [f]^(c + iv)` where known in closed form.
pub type TransformFn = Arc<dyn Fn(&HPReal, &HPReal, usize) -> Option<HPComplex> + Send + Sync>;
/// `(c, alpha, V) -> sup_{|v| >= V} |v|^alpha |[f]^(c + iv)|`, when certifiable.
pub type TailSupFn = Arc<dyn Fn(f64, f64, f64) -> Option<f64> + Send + Sync>;
/// `c -> envelope of |f(e^x)| e^{cx}`.
pub type EnvelopeFn = Arc<dyn Fn(f64) -> Option<Envelope> + Send + Sync>;

/// Regularity hints attached to an integrand.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Metadata {
    /// Half-width of the strip of analyticity in the log variable.
    pub strip_half_width: Option<f64>,
    /// Order `r + alpha` of the Mellin-Sobolev class.
    pub sobolev_order: Option<f64>,
    /// Transform support is contained in `[-T, T]`.
    pub bandwidth: Option<f64>,
}

/// An integrand on the positive half-line.
#[derive(Clone)]
pub struct FunctionSpec {
    pub name: String,
    pub(crate) eval: LogEvaluator,
    pub(crate) fast: Option<FastEvaluator>,
    pub(crate) transform: Option<TransformFn>,
    pub(crate) tail_sup: Option<TailSupFn>,
    pub(crate) envelope: Option<EnvelopeFn>,
    pub metadata: Metadata,
    pub real_valued: bool,
    zero: bool,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("name", &self.name)
            .field("transform", &self.transform.is_some())
            .field("envelope", &self.envelope.is_some())
            .field("metadata", &self.metadata)
            .finish()
    }
}

impl FunctionSpec {
    /// A real-valued integrand given by its values in the log variable.
    pub fn from_log_real<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&HPReal) -> HPReal + Send + Sync + 'static,
    {
        Self::from_log(name, move |x| HPComplex::from_real(f(x)))
    }

    pub fn from_log<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&HPReal) -> HPComplex + Send + Sync + 'static,
    {
        FunctionSpec {
            name: name.into(),
            eval: Arc::new(f),
            fast: None,
            transform: None,
            tail_sup: None,
            envelope: None,
            metadata: Metadata::default(),
            real_valued: true,
            zero: false,
        }
    }

    /// A real-valued integrand given by `r -> f(r)`.
    pub fn from_fn<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&HPReal) -> HPReal + Send + Sync + 'static,
    {
        Self::from_log_real(name, move |x| f(&x.exp()))
    }

    /// The zero function; every transform and distance of it is exactly 0.
    pub fn zero() -> Self {
        let mut s = Self::from_log("zero", |x| HPComplex::zero(x.precision()));
        s.fast = Some(Arc::new(|_| 0.0));
        s.transform = Some(Arc::new(|_, _, p| Some(HPComplex::zero(p))));
        s.tail_sup = Some(Arc::new(|_, _, _| Some(0.0)));
        s.metadata.bandwidth = Some(0.0);
        s.zero = true;
        s
    }

    pub fn with_fast<F>(mut self, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.fast = Some(Arc::new(f));
        self
    }

    pub fn with_transform<F>(mut self, f: F) -> Self
    where
        F: Fn(&HPReal, &HPReal, usize) -> Option<HPComplex> + Send + Sync + 'static,
    {
        self.transform = Some(Arc::new(f));
        self
    }

    pub fn with_tail_sup<F>(mut self, f: F) -> Self
    where
        F: Fn(f64, f64, f64) -> Option<f64> + Send + Sync + 'static,
    {
        self.tail_sup = Some(Arc::new(f));
        self
    }

    pub fn with_envelope<F>(mut self, f: F) -> Self
    where
        F: Fn(f64) -> Option<Envelope> + Send + Sync + 'static,
    {
        self.envelope = Some(Arc::new(f));
        self
    }

    pub fn with_metadata(mut self, m: Metadata) -> Self {
        self.metadata = m;
        self
    }

    pub fn complex_valued(mut self) -> Self {
        self.real_valued = false;
        self.fast = None;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// `f(r)` for `r > 0`.
    pub fn eval(&self, r: &HPReal) -> HPComplex {
        (self.eval)(&r.ln())
    }

    /// `f(e^x)`.
    pub fn eval_log(&self, x: &HPReal) -> HPComplex {
        (self.eval)(x)
    }

    pub fn eval_fast(&self, x: f64) -> Option<f64> {
        self.fast.as_ref().map(|f| f(x))
    }

    pub fn has_transform(&self) -> bool {
        self.transform.is_some()
    }

    /// Closed-form `[f]^(c + iv)`, if the spec carries one and it applies at `c`.
    pub fn transform(&self, c: &HPReal, v: &HPReal, precision: usize) -> Option<HPComplex> {
        self.transform.as_ref().and_then(|t| t(c, v, precision))
    }

    pub fn tail_sup(&self, c: f64, alpha: f64, v: f64) -> Option<f64> {
        self.tail_sup.as_ref().and_then(|t| t(c, alpha, v))
    }

    pub fn envelope(&self, c: f64) -> Option<Envelope> {
        self.envelope.as_ref().and_then(|e| e(c))
    }
}

/// A point `c + it` of the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MellinPoint {
    pub c: f64,
    pub t: f64,
}

impl MellinPoint {
    pub fn new(c: f64, t: f64) -> Self {
        debug_assert!(c.is_finite() && t.is_finite());
        MellinPoint { c, t }
    }
}
