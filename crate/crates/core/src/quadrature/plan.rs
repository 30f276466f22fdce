//! Truncation planning for the lattice sum.

use crate::error::{Error, Result};
use crate::mellin::FunctionSpec;
use crate::numerics::HPReal;

/// Working precision of the planners; they only need to resolve integer
/// boundaries of slowly varying expressions.
const PLAN_PREC: usize = 160;

/// Lattice window `-n_neg ..= n_pos`; the `k = 0` term is always kept.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPlan {
    pub n_neg: u64,
    pub n_pos: u64,
    /// Certified bound on the omitted part of the (scaled) lattice sum.
    pub truncation_bound: Option<f64>,
}

impl TruncationPlan {
    pub fn new(n_neg: u64, n_pos: u64) -> Self {
        TruncationPlan {
            n_neg,
            n_pos,
            truncation_bound: None,
        }
    }

    pub fn symmetric(k: u64) -> Self {
        Self::new(k, k)
    }

    pub fn with_bound(mut self, b: f64) -> Self {
        self.truncation_bound = Some(b);
        self
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "sigma must be positive and finite, got {sigma}"
        )))
    }
}

fn ceil_u64(x: &HPReal) -> Result<u64> {
    x.ceil()
        .to_i64()
        .filter(|k| *k >= 0)
        .map(|k| k as u64)
        .ok_or_else(|| Error::Overflow(x.to_f64()))
}

/// Symmetric window for `sinc^{2m}(log r)` with truncation error below `10^{-ell}`.
pub fn plan_sinc_power(m: u32, sigma: f64, ell: u32) -> Result<TruncationPlan> {
    check_sigma(sigma)?;
    if m == 0 || ell == 0 {
        return Err(Error::Domain("m and ell must be positive".into()));
    }
    let p = PLAN_PREC;
    let pi = HPReal::pi(p);
    let s = HPReal::from_f64(sigma, p);
    let q = (2 * m - 1) as i64;
    let ten_l = HPReal::from_i64(10, p).powi(ell as i64);
    let inner = ten_l.mul_i64(2) / pi.mul_i64(q);
    let root = inner.pow(&HPReal::from_ratio(1, q, p));
    let k = ceil_u64(&(&s / &pi * root))?;
    let bound = (HPReal::from_i64(2, p) / pi.mul_i64(q))
        * (&s / (HPReal::from_i64(k as i64, p) * &pi)).powi(q);
    Ok(TruncationPlan::symmetric(k).with_bound(bound.to_f64()))
}

/// Smallest symmetric window `K > sigma` with
/// `(1/3)(sigma/K)^6 + (a^2/8)(sigma/K)^8 <= (pi^8/10) e^{-2 pi a sigma}`.
pub fn plan_branch_point(a: f64, sigma: f64) -> Result<TruncationPlan> {
    check_sigma(sigma)?;
    if !(a > 0.0) {
        return Err(Error::Domain(format!(
            "strip half-width must be positive, got {a}"
        )));
    }
    let p = PLAN_PREC;
    let pi = HPReal::pi(p);
    let s = HPReal::from_f64(sigma, p);
    let ah = HPReal::from_f64(a, p);
    let rhs = pi.powi(8).div_i64(10) * (-(pi.mul_i64(2) * &ah * &s)).exp();
    let a2 = ah.square().div_i64(8);
    let lhs = |k: u64| {
        let r = &s / HPReal::from_i64(k as i64, p);
        r.powi(6).div_i64(3) + &a2 * r.powi(8)
    };
    let ok = |k: u64| lhs(k) <= rhs;

    let start = sigma.floor() as u64 + 1;
    let mut hi = start;
    if !ok(hi) {
        let mut lo;
        loop {
            lo = hi;
            hi = hi.checked_mul(2).ok_or(Error::Overflow(sigma))?;
            if hi > 1 << 50 {
                return Err(Error::Overflow(hi as f64));
            }
            if ok(hi) {
                break;
            }
        }
        // invariant: !ok(lo), ok(hi)
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    let bound = lhs(hi) / pi.powi(8);
    Ok(TruncationPlan::symmetric(hi).with_bound(bound.to_f64()))
}

/// Asymmetric window for `e^{-r}` at `c = 1/2`:
/// `N = ceil(2 pi^2 sigma^2 + 2 sigma log(15/4))`, `K = ceil(sigma log(N / (2 sigma)))`.
pub fn plan_gamma(sigma: f64) -> Result<TruncationPlan> {
    check_sigma(sigma)?;
    let p = PLAN_PREC;
    let pi = HPReal::pi(p);
    let s = HPReal::from_f64(sigma, p);
    let n = pi.square().mul_i64(2) * s.square() + s.mul_i64(2) * HPReal::from_ratio(15, 4, p).ln();
    let n = ceil_u64(&n)?;
    let k = &s * (HPReal::from_i64(n as i64, p) / s.mul_i64(2)).ln();
    let k = ceil_u64(&k.max_ref(&HPReal::zero(p)))?;
    Ok(TruncationPlan::new(n, k))
}

/// Window from the spec's decay envelope so that the omitted part of
/// `(1/sigma) sum f(e^{k/sigma}) e^{kc/sigma}` is below `target` on each side.
pub fn plan_from_envelope(
    f: &FunctionSpec,
    c: f64,
    sigma: f64,
    target: f64,
) -> Result<TruncationPlan> {
    check_sigma(sigma)?;
    if f.is_zero() {
        return Ok(TruncationPlan::symmetric(0).with_bound(0.0));
    }
    let env = f
        .envelope(c)
        .ok_or_else(|| Error::MissingEnvelope(f.name.clone()))?;
    let h = 1.0 / sigma;
    let ln_t = target.ln();
    let cut = |side: &crate::mellin::Side| -> Result<(u64, f64)> {
        let u = side.cut(h, ln_t).ok_or_else(|| {
            Error::Domain(format!("{} has a non-summable tail at c = {c}", f.name))
        })?;
        let k = (u * sigma).ceil();
        if k > 1e15 {
            return Err(Error::Overflow(k));
        }
        Ok((k as u64, side.ln_lattice_tail(k / sigma, h).exp()))
    };
    let (n, bl) = cut(&env.left)?;
    let (k, br) = cut(&env.right)?;
    Ok(TruncationPlan::new(n, k).with_bound(bl + br))
}
