use super::plan::TruncationPlan;
use super::series::richardson;
use crate::error::{Error, Result};
use crate::mellin::{FunctionSpec, Side};
use crate::numerics::{check_precision, HPComplex, HPReal};

/// Log-variable extent beyond which `e^{k/sigma}` is refused; astro-float's
/// exponent range is far larger, this only catches misconfigured windows.
const MAX_LOG_EXTENT: f64 = 1e8;
/// Doublings used when an algebraic tail is extrapolated.
const RICHARDSON_LEVELS: usize = 10;

#[derive(Clone, Debug)]
pub struct QuadratureResult {
    pub value: HPComplex,
    pub plan: TruncationPlan,
    pub sigma: f64,
    pub c: f64,
    pub truncation_bound: Option<f64>,
}

struct Lattice<'a> {
    f: &'a FunctionSpec,
    sigma: HPReal,
    c: HPReal,
    c_is_zero: bool,
}

impl<'a> Lattice<'a> {
    fn new(f: &'a FunctionSpec, c: f64, sigma: f64, precision: usize) -> Self {
        Lattice {
            f,
            sigma: HPReal::from_f64(sigma, precision),
            c: HPReal::from_f64(c, precision),
            c_is_zero: c == 0.0,
        }
    }

    /// `f(e^{k/sigma}) e^{kc/sigma}`.
    fn term(&self, k: i64) -> HPComplex {
        let p = self.sigma.precision();
        let x = HPReal::from_i64(k, p) / &self.sigma;
        let v = self.f.eval_log(&x);
        if self.c_is_zero {
            v
        } else {
            v.scale(&(&self.c * &x).exp())
        }
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

/// `(1/sigma) sum_{k=-N}^{K} f(e^{k/sigma}) e^{kc/sigma}`, summed in ascending `k`.
pub fn quad_sum(
    f: &FunctionSpec,
    c: f64,
    sigma: f64,
    plan: &TruncationPlan,
    precision: usize,
) -> Result<QuadratureResult> {
    check_precision(precision)?;
    check_sigma(sigma)?;
    let extent = (plan.n_neg.max(plan.n_pos) as f64 / sigma) * c.abs().max(1.0);
    if extent > MAX_LOG_EXTENT {
        return Err(Error::Overflow(extent));
    }
    let mut sum = HPComplex::zero(precision);
    if !f.is_zero() {
        let lat = Lattice::new(f, c, sigma, precision);
        for k in -(plan.n_neg as i64)..=(plan.n_pos as i64) {
            sum = &sum + &lat.term(k);
        }
        if !sum.re.is_finite() || !sum.im.is_finite() {
            return Err(Error::Overflow(extent));
        }
    }
    let value = sum.scale(&HPReal::from_f64(sigma, precision).recip());
    Ok(QuadratureResult {
        value,
        plan: *plan,
        sigma,
        c,
        truncation_bound: plan.truncation_bound,
    })
}

/// `exact - quad_sum`: the remainder plus the truncation error of `plan`.
pub fn remainder_empirical(
    f: &FunctionSpec,
    exact: &HPReal,
    c: f64,
    sigma: f64,
    plan: &TruncationPlan,
    precision: usize,
) -> Result<HPComplex> {
    let q = quad_sum(f, c, sigma, plan, precision)?;
    Ok(&HPComplex::from_real(exact.with_precision(precision)) - &q.value)
}

/// `(1/sigma) sum_{k in Z} f(e^{k/sigma}) e^{kc/sigma}` without truncation.
///
/// Tails are handled as in [`poisson_identity_residual`]; `plan` gives the
/// minimum (exponential) or base (algebraic) window on each side.
pub fn quad_sum_untruncated(
    f: &FunctionSpec,
    c: f64,
    sigma: f64,
    plan: &TruncationPlan,
    precision: usize,
) -> Result<HPComplex> {
    check_precision(precision)?;
    check_sigma(sigma)?;
    if f.is_zero() {
        return Ok(HPComplex::zero(precision));
    }
    let s = lattice_side(f, c, sigma, plan, precision)?;
    Ok(s.scale(&HPReal::from_f64(sigma, precision).recip()))
}

/// Partial transform series with an optional bound on what was left out.
#[derive(Clone, Debug)]
pub struct RemainderSeries {
    pub value: HPComplex,
    pub terms: u64,
    /// `None` when the tail beyond the last term could not be certified.
    pub tail_bound: Option<f64>,
}

fn transform_at(f: &FunctionSpec, c: &HPReal, v: &HPReal, precision: usize) -> Result<HPComplex> {
    f.transform(c, v, precision)
        .ok_or_else(|| Error::MissingTransform(f.name.clone()))
}

/// `M(c + iv) + M(c - iv)` for `v = 2 pi k sigma`.
fn paired_sample(
    f: &FunctionSpec,
    c: &HPReal,
    two_pi_sigma: &HPReal,
    k: u64,
    precision: usize,
) -> Result<HPComplex> {
    let v = two_pi_sigma.mul_i64(k as i64);
    let plus = transform_at(f, c, &v, precision)?;
    if f.real_valued {
        Ok(HPComplex::from_real(plus.re.mul_i64(2)))
    } else {
        Ok(&plus + &transform_at(f, c, &-v, precision)?)
    }
}

/// `-sum_{0 < |k| <= k_max} [f]^(c + 2 pi i k sigma)`, with `+-k` paired.
pub fn remainder_from_transform(
    f: &FunctionSpec,
    c: f64,
    sigma: f64,
    k_max: u64,
    precision: usize,
) -> Result<RemainderSeries> {
    check_precision(precision)?;
    check_sigma(sigma)?;
    if f.is_zero() {
        return Ok(RemainderSeries {
            value: HPComplex::zero(precision),
            terms: 0,
            tail_bound: Some(0.0),
        });
    }
    if !f.has_transform() {
        return Err(Error::MissingTransform(f.name.clone()));
    }
    let two_pi_sigma = HPReal::pi(precision).mul_i64(2) * HPReal::from_f64(sigma, precision);
    let band_terms = f
        .metadata
        .bandwidth
        .map(|t| (t / (2.0 * std::f64::consts::PI * sigma)).floor() as u64);
    let last = band_terms.map_or(k_max, |b| b.min(k_max));
    let chp = HPReal::from_f64(c, precision);
    let mut sum = HPComplex::zero(precision);
    for k in 1..=last {
        sum = &sum + &paired_sample(f, &chp, &two_pi_sigma, k, precision)?;
    }
    let tail_bound = match band_terms {
        Some(b) if b <= k_max => Some(0.0),
        _ => transform_tail_bound(f, c, sigma, k_max),
    };
    Ok(RemainderSeries {
        value: -&sum,
        terms: last,
        tail_bound,
    })
}

/// `sum_{|k| > K} |M(c + 2 pi i k sigma)|` from the spec's tail supremum at the
/// Sobolev order: `2 S (2 pi sigma)^{-a} K^{1-a} / (a - 1)`.
fn transform_tail_bound(f: &FunctionSpec, c: f64, sigma: f64, k: u64) -> Option<f64> {
    let a = f.metadata.sobolev_order.filter(|a| *a > 1.0)?;
    let w = 2.0 * std::f64::consts::PI * sigma;
    let s = f.tail_sup(c, a, w * (k as f64 + 1.0))?;
    Some(2.0 * s * w.powf(-a) * (k.max(1) as f64).powf(1.0 - a) / (a - 1.0))
}

/// Both sides of the Mellin-Poisson identity and their difference.
#[derive(Clone, Debug)]
pub struct PoissonResidual {
    /// `sum_k f(e^{k/sigma}) e^{kc/sigma}`.
    pub lattice: HPComplex,
    /// `sigma sum_k [f]^(c + 2 pi i k sigma)`.
    pub spectral: HPComplex,
    pub residual: HPReal,
}

/// Evaluates both sides of the Poisson identity to (near) working precision
/// and returns their distance.
///
/// Exponentially decaying tails are summed until the envelope drops below
/// `2^-(precision + 16)`, using `plan` as the minimum window. Algebraic tails
/// are summed over windows `W * 2^l` and Richardson-extrapolated, with `W`
/// taken from `plan` (lattice side) or `k_max` (transform side); the lattice
/// windows should respect any periodicity of the integrand in `k`.
pub fn poisson_identity_residual(
    f: &FunctionSpec,
    c: f64,
    sigma: f64,
    plan: &TruncationPlan,
    k_max: u64,
    precision: usize,
) -> Result<PoissonResidual> {
    check_precision(precision)?;
    check_sigma(sigma)?;
    if f.is_zero() {
        let z = HPComplex::zero(precision);
        return Ok(PoissonResidual {
            lattice: z.clone(),
            spectral: z,
            residual: HPReal::zero(precision),
        });
    }
    let lattice = lattice_side(f, c, sigma, plan, precision)?;
    let spectral = spectral_side(f, c, sigma, k_max, precision)?;
    let residual = (&lattice - &spectral).abs();
    Ok(PoissonResidual {
        lattice,
        spectral,
        residual,
    })
}

fn lattice_side(
    f: &FunctionSpec,
    c: f64,
    sigma: f64,
    plan: &TruncationPlan,
    precision: usize,
) -> Result<HPComplex> {
    let env = f
        .envelope(c)
        .ok_or_else(|| Error::MissingEnvelope(f.name.clone()))?;
    let lat = Lattice::new(f, c, sigma, precision);
    let ln_target = -((precision + 16) as f64) * std::f64::consts::LN_2;
    let mut total = lat.term(0);
    for (side, sign, base) in [
        (&env.right, 1i64, plan.n_pos),
        (&env.left, -1i64, plan.n_neg),
    ] {
        total = &total + &side_sum(&lat, side, sign, base, sigma, ln_target)?;
    }
    Ok(total)
}

fn side_sum(
    lat: &Lattice<'_>,
    side: &Side,
    sign: i64,
    base: u64,
    sigma: f64,
    ln_target: f64,
) -> Result<HPComplex> {
    let p = lat.sigma.precision();
    let mut sum = HPComplex::zero(p);
    if side.is_exponential() {
        let u = side
            .cut(1.0 / sigma, ln_target - sigma.ln())
            .ok_or_else(|| Error::Domain("non-summable lattice tail".into()))?;
        let n = ((u * sigma).ceil() as u64).max(base);
        if n as f64 / sigma > MAX_LOG_EXTENT {
            return Err(Error::Overflow(n as f64 / sigma));
        }
        for k in 1..=n as i64 {
            sum = &sum + &lat.term(sign * k);
        }
        return Ok(sum);
    }
    let p_alg = side.algebraic_power().expect("algebraic side");
    if p_alg <= 1.0 {
        return Err(Error::Domain("lattice tail is not summable".into()));
    }
    let p0 = (p_alg - 1.0).floor().max(1.0) as u32;
    let w0 = base.max(1);
    let mut partials = Vec::with_capacity(RICHARDSON_LEVELS + 1);
    let mut k = 0u64;
    for l in 0..=RICHARDSON_LEVELS {
        let w = w0 << l;
        while k < w {
            k += 1;
            sum = &sum + &lat.term(sign * k as i64);
        }
        partials.push(sum.clone());
    }
    Ok(richardson(&partials, p0))
}

fn spectral_side(
    f: &FunctionSpec,
    c: f64,
    sigma: f64,
    k_max: u64,
    precision: usize,
) -> Result<HPComplex> {
    let chp = HPReal::from_f64(c, precision);
    let sig = HPReal::from_f64(sigma, precision);
    let two_pi_sigma = HPReal::pi(precision).mul_i64(2) * &sig;
    let center = transform_at(f, &chp, &HPReal::zero(precision), precision)?;

    let series = if let Some(t) = f.metadata.bandwidth {
        let last = (t / (2.0 * std::f64::consts::PI * sigma)).floor() as u64;
        let mut s = HPComplex::zero(precision);
        for k in 1..=last {
            s = &s + &paired_sample(f, &chp, &two_pi_sigma, k, precision)?;
        }
        s
    } else if let Some(a) = f.metadata.sobolev_order.filter(|a| *a > 1.0) {
        let p0 = (a - 1.0).floor().max(1.0) as u32;
        let mut s = HPComplex::zero(precision);
        let mut partials = Vec::with_capacity(RICHARDSON_LEVELS + 1);
        let mut k = 0u64;
        for l in 0..=RICHARDSON_LEVELS {
            let w = k_max.max(1) << l;
            while k < w {
                k += 1;
                s = &s + &paired_sample(f, &chp, &two_pi_sigma, k, precision)?;
            }
            partials.push(s.clone());
        }
        richardson(&partials, p0)
    } else {
        let mut s = HPComplex::zero(precision);
        for k in 1..=k_max {
            s = &s + &paired_sample(f, &chp, &two_pi_sigma, k, precision)?;
        }
        s
    };
    Ok((&center + &series).scale(&sig))
}
