//! A-priori bounds, rate diagnostics, Moebius inversion of remainder
//! sequences and a decay classifier for observed errors.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mellin::{mellin_translate, FunctionSpec};
use crate::numerics::{check_precision, moebius, zeta, HPComplex, HPReal};
use crate::quadrature::{remainder_empirical, TruncationPlan};

/// `2 zeta(alpha) dist / (2 pi sigma)^alpha`, the sharp bound on the remainder
/// of a function whose `alpha`-weighted transform is `dist` away from the band.
pub fn bound_sobolev_dist(
    alpha: f64,
    sigma: f64,
    dist: &HPReal,
    precision: usize,
) -> Result<HPReal> {
    check_precision(precision)?;
    if !(alpha > 1.0) {
        return Err(Error::Domain(format!("alpha must exceed 1, got {alpha}")));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Domain(format!(
            "sigma must be positive and finite, got {sigma}"
        )));
    }
    if dist.is_negative() {
        return Err(Error::Domain("distance must be nonnegative".into()));
    }
    if dist.is_zero() {
        return Ok(HPReal::zero(precision));
    }
    let wp = precision + 16;
    let a = HPReal::from_f64(alpha, wp);
    let z = zeta(&a, wp)?;
    let w = HPReal::pi(wp).mul_i64(2) * HPReal::from_f64(sigma, wp);
    let b = z.mul_i64(2) * dist.with_precision(wp) / w.pow(&a);
    Ok(b.with_precision(precision))
}

/// Observed error `E` at step parameter `sigma` and the derived constants.
#[derive(Clone, Debug)]
pub struct RateDiagnostics {
    pub sigma: f64,
    pub error: HPReal,
    /// `E e^{2 pi a sigma}`, present when a strip width was supplied.
    pub c_exp: Option<HPReal>,
    /// `-log|E| / sigma`.
    pub rate: HPReal,
    /// `E sigma^alpha`, present when an order was supplied.
    pub c_poly: Option<HPReal>,
}

pub fn rate_diagnostics(
    error: &HPReal,
    sigma: f64,
    a: Option<f64>,
    alpha: Option<f64>,
) -> Result<RateDiagnostics> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Domain(format!(
            "sigma must be positive and finite, got {sigma}"
        )));
    }
    if error.is_zero() {
        return Err(Error::UndefinedRate);
    }
    let p = error.precision();
    let s = HPReal::from_f64(sigma, p);
    let rate = -(error.abs().ln() / &s);
    let c_exp = match a {
        Some(a) if a > 0.0 => {
            let k = HPReal::pi(p).mul_i64(2) * HPReal::from_f64(a, p) * &s;
            Some(error * k.exp())
        }
        Some(a) => {
            return Err(Error::Domain(format!(
                "strip half-width must be positive, got {a}"
            )))
        }
        None => None,
    };
    let c_poly = match alpha {
        Some(al) if al > 0.0 => Some(error * s.pow(&HPReal::from_f64(al, p))),
        Some(al) => return Err(Error::Domain(format!("order must be positive, got {al}"))),
        None => None,
    };
    Ok(RateDiagnostics {
        sigma,
        error: error.clone(),
        c_exp,
        rate,
        c_poly,
    })
}

/// A transform sample recovered from remainders, with the a-priori bound
/// `1/2 sum |R|` over the same terms.
#[derive(Clone, Debug)]
pub struct MoebiusEstimate {
    pub value: HPComplex,
    pub bound: HPReal,
    /// Number of `k` retained.
    pub terms: usize,
}

/// `-1/2 sum_{k <= k_max / n} mu(k) R_{nk}` where `remainders[j]` holds
/// `R_{c,(j+1) sigma}`. The result approximates the transform of the
/// `c`-Mellin-even part at `c + 2 pi i n sigma`.
pub fn moebius_invert(remainders: &[HPComplex], n: usize) -> Result<MoebiusEstimate> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    if remainders.len() < n {
        return Err(Error::InsufficientCoverage {
            have: remainders.len(),
            need: n,
        });
    }
    let p = remainders[0].precision();
    let mut sum = HPComplex::zero(p);
    let mut abs = HPReal::zero(p);
    let terms = remainders.len() / n;
    for k in 1..=terms {
        let r = &remainders[n * k - 1];
        abs = abs + r.abs();
        match moebius(k as u64)? {
            1 => sum = &sum + r,
            -1 => sum = &sum - r,
            _ => {}
        }
    }
    let half = HPReal::from_ratio(1, 2, p);
    Ok(MoebiusEstimate {
        value: -&sum.scale(&half),
        bound: abs * half,
        terms,
    })
}

/// Log-equispaced `h` in `[e^{-1/(2 sigma)}, e^{1/(2 sigma)}]`, endpoints and
/// `h = 1` included; a single point means `{1}`.
pub fn translation_grid(sigma: f64, h_count: usize) -> Vec<f64> {
    if h_count <= 1 {
        return vec![1.0];
    }
    let half = 0.5 / sigma;
    let mut xs: Vec<f64> = (0..h_count)
        .map(|i| -half + 2.0 * half * i as f64 / (h_count - 1) as f64)
        .collect();
    if h_count.is_multiple_of(2) {
        xs.push(0.0);
        xs.sort_by(f64::total_cmp);
    } else {
        xs[h_count / 2] = 0.0;
    }
    xs.into_iter().map(f64::exp).collect()
}

/// `max_h |exact(h) - Q[tau_h f]|` over [`translation_grid`].
pub fn remainder_translated_sup(
    f: &FunctionSpec,
    exact_map: &dyn Fn(f64) -> HPReal,
    c: f64,
    sigma: f64,
    plan: &TruncationPlan,
    h_count: usize,
    precision: usize,
) -> Result<HPReal> {
    let mut best = HPReal::zero(precision);
    for h in translation_grid(sigma, h_count) {
        let g = if h == 1.0 {
            f.clone()
        } else {
            mellin_translate(f, h, c)?
        };
        let r = remainder_empirical(&g, &exact_map(h), c, sigma, plan, precision)?.abs();
        best = best.max_ref(&r);
    }
    Ok(best)
}

/// Decay law identified from an error sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DecayClass {
    /// Exact from `2 pi sigma >= t` on, up to truncation.
    Bandlimited { t: f64 },
    /// `|E| ~ C e^{-2 pi a sigma}`.
    ExponentialRate { a: f64 },
    /// `|E| ~ C sigma^{-(r + alpha)}`.
    PolynomialRate { r_plus_alpha: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpaceClass {
    pub verdict: DecayClass,
    /// RMS residual of the fit in `log|E|`; zero for a bandlimited verdict.
    pub confidence: f64,
    /// The losing model when the residuals are within the selection margin.
    pub alternative: Option<DecayClass>,
}

/// Residuals must differ by this factor for one model to win outright.
const MODEL_MARGIN: f64 = 0.9;
/// A plateau spans less than this many decades.
const PLATEAU_DECADES: f64 = 1.0;

/// Least-squares line through `(x, y)`; returns slope, intercept, RMS residual.
fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let icpt = my - slope * mx;
    let ss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - icpt - slope * a).powi(2))
        .sum();
    (slope, icpt, (ss / n).sqrt())
}

/// Index where a flat tail begins after a decaying prefix, if any.
fn plateau_start(sigma: &[f64], ln_e: &[f64]) -> Option<usize> {
    let n = sigma.len();
    let decade = std::f64::consts::LN_10 * PLATEAU_DECADES;
    (1..=n.saturating_sub(3)).find(|&s| {
        let tail = &ln_e[s..];
        let hi = tail.iter().cloned().fold(f64::MIN, f64::max);
        let lo = tail.iter().cloned().fold(f64::MAX, f64::min);
        if hi - lo >= decade {
            return false;
        }
        let (tail_slope, _, _) = fit_line(&sigma[s..], tail);
        let (head_slope, _, _) = fit_line(&sigma[..=s], &ln_e[..=s]);
        head_slope < 0.0 && tail_slope.abs() < 0.1 * head_slope.abs()
    })
}

/// Classifies `(sigma, E)` samples as bandlimited, exponential or polynomial.
///
/// Values below `10^{-d/4}`, `d` the decimal digits of `precision_bits`, count
/// as zero. A flat tail after a steep descent is read as exactness spoiled
/// only by truncation. Otherwise both decay models are fitted in `log|E|`
/// over the trailing half of the samples.
pub fn classify_decay(samples: &[(f64, f64)], precision_bits: usize) -> Result<SpaceClass> {
    if samples.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "need at least 4 samples, got {}",
            samples.len()
        )));
    }
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) || !(samples[0].0 > 0.0) {
        return Err(Error::DegenerateFit(
            "sigma must be positive and increasing".into(),
        ));
    }
    if samples.iter().any(|s| !s.1.is_finite()) {
        return Err(Error::DegenerateFit("non-finite error sample".into()));
    }
    if samples.iter().all(|s| s.1 == samples[0].1) {
        return Err(Error::DegenerateFit("all errors are equal".into()));
    }
    let digits = precision_bits as f64 * std::f64::consts::LOG10_2;
    let zero = 10f64.powf(-digits / 4.0);
    if samples.iter().all(|s| s.1.abs() < zero) {
        let verdict = DecayClass::Bandlimited {
            t: 2.0 * PI * samples[0].0,
        };
        return Ok(SpaceClass {
            verdict,
            confidence: 0.0,
            alternative: None,
        });
    }
    if samples.iter().any(|s| s.1 == 0.0) {
        return Err(Error::DegenerateFit(
            "exact zero among nonzero errors".into(),
        ));
    }
    let sigma: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let ln_e: Vec<f64> = samples.iter().map(|s| s.1.abs().ln()).collect();

    if let Some(s) = plateau_start(&sigma, &ln_e) {
        let verdict = DecayClass::Bandlimited {
            t: 2.0 * PI * sigma[s],
        };
        return Ok(SpaceClass {
            verdict,
            confidence: 0.0,
            alternative: None,
        });
    }

    let from = (samples.len() / 2).min(samples.len() - 4);
    let xs = &sigma[from..];
    let ys = &ln_e[from..];
    let ln_xs: Vec<f64> = xs.iter().map(|s| s.ln()).collect();
    let (exp_slope, _, exp_res) = fit_line(xs, ys);
    let (poly_slope, _, poly_res) = fit_line(&ln_xs, ys);
    if !(exp_slope < 0.0) && !(poly_slope < 0.0) {
        return Err(Error::DegenerateFit("errors do not decay".into()));
    }
    let exp = DecayClass::ExponentialRate {
        a: -exp_slope / (2.0 * PI),
    };
    let poly = DecayClass::PolynomialRate {
        r_plus_alpha: -poly_slope,
    };
    let out = if exp_res <= MODEL_MARGIN * poly_res {
        SpaceClass {
            verdict: exp,
            confidence: exp_res,
            alternative: None,
        }
    } else if poly_res <= MODEL_MARGIN * exp_res {
        SpaceClass {
            verdict: poly,
            confidence: poly_res,
            alternative: None,
        }
    } else {
        SpaceClass {
            verdict: exp,
            confidence: exp_res,
            alternative: Some(poly),
        }
    };
    Ok(out)
}
