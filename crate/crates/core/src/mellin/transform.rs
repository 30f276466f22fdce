//! Numeric Mellin transform.
//!
//! After `u = e^x` the transform becomes `∫ f(e^x) e^{(c+it)x} dx` over the
//! real line, which is evaluated by the trapezoidal rule with step halving and
//! a Romberg table on top (the raw rule is spectrally accurate for integrands
//! analytic in a strip, Romberg rescues integrands with a kink on the
//! lattice). Truncation points come from the decay envelope.

use super::envelope::Side;
use super::spec::FunctionSpec;
use crate::error::{Error, Result};
use crate::numerics::{check_precision, HPComplex, HPReal};

/// Relative accuracy assumed for the double-precision evaluator, per unit of
/// `1 + |x| (1 + |c| + |t|)`, measured against the envelope.
const FAST_REL_ERROR: f64 = 1e-14;
const MAX_REFINEMENTS: usize = 20;
const MAX_POINTS: f64 = 6e7;

/// Controls for [`mellin_transform_numeric_with`].
#[derive(Clone, Copy, Debug)]
pub struct NumericOptions {
    pub tol: f64,
    /// Initial step in the log variable.
    pub h0: f64,
    /// Explicit `(left, right)` truncation distances; overrides the envelope.
    pub window: Option<(f64, f64)>,
    /// Allow the double-precision evaluator in the far tails.
    pub use_fast: bool,
}

impl NumericOptions {
    pub fn new(tol: f64) -> Self {
        NumericOptions {
            tol,
            h0: 1.0,
            window: None,
            use_fast: true,
        }
    }
}

/// `∫_0^∞ u^{c+it-1} f(u) du` within absolute error `tol`.
pub fn mellin_transform_numeric(
    f: &FunctionSpec,
    c: f64,
    t: f64,
    tol: f64,
    precision: usize,
) -> Result<HPComplex> {
    mellin_transform_numeric_with(f, c, t, &NumericOptions::new(tol), precision)
}

pub fn mellin_transform_numeric_with(
    f: &FunctionSpec,
    c: f64,
    t: f64,
    opts: &NumericOptions,
    precision: usize,
) -> Result<HPComplex> {
    check_precision(precision)?;
    if !(opts.tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    if f.is_zero() {
        return Ok(HPComplex::zero(precision));
    }
    if f.real_valued && t < 0.0 {
        return Ok(mellin_transform_numeric_with(f, c, -t, opts, precision)?.conj());
    }

    let h0 = opts.h0;
    let ln_target = (opts.tol / 8.0).ln();
    let env = f.envelope(c);
    let (xl, xr) = match (opts.window, &env) {
        (Some(w), _) => w,
        (None, Some(e)) => {
            let l = e.left.cut(h0, ln_target);
            let r = e.right.cut(h0, ln_target);
            match (l, r) {
                (Some(l), Some(r)) => (l, r),
                _ => {
                    return Err(Error::Domain(format!(
                        "{} is not integrable against u^(c-1) at c = {c}",
                        f.name
                    )))
                }
            }
        }
        (None, None) => return Err(Error::MissingEnvelope(f.name.clone())),
    };

    // Beyond (yl, yr) the double-precision evaluator is accurate enough.
    let (yl, yr) = match (&env, f.fast.is_some() && f.real_valued && opts.use_fast) {
        (Some(e), true) => {
            let w = 1.0 + c.abs() + t.abs();
            let ln_budget = (opts.tol / 16.0).ln() - FAST_REL_ERROR.ln();
            let l = fast_cut(&e.left, h0, w, ln_budget).unwrap_or(xl);
            let r = fast_cut(&e.right, h0, w, ln_budget).unwrap_or(xr);
            (l.min(xl), r.min(xr))
        }
        _ => (xl, xr),
    };

    let wp = precision + 16;
    let chp = HPReal::from_f64(c, wp);
    let thp = HPReal::from_f64(t, wp);
    // Kernel e^{(c+it)x} at x0, and its ratio between neighbouring nodes.
    let kernel = |x: f64| -> HPComplex {
        let xh = HPReal::from_f64(x, wp);
        let mut k = HPComplex::from_real(HPReal::one(wp));
        if c != 0.0 {
            k = k.scale(&(&chp * &xh).exp());
        }
        if t != 0.0 {
            k = &k * &HPComplex::cis(&(&thp * &xh));
        }
        k
    };
    let fast_point = |x: f64| -> (f64, f64) {
        let v = f.eval_fast(x).unwrap_or(0.0) * (c * x).exp();
        if t == 0.0 {
            (v, 0.0)
        } else {
            let (s, co) = (t * x).sin_cos();
            (v * co, v * s)
        }
    };

    let mut sum = HPComplex::zero(wp);
    let mut table: Vec<Vec<HPComplex>> = Vec::new();
    for level in 0..=MAX_REFINEMENTS {
        let scale = (1u64 << level) as f64;
        let h = h0 / scale;
        let lo = -(xl / h).ceil() as i64;
        let hi = (xr / h).ceil() as i64;
        let step = if level == 0 { 1 } else { 2 };
        let first = if level == 0 {
            lo
        } else {
            lo + ((lo & 1) == 0) as i64
        };
        if ((hi - lo) as f64) / step as f64 > MAX_POINTS {
            return Err(Error::NonConvergence {
                steps: level,
                last_change: last_change(&table),
            });
        }

        let mut hp_part = HPComplex::zero(wp);
        let mut fast_re = Neumaier::default();
        let mut fast_im = Neumaier::default();
        // Walking the kernel by rotation keeps one multiplication per node
        // instead of an exp and a sin/cos.
        let plain = c == 0.0 && t == 0.0;
        let ratio = kernel(step as f64 * h);
        let mut k = kernel(first as f64 * h);
        let mut i = first;
        while i <= hi {
            let x = i as f64 * h;
            if x > yr || -x > yl {
                let (re, im) = fast_point(x);
                fast_re.add(re);
                fast_im.add(im);
            } else {
                let v = f.eval_log(&HPReal::from_f64(x, wp));
                hp_part = if plain {
                    &hp_part + &v
                } else {
                    &hp_part + &(&v * &k)
                };
            }
            k = &k * &ratio;
            i += step;
        }
        let fast_part = HPComplex::new(
            HPReal::from_f64(fast_re.total(), wp),
            HPReal::from_f64(fast_im.total(), wp),
        );
        sum = &(&sum + &hp_part) + &fast_part;
        let trap = sum.scale(&HPReal::from_f64(h, wp));

        let mut row = vec![trap];
        if let Some(prev) = table.last() {
            for k in 1..=level {
                let denom = HPReal::from_i64((1i64 << (2 * k)) - 1, wp);
                let d = &row[k - 1] - &prev[k - 1];
                row.push(&row[k - 1] + &HPComplex::new(&d.re / &denom, &d.im / &denom));
            }
            let raw_change = (&row[0] - &prev[0]).abs().to_f64();

            let romberg_change = (&row[level] - &prev[level - 1]).abs().to_f64();
            if raw_change < opts.tol / 2.0 {
                return Ok(finish(&row[0], precision));
            }
            if romberg_change < opts.tol / 2.0 {
                return Ok(finish(&row[level], precision));
            }
        }
        table.push(row);
    }
    Err(Error::NonConvergence {
        steps: MAX_REFINEMENTS,
        last_change: last_change(&table),
    })
}

fn finish(z: &HPComplex, precision: usize) -> HPComplex {
    HPComplex::new(
        z.re.with_precision(precision),
        z.im.with_precision(precision),
    )
}

fn last_change(table: &[Vec<HPComplex>]) -> f64 {
    match table {
        [.., a, b] => (&b[0] - &a[0]).abs().to_f64(),
        _ => f64::INFINITY,
    }
}

/// Smallest distance beyond which the accumulated error of the double
/// precision evaluator stays below `exp(ln_budget) * FAST_REL_ERROR`.
fn fast_cut(side: &Side, h: f64, w: f64, ln_budget: f64) -> Option<f64> {
    let g = |u: f64| {
        let plain = side.ln_lattice_tail(u, h);
        let moment = log_add(
            side.ln_moment(u),
            h.ln() + u.max(1e-300).ln() + side.ln_value(u),
        );
        log_add(plain, w.ln() + moment)
    };
    let lo = side.valid_from();
    if g(lo) <= ln_budget {
        return Some(lo);
    }
    let mut hi = lo.max(1.0);
    for _ in 0..80 {
        if g(hi) <= ln_budget {
            let mut lo = lo;
            while hi - lo > 1e-3 * hi.max(1.0) {
                let mid = 0.5 * (lo + hi);
                if g(mid) <= ln_budget {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Some(hi);
        }
        hi *= 2.0;
    }
    None
}

fn log_add(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m.is_infinite() {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Compensated summation.
#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}
