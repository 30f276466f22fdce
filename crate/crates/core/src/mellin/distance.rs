//! Distance of an integrand from the Mellin-bandlimited functions.

use super::spec::FunctionSpec;
use super::transform::mellin_transform_numeric;
use crate::error::{Error, Result};
use crate::numerics::{check_precision, HPComplex, HPReal};

/// Sampling of `[sigma, V]` for [`dist_infinity`].
#[derive(Clone, Copy, Debug)]
pub struct DistGrid {
    pub samples: usize,
    /// Upper end `V`; `None` means `1e4 * sigma`.
    pub upper: Option<f64>,
    /// Weight exponent: the sampled quantity is `|v|^alpha |[f]^(c + iv)|`.
    pub alpha: f64,
    /// Tolerance for the numeric transform when no closed form exists.
    pub tol: f64,
}

impl Default for DistGrid {
    fn default() -> Self {
        DistGrid {
            samples: 4096,
            upper: None,
            alpha: 0.0,
            tol: 1e-12,
        }
    }
}

impl DistGrid {
    pub fn weighted(alpha: f64) -> Self {
        DistGrid {
            alpha,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct Distance {
    pub value: HPReal,
    /// Where the largest sample was found, or `inf` if the tail bound won.
    pub argmax: f64,
    /// The tail beyond `V` is bounded by the spec's certified supremum.
    pub certified: bool,
}

/// `sup_{|v| >= sigma} |v|^alpha |[f]^(c + iv)|`, sampled on a log-spaced grid
/// and completed by the certified tail supremum when the spec has one.
pub fn dist_infinity(
    f: &FunctionSpec,
    c: f64,
    sigma: f64,
    grid: &DistGrid,
    precision: usize,
) -> Result<Distance> {
    check_precision(precision)?;
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    if grid.samples < 2 || grid.alpha < 0.0 {
        return Err(Error::Domain(
            "grid needs at least two samples and alpha >= 0".into(),
        ));
    }
    if f.is_zero() {
        return Ok(Distance {
            value: HPReal::zero(precision),
            argmax: sigma,
            certified: true,
        });
    }
    let upper = grid.upper.unwrap_or(1e4 * sigma);
    if !(upper > sigma) {
        return Err(Error::Domain(format!(
            "upper end {upper} must exceed sigma {sigma}"
        )));
    }

    let chp = HPReal::from_f64(c, precision);
    let alpha = HPReal::from_f64(grid.alpha, precision);
    let closed = f.has_transform()
        && f.transform(&chp, &HPReal::from_f64(sigma, precision), precision)
            .is_some();
    let transform = |v: f64| -> Result<HPComplex> {
        if closed {
            let vh = HPReal::from_f64(v, precision);
            f.transform(&chp, &vh, precision)
                .ok_or_else(|| Error::MissingTransform(f.name.clone()))
        } else {
            mellin_transform_numeric(f, c, v, grid.tol, precision)
        }
    };
    let weighted = |v: f64| -> Result<HPReal> {
        let mut m = transform(v)?.abs();
        if !f.real_valued {
            m = m.max_ref(&transform(-v)?.abs());
        }
        if grid.alpha != 0.0 {
            let vh = HPReal::from_f64(v, precision);
            m = if grid.alpha.fract() == 0.0 && grid.alpha <= 64.0 {
                m * vh.powi(grid.alpha as i64)
            } else {
                m * vh.pow(&alpha)
            };
        }
        Ok(m)
    };

    let n = grid.samples;
    let ratio = upper / sigma;
    let nodes: Vec<f64> = (0..n)
        .map(|i| match i {
            0 => sigma,
            _ if i == n - 1 => upper,
            _ => sigma * ratio.powf(i as f64 / (n - 1) as f64),
        })
        .collect();
    let mut best = weighted(nodes[0])?;
    let mut best_i = 0;
    for (i, &v) in nodes.iter().enumerate().skip(1) {
        let w = weighted(v)?;
        if w > best {
            best = w;
            best_i = i;
        }
    }
    let mut argmax = nodes[best_i];

    // Golden-section polish between the neighbours of the best node.
    if closed && best_i > 0 && best_i < n - 1 {
        let (mut a, mut b) = (nodes[best_i - 1], nodes[best_i + 1]);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = b - g * (b - a);
        let mut x2 = a + g * (b - a);
        let mut f1 = weighted(x1)?;
        let mut f2 = weighted(x2)?;
        for _ in 0..80 {
            if f1 > f2 {
                b = x2;
                x2 = x1;
                f2 = f1.clone();
                x1 = b - g * (b - a);
                f1 = weighted(x1)?;
            } else {
                a = x1;
                x1 = x2;
                f1 = f2.clone();
                x2 = a + g * (b - a);
                f2 = weighted(x2)?;
            }
        }
        for (x, fx) in [(x1, f1), (x2, f2)] {
            if fx > best {
                best = fx;
                argmax = x;
            }
        }
    }

    let tail = f.tail_sup(c, grid.alpha, upper);
    let certified = tail.is_some();
    if let Some(s) = tail {
        let s = HPReal::from_f64(s, precision);
        if s > best {
            best = s;
            argmax = f64::INFINITY;
        }
    }
    Ok(Distance {
        value: best,
        argmax,
        certified,
    })
}
