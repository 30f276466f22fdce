//! Sweeps over the step parameter for the reference integrands, and their
//! rendering as fixed-layout tables.

use crate::corpus::{branch_point, exp_decay, sinc_power, sobolev_example, sobolev_remainder};
use crate::error::{Error, Result};
use crate::mellin::{dist_infinity, DistGrid};
use crate::numerics::HPReal;
use crate::quadrature::{plan_branch_point, plan_gamma, plan_sinc_power, remainder_empirical};
use crate::rates::{bound_sobolev_dist, rate_diagnostics, RateDiagnostics};

/// `sigma = start, start + step, ..` up to and including `end` (to rounding).
pub fn arithmetic_range(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step + 1e-9).floor() as i64;
    (0..=n.max(-1)).map(|i| start + i as f64 * step).collect()
}

/// `sigma = start, start * factor, ..` while `<= end`.
pub fn geometric_range(start: f64, end: f64, factor: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut s = start;
    while s <= end * (1.0 + 1e-12) {
        out.push(s);
        s *= factor;
    }
    out
}

#[derive(Clone, Debug)]
pub struct SincRow {
    pub sigma: f64,
    pub k: u64,
    pub error: HPReal,
}

/// Error of the symmetric rule for `f_{2m}` with the `10^{-ell}` window.
pub fn sinc_power_rows(m: u32, ell: u32, sigmas: &[f64], precision: usize) -> Result<Vec<SincRow>> {
    let e = sinc_power(m, precision)?;
    sigmas
        .iter()
        .map(|&sigma| {
            let plan = plan_sinc_power(m, sigma, ell)?;
            let r = remainder_empirical(&e.spec, &e.exact, 0.0, sigma, &plan, precision)?;
            Ok(SincRow {
                sigma,
                k: plan.n_pos,
                error: r.re,
            })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct BranchRow {
    pub sigma: f64,
    pub k: u64,
    pub diag: RateDiagnostics,
}

pub fn branch_rows(a: f64, sigmas: &[f64], precision: usize) -> Result<Vec<BranchRow>> {
    let e = branch_point(a, precision)?;
    sigmas
        .iter()
        .map(|&sigma| {
            let plan = plan_branch_point(a, sigma)?;
            let r = remainder_empirical(&e.spec, &e.exact, 0.0, sigma, &plan, precision)?;
            let diag = rate_diagnostics(&r.re, sigma, Some(a), None)?;
            Ok(BranchRow {
                sigma,
                k: plan.n_pos,
                diag,
            })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct GammaRow {
    pub sigma: f64,
    pub n: u64,
    pub k: u64,
    /// Constant taken against `e^{-pi^2 sigma}`.
    pub diag: RateDiagnostics,
}

pub fn gamma_rows(sigmas: &[f64], precision: usize) -> Result<Vec<GammaRow>> {
    let e = exp_decay(precision)?;
    let a = std::f64::consts::PI / 2.0;
    sigmas
        .iter()
        .map(|&sigma| {
            let plan = plan_gamma(sigma)?;
            let r = remainder_empirical(&e.spec, &e.exact, e.c, sigma, &plan, precision)?;
            let diag = rate_diagnostics(&r.re, sigma, Some(a), None)?;
            Ok(GammaRow {
                sigma,
                n: plan.n_neg,
                k: plan.n_pos,
                diag,
            })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct SobolevRow {
    pub sigma: f64,
    pub remainder: HPReal,
    pub bound: HPReal,
    pub overestimation: HPReal,
    /// `R sigma^4`.
    pub c: HPReal,
}

/// Closed-form remainder of the order-4 example against the distance bound.
pub fn sobolev_rows(sigmas: &[f64], precision: usize) -> Result<Vec<SobolevRow>> {
    let e = sobolev_example(precision)?;
    let alpha = 4.0;
    let grid = DistGrid::weighted(alpha);
    sigmas
        .iter()
        .map(|&sigma| {
            let remainder = sobolev_remainder(sigma, precision)?;
            let band = 2.0 * std::f64::consts::PI * sigma;
            let dist = dist_infinity(&e.spec, 0.0, band, &grid, precision)?;
            let bound = bound_sobolev_dist(alpha, sigma, &dist.value, precision)?;
            let overestimation = &bound / &remainder;
            let c = &remainder * HPReal::from_f64(sigma, precision).powi(4);
            Ok(SobolevRow {
                sigma,
                remainder,
                bound,
                overestimation,
                c,
            })
        })
        .collect()
}

/// `-1.520635e+00` style: `digits` after the point, signed two-digit exponent.
pub fn sci(x: f64, digits: usize) -> String {
    let s = format!("{:.*e}", digits, x);
    let (mant, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", exp.abs())
}

pub fn fixed(x: f64, digits: usize) -> String {
    format!("{:.*}", digits, x)
}

/// A rendered table: header plus string cells.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(title: impl Into<String>, header: &[&str]) -> Self {
        Table {
            title: title.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Right-aligned columns under a title line.
    pub fn to_text(&self) -> String {
        let widths: Vec<usize> = (0..self.header.len())
            .map(|j| {
                self.rows
                    .iter()
                    .map(|r| r[j].len())
                    .chain(std::iter::once(self.header[j].len()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        let mut out = format!("{}\n{}\n", self.title, line(&self.header));
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}

/// Bits below which a table's smallest entries are lost in rounding.
pub fn required_precision(table: u8) -> usize {
    match table {
        5 => 280,
        1 | 2 | 3 | 6 => 128,
        _ => 64,
    }
}

fn sigma_label(s: f64) -> String {
    if s.fract() == 0.0 {
        format!("{s:.0}")
    } else {
        format!("{s:.2}")
    }
}

fn branch_table(a: f64, label: &str, sigmas: &[f64], precision: usize) -> Result<Table> {
    let e = branch_point(a, precision)?;
    let title = format!(
        "Example 2, a = {label}, J_a = {}",
        e.exact.to_fixed_string(40)
    );
    let mut t = Table::new(title, &["sigma", "K", "E", "C", "rate"]);
    for r in branch_rows(a, sigmas, precision)? {
        t.rows.push(vec![
            sigma_label(r.sigma),
            r.k.to_string(),
            sci(r.diag.error.to_f64(), 3),
            sci(r.diag.c_exp.as_ref().expect("a given").to_f64(), 3),
            fixed(r.diag.rate.to_f64(), 6),
        ]);
    }
    Ok(t)
}

fn gamma_table(title: &str, sigmas: &[f64], precision: usize) -> Result<Table> {
    let mut t = Table::new(title, &["sigma", "N", "K", "E", "C", "rate"]);
    for r in gamma_rows(sigmas, precision)? {
        t.rows.push(vec![
            sigma_label(r.sigma),
            r.n.to_string(),
            r.k.to_string(),
            sci(r.diag.error.to_f64(), 3),
            fixed(r.diag.c_exp.as_ref().expect("a given").to_f64(), 3),
            fixed(r.diag.rate.to_f64(), 6),
        ]);
    }
    Ok(t)
}

/// Recomputes reference table `id` (1 to 6). Table 3 has two parts.
pub fn render(id: u8, precision: usize) -> Result<Vec<Table>> {
    let need = required_precision(id);
    if precision < need {
        return Err(Error::Precision {
            bits: precision,
            min: need,
        });
    }
    match id {
        1 => {
            let mut t = Table::new("Example 1, m = 4, ell = 12", &["sigma", "K", "E"]);
            for r in sinc_power_rows(4, 12, &arithmetic_range(0.5, 8.0, 0.5), precision)? {
                t.rows.push(vec![
                    format!("{:.2}", r.sigma),
                    r.k.to_string(),
                    sci(r.error.to_f64(), 6),
                ]);
            }
            Ok(vec![t])
        }
        2 => Ok(vec![branch_table(
            0.5,
            "1/2",
            &arithmetic_range(2.0, 15.0, 1.0),
            precision,
        )?]),
        3 => Ok(vec![
            branch_table(0.625, "5/8", &arithmetic_range(2.0, 12.0, 1.0), precision)?,
            branch_table(1.0, "1", &arithmetic_range(2.0, 10.0, 1.0), precision)?,
        ]),
        4 => Ok(vec![gamma_table(
            "Example 3, small sigma",
            &arithmetic_range(0.25, 2.0, 0.25),
            precision,
        )?]),
        5 => Ok(vec![gamma_table(
            "Example 3 continued",
            &arithmetic_range(2.0, 15.0, 1.0),
            precision,
        )?]),
        6 => {
            let mut t = Table::new(
                "Example 4",
                &["sigma", "R", "upper bound", "overestimation", "C"],
            );
            for r in sobolev_rows(&geometric_range(2.0, 8192.0, 2.0), precision)? {
                t.rows.push(vec![
                    sigma_label(r.sigma),
                    sci(r.remainder.to_f64(), 6),
                    sci(r.bound.to_f64(), 6),
                    fixed(r.overestimation.to_f64(), 12),
                    fixed(r.c.to_f64(), 12),
                ]);
            }
            Ok(vec![t])
        }
        _ => Err(Error::Domain(format!(
            "no table {id}; tables are numbered 1 to 6"
        ))),
    }
}
