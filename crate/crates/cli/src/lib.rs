//! Argument parsing, validation and dispatch for the `mellin-quad` binary.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mellin_quad::corpus::{lookup, sobolev_remainder, CorpusEntry, CorpusKind};
use mellin_quad::mellin::{dist_infinity, mellin_transform_numeric, DistGrid};
use mellin_quad::numerics::{check_precision, DEFAULT_PRECISION};
use mellin_quad::quadrature::{
    plan_branch_point, plan_from_envelope, plan_gamma, plan_sinc_power, quad_sum,
    remainder_from_transform, TruncationPlan,
};
use mellin_quad::rates::{bound_sobolev_dist, classify_decay, rate_diagnostics, DecayClass};
use mellin_quad::tables::{
    arithmetic_range, fixed, geometric_range, render, required_precision, sci, Table,
};
use mellin_quad::{Error, HPReal};

#[derive(Parser, Debug)]
#[command(
    name = "mellin-quad",
    version,
    about = "Exponentially spaced trapezoidal quadrature on (0, inf)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true)]
    pub precision_bits: Option<usize>,
    /// Target for truncation and numeric transforms.
    #[arg(long, global = true, default_value = "1e-20")]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// sinc_power:m, branch:a, branch (with --a), expdecay or sobolev.
    pub function: String,
    /// Abscissa of the rule; defaults to the entry's own.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Branch parameter when FUNCTION is plain `branch`.
    #[arg(long)]
    pub a: Option<f64>,
    /// Window for sinc powers: truncation below 10^-ell.
    #[arg(long, default_value_t = 12)]
    pub ell: u32,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Sweep {
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    /// start:end:step, or start:end:xF for a geometric sweep.
    #[arg(long)]
    pub sigma_range: Option<SigmaRange>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Apply the rule and report value, error and remainder bound.
    Integrate {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        sweep: Sweep,
        /// Terms of the transform series for the remainder column.
        #[arg(long)]
        k_max: Option<u64>,
    },
    /// Recompute reference table 1 to 6.
    Table { id: u8 },
    /// Error, constant and rate over a sigma sweep.
    RateScan {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        sweep: Sweep,
    },
    /// Numeric Mellin transform against the closed form.
    Transform {
        #[command(flatten)]
        target: Target,
        /// Comma-separated imaginary parts.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "0"
        )]
        v: Vec<f64>,
    },
    /// Decay class of the error over a sigma sweep.
    Classify {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        sweep: Sweep,
    },
}

/// A sigma sweep, arithmetic or geometric.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaRange {
    pub start: f64,
    pub end: f64,
    pub step: Step,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Step {
    Add(f64),
    Times(f64),
}

impl SigmaRange {
    pub fn values(&self) -> Vec<f64> {
        match self.step {
            Step::Add(h) => arithmetic_range(self.start, self.end, h),
            Step::Times(f) => geometric_range(self.start, self.end, f),
        }
    }
}

impl FromStr for SigmaRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, end, step] = parts[..] else {
            return Err(format!(
                "expected start:end:step or start:end:xF, got `{s}`"
            ));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{t}` is not a number"))
        };
        let (start, end) = (num(start)?, num(end)?);
        let step = match step.strip_prefix('x') {
            Some(f) => Step::Times(num(f)?),
            None => Step::Add(num(step)?),
        };
        let ok = match step {
            Step::Add(h) => h > 0.0,
            Step::Times(f) => f > 1.0,
        };
        if !(start > 0.0 && end >= start && ok) || !end.is_finite() {
            return Err(format!(
                "`{s}` is not an increasing sweep of positive sigma"
            ));
        }
        Ok(SigmaRange { start, end, step })
    }
}

/// What a run does, after validation.
#[derive(Clone, Debug)]
pub enum Action {
    Integrate { k_max: Option<u64> },
    Table(u8),
    RateScan,
    Transform { v: Vec<f64> },
    Classify,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub action: Action,
    pub function: Option<String>,
    pub c: Option<f64>,
    pub sigmas: Vec<f64>,
    pub ell: u32,
    pub precision_bits: usize,
    pub tol: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_)
            | Error::Precision { .. }
            | Error::Parse(_)
            | Error::UnknownFunction(_) => CliError::Validation(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn function_name(t: &Target) -> Result<String, CliError> {
    match (t.function.as_str(), t.a) {
        ("branch", Some(a)) => Ok(format!("branch:{a}")),
        ("branch", None) => Err(CliError::Validation(
            "`branch` needs --a or the form branch:a".into(),
        )),
        (_, Some(_)) => Err(CliError::Validation(
            "--a applies only to the branch entry".into(),
        )),
        (name, None) => Ok(name.to_string()),
    }
}

fn sweep_values(s: &Sweep) -> Result<Vec<f64>, CliError> {
    let v = match (&s.sigma, &s.sigma_range) {
        (Some(x), _) => vec![*x],
        (None, Some(r)) => r.values(),
        (None, None) => Vec::new(),
    };
    if v.iter().any(|s| !(*s > 0.0) || !s.is_finite()) || v.is_empty() {
        return Err(CliError::Validation(
            "sigma must be positive and finite".into(),
        ));
    }
    Ok(v)
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let Common {
            precision_bits,
            tol,
            format,
            out,
        } = cli.common;
        if !(tol > 0.0 && tol < 1.0) {
            return Err(CliError::Validation(format!(
                "--tol must lie in (0, 1), got {tol}"
            )));
        }
        let mut cfg = RunConfig {
            action: Action::RateScan,
            function: None,
            c: None,
            sigmas: Vec::new(),
            ell: 12,
            precision_bits: 0,
            tol,
            format,
            out,
        };
        let take = |t: &Target, cfg: &mut RunConfig| -> Result<(), CliError> {
            cfg.function = Some(function_name(t)?);
            cfg.c = t.c;
            cfg.ell = t.ell;
            Ok(())
        };
        match &cli.command {
            Command::Integrate {
                target,
                sweep,
                k_max,
            } => {
                take(target, &mut cfg)?;
                cfg.sigmas = sweep_values(sweep)?;
                cfg.action = Action::Integrate { k_max: *k_max };
            }
            Command::Table { id } => cfg.action = Action::Table(*id),
            Command::RateScan { target, sweep } => {
                take(target, &mut cfg)?;
                cfg.sigmas = sweep_values(sweep)?;
            }
            Command::Transform { target, v } => {
                take(target, &mut cfg)?;
                cfg.action = Action::Transform { v: v.clone() };
            }
            Command::Classify { target, sweep } => {
                take(target, &mut cfg)?;
                cfg.sigmas = sweep_values(sweep)?;
                cfg.action = Action::Classify;
            }
        }
        // Tables default to whatever they need; an explicit lower value is refused.
        let default = match cfg.action {
            Action::Table(id) => DEFAULT_PRECISION.max(required_precision(id)),
            _ => DEFAULT_PRECISION,
        };
        cfg.precision_bits = check_precision(precision_bits.unwrap_or(default))?;
        Ok(cfg)
    }
}

/// The planner tuned for the entry at its own abscissa, else the envelope.
fn plan_for(
    e: &CorpusEntry,
    c: f64,
    sigma: f64,
    ell: u32,
    tol: f64,
) -> mellin_quad::Result<TruncationPlan> {
    if c != e.c {
        return plan_from_envelope(&e.spec, c, sigma, tol);
    }
    match e.kind {
        CorpusKind::SincPower { m } => plan_sinc_power(m, sigma, ell),
        CorpusKind::Branch { a } => plan_branch_point(a, sigma),
        CorpusKind::ExpDecay => plan_gamma(sigma),
        CorpusKind::Sobolev => plan_from_envelope(&e.spec, c, sigma, tol),
    }
}

/// The integral at abscissa `c`: the entry's constant, the closed-form
/// transform, or a numeric transform.
fn exact_at(e: &CorpusEntry, c: f64, tol: f64, p: usize) -> mellin_quad::Result<HPReal> {
    if c == e.c {
        return Ok(e.exact.clone());
    }
    if let Some(m) = e
        .spec
        .transform(&HPReal::from_f64(c, p), &HPReal::zero(p), p)
    {
        return Ok(m.re);
    }
    Ok(mellin_transform_numeric(&e.spec, c, 0.0, tol, p)?.re)
}

struct Point {
    sigma: f64,
    plan: TruncationPlan,
    value: HPReal,
    error: HPReal,
}

fn evaluate(
    e: &CorpusEntry,
    exact: &HPReal,
    cfg: &RunConfig,
    c: f64,
) -> Result<Vec<Point>, CliError> {
    let p = cfg.precision_bits;
    cfg.sigmas
        .iter()
        .map(|&sigma| {
            let plan = plan_for(e, c, sigma, cfg.ell, cfg.tol)?;
            let q = quad_sum(&e.spec, c, sigma, &plan, p)?;
            let error = exact - &q.value.re;
            Ok(Point {
                sigma,
                plan,
                value: q.value.re,
                error,
            })
        })
        .collect()
}

/// Strip width and Sobolev order used for the rate constants of an entry.
fn rate_parameters(e: &CorpusEntry) -> (Option<f64>, Option<f64>) {
    match e.kind {
        CorpusKind::SincPower { .. } => (None, None),
        CorpusKind::Branch { a } => (Some(a), None),
        CorpusKind::ExpDecay => (Some(PI / 2.0), None),
        CorpusKind::Sobolev => (None, e.spec.metadata.sobolev_order),
    }
}

fn sigma_cell(s: f64) -> String {
    format!("{s}")
}

fn table(title: String, header: &[&str]) -> Table {
    Table {
        title,
        header: header.iter().map(|s| s.to_string()).collect(),
        rows: Vec::new(),
    }
}

fn integrate(cfg: &RunConfig, k_max: Option<u64>) -> Result<Vec<Table>, CliError> {
    let p = cfg.precision_bits;
    let e = lookup(cfg.function.as_deref().unwrap_or_default(), p)?;
    let c = cfg.c.unwrap_or(e.c);
    let exact = exact_at(&e, c, cfg.tol, p)?;
    let mut header = vec!["sigma", "N", "K", "value", "E", "bound"];
    if k_max.is_some() {
        header.push("R_series");
    }
    let mut t = table(
        format!("{} at c = {c}, exact {}", e.name, exact.to_fixed_string(30)),
        &header,
    );
    for pt in evaluate(&e, &exact, cfg, c)? {
        let band = 2.0 * PI * pt.sigma;
        let bound = match (e.spec.metadata.sobolev_order, e.spec.metadata.bandwidth) {
            (Some(alpha), _) => {
                let d = dist_infinity(&e.spec, c, band, &DistGrid::weighted(alpha), p)?;
                sci(
                    bound_sobolev_dist(alpha, pt.sigma, &d.value, p)?.to_f64(),
                    6,
                )
            }
            (None, Some(b)) if band >= b => sci(pt.plan.truncation_bound.unwrap_or(0.0), 6),
            _ => String::new(),
        };
        let mut row = vec![
            sigma_cell(pt.sigma),
            pt.plan.n_neg.to_string(),
            pt.plan.n_pos.to_string(),
            sci(pt.value.to_f64(), 14),
            sci(pt.error.to_f64(), 6),
            bound,
        ];
        if let Some(k) = k_max {
            let cell = match remainder_from_transform(&e.spec, c, pt.sigma, k, p) {
                Ok(r) => sci(r.value.re.to_f64(), 6),
                Err(Error::MissingTransform(_)) => String::new(),
                Err(err) => return Err(err.into()),
            };
            row.push(cell);
        }
        t.rows.push(row);
    }
    Ok(vec![t])
}

fn rate_scan(cfg: &RunConfig) -> Result<Vec<Table>, CliError> {
    let p = cfg.precision_bits;
    let e = lookup(cfg.function.as_deref().unwrap_or_default(), p)?;
    let c = cfg.c.unwrap_or(e.c);
    let exact = exact_at(&e, c, cfg.tol, p)?;
    let (a, alpha) = rate_parameters(&e);
    let mut t = table(
        format!("{} at c = {c}", e.name),
        &["sigma", "N", "K", "E", "C", "rate"],
    );
    for pt in evaluate(&e, &exact, cfg, c)? {
        let d = rate_diagnostics(&pt.error, pt.sigma, a, alpha)?;
        let constant = d
            .c_exp
            .or(d.c_poly)
            .map(|x| sci(x.to_f64(), 3))
            .unwrap_or_default();
        t.rows.push(vec![
            sigma_cell(pt.sigma),
            pt.plan.n_neg.to_string(),
            pt.plan.n_pos.to_string(),
            sci(pt.error.to_f64(), 6),
            constant,
            fixed(d.rate.to_f64(), 6),
        ]);
    }
    Ok(vec![t])
}

fn transform(cfg: &RunConfig, vs: &[f64]) -> Result<Vec<Table>, CliError> {
    let p = cfg.precision_bits;
    let e = lookup(cfg.function.as_deref().unwrap_or_default(), p)?;
    let c = cfg.c.unwrap_or(e.c);
    let mut t = table(
        format!("{} transform at c = {c}, tol {:e}", e.name, cfg.tol),
        &["v", "re", "im", "closed_re", "closed_im", "diff"],
    );
    for &v in vs {
        let num = mellin_transform_numeric(&e.spec, c, v, cfg.tol, p)?;
        let (re, im) = num.to_f64_pair();
        let mut row = vec![sigma_cell(v), sci(re, 14), sci(im, 14)];
        match e
            .spec
            .transform(&HPReal::from_f64(c, p), &HPReal::from_f64(v, p), p)
        {
            Some(cf) => {
                let (cre, cim) = cf.to_f64_pair();
                row.extend([
                    sci(cre, 14),
                    sci(cim, 14),
                    sci((&num - &cf).abs().to_f64(), 3),
                ]);
            }
            None => row.extend([String::new(), String::new(), String::new()]),
        }
        t.rows.push(row);
    }
    Ok(vec![t])
}

fn describe(d: &DecayClass) -> (&'static str, f64) {
    match *d {
        DecayClass::Bandlimited { t } => ("Bandlimited", t),
        DecayClass::ExponentialRate { a } => ("ExponentialRate", a),
        DecayClass::PolynomialRate { r_plus_alpha } => ("PolynomialRate", r_plus_alpha),
    }
}

fn classify(cfg: &RunConfig) -> Result<Vec<Table>, CliError> {
    let p = cfg.precision_bits;
    let e = lookup(cfg.function.as_deref().unwrap_or_default(), p)?;
    let c = cfg.c.unwrap_or(e.c);
    let exact = exact_at(&e, c, cfg.tol, p)?;
    // The order-4 example has its remainder in closed form at c = 0; summing
    // the rule at sigma in the thousands would take minutes.
    let samples: Vec<(f64, f64)> = if e.kind == CorpusKind::Sobolev && c == 0.0 {
        cfg.sigmas
            .iter()
            .map(|&s| Ok((s, sobolev_remainder(s, p)?.to_f64())))
            .collect::<mellin_quad::Result<_>>()?
    } else {
        let points = evaluate(&e, &exact, cfg, c)?;
        points
            .iter()
            .map(|pt| (pt.sigma, pt.error.to_f64()))
            .collect()
    };
    let class = classify_decay(&samples, p)?;
    let mut t = table(
        format!("{} at c = {c}, {} samples", e.name, samples.len()),
        &[
            "verdict",
            "parameter",
            "residual",
            "alternative",
            "alternative_parameter",
        ],
    );
    let (name, value) = describe(&class.verdict);
    let (alt, alt_value) = match class.alternative.as_ref().map(describe) {
        Some((n, v)) => (n.to_string(), fixed(v, 6)),
        None => (String::new(), String::new()),
    };
    t.rows.push(vec![
        name.to_string(),
        fixed(value, 6),
        sci(class.confidence, 3),
        alt,
        alt_value,
    ]);
    Ok(vec![t])
}

/// Computes the tables a configuration asks for.
pub fn compute(cfg: &RunConfig) -> Result<Vec<Table>, CliError> {
    match &cfg.action {
        Action::Integrate { k_max } => integrate(cfg, *k_max),
        Action::Table(id) => Ok(render(*id, cfg.precision_bits)?),
        Action::RateScan => rate_scan(cfg),
        Action::Transform { v } => transform(cfg, v),
        Action::Classify => classify(cfg),
    }
}

/// Text: each table under its title. CSV: one header; a leading `part`
/// column when there are several tables.
pub fn write_tables(tables: &[Table], format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    match format {
        Format::Text => {
            let body: Vec<String> = tables.iter().map(Table::to_text).collect();
            out.write_all(body.join("\n").as_bytes())?;
        }
        Format::Csv => {
            let multi = tables.len() > 1;
            let mut w = csv::Writer::from_writer(out);
            if let Some(first) = tables.first() {
                let mut h = first.header.clone();
                if multi {
                    h.insert(0, "part".into());
                }
                w.write_record(&h)?;
            }
            for (i, t) in tables.iter().enumerate() {
                for r in &t.rows {
                    let mut rec = r.clone();
                    if multi {
                        rec.insert(0, (i + 1).to_string());
                    }
                    w.write_record(&rec)?;
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Runs a validated configuration and returns the exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    let result = compute(cfg).and_then(|tables| match &cfg.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            write_tables(&tables, cfg.format, &mut f)
        }
        None => write_tables(&tables, cfg.format, &mut std::io::stdout().lock()),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_ranges() {
        let r: SigmaRange = "2:8192:x2".parse().unwrap();
        assert_eq!(r.values().len(), 13);
        let r: SigmaRange = "0.5:8:0.5".parse().unwrap();
        assert_eq!(r.values().len(), 16);
        for bad in ["2:1:1", "1:2", "0:2:1", "1:4:x1", "1:4:-1", "a:b:c"] {
            assert!(bad.parse::<SigmaRange>().is_err(), "{bad}");
        }
    }

    #[test]
    fn error_classes() {
        assert_eq!(
            CliError::from(Error::UnknownFunction("x".into())).exit_code(),
            2
        );
        assert_eq!(
            CliError::from(Error::Precision { bits: 64, min: 280 }).exit_code(),
            2
        );
        assert_eq!(
            CliError::from(Error::NonConvergence {
                steps: 3,
                last_change: 1.0
            })
            .exit_code(),
            3
        );
        assert_eq!(CliError::from(Error::UndefinedRate).exit_code(), 3);
    }

    #[test]
    fn table_precision_defaults_to_requirement() {
        let cli = Cli::try_parse_from(["mellin-quad", "table", "5"]).unwrap();
        assert_eq!(RunConfig::from_cli(cli).unwrap().precision_bits, 280);
        let cli =
            Cli::try_parse_from(["mellin-quad", "table", "5", "--precision-bits", "256"]).unwrap();
        let cfg = RunConfig::from_cli(cli).unwrap();
        assert_eq!(compute(&cfg).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn several_tables_share_one_csv_header() {
        let mut a = table("a".into(), &["x", "y"]);
        a.rows.push(vec!["1".into(), "2".into()]);
        let mut b = a.clone();
        b.rows[0][0] = "3".into();
        let mut buf = Vec::new();
        write_tables(&[a.clone()], Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,y\n1,2\n");
        let mut buf = Vec::new();
        write_tables(&[a, b], Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "part,x,y\n1,1,2\n2,3,2\n");
    }

    #[test]
    fn branch_parameter() {
        let cli = Cli::try_parse_from([
            "mellin-quad",
            "integrate",
            "branch",
            "--a",
            "0.5",
            "--sigma",
            "2",
        ])
        .unwrap();
        assert_eq!(
            RunConfig::from_cli(cli).unwrap().function.as_deref(),
            Some("branch:0.5")
        );
        let cli =
            Cli::try_parse_from(["mellin-quad", "integrate", "branch", "--sigma", "2"]).unwrap();
        assert!(RunConfig::from_cli(cli).is_err());
    }
}
