//! Reference integrands with exact values, transforms and decay envelopes.

use std::f64::consts::PI;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mellin::{Decay, Envelope, FunctionSpec, Metadata, Side, Term};
use crate::numerics::{check_precision, rational_to_hp, HPComplex, HPReal};
use crate::quadrature::{quad_sum_untruncated, TruncationPlan};

const J_HALF: &str = "0.2552373684721620868389158816136888733878";
const J_FIVE_EIGHTHS: &str = "0.3123770437749010235851625171708586776416";
const J_ONE: &str = "0.4876105654991947134580915823151850342698";

/// Which family an entry belongs to, with its parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CorpusKind {
    SincPower { m: u32 },
    Branch { a: f64 },
    ExpDecay,
    Sobolev,
}

impl FromStr for CorpusKind {
    type Err = Error;

    /// `sinc_power:m`, `branch:a` (decimal or `p/q`), `expdecay`, `sobolev`.
    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let unknown = || Error::UnknownFunction(s.to_string());
        match (head, arg) {
            ("sinc_power", Some(m)) => {
                let m: u32 = m.parse().map_err(|_| unknown())?;
                if m == 0 || m > 30 {
                    return Err(Error::Domain(format!(
                        "sinc_power needs 1 <= m <= 30, got {m}"
                    )));
                }
                Ok(CorpusKind::SincPower { m })
            }
            ("branch", Some(a)) => {
                let a = parse_fraction(a).ok_or_else(unknown)?;
                if !(a > 0.0) || !a.is_finite() {
                    return Err(Error::Domain(format!("branch needs a > 0, got {a}")));
                }
                Ok(CorpusKind::Branch { a })
            }
            ("expdecay", None) => Ok(CorpusKind::ExpDecay),
            ("sobolev", None) => Ok(CorpusKind::Sobolev),
            _ => Err(unknown()),
        }
    }
}

fn parse_fraction(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((p, q)) => Some(p.trim().parse::<f64>().ok()? / q.trim().parse::<f64>().ok()?),
        None => s.trim().parse().ok(),
    }
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub kind: CorpusKind,
    pub spec: FunctionSpec,
    /// Abscissa at which `exact` is the value of the integral.
    pub c: f64,
    pub exact: HPReal,
    /// `exact` was computed here rather than taken from a known constant.
    pub exact_derived: bool,
    pub notes: String,
}

/// Looks an entry up by its command-line name.
pub fn lookup(name: &str, precision: usize) -> Result<CorpusEntry> {
    match name.parse::<CorpusKind>()? {
        CorpusKind::SincPower { m } => sinc_power(m, precision),
        CorpusKind::Branch { a } => branch_point(a, precision),
        CorpusKind::ExpDecay => exp_decay(precision),
        CorpusKind::Sobolev => sobolev_example(precision),
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut b = BigInt::one();
    for i in 0..k {
        b = b * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    b
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Centered Irwin-Hall density `q_n(0)` for even `n`, exactly.
fn irwin_hall_at_zero(n: u32) -> BigRational {
    let half = n / 2;
    let mut acc = BigInt::zero();
    for j in 0..half {
        let t = binomial(n, j) * BigInt::from(half - j).pow(n - 1);
        if j % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    BigRational::new(acc, factorial(n - 1))
}

/// Centered Irwin-Hall density of `n` uniforms on `[-1/2, 1/2]`.
fn irwin_hall(n: u32, y: &HPReal) -> HPReal {
    let p = y.precision();
    let half = HPReal::from_ratio(n as i64, 2, p);
    let y = -y.abs();
    if !(y > -&half) {
        return HPReal::zero(p);
    }
    let mut acc = HPReal::zero(p);
    for j in 0..=n {
        let shift = &y + &half - HPReal::from_i64(j as i64, p);
        if !shift.is_positive() {
            break;
        }
        let t = rational_to_hp(&BigRational::from_integer(binomial(n, j)), p)
            * shift.powi((n - 1) as i64);
        acc = if j % 2 == 0 { acc + t } else { acc - t };
    }
    acc / rational_to_hp(&BigRational::from_integer(factorial(n - 1)), p)
}

fn sinc_pow(x: &HPReal, m: u32) -> HPReal {
    let p = x.precision();
    let y = HPReal::pi(p) * x;
    let guard = HPReal::from_f64(2f64.powi(-((p / 4) as i32)), p);
    let s = if x.abs() < guard {
        let y2 = y.square();
        HPReal::one(p) - y2.div_i64(6) + y2.square().div_i64(120)
    } else {
        y.sin() / &y
    };
    s.powi(2 * m as i64)
}

fn sinc_pow_fast(x: f64, m: u32) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let r = x - 2.0 * (x / 2.0).round();
    ((PI * r).sin() / (PI * x)).powi(2 * m as i32)
}

fn sinc_envelope(m: u32) -> Envelope {
    let coeff = PI.powi(-(2 * m as i32));
    Envelope::symmetric(Side::single(Term::new(
        coeff,
        Decay::Algebraic { p: 2.0 * m as f64 },
    )))
}

/// `f_{2m}(r) = (sin(pi log r) / (pi log r))^{2m}`, bandlimited to `[-2 pi m, 2 pi m]`.
pub fn sinc_power(m: u32, precision: usize) -> Result<CorpusEntry> {
    check_precision(precision)?;
    if m == 0 {
        return Err(Error::Domain("sinc_power needs m >= 1".into()));
    }
    let n = 2 * m;
    let spec = FunctionSpec::from_log_real(format!("sinc_power:{m}"), move |x| sinc_pow(x, m))
        .with_fast(move |x| sinc_pow_fast(x, m))
        .with_transform(move |c, v, p| {
            if !c.is_zero() {
                return None;
            }
            let y = v / HPReal::pi(p).mul_i64(2);
            Some(HPComplex::from_real(irwin_hall(n, &y)))
        })
        .with_tail_sup(move |c, _alpha, v| (c == 0.0 && v >= 2.0 * PI * m as f64).then_some(0.0))
        .with_envelope(move |c| (c == 0.0).then(|| sinc_envelope(m)))
        .with_metadata(Metadata {
            bandwidth: Some(2.0 * PI * m as f64),
            ..Default::default()
        });
    Ok(CorpusEntry {
        name: spec.name.clone(),
        kind: CorpusKind::SincPower { m },
        spec,
        c: 0.0,
        exact: rational_to_hp(&irwin_hall_at_zero(n), precision),
        exact_derived: false,
        notes: format!("I_{n} = integral of f_{n}(r) dr/r; 0-Mellin-even, band 2*pi*{m}"),
    })
}

/// `g_a(r) = f_8(r) sqrt(a^2 + log^2 r)`, analytic in a strip of half-width `a`.
pub fn branch_point(a: f64, precision: usize) -> Result<CorpusEntry> {
    check_precision(precision)?;
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("branch needs a > 0, got {a}")));
    }
    let env_coeff = PI.powi(-8);
    let spec = FunctionSpec::from_log_real(format!("branch:{a}"), move |x| {
        let p = x.precision();
        let ah = HPReal::from_f64(a, p);
        sinc_pow(x, 4) * (ah.square() + x.square()).sqrt()
    })
    .with_fast(move |x| sinc_pow_fast(x, 4) * (a * a + x * x).sqrt())
    .with_envelope(move |c| {
        (c == 0.0).then(|| {
            Envelope::symmetric(Side {
                terms: vec![
                    Term::new(env_coeff, Decay::Algebraic { p: 7.0 }),
                    Term::new(a * env_coeff, Decay::Algebraic { p: 8.0 }),
                ],
            })
        })
    })
    .with_metadata(Metadata {
        strip_half_width: Some(a),
        ..Default::default()
    });

    let literal = match a {
        0.5 => Some(J_HALF),
        0.625 => Some(J_FIVE_EIGHTHS),
        1.0 => Some(J_ONE),
        _ => None,
    };
    let (exact, derived) = match literal {
        Some(s) => (HPReal::parse(s, precision)?, false),
        None => (
            branch_self_convergence(&spec, BRANCH_SIGMA_STAR, precision)?,
            true,
        ),
    };
    Ok(CorpusEntry {
        name: spec.name.clone(),
        kind: CorpusKind::Branch { a },
        spec,
        c: 0.0,
        exact,
        exact_derived: derived,
        notes: if derived {
            format!(
                "J_a for a = {a} from the untruncated rule at sigma = {BRANCH_SIGMA_STAR}, \
                 accurate to about exp(-2 pi a sigma)"
            )
        } else {
            format!("J_a for a = {a}, 40-digit reference constant")
        },
    })
}

/// Step parameter of the self-convergence reference for untabulated `a`.
pub const BRANCH_SIGMA_STAR: u32 = 16;

/// `(1/sigma) sum_k g_a(e^{k/sigma})` over all of `Z`, which differs from
/// `J_a` by the rule's remainder, `O(e^{-2 pi a sigma})`. Windows are multiples
/// of the period `sigma` of `sin^8(pi k / sigma)` so the tail extrapolation
/// sees a smooth expansion.
pub fn branch_self_convergence(
    spec: &FunctionSpec,
    sigma: u32,
    precision: usize,
) -> Result<HPReal> {
    if sigma == 0 {
        return Err(Error::Domain("sigma must be positive".into()));
    }
    let base = TruncationPlan::symmetric(2 * sigma as u64);
    Ok(quad_sum_untruncated(spec, 0.0, sigma as f64, &base, precision)?.re)
}

/// `f(r) = e^{-r}` at `c = 1/2`, whose integral is `Gamma(1/2) = sqrt(pi)`.
pub fn exp_decay(precision: usize) -> Result<CorpusEntry> {
    check_precision(precision)?;
    let spec = FunctionSpec::from_log_real("expdecay", |x| (-x.exp()).exp())
        .with_envelope(|c| {
            (c > 0.0).then(|| Envelope {
                right: Side::single(Term::new(1.0, Decay::SuperExp { b: c })),
                left: Side::single(Term::new(1.0, Decay::PolyExp { d: 0.0, lambda: c })),
            })
        })
        .with_metadata(Metadata {
            strip_half_width: Some(PI / 2.0),
            ..Default::default()
        });
    Ok(CorpusEntry {
        name: spec.name.clone(),
        kind: CorpusKind::ExpDecay,
        spec,
        c: 0.5,
        exact: HPReal::pi(precision).sqrt(),
        exact_derived: false,
        notes: "Gamma(1/2) = sqrt(pi); rate limited by the even part to pi^2".into(),
    })
}

/// `g(r) = r log^2 r` on `(0, 1)`, `r^{-1} log^2 r` on `[1, inf)`; in the
/// Mellin-Sobolev class of order 4 and no higher.
pub fn sobolev_example(precision: usize) -> Result<CorpusEntry> {
    check_precision(precision)?;
    let spec = FunctionSpec::from_log_real("sobolev", |x| x.square() * (-x.abs()).exp())
        .with_fast(|x| x * x * (-x.abs()).exp())
        .with_transform(|c, v, p| {
            if !(c.abs() < HPReal::one(p)) {
                return None;
            }
            let s = HPComplex::new(c.with_precision(p), v.with_precision(p));
            let one = HPComplex::from_real(HPReal::one(p));
            let a = (&one + &s).powi(3).recip();
            let b = (&one - &s).powi(3).recip();
            Some((&a + &b).scale(&HPReal::from_i64(2, p)))
        })
        .with_tail_sup(|c, alpha, v| {
            if v < 1.0 || c.abs() >= 1.0 {
                None
            } else if c == 0.0 && alpha <= 4.0 {
                Some(12.0 * v.powf(alpha - 4.0))
            } else if alpha <= 3.0 {
                Some(4.0 * v.powf(alpha - 3.0))
            } else {
                None
            }
        })
        .with_envelope(|c| {
            (c.abs() < 1.0).then(|| Envelope {
                right: Side::single(Term::new(
                    1.0,
                    Decay::PolyExp {
                        d: 2.0,
                        lambda: 1.0 - c,
                    },
                )),
                left: Side::single(Term::new(
                    1.0,
                    Decay::PolyExp {
                        d: 2.0,
                        lambda: 1.0 + c,
                    },
                )),
            })
        })
        .with_metadata(Metadata {
            sobolev_order: Some(4.0),
            ..Default::default()
        });
    Ok(CorpusEntry {
        name: spec.name.clone(),
        kind: CorpusKind::Sobolev,
        spec,
        c: 0.0,
        exact: HPReal::from_i64(4, precision),
        exact_derived: false,
        notes: "transform 4(1-3v^2)/(1+v^2)^3; remainder known in closed form".into(),
    })
}

/// Closed-form remainder of the rule for the Sobolev example at `c = 0`:
/// `4 - (2/sigma^3)(e^{-2/sigma} + e^{-1/sigma}) / (1 - e^{-1/sigma})^3`.
pub fn sobolev_remainder(sigma: f64, precision: usize) -> Result<HPReal> {
    check_precision(precision)?;
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    let wp = precision + 64;
    let s = HPReal::from_f64(sigma, wp);
    let q = (-s.recip()).exp();
    let num = q.square() + &q;
    let den = (HPReal::one(wp) - &q).powi(3);
    let r = HPReal::from_i64(4, wp) - num / den * s.powi(3).recip().mul_i64(2);
    Ok(r.with_precision(precision))
}

/// Value of the tabulated closed form
/// `(m / 2^{2m-3}) sum_{j<m} (-1)^j (2m-2j)^{2m-2} / (j! (2m-1-j)!)`.
pub fn sinc_power_integral_formula(m: u32) -> BigRational {
    let mut acc = BigRational::zero();
    for j in 0..m {
        let t = BigRational::new(
            BigInt::from(2 * (m - j)).pow(2 * m - 2),
            factorial(j) * factorial(2 * m - 1 - j),
        );
        acc = if j % 2 == 0 { acc + t } else { acc - t };
    }
    let scale = if 2 * m >= 3 {
        BigRational::new(BigInt::from(m), BigInt::from(2).pow(2 * m - 3))
    } else {
        BigRational::from_integer(BigInt::from(2 * m))
    };
    let out = acc * scale;
    debug_assert!(!out.is_negative());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sinc_integrals() {
        assert_eq!(irwin_hall_at_zero(2), r(1, 1));
        assert_eq!(irwin_hall_at_zero(4), r(2, 3));
        assert_eq!(irwin_hall_at_zero(6), r(11, 20));
        assert_eq!(irwin_hall_at_zero(8), r(151, 315));
    }

    #[test]
    fn tabulated_formula_agrees_from_m_two() {
        for m in 2..=10 {
            assert_eq!(
                sinc_power_integral_formula(m),
                irwin_hall_at_zero(2 * m),
                "m = {m}"
            );
        }
        // At m = 1 the formula evaluates to 2 while the integral is 1.
        assert_eq!(sinc_power_integral_formula(1), r(2, 1));
    }

    #[test]
    fn names_parse() {
        assert_eq!(
            "sinc_power:4".parse::<CorpusKind>().unwrap(),
            CorpusKind::SincPower { m: 4 }
        );
        assert_eq!(
            "branch:5/8".parse::<CorpusKind>().unwrap(),
            CorpusKind::Branch { a: 0.625 }
        );
        assert_eq!(
            "branch:0.5".parse::<CorpusKind>().unwrap(),
            CorpusKind::Branch { a: 0.5 }
        );
        assert_eq!(
            "expdecay".parse::<CorpusKind>().unwrap(),
            CorpusKind::ExpDecay
        );
        assert_eq!(
            "sobolev".parse::<CorpusKind>().unwrap(),
            CorpusKind::Sobolev
        );
        assert!(matches!(
            "gauss".parse::<CorpusKind>(),
            Err(Error::UnknownFunction(_))
        ));
        assert!("sinc_power".parse::<CorpusKind>().is_err());
        assert!("branch:-1".parse::<CorpusKind>().is_err());
    }

    #[test]
    fn sinc_removable_point() {
        let p = 256;
        let e = sinc_power(4, p).unwrap();
        assert_eq!(e.spec.eval(&HPReal::one(p)).re, HPReal::one(p));
        let tiny = HPReal::from_f64(1e-30, p);
        let v = e.spec.eval_log(&tiny).re;
        assert!((v - HPReal::one(p)).abs().to_f64() < 1e-57);
    }

    #[test]
    fn sinc_fast_matches() {
        let e = sinc_power(2, 128).unwrap();
        for x in [0.3, 1.0, 2.5, 17.25, 1234.5] {
            let hp = e.spec.eval_log(&HPReal::from_f64(x, 128)).re.to_f64();
            let fast = e.spec.eval_fast(x).unwrap();
            assert!(
                (hp - fast).abs() <= 1e-15 * (PI * x).powi(-4).max(hp.abs()) + 1e-300,
                "x = {x}"
            );
        }
    }

    #[test]
    fn sinc_band_edge_is_exact_zero() {
        let e = sinc_power(4, 256).unwrap();
        let v = HPReal::from_f64(8.0 * PI + 1.0, 256);
        assert!(e
            .spec
            .transform(&HPReal::zero(256), &v, 256)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn branch_literals() {
        let e = branch_point(0.5, 256).unwrap();
        assert!(!e.exact_derived);
        assert!((e.exact.to_f64() - 0.2552373684721621).abs() < 1e-16);
    }

    #[test]
    fn branch_reference_self_converges() {
        let p = 192;
        let a = 0.3;
        let e = branch_point(a, p).unwrap();
        assert!(e.exact_derived);
        let j20 = branch_self_convergence(&e.spec, 20, p).unwrap();
        let diff = (&e.exact - &j20).abs().to_f64();
        assert!(diff < (-2.0 * PI * a * 15.0).exp(), "{diff:e}");
        // The same construction reproduces a tabulated constant.
        let half = branch_point(0.5, p).unwrap();
        let j = branch_self_convergence(&half.spec, 16, p).unwrap();
        assert!((&j - &half.exact).abs().to_f64() < (-2.0 * PI * 0.5 * 15.0).exp());
    }

    #[test]
    fn sobolev_remainder_values() {
        let r = sobolev_remainder(16.0, 256).unwrap().to_f64();
        assert!((r / 2.542343e-07 - 1.0).abs() < 5e-7);
        let r = sobolev_remainder(2.0, 256).unwrap().to_f64();
        assert!((r / 1.021267e-03 - 1.0).abs() < 5e-7);
    }

    #[test]
    fn sobolev_transform_at_zero_abscissa() {
        let p = 192;
        let e = sobolev_example(p).unwrap();
        for v in [0.0, 0.5, 3.0] {
            let m = e
                .spec
                .transform(&HPReal::zero(p), &HPReal::from_f64(v, p), p)
                .unwrap();
            let want = 4.0 * (1.0 - 3.0 * v * v) / (1.0 + v * v).powi(3);
            assert!((m.re.to_f64() - want).abs() < 1e-14);
            assert!(m.im.abs().to_f64() < 1e-50);
        }
    }
}
