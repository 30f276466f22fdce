use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign, Word};

use crate::error::{Error, Result};

/// Working precision used when the caller does not ask for anything else.
pub const DEFAULT_PRECISION: usize = 256;
/// Smallest significand width accepted anywhere in the crate.
pub const MIN_PRECISION: usize = 64;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Validates a requested precision.
pub fn check_precision(bits: usize) -> Result<usize> {
    if bits < MIN_PRECISION {
        Err(Error::Precision {
            bits,
            min: MIN_PRECISION,
        })
    } else {
        Ok(bits)
    }
}

/// A real number carried at a fixed binary precision.
///
/// Binary operations produce a result at the larger of the two operand
/// precisions.
#[derive(Clone)]
pub struct HPReal {
    v: BigFloat,
    prec: usize,
}

impl HPReal {
    fn wrap(v: BigFloat, prec: usize) -> Self {
        HPReal { v, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Self::wrap(BigFloat::from_word(0, prec), prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::wrap(BigFloat::from_word(1, prec), prec)
    }

    pub fn from_f64(x: f64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_f64(x, prec), prec)
    }

    pub fn from_i64(x: i64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_i64(x, prec), prec)
    }

    pub fn from_ratio(num: i64, den: i64, prec: usize) -> Self {
        Self::from_i64(num, prec).div_ref(&Self::from_i64(den, prec))
    }

    /// Parses a decimal literal such as `"0.2552373684721620868389"`.
    pub fn parse(s: &str, prec: usize) -> Result<Self> {
        let v = with_consts(|cc| BigFloat::parse(s, Radix::Dec, prec, RM, cc));
        if v.is_nan() {
            return Err(Error::Parse(s.to_string()));
        }
        Ok(Self::wrap(v, prec))
    }

    pub fn pi(prec: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(prec, RM)), prec)
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Re-rounds to a different precision.
    pub fn with_precision(&self, prec: usize) -> Self {
        let mut v = self.v.clone();
        if !v.is_zero() {
            let _ = v.set_precision(prec, RM);
        }
        Self::wrap(v, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.v.is_positive() && !self.v.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    /// Nearest `f64`, saturating to `±inf` or `0` outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.v.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        match self.v.as_raw_parts() {
            None => f64::NAN,
            Some((m, _, sign, e, _)) => {
                let Some(top) = m.last() else { return 0.0 };
                if *top == 0 {
                    return 0.0;
                }
                let word_bits = Word::BITS as i32;
                let mut mant = *top as f64;
                if m.len() > 1 && word_bits < 53 {
                    mant += m[m.len() - 2] as f64 / 2f64.powi(word_bits);
                }
                let shift = e - word_bits;
                let mag = if shift < -1000 {
                    mant * 2f64.powi(-1000) * 2f64.powi(shift + 1000)
                } else {
                    mant * 2f64.powi(shift)
                };
                if sign == Sign::Neg {
                    -mag
                } else {
                    mag
                }
            }
        }
    }

    /// Full-precision decimal rendering.
    pub fn to_decimal_string(&self) -> String {
        with_consts(|cc| self.v.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into())
    }

    /// Fixed-point rendering with `decimals` digits after the point, rounded
    /// half away from zero.
    pub fn to_fixed_string(&self, decimals: usize) -> String {
        if !self.is_finite() {
            return self.to_decimal_string();
        }
        let half = HPReal::from_i64(10, self.prec + 8)
            .powi(-(decimals as i64))
            .div_i64(2);
        let r = self.abs().with_precision(self.prec + 8) + half;
        let s = r.to_decimal_string();
        let (mant, exp) = s.split_once('e').unwrap_or((&s, "0"));
        let exp: i64 = exp.trim_start_matches('+').parse().unwrap_or(0);
        let digits: String = mant.chars().filter(char::is_ascii_digit).collect();
        // `mant` is `d.ddd`, so the point sits after `exp + 1` digits.
        let point = exp + 1;
        let (int, frac) = if point <= 0 {
            ("0".to_string(), "0".repeat((-point) as usize) + &digits)
        } else {
            let p = point as usize;
            let padded = format!("{digits:0<p$}");
            (padded[..p].to_string(), padded[p..].to_string())
        };
        let frac: String = format!("{frac:0<decimals$}")[..decimals].to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        if decimals == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    fn p2(&self, other: &HPReal) -> usize {
        self.prec.max(other.prec)
    }

    pub fn add_ref(&self, o: &HPReal) -> HPReal {
        let p = self.p2(o);
        Self::wrap(self.v.add(&o.v, p, RM), p)
    }

    pub fn sub_ref(&self, o: &HPReal) -> HPReal {
        let p = self.p2(o);
        Self::wrap(self.v.sub(&o.v, p, RM), p)
    }

    pub fn mul_ref(&self, o: &HPReal) -> HPReal {
        let p = self.p2(o);
        Self::wrap(self.v.mul(&o.v, p, RM), p)
    }

    pub fn div_ref(&self, o: &HPReal) -> HPReal {
        let p = self.p2(o);
        Self::wrap(self.v.div(&o.v, p, RM), p)
    }

    pub fn mul_i64(&self, k: i64) -> HPReal {
        self.mul_ref(&HPReal::from_i64(k, self.prec))
    }

    pub fn div_i64(&self, k: i64) -> HPReal {
        self.div_ref(&HPReal::from_i64(k, self.prec))
    }

    pub fn add_f64(&self, x: f64) -> HPReal {
        self.add_ref(&HPReal::from_f64(x, self.prec))
    }

    pub fn mul_f64(&self, x: f64) -> HPReal {
        self.mul_ref(&HPReal::from_f64(x, self.prec))
    }

    pub fn recip(&self) -> HPReal {
        Self::wrap(self.v.reciprocal(self.prec, RM), self.prec)
    }

    pub fn abs(&self) -> HPReal {
        Self::wrap(self.v.abs(), self.prec)
    }

    pub fn square(&self) -> HPReal {
        self.mul_ref(self)
    }

    pub fn sqrt(&self) -> HPReal {
        Self::wrap(self.v.sqrt(self.prec, RM), self.prec)
    }

    pub fn exp(&self) -> HPReal {
        Self::wrap(with_consts(|cc| self.v.exp(self.prec, RM, cc)), self.prec)
    }

    /// Natural logarithm; NaN-free only for positive arguments.
    pub fn ln(&self) -> HPReal {
        Self::wrap(with_consts(|cc| self.v.ln(self.prec, RM, cc)), self.prec)
    }

    pub fn sin(&self) -> HPReal {
        Self::wrap(with_consts(|cc| self.v.sin(self.prec, RM, cc)), self.prec)
    }

    pub fn cos(&self) -> HPReal {
        Self::wrap(with_consts(|cc| self.v.cos(self.prec, RM, cc)), self.prec)
    }

    /// `self^e` for a positive base.
    pub fn pow(&self, e: &HPReal) -> HPReal {
        let p = self.p2(e);
        Self::wrap(with_consts(|cc| self.v.pow(&e.v, p, RM, cc)), p)
    }

    /// Integer power by repeated squaring; negative exponents go through
    /// the reciprocal.
    pub fn powi(&self, n: i64) -> HPReal {
        let r = Self::wrap(
            self.v.powi(n.unsigned_abs() as usize, self.prec, RM),
            self.prec,
        );
        if n < 0 {
            r.recip()
        } else {
            r
        }
    }

    pub fn floor(&self) -> HPReal {
        Self::wrap(self.v.floor(), self.prec)
    }

    pub fn ceil(&self) -> HPReal {
        Self::wrap(self.v.ceil(), self.prec)
    }

    /// Integer conversion of an already integral value.
    pub fn to_i64(&self) -> Option<i64> {
        let f = self.to_f64();
        if f.is_finite() && f.abs() < 9.0e15 {
            Some(f.round() as i64)
        } else {
            None
        }
    }

    pub fn max_ref(&self, o: &HPReal) -> HPReal {
        if self >= o {
            self.clone()
        } else {
            o.clone()
        }
    }

    pub fn min_ref(&self, o: &HPReal) -> HPReal {
        if self <= o {
            self.clone()
        } else {
            o.clone()
        }
    }
}

impl PartialEq for HPReal {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for HPReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

impl fmt::Debug for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "HPReal({}, {} bits)",
            self.to_decimal_string(),
            self.prec
        )
    }
}

impl fmt::Display for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr<&HPReal> for &HPReal {
            type Output = HPReal;
            fn $m(self, rhs: &HPReal) -> HPReal {
                self.$inner(rhs)
            }
        }
        impl $tr<HPReal> for HPReal {
            type Output = HPReal;
            fn $m(self, rhs: HPReal) -> HPReal {
                self.$inner(&rhs)
            }
        }
        impl $tr<&HPReal> for HPReal {
            type Output = HPReal;
            fn $m(self, rhs: &HPReal) -> HPReal {
                self.$inner(rhs)
            }
        }
        impl $tr<HPReal> for &HPReal {
            type Output = HPReal;
            fn $m(self, rhs: HPReal) -> HPReal {
                self.$inner(&rhs)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);
binop!(Div, div, div_ref);

impl Neg for &HPReal {
    type Output = HPReal;
    fn neg(self) -> HPReal {
        HPReal::wrap(self.v.clone().neg(), self.prec)
    }
}

impl Neg for HPReal {
    type Output = HPReal;
    fn neg(self) -> HPReal {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_strings() {
        let p = 256;
        let j = HPReal::parse("0.2552373684721620868389158816136888733878", p).unwrap();
        assert_eq!(
            j.to_fixed_string(40),
            "0.2552373684721620868389158816136888733878"
        );
        assert_eq!(j.to_fixed_string(3), "0.255");
        assert_eq!(HPReal::from_f64(-12.5, p).to_fixed_string(0), "-13");
        assert_eq!(HPReal::from_f64(0.00196, p).to_fixed_string(3), "0.002");
        assert_eq!(HPReal::from_f64(123.25, p).to_fixed_string(1), "123.3");
    }

    #[test]
    fn precision_propagates_as_max() {
        let a = HPReal::from_f64(1.5, 128);
        let b = HPReal::from_f64(2.0, 320);
        assert_eq!((&a + &b).precision(), 320);
        assert_eq!((&a * &a).precision(), 128);
    }

    #[test]
    fn to_f64_roundtrip() {
        for x in [
            0.0,
            1.0,
            -2.5,
            1e-300,
            3.7e250,
            -7.861e-57,
            std::f64::consts::PI,
        ] {
            assert_eq!(HPReal::from_f64(x, 256).to_f64(), x);
        }
    }

    #[test]
    fn elementary_functions() {
        let p = 256;
        let x = HPReal::from_ratio(3, 7, p);
        let lhs = x.exp().ln();
        assert!((&lhs - &x).abs().to_f64() < 1e-70);
        let s = x.sin();
        let c = x.cos();
        let one = &s * &s + &c * &c;
        assert!((one - HPReal::one(p)).abs().to_f64() < 1e-70);
        let two = HPReal::from_i64(2, p);
        assert!((two.sqrt().square() - &two).abs().to_f64() < 1e-70);
        let y = two.pow(&HPReal::from_f64(0.5, p));
        assert!((y - two.sqrt()).abs().to_f64() < 1e-70);
        assert_eq!(two.powi(-3).to_f64(), 0.125);
    }

    #[test]
    fn parse_literal() {
        let j = HPReal::parse("0.2552373684721620868389158816136888733878", 256).unwrap();
        assert!((j.to_f64() - 0.255_237_368_472_162_1).abs() < 1e-16);
        assert!(HPReal::parse("not-a-number", 256).is_err());
    }

    #[test]
    fn precision_floor_enforced() {
        assert!(check_precision(32).is_err());
        assert_eq!(check_precision(64).unwrap(), 64);
    }
}
