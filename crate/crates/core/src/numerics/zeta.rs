//! Riemann zeta function for real arguments greater than one.
//!
//! Direct summation of the first `M - 1` terms followed by the
//! Euler–Maclaurin tail
//!
//! ```text
//! M^{1-s}/(s-1) + M^{-s}/2 + sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) * M^{-s-2j+1}
//! ```
//!
//! The correction series is asymptotic; it is cut at the first term below
//! the error target, and `M` is doubled if that never happens.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{check_precision, HPReal};
use crate::error::{Error, Result};

const MAX_CORRECTIONS: usize = 120;

static BERNOULLI: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());

/// Even-index Bernoulli numbers `B_0, B_2, ..., B_{2n}` as exact rationals.
fn bernoulli_even(n: usize) -> Vec<BigRational> {
    let mut cache = BERNOULLI.lock().expect("bernoulli cache");
    if cache.len() <= n {
        // Full table B_0..B_{2n} from sum_{k<m} C(m+1, k) B_k = -(m+1) B_m.
        let top = 2 * n;
        let mut b: Vec<BigRational> = Vec::with_capacity(top + 1);
        b.push(BigRational::one());
        for m in 1..=top {
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one(); // C(m+1, 0)
            for (k, bk) in b.iter().enumerate() {
                if !bk.is_zero() {
                    acc += BigRational::from_integer(binom.clone()) * bk;
                }
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        *cache = b.into_iter().step_by(2).collect();
    }
    cache[..=n].to_vec()
}

/// Nearest `HPReal` to an exact rational.
pub fn rational_to_hp(q: &BigRational, prec: usize) -> HPReal {
    let num = HPReal::parse(&q.numer().to_string(), prec).expect("integer literal");
    let den = HPReal::parse(&q.denom().to_string(), prec).expect("integer literal");
    num / den
}

/// `zeta(alpha)` with absolute error at most `2^-(precision - 8)`.
pub fn zeta(alpha: &HPReal, precision: usize) -> Result<HPReal> {
    check_precision(precision)?;
    if alpha.to_f64() <= 1.0 || !alpha.is_finite() || *alpha <= HPReal::one(alpha.precision()) {
        return Err(Error::Domain(format!(
            "zeta needs alpha > 1, got {}",
            alpha.to_f64()
        )));
    }
    let wp = precision + 32;
    let s = alpha.with_precision(wp);
    let target = HPReal::from_f64(2f64.powi(-(precision as i32 + 8)), wp);

    let mut m = (precision / 4).max(16) as i64;
    loop {
        if let Some(z) = zeta_em(&s, m, &target, wp) {
            return Ok(z.with_precision(precision));
        }
        m *= 2;
    }
}

fn zeta_em(s: &HPReal, m: i64, target: &HPReal, wp: usize) -> Option<HPReal> {
    let one = HPReal::one(wp);
    let neg_s = -s;
    let mut sum = HPReal::zero(wp);
    for k in 1..m {
        let kk = HPReal::from_i64(k, wp);
        sum = sum + kk.pow(&neg_s);
    }
    let mm = HPReal::from_i64(m, wp);
    let m_neg_s = mm.pow(&neg_s);
    sum = sum + (&m_neg_s * &mm) / (s - &one);
    sum = sum + m_neg_s.div_i64(2);

    let bern = bernoulli_even(MAX_CORRECTIONS);
    // running = s(s+1)...(s+2j-2) * M^{-s-2j+1} / (2j)!
    let m_inv2 = mm.square().recip();
    let mut running = &m_neg_s / &mm * s; // j = 1: s * M^{-s-1} / 2!
    running = running.div_i64(2);
    for (j, b) in bern.iter().enumerate().skip(1) {
        let term = &running * &rational_to_hp(b, wp);
        if term.abs() < *target {
            return Some(sum + term);
        }
        sum = sum + term;
        // Advance j -> j+1: multiply by (s+2j-1)(s+2j) / ((2j+1)(2j+2) M^2).
        let jj = j as i64;
        let f1 = s.add_f64((2 * jj - 1) as f64);
        let f2 = s.add_f64((2 * jj) as f64);
        running = running * f1 * f2 * &m_inv2;
        running = running.div_i64((2 * jj + 1) * (2 * jj + 2));
    }
    None
}
