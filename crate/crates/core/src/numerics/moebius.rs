use crate::error::{Error, Result};

/// The Möbius function by trial division.
pub fn moebius(k: u64) -> Result<i8> {
    if k == 0 {
        return Err(Error::Domain("moebius(0) is undefined".into()));
    }
    let mut n = k;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return Ok(0);
            }
            sign = -sign;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        sign = -sign;
    }
    Ok(sign)
}
