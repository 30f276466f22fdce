use crate::numerics::{HPComplex, HPReal};

/// Richardson extrapolation of partial sums taken at windows `K0 * 2^l`,
/// assuming `S(K) = S + sum_{p >= p0} c_p K^{-p}` with every integer power.
pub fn richardson(partials: &[HPComplex], p0: u32) -> HPComplex {
    assert!(!partials.is_empty());
    let mut col: Vec<HPComplex> = partials.to_vec();
    for j in 1..partials.len() {
        let p = p0 + j as u32 - 1;
        let r = HPReal::from_i64(2, col[0].precision()).powi(p as i64);
        let denom = r.add_f64(-1.0).recip();
        col = col
            .windows(2)
            .map(|w| {
                let d = &w[1] - &w[0];
                &w[1] + &d.scale(&denom)
            })
            .collect();
    }
    col.pop().expect("non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn removes_algebraic_tail() {
        // S(K) = sum_{k <= K} 1/k^4, tail ~ K^-3/3 - K^-4/2 + ...
        let p = 256;
        let mut partials = Vec::new();
        let mut s = HPReal::zero(p);
        let mut k = 0i64;
        for l in 0..9 {
            let w = 8i64 << l;
            while k < w {
                k += 1;
                s = s + HPReal::from_i64(k, p).powi(-4);
            }
            partials.push(HPComplex::from_real(s.clone()));
        }
        let z4 = HPReal::pi(p).powi(4).div_i64(90);
        let est = richardson(&partials, 3);
        let err = (&est.re - &z4).abs().to_f64();
        assert!(err < 1e-25, "{err:e}");
        let plain = (&partials.last().unwrap().re - &z4).abs().to_f64();
        assert!(plain > 1e-11);
    }
}
