//! Mellin translation and the c-Mellin-even/odd decomposition.

use std::sync::{Arc, Mutex};

use super::spec::{FunctionSpec, Metadata};
use crate::error::{Error, Result};
use crate::numerics::{HPComplex, HPReal};

/// Per-precision cache of `ln h`.
struct LnCache {
    h: f64,
    slots: Mutex<Vec<(usize, HPReal)>>,
}

impl LnCache {
    fn new(h: f64) -> Self {
        LnCache {
            h,
            slots: Mutex::new(Vec::new()),
        }
    }

    fn get(&self, prec: usize) -> HPReal {
        let mut slots = self.slots.lock().expect("ln cache");
        if let Some((_, v)) = slots.iter().find(|(p, _)| *p == prec) {
            return v.clone();
        }
        let v = HPReal::from_f64(self.h, prec).ln();
        slots.push((prec, v.clone()));
        v
    }
}

/// `(tau_h^c f)(x) = h^c f(hx)`.
pub fn mellin_translate(f: &FunctionSpec, h: f64, c: f64) -> Result<FunctionSpec> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Domain(format!(
            "translation factor must be positive, got {h}"
        )));
    }
    if h == 1.0 {
        return Ok(f.clone());
    }
    if f.is_zero() {
        return Ok(FunctionSpec::zero());
    }
    let ln_h = h.ln();
    let cache = Arc::new(LnCache::new(h));

    let inner = f.clone();
    let lc = cache.clone();
    let mut out =
        FunctionSpec::from_log(format!("translate({}, h={h}, c={c})", f.name), move |x| {
            let lh = lc.get(x.precision());
            let factor = (&lh * &HPReal::from_f64(c, x.precision())).exp();
            inner.eval_log(&(x + &lh)).scale(&factor)
        });
    out.real_valued = f.real_valued;
    out.metadata = f.metadata;

    if let Some(fast) = f.fast.clone() {
        let k = h.powf(c);
        out.fast = Some(Arc::new(move |x| k * fast(x + ln_h)));
    }
    if let Some(t) = f.transform.clone() {
        let lc = cache.clone();
        out.transform = Some(Arc::new(move |cc: &HPReal, v: &HPReal, p| {
            let m = t(cc, v, p)?;
            let lh = lc.get(p);
            let dc = &HPReal::from_f64(c, p) - cc;
            let modulus = (&lh * &dc).exp();
            let phase = HPComplex::cis(&-(&lh * v));
            Some((&phase * &m).scale(&modulus))
        }));
    }
    if let Some(ts) = f.tail_sup.clone() {
        out.tail_sup = Some(Arc::new(move |cc, alpha, v| {
            ts(cc, alpha, v).map(|s| s * h.powf(c - cc))
        }));
    }
    if let Some(env) = f.envelope.clone() {
        out.envelope = Some(Arc::new(move |cc| {
            env(cc).map(|e| e.translated(ln_h).scaled(h.powf(c - cc)))
        }));
    }
    Ok(out)
}

/// `f_{c+}(x) = (x^c f(x) + x^{-c} f(1/x)) / 2`.
pub fn mellin_even_part(f: &FunctionSpec, c: f64) -> FunctionSpec {
    parity_part(f, c, 1.0)
}

/// `f_{c-}(x) = (x^c f(x) - x^{-c} f(1/x)) / 2`.
pub fn mellin_odd_part(f: &FunctionSpec, c: f64) -> FunctionSpec {
    parity_part(f, c, -1.0)
}

fn parity_part(f: &FunctionSpec, c: f64, sign: f64) -> FunctionSpec {
    let label = if sign > 0.0 { "even" } else { "odd" };
    if f.is_zero() {
        return FunctionSpec::zero();
    }
    let inner = f.clone();
    let mut out = FunctionSpec::from_log(format!("{label}({}, c={c})", f.name), move |x| {
        let p = x.precision();
        let cx = &HPReal::from_f64(c, p) * x;
        let w = cx.exp();
        let a = inner.eval_log(x).scale(&w);
        let b = inner.eval_log(&-x).scale(&w.recip());
        let s = if sign > 0.0 { &a + &b } else { &a - &b };
        s.scale(&HPReal::from_ratio(1, 2, p))
    });
    out.real_valued = f.real_valued;
    out.metadata = Metadata::default();

    if let Some(fast) = f.fast.clone() {
        out.fast = Some(Arc::new(move |x| {
            let w = (c * x).exp();
            0.5 * (w * fast(x) + sign * fast(-x) / w)
        }));
    }
    if let Some(t) = f.transform.clone() {
        out.transform = Some(Arc::new(move |cc: &HPReal, v: &HPReal, p| {
            let chp = HPReal::from_f64(c, p);
            let a = t(&(&chp + cc), v, p)?;
            let b = t(&(&chp - cc), &-v, p)?;
            let s = if sign > 0.0 { &a + &b } else { &a - &b };
            Some(s.scale(&HPReal::from_ratio(1, 2, p)))
        }));
    }
    if let Some(ts) = f.tail_sup.clone() {
        out.tail_sup = Some(Arc::new(move |cc, alpha, v| {
            Some(0.5 * (ts(c + cc, alpha, v)? + ts(c - cc, alpha, v)?))
        }));
    }
    if let Some(env) = f.envelope.clone() {
        out.envelope = Some(Arc::new(move |cc| {
            let a = env(c + cc)?;
            let b = env(c - cc)?;
            Some(a.plus(&b.mirrored()).scaled(0.5))
        }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const P: usize = 192;

    fn exp_minus_r() -> FunctionSpec {
        FunctionSpec::from_fn("exp", |r| (-r).exp())
    }

    fn close(a: &HPComplex, b: &HPReal, tol: f64) -> bool {
        (&a.re - b).abs().to_f64() < tol && a.im.abs().to_f64() < tol
    }

    #[test]
    fn identity_translation() {
        let f = exp_minus_r();
        let g = mellin_translate(&f, 1.0, 0.3).unwrap();
        let r = HPReal::from_f64(0.7, P);
        assert_eq!(f.eval(&r).re, g.eval(&r).re);
    }

    #[test]
    fn translation_by_four() {
        let g = mellin_translate(&exp_minus_r(), 4.0, 0.5).unwrap();
        let want = HPReal::from_i64(-4, P).exp().mul_i64(2);
        assert!(close(&g.eval(&HPReal::one(P)), &want, 1e-55));
    }

    #[test]
    fn translation_rejects_nonpositive_factor() {
        assert!(mellin_translate(&exp_minus_r(), 0.0, 0.5).is_err());
        assert!(mellin_translate(&exp_minus_r(), -2.0, 0.5).is_err());
    }

    #[test]
    fn parity_parts_at_e() {
        let f = exp_minus_r();
        let e = HPReal::one(P).exp();
        let a = (-&e).exp();
        let b = (-e.recip()).exp();
        let even = mellin_even_part(&f, 0.0).eval(&e);
        let odd = mellin_odd_part(&f, 0.0).eval(&e);
        assert!(close(&even, &(&a + &b).div_i64(2), 1e-55));
        assert!(close(&odd, &(&a - &b).div_i64(2), 1e-55));
    }

    #[test]
    fn odd_part_vanishes_at_one() {
        for c in [0.0, 0.5, -1.25] {
            let odd = mellin_odd_part(&exp_minus_r(), c);
            assert!(odd.eval(&HPReal::one(P)).is_zero());
        }
    }

    #[test]
    fn recomposition() {
        let f = exp_minus_r();
        let c = 0.5;
        let even = mellin_even_part(&f, c);
        let odd = mellin_odd_part(&f, c);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = HPReal::from_f64(rng.gen_range(0.01..20.0), P);
            let w = x.pow(&HPReal::from_f64(-c, P));
            let (e, o) = (even.eval(&x), odd.eval(&x));
            let back = (&e + &o).scale(&w);
            let direct = f.eval(&x);
            let err = (&back.re - &direct.re).abs();
            let size = direct.re.abs() + (e.re.abs() + o.re.abs()) * &w;
            assert!(err <= size.mul_f64(2f64.powi(-(P as i32) + 8)));
        }
    }
}
