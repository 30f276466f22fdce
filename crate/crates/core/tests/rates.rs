use std::f64::consts::PI;

use mellin_quad::corpus::{sinc_power, sobolev_example, sobolev_remainder};
use mellin_quad::quadrature::{plan_from_envelope, plan_sinc_power, remainder_empirical};
use mellin_quad::rates::{
    bound_sobolev_dist, classify_decay, moebius_invert, rate_diagnostics, remainder_translated_sup,
    DecayClass,
};
use mellin_quad::{HPComplex, HPReal};
use proptest::prelude::*;

const TABLE6: [(f64, f64); 13] = [
    (2.0, 1.021267e-03),
    (4.0, 6.478229e-05),
    (8.0, 4.063969e-06),
    (16.0, 2.542343e-07),
    (32.0, 1.589334e-08),
    (64.0, 9.933915e-10),
    (128.0, 6.208787e-11),
    (256.0, 3.880506e-12),
    (512.0, 2.425318e-13),
    (1024.0, 1.515824e-14),
    (2048.0, 9.473903e-16),
    (4096.0, 5.921189e-17),
    (8192.0, 3.700743e-18),
];

const TABLE2: [(f64, f64); 14] = [
    (2.0, -1.385e-02),
    (3.0, 4.441e-04),
    (4.0, 6.830e-06),
    (5.0, 1.453e-07),
    (6.0, 4.117e-09),
    (7.0, 1.274e-10),
    (8.0, 4.216e-12),
    (9.0, 1.478e-13),
    (10.0, 5.372e-15),
    (11.0, 1.995e-16),
    (12.0, 7.525e-18),
    (13.0, 2.883e-19),
    (14.0, 1.120e-20),
    (15.0, 4.400e-22),
];

const TABLE1: [(f64, f64); 16] = [
    (0.5, -1.520635e+00),
    (1.0, -5.206349e-01),
    (1.5, -1.884456e-01),
    (2.0, -4.761905e-02),
    (2.5, -6.755332e-03),
    (3.0, -3.968254e-04),
    (3.5, -3.100198e-06),
    (4.0, 2.329011e-13),
    (4.5, 2.267646e-13),
    (5.0, 2.266369e-13),
    (5.5, 2.266218e-13),
    (6.0, 2.266187e-13),
    (6.5, 2.266178e-13),
    (7.0, 2.267143e-13),
    (7.5, 2.266709e-13),
    (8.0, 2.266480e-13),
];

fn g_transform(v: f64) -> f64 {
    4.0 * (1.0 - 3.0 * v * v) / (1.0 + v * v).powi(3)
}

fn remainders(sigma: f64, k_max: usize, p: usize) -> Vec<HPComplex> {
    (1..=k_max)
        .map(|k| HPComplex::from_real(sobolev_remainder(k as f64 * sigma, p).unwrap()))
        .collect()
}

#[test]
fn moebius_recovers_transform_samples() {
    let p = 192;
    let r = remainders(3.0, 64, p);
    let m = moebius_invert(&r, 1).unwrap();
    let want = g_transform(6.0 * PI);
    assert!((m.value.re.to_f64() / want - 1.0).abs() < 1e-2);
    assert!(m.value.re.abs() <= m.bound);
    let m2 = moebius_invert(&r, 2).unwrap();
    let want2 = g_transform(12.0 * PI);
    assert!((m2.value.re.to_f64() / want2 - 1.0).abs() < 1e-2);
    assert_eq!(m2.terms, 32);
}

#[test]
fn moebius_partial_sums_respect_the_bound() {
    let p = 192;
    let r = remainders(3.0, 3, p);
    let one = moebius_invert(&r[..1], 1).unwrap();
    let half = HPReal::from_ratio(1, 2, p);
    assert_eq!(one.value.re, -(&r[0].re * &half));
    let three = moebius_invert(&r, 1).unwrap();
    let moved = (&three.value.re - &one.value.re).abs();
    assert!(moved < (r[1].abs() + r[2].abs()) * half);
}

#[test]
fn moebius_on_a_bandlimited_sequence_is_zero() {
    let p = 128;
    let r = vec![HPComplex::zero(p); 16];
    assert!(moebius_invert(&r, 1).unwrap().value.is_zero());
}

#[test]
fn translated_remainders_sit_between_the_point_value_and_the_bound() {
    let p = 192;
    let g = sobolev_example(p).unwrap();
    let sigma = 4.0;
    let plan = plan_from_envelope(&g.spec, 0.0, sigma, 1e-45).unwrap();
    let exact = |_h: f64| HPReal::from_i64(4, p);
    let sup = remainder_translated_sup(&g.spec, &exact, 0.0, sigma, &plan, 9, p).unwrap();
    let at_one = remainder_empirical(&g.spec, &g.exact, 0.0, sigma, &plan, p)
        .unwrap()
        .abs();
    let bound = bound_sobolev_dist(4.0, sigma, &HPReal::from_i64(12, p), p).unwrap();
    assert!(
        at_one <= sup && sup <= bound,
        "{} {} {}",
        at_one,
        sup,
        bound
    );
    let single = remainder_translated_sup(&g.spec, &exact, 0.0, sigma, &plan, 1, p).unwrap();
    assert_eq!(single, at_one);
}

#[test]
fn translation_keeps_bandlimited_exactness() {
    let p = 192;
    let f = sinc_power(4, p).unwrap();
    let sigma = 4.0;
    let plan = plan_sinc_power(4, sigma, 12).unwrap();
    let exact = f.exact.clone();
    let sup =
        remainder_translated_sup(&f.spec, &|_| exact.clone(), 0.0, sigma, &plan, 7, p).unwrap();
    assert!(sup.to_f64() <= plan.truncation_bound.unwrap(), "{sup}");
}

#[test]
fn classifier_on_printed_sequences() {
    match classify_decay(&TABLE6, 256).unwrap().verdict {
        DecayClass::PolynomialRate { r_plus_alpha } => assert!((r_plus_alpha - 4.0).abs() < 0.05),
        v => panic!("{v:?}"),
    }
    match classify_decay(&TABLE2, 256).unwrap().verdict {
        DecayClass::ExponentialRate { a } => assert!((a - 0.5).abs() < 0.05, "{a}"),
        v => panic!("{v:?}"),
    }
    match classify_decay(&TABLE1, 256).unwrap().verdict {
        DecayClass::Bandlimited { t } => assert!((t - 8.0 * PI).abs() < 1e-9),
        v => panic!("{v:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rate_identity(mant in 1.0f64..10.0, exp10 in -60i32..-1, sigma in 0.25f64..20.0, a in 0.05f64..2.0) {
        let p = 192;
        let e = HPReal::from_f64(mant, p) * HPReal::from_i64(10, p).powi(exp10 as i64);
        let d = rate_diagnostics(&e, sigma, Some(a), None).unwrap();
        let lhs = &d.rate + d.c_exp.unwrap().abs().ln() / HPReal::from_f64(sigma, p);
        let rhs = HPReal::pi(p).mul_f64(2.0 * a);
        prop_assert!((lhs - rhs).abs().to_f64() < 1e-50);
    }

    // Scales that push every sample under the zero threshold (1e-19 at 256
    // bits) turn the verdict into bandlimited by design, so they are excluded.
    #[test]
    fn classifier_is_scale_equivariant(scale_exp in -14i32..20) {
        let k = 10f64.powi(scale_exp);
        for seq in [&TABLE6[..], &TABLE2[..]] {
            let base = classify_decay(seq, 256).unwrap();
            let scaled: Vec<(f64, f64)> = seq.iter().map(|(s, e)| (*s, e * k)).collect();
            let other = classify_decay(&scaled, 256).unwrap();
            match (base.verdict, other.verdict) {
                (DecayClass::ExponentialRate { a }, DecayClass::ExponentialRate { a: b }) => {
                    prop_assert!((a - b).abs() < 1e-9)
                }
                (DecayClass::PolynomialRate { r_plus_alpha: a }, DecayClass::PolynomialRate { r_plus_alpha: b }) => {
                    prop_assert!((a - b).abs() < 1e-9)
                }
                (x, y) => prop_assert!(false, "{x:?} vs {y:?}"),
            }
        }
    }
}
