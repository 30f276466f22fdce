use mellin_quad::corpus::{
    branch_point, exp_decay, lookup, sinc_power, sobolev_example, sobolev_remainder, CorpusKind,
};
use mellin_quad::mellin::mellin_transform_numeric;
use mellin_quad::{Error, HPReal};
use proptest::prelude::*;

#[test]
fn numeric_transform_at_zero_frequency_matches_exact_values() {
    let p = 192;
    let tol = 1e-15;
    let entries = [
        sinc_power(2, p).unwrap(),
        sinc_power(3, p).unwrap(),
        sinc_power(4, p).unwrap(),
        branch_point(0.5, p).unwrap(),
        branch_point(1.0, p).unwrap(),
        exp_decay(p).unwrap(),
        sobolev_example(p).unwrap(),
    ];
    for e in &entries {
        let v = mellin_transform_numeric(&e.spec, e.c, 0.0, tol, p).unwrap();
        let err = (&v.re - &e.exact).abs().to_f64();
        assert!(err < 10.0 * tol, "{}: {err:e}", e.name);
    }
}

#[test]
fn numeric_transform_matches_closed_form_off_axis() {
    let p = 192;
    let tol = 1e-12;
    let g = sobolev_example(p).unwrap();
    let f = sinc_power(3, p).unwrap();
    for v in [0.0, 1.0, -1.0, 5.0, -5.0, 20.0, -20.0] {
        let vh = HPReal::from_f64(v, p);
        for e in [&g, &f] {
            let num = mellin_transform_numeric(&e.spec, 0.0, v, tol, p).unwrap();
            let cf = e.spec.transform(&HPReal::zero(p), &vh, p).unwrap();
            let err = (&num - &cf).abs().to_f64();
            assert!(err < 10.0 * tol, "{} at v = {v}: {err:e}", e.name);
        }
    }
}

#[test]
fn exact_values() {
    let p = 128;
    assert_eq!(sinc_power(1, p).unwrap().exact, HPReal::one(p));
    let i6 = sinc_power(3, p).unwrap().exact.to_f64();
    assert!((i6 - 11.0 / 20.0).abs() < 1e-30);
    let i8 = sinc_power(4, p).unwrap().exact.to_f64();
    assert!((i8 - 151.0 / 315.0).abs() < 1e-16);
    assert_eq!(sobolev_example(p).unwrap().exact, HPReal::from_i64(4, p));
    let g = exp_decay(p).unwrap().exact.to_f64();
    assert!((g - std::f64::consts::PI.sqrt()).abs() < 1e-15);
    let j = branch_point(0.625, p).unwrap();
    assert!(!j.exact_derived);
    assert!((j.exact.to_f64() - 0.312_377_043_774_901).abs() < 1e-16);
}

#[test]
fn remainder_expansion_leading_terms() {
    let p = 256;
    let sigma = 64.0;
    let r = sobolev_remainder(sigma, p).unwrap();
    let lead = HPReal::from_f64(sigma, p).powi(4).mul_i64(60).recip();
    let next = -(HPReal::from_f64(sigma, p).powi(6).mul_i64(756).recip());
    let dev = &r - &lead;
    assert!(((&dev / &next).to_f64() - 1.0).abs() < 0.05);
}

#[test]
fn lookup_by_name() {
    let p = 128;
    assert_eq!(
        lookup("sinc_power:3", p).unwrap().kind,
        CorpusKind::SincPower { m: 3 }
    );
    assert_eq!(
        lookup("branch:1", p).unwrap().kind,
        CorpusKind::Branch { a: 1.0 }
    );
    assert_eq!(lookup("expdecay", p).unwrap().c, 0.5);
    assert_eq!(lookup("sobolev", p).unwrap().name, "sobolev");
    assert!(matches!(
        lookup("cosine", p),
        Err(Error::UnknownFunction(_))
    ));
    assert!(matches!(lookup("sinc_power:0", p), Err(Error::Domain(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn sinc_powers_are_zero_mellin_even(x in -30.0f64..30.0, m in 1u32..6) {
        let p = 160;
        let f = sinc_power(m, p).unwrap();
        let r = HPReal::from_f64(x, p).exp();
        let a = f.spec.eval(&r).re;
        let b = f.spec.eval(&r.recip()).re;
        prop_assert!((&a - &b).abs() <= a.abs().mul_f64(1e-40) + HPReal::from_f64(1e-300, p));
    }

    #[test]
    fn sobolev_example_is_zero_mellin_even(x in -30.0f64..30.0) {
        let p = 160;
        let g = sobolev_example(p).unwrap();
        let xh = HPReal::from_f64(x, p);
        let a = g.spec.eval_log(&xh).re;
        let b = g.spec.eval_log(&-xh).re;
        prop_assert_eq!(a, b);
    }
}
