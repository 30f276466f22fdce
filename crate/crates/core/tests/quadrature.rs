use mellin_quad::corpus::{exp_decay, sinc_power, sobolev_example, sobolev_remainder};
use mellin_quad::mellin::{mellin_even_part, mellin_odd_part, FunctionSpec};
use mellin_quad::quadrature::{
    plan_from_envelope, plan_gamma, plan_sinc_power, poisson_identity_residual, quad_sum,
    remainder_empirical, remainder_from_transform, TruncationPlan,
};
use mellin_quad::{Error, HPReal};

#[test]
fn poisson_identity_for_the_order_four_example() {
    let p = 256;
    let g = sobolev_example(p).unwrap();
    let r =
        poisson_identity_residual(&g.spec, 0.0, 1.0, &TruncationPlan::symmetric(8), 64, p).unwrap();
    assert!(r.residual.to_f64() < 1e-30, "{:e}", r.residual.to_f64());
    // The lattice side is sigma * (exact - R).
    let want = HPReal::from_i64(4, p) - sobolev_remainder(1.0, p).unwrap();
    assert!((&r.lattice.re - &want).abs().to_f64() < 1e-30);
}

#[test]
fn poisson_identity_for_a_bandlimited_integrand() {
    let p = 256;
    let f = sinc_power(2, p).unwrap();
    // sigma = 1.5 keeps one nonzero transform sample; the lattice has period 3.
    let r =
        poisson_identity_residual(&f.spec, 0.0, 1.5, &TruncationPlan::symmetric(48), 0, p).unwrap();
    assert!(r.residual.to_f64() < 1e-30, "{:e}", r.residual.to_f64());
    assert!(r.spectral.re.to_f64() != 1.5 * 2.0 / 3.0);
}

#[test]
fn odd_part_is_annihilated() {
    let p = 256;
    let e = exp_decay(p).unwrap();
    let odd = mellin_odd_part(&e.spec, e.c);
    for sigma in [0.5, 2.0, 3.7] {
        let q = quad_sum(&odd, 0.0, sigma, &TruncationPlan::symmetric(60), p).unwrap();
        assert!(
            q.value.abs().to_f64() < 2f64.powi(-240),
            "{:e}",
            q.value.abs().to_f64()
        );
    }
}

#[test]
fn even_part_carries_the_rule() {
    let p = 192;
    let e = exp_decay(p).unwrap();
    let even = mellin_even_part(&e.spec, e.c);
    let sigma = 1.0;
    let k = 40;
    let full = quad_sum(&e.spec, e.c, sigma, &TruncationPlan::symmetric(k), p).unwrap();
    let half = quad_sum(&even, 0.0, sigma, &TruncationPlan::symmetric(k), p).unwrap();
    assert!((&full.value - &half.value).abs().to_f64() < 1e-50);
}

#[test]
fn bandlimited_rule_is_exact_up_to_truncation() {
    let p = 256;
    let f = sinc_power(4, p).unwrap();
    for sigma in [4.0, 5.0, 9.0] {
        let plan = plan_sinc_power(4, sigma, 20).unwrap();
        let r = remainder_empirical(&f.spec, &f.exact, 0.0, sigma, &plan, p).unwrap();
        assert!(r.abs().to_f64() <= plan.truncation_bound.unwrap());
        let s = remainder_from_transform(&f.spec, 0.0, sigma, 10, p).unwrap();
        assert!(s.value.is_zero());
        assert_eq!(s.tail_bound, Some(0.0));
    }
}

#[test]
fn transform_series_tracks_closed_form_remainder() {
    let p = 128;
    let g = sobolev_example(p).unwrap();
    for sigma in [2.0, 8.0, 32.0] {
        let s = remainder_from_transform(&g.spec, 0.0, sigma, 100_000, p).unwrap();
        let exact = sobolev_remainder(sigma, p).unwrap();
        let diff = (&s.value.re - &exact).abs().to_f64();
        assert!(diff < 1e-2 * exact.to_f64(), "sigma {sigma}: diff {diff:e}");
        let tail = s.tail_bound.unwrap();
        assert!(
            diff <= tail,
            "sigma {sigma}: diff {diff:e}, tail bound {tail:e}"
        );
    }
}

#[test]
fn envelope_plan_meets_its_target() {
    let p = 256;
    let e = exp_decay(p).unwrap();
    let sigma = 3.0;
    let target = 1e-40;
    let plan = plan_from_envelope(&e.spec, e.c, sigma, target).unwrap();
    let wide = TruncationPlan::new(plan.n_neg * 2, plan.n_pos * 2);
    let a = quad_sum(&e.spec, e.c, sigma, &plan, p).unwrap();
    let b = quad_sum(&e.spec, e.c, sigma, &wide, p).unwrap();
    let omitted = (&a.value - &b.value).abs().to_f64();
    assert!(omitted <= plan.truncation_bound.unwrap());
    assert!(plan.truncation_bound.unwrap() <= 2.0 * target);
    // The hand-tuned window is wider on the left, as the e^{-r} tail is slow there.
    let g = plan_gamma(sigma).unwrap();
    assert!(plan.n_neg > plan.n_pos && g.n_neg > g.n_pos);
}

#[test]
fn errors_surface() {
    let p = 128;
    let bare = FunctionSpec::from_fn("bare", |r| (-r).exp());
    assert!(matches!(
        plan_from_envelope(&bare, 0.5, 1.0, 1e-10),
        Err(Error::MissingEnvelope(_))
    ));
    assert!(matches!(
        remainder_from_transform(&bare, 0.5, 1.0, 4, p),
        Err(Error::MissingTransform(_))
    ));
    assert!(matches!(
        quad_sum(&bare, 0.5, 1e-9, &TruncationPlan::symmetric(1 << 40), p),
        Err(Error::Overflow(_))
    ));
    assert!(quad_sum(&bare, 0.5, -1.0, &TruncationPlan::symmetric(3), p).is_err());
    let zero = FunctionSpec::zero();
    let q = quad_sum(&zero, 0.0, 1.0, &TruncationPlan::symmetric(5), p).unwrap();
    assert!(q.value.is_zero());
}
