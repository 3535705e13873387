use gbesov::besov::{besov_seminorm, BesovParams};
use gbesov::defaults::default_inner_rule;
use gbesov::hermite::MultiIndex;
use gbesov::operators::{
    bessel_derivative_grid, bessel_derivative_integral, bessel_potential_grid,
    bessel_potential_integral, bessel_potential_spectral,
};
use gbesov::semigroups::{poisson_apply_spectral, poisson_apply_subordination};
use gbesov::verify::{run_default_suite, to_json_17, SuiteConfig};
use gbesov::{ExponentFunction, HermiteExpansion, OuterExponent, SubordinationQuadrature};
use proptest::prelude::*;

fn expansion(coeffs: &[f64]) -> HermiteExpansion {
    HermiteExpansion::from_terms(
        1,
        coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| (MultiIndex::new(vec![n as u32]), *c)),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn potential_then_derivative_is_identity(
        coeffs in prop::collection::vec(-2.0f64..2.0, 1..12),
        beta in 0.2f64..2.8,
    ) {
        let f = expansion(&coeffs);
        let j = bessel_potential_integral(&f, beta, &bessel_potential_grid(beta).unwrap()).unwrap();
        let grid = bessel_derivative_grid(beta, f.max_order()).unwrap();
        let back = bessel_derivative_integral(&j, beta, &grid).unwrap();
        prop_assert!(back.max_abs_diff(&f) < 1e-6 * (1.0 + f.l2_norm()));
    }

    #[test]
    fn subordination_agrees_with_spectral(
        coeffs in prop::collection::vec(-2.0f64..2.0, 1..20),
        t in 0.1f64..5.0,
    ) {
        let f = expansion(&coeffs);
        let quad = SubordinationQuadrature::default();
        let a = poisson_apply_subordination(&f, t, &quad).unwrap();
        let b = poisson_apply_spectral(&f, t).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-8 * (1.0 + f.l2_norm()));
    }

    #[test]
    fn potential_lowers_every_seminorm_level(n in 1u32..12, beta in 0.1f64..1.5) {
        // ‖J_β h_ν‖ relates to ‖h_ν‖ by the exact multiplier (1+a)^{−β}.
        let f = HermiteExpansion::basis(MultiIndex::new(vec![n]));
        let params = BesovParams::new(
            0.5,
            ExponentFunction::constant(2.0),
            OuterExponent::constant(2.0),
            default_inner_rule(1).unwrap(),
        )
        .unwrap();
        let s = besov_seminorm(&f, &params).unwrap().value;
        let js = besov_seminorm(&bessel_potential_spectral(&f, beta).unwrap(), &params).unwrap().value;
        let a = (n as f64).sqrt();
        prop_assert!((js / s - (1.0 + a).powf(-beta)).abs() < 1e-9);
    }
}

#[test]
fn suite_subset_is_deterministic_and_self_certifying() {
    let cfg = SuiteConfig {
        only: vec![
            "classical_hardy".into(),
            "holder".into(),
            "norm_conjugate".into(),
        ],
        ..SuiteConfig::default()
    };
    let a = run_default_suite(&cfg).unwrap();
    let b = run_default_suite(&cfg).unwrap();
    assert_eq!(to_json_17(&a).unwrap(), to_json_17(&b).unwrap());
    assert_eq!(a.len(), 7);
    let names: Vec<&str> = a.iter().map(|r| r.check.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    for r in &a {
        assert_eq!(r.pass, r.recompute_pass(), "{}", r.check);
        assert!(r.pass, "{r:?}");
    }
}
