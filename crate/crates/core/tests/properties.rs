//! Invariants of the special function and the device model under random inputs.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use pdem_core::model::{self, DeviceParams};
use pdem_core::selftest::{self, derivative_fd_error, parse_fixture, random_hyp2f1_params};
use pdem_core::specfun::{hyp2f1, Hyp2F1Params};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * (1.0 + b.norm())
}

prop_compose! {
    fn params()(
        ar in -3.0..3.0f64, ai in -3.0..3.0f64,
        br in -3.0..3.0f64, bi in -3.0..3.0f64,
        cr in 0.5..4.0f64, ci in -3.0..3.0f64,
        r in 0.0..0.6f64, t in -PI..PI,
    ) -> Hyp2F1Params {
        Hyp2F1Params::new(c(ar, ai), c(br, bi), c(cr, ci), Complex64::from_polar(r, t))
    }
}

/// Valid devices only: g·√μ₁ must exceed 1/2.
fn device() -> impl Strategy<Value = DeviceParams> {
    (0.5..3.0f64, 0.5..10.0f64, 0.0..10.0f64, 0.5..5.0f64)
        .prop_filter_map("g*sqrt(mu1) <= 1/2", |(g, mu1, mu2, a0)| DeviceParams::new(g, mu1, mu2, a0).ok())
}

proptest! {
    #[test]
    fn hyp2f1_commutes_with_conjugation(p in params()) {
        let f = hyp2f1(&p).unwrap();
        let g = hyp2f1(&Hyp2F1Params::new(p.a.conj(), p.b.conj(), p.c.conj(), p.y.conj())).unwrap();
        prop_assert!(close(g, f.conj(), 1e-12), "{f} vs {g}");
    }

    #[test]
    fn hyp2f1_symmetric_in_a_b(p in params()) {
        let f = hyp2f1(&p).unwrap();
        let g = hyp2f1(&Hyp2F1Params::new(p.b, p.a, p.c, p.y)).unwrap();
        prop_assert!(close(f, g, 1e-13));
    }

    #[test]
    fn hyp2f1_is_one_at_origin(p in params()) {
        let f = hyp2f1(&Hyp2F1Params::new(p.a, p.b, p.c, c(0.0, 0.0))).unwrap();
        prop_assert_eq!(f, c(1.0, 0.0));
    }

    #[test]
    fn y_map_is_reflective_and_decreasing(z in 0.0..50.0f64, dz in 1e-3..1.0f64) {
        let (y, one_minus_y) = model::y_pair(z);
        prop_assert!((y + one_minus_y - 1.0).abs() < 1e-15);
        prop_assert!(y > 0.0 && y <= 0.5);
        prop_assert_eq!(model::y_pair(-z), (one_minus_y, y));
        prop_assert!(model::y_of_z(z + dz) < y);
        let expected = 0.5 * (1.0 - model::rho_bar(z).tanh());
        prop_assert!((y - expected).abs() <= 1e-15 + 1e-12 * expected.abs().max(y));
    }

    #[test]
    fn potential_is_pt_symmetric(p in device(), z in -10.0..10.0f64) {
        let v = model::potential(z, &p);
        prop_assert!((model::potential(-z, &p) - v.conj()).norm() < 1e-14);
        prop_assert_eq!(model::mass(-z, &p), model::mass(z, &p));
    }

    #[test]
    fn exterior_is_flat(p in device(), d in 0.0..20.0f64) {
        let z = p.a0 + d;
        prop_assert_eq!(model::potential(z, &p), c(p.v0(), 0.0));
        prop_assert_eq!(model::mass(-z, &p), p.m0());
        // The real parts and the mass meet the exterior continuously.
        let inside = model::interior_potential(p.a0, &p);
        prop_assert!((inside.re - p.v0()).abs() < 1e-14);
        prop_assert!((model::interior_mass(p.a0, &p) - p.m0()).abs() < 1e-14);
    }
}

#[test]
fn derivative_matches_finite_differences_on_100_draws() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..100 {
        let p = random_hyp2f1_params(&mut rng);
        let err = derivative_fd_error(&p).unwrap();
        assert!(err < 1e-6, "{p:?}: relative error {err:e}");
    }
}

#[test]
fn fixture_values_reproduced_to_1e12() {
    let cases = parse_fixture(selftest::EMBEDDED_FIXTURE).unwrap();
    assert_eq!(cases.len(), 50);
    for (p, want) in cases {
        let got = hyp2f1(&p).unwrap();
        assert!((got - want).norm() <= 1e-12 * want.norm().max(1.0), "{p:?}: {got} vs {want}");
    }
}

#[test]
fn out_of_domain_and_poles_are_errors() {
    let far = Hyp2F1Params::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.9, 0.0));
    assert!(hyp2f1(&far).is_err());
    let pole = Hyp2F1Params::new(c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0), c(0.1, 0.0));
    assert!(hyp2f1(&pole).is_err());
}
