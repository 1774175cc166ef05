//! Scattering amplitudes and wavefunctions across the whole device.

use pdem_core::analytic::{self, ProfileSource};
use pdem_core::oracle::{self, IntegratorConfig};
use pdem_core::{DeviceParams, Side};

const P: DeviceParams = DeviceParams::REFERENCE;

#[test]
fn wavefunction_and_flux_variable_are_continuous_at_junctions() {
    for side in [Side::Left, Side::Right] {
        let res = analytic::match_scatter(44.0, &P, side).unwrap();
        for a in [-P.a0, P.a0] {
            let h = 1e-9;
            let s = analytic::profile(ProfileSource::Scattering(&res), &P, &[a - h, a + h]).unwrap();
            let scale = 1.0 + s[0].psi.norm();
            assert!((s[0].psi - s[1].psi).norm() < 1e-8 * scale, "{side:?} psi at {a}");
            let vscale = 1.0 + s[0].v.norm();
            assert!((s[0].v - s[1].v).norm() < 1e-6 * vscale, "{side:?} v at {a}");
        }
    }
}

#[test]
fn transmitted_wave_has_constant_modulus() {
    let res = analytic::match_scatter(44.0, &P, Side::Left).unwrap();
    let grid: Vec<f64> = (0..50).map(|i| P.a0 + 0.1 + 0.3 * i as f64).collect();
    for s in analytic::profile(ProfileSource::Scattering(&res), &P, &grid).unwrap() {
        assert!((s.psi.norm() - res.t.norm()).abs() < 1e-12);
    }
}

#[test]
fn analytic_and_integrated_amplitudes_agree_off_the_reference_device() {
    let p = DeviceParams::new(1.2, 2.5, 1.7, 1.8).unwrap();
    let cfg = IntegratorConfig::default();
    for e in [p.v0() + 0.05, 0.3, 4.0, 25.0] {
        for side in [Side::Left, Side::Right] {
            let a = analytic::match_scatter(e, &p, side).unwrap();
            let o = oracle::scatter_numeric(e, &p, side, &cfg).unwrap();
            assert!((a.t - o.t).norm() < 1e-6, "T at E = {e}");
            assert!((a.r - o.r).norm() < 1e-6, "R at E = {e}");
        }
    }
}

#[test]
fn reflection_is_asymmetric_but_transmission_is_not() {
    let l = analytic::match_scatter(5.0, &P, Side::Left).unwrap();
    let r = analytic::match_scatter(5.0, &P, Side::Right).unwrap();
    assert!((l.t - r.t).norm() < 1e-10);
    assert!((l.r.norm() - r.r.norm()).abs() > 1e-3);
}

#[test]
fn below_threshold_scattering_is_rejected() {
    assert!(analytic::match_scatter(P.v0() - 0.1, &P, Side::Left).is_err());
}
