//! Bound states and the complex ground state: analytic roots against shooting.

use num_complex::Complex64;

use pdem_core::analytic::{self, BoundSearchConfig, Regime};
use pdem_core::cli::{self, MethodSel};
use pdem_core::oracle::{self, IntegratorConfig};
use pdem_core::DeviceParams;

const P: DeviceParams = DeviceParams::REFERENCE;

fn analytic_levels(p: &DeviceParams, n_scan: usize) -> Vec<f64> {
    let cfg = BoundSearchConfig {
        n_scan,
        ..BoundSearchConfig::for_device(p)
    };
    let spectrum = analytic::find_bound_states(p, &cfg).unwrap();
    assert!(spectrum.failures.is_empty(), "{:?}", spectrum.failures);
    spectrum.states.iter().map(|s| s.energy).collect()
}

#[test]
fn hermitian_levels_match_shooting() {
    let p = P.with_mu2(0.0);
    let analytic = analytic_levels(&p, 2000);
    let (oracle, errors) = cli::oracle_bound_energies(&p, -2.0 * p.mu1, 400);
    assert!(errors.is_empty(), "{errors:?}");
    assert_eq!(analytic.len(), oracle.len());
    assert!(!analytic.is_empty());
    for (a, o) in analytic.iter().zip(&oracle) {
        assert!((a - o).abs() < 1e-6, "{a} vs {o}");
    }
}

#[test]
fn levels_are_real_and_below_threshold() {
    let cfg = BoundSearchConfig::for_device(&P);
    for s in analytic::find_bound_states(&P, &cfg).unwrap().states {
        assert!(s.energy < P.v0());
        assert!(s.energy_imag.abs() < 1e-8);
        assert!(s.k_b > 0.0);
        let k = (2.0 * P.m0() * (P.v0() - s.energy)).sqrt();
        assert!((s.k_b - k).abs() < 1e-12);
    }
}

#[test]
fn doubling_the_scan_finds_the_same_levels() {
    let coarse = analytic_levels(&P, 2000);
    let fine = analytic_levels(&P, 4000);
    assert_eq!(coarse.len(), fine.len());
    for (a, b) in coarse.iter().zip(&fine) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn samples_decay_at_k_b_outside_the_junctions() {
    let cfg = BoundSearchConfig::for_device(&P);
    let states = analytic::find_bound_states(&P, &cfg).unwrap().states;
    assert!(!states.is_empty());
    for s in &states {
        for sign in [1.0, -1.0] {
            // Least-squares slope of ln|psi| against distance beyond the junction.
            let pts: Vec<(f64, f64)> = s
                .samples
                .iter()
                .map(|w| (sign * w.z - P.a0, w.psi.norm().ln()))
                .filter(|(d, _)| (1.0..=4.0).contains(d))
                .collect();
            assert!(pts.len() > 10);
            let n = pts.len() as f64;
            let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
            let (mx, my) = (sx / n, sy / n);
            let cov: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
            let var: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
            let slope = -cov / var;
            assert!((slope - s.k_b).abs() <= 0.01 * s.k_b, "E = {}: slope {slope} vs k_b {}", s.energy, s.k_b);
        }
    }
}

#[test]
fn shallow_well_reports_agreeing_levels() {
    let p = DeviceParams::new(2.0, 0.1, 0.3, 0.5).unwrap();
    let report = cli::cmd_bound(&p, MethodSel::Both).unwrap();
    assert!(report.rows.len() <= 1);
    for row in &report.rows {
        assert!(row.difference().unwrap() < 1e-6);
    }
}

#[test]
fn complex_ground_state_is_a_shooting_root() {
    let grid: Vec<f64> = (0..=394).map(|i| 0.3 + 0.05 * i as f64).collect();
    let scan = analytic::switching_scan(&P, &grid).unwrap();
    assert!(scan.error.is_none(), "{:?}", scan.error);
    let last = scan.points.last().unwrap();
    assert!((last.mu2 - 20.0).abs() < 1e-12);
    assert_eq!(last.regime, Regime::Resonance);
    assert!(last.energy.im.abs() > 1.0);

    let p = P.with_mu2(20.0);
    let cfg = IntegratorConfig::default();
    let at_root = oracle::shooting_mismatch(last.energy, &p, &cfg).unwrap().norm();
    let nearby = oracle::shooting_mismatch(last.energy + Complex64::new(1e-3, 0.0), &p, &cfg)
        .unwrap()
        .norm();
    assert!(at_root < 1e-5 * nearby, "mismatch {at_root:e} at root, {nearby:e} nearby");
}
