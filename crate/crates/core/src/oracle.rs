//! Direct integration of the position-dependent-mass equation in z.
//!
//! Nothing here touches hypergeometric functions: the interior is crossed by
//! an adaptive Dormand–Prince 5(4) integrator on (ψ, v) with v = ψ′/m,
//!
//! ```text
//! ψ′ = m(z) v,    v′ = 2 (V(z) − E) ψ,
//! ```
//!
//! which is the self-adjoint form −½(ψ′/m)′ + Vψ = Eψ. Junction continuity of
//! ψ and ψ′/m is then automatic. The exteriors are always closed-form.

use num_complex::Complex64;

use crate::analytic::{InnerCoeffs, Method, ScatteringResult, Side, WaveSample};
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{DeviceParams, Profile};
use crate::roots::bracketed_root;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    pub initial_step: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 1_000_000,
            initial_step: 1e-3,
        }
    }
}

impl IntegratorConfig {
    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.initial_step > 0.0) || self.max_steps < 1 {
            return Err(Error::Usage(format!("invalid integrator configuration {self:?}")));
        }
        Ok(())
    }
}

type State = [Complex64; 2];

const MIN_STEP: f64 = 1e-14;

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Fifth- minus fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn rhs<P: Profile>(profile: &P, energy: Complex64, z: f64, s: &State) -> State {
    [
        profile.mass(z) * s[1],
        2.0 * (profile.potential(z) - energy) * s[0],
    ]
}

fn axpy(s: &State, terms: &[(f64, &State)], h: f64) -> State {
    let mut out = *s;
    for (w, k) in terms {
        out[0] += h * *w * k[0];
        out[1] += h * *w * k[1];
    }
    out
}

/// Integrates (ψ, v) from `from` to `to` through an arbitrary profile at
/// (possibly complex) energy. Either direction is allowed.
pub fn propagate_profile<P: Profile>(
    energy: Complex64,
    profile: &P,
    from: f64,
    to: f64,
    state: (Complex64, Complex64),
    cfg: &IntegratorConfig,
) -> Result<(Complex64, Complex64)> {
    cfg.validate()?;
    let mut y: State = [state.0, state.1];
    if from == to {
        return Ok(state);
    }
    let dir = (to - from).signum();
    let span = (to - from).abs();
    let mut z = from;
    let mut h = cfg.initial_step.min(span);
    let mut k1 = rhs(profile, energy, z, &y);
    let mut steps = 0usize;
    loop {
        let remaining = (to - z).abs();
        if remaining <= 1e-15 * (1.0 + to.abs()) {
            return Ok((y[0], y[1]));
        }
        if steps >= cfg.max_steps {
            return Err(Error::StepLimitExceeded {
                max_steps: cfg.max_steps,
            });
        }
        steps += 1;
        let last = h >= remaining;
        let hs = if last { remaining } else { h };
        let hd = dir * hs;

        let k2 = rhs(profile, energy, z + C2 * hd, &axpy(&y, &[(A21, &k1)], hd));
        let k3 = rhs(profile, energy, z + C3 * hd, &axpy(&y, &[(A31, &k1), (A32, &k2)], hd));
        let k4 = rhs(
            profile,
            energy,
            z + C4 * hd,
            &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], hd),
        );
        let k5 = rhs(
            profile,
            energy,
            z + C5 * hd,
            &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], hd),
        );
        let z_end = if last { to } else { z + hd };
        let k6 = rhs(
            profile,
            energy,
            z_end,
            &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], hd),
        );
        let y_new = axpy(&y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], hd);
        let k7 = rhs(profile, energy, z_end, &y_new);

        let mut err = 0.0f64;
        for i in 0..2 {
            let e = hd * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = cfg.abs_tol + cfg.rel_tol * y[i].norm().max(y_new[i].norm());
            err = err.max(e.norm() / scale);
        }
        if !err.is_finite() {
            err = 1e10;
        }

        if err <= 1.0 {
            z = z_end;
            y = y_new;
            k1 = k7;
            let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if !last {
                h = hs * grow;
            }
        } else {
            h = hs * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            if h < MIN_STEP {
                return Err(Error::StepUnderflow { z });
            }
        }
    }
}

/// Integrates the device interior at real energy; [from, to] must lie in [−a₀, a₀].
pub fn propagate(
    energy: f64,
    p: &DeviceParams,
    from: f64,
    to: f64,
    state: (Complex64, Complex64),
    cfg: &IntegratorConfig,
) -> Result<(Complex64, Complex64)> {
    let limit = p.a0 * (1.0 + 1e-12);
    if from.abs() > limit || to.abs() > limit {
        return Err(Error::Usage(format!(
            "propagation interval [{from}, {to}] leaves the interior [-{a0}, {a0}]",
            a0 = p.a0
        )));
    }
    propagate_profile(Complex64::new(energy, 0.0), p, from, to, state, cfg)
}

/// Transfer matrix across the interior: columns are the images of
/// (ψ, v) = (1, 0) and (0, 1) at −a₀.
fn transfer_matrix(energy: f64, p: &DeviceParams, cfg: &IntegratorConfig) -> Result<[[Complex64; 2]; 2]> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let c1 = propagate(energy, p, -p.a0, p.a0, (one, zero), cfg)?;
    let c2 = propagate(energy, p, -p.a0, p.a0, (zero, one), cfg)?;
    Ok([[c1.0, c2.0], [c1.1, c2.1]])
}

fn apply(m: &[[Complex64; 2]; 2], s: [Complex64; 2]) -> [Complex64; 2] {
    [
        m[0][0] * s[0] + m[0][1] * s[1],
        m[1][0] * s[0] + m[1][1] * s[1],
    ]
}

/// Reflection and transmission amplitudes by direct integration.
pub fn scatter_numeric(
    energy: f64,
    p: &DeviceParams,
    side: Side,
    cfg: &IntegratorConfig,
) -> Result<ScatteringResult> {
    if !(energy > p.v0()) {
        return Err(Error::BelowThreshold {
            energy,
            v0: p.v0(),
        });
    }
    let a0 = p.a0;
    let k = (2.0 * p.m0() * (energy - p.v0())).sqrt();
    let ikm = I * k / p.m0();
    let ep = (I * k * a0).exp();
    let em = (-I * k * a0).exp();
    let m = transfer_matrix(energy, p, cfg)?;

    let (r, t, start, condition) = match side {
        Side::Left => {
            // (ψ, v) at −a₀ is u0 + R·u1; at +a₀ it must be T·w.
            let u0 = [em, ikm * em];
            let u1 = [ep, -ikm * ep];
            let w = [ep, ikm * ep];
            let mu0 = apply(&m, u0);
            let mu1 = apply(&m, u1);
            let s = linalg::solve2(&[[mu1[0], -w[0]], [mu1[1], -w[1]]], [-mu0[0], -mu0[1]]);
            let x = s.x.ok_or(Error::SingularMatching { condition: s.condition })?;
            let start = (u0[0] + x[0] * u1[0], u0[1] + x[0] * u1[1]);
            (x[0], x[1], start, s.condition)
        }
        Side::Right => {
            // (ψ, v) at −a₀ is T·w; at +a₀ it must be u0 + R·u1.
            let w = [ep, -ikm * ep];
            let u0 = [em, -ikm * em];
            let u1 = [ep, ikm * ep];
            let mw = apply(&m, w);
            let s = linalg::solve2(&[[mw[0], -u1[0]], [mw[1], -u1[1]]], [u0[0], u0[1]]);
            let x = s.x.ok_or(Error::SingularMatching { condition: s.condition })?;
            let start = (x[0] * w[0], x[0] * w[1]);
            (x[1], x[0], start, s.condition)
        }
    };
    Ok(ScatteringResult {
        energy,
        side,
        r,
        t,
        inner: InnerCoeffs {
            p: start.0,
            q: start.1,
        },
        condition_estimate: condition,
        method: Method::NumericOracle,
    })
}

/// Wronskian of the left- and right-decaying solutions, each normalised to
/// 1 at its junction. The left one is integrated from −a₀ with
/// (ψ, v) = (1, k_b/m₀); the right one is known in closed form at +a₀.
pub fn shooting_mismatch(energy: Complex64, p: &DeviceParams, cfg: &IntegratorConfig) -> Result<Complex64> {
    let k_b = (2.0 * p.m0() * (p.v0() - energy)).sqrt();
    let kappa = k_b / p.m0();
    let (psi, v) = propagate_profile(energy, p, -p.a0, p.a0, (Complex64::new(1.0, 0.0), kappa), cfg)?;
    Ok(-(v + kappa * psi))
}

/// Bound energy by shooting inside a real bracket below V₀.
pub fn bound_numeric(p: &DeviceParams, bracket: (f64, f64), cfg: &IntegratorConfig) -> Result<f64> {
    let (lo, hi) = bracket;
    if !(lo < hi && hi < p.v0()) {
        return Err(Error::Usage(format!(
            "bracket ({lo}, {hi}) must be ordered and below V0 = {}",
            p.v0()
        )));
    }
    bracketed_root(
        |e| Ok(shooting_mismatch(Complex64::new(e, 0.0), p, cfg)?.re),
        lo,
        hi,
        1e-12,
    )
}

/// Samples the shooting solution at a bound energy on a sorted z grid:
/// ψ = e^{k_b(z+a₀)} on the left, integrated across the interior, and the
/// decaying exponential matched to ψ(a₀) on the right.
pub fn bound_profile(
    energy: f64,
    p: &DeviceParams,
    z_grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<WaveSample>> {
    if z_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Usage("z grid must be sorted".into()));
    }
    let a0 = p.a0;
    let k_b = (2.0 * p.m0() * (p.v0() - energy)).sqrt();
    let kappa = k_b / p.m0();
    let mut z_last = -a0;
    let mut state = (Complex64::new(1.0, 0.0), Complex64::new(kappa, 0.0));
    let mut out = Vec::with_capacity(z_grid.len());
    let mut edge = None;
    for &z in z_grid {
        let (psi, v) = if z < -a0 {
            let psi = Complex64::new((k_b * (z + a0)).exp(), 0.0);
            (psi, kappa * psi)
        } else if z <= a0 {
            state = propagate(energy, p, z_last, z, state, cfg)?;
            z_last = z;
            state
        } else {
            let right = match edge {
                Some(s) => s,
                None => {
                    let s = propagate(energy, p, z_last, a0, state, cfg)?;
                    edge = Some(s);
                    s
                }
            };
            let psi = right.0 * (-k_b * (z - a0)).exp();
            (psi, -kappa * psi)
        };
        out.push(WaveSample { z, psi, v });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: DeviceParams = DeviceParams::REFERENCE;

    struct Flat {
        m: f64,
        v: f64,
    }

    impl Profile for Flat {
        fn mass(&self, _z: f64) -> f64 {
            self.m
        }
        fn potential(&self, _z: f64) -> Complex64 {
            Complex64::new(self.v, 0.0)
        }
    }

    #[test]
    fn zero_curvature_gives_linear_drift() {
        let flat = Flat { m: 0.8, v: 1.5 };
        let psi0 = Complex64::new(0.3, -0.1);
        let v0 = Complex64::new(-0.2, 0.6);
        let (psi, v) = propagate_profile(
            Complex64::new(1.5, 0.0),
            &flat,
            -1.0,
            2.0,
            (psi0, v0),
            &IntegratorConfig::default(),
        )
        .unwrap();
        assert!((v - v0).norm() < 1e-14);
        assert!((psi - (psi0 + 0.8 * v0 * 3.0)).norm() < 1e-12);
    }

    #[test]
    fn wronskian_is_conserved() {
        let cfg = IntegratorConfig::default();
        let s1 = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        let s2 = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        for e in [-2.0, 3.0, 44.0] {
            let a = propagate(e, &P, -P.a0, P.a0, s1, &cfg).unwrap();
            let b = propagate(e, &P, -P.a0, P.a0, s2, &cfg).unwrap();
            let w = a.0 * b.1 - b.0 * a.1;
            assert!((w - 1.0).norm() < 1e-9, "E = {e}: W = {w}");
        }
    }

    #[test]
    fn round_trip_returns_initial_state() {
        let cfg = IntegratorConfig::default();
        let s = (Complex64::new(0.4, 0.2), Complex64::new(-1.0, 0.5));
        let there = propagate(10.0, &P, -P.a0, P.a0, s, &cfg).unwrap();
        let back = propagate(10.0, &P, P.a0, -P.a0, there, &cfg).unwrap();
        let scale = s.0.norm() + s.1.norm();
        assert!(((back.0 - s.0).norm() + (back.1 - s.1).norm()) / scale < 1e-8);
    }

    #[test]
    fn step_budget_is_enforced() {
        let cfg = IntegratorConfig {
            max_steps: 3,
            ..IntegratorConfig::default()
        };
        let s = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        assert_eq!(
            propagate(44.0, &P, -P.a0, P.a0, s, &cfg),
            Err(Error::StepLimitExceeded { max_steps: 3 })
        );
    }

    #[test]
    fn rejects_exterior_interval() {
        let s = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        assert!(propagate(1.0, &P, -3.0, 0.0, s, &IntegratorConfig::default()).is_err());
    }

    #[test]
    fn hermitian_oracle_is_unitary() {
        let p = P.with_mu2(0.0);
        for e in [-0.3, 2.0, 30.0] {
            let r = scatter_numeric(e, &p, Side::Left, &IntegratorConfig::default()).unwrap();
            assert!((r.r.norm_sqr() + r.t.norm_sqr() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn oracle_transmission_is_reciprocal() {
        let cfg = IntegratorConfig::default();
        for e in [-0.2, 5.0, 44.0] {
            let l = scatter_numeric(e, &P, Side::Left, &cfg).unwrap();
            let r = scatter_numeric(e, &P, Side::Right, &cfg).unwrap();
            assert!((l.t.norm() - r.t.norm()).abs() < 1e-9);
        }
    }

    #[test]
    fn bracket_without_root_is_reported() {
        let r = bound_numeric(&P, (-3.9, -3.5), &IntegratorConfig::default());
        assert!(matches!(r, Err(Error::NoSignChange { .. })));
    }
}
