//! Exact interior solution and the junction matching built on it.
//!
//! Inside the device the two independent solutions are
//!
//! ```text
//! ψ₁ = (2m)^{1/4} y^{α/2} (1−y)^{β/2} ₂F₁(a, b; c; y)
//! ψ₂ = (2m)^{1/4} y^{α/2} (1−y)^{β/2} y^{1−c} ₂F₁(1+a−c, 1+b−c; 2−c; y)
//! ```
//!
//! and every state is P·ψ₁ + Q·ψ₂. At the junctions ψ and v = ψ′/m are
//! continuous; those four conditions fix (R, T, P, Q) for scattering and
//! give a homogeneous system in (A₁, A₂, P, Q) for bound states.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{self, DeviceParams, SpectralParams};
use crate::oracle::{self, IntegratorConfig};
use crate::roots::{muller, muller_best, MullerConfig};
use crate::specfun::{hyp2f1, hyp2f1_deriv, Hyp2F1Params};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Matching matrices with a condition estimate above this are rejected.
pub const SINGULAR_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Incident from z → −∞, the absorptive side.
    Left,
    /// Incident from z → +∞, the emissive side.
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Analytic,
    NumericOracle,
}

/// Weights of the two interior basis solutions. For analytic results these
/// multiply ψ₁ and ψ₂; for oracle results the basis is the pair of solutions
/// with (ψ, v) = (1, 0) and (0, 1) at z = −a₀, so the weights are simply
/// ψ(−a₀) and v(−a₀).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InnerCoeffs {
    pub p: Complex64,
    pub q: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringResult {
    pub energy: f64,
    pub side: Side,
    pub r: Complex64,
    pub t: Complex64,
    pub inner: InnerCoeffs,
    pub condition_estimate: f64,
    pub method: Method,
}

/// A point of a sampled wavefunction; `v` is the matched quantity ψ′/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSample {
    pub z: f64,
    pub psi: Complex64,
    pub v: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    pub energy: f64,
    /// Imaginary part of the refined root, kept for the reality check.
    pub energy_imag: f64,
    pub k_b: f64,
    pub inner: InnerCoeffs,
    pub a1: Complex64,
    pub a2: Complex64,
    pub samples: Vec<WaveSample>,
    /// |det| at the accepted root.
    pub residual: f64,
}

/// Value and z-derivative of one interior basis function.
#[derive(Debug, Clone, Copy)]
struct BasisValue {
    psi: Complex64,
    dpsi: Complex64,
}

/// One hypergeometric solution (2m)^{1/4} y^{e_y} (1−y)^{e_w} ₂F₁(A, B; C; x),
/// with x = y, or x = 1 − y when `reflected`.
#[derive(Debug, Clone, Copy)]
struct Branch {
    e_y: Complex64,
    e_w: Complex64,
    hp: (Complex64, Complex64, Complex64),
    reflected: bool,
}

/// Interior solutions at one energy.
///
/// ψ₁ and ψ₂ are built from series in y, which converge fast only for
/// y ≤ 1/2, i.e. z ≥ 0. On z < 0 they are evaluated as fixed combinations
/// of the two solutions expanded in 1 − y; the combination is found once by
/// matching at z = 0, where both expansions are exact. Every series
/// argument therefore stays in [0, 1/2].
#[derive(Debug, Clone, Copy)]
pub struct InteriorBasis {
    sp: SpectralParams,
    g: f64,
    right: [Branch; 2],
    left: [Branch; 2],
    /// ψⱼ = connection[j][0]·w₁ + connection[j][1]·w₂ on z < 0.
    connection: [[Complex64; 2]; 2],
}

impl InteriorBasis {
    pub fn new(sp: &SpectralParams, p: &DeviceParams) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        let (ha, hb) = (0.5 * sp.alpha, 0.5 * sp.beta);
        let right = [
            Branch {
                e_y: ha,
                e_w: hb,
                hp: (sp.a, sp.b, sp.c),
                reflected: false,
            },
            Branch {
                e_y: -ha,
                e_w: hb,
                hp: (sp.a - sp.alpha, sp.b - sp.alpha, one - sp.alpha),
                reflected: false,
            },
        ];
        let left = [
            Branch {
                e_y: ha,
                e_w: hb,
                hp: (sp.a, sp.b, one + sp.beta),
                reflected: true,
            },
            Branch {
                e_y: ha,
                e_w: -hb,
                hp: (sp.a - sp.beta, sp.b - sp.beta, one - sp.beta),
                reflected: true,
            },
        ];
        let mut basis = Self {
            sp: *sp,
            g: p.g,
            right,
            left,
            connection: [[ZERO; 2]; 2],
        };
        let u = [basis.branch(0.0, &right[0])?, basis.branch(0.0, &right[1])?];
        let [w1, w2] = [basis.branch(0.0, &left[0])?, basis.branch(0.0, &left[1])?];
        let w = w1.psi * w2.dpsi - w2.psi * w1.dpsi;
        if !(w.norm() > 0.0) || !w.is_finite() {
            return Err(Error::SingularMatching {
                condition: f64::INFINITY,
            });
        }
        for (row, uj) in basis.connection.iter_mut().zip(u) {
            *row = [
                (uj.psi * w2.dpsi - w2.psi * uj.dpsi) / w,
                (w1.psi * uj.dpsi - uj.psi * w1.dpsi) / w,
            ];
        }
        Ok(basis)
    }

    pub fn spectral(&self) -> &SpectralParams {
        &self.sp
    }

    fn branch(&self, z: f64, br: &Branch) -> Result<BasisValue> {
        let (y, w) = model::y_pair(z);
        if !(y > 0.0 && w > 0.0) {
            let bad = if y > 0.0 { w } else { y };
            return Err(Error::BranchPowerError {
                arg: Complex64::new(bad, 0.0),
            });
        }
        let q = 1.0 + z * z;
        let pref = self.g.sqrt() * q.powf(-0.25);
        let dpref = -0.5 * z / q * pref;
        let dy_dz = -0.5 * q.powf(-1.5);

        let x = if br.reflected { w } else { y };
        let hp = Hyp2F1Params::new(br.hp.0, br.hp.1, br.hp.2, Complex64::new(x, 0.0));
        let f = hyp2f1(&hp)?;
        let df = hyp2f1_deriv(&hp)?;
        let df_dy = if br.reflected { -df } else { df };
        let power = (br.e_y * y.ln() + br.e_w * w.ln()).exp();
        let phi = power * f;
        let dphi_dy = power * ((br.e_y / y - br.e_w / w) * f + df_dy);
        Ok(BasisValue {
            psi: pref * phi,
            dpsi: dpref * phi + pref * dphi_dy * dy_dz,
        })
    }

    fn eval(&self, z: f64) -> Result<[BasisValue; 2]> {
        if z >= 0.0 {
            return Ok([self.branch(z, &self.right[0])?, self.branch(z, &self.right[1])?]);
        }
        let w1 = self.branch(z, &self.left[0])?;
        let w2 = self.branch(z, &self.left[1])?;
        let mix = |c: &[Complex64; 2]| BasisValue {
            psi: c[0] * w1.psi + c[1] * w2.psi,
            dpsi: c[0] * w1.dpsi + c[1] * w2.dpsi,
        };
        Ok([mix(&self.connection[0]), mix(&self.connection[1])])
    }

    /// (ψ, v) of ψ₁ and ψ₂ at z.
    pub fn states(&self, z: f64, p: &DeviceParams) -> Result<[(Complex64, Complex64); 2]> {
        let m = model::interior_mass(z, p);
        let [b1, b2] = self.eval(z)?;
        Ok([(b1.psi, b1.dpsi / m), (b2.psi, b2.dpsi / m)])
    }

    /// ψ and dψ/dz of P·ψ₁ + Q·ψ₂.
    pub fn combine(&self, z: f64, coeffs: &InnerCoeffs) -> Result<(Complex64, Complex64)> {
        if coeffs.p == ZERO && coeffs.q == ZERO {
            return Ok((ZERO, ZERO));
        }
        let [b1, b2] = self.eval(z)?;
        Ok((
            coeffs.p * b1.psi + coeffs.q * b2.psi,
            coeffs.p * b1.dpsi + coeffs.q * b2.dpsi,
        ))
    }
}

/// ψ and dψ/dz of P·ψ₁ + Q·ψ₂ at an interior point (|z| ≤ a₀; the junctions
/// themselves give the one-sided interior limits).
pub fn inner_psi(
    z: f64,
    sp: &SpectralParams,
    p: &DeviceParams,
    coeffs: &InnerCoeffs,
) -> Result<(Complex64, Complex64)> {
    if coeffs.p == ZERO && coeffs.q == ZERO {
        return Ok((ZERO, ZERO));
    }
    InteriorBasis::new(sp, p)?.combine(z, coeffs)
}

/// Modified Wronskian ψ₁v₂ − ψ₂v₁ of two (ψ, v) pairs.
pub fn wronskian(s1: (Complex64, Complex64), s2: (Complex64, Complex64)) -> Complex64 {
    s1.0 * s2.1 - s2.0 * s1.1
}

/// Scattering amplitudes from the exact interior solution.
pub fn match_scatter(energy: f64, p: &DeviceParams, side: Side) -> Result<ScatteringResult> {
    if !(energy > p.v0()) {
        return Err(Error::BelowThreshold {
            energy,
            v0: p.v0(),
        });
    }
    match_scatter_with(&model::spectral_params(energy, p), p, side)
}

/// As [`match_scatter`] with caller-supplied spectral parameters (used to
/// check that the choice of square-root branches does not matter).
pub fn match_scatter_with(sp: &SpectralParams, p: &DeviceParams, side: Side) -> Result<ScatteringResult> {
    let a0 = p.a0;
    let m0 = p.m0();
    let k = sp.k;
    let ikm = I * k / m0;
    let e_plus = (I * k * a0).exp();
    let e_minus = (-I * k * a0).exp();

    let basis = InteriorBasis::new(sp, p)?;
    let [l1, l2] = basis.states(-a0, p)?;
    let [r1, r2] = basis.states(a0, p)?;

    // Columns: R, T, P, Q. Rows: ψ and v continuity at −a₀, then at +a₀.
    let (rows, rhs) = match side {
        Side::Left => (
            [
                [-e_plus, ZERO, l1.0, l2.0],
                [ikm * e_plus, ZERO, l1.1, l2.1],
                [ZERO, -e_plus, r1.0, r2.0],
                [ZERO, -ikm * e_plus, r1.1, r2.1],
            ],
            [e_minus, ikm * e_minus, ZERO, ZERO],
        ),
        Side::Right => (
            [
                [ZERO, -e_plus, l1.0, l2.0],
                [ZERO, ikm * e_plus, l1.1, l2.1],
                [-e_plus, ZERO, r1.0, r2.0],
                [-ikm * e_plus, ZERO, r1.1, r2.1],
            ],
            [ZERO, ZERO, e_minus, -ikm * e_minus],
        ),
    };
    let solved = linalg::solve4(&rows, rhs);
    let x = match solved.x {
        Some(x) if solved.condition <= SINGULAR_CONDITION && x.iter().all(|v| v.is_finite()) => x,
        _ => {
            return Err(Error::SingularMatching {
                condition: solved.condition,
            })
        }
    };
    Ok(ScatteringResult {
        energy: sp.energy.re,
        side,
        r: x[0],
        t: x[1],
        inner: InnerCoeffs { p: x[2], q: x[3] },
        condition_estimate: solved.condition,
        method: Method::Analytic,
    })
}

/// The 4×4 homogeneous system in (A₁e^{−k_b a₀}, A₂e^{−k_b a₀}, P, Q), plus
/// the basis Wronskian and the boundary basis states.
struct BoundSystem {
    rows: [[Complex64; 4]; 4],
    wronskian: Complex64,
    left: [(Complex64, Complex64); 2],
    right: [(Complex64, Complex64); 2],
}

fn bound_system(sp: &SpectralParams, p: &DeviceParams) -> Result<BoundSystem> {
    let kappa = sp.k_b / p.m0();
    let basis = InteriorBasis::new(sp, p)?;
    let left = basis.states(-p.a0, p)?;
    let right = basis.states(p.a0, p)?;
    let one = Complex64::new(1.0, 0.0);
    let rows = [
        [-one, ZERO, left[0].0, left[1].0],
        [-kappa, ZERO, left[0].1, left[1].1],
        [ZERO, -one, right[0].0, right[1].0],
        [ZERO, kappa, right[0].1, right[1].1],
    ];
    Ok(BoundSystem {
        rows,
        wronskian: wronskian(left[0], left[1]),
        left,
        right,
    })
}

/// Bound-state determinant at complex energy.
///
/// Returned as −det/W, where W is the Wronskian of the interior basis. This
/// equals the Wronskian of the solutions that decay to the left and to the
/// right (each normalised to 1 at its junction), so it does not depend on
/// how the interior basis is scaled or labelled, is real for real E below
/// V₀, and satisfies D(Ē) = conj(D(E)).
pub fn bound_det(energy: Complex64, p: &DeviceParams) -> Result<Complex64> {
    bound_det_sp(&model::spectral_params_complex(energy, p), p)
}

/// [`bound_det`] as a function of the exterior decay constant k_b, with
/// E = V₀ − k_b²/(2m₀). Entire in k_b, so roots can be followed through the
/// threshold and into the complex plane.
pub fn bound_det_kb(k_b: Complex64, p: &DeviceParams) -> Result<Complex64> {
    bound_det_sp(&model::spectral_params_from_kb(k_b, p), p)
}

fn bound_det_sp(sp: &SpectralParams, p: &DeviceParams) -> Result<Complex64> {
    let sys = bound_system(sp, p)?;
    Ok(-linalg::det4(&sys.rows) / sys.wronskian)
}

/// Settings for [`find_bound_states`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSearchConfig {
    pub e_floor: f64,
    pub n_scan: usize,
    /// Accepted roots must satisfy |det| below this.
    pub det_tol: f64,
    /// Roots with |Im E| above this are rejected as non-real.
    pub imag_tol: f64,
    /// Half-width of the z window beyond each junction for the stored samples.
    pub sample_margin: f64,
    pub n_samples: usize,
}

impl BoundSearchConfig {
    pub fn for_device(p: &DeviceParams) -> Self {
        Self {
            e_floor: -2.0 * p.mu1,
            n_scan: 2000,
            det_tol: 1e-10,
            imag_tol: 1e-8,
            sample_margin: 4.0,
            n_samples: 801,
        }
    }
}

/// Outcome of a bound-state search. Failed refinements and rejected
/// (non-real) roots are reported alongside the accepted states.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundSpectrum {
    pub states: Vec<BoundState>,
    pub rejected: Vec<Complex64>,
    pub failures: Vec<Error>,
}

/// Scans the real-E determinant, refines every sign change and every local
/// minimum of |det| by Müller iteration, and keeps the real roots.
pub fn find_bound_states(p: &DeviceParams, cfg: &BoundSearchConfig) -> Result<BoundSpectrum> {
    p.validate()?;
    let top = p.v0() - 1e-6;
    let mut out = BoundSpectrum::default();
    if !(cfg.e_floor < top) || cfg.n_scan < 3 {
        return Ok(out);
    }
    let n = cfg.n_scan;
    let grid: Vec<f64> = (0..n)
        .map(|i| cfg.e_floor + (top - cfg.e_floor) * i as f64 / (n - 1) as f64)
        .collect();
    let dets: Vec<Complex64> = grid
        .iter()
        .map(|&e| bound_det(Complex64::new(e, 0.0), p))
        .collect::<Result<_>>()?;

    let mut seeds: Vec<[f64; 3]> = Vec::new();
    for i in 0..n - 1 {
        if dets[i].re == 0.0 || dets[i].re.signum() != dets[i + 1].re.signum() {
            let mid = 0.5 * (grid[i] + grid[i + 1]);
            seeds.push([grid[i], grid[i + 1], mid]);
        }
    }
    for i in 1..n - 1 {
        let (l, c, r) = (dets[i - 1].norm(), dets[i].norm(), dets[i + 1].norm());
        let already = seeds.iter().any(|s| s[0] == grid[i] || s[1] == grid[i]);
        if c < l && c < r && !already {
            seeds.push([grid[i - 1], grid[i + 1], grid[i]]);
        }
    }

    let muller_cfg = MullerConfig::default();
    let mut roots: Vec<Complex64> = Vec::new();
    for s in seeds {
        let c = |x: f64| Complex64::new(x, 0.0);
        let root = match muller(|e| bound_det(e, p), [c(s[0]), c(s[1]), c(s[2])], &muller_cfg) {
            Ok(r) => r,
            Err(e) => {
                out.failures.push(e);
                continue;
            }
        };
        let residual = bound_det(root, p)?.norm();
        if !(residual < cfg.det_tol) {
            out.failures.push(Error::NoConvergence {
                seed: c(s[2]),
                residual,
            });
            continue;
        }
        if roots.iter().any(|r| (r - root).norm() < 1e-8) {
            continue;
        }
        roots.push(root);
        if root.im.abs() >= cfg.imag_tol || !(root.re < p.v0()) || root.re < cfg.e_floor {
            out.rejected.push(root);
            continue;
        }
        out.states.push(assemble_bound_state(root, residual, p, cfg)?);
    }
    out.states.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(out)
}

fn assemble_bound_state(
    root: Complex64,
    residual: f64,
    p: &DeviceParams,
    cfg: &BoundSearchConfig,
) -> Result<BoundState> {
    let energy = root.re;
    let sp = model::spectral_params(energy, p);
    let sys = bound_system(&sp, p)?;
    let kappa = sp.k_b / p.m0();
    // Null vector of the reduced 2×2 mismatch system: take the better row.
    let row_left = [
        sys.left[0].1 - kappa * sys.left[0].0,
        sys.left[1].1 - kappa * sys.left[1].0,
    ];
    let row_right = [
        sys.right[0].1 + kappa * sys.right[0].0,
        sys.right[1].1 + kappa * sys.right[1].0,
    ];
    let norm = |r: &[Complex64; 2]| r[0].norm() + r[1].norm();
    let row = if norm(&row_left) >= norm(&row_right) {
        row_left
    } else {
        row_right
    };
    let mut inner = InnerCoeffs {
        p: row[1],
        q: -row[0],
    };
    let edge = |s: &[(Complex64, Complex64); 2], c: &InnerCoeffs| c.p * s[0].0 + c.q * s[1].0;
    let decay = (-sp.k_b * p.a0).exp();
    let mut state = BoundState {
        energy,
        energy_imag: root.im,
        k_b: sp.k_b.re,
        inner,
        a1: edge(&sys.left, &inner) / decay,
        a2: edge(&sys.right, &inner) / decay,
        samples: Vec::new(),
        residual,
    };
    let grid = uniform_grid(-p.a0 - cfg.sample_margin, p.a0 + cfg.sample_margin, cfg.n_samples);
    let samples = profile(ProfileSource::Bound(&state), p, &grid)?;
    let peak = samples.iter().map(|s| s.psi.norm()).fold(0.0, f64::max);
    if peak > 0.0 {
        inner.p /= peak;
        inner.q /= peak;
        state.inner = inner;
        state.a1 /= peak;
        state.a2 /= peak;
        state.samples = samples
            .into_iter()
            .map(|s| WaveSample {
                z: s.z,
                psi: s.psi / peak,
                v: s.v / peak,
            })
            .collect();
    }
    Ok(state)
}

pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Bound,
    /// Continued past the real bound-state axis (outgoing-wave exterior).
    Resonance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchPoint {
    pub mu2: f64,
    pub energy: Complex64,
    pub k_b: Complex64,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingScan {
    pub points: Vec<SwitchPoint>,
    /// μ₂ where Re E₀ first crosses zero (linear interpolation), with the
    /// regime of the root just after the crossing.
    pub crossing: Option<(f64, Regime)>,
    /// Set when continuation stopped early; `points` holds what was tracked.
    pub error: Option<Error>,
}

fn classify(k_b: Complex64, energy: Complex64, p: &DeviceParams) -> Regime {
    if energy.im.abs() < 1e-8 && k_b.re > 0.0 && energy.re < p.v0() {
        Regime::Bound
    } else {
        Regime::Resonance
    }
}

/// Follows the ground-state root of the bound determinant as μ₂ increases.
///
/// The root is tracked in the k_b plane, where the determinant has no branch
/// cut, each refinement seeded by linear extrapolation of the previous two
/// roots. Roots come in pairs k_b, conj(k_b); past the real axis the member
/// with Im k_b ≤ 0 (outgoing exterior wave) is kept.
pub fn switching_scan(p: &DeviceParams, mu2_grid: &[f64]) -> Result<SwitchingScan> {
    let mut scan = SwitchingScan {
        points: Vec::new(),
        crossing: None,
        error: None,
    };
    let Some(&first) = mu2_grid.first() else {
        return Ok(scan);
    };
    if mu2_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Usage("mu2 grid must be strictly ascending".into()));
    }
    let start = p.with_mu2(first);
    let cfg = BoundSearchConfig::for_device(&start);
    let spectrum = find_bound_states(&start, &cfg)?;
    let Some(ground) = spectrum.states.first() else {
        return Err(Error::ContinuationLost {
            mu2: first,
            last_good: f64::NAN,
        });
    };
    let k0 = Complex64::new(ground.k_b, 0.0);
    scan.points.push(SwitchPoint {
        mu2: first,
        energy: Complex64::new(ground.energy, 0.0),
        k_b: k0,
        regime: Regime::Bound,
    });

    let muller_cfg = MullerConfig {
        x_tol: 1e-12,
        ..MullerConfig::default()
    };
    for &mu2 in &mu2_grid[1..] {
        let dev = p.with_mu2(mu2);
        let n = scan.points.len();
        let prev = scan.points[n - 1].k_b;
        let pred = if n >= 2 {
            2.0 * prev - scan.points[n - 2].k_b
        } else {
            prev
        };
        let h = 1e-3 * (1.0 + prev.norm());
        let seeds = [prev, pred + Complex64::new(h, 0.0), pred - Complex64::new(0.0, h)];
        // |det| grows by orders of magnitude along the path and its rounding
        // noise with it; convergence is judged by the Müller step, and the
        // residual only has to be small next to |det| one step away.
        let scale = bound_det_kb(seeds[1], &dev).map_or(1.0, |d| d.norm().max(1.0));
        let root = muller_best(|kb| bound_det_kb(kb, &dev), seeds, &muller_cfg);
        let kb = match root {
            Ok(out) if out.residual < 1e-4 * scale => {
                let kb = out.root;
                if kb.im > 0.0 {
                    kb.conj()
                } else {
                    kb
                }
            }
            _ => {
                scan.error = Some(Error::ContinuationLost {
                    mu2,
                    last_good: scan.points[n - 1].mu2,
                });
                break;
            }
        };
        // Snap numerically real roots back onto the axis.
        let kb = if kb.im.abs() < 1e-12 * (1.0 + kb.re.abs()) {
            Complex64::new(kb.re, 0.0)
        } else {
            kb
        };
        let energy = dev.v0() - kb * kb / (2.0 * dev.m0());
        scan.points.push(SwitchPoint {
            mu2,
            energy,
            k_b: kb,
            regime: classify(kb, energy, &dev),
        });
    }

    scan.crossing = scan.points.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        if a.energy.re < 0.0 && b.energy.re >= 0.0 {
            let t = -a.energy.re / (b.energy.re - a.energy.re);
            Some((a.mu2 + t * (b.mu2 - a.mu2), b.regime))
        } else {
            None
        }
    });
    Ok(scan)
}

/// A state whose full piecewise wavefunction can be sampled.
#[derive(Debug, Clone, Copy)]
pub enum ProfileSource<'a> {
    Scattering(&'a ScatteringResult),
    Bound(&'a BoundState),
}

/// Samples ψ and ψ′/m on a sorted z grid: closed-form exteriors, interior
/// from the hypergeometric basis (or by integration for oracle results).
pub fn profile(src: ProfileSource<'_>, p: &DeviceParams, z_grid: &[f64]) -> Result<Vec<WaveSample>> {
    if z_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Usage("z grid must be sorted".into()));
    }
    let a0 = p.a0;
    let m0 = p.m0();
    match src {
        ProfileSource::Scattering(res) => {
            let sp = model::spectral_params(res.energy, p);
            let k = sp.k;
            let ikm = I * k / m0;
            let wave = |amp_plus: Complex64, amp_minus: Complex64, z: f64| {
                let ep = (I * k * z).exp();
                let em = (-I * k * z).exp();
                (amp_plus * ep + amp_minus * em, ikm * (amp_plus * ep - amp_minus * em))
            };
            let one = Complex64::new(1.0, 0.0);
            let (left_amps, right_amps) = match res.side {
                Side::Left => ((one, res.r), (res.t, ZERO)),
                Side::Right => ((ZERO, res.t), (res.r, one)),
            };
            let interior = interior_sampler(res, &sp, p)?;
            z_grid
                .iter()
                .map(|&z| {
                    let (psi, v) = if z < -a0 {
                        wave(left_amps.0, left_amps.1, z)
                    } else if z > a0 {
                        wave(right_amps.0, right_amps.1, z)
                    } else {
                        interior(z)?
                    };
                    Ok(WaveSample { z, psi, v })
                })
                .collect()
        }
        ProfileSource::Bound(state) => {
            let sp = model::spectral_params(state.energy, p);
            let basis = InteriorBasis::new(&sp, p)?;
            let kb = sp.k_b;
            let kappa = kb / m0;
            z_grid
                .iter()
                .map(|&z| {
                    let (psi, v) = if z < -a0 {
                        let e = state.a1 * (kb * z).exp();
                        (e, kappa * e)
                    } else if z > a0 {
                        let e = state.a2 * (-kb * z).exp();
                        (e, -kappa * e)
                    } else {
                        let (psi, dpsi) = basis.combine(z, &state.inner)?;
                        (psi, dpsi / model::interior_mass(z, p))
                    };
                    Ok(WaveSample { z, psi, v })
                })
                .collect()
        }
    }
}

type Sampler<'a> = Box<dyn Fn(f64) -> Result<(Complex64, Complex64)> + 'a>;

fn interior_sampler<'a>(
    res: &'a ScatteringResult,
    sp: &'a SpectralParams,
    p: &'a DeviceParams,
) -> Result<Sampler<'a>> {
    Ok(match res.method {
        Method::Analytic => {
            let basis = InteriorBasis::new(sp, p)?;
            Box::new(move |z| {
                let (psi, dpsi) = basis.combine(z, &res.inner)?;
                Ok((psi, dpsi / model::interior_mass(z, p)))
            })
        }
        Method::NumericOracle => {
            let start = (res.inner.p, res.inner.q);
            let cfg = IntegratorConfig::default();
            Box::new(move |z| oracle::propagate(res.energy, p, -p.a0, z, start, &cfg))
        }
    })
}
