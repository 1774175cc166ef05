//! Device profiles and the per-energy parameters of the interior solution.
//!
//! Inside |z| < a₀ the mass is g²/(2(1+z²)) and the potential is
//! −μ₁/(1+z²) + iμ₂ z/√(1+z²); outside both are frozen at their junction
//! values, except that the imaginary part drops to zero. With
//! ρ̄ = sinh⁻¹ z the interior equation becomes a PT-symmetric Rosen–Morse II
//! problem in ρ̄ and, after y = (1 − tanh ρ̄)/2, a hypergeometric equation.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// The four model constants of the heterojunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceParams {
    pub g: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub a0: f64,
}

impl DeviceParams {
    /// Parameters used throughout the reference figures.
    pub const REFERENCE: DeviceParams = DeviceParams {
        g: 1.5,
        mu1: 4.0,
        mu2: 0.3,
        a0: 2.5,
    };

    pub fn new(g: f64, mu1: f64, mu2: f64, a0: f64) -> Result<Self> {
        let p = DeviceParams { g, mu1, mu2, a0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.g, self.mu1, self.mu2, self.a0].iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if self.g <= 0.0 || self.mu1 <= 0.0 || self.a0 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "need g > 0, mu1 > 0, a0 > 0 (got g = {}, mu1 = {}, a0 = {})",
                self.g, self.mu1, self.a0
            )));
        }
        // Negative mu2 is the mirrored device; left must stay the absorptive side.
        if self.mu2 < 0.0 {
            return Err(Error::InvalidParams(format!(
                "mu2 must be nonnegative (got {})",
                self.mu2
            )));
        }
        if self.s() <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "s = g*sqrt(mu1) - 1/2 must be positive (got {})",
                self.s()
            )));
        }
        Ok(())
    }

    pub fn with_mu2(&self, mu2: f64) -> Self {
        DeviceParams { mu2, ..*self }
    }

    /// Exterior potential floor −μ₁/(1 + a₀²).
    pub fn v0(&self) -> f64 {
        -self.mu1 / (1.0 + self.a0 * self.a0)
    }

    /// Exterior mass g²/(2(1 + a₀²)).
    pub fn m0(&self) -> f64 {
        self.g * self.g / (2.0 * (1.0 + self.a0 * self.a0))
    }

    /// g√μ₁, half the difference a − b.
    pub fn g_sqrt_mu1(&self) -> f64 {
        self.g * self.mu1.sqrt()
    }

    /// Rosen–Morse strength, + branch: s = −1/2 + g√μ₁.
    pub fn s(&self) -> f64 {
        -0.5 + self.g_sqrt_mu1()
    }

    /// λ = μ₂g²/2.
    pub fn lambda(&self) -> f64 {
        0.5 * self.mu2 * self.g * self.g
    }
}

/// Position-dependent potential and mass, as seen by the ODE integrator.
pub trait Profile {
    fn mass(&self, z: f64) -> f64;
    fn potential(&self, z: f64) -> Complex64;
}

/// The interior formulas, extended to the closed interval [−a₀, a₀] so that
/// integrator stages landing exactly on a junction see the one-sided limit.
impl Profile for DeviceParams {
    fn mass(&self, z: f64) -> f64 {
        interior_mass(z, self)
    }

    fn potential(&self, z: f64) -> Complex64 {
        interior_potential(z, self)
    }
}

pub fn potential(z: f64, p: &DeviceParams) -> Complex64 {
    if z.abs() < p.a0 {
        interior_potential(z, p)
    } else {
        Complex64::new(p.v0(), 0.0)
    }
}

pub fn mass(z: f64, p: &DeviceParams) -> f64 {
    if z.abs() < p.a0 {
        interior_mass(z, p)
    } else {
        p.m0()
    }
}

pub fn interior_potential(z: f64, p: &DeviceParams) -> Complex64 {
    let q = 1.0 + z * z;
    Complex64::new(-p.mu1 / q, p.mu2 * z / q.sqrt())
}

pub fn interior_mass(z: f64, p: &DeviceParams) -> f64 {
    p.g * p.g / (2.0 * (1.0 + z * z))
}

/// ρ/g = sinh⁻¹ z, with ρ(0) = 0.
pub fn rho_bar(z: f64) -> f64 {
    z.asinh()
}

/// y = (1 − tanh ρ̄)/2, which maps the interior onto (0, 1) with y(0) = 1/2
/// and y(−z) = 1 − y(z).
pub fn y_of_z(z: f64) -> f64 {
    y_pair(z).0
}

/// (y, 1 − y), each formed without cancellation: the small one of the pair
/// comes from 1 ∓ z/√(1+z²) = 1/(√(1+z²)(√(1+z²) ± z)).
pub fn y_pair(z: f64) -> (f64, f64) {
    let r = (1.0 + z * z).sqrt();
    let t = z / r;
    if z >= 0.0 {
        (0.5 / (r * (r + z)), 0.5 * (1.0 + t))
    } else {
        (0.5 * (1.0 - t), 0.5 / (r * (r - z)))
    }
}

/// Potential of the constant-mass problem in ρ = g ρ̄:
/// 1/(4g²) − (μ₁ − 1/(4g²)) sech²(ρ/g) + iμ₂ tanh(ρ/g).
pub fn effective_potential(rho: f64, p: &DeviceParams) -> Complex64 {
    let x = rho / p.g;
    let sech2 = 1.0 / x.cosh().powi(2);
    let shift = 0.25 / (p.g * p.g);
    Complex64::new(shift - (p.mu1 - shift) * sech2, p.mu2 * x.tanh())
}

/// Per-energy quantities of the interior and exterior solutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParams {
    pub energy: Complex64,
    /// κ² = Eg² − 1/4.
    pub kappa_sq: Complex64,
    /// Exponent of y: α² = 2iλ − κ².
    pub alpha: Complex64,
    /// Exponent of 1 − y: β² = −2iλ − κ².
    pub beta: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    /// Exterior wavenumber √(2m₀(E − V₀)).
    pub k: Complex64,
    /// Exterior decay constant √(2m₀(V₀ − E)).
    pub k_b: Complex64,
    /// E coincides with V₀, so k = k_b = 0.
    pub degenerate: bool,
}

/// Principal square root with the tie on the cut resolved toward Im ≥ 0.
fn principal_sqrt(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.re == 0.0 && r.im < 0.0 {
        -r
    } else {
        r
    }
}

impl SpectralParams {
    /// Same energy with the sign of α and/or β flipped; a, b, c follow.
    /// The interior basis only gets relabelled, so physical results must not change.
    pub fn with_branches(&self, flip_alpha: bool, flip_beta: bool, p: &DeviceParams) -> Self {
        let alpha = if flip_alpha { -self.alpha } else { self.alpha };
        let beta = if flip_beta { -self.beta } else { self.beta };
        let (a, b, c) = hypergeometric_abc(alpha, beta, p);
        SpectralParams {
            alpha,
            beta,
            a,
            b,
            c,
            ..*self
        }
    }
}

fn hypergeometric_abc(
    alpha: Complex64,
    beta: Complex64,
    p: &DeviceParams,
) -> (Complex64, Complex64, Complex64) {
    let mid = (alpha + beta + 1.0) * 0.5;
    let gs = p.g_sqrt_mu1();
    (mid + gs, mid - gs, alpha + 1.0)
}

pub fn spectral_params(energy: f64, p: &DeviceParams) -> SpectralParams {
    spectral_params_complex(Complex64::new(energy, 0.0), p)
}

/// As [`spectral_params`], for complex energy (root continuation).
pub fn spectral_params_complex(energy: Complex64, p: &DeviceParams) -> SpectralParams {
    let k_b = principal_sqrt(2.0 * p.m0() * (p.v0() - energy));
    spectral_params_with_kb(energy, k_b, p)
}

/// Spectral parameters for a prescribed exterior decay constant. The energy
/// is E = V₀ − k_b²/(2m₀); the caller's k_b is kept as given, which is how
/// roots are continued past the threshold without crossing a square-root cut.
pub fn spectral_params_from_kb(k_b: Complex64, p: &DeviceParams) -> SpectralParams {
    let energy = p.v0() - k_b * k_b / (2.0 * p.m0());
    spectral_params_with_kb(energy, k_b, p)
}

fn spectral_params_with_kb(energy: Complex64, k_b: Complex64, p: &DeviceParams) -> SpectralParams {
    let g2 = p.g * p.g;
    let kappa_sq = energy * g2 - 0.25;
    let two_i_lambda = Complex64::new(0.0, 2.0 * p.lambda());
    let alpha = principal_sqrt(two_i_lambda - kappa_sq);
    let beta = principal_sqrt(-two_i_lambda - kappa_sq);
    let (a, b, c) = hypergeometric_abc(alpha, beta, p);
    let k = principal_sqrt(2.0 * p.m0() * (energy - p.v0()));
    SpectralParams {
        energy,
        kappa_sq,
        alpha,
        beta,
        a,
        b,
        c,
        k,
        k_b,
        degenerate: k_b == Complex64::new(0.0, 0.0),
    }
}
