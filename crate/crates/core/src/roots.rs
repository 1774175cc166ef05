//! Root finders: Müller's method for complex determinants and a bracketed
//! bisection/secant hybrid for real shooting mismatches.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MullerConfig {
    pub max_iter: usize,
    /// Stop when the update is below x_tol · (1 + |x|).
    pub x_tol: f64,
}

impl Default for MullerConfig {
    fn default() -> Self {
        Self {
            max_iter: 100,
            x_tol: 1e-14,
        }
    }
}

/// Müller iteration from three starting points. Returns the last iterate
/// once the step is small enough or f vanishes exactly.
pub fn muller<F>(f: F, seeds: [Complex64; 3], cfg: &MullerConfig) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let out = muller_best(f, seeds, cfg)?;
    if out.converged {
        Ok(out.root)
    } else {
        Err(Error::NoConvergence {
            seed: seeds[2],
            residual: out.last_residual,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MullerOutcome {
    /// Converged iterate, or the iterate with the smallest |f| otherwise.
    pub root: Complex64,
    pub residual: f64,
    pub converged: bool,
    last_residual: f64,
}

/// As [`muller`], but an iteration that stalls on a noise floor still
/// reports its best iterate, leaving acceptance to the caller.
pub fn muller_best<F>(mut f: F, seeds: [Complex64; 3], cfg: &MullerConfig) -> Result<MullerOutcome>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let [mut x0, mut x1, mut x2] = seeds;
    let (mut f0, mut f1, mut f2) = (f(x0)?, f(x1)?, f(x2)?);
    let mut best = [(x0, f0), (x1, f1), (x2, f2)]
        .into_iter()
        .min_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(x, fx)| (x, fx.norm()))
        .unwrap_or((x2, f2.norm()));
    let done = |x: Complex64, r: f64, converged: bool, last: f64| MullerOutcome {
        root: x,
        residual: r,
        converged,
        last_residual: last,
    };
    for _ in 0..cfg.max_iter {
        if f2 == Complex64::new(0.0, 0.0) {
            return Ok(done(x2, 0.0, true, 0.0));
        }
        let h1 = x1 - x0;
        let h2 = x2 - x1;
        let d1 = (f1 - f0) / h1;
        let d2 = (f2 - f1) / h2;
        let a = (d2 - d1) / (h2 + h1);
        let b = a * h2 + d2;
        let disc = (b * b - 4.0 * a * f2).sqrt();
        let den = if (b + disc).norm() >= (b - disc).norm() {
            b + disc
        } else {
            b - disc
        };
        let dx = if den.norm() == 0.0 || !den.is_finite() {
            // Flat triple: nudge instead of dividing by zero.
            Complex64::new(1e-3, 1e-3) * (1.0 + x2.norm())
        } else {
            -2.0 * f2 / den
        };
        let x3 = x2 + dx;
        if !x3.is_finite() {
            break;
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        x2 = x3;
        f2 = f(x2)?;
        if f2.norm() < best.1 {
            best = (x2, f2.norm());
        }
        if dx.norm() <= cfg.x_tol * (1.0 + x2.norm()) {
            return Ok(done(x2, f2.norm(), true, f2.norm()));
        }
    }
    Ok(done(best.0, best.1, false, f2.norm()))
}

/// Root of a real function on a sign-changing bracket, by Illinois-modified
/// regula falsi with a bisection fallback. Stops when the bracket is below `tol`.
pub fn bracketed_root<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    let mut side = 0i8;
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let mut x = (a * fb - b * fa) / (fb - fa);
        // Keep the falsi point well inside the bracket or bisect.
        let width = b - a;
        if !(x > a + 0.01 * width && x < b - 0.01 * width) {
            x = 0.5 * (a + b);
        }
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fb.signum() {
            b = x;
            fb = fx;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = x;
            fa = fx;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Ok(0.5 * (a + b))
}
