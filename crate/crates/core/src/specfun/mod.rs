//! Gauss hypergeometric function ₂F₁(a, b; c; y) for complex parameters on
//! the disk |y| ≤ 0.75.
//!
//! The device solver only ever evaluates ₂F₁ for real y in [0, 1/2], where
//! the Maclaurin series converges geometrically (ratio at most 1/2). No
//! analytic continuation is attempted. The Pochhammer ratio is updated term
//! by term and the whole recurrence is carried in double-double arithmetic,
//! so cancellation between large intermediate terms does not eat into the
//! f64 result.

mod dd;

use num_complex::Complex64;

use crate::error::{Error, Result};
use dd::CDd;

/// Arguments of ₂F₁(a, b; c; y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Params {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub y: Complex64,
}

impl Hyp2F1Params {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, y: Complex64) -> Self {
        Self { a, b, c, y }
    }
}

/// Tolerances and limits for the series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Stop once |term| ≤ rel_tol · |partial sum| for two consecutive terms.
    pub rel_tol: f64,
    pub max_terms: usize,
    /// Distance from a nonpositive integer at which c counts as a pole.
    pub pole_tol: f64,
    pub max_abs_y: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-15,
            max_terms: 10_000,
            pole_tol: 1e-12,
            max_abs_y: 0.75,
        }
    }
}

fn check_c(c: Complex64, pole_tol: f64) -> Result<()> {
    let n = c.re.round();
    if n <= 0.0 && (c - n).norm() < pole_tol {
        return Err(Error::PoleAtC { c });
    }
    Ok(())
}

/// ₂F₁(a, b; c; y) with the default [`SeriesConfig`].
pub fn hyp2f1(p: &Hyp2F1Params) -> Result<Complex64> {
    hyp2f1_with(p, &SeriesConfig::default())
}

pub fn hyp2f1_with(p: &Hyp2F1Params, cfg: &SeriesConfig) -> Result<Complex64> {
    let abs_y = p.y.norm();
    if !(abs_y <= cfg.max_abs_y) {
        return Err(Error::DomainError {
            abs_y,
            bound: cfg.max_abs_y,
        });
    }
    check_c(p.c, cfg.pole_tol)?;

    let (a, b, c, y) = (CDd::from(p.a), CDd::from(p.b), CDd::from(p.c), CDd::from(p.y));
    let mut term = CDd::ONE;
    let mut sum = CDd::ONE;
    let mut small_run = 0;
    for n in 0..cfg.max_terms {
        let nf = n as f64;
        let num = a.add_real(nf) * b.add_real(nf) * y;
        let den = c.add_real(nf) * CDd::from(Complex64::new(nf + 1.0, 0.0));
        term = term * num / den;
        sum = sum + term;
        if term.norm_f64() <= cfg.rel_tol * sum.norm_f64() {
            small_run += 1;
            if small_run == 2 {
                return Ok(sum.to_c64());
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence {
        terms: cfg.max_terms,
    })
}

/// d/dy ₂F₁(a, b; c; y) = (ab/c) ₂F₁(a+1, b+1; c+1; y).
pub fn hyp2f1_deriv(p: &Hyp2F1Params) -> Result<Complex64> {
    hyp2f1_deriv_with(p, &SeriesConfig::default())
}

pub fn hyp2f1_deriv_with(p: &Hyp2F1Params, cfg: &SeriesConfig) -> Result<Complex64> {
    check_c(p.c, cfg.pole_tol)?;
    let one = Complex64::new(1.0, 0.0);
    let shifted = Hyp2F1Params::new(p.a + one, p.b + one, p.c + one, p.y);
    Ok(p.a * p.b / p.c * hyp2f1_with(&shifted, cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(x: Complex64, y: Complex64) -> f64 {
        (x - y).norm() / y.norm()
    }

    #[test]
    fn zero_argument_gives_one() {
        let p = Hyp2F1Params::new(c(3.0, -1.0), c(-0.5, 2.0), c(1.5, 0.25), c(0.0, 0.0));
        assert_eq!(hyp2f1(&p).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn log_closed_form() {
        // 2F1(1,1;2;y) = -ln(1-y)/y; at y = 1/2 this is 2 ln 2.
        let p = Hyp2F1Params::new(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.5, 0.0));
        let v = hyp2f1(&p).unwrap();
        assert!(rel(v, c(1.3862943611198906, 0.0)) < 1e-15);
    }

    #[test]
    fn binomial_identity() {
        let a = c(0.5, 0.5);
        let b = c(1.7, -0.3);
        let y = c(0.3, 0.2);
        let p = Hyp2F1Params::new(a, b, b, y);
        let expected = (c(1.0, 0.0) - y).powc(-a);
        assert!(rel(hyp2f1(&p).unwrap(), expected) < 1e-14);
    }

    #[test]
    fn derivative_at_zero_is_first_coefficient() {
        let (a, b, cc) = (c(0.3, 1.0), c(2.0, -0.5), c(1.25, 0.5));
        let p = Hyp2F1Params::new(a, b, cc, c(0.0, 0.0));
        assert!(rel(hyp2f1_deriv(&p).unwrap(), a * b / cc) < 1e-15);
    }

    #[test]
    fn derivative_of_log_closed_form() {
        // d/dy[-ln(1-y)/y] = 1/(y(1-y)) + ln(1-y)/y^2, at y = 1/2: 4 - 4 ln 2.
        let p = Hyp2F1Params::new(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.5, 0.0));
        let expected = 4.0 - 4.0 * std::f64::consts::LN_2;
        assert!((expected - 1.2274112777602189).abs() < 1e-15);
        assert!(rel(hyp2f1_deriv(&p).unwrap(), c(expected, 0.0)) < 1e-14);
    }

    #[test]
    fn derivative_binomial_identity() {
        let y = c(0.0, 0.25);
        let p = Hyp2F1Params::new(c(0.5, 0.0), c(3.0, 0.0), c(3.0, 0.0), y);
        let expected = 0.5 * (c(1.0, 0.0) - y).powf(-1.5);
        assert!(rel(hyp2f1_deriv(&p).unwrap(), expected) < 1e-14);
    }

    #[test]
    fn terminating_series_is_a_polynomial() {
        // a = -2: 1 - 2by/c + b(b+1)y^2/(c(c+1)).
        let (b, cc, y) = (c(1.5, 0.5), c(2.0, -1.0), c(0.4, -0.3));
        let p = Hyp2F1Params::new(c(-2.0, 0.0), b, cc, y);
        let expected = 1.0 - 2.0 * b * y / cc + b * (b + 1.0) * y * y / (cc * (cc + 1.0));
        assert!(rel(hyp2f1(&p).unwrap(), expected) < 1e-15);
    }

    #[test]
    fn rejects_pole_in_c() {
        for cc in [c(0.0, 0.0), c(-3.0, 5e-13), c(-1.0 + 1e-13, 0.0)] {
            let p = Hyp2F1Params::new(c(1.0, 0.0), c(1.0, 0.0), cc, c(0.2, 0.0));
            assert!(matches!(hyp2f1(&p), Err(Error::PoleAtC { .. })));
        }
        // Near, but outside tolerance.
        let p = Hyp2F1Params::new(c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 1e-9), c(0.2, 0.0));
        assert!(hyp2f1(&p).is_ok());
    }

    #[test]
    fn rejects_large_argument() {
        let p = Hyp2F1Params::new(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.6, 0.6));
        assert!(matches!(hyp2f1(&p), Err(Error::DomainError { .. })));
        let p = Hyp2F1Params::new(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(f64::NAN, 0.0));
        assert!(matches!(hyp2f1(&p), Err(Error::DomainError { .. })));
    }

    #[test]
    fn term_cap_reports_non_convergence() {
        let cfg = SeriesConfig {
            max_terms: 5,
            ..SeriesConfig::default()
        };
        let p = Hyp2F1Params::new(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.7, 0.0));
        assert_eq!(hyp2f1_with(&p, &cfg), Err(Error::NonConvergence { terms: 5 }));
    }
}
