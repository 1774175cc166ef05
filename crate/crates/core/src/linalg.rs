//! Dense complex solves for the matching systems.

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use num_complex::Complex64;

/// Solution of a square system plus a 1-norm condition estimate taken after
/// column then row equilibration. Rescaling the unknowns leaves it exactly
/// unchanged; rescaling equations changes it by a bounded factor.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Solved<V> {
    pub x: Option<V>,
    pub condition: f64,
}

fn equilibrated_condition<const N: usize>(rows: &[[Complex64; N]; N]) -> f64 {
    let mut m = *rows;
    for j in 0..N {
        let s = m.iter().map(|row| row[j].norm()).fold(0.0, f64::max);
        if s > 0.0 {
            m.iter_mut().for_each(|row| row[j] /= s);
        }
    }
    for row in m.iter_mut() {
        let s = row.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if s > 0.0 {
            row.iter_mut().for_each(|v| *v /= s);
        }
    }
    let norm1 = |m: &[[Complex64; N]; N]| {
        (0..N)
            .map(|j| (0..N).map(|i| m[i][j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    match invert(&m) {
        Some(inv) => norm1(&m) * norm1(&inv),
        None => f64::INFINITY,
    }
}

fn invert<const N: usize>(m: &[[Complex64; N]; N]) -> Option<[[Complex64; N]; N]> {
    match N {
        2 => {
            let a = Matrix2::from_fn(|i, j| m[i][j]);
            let inv = a.lu().try_inverse()?;
            let mut out = [[Complex64::default(); N]; N];
            for i in 0..N {
                for j in 0..N {
                    out[i][j] = inv[(i, j)];
                }
            }
            Some(out)
        }
        4 => {
            let a = Matrix4::from_fn(|i, j| m[i][j]);
            let inv = a.lu().try_inverse()?;
            let mut out = [[Complex64::default(); N]; N];
            for i in 0..N {
                for j in 0..N {
                    out[i][j] = inv[(i, j)];
                }
            }
            Some(out)
        }
        _ => unreachable!("only 2x2 and 4x4 systems occur"),
    }
}

pub(crate) fn solve4(rows: &[[Complex64; 4]; 4], rhs: [Complex64; 4]) -> Solved<[Complex64; 4]> {
    let a = Matrix4::from_fn(|i, j| rows[i][j]);
    let x = a
        .lu()
        .solve(&Vector4::from(rhs))
        .map(|v| [v[0], v[1], v[2], v[3]]);
    Solved {
        x,
        condition: equilibrated_condition(rows),
    }
}

pub(crate) fn solve2(rows: &[[Complex64; 2]; 2], rhs: [Complex64; 2]) -> Solved<[Complex64; 2]> {
    let a = Matrix2::from_fn(|i, j| rows[i][j]);
    let x = a.lu().solve(&Vector2::from(rhs)).map(|v| [v[0], v[1]]);
    Solved {
        x,
        condition: equilibrated_condition(rows),
    }
}

pub(crate) fn det4(rows: &[[Complex64; 4]; 4]) -> Complex64 {
    Matrix4::from_fn(|i, j| rows[i][j]).lu().determinant()
}
