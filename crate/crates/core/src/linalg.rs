//! Minimal complex 2x2 algebra for matching matrices.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;

pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const fn new(a11: C64, a12: C64, a21: C64, a22: C64) -> Self {
        Mat2([[a11, a12], [a21, a22]])
    }

    pub fn identity() -> Self {
        Mat2::new(re(1.0), re(0.0), re(0.0), re(1.0))
    }

    pub fn sigma_x() -> Self {
        Mat2::new(re(0.0), re(1.0), re(1.0), re(0.0))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[i][j]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &other.0;
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d == C64::new(0.0, 0.0) || !d.is_finite() {
            return None;
        }
        let m = &self.0;
        Some(Mat2::new(m[1][1] / d, -m[0][1] / d, -m[1][0] / d, m[0][0] / d))
    }

    /// Singular values, largest first.
    pub fn singular_values(&self) -> (f64, f64) {
        let fro2: f64 = self.0.iter().flatten().map(|z| z.norm_sqr()).sum();
        let det = self.det().norm();
        let disc = (fro2 * fro2 / 4.0 - det * det).max(0.0).sqrt();
        let hi = (fro2 / 2.0 + disc).sqrt();
        // smallest from the determinant keeps precision when the matrix is near-singular
        let lo = if hi > 0.0 { det / hi } else { 0.0 };
        (hi, lo)
    }

    /// 2-norm condition number; infinite for a singular matrix.
    pub fn condition_number(&self) -> f64 {
        let (hi, lo) = self.singular_values();
        if lo == 0.0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.is_finite())
    }
}

/// Solve a 2x2 system by Cramer's rule. Returns `None` when |det| is below
/// `rel_tol` times the product of the row norms.
pub fn solve2(a: &Mat2, b: [C64; 2], rel_tol: f64) -> Option<[C64; 2]> {
    let d = a.det();
    let row = |i: usize| (a.0[i][0].norm_sqr() + a.0[i][1].norm_sqr()).sqrt();
    let scale = row(0) * row(1);
    if !(d.norm() > rel_tol * scale) {
        return None;
    }
    let m = &a.0;
    let x0 = (b[0] * m[1][1] - m[0][1] * b[1]) / d;
    let x1 = (m[0][0] * b[1] - b[0] * m[1][0]) / d;
    Some([x0, x1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let a = Mat2::new(C64::new(1.0, 2.0), C64::new(-0.5, 0.1), C64::new(0.3, -1.0), C64::new(2.0, 0.0));
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).max_abs_diff(&Mat2::identity()) < 1e-14);
    }

    #[test]
    fn condition_of_unitary_is_one() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = Mat2::new(re(s), C64::new(0.0, s), C64::new(0.0, s), re(s));
        assert!((u.condition_number() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_matrix() {
        let a = Mat2::new(re(1.0), re(2.0), re(2.0), re(4.0));
        assert!(a.condition_number() > 1e15);
        assert!(solve2(&a, [re(1.0), re(1.0)], 1e-12).is_none());
    }
}
