//! The matching matrix T, phi(0+) = T phi(0-), built three ways: from a
//! U(2) matrix through the deficiency basis, from the (alpha, a) closed
//! form, and from the four named point interactions.

use serde::{Deserialize, Serialize};

use crate::deficiency::boundary_value;
use crate::error::{Error, Result};
use crate::linalg::{re, Mat2, C64, I};
use crate::model::{EigenSign, ExtensionParams, Family, Junction, NamedExtension, Side, SpinorSample, UnitaryMatrix};

/// Largest condition number accepted for the 0+ boundary matrix.
pub const MAX_BOUNDARY_CONDITION: f64 = 1e12;
/// Smallest |a1| for which the closed form exists.
pub const MIN_COUPLING: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchingMatrix {
    matrix: Mat2,
    junction: Junction,
}

impl MatchingMatrix {
    pub fn new(matrix: Mat2, junction: Junction) -> Self {
        MatchingMatrix { matrix, junction }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.matrix
    }

    pub fn junction(&self) -> &Junction {
        &self.junction
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.matrix.get(i, j)
    }

    pub fn det(&self) -> C64 {
        self.matrix.det()
    }

    /// Largest violation of v_r T^dagger sigma_x T = v_l sigma_x (probability
    /// current continuity across the junction).
    pub fn current_defect(&self) -> f64 {
        let sx = Mat2::sigma_x();
        let lhs = self.matrix.adjoint().mul(&sx).mul(&self.matrix).scale(re(self.junction.right.velocity()));
        lhs.max_abs_diff(&sx.scale(re(self.junction.left.velocity())))
    }
}

fn boundary_row(psi: SpinorSample) -> [C64; 2] {
    // psi^dagger sigma_x
    [psi.lower.conj(), psi.upper.conj()]
}

fn add(a: SpinorSample, b: SpinorSample, coeff: C64) -> SpinorSample {
    SpinorSample { upper: a.upper + coeff * b.upper, lower: a.lower + coeff * b.lower }
}

fn times(coeff: C64, s: SpinorSample) -> SpinorSample {
    SpinorSample { upper: coeff * s.upper, lower: coeff * s.lower }
}

/// Matching matrix of the extension selected by `u`.
///
/// The domain vectors are psi_1 = psi_+^(+) + U11 psi_-^(+) + U21 psi_-^(-) and
/// psi_2 = psi_+^(-) + U12 psi_-^(+) + U22 psi_-^(-). A function phi lies in the
/// extended domain when the boundary form with each psi_j vanishes:
/// v_l psi_j(0-)^dagger sigma_x phi(0-) = v_r psi_j(0+)^dagger sigma_x phi(0+).
/// Solving that pair for phi(0+) gives T = (v_l / v_r) B(0+)^{-1} B(0-).
pub fn matching_from_unitary(u: &UnitaryMatrix, junction: &Junction) -> Result<MatchingMatrix> {
    let plus_r = boundary_value(Side::Right, EigenSign::PlusI, &junction.right);
    let minus_r = boundary_value(Side::Right, EigenSign::MinusI, &junction.right);
    let plus_l = boundary_value(Side::Left, EigenSign::PlusI, &junction.left);
    let minus_l = boundary_value(Side::Left, EigenSign::MinusI, &junction.left);

    let psi1_right = add(plus_r, minus_r, u.entry(0, 0));
    let psi1_left = times(u.entry(1, 0), minus_l);
    let psi2_right = times(u.entry(0, 1), minus_r);
    let psi2_left = add(plus_l, minus_l, u.entry(1, 1));

    let [a, b] = boundary_row(psi1_right);
    let [c, d] = boundary_row(psi2_right);
    let at_right = Mat2::new(a, b, c, d);
    let [a, b] = boundary_row(psi1_left);
    let [c, d] = boundary_row(psi2_left);
    let at_left = Mat2::new(a, b, c, d);

    let condition = at_right.condition_number();
    if !(condition <= MAX_BOUNDARY_CONDITION) {
        return Err(Error::SingularBoundaryMatrix { condition });
    }
    let inv = at_right.inverse().ok_or(Error::SingularBoundaryMatrix { condition })?;
    let ratio = junction.left.velocity() / junction.right.velocity();
    Ok(MatchingMatrix::new(inv.mul(&at_left).scale(re(ratio)), *junction))
}

/// Closed-form matching matrix on the a2 = 0 slice:
/// T = sqrt(v_l) / (2 conj(U12) sqrt(v_r)) * [[T11, T12], [T21, T22]] with
/// conj(U12) = i a1 e^{-i alpha}.
///
/// T12 carries the sign that reproduces the deficiency-basis route and the
/// named matrices: T12 = -2 e^{-i alpha} (a0 + cos alpha) q_l q_r.
pub fn matching_closed_form(ext: &ExtensionParams, junction: &Junction) -> Result<MatchingMatrix> {
    let a1 = ext.a1();
    if a1.abs() < MIN_COUPLING {
        return Err(Error::DegenerateExtension { a1 });
    }
    let (a0, a3) = (ext.a0(), ext.a3());
    let (sin, cos) = ext.alpha().sin_cos();
    let (gl, gr) = (junction.left.gap(), junction.right.gap());
    let (ql, qr) = (junction.left.quarter_root(), junction.right.quarter_root());
    let phase = C64::from_polar(2.0, -ext.alpha());
    let sum = a0 + cos;

    let t11 = phase * I * (qr / ql) * (a3 + sin - gl * sum);
    let t12 = -phase * sum * ql * qr;
    let t21 = phase * (a0 - cos + gl * gr * sum + gl * (a3 - sin) - gr * (a3 + sin)) / (ql * qr);
    let t22 = -phase * I * (ql / qr) * (a3 - sin + gr * sum);

    let u12_conj = I * a1 * C64::from_polar(1.0, -ext.alpha());
    let prefactor = (junction.left.velocity() / junction.right.velocity()).sqrt() / (2.0 * u12_conj);
    Ok(MatchingMatrix::new(Mat2::new(t11, t12, t21, t22).scale(prefactor), *junction))
}

/// Matching matrix of a named point interaction. Requires v_l = v_r.
pub fn named_matrix(named: &NamedExtension, junction: &Junction) -> Result<MatchingMatrix> {
    let v = junction.fermi_velocity()?;
    let (ql, qr) = (junction.left.quarter_root(), junction.right.quarter_root());
    let s = named.strength();
    let zero = re(0.0);
    let m = match named.family() {
        Family::EquallyMixed => Mat2::new(re(qr / ql), zero, -I * s / (v * ql * qr), re(ql / qr)),
        Family::InvertedMixed => Mat2::new(re(qr / ql), -I * s * v * ql * qr, zero, re(ql / qr)),
        Family::PureScalar => {
            let (sh, ch) = ((s / v).sinh(), (s / v).cosh());
            Mat2::new(re(qr / ql * ch), I * sh, -I * sh, re(ql / qr * ch))
        }
        Family::PureVector => {
            let (ml, mr) = (junction.left.mass(), junction.right.mass());
            if ml == 0.0 || mr == 0.0 {
                return Err(Error::MasslessRatio);
            }
            let (sn, cs) = (s / v).sin_cos();
            Mat2::new(re(mr / ml * cs), -I * sn, -I * sn, re(ml / mr * cs))
        }
    };
    Ok(MatchingMatrix::new(m, *junction))
}
