//! Domain types: media, junctions, extension parameters and the named
//! point-interaction families.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Mat2, C64};

/// One side of the junction. Units are natural (hbar = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Medium {
    mass: f64,
    velocity: f64,
}

impl Medium {
    pub fn new(mass: f64, velocity: f64) -> Result<Self> {
        if !mass.is_finite() || mass < 0.0 {
            return Err(Error::InvalidMedium(format!("mass must be finite and >= 0, got {mass}")));
        }
        if !velocity.is_finite() || velocity <= 0.0 {
            return Err(Error::InvalidMedium(format!("velocity must be finite and > 0, got {velocity}")));
        }
        Ok(Medium { mass, velocity })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn velocity(&self) -> f64 {
        self.velocity
    }

    /// Rest energy m v^2, the half-width of the gap on this side.
    pub fn gap(&self) -> f64 {
        self.mass * self.velocity * self.velocity
    }

    /// sqrt(1 + m^2 v^4).
    pub fn deficiency_root(&self) -> f64 {
        self.gap().hypot(1.0)
    }

    /// (1 + m^2 v^4)^(1/4).
    pub fn quarter_root(&self) -> f64 {
        self.deficiency_root().sqrt()
    }

    /// Decay rate sqrt(1 + m^2 v^4) / v of the deficiency solutions.
    pub fn decay_rate(&self) -> f64 {
        self.deficiency_root() / self.velocity
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Junction {
    pub left: Medium,
    pub right: Medium,
}

impl Junction {
    pub fn new(left: Medium, right: Medium) -> Self {
        Junction { left, right }
    }

    pub fn from_parts(m_l: f64, v_l: f64, m_r: f64, v_r: f64) -> Result<Self> {
        Ok(Junction::new(Medium::new(m_l, v_l)?, Medium::new(m_r, v_r)?))
    }

    /// Junction with a common Fermi velocity on both sides.
    pub fn with_fermi_velocity(m_l: f64, m_r: f64, v_f: f64) -> Result<Self> {
        Junction::from_parts(m_l, v_f, m_r, v_f)
    }

    /// Left and right media exchanged.
    pub fn swapped(&self) -> Self {
        Junction::new(self.right, self.left)
    }

    pub fn max_gap(&self) -> f64 {
        self.left.gap().max(self.right.gap())
    }

    pub fn min_gap(&self) -> f64 {
        self.left.gap().min(self.right.gap())
    }

    /// The shared Fermi velocity, if both sides agree to 1e-12 relative.
    pub fn fermi_velocity(&self) -> Result<f64> {
        let (vl, vr) = (self.left.velocity, self.right.velocity);
        if (vl - vr).abs() <= 1e-12 * vl.max(vr) {
            Ok(0.5 * (vl + vr))
        } else {
            Err(Error::VelocityMismatch { left: vl, right: vr })
        }
    }
}

/// Point on the a2 = 0 slice of U(2): U = e^{i alpha} A with
/// A = [[a0 - i a3, -i a1], [-i a1, a0 + i a3]].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtensionParams {
    alpha: f64,
    a0: f64,
    a1: f64,
    a3: f64,
}

pub const SPHERE_TOL: f64 = 1e-12;

impl ExtensionParams {
    /// Any real `alpha` is accepted and folded into [0, pi); each shift by pi
    /// flips the sign of (a0, a1, a3) so the unitary matrix is unchanged.
    pub fn new(alpha: f64, a0: f64, a1: f64, a3: f64) -> Result<Self> {
        if ![alpha, a0, a1, a3].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidExtension("parameters must be finite".into()));
        }
        let norm = a0 * a0 + a1 * a1 + a3 * a3;
        if (norm - 1.0).abs() > SPHERE_TOL {
            return Err(Error::InvalidExtension(format!(
                "a0^2 + a1^2 + a3^2 must equal 1, got {norm}"
            )));
        }
        let turns = (alpha / PI).floor();
        let mut folded = alpha - turns * PI;
        if folded >= PI {
            folded -= PI;
        }
        let sign = if (turns as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        Ok(ExtensionParams { alpha: folded, a0: sign * a0, a1: sign * a1, a3: sign * a3 })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn a0(&self) -> f64 {
        self.a0
    }
    pub fn a1(&self) -> f64 {
        self.a1
    }
    pub fn a3(&self) -> f64 {
        self.a3
    }

    /// Parameters of the equally mixed point interaction of strength `delta`
    /// (a0 = -cos alpha, a1 = sin alpha, a3 = 0 and
    /// cot alpha = -(delta + (m_l + m_r) v^3) / (2 v)). No sign check on `delta`.
    pub fn equally_mixed(delta: f64, junction: &Junction) -> Result<Self> {
        let v = junction.fermi_velocity()?;
        let cot = -(delta + (junction.left.mass() + junction.right.mass()) * v.powi(3)) / (2.0 * v);
        let alpha = 1.0_f64.atan2(cot);
        ExtensionParams::new(alpha, -alpha.cos(), alpha.sin(), 0.0)
    }

    pub fn unitary(&self) -> UnitaryMatrix {
        UnitaryMatrix::from_parametrization(self.alpha, self.a0, self.a1, 0.0, self.a3)
            .expect("sphere constraint checked at construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitaryMatrix(Mat2);

pub const UNITARY_TOL: f64 = 1e-12;

impl UnitaryMatrix {
    pub fn new(m: Mat2) -> Result<Self> {
        let deviation = m.adjoint().mul(&m).max_abs_diff(&Mat2::identity());
        if !(deviation <= UNITARY_TOL) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(UnitaryMatrix(m))
    }

    /// e^{i alpha} [[a0 - i a3, -a2 - i a1], [a2 - i a1, a0 + i a3]] with a on the 3-sphere.
    pub fn from_parametrization(alpha: f64, a0: f64, a1: f64, a2: f64, a3: f64) -> Result<Self> {
        let phase = C64::from_polar(1.0, alpha);
        let a = Mat2::new(
            C64::new(a0, -a3),
            C64::new(-a2, -a1),
            C64::new(a2, -a1),
            C64::new(a0, a3),
        );
        UnitaryMatrix::new(a.scale(phase))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.0.get(i, j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    EquallyMixed,
    InvertedMixed,
    PureScalar,
    PureVector,
}

impl Family {
    pub const ALL: [Family; 4] =
        [Family::EquallyMixed, Family::InvertedMixed, Family::PureScalar, Family::PureVector];

    pub fn name(&self) -> &'static str {
        match self {
            Family::EquallyMixed => "equally-mixed",
            Family::InvertedMixed => "inverted-mixed",
            Family::PureScalar => "pure-scalar",
            Family::PureVector => "pure-vector",
        }
    }

    /// +1 if the strength must be positive, -1 if negative.
    pub fn strength_sign(&self) -> f64 {
        match self {
            Family::EquallyMixed | Family::PureScalar => -1.0,
            Family::InvertedMixed | Family::PureVector => 1.0,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown family '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NamedExtension {
    family: Family,
    strength: f64,
}

impl NamedExtension {
    pub fn new(family: Family, strength: f64) -> Result<Self> {
        if !strength.is_finite() || strength * family.strength_sign() <= 0.0 {
            return Err(Error::StrengthSignError { family: family.name(), strength });
        }
        Ok(NamedExtension { family, strength })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EigenSign {
    PlusI,
    MinusI,
}

impl EigenSign {
    pub fn eigenvalue(&self) -> C64 {
        match self {
            EigenSign::PlusI => C64::new(0.0, 1.0),
            EigenSign::MinusI => C64::new(0.0, -1.0),
        }
    }
}

/// Two-component spinor value (psi_a, psi_b) at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinorSample {
    pub upper: C64,
    pub lower: C64,
}

impl SpinorSample {
    pub const ZERO: SpinorSample = SpinorSample { upper: C64::new(0.0, 0.0), lower: C64::new(0.0, 0.0) };

    pub fn norm_sqr(&self) -> f64 {
        self.upper.norm_sqr() + self.lower.norm_sqr()
    }

    pub fn as_array(&self) -> [C64; 2] {
        [self.upper, self.lower]
    }
}
