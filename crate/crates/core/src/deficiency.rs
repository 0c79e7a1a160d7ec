//! Normalized square-integrable solutions of H^dagger psi = +-i psi on each half-line.

use crate::linalg::{C64, I};
use crate::model::{EigenSign, Medium, Side, SpinorSample};

/// Value of the deficiency solution at the boundary limit (0+ for `Right`,
/// 0- for `Left`).
pub fn boundary_value(side: Side, sign: EigenSign, medium: &Medium) -> SpinorSample {
    let root = medium.deficiency_root();
    let gap = medium.gap();
    // [(1 + m^2 v^4) / v^2]^(1/4)
    let norm = (root / medium.velocity()).sqrt();
    let ratio = match sign {
        EigenSign::PlusI => I * root / (I + gap),
        EigenSign::MinusI => I * root / (C64::new(gap, -1.0)),
    };
    let lower = match side {
        Side::Right => ratio,
        Side::Left => -ratio,
    };
    SpinorSample { upper: C64::new(norm, 0.0), lower: lower * norm }
}

/// Deficiency spinor evaluated at `x`. Zero off its half-line; `x == 0` is
/// read as the one-sided limit on the supported side.
pub fn deficiency_spinor(side: Side, sign: EigenSign, medium: &Medium, x: f64) -> SpinorSample {
    let supported = match side {
        Side::Right => x >= 0.0,
        Side::Left => x <= 0.0,
    };
    if !supported {
        return SpinorSample::ZERO;
    }
    let at_edge = boundary_value(side, sign, medium);
    let decay = (-medium.decay_rate() * x.abs()).exp();
    SpinorSample { upper: at_edge.upper * decay, lower: at_edge.lower * decay }
}
