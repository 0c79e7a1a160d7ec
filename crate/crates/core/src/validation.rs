//! Numerical checks of the deficiency solutions and of the matching-matrix
//! determinant identities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::deficiency::deficiency_spinor;
use crate::error::{Error, Result};
use crate::linalg::{C64, I};
use crate::matching::{matching_closed_form, matching_from_unitary, MIN_COUPLING};
use crate::model::{EigenSign, ExtensionParams, Junction, Medium, Side, SpinorSample, UnitaryMatrix};

/// Decay lengths covered by the finite-difference grid.
pub const RESIDUAL_SPAN: f64 = 8.0;
/// Decay lengths covered by the normalization quadrature (tail below 1e-17).
pub const NORM_SPAN: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_pointwise_residual: f64,
    /// (x_min, x_max, number of intervals) of the finite-difference grid.
    pub grid: (f64, f64, usize),
    /// |integral of |psi|^2 over the half-line - 1|.
    pub norm_error: f64,
}

fn half_line(side: Side, span: f64) -> (f64, f64) {
    match side {
        Side::Right => (0.0, span),
        Side::Left => (-span, 0.0),
    }
}

fn sample_grid(side: Side, sign: EigenSign, medium: &Medium, span: f64, n: usize) -> (Vec<SpinorSample>, f64, f64) {
    let (lo, hi) = half_line(side, span);
    let h = (hi - lo) / n as f64;
    let samples = (0..=n)
        .map(|i| {
            let x = if i == n { hi } else { lo + h * i as f64 };
            deficiency_spinor(side, sign, medium, x)
        })
        .collect();
    (samples, lo, h)
}

/// Composite Simpson rule; `values.len()` must be odd.
fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len() - 1;
    let inner: f64 = values[1..n].iter().enumerate().map(|(k, v)| if k % 2 == 0 { 4.0 * v } else { 2.0 * v }).sum();
    h / 3.0 * (values[0] + values[n] + inner)
}

/// Apply H^dagger = -i v sigma_x d/dx + m v^2 sigma_z with central differences
/// at interior points of a grid spanning [`RESIDUAL_SPAN`] decay lengths and
/// report the largest |H^dagger psi -+ i psi|. The boundary points are skipped.
pub fn eigen_residual(side: Side, sign: EigenSign, medium: &Medium, grid_n: usize) -> Result<ResidualReport> {
    if grid_n < 64 {
        return Err(Error::InvalidArgument(format!("grid_n must be >= 64, got {grid_n}")));
    }
    let length = 1.0 / medium.decay_rate();
    let (psi, lo, h) = sample_grid(side, sign, medium, RESIDUAL_SPAN * length, grid_n);
    let (v, gap) = (medium.velocity(), medium.gap());
    let lambda = sign.eigenvalue();
    let mut worst: f64 = 0.0;
    for i in 1..grid_n {
        let da = (psi[i + 1].upper - psi[i - 1].upper) / (2.0 * h);
        let db = (psi[i + 1].lower - psi[i - 1].lower) / (2.0 * h);
        let ha = -I * v * db + gap * psi[i].upper;
        let hb = -I * v * da - gap * psi[i].lower;
        let ra: C64 = ha - lambda * psi[i].upper;
        let rb: C64 = hb - lambda * psi[i].lower;
        worst = worst.max((ra.norm_sqr() + rb.norm_sqr()).sqrt());
    }

    let quad_n = grid_n + grid_n % 2;
    let (wide, _, hq) = sample_grid(side, sign, medium, NORM_SPAN * length, quad_n);
    let density: Vec<f64> = wide.iter().map(SpinorSample::norm_sqr).collect();
    let norm_error = (simpson(&density, hq) - 1.0).abs();

    let (_, hi) = half_line(side, RESIDUAL_SPAN * length);
    Ok(ResidualReport { max_pointwise_residual: worst, grid: (lo, hi, grid_n), norm_error })
}

/// Residual ratios between successive grid doublings starting at `grid_n`.
/// A second-order scheme gives ratios near 4.
pub fn residual_ratios(side: Side, sign: EigenSign, medium: &Medium, grid_n: usize, doublings: usize) -> Result<Vec<f64>> {
    let mut residuals = Vec::with_capacity(doublings + 1);
    for k in 0..=doublings {
        residuals.push(eigen_residual(side, sign, medium, grid_n << k)?.max_pointwise_residual);
    }
    Ok(residuals.windows(2).map(|w| w[0] / w[1]).collect())
}

/// Counts square-integrable deficiency solutions for each eigenvalue sign by
/// checking that every decay exponent sqrt(1 + m^2 v^4) / v is positive.
pub fn deficiency_indices(junction: &Junction) -> (usize, usize) {
    let decays = |m: &Medium| {
        let k = m.decay_rate();
        k.is_finite() && k > 0.0
    };
    let count = |_: EigenSign| [junction.left, junction.right].iter().filter(|m| decays(m)).count();
    (count(EigenSign::PlusI), count(EigenSign::MinusI))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeterminantReport {
    pub samples: usize,
    pub seed: u64,
    /// Draws with U12 = 0 (decoupled half-lines), excluded from every check.
    pub degenerate: usize,
    /// max | |det T| v_r / v_l - 1 | for the deficiency-basis route (general U).
    pub max_route_det_deviation: f64,
    /// max | det T v_r / v_l - 1 | for the a2 = 0 closed form.
    pub max_closed_det_deviation: f64,
    /// max |Im det T| v_r / v_l for the a2 = 0 closed form.
    pub max_closed_det_imag: f64,
    /// max | det T v_r / v_l - 1 | a1^2 for the closed form. Entries of T grow
    /// like 1 / a1, so rounding alone leaves a forward error of order
    /// eps / a1^2; this backward measure stays near eps when T is right.
    pub max_closed_det_backward: f64,
    /// max | |U12| - |U21| |.
    pub max_offdiag_modulus_gap: f64,
    /// max entrywise |T_route - T_closed| / max(1, |T|) on the a2 = 0 slice.
    pub max_route_closed_gap: f64,
    /// max violation of current continuity over both routes.
    pub max_current_defect: f64,
}

fn unit_vector<const N: usize>(rng: &mut ChaCha8Rng) -> [f64; N] {
    loop {
        let mut v = [0.0; N];
        for x in v.iter_mut() {
            *x = rng.gen_range(-1.0..=1.0);
        }
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            let n = n2.sqrt();
            v.iter_mut().for_each(|x| *x /= n);
            return v;
        }
    }
}

/// A random junction with masses in [0, 3] and velocities in [0.2, 3].
pub fn random_junction(rng: &mut ChaCha8Rng) -> Junction {
    let mut medium = || Medium::new(rng.gen_range(0.0..3.0), rng.gen_range(0.2..3.0)).expect("ranges are valid");
    let left = medium();
    Junction::new(left, medium())
}

/// Uniform alpha in [0, pi) and (a0, a1, a3) uniform on the 2-sphere.
pub fn random_extension(rng: &mut ChaCha8Rng) -> ExtensionParams {
    let alpha = rng.gen_range(0.0..std::f64::consts::PI);
    let [a0, a1, a3] = unit_vector::<3>(rng);
    ExtensionParams::new(alpha, a0, a1, a3).expect("unit vector")
}

/// Generator for sample `index` of a seeded run; independent of evaluation order.
pub fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

#[derive(Default, Clone, Copy)]
struct SampleOutcome {
    degenerate: bool,
    route_det: f64,
    closed_det: f64,
    closed_imag: f64,
    closed_backward: f64,
    offdiag: f64,
    route_closed: f64,
    current: f64,
}

fn audit_one(seed: u64, index: usize) -> SampleOutcome {
    let mut rng = sample_rng(seed, index);
    let alpha = rng.gen_range(0.0..std::f64::consts::PI);
    let [a0, a1, a2, a3] = unit_vector::<4>(&mut rng);
    let junction = random_junction(&mut rng);
    let ratio = junction.left.velocity() / junction.right.velocity();
    let degenerate = SampleOutcome { degenerate: true, ..Default::default() };

    let u = UnitaryMatrix::from_parametrization(alpha, a0, a1, a2, a3).expect("unit vector");
    if u.entry(0, 1).norm() < MIN_COUPLING {
        return degenerate;
    }
    let Ok(route) = matching_from_unitary(&u, &junction) else {
        return degenerate;
    };

    // the same point projected onto the a2 = 0 slice
    let scale = (a0 * a0 + a1 * a1 + a3 * a3).sqrt();
    let ext = ExtensionParams::new(alpha, a0 / scale, a1 / scale, a3 / scale).expect("unit vector");
    let (Ok(closed), Ok(slice_route)) = (matching_closed_form(&ext, &junction), matching_from_unitary(&ext.unitary(), &junction)) else {
        return degenerate;
    };
    let det = closed.det();
    let closed_det = (det / ratio - 1.0).norm();
    let size = closed.matrix().0.iter().flatten().fold(1.0_f64, |m, z| m.max(z.norm()));
    SampleOutcome {
        degenerate: false,
        route_det: (route.det().norm() / ratio - 1.0).abs(),
        closed_det,
        closed_backward: closed_det * ext.a1() * ext.a1(),
        closed_imag: det.im.abs() / ratio,
        offdiag: (u.entry(0, 1).norm() - u.entry(1, 0).norm()).abs(),
        route_closed: slice_route.matrix().max_abs_diff(closed.matrix()) / size,
        current: route.current_defect().max(closed.current_defect()) / size.powi(2),
    }
}

/// Random unitaries and junctions checked against the determinant identities
/// |det T| = v_l / v_r (any U) and det T = v_l / v_r (a2 = 0), the modulus
/// relation |U12| = |U21|, and agreement of the two construction routes.
/// Deterministic for a given seed.
pub fn determinant_audit(samples: usize, seed: u64) -> Result<DeterminantReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("determinant audit needs at least one sample".into()));
    }
    let outcomes: Vec<SampleOutcome> = (0..samples).into_par_iter().map(|i| audit_one(seed, i)).collect();
    let mut report = DeterminantReport {
        samples,
        seed,
        degenerate: 0,
        max_route_det_deviation: 0.0,
        max_closed_det_deviation: 0.0,
        max_closed_det_imag: 0.0,
        max_closed_det_backward: 0.0,
        max_offdiag_modulus_gap: 0.0,
        max_route_closed_gap: 0.0,
        max_current_defect: 0.0,
    };
    for o in outcomes {
        if o.degenerate {
            report.degenerate += 1;
            continue;
        }
        report.max_route_det_deviation = report.max_route_det_deviation.max(o.route_det);
        report.max_closed_det_deviation = report.max_closed_det_deviation.max(o.closed_det);
        report.max_closed_det_imag = report.max_closed_det_imag.max(o.closed_imag);
        report.max_closed_det_backward = report.max_closed_det_backward.max(o.closed_backward);
        report.max_offdiag_modulus_gap = report.max_offdiag_modulus_gap.max(o.offdiag);
        report.max_route_closed_gap = report.max_route_closed_gap.max(o.route_closed);
        report.max_current_defect = report.max_current_defect.max(o.current);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_for_cubics() {
        let h = 0.25;
        let values: Vec<f64> = (0..=8).map(|i| (i as f64 * h).powi(3)).collect();
        assert!((simpson(&values, h) - 16.0f64 / 4.0).abs() < 1e-14);
    }

    #[test]
    fn residual_small_on_fine_grid() {
        let m = Medium::new(1.0, 1.0).unwrap();
        let report = eigen_residual(Side::Right, EigenSign::PlusI, &m, 1024).unwrap();
        assert!(report.max_pointwise_residual <= 1e-4, "{report:?}");
    }

    #[test]
    fn indices_are_two_two() {
        for (ml, mr, v) in [(1.0, 2.0, 1.0), (0.0, 0.0, 1.0), (1e3, 1e3, 1e-2)] {
            let j = Junction::with_fermi_velocity(ml, mr, v).unwrap();
            assert_eq!(deficiency_indices(&j), (2, 2));
        }
    }

    #[test]
    fn audit_is_deterministic() {
        let a = determinant_audit(64, 7).unwrap();
        let b = determinant_audit(64, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, determinant_audit(64, 8).unwrap());
    }

    #[test]
    fn rejects_small_grids() {
        let m = Medium::new(1.0, 1.0).unwrap();
        assert!(eigen_residual(Side::Left, EigenSign::MinusI, &m, 32).is_err());
        assert!(determinant_audit(0, 1).is_err());
    }
}
