//! Plane-wave scattering above both gaps.
//!
//! Left incidence: the wave is (1, k_l) e^{i k x} + r (1, -k_l) e^{-i k x} for
//! x < 0 and t (1, k_r) e^{i k x} for x > 0, where k = sqrt((E - m v^2) / (E + m v^2))
//! is the spinor ratio of each medium. The matching condition phi(0+) = T phi(0-)
//! fixes (r, t).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{re, solve2, Mat2, C64, I};
use crate::matching::{matching_closed_form, named_matrix, MatchingMatrix};
use crate::model::{ExtensionParams, Family, Junction, Medium, NamedExtension};
use crate::roots::{bracket_roots, dedup_sorted, golden_min, linspace};

/// Relative distance kept from the band edge k = 0.
pub const EDGE_MARGIN: f64 = 1e-9;
/// Relative determinant below which the 2x2 scattering system counts as singular.
pub const SINGULAR_TOL: f64 = 1e-12;
/// Reflection modulus below which a refined candidate is reported as a resonance.
pub const RESONANCE_TOL: f64 = 1e-7;
/// Reflection modulus below which a whole grid counts as reflectionless.
pub const TRANSPARENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    FromLeft,
    FromRight,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringAmplitudes {
    pub r: C64,
    pub t: C64,
    pub direction: Direction,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WindowKind {
    Scattering,
    Bound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyWindow {
    pub emin: f64,
    pub emax: f64,
    pub kind: WindowKind,
}

impl EnergyWindow {
    pub fn scattering(junction: &Junction, emin: f64, emax: f64) -> Result<Self> {
        check_above_threshold(junction, emin)?;
        if !(emax > emin) || !emax.is_finite() {
            return Err(Error::InvalidArgument(format!("empty energy window ({emin}, {emax})")));
        }
        Ok(EnergyWindow { emin, emax, kind: WindowKind::Scattering })
    }

    /// The full open gap (-min gap, +min gap); `None` when it is empty.
    pub fn bound(junction: &Junction) -> Option<Self> {
        let g = junction.min_gap();
        (g > 0.0).then_some(EnergyWindow { emin: -g, emax: g, kind: WindowKind::Bound })
    }

    pub fn width(&self) -> f64 {
        self.emax - self.emin
    }

    pub fn contains(&self, e: f64) -> bool {
        e > self.emin && e < self.emax
    }
}

/// Lowest admissible scattering energy.
pub fn scattering_threshold(junction: &Junction) -> f64 {
    junction.max_gap() * (1.0 + EDGE_MARGIN)
}

pub(crate) fn check_above_threshold(junction: &Junction, energy: f64) -> Result<()> {
    let threshold = scattering_threshold(junction);
    if energy.is_finite() && energy > threshold && energy > 0.0 {
        Ok(())
    } else {
        Err(Error::BelowThreshold { energy, threshold })
    }
}

/// sqrt continued below zero as +i sqrt(-x).
pub(crate) fn branch_sqrt(x: f64) -> C64 {
    if x >= 0.0 {
        re(x.sqrt())
    } else {
        I * (-x).sqrt()
    }
}

fn spinor_ratio(medium: &Medium, energy: f64) -> f64 {
    let g = medium.gap();
    ((energy - g) / (energy + g)).sqrt()
}

/// Shared radicals of the closed-form amplitudes.
struct Radicals {
    minus_l: C64,
    plus_l: C64,
    minus_r: C64,
    plus_r: C64,
}

impl Radicals {
    fn new(junction: &Junction, energy: f64) -> Self {
        let (gl, gr) = (junction.left.gap(), junction.right.gap());
        Radicals {
            minus_l: branch_sqrt(energy - gl),
            plus_l: branch_sqrt(energy + gl),
            minus_r: branch_sqrt(energy - gr),
            plus_r: branch_sqrt(energy + gr),
        }
    }
}

/// Bracketed combinations of (alpha, a0, a3) that appear in N and D.
struct Couplings {
    left: f64,
    right: f64,
    sum: f64,
    cross: f64,
}

impl Couplings {
    fn new(ext: &ExtensionParams, junction: &Junction) -> Self {
        let (sin, cos) = ext.alpha().sin_cos();
        let (a0, a3) = (ext.a0(), ext.a3());
        let (gl, gr) = (junction.left.gap(), junction.right.gap());
        let sum = a0 + cos;
        Couplings {
            left: a3 + sin - gl * sum,
            right: a3 - sin + gr * sum,
            sum,
            cross: gl * gr * sum + a0 - cos + gl * (a3 - sin) - gr * (a3 + sin),
        }
    }
}

/// Reflection numerator N(E); r_l = N / D.
pub fn reflection_numerator(ext: &ExtensionParams, junction: &Junction, energy: f64) -> C64 {
    let k = Radicals::new(junction, energy);
    let c = Couplings::new(ext, junction);
    let (sl, sr) = (junction.left.deficiency_root(), junction.right.deficiency_root());
    -sr * k.minus_r * (k.plus_l * c.left + I * c.sum * sl * k.minus_l)
        - sl * k.minus_l * k.plus_r * c.right
        - I * k.plus_l * k.plus_r * c.cross
}

/// Pole denominator D(E). Radicals of negative arguments are continued as
/// +i sqrt(-x), so the same expression serves the bound-state window.
pub fn pole_denominator(ext: &ExtensionParams, junction: &Junction, energy: f64) -> C64 {
    let k = Radicals::new(junction, energy);
    let c = Couplings::new(ext, junction);
    let (sl, sr) = (junction.left.deficiency_root(), junction.right.deficiency_root());
    sr * k.minus_r * (k.plus_l * c.left - I * c.sum * sl * k.minus_l) - sl * k.minus_l * k.plus_r * c.right
        + I * k.plus_l * k.plus_r * c.cross
}

/// Transmission factor ((1 + m_l^2 v_l^4)(1 + m_r^2 v_r^4))^(1/4) sqrt((E - m_l v_l^2)(E + m_r v_r^2)).
pub fn transmission_factor(junction: &Junction, energy: f64) -> C64 {
    let k = Radicals::new(junction, energy);
    junction.left.quarter_root() * junction.right.quarter_root() * k.minus_l * k.plus_r
}

/// Left-incidence amplitudes from the closed-form N, D and transmission factor.
/// With a2 = 0 the amplitude prefactor is 2 sqrt(v_l / v_r) a1.
pub fn amplitudes_closed(ext: &ExtensionParams, junction: &Junction, energy: f64) -> Result<ScatteringAmplitudes> {
    check_above_threshold(junction, energy)?;
    let d = pole_denominator(ext, junction, energy);
    if d.norm() == 0.0 {
        return Err(Error::SingularSystem { energy });
    }
    let r = reflection_numerator(ext, junction, energy) / d;
    let vel = (junction.left.velocity() / junction.right.velocity()).sqrt();
    let t = 2.0 * vel * ext.a1() * transmission_factor(junction, energy) / d;
    Ok(ScatteringAmplitudes { r, t, direction: Direction::FromLeft, energy })
}

/// Amplitudes from a direct solve of the matching condition for either
/// incidence direction.
pub fn amplitudes_solve(
    matching: &MatchingMatrix,
    energy: f64,
    direction: Direction,
) -> Result<ScatteringAmplitudes> {
    let junction = matching.junction();
    check_above_threshold(junction, energy)?;
    let kl = re(spinor_ratio(&junction.left, energy));
    let kr = re(spinor_ratio(&junction.right, energy));
    let one = re(1.0);
    let t = matching.matrix();
    let (system, rhs) = match direction {
        // t (1, k_r) = T [(1, k_l) + r (1, -k_l)]
        Direction::FromLeft => {
            let reflected = t.apply([one, -kl]);
            let incident = t.apply([one, kl]);
            (Mat2::new(reflected[0], -one, reflected[1], -kr), [-incident[0], -incident[1]])
        }
        // (1, -k_r) + r (1, k_r) = T t (1, -k_l)
        Direction::FromRight => {
            let transmitted = t.apply([one, -kl]);
            (Mat2::new(one, -transmitted[0], kr, -transmitted[1]), [-one, kr])
        }
    };
    let [r, tt] = solve2(&system, rhs, SINGULAR_TOL).ok_or(Error::SingularSystem { energy })?;
    Ok(ScatteringAmplitudes { r, t: tt, direction, energy })
}

/// Determinant of the left-incidence system with continued wave ratios. Its
/// zeros are the poles of r_l and t_l; the right-incidence system has the
/// negated determinant.
pub fn scattering_determinant(matching: &MatchingMatrix, energy: f64, direction: Direction) -> C64 {
    let junction = matching.junction();
    let ratio = |m: &Medium| branch_sqrt(energy - m.gap()) / branch_sqrt(energy + m.gap());
    let (kl, kr) = (ratio(&junction.left), ratio(&junction.right));
    let t = matching.matrix();
    let one = re(1.0);
    let transmitted = t.apply([one, -kl]);
    match direction {
        Direction::FromLeft => -(transmitted[0] * kr - transmitted[1]),
        Direction::FromRight => transmitted[0] * kr - transmitted[1],
    }
}

/// Current-weighted transmission: |t|^2 times the outgoing/incoming current ratio.
pub fn flux_transmission(junction: &Junction, energy: f64, amps: &ScatteringAmplitudes) -> Result<f64> {
    check_above_threshold(junction, energy)?;
    let current_l = junction.left.velocity() * spinor_ratio(&junction.left, energy);
    let current_r = junction.right.velocity() * spinor_ratio(&junction.right, energy);
    let ratio = match amps.direction {
        Direction::FromLeft => current_r / current_l,
        Direction::FromRight => current_l / current_r,
    };
    Ok(amps.t.norm_sqr() * ratio)
}

/// Either a general a2 = 0 extension or one of the named families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Interaction {
    Extension(ExtensionParams),
    Named(NamedExtension),
}

impl Interaction {
    pub fn matching(&self, junction: &Junction) -> Result<MatchingMatrix> {
        match self {
            Interaction::Extension(ext) => matching_closed_form(ext, junction),
            Interaction::Named(named) => named_matrix(named, junction),
        }
    }

    /// Left-incidence amplitudes: closed form for extensions, direct solve for
    /// named families.
    pub fn amplitudes(&self, junction: &Junction, energy: f64) -> Result<ScatteringAmplitudes> {
        match self {
            Interaction::Extension(ext) => amplitudes_closed(ext, junction, energy),
            Interaction::Named(_) => amplitudes_solve(&self.matching(junction)?, energy, Direction::FromLeft),
        }
    }
}

/// Reflection numerator of a general matching matrix, scaled by
/// sqrt(E + m_l v_l^2) sqrt(E + m_r v_r^2) so it stays finite on the window.
fn matrix_reflection_numerator(matching: &MatchingMatrix, energy: f64) -> C64 {
    let j = matching.junction();
    let k = Radicals::new(j, energy);
    let t = matching.matrix();
    k.minus_r * k.plus_l * t.get(0, 0) + k.minus_r * k.minus_l * t.get(0, 1)
        - k.plus_l * k.plus_r * t.get(1, 0)
        - k.minus_l * k.plus_r * t.get(1, 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ReflectionZeros {
    /// Isolated energies with r = 0, ascending.
    Isolated(Vec<f64>),
    /// r vanishes on the whole window (free propagation).
    IdenticallyTransparent,
}

/// Transmission resonances (zeros of r) inside a scattering window.
///
/// Sign changes of Re N and of Im N on a uniform grid are refined by
/// bisection; a candidate is kept when |r| there is below [`RESONANCE_TOL`].
/// Grid minima of |r| without a sign change are refined by golden section.
pub fn find_reflection_zeros(
    interaction: &Interaction,
    junction: &Junction,
    window: &EnergyWindow,
    grid_n: usize,
) -> Result<ReflectionZeros> {
    if window.kind != WindowKind::Scattering {
        return Err(Error::InvalidArgument("reflection zeros need a scattering window".into()));
    }
    if grid_n < 2 {
        return Err(Error::InvalidArgument(format!("grid_n must be >= 2, got {grid_n}")));
    }
    check_above_threshold(junction, window.emin)?;
    let matching = interaction.matching(junction)?;
    let numerator = |e: f64| match interaction {
        Interaction::Extension(ext) => reflection_numerator(ext, junction, e),
        Interaction::Named(_) => matrix_reflection_numerator(&matching, e),
    };
    let reflection = |e: f64| interaction.amplitudes(junction, e).map(|a| a.r.norm()).unwrap_or(f64::INFINITY);

    let grid = linspace(window.emin, window.emax, grid_n);
    let moduli: Vec<f64> = grid.iter().map(|&e| reflection(e)).collect();
    if moduli.iter().all(|&m| m <= TRANSPARENT_TOL) {
        return Ok(ReflectionZeros::IdenticallyTransparent);
    }

    let mut candidates = bracket_roots(&|e| numerator(e).re, &grid, 1e-10);
    candidates.extend(bracket_roots(&|e| numerator(e).im, &grid, 1e-10));
    for i in 1..grid.len().saturating_sub(1) {
        if moduli[i] < 1e-4 && moduli[i] <= moduli[i - 1] && moduli[i] <= moduli[i + 1] {
            candidates.push(golden_min(reflection, grid[i - 1], grid[i + 1], 1e-12));
        }
    }
    let mut zeros: Vec<f64> =
        candidates.into_iter().filter(|&e| window.contains(e) || e == window.emin || e == window.emax)
            .filter(|&e| reflection(e) <= RESONANCE_TOL)
            .collect();
    dedup_sorted(&mut zeros, 1e-8 * window.width().max(1.0));
    Ok(ReflectionZeros::Isolated(zeros))
}

/// Band-edge energies +-m_l v_l^2 and +-m_r v_r^2 where a transmission amplitude
/// vanishes with the incoming wave number; deduplicated and ascending.
pub fn zero_momentum_resonances(junction: &Junction) -> Vec<f64> {
    let (gl, gr) = (junction.left.gap(), junction.right.gap());
    let mut edges: Vec<f64> = [-gl, gl, -gr, gr].into_iter().map(|e| if e == 0.0 { 0.0 } else { e }).collect();
    edges.sort_by(|a, b| a.total_cmp(b));
    edges.dedup();
    edges
}

/// Energy-dependent lower bound on the pure-vector transmission.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PureVectorBound {
    pub m_l: f64,
    pub m_r: f64,
    pub v: f64,
}

impl PureVectorBound {
    /// The closed-form bound
    /// 8 m_l^2 m_r^2 P / (4 m_l^2 m_r^2 P + E^2 (m_l^2 + m_r^2)^2) with
    /// P = sqrt((E^2 - m_l^2 v^4)(E^2 - m_r^2 v^4)).
    pub fn closed_form(&self, energy: f64) -> f64 {
        let (gl, gr) = (self.m_l * self.v * self.v, self.m_r * self.v * self.v);
        let p = (energy - gl).sqrt() * (energy + gl).sqrt() * (energy - gr).sqrt() * (energy + gr).sqrt();
        let mm = self.m_l * self.m_l * self.m_r * self.m_r;
        let ms = self.m_l * self.m_l + self.m_r * self.m_r;
        8.0 * mm * p / (4.0 * mm * p + energy * energy * ms * ms)
    }

    /// Infimum over all strengths of the current-weighted transmission at this
    /// energy: 4 k_l k_r / max((p k_r + k_l / p)^2, (1 + k_l k_r)^2) with p = m_r / m_l.
    /// Strictly positive above threshold, so transmission never vanishes.
    pub fn strength_infimum(&self, energy: f64) -> f64 {
        let ratio = |m: f64| {
            let g = m * self.v * self.v;
            ((energy - g) / (energy + g)).sqrt()
        };
        let (kl, kr) = (ratio(self.m_l), ratio(self.m_r));
        let p = self.m_r / self.m_l;
        let diag = p * kr + kl / p;
        let off = 1.0 + kl * kr;
        4.0 * kl * kr / (diag * diag).max(off * off)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HighEnergyTransmission {
    /// Limit of |t_l|^2 as E grows; the family confines for strong coupling.
    Asymptote(f64),
    /// No finite limit is claimed; transmission stays above a positive bound.
    LowerBound(PureVectorBound),
}

pub fn high_energy_transmission(named: &NamedExtension, junction: &Junction) -> Result<HighEnergyTransmission> {
    let v = junction.fermi_velocity()?;
    let (sl, sr) = (junction.left.deficiency_root(), junction.right.deficiency_root());
    let s = named.strength();
    let sum2 = (sl + sr) * (sl + sr);
    Ok(match named.family() {
        Family::EquallyMixed => HighEnergyTransmission::Asymptote(4.0 * v * v * sl * sr / (v * v * sum2 + s * s)),
        Family::InvertedMixed => {
            HighEnergyTransmission::Asymptote(4.0 * sl * sr / (sum2 + v * v * sl * sl * sr * sr * s * s))
        }
        Family::PureScalar => {
            let sech = 1.0 / (s / v).cosh();
            HighEnergyTransmission::Asymptote(4.0 * sl * sr / sum2 * sech * sech)
        }
        Family::PureVector => HighEnergyTransmission::LowerBound(PureVectorBound {
            m_l: junction.left.mass(),
            m_r: junction.right.mass(),
            v,
        }),
    })
}
