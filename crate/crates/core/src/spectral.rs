//! Bound states inside the gap (-min(m v^2), +min(m v^2)).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::matching::named_matrix;
use crate::model::{ExtensionParams, Family, Junction, NamedExtension};
use crate::roots::{bisect, bracket_roots, dedup_sorted, golden_min, linspace};
use crate::scattering::{pole_denominator, EnergyWindow};

pub const DEFAULT_GRID: usize = 512;
/// Relative width of the window edges excluded from the search.
pub const EDGE_FRACTION: f64 = 1e-12;
/// Residual (relative to the largest term) below which a sign-preserving dip
/// is taken as a tangent root.
pub const TANGENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundSource {
    Named(NamedExtension),
    Extension(ExtensionParams),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub energy: f64,
    pub source: BoundSource,
    /// |spectral equation| at `energy`.
    pub residual: f64,
}

fn require_window(junction: &Junction, energy: f64) -> Result<EnergyWindow> {
    let outside = |emin, emax| Error::OutsideWindow { energy, emin, emax };
    let window = EnergyWindow::bound(junction).ok_or(outside(0.0, 0.0))?;
    if window.contains(energy) {
        Ok(window)
    } else {
        Err(outside(window.emin, window.emax))
    }
}

/// The additive terms of a family's spectral equation; the equation is
/// `terms.iter().sum() == 0`. Unused slots are zero.
pub fn spectral_terms(named: &NamedExtension, junction: &Junction, energy: f64) -> Result<[f64; 4]> {
    let v = junction.fermi_velocity()?;
    require_window(junction, energy)?;
    Ok(terms_unchecked(named, junction, v, energy))
}

fn terms_unchecked(named: &NamedExtension, junction: &Junction, v: f64, e: f64) -> [f64; 4] {
    let (ml, mr) = (junction.left.mass(), junction.right.mass());
    let (gl, gr) = (ml * v * v, mr * v * v);
    // 1 + m^2 v^4 on each side
    let (dl, dr) = (1.0 + gl * gl, 1.0 + gr * gr);
    let s = named.strength();
    match named.family() {
        Family::EquallyMixed => [
            s / v * ((e + gl) * (e + gr)).sqrt(),
            (dl * (gl - e) * (e + gr)).sqrt(),
            (dr * (e + gl) * (gr - e)).sqrt(),
            0.0,
        ],
        Family::InvertedMixed => [
            (dl * (gl - e) * (e + gr)).sqrt(),
            (dr * (e + gl) * (gr - e)).sqrt(),
            -v * s * (gr - e).sqrt() * (gl - e).sqrt() * (dl * dr).sqrt(),
            0.0,
        ],
        Family::PureScalar => {
            let quarter = dl.powf(0.25) * dr.powf(0.25);
            let (sh, ch) = ((s / v).sinh(), (s / v).cosh());
            [
                quarter * (gl - e).sqrt() * (gr - e).sqrt() * sh,
                quarter * (e + gl).sqrt() * (e + gr).sqrt() * sh,
                dl.sqrt() * ((gl - e) * (e + gr)).sqrt() * ch,
                dr.sqrt() * ((e + gl) * (gr - e)).sqrt() * ch,
            ]
        }
        Family::PureVector => {
            let (sn, cs) = (s / v).sin_cos();
            [
                ml * ml * (gr + e).sqrt() * (gl - e).sqrt() * cs,
                mr * mr * (gl + e).sqrt() * (gr - e).sqrt() * cs,
                mr * ml * (gr + e).sqrt() * (gl + e).sqrt() * sn,
                -mr * ml * (gl - e).sqrt() * (gr - e).sqrt() * sn,
            ]
        }
    }
}

/// Left-hand side of the family's spectral equation at `energy`.
pub fn spectral_residual(named: &NamedExtension, junction: &Junction, energy: f64) -> Result<f64> {
    Ok(spectral_terms(named, junction, energy)?.iter().sum())
}

fn scale_of(terms: &[f64; 4]) -> f64 {
    terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()))
}

/// Sign changes on the clamped grid refined by bisection, plus tangent roots
/// found from grid minima of |f| that stay below `TANGENT_TOL * scale`.
fn grid_roots<F, S>(f: F, scale: S, window: &EnergyWindow, grid_n: usize) -> Vec<f64>
where
    F: Fn(f64) -> f64,
    S: Fn(f64) -> f64,
{
    let eps = EDGE_FRACTION * window.width();
    let grid = linspace(window.emin + eps, window.emax - eps, grid_n);
    let mut roots = bracket_roots(&f, &grid, 0.0);

    let values: Vec<f64> = grid.iter().map(|&e| f(e)).collect();
    for i in 1..grid.len().saturating_sub(1) {
        let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
        let same_sign = (a < 0.0) == (b < 0.0) && (b < 0.0) == (c < 0.0);
        if same_sign && b.abs() <= a.abs() && b.abs() <= c.abs() && b.abs() <= TANGENT_TOL * scale(grid[i]) {
            let e = golden_min(|x| f(x).abs(), grid[i - 1], grid[i + 1], 0.0);
            if f(e).abs() <= TANGENT_TOL * scale(e) {
                roots.push(e);
            }
        }
    }
    dedup_sorted(&mut roots, 1e-10 * window.width());
    roots
}

/// All bound states of a named family, ascending in energy. Empty when the
/// gap window is empty (a massless side).
pub fn find_bound_states(named: &NamedExtension, junction: &Junction, grid_n: usize) -> Result<Vec<BoundState>> {
    if grid_n < 16 {
        return Err(Error::InvalidArgument(format!("grid_n must be >= 16, got {grid_n}")));
    }
    let v = junction.fermi_velocity()?;
    let Some(window) = EnergyWindow::bound(junction) else {
        return Ok(Vec::new());
    };
    let f = |e: f64| terms_unchecked(named, junction, v, e).iter().sum::<f64>();
    let scale = |e: f64| scale_of(&terms_unchecked(named, junction, v, e));
    Ok(grid_roots(f, scale, &window, grid_n)
        .into_iter()
        .map(|energy| BoundState { energy, source: BoundSource::Named(*named), residual: f(energy).abs() })
        .collect())
}

/// Closed-form bound-state energies for equal masses m on both sides.
///
/// For the pure vector family the squared relation gives +-m v^2 cos(a / v);
/// only the sign satisfying sqrt(m^2 v^4 - E^2) cos(a/v) + E sin(a/v) = 0 is
/// returned (both when cos(a/v) = 0).
pub fn equal_mass_energy(named: &NamedExtension, m: f64, v: f64) -> Result<Vec<f64>> {
    if !(m > 0.0) || !(v > 0.0) || !m.is_finite() || !v.is_finite() {
        return Err(Error::InvalidArgument(format!("equal-mass closed forms need m > 0 and v > 0, got m = {m}, v = {v}")));
    }
    let named = NamedExtension::new(named.family(), named.strength())?;
    let gap = m * v * v;
    let root = gap.hypot(1.0);
    let s = named.strength();
    let mut energies = match named.family() {
        Family::EquallyMixed => {
            let reduced = s / (v * root);
            let r2 = reduced * reduced;
            vec![gap * (4.0 - r2) / (4.0 + r2)]
        }
        Family::InvertedMixed => {
            let reduced = v * root * s;
            let r2 = reduced * reduced;
            vec![-gap * (4.0 - r2) / (4.0 + r2)]
        }
        Family::PureScalar => {
            let e = gap / (s / v).cosh();
            vec![-e, e]
        }
        Family::PureVector => {
            let (sn, cs) = (s / v).sin_cos();
            let e = gap * cs;
            [-e, e]
                .into_iter()
                .filter(|&x| ((gap * gap - x * x).max(0.0).sqrt() * cs + x * sn).abs() <= 1e-9 * gap)
                .collect()
        }
    };
    energies.sort_by(|a, b| a.total_cmp(b));
    Ok(energies)
}

/// The pole denominator D(E) continued into the gap.
pub fn general_bound_residual(ext: &ExtensionParams, junction: &Junction, energy: f64) -> Result<C64> {
    require_window(junction, energy)?;
    Ok(pole_denominator(ext, junction, energy))
}

/// Bound states of a general a2 = 0 extension: zeros of D(E) in the gap.
/// Inside the gap D is i times a real function, which is what gets bracketed.
pub fn find_general_bound_states(ext: &ExtensionParams, junction: &Junction, grid_n: usize) -> Result<Vec<BoundState>> {
    if grid_n < 16 {
        return Err(Error::InvalidArgument(format!("grid_n must be >= 16, got {grid_n}")));
    }
    let Some(window) = EnergyWindow::bound(junction) else {
        return Ok(Vec::new());
    };
    let f = |e: f64| pole_denominator(ext, junction, e).im;
    let (sl, sr) = (junction.left.deficiency_root(), junction.right.deficiency_root());
    let scale = |e: f64| {
        let gl = junction.left.gap().abs();
        let gr = junction.right.gap().abs();
        sl * sr * (e.abs() + gl.max(gr)) * (1.0 + gl * gr)
    };
    Ok(grid_roots(f, scale, &window, grid_n)
        .into_iter()
        .map(|energy| BoundState { energy, source: BoundSource::Extension(*ext), residual: f(energy).abs() })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub family: Family,
    pub strengths: Vec<f64>,
    /// All bound-state energies per strength (mass jump).
    pub energies: Vec<Vec<f64>>,
    /// Equal-mass closed-form energies per strength at `comparison_mass`.
    pub equal_mass: Vec<Vec<f64>>,
    pub comparison_mass: f64,
}

/// Bound-state energies over `n` strengths from `lo` to `hi` inclusive. The
/// comparison curve uses `comparison_mass`, defaulting to m_l. Strengths are
/// evaluated in parallel; the table is identical to a sequential run.
pub fn sweep_strength(
    family: Family,
    junction: &Junction,
    (lo, hi): (f64, f64),
    n: usize,
    comparison_mass: Option<f64>,
    grid_n: usize,
) -> Result<SweepTable> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("sweep needs n >= 2, got {n}")));
    }
    let v = junction.fermi_velocity()?;
    let comparison_mass = comparison_mass.unwrap_or(junction.left.mass());
    let strengths = linspace(lo, hi, n);
    let rows: Vec<(Vec<f64>, Vec<f64>)> = strengths
        .par_iter()
        .map(|&s| -> Result<(Vec<f64>, Vec<f64>)> {
            let named = NamedExtension::new(family, s)?;
            let roots = find_bound_states(&named, junction, grid_n)?.into_iter().map(|b| b.energy).collect();
            let closed = if comparison_mass > 0.0 { equal_mass_energy(&named, comparison_mass, v)? } else { Vec::new() };
            Ok((roots, closed))
        })
        .collect::<Result<_>>()?;
    let (energies, equal_mass) = rows.into_iter().unzip();
    Ok(SweepTable { family, strengths, energies, equal_mass, comparison_mass })
}

/// Strengths at which the mass-jump bound-state curve meets the equal-mass
/// curve. Branches are paired by index where both curves have the same number
/// of roots; each crossing is refined by bisection on the strength.
pub fn equal_mass_crossings(
    family: Family,
    junction: &Junction,
    comparison_mass: Option<f64>,
    range: (f64, f64),
    n: usize,
) -> Result<Vec<f64>> {
    let table = sweep_strength(family, junction, range, n, comparison_mass, DEFAULT_GRID)?;
    let v = junction.fermi_velocity()?;
    let mass = table.comparison_mass;
    let gap = |s: f64, branch: usize| -> f64 {
        let Ok(named) = NamedExtension::new(family, s) else { return f64::NAN };
        let roots = find_bound_states(&named, junction, DEFAULT_GRID).unwrap_or_default();
        let closed = equal_mass_energy(&named, mass, v).unwrap_or_default();
        if roots.len() == closed.len() && branch < roots.len() {
            roots[branch].energy - closed[branch]
        } else {
            f64::NAN
        }
    };
    let mut crossings = Vec::new();
    for i in 0..n - 1 {
        let (ra, ca) = (&table.energies[i], &table.equal_mass[i]);
        let (rb, cb) = (&table.energies[i + 1], &table.equal_mass[i + 1]);
        if ra.len() != ca.len() || rb.len() != cb.len() || ra.len() != rb.len() {
            continue;
        }
        for branch in 0..ra.len() {
            let (da, db) = (ra[branch] - ca[branch], rb[branch] - cb[branch]);
            if da == 0.0 {
                crossings.push(table.strengths[i]);
            } else if (da < 0.0) != (db < 0.0) && db != 0.0 {
                let (lo, hi) = (table.strengths[i], table.strengths[i + 1]);
                crossings.push(bisect(|s| gap(s, branch), lo, hi, 1e-12));
            }
        }
    }
    dedup_sorted(&mut crossings, 1e-9);
    Ok(crossings)
}

/// Check the spectrum against the named matching matrix: the continued
/// scattering determinant must vanish at every returned energy.
pub fn pole_check(named: &NamedExtension, junction: &Junction, energy: f64) -> Result<C64> {
    let t = named_matrix(named, junction)?;
    Ok(crate::scattering::scattering_determinant(&t, energy, crate::scattering::Direction::FromLeft))
}
