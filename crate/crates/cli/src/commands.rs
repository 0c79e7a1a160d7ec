//! One function per subcommand; each produces a table.

use dirac_jump::matching::named_matrix;
use dirac_jump::roots::linspace;
use dirac_jump::scattering::amplitudes_solve;
use dirac_jump::spectral::{find_general_bound_states, DEFAULT_GRID};
use dirac_jump::validation::residual_ratios;
use dirac_jump::{
    amplitudes_closed, deficiency_indices, determinant_audit, eigen_residual, find_bound_states,
    find_reflection_zeros, flux_transmission, matching_closed_form, sweep_strength, zero_momentum_resonances,
    BoundState, Direction, EigenSign, EnergyWindow, Family, Interaction, Junction, Medium, ReflectionZeros,
    ScatteringAmplitudes, Side,
};

use crate::config::{CliError, CliResult, Selector};
use crate::table::{Cell, Table};

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn energy_grid(emin: f64, emax: f64, n: usize) -> CliResult<Vec<f64>> {
    if n < 2 {
        return Err(config_err(format!("--n must be at least 2, got {n}")));
    }
    Ok(linspace(emin, emax, n))
}

fn amplitudes(selector: &Selector, junction: &Junction, energy: f64, direction: Direction) -> CliResult<ScatteringAmplitudes> {
    Ok(match (selector, direction) {
        (Selector::Extension(ext), Direction::FromLeft) => amplitudes_closed(ext, junction, energy)?,
        (Selector::Extension(ext), _) => amplitudes_solve(&matching_closed_form(ext, junction)?, energy, direction)?,
        (Selector::Named(named), _) => amplitudes_solve(&named_matrix(named, junction)?, energy, direction)?,
    })
}

fn interaction(selector: &Selector) -> Interaction {
    match selector {
        Selector::Named(n) => Interaction::Named(*n),
        Selector::Extension(e) => Interaction::Extension(*e),
    }
}

pub fn scatter(
    selector: &Selector,
    junction: &Junction,
    (emin, emax, n): (f64, f64, usize),
    direction: Direction,
) -> CliResult<Table> {
    EnergyWindow::scattering(junction, emin, emax)?;
    let mut table = Table::new(["energy", "re_r", "im_r", "abs_r2", "re_t", "im_t", "t_flux", "unitarity_defect"]);
    for e in energy_grid(emin, emax, n)? {
        let a = amplitudes(selector, junction, e, direction)?;
        let flux = flux_transmission(junction, e, &a)?;
        let r2 = a.r.norm_sqr();
        if !(r2.is_finite() && flux.is_finite()) {
            return Err(CliError::Numerical(format!("non-finite amplitudes at E = {e}")));
        }
        table.push(
            [e, a.r.re, a.r.im, r2, a.t.re, a.t.im, flux, (r2 + flux - 1.0).abs()].into_iter().map(Cell::Num).collect(),
        );
    }
    Ok(table)
}

pub fn bound(selector: &Selector, junction: &Junction, grid_n: usize) -> CliResult<Table> {
    let states: Vec<BoundState> = match selector {
        Selector::Named(named) => find_bound_states(named, junction, grid_n)?,
        Selector::Extension(ext) => find_general_bound_states(ext, junction, grid_n)?,
    };
    let mut table = Table::new(["energy", "residual"]);
    for s in states {
        table.push(vec![Cell::Num(s.energy), Cell::Num(s.residual)]);
    }
    Ok(table)
}

pub fn sweep(
    family: Family,
    junction: &Junction,
    range: (f64, f64),
    n: usize,
    comparison_mass: Option<f64>,
) -> CliResult<Table> {
    let table = sweep_strength(family, junction, range, n, comparison_mass, DEFAULT_GRID)?;
    let roots = table.energies.iter().map(Vec::len).max().unwrap_or(0);
    let closed = table.equal_mass.iter().map(Vec::len).max().unwrap_or(0);
    let mut columns = vec!["strength".to_string()];
    columns.extend((1..=roots).map(|k| format!("root_{k}")));
    columns.extend((1..=closed).map(|k| format!("equal_mass_{k}")));
    let mut out = Table::new(columns);
    let padded = |values: &[f64], width: usize| -> Vec<Cell> {
        (0..width).map(|k| values.get(k).map_or(Cell::Empty, |&x| Cell::Num(x))).collect()
    };
    for ((s, e), c) in table.strengths.iter().zip(&table.energies).zip(&table.equal_mass) {
        let mut row = vec![Cell::Num(*s)];
        row.extend(padded(e, roots));
        row.extend(padded(c, closed));
        out.push(row);
    }
    Ok(out)
}

pub fn resonances(selector: &Selector, junction: &Junction, (emin, emax, n): (f64, f64, usize)) -> CliResult<Table> {
    let window = EnergyWindow::scattering(junction, emin, emax)?;
    if n < 2 {
        return Err(config_err(format!("--n must be at least 2, got {n}")));
    }
    let interaction = interaction(selector);
    let mut table = Table::new(["kind", "energy", "abs_r"]);
    match find_reflection_zeros(&interaction, junction, &window, n)? {
        ReflectionZeros::IdenticallyTransparent => table.push(vec!["identically-transparent".into(), Cell::Empty, Cell::Empty]),
        ReflectionZeros::Isolated(zeros) => {
            for e in zeros {
                let r = amplitudes(selector, junction, e, Direction::FromLeft)?.r.norm();
                table.push(vec!["reflectionless".into(), Cell::Num(e), Cell::Num(r)]);
            }
        }
    }
    for e in zero_momentum_resonances(junction) {
        table.push(vec!["zero-momentum".into(), Cell::Num(e), Cell::Empty]);
    }
    Ok(table)
}

/// Thresholds used by `validate`. Every one is replaced by the override when given.
struct Tolerances {
    residual: f64,
    order: f64,
    norm: f64,
    indices: f64,
    det_modulus: f64,
    det_backward: f64,
    offdiag: f64,
    route_gap: f64,
    current: f64,
}

impl Tolerances {
    fn new(override_all: Option<f64>) -> Self {
        let t = |x: f64| override_all.unwrap_or(x);
        Tolerances {
            residual: t(1e-4),
            order: t(0.5),
            norm: t(1e-8),
            indices: t(0.0),
            det_modulus: t(1e-10),
            det_backward: t(1e-11),
            offdiag: t(1e-12),
            route_gap: t(1e-8),
            current: t(1e-12),
        }
    }
}

/// Runs every check and returns the report plus the names of failed checks.
pub fn validate(junction: &Junction, samples: usize, seed: u64, tolerance_override: Option<f64>) -> CliResult<(Table, Vec<String>)> {
    let tol = Tolerances::new(tolerance_override);
    let mut table = Table::new(["check", "value", "tolerance", "status"]);
    let mut failed = Vec::new();
    let mut record = |name: String, value: f64, tolerance: f64| {
        let ok = value <= tolerance;
        if !ok {
            failed.push(name.clone());
        }
        table.push(vec![Cell::Text(name), Cell::Num(value), Cell::Num(tolerance), if ok { "pass" } else { "fail" }.into()]);
    };

    let media: [(Side, &Medium); 2] = [(Side::Left, &junction.left), (Side::Right, &junction.right)];
    for (side, medium) in media {
        // the leading finite-difference error grows like v kappa^(3/2); unit scale at m = v = 1
        let scale = (medium.velocity() * medium.decay_rate().powf(1.5) / 2f64.powf(0.75)).max(1.0);
        for sign in [EigenSign::PlusI, EigenSign::MinusI] {
            let tag = format!(
                "{}_{}",
                match side {
                    Side::Left => "left",
                    Side::Right => "right",
                },
                match sign {
                    EigenSign::PlusI => "plus_i",
                    EigenSign::MinusI => "minus_i",
                }
            );
            let coarse = eigen_residual(side, sign, medium, 1024)?;
            record(format!("eigen_residual_{tag}_n1024"), coarse.max_pointwise_residual / scale, tol.residual);
            let ratio = residual_ratios(side, sign, medium, 1024, 1)?[0];
            record(format!("order_ratio_minus_4_{tag}"), (ratio - 4.0).abs(), tol.order);
            let fine = eigen_residual(side, sign, medium, 4096)?;
            record(format!("norm_error_{tag}_n4096"), fine.norm_error, tol.norm);
        }
    }
    let (plus, minus) = deficiency_indices(junction);
    record("deficiency_indices_minus_2_2".into(), (plus.abs_diff(2) + minus.abs_diff(2)) as f64, tol.indices);

    let audit = determinant_audit(samples, seed)?;
    record("det_modulus_route".into(), audit.max_route_det_deviation, tol.det_modulus);
    record("det_closed_form_backward".into(), audit.max_closed_det_backward, tol.det_backward);
    record("offdiag_modulus_gap".into(), audit.max_offdiag_modulus_gap, tol.offdiag);
    record("route_vs_closed_form".into(), audit.max_route_closed_gap, tol.route_gap);
    record("current_conservation".into(), audit.max_current_defect, tol.current);
    Ok((table, failed))
}
