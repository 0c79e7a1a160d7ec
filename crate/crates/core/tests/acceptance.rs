//! Acceptance gate. Runs every criterion at its stated tolerance and runtime
//! budget, prints one PASS/FAIL line each, and exits non-zero if any fails.

use dirac_jump::matching::{matching_closed_form, named_matrix};
use dirac_jump::roots::linspace;
use dirac_jump::scattering::{amplitudes_solve, scattering_threshold};
use dirac_jump::spectral::{equal_mass_crossings, DEFAULT_GRID};
use dirac_jump::validation::{random_extension, random_junction, residual_ratios, sample_rng};
use dirac_jump::{
    amplitudes_closed, deficiency_indices, determinant_audit, eigen_residual, equal_mass_energy, find_bound_states,
    find_reflection_zeros, flux_transmission, high_energy_transmission, spectral_residual, zero_momentum_resonances,
    Direction, EigenSign, EnergyWindow, ExtensionParams, Family, HighEnergyTransmission, Interaction, Junction,
    Medium, NamedExtension, ReflectionZeros, Side,
};
use rand::Rng;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

const SEED: u64 = 0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn j12() -> Junction {
    Junction::with_fermi_velocity(1.0, 2.0, 1.0).unwrap()
}

fn named(family: Family, strength: f64) -> NamedExtension {
    NamedExtension::new(family, strength).unwrap()
}

fn roots(named: &NamedExtension, junction: &Junction) -> Vec<f64> {
    find_bound_states(named, junction, DEFAULT_GRID).unwrap().into_iter().map(|b| b.energy).collect()
}

/// Scattering energy just past threshold up to ~10x threshold, log-uniform.
fn draw_energy(rng: &mut impl Rng, junction: &Junction) -> f64 {
    let u: f64 = rng.gen_range(-6.0..1.0);
    scattering_threshold(junction).max(1e-3) * (1.0 + 10f64.powf(u))
}

fn draw_scattering(index: usize) -> (ExtensionParams, Junction, f64) {
    let mut rng = sample_rng(SEED ^ 0x5ca7, index);
    let ext = random_extension(&mut rng);
    let junction = random_junction(&mut rng);
    let e = draw_energy(&mut rng, &junction);
    (ext, junction, e)
}

fn c1() -> Outcome {
    let r = determinant_audit(1000, SEED).unwrap();
    let route = r.max_route_det_deviation <= 1e-10;
    let closed = r.max_closed_det_deviation <= 1e-10 && r.max_closed_det_imag <= 1e-10;
    outcome(
        route && closed,
        format!(
            "any U: max ||det|v_r/v_l - 1| = {:.2e}; a2 = 0 closed form: max |det v_r/v_l - 1| = {:.2e}, max |Im det| v_r/v_l = {:.2e}; |U12|-|U21| = {:.1e}, {} degenerate",
            r.max_route_det_deviation, r.max_closed_det_deviation, r.max_closed_det_imag, r.max_offdiag_modulus_gap, r.degenerate
        ),
    )
}

fn c2() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let (ext, j, e) = draw_scattering(i);
        let amps = amplitudes_closed(&ext, &j, e).unwrap();
        let flux = flux_transmission(&j, e, &amps).unwrap();
        worst = worst.max((amps.r.norm_sqr() + flux - 1.0).abs());
    }
    outcome(worst <= 1e-10, format!("max ||r|^2 + T_flux - 1| = {worst:.2e} over 1000 draws"))
}

fn c3() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let (ext, j, e) = draw_scattering(i);
        let closed = amplitudes_closed(&ext, &j, e).unwrap();
        let solved = amplitudes_solve(&matching_closed_form(&ext, &j).unwrap(), e, Direction::FromLeft).unwrap();
        worst = worst.max((closed.r - solved.r).norm()).max((closed.t - solved.t).norm());
    }
    outcome(worst <= 1e-8, format!("max closed vs solve gap = {worst:.2e} over 1000 draws"))
}

fn c4() -> Outcome {
    let mut worst = 0.0f64;
    for j in [j12(), Junction::with_fermi_velocity(0.5, 3.0, 0.8).unwrap()] {
        for delta in linspace(-10.0, -0.01, 100) {
            let ext = ExtensionParams::equally_mixed(delta, &j).unwrap();
            let closed = matching_closed_form(&ext, &j).unwrap();
            let named = named_matrix(&named(Family::EquallyMixed, delta), &j).unwrap();
            worst = worst.max(closed.matrix().max_abs_diff(named.matrix()));
        }
    }
    outcome(worst <= 1e-10, format!("max entrywise gap = {worst:.2e} over 100 strengths on two junctions"))
}

fn c5() -> Outcome {
    let cases: [(Family, &[f64]); 4] = [
        (Family::EquallyMixed, &[-0.5, -1.0, -2.0 * 2f64.sqrt(), -5.0]),
        (Family::InvertedMixed, &[0.2, 0.5, 1.0, 2.0]),
        (Family::PureScalar, &[-0.5, -1.0, -2.0]),
        (Family::PureVector, &[0.5, 1.0, 2.0, 2.5]),
    ];
    let (m, v) = (1.0, 1.0);
    let gap = m * v * v;
    let mut worst_near = 0.0f64;
    let mut worst_exact = 0.0f64;
    let mut count_ok = true;
    for (family, strengths) in cases {
        for &s in strengths {
            let n = named(family, s);
            let closed = equal_mass_energy(&n, m, v).unwrap();
            for (mr, worst) in [(m * (1.0 + 1e-6), &mut worst_near), (m, &mut worst_exact)] {
                let found = roots(&n, &Junction::with_fermi_velocity(m, mr, v).unwrap());
                if found.len() != closed.len() {
                    count_ok = false;
                    continue;
                }
                for (a, b) in found.iter().zip(&closed) {
                    *worst = worst.max((a - b).abs());
                }
            }
        }
    }
    outcome(
        count_ok && worst_near <= 1e-4 * gap && worst_exact <= 1e-8,
        format!("root counts match: {count_ok}; max gap m_r = m_l(1+1e-6): {worst_near:.2e}; m_r = m_l: {worst_exact:.2e}"),
    )
}

fn c6() -> Outcome {
    let crossings = equal_mass_crossings(Family::InvertedMixed, &j12(), None, (0.3, 1.5), 61).unwrap();
    let hit = crossings.iter().copied().find(|c| (c - 0.6324).abs() <= 1e-3);
    outcome(hit.is_some(), format!("crossings at {crossings:?} (comparison mass m_l)"))
}

fn c7() -> Outcome {
    let mut rng = sample_rng(SEED ^ 0x7, 0);
    let mut worst_invariant = 0.0f64;
    for _ in 0..300 {
        let j = Junction::with_fermi_velocity(rng.gen_range(0.1..3.0), rng.gen_range(0.1..3.0), rng.gen_range(0.3..2.0))
            .unwrap();
        let e = rng.gen_range(-0.999..0.999) * j.min_gap();
        let s = rng.gen_range(0.01..6.0);
        for family in [Family::EquallyMixed, Family::InvertedMixed, Family::PureScalar] {
            let n = named(family, family.strength_sign() * s);
            let a = spectral_residual(&n, &j, e).unwrap();
            let b = spectral_residual(&n, &j.swapped(), e).unwrap();
            worst_invariant = worst_invariant.max((a - b).abs() / a.abs().max(1.0));
        }
    }
    let j = j12();
    let mut vector_gap = 0.0f64;
    for a in [0.3, 1.0, 2.0, PI, 4.0] {
        let n = named(Family::PureVector, a);
        for e in linspace(-0.999, 0.999, 201) {
            let x = spectral_residual(&n, &j, e).unwrap();
            let y = spectral_residual(&n, &j.swapped(), e).unwrap();
            vector_gap = vector_gap.max((x - y).abs());
        }
    }
    outcome(
        worst_invariant <= 1e-12 && vector_gap > 1e-4,
        format!("three families: max swap residual change {worst_invariant:.2e}; pure vector: max swap residual change {vector_gap:.2e} (non-invariance needs > 1e-4)"),
    )
}

fn c8() -> Outcome {
    let j = j12();
    let mut bad = Vec::new();
    let mut closest = f64::INFINITY;
    for a in linspace(-8.0, -1.0, 50) {
        let found = roots(&named(Family::PureScalar, a), &j);
        let neg = found.iter().filter(|&&e| e < 0.0).count();
        let pos = found.iter().filter(|&&e| e > 0.0).count();
        closest = found.iter().fold(closest, |c, e| c.min(e.abs()));
        if neg != 1 || pos != 1 || found.iter().any(|e| e.abs() <= 1e-6) {
            bad.push(a);
        }
    }
    outcome(bad.is_empty(), format!("a in [-8, -1], 50 values; failing strengths {bad:?}; closest root to zero {closest:.3e}"))
}

fn c9() -> Outcome {
    let j = j12();
    let interaction = Interaction::Named(named(Family::PureVector, PI));
    let window = EnergyWindow::scattering(&j, 2.01, 10.0).unwrap();
    let zeros = find_reflection_zeros(&interaction, &j, &window, 1000).unwrap();
    let (resonant, detail) = match &zeros {
        ReflectionZeros::Isolated(z) => {
            let worst = z.iter().map(|&e| interaction.amplitudes(&j, e).unwrap().r.norm()).fold(0.0f64, f64::max);
            let inside = z.iter().filter(|&&e| e > 2.01 && e < 10.0).count();
            (inside >= 1 && worst <= 1e-8, format!("zeros {z:?}, max |r| there {worst:.2e}"))
        }
        ReflectionZeros::IdenticallyTransparent => (false, "unexpectedly transparent".to_string()),
    };
    let free = Junction::with_fermi_velocity(1.0, 1.0, 1.0).unwrap();
    let identity = Interaction::Extension(ExtensionParams::equally_mixed(0.0, &free).unwrap());
    let window = EnergyWindow::scattering(&free, 1.01, 10.0).unwrap();
    let transparent = find_reflection_zeros(&identity, &free, &window, 1000).unwrap() == ReflectionZeros::IdenticallyTransparent;
    outcome(resonant && transparent, format!("{detail}; free case transparent: {transparent}"))
}

fn c10() -> Outcome {
    let j = j12();
    let e = 1e4 * j.max_gap();
    let mut worst = 0.0f64;
    for (family, strength) in [
        (Family::EquallyMixed, -1.0),
        (Family::EquallyMixed, -4.0),
        (Family::InvertedMixed, 0.5),
        (Family::InvertedMixed, 2.0),
        (Family::PureScalar, -0.5),
        (Family::PureScalar, -2.0),
    ] {
        let n = named(family, strength);
        let HighEnergyTransmission::Asymptote(limit) = high_energy_transmission(&n, &j).unwrap() else {
            return outcome(false, format!("{family}: no asymptote"));
        };
        let amps = amplitudes_solve(&named_matrix(&n, &j).unwrap(), e, Direction::FromLeft).unwrap();
        let flux = flux_transmission(&j, e, &amps).unwrap();
        worst = worst.max((flux - limit).abs() / limit);
    }

    let n = named(Family::PureVector, PI);
    let HighEnergyTransmission::LowerBound(bound) = high_energy_transmission(&n, &j).unwrap() else {
        return outcome(false, "pure vector: expected a lower bound".into());
    };
    let t = named_matrix(&n, &j).unwrap();
    let energies: Vec<f64> = linspace(2.01, 10.0, 101).into_iter().skip(1).collect();
    let mut below = 0;
    let mut below_infimum = 0;
    let mut worst_margin = f64::INFINITY;
    for &e in &energies {
        let amps = amplitudes_solve(&t, e, Direction::FromLeft).unwrap();
        let flux = flux_transmission(&j, e, &amps).unwrap();
        worst_margin = worst_margin.min(flux - bound.closed_form(e));
        below += usize::from(flux < bound.closed_form(e));
        below_infimum += usize::from(flux < bound.strength_infimum(e) * (1.0 - 1e-12));
    }
    outcome(
        worst <= 1e-3 && below == 0,
        format!(
            "confining families: max relative gap {worst:.2e} at E = {e:.0}; pure vector a = pi: T_flux below the closed-form bound at {below}/100 energies (worst margin {worst_margin:.3e}), below the strength infimum at {below_infimum}/100"
        ),
    )
}

fn c11() -> Outcome {
    let mut ratios_ok = true;
    let mut ratio_range = (f64::INFINITY, f64::NEG_INFINITY);
    let mut worst_norm = 0.0f64;
    let mut worst_residual = 0.0f64;
    for medium in [Medium::new(1.0, 1.0).unwrap(), Medium::new(2.0, 1.0).unwrap(), Medium::new(0.5, 1.7).unwrap()] {
        for side in [Side::Left, Side::Right] {
            for sign in [EigenSign::PlusI, EigenSign::MinusI] {
                for r in residual_ratios(side, sign, &medium, 512, 3).unwrap() {
                    ratio_range = (ratio_range.0.min(r), ratio_range.1.max(r));
                    ratios_ok &= (3.5..=4.5).contains(&r);
                }
                let report = eigen_residual(side, sign, &medium, 4096).unwrap();
                worst_norm = worst_norm.max(report.norm_error);
                worst_residual = worst_residual.max(report.max_pointwise_residual);
            }
        }
    }
    let indices = deficiency_indices(&j12());
    outcome(
        ratios_ok && worst_norm <= 1e-8 && indices == (2, 2),
        format!(
            "doubling ratios in [{:.3}, {:.3}]; max norm error at n = 4096: {worst_norm:.2e}; max residual {worst_residual:.2e}; indices {indices:?}",
            ratio_range.0, ratio_range.1
        ),
    )
}

fn c12() -> Outcome {
    // Approach the upper band edge of the heavier side, which is the only
    // listed edge bordering the two-sided scattering continuum. The incoming
    // wave number vanishes there for incidence from the heavier side.
    let cases = [
        (Junction::with_fermi_velocity(2.0, 1.0, 1.0).unwrap(), Direction::FromLeft),
        (j12(), Direction::FromRight),
    ];
    let interactions = [
        Interaction::Named(named(Family::PureScalar, -1.0)),
        Interaction::Named(named(Family::EquallyMixed, -1.0)),
        Interaction::Named(named(Family::InvertedMixed, 1.0)),
        Interaction::Named(named(Family::PureVector, PI)),
    ];
    let mut failures = Vec::new();
    let mut checked = Vec::new();
    let mut worst_last = 0.0f64;
    for (j, direction) in cases {
        let edges = zero_momentum_resonances(&j);
        let edge = j.max_gap();
        if !edges.contains(&edge) {
            failures.push(format!("edge {edge} not listed"));
        }
        checked.push(edge);
        for interaction in &interactions {
            let t = interaction.matching(&j).unwrap();
            let moduli: Vec<f64> = linspace(-7.0, -8.0, 11)
                .into_iter()
                .map(|p| amplitudes_solve(&t, edge * (1.0 + 10f64.powf(p)), direction).unwrap().t.norm())
                .collect();
            let monotone = moduli.windows(2).all(|w| w[1] < w[0]);
            let far = amplitudes_solve(&t, edge * 1.01, direction).unwrap().t.norm();
            let last = *moduli.last().unwrap();
            worst_last = worst_last.max(last);
            if !monotone || last >= far {
                failures.push(format!("{interaction:?} {direction:?}"));
            }
        }
    }
    let mut scattering_edges: Vec<f64> = checked.clone();
    scattering_edges.dedup();
    outcome(
        failures.is_empty(),
        format!("edges approached {scattering_edges:?}; largest |t| at dE = 1e-8 gap: {worst_last:.2e}; failures {failures:?}"),
    )
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 12] = [
        ("1 determinant identities", Duration::from_secs(1), c1),
        ("2 flux unitarity", Duration::from_secs(1), c2),
        ("3 closed form vs linear solve", Duration::from_secs(1), c3),
        ("4 equally-mixed reduction", Duration::from_secs(1), c4),
        ("5 equal-mass closed forms", Duration::from_secs(5), c5),
        ("6 inverted-mixed crossing", Duration::from_secs(10), c6),
        ("7 mass-swap symmetry", Duration::from_secs(1), c7),
        ("8 pure-scalar pairing", Duration::from_secs(5), c8),
        ("9 transmission resonances", Duration::from_secs(5), c9),
        ("10 high-energy transmission", Duration::from_secs(5), c10),
        ("11 deficiency verification", Duration::from_secs(5), c11),
        ("12 zero-momentum resonances", Duration::from_secs(1), c12),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let pass = result.pass && elapsed <= budget;
        failed += usize::from(!pass);
        println!(
            "{} criterion {name}: {} [{:.3} s of {} s]",
            if pass { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
