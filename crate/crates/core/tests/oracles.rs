//! Values frozen from independent 40-digit evaluations of the spectral
//! equations, plus brute-force cross-checks of the root finders.

use dirac_jump::matching::{matching_closed_form, named_matrix};
use dirac_jump::roots::linspace;
use dirac_jump::scattering::scattering_determinant;
use dirac_jump::spectral::{equal_mass_crossings, find_general_bound_states, pole_check, DEFAULT_GRID};
use dirac_jump::{
    find_bound_states, find_reflection_zeros, high_energy_transmission, spectral_residual, Direction, EnergyWindow,
    ExtensionParams, Family, HighEnergyTransmission, Interaction, Junction, NamedExtension, ReflectionZeros,
};
use std::f64::consts::PI;

fn j12() -> Junction {
    Junction::with_fermi_velocity(1.0, 2.0, 1.0).unwrap()
}

fn energies(family: Family, strength: f64) -> Vec<f64> {
    let named = NamedExtension::new(family, strength).unwrap();
    find_bound_states(&named, &j12(), DEFAULT_GRID).unwrap().into_iter().map(|b| b.energy).collect()
}

#[test]
fn inverted_mixed_residual_at_zero_energy() {
    // 2 + sqrt(10) - sqrt(5)
    let named = NamedExtension::new(Family::InvertedMixed, 0.5).unwrap();
    let value = spectral_residual(&named, &j12(), 0.0).unwrap();
    assert!((value - 2.926_209_682_668_589_6).abs() < 1e-14, "{value}");
}

#[test]
fn pure_scalar_pair() {
    let roots = energies(Family::PureScalar, -1.0);
    assert_eq!(roots.len(), 2);
    assert!((roots[0] + 0.812_955_960_075_600_63).abs() < 1e-10, "{roots:?}");
    assert!((roots[1] - 0.986_438_125_852_756_50).abs() < 1e-10, "{roots:?}");
}

#[test]
fn equally_mixed_roots() {
    let roots = energies(Family::EquallyMixed, -2.0);
    assert_eq!(roots.len(), 1);
    assert!((roots[0] - 0.769_920_196_017_695_24).abs() < 1e-10, "{roots:?}");
    let roots = energies(Family::EquallyMixed, -5.0);
    assert_eq!(roots.len(), 1);
    assert!((roots[0] + 0.424_777_877_718_960_45).abs() < 1e-10, "{roots:?}");
}

#[test]
fn inverted_mixed_crossing_is_two_over_root_ten() {
    let exact = 0.632_455_532_033_675_87;
    for mass in [None, Some(2.0)] {
        let crossings = equal_mass_crossings(Family::InvertedMixed, &j12(), mass, (0.3, 1.5), 61).unwrap();
        assert!(crossings.iter().any(|c| (c - exact).abs() < 1e-8), "{mass:?}: {crossings:?}");
    }
}

#[test]
fn equally_mixed_high_energy_limit() {
    let named = NamedExtension::new(Family::EquallyMixed, -1.0).unwrap();
    let HighEnergyTransmission::Asymptote(t) = high_energy_transmission(&named, &j12()).unwrap() else {
        panic!("expected an asymptote")
    };
    assert!((t - 0.883_036_880_224_505_78).abs() < 1e-14, "{t}");
}

#[test]
fn resonance_matches_dense_grid_minimum() {
    let j = j12();
    let interaction = Interaction::Named(NamedExtension::new(Family::PureVector, PI).unwrap());
    let window = EnergyWindow::scattering(&j, 2.01, 10.0).unwrap();
    let ReflectionZeros::Isolated(zeros) = find_reflection_zeros(&interaction, &j, &window, 1000).unwrap() else {
        panic!("not transparent")
    };
    let modulus = |e: f64| interaction.amplitudes(&j, e).unwrap().r.norm();
    let grid = linspace(2.01, 10.0, 400_001);
    let argmin = grid.iter().copied().fold((f64::NAN, f64::INFINITY), |best, e| {
        let m = modulus(e);
        if m < best.1 { (e, m) } else { best }
    });
    assert_eq!(zeros.len(), 1, "{zeros:?}");
    assert!((zeros[0] - argmin.0).abs() <= 2.0 * (8.0 - 0.01) / 400_000.0, "{zeros:?} vs {argmin:?}");
    assert!((zeros[0] - (17.0 + 2089f64.sqrt()) / 30.0).abs() < 1e-9);
}

/// Zeros of the continued pole denominator must be zeros of the continued
/// scattering determinant built from the matching matrix.
#[test]
fn general_bound_states_are_singularities() {
    let j = j12();
    for delta in [-2.0, -5.0, -20.0] {
        let ext = ExtensionParams::equally_mixed(delta, &j).unwrap();
        let states = find_general_bound_states(&ext, &j, DEFAULT_GRID).unwrap();
        let named = energies(Family::EquallyMixed, delta);
        assert_eq!(states.len(), named.len(), "delta {delta}");
        let t = matching_closed_form(&ext, &j).unwrap();
        let size = t.matrix().0.iter().flatten().fold(1.0f64, |m, z| m.max(z.norm()));
        for (s, e) in states.iter().zip(&named) {
            assert!((s.energy - e).abs() < 1e-9, "delta {delta}: {} vs {e}", s.energy);
            let det = scattering_determinant(&t, s.energy, Direction::FromLeft);
            assert!(det.norm() < 1e-9 * size, "delta {delta}: {det}");
        }
    }
}

#[test]
fn named_bound_states_are_singularities() {
    let j = j12();
    for (family, strength) in
        [(Family::PureScalar, -1.0), (Family::InvertedMixed, 1.0), (Family::PureVector, 2.0), (Family::EquallyMixed, -2.0)]
    {
        let named = NamedExtension::new(family, strength).unwrap();
        let t = named_matrix(&named, &j).unwrap();
        let size = t.matrix().0.iter().flatten().fold(1.0f64, |m, z| m.max(z.norm()));
        let roots = energies(family, strength);
        assert!(!roots.is_empty(), "{family}");
        for e in roots {
            assert!(pole_check(&named, &j, e).unwrap().norm() < 1e-9 * size, "{family} at {e}");
        }
    }
}
