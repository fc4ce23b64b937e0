mod common;

use common::taylor_propagate;
use coopdecay::dynamics::{propagate_direct, Propagator};
use coopdecay::ensemble::{population_ensemble, realizations, InitialState};
use coopdecay::interactions::{build_hamiltonian_with, CouplingModel};
use coopdecay::seeding::{realization_rng, StreamPurpose};
use coopdecay::*;

fn single_atom() -> ModeDecomposition {
    let geom = build_ordered(&LatticeSpec::chain(Environment::FreeSpace1D, 1, 1.0)).unwrap();
    decompose(&build_hamiltonian(&geom).unwrap()).unwrap()
}

#[test]
fn single_atom_decays_exponentially() {
    let dec = single_atom();
    let psi = site_excitation_state(1, 1).unwrap();
    for t in [0.0, 0.5, 1.0, 7.0, 30.0] {
        let p = propagate(&psi, &dec, t).unwrap().excited_population();
        assert!(
            (p - (-t).exp()).abs() <= 1e-12 * (-t).exp().max(1e-300),
            "{t}"
        );
    }
}

#[test]
fn eigen_path_matches_independent_taylor_series() {
    let spec = LatticeSpec::chain(Environment::HalfWaveguide, 12, 0.2);
    let geom = build_realization(&spec, &DisorderSpec::positional(0.7, 2, 1)).unwrap();
    let h = build_hamiltonian(&geom).unwrap();
    let dec = decompose(&h).unwrap();
    let mut rng = realization_rng(2, 1, StreamPurpose::InitialState);
    let psi = random_phase_state(12, &mut rng);
    for t in [0.3, 4.0, 25.0] {
        let fast = propagate(&psi, &dec, t).unwrap();
        let slow = taylor_propagate(&h.h, &psi.amplitudes, t, 0.05);
        let err = fast
            .amplitudes
            .iter()
            .zip(&slow)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "t={t}: {err:e}");
    }
}

#[test]
fn composition_property() {
    let spec = LatticeSpec::chain(Environment::FreeSpace1D, 20, 0.3);
    let geom = build_realization(&spec, &DisorderSpec::positional(0.5, 8, 0)).unwrap();
    let dec = decompose(&build_hamiltonian(&geom).unwrap()).unwrap();
    let psi = site_excitation_state(20, 7).unwrap();
    let (t1, t2) = (1.7, 3.2);
    let direct = propagate(&psi, &dec, t1 + t2).unwrap();
    let stepped = propagate(&propagate(&psi, &dec, t1).unwrap(), &dec, t2).unwrap();
    for (a, b) in direct.amplitudes.iter().zip(&stepped.amplitudes) {
        assert!((a - b).norm() < 1e-9);
    }
    let expm = propagate_direct(&psi, &dec.hamiltonian, t1 + t2).unwrap();
    for (a, b) in direct.amplitudes.iter().zip(&expm.amplitudes) {
        assert!((a - b).norm() < 1e-9);
    }
}

#[test]
fn norm_never_increases() {
    let spec = LatticeSpec::chain(Environment::HalfWaveguide, 30, 0.15);
    let times: Vec<f64> = (0..=400).map(|k| k as f64 * 0.5).collect();
    for k in 0..5 {
        let dis = DisorderSpec::positional(1.0, 17, k);
        let geom = build_realization(&spec, &dis).unwrap();
        let dec = decompose(&build_hamiltonian(&geom).unwrap()).unwrap();
        let mut rng = realization_rng(17, k, StreamPurpose::InitialState);
        let psi = random_phase_state(30, &mut rng);
        let curve = population_curve(&psi, &dec, &times).unwrap();
        assert!((curve[0].1 - 1.0).abs() < 1e-12);
        for w in curve.windows(2) {
            assert!(w[1].1 <= w[0].1 * (1.0 + 1e-12) + 1e-300, "{w:?}");
        }
    }
}

#[test]
fn trajectory_matches_pointwise_evaluation() {
    let spec = LatticeSpec::chain(Environment::FreeSpace1D, 6, 0.25);
    let geom = build_ordered(&spec).unwrap();
    let dec = decompose(&build_hamiltonian(&geom).unwrap()).unwrap();
    let psi = site_excitation_state(6, 1).unwrap();
    let prop = Propagator::new(&psi, &dec).unwrap();
    let times = [0.0, 0.1, 1.0, 10.0];
    let traj = prop.trajectory(&times).unwrap();
    for (t, s) in times.iter().zip(&traj) {
        assert_eq!(s, &prop.at(*t).unwrap());
    }
    assert!(prop.trajectory(&[1.0, 0.5]).is_err());
    assert!(prop.at(-1.0).is_err());
}

#[test]
fn non_interacting_geometric_mean_is_exact() {
    let spec = LatticeSpec::chain(Environment::HalfWaveguide, 10, 0.15);
    let times: Vec<f64> = (0..=20).map(|k| k as f64).collect();
    let dis = realizations(DisorderSpec::positional(1.0, 4, 0), 7);
    let ens = population_ensemble(
        &spec,
        &dis,
        &times,
        InitialState::RandomPhase,
        CouplingModel::NonInteracting,
    )
    .unwrap();
    for (t, g) in times.iter().zip(&ens.mean_geom) {
        assert!((g - (-t).exp()).abs() <= 1e-12 * (-t).exp(), "{t}: {g}");
    }
}

#[test]
fn non_interacting_hamiltonian_is_diagonal() {
    let spec = LatticeSpec::chain(Environment::FreeSpace1D, 4, 0.1);
    let geom = build_ordered(&spec).unwrap();
    let h = build_hamiltonian_with(&geom, CouplingModel::NonInteracting).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let expect = if i == j {
                c64::new(0.0, -0.5)
            } else {
                c64::new(0.0, 0.0)
            };
            assert_eq!(h.h[(i, j)], expect);
        }
    }
}
