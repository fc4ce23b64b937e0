// Usage: cargo run --release --example population_dynamics
//
// Excited population of an N = 50 half waveguide (a = 0.15 λ0) with random
// initial phases: non-interacting, ordered and fully disordered ensembles,
// then the late-time split between geometric and arithmetic means.

use coopdecay::ensemble::{log_grid, population_ensemble, realizations, InitialState};
use coopdecay::interactions::CouplingModel;
use coopdecay::*;

fn main() -> Result<()> {
    let spec = LatticeSpec::chain(Environment::HalfWaveguide, 50, 0.15);
    let times: Vec<f64> = (0..=10).map(|k| 20.0 * k as f64).collect();
    let run = |rd: f64, coupling| {
        population_ensemble(
            &spec,
            &realizations(DisorderSpec::positional(rd, 7, 0), 100),
            &times,
            InitialState::RandomPhase,
            coupling,
        )
    };
    let free = run(0.0, CouplingModel::NonInteracting)?;
    let ordered = run(0.0, CouplingModel::Collective)?;
    let disordered = run(1.0, CouplingModel::Collective)?;
    println!(
        "{:>6} {:>12} {:>12} {:>12}",
        "γ0 t", "independent", "ordered", "r_d = a"
    );
    for (k, t) in times.iter().enumerate() {
        println!(
            "{t:>6} {:>12.4e} {:>12.4e} {:>12.4e}",
            free.mean_geom[k], ordered.mean_geom[k], disordered.mean_geom[k]
        );
    }

    let late = log_grid(1.0, 1e11, 12);
    let ens = population_ensemble(
        &spec,
        &realizations(DisorderSpec::positional(0.5, 7, 0), 100),
        &late,
        InitialState::RandomPhase,
        CouplingModel::Collective,
    )?;
    println!("\nr_d = a/2 to γ0 t = 1e11");
    println!("{:>10} {:>12} {:>12}", "γ0 t", "geometric", "arithmetic");
    for (k, t) in late.iter().enumerate() {
        println!(
            "{t:>10.1e} {:>12.4e} {:>12.4e}",
            ens.mean_geom[k], ens.mean_arith[k]
        );
    }
    Ok(())
}
