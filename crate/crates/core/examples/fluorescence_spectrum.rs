// Usage: cargo run --release --example fluorescence_spectrum
//
// Late-time fluorescence spectrum S(ω, t′ = 100/γ0) of an N = 50 half
// waveguide, ordered against an average over disordered realizations.

use coopdecay::dynamics::default_omega_grid;
use coopdecay::ensemble::{mean_spectrum, run_ensemble, Observables, SpectrumRequest};
use coopdecay::*;

fn main() -> Result<()> {
    let spec = LatticeSpec::chain(Environment::HalfWaveguide, 50, 0.15);
    let obs = Observables {
        spectrum: Some(SpectrumRequest {
            t_prime: 100.0,
            omega: default_omega_grid(),
        }),
        ..Observables::default()
    };
    let ordered = mean_spectrum(&run_ensemble(&spec, &DisorderSpec::ordered(), 20, &obs)?)?;
    let disordered = mean_spectrum(&run_ensemble(
        &spec,
        &DisorderSpec::positional(1.0, 3, 0),
        20,
        &obs,
    )?)?;
    println!("{:>8} {:>14} {:>14}", "ω/γ0", "ordered", "r_d = a");
    for k in (0..ordered.omega.len()).step_by(16) {
        println!(
            "{:>8.3} {:>14.6e} {:>14.6e}",
            ordered.omega[k], ordered.values[k], disordered.values[k]
        );
    }
    Ok(())
}
