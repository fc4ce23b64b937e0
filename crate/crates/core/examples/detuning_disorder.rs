// Usage: cargo run --release --example detuning_disorder
//
// Slowest decay rate of a dense 1D free-space chain under detuning disorder
// of width ω_d, next to positional disorder of the same chain.

use coopdecay::ensemble::{sweep_slowest_rate, DisorderStrength, SweepAxis, SweepSpec};
use coopdecay::*;

fn main() -> Result<()> {
    let base = LatticeSpec::chain(Environment::FreeSpace1D, 50, 0.15);
    let widths = vec![0.01, 0.05, 0.1, 0.25, 0.5, 1.0];
    let sweep = SweepSpec {
        base,
        axis: SweepAxis::DetuningWidth,
        values: widths,
        strengths: vec![DisorderStrength::ORDERED, DisorderStrength::positional(0.5)],
        realizations: 20,
        seed: 6,
    };
    let summary = sweep_slowest_rate(&sweep, false)?;
    println!(
        "{:>8} {:>6} {:>12} {:>12}",
        "ω_d/γ0", "r_d/a", "mean", "minimum"
    );
    for p in &summary.points {
        println!(
            "{:>8.2} {:>6.1} {:>12.4e} {:>12.4e}",
            p.omega_d, p.rd_over_a, p.stats.mean_arith, p.stats.minimum
        );
    }
    Ok(())
}
