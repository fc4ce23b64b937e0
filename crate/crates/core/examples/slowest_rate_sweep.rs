// Usage: cargo run --release --example slowest_rate_sweep [REALIZATIONS]
//
// Mean and minimum slowest decay rate |2 Im E_N| of an N = 50 half waveguide
// against lattice spacing, for several positional disorder strengths.

use coopdecay::ensemble::{log_grid, sweep_slowest_rate, DisorderStrength, SweepAxis, SweepSpec};
use coopdecay::*;

fn main() -> Result<()> {
    let realizations = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(20);
    let sweep = SweepSpec {
        base: LatticeSpec::chain(Environment::HalfWaveguide, 50, 0.1),
        axis: SweepAxis::LatticeSpacing,
        values: log_grid(0.1, 10.0, 30),
        strengths: [0.0, 0.1, 0.5, 1.0]
            .map(DisorderStrength::positional)
            .to_vec(),
        realizations,
        seed: 1,
    };
    let summary = sweep_slowest_rate(&sweep, false)?;
    print!("{}", summary.to_csv().as_str());
    Ok(())
}
