// Usage: cargo run --example two_atom_dicke
//
// Two perpendicular dipoles brought together: the antisymmetric pair state
// goes dark as (k0 r)²/5 while the symmetric one approaches 2γ0.

use coopdecay::units::K0;
use coopdecay::*;

fn main() -> Result<()> {
    println!(
        "{:>10} {:>14} {:>14} {:>14}",
        "r/λ0", "bright", "dark", "(k0 r)²/5"
    );
    for r in [0.3, 0.1, 0.05, 1e-2, 1e-3, 1e-4] {
        let geom = build_ordered(&LatticeSpec::chain(Environment::FreeSpace1D, 2, r))?;
        let modes = decompose(&build_hamiltonian(&geom)?)?;
        let x = K0 * r;
        println!(
            "{r:>10.0e} {:>14.8} {:>14.6e} {:>14.6e}",
            modes.decay_rates[0],
            modes.decay_rates[1],
            x * x / 5.0
        );
    }
    Ok(())
}
