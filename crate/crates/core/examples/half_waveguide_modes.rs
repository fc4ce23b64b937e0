// Usage: cargo run --example half_waveguide_modes [OUT_DIR]
//
// Eigenmodes of one disordered N = 50 half-waveguide chain (r_d = a = 0.15 λ0).
// Prints the slowest modes and, with OUT_DIR, writes modes.csv,
// profiles.csv, geometry.json and hamiltonian.csv.

use std::path::PathBuf;

use coopdecay::*;

fn main() -> Result<()> {
    let spec = LatticeSpec::chain(Environment::HalfWaveguide, 50, 0.15);
    let dis = DisorderSpec::positional(1.0, 2024, 0);
    let geom = build_realization(&spec, &dis)?;
    let h = build_hamiltonian(&geom)?;
    let modes = decompose(&h)?;

    println!(
        "eigenvector condition number {:.3e}",
        modes.eigvec_condition
    );
    println!(
        "{:>4} {:>14} {:>14} {:>8}",
        "n", "Re E", "decay rate", "IPR"
    );
    for n in (40..50).chain([0, 1]) {
        println!(
            "{:>4} {:>14.6e} {:>14.6e} {:>8.4}",
            n + 1,
            modes.eigenvalues[n].re,
            modes.decay_rates[n],
            modes.iprs[n]
        );
    }

    if let Some(dir) = std::env::args().nth(1).map(PathBuf::from) {
        std::fs::create_dir_all(&dir).expect("create output directory");
        modes.modes_csv().write(&dir.join("modes.csv"))?;
        modes.profiles_csv().write(&dir.join("profiles.csv"))?;
        geom.save(&dir.join("geometry.json"))?;
        std::fs::write(dir.join("hamiltonian.csv"), h.to_csv()).expect("write hamiltonian.csv");
        println!("wrote {}", dir.display());
    }
    Ok(())
}
