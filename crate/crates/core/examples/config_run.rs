// Usage: cargo run --example config_run [OUT_DIR]
//
// The same path the `coopdecay` binary takes: parse a plain-text config,
// run it, and list the files written.

use std::path::PathBuf;

use coopdecay::config::parse_config;
use coopdecay::run::run;
use coopdecay::Result;

const CONFIG: &str = "
experiment = sweep
environment = half_waveguide
n = 50
rd_over_a = [0, 0.5]
sweep_axis = lattice_spacing
sweep_log = [0.1, 10, 12]
realizations = 10, seed = 42
";

fn main() -> Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("coopdecay-config-run"));
    let config = parse_config(CONFIG)?;
    let outcome = run(&config, &out, None)?;
    for f in &outcome.files {
        println!("{}", f.display());
    }
    print!(
        "{}",
        std::fs::read_to_string(out.join("sweep.csv")).unwrap_or_default()
    );
    Ok(())
}
