// Usage: cargo run --release --example mutual_information
//
// Half-chain mutual information after exciting atom 26 of an N = 50 half
// waveguide, averaged over disorder realizations.

use coopdecay::ensemble::{run_ensemble, summarize, InitialState, Observables};
use coopdecay::*;

fn main() -> Result<()> {
    let spec = LatticeSpec::chain(Environment::HalfWaveguide, 50, 0.15);
    let times: Vec<f64> = (0..=20).map(|k| 0.5 * k as f64).collect();
    let obs = Observables {
        mutual_info: Some(times.clone()),
        initial: InitialState::Site(26),
        ..Observables::default()
    };
    println!("cut: {}", BipartiteCut::half(50).describe());
    println!("{:>6} {:>12} {:>12}", "γ0 t", "ordered", "r_d = a");
    let curves = |dis| -> Result<Vec<Vec<f64>>> {
        Ok(run_ensemble(&spec, &dis, 20, &obs)?
            .into_iter()
            .map(|r| {
                r.mutual_info
                    .unwrap_or_default()
                    .into_iter()
                    .map(|(_, i)| i)
                    .collect()
            })
            .collect())
    };
    let ordered = curves(DisorderSpec::ordered())?;
    let disordered = curves(DisorderSpec::positional(1.0, 9, 0))?;
    for (k, t) in times.iter().enumerate() {
        let column =
            |c: &[Vec<f64>]| summarize(&c.iter().map(|v| v[k]).collect::<Vec<_>>()).mean_arith;
        println!(
            "{t:>6.1} {:>12.5} {:>12.5}",
            column(&ordered),
            column(&disordered)
        );
    }
    Ok(())
}
