// Usage: cargo run --release --example size_scaling
//
// Ordered slowest decay rate against spacing for growing 1D chains and 2D
// squares.

use coopdecay::ensemble::size_scaling_sweep;
use coopdecay::Result;

fn main() -> Result<()> {
    let grid: Vec<f64> = (0..=16).map(|k| 0.30 + 0.025 * k as f64).collect();
    for (dims, extents) in [(1, vec![10, 20, 40]), (2, vec![4, 6, 8])] {
        let curves = size_scaling_sweep(dims, &extents, &grid)?;
        print!("\n{dims}D  a/λ0");
        for c in &curves {
            print!(" {:>10}", format!("N={}", c.atoms));
        }
        println!();
        for (k, a) in grid.iter().enumerate() {
            print!("    {a:>6.3}");
            for c in &curves {
                print!(" {:>10.3e}", c.rates()[k]);
            }
            println!();
        }
    }
    Ok(())
}
