//! Bright/dark coefficients and populations at G₂ = 0.6, plus the
//! population curves over G₂.

use bulk_optomech::dark_bright::{canonical_dark_bright, coefficients, steady_dark_bright};
use bulk_optomech::params::SystemParams;
use bulk_optomech::steady::stability_report;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = SystemParams::dark_bright(0.6);
    let co = coefficients(&p)?;
    println!("Δ_D = {:.6}  Δ_B = {:.6}  G_bd = {:.6}  G12 = {:.6}", co.delta_d, co.delta_b, co.g_bd, co.g_12);

    let closed = steady_dark_bright(&p)?;
    let numeric = canonical_dark_bright(&p)?;
    println!("a_B closed {:.10}  numeric {:.10}", closed.a_b, numeric.a_b);
    println!("a_D closed {:.10}  numeric {:.10}", closed.a_d, numeric.a_d);
    println!("margin = {:.4} (positive: fixed point is not an attractor)", stability_report(&p)?.margin);

    println!("\n{:>6} {:>12} {:>12}", "G2", "|a_B|²", "|a_D|²");
    for i in 0..=10 {
        let g2 = 0.05 + 0.115 * i as f64;
        let s = canonical_dark_bright(&SystemParams::dark_bright(g2))?;
        println!("{g2:>6.3} {:>12.6} {:>12.6}", s.bright_population(), s.dark_population());
    }
    Ok(())
}
