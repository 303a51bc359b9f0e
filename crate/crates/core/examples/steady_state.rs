//! Canonical steady state at C₂ = 4 with its stability report.

use bulk_optomech::config::RunParams;
use bulk_optomech::steady::{residual, solve_steady_numeric};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = RunParams::default().system;
    let s = solve_steady_numeric(&p)?;
    let a = s.amplitudes;

    println!("a1 = {:.8}", a.a1);
    println!("a2 = {:.8}", a.a2);
    println!("b  = {:.8}", a.b);
    println!("|a1|² = {:.10}, |a2|² = {:.10}", a.a1.norm_sqr(), a.a2.norm_sqr());
    println!("residual = {:.3e}, condition = {:.3}", residual(&p, &a)?, s.condition);
    println!("stability margin = {:.6}", s.stability.margin);
    for ev in &s.stability.eigenvalues {
        println!("  λ = {:+.6} {:+.6}i", ev.re, ev.im);
    }
    Ok(())
}
