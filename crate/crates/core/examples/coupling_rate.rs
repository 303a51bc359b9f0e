//! Single-photon coupling rate, Brillouin frequency and cooperativities for
//! the reference quartz crystal.

use std::f64::consts::PI;

use bulk_optomech::config::PhysicalConfig;
use bulk_optomech::params::{
    brillouin_frequency, compute_g0, cooperativity, coupling_from_cooperativity, HBAR, SPEED_OF_LIGHT,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let phys = PhysicalConfig::reference();
    let c = phys.crystal;

    let g0 = compute_g0(&c, phys.omega1, phys.omega_m, HBAR)?;
    println!("g0 / 2π = {:.6} Hz", g0 / (2.0 * PI));

    for (label, v_c) in [("c", SPEED_OF_LIGHT), ("c/n", SPEED_OF_LIGHT / c.n)] {
        let omega_b = brillouin_frequency(phys.omega1, c.n, c.v_a, v_c)?;
        println!("Ω_B / 2π with v_c = {label:<3}: {:.4} MHz", omega_b / (2.0 * PI) / 1e6);
    }

    // Couplings of the conversion figures, in units of κ₁.
    let c1 = cooperativity(0.4, 0.3, 1.0)?;
    println!("C1 (G1 = 0.4, γm = 0.3) = {c1:.4}");
    for c2 in [1.0, 4.0, 12.0] {
        let g2 = coupling_from_cooperativity(c2, 0.3, 2.0)?;
        println!("C2 = {c2:>4} -> G2 = {g2:.6}");
    }
    Ok(())
}
