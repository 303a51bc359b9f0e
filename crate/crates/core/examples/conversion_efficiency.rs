//! Conversion efficiency versus C₂ for the two phonon damping rates.

use bulk_optomech::params::SystemParams;
use bulk_optomech::sweep::{run_sweep, Observable, SweepParameter, SweepSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SweepSpec::new(SweepParameter::C2, 0.1, 15.0, 150);
    for gamma in [0.3, 0.45] {
        let r = run_sweep(&SystemParams::conversion(gamma, 0.4), &spec, &[Observable::Eta])?;
        let (x, eta) = r.argmax(Observable::Eta).expect("no flagged rows");
        println!("γm = {gamma}: peak η = {eta:.5} at C2 = {x:.2}");
    }
    Ok(())
}
