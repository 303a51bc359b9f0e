//! Closed-form intensities against the linear solve along the C₂ axis, in
//! both the corrected and the printed transcription.

use bulk_optomech::closed_form::{intensity_mode1_closed_with, intensity_mode2_closed_with, Form};
use bulk_optomech::params::{coupling_from_cooperativity, SystemParams};
use bulk_optomech::steady::steady_amplitudes;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>5} {:>14} {:>11} {:>11} {:>11} {:>11}", "C2", "|a1|²", "dev corr", "dev print", "|a2|² dev", "print");
    for c2 in [0.5, 2.0, 4.0, 8.0, 12.0, 15.0] {
        let mut p = SystemParams::conversion(0.3, 0.4);
        p.g2 = coupling_from_cooperativity(c2, p.gamma_m, p.kappa2)?;
        let a = steady_amplitudes(&p)?;
        let (n1, n2) = (a.a1.norm_sqr(), a.a2.norm_sqr());
        let dev = |x: f64, r: f64| (x - r).abs() / r;
        println!(
            "{c2:>5} {n1:>14.10} {:>11.2e} {:>11.2e} {:>11.2e} {:>11.2e}",
            dev(intensity_mode1_closed_with(&p, Form::Corrected)?, n1),
            dev(intensity_mode1_closed_with(&p, Form::Verbatim)?, n1),
            dev(intensity_mode2_closed_with(&p, Form::Corrected)?, n2),
            dev(intensity_mode2_closed_with(&p, Form::Verbatim)?, n2),
        );
    }
    Ok(())
}
