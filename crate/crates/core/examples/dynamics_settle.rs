//! Time integration from the empty cavity, compared with the linear solve.

use bulk_optomech::config::RunParams;
use bulk_optomech::dynamics::{integrate, settle, IntegratorConfig};
use bulk_optomech::steady::steady_amplitudes;
use bulk_optomech::ModeAmplitudes;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = RunParams::default().system;
    let target = steady_amplitudes(&p)?;

    let cfg = IntegratorConfig { t_max: 40.0, ..IntegratorConfig::default() };
    let traj = integrate(&p, &ModeAmplitudes::default(), &cfg)?;
    for (t, s) in traj.times.iter().zip(&traj.states).step_by(traj.len() / 8 + 1) {
        println!("t = {t:>8.3}  |a1|² = {:.8}  |a2|² = {:.8}", s.a1.norm_sqr(), s.a2.norm_sqr());
    }

    let settled = settle(&p, 1e-10)?;
    let err = (settled.a1 - target.a1).norm() / target.a1.norm();
    println!("settled a1 = {:.10}, linear solve a1 = {:.10}, rel. diff {err:.2e}", settled.a1, target.a1);
    Ok(())
}
