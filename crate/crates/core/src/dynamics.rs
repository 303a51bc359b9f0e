//! Time integration of the linearized equations of motion.
//!
//! The complex 6-vector `(a₁, a₂, b, a₁*, a₂*, b*)` is split into a 12-vector
//! of real and imaginary parts and advanced with an embedded Dormand–Prince
//! 5(4) pair under local error control.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::steady::{assemble_drift, stability_of, DriftSystem, ModeAmplitudes};

const DIM: usize = 12;
type State = [f64; DIM];

/// Step-size and tolerance settings for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub dt_initial: f64,
    pub tol_abs: f64,
    pub tol_rel: f64,
    /// Horizon in units of 1/κ₁. Zero yields the initial state only.
    pub t_max: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            dt_initial: 1e-2,
            tol_abs: 1e-10,
            tol_rel: 1e-10,
            t_max: 100.0,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let mut v = Vec::new();
        if !(self.dt_initial > 0.0 && self.dt_initial.is_finite()) {
            v.push(format!("dt_initial > 0 violated (got {})", self.dt_initial));
        }
        for (name, tol) in [("tol_abs", self.tol_abs), ("tol_rel", self.tol_rel)] {
            if !(tol > 0.0 && tol <= 1e-2) {
                v.push(format!("{name} in (0, 1e-2] violated (got {tol})"));
            }
        }
        if !(self.t_max >= 0.0 && self.t_max.is_finite()) {
            v.push(format!("t_max ≥ 0 violated (got {})", self.t_max));
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(v))
        }
    }
}

/// Accepted integration steps, starting with the initial condition.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<ModeAmplitudes>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, ModeAmplitudes)> {
        Some((*self.times.last()?, *self.states.last()?))
    }

    /// CSV with columns `t` and the real/imaginary parts of each amplitude.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,a1_re,a1_im,a2_re,a2_im,b_re,b_im\n");
        for (t, s) in self.times.iter().zip(&self.states) {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                t, s.a1.re, s.a1.im, s.a2.re, s.a2.im, s.b.re, s.b.im
            ));
        }
        out
    }
}

/// Real form of `M x + d` on the split state `(Re x, Im x)`.
struct RealSystem {
    matrix: [[f64; DIM]; DIM],
    drive: State,
}

impl RealSystem {
    fn new(drift: &DriftSystem) -> Self {
        let mut matrix = [[0.0; DIM]; DIM];
        let mut drive = [0.0; DIM];
        for r in 0..6 {
            for c in 0..6 {
                let z = drift.matrix[(r, c)];
                matrix[r][c] = z.re;
                matrix[r][c + 6] = -z.im;
                matrix[r + 6][c] = z.im;
                matrix[r + 6][c + 6] = z.re;
            }
            drive[r] = drift.drive[r].re;
            drive[r + 6] = drift.drive[r].im;
        }
        Self { matrix, drive }
    }

    fn eval(&self, y: &State, out: &mut State) {
        for (row, o) in self.matrix.iter().zip(out.iter_mut()) {
            *o = row.iter().zip(y).map(|(a, b)| a * b).sum();
        }
        for (o, d) in out.iter_mut().zip(&self.drive) {
            *o += d;
        }
    }
}

fn split(amps: &ModeAmplitudes) -> State {
    let x = amps.to_state();
    let mut y = [0.0; DIM];
    for k in 0..6 {
        y[k] = x[k].re;
        y[k + 6] = x[k].im;
    }
    y
}

fn join(y: &State) -> ModeAmplitudes {
    use num_complex::Complex64;
    ModeAmplitudes::new(
        Complex64::new(y[0], y[6]),
        Complex64::new(y[1], y[7]),
        Complex64::new(y[2], y[8]),
    )
}

// Dormand–Prince 5(4) tableau. The system is autonomous, so the nodes are unused.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive stepper holding the current time and state.
struct Stepper {
    system: RealSystem,
    tol_abs: f64,
    tol_rel: f64,
    t: f64,
    h: f64,
    y: State,
    k: [State; 7],
}

impl Stepper {
    fn new(system: RealSystem, y: State, config: &IntegratorConfig) -> Self {
        let mut k = [[0.0; DIM]; 7];
        system.eval(&y, &mut k[0]);
        Self {
            system,
            tol_abs: config.tol_abs,
            tol_rel: config.tol_rel,
            t: 0.0,
            h: config.dt_initial,
            y,
            k,
        }
    }

    /// Advances by one accepted step without passing `t_end`.
    fn step(&mut self, t_end: f64) -> Result<()> {
        loop {
            let h = self.h.min(t_end - self.t);
            if h < 1e-14 * self.t.abs().max(1.0) {
                return Err(Error::StepUnderflow { time: self.t });
            }
            let mut stage = [0.0; DIM];
            for s in 1..7 {
                for i in 0..DIM {
                    let mut acc = self.y[i];
                    for j in 0..s {
                        acc += h * A[s][j] * self.k[j][i];
                    }
                    stage[i] = acc;
                }
                self.system.eval(&stage, &mut self.k[s]);
            }
            // Stage 7 is evaluated at the fifth-order solution (FSAL).
            let y_new = stage;
            let mut err_sq = 0.0;
            for i in 0..DIM {
                let mut e = 0.0;
                for s in 0..7 {
                    e += (B5[s] - B4[s]) * self.k[s][i];
                }
                let scale = self.tol_abs + self.tol_rel * self.y[i].abs().max(y_new[i].abs());
                err_sq += (h * e / scale).powi(2);
            }
            let err = (err_sq / DIM as f64).sqrt();
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                self.t = if h == t_end - self.t { t_end } else { self.t + h };
                self.y = y_new;
                self.k[0] = self.k[6];
                self.h = h * factor;
                return Ok(());
            }
            self.h = h * factor.min(1.0);
        }
    }
}

/// Integrates from `initial` up to `config.t_max`, recording each accepted step.
pub fn integrate(
    params: &SystemParams,
    initial: &ModeAmplitudes,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    config.validate()?;
    let drift = assemble_drift(params)?;
    let mut stepper = Stepper::new(RealSystem::new(&drift), split(initial), config);
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![*initial],
    };
    while stepper.t < config.t_max {
        stepper.step(config.t_max)?;
        traj.times.push(stepper.t);
        traj.states.push(join(&stepper.y));
    }
    Ok(traj)
}

/// Integrates from the empty cavity until the equation-of-motion residual
/// drops below `tol·‖d‖`, giving up at `t = 50/|margin|`.
pub fn settle(params: &SystemParams, tol: f64) -> Result<ModeAmplitudes> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("settle tolerance must lie in (0, 1), got {tol}")));
    }
    let drift = assemble_drift(params)?;
    let margin = stability_of(&drift)?.margin;
    if !(margin < 0.0) {
        return Err(Error::Unstable { margin });
    }
    let t_max = 50.0 / margin.abs();
    let int_tol = (tol * 1e-2).clamp(1e-13, 1e-2);
    let config = IntegratorConfig {
        dt_initial: 1e-2,
        tol_abs: int_tol,
        tol_rel: int_tol,
        t_max,
    };
    let drive_norm = drift.drive.norm();
    let mut stepper = Stepper::new(RealSystem::new(&drift), [0.0; DIM], &config);
    let residual_of = |y: &State| {
        let x = join(y).to_state();
        drift.rhs(&x).norm()
    };
    let mut residual = residual_of(&stepper.y);
    while residual > tol * drive_norm {
        if stepper.t >= t_max {
            return Err(Error::NotSettled {
                time: stepper.t,
                residual,
            });
        }
        stepper.step(t_max)?;
        residual = residual_of(&stepper.y);
    }
    Ok(join(&stepper.y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::coupling_from_cooperativity;
    use crate::steady::{solve_steady_numeric, steady_amplitudes};
    use num_complex::Complex64;

    fn decoupled_undriven() -> SystemParams {
        let mut p = SystemParams::conversion(0.3, 0.0);
        p.g_m = 0.0;
        p.alpha_p = 0.0;
        p
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn analytic_decay_of_free_mode() {
        let p = decoupled_undriven();
        let initial = ModeAmplitudes::new(Complex64::new(1.0, 0.0), Complex64::default(), Complex64::default());
        for t in [1.0, 5.0, 10.0] {
            let cfg = IntegratorConfig {
                t_max: t,
                tol_abs: 1e-12,
                tol_rel: 1e-12,
                ..Default::default()
            };
            let traj = integrate(&p, &initial, &cfg).unwrap();
            let (t_end, last) = traj.last().unwrap();
            assert_eq!(t_end, t);
            let exact = (-(Complex64::new(0.0, p.delta1) + 0.5 * p.kappa1) * t).exp();
            assert!((last.a1 - exact).norm() < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn zero_horizon_returns_initial_state() {
        let initial = ModeAmplitudes::new(Complex64::new(0.2, 0.1), Complex64::default(), Complex64::default());
        let cfg = IntegratorConfig {
            t_max: 0.0,
            ..Default::default()
        };
        let traj = integrate(&SystemParams::conversion(0.3, 0.4), &initial, &cfg).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(traj.states[0], initial);
    }

    #[test]
    fn trajectory_invariants() {
        let mut p = SystemParams::conversion(0.3, 0.4);
        p.g2 = 0.7;
        let traj = integrate(&p, &ModeAmplitudes::default(), &IntegratorConfig::default()).unwrap();
        assert_eq!(traj.states[0], ModeAmplitudes::default());
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
        assert!(traj.states.iter().all(|s| s.is_finite()));
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = IntegratorConfig {
            tol_rel: 0.5,
            ..Default::default()
        };
        assert!(matches!(
            integrate(&SystemParams::conversion(0.3, 0.4), &ModeAmplitudes::default(), &cfg),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn decoupled_driven_mode_settles_to_lorentzian() {
        let mut p = SystemParams::conversion(0.3, 0.0);
        p.g_m = 0.0;
        let s = settle(&p, 1e-10).unwrap();
        let expected = p.pump_rate() / (Complex64::new(0.0, p.delta1) + 0.5 * p.kappa1);
        assert!(rel(s.a1, expected) < 1e-8);
    }

    #[test]
    fn settles_to_linear_solve() {
        let mut p = SystemParams::conversion(0.3, 0.4);
        p.g2 = coupling_from_cooperativity(4.0, p.gamma_m, p.kappa2).unwrap();
        let settled = settle(&p, 1e-9).unwrap();
        let exact = steady_amplitudes(&p).unwrap();
        assert!(rel(settled.a1, exact.a1) < 1e-6);
        assert!(rel(settled.a2, exact.a2) < 1e-6);
        assert!(rel(settled.b, exact.b) < 1e-6);
    }

    #[test]
    fn unstable_parameters_violate_precondition() {
        // Raise G₁ until the parametric a₁–b* coupling wins over damping.
        let mut p = SystemParams::conversion(0.3, 0.4);
        p.g2 = 0.3;
        let mut g1 = 0.4;
        while solve_steady_numeric(&p).unwrap().is_physical() {
            g1 += 0.1;
            p.g1 = g1;
        }
        assert!(matches!(settle(&p, 1e-9), Err(Error::Unstable { margin }) if margin > 0.0));
    }
}
