//! Closed-form steady-state intensities of the two optical modes.
//!
//! Mode 1 follows from eliminating `b` and `a₂`, which leaves
//! `L a₁ + M a₁* = n` with `L = l₁ + i l₂`, `−M = m₁ + i m₂` and
//! `n = n₁ + i n₂` (everything scaled by `|D₁ + i D₂|²`). Mode 2 follows the
//! same route with the roles swapped: `R a₂ − f a₂* = h`. Both are solved by
//! conjugating once and eliminating the conjugate amplitude.
//!
//! [`Form::Verbatim`] evaluates the expressions exactly as they were
//! originally printed; see [`crate::ledger`] for what differs and why.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{cooperativity, SystemParams};

/// Relative size below which a closed-form denominator counts as vanishing.
pub const SINGULAR_TOLERANCE: f64 = 1e-12;

/// Which transcription of a closed form to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    /// Re-derived expression, consistent with the equations of motion.
    #[default]
    Corrected,
    /// Expression as printed, kept for comparison.
    Verbatim,
}

/// Every intermediate symbol of the mode-1/mode-2 intensity expressions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormIntermediates {
    pub form: Form,
    /// Pump rate √κ₁ᵉˣᵗ·α_p.
    pub a_p: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    /// `N₁ = G_m Ω_m + i G_m γₘ/2`.
    pub cap_n1: Complex64,
    /// `N₂ = G₁G₂`.
    pub cap_n2: f64,
    pub n1: f64,
    pub n2: f64,
    pub m1: f64,
    /// Imaginary part of the `a₁*` coefficient; zero in the verbatim form.
    pub m2: f64,
    pub l1: f64,
    pub l2: f64,
    pub a1r: f64,
    pub a1i: f64,
    pub h1: f64,
    pub h2: f64,
    pub f1: f64,
    pub f2: f64,
    pub r1: f64,
    pub r2: f64,
    pub a2r: f64,
    pub a2i: f64,
}

impl ClosedFormIntermediates {
    pub fn new(params: &SystemParams, form: Form) -> Result<Self> {
        let p = params.validate()?;
        let (om, gam) = (p.omega_m, p.gamma_m);
        let (k1, k2) = (p.kappa1, p.kappa2);
        let a_p = p.pump_rate();

        // The printed forms are written through C₁, C₂; the corrected ones
        // through the couplings directly. The two agree identically.
        let (g1_sq, g2_sq, g1g2) = match form {
            Form::Corrected => (p.g1 * p.g1, p.g2 * p.g2, p.g1 * p.g2),
            Form::Verbatim => {
                let c1 = cooperativity(p.g1, gam, k1)?;
                let c2 = cooperativity(p.g2, gam, k2)?;
                (
                    c1 * gam * k1 / 4.0,
                    c2 * gam * k2 / 4.0,
                    c1.sqrt() * c2.sqrt() * gam * (k1 * k2).sqrt() / 4.0,
                )
            }
        };

        let d1 = k2 * gam / 4.0 - p.delta2 * om + g2_sq;
        let d2 = p.delta2 * gam / 2.0 + om * k2 / 2.0;
        let d3 = k1 * gam / 4.0 + p.delta1 * om - g1_sq;
        let d4 = p.delta1 * gam / 2.0 - k1 * om / 2.0;
        let cap_n1 = Complex64::new(p.g_m * om, p.g_m * gam / 2.0);
        let n1_sq = cap_n1.norm_sqr();
        let cap_n2 = g1g2;
        let n2_sq = cap_n2 * cap_n2;
        let phonon = om * om + gam * gam / 4.0;

        let dd12 = d1 * d1 + d2 * d2;
        let dd34 = d3 * d3 + d4 * d4;
        let n1 = a_p * dd12 * gam / 2.0;
        let n2 = -a_p * om * dd12;
        let l1 = d3 * dd12 + n1_sq * d1 + n2_sq * d1;

        let (m1, m2, l2, a1r, a1i, h2) = match form {
            Form::Corrected => {
                let m1 = -2.0 * p.g_m * g1g2 * d1 * om;
                let m2 = -p.g_m * g1g2 * d1 * gam;
                let l2 = d4 * dd12 - n1_sq * d2 + n2_sq * d2;
                let a1r = n1 * (l1 + m1) + n2 * (l2 + m2);
                let a1i = n2 * (l1 - m1) - n1 * (l2 - m2);
                let h2 = a_p * (d3 * p.g_m * phonon - cap_n2 * (d4 * gam / 2.0 + om * d3));
                (m1, m2, l2, a1r, a1i, h2)
            }
            Form::Verbatim => {
                let m1 = -p.g_m * g1g2 * (2.0 * d1 * om + d2 * om);
                let l2 = d4 * dd12 - n1_sq * d1 + n2_sq * d2;
                let a1r = n1 * (m1 + l1) + n2 * l2;
                let a1i = n2 * (l1 - m1) - n1 * l1;
                let h2 = a_p * (d3 * p.g_m * phonon - cap_n2 * (d4 * gam / 2.0 - om * d3));
                (m1, 0.0, l2, a1r, a1i, h2)
            }
        };

        let h1 = a_p * (d4 * p.g_m * phonon - cap_n2 * (d3 * gam / 2.0 - om * d4));
        let f1 = -2.0 * p.g_m * g1g2 * om * d3;
        let f2 = p.g_m * g1g2 * gam * d3;
        let r1 = d1 * dd34 + d3 * (n1_sq + n2_sq);
        let r2 = d2 * dd34 + d4 * (n2_sq - n1_sq);
        let a2r = h1 * (f1 + r1) + h2 * (f2 + r2);
        let a2i = h1 * (f2 - r2) + h2 * (r1 - f1);

        Ok(Self {
            form,
            a_p,
            d1,
            d2,
            d3,
            d4,
            cap_n1,
            cap_n2,
            n1,
            n2,
            m1,
            m2,
            l1,
            l2,
            a1r,
            a1i,
            h1,
            h2,
            f1,
            f2,
            r1,
            r2,
            a2r,
            a2i,
        })
    }

    /// `l₁² + l₂² − m₁² − m₂²`.
    pub fn denominator_mode1(&self) -> f64 {
        self.l1 * self.l1 + self.l2 * self.l2 - self.m1 * self.m1 - self.m2 * self.m2
    }

    /// Denominator of mode 1 relative to the size of its terms.
    pub fn relative_denominator_mode1(&self) -> f64 {
        let scale = self.l1 * self.l1 + self.l2 * self.l2 + self.m1 * self.m1 + self.m2 * self.m2;
        relative(self.denominator_mode1(), scale)
    }

    /// `(R₁² + R₂²) − (f₁² + f₂²)`.
    pub fn denominator_mode2(&self) -> f64 {
        (self.r1 * self.r1 + self.r2 * self.r2) - (self.f1 * self.f1 + self.f2 * self.f2)
    }

    pub fn relative_denominator_mode2(&self) -> f64 {
        let scale = self.r1 * self.r1 + self.r2 * self.r2 + self.f1 * self.f1 + self.f2 * self.f2;
        relative(self.denominator_mode2(), scale)
    }

    /// Steady `a₁` as a complex number (corrected form only carries the phase
    /// faithfully).
    pub fn amplitude_mode1(&self) -> Result<Complex64> {
        let den = self.checked(self.denominator_mode1(), self.relative_denominator_mode1(), "mode 1")?;
        Ok(Complex64::new(self.a1r, self.a1i) / den)
    }

    pub fn amplitude_mode2(&self) -> Result<Complex64> {
        let den = self.checked(self.denominator_mode2(), self.relative_denominator_mode2(), "mode 2")?;
        Ok(Complex64::new(self.a2r, self.a2i) / den)
    }

    pub fn intensity_mode1(&self) -> Result<f64> {
        let den = self.checked(self.denominator_mode1(), self.relative_denominator_mode1(), "mode 1")?;
        Ok((self.a1r * self.a1r + self.a1i * self.a1i) / (den * den))
    }

    pub fn intensity_mode2(&self) -> Result<f64> {
        let den = self.checked(self.denominator_mode2(), self.relative_denominator_mode2(), "mode 2")?;
        Ok((self.a2r * self.a2r + self.a2i * self.a2i) / (den * den))
    }

    fn checked(&self, den: f64, rel: f64, what: &str) -> Result<f64> {
        if den == 0.0 || !(rel.abs() > SINGULAR_TOLERANCE) {
            Err(Error::Singular(format!(
                "{what} closed-form denominator vanishes (relative size {rel:.3e})"
            )))
        } else {
            Ok(den)
        }
    }
}

fn relative(value: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        0.0
    } else {
        value / scale
    }
}

/// Corrected closed-form |a₁|².
pub fn intensity_mode1_closed(params: &SystemParams) -> Result<f64> {
    intensity_mode1_closed_with(params, Form::Corrected)
}

/// Corrected closed-form |a₂|².
pub fn intensity_mode2_closed(params: &SystemParams) -> Result<f64> {
    intensity_mode2_closed_with(params, Form::Corrected)
}

pub fn intensity_mode1_closed_with(params: &SystemParams, form: Form) -> Result<f64> {
    ClosedFormIntermediates::new(params, form)?.intensity_mode1()
}

pub fn intensity_mode2_closed_with(params: &SystemParams, form: Form) -> Result<f64> {
    ClosedFormIntermediates::new(params, form)?.intensity_mode2()
}

/// Conversion efficiency through the closed form,
/// `η₁η₂κ₁κ₂ (Ã₂R² + Ã₂I²) / den²` with `Ã = A/(√κ₁ᵉˣᵗ α_p)`.
///
/// The verbatim form leaves `Ã₂R + Ã₂I` unsquared, which is not even sign
/// definite.
pub fn conversion_efficiency_closed(params: &SystemParams, form: Form) -> Result<f64> {
    if !(params.alpha_p > 0.0) {
        return Err(Error::Domain(format!(
            "conversion efficiency needs a positive pump (alpha_p = {})",
            params.alpha_p
        )));
    }
    let cf = ClosedFormIntermediates::new(params, form)?;
    let den = cf.checked(cf.denominator_mode2(), cf.relative_denominator_mode2(), "mode 2")?;
    let eta1 = params.kappa1_ext / params.kappa1;
    let eta2 = params.kappa2_ext / params.kappa2;
    let a_tilde_r = cf.a2r / cf.a_p;
    let a_tilde_i = cf.a2i / cf.a_p;
    let numerator = match form {
        Form::Corrected => a_tilde_r * a_tilde_r + a_tilde_i * a_tilde_i,
        Form::Verbatim => a_tilde_r + a_tilde_i,
    };
    Ok(eta1 * eta2 * params.kappa1 * params.kappa2 * numerator / (den * den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::coupling_from_cooperativity;
    use crate::steady::{conversion_efficiency, steady_amplitudes};
    use approx::assert_relative_eq;

    fn fig2(gamma_m: f64, c2: f64) -> SystemParams {
        let mut p = SystemParams::conversion(gamma_m, 0.4);
        p.g2 = coupling_from_cooperativity(c2, gamma_m, p.kappa2).unwrap();
        p
    }

    #[test]
    fn decoupled_limit_is_lorentzian() {
        let mut p = SystemParams::conversion(0.3, 0.0);
        p.g_m = 0.0;
        let expected = p.pump_rate().powi(2) / (p.delta1 * p.delta1 + p.kappa1 * p.kappa1 / 4.0);
        assert_relative_eq!(intensity_mode1_closed(&p).unwrap(), expected, max_relative = 1e-12);
        assert_eq!(intensity_mode2_closed(&p).unwrap(), 0.0);
    }

    #[test]
    fn mode2_dark_without_couplings() {
        let mut p = fig2(0.3, 0.0);
        p.g_m = 0.0;
        assert_eq!(intensity_mode2_closed(&p).unwrap(), 0.0);
    }

    #[test]
    fn matches_linear_solve_on_figure_grid() {
        // Independent oracle: the 6×6 linear solve.
        for gamma_m in [0.3, 0.45] {
            for k in 0..150 {
                let c2 = 0.1 + (15.0 - 0.1) * k as f64 / 149.0;
                let p = fig2(gamma_m, c2);
                let amps = steady_amplitudes(&p).unwrap();
                assert_relative_eq!(
                    intensity_mode1_closed(&p).unwrap(),
                    amps.a1.norm_sqr(),
                    max_relative = 1e-8
                );
                assert_relative_eq!(
                    intensity_mode2_closed(&p).unwrap(),
                    amps.a2.norm_sqr(),
                    max_relative = 1e-8
                );
            }
        }
    }

    #[test]
    fn corrected_amplitudes_carry_the_phase() {
        let p = fig2(0.3, 4.0);
        let amps = steady_amplitudes(&p).unwrap();
        let cf = ClosedFormIntermediates::new(&p, Form::Corrected).unwrap();
        assert!((cf.amplitude_mode1().unwrap() - amps.a1).norm() < 1e-10 * amps.a1.norm());
        assert!((cf.amplitude_mode2().unwrap() - amps.a2).norm() < 1e-10 * amps.a2.norm());
    }

    #[test]
    fn quadratic_in_pump() {
        let p = fig2(0.3, 4.0);
        let mut q = p;
        q.alpha_p = 2.0;
        assert_relative_eq!(
            intensity_mode1_closed(&q).unwrap(),
            4.0 * intensity_mode1_closed(&p).unwrap(),
            max_relative = 1e-13
        );
        q.alpha_p = 3.5;
        assert_relative_eq!(
            intensity_mode2_closed(&q).unwrap(),
            3.5 * 3.5 * intensity_mode2_closed(&p).unwrap(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn efficiency_closed_matches_numeric() {
        let p = fig2(0.3, 12.0);
        assert_relative_eq!(
            conversion_efficiency_closed(&p, Form::Corrected).unwrap(),
            conversion_efficiency(&p).unwrap(),
            max_relative = 1e-9
        );
        let verbatim = conversion_efficiency_closed(&p, Form::Verbatim).unwrap();
        assert!(verbatim.is_finite());
    }

    #[test]
    fn verbatim_differs_from_corrected() {
        let p = fig2(0.3, 4.0);
        let v = ClosedFormIntermediates::new(&p, Form::Verbatim).unwrap();
        let c = ClosedFormIntermediates::new(&p, Form::Corrected).unwrap();
        assert_eq!(v.l1, c.l1);
        assert_ne!(v.l2, c.l2);
        assert_ne!(v.h2, c.h2);
        assert_eq!(v.m2, 0.0);
        assert_relative_eq!(v.d1, c.d1, max_relative = 1e-14);
        assert_relative_eq!(v.cap_n2, c.cap_n2, max_relative = 1e-14);
    }

    #[test]
    fn vanishing_denominator_is_an_error() {
        let cf = ClosedFormIntermediates {
            l1: 1.0,
            l2: 0.0,
            m1: 1.0,
            m2: 0.0,
            ..ClosedFormIntermediates::new(&fig2(0.3, 4.0), Form::Corrected).unwrap()
        };
        assert!(matches!(cf.intensity_mode1(), Err(Error::Singular(_))));
    }
}
