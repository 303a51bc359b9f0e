//! Bright/dark superpositions of the two optical modes.
//!
//! With couplings `G₁`, `G₂` and `G̃ = √(G₁² + G₂²)` the bright mode is
//! `a_B = (G₁a₁ + G₂a₂)/G̃` and the dark mode `a_D = (G₂a₁ − G₁a₂)/G̃`. Under
//! `Δ₂ = 0`, `Δ₁ = −Ω_m` and `κ₁ = κ₂` the dynamics close on `(a_B, a_D, b)`
//! with the coefficients in [`DarkBrightCoefficients`], and the steady state
//! has the closed form evaluated by [`DarkBrightIntermediates`].
//!
//! The canonical steady state is [`canonical_dark_bright`], i.e. the
//! transformed linear solve; the closed form is checked against it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::closed_form::{Form, SINGULAR_TOLERANCE};
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::steady::{solve_steady_numeric, ModeAmplitudes};

/// Tolerance on the detuning and decay constraints of the dark/bright picture.
pub const CONSTRAINT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DarkBrightState {
    pub a_b: Complex64,
    pub a_d: Complex64,
}

impl DarkBrightState {
    pub fn bright_population(&self) -> f64 {
        self.a_b.norm_sqr()
    }

    pub fn dark_population(&self) -> f64 {
        self.a_d.norm_sqr()
    }
}

fn mixing_norm(g1: f64, g2: f64) -> Result<f64> {
    let g = g1.hypot(g2);
    if g > 0.0 && g.is_finite() {
        Ok(g)
    } else {
        Err(Error::Domain(format!(
            "bright/dark transformation undefined for G₁ = {g1}, G₂ = {g2}"
        )))
    }
}

/// Rotates the optical amplitudes into the bright/dark basis.
pub fn transform(amps: &ModeAmplitudes, g1: f64, g2: f64) -> Result<DarkBrightState> {
    let g = mixing_norm(g1, g2)?;
    Ok(DarkBrightState {
        a_b: (amps.a1 * g1 + amps.a2 * g2) / g,
        a_d: (amps.a1 * g2 - amps.a2 * g1) / g,
    })
}

/// Inverse rotation. Only the optical part is recovered; `b` is zero.
pub fn inverse_transform(db: &DarkBrightState, g1: f64, g2: f64) -> Result<ModeAmplitudes> {
    let g = mixing_norm(g1, g2)?;
    Ok(ModeAmplitudes {
        a1: (db.a_b * g1 + db.a_d * g2) / g,
        a2: (db.a_b * g2 - db.a_d * g1) / g,
        b: Complex64::default(),
    })
}

/// Coefficients of the bright/dark/phonon dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DarkBrightCoefficients {
    pub form: Form,
    pub delta_d: f64,
    pub delta_b: f64,
    /// Bright–dark exchange coupling.
    pub g_bd: f64,
    /// Dark-mode/phonon coupling.
    pub g_12: f64,
    /// Bright-mode/phonon squeezing-type coupling `G₁²/G̃`.
    pub g1_tilde: f64,
    /// Bright-mode/phonon beam-splitter coupling `G₂²/G̃`.
    pub g2_tilde: f64,
    /// Bright-mode drive.
    pub a_1: f64,
    /// Dark-mode drive.
    pub a_2: f64,
    pub g_tilde: f64,
}

fn check_constraints(p: &SystemParams) -> Result<()> {
    let mut v = Vec::new();
    if p.delta2.abs() > CONSTRAINT_TOLERANCE {
        v.push(format!("delta2 = 0 required (got {})", p.delta2));
    }
    if (p.delta1 + p.omega_m).abs() > CONSTRAINT_TOLERANCE * p.omega_m.max(1.0) {
        v.push(format!(
            "delta1 = -omega_m required (got {} vs {})",
            p.delta1, -p.omega_m
        ));
    }
    if (p.kappa1 - p.kappa2).abs() > CONSTRAINT_TOLERANCE {
        v.push(format!(
            "kappa1 = kappa2 required (got {} vs {})",
            p.kappa1, p.kappa2
        ));
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Contract(v.join("; ")))
    }
}

/// Corrected coefficient set.
pub fn coefficients(params: &SystemParams) -> Result<DarkBrightCoefficients> {
    coefficients_with(params, Form::Corrected)
}

pub fn coefficients_with(params: &SystemParams, form: Form) -> Result<DarkBrightCoefficients> {
    let p = params.validate()?;
    check_constraints(&p)?;
    let g_tilde = mixing_norm(p.g1, p.g2)?;
    let gg = g_tilde * g_tilde;
    let (g1, g2, gm, om) = (p.g1, p.g2, p.g_m, p.omega_m);

    let exchange = g1 * g2 * om + gm * (g2 * g2 - g1 * g1);
    let g_bd = match form {
        Form::Corrected => exchange / gg,
        // The printed numerator carries an extra bare G_m.
        Form::Verbatim => (exchange + gm) / gg,
    };

    Ok(DarkBrightCoefficients {
        form,
        delta_d: (g2 * g2 * om - 2.0 * gm * g1 * g2) / gg,
        delta_b: (g1 * g1 * om + 2.0 * gm * g1 * g2) / gg,
        g_bd,
        g_12: g1 * g2 / g_tilde,
        g1_tilde: g1 * g1 / g_tilde,
        g2_tilde: g2 * g2 / g_tilde,
        a_1: p.pump_rate() * g1 / g_tilde,
        a_2: p.pump_rate() * g2 / g_tilde,
        g_tilde,
    })
}

/// Intermediate symbols of the closed-form bright/dark steady state.
///
/// The dark-mode equation is solved first as
/// `a_D = (A_D1 + iA_D2) a_B + (A_D3 + iA_D4) a_B* + (A_D5 + iA_D6) A₂`;
/// substituting into the bright-mode equation (scaled by
/// `(κ/2 + iΔ_B)(Ω_m² + γₘ²/4)`) gives
/// `(A_B1 − iA_B2) a_B − (A_B3 + iA_B4) a_B* = (R₉ + iR₁₀) A₁ + (A_B5 + iA_B6) A₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DarkBrightIntermediates {
    pub form: Form,
    pub coefficients: DarkBrightCoefficients,
    /// Phonon feedback coefficient; real in the verbatim form.
    pub b_r: Complex64,
    /// Denominator of the dark-mode elimination.
    pub dark_denominator: f64,
    pub r: [f64; 10],
    pub a_d: [f64; 6],
    pub a_b: [f64; 6],
    pub f_a1: f64,
    pub f_a2: f64,
    pub g_a1: f64,
    pub g_a2: f64,
    pub h_a1: f64,
    pub h_a2: f64,
    pub j_a1: f64,
    pub j_a2: f64,
}

impl DarkBrightIntermediates {
    pub fn new(params: &SystemParams, form: Form) -> Result<Self> {
        let co = coefficients_with(params, form)?;
        let (om, gam) = (params.omega_m, params.gamma_m);
        let k = params.kappa1 / 2.0;
        let phonon = om * om + gam * gam / 4.0;
        let (t1, t2) = (co.g1_tilde, co.g2_tilde);
        let (db, dd, gbd, g12) = (co.delta_b, co.delta_d, co.g_bd, co.g_12);
        let sum_sq = t1 * t1 + t2 * t2;

        let mut r = [0.0; 10];
        let mut ad = [0.0; 6];
        let b_r;
        let dark_scale;
        let dark_denominator;

        match form {
            Form::Corrected => {
                // b* − b = B_R a_B − B_R* a_B* + (2Ω_m/S) G₁₂ (a_D − a_D*)
                b_r = Complex64::new(om * (t1 - t2), -gam / 2.0 * (t1 + t2)) / phonon;
                let feedback = 2.0 * g12 * g12 * om / phonon;
                dark_denominator = dd * dd + k * k + 2.0 * feedback * dd;
                dark_scale = dd * dd + k * k + (2.0 * feedback * dd).abs();
                let (xr, xi) = (gbd + g12 * b_r.re, g12 * b_r.im);
                ad[0] = -dd * xr - k * xi - feedback * gbd;
                ad[1] = k * xr - dd * xi;
                ad[2] = g12 * (dd * b_r.re - k * b_r.im) - feedback * gbd;
                ad[3] = -g12 * (k * b_r.re + dd * b_r.im);
                ad[4] = k;
                ad[5] = dd;

                let nu = gam / 2.0 * (t2 * t2 - t1 * t1);
                r[0] = (db * db + k * k) * phonon + db * om * sum_sq + k * nu;
                r[1] = k * om * sum_sq - db * nu;
                r[2] = -2.0 * t1 * t2 * om * db;
                r[3] = 2.0 * k * t1 * t2 * om;
                let x_re = phonon * gbd + g12 * om * (t1 - t2);
                let x_im = -g12 * gam / 2.0 * (t1 + t2);
                r[4] = -db * x_re - k * x_im;
                r[5] = k * x_re - db * x_im;
                let (y_re, y_im) = (g12 * om * (t1 - t2), x_im);
                r[6] = db * y_re + k * y_im;
                r[7] = db * y_im - k * y_re;
            }
            Form::Verbatim => {
                b_r = Complex64::new(om * sum_sq / phonon, 0.0);
                dark_denominator = dd * dd + k * k;
                dark_scale = dark_denominator;
                let br = b_r.re;
                ad[0] = -dd * (gbd + g12 * br);
                ad[1] = k * (gbd + g12 * br);
                ad[2] = dd * g12 * br;
                ad[3] = -k * g12 * br;
                ad[4] = k;
                ad[5] = dd;

                r[0] = (db * db + k * k) * phonon + om * sum_sq * db;
                r[1] = om * k * sum_sq;
                r[2] = -2.0 * sum_sq * om * db;
                r[3] = sum_sq * om * 2.0 * k;
                let bracket = gbd * phonon + g12 * om * sum_sq;
                r[4] = -db * bracket;
                r[5] = k * bracket;
                r[6] = -g12 * om * db * sum_sq;
                r[7] = g12 * om * k * sum_sq;
            }
        }
        r[8] = k * phonon;
        r[9] = db * phonon;

        if dark_denominator == 0.0 || !((dark_denominator / dark_scale).abs() > SINGULAR_TOLERANCE) {
            return Err(Error::Singular(format!(
                "dark-mode denominator vanishes ({dark_denominator:.3e})"
            )));
        }
        for v in ad.iter_mut() {
            *v /= dark_denominator;
        }

        let [r1, r2, r3, r4, r5, r6, r7, r8, r9, r10] = r;
        let [ad1, ad2, ad3, ad4, ad5, ad6] = ad;
        let mut ab = [
            r1 - r5 * ad1 + r6 * ad2 - r7 * ad3 - r8 * ad4,
            r2 + r5 * ad2 + r6 * ad1 - r7 * ad4 + r8 * ad3,
            0.0,
            r4 + r5 * ad4 + r6 * ad3 - r7 * ad2 + r8 * ad1,
            0.0,
            0.0,
        ];
        match form {
            Form::Corrected => {
                ab[2] = r3 + r5 * ad3 - r6 * ad4 + r7 * ad1 + r8 * ad2;
                ab[4] = r5 * ad5 - r6 * ad6 + r7 * ad5 + r8 * ad6;
                ab[5] = r5 * ad6 + r6 * ad5 - r7 * ad6 + r8 * ad5;
            }
            Form::Verbatim => {
                ab[2] = r3 + r5 * ad3 - r6 * ad4 + r7 * ad1 - r8 * ad2;
                ab[4] = r5 * ad5 - r6 * ad6 + r7 * ad5 - r8 * ad6;
                ab[5] = r5 * ad6 - r6 * ad5 - r7 * ad6 - r8 * ad5;
            }
        }
        let [ab1, ab2, ab3, ab4, ab5, ab6] = ab;

        let den = ab1 * ab1 + ab2 * ab2 - ab3 * ab3 - ab4 * ab4;
        let den_scale = ab1 * ab1 + ab2 * ab2 + ab3 * ab3 + ab4 * ab4;
        if den == 0.0 || !((den / den_scale).abs() > SINGULAR_TOLERANCE) {
            return Err(Error::Singular(format!(
                "bright-mode denominator vanishes ({den:.3e})"
            )));
        }

        let f_a1 = (ab1 * r9 - ab2 * r10 + ab3 * r9 + ab4 * r10) / den;
        let f_a2 = match form {
            Form::Corrected => (ab1 * r10 + ab2 * r9 - ab3 * r10 + ab4 * r9) / den,
            Form::Verbatim => (ab1 * r10 + ab2 * r9 - ab3 * r10 + ab4 * r6) / den,
        };
        let g_a1 = (ab1 * ab5 - ab2 * ab6 + ab3 * ab5 + ab4 * ab6) / den;
        let g_a2 = (ab2 * ab5 + ab1 * ab6 - ab3 * ab6 + ab4 * ab5) / den;
        let h_a1 = ad1 * f_a1 - ad2 * f_a2 + ad3 * f_a1 + ad4 * f_a2;
        let h_a2 = ad1 * f_a2 + ad2 * f_a1 - ad3 * f_a2 + ad4 * f_a1;
        let j_a1 = ad1 * g_a1 - ad2 * g_a2 + ad3 * g_a1 + ad4 * g_a2 + ad5;
        let j_a2 = ad1 * g_a2 + ad2 * g_a1 - ad3 * g_a2 + ad4 * g_a1 + ad6;

        Ok(Self {
            form,
            coefficients: co,
            b_r,
            dark_denominator,
            r,
            a_d: ad,
            a_b: ab,
            f_a1,
            f_a2,
            g_a1,
            g_a2,
            h_a1,
            h_a2,
            j_a1,
            j_a2,
        })
    }

    /// `1 − |A_B3 + iA_B4|²/|A_B1 + iA_B2|²`, the relative size of the
    /// bright-mode denominator.
    pub fn relative_bright_denominator(&self) -> f64 {
        let [ab1, ab2, ab3, ab4, _, _] = self.a_b;
        (ab1 * ab1 + ab2 * ab2 - ab3 * ab3 - ab4 * ab4) / (ab1 * ab1 + ab2 * ab2)
    }

    pub fn state(&self) -> DarkBrightState {
        let (a1, a2) = (self.coefficients.a_1, self.coefficients.a_2);
        DarkBrightState {
            a_b: Complex64::new(self.f_a1, self.f_a2) * a1 + Complex64::new(self.g_a1, self.g_a2) * a2,
            a_d: Complex64::new(self.h_a1, self.h_a2) * a1 + Complex64::new(self.j_a1, self.j_a2) * a2,
        }
    }
}

/// Closed-form bright/dark steady state (corrected transcription).
pub fn steady_dark_bright(params: &SystemParams) -> Result<DarkBrightState> {
    steady_dark_bright_with(params, Form::Corrected)
}

pub fn steady_dark_bright_with(params: &SystemParams, form: Form) -> Result<DarkBrightState> {
    if params.kappa1 != params.kappa2 {
        return Err(Error::Contract(format!(
            "kappa1 = kappa2 required (got {} vs {})",
            params.kappa1, params.kappa2
        )));
    }
    Ok(DarkBrightIntermediates::new(params, form)?.state())
}

/// Bright/dark amplitudes of the canonical linear solve. Works for any valid
/// parameter set with `G̃ > 0`.
pub fn canonical_dark_bright(params: &SystemParams) -> Result<DarkBrightState> {
    let steady = solve_steady_numeric(params)?;
    transform(&steady.amplitudes, params.g1, params.g2)
}
