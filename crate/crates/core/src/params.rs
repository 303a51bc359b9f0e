//! Physical constants, crystal geometry and the dimensionless model parameters.
//!
//! Everything the solvers consume lives in [`SystemParams`] and is expressed in
//! units of the mode-1 cavity decay rate, so `kappa1` is pinned to one. SI
//! quantities only enter through [`compute_g0`] and [`brillouin_frequency`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vacuum speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Quartz crystal and cavity geometry, SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrystalParams {
    /// Refractive index of the crystal.
    pub n: f64,
    /// Effective refractive index of the optical mode.
    pub n_eff: f64,
    /// Photoelastic constant.
    pub p13: f64,
    /// Mass density, kg/m³.
    pub rho: f64,
    /// Cross-section area, m².
    #[serde(rename = "A")]
    pub area: f64,
    /// Crystal thickness, m.
    #[serde(rename = "L_ac")]
    pub l_ac: f64,
    /// Mirror spacing, m.
    #[serde(rename = "L_opt")]
    pub l_opt: f64,
    /// Speed of sound in the crystal, m/s.
    pub v_a: f64,
}

impl CrystalParams {
    /// Lists every violated invariant; empty when the set is usable.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let fields = [
            ("n", self.n),
            ("n_eff", self.n_eff),
            ("p13", self.p13),
            ("rho", self.rho),
            ("A", self.area),
            ("L_ac", self.l_ac),
            ("L_opt", self.l_opt),
            ("v_a", self.v_a),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                out.push(format!("{name} > 0 violated (got {value})"));
            }
        }
        if self.l_ac > self.l_opt {
            out.push(format!(
                "L_ac ≤ L_opt violated ({} > {})",
                self.l_ac, self.l_opt
            ));
        }
        if !(1.0..=5.0).contains(&self.n) {
            out.push(format!("1 ≤ n ≤ 5 violated (got {})", self.n));
        }
        out
    }

    pub fn validate(self) -> Result<Self> {
        let v = self.violations();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::Invalid(v))
        }
    }
}

/// Dimensionless parameters of the linearized three-mode model, in units of
/// the mode-1 decay rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams {
    /// Mode-1 detuning from the pump.
    pub delta1: f64,
    /// Mode-2 detuning from the pump.
    pub delta2: f64,
    /// Phonon frequency.
    pub omega_m: f64,
    /// Mode-1 decay rate, the unit of every other rate.
    #[serde(default = "one")]
    pub kappa1: f64,
    pub kappa2: f64,
    pub gamma_m: f64,
    /// Linearized optical beam-splitter coupling.
    pub g_m: f64,
    /// Mode-1/phonon coupling (two-mode squeezing type, a₁ ↔ b*).
    pub g1: f64,
    /// Mode-2/phonon coupling (beam-splitter type, a₂ ↔ b).
    pub g2: f64,
    pub kappa1_ext: f64,
    pub kappa2_ext: f64,
    /// Pump amplitude; every reported intensity is normalized by it.
    #[serde(default = "one")]
    pub alpha_p: f64,
}

fn one() -> f64 {
    1.0
}

/// Fraction of each cavity decay rate that leaks through the coupling port
/// in the preset parameter sets.
pub const DEFAULT_OUTPUT_COUPLING: f64 = 0.5;

/// Mode-2 decay rate shared by the conversion presets.
pub const CONVERSION_KAPPA2: f64 = 2.0;
/// Mode-2 detuning shared by the conversion presets.
pub const CONVERSION_DELTA2: f64 = 0.9;
/// Phonon frequency shared by every preset.
pub const PRESET_OMEGA_M: f64 = 1.242;
/// Optical beam-splitter coupling shared by every preset.
pub const PRESET_G_M: f64 = 0.025;

impl SystemParams {
    /// Conversion preset: κ₂ = 2, Δ₂ = 0.9, Δ₁ = Δ₂ − Ω_m, Ω_m = 1.242,
    /// G_m = 0.025 with the given phonon damping and mode-1 coupling. `g2`
    /// starts at zero and is normally set by a sweep.
    pub fn conversion(gamma_m: f64, g1: f64) -> Self {
        let kappa2 = CONVERSION_KAPPA2;
        Self {
            delta1: CONVERSION_DELTA2 - PRESET_OMEGA_M,
            delta2: CONVERSION_DELTA2,
            omega_m: PRESET_OMEGA_M,
            kappa1: 1.0,
            kappa2,
            gamma_m,
            g_m: PRESET_G_M,
            g1,
            g2: 0.0,
            kappa1_ext: DEFAULT_OUTPUT_COUPLING,
            kappa2_ext: DEFAULT_OUTPUT_COUPLING * kappa2,
            alpha_p: 1.0,
        }
    }

    /// Dark/bright preset: κ₁ = κ₂, Δ₂ = 0, Δ₁ = −Ω_m, γₘ = 0.2, G₁ = 0.6.
    pub fn dark_bright(g2: f64) -> Self {
        Self {
            delta1: -PRESET_OMEGA_M,
            delta2: 0.0,
            omega_m: PRESET_OMEGA_M,
            kappa1: 1.0,
            kappa2: 1.0,
            gamma_m: 0.2,
            g_m: PRESET_G_M,
            g1: 0.6,
            g2,
            kappa1_ext: DEFAULT_OUTPUT_COUPLING,
            kappa2_ext: DEFAULT_OUTPUT_COUPLING,
            alpha_p: 1.0,
        }
    }

    /// Amplitude of the pump term entering the mode-1 equation, √κ₁ᵉˣᵗ·α_p.
    pub fn pump_rate(&self) -> f64 {
        self.kappa1_ext.sqrt() * self.alpha_p
    }

    pub fn cooperativities(&self) -> Result<Cooperativities> {
        Ok(Cooperativities {
            c1: cooperativity(self.g1, self.gamma_m, self.kappa1)?,
            c2: cooperativity(self.g2, self.gamma_m, self.kappa2)?,
        })
    }

    /// Lists every violated invariant; empty when the set is usable.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let all = [
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("omega_m", self.omega_m),
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("gamma_m", self.gamma_m),
            ("g_m", self.g_m),
            ("g1", self.g1),
            ("g2", self.g2),
            ("kappa1_ext", self.kappa1_ext),
            ("kappa2_ext", self.kappa2_ext),
            ("alpha_p", self.alpha_p),
        ];
        for (name, value) in all {
            if !value.is_finite() {
                out.push(format!("{name} finite violated (got {value})"));
            }
        }
        if self.kappa1 != 1.0 {
            out.push(format!("kappa1 = 1 violated (got {})", self.kappa1));
        }
        for (name, value) in [
            ("kappa2", self.kappa2),
            ("gamma_m", self.gamma_m),
            ("omega_m", self.omega_m),
        ] {
            if !(value > 0.0) {
                out.push(format!("{name} > 0 violated (got {value})"));
            }
        }
        for (name, ext, total) in [
            ("kappa1_ext", self.kappa1_ext, self.kappa1),
            ("kappa2_ext", self.kappa2_ext, self.kappa2),
        ] {
            if !(ext > 0.0) {
                out.push(format!("{name} > 0 violated (got {ext})"));
            }
            if ext > total {
                out.push(format!("{name}: κ_ext ≤ κ violated ({ext} > {total})"));
            }
        }
        for (name, value) in [("g_m", self.g_m), ("g1", self.g1), ("g2", self.g2)] {
            if !(value >= 0.0) {
                out.push(format!("{name} ≥ 0 violated (got {value})"));
            }
        }
        if !(self.alpha_p >= 0.0) {
            out.push(format!("alpha_p ≥ 0 violated (got {})", self.alpha_p));
        }
        out
    }

    /// Returns the parameter set unchanged when every invariant holds.
    pub fn validate(self) -> Result<Self> {
        validate(self)
    }
}

/// Returns `params` untouched if valid, otherwise the list of violations.
pub fn validate(params: SystemParams) -> Result<SystemParams> {
    let v = params.violations();
    if v.is_empty() {
        Ok(params)
    } else {
        Err(Error::Invalid(v))
    }
}

/// Mode cooperativities C₁ and C₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cooperativities {
    pub c1: f64,
    pub c2: f64,
}

fn require_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive (got {value})")))
    }
}

/// Single-photon optomechanical coupling rate in rad/s.
///
/// `omega1` and `omega_m` are the optical and acoustic angular frequencies.
pub fn compute_g0(crystal: &CrystalParams, omega1: f64, omega_m: f64, hbar: f64) -> Result<f64> {
    crystal.validate()?;
    require_positive("omega1", omega1)?;
    require_positive("omega_m", omega_m)?;
    require_positive("hbar", hbar)?;
    let c = crystal;
    let prefactor = omega1 * omega1 * c.n.powi(5) * c.p13 / (2.0 * SPEED_OF_LIGHT * c.n_eff * c.n_eff);
    let zero_point = (hbar / (c.rho * c.area * c.l_ac * omega_m)).sqrt();
    Ok(prefactor * zero_point * (c.l_ac / c.l_opt))
}

/// Brillouin frequency 2ωⱼ n v_a / v_c. The light speed is explicit because
/// vacuum and in-medium choices give different answers.
pub fn brillouin_frequency(omega_j: f64, n: f64, v_a: f64, v_c: f64) -> Result<f64> {
    require_positive("omega_j", omega_j)?;
    require_positive("n", n)?;
    require_positive("v_a", v_a)?;
    require_positive("v_c", v_c)?;
    Ok(2.0 * omega_j * n * v_a / v_c)
}

/// Cooperativity 4g²/(γₘκ).
pub fn cooperativity(g: f64, gamma_m: f64, kappa: f64) -> Result<f64> {
    require_positive("gamma_m", gamma_m)?;
    require_positive("kappa", kappa)?;
    if !g.is_finite() {
        return Err(Error::Domain(format!("coupling must be finite (got {g})")));
    }
    Ok(4.0 * g * g / (gamma_m * kappa))
}

/// Nonnegative coupling that yields cooperativity `c`.
pub fn coupling_from_cooperativity(c: f64, gamma_m: f64, kappa: f64) -> Result<f64> {
    require_positive("gamma_m", gamma_m)?;
    require_positive("kappa", kappa)?;
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::Domain(format!(
            "cooperativity must be nonnegative (got {c})"
        )));
    }
    Ok((c * gamma_m * kappa).sqrt() / 2.0)
}
