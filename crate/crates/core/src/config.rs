//! Run configuration: a TOML document with optional `[physical]` and
//! `[system]` tables plus `key=value` overrides.
//!
//! Every key is checked against a fixed list and anything unknown is an
//! error. Keys not given fall back to [`RunParams::default`].

use std::f64::consts::PI;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{
    coupling_from_cooperativity, CrystalParams, SystemParams, CONVERSION_KAPPA2, SPEED_OF_LIGHT,
};

/// Keys accepted in the `[system]` table.
pub const SYSTEM_KEYS: [&str; 12] = [
    "delta1",
    "delta2",
    "omega_m",
    "kappa1",
    "kappa2",
    "gamma_m",
    "g_m",
    "g1",
    "g2",
    "kappa1_ext",
    "kappa2_ext",
    "alpha_p",
];

/// Keys accepted in the `[physical]` table.
pub const PHYSICAL_KEYS: [&str; 11] = [
    "n", "n_eff", "p13", "rho", "A", "L_ac", "L_opt", "v_a", "omega1", "omega_m", "v_c",
];

/// SI inputs for the coupling rate and the Brillouin frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConfig {
    pub crystal: CrystalParams,
    /// Optical angular frequency, rad/s.
    pub omega1: f64,
    /// Acoustic angular frequency, rad/s.
    pub omega_m: f64,
    /// Light speed used in the Brillouin condition, m/s.
    pub v_c: f64,
}

impl PhysicalConfig {
    /// Quartz slab in a 10 mm cavity pumped near 0.99 THz.
    pub fn reference() -> Self {
        Self {
            crystal: CrystalParams {
                n: 2.15,
                n_eff: 2.1,
                p13: 0.27,
                rho: 2648.0,
                area: PI * 43e-6 * 43e-6,
                l_ac: 5e-3,
                l_opt: 10e-3,
                v_a: 6327.0,
            },
            omega1: 2.0 * PI * 0.99e12,
            omega_m: 2.0 * PI * 90.63e6,
            v_c: SPEED_OF_LIGHT,
        }
    }

    fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let c = &mut self.crystal;
        let slot = match key {
            "n" => &mut c.n,
            "n_eff" => &mut c.n_eff,
            "p13" => &mut c.p13,
            "rho" => &mut c.rho,
            "A" => &mut c.area,
            "L_ac" => &mut c.l_ac,
            "L_opt" => &mut c.l_opt,
            "v_a" => &mut c.v_a,
            "omega1" => &mut self.omega1,
            "omega_m" => &mut self.omega_m,
            "v_c" => &mut self.v_c,
            _ => return Err(unknown_key("physical", key)),
        };
        *slot = value;
        Ok(())
    }

    pub fn validate(self) -> Result<Self> {
        let mut v = self.crystal.violations();
        for (name, value) in [
            ("omega1", self.omega1),
            ("omega_m", self.omega_m),
            ("v_c", self.v_c),
        ] {
            if !(value.is_finite() && value > 0.0) {
                v.push(format!("{name} > 0 violated (got {value})"));
            }
        }
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::Invalid(v))
        }
    }
}

/// Sets one `SystemParams` field by its configuration name.
pub fn set_system_field(p: &mut SystemParams, key: &str, value: f64) -> Result<()> {
    let slot = match key {
        "delta1" => &mut p.delta1,
        "delta2" => &mut p.delta2,
        "omega_m" => &mut p.omega_m,
        "kappa1" => &mut p.kappa1,
        "kappa2" => &mut p.kappa2,
        "gamma_m" => &mut p.gamma_m,
        "g_m" => &mut p.g_m,
        "g1" => &mut p.g1,
        "g2" => &mut p.g2,
        "kappa1_ext" => &mut p.kappa1_ext,
        "kappa2_ext" => &mut p.kappa2_ext,
        "alpha_p" => &mut p.alpha_p,
        _ => return Err(unknown_key("system", key)),
    };
    *slot = value;
    Ok(())
}

fn unknown_key(section: &str, key: &str) -> Error {
    Error::Unknown {
        kind: "configuration key",
        name: format!("{section}.{key}"),
    }
}

/// Parameters for one CLI run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunParams {
    pub physical: Option<PhysicalConfig>,
    pub system: SystemParams,
}

impl Default for RunParams {
    /// Conversion preset with γₘ = 0.3, G₁ = 0.4 and G₂ set by C₂ = 4.
    fn default() -> Self {
        let mut system = SystemParams::conversion(0.3, 0.4);
        system.g2 = coupling_from_cooperativity(4.0, 0.3, CONVERSION_KAPPA2)
            .expect("preset cooperativity is valid");
        Self {
            physical: None,
            system,
        }
    }
}

impl RunParams {
    /// Starts from `system` with no physical section.
    pub fn with_system(system: SystemParams) -> Self {
        Self {
            physical: None,
            system,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let mut out = Self::default();
        out.apply_toml_str(text)?;
        Ok(out)
    }

    /// Overlays the keys of a TOML document onto `self`.
    pub fn apply_toml_str(&mut self, text: &str) -> Result<()> {
        for (key, value) in parse_sections(text)? {
            self.set(&key, value)?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut out = Self::default();
        out.apply_file(path)?;
        Ok(out)
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        self.apply_toml_str(&read(path)?)
    }

    /// Applies one override. `key` is `section.name` or a bare name; bare
    /// names resolve to `[system]` first, then `[physical]`.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let (section, name) = match key.split_once('.') {
            Some((s, n)) => (s, n),
            None if SYSTEM_KEYS.contains(&key) => ("system", key),
            None if PHYSICAL_KEYS.contains(&key) => ("physical", key),
            None => return Err(unknown_key("system", key)),
        };
        match section {
            "system" => set_system_field(&mut self.system, name, value),
            "physical" => self
                .physical
                .get_or_insert_with(PhysicalConfig::reference)
                .set(name, value),
            other => Err(Error::Unknown {
                kind: "configuration section",
                name: other.to_string(),
            }),
        }
    }

    /// Parses and applies `key=value`.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{assignment}` is not key=value")))?;
        let value: f64 = raw
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("override `{assignment}`: not a number")))?;
        self.set(key.trim(), value)
    }

    pub fn validate(self) -> Result<Self> {
        let mut v = self.system.violations();
        if let Some(p) = self.physical {
            if let Err(Error::Invalid(more)) = p.validate() {
                v.extend(more);
            }
        }
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::Invalid(v))
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

/// Flattens a configuration document into `section.key` assignments in
/// document order, rejecting unknown sections and keys.
pub fn parse_sections(text: &str) -> Result<Vec<(String, f64)>> {
    let doc: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
    let mut out = Vec::new();
    for (section, body) in &doc {
        let table = body
            .as_table()
            .ok_or_else(|| Error::Config(format!("`{section}` must be a table")))?;
        let known: &[&str] = match section.as_str() {
            "system" => &SYSTEM_KEYS,
            "physical" => &PHYSICAL_KEYS,
            other => {
                return Err(Error::Unknown {
                    kind: "configuration section",
                    name: other.to_string(),
                })
            }
        };
        for (key, value) in table {
            if !known.contains(&key.as_str()) {
                return Err(unknown_key(section, key));
            }
            out.push((format!("{section}.{key}"), number(section, key, value)?));
        }
    }
    Ok(out)
}

/// `[system]` assignments of a configuration file, bare key names.
pub fn system_assignments(path: &Path) -> Result<Vec<(String, f64)>> {
    Ok(parse_sections(&read(path)?)?
        .into_iter()
        .filter_map(|(k, v)| k.strip_prefix("system.").map(|k| (k.to_string(), v)))
        .collect())
}

fn number(section: &str, key: &str, value: &toml::Value) -> Result<f64> {
    match value {
        toml::Value::Float(x) => Ok(*x),
        toml::Value::Integer(i) => Ok(*i as f64),
        _ => Err(Error::Config(format!("{section}.{key} must be a number"))),
    }
}
