//! The typo ledger: printed expressions and parameter statements next to
//! their re-derived or adopted replacements.
//!
//! Transcription entries are evaluated at fixed probe points. Each probe
//! isolates one correction: the printed expression is fed the corrected
//! values of every other symbol, so a divergence is attributable to that
//! entry alone. The `*-combined` entries compare the full printed and
//! corrected chains. Figure-claim entries carry the computed curve whenever
//! the claim does not hold on the grid.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::closed_form::{conversion_efficiency_closed, ClosedFormIntermediates, Form};
use crate::dark_bright::{
    canonical_dark_bright, coefficients_with, steady_dark_bright_with, DarkBrightIntermediates,
};
use crate::error::Result;
use crate::params::{brillouin_frequency, coupling_from_cooperativity, SystemParams, SPEED_OF_LIGHT};
use crate::sweep::{figure_dataset, run_sweep, Figure, FigureCurve, Observable, SweepParameter, SweepSpec, Trend, G2_RANGE};

/// Relative difference above which a probe counts as diverging.
pub const DIVERGENCE_THRESHOLD: f64 = 1e-6;

/// Identifiers of every correction to the mode-1/mode-2 closed forms.
pub const INTENSITY_CORRECTIONS: &[&str] = &[
    "mode1-m-coefficients",
    "mode1-l2",
    "mode1-a1r",
    "mode1-a1i",
    "mode1-denominator",
    "mode2-h2",
    "efficiency-numerator",
];

/// Identifiers of every correction to the bright/dark closed forms and
/// coefficient block.
pub const DARK_BRIGHT_CORRECTIONS: &[&str] = &[
    "darkbright-gbd",
    "darkbright-br",
    "darkbright-ad",
    "darkbright-r",
    "darkbright-ab3",
    "darkbright-ab5-ab6",
    "darkbright-fa2",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    /// A printed expression that disagrees with the equations of motion.
    Transcription,
    /// Notation or labelling that is inconsistent but numerically harmless
    /// once read correctly.
    Notation,
    /// A stated parameter or convention that conflicts with another.
    Parameter,
    /// An ordinal statement about a figure, checked on the computed grid.
    FigureClaim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Holds,
    Fails,
}

/// Printed and corrected values of one quantity at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Probe {
    pub point: String,
    pub printed: Vec<f64>,
    pub corrected: Vec<f64>,
    pub relative_difference: f64,
    pub diverges: bool,
}

impl Probe {
    pub fn new(point: impl Into<String>, printed: Vec<f64>, corrected: Vec<f64>) -> Self {
        let diff: f64 = printed
            .iter()
            .zip(&corrected)
            .map(|(p, c)| (p - c) * (p - c))
            .sum::<f64>()
            .sqrt();
        let scale: f64 = corrected.iter().map(|c| c * c).sum::<f64>().sqrt();
        let relative_difference = if scale > 0.0 {
            diff / scale
        } else {
            diff
        };
        Self {
            point: point.into(),
            printed,
            corrected,
            relative_difference,
            diverges: relative_difference > DIVERGENCE_THRESHOLD,
        }
    }
}

/// Computed curve attached to a failed claim or a parameter conflict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttachedCurve {
    pub label: String,
    pub parameter: String,
    pub observable: String,
    pub x: Vec<f64>,
    pub y: Vec<Option<f64>>,
}

impl AttachedCurve {
    fn from_figure(curve: &FigureCurve) -> Self {
        Self::from_column(&curve.label, &curve.result, curve.observable)
    }

    fn from_column(label: &str, result: &crate::sweep::SweepResult, observable: Observable) -> Self {
        Self {
            label: label.to_string(),
            parameter: result.spec.parameter.to_string(),
            observable: observable.to_string(),
            x: result.parameter.clone(),
            y: result.column(observable).map(<[_]>::to_vec).unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub id: String,
    pub kind: EntryKind,
    pub quantity: String,
    pub printed: String,
    pub corrected: String,
    pub note: String,
    pub probes: Vec<Probe>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<ClaimStatus>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<AttachedCurve>,
}

impl LedgerEntry {
    fn new(id: &str, kind: EntryKind, quantity: &str, printed: &str, corrected: &str, note: &str) -> Self {
        Self {
            id: id.into(),
            kind,
            quantity: quantity.into(),
            printed: printed.into(),
            corrected: corrected.into(),
            note: note.into(),
            probes: Vec::new(),
            status: None,
            curves: Vec::new(),
        }
    }

    fn probes(mut self, probes: Vec<Probe>) -> Self {
        self.probes = probes;
        self
    }

    fn claim(mut self, holds: bool, curves: Vec<AttachedCurve>) -> Self {
        self.status = Some(if holds { ClaimStatus::Holds } else { ClaimStatus::Fails });
        if !holds {
            self.curves = curves;
        }
        self
    }

    /// Parameter points where printed and corrected forms differ by more
    /// than [`DIVERGENCE_THRESHOLD`].
    pub fn divergent_points(&self) -> Vec<&str> {
        self.probes
            .iter()
            .filter(|p| p.diverges)
            .map(|p| p.point.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypoLedger {
    pub divergence_threshold: f64,
    pub entries: Vec<LedgerEntry>,
}

fn conversion_point(gamma_m: f64, c2: f64) -> Result<(String, SystemParams)> {
    let mut p = SystemParams::conversion(gamma_m, 0.4);
    p.g2 = coupling_from_cooperativity(c2, gamma_m, p.kappa2)?;
    Ok((format!("conversion gamma_m={gamma_m} g1=0.4 c2={c2}"), p))
}

/// Probe points for the mode-1/mode-2 closed forms.
pub fn conversion_probe_points() -> Result<Vec<(String, SystemParams)>> {
    [(0.3, 1.0), (0.3, 4.0), (0.3, 12.0), (0.45, 4.0)]
        .into_iter()
        .map(|(g, c)| conversion_point(g, c))
        .collect()
}

/// Probe points for the bright/dark closed forms.
pub fn dark_bright_probe_points() -> Vec<(String, SystemParams)> {
    [0.3, 0.6, 0.9]
        .into_iter()
        .map(|g2| (format!("dark/bright g2={g2}"), SystemParams::dark_bright(g2)))
        .collect()
}

fn probe_each<F>(points: &[(String, SystemParams)], mut f: F) -> Result<Vec<Probe>>
where
    F: FnMut(&SystemParams) -> Result<(Vec<f64>, Vec<f64>)>,
{
    points
        .iter()
        .map(|(label, p)| {
            let (printed, corrected) = f(p)?;
            Ok(Probe::new(label.clone(), printed, corrected))
        })
        .collect()
}

fn c2v(z: Complex64) -> Vec<f64> {
    vec![z.re, z.im]
}

fn intensity_entries(points: &[(String, SystemParams)]) -> Result<Vec<LedgerEntry>> {
    use EntryKind::*;
    let cf = |p: &SystemParams| ClosedFormIntermediates::new(p, Form::Corrected);
    let mut out = Vec::new();

    out.push(
        LedgerEntry::new(
            "mode1-m-coefficients",
            Transcription,
            "m₁, m₂: coefficient of a₁* after eliminating b and a₂",
            "m₁ = −G_m√C₁√C₂ (γₘ√(κ₁κ₂)/4) [2D₁Ω_m + D₂Ω_m]; no imaginary part",
            "m₁ = −2G_mG₁G₂D₁Ω_m, m₂ = −G_mG₁G₂D₁γₘ",
            "The a₁* coefficient is −G_mG₁G₂D₁(2Ω_m + iγₘ) scaled by |D₁+iD₂|². \
             The printed form mixes in a D₂ term and drops the imaginary part.",
        )
        .probes(probe_each(points, |p| {
            let c = cf(p)?;
            let printed = -p.g_m * p.g1 * p.g2 * (2.0 * c.d1 * p.omega_m + c.d2 * p.omega_m);
            Ok((vec![printed, 0.0], vec![c.m1, c.m2]))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "mode1-l2",
            Transcription,
            "l₂: imaginary part of the a₁ coefficient",
            "l₂ = D₄(D₁² + D₂²) − |N₁|²D₁ + |N₂|²D₂",
            "l₂ = D₄(D₁² + D₂²) − |N₁|²D₂ + |N₂|²D₂",
            "Both coupling terms carry D₂; the printed |N₁|² term has D₁.",
        )
        .probes(probe_each(points, |p| {
            let c = cf(p)?;
            let dd = c.d1 * c.d1 + c.d2 * c.d2;
            let printed = c.d4 * dd - c.cap_n1.norm_sqr() * c.d1 + c.cap_n2 * c.cap_n2 * c.d2;
            Ok((vec![printed], vec![c.l2]))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "mode1-a1r",
            Transcription,
            "A₁R: real numerator of a₁",
            "A₁R = n₁(m₁ + l₁) + n₂l₂",
            "A₁R = n₁(l₁ + m₁) + n₂(l₂ + m₂)",
            "Follows from the missing m₂.",
        )
        .probes(probe_each(points, |p| {
            let c = cf(p)?;
            Ok((vec![c.n1 * (c.m1 + c.l1) + c.n2 * c.l2], vec![c.a1r]))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "mode1-a1i",
            Transcription,
            "A₁I: imaginary numerator of a₁",
            "A₁I = n₂(l₁ − m₁) − n₁l₁",
            "A₁I = n₂(l₁ − m₁) − n₁(l₂ − m₂)",
            "Solving L a₁ + M a₁* = n with its conjugate gives a₁ = (L* n − M n*)/(|L|² − |M|²); \
             the n₁ term multiplies l₂ − m₂, not l₁.",
        )
        .probes(probe_each(points, |p| {
            let c = cf(p)?;
            Ok((vec![c.n2 * (c.l1 - c.m1) - c.n1 * c.l1], vec![c.a1i]))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "mode1-denominator",
            Transcription,
            "denominator of |a₁|²",
            "[l₁² + l₂² − m₁²]²",
            "[l₁² + l₂² − m₁² − m₂²]²",
            "|L|² − |M|² with M complex.",
        )
        .probes(probe_each(points, |p| {
            let c = cf(p)?;
            let printed = c.l1 * c.l1 + c.l2 * c.l2 - c.m1 * c.m1;
            Ok((vec![printed * printed], vec![c.denominator_mode1().powi(2)]))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "mode2-h2",
            Transcription,
            "h₂: imaginary drive term of a₂",
            "h₂ = A_p[D₃G_m(Ω_m² + γₘ²/4) − N₂(D₄γₘ/2 − Ω_mD₃)]",
            "h₂ = A_p[D₃G_m(Ω_m² + γₘ²/4) − N₂(D₄γₘ/2 + Ω_mD₃)]",
            "Sign of the Ω_mD₃ term; h₁ is correct as printed.",
        )
        .probes(probe_each(points, |p| {
            let c = cf(p)?;
            let s = p.omega_m * p.omega_m + p.gamma_m * p.gamma_m / 4.0;
            let printed = c.a_p
                * (c.d3 * p.g_m * s - c.cap_n2 * (c.d4 * p.gamma_m / 2.0 - p.omega_m * c.d3));
            Ok((vec![printed], vec![c.h2]))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "efficiency-numerator",
            Transcription,
            "conversion efficiency η",
            "η = η₁η₂κ₁κ₂(Ã₂R + Ã₂I)/[(R₁² + R₂²) − (f₁² + f₂²)]²",
            "η = η₁η₂κ₁κ₂(Ã₂R² + Ã₂I²)/[(R₁² + R₂²) − (f₁² + f₂²)]²",
            "η = κ₂ᵉˣᵗ|a₂|²/|α_p|² needs the squared modulus; the printed numerator is not \
             even sign definite. Evaluated with the corrected A₂R, A₂I.",
        )
        .probes(probe_each(points, |p| {
            let c = cf(p)?;
            let den = c.denominator_mode2();
            let (ar, ai) = (c.a2r / c.a_p, c.a2i / c.a_p);
            let pre = p.kappa1_ext * p.kappa2_ext / (den * den);
            Ok((
                vec![pre * (ar + ai)],
                vec![conversion_efficiency_closed(p, Form::Corrected)?],
            ))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "mode1-intensity-combined",
            Transcription,
            "|a₁|² through the full printed chain",
            "|a₁|² from the printed m₁, l₂, A₁R, A₁I and denominator",
            "|a₁|² from the corrected chain (equal to the linear solve)",
            "All mode-1 transcriptions at once.",
        )
        .probes(probe_each(points, |p| {
            let v = ClosedFormIntermediates::new(p, Form::Verbatim)?.intensity_mode1()?;
            Ok((vec![v], vec![cf(p)?.intensity_mode1()?]))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "mode2-intensity-combined",
            Transcription,
            "|a₂|² through the full printed chain",
            "|a₂|² from the printed h₂",
            "|a₂|² from the corrected chain (equal to the linear solve)",
            "All mode-2 transcriptions at once.",
        )
        .probes(probe_each(points, |p| {
            let v = ClosedFormIntermediates::new(p, Form::Verbatim)?.intensity_mode2()?;
            Ok((vec![v], vec![cf(p)?.intensity_mode2()?]))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "n1-modulus-label",
            Notation,
            "N₁",
            "|N₁| = G_mΩ_m + iG_mγₘ/2",
            "N₁ = G_mΩ_m + iG_mγₘ/2, entering only as |N₁|² = G_m²(Ω_m² + γₘ²/4)",
            "A complex number labelled as a modulus. Reading |N₁|² literally as the square of \
             the printed right-hand side gives a different (complex) value; the probe compares \
             its real part.",
        )
        .probes(probe_each(points, |p| {
            let c = cf(p)?;
            Ok((vec![(c.cap_n1 * c.cap_n1).re], vec![c.cap_n1.norm_sqr()]))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "n2-square",
            Notation,
            "N₂ in R₁, R₂",
            "N₂² (and |N₂| = G₂G₁)",
            "|N₂|² = G₁²G₂²",
            "N₂ is real, so N₂² and |N₂|² coincide; listed for completeness.",
        )
        .probes(probe_each(points, |p| {
            let c = cf(p)?;
            Ok((vec![c.cap_n2 * c.cap_n2], vec![(p.g1 * p.g2).powi(2)]))
        })?),
    );

    Ok(out)
}

fn dark_bright_entries(points: &[(String, SystemParams)]) -> Result<Vec<LedgerEntry>> {
    use EntryKind::*;
    let db = |p: &SystemParams| DarkBrightIntermediates::new(p, Form::Corrected);
    let phonon = |p: &SystemParams| p.omega_m * p.omega_m + p.gamma_m * p.gamma_m / 4.0;
    let mut out = Vec::new();

    out.push(
        LedgerEntry::new(
            "darkbright-double-definition",
            Notation,
            "second bright/dark definition",
            "â_B = (G₁â₁ + G₂â₂)/G̃,  â_B = (G₂â₁ − G₁â₂)/G̃",
            "â_B = (G₁â₁ + G₂â₂)/G̃,  â_D = (G₂â₁ − G₁â₂)/G̃",
            "Both definitions carry the bright label; the second is the dark mode, as the \
             following text uses both â_B and â_D. The probe shows the two printed \"â_B\" \
             populations from the linear solve disagree.",
        )
        .probes(probe_each(points, |p| {
            let s = canonical_dark_bright(p)?;
            Ok((vec![s.dark_population()], vec![s.bright_population()]))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "darkbright-g1-tilde-text",
            Notation,
            "G̃₁",
            "G̃₁ = √(G₁² + G₂²) (text after the definitions)",
            "G̃ = √(G₁² + G₂²), G̃₁ = G₁²/G̃, G̃₂ = G₂²/G̃",
            "The coefficient block uses G̃₁ = G₁²/G̃ and a bare G̃; only that reading is \
             self-consistent.",
        )
        .probes(probe_each(points, |p| {
            let g = p.g1.hypot(p.g2);
            Ok((vec![g], vec![p.g1 * p.g1 / g]))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "darkbright-gbd",
            Transcription,
            "G_bd: bright–dark exchange coupling",
            "G_bd = [G₁G₂Ω_m + G_m + G_m(G₂² − G₁²)]/G̃²",
            "G_bd = [G₁G₂Ω_m + G_m(G₂² − G₁²)]/G̃²",
            "The bare G_m has the wrong dimension next to G_m·G² terms; rotating \
             −Δ₁a₁†a₁ − G_m(a₁†a₂ + a₂†a₁) gives no such term.",
        )
        .probes(probe_each(points, |p| {
            Ok((
                vec![coefficients_with(p, Form::Verbatim)?.g_bd],
                vec![coefficients_with(p, Form::Corrected)?.g_bd],
            ))
        })?),
    );

    out.push(LedgerEntry::new(
        "darkbright-g12-term",
        Transcription,
        "G₁₂ term of the bright/dark Hamiltonian",
        "−ħG₁₂(â_D b̂ + b̂†â_D† − â_D†b̂ + b̂†â_D)",
        "−ħG₁₂(â_D b̂ + b̂†â_D† − â_D†b̂ − b̂†â_D)",
        "The printed combination is not Hermitian. The corrected form follows from \
         substituting the rotation into G₁(a₁b + b†a₁†) + G₂(a₂†b + b†a₂) and gives \
         ȧ_D ∋ iG₁₂(b* − b). Operator-level; checked through the closed form below.",
    ));

    out.push(LedgerEntry::new(
        "darkbright-g1-tilde-term",
        Transcription,
        "G̃₁ term of the bright/dark Hamiltonian",
        "−ħG̃₁(â_B†b̂ + b̂†â_B†)",
        "−ħG̃₁(â_B b̂ + b̂†â_B†)",
        "Mismatched daggers; the squeezing-type term pairs â_B with b̂. Operator-level.",
    ));

    out.push(
        LedgerEntry::new(
            "darkbright-br",
            Transcription,
            "B_R: phonon response seen by the optical modes",
            "B_R = Ω_m(G̃₁² + G̃₂²)/(Ω_m² + γₘ²/4), real",
            "B_R = [Ω_m(G̃₁ − G̃₂) − i(γₘ/2)(G̃₁ + G̃₂)]/(Ω_m² + γₘ²/4), complex",
            "Eliminating b gives b* − b = B_R a_B − B_R* a_B* + (2Ω_m/S)G₁₂(a_D − a_D*) with \
             S = Ω_m² + γₘ²/4. The printed form keeps only a real part and squares the tilde \
             couplings. Compared as (Re, Im).",
        )
        .probes(probe_each(points, |p| {
            let d = db(p)?;
            let co = d.coefficients;
            let printed = p.omega_m * (co.g1_tilde.powi(2) + co.g2_tilde.powi(2)) / phonon(p);
            Ok((vec![printed, 0.0], c2v(d.b_r)))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "darkbright-ad",
            Transcription,
            "A_D1…A_D4: dark amplitude in terms of a_B, a_B*",
            "A_D1 = −Δ_D(G_bd + G₁₂B_R)/(Δ_D² + κ²/4), A_D2 = (κ/2)(G_bd + G₁₂B_R)/(…), \
             A_D3 = Δ_DG₁₂B_R/(…), A_D4 = −(κ/2)G₁₂B_R/(…)",
            "with k = κ/2, c = 2G₁₂²Ω_m/S, ξ = G_bd + G₁₂B_R and denominator Δ_D² + k² + 2cΔ_D: \
             A_D1 = −Δ_Dξ_r − kξ_i − cG_bd, A_D2 = kξ_r − Δ_Dξ_i, \
             A_D3 = G₁₂(Δ_D Re B_R − k Im B_R) − cG_bd, A_D4 = −G₁₂(k Re B_R + Δ_D Im B_R)",
            "The dark mode drives the phonon too, which feeds back through c; the printed form \
             drops that feedback and the imaginary part of B_R. Evaluated with the printed B_R.",
        )
        .probes(probe_each(points, |p| {
            let d = db(p)?;
            let co = d.coefficients;
            let k = p.kappa1 / 2.0;
            let br = p.omega_m * (co.g1_tilde.powi(2) + co.g2_tilde.powi(2)) / phonon(p);
            let den = co.delta_d.powi(2) + k * k;
            let x = co.g_bd + co.g_12 * br;
            let printed = vec![
                -co.delta_d * x / den,
                k * x / den,
                co.delta_d * co.g_12 * br / den,
                -k * co.g_12 * br / den,
            ];
            Ok((printed, d.a_d[..4].to_vec()))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "darkbright-r",
            Transcription,
            "R₁…R₈: bright-mode equation after eliminating b",
            "R₁ = (Δ_B² + κ²/4)S + Ω_mΣΔ_B, R₂ = Ω_mκΣ/2, R₃ = −2ΣΩ_mΔ_B, R₄ = ΣΩ_mκ, \
             R₅ = −Δ_B[G_bdS + G₁₂Ω_mΣ], R₆ = (κ/2)[G_bdS + G₁₂Ω_mΣ], R₇ = −G₁₂Ω_mΔ_BΣ, \
             R₈ = G₁₂Ω_mκΣ/2 with Σ = G̃₁² + G̃₂²",
            "with k = κ/2, ν = (γₘ/2)(G̃₂² − G̃₁²): R₁ = (Δ_B² + k²)S + Δ_BΩ_mΣ + kν, \
             R₂ = kΩ_mΣ − Δ_Bν, R₃ = −2G̃₁G̃₂Ω_mΔ_B, R₄ = 2kG̃₁G̃₂Ω_m; with \
             X = SG_bd + G₁₂Ω_m(G̃₁ − G̃₂) − iG₁₂(γₘ/2)(G̃₁ + G̃₂): R₅ = −Δ_B Re X − k Im X, \
             R₆ = k Re X − Δ_B Im X; with Y = G₁₂Ω_m(G̃₁ − G̃₂) + i Im X: \
             R₇ = Δ_B Re Y + k Im Y, R₈ = Δ_B Im Y − k Re Y",
            "The printed set keeps only the real part of i/(iΩ_m + γₘ/2) and writes Σ where \
             G̃₁G̃₂ or ±(G̃₁ − G̃₂) belongs. R₉, R₁₀ are correct.",
        )
        .probes(probe_each(points, |p| {
            let d = db(p)?;
            let co = d.coefficients;
            let k = p.kappa1 / 2.0;
            let s = phonon(p);
            let om = p.omega_m;
            let db_ = co.delta_b;
            let sig = co.g1_tilde.powi(2) + co.g2_tilde.powi(2);
            let bracket = co.g_bd * s + co.g_12 * om * sig;
            let printed = vec![
                (db_ * db_ + k * k) * s + om * sig * db_,
                om * k * sig,
                -2.0 * sig * om * db_,
                sig * om * 2.0 * k,
                -db_ * bracket,
                k * bracket,
                -co.g_12 * om * db_ * sig,
                co.g_12 * om * k * sig,
            ];
            Ok((printed, d.r[..8].to_vec()))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "darkbright-ab3",
            Transcription,
            "A_B3",
            "A_B3 = R₃ + R₅A_D3 − R₆A_D4 + R₇A_D1 − R₈A_D2",
            "A_B3 = R₃ + R₅A_D3 − R₆A_D4 + R₇A_D1 + R₈A_D2",
            "Sign of the R₈A_D2 term. Evaluated with corrected R and A_D.",
        )
        .probes(probe_each(points, |p| {
            let d = db(p)?;
            let r = d.r;
            let a = d.a_d;
            let printed = r[2] + r[4] * a[2] - r[5] * a[3] + r[6] * a[0] - r[7] * a[1];
            Ok((vec![printed], vec![d.a_b[2]]))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "darkbright-ab5-ab6",
            Transcription,
            "A_B5, A_B6: dark-drive coefficients in the bright equation",
            "A_B5 = R₅A_D5 − R₆A_D6 + R₇A_D5 − R₈A_D6, A_B6 = R₅A_D6 − R₆A_D5 − R₇A_D6 − R₈A_D5",
            "A_B5 = R₅A_D5 − R₆A_D6 + R₇A_D5 + R₈A_D6, A_B6 = R₅A_D6 + R₆A_D5 − R₇A_D6 + R₈A_D5",
            "Three sign errors. Evaluated with corrected R and A_D.",
        )
        .probes(probe_each(points, |p| {
            let d = db(p)?;
            let r = d.r;
            let a = d.a_d;
            let printed = vec![
                r[4] * a[4] - r[5] * a[5] + r[6] * a[4] - r[7] * a[5],
                r[4] * a[5] - r[5] * a[4] - r[6] * a[5] - r[7] * a[4],
            ];
            Ok((printed, d.a_b[4..].to_vec()))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "darkbright-fa2",
            Transcription,
            "f_a2",
            "f_a2 = (A_B1R₁₀ + A_B2R₉ − A_B3R₁₀ + A_B4R₆)/(A_B1² + A_B2² − A_B3² − A_B4²)",
            "f_a2 = (A_B1R₁₀ + A_B2R₉ − A_B3R₁₀ + A_B4R₉)/(A_B1² + A_B2² − A_B3² − A_B4²)",
            "R₆ in place of R₉; f_a1 shows the pattern.",
        )
        .probes(probe_each(points, |p| {
            let d = db(p)?;
            let [ab1, ab2, ab3, ab4, _, _] = d.a_b;
            let r = d.r;
            let den = ab1 * ab1 + ab2 * ab2 - ab3 * ab3 - ab4 * ab4;
            let printed = (ab1 * r[9] + ab2 * r[8] - ab3 * r[9] + ab4 * r[5]) / den;
            Ok((vec![printed], vec![d.f_a2]))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "darkbright-ja1-duplicate",
            Notation,
            "J_a1",
            "J_a1 = A_D1g_a1 − A_D2g_a2 + A_D3g_a1 + A_D4g_a2 + A_D5, printed twice",
            "one J_a1, followed by J_a2",
            "A verbatim duplicate; both copies evaluate to the same value, so the probe shows \
             agreement.",
        )
        .probes(probe_each(points, |p| {
            let d = db(p)?;
            let [ad1, ad2, ad3, ad4, ad5, _] = d.a_d;
            let dup = ad1 * d.g_a1 - ad2 * d.g_a2 + ad3 * d.g_a1 + ad4 * d.g_a2 + ad5;
            Ok((vec![dup], vec![d.j_a1]))
        })?),
    );

    out.push(
        LedgerEntry::new(
            "darkbright-combined",
            Transcription,
            "(|a_B,S|², |a_D,S|²) through the full printed chain",
            "populations from the printed G_bd, B_R, A_D, R, A_B and f_a2",
            "populations from the corrected chain (equal to the transformed linear solve)",
            "All bright/dark transcriptions at once.",
        )
        .probes(probe_each(points, |p| {
            let v = steady_dark_bright_with(p, Form::Verbatim)?;
            let c = steady_dark_bright_with(p, Form::Corrected)?;
            Ok((
                vec![v.bright_population(), v.dark_population()],
                vec![c.bright_population(), c.dark_population()],
            ))
        })?),
    );

    Ok(out)
}

fn parameter_entries() -> Result<Vec<LedgerEntry>> {
    use EntryKind::*;
    let mut out = Vec::new();
    let omega1 = 2.0 * std::f64::consts::PI * 0.99e12;
    let (n, v_a) = (2.15, 6327.0);
    let two_pi = 2.0 * std::f64::consts::PI;
    let vacuum = brillouin_frequency(omega1, n, v_a, SPEED_OF_LIGHT)? / two_pi;
    let medium = brillouin_frequency(omega1, n, v_a, SPEED_OF_LIGHT / n)? / two_pi;
    out.push(
        LedgerEntry::new(
            "brillouin-frequency",
            Parameter,
            "Ω_m/2π from Ω_B = 2ω₁nv_a/v_c with ω₁ = 2π·0.99 THz, n = 2.15, v_a = 6327 m/s",
            "90.63 MHz (and 90.68 MHz elsewhere in the text)",
            &format!(
                "{:.4} MHz with v_c = c; {:.4} MHz with v_c = c/n",
                vacuum / 1e6,
                medium / 1e6
            ),
            "Neither reading of v_c reproduces the stated value. v_c stays an explicit input; \
             no value is treated as ground truth. Dimensionless runs use Ω_m = 1.242 κ₁.",
        )
        .probes(vec![
            Probe::new("v_c = c", vec![90.63e6], vec![vacuum]),
            Probe::new("v_c = c/n", vec![90.63e6], vec![medium]),
        ]),
    );
    out.push(LedgerEntry::new(
        "fig2-caption-gamma",
        Parameter,
        "γₘ of the solid curve in Fig. 2",
        "γₘ = 0.030κ₁ (caption)",
        "γₘ = 0.30κ₁",
        "The text and the Fig. 3 caption both use 0.30κ₁.",
    ));
    out.push(LedgerEntry::new(
        "fig4b-caption-gamma",
        Parameter,
        "γₘ in Fig. 4(b)",
        "γₘ = 1.242κ₁ (duplicates Ω_m)",
        "γₘ = 0.3κ₁, with G₁ set by C₁ ∈ {1.2, 2.13}",
        "C₁ = 2.13 at γₘ = 0.3 reproduces G₁ = 0.4, the value of the other panels.",
    ));
    out.push(LedgerEntry::new(
        "fig4-caption-detuning",
        Parameter,
        "mode-1 detuning in the Fig. 4 caption",
        "Δ₂ = −Ω_m + Δ₂",
        "Δ₁ = Δ₂ − Ω_m",
        "Same relation as the Fig. 2 caption.",
    ));
    out.push(LedgerEntry::new(
        "fig4-output-coupling",
        Parameter,
        "output coupling ratios η₁, η₂",
        "η₁ = η₂ (value not given)",
        "η₁ = η₂ = 0.5 in every preset",
        "η scales with η₁η₂ at fixed C₂, so peak locations and orderings are unaffected; \
         absolute η values are not comparable.",
    ));
    out.push(LedgerEntry::new(
        "detuning-sign-convention",
        Parameter,
        "optical detunings",
        "Δ₂/2π = 65.70 MHz, Δ₁/2π = −25 MHz with ω₁ − ω₂ = −Ω_m, while Δᵢ = ωᵢ − ω_p",
        "Δ₁ = Δ₂ − Ω_m, as in the figure captions",
        "65.70 − 90.63 ≈ −24.93 agrees numerically, but the stated ordering of ω₁, ω₂ and \
         the sign convention of Δᵢ are tangled.",
    ));
    out.push(LedgerEntry::new(
        "steady-state-pairing",
        Notation,
        "steady-state mean values",
        "\"a₁ˢ, b_mˢ and a₂ˢ are the steady state mean values of b_m, a₁ and a₂\"",
        "G_m = g₀|b_mˢ|, G₁ = g₀|a₁ˢ|, G₂ = g₀|a₂ˢ|",
        "The definitions preceding that sentence fix the pairing; the sentence lists it in \
         scrambled order.",
    ));
    Ok(out)
}

fn trend_name(t: Trend) -> &'static str {
    match t {
        Trend::StrictlyIncreasing => "strictly increasing",
        Trend::StrictlyDecreasing => "strictly decreasing",
        Trend::Unimodal => "single interior maximum",
        Trend::Other => "neither monotone nor unimodal",
        Trend::Incomplete => "has flagged rows",
    }
}

/// A curve with a single maximum: rising then falling, or monotone with the
/// maximum at a grid edge.
pub fn single_peaked(t: Trend) -> bool {
    matches!(
        t,
        Trend::Unimodal | Trend::StrictlyIncreasing | Trend::StrictlyDecreasing
    )
}

fn peak(c: &FigureCurve) -> (f64, f64) {
    c.result.argmax(c.observable).unwrap_or((f64::NAN, f64::NAN))
}

fn claim_entries() -> Result<Vec<LedgerEntry>> {
    use EntryKind::FigureClaim;
    let mut out = Vec::new();

    let fig2a = figure_dataset(Figure::Fig2a)?;
    let fig2b = figure_dataset(Figure::Fig2b)?;
    let mut shapes = Vec::new();
    let mut all_peaked = true;
    let mut attach = Vec::new();
    for (panel, curves) in [("fig2a", &fig2a), ("fig2b", &fig2b)] {
        for c in curves.iter() {
            let t = c.result.trend(c.observable);
            let (x, _) = peak(c);
            shapes.push(format!("{panel} {}: {} (argmax c2 = {x})", c.label, trend_name(t)));
            if !single_peaked(t) {
                all_peaked = false;
                attach.push(AttachedCurve::from_figure(c));
            }
        }
    }
    out.push(
        LedgerEntry::new(
            "claim-fig2-single-peak",
            FigureClaim,
            "shape of the emission curves versus C₂",
            "emission reaches a peak and then decreases with further increase in C₂",
            "each curve has a single maximum on the grid C₂ ∈ [0.1, 15]",
            &shapes.join("; "),
        )
        .claim(all_peaked, attach),
    );

    let mut order_ok = true;
    let mut notes = Vec::new();
    let mut attach = Vec::new();
    for (panel, curves) in [("fig2a", &fig2a), ("fig2b", &fig2b)] {
        let (x30, _) = peak(&curves[0]);
        let (x45, _) = peak(&curves[1]);
        notes.push(format!("{panel}: argmax c2 {x30} (gamma_m=0.3) vs {x45} (gamma_m=0.45)"));
        if !(x45 < x30) {
            order_ok = false;
            attach.extend(curves.iter().map(AttachedCurve::from_figure));
        }
    }
    out.push(
        LedgerEntry::new(
            "claim-fig2-peak-order",
            FigureClaim,
            "peak location versus γₘ",
            "the peak in the emission power is reached at lower C₂ for larger γₘ",
            "argmax C₂ for γₘ = 0.45 strictly below argmax for γₘ = 0.30, both modes",
            &notes.join("; "),
        )
        .claim(order_ok, attach),
    );

    let fig3b = figure_dataset(Figure::Fig3b)?;
    let (_, hi) = peak(&fig3b[0]);
    let (_, lo) = peak(&fig3b[1]);
    out.push(
        LedgerEntry::new(
            "claim-fig3b-c1",
            FigureClaim,
            "mode-2 emission versus C₁",
            "enhanced transfer from mode 1 to mode 2 as C₁ increases from 1.2 to 2.13",
            "peak i2 for C₁ = 2.13 exceeds peak i2 for C₁ = 1.2",
            &format!("panel-normalized peaks: {hi} (c1=2.13) vs {lo} (c1=1.2)"),
        )
        .claim(hi > lo, fig3b.iter().map(AttachedCurve::from_figure).collect()),
    );

    let fig4a = figure_dataset(Figure::Fig4a)?;
    let (x30, p30) = peak(&fig4a[0]);
    let (x45, p45) = peak(&fig4a[1]);
    let holds = p30 > p45 && (10.0..=14.0).contains(&x30) && x30 > x45;
    out.push(
        LedgerEntry::new(
            "claim-fig4a-peak",
            FigureClaim,
            "peak conversion efficiency versus γₘ",
            "the peak for lower γₘ is higher but attained at a larger C₂ = 12",
            "peak η(γₘ = 0.30) > peak η(γₘ = 0.45), its argmax in C₂ ∈ [10, 14] and above the \
             γₘ = 0.45 argmax",
            &format!("gamma_m=0.3: eta {p30} at c2 {x30}; gamma_m=0.45: eta {p45} at c2 {x45}"),
        )
        .claim(holds, fig4a.iter().map(AttachedCurve::from_figure).collect()),
    );

    let low = fig4a[0].result.values(Observable::Eta).unwrap_or_default();
    let high = fig4a[1].result.values(Observable::Eta).unwrap_or_default();
    let crossing = low
        .iter()
        .zip(&high)
        .zip(&fig4a[0].result.parameter)
        .find(|((l, h), _)| l > h)
        .map(|(_, x)| *x);
    let holds = crossing.is_some_and(|x| (8.0..=10.0).contains(&x));
    out.push(
        LedgerEntry::new(
            "claim-fig4a-crossing",
            FigureClaim,
            "crossing of the two efficiency curves",
            "till C₂ = 9 the conversion efficiency is higher for larger γₘ",
            "η(γₘ = 0.45) > η(γₘ = 0.30) below the crossing, crossing within C₂ ∈ [8, 10]",
            &match crossing {
                Some(x) => format!("first grid point with eta(0.3) > eta(0.45): c2 = {x}"),
                None => "the curves do not cross on the grid".to_string(),
            },
        )
        .claim(holds, fig4a.iter().map(AttachedCurve::from_figure).collect()),
    );

    let fig4b = figure_dataset(Figure::Fig4b)?;
    let (_, hi) = peak(&fig4b[0]);
    let (_, lo) = peak(&fig4b[1]);
    out.push(
        LedgerEntry::new(
            "claim-fig4b-c1",
            FigureClaim,
            "conversion efficiency versus C₁",
            "a higher C₁ yields higher mode conversion efficiency",
            "peak η for C₁ = 2.13 exceeds peak η for C₁ = 1.2",
            &format!("peaks: {hi} (c1=2.13) vs {lo} (c1=1.2)"),
        )
        .claim(hi > lo, fig4b.iter().map(AttachedCurve::from_figure).collect()),
    );

    let fig5 = figure_dataset(Figure::Fig5)?;
    for (curve, want, id, printed) in [
        (
            &fig5[0],
            Trend::StrictlyDecreasing,
            "claim-fig5-bright",
            "as |G₂| increases, the bright mode population |a_B,S|² decreases",
        ),
        (
            &fig5[1],
            Trend::StrictlyIncreasing,
            "claim-fig5-dark",
            "as |G₂| increases, the dark mode population |a_D,S|² increases",
        ),
    ] {
        let t = curve.result.trend(curve.observable);
        let mut note = format!("computed: {}", trend_name(t));
        if t != want {
            if let Some(v) = curve.result.values(curve.observable) {
                let x = &curve.result.parameter;
                let turns: Vec<String> = v
                    .windows(3)
                    .enumerate()
                    .filter(|(_, w)| (w[1] - w[0]) * (w[2] - w[1]) < 0.0)
                    .map(|(i, w)| {
                        let kind = if w[1] > w[0] { "max" } else { "min" };
                        format!("local {kind} at g2 = {}", x[i + 1])
                    })
                    .collect();
                if !turns.is_empty() {
                    let _ = write!(note, " ({})", turns.join(", "));
                }
            }
        }
        out.push(
            LedgerEntry::new(
                id,
                FigureClaim,
                &format!("{} population versus G₂", curve.label),
                printed,
                &format!("{} on G₂ ∈ [0.05, 1.2], 100 points", trend_name(want)),
                &note,
            )
            .claim(t == want, vec![AttachedCurve::from_figure(curve)]),
        );
    }

    let spec = SweepSpec::new(SweepParameter::G2, G2_RANGE.0, G2_RANGE.1, 100);
    let stab = run_sweep(&SystemParams::dark_bright(0.0), &spec, &[Observable::Margin])?;
    let margins: Vec<f64> = stab.margin.iter().flatten().copied().collect();
    let all_stable = margins.len() == stab.len() && margins.iter().all(|&m| m < 0.0);
    let (lo, hi) = margins
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &m| (a.min(m), b.max(m)));
    let c1 = SystemParams::dark_bright(0.0).cooperativities()?.c1;
    out.push(
        LedgerEntry::new(
            "fig5-stability",
            EntryKind::Parameter,
            "linear stability of the Fig. 5 parameter set",
            "steady-state populations plotted as physical fixed points",
            "stability margin < 0 at every grid point",
            &format!(
                "margin ranges over [{lo:.6}, {hi:.6}]; C₁ = {c1:.3} with Δ₁ = −Ω_m puts the \
                 a₁–b* parametric process on resonance. The fixed points are still computed and \
                 reported, flagged unstable."
            ),
        )
        .claim(all_stable, vec![AttachedCurve::from_column("margin", &stab, Observable::Margin)]),
    );

    Ok(out)
}

impl TypoLedger {
    pub fn build() -> Result<Self> {
        let conv = conversion_probe_points()?;
        let dbp = dark_bright_probe_points();
        let mut entries = intensity_entries(&conv)?;
        entries.extend(dark_bright_entries(&dbp)?);
        entries.extend(parameter_entries()?);
        entries.extend(claim_entries()?);
        Ok(Self {
            divergence_threshold: DIVERGENCE_THRESHOLD,
            entries,
        })
    }

    pub fn get(&self, id: &str) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ledger always serializes")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# TYPO_LEDGER\n");
        let _ = writeln!(
            s,
            "Printed expressions, statements and figure claims next to their corrected or \
             adopted forms. A probe diverges when the relative difference exceeds {:e}.\n",
            self.divergence_threshold
        );
        for e in &self.entries {
            let _ = writeln!(s, "## {}\n", e.id);
            let _ = writeln!(s, "- kind: {}", kind_name(e.kind));
            let _ = writeln!(s, "- quantity: {}", e.quantity);
            let _ = writeln!(s, "- printed: {}", e.printed);
            let _ = writeln!(s, "- corrected: {}", e.corrected);
            if let Some(st) = e.status {
                let _ = writeln!(
                    s,
                    "- status: {}",
                    if st == ClaimStatus::Holds { "holds" } else { "fails" }
                );
            }
            let _ = writeln!(s, "- note: {}", e.note);
            if !e.probes.is_empty() {
                let _ = writeln!(s, "\n| point | printed | corrected | rel. diff | diverges |");
                let _ = writeln!(s, "|---|---|---|---|---|");
                for p in &e.probes {
                    let _ = writeln!(
                        s,
                        "| {} | {} | {} | {:.3e} | {} |",
                        p.point,
                        join(&p.printed),
                        join(&p.corrected),
                        p.relative_difference,
                        if p.diverges { "yes" } else { "no" }
                    );
                }
            }
            for c in &e.curves {
                let _ = writeln!(s, "\ncomputed curve `{}` ({} vs {}):\n", c.label, c.observable, c.parameter);
                let _ = writeln!(s, "```csv\n{},{}", c.parameter, c.observable);
                for (x, y) in c.x.iter().zip(&c.y) {
                    let _ = writeln!(s, "{x},{}", y.map(|v| v.to_string()).unwrap_or_default());
                }
                let _ = writeln!(s, "```");
            }
            s.push('\n');
        }
        s
    }
}

fn kind_name(k: EntryKind) -> &'static str {
    match k {
        EntryKind::Transcription => "transcription",
        EntryKind::Notation => "notation",
        EntryKind::Parameter => "parameter",
        EntryKind::FigureClaim => "figure claim",
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.10e}")).collect::<Vec<_>>().join(", ")
}
