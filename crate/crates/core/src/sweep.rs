//! One-parameter sweeps and the datasets behind each figure.
//!
//! Every row is an independent canonical solve. Rows where the drift matrix
//! has no unique fixed point are flagged `singular` and carry no observable
//! values; rows with a positive stability margin are flagged `unstable` but
//! keep their values so the fixed point can still be inspected.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::set_system_field;
use crate::dark_bright::transform;
use crate::error::{Error, Result};
use crate::params::{coupling_from_cooperativity, SystemParams};
use crate::steady::{stability_report, steady_amplitudes};

macro_rules! named_enum {
    ($(#[$meta:meta])* $name:ident, $kind:literal { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $text)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(Error::Unknown { kind: $kind, name: s.to_string() }),
                }
            }
        }
    };
}

named_enum!(
    /// Swept quantity. `c1`/`c2` set the coupling from a cooperativity at
    /// the base damping rates.
    SweepParameter, "sweep parameter" {
        C2 => "c2",
        G2 => "g2",
        C1 => "c1",
        G1 => "g1",
        GammaM => "gamma_m",
        Delta2 => "delta2",
        GM => "g_m",
        AlphaP => "alpha_p",
    }
);

named_enum!(
    /// Per-row observable. Intensities and populations are divided by α_p².
    Observable, "observable" {
        I1 => "i1",
        I2 => "i2",
        Eta => "eta",
        PopBright => "pop_bright",
        PopDark => "pop_dark",
        Margin => "margin",
    }
);

named_enum!(
    /// Figure identifiers.
    Figure, "figure" {
        Fig2a => "fig2a",
        Fig2b => "fig2b",
        Fig3a => "fig3a",
        Fig3b => "fig3b",
        Fig4a => "fig4a",
        Fig4b => "fig4b",
        Fig5 => "fig5",
    }
);

/// Grid spacing; only linear grids are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl SweepSpec {
    pub fn new(parameter: SweepParameter, start: f64, stop: f64, points: usize) -> Self {
        Self {
            parameter,
            start,
            stop,
            points,
            scale: Scale::Linear,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut v = Vec::new();
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            v.push(format!(
                "start < stop violated ({} vs {})",
                self.start, self.stop
            ));
        }
        if self.points < 2 {
            v.push(format!("points ≥ 2 violated (got {})", self.points));
        }
        if self.parameter == SweepParameter::AlphaP && !(self.start > 0.0) {
            v.push("alpha_p sweeps must stay positive (outputs are pump-normalized)".into());
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(v))
        }
    }

    /// Evenly spaced grid that hits both endpoints exactly.
    pub fn grid(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64 / last)
                }
            })
            .collect()
    }
}

/// Applies one sweep value to a copy of `base`.
pub fn apply_parameter(base: &SystemParams, parameter: SweepParameter, value: f64) -> Result<SystemParams> {
    let mut p = *base;
    match parameter {
        SweepParameter::C2 => p.g2 = coupling_from_cooperativity(value, p.gamma_m, p.kappa2)?,
        SweepParameter::C1 => p.g1 = coupling_from_cooperativity(value, p.gamma_m, p.kappa1)?,
        SweepParameter::G2 => p.g2 = value,
        SweepParameter::G1 => p.g1 = value,
        SweepParameter::GammaM => p.gamma_m = value,
        SweepParameter::Delta2 => p.delta2 = value,
        SweepParameter::GM => p.g_m = value,
        SweepParameter::AlphaP => p.alpha_p = value,
    }
    p.validate()
}

/// How the observable columns were scaled after the solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Normalization {
    /// Intensities and populations divided by α_p²; η is already a ratio.
    Pump,
    /// Pump-normalized, then divided by the largest value in the panel.
    PanelMax { divisor: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableColumn {
    pub observable: Observable,
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub base: SystemParams,
    pub parameter: Vec<f64>,
    pub observables: Vec<ObservableColumn>,
    pub margin: Vec<Option<f64>>,
    pub unstable: Vec<bool>,
    pub singular: Vec<bool>,
    pub normalization: Normalization,
}

/// Shape of an observable along the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    StrictlyIncreasing,
    StrictlyDecreasing,
    /// Strictly rising to a single interior maximum, then strictly falling.
    Unimodal,
    Other,
    /// Some rows are flagged singular.
    Incomplete,
}

impl SweepResult {
    pub fn len(&self) -> usize {
        self.parameter.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parameter.is_empty()
    }

    pub fn column(&self, observable: Observable) -> Option<&[Option<f64>]> {
        if observable == Observable::Margin {
            return Some(&self.margin);
        }
        self.observables
            .iter()
            .find(|c| c.observable == observable)
            .map(|c| c.values.as_slice())
    }

    /// Complete column, or `None` if missing or any row is flagged.
    pub fn values(&self, observable: Observable) -> Option<Vec<f64>> {
        self.column(observable)?.iter().copied().collect()
    }

    /// Grid location and value of the largest entry.
    pub fn argmax(&self, observable: Observable) -> Option<(f64, f64)> {
        let col = self.column(observable)?;
        col.iter()
            .zip(&self.parameter)
            .filter_map(|(v, x)| v.map(|v| (*x, v)))
            .fold(None, |best: Option<(f64, f64)>, (x, v)| match best {
                Some((_, b)) if b >= v => best,
                _ => Some((x, v)),
            })
    }

    pub fn trend(&self, observable: Observable) -> Trend {
        match self.values(observable) {
            Some(v) => classify(&v),
            None => Trend::Incomplete,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(self.spec.parameter.as_str());
        for c in &self.observables {
            out.push(',');
            out.push_str(c.observable.as_str());
        }
        out.push_str(",margin,unstable,singular\n");
        let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for i in 0..self.len() {
            out.push_str(&self.parameter[i].to_string());
            for c in &self.observables {
                out.push(',');
                out.push_str(&cell(c.values[i]));
            }
            out.push(',');
            out.push_str(&cell(self.margin[i]));
            out.push_str(if self.unstable[i] { ",1" } else { ",0" });
            out.push_str(if self.singular[i] { ",1\n" } else { ",0\n" });
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep results always serialize")
    }

    fn rescale(&mut self, divisor: f64) {
        for c in &mut self.observables {
            for v in c.values.iter_mut().flatten() {
                *v /= divisor;
            }
        }
        self.normalization = Normalization::PanelMax { divisor };
    }
}

/// Classifies a sequence as strictly monotone, unimodal, or neither.
pub fn classify(values: &[f64]) -> Trend {
    if values.len() < 2 {
        return Trend::Other;
    }
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    if diffs.iter().all(|&d| d > 0.0) {
        return Trend::StrictlyIncreasing;
    }
    if diffs.iter().all(|&d| d < 0.0) {
        return Trend::StrictlyDecreasing;
    }
    let rise = diffs.iter().take_while(|&&d| d > 0.0).count();
    if rise > 0 && diffs[rise..].iter().all(|&d| d < 0.0) {
        Trend::Unimodal
    } else {
        Trend::Other
    }
}

struct Row {
    values: Vec<Option<f64>>,
    margin: Option<f64>,
    singular: bool,
}

fn evaluate_row(p: &SystemParams, observables: &[Observable]) -> Row {
    let margin = stability_report(p).ok().map(|s| s.margin);
    let blank = |margin| Row {
        values: vec![None; observables.len()],
        margin,
        singular: true,
    };
    let Ok(amps) = steady_amplitudes(p) else {
        return blank(margin);
    };
    let pump2 = p.alpha_p * p.alpha_p;
    let mut values = Vec::with_capacity(observables.len());
    for &obs in observables {
        let v = match obs {
            Observable::I1 => Ok(amps.a1.norm_sqr() / pump2),
            Observable::I2 => Ok(amps.a2.norm_sqr() / pump2),
            Observable::Eta => Ok(p.kappa2_ext * amps.a2.norm_sqr() / pump2),
            Observable::PopBright => {
                transform(&amps, p.g1, p.g2).map(|s| s.bright_population() / pump2)
            }
            Observable::PopDark => transform(&amps, p.g1, p.g2).map(|s| s.dark_population() / pump2),
            Observable::Margin => unreachable!("margin is always a separate column"),
        };
        match v {
            Ok(x) if x.is_finite() => values.push(Some(x)),
            _ => return blank(margin),
        }
    }
    Row {
        values,
        margin,
        singular: false,
    }
}

/// Runs a sweep. Per-row numerical failures are flagged, not returned.
pub fn run_sweep(base: &SystemParams, spec: &SweepSpec, observables: &[Observable]) -> Result<SweepResult> {
    spec.validate()?;
    let base = base.validate()?;
    let mut requested: Vec<Observable> = Vec::new();
    for &o in observables {
        if o != Observable::Margin && !requested.contains(&o) {
            requested.push(o);
        }
    }
    let grid = spec.grid();
    let params: Vec<SystemParams> = grid
        .iter()
        .map(|&x| apply_parameter(&base, spec.parameter, x))
        .collect::<Result<_>>()?;
    let rows: Vec<Row> = params
        .par_iter()
        .map(|p| evaluate_row(p, &requested))
        .collect();

    let mut columns: Vec<ObservableColumn> = requested
        .iter()
        .map(|&observable| ObservableColumn {
            observable,
            values: Vec::with_capacity(rows.len()),
        })
        .collect();
    let mut margin = Vec::with_capacity(rows.len());
    let mut unstable = Vec::with_capacity(rows.len());
    let mut singular = Vec::with_capacity(rows.len());
    for row in rows {
        for (col, v) in columns.iter_mut().zip(row.values) {
            col.values.push(v);
        }
        unstable.push(row.margin.is_none_or(|m| !(m < 0.0)));
        margin.push(row.margin);
        singular.push(row.singular);
    }
    Ok(SweepResult {
        spec: *spec,
        base,
        parameter: grid,
        observables: columns,
        margin,
        unstable,
        singular,
        normalization: Normalization::Pump,
    })
}

/// Parses a comma-separated observable list.
pub fn parse_observables(list: &str) -> Result<Vec<Observable>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Observable::from_str)
        .collect()
}

/// Default grid size for cooperativity sweeps.
pub const FIGURE_POINTS: usize = 150;
/// Default grid size for the bright/dark sweep.
pub const FIGURE5_POINTS: usize = 100;
/// Cooperativity range shared by the conversion figures.
pub const C2_RANGE: (f64, f64) = (0.1, 15.0);
/// Coupling range of the bright/dark figure.
pub const G2_RANGE: (f64, f64) = (0.05, 1.2);

/// One plotted curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureCurve {
    pub label: String,
    pub observable: Observable,
    pub result: SweepResult,
}

/// Grid size and parameter overrides applied to every curve of a figure.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureOptions {
    pub points: Option<usize>,
    pub overrides: Vec<(String, f64)>,
}

struct CurveSpec {
    label: String,
    base: SystemParams,
    observable: Observable,
}

impl Figure {
    pub fn observable(self) -> Observable {
        match self {
            Figure::Fig2a | Figure::Fig3a => Observable::I1,
            Figure::Fig2b | Figure::Fig3b => Observable::I2,
            Figure::Fig4a | Figure::Fig4b => Observable::Eta,
            Figure::Fig5 => Observable::PopBright,
        }
    }

    /// Whether the panel is divided by its own maximum.
    pub fn max_normalized(self) -> bool {
        !matches!(self, Figure::Fig4a | Figure::Fig4b)
    }

    fn curves(self) -> Result<Vec<CurveSpec>> {
        let by_gamma = |obs| -> Vec<CurveSpec> {
            [0.3, 0.45]
                .into_iter()
                .map(|gamma| CurveSpec {
                    label: format!("gamma_m={gamma}"),
                    base: SystemParams::conversion(gamma, 0.4),
                    observable: obs,
                })
                .collect()
        };
        let by_c1 = |obs| -> Result<Vec<CurveSpec>> {
            [2.13, 1.2]
                .into_iter()
                .map(|c1| {
                    Ok(CurveSpec {
                        label: format!("c1={c1}"),
                        base: SystemParams::conversion(0.3, coupling_from_cooperativity(c1, 0.3, 1.0)?),
                        observable: obs,
                    })
                })
                .collect()
        };
        match self {
            Figure::Fig2a | Figure::Fig2b | Figure::Fig4a => Ok(by_gamma(self.observable())),
            Figure::Fig3a | Figure::Fig3b | Figure::Fig4b => by_c1(self.observable()),
            Figure::Fig5 => Ok(vec![
                CurveSpec {
                    label: "bright".into(),
                    base: SystemParams::dark_bright(0.0),
                    observable: Observable::PopBright,
                },
                CurveSpec {
                    label: "dark".into(),
                    base: SystemParams::dark_bright(0.0),
                    observable: Observable::PopDark,
                },
            ]),
        }
    }

    fn spec(self, points: Option<usize>) -> SweepSpec {
        match self {
            Figure::Fig5 => SweepSpec::new(
                SweepParameter::G2,
                G2_RANGE.0,
                G2_RANGE.1,
                points.unwrap_or(FIGURE5_POINTS),
            ),
            _ => SweepSpec::new(
                SweepParameter::C2,
                C2_RANGE.0,
                C2_RANGE.1,
                points.unwrap_or(FIGURE_POINTS),
            ),
        }
    }
}

/// Datasets for `figure` with caption parameters.
pub fn figure_dataset(figure: Figure) -> Result<Vec<FigureCurve>> {
    figure_dataset_with(figure, &FigureOptions::default())
}

pub fn figure_dataset_with(figure: Figure, options: &FigureOptions) -> Result<Vec<FigureCurve>> {
    let spec = figure.spec(options.points);
    let mut curves = Vec::new();
    for c in figure.curves()? {
        let mut base = c.base;
        for (key, value) in &options.overrides {
            set_system_field(&mut base, key, *value)?;
        }
        let result = run_sweep(&base, &spec, &[c.observable])?;
        curves.push(FigureCurve {
            label: c.label,
            observable: c.observable,
            result,
        });
    }
    if figure.max_normalized() {
        let divisor = curves
            .iter()
            .filter_map(|c| c.result.argmax(c.observable).map(|(_, v)| v))
            .fold(0.0_f64, f64::max);
        if divisor > 0.0 {
            for c in &mut curves {
                c.result.rescale(divisor);
            }
        }
    }
    Ok(curves)
}
