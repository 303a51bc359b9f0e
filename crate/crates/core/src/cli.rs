//! Command-line front end.
//!
//! Exit status: 0 on success, 2 for configuration or usage errors, 3 for
//! numerical or physical precondition failures.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::closed_form::{intensity_mode1_closed, intensity_mode2_closed};
use crate::config::{system_assignments, RunParams};
use crate::dark_bright::{canonical_dark_bright, coefficients, steady_dark_bright};
use crate::dynamics::{integrate, IntegratorConfig};
use crate::error::{Error, Result};
use crate::ledger::TypoLedger;
use crate::params::{brillouin_frequency, compute_g0, SystemParams, HBAR};
use crate::steady::{
    assemble_drift, conversion_efficiency, residual, solve_steady_numeric, stability_report, ModeAmplitudes,
};
use crate::sweep::{figure_dataset_with, parse_observables, run_sweep, Figure, FigureOptions, SweepParameter, SweepSpec, Trend};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Verbosity {
    Quiet,
    #[default]
    Normal,
    Debug,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// TOML file with `[physical]` and `[system]` tables.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory; created if missing.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Parameter override `key=value`; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long, global = true, value_enum, default_value_t = Verbosity::Normal)]
    pub verbosity: Verbosity,
}

#[derive(Debug, Parser)]
#[command(name = "bulk-optomech", version, about = "Mean-field optical mode conversion via a bulk acoustic phonon")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Steady state, closed-form cross-check, efficiency and stability.
    Steady,
    /// Datasets for one figure.
    Figure {
        /// fig2a, fig2b, fig3a, fig3b, fig4a, fig4b or fig5.
        id: String,
        #[arg(long)]
        points: Option<usize>,
    },
    /// One-parameter sweep.
    Sweep {
        #[arg(long)]
        param: String,
        #[arg(long)]
        start: f64,
        #[arg(long)]
        stop: f64,
        #[arg(long, default_value_t = 150)]
        points: usize,
        /// Comma-separated list from i1, i2, eta, pop_bright, pop_dark, margin.
        #[arg(long, default_value = "i1,i2,eta")]
        observables: String,
    },
    /// Time integration from an initial state.
    Dynamics {
        /// Horizon in units of 1/κ₁. Defaults to 50/|margin|, which
        /// requires a stable system.
        #[arg(long = "t-max")]
        t_max: Option<f64>,
        /// Initial state `a1_re,a1_im,a2_re,a2_im,b_re,b_im`.
        #[arg(long, allow_hyphen_values = true)]
        initial: Option<String>,
    },
    /// Bright/dark coefficients and steady populations.
    Darkbright,
    /// Printed-versus-corrected ledger.
    Ledger,
}

/// Parses `args` and runs, returning the process exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_config() {
        EXIT_CONFIG
    } else {
        EXIT_NUMERICAL
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let rc = &cli.run;
    match &cli.command {
        Command::Steady => cmd_steady(rc),
        Command::Figure { id, points } => cmd_figure(rc, id, *points),
        Command::Sweep {
            param,
            start,
            stop,
            points,
            observables,
        } => cmd_sweep(rc, param, *start, *stop, *points, observables),
        Command::Dynamics { t_max, initial } => cmd_dynamics(rc, *t_max, initial.as_deref()),
        Command::Darkbright => cmd_darkbright(rc),
        Command::Ledger => cmd_ledger(rc),
    }
}

fn load(rc: &RunConfig, base: SystemParams) -> Result<RunParams> {
    let mut run = RunParams::with_system(base);
    if let Some(path) = &rc.config {
        run.apply_file(path)?;
    }
    for s in &rc.set {
        run.apply_override(s)?;
    }
    let run = run.validate()?;
    if rc.verbosity == Verbosity::Debug {
        eprintln!("parameters: {}", serde_json::to_string(&run).unwrap_or_default());
    }
    Ok(run)
}

fn out_dir(rc: &RunConfig) -> Result<Option<&Path>> {
    match &rc.out {
        Some(dir) => {
            fs::create_dir_all(dir)
                .map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
            Ok(Some(dir.as_path()))
        }
        None => Ok(None),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

fn say(rc: &RunConfig, text: &str) {
    if rc.verbosity != Verbosity::Quiet {
        emit(&format!("{text}\n"));
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn rel_dev(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn key_value_csv(rows: &[(String, f64)]) -> String {
    let mut s = String::from("quantity,value\n");
    for (k, v) in rows {
        s.push_str(&format!("{k},{v}\n"));
    }
    s
}

fn key_value_json(rows: &[(String, f64)]) -> String {
    let map: serde_json::Map<String, serde_json::Value> = rows
        .iter()
        .map(|(k, v)| (k.clone(), json!(v)))
        .collect();
    serde_json::to_string_pretty(&map).expect("numbers serialize")
}

fn emit_rows(rc: &RunConfig, stem: &str, rows: &[(String, f64)]) -> Result<()> {
    let text = match rc.format {
        Format::Csv => key_value_csv(rows),
        Format::Json => key_value_json(rows),
    };
    match out_dir(rc)? {
        Some(dir) => write(dir, &format!("{stem}.{}", ext(rc.format)), &text),
        None => {
            emit(&text);
            Ok(())
        }
    }
}

fn ext(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn amplitude_rows(rows: &mut Vec<(String, f64)>, prefix: &str, a: &ModeAmplitudes) {
    for (name, z) in [("a1", a.a1), ("a2", a.a2), ("b", a.b)] {
        rows.push((format!("{prefix}{name}_re"), z.re));
        rows.push((format!("{prefix}{name}_im"), z.im));
    }
}

pub fn cmd_steady(rc: &RunConfig) -> Result<()> {
    let run = load(rc, RunParams::default().system)?;
    let p = run.system;
    let steady = solve_steady_numeric(&p)?;
    let a = steady.amplitudes;
    let pump2 = p.alpha_p * p.alpha_p;
    let mut rows = Vec::new();
    amplitude_rows(&mut rows, "", &a);
    for (name, numeric, closed) in [
        ("i1", a.a1.norm_sqr(), intensity_mode1_closed(&p)),
        ("i2", a.a2.norm_sqr(), intensity_mode2_closed(&p)),
    ] {
        rows.push((format!("{name}_numeric"), numeric));
        match closed {
            Ok(c) => {
                rows.push((format!("{name}_closed"), c));
                rows.push((format!("{name}_rel_dev"), rel_dev(numeric, c)));
            }
            Err(Error::Singular(_)) => {
                rows.push((format!("{name}_closed"), f64::NAN));
                rows.push((format!("{name}_rel_dev"), f64::NAN));
            }
            Err(e) => return Err(e),
        }
        if pump2 > 0.0 {
            rows.push((format!("{name}_pump_normalized"), numeric / pump2));
        }
    }
    if p.alpha_p > 0.0 {
        rows.push(("eta".into(), conversion_efficiency(&p)?));
    }
    rows.push(("margin".into(), steady.stability.margin));
    rows.push(("stable".into(), if steady.is_physical() { 1.0 } else { 0.0 }));
    rows.push(("residual".into(), residual(&p, &a)?));
    rows.push(("condition".into(), steady.condition));
    if let Some(phys) = run.physical {
        rows.push((
            "g0_rad_per_s".into(),
            compute_g0(&phys.crystal, phys.omega1, phys.omega_m, HBAR)?,
        ));
        rows.push((
            "brillouin_hz".into(),
            brillouin_frequency(phys.omega1, phys.crystal.n, phys.crystal.v_a, phys.v_c)?
                / (2.0 * std::f64::consts::PI),
        ));
    }
    if !steady.is_physical() {
        eprintln!(
            "warning: unstable parameter set (margin {}); the fixed point is not an attractor",
            steady.stability.margin
        );
    }
    emit_rows(rc, "steady", &rows)
}

fn file_label(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '_' { c } else { '_' })
        .collect()
}

fn trend_str(t: Trend) -> &'static str {
    match t {
        Trend::StrictlyIncreasing => "strictly_increasing",
        Trend::StrictlyDecreasing => "strictly_decreasing",
        Trend::Unimodal => "unimodal",
        Trend::Other => "other",
        Trend::Incomplete => "incomplete",
    }
}

#[derive(Serialize)]
struct CurveManifest {
    label: String,
    file: String,
    observable: String,
    base: SystemParams,
    peak_location: Option<f64>,
    peak_value: Option<f64>,
    trend: &'static str,
    unstable_points: usize,
    singular_points: usize,
}

pub fn cmd_figure(rc: &RunConfig, id: &str, points: Option<usize>) -> Result<()> {
    let figure: Figure = id.parse()?;
    let mut overrides = Vec::new();
    if let Some(path) = &rc.config {
        overrides.extend(system_assignments(path)?);
    }
    for s in &rc.set {
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{s}` is not key=value")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("override `{s}`: not a number")))?;
        let k = k.trim().strip_prefix("system.").unwrap_or(k.trim());
        overrides.push((k.to_string(), v));
    }
    let curves = figure_dataset_with(figure, &FigureOptions { points, overrides })?;
    let dir = match out_dir(rc)? {
        Some(d) => d.to_path_buf(),
        None => PathBuf::from("."),
    };

    let mut manifest_curves = Vec::new();
    for c in &curves {
        let file = format!("{}_{}.{}", figure, file_label(&c.label), ext(rc.format));
        let text = match rc.format {
            Format::Csv => c.result.to_csv(),
            Format::Json => c.result.to_json(),
        };
        write(&dir, &file, &text)?;
        let peak = c.result.argmax(c.observable);
        manifest_curves.push(CurveManifest {
            label: c.label.clone(),
            file,
            observable: c.observable.to_string(),
            base: c.result.base,
            peak_location: peak.map(|p| p.0),
            peak_value: peak.map(|p| p.1),
            trend: trend_str(c.result.trend(c.observable)),
            unstable_points: c.result.unstable.iter().filter(|&&u| u).count(),
            singular_points: c.result.singular.iter().filter(|&&s| s).count(),
        });
    }
    let spec = curves[0].result.spec;
    let mut manifest = json!({
        "figure": figure.as_str(),
        "parameter": spec.parameter.as_str(),
        "start": spec.start,
        "stop": spec.stop,
        "points": spec.points,
        "normalization": curves[0].result.normalization,
        "curves": manifest_curves,
    });
    if figure == Figure::Fig5 {
        let bright = curves[0].result.trend(curves[0].observable);
        let dark = curves[1].result.trend(curves[1].observable);
        manifest["monotonicity"] = json!({
            "bright": trend_str(bright),
            "dark": trend_str(dark),
            "bright_strictly_decreasing": bright == Trend::StrictlyDecreasing,
            "dark_strictly_increasing": dark == Trend::StrictlyIncreasing,
        });
    }
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    write(&dir, &format!("{figure}_manifest.json"), &text)?;
    for c in &manifest_curves {
        say(
            rc,
            &format!(
                "{figure} {}: peak {} at {} = {} ({})",
                c.label,
                c.peak_value.map_or("n/a".into(), |v| v.to_string()),
                spec.parameter,
                c.peak_location.map_or("n/a".into(), |v| v.to_string()),
                c.trend
            ),
        );
    }
    Ok(())
}

pub fn cmd_sweep(
    rc: &RunConfig,
    param: &str,
    start: f64,
    stop: f64,
    points: usize,
    observables: &str,
) -> Result<()> {
    let parameter: SweepParameter = param.parse()?;
    let observables = parse_observables(observables)?;
    let spec = SweepSpec::new(parameter, start, stop, points);
    spec.validate()?;
    let run = load(rc, RunParams::default().system)?;
    let result = run_sweep(&run.system, &spec, &observables)?;
    let text = match rc.format {
        Format::Csv => result.to_csv(),
        Format::Json => result.to_json() + "\n",
    };
    match out_dir(rc)? {
        Some(dir) => write(dir, &format!("sweep_{parameter}.{}", ext(rc.format)), &text),
        None => {
            emit(&text);
            Ok(())
        }
    }
}

fn parse_initial(s: &str) -> Result<ModeAmplitudes> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Config(format!("initial state `{s}` is not a list of numbers")))?;
    if v.len() != 6 {
        return Err(Error::Config(format!(
            "initial state needs 6 numbers (a1_re,a1_im,a2_re,a2_im,b_re,b_im), got {}",
            v.len()
        )));
    }
    Ok(ModeAmplitudes::new(
        Complex64::new(v[0], v[1]),
        Complex64::new(v[2], v[3]),
        Complex64::new(v[4], v[5]),
    ))
}

pub fn cmd_dynamics(rc: &RunConfig, t_max: Option<f64>, initial: Option<&str>) -> Result<()> {
    let initial = initial.map(parse_initial).transpose()?.unwrap_or_default();
    let run = load(rc, RunParams::default().system)?;
    let p = run.system;
    let drive_norm = assemble_drift(&p)?.drive.norm();

    let horizon = match t_max {
        Some(t) => t,
        None => {
            let margin = stability_report(&p)?.margin;
            if !(margin < 0.0) {
                return Err(Error::Unstable { margin });
            }
            50.0 / margin.abs()
        }
    };
    let config = IntegratorConfig {
        t_max: horizon,
        ..IntegratorConfig::default()
    };
    let traj = integrate(&p, &initial, &config)?;
    let (t_end, last) = traj.last().expect("trajectory holds the initial state");
    let res = residual(&p, &last)?;
    let text = match rc.format {
        Format::Csv => traj.to_csv(),
        Format::Json => serde_json::to_string_pretty(&traj).expect("trajectory serializes") + "\n",
    };
    let summary = format!(
        "t_end {t_end}, steps {}, final residual {res:e} (relative {:e})",
        traj.len() - 1,
        if drive_norm > 0.0 { res / drive_norm } else { res }
    );
    match out_dir(rc)? {
        Some(dir) => {
            write(dir, &format!("trajectory.{}", ext(rc.format)), &text)?;
            say(rc, &summary);
        }
        None => {
            emit(&text);
            if rc.verbosity != Verbosity::Quiet {
                eprintln!("{summary}");
            }
        }
    }
    Ok(())
}

pub fn cmd_darkbright(rc: &RunConfig) -> Result<()> {
    let run = load(rc, SystemParams::dark_bright(0.6))?;
    let p = run.system;
    let co = coefficients(&p)?;
    let closed = steady_dark_bright(&p)?;
    let canonical = canonical_dark_bright(&p)?;
    let margin = solve_steady_numeric(&p)?.stability.margin;
    let pump2 = p.alpha_p * p.alpha_p;
    let dev = |a: Complex64, b: Complex64| {
        let s = a.norm().max(b.norm());
        if s == 0.0 {
            0.0
        } else {
            (a - b).norm() / s
        }
    };
    let mut rows: Vec<(String, f64)> = vec![
        ("delta_d".into(), co.delta_d),
        ("delta_b".into(), co.delta_b),
        ("g_bd".into(), co.g_bd),
        ("g_12".into(), co.g_12),
        ("g1_tilde".into(), co.g1_tilde),
        ("g2_tilde".into(), co.g2_tilde),
        ("a_1".into(), co.a_1),
        ("a_2".into(), co.a_2),
        ("g_tilde".into(), co.g_tilde),
        ("a_b_re".into(), canonical.a_b.re),
        ("a_b_im".into(), canonical.a_b.im),
        ("a_d_re".into(), canonical.a_d.re),
        ("a_d_im".into(), canonical.a_d.im),
        ("a_b_closed_re".into(), closed.a_b.re),
        ("a_b_closed_im".into(), closed.a_b.im),
        ("a_d_closed_re".into(), closed.a_d.re),
        ("a_d_closed_im".into(), closed.a_d.im),
        ("a_b_rel_dev".into(), dev(closed.a_b, canonical.a_b)),
        ("a_d_rel_dev".into(), dev(closed.a_d, canonical.a_d)),
    ];
    if pump2 > 0.0 {
        rows.push(("pop_bright".into(), canonical.bright_population() / pump2));
        rows.push(("pop_dark".into(), canonical.dark_population() / pump2));
    }
    rows.push(("margin".into(), margin));
    rows.push(("stable".into(), if margin < 0.0 { 1.0 } else { 0.0 }));
    if !(margin < 0.0) {
        eprintln!("warning: unstable parameter set (margin {margin}); the fixed point is not an attractor");
    }
    emit_rows(rc, "darkbright", &rows)
}

pub fn cmd_ledger(rc: &RunConfig) -> Result<()> {
    let ledger = TypoLedger::build()?;
    let text = match rc.format {
        Format::Csv => ledger.to_markdown(),
        Format::Json => ledger.to_json() + "\n",
    };
    match out_dir(rc)? {
        Some(dir) => {
            let name = match rc.format {
                Format::Csv => "TYPO_LEDGER.md",
                Format::Json => "TYPO_LEDGER.json",
            };
            write(dir, name, &text)?;
            let failed = ledger
                .entries
                .iter()
                .filter(|e| e.status == Some(crate::ledger::ClaimStatus::Fails))
                .count();
            say(rc, &format!("{} entries, {failed} failed claims", ledger.entries.len()));
            Ok(())
        }
        None => {
            emit(&text);
            Ok(())
        }
    }
}
