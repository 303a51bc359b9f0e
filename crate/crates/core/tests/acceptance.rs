//! Acceptance checks 1 to 9. Runs as a plain binary so every criterion
//! prints exactly one PASS/FAIL line; the process fails if any criterion does.

use std::path::Path;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bulk_optomech::cli::{cmd_figure, Format, RunConfig, Verbosity};
use bulk_optomech::closed_form::{ClosedFormIntermediates, Form};
use bulk_optomech::dark_bright::{inverse_transform, steady_dark_bright, transform};
use bulk_optomech::dynamics::settle;
use bulk_optomech::ledger::{
    single_peaked, ClaimStatus, TypoLedger, DARK_BRIGHT_CORRECTIONS, INTENSITY_CORRECTIONS,
};
use bulk_optomech::params::{coupling_from_cooperativity, SystemParams};
use bulk_optomech::steady::{assemble_drift, conversion_efficiency, solve_steady_numeric, stability_report};
use bulk_optomech::sweep::{figure_dataset, Figure, FigureCurve, Observable, Trend, C2_RANGE, FIGURE_POINTS};
use bulk_optomech::ModeAmplitudes;

const SEED: u64 = 0x5eed_0c7a;
const DRAWS: usize = 1000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).norm() / a.norm().max(b.norm())
    }
}

fn rel_f(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn max_amp_rel(x: &ModeAmplitudes, y: &ModeAmplitudes) -> f64 {
    rel(x.a1, y.a1).max(rel(x.a2, y.a2)).max(rel(x.b, y.b))
}

/// Random parameter set around the conversion regime.
fn random_params(rng: &mut ChaCha8Rng) -> SystemParams {
    let kappa2 = rng.random_range(0.5..3.0);
    SystemParams {
        delta1: rng.random_range(-2.0..2.0),
        delta2: rng.random_range(-2.0..2.0),
        omega_m: rng.random_range(0.5..2.0),
        kappa1: 1.0,
        kappa2,
        gamma_m: rng.random_range(0.05..1.0),
        g_m: rng.random_range(0.0..0.2),
        g1: rng.random_range(0.0..0.6),
        g2: rng.random_range(0.0..1.5),
        kappa1_ext: rng.random_range(0.1..1.0),
        kappa2_ext: kappa2 * rng.random_range(0.1..1.0),
        alpha_p: rng.random_range(0.1..3.0),
    }
}

fn stable_draws(rng: &mut ChaCha8Rng, n: usize) -> Vec<SystemParams> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = random_params(rng);
        if stability_report(&p).is_ok_and(|s| s.is_stable()) {
            out.push(p);
        }
    }
    out
}

fn criterion1() -> Outcome {
    let mut p = SystemParams::conversion(0.3, 0.0);
    p.g_m = 0.0;
    p.alpha_p = 1.7;
    let start = Instant::now();
    let s = match solve_steady_numeric(&p) {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("solve failed: {e}")),
    };
    let elapsed = start.elapsed();
    let lorentz = p.pump_rate() / Complex64::new(p.kappa1 / 2.0, p.delta1);
    let err = rel(s.amplitudes.a1, lorentz);
    let others = s.amplitudes.a2.norm() + s.amplitudes.b.norm();
    outcome(
        err <= 1e-12 && others == 0.0 && elapsed < Duration::from_millis(1),
        format!("rel err {err:.2e}, |a2|+|b| = {others:.1e}, {elapsed:?}"),
    )
}

fn criterion2() -> Outcome {
    let start = Instant::now();
    let (mut worst, mut checked, mut skipped) = (0.0f64, 0, 0);
    for gamma in [0.3, 0.45] {
        for c2 in linspace(C2_RANGE.0, C2_RANGE.1, FIGURE_POINTS) {
            let mut p = SystemParams::conversion(gamma, 0.4);
            p.g2 = coupling_from_cooperativity(c2, gamma, p.kappa2).unwrap();
            let s = solve_steady_numeric(&p).unwrap();
            if !s.is_physical() {
                skipped += 1;
                continue;
            }
            match settle(&p, 1e-10) {
                Ok(x) => worst = worst.max(max_amp_rel(&x, &s.amplitudes)),
                Err(e) => return outcome(false, format!("settle failed at gamma_m={gamma}, C2={c2}: {e}")),
            }
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-6 && elapsed < Duration::from_secs(30),
        format!("{checked} stable points ({skipped} unstable skipped), max rel diff {worst:.2e}, {elapsed:.2?}"),
    )
}

fn criterion3(ledger: &TypoLedger) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut worst, mut used, mut excluded) = (0.0f64, 0, 0);
    while used < DRAWS {
        let p = stable_draws(&mut rng, 1)[0];
        let cf = ClosedFormIntermediates::new(&p, Form::Corrected).unwrap();
        if cf.relative_denominator_mode1().abs() < 1e-6 || cf.relative_denominator_mode2().abs() < 1e-6 {
            excluded += 1;
            continue;
        }
        let a = solve_steady_numeric(&p).unwrap().amplitudes;
        let e1 = rel_f(cf.intensity_mode1().unwrap(), a.a1.norm_sqr());
        let e2 = rel_f(cf.intensity_mode2().unwrap(), a.a2.norm_sqr());
        worst = worst.max(e1).max(e2);
        used += 1;
    }
    let missing: Vec<&str> = INTENSITY_CORRECTIONS
        .iter()
        .chain(DARK_BRIGHT_CORRECTIONS)
        .copied()
        .filter(|id| ledger.get(id).is_none())
        .collect();
    outcome(
        worst <= 1e-8 && missing.is_empty(),
        format!("{used} draws ({excluded} near-singular excluded), max rel err {worst:.2e}, missing ledger ids {missing:?}"),
    )
}

/// Passes when the computed claim and the ledger agree, and a failing claim
/// carries its curve.
fn ledger_consistent(ledger: &TypoLedger, id: &str, holds: bool) -> Result<(), String> {
    let entry = ledger.get(id).ok_or_else(|| format!("ledger lacks {id}"))?;
    let expected = if holds { ClaimStatus::Holds } else { ClaimStatus::Fails };
    if entry.status != Some(expected) {
        return Err(format!("{id}: ledger status {:?}, computed {expected:?}", entry.status));
    }
    if !holds && entry.curves.is_empty() {
        return Err(format!("{id}: failing claim has no curve attached"));
    }
    Ok(())
}

fn claims(parts: &[(&str, bool, String)], ledger: &TypoLedger) -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for (id, holds, note) in parts {
        let tag = if *holds { "holds" } else { "FAILS, reported" };
        if let Err(e) = ledger_consistent(ledger, id, *holds) {
            pass = false;
            detail.push(e);
        } else {
            detail.push(format!("{id} {tag} ({note})"));
        }
    }
    outcome(pass, detail.join("; "))
}

fn peak(curve: &FigureCurve) -> (f64, f64) {
    curve.result.argmax(curve.observable).expect("curve has values")
}

fn criterion4(ledger: &TypoLedger) -> Outcome {
    let a = figure_dataset(Figure::Fig2a).unwrap();
    let b = figure_dataset(Figure::Fig2b).unwrap();
    let all: Vec<&FigureCurve> = a.iter().chain(&b).collect();
    let single = all.iter().all(|c| single_peaked(c.result.trend(c.observable)));
    let order = [&a, &b].iter().all(|fig| peak(&fig[1]).0 < peak(&fig[0]).0);
    let peaks: Vec<String> = all.iter().map(|c| format!("{:.2}", peak(c).0)).collect();
    claims(
        &[
            ("claim-fig2-single-peak", single, format!("argmax C2 {}", peaks.join("/"))),
            ("claim-fig2-peak-order", order, "gamma_m=0.45 peaks first in both modes".into()),
        ],
        ledger,
    )
}

fn criterion5(ledger: &TypoLedger) -> Outcome {
    let a = figure_dataset(Figure::Fig4a).unwrap();
    let b = figure_dataset(Figure::Fig4b).unwrap();
    let (x03, y03) = peak(&a[0]);
    let (_, y045) = peak(&a[1]);
    let (_, y213) = peak(&b[0]);
    let (_, y12) = peak(&b[1]);
    claims(
        &[
            (
                "claim-fig4a-peak",
                y03 > y045 && (10.0..=14.0).contains(&x03),
                format!("eta {y03:.5} at C2 = {x03:.2} vs {y045:.5}"),
            ),
            ("claim-fig4b-c1", y213 > y12, format!("eta {y213:.4} vs {y12:.4}")),
        ],
        ledger,
    )
}

fn criterion6(ledger: &TypoLedger) -> Outcome {
    let c = figure_dataset(Figure::Fig5).unwrap();
    let bright = c[0].result.trend(Observable::PopBright);
    let dark = c[1].result.trend(Observable::PopDark);
    claims(
        &[
            ("claim-fig5-bright", bright == Trend::StrictlyDecreasing, format!("{bright:?}")),
            ("claim-fig5-dark", dark == Trend::StrictlyIncreasing, format!("{dark:?}")),
        ],
        ledger,
    )
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
        .collect()
}

fn criterion7() -> Outcome {
    let (mut worst, mut used, mut singular) = (0.0f64, 0, 0);
    for g2 in linspace(0.05, 1.2, 100) {
        let p = SystemParams::dark_bright(g2);
        let closed = match steady_dark_bright(&p) {
            Ok(s) => s,
            Err(_) => {
                singular += 1;
                continue;
            }
        };
        let a = solve_steady_numeric(&p).unwrap().amplitudes;
        let num = transform(&a, p.g1, p.g2).unwrap();
        worst = worst.max(rel(closed.a_b, num.a_b)).max(rel(closed.a_d, num.a_d));
        used += 1;
    }
    outcome(
        worst <= 1e-6 && used > 0,
        format!("{used} grid points ({singular} singular), max rel diff {worst:.2e}"),
    )
}

fn criterion8() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let draws = stable_draws(&mut rng, DRAWS);
    let (mut ortho, mut lin, mut eta, mut conj) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for p in &draws {
        let a = solve_steady_numeric(p).unwrap().amplitudes;

        let db = transform(&a, p.g1, p.g2).unwrap();
        let back = inverse_transform(&db, p.g1, p.g2).unwrap();
        let norm_in = a.a1.norm_sqr() + a.a2.norm_sqr();
        let norm_out = db.bright_population() + db.dark_population();
        ortho = ortho
            .max(rel_f(norm_in, norm_out))
            .max(rel(back.a1, a.a1))
            .max(rel(back.a2, a.a2));

        let s = rng.random_range(0.1..10.0);
        let scaled = SystemParams { alpha_p: p.alpha_p * s, ..*p };
        let b = solve_steady_numeric(&scaled).unwrap().amplitudes;
        lin = lin.max(max_amp_rel(&b, &a.scale(s)));
        eta = eta.max(rel_f(conversion_efficiency(&scaled).unwrap(), conversion_efficiency(p).unwrap()));

        let drift = assemble_drift(p).unwrap();
        let x = drift.matrix.lu().solve(&(-drift.drive)).unwrap();
        for k in 0..3 {
            conj = conj.max(rel(x[k + 3], x[k].conj()));
        }
    }

    let mut worst_margin = f64::NEG_INFINITY;
    let mut worst_at = String::new();
    for &fig in Figure::ALL {
        for c in figure_dataset(fig).unwrap() {
            for (x, m) in c.result.parameter.iter().zip(&c.result.margin) {
                let m = m.unwrap_or(f64::INFINITY);
                if m > worst_margin {
                    worst_margin = m;
                    worst_at = format!("{fig} {} {}={x:.4}", c.label, c.result.spec.parameter);
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = ortho <= 1e-12
        && lin <= 1e-12
        && eta <= 1e-12
        && conj <= 1e-10
        && worst_margin < 0.0
        && elapsed < Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "{DRAWS} draws: orthonormality {ortho:.1e}, linearity {lin:.1e}, eta {eta:.1e}, conjugation {conj:.1e}; \
             largest figure margin {worst_margin:.6} at {worst_at}; {elapsed:.2?}"
        ),
    )
}

fn run_figures(dir: &Path) {
    let rc = RunConfig {
        config: None,
        out: Some(dir.to_path_buf()),
        format: Format::Csv,
        set: Vec::new(),
        verbosity: Verbosity::Quiet,
    };
    for &fig in Figure::ALL {
        cmd_figure(&rc, fig.as_str(), None).unwrap();
    }
}

fn criterion9() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_figures(a.path());
    run_figures(b.path());
    let mut names: Vec<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    let differing: Vec<_> = names
        .iter()
        .filter(|n| std::fs::read(a.path().join(n)).ok() != std::fs::read(b.path().join(n)).ok())
        .collect();
    outcome(
        differing.is_empty() && !names.is_empty(),
        format!("{} files compared, differing {differing:?}", names.len()),
    )
}

fn main() {
    let ledger = TypoLedger::build().expect("ledger builds");
    let criteria: [(&str, &dyn Fn() -> Outcome); 9] = [
        ("decoupled analytic limit", &criterion1),
        ("settle vs linear solve on the C2 grid", &criterion2),
        ("closed-form intensities", &|| criterion3(&ledger)),
        ("conversion emission claims", &|| criterion4(&ledger)),
        ("conversion efficiency claims", &|| criterion5(&ledger)),
        ("bright/dark monotonicity", &|| criterion6(&ledger)),
        ("bright/dark closed form", &criterion7),
        ("invariant suite", &criterion8),
        ("figure determinism", &criterion9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.pass);
        println!(
            "criterion {} {}: {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
