//! Turning parsed flags into fully resolved run settings.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use otto_spin_core::optimize::{Objective, OptimizationProblem, DEFAULT_GRID, DEFAULT_REFINE_TOL};
use otto_spin_core::regimes::{CaseFamily, Window, DEFAULT_CURVE_SAMPLES, DEFAULT_RESOLUTION};
use otto_spin_core::thermo::{Spectrum, SpinParams};
use otto_spin_core::DEFAULT_ZERO_TOL;

use crate::args::*;
use crate::error::CliError;

/// Flag name to value, exactly as a replay would pass them.
pub type Settings = BTreeMap<String, String>;

/// Lines of a settings file as `--key=value` flags.
pub fn config_file_flags(path: &Path) -> Result<Vec<OsString>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))?;
    let mut flags = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "--config {} line {}: expected key=value",
                path.display(),
                n + 1
            ))
        })?;
        let key = k.trim().replace('_', "-");
        match v.trim() {
            "true" => flags.push(format!("--{key}").into()),
            "false" => {}
            v => flags.push(format!("--{key}={v}").into()),
        }
    }
    Ok(flags)
}

/// Remove `--config FILE` / `--config=FILE` and splice the file's flags in
/// right after the subcommand, so later command-line flags override them.
pub fn expand_config(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut config = None;
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            let path = it
                .next()
                .ok_or_else(|| CliError::Usage("--config requires a file argument".into()))?;
            config = Some(PathBuf::from(path));
        } else if let Some(p) = s.strip_prefix("--config=") {
            config = Some(PathBuf::from(p));
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config else { return Ok(rest) };
    let flags = config_file_flags(&path)?;
    let at = rest
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map(|p| p + 2)
        .unwrap_or(rest.len());
    let at = at.min(rest.len());
    rest.splice(at..at, flags);
    Ok(rest)
}

#[derive(Debug, Clone)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone)]
pub enum AnalyzeInput {
    Reduced {
        spec_i: Spectrum,
        spec_f: Spectrum,
    },
    Seven {
        params_i: SpinParams,
        params_f: SpinParams,
    },
    Family {
        family: CaseFamily,
        x: f64,
        y: f64,
    },
}

#[derive(Debug, Clone)]
pub enum RunConfig {
    Analyze {
        input: AnalyzeInput,
        tc: f64,
        th: f64,
        zero_tol: f64,
    },
    Sweep {
        family: CaseFamily,
        window: Window,
        resolution: usize,
        zero_tol: f64,
    },
    Boundaries {
        family: CaseFamily,
        window: Window,
        samples: usize,
    },
    Optimize {
        problem: OptimizationProblem,
    },
    Table1 {
        tc: f64,
        th: Vec<f64>,
    },
}

/// A resolved command plus the settings that reproduce it.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub command: &'static str,
    pub run: RunConfig,
    pub output: OutputSpec,
    pub settings: Settings,
}

struct Recorder(Settings);

impl Recorder {
    fn num(&mut self, key: &str, v: f64) {
        self.0.insert(key.to_string(), v.to_string());
    }

    fn text(&mut self, key: &str, v: &str) {
        self.0.insert(key.to_string(), v.to_string());
    }
}

fn missing(flag: &str) -> CliError {
    CliError::Usage(format!("missing required flag --{flag}"))
}

fn check_finite(flag: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{flag} must be finite, got {v}")))
    }
}

fn check_shift(flag: &str, v: f64) -> Result<f64, CliError> {
    check_finite(flag, v)?;
    if v < 0.0 {
        return Err(CliError::Usage(format!("--{flag} must be >= 0, got {v}")));
    }
    Ok(v)
}

fn temperatures(b: &BathArgs, rec: &mut Recorder) -> Result<(f64, f64), CliError> {
    let tc = b.tc.ok_or_else(|| missing("tc"))?;
    let th = b.th.ok_or_else(|| missing("th"))?;
    check_bath_pair(tc, th)?;
    rec.num("tc", tc);
    rec.num("th", th);
    Ok((tc, th))
}

fn check_bath_pair(tc: f64, th: f64) -> Result<(), CliError> {
    if !(tc.is_finite() && th.is_finite() && tc > 0.0 && tc <= th) {
        return Err(CliError::Usage(format!(
            "invalid temperatures --tc/--th: need 0 < tc <= th, got tc={tc}, th={th}"
        )));
    }
    Ok(())
}

fn zero_tol(v: Option<f64>, rec: &mut Recorder) -> Result<f64, CliError> {
    let v = v.unwrap_or(DEFAULT_ZERO_TOL);
    if !(v >= 0.0) || !v.is_finite() {
        return Err(CliError::Usage(format!("--zero-tol must be >= 0, got {v}")));
    }
    rec.num("zero-tol", v);
    Ok(v)
}

fn count(
    flag: &str,
    v: Option<usize>,
    default: usize,
    min: usize,
    rec: &mut Recorder,
) -> Result<usize, CliError> {
    let v = v.unwrap_or(default);
    if v < min {
        return Err(CliError::Usage(format!(
            "--{flag} must be >= {min}, got {v}"
        )));
    }
    rec.text(flag, &v.to_string());
    Ok(v)
}

fn output(o: &OutputArgs, default: Format, rec: &mut Recorder) -> OutputSpec {
    let format = o.format.unwrap_or(default);
    rec.text("format", format.flag_value());
    OutputSpec {
        path: o.output.clone(),
        format,
    }
}

fn reject_unused(
    given: &[(&'static str, f64)],
    allowed: &[&str],
    context: &str,
) -> Result<(), CliError> {
    if let Some((k, _)) = given.iter().find(|(k, _)| !allowed.contains(k)) {
        return Err(CliError::Usage(format!("--{k} is not used by {context}")));
    }
    Ok(())
}

/// Fixed level shifts of a family, from `--r1/--r2` or the shared
/// seven-parameter flags (reduced with `jz = 0`).
fn fixed_shifts(
    s: &SpectrumArgs,
    needs: &[&'static str],
    context: &str,
    rec: &mut Recorder,
) -> Result<(f64, f64), CliError> {
    let given = s.given();
    let seven = given.iter().any(|(k, _)| SEVEN_PARAM_FLAGS.contains(k));
    if seven {
        reject_unused(&given, &SEVEN_PARAM_FLAGS, context)?;
        let p = SpinParams {
            b1: s.b1.unwrap_or(0.0),
            b2: s.b2.unwrap_or(0.0),
            jx: s.jx.unwrap_or(0.0),
            jy: s.jy.unwrap_or(0.0),
            jz: 0.0,
            dz: s.dz.unwrap_or(0.0),
            gz: s.gz.unwrap_or(0.0),
        };
        for (k, v) in &given {
            check_finite(k, *v)?;
            rec.num(k, *v);
        }
        let spec = p.reduce().map_err(CliError::from)?;
        return Ok((spec.r1(), spec.r2()));
    }
    reject_unused(&given, needs, context)?;
    let mut get = |flag: &'static str| -> Result<f64, CliError> {
        if !needs.contains(&flag) {
            return Ok(0.0);
        }
        let v = match flag {
            "r1" => s.r1,
            _ => s.r2,
        }
        .ok_or_else(|| missing(flag))?;
        check_shift(flag, v)?;
        rec.num(flag, v);
        Ok(v)
    };
    Ok((get("r1")?, get("r2")?))
}

fn family(
    kind: FamilyKind,
    baths: &BathArgs,
    s: &SpectrumArgs,
    rec: &mut Recorder,
) -> Result<CaseFamily, CliError> {
    rec.text("family", kind.flag_value());
    let (tc, th) = temperatures(baths, rec)?;
    let context = format!("--family {}", kind.flag_value());
    Ok(match kind {
        FamilyKind::ThreeLevel => {
            reject_unused(&s.given(), &[], &context)?;
            CaseFamily::ThreeLevel { tc, th }
        }
        FamilyKind::R2const => {
            let (_, r2) = fixed_shifts(s, &["r2"], &context, rec)?;
            CaseFamily::R2Const { r2, tc, th }
        }
        FamilyKind::Jz => {
            let (r1, r2) = fixed_shifts(s, &["r1", "r2"], &context, rec)?;
            CaseFamily::Jz { r1, r2, tc, th }
        }
    })
}

fn default_window(f: &CaseFamily) -> (f64, f64) {
    match *f {
        CaseFamily::ThreeLevel { th, .. } => (0.0, 4.0 * th),
        CaseFamily::R2Const { .. } => (0.0, 10.0),
        CaseFamily::Jz { .. } => (-3.0, 3.0),
    }
}

fn window(w: &WindowArgs, f: &CaseFamily, rec: &mut Recorder) -> Result<Window, CliError> {
    let (lo, hi) = default_window(f);
    let vals = [
        ("x-min", w.x_min.unwrap_or(lo)),
        ("x-max", w.x_max.unwrap_or(hi)),
        ("y-min", w.y_min.unwrap_or(lo)),
        ("y-max", w.y_max.unwrap_or(hi)),
    ];
    for (k, v) in vals {
        check_finite(k, v)?;
        rec.num(k, v);
    }
    Window::new(vals[0].1, vals[1].1, vals[2].1, vals[3].1).map_err(|_| {
        CliError::Usage(format!(
            "invalid window --x-min/--x-max/--y-min/--y-max: need min < max, got [{}, {}] x [{}, {}]",
            vals[0].1, vals[1].1, vals[2].1, vals[3].1
        ))
    })
}

fn endpoint(
    shared: Option<f64>,
    specific: Option<f64>,
    flag: &str,
    side: char,
) -> Result<(String, f64), CliError> {
    let name = format!("{flag}-{side}");
    let v = specific
        .or(shared)
        .ok_or_else(|| CliError::Usage(format!("missing required flag --{name} (or --{flag})")))?;
    Ok((name, v))
}

fn analyze_input(
    a: &AnalyzeArgs,
    rec: &mut Recorder,
) -> Result<(AnalyzeInput, f64, f64), CliError> {
    let s = &a.spectrum;
    let given = s.given();
    if let Some(kind) = a.family {
        rec.text("family", kind.flag_value());
        let (tc, th) = temperatures(&a.baths, rec)?;
        let context = format!("analyze --family {}", kind.flag_value());
        let control = |flag: &'static str, v: Option<f64>, rec: &mut Recorder, shift: bool| {
            let v = v.ok_or_else(|| missing(flag))?;
            if shift {
                check_shift(flag, v)?
            } else {
                check_finite(flag, v)?
            };
            rec.num(flag, v);
            Ok::<f64, CliError>(v)
        };
        let (family, x, y) = match kind {
            FamilyKind::ThreeLevel => {
                reject_unused(&given, &["r1-i", "r1-f"], &context)?;
                let x = control("r1-i", s.r1_i, rec, true)?;
                let y = control("r1-f", s.r1_f, rec, true)?;
                (CaseFamily::ThreeLevel { tc, th }, x, y)
            }
            FamilyKind::R2const => {
                reject_unused(&given, &["r1-i", "r1-f", "r2"], &context)?;
                let x = control("r1-i", s.r1_i, rec, true)?;
                let y = control("r1-f", s.r1_f, rec, true)?;
                let r2 = control("r2", s.r2, rec, true)?;
                (CaseFamily::R2Const { r2, tc, th }, x, y)
            }
            FamilyKind::Jz => {
                reject_unused(&given, &["jz-i", "jz-f", "r1", "r2"], &context)?;
                let x = control("jz-i", s.jz_i, rec, false)?;
                let y = control("jz-f", s.jz_f, rec, false)?;
                let r1 = control("r1", s.r1, rec, true)?;
                let r2 = control("r2", s.r2, rec, true)?;
                (CaseFamily::Jz { r1, r2, tc, th }, x, y)
            }
        };
        return Ok((AnalyzeInput::Family { family, x, y }, tc, th));
    }

    let (tc, th) = temperatures(&a.baths, rec)?;
    let is_seven = |k: &str| SEVEN_PARAM_FLAGS.iter().any(|p| k.starts_with(p));
    let seven = given.iter().any(|(k, _)| is_seven(k));
    let reduced = given
        .iter()
        .any(|(k, _)| k.starts_with("r1") || k.starts_with("r2"));
    if seven && reduced {
        return Err(CliError::Usage(
            "--r1/--r2 cannot be combined with the seven-parameter flags --b1 --b2 --jx --jy --dz --gz".into(),
        ));
    }
    for (k, v) in &given {
        check_finite(k, *v)?;
    }
    if seven {
        let side = |c: char| -> SpinParams {
            let pick = |shared: Option<f64>, i: Option<f64>, f: Option<f64>| {
                if c == 'i' { i.or(shared) } else { f.or(shared) }.unwrap_or(0.0)
            };
            SpinParams {
                b1: pick(s.b1, s.b1_i, s.b1_f),
                b2: pick(s.b2, s.b2_i, s.b2_f),
                jx: pick(s.jx, s.jx_i, s.jx_f),
                jy: pick(s.jy, s.jy_i, s.jy_f),
                jz: pick(s.jz, s.jz_i, s.jz_f),
                dz: pick(s.dz, s.dz_i, s.dz_f),
                gz: pick(s.gz, s.gz_i, s.gz_f),
            }
        };
        let (params_i, params_f) = (side('i'), side('f'));
        for (c, p) in [('i', &params_i), ('f', &params_f)] {
            for (k, v) in [
                ("b1", p.b1),
                ("b2", p.b2),
                ("jx", p.jx),
                ("jy", p.jy),
                ("jz", p.jz),
                ("dz", p.dz),
                ("gz", p.gz),
            ] {
                rec.num(&format!("{k}-{c}"), v);
            }
        }
        return Ok((AnalyzeInput::Seven { params_i, params_f }, tc, th));
    }

    let mut spec = |c: char| -> Result<Spectrum, CliError> {
        let pick = |i: Option<f64>, f: Option<f64>| if c == 'i' { i } else { f };
        let (kj, jz) = endpoint(s.jz, pick(s.jz_i, s.jz_f), "jz", c)?;
        let (k1, r1) = endpoint(s.r1, pick(s.r1_i, s.r1_f), "r1", c)?;
        let (k2, r2) = endpoint(s.r2, pick(s.r2_i, s.r2_f), "r2", c)?;
        check_shift(&k1, r1)?;
        check_shift(&k2, r2)?;
        rec.num(&kj, jz);
        rec.num(&k1, r1);
        rec.num(&k2, r2);
        Spectrum::new(jz, r1, r2).map_err(CliError::from)
    };
    let spec_i = spec('i')?;
    let spec_f = spec('f')?;
    Ok((AnalyzeInput::Reduced { spec_i, spec_f }, tc, th))
}

pub fn resolve(cmd: &Command) -> Result<Resolved, CliError> {
    let mut rec = Recorder(Settings::new());
    let r = &mut rec;
    let (command, run, output) = match cmd {
        Command::Analyze(a) => {
            let (input, tc, th) = analyze_input(a, r)?;
            let zero_tol = zero_tol(a.zero_tol, r)?;
            let out = output(&a.output, Format::Json, r);
            (
                "analyze",
                RunConfig::Analyze {
                    input,
                    tc,
                    th,
                    zero_tol,
                },
                out,
            )
        }
        Command::Sweep(a) => {
            let family = family(a.family, &a.baths, &a.spectrum, r)?;
            let window = window(&a.window, &family, r)?;
            let resolution = count("resolution", a.resolution, DEFAULT_RESOLUTION, 2, r)?;
            let zero_tol = zero_tol(a.zero_tol, r)?;
            let out = output(&a.output, Format::Csv, r);
            (
                "sweep",
                RunConfig::Sweep {
                    family,
                    window,
                    resolution,
                    zero_tol,
                },
                out,
            )
        }
        Command::Boundaries(a) => {
            let family = family(a.family, &a.baths, &a.spectrum, r)?;
            let window = window(&a.window, &family, r)?;
            let samples = count("samples", a.samples, DEFAULT_CURVE_SAMPLES, 2, r)?;
            let out = output(&a.output, Format::Json, r);
            (
                "boundaries",
                RunConfig::Boundaries {
                    family,
                    window,
                    samples,
                },
                out,
            )
        }
        Command::Optimize(a) => {
            let family = family(a.family, &a.baths, &a.spectrum, r)?;
            let window = window(&a.window, &family, r)?;
            let grid = count("grid", a.grid, DEFAULT_GRID, 3, r)?;
            let refine_tol = a.refine_tol.unwrap_or(DEFAULT_REFINE_TOL);
            if !(refine_tol > 0.0) || !refine_tol.is_finite() {
                return Err(CliError::Usage(format!(
                    "--refine-tol must be > 0, got {refine_tol}"
                )));
            }
            r.num("refine-tol", refine_tol);
            let zero_tol = zero_tol(a.zero_tol, r)?;
            let objective = if a.maximize {
                Objective::MaximizeWork
            } else {
                Objective::MinimizeWork
            };
            r.text("maximize", if a.maximize { "true" } else { "false" });
            let problem = OptimizationProblem::new(family, window)
                .with_grid(grid)
                .with_refine_tol(refine_tol)
                .with_zero_tol(zero_tol)
                .with_objective(objective);
            let out = output(&a.output, Format::Json, r);
            ("optimize", RunConfig::Optimize { problem }, out)
        }
        Command::Table1(a) => {
            let tc = a.tc.ok_or_else(|| missing("tc"))?;
            if a.th.is_empty() {
                return Err(missing("th"));
            }
            for &th in &a.th {
                check_bath_pair(tc, th)?;
                if th == tc {
                    return Err(CliError::Usage(format!(
                        "invalid temperatures --tc/--th: every th must exceed tc, got tc={tc}, th={th}"
                    )));
                }
            }
            r.num("tc", tc);
            let list: Vec<String> = a.th.iter().map(|v| v.to_string()).collect();
            r.text("th", &list.join(","));
            let out = output(&a.output, Format::Csv, r);
            (
                "table1",
                RunConfig::Table1 {
                    tc,
                    th: a.th.clone(),
                },
                out,
            )
        }
        Command::Replay(_) => unreachable!("replay is dispatched before resolution"),
    };
    Ok(Resolved {
        command,
        run,
        output,
        settings: rec.0,
    })
}
