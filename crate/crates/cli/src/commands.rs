use std::fmt::Write as _;

use serde::Serialize;

use otto_spin_core::cycle::{analyze, CycleResult, CycleSpec};
use otto_spin_core::optimize::{
    find_minima, format_table1_text, sig6, table1, write_table1_csv, Extremum, OptimizationProblem,
    Table1Row,
};
use otto_spin_core::regimes::{
    critical_r2, diagonal_crossings, jz_boundaries, kappa, region_map, three_level_boundaries,
    BoundaryCurve, CaseFamily, JzBoundaries, RegionMap, ThreeLevelBoundaries, Window,
    LOOP_SCAN_MAX, LOOP_SCAN_POINTS,
};
use otto_spin_core::thermo::SpinParams;
use otto_spin_core::OttoError;

use crate::args::Format;
use crate::config::{AnalyzeInput, Resolved, RunConfig};
use crate::error::CliError;
use crate::output::{to_json, Provenance};

/// A rendered command result.
pub struct Rendered {
    pub bytes: Vec<u8>,
    /// JSON documents carry their provenance inline; other formats need a sidecar.
    pub inline_provenance: bool,
    /// One-line summary for the terminal.
    pub summary: Option<String>,
}

pub fn execute(r: &Resolved) -> Result<Rendered, CliError> {
    let prov = Provenance::new(r.command, &r.settings);
    let format = r.output.format;
    match &r.run {
        RunConfig::Analyze {
            input,
            tc,
            th,
            zero_tol,
        } => run_analyze(input, *tc, *th, *zero_tol, format, &prov),
        RunConfig::Sweep {
            family,
            window,
            resolution,
            zero_tol,
        } => {
            let map = region_map(family, window, *resolution, *resolution, *zero_tol)?;
            render_sweep(&map, format, &prov)
        }
        RunConfig::Boundaries {
            family,
            window,
            samples,
        } => render_boundaries(family, window, *samples, format, &prov),
        RunConfig::Optimize { problem } => {
            let extrema = find_minima(problem)?;
            render_optimize(problem, &extrema, format, &prov)
        }
        RunConfig::Table1 { tc, th } => {
            let rows = table1(*tc, th)?;
            render_table1(&rows, format, &prov)
        }
    }
}

fn json_doc<T: Serialize>(doc: &T) -> Result<Rendered, CliError> {
    Ok(Rendered {
        bytes: to_json(doc)?,
        inline_provenance: true,
        summary: None,
    })
}

fn plain(bytes: Vec<u8>) -> Rendered {
    Rendered {
        bytes,
        inline_provenance: false,
        summary: None,
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(format!("csv output: {e}"))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// `engine W=-0.030259 eta=8.8%`
pub fn summary_line(r: &CycleResult) -> String {
    let mut s = format!("{} W={:.6}", r.mode, r.w);
    if let Some(eta) = r.efficiency {
        let _ = write!(s, " eta={:.1}%", 100.0 * eta);
    }
    if let Some(cop) = r.cop {
        let _ = write!(s, " cop={cop:.2}");
    }
    s
}

#[derive(Serialize)]
struct AnalyzeDoc<'a> {
    provenance: &'a Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    params_i: Option<SpinParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    params_f: Option<SpinParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<CaseFamily>,
    /// Set when the ledger is the reversed traversal of the swapped cycle.
    reversed: bool,
    cycle: CycleSpec,
    result: CycleResult,
}

fn run_analyze(
    input: &AnalyzeInput,
    tc: f64,
    th: f64,
    zero_tol: f64,
    format: Format,
    prov: &Provenance,
) -> Result<Rendered, CliError> {
    let (cycle, result, params, family, reversed) = match input {
        AnalyzeInput::Reduced { spec_i, spec_f } => {
            let c = CycleSpec::new(*spec_i, *spec_f, tc, th)?;
            (c, analyze(&c, zero_tol)?, None, None, false)
        }
        AnalyzeInput::Seven { params_i, params_f } => {
            let c = CycleSpec::new(params_i.reduce()?, params_f.reduce()?, tc, th)?;
            (
                c,
                analyze(&c, zero_tol)?,
                Some((*params_i, *params_f)),
                None,
                false,
            )
        }
        AnalyzeInput::Family { family, x, y } => {
            let (c, reversed) = family.cycle_at(*x, *y)?;
            (
                c,
                family.evaluate(*x, *y, zero_tol)?,
                None,
                Some(*family),
                reversed,
            )
        }
    };
    let summary = summary_line(&result);
    let mut out = match format {
        Format::Json => json_doc(&AnalyzeDoc {
            provenance: prov,
            params_i: params.map(|p| p.0),
            params_f: params.map(|p| p.1),
            family,
            reversed,
            cycle,
            result,
        })?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "mode",
                "w_in",
                "w_out",
                "w",
                "q_h",
                "q_c",
                "efficiency",
                "cop",
            ])
            .map_err(csv_err)?;
            w.write_record([
                result.mode.as_str().to_string(),
                result.w_in.to_string(),
                result.w_out.to_string(),
                result.w.to_string(),
                result.q_h.to_string(),
                result.q_c.to_string(),
                opt(result.efficiency),
                opt(result.cop),
            ])
            .map_err(csv_err)?;
            plain(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?)
        }
        Format::Text => plain(format!("{summary}\n").into_bytes()),
    };
    out.summary = Some(summary);
    Ok(out)
}

#[derive(Serialize)]
struct SweepDoc<'a> {
    provenance: &'a Provenance,
    map: &'a RegionMap,
}

fn render_sweep(map: &RegionMap, format: Format, prov: &Provenance) -> Result<Rendered, CliError> {
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            map.write_csv(&mut buf)?;
            Ok(plain(buf))
        }
        Format::Json => json_doc(&SweepDoc {
            provenance: prov,
            map,
        }),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{} {}x{}", map.family.name(), map.nx, map.ny);
            for (mode, n) in map.mode_counts() {
                let _ = writeln!(s, "{:<13}{n:>8}", mode.as_str());
            }
            for (a, b) in map.adjacent_modes() {
                let _ = writeln!(s, "adjacent {a} {b}");
            }
            Ok(plain(s.into_bytes()))
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum BoundaryExtras {
    ThreeLevel(ThreeLevelBoundaries),
    R2Const {
        kappa: f64,
        critical_r2: Option<f64>,
        /// Nonzero crossings of the W = 0 curve with the diagonal; a loop when non-empty.
        diagonal_crossings: Vec<f64>,
    },
    Jz(JzLines),
}

#[derive(Serialize)]
struct JzLines {
    diagonal: otto_spin_core::regimes::Line,
    work_line: otto_spin_core::regimes::Line,
    intersection: Option<[f64; 2]>,
}

#[derive(Serialize)]
struct BoundariesDoc<'a> {
    provenance: &'a Provenance,
    family: CaseFamily,
    window: Window,
    extras: BoundaryExtras,
    curves: Vec<BoundaryCurve>,
}

fn render_boundaries(
    family: &CaseFamily,
    window: &Window,
    samples: usize,
    format: Format,
    prov: &Provenance,
) -> Result<Rendered, CliError> {
    let (extras, curves) = match *family {
        CaseFamily::ThreeLevel { tc, th } => (
            BoundaryExtras::ThreeLevel(three_level_boundaries(tc, th)?),
            family.boundaries(window, samples)?,
        ),
        CaseFamily::R2Const { r2, tc, th } => {
            let critical = match critical_r2(tc, th) {
                Ok(v) => Some(v),
                Err(OttoError::NoRoot { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            let extras = BoundaryExtras::R2Const {
                kappa: kappa(r2, tc, th),
                critical_r2: critical,
                diagonal_crossings: diagonal_crossings(r2, tc, th, LOOP_SCAN_MAX, LOOP_SCAN_POINTS),
            };
            (extras, family.boundaries(window, samples)?)
        }
        CaseFamily::Jz { r1, r2, tc, th } => {
            let JzBoundaries {
                diagonal,
                work_line,
                intersection,
                curves,
            } = jz_boundaries(r1, r2, tc, th, window, samples)?;
            (
                BoundaryExtras::Jz(JzLines {
                    diagonal,
                    work_line,
                    intersection,
                }),
                curves,
            )
        }
    };
    match format {
        Format::Json => json_doc(&BoundariesDoc {
            provenance: prov,
            family: *family,
            window: *window,
            extras,
            curves,
        }),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["curve", "label", "segment", "x", "y"])
                .map_err(csv_err)?;
            for c in &curves {
                for (k, seg) in c.segments.iter().enumerate() {
                    for p in seg {
                        w.write_record([
                            c.id.to_string(),
                            c.label.to_string(),
                            k.to_string(),
                            p[0].to_string(),
                            p[1].to_string(),
                        ])
                        .map_err(csv_err)?;
                    }
                }
            }
            Ok(plain(
                w.into_inner().map_err(|e| CliError::Io(e.to_string()))?,
            ))
        }
        Format::Text => {
            let mut s = String::new();
            for c in &curves {
                let _ = writeln!(
                    s,
                    "{} {:<10} segments={} points={}",
                    c.id,
                    c.label,
                    c.segments.len(),
                    c.points().count()
                );
            }
            Ok(plain(s.into_bytes()))
        }
    }
}

#[derive(Serialize)]
struct OptimizeDoc<'a> {
    provenance: &'a Provenance,
    problem: &'a OptimizationProblem,
    extrema: &'a [Extremum],
}

fn render_optimize(
    problem: &OptimizationProblem,
    extrema: &[Extremum],
    format: Format,
    prov: &Provenance,
) -> Result<Rendered, CliError> {
    match format {
        Format::Json => json_doc(&OptimizeDoc {
            provenance: prov,
            problem,
            extrema,
        }),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "basin_id",
                "x",
                "y",
                "w",
                "q_h",
                "q_c",
                "mode",
                "efficiency",
                "cop",
            ])
            .map_err(csv_err)?;
            for e in extrema {
                w.write_record([
                    e.basin_id.to_string(),
                    e.location[0].to_string(),
                    e.location[1].to_string(),
                    e.w.to_string(),
                    e.q_h.to_string(),
                    e.q_c.to_string(),
                    e.mode.as_str().to_string(),
                    opt(e.efficiency),
                    opt(e.cop),
                ])
                .map_err(csv_err)?;
            }
            Ok(plain(
                w.into_inner().map_err(|e| CliError::Io(e.to_string()))?,
            ))
        }
        Format::Text => {
            let (xl, yl) = problem.family.axis_labels();
            let mut s = format!(
                "{:>5} {:>11} {:>11} {:>11} {:>11}  {:<13}{}\n",
                "basin", xl, yl, "w", "q_h", "mode", "eta/cop"
            );
            for e in extrema {
                let metric = match (e.efficiency, e.cop) {
                    (Some(eta), _) => format!("{:.2}%", 100.0 * eta),
                    (_, Some(cop)) => format!("{cop:.4}"),
                    _ => "-".to_string(),
                };
                let _ = writeln!(
                    s,
                    "{:>5} {:>11} {:>11} {:>11} {:>11}  {:<13}{metric}",
                    e.basin_id,
                    sig6(e.location[0]),
                    sig6(e.location[1]),
                    sig6(e.w),
                    sig6(e.q_h),
                    e.mode.as_str()
                );
            }
            Ok(plain(s.into_bytes()))
        }
    }
}

#[derive(Serialize)]
struct Table1Doc<'a> {
    provenance: &'a Provenance,
    rows: &'a [Table1Row],
}

fn render_table1(
    rows: &[Table1Row],
    format: Format,
    prov: &Provenance,
) -> Result<Rendered, CliError> {
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_table1_csv(rows, &mut buf)?;
            Ok(plain(buf))
        }
        Format::Text => Ok(plain(format_table1_text(rows).into_bytes())),
        Format::Json => json_doc(&Table1Doc {
            provenance: prov,
            rows,
        }),
    }
}
