//! Local extrema of the total work over a control window.
//!
//! A coarse grid scan picks strict interior local-minimum nodes; each one
//! seeds a derivative-free pattern search (compass and diagonal polls with
//! step halving). Refined points from the same basin are merged.

use std::fmt::Write as _;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycle::{carnot_efficiency, novikov_efficiency, OperatingMode, DEFAULT_ZERO_TOL};
use crate::error::{check_baths, OttoError, Result};
use crate::regimes::{CaseFamily, Window};

pub const DEFAULT_GRID: usize = 256;
pub const DEFAULT_REFINE_TOL: f64 = 1e-7;
/// Refined points closer than this many `refine_tol` belong to one basin.
pub const BASIN_MERGE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Most negative work: engines at maximum output.
    MinimizeWork,
    /// Most positive work, e.g. refrigerator-side optima.
    MaximizeWork,
}

impl Objective {
    fn sign(self) -> f64 {
        match self {
            Objective::MinimizeWork => 1.0,
            Objective::MaximizeWork => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizationProblem {
    pub family: CaseFamily,
    pub window: Window,
    pub grid: usize,
    pub refine_tol: f64,
    pub zero_tol: f64,
    pub objective: Objective,
}

impl OptimizationProblem {
    pub fn new(family: CaseFamily, window: Window) -> Self {
        Self {
            family,
            window,
            grid: DEFAULT_GRID,
            refine_tol: DEFAULT_REFINE_TOL,
            zero_tol: DEFAULT_ZERO_TOL,
            objective: Objective::MinimizeWork,
        }
    }

    pub fn with_grid(mut self, grid: usize) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_refine_tol(mut self, tol: f64) -> Self {
        self.refine_tol = tol;
        self
    }

    pub fn with_zero_tol(mut self, tol: f64) -> Self {
        self.zero_tol = tol;
        self
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        self.window.validate()?;
        if self.grid < 3 {
            return Err(OttoError::InvalidArgument(format!(
                "grid must be >= 3, got {}",
                self.grid
            )));
        }
        if !(self.refine_tol > 0.0) || !self.refine_tol.is_finite() {
            return Err(OttoError::InvalidArgument(format!(
                "refine_tol must be > 0, got {}",
                self.refine_tol
            )));
        }
        if !(self.zero_tol >= 0.0) {
            return Err(OttoError::InvalidArgument(format!(
                "zero_tol must be >= 0, got {}",
                self.zero_tol
            )));
        }
        Ok(())
    }

    /// Objective value: `w` when minimizing, `-w` when maximizing.
    fn objective_at(&self, x: f64, y: f64) -> f64 {
        self.objective.sign() * self.family.work(x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub location: [f64; 2],
    pub w: f64,
    pub q_h: f64,
    pub q_c: f64,
    pub mode: OperatingMode,
    pub efficiency: Option<f64>,
    pub cop: Option<f64>,
    pub basin_id: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternSearch {
    pub point: [f64; 2],
    pub value: f64,
    /// Objective after each accepted move, starting with the seed.
    pub trace: Vec<f64>,
    pub evaluations: usize,
}

const POLL: [[f64; 2]; 8] = [
    [1.0, 0.0],
    [-1.0, 0.0],
    [0.0, 1.0],
    [0.0, -1.0],
    [1.0, 1.0],
    [1.0, -1.0],
    [-1.0, 1.0],
    [-1.0, -1.0],
];

const MAX_EVALUATIONS: usize = 2_000_000;

/// Minimize `f` from `start` inside `window`.
///
/// Polls the four axis neighbours, then the four diagonals, at the current
/// per-axis step; the first strict improvement is taken. When nothing
/// improves both steps halve, until the larger one drops below `tol`.
pub fn pattern_search<F>(
    f: F,
    start: [f64; 2],
    step: [f64; 2],
    tol: f64,
    window: &Window,
) -> PatternSearch
where
    F: Fn(f64, f64) -> f64,
{
    let mut point = start;
    let mut value = f(point[0], point[1]);
    let mut step = step;
    let mut trace = vec![value];
    let mut evaluations = 1;
    while step[0].max(step[1]) >= tol && evaluations < MAX_EVALUATIONS {
        let mut moved = false;
        for d in POLL {
            let cand = [point[0] + d[0] * step[0], point[1] + d[1] * step[1]];
            if !window.contains(cand[0], cand[1]) {
                continue;
            }
            let v = f(cand[0], cand[1]);
            evaluations += 1;
            if v < value {
                point = cand;
                value = v;
                trace.push(v);
                moved = true;
                break;
            }
        }
        if !moved {
            step = [0.5 * step[0], 0.5 * step[1]];
        }
    }
    PatternSearch {
        point,
        value,
        trace,
        evaluations,
    }
}

/// Grid nodes that are strict minima of the objective among their 8 neighbours.
fn grid_seeds(problem: &OptimizationProblem) -> Vec<[f64; 2]> {
    let n = problem.grid;
    let w = &problem.window;
    let xs = Window::axis(w.x_min, w.x_max, n);
    let ys = Window::axis(w.y_min, w.y_max, n);
    let values: Vec<Vec<f64>> = ys
        .par_iter()
        .map(|&y| xs.iter().map(|&x| problem.objective_at(x, y)).collect())
        .collect();
    let mut seeds = Vec::new();
    for iy in 1..n - 1 {
        for ix in 1..n - 1 {
            let v = values[iy][ix];
            if !(v < -problem.zero_tol) {
                continue;
            }
            let strict = (-1isize..=1).all(|dy| {
                (-1isize..=1).all(|dx| {
                    (dx == 0 && dy == 0)
                        || v < values[(iy as isize + dy) as usize][(ix as isize + dx) as usize]
                })
            });
            if strict {
                seeds.push([xs[ix], ys[iy]]);
            }
        }
    }
    seeds
}

/// All local minima of `sign * W` inside the window, best first.
pub fn find_minima(problem: &OptimizationProblem) -> Result<Vec<Extremum>> {
    problem.validate()?;
    let seeds = grid_seeds(problem);
    let w = &problem.window;
    let step = [
        (w.x_max - w.x_min) / (problem.grid - 1) as f64,
        (w.y_max - w.y_min) / (problem.grid - 1) as f64,
    ];
    let mut refined: Vec<PatternSearch> = seeds
        .par_iter()
        .map(|&s| {
            pattern_search(
                |x, y| problem.objective_at(x, y),
                s,
                step,
                problem.refine_tol,
                w,
            )
        })
        .collect();
    refined.retain(|r| r.value < -problem.zero_tol);
    refined.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then(a.point[0].total_cmp(&b.point[0]))
            .then(a.point[1].total_cmp(&b.point[1]))
    });

    let radius = BASIN_MERGE_FACTOR * problem.refine_tol;
    let mut kept: Vec<[f64; 2]> = Vec::new();
    for r in &refined {
        let dup = kept
            .iter()
            .any(|k| (k[0] - r.point[0]).hypot(k[1] - r.point[1]) <= radius);
        if !dup {
            kept.push(r.point);
        }
    }
    if kept.is_empty() {
        return Err(OttoError::EmptyResult);
    }
    kept.into_iter()
        .enumerate()
        .map(|(basin_id, p)| {
            let led = problem.family.evaluate(p[0], p[1], problem.zero_tol)?;
            Ok(Extremum {
                location: p,
                w: led.w,
                q_h: led.q_h,
                q_c: led.q_c,
                mode: led.mode,
                efficiency: led.efficiency,
                cop: led.cop,
                basin_id,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxPowerReport {
    pub extremum: Extremum,
    pub eta_mp: f64,
    pub eta_c: f64,
    pub eta_n: f64,
}

/// Efficiency at the global work minimum, with Carnot and Novikov references.
pub fn efficiency_at_max_power(problem: &OptimizationProblem) -> Result<MaxPowerReport> {
    let problem = problem.with_objective(Objective::MinimizeWork);
    let best = find_minima(&problem)?
        .into_iter()
        .find(|e| e.mode == OperatingMode::Engine)
        .ok_or(OttoError::EmptyResult)?;
    let (tc, th) = problem.family.temperatures();
    Ok(MaxPowerReport {
        eta_mp: best.w.abs() / best.q_h,
        eta_c: carnot_efficiency(tc, th)?,
        eta_n: novikov_efficiency(tc, th)?,
        extremum: best,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub th: f64,
    pub r1_i: f64,
    pub r1_f: f64,
    pub w: f64,
    pub eta_mp: f64,
    pub eta_c: f64,
    pub eta_n: f64,
}

/// Three-level window used for the maximum-output search at `(tc, th)`.
pub fn table1_window(_tc: f64, th: f64) -> Result<Window> {
    Window::square(0.0, 4.0 * th)
}

/// Maximum-output engine of the three-level medium for each hot-bath temperature.
pub fn table1(tc: f64, th_list: &[f64]) -> Result<Vec<Table1Row>> {
    th_list
        .iter()
        .map(|&th| {
            check_baths(tc, th)?;
            if th <= tc {
                return Err(OttoError::BadTemperatures { tc, th });
            }
            let problem =
                OptimizationProblem::new(CaseFamily::ThreeLevel { tc, th }, table1_window(tc, th)?);
            let rep = efficiency_at_max_power(&problem)?;
            Ok(Table1Row {
                th,
                r1_i: rep.extremum.location[0],
                r1_f: rep.extremum.location[1],
                w: rep.extremum.w,
                eta_mp: rep.eta_mp,
                eta_c: rep.eta_c,
                eta_n: rep.eta_n,
            })
        })
        .collect()
}

pub fn write_table1_csv<W: Write>(rows: &[Table1Row], out: W) -> Result<()> {
    let io = |e: csv::Error| OttoError::InvalidArgument(format!("csv output: {e}"));
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["th", "r1_i", "r1_f", "w", "eta_mp", "eta_c", "eta_n"])
        .map_err(io)?;
    for r in rows {
        wtr.write_record(
            [r.th, r.r1_i, r.r1_f, r.w, r.eta_mp, r.eta_c, r.eta_n].map(|v| v.to_string()),
        )
        .map_err(io)?;
    }
    wtr.flush()
        .map_err(|e| OttoError::InvalidArgument(format!("csv output: {e}")))
}

/// `v` rounded to six significant digits.
pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let digits = 5 - v.abs().log10().floor() as i32;
    format!("{:.*}", digits.max(0) as usize, v)
}

/// Aligned plain-text rendering of the maximum-output table.
pub fn format_table1_text(rows: &[Table1Row]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>6} {:>10} {:>10} {:>11} {:>8} {:>8} {:>8}",
        "th", "r1_i", "r1_f", "w", "eta_mp", "eta_c", "eta_n"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:>6} {:>10} {:>10} {:>11} {:>7.2}% {:>7.2}% {:>7.2}%",
            r.th,
            sig6(r.r1_i),
            sig6(r.r1_f),
            sig6(r.w),
            100.0 * r.eta_mp,
            100.0 * r.eta_c,
            100.0 * r.eta_n
        );
    }
    s
}
