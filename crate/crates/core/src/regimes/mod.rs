//! Closed-form special cases, analytic mode boundaries and region maps.
//!
//! Three two-parameter families are supported, each mapping a point
//! `(x, y)` of its control plane onto an Otto cycle:
//!
//! | family       | x      | y      | fixed            |
//! |--------------|--------|--------|------------------|
//! | `ThreeLevel` | `r1_i` | `r1_f` | `jz = r2 = 0`    |
//! | `R2Const`    | `r1_i` | `r1_f` | `jz = 0`, `r2`   |
//! | `Jz`         | `jz_i` | `jz_f` | `r1`, `r2`       |

mod jz;
mod map;
mod r2const;
mod three_level;

pub use jz::{
    heat_cold_boundary, heat_hot_boundary, jz_boundaries, w_jz, JzBoundaries, JzCase, Line,
};
pub use map::{region_map, Cell, RegionMap, DEFAULT_RESOLUTION};
pub use r2const::{
    boundary_r2const, critical_r2, diagonal_crossings, kappa, w_r2const, R2ConstCase,
    LOOP_SCAN_MAX, LOOP_SCAN_POINTS,
};
pub use three_level::{
    eta_three_level, node_temperatures, three_level_boundaries, w_three_level,
    ThreeLevelBoundaries, ThreeLevelCase,
};

use serde::{Deserialize, Serialize};

use crate::cycle::{analyze, CycleResult, CycleSpec};
use crate::error::{check_baths, OttoError, Result};

/// Default number of samples per boundary curve.
pub const DEFAULT_CURVE_SAMPLES: usize = 512;

/// Axis-aligned rectangle in a control plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let w = Self {
            x_min,
            x_max,
            y_min,
            y_max,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn square(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, lo, hi)
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.x_min, self.x_max, self.y_min, self.y_max]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite || self.x_min >= self.x_max || self.y_min >= self.y_max {
            return Err(OttoError::InvalidWindow(format!(
                "[{}, {}] x [{}, {}]",
                self.x_min, self.x_max, self.y_min, self.y_max
            )));
        }
        Ok(())
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }

    /// `n` evenly spaced nodes on `[lo, hi]`, endpoints included.
    pub(crate) fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        let step = (hi - lo) / (n - 1) as f64;
        (0..n)
            .map(|k| if k + 1 == n { hi } else { lo + k as f64 * step })
            .collect()
    }
}

/// A two-parameter family of cycles; `(x, y)` are the initial and final
/// values of the varied control.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CaseFamily {
    ThreeLevel {
        tc: f64,
        th: f64,
    },
    #[serde(rename = "r2const")]
    R2Const {
        r2: f64,
        tc: f64,
        th: f64,
    },
    Jz {
        r1: f64,
        r2: f64,
        tc: f64,
        th: f64,
    },
}

impl CaseFamily {
    pub fn validate(&self) -> Result<()> {
        let (tc, th) = self.temperatures();
        check_baths(tc, th)?;
        let shifts: &[(&'static str, f64)] = match self {
            CaseFamily::ThreeLevel { .. } => &[],
            CaseFamily::R2Const { r2, .. } => &[("r2", *r2)],
            CaseFamily::Jz { r1, r2, .. } => &[("r1", *r1), ("r2", *r2)],
        };
        for &(name, v) in shifts {
            if !v.is_finite() {
                return Err(OttoError::NonFinite(name));
            }
            if v < 0.0 {
                return Err(OttoError::NegativeShift { name, value: v });
            }
        }
        Ok(())
    }

    pub fn temperatures(&self) -> (f64, f64) {
        match *self {
            CaseFamily::ThreeLevel { tc, th }
            | CaseFamily::R2Const { tc, th, .. }
            | CaseFamily::Jz { tc, th, .. } => (tc, th),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CaseFamily::ThreeLevel { .. } => "three_level",
            CaseFamily::R2Const { .. } => "r2const",
            CaseFamily::Jz { .. } => "jz",
        }
    }

    pub fn axis_labels(&self) -> (&'static str, &'static str) {
        match self {
            CaseFamily::Jz { .. } => ("jz_i", "jz_f"),
            _ => ("r1_i", "r1_f"),
        }
    }

    /// Total work from the family's closed form.
    ///
    /// For `ThreeLevel` the half-plane `y < x` is the reversed traversal of
    /// the swapped cycle, which puts the hot bath on the larger shift; the
    /// other families use the forward cycle everywhere.
    pub fn work(&self, x: f64, y: f64) -> f64 {
        match *self {
            CaseFamily::ThreeLevel { tc, th } => {
                if y >= x {
                    w_three_level_raw(x, y, tc, th)
                } else {
                    -w_three_level_raw(y, x, tc, th)
                }
            }
            CaseFamily::R2Const { r2, tc, th } => r2const::w_r2const_raw(x, y, r2, tc, th),
            CaseFamily::Jz { r1, r2, tc, th } => jz::w_jz_raw(x, y, r1, r2, tc, th),
        }
    }

    /// The forward cycle at `(x, y)` plus whether the family reads it reversed.
    pub fn cycle_at(&self, x: f64, y: f64) -> Result<(CycleSpec, bool)> {
        match *self {
            CaseFamily::ThreeLevel { tc, th } => {
                let reversed = y < x;
                let (a, b) = if reversed { (y, x) } else { (x, y) };
                Ok((ThreeLevelCase::new(a, b, tc, th)?.cycle_spec()?, reversed))
            }
            CaseFamily::R2Const { r2, tc, th } => {
                Ok((R2ConstCase::new(x, y, r2, tc, th)?.cycle_spec()?, false))
            }
            CaseFamily::Jz { r1, r2, tc, th } => {
                Ok((JzCase::new(x, y, r1, r2, tc, th)?.cycle_spec()?, false))
            }
        }
    }

    /// Full ledger and mode at `(x, y)`.
    ///
    /// A reversed three-level point exchanges heat at `tc * b / a` and
    /// `th * a / b` rather than at the bath temperatures, so an engine there
    /// can beat `1 - tc / th`.
    pub fn evaluate(&self, x: f64, y: f64, zero_tol: f64) -> Result<CycleResult> {
        let (cycle, reversed) = self.cycle_at(x, y)?;
        let fwd = analyze(&cycle, zero_tol)?;
        if reversed {
            fwd.reversed(zero_tol)
        } else {
            Ok(fwd)
        }
    }

    /// Boundary polylines clipped to `window`; curves with no point inside
    /// the window come back with no segments.
    pub fn boundaries(&self, window: &Window, samples: usize) -> Result<Vec<BoundaryCurve>> {
        window.validate()?;
        if samples < 2 {
            return Err(OttoError::InvalidArgument(
                "need at least 2 curve samples".into(),
            ));
        }
        match *self {
            CaseFamily::ThreeLevel { tc, th } => {
                let b = three_level_boundaries(tc, th)?;
                Ok(vec![
                    BoundaryCurve::sample_line(1, "diagonal", 1.0, 0.0, window, samples),
                    BoundaryCurve::sample_line(
                        2,
                        "w_zero_upper",
                        b.upper_slope,
                        0.0,
                        window,
                        samples,
                    ),
                    BoundaryCurve::sample_line(
                        3,
                        "w_zero_lower",
                        b.lower_slope,
                        0.0,
                        window,
                        samples,
                    ),
                ])
            }
            CaseFamily::R2Const { r2, tc, th } => {
                check_baths(tc, th)?;
                Ok(vec![
                    BoundaryCurve::sample_line(1, "diagonal", 1.0, 0.0, window, samples),
                    BoundaryCurve::sample(2, "w_zero", Orientation::YofX, window, samples, |x| {
                        if x < 0.0 {
                            None
                        } else {
                            Some(boundary_r2const(x, r2, tc, th))
                        }
                    }),
                ])
            }
            CaseFamily::Jz { r1, r2, tc, th } => {
                jz::jz_boundary_curves(r1, r2, tc, th, window, samples)
            }
        }
    }
}

fn w_three_level_raw(r1_i: f64, r1_f: f64, tc: f64, th: f64) -> f64 {
    (r1_f - r1_i) * ((r1_f / (2.0 * th)).tanh() - (r1_i / (2.0 * tc)).tanh())
}

/// Which coordinate a boundary curve is parametrized by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `y = g(x)`, sampled on a uniform grid of `x`.
    YofX,
    /// `x = g(y)`, sampled on a uniform grid of `y`.
    XofY,
}

/// Sampled boundary, split into connected segments where the curve leaves
/// its domain or the window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    /// Boundary label (1-4).
    pub id: u8,
    pub label: String,
    pub orientation: Orientation,
    pub segments: Vec<Vec<[f64; 2]>>,
    /// Samples where the defining logarithm had a non-positive argument.
    pub dropped_out_of_domain: usize,
    /// Samples whose dependent coordinate fell outside the window.
    pub dropped_out_of_window: usize,
}

impl BoundaryCurve {
    pub(crate) fn sample<F>(
        id: u8,
        label: &str,
        orientation: Orientation,
        window: &Window,
        samples: usize,
        g: F,
    ) -> Self
    where
        F: Fn(f64) -> Option<f64>,
    {
        let (lo, hi) = match orientation {
            Orientation::YofX => (window.x_min, window.x_max),
            Orientation::XofY => (window.y_min, window.y_max),
        };
        let mut curve = BoundaryCurve {
            id,
            label: label.to_string(),
            orientation,
            segments: Vec::new(),
            dropped_out_of_domain: 0,
            dropped_out_of_window: 0,
        };
        let mut current: Vec<[f64; 2]> = Vec::new();
        for t in Window::axis(lo, hi, samples) {
            let point = match g(t) {
                Some(v) if v.is_finite() => {
                    let p = match orientation {
                        Orientation::YofX => [t, v],
                        Orientation::XofY => [v, t],
                    };
                    if window.contains(p[0], p[1]) {
                        Some(p)
                    } else {
                        curve.dropped_out_of_window += 1;
                        None
                    }
                }
                _ => {
                    curve.dropped_out_of_domain += 1;
                    None
                }
            };
            match point {
                Some(p) => current.push(p),
                None if !current.is_empty() => curve.segments.push(std::mem::take(&mut current)),
                None => {}
            }
        }
        if !current.is_empty() {
            curve.segments.push(current);
        }
        curve
    }

    pub(crate) fn sample_line(
        id: u8,
        label: &str,
        slope: f64,
        intercept: f64,
        window: &Window,
        samples: usize,
    ) -> Self {
        Self::sample(id, label, Orientation::YofX, window, samples, |x| {
            Some(slope * x + intercept)
        })
    }

    pub fn points(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        self.segments.iter().flatten().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Euclidean distance from `p` to the polyline.
    pub fn distance_to(&self, p: [f64; 2]) -> f64 {
        let mut best = f64::INFINITY;
        for seg in &self.segments {
            if seg.len() == 1 {
                best = best.min(dist(p, seg[0]));
            }
            for w in seg.windows(2) {
                best = best.min(point_segment_distance(p, w[0], w[1]));
            }
        }
        best
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return dist(p, a);
    }
    let t = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0);
    dist(p, [a[0] + t * dx, a[1] + t * dy])
}
