use serde::{Deserialize, Serialize};

use crate::cycle::{CycleSpec, HyperbolicWeights};
use crate::error::{check_baths, OttoError, Result};
use crate::math::ln_cosh;
use crate::thermo::Spectrum;

use super::{BoundaryCurve, Orientation, Window};

/// `r1`, `r2` fixed; the longitudinal coupling moves from `jz_i` to `jz_f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JzCase {
    pub jz_i: f64,
    pub jz_f: f64,
    pub r1: f64,
    pub r2: f64,
    pub tc: f64,
    pub th: f64,
}

impl JzCase {
    pub fn new(jz_i: f64, jz_f: f64, r1: f64, r2: f64, tc: f64, th: f64) -> Result<Self> {
        check_baths(tc, th)?;
        // shift validation happens in Spectrum::new
        Spectrum::new(jz_i, r1, r2)?;
        Spectrum::new(jz_f, r1, r2)?;
        Ok(Self {
            jz_i,
            jz_f,
            r1,
            r2,
            tc,
            th,
        })
    }

    pub fn cycle_spec(&self) -> Result<CycleSpec> {
        CycleSpec::new(
            Spectrum::new(self.jz_i, self.r1, self.r2)?,
            Spectrum::new(self.jz_f, self.r1, self.r2)?,
            self.tc,
            self.th,
        )
    }

    pub fn work(&self) -> f64 {
        w_jz_raw(self.jz_i, self.jz_f, self.r1, self.r2, self.tc, self.th)
    }
}

/// `(a - b) / (a + b)` with `a = cosh(r1/T) e^{-jz/T}`, `b = cosh(r2/T) e^{jz/T}`,
/// rewritten as a tanh of half the log ratio.
fn population_imbalance(jz: f64, r1: f64, r2: f64, t: f64) -> f64 {
    (0.5 * (ln_cosh(r1 / t) - ln_cosh(r2 / t)) - jz / t).tanh()
}

pub(super) fn w_jz_raw(jz_i: f64, jz_f: f64, r1: f64, r2: f64, tc: f64, th: f64) -> f64 {
    (jz_f - jz_i)
        * (population_imbalance(jz_i, r1, r2, tc) - population_imbalance(jz_f, r1, r2, th))
}

/// Free-function form of [`JzCase::work`].
pub fn w_jz(case: &JzCase) -> f64 {
    case.work()
}

/// `jz_f = slope * jz_i + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

impl Line {
    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    pub fn intersect(&self, other: &Line) -> Option<[f64; 2]> {
        let ds = self.slope - other.slope;
        if ds == 0.0 {
            return None;
        }
        let x = (other.intercept - self.intercept) / ds;
        Some([x, self.eval(x)])
    }
}

/// The four mode boundaries of the `(jz_i, jz_f)` plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JzBoundaries {
    /// Boundary 1: `jz_f = jz_i` (W = 0).
    pub diagonal: Line,
    /// Boundary 2: the second W = 0 line.
    pub work_line: Line,
    /// Crossing of boundaries 1 and 2; none when `tc == th`.
    pub intersection: Option<[f64; 2]>,
    /// Boundaries 1-4 sampled inside the window (3: Q_h = 0, 4: Q_c = 0).
    pub curves: Vec<BoundaryCurve>,
}

fn work_line(r1: f64, r2: f64, tc: f64, th: f64) -> Line {
    Line {
        slope: th / tc,
        intercept: 0.5
            * th
            * (ln_cosh(r1 / th) + ln_cosh(r2 / tc) - ln_cosh(r1 / tc) - ln_cosh(r2 / th)),
    }
}

/// Mean energy at `(jz, r1, r2)` in a Gibbs state at `t`.
fn mean_energy(jz: f64, r1: f64, r2: f64, t: f64) -> Option<f64> {
    let spec = Spectrum::new(jz, r1, r2).ok()?;
    Some(HyperbolicWeights::new(&spec, t).mean_energy(jz, r1, r2))
}

/// Solve the zero-heat condition for the coupling paired with the bath at `t`.
///
/// `jz_other` is the coupling of the opposite node and `a` the mean energy at
/// that node; returns `None` when the log argument is not positive.
fn zero_heat_coupling(jz_other: f64, a: f64, r1: f64, r2: f64, t: f64) -> Option<f64> {
    let num = jz_other - r1 * (r1 / t).tanh() - a;
    let den = jz_other + r2 * (r2 / t).tanh() + a;
    let ratio = num / den;
    if !(ratio > 0.0) || !ratio.is_finite() {
        return None;
    }
    Some(0.5 * t * (ln_cosh(r1 / t) - ln_cosh(r2 / t) + ratio.ln()))
}

/// Boundary 3 (`Q_h = 0`): `jz_i` as a function of `jz_f`.
pub fn heat_hot_boundary(jz_f: f64, r1: f64, r2: f64, tc: f64, th: f64) -> Option<f64> {
    let a1 = mean_energy(jz_f, r1, r2, th)?;
    zero_heat_coupling(jz_f, a1, r1, r2, tc)
}

/// Boundary 4 (`Q_c = 0`): `jz_f` as a function of `jz_i`.
pub fn heat_cold_boundary(jz_i: f64, r1: f64, r2: f64, tc: f64, th: f64) -> Option<f64> {
    let a2 = mean_energy(jz_i, r1, r2, tc)?;
    zero_heat_coupling(jz_i, a2, r1, r2, th)
}

pub(super) fn jz_boundary_curves(
    r1: f64,
    r2: f64,
    tc: f64,
    th: f64,
    window: &Window,
    samples: usize,
) -> Result<Vec<BoundaryCurve>> {
    check_baths(tc, th)?;
    Spectrum::new(0.0, r1, r2)?;
    let line2 = work_line(r1, r2, tc, th);
    Ok(vec![
        BoundaryCurve::sample_line(1, "diagonal", 1.0, 0.0, window, samples),
        BoundaryCurve::sample_line(2, "w_zero", line2.slope, line2.intercept, window, samples),
        BoundaryCurve::sample(3, "q_h_zero", Orientation::XofY, window, samples, |y| {
            heat_hot_boundary(y, r1, r2, tc, th)
        }),
        BoundaryCurve::sample(4, "q_c_zero", Orientation::YofX, window, samples, |x| {
            heat_cold_boundary(x, r1, r2, tc, th)
        }),
    ])
}

/// Lines 1-2 as coefficients and all four boundaries sampled over `window`.
///
/// Fails with `EmptyDomain` when curve 3 or 4 has no sample inside the window.
pub fn jz_boundaries(
    r1: f64,
    r2: f64,
    tc: f64,
    th: f64,
    window: &Window,
    samples: usize,
) -> Result<JzBoundaries> {
    window.validate()?;
    if samples < 2 {
        return Err(OttoError::InvalidArgument(
            "need at least 2 curve samples".into(),
        ));
    }
    let curves = jz_boundary_curves(r1, r2, tc, th, window, samples)?;
    if let Some(c) = curves.iter().find(|c| c.id >= 3 && c.is_empty()) {
        return Err(OttoError::EmptyDomain { curve: c.id });
    }
    let diagonal = Line {
        slope: 1.0,
        intercept: 0.0,
    };
    let work_line = work_line(r1, r2, tc, th);
    Ok(JzBoundaries {
        intersection: diagonal.intersect(&work_line),
        diagonal,
        work_line,
        curves,
    })
}
