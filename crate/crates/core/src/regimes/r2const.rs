use serde::{Deserialize, Serialize};

use crate::cycle::CycleSpec;
use crate::error::{check_baths, OttoError, Result};
use crate::math::{ln_cosh, log_sum_exp, sinh_over_cosh_sum};
use crate::thermo::Spectrum;

use std::f64::consts::LN_2;

/// Upper end of the `r1_i` scan used to look for a loop in the W=0 curve.
pub const LOOP_SCAN_MAX: f64 = 20.0;
/// Grid points of that scan.
pub const LOOP_SCAN_POINTS: usize = 4096;

/// `jz = 0`, `r2` fixed, `r1` varied between `r1_i` and `r1_f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct R2ConstCase {
    pub r1_i: f64,
    pub r1_f: f64,
    pub r2: f64,
    pub tc: f64,
    pub th: f64,
}

impl R2ConstCase {
    pub fn new(r1_i: f64, r1_f: f64, r2: f64, tc: f64, th: f64) -> Result<Self> {
        check_baths(tc, th)?;
        for (name, v) in [("r1_i", r1_i), ("r1_f", r1_f), ("r2", r2)] {
            if !v.is_finite() {
                return Err(OttoError::NonFinite(name));
            }
            if v < 0.0 {
                return Err(OttoError::NegativeShift { name, value: v });
            }
        }
        Ok(Self {
            r1_i,
            r1_f,
            r2,
            tc,
            th,
        })
    }

    pub fn cycle_spec(&self) -> Result<CycleSpec> {
        CycleSpec::new(
            Spectrum::new(0.0, self.r1_i, self.r2)?,
            Spectrum::new(0.0, self.r1_f, self.r2)?,
            self.tc,
            self.th,
        )
    }

    pub fn work(&self) -> f64 {
        w_r2const_raw(self.r1_i, self.r1_f, self.r2, self.tc, self.th)
    }

    pub fn heat_hot(&self) -> f64 {
        let (xc, rc) = (self.r1_i / self.tc, self.r2 / self.tc);
        let (xh, rh) = (self.r1_f / self.th, self.r2 / self.th);
        (self.r1_f * sinh_over_cosh_sum(xc, rc) + self.r2 * sinh_over_cosh_sum(rc, xc))
            - (self.r1_f * sinh_over_cosh_sum(xh, rh) + self.r2 * sinh_over_cosh_sum(rh, xh))
    }

    pub fn heat_cold(&self) -> f64 {
        let (xc, rc) = (self.r1_i / self.tc, self.r2 / self.tc);
        let (xh, rh) = (self.r1_f / self.th, self.r2 / self.th);
        (self.r1_i * sinh_over_cosh_sum(xh, rh) + self.r2 * sinh_over_cosh_sum(rh, xh))
            - (self.r1_i * sinh_over_cosh_sum(xc, rc) + self.r2 * sinh_over_cosh_sum(rc, xc))
    }
}

pub(super) fn w_r2const_raw(r1_i: f64, r1_f: f64, r2: f64, tc: f64, th: f64) -> f64 {
    (r1_f - r1_i)
        * (sinh_over_cosh_sum(r1_f / th, r2 / th) - sinh_over_cosh_sum(r1_i / tc, r2 / tc))
}

/// Free-function form of [`R2ConstCase::work`].
pub fn w_r2const(case: &R2ConstCase) -> f64 {
    case.work()
}

/// Non-diagonal branch of `W = 0`: the `r1_f` that balances a given `r1_i`.
///
/// `r1_f = th ln[(γ cosh(r2/th) + sqrt(1 + γ² sinh²(r2/th))) / (1 - γ)]` with
/// `γ = sinh(r1_i/tc) / (cosh(r1_i/tc) + cosh(r2/tc))`. The `1/(1-γ)` factor
/// is evaluated in log form; `1 - γ` cancels catastrophically for large `r1_i`.
pub fn boundary_r2const(r1_i: f64, r2: f64, tc: f64, th: f64) -> f64 {
    let x = r1_i / tc;
    let r = r2 / tc;
    let rho = r2 / th;
    let gamma = sinh_over_cosh_sum(x, r);
    let ln_inv_one_minus_gamma =
        log_sum_exp(&[x, -x, r, -r]) - LN_2 - log_sum_exp(&[-x, r - LN_2, -r - LN_2]);
    let num = gamma * rho.cosh() + (1.0 + (gamma * rho.sinh()).powi(2)).sqrt();
    th * (num.ln() + ln_inv_one_minus_gamma)
}

/// Small-`r1_i` slope of [`boundary_r2const`]:
/// `(th/tc) (cosh(r2/2th) / cosh(r2/2tc))²`.
pub fn kappa(r2: f64, tc: f64, th: f64) -> f64 {
    ln_kappa(r2, tc, th).exp()
}

fn ln_kappa(r2: f64, tc: f64, th: f64) -> f64 {
    (th / tc).ln() + 2.0 * (ln_cosh(r2 / (2.0 * th)) - ln_cosh(r2 / (2.0 * tc)))
}

/// The `r2` at which [`kappa`] drops to 1, by bisection.
pub fn critical_r2(tc: f64, th: f64) -> Result<f64> {
    check_baths(tc, th)?;
    let f = |r: f64| ln_kappa(r, tc, th);
    let mut hi = 10.0 * th;
    if !(th > tc) {
        return Err(OttoError::NoRoot { r_max: hi });
    }
    while f(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e6 * th {
            return Err(OttoError::NoRoot { r_max: hi });
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-12 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Nonzero `r1_i` in `(0, r_max]` where the W=0 curve crosses `r1_f = r1_i`.
///
/// Sign changes of `boundary - r1_i` on `points` uniform nodes, each refined
/// by bisection. A non-empty result means the curve closes into a loop.
pub fn diagonal_crossings(r2: f64, tc: f64, th: f64, r_max: f64, points: usize) -> Vec<f64> {
    let g = |r: f64| boundary_r2const(r, r2, tc, th) - r;
    let nodes: Vec<f64> = (1..=points)
        .map(|k| r_max * k as f64 / points as f64)
        .collect();
    let mut roots = Vec::new();
    for pair in nodes.windows(2) {
        let (mut lo, mut hi) = (pair[0], pair[1]);
        let (glo, ghi) = (g(lo), g(hi));
        if glo == 0.0 {
            roots.push(lo);
            continue;
        }
        if glo.signum() == ghi.signum() {
            continue;
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if g(mid).signum() == glo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots
}
