use serde::{Deserialize, Serialize};

use crate::cycle::{analyze, CycleResult, CycleSpec};
use crate::error::{check_baths, OttoError, Result};
use crate::thermo::Spectrum;

use super::w_three_level_raw;

/// Doublet `±r1` plus a doubly degenerate zero level (`jz = r2 = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeLevelCase {
    pub r1_i: f64,
    pub r1_f: f64,
    pub tc: f64,
    pub th: f64,
}

impl ThreeLevelCase {
    pub fn new(r1_i: f64, r1_f: f64, tc: f64, th: f64) -> Result<Self> {
        check_baths(tc, th)?;
        for (name, v) in [("r1_i", r1_i), ("r1_f", r1_f)] {
            if !v.is_finite() {
                return Err(OttoError::NonFinite(name));
            }
            if v < 0.0 {
                return Err(OttoError::NegativeShift { name, value: v });
            }
        }
        Ok(Self { r1_i, r1_f, tc, th })
    }

    pub fn cycle_spec(&self) -> Result<CycleSpec> {
        CycleSpec::new(
            Spectrum::new(0.0, self.r1_i, 0.0)?,
            Spectrum::new(0.0, self.r1_f, 0.0)?,
            self.tc,
            self.th,
        )
    }

    fn tanh_cold(&self) -> f64 {
        (self.r1_i / (2.0 * self.tc)).tanh()
    }

    fn tanh_hot(&self) -> f64 {
        (self.r1_f / (2.0 * self.th)).tanh()
    }

    /// `(r1_f - r1_i)(tanh(r1_f/2th) - tanh(r1_i/2tc))`
    pub fn work(&self) -> f64 {
        w_three_level_raw(self.r1_i, self.r1_f, self.tc, self.th)
    }

    pub fn heat_hot(&self) -> f64 {
        self.r1_f * (self.tanh_cold() - self.tanh_hot())
    }

    pub fn heat_cold(&self) -> f64 {
        self.r1_i * (self.tanh_hot() - self.tanh_cold())
    }

    /// Ledger in the three-level plane convention: forward cycle for
    /// `r1_f >= r1_i`, reversed traversal of the swapped cycle otherwise.
    pub fn analyze(&self, zero_tol: f64) -> Result<CycleResult> {
        if self.r1_f >= self.r1_i {
            analyze(&self.cycle_spec()?, zero_tol)
        } else {
            let swapped = ThreeLevelCase::new(self.r1_f, self.r1_i, self.tc, self.th)?;
            analyze(&swapped.cycle_spec()?, zero_tol)?.reversed(zero_tol)
        }
    }
}

/// Free-function form of [`ThreeLevelCase::work`].
pub fn w_three_level(case: &ThreeLevelCase) -> f64 {
    case.work()
}

/// Engine efficiency `1 - r_small / r_large`.
///
/// Accepts the window `r1_i <= r1_f < (th/tc) r1_i` and its mirror
/// `r1_f < (tc/th) r1_i` (reversed cycle, hot bath on `r1_i`).
pub fn eta_three_level(case: &ThreeLevelCase) -> Result<f64> {
    let (a, b) = (case.r1_i, case.r1_f);
    if a <= 0.0 {
        return Err(OttoError::ZeroShift);
    }
    let ratio = case.th / case.tc;
    if a <= b && b < ratio * a {
        Ok(1.0 - a / b)
    } else if b < a / ratio {
        Ok(1.0 - b / a)
    } else {
        Err(OttoError::OutsideEngineWindow { r1_i: a, r1_f: b })
    }
}

/// Temperatures at nodes B and D implied by `r1 / T` being conserved on the adiabats.
pub fn node_temperatures(case: &ThreeLevelCase) -> Result<(f64, f64)> {
    if case.r1_i == 0.0 || case.r1_f == 0.0 {
        return Err(OttoError::ZeroShift);
    }
    Ok((
        case.tc * case.r1_f / case.r1_i,
        case.th * case.r1_i / case.r1_f,
    ))
}

/// The three straight boundaries through the origin of the `(r1_i, r1_f)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeLevelBoundaries {
    pub diagonal_slope: f64,
    /// `r1_f = (th/tc) r1_i`
    pub upper_slope: f64,
    /// `r1_f = (tc/th) r1_i`
    pub lower_slope: f64,
}

pub fn three_level_boundaries(tc: f64, th: f64) -> Result<ThreeLevelBoundaries> {
    check_baths(tc, th)?;
    Ok(ThreeLevelBoundaries {
        diagonal_slope: 1.0,
        upper_slope: th / tc,
        lower_slope: tc / th,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::{OperatingMode, DEFAULT_ZERO_TOL};
    use approx::assert_abs_diff_eq;

    fn case(a: f64, b: f64, tc: f64, th: f64) -> ThreeLevelCase {
        ThreeLevelCase::new(a, b, tc, th).unwrap()
    }

    #[test]
    fn work_zero_on_diagonal_and_upper_line() {
        assert_eq!(case(1.7, 1.7, 1.0, 2.0).work(), 0.0);
        assert_abs_diff_eq!(case(1.7, 3.4, 1.0, 2.0).work(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn reference_work_values() {
        assert_abs_diff_eq!(
            case(2.86075, 4.06548, 1.0, 2.0).work(),
            -0.148615,
            epsilon = 1e-6
        );
        assert_abs_diff_eq!(
            case(3.16836, 5.59152, 1.0, 3.0).work(),
            -0.454983,
            epsilon = 1e-6
        );
    }

    #[test]
    fn reduced_heats_close_the_balance() {
        let c = case(1.3, 2.2, 0.7, 1.9);
        assert_abs_diff_eq!(
            c.work() + c.heat_hot() + c.heat_cold(),
            0.0,
            epsilon = 1e-15
        );
        let r = analyze(&c.cycle_spec().unwrap(), 0.0).unwrap();
        assert_abs_diff_eq!(r.q_h, c.heat_hot(), epsilon = 1e-13);
        assert_abs_diff_eq!(r.q_c, c.heat_cold(), epsilon = 1e-13);
    }

    #[test]
    fn efficiency_values() {
        assert_eq!(eta_three_level(&case(2.0, 2.0, 1.0, 2.0)).unwrap(), 0.0);
        assert_abs_diff_eq!(
            eta_three_level(&case(2.86075, 4.06548, 1.0, 2.0)).unwrap(),
            0.296,
            epsilon = 5e-4
        );
        assert_abs_diff_eq!(
            eta_three_level(&case(3.02699, 4.83933, 1.0, 2.5)).unwrap(),
            0.375,
            epsilon = 5e-4
        );
        // mirror window
        assert_abs_diff_eq!(
            eta_three_level(&case(4.0, 1.0, 1.0, 2.0)).unwrap(),
            0.75,
            epsilon = 1e-15
        );
        assert!(matches!(
            eta_three_level(&case(1.0, 3.0, 1.0, 2.0)),
            Err(OttoError::OutsideEngineWindow { .. })
        ));
        assert!(matches!(
            eta_three_level(&case(3.0, 2.0, 1.0, 2.0)),
            Err(OttoError::OutsideEngineWindow { .. })
        ));
    }

    #[test]
    fn efficiency_equals_ledger_ratio() {
        for (a, b) in [(2.0, 3.0), (5.0, 1.5)] {
            let c = case(a, b, 1.0, 2.0);
            let r = c.analyze(DEFAULT_ZERO_TOL).unwrap();
            assert_eq!(r.mode, OperatingMode::Engine);
            assert_abs_diff_eq!(
                r.efficiency.unwrap(),
                eta_three_level(&c).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn node_temperature_cases() {
        assert_eq!(
            node_temperatures(&case(2.0, 2.0, 1.0, 2.0)).unwrap(),
            (1.0, 2.0)
        );
        let (tb, td) = node_temperatures(&case(2.0, 3.0, 1.0, 2.0)).unwrap();
        assert_abs_diff_eq!(tb, 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(td, 4.0 / 3.0, epsilon = 1e-15);
        let (tb, td) = node_temperatures(&case(2.0, 4.0, 1.0, 2.0)).unwrap();
        assert_eq!((tb, td), (2.0, 1.0));
        assert_eq!(
            node_temperatures(&case(0.0, 1.0, 1.0, 2.0)),
            Err(OttoError::ZeroShift)
        );
    }

    #[test]
    fn adiabats_preserve_gibbs_form() {
        // populations at node B equal a Gibbs state of spec_f at t_b
        let c = case(2.0, 3.0, 1.0, 2.0);
        let (tb, _) = node_temperatures(&c).unwrap();
        let cyc = c.cycle_spec().unwrap();
        let pa = cyc.spec_i.thermal_state(c.tc).unwrap().p;
        let pb = cyc.spec_f.thermal_state(tb).unwrap().p;
        for (x, y) in pa.iter().zip(pb) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-15);
        }
    }

    #[test]
    fn boundary_slopes() {
        let b = three_level_boundaries(1.0, 2.0).unwrap();
        assert_eq!(
            (b.diagonal_slope, b.upper_slope, b.lower_slope),
            (1.0, 2.0, 0.5)
        );
        let b = three_level_boundaries(1.5, 1.5).unwrap();
        assert_eq!(
            (b.diagonal_slope, b.upper_slope, b.lower_slope),
            (1.0, 1.0, 1.0)
        );
    }

    #[test]
    fn mode_flips_across_each_line() {
        let (tc, th) = (1.0, 2.0);
        let b = three_level_boundaries(tc, th).unwrap();
        let x = 3.0;
        for slope in [b.diagonal_slope, b.upper_slope, b.lower_slope] {
            let y = slope * x;
            let below = case(x, y - 1e-3, tc, th)
                .analyze(DEFAULT_ZERO_TOL)
                .unwrap()
                .mode;
            let above = case(x, y + 1e-3, tc, th)
                .analyze(DEFAULT_ZERO_TOL)
                .unwrap()
                .mode;
            assert_ne!(below, above, "slope {slope}");
        }
    }
}
