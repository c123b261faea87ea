//! Quasistatic quantum Otto cycle between two spectra and two baths.
//!
//! Node A: thermal with the cold bath on `spec_i`. A→B: adiabatic change to
//! `spec_f` (populations frozen). B→C: thermalization with the hot bath.
//! C→D: adiabatic return to `spec_i`. D→A: thermalization with the cold bath.
//!
//! Sign convention: energy flowing into the working medium is positive.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_baths, OttoError, Result};
use crate::math::{cosh_scaled, sinh_scaled};
use crate::thermo::Spectrum;

/// Default band around zero treated as a boundary (`Idle`).
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleSpec {
    /// Hamiltonian in contact with the cold bath.
    pub spec_i: Spectrum,
    /// Hamiltonian in contact with the hot bath.
    pub spec_f: Spectrum,
    pub tc: f64,
    pub th: f64,
}

impl CycleSpec {
    pub fn new(spec_i: Spectrum, spec_f: Spectrum, tc: f64, th: f64) -> Result<Self> {
        check_baths(tc, th)?;
        Ok(Self {
            spec_i,
            spec_f,
            tc,
            th,
        })
    }
}

/// Operating modes by the signs of `(q_c, w, q_h)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatingMode {
    /// `(-, -, +)`
    Engine,
    /// `(+, +, -)`
    Refrigerator,
    /// `(-, +, -)`
    Heater,
    /// `(-, +, +)`
    Accelerator,
    /// At least one of the three within the zero band.
    Idle,
}

impl OperatingMode {
    pub const ALL: [OperatingMode; 5] = [
        OperatingMode::Engine,
        OperatingMode::Refrigerator,
        OperatingMode::Heater,
        OperatingMode::Accelerator,
        OperatingMode::Idle,
    ];

    /// Classify a ledger; the four remaining sign patterns are rejected.
    pub fn classify(q_c: f64, w: f64, q_h: f64, zero_tol: f64) -> Result<Self> {
        if q_c.abs() <= zero_tol || w.abs() <= zero_tol || q_h.abs() <= zero_tol {
            return Ok(OperatingMode::Idle);
        }
        match (q_c > 0.0, w > 0.0, q_h > 0.0) {
            (false, false, true) => Ok(OperatingMode::Engine),
            (true, true, false) => Ok(OperatingMode::Refrigerator),
            (false, true, false) => Ok(OperatingMode::Heater),
            (false, true, true) => Ok(OperatingMode::Accelerator),
            _ => Err(OttoError::ForbiddenModePattern { q_c, w, q_h }),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            OperatingMode::Engine => "engine",
            OperatingMode::Refrigerator => "refrigerator",
            OperatingMode::Heater => "heater",
            OperatingMode::Accelerator => "accelerator",
            OperatingMode::Idle => "idle",
        }
    }
}

impl fmt::Display for OperatingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for OperatingMode {
    type Err = OttoError;

    fn from_str(s: &str) -> Result<Self> {
        OperatingMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| OttoError::InvalidArgument(format!("unknown mode `{s}`")))
    }
}

/// Per-cycle energy ledger.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleResult {
    pub w_in: f64,
    pub w_out: f64,
    pub w: f64,
    pub q_h: f64,
    pub q_c: f64,
    pub mode: OperatingMode,
    /// `|w| / q_h`, engines only.
    pub efficiency: Option<f64>,
    /// `q_c / w`, refrigerators only.
    pub cop: Option<f64>,
}

impl CycleResult {
    pub fn from_strokes(w_in: f64, w_out: f64, q_h: f64, q_c: f64, zero_tol: f64) -> Result<Self> {
        let w = w_in + w_out;
        let mode = OperatingMode::classify(q_c, w, q_h, zero_tol)?;
        Ok(Self {
            w_in,
            w_out,
            w,
            q_h,
            q_c,
            mode,
            efficiency: (mode == OperatingMode::Engine).then(|| w.abs() / q_h),
            cop: (mode == OperatingMode::Refrigerator).then(|| q_c / w),
        })
    }

    /// Ledger of the same four nodes traversed in the opposite direction.
    ///
    /// Only meaningful when every node is a Gibbs state of its Hamiltonian,
    /// which holds for spectra related by a uniform scale factor.
    pub fn reversed(&self, zero_tol: f64) -> Result<Self> {
        Self::from_strokes(-self.w_in, -self.w_out, -self.q_h, -self.q_c, zero_tol)
    }

    pub fn first_law_residual(&self) -> f64 {
        self.w + self.q_h + self.q_c
    }
}

/// `sum_n p_n (e_to_n - e_from_n)`: work of an adiabatic stroke.
pub fn stroke_work_general(probs: &[f64], e_from: &[f64], e_to: &[f64]) -> Result<f64> {
    check_len(probs.len(), e_from.len())?;
    check_len(probs.len(), e_to.len())?;
    Ok(probs
        .iter()
        .zip(e_from.iter().zip(e_to))
        .map(|(p, (a, b))| p * (b - a))
        .sum())
}

/// `sum_n E_n (p_to_n - p_from_n)`: heat of an isochoric stroke.
pub fn stroke_heat_general(levels: &[f64], p_from: &[f64], p_to: &[f64]) -> Result<f64> {
    check_len(levels.len(), p_from.len())?;
    check_len(levels.len(), p_to.len())?;
    Ok(levels
        .iter()
        .zip(p_from.iter().zip(p_to))
        .map(|(e, (a, b))| e * (b - a))
        .sum())
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(OttoError::LengthMismatch { expected, found })
    }
}

/// `cosh(r/T) e^{∓jz/T}` and `sinh(r/T) e^{∓jz/T}` factors of one Gibbs state,
/// all divided by a common factor so the largest exponent is zero.
#[derive(Debug, Clone, Copy)]
pub(crate) struct HyperbolicWeights {
    pub c1: f64,
    pub s1: f64,
    pub c2: f64,
    pub s2: f64,
}

impl HyperbolicWeights {
    pub fn new(spec: &Spectrum, t: f64) -> Self {
        let (jz, r1, r2) = (spec.jz() / t, spec.r1() / t, spec.r2() / t);
        let shift = (r1 - jz).max(r2 + jz);
        Self {
            c1: cosh_scaled(r1, -jz, shift),
            s1: sinh_scaled(r1, -jz, shift),
            c2: cosh_scaled(r2, jz, shift),
            s2: sinh_scaled(r2, jz, shift),
        }
    }

    pub fn denominator(&self) -> f64 {
        self.c1 + self.c2
    }

    /// Mean energy of levels `(jz ± r1, -jz ± r2)` under these populations.
    pub fn mean_energy(&self, jz: f64, r1: f64, r2: f64) -> f64 {
        ((jz * self.c1 - r1 * self.s1) - (jz * self.c2 + r2 * self.s2)) / self.denominator()
    }
}

/// Compression work A→B in closed form (cold-bath populations of `spec_i`).
pub fn w_in(cycle: &CycleSpec) -> f64 {
    let (i, f) = (&cycle.spec_i, &cycle.spec_f);
    let h = HyperbolicWeights::new(i, cycle.tc);
    ((f.jz() - i.jz()) * (h.c1 - h.c2) - (f.r1() - i.r1()) * h.s1 - (f.r2() - i.r2()) * h.s2)
        / h.denominator()
}

/// Expansion work C→D in closed form (hot-bath populations of `spec_f`).
pub fn w_out(cycle: &CycleSpec) -> f64 {
    let (i, f) = (&cycle.spec_i, &cycle.spec_f);
    let h = HyperbolicWeights::new(f, cycle.th);
    ((i.jz() - f.jz()) * (h.c1 - h.c2) - (i.r1() - f.r1()) * h.s1 - (i.r2() - f.r2()) * h.s2)
        / h.denominator()
}

/// Heat absorbed from the hot bath (B→C).
pub fn q_h(cycle: &CycleSpec) -> f64 {
    let f = &cycle.spec_f;
    let hot = HyperbolicWeights::new(f, cycle.th);
    let cold = HyperbolicWeights::new(&cycle.spec_i, cycle.tc);
    hot.mean_energy(f.jz(), f.r1(), f.r2()) - cold.mean_energy(f.jz(), f.r1(), f.r2())
}

/// Heat absorbed from the cold bath (D→A).
pub fn q_c(cycle: &CycleSpec) -> f64 {
    let i = &cycle.spec_i;
    let cold = HyperbolicWeights::new(i, cycle.tc);
    let hot = HyperbolicWeights::new(&cycle.spec_f, cycle.th);
    cold.mean_energy(i.jz(), i.r1(), i.r2()) - hot.mean_energy(i.jz(), i.r1(), i.r2())
}

/// Assemble the ledger and classify the operating mode.
pub fn analyze(cycle: &CycleSpec, zero_tol: f64) -> Result<CycleResult> {
    if !(zero_tol >= 0.0) {
        return Err(OttoError::InvalidArgument(format!(
            "zero_tol must be >= 0, got {zero_tol}"
        )));
    }
    check_baths(cycle.tc, cycle.th)?;
    CycleResult::from_strokes(w_in(cycle), w_out(cycle), q_h(cycle), q_c(cycle), zero_tol)
}

pub fn carnot_efficiency(tc: f64, th: f64) -> Result<f64> {
    check_baths(tc, th)?;
    Ok(1.0 - tc / th)
}

/// Efficiency at maximum power of the endoreversible engine, `1 - sqrt(tc/th)`.
pub fn novikov_efficiency(tc: f64, th: f64) -> Result<f64> {
    check_baths(tc, th)?;
    Ok(1.0 - (tc / th).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn three_level(r1_i: f64, r1_f: f64, tc: f64, th: f64) -> CycleSpec {
        CycleSpec::new(
            Spectrum::new(0.0, r1_i, 0.0).unwrap(),
            Spectrum::new(0.0, r1_f, 0.0).unwrap(),
            tc,
            th,
        )
        .unwrap()
    }

    #[test]
    fn general_work_trivial_cases() {
        let e = [1.0, -1.0, 0.5, -0.5];
        assert_eq!(stroke_work_general(&[0.25; 4], &e, &e).unwrap(), 0.0);
        assert_eq!(
            stroke_work_general(&[1.0, 0.0, 0.0, 0.0], &[0.0; 4], &[5.0; 4]).unwrap(),
            5.0
        );
        assert_eq!(
            stroke_work_general(&[1.0], &[0.0; 4], &[5.0; 4]),
            Err(OttoError::LengthMismatch {
                expected: 1,
                found: 4
            })
        );
    }

    #[test]
    fn general_heat_trivial_cases() {
        let p = [0.1, 0.2, 0.3, 0.4];
        assert_eq!(
            stroke_heat_general(&[1.0, 2.0, 3.0, 4.0], &p, &p).unwrap(),
            0.0
        );
        let q = [0.4, 0.3, 0.2, 0.1];
        assert_abs_diff_eq!(
            stroke_heat_general(&[2.5; 4], &p, &q).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert!(stroke_heat_general(&[1.0; 3], &p, &q).is_err());
    }

    #[test]
    fn three_level_heats_match_reduced_forms() {
        let (r1_i, r1_f, tc, th) = (1.7, 2.9, 0.8, 1.9);
        let c = three_level(r1_i, r1_f, tc, th);
        let ti = (r1_i / (2.0 * tc)).tanh();
        let tf = (r1_f / (2.0 * th)).tanh();
        assert_abs_diff_eq!(q_h(&c), r1_f * (ti - tf), epsilon = 1e-13);
        assert_abs_diff_eq!(q_c(&c), r1_i * (tf - ti), epsilon = 1e-13);
        assert_abs_diff_eq!(w_in(&c), -(r1_f - r1_i) * ti, epsilon = 1e-13);
    }

    #[test]
    fn three_level_optimum_is_engine() {
        let r = analyze(&three_level(2.86075, 4.06548, 1.0, 2.0), DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(r.mode, OperatingMode::Engine);
        assert_abs_diff_eq!(r.w, -0.148615, epsilon = 1e-6);
        assert_abs_diff_eq!(r.efficiency.unwrap(), 0.296, epsilon = 1e-3);
        assert!(r.cop.is_none());
    }

    #[test]
    fn mirrored_point_reversed_is_refrigerator() {
        // Swapped inputs traversed backwards: hot bath on the larger shift.
        let fwd = analyze(&three_level(2.86075, 4.06548, 1.0, 2.0), DEFAULT_ZERO_TOL).unwrap();
        let rev = fwd.reversed(DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(rev.mode, OperatingMode::Refrigerator);
        assert_abs_diff_eq!(rev.cop.unwrap(), 2.37, epsilon = 0.01);
        assert!(rev.efficiency.is_none());
    }

    #[test]
    fn mirrored_point_forward_is_accelerator() {
        let r = analyze(&three_level(4.06548, 2.86075, 1.0, 2.0), DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(r.mode, OperatingMode::Accelerator);
    }

    #[test]
    fn degenerate_cycle_equal_baths_is_zero_ledger() {
        let s = Spectrum::new(0.3, 1.1, 0.4).unwrap();
        let r = analyze(&CycleSpec::new(s, s, 1.3, 1.3).unwrap(), DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(
            (r.w_in, r.w_out, r.w, r.q_h, r.q_c),
            (0.0, 0.0, 0.0, 0.0, 0.0)
        );
        assert_eq!(r.mode, OperatingMode::Idle);
        assert!(r.efficiency.is_none() && r.cop.is_none());
    }

    #[test]
    fn degenerate_cycle_distinct_baths_is_idle_without_work() {
        let s = Spectrum::new(0.3, 1.1, 0.4).unwrap();
        let r = analyze(&CycleSpec::new(s, s, 1.0, 2.0).unwrap(), DEFAULT_ZERO_TOL).unwrap();
        assert_eq!((r.w_in, r.w_out, r.w), (0.0, 0.0, 0.0));
        assert_eq!(r.mode, OperatingMode::Idle);
        // heat leaks straight from hot to cold
        assert!(r.q_h > 0.0);
        assert_abs_diff_eq!(r.q_h + r.q_c, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn classify_table() {
        let t = 1e-9;
        assert_eq!(
            OperatingMode::classify(-1.0, -1.0, 2.0, t).unwrap(),
            OperatingMode::Engine
        );
        assert_eq!(
            OperatingMode::classify(1.0, 1.0, -2.0, t).unwrap(),
            OperatingMode::Refrigerator
        );
        assert_eq!(
            OperatingMode::classify(-1.0, 2.0, -1.0, t).unwrap(),
            OperatingMode::Heater
        );
        assert_eq!(
            OperatingMode::classify(-2.0, 1.0, 1.0, t).unwrap(),
            OperatingMode::Accelerator
        );
        assert_eq!(
            OperatingMode::classify(0.0, 1.0, -1.0, t).unwrap(),
            OperatingMode::Idle
        );
        for (qc, w, qh) in [
            (1.0, 1.0, 1.0),
            (-1.0, -1.0, -1.0),
            (1.0, -2.0, 1.0),
            (2.0, -1.0, -1.0),
        ] {
            assert!(matches!(
                OperatingMode::classify(qc, w, qh, t),
                Err(OttoError::ForbiddenModePattern { .. })
            ));
        }
    }

    #[test]
    fn mode_string_round_trip() {
        for m in OperatingMode::ALL {
            assert_eq!(m.as_str().parse::<OperatingMode>().unwrap(), m);
        }
    }

    #[test]
    fn reference_efficiencies() {
        assert_eq!(carnot_efficiency(1.0, 2.0).unwrap(), 0.5);
        assert_eq!(carnot_efficiency(1.0, 1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            carnot_efficiency(1.0, 1.5).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            novikov_efficiency(1.0, 2.0).unwrap(),
            0.29289,
            epsilon = 1e-5
        );
        assert_eq!(novikov_efficiency(1.0, 1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(novikov_efficiency(1.0, 3.0).unwrap(), 0.423, epsilon = 5e-4);
        assert!(matches!(
            carnot_efficiency(2.0, 1.0),
            Err(OttoError::BadTemperatures { .. })
        ));
        assert!(novikov_efficiency(0.0, 1.0).is_err());
    }

    #[test]
    fn cycle_rejects_inverted_baths() {
        let s = Spectrum::new(0.0, 1.0, 0.0).unwrap();
        assert!(CycleSpec::new(s, s, 2.0, 1.0).is_err());
        assert!(analyze(
            &CycleSpec {
                spec_i: s,
                spec_f: s,
                tc: 2.0,
                th: 1.0
            },
            1e-9
        )
        .is_err());
    }

    #[test]
    fn result_json_is_flat() {
        let r = analyze(&three_level(2.86075, 4.06548, 1.0, 2.0), DEFAULT_ZERO_TOL).unwrap();
        let v: serde_json::Value = serde_json::to_value(r).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        for k in [
            "w_in",
            "w_out",
            "w",
            "q_h",
            "q_c",
            "mode",
            "efficiency",
            "cop",
        ] {
            assert!(keys.iter().any(|x| x == k), "{k}");
        }
        assert_eq!(v["mode"], "engine");
        assert!(v["cop"].is_null());
    }
}
