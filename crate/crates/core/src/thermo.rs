//! Spectrum, Gibbs statistics and entropy of the two-qubit XYZ working medium.
//!
//! The Hamiltonian carries seven couplings (two longitudinal fields, three
//! Heisenberg exchanges, the DM vector component `dz` and the KSEA strength
//! `gz`). Its X-shaped 4x4 matrix has eigenvalues `jz ± r1` and `-jz ± r2`,
//! so every thermodynamic quantity depends only on the reduced triple
//! `(jz, r1, r2)` held by [`Spectrum`].
//!
//! Units: `k_B = 1`, temperatures and couplings share one energy unit.

use serde::{Deserialize, Serialize};

use crate::error::{check_temperature, OttoError, Result};
use crate::math::{ln_cosh, log_sum_exp};

/// Raw Hamiltonian couplings.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpinParams {
    pub b1: f64,
    pub b2: f64,
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub dz: f64,
    pub gz: f64,
}

impl SpinParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("b1", self.b1),
            ("b2", self.b2),
            ("jx", self.jx),
            ("jy", self.jy),
            ("jz", self.jz),
            ("dz", self.dz),
            ("gz", self.gz),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(OttoError::NonFinite(name));
            }
        }
        Ok(())
    }

    /// Collapse the seven couplings onto `(jz, r1, r2)`.
    ///
    /// `gz` enters only `r1` and `dz` only `r2`.
    pub fn reduce(&self) -> Result<Spectrum> {
        self.validate()?;
        let r1 =
            ((self.b1 + self.b2).powi(2) + (self.jx - self.jy).powi(2) + 4.0 * self.gz * self.gz)
                .sqrt();
        let r2 =
            ((self.b1 - self.b2).powi(2) + (self.jx + self.jy).powi(2) + 4.0 * self.dz * self.dz)
                .sqrt();
        Spectrum::new(self.jz, r1, r2)
    }
}

/// Free-function form of [`SpinParams::reduce`].
pub fn reduce(params: &SpinParams) -> Result<Spectrum> {
    params.reduce()
}

/// Reduced three-parameter description of the four energy levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    jz: f64,
    r1: f64,
    r2: f64,
}

impl Spectrum {
    pub fn new(jz: f64, r1: f64, r2: f64) -> Result<Self> {
        if !jz.is_finite() {
            return Err(OttoError::NonFinite("jz"));
        }
        for (name, v) in [("r1", r1), ("r2", r2)] {
            if !v.is_finite() {
                return Err(OttoError::NonFinite(name));
            }
            if v < 0.0 {
                return Err(OttoError::NegativeShift { name, value: v });
            }
        }
        Ok(Self { jz, r1, r2 })
    }

    pub fn jz(&self) -> f64 {
        self.jz
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    /// Levels in the fixed order `(jz+r1, jz-r1, -jz+r2, -jz-r2)`.
    ///
    /// Stroke sums pair level `n` of one spectrum with level `n` of another,
    /// so this order is part of the contract.
    pub fn energies(&self) -> [f64; 4] {
        [
            self.jz + self.r1,
            self.jz - self.r1,
            -self.jz + self.r2,
            -self.jz - self.r2,
        ]
    }

    pub fn ground_energy(&self) -> f64 {
        (self.jz - self.r1).min(-self.jz - self.r2)
    }

    pub fn thermal_state(&self, t: f64) -> Result<ThermalState> {
        ThermalState::new(*self, t)
    }

    pub fn entropy_gibbs(&self, t: f64) -> Result<f64> {
        entropy_gibbs(self, t)
    }
}

/// Free-function form of [`Spectrum::energies`].
pub fn energies(spec: &Spectrum) -> [f64; 4] {
    spec.energies()
}

/// Gibbs state of a spectrum at temperature `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalState {
    pub spectrum: Spectrum,
    pub temperature: f64,
    pub beta: f64,
    /// `ln Z`; finite even when `Z` itself is not representable.
    pub ln_z: f64,
    pub z: f64,
    /// Occupation probabilities in [`Spectrum::energies`] order.
    pub p: [f64; 4],
    pub u: f64,
    /// Entropy from the closed-form Gibbs expression.
    pub s: f64,
}

impl ThermalState {
    pub fn new(spectrum: Spectrum, t: f64) -> Result<Self> {
        check_temperature(t)?;
        let beta = 1.0 / t;
        let e = spectrum.energies();
        let e_min = spectrum.ground_energy();
        // Weights relative to the ground level lie in (0, 1], the sum in [1, 4].
        let w = e.map(|en| (-(en - e_min) * beta).exp());
        let sum: f64 = w.iter().sum();
        let p = w.map(|wn| wn / sum);
        let ln_z = sum.ln() - e_min * beta;
        let u = p.iter().zip(e.iter()).map(|(pn, en)| pn * en).sum();
        let s = entropy_gibbs(&spectrum, t)?;
        Ok(Self {
            spectrum,
            temperature: t,
            beta,
            ln_z,
            z: ln_z.exp(),
            p,
            u,
            s,
        })
    }

    /// Helmholtz free energy `-T ln Z`.
    pub fn free_energy(&self) -> f64 {
        -self.temperature * self.ln_z
    }
}

/// Free-function form of [`ThermalState::new`].
pub fn thermal_state(spec: &Spectrum, t: f64) -> Result<ThermalState> {
    ThermalState::new(*spec, t)
}

/// Closed-form Gibbs entropy `S(T; jz, r1, r2)`.
///
/// Written as `ln Z - (1/Z)[a e^a - b e^-b + c e^c - d e^-d]` with
/// `a = (r1-jz)/T`, `b = (r1+jz)/T`, `c = (r2+jz)/T`, `d = (r2-jz)/T`;
/// every exponential is divided by the largest one before summation.
pub fn entropy_gibbs(spec: &Spectrum, t: f64) -> Result<f64> {
    check_temperature(t)?;
    let (jz, r1, r2) = (spec.jz, spec.r1, spec.r2);
    let a = (r1 - jz) / t;
    let b = (r1 + jz) / t;
    let c = (r2 + jz) / t;
    let d = (r2 - jz) / t;
    let m = a.max(-b).max(c).max(-d);
    let (ea, eb, ec, ed) = ((a - m).exp(), (-b - m).exp(), (c - m).exp(), (-d - m).exp());
    let z_scaled = ea + eb + ec + ed;
    let bracket = a * ea - b * eb + c * ec - d * ed;
    Ok(z_scaled.ln() + m - bracket / z_scaled)
}

/// Entropy of the three-level spectrum (`jz = r2 = 0`) as a function of `r1 / T` alone.
pub fn entropy_three_level(ratio: f64) -> f64 {
    let h = 0.5 * ratio;
    2.0 * (std::f64::consts::LN_2 + ln_cosh(h) - h * h.tanh())
}

/// `ln Z` via the closed form `Z = 2[e^{-jz/T} cosh(r1/T) + e^{jz/T} cosh(r2/T)]`.
pub fn ln_partition_closed_form(spec: &Spectrum, t: f64) -> Result<f64> {
    check_temperature(t)?;
    let x1 = -spec.jz / t + ln_cosh(spec.r1 / t);
    let x2 = spec.jz / t + ln_cosh(spec.r2 / t);
    Ok(std::f64::consts::LN_2 + log_sum_exp(&[x1, x2]))
}
