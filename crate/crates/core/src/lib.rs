//! Thermodynamics of a two-spin Heisenberg working medium in a quantum Otto cycle.
//!
//! * [`thermo`]: spectrum reduction, Gibbs statistics, entropy.
//! * [`cycle`]: four-stroke energy ledger and operating-mode classification.
//! * [`regimes`]: closed-form special cases, mode boundaries, region maps.
//! * [`optimize`]: local work extrema and efficiency at maximum output.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cycle;
pub mod error;
pub mod math;
pub mod optimize;
pub mod regimes;
pub mod thermo;

pub use cycle::{analyze, CycleResult, CycleSpec, OperatingMode, DEFAULT_ZERO_TOL};
pub use error::{OttoError, Result};
pub use optimize::{
    efficiency_at_max_power, find_minima, table1, Extremum, MaxPowerReport, Objective,
    OptimizationProblem, Table1Row,
};
pub use regimes::{BoundaryCurve, CaseFamily, RegionMap, Window};
pub use thermo::{Spectrum, SpinParams, ThermalState};
