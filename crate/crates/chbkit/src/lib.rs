//! Cascaded H-bridge (CHB) multilevel inverter analysis.
//!
//! The crate covers the full desk-design loop for a CHB stack:
//!
//! - **modulation** — nearest-level switching (staircase) and phase-shifted
//!   PWM synthesis, including per-cell gate schedules with the
//!   output-shorting zero state;
//! - **harmonics** — closed-form RMS / Fourier / THD of the ideal staircase
//!   plus a numeric sampled-waveform path (RMS, correlation spectrum, THD)
//!   for cross-validation, and an LC low-pass attenuation model;
//! - **design** — buck converter L/C/duty sizing, LC filter cutoff, per-cell
//!   DC voltages for both modulators, minimum level count for a distortion
//!   target, PV string arithmetic, power transfer, and fleet sizing;
//! - **threephase** — balanced Y-connected sets, line-line quantities, and
//!   triplen-harmonic behavior.
//!
//! Everything is pure and immutable after construction; waveform synthesis
//! and spectrum correlation are safe to parallelize from the caller's side.
//!
//! ```
//! use chbkit::{ChbConfig, modulation, harmonics};
//!
//! let cfg = ChbConfig::new(27, 391.9, 60.0, 1.0).unwrap();
//! let wave = modulation::nls_waveform(&cfg, 65536.0 * 60.0).unwrap();
//! let report = harmonics::thd_numeric(&wave).unwrap();
//! let closed = harmonics::thd_analytic(27).unwrap();
//! assert!((report.thd - closed.thd).abs() < 5e-4);
//! ```

pub mod config;
pub mod design;
pub mod error;
pub mod harmonics;
pub mod modulation;
pub mod threephase;

pub use config::{validate_config, ChbConfig, HarmonicSpectrum, SwitchingAngles, Waveform};
pub use error::{ChbError, Result};
pub use harmonics::ThdReport;
pub use modulation::{GateSchedule, PspwmConfig};
pub use threephase::{Modulator, ThreePhaseSet};
