//! Shared domain types: inverter topology, switching angles, sampled
//! waveforms, and harmonic spectra.
//!
//! All types are immutable after construction and safe to share across
//! threads. Angles are radians everywhere; degrees appear only at CLI
//! boundaries.

use crate::error::{require_positive, ChbError, Result};

/// Topology and operating point of a cascaded H-bridge inverter.
///
/// `v_peak` is the peak of the synthesized phase waveform (the full stack,
/// `cells * v_dc` per cell); per-cell DC voltage is derived as
/// `v_peak / cells` rather than stored, so there is a single source of
/// truth for the voltage scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChbConfig {
    /// Output level count `L` (odd, >= 3).
    pub levels: u32,
    /// H-bridge cell count `N = (L - 1) / 2`.
    pub cells: u32,
    /// Peak phase voltage in volts.
    pub v_peak: f64,
    /// Fundamental frequency in hertz.
    pub f0: f64,
    /// Modulation index in [0, 1]. NLS synthesis ignores it; PSPWM scales
    /// the sinusoidal reference by it. Zero is allowed and produces a
    /// zero PSPWM output.
    pub m_a: f64,
}

impl ChbConfig {
    /// Build a validated config from a level count.
    pub fn new(levels: u32, v_peak: f64, f0: f64, m_a: f64) -> Result<Self> {
        validate_config(ChbConfig {
            levels,
            cells: levels / 2, // (L - 1) / 2 for odd L
            v_peak,
            f0,
            m_a,
        })
    }

    /// Build a validated config from a cell count (`L = 2N + 1`).
    pub fn from_cells(cells: u32, v_peak: f64, f0: f64, m_a: f64) -> Result<Self> {
        Self::new(2 * cells + 1, v_peak, f0, m_a)
    }

    /// Per-cell DC link voltage, `v_peak / cells`.
    pub fn v_dc(&self) -> f64 {
        self.v_peak / self.cells as f64
    }

    /// Fundamental period in seconds.
    pub fn period(&self) -> f64 {
        1.0 / self.f0
    }
}

/// Check every `ChbConfig` invariant, returning the config unchanged when
/// all of them hold.
pub fn validate_config(cfg: ChbConfig) -> Result<ChbConfig> {
    if cfg.levels < 3 {
        return Err(ChbError::TooFewLevels { levels: cfg.levels });
    }
    if cfg.levels % 2 == 0 {
        return Err(ChbError::EvenLevels { levels: cfg.levels });
    }
    if cfg.cells != (cfg.levels - 1) / 2 {
        return Err(ChbError::NonPositive {
            name: "cells",
            value: cfg.cells as f64,
        });
    }
    require_positive("v_peak", cfg.v_peak)?;
    require_positive("f0", cfg.f0)?;
    if !(cfg.m_a.is_finite() && (0.0..=1.0).contains(&cfg.m_a)) {
        return Err(ChbError::NonPositive {
            name: "m_a",
            value: cfg.m_a,
        });
    }
    Ok(cfg)
}

/// Ordered NLS firing angles, one per cell, strictly increasing in
/// (0, pi/2) with `sin(angle[i]) = (2i + 1) / (L - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingAngles {
    /// Angles in radians, index 0 = innermost cell.
    pub angles: Vec<f64>,
}

impl SwitchingAngles {
    /// Firing angle of one cell.
    pub fn angle(&self, cell: usize) -> Option<f64> {
        self.angles.get(cell).copied()
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

/// A uniformly sampled real signal spanning a whole number of fundamental
/// periods.
///
/// Construction enforces the sampling contract (rate at least 64x the
/// fundamental, integer period count) so analysis code can assume it.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    samples: Vec<f64>,
    sample_rate: f64,
    f0: f64,
}

impl Waveform {
    /// Validate and wrap a sample buffer.
    pub fn new(samples: Vec<f64>, sample_rate: f64, f0: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(ChbError::EmptyWaveform);
        }
        require_positive("sample_rate", sample_rate)?;
        require_positive("f0", f0)?;
        if sample_rate < 64.0 * f0 {
            return Err(ChbError::SampleRateTooLow {
                required: 64.0 * f0,
                actual: sample_rate,
            });
        }
        let periods = samples.len() as f64 * f0 / sample_rate;
        let whole = periods.round();
        if whole < 1.0 || (periods - whole).abs() > 1e-9 * whole {
            return Err(ChbError::FractionalPeriod { sample_rate, f0 });
        }
        Ok(Waveform {
            samples,
            sample_rate,
            f0,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Number of whole fundamental periods covered by the buffer.
    pub fn periods(&self) -> u32 {
        (self.samples.len() as f64 * self.f0 / self.sample_rate).round() as u32
    }

    /// Time of sample `index` in seconds.
    pub fn time_at(&self, index: usize) -> f64 {
        index as f64 / self.sample_rate
    }

    /// Largest absolute sample value.
    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0_f64, |m, &x| m.max(x.abs()))
    }
}

/// Per-harmonic RMS amplitudes anchored to a fundamental frequency.
///
/// Entries are `(harmonic index, RMS amplitude)`, unique and sorted by
/// harmonic index; amplitudes are non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSpectrum {
    f0: f64,
    entries: Vec<(u32, f64)>,
}

impl HarmonicSpectrum {
    /// Validate and wrap a set of entries.
    pub fn new(f0: f64, entries: Vec<(u32, f64)>) -> Result<Self> {
        require_positive("f0", f0)?;
        for pair in entries.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(ChbError::NonPositive {
                    name: "harmonic index order",
                    value: pair[1].0 as f64,
                });
            }
        }
        for &(h, amp) in &entries {
            if h == 0 {
                return Err(ChbError::NonPositive {
                    name: "harmonic index",
                    value: 0.0,
                });
            }
            if !(amp >= 0.0 && amp.is_finite()) {
                return Err(ChbError::NonPositive {
                    name: "harmonic amplitude",
                    value: amp,
                });
            }
        }
        Ok(HarmonicSpectrum { f0, entries })
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    /// RMS amplitude of harmonic `h`, if present.
    pub fn amplitude(&self, h: u32) -> Option<f64> {
        self.entries
            .binary_search_by_key(&h, |&(idx, _)| idx)
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// RMS of the signal reconstructed from the stored harmonics alone,
    /// `sqrt(sum of squared amplitudes)`.
    pub fn rms(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(_, a)| a * a)
            .sum::<f64>()
            .sqrt()
    }
}
