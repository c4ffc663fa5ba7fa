//! Waveform synthesis: nearest-level switching (NLS) staircases, per-cell
//! gate schedules with the output-shorting zero state, and phase-shifted
//! PWM (PSPWM) with unipolar comparison.
//!
//! Synthesis is written in terms of the period fraction `u in [0, 1)`
//! rather than raw time. The sinusoidal reference is evaluated through a
//! quarter-wave fold so mirrored sample positions produce bitwise-identical
//! magnitudes; the half-wave and quarter-wave symmetries of the output are
//! then exact on sample grids that pair up, not merely approximate.

use std::f64::consts::TAU;

use crate::config::{validate_config, ChbConfig, SwitchingAngles, Waveform};
use crate::error::{require_positive, ChbError, Result};

/// Fractional part mapped into [0, 1).
#[inline]
pub(crate) fn fract(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// `(sign, |sin(2*pi*u)|)` with the magnitude evaluated on the folded
/// quarter period. The fold arithmetic (`u - 0.5`, `0.5 - p`) is exact in
/// f64, so all four mirror positions of a dyadic grid yield the same
/// magnitude bit for bit.
#[inline]
pub(crate) fn half_wave_magnitude(u: f64) -> (f64, f64) {
    let (sign, p) = if u < 0.5 { (1.0, u) } else { (-1.0, u - 0.5) };
    let q = if p <= 0.25 { p } else { 0.5 - p };
    (sign, (TAU * q).sin())
}

/// `(sign, |sin(2*pi*j/m)|)` for sample `j` of an m-sample period, with the
/// index folded onto the first quarter wave in integer arithmetic before
/// the sine is evaluated. Mirror-related samples (`m - j`, and `j + m/2`
/// when `m` is even) therefore share the exact same sine argument, which
/// makes the half-wave, quarter-wave, and odd symmetries of the output
/// bitwise-exact on any whole-period grid.
#[inline]
pub(crate) fn reference_at_index(j: usize, m: usize) -> (f64, f64) {
    let j = j % m;
    if j == 0 || 2 * j == m {
        return (1.0, 0.0);
    }
    let (sign, jh) = if 2 * j < m { (1.0, j) } else { (-1.0, m - j) };
    let jq = if m % 2 == 0 { jh.min(m / 2 - jh) } else { jh };
    (sign, (TAU * jq as f64 / m as f64).sin())
}

/// `sin(2*pi*u)` through the same fold.
#[inline]
pub(crate) fn sine_of_turns(u: f64) -> f64 {
    let (sign, mag) = half_wave_magnitude(u);
    sign * mag
}

/// Symmetric triangle of the carrier phase fraction `u in [0, 1)`:
/// 0 rising at 0, +1 at 1/4, -1 at 3/4.
#[inline]
pub(crate) fn triangle_of_turns(u: f64) -> f64 {
    if u < 0.25 {
        4.0 * u
    } else if u < 0.75 {
        2.0 - 4.0 * u
    } else {
        4.0 * u - 4.0
    }
}

/// Number of samples per fundamental period, requiring the rate to divide
/// into whole periods.
pub(crate) fn samples_per_period(sample_rate: f64, f0: f64) -> Result<usize> {
    let ratio = sample_rate / f0;
    let m = ratio.round();
    if (ratio - m).abs() > 1e-9 * m || m < 1.0 {
        return Err(ChbError::FractionalPeriod { sample_rate, f0 });
    }
    Ok(m as usize)
}

/// NLS firing angles `asin((2i + 1) / (L - 1))` for one quarter period.
pub fn switching_angles(levels: u32) -> Result<SwitchingAngles> {
    if levels < 3 {
        return Err(ChbError::TooFewLevels { levels });
    }
    if levels % 2 == 0 {
        return Err(ChbError::EvenLevels { levels });
    }
    let n = (levels - 1) / 2;
    let angles = (0..n)
        .map(|i| ((2 * i + 1) as f64 / (levels - 1) as f64).asin())
        .collect();
    Ok(SwitchingAngles { angles })
}

/// Comparator thresholds for the NLS gating, `v_peak * (2k - 1) / (2N)`
/// for `k = 1..=N`; cell `k` fires while the reference exceeds its entry.
///
/// Each threshold equals `v_peak * sin(angle[k - 1])`, so the midpoint of
/// every DC step is the firing point.
pub fn nls_thresholds(cfg: &ChbConfig) -> Result<Vec<f64>> {
    let cfg = validate_config(*cfg)?;
    let n = cfg.cells as f64;
    Ok((1..=cfg.cells)
        .map(|k| cfg.v_peak * (2 * k - 1) as f64 / (2.0 * n))
        .collect())
}

/// Sines of the firing angles, `(2i + 1) / (L - 1)`, the quantity the
/// synthesized reference is compared against.
fn step_sines(levels: u32) -> Vec<f64> {
    let n = (levels - 1) / 2;
    (0..n)
        .map(|i| (2 * i + 1) as f64 / (levels - 1) as f64)
        .collect()
}

/// One period of NLS samples with the reference shifted late by
/// `offset_turns` of a period (0 for a single phase).
pub(crate) fn nls_samples(cfg: &ChbConfig, m: usize, offset_turns: f64) -> Vec<f64> {
    let sines = step_sines(cfg.levels);
    let n = cfg.cells as f64;
    let offset = fract(offset_turns);
    (0..m)
        .map(|j| {
            let (sign, mag) = if offset == 0.0 {
                reference_at_index(j, m)
            } else {
                half_wave_magnitude(fract(j as f64 / m as f64 - offset + 1.0))
            };
            let count = sines.partition_point(|&s| s < mag);
            cfg.v_peak * (count as f64 / n) * sign
        })
        .collect()
}

/// Synthesize one fundamental period of the NLS staircase.
///
/// The sample at time `t` is `(v_peak / N) * count * sign(sin(2*pi*f0*t))`
/// where `count` is the number of firing angles whose sine lies below
/// `|sin(2*pi*f0*t)|`; the peak is `v_peak` and the waveform has exact
/// half-wave and quarter-wave symmetry.
pub fn nls_waveform(cfg: &ChbConfig, sample_rate: f64) -> Result<Waveform> {
    let cfg = validate_config(*cfg)?;
    if sample_rate < 64.0 * cfg.f0 {
        return Err(ChbError::SampleRateTooLow {
            required: 64.0 * cfg.f0,
            actual: sample_rate,
        });
    }
    let m = samples_per_period(sample_rate, cfg.f0)?;
    Waveform::new(nls_samples(&cfg, m, 0.0), sample_rate, cfg.f0)
}

/// Per-cell switch timing over one fundamental period.
///
/// Switch numbering: S1 = leg-A high side, S2 = leg-B high side,
/// S3 = leg-B low side, S4 = leg-A low side. The low sides are driven as
/// complements (S3 = !S2, S4 = !S1), which realizes the zero state by
/// shorting the cell output through S3 and S4 while the reference sits
/// below the cell's threshold. Cell terminal voltage is
/// `v_dc * (S1 - S2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSchedule {
    /// 0-based cell index; 0 fires first (innermost step).
    pub cell_index: usize,
    /// Toggle instants in seconds within `[0, 1/f0)`, indexed S1..S4.
    pub toggle_times: [Vec<f64>; 4],
    /// Fundamental frequency the times are relative to.
    pub f0: f64,
}

/// Switch states at t = 0 (reference at its zero crossing): both high
/// sides off, both low sides on.
const GATE_INITIAL: [bool; 4] = [false, false, true, true];

impl GateSchedule {
    /// State of switch `switch` (0..4 for S1..S4) at time `t`, with `t`
    /// folded into the fundamental period.
    pub fn is_on(&self, switch: usize, t: f64) -> bool {
        let t_mod = fract(t * self.f0) / self.f0;
        let flips = self.toggle_times[switch]
            .iter()
            .take_while(|&&tt| tt <= t_mod)
            .count();
        GATE_INITIAL[switch] ^ (flips % 2 == 1)
    }

    /// All four switch states at time `t`.
    pub fn states_at(&self, t: f64) -> [bool; 4] {
        [
            self.is_on(0, t),
            self.is_on(1, t),
            self.is_on(2, t),
            self.is_on(3, t),
        ]
    }

    /// Cell terminal voltage at time `t` for a given DC link voltage.
    pub fn cell_output(&self, t: f64, v_dc: f64) -> f64 {
        let s = self.states_at(t);
        v_dc * ((s[0] as i32 - s[1] as i32) as f64)
    }
}

/// Gate schedule for one cell of an NLS-modulated inverter.
///
/// S1 conducts on `[angle, pi - angle)` of the positive half period and S2
/// on the mirrored interval of the negative half; each switch toggles
/// exactly twice per fundamental period.
pub fn nls_gate_schedule(cfg: &ChbConfig, cell: usize) -> Result<GateSchedule> {
    let cfg = validate_config(*cfg)?;
    if cell >= cfg.cells as usize {
        return Err(ChbError::CellOutOfRange {
            cell,
            cells: cfg.cells as usize,
        });
    }
    let angles = switching_angles(cfg.levels)?;
    let turns = angles.angles[cell] / TAU; // in (0, 1/4)
    let period = cfg.period();
    let s1 = vec![turns * period, (0.5 - turns) * period];
    let s2 = vec![(0.5 + turns) * period, (1.0 - turns) * period];
    Ok(GateSchedule {
        cell_index: cell,
        toggle_times: [s1.clone(), s2.clone(), s2, s1],
        f0: cfg.f0,
    })
}

/// Carrier arrangement for phase-shifted PWM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PspwmConfig {
    /// Cell count N.
    pub cells: u32,
    /// Triangle carrier frequency in hertz.
    pub f_carrier: f64,
    /// Phase shift between consecutive cell carriers, radians.
    pub theta_shift: f64,
    /// DC link voltage per cell, volts.
    pub v_dc_level: f64,
}

impl PspwmConfig {
    /// Carrier arrangement matching an inverter config: cell count from the
    /// config and per-cell voltage `v_peak / cells`.
    pub fn for_config(cfg: &ChbConfig, f_carrier: f64) -> Result<Self> {
        let cfg = validate_config(*cfg)?;
        let mut ps = pspwm_carriers(cfg.cells, f_carrier)?;
        ps.v_dc_level = cfg.v_dc();
        Ok(ps)
    }

    /// Phase offset of carrier `k` in radians, `k * theta_shift`.
    pub fn carrier_phase(&self, k: u32) -> f64 {
        k as f64 * self.theta_shift
    }
}

/// Build the PSPWM carrier set for `cells` H-bridges: consecutive carriers
/// are shifted by `2*pi / (2 * cells)`. The per-cell voltage defaults to
/// 1.0 (per-unit) until set from a config.
pub fn pspwm_carriers(cells: u32, f_carrier: f64) -> Result<PspwmConfig> {
    if cells == 0 {
        return Err(ChbError::NonPositive {
            name: "cells",
            value: 0.0,
        });
    }
    require_positive("f_carrier", f_carrier)?;
    Ok(PspwmConfig {
        cells,
        f_carrier,
        theta_shift: TAU / (2.0 * cells as f64),
        v_dc_level: 1.0,
    })
}

/// Symmetric triangle carrier sample: period `1 / f_carrier`, value 0 and
/// rising at phase 0, peaking at +1 a quarter period later.
///
/// Expects `f_carrier > 0`.
pub fn triangle(t: f64, f_carrier: f64, phase: f64) -> f64 {
    triangle_of_turns(fract(t * f_carrier + phase / TAU))
}

/// One period of PSPWM samples with the reference shifted late by
/// `offset_turns` of a fundamental period. Cell outputs are accumulated as
/// integers and scaled once, so every sample is an exact multiple of
/// `v_dc_level`.
pub(crate) fn pspwm_samples(
    cfg: &ChbConfig,
    ps: &PspwmConfig,
    m: usize,
    offset_turns: f64,
) -> Vec<f64> {
    let carrier_ratio = ps.f_carrier / (m as f64 * cfg.f0);
    let offset = fract(offset_turns);
    let phase_turns: Vec<f64> = (0..ps.cells)
        .map(|k| fract(ps.carrier_phase(k) / TAU))
        .collect();
    (0..m)
        .map(|j| {
            let (sign, mag) = if offset == 0.0 {
                reference_at_index(j, m)
            } else {
                half_wave_magnitude(fract(j as f64 / m as f64 - offset + 1.0))
            };
            let reference = cfg.m_a * (sign * mag);
            let carrier_base = fract(j as f64 * carrier_ratio);
            let mut total: i32 = 0;
            for &pt in &phase_turns {
                let tri = triangle_of_turns(fract(carrier_base + pt));
                // Unipolar comparison, strict: ties resolve to "off".
                let leg_a = reference > tri;
                let leg_b = -reference > tri;
                total += leg_a as i32 - leg_b as i32;
            }
            total as f64 * ps.v_dc_level
        })
        .collect()
}

/// Check the carrier and sample-rate floors for PSPWM synthesis and return
/// the per-period sample count.
pub(crate) fn pspwm_sample_count(
    cfg: &ChbConfig,
    ps: &PspwmConfig,
    sample_rate: f64,
) -> Result<usize> {
    if ps.f_carrier < 20.0 * cfg.f0 {
        return Err(ChbError::CarrierBelowMinimum {
            required: 20.0 * cfg.f0,
            actual: ps.f_carrier,
        });
    }
    if sample_rate < 8.0 * ps.f_carrier {
        return Err(ChbError::SampleRateTooLow {
            required: 8.0 * ps.f_carrier,
            actual: sample_rate,
        });
    }
    samples_per_period(sample_rate, cfg.f0)
}

/// Synthesize one fundamental period of the PSPWM output.
///
/// Each cell compares the sinusoidal reference `m_a * sin(2*pi*f0*t)`
/// (and its negation for the second leg) against its own shifted triangle
/// carrier; the stack output is the sum of cell outputs and is quantized
/// to multiples of `v_dc_level` in `[-N*v_dc_level, +N*v_dc_level]`.
pub fn pspwm_waveform(cfg: &ChbConfig, ps: &PspwmConfig, sample_rate: f64) -> Result<Waveform> {
    let cfg = validate_config(*cfg)?;
    let m = pspwm_sample_count(&cfg, ps, sample_rate)?;
    Waveform::new(pspwm_samples(&cfg, ps, m, 0.0), sample_rate, cfg.f0)
}
