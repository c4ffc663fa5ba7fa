//! RMS, Fourier, and distortion analysis for the staircase output.
//!
//! Two independent routes are provided. The closed-form route
//! (`rms_analytic`, `fourier_bh`, `first_harmonic_rms`, `thd_analytic`)
//! evaluates the quarter-wave integrals of the ideal staircase in units of
//! the peak voltage. The numeric route (`rms_numeric`, `spectrum`,
//! `thd_numeric`) works on sampled waveforms and exists to cross-check the
//! closed forms (and anything else that can be sampled).
//!
//! The numeric spectrum correlates against sin/cos per harmonic instead of
//! using a radix-2 transform: sample counts stay unconstrained and there is
//! no leakage for whole-period buffers.

use std::f64::consts::{PI, TAU};

use crate::config::{HarmonicSpectrum, Waveform};
use crate::error::{require_positive, ChbError, Result};
use crate::modulation::switching_angles;

/// Distortion summary. `rms_total` and `rms_fundamental` are in the unit of
/// the analyzed quantity (per-unit of the peak for the closed-form route,
/// volts for sampled waveforms); `thd` is the dimensionless fraction
/// `sqrt(rms_total^2 - rms_fundamental^2) / rms_fundamental`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThdReport {
    pub rms_total: f64,
    pub rms_fundamental: f64,
    pub thd: f64,
}

/// RMS of the ideal L-level staircase, per-unit of the peak:
/// `sqrt(1 - (2 / (pi N^2)) * sum (2i+1) * asin((2i+1)/(L-1)))`.
pub fn rms_analytic(levels: u32) -> Result<f64> {
    let angles = switching_angles(levels)?;
    let n = angles.len() as f64;
    let sum: f64 = angles
        .angles
        .iter()
        .enumerate()
        .map(|(i, &a)| (2 * i + 1) as f64 * a)
        .sum();
    Ok((1.0 - 2.0 / (PI * n * n) * sum).sqrt())
}

/// Peak amplitude of odd harmonic `h` of the ideal staircase, per-unit of
/// the peak: `(4 / (pi h N)) * sum cos(h * angle[i])`.
///
/// Even harmonics vanish by half-wave symmetry; asking for one is an error
/// rather than a silent zero so misuse stays visible.
pub fn fourier_bh(levels: u32, harmonic: u32) -> Result<f64> {
    if harmonic == 0 || harmonic % 2 == 0 {
        return Err(ChbError::EvenHarmonic { harmonic });
    }
    let angles = switching_angles(levels)?;
    let n = angles.len() as f64;
    let h = harmonic as f64;
    let sum: f64 = angles.angles.iter().map(|&a| (h * a).cos()).sum();
    Ok(4.0 / (PI * h * n) * sum)
}

/// RMS of the fundamental of the ideal staircase, per-unit of the peak.
///
/// Defined as `fourier_bh(levels, 1) / sqrt(2)`, which the identity
/// `cos(asin(x)) = sqrt(1 - x^2)` turns into
/// `(4 / (pi N sqrt(2))) * sum sqrt(1 - ((2i+1)/(L-1))^2)`.
pub fn first_harmonic_rms(levels: u32) -> Result<f64> {
    Ok(fourier_bh(levels, 1)? / std::f64::consts::SQRT_2)
}

/// Closed-form distortion of the ideal L-level staircase.
pub fn thd_analytic(levels: u32) -> Result<ThdReport> {
    let rms_total = rms_analytic(levels)?;
    let rms_fundamental = first_harmonic_rms(levels)?;
    Ok(ThdReport {
        rms_total,
        rms_fundamental,
        thd: (rms_total * rms_total - rms_fundamental * rms_fundamental)
            .max(0.0)
            .sqrt()
            / rms_fundamental,
    })
}

/// RMS of a sampled waveform over its whole-period span.
pub fn rms_numeric(w: &Waveform) -> f64 {
    let sum: f64 = w.samples().iter().map(|&x| x * x).sum();
    (sum / w.len() as f64).sqrt()
}

/// RMS amplitude of harmonic `h` by direct correlation. The cos/sin pair
/// advances by rotation, one complex multiply per sample.
fn correlate(w: &Waveform, h: u32) -> f64 {
    let step = TAU * h as f64 * w.f0() / w.sample_rate();
    let (rot_s, rot_c) = step.sin_cos();
    let mut c = 1.0_f64;
    let mut s = 0.0_f64;
    let mut acc_c = 0.0_f64;
    let mut acc_s = 0.0_f64;
    for &x in w.samples() {
        acc_c += x * c;
        acc_s += x * s;
        let next_c = c * rot_c - s * rot_s;
        s = s * rot_c + c * rot_s;
        c = next_c;
    }
    let m = w.len() as f64;
    let a = 2.0 * acc_c / m;
    let b = 2.0 * acc_s / m;
    (a * a + b * b).sqrt() / std::f64::consts::SQRT_2
}

/// Harmonic spectrum of a sampled waveform up to `max_h`, by direct
/// correlation with sin/cos at each multiple of the fundamental.
pub fn spectrum(w: &Waveform, max_h: u32) -> Result<HarmonicSpectrum> {
    if max_h == 0 {
        return Err(ChbError::NonPositive {
            name: "max_h",
            value: 0.0,
        });
    }
    if max_h as f64 * w.f0() >= w.sample_rate() / 2.0 {
        return Err(ChbError::NyquistViolation {
            max_harmonic: max_h,
            f0: w.f0(),
            sample_rate: w.sample_rate(),
        });
    }
    let entries = (1..=max_h).map(|h| (h, correlate(w, h))).collect();
    HarmonicSpectrum::new(w.f0(), entries)
}

/// Distortion of a sampled waveform: total RMS from the time domain,
/// fundamental from correlation at `f0`.
pub fn thd_numeric(w: &Waveform) -> Result<ThdReport> {
    let rms_total = rms_numeric(w);
    let rms_fundamental = correlate(w, 1);
    if rms_fundamental < 1e-12 * rms_total {
        return Err(ChbError::ZeroFundamental);
    }
    Ok(ThdReport {
        rms_total,
        rms_fundamental,
        thd: (rms_total * rms_total - rms_fundamental * rms_fundamental)
            .max(0.0)
            .sqrt()
            / rms_fundamental,
    })
}

/// Scale a spectrum through a series-L, shunt-C low-pass loaded by a
/// resistor: `H(s) = 1 / (1 + s L / R + s^2 L C)` evaluated at each
/// harmonic frequency.
pub fn filtered_spectrum(
    spec: &HarmonicSpectrum,
    l_f: f64,
    c_f: f64,
    r_load: f64,
) -> Result<HarmonicSpectrum> {
    require_positive("l_f", l_f)?;
    require_positive("c_f", c_f)?;
    require_positive("r_load", r_load)?;
    let entries = spec
        .entries()
        .iter()
        .map(|&(h, amp)| {
            let w = TAU * h as f64 * spec.f0();
            // H(jw) = 1 / ((1 - w^2 L C) + j w L / R)
            let re = 1.0 - w * w * l_f * c_f;
            let im = w * l_f / r_load;
            (h, amp / (re * re + im * im).sqrt())
        })
        .collect();
    HarmonicSpectrum::new(spec.f0(), entries)
}
