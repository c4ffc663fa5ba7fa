//! Balanced three-phase assembly (Y connection), line-line quantities, and
//! power reporting.

use crate::config::{validate_config, ChbConfig, Waveform};
use crate::error::{ChbError, Result};
use crate::modulation::{
    nls_samples, pspwm_sample_count, pspwm_samples, samples_per_period, PspwmConfig,
};

/// Which modulator drives each phase of the stack.
#[derive(Debug, Clone, PartialEq)]
pub enum Modulator {
    Nls,
    Pspwm(PspwmConfig),
}

/// Three phase waveforms sharing sample rate and fundamental; B lags A by
/// a third of a period, C by two thirds. Phase waveforms are line-neutral
/// (Y connection).
#[derive(Debug, Clone, PartialEq)]
pub struct ThreePhaseSet {
    phases: [Waveform; 3],
}

impl ThreePhaseSet {
    /// Wrap three waveforms, requiring identical length, rate, and f0.
    pub fn new(a: Waveform, b: Waveform, c: Waveform) -> Result<Self> {
        let same = |x: &Waveform, y: &Waveform| {
            x.len() == y.len() && x.sample_rate() == y.sample_rate() && x.f0() == y.f0()
        };
        if !same(&a, &b) || !same(&a, &c) {
            return Err(ChbError::MismatchedSampling);
        }
        Ok(ThreePhaseSet { phases: [a, b, c] })
    }

    pub fn a(&self) -> &Waveform {
        &self.phases[0]
    }

    pub fn b(&self) -> &Waveform {
        &self.phases[1]
    }

    pub fn c(&self) -> &Waveform {
        &self.phases[2]
    }

    pub fn phases(&self) -> &[Waveform; 3] {
        &self.phases
    }
}

/// Synthesize a balanced set: phase `k` carries a reference delayed by
/// `k / 3` of a period.
///
/// For NLS on a grid divisible by three the later phases are exact sample
/// rotations of phase A (the staircase depends on the reference alone);
/// otherwise each phase is synthesized with its own reference offset. For
/// PSPWM the carriers are common to all phases, so every phase is always
/// synthesized against the shifted reference directly.
pub fn three_phase(
    modulator: &Modulator,
    cfg: &ChbConfig,
    sample_rate: f64,
) -> Result<ThreePhaseSet> {
    let cfg = validate_config(*cfg)?;
    let build = |samples: Vec<f64>| Waveform::new(samples, sample_rate, cfg.f0);
    match modulator {
        Modulator::Nls => {
            if sample_rate < 64.0 * cfg.f0 {
                return Err(ChbError::SampleRateTooLow {
                    required: 64.0 * cfg.f0,
                    actual: sample_rate,
                });
            }
            let m = samples_per_period(sample_rate, cfg.f0)?;
            let a = nls_samples(&cfg, m, 0.0);
            if m % 3 == 0 {
                let rotate = |lag: usize| -> Vec<f64> {
                    (0..m).map(|j| a[(j + m - lag) % m]).collect()
                };
                let b = rotate(m / 3);
                let c = rotate(2 * m / 3);
                ThreePhaseSet::new(build(a)?, build(b)?, build(c)?)
            } else {
                let b = nls_samples(&cfg, m, 1.0 / 3.0);
                let c = nls_samples(&cfg, m, 2.0 / 3.0);
                ThreePhaseSet::new(build(a)?, build(b)?, build(c)?)
            }
        }
        Modulator::Pspwm(ps) => {
            let m = pspwm_sample_count(&cfg, ps, sample_rate)?;
            let a = pspwm_samples(&cfg, ps, m, 0.0);
            let b = pspwm_samples(&cfg, ps, m, 1.0 / 3.0);
            let c = pspwm_samples(&cfg, ps, m, 2.0 / 3.0);
            ThreePhaseSet::new(build(a)?, build(b)?, build(c)?)
        }
    }
}

/// Line-line waveform of a Y-connected set, sample-wise `A - B`.
pub fn line_line(set: &ThreePhaseSet) -> Result<Waveform> {
    let a = set.a();
    let b = set.b();
    if a.len() != b.len() {
        return Err(ChbError::MismatchedSampling);
    }
    let samples = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| x - y)
        .collect();
    Waveform::new(samples, a.sample_rate(), a.f0())
}

/// Three-phase real power from per-phase RMS quantities, `3 * v * i * pf`.
pub fn three_phase_power(v_phase_rms: f64, i_phase_rms: f64, pf: f64) -> Result<f64> {
    if !(pf.is_finite() && (0.0..=1.0).contains(&pf)) {
        return Err(ChbError::PfOutOfRange { pf });
    }
    Ok(3.0 * v_phase_rms * i_phase_rms * pf)
}
