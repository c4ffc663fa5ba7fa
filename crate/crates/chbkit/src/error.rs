//! Error type shared by every module in the crate.

use std::fmt;

/// Errors produced by configuration validation, waveform synthesis, and the
/// analysis/design operations.
#[derive(Debug, Clone, PartialEq)]
pub enum ChbError {
    /// Level count is even; a cascaded bridge produces an odd number of levels.
    EvenLevels { levels: u32 },
    /// Level count is below the 3-level minimum.
    TooFewLevels { levels: u32 },
    /// A parameter that must be strictly positive (or within its stated
    /// range) was not.
    NonPositive { name: &'static str, value: f64 },
    /// Requested cell index is outside `0..cells`.
    CellOutOfRange { cell: usize, cells: usize },
    /// Sample rate is below the stated floor for the operation.
    SampleRateTooLow { required: f64, actual: f64 },
    /// Carrier frequency is below the floor of 20x the fundamental.
    CarrierBelowMinimum { required: f64, actual: f64 },
    /// Sample rate does not divide the signal into whole fundamental periods.
    FractionalPeriod { sample_rate: f64, f0: f64 },
    /// An even harmonic was requested from a quantity that is identically
    /// zero there; the request is almost certainly a caller bug.
    EvenHarmonic { harmonic: u32 },
    /// Waveform carries no samples.
    EmptyWaveform,
    /// Requested harmonic lies at or above the Nyquist frequency.
    NyquistViolation {
        max_harmonic: u32,
        f0: f64,
        sample_rate: f64,
    },
    /// Fundamental component is numerically zero; THD is undefined.
    ZeroFundamental,
    /// Buck converter cannot step up: requested output is at or above the source.
    BoostRequired { v_s: f64, v_o: f64 },
    /// Modulation index outside (0, 1].
    ModulationOutOfRange { m_a: f64 },
    /// No odd level count at or below the cap meets the distortion target.
    NotAchievable { thd_limit: f64, l_max: u32 },
    /// Power factor outside [0, 1].
    PfOutOfRange { pf: f64 },
    /// Waveforms combined across phases do not share length, rate, and f0.
    MismatchedSampling,
}

impl fmt::Display for ChbError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChbError::EvenLevels { levels } => {
                write!(f, "level count must be odd, got {levels}")
            }
            ChbError::TooFewLevels { levels } => {
                write!(f, "level count must be at least 3, got {levels}")
            }
            ChbError::NonPositive { name, value } => {
                write!(f, "{name} must be positive and in range, got {value}")
            }
            ChbError::CellOutOfRange { cell, cells } => {
                write!(f, "cell index {cell} out of range for {cells} cells")
            }
            ChbError::SampleRateTooLow { required, actual } => {
                write!(f, "sample rate {actual} Hz below required {required} Hz")
            }
            ChbError::CarrierBelowMinimum { required, actual } => {
                write!(f, "carrier {actual} Hz below required {required} Hz")
            }
            ChbError::FractionalPeriod { sample_rate, f0 } => {
                write!(
                    f,
                    "sample rate {sample_rate} Hz does not give whole periods of {f0} Hz"
                )
            }
            ChbError::EvenHarmonic { harmonic } => {
                write!(
                    f,
                    "harmonic {harmonic} is even; half-wave symmetry makes it zero"
                )
            }
            ChbError::EmptyWaveform => write!(f, "waveform has no samples"),
            ChbError::NyquistViolation {
                max_harmonic,
                f0,
                sample_rate,
            } => write!(
                f,
                "harmonic {max_harmonic} at {} Hz is not below Nyquist {} Hz",
                *max_harmonic as f64 * f0,
                sample_rate / 2.0
            ),
            ChbError::ZeroFundamental => {
                write!(f, "fundamental component is zero; THD undefined")
            }
            ChbError::BoostRequired { v_s, v_o } => {
                write!(f, "output {v_o} V not below source {v_s} V; buck cannot step up")
            }
            ChbError::ModulationOutOfRange { m_a } => {
                write!(f, "modulation index {m_a} outside (0, 1]")
            }
            ChbError::NotAchievable { thd_limit, l_max } => write!(
                f,
                "no odd level count <= {l_max} reaches THD below {}%",
                thd_limit * 100.0
            ),
            ChbError::PfOutOfRange { pf } => {
                write!(f, "power factor {pf} outside [0, 1]")
            }
            ChbError::MismatchedSampling => {
                write!(f, "phase waveforms differ in length, sample rate, or f0")
            }
        }
    }
}

impl std::error::Error for ChbError {}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, ChbError>;

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ChbError::NonPositive { name, value })
    }
}
