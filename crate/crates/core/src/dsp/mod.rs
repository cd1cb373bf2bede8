//! Unit generators shared by both instruments.
//!
//! Everything here is plain single-owner state plus `tick`/`process` methods.
//! Nothing allocates after construction, so the same objects run inside the
//! real-time callback and the offline renderer.

mod block;
mod delay;
mod envelope;
mod lfo;
mod noise;
mod pan;
mod resonator;
mod reverb;
mod rng;
mod smooth;

pub use block::{AudioBlock, ControlRate, CONTROL_BLOCK};
pub use delay::{FeedbackDelay, MAX_DELAY_SECONDS};
pub use envelope::{EnvEvent, EnvPhase, RetrigEnvelope};
pub use lfo::{unipolar_sine_lfo, SampleHold, SineLfo};
pub use noise::{gauss_trigger_next, white_noise, TRIGGER_FLOOR_SECONDS};
pub use pan::equal_power_pan;
pub use resonator::{BandpassCoeffs, ResonantBandpass};
pub use reverb::{rt60_for_room, SchroederReverb};
pub use rng::RngStream;
pub use smooth::OnePole;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DspError {
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("non-finite input sample at index {0}")]
    NonFiniteInput(usize),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> DspError {
    DspError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

/// Flushes values that would otherwise decay into denormals.
#[inline]
pub(crate) fn flush_denormal(x: f64) -> f64 {
    if x.abs() < 1e-30 {
        0.0
    } else {
        x
    }
}
