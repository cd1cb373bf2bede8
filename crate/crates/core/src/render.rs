//! Deterministic offline rendering of a preset plus an optional note schedule.

use thiserror::Error;

use crate::dsp::{AudioBlock, DspError, CONTROL_BLOCK};
use crate::engine::build_engine;
use crate::midi::{NoteEvent, NoteKind};
use crate::params::EngineKind;
use crate::preset::Preset;
use crate::wav::encode_wav;

pub const SUPPORTED_SAMPLE_RATES: [u32; 3] = [44_100, 48_000, 96_000];

/// Time rendered after the last event when no duration is given.
pub const RELEASE_TAIL_SECONDS: f64 = 3.0;

/// Longest render accepted, to keep a typo from filling the disk.
pub const MAX_DURATION_SECONDS: f64 = 3600.0;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("unsupported sample rate {0} (use 44100, 48000 or 96000)")]
    UnsupportedSampleRate(u32),
    #[error("no duration given and no note events to derive one from")]
    NoDuration,
    #[error("invalid duration {0} s")]
    InvalidDuration(f64),
    #[error(transparent)]
    Params(#[from] DspError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    pub sample_rate: u32,
    /// Overrides the duration derived from the events.
    pub duration: Option<f64>,
    /// Overrides the preset's seed; without either the seed is 0.
    pub seed: Option<u64>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            sample_rate: 48_000,
            duration: None,
            seed: None,
        }
    }
}

/// Frame at which an event at `time` takes effect: rounded to the nearest
/// frame, then moved back to the start of its control block.
pub fn event_frame(time: f64, sample_rate: u32) -> usize {
    let frame = (time.max(0.0) * f64::from(sample_rate)).round() as usize;
    frame - frame % CONTROL_BLOCK
}

pub fn render_offline(
    preset: &Preset,
    events: &[NoteEvent],
    opts: &RenderOptions,
) -> Result<AudioBlock, RenderError> {
    if !SUPPORTED_SAMPLE_RATES.contains(&opts.sample_rate) {
        return Err(RenderError::UnsupportedSampleRate(opts.sample_rate));
    }
    let duration = match (opts.duration, events.last()) {
        (Some(d), _) => d,
        (None, Some(_)) => {
            let last = events.iter().map(|e| e.time).fold(0.0, f64::max);
            last + RELEASE_TAIL_SECONDS
        }
        (None, None) => return Err(RenderError::NoDuration),
    };
    if !(duration > 0.0 && duration <= MAX_DURATION_SECONDS) {
        return Err(RenderError::InvalidDuration(duration));
    }
    let sr = f64::from(opts.sample_rate);
    let seed = opts.seed.or(preset.seed).unwrap_or(0);
    let mut engine = build_engine(preset.engine, sr, seed, &preset.param_set())?;
    if preset.engine == EngineKind::Wintermute && !events.is_empty() {
        log::warn!("wintermute is not note-driven; {} note events ignored", events.len());
    }

    let frames = (duration * sr).round() as usize;
    let mut out = AudioBlock::silent(frames, sr);
    let mut schedule: Vec<(usize, &NoteEvent)> = events
        .iter()
        .map(|e| (event_frame(e.time, opts.sample_rate), e))
        .collect();
    schedule.sort_by_key(|&(frame, _)| frame);

    let mut pos = 0;
    let mut next = 0;
    while pos < frames {
        while next < schedule.len() && schedule[next].0 <= pos {
            let e = schedule[next].1;
            match e.kind {
                NoteKind::On => engine.note_on(e.key, f64::from(e.velocity) / 127.0),
                NoteKind::Off => engine.note_off(e.key),
            }
            next += 1;
        }
        let end = schedule
            .get(next)
            .map_or(frames, |&(frame, _)| frame.min(frames));
        engine.process(&mut out.left[pos..end], &mut out.right[pos..end]);
        pos = end;
    }
    Ok(out)
}

/// `render_offline` encoded as a 32-bit float stereo WAV file.
pub fn render_wav(
    preset: &Preset,
    events: &[NoteEvent],
    opts: &RenderOptions,
) -> Result<Vec<u8>, RenderError> {
    render_offline(preset, events, opts).map(|b| encode_wav(&b))
}
