//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every function is a pure computation over `gloam-core`; the page does the
//! drawing and audio playback. Stereo results are interleaved `[l0, r0, l1, ...]`.

use gloam_core::analysis::{blackman_harris, magnitude_spectrum, to_db, welch_power};
use gloam_core::dsp::CONTROL_BLOCK;
use gloam_core::engine::Engine;
use gloam_core::params::{Param, ParamSet};
use gloam_core::shadows::{AdstrParams, AdstrState, Gate};
use gloam_core::wavetable::{SuperOsc, WavetableBank};
use gloam_core::wintermute::Wintermute;
use wasm_bindgen::prelude::*;

pub const SAMPLE_RATE: f64 = 48_000.0;
/// Longest drone render the page may ask for.
pub const MAX_DRONE_SECONDS: f64 = 30.0;
const SUPERSAW_FFT: usize = 8192;

#[wasm_bindgen]
pub fn sample_rate() -> f64 {
    SAMPLE_RATE
}

/// Envelope level at `points` evenly spaced instants over `total` seconds.
/// Knobs are in `[0, 1]` except `t_time` in `[-1, 1]`; the gate closes at `gate_off` seconds.
#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn adstr_curve(
    attack: f64,
    decay: f64,
    sustain: f64,
    t_time: f64,
    release: f64,
    gate_off: f64,
    total: f64,
    points: usize,
) -> Vec<f32> {
    let times = AdstrParams {
        attack,
        decay,
        sustain,
        t_time,
        release,
    }
    .times();
    let points = points.max(2);
    let dt = total.max(0.0) / (points - 1) as f64;
    let mut env = AdstrState::new();
    let mut out = Vec::with_capacity(points);
    out.push(0.0);
    for i in 1..points {
        let gate = if i as f64 * dt <= gate_off {
            Gate::On
        } else {
            Gate::Off
        };
        out.push(env.tick(&times, gate, dt) as f32);
    }
    out
}

/// Envelope segment boundaries in seconds: attack end, decay end, slope end, release length.
#[wasm_bindgen]
pub fn adstr_times(attack: f64, decay: f64, sustain: f64, t_time: f64, release: f64) -> Vec<f64> {
    let t = AdstrParams {
        attack,
        decay,
        sustain,
        t_time,
        release,
    }
    .times();
    vec![
        t.attack,
        t.attack + t.decay,
        t.attack + t.decay + t.t_time.abs(),
        t.release,
    ]
}

/// Raw eight-voice oscillator output, no filter or envelope.
#[wasm_bindgen]
pub fn supersaw_wave(note: u8, shape: f64, detune: f64, width: f64, frames: usize) -> Vec<f32> {
    let bank = WavetableBank::shared(SAMPLE_RATE);
    let note = note.min(127);
    let table = bank.table(note);
    let freq = gloam_core::wavetable::note_to_hz(f64::from(note));
    let mut osc = SuperOsc::new();
    let mut out = Vec::with_capacity(2 * frames);
    for _ in 0..frames {
        let (l, r) = osc.tick(table, freq, shape, detune, width, 1.0, SAMPLE_RATE);
        out.push(l as f32);
        out.push(r as f32);
    }
    out
}

/// Blackman-Harris magnitude spectrum in dB of the oscillator's mono sum,
/// normalised so the loudest bin is 0 dB. Bin `k` is `k * sample_rate / 8192` Hz.
#[wasm_bindgen]
pub fn supersaw_spectrum(note: u8, shape: f64, detune: f64, width: f64) -> Vec<f32> {
    let wave = supersaw_wave(note, shape, detune, width, SUPERSAW_FFT);
    let mono: Vec<f64> = wave
        .chunks_exact(2)
        .map(|f| 0.5 * (f64::from(f[0]) + f64::from(f[1])))
        .collect();
    let mag = magnitude_spectrum(&mono, &blackman_harris(SUPERSAW_FFT));
    relative_db(&mag)
}

/// Renders the drone engine with the given knobs; everything else stays at its default.
#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn drone_render(
    fundamental: f64,
    spread: f64,
    n_voices: f64,
    avg_rate: f64,
    resonance: f64,
    env_pitch_mod: f64,
    seed: u64,
    seconds: f64,
) -> Vec<f32> {
    let mut params = ParamSet::default();
    params.set(Param::WmFundamental, fundamental);
    params.set(Param::WmSpread, spread);
    params.set(Param::WmVoices, n_voices.round());
    params.set(Param::WmAvgRate, avg_rate);
    params.set(Param::WmResonance, resonance);
    params.set(Param::WmEnvPitch, env_pitch_mod);
    let frames = (seconds.clamp(0.0, MAX_DRONE_SECONDS) * SAMPLE_RATE) as usize;
    let frames = frames - frames % CONTROL_BLOCK;
    let block = Wintermute::with_param_set(SAMPLE_RATE, seed, &params).render(frames);
    block.interleaved()
}

/// Welch power spectrum in dB of an interleaved stereo buffer's mono sum,
/// normalised so the loudest bin is 0 dB. `segment` must be a power of two.
#[wasm_bindgen]
pub fn spectrum_db(interleaved: &[f32], segment: usize) -> Vec<f32> {
    let mono: Vec<f64> = interleaved
        .chunks_exact(2)
        .map(|f| 0.5 * (f64::from(f[0]) + f64::from(f[1])))
        .collect();
    let power = welch_power(&mono, segment.max(2));
    let mag: Vec<f64> = power.iter().map(|p| p.sqrt()).collect();
    relative_db(&mag)
}

fn relative_db(mag: &[f64]) -> Vec<f32> {
    let top = mag.iter().cloned().fold(f64::MIN_POSITIVE, f64::max);
    mag.iter().map(|&m| to_db(m / top).max(-140.0) as f32).collect()
}
