//! Alias-free per-note sawtooth tables and the oscillators that read them.
//!
//! Every MIDI note gets its own 8192-sample single-cycle table holding only
//! the partials that stay below Nyquist when the table is played at that
//! note's equal-tempered pitch. The bank is built once per sample rate
//! (128 inverse FFTs, roughly 4 MB of `f32`) and shared read-only.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::dsp::CONTROL_BLOCK;

pub const TABLE_SIZE: usize = 8192;
pub const NOTE_COUNT: usize = 128;

/// Per-voice frequency offsets of the eight-voice supersaw, applied as `1 + DT * detune`.
pub const SUPERSAW_DETUNE: [f64; 8] = [
    0.0024, 0.019, -0.019, -0.0023, 0.0046, -0.0046, 0.0093, -0.0093,
];
/// Per-voice pan offsets, applied as `0.5 + P * width`.
pub const SUPERSAW_PAN: [f64; 8] = [0.5, -0.5, -0.5, 0.5, 0.5, -0.5, -0.5, 0.5];
const SUPERSAW_MIX: f64 = 0.125;

const PW_MIN: f64 = 0.05;
const PW_MAX: f64 = 0.95;

/// Equal-tempered frequency of a MIDI note, A4 = 440 Hz.
pub fn note_to_hz(note: f64) -> f64 {
    440.0 * 2f64.powf((note - 69.0) / 12.0)
}

/// Highest partial that stays at or below Nyquist for `note`, at least 1.
pub fn max_harmonic(note: u8, sample_rate: f64) -> usize {
    let f0 = 440.0 * (2f64.ln() * (f64::from(note) - 69.0) / 12.0).exp();
    ((sample_rate / (2.0 * f0)).floor() as usize).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveKind {
    Saw,
}

/// One band-limited cycle.
#[derive(Debug, Clone)]
pub struct Wavetable {
    samples: Vec<f32>,
    note: u8,
    kind: WaveKind,
    partials: usize,
}

impl Wavetable {
    pub fn samples(&self) -> &[f32] {
        &self.samples
    }

    pub fn note(&self) -> u8 {
        self.note
    }

    pub fn kind(&self) -> WaveKind {
        self.kind
    }

    /// Number of partials the table was built with.
    pub fn partials(&self) -> usize {
        self.partials
    }

    /// Linear interpolation between neighbouring slots, wrapping at the end.
    #[inline]
    pub fn read(&self, phase: f64) -> f64 {
        let pos = phase.rem_euclid(1.0) * TABLE_SIZE as f64;
        let i = pos as usize;
        let frac = pos - i as f64;
        let a = f64::from(self.samples[i % TABLE_SIZE]);
        let b = f64::from(self.samples[(i + 1) % TABLE_SIZE]);
        a + (b - a) * frac
    }
}

/// `samples[j] = sum_{k=1..imaxh} sin(2*pi*k*j/N) / k`, normalized to peak 1.
pub fn build_saw_table(note: u8, sample_rate: f64) -> Wavetable {
    let mut planner = FftPlanner::<f64>::new();
    build_saw_with(&mut planner, note.min(127), sample_rate)
}

fn build_saw_with(planner: &mut FftPlanner<f64>, note: u8, sample_rate: f64) -> Wavetable {
    let partials = max_harmonic(note, sample_rate).min(TABLE_SIZE / 2 - 1);
    let mut spectrum = vec![Complex::new(0.0, 0.0); TABLE_SIZE];
    for k in 1..=partials {
        // sin(x) = (e^{ix} - e^{-ix}) / 2i
        let a = 0.5 / k as f64;
        spectrum[k] = Complex::new(0.0, -a);
        spectrum[TABLE_SIZE - k] = Complex::new(0.0, a);
    }
    planner.plan_fft_inverse(TABLE_SIZE).process(&mut spectrum);
    let peak = spectrum.iter().fold(0.0f64, |m, c| m.max(c.re.abs()));
    let samples = spectrum.iter().map(|c| (c.re / peak) as f32).collect();
    Wavetable {
        samples,
        note,
        kind: WaveKind::Saw,
        partials,
    }
}

/// Tables for all 128 MIDI notes at one sample rate. Immutable once built.
#[derive(Debug)]
pub struct WavetableBank {
    tables: Vec<Wavetable>,
    sample_rate: f64,
}

impl WavetableBank {
    pub fn build(sample_rate: f64) -> Self {
        let mut planner = FftPlanner::<f64>::new();
        let tables = (0..NOTE_COUNT as u8)
            .map(|n| build_saw_with(&mut planner, n, sample_rate))
            .collect();
        Self {
            tables,
            sample_rate,
        }
    }

    /// Process-wide bank for `sample_rate`, built on first use.
    pub fn shared(sample_rate: f64) -> Arc<WavetableBank> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<WavetableBank>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
        map.entry(sample_rate.to_bits())
            .or_insert_with(|| Arc::new(Self::build(sample_rate)))
            .clone()
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn table(&self, note: u8) -> &Wavetable {
        &self.tables[usize::from(note.min(127))]
    }
}

/// `0.5 + 0.01 * sin(2*pi*0.5*t)`: the slow pulse-width wobble of the supersaw.
pub fn pwm_wobble(t: f64) -> f64 {
    0.5 + 0.01 * (TAU * 0.5 * t).sin()
}

/// Saw/pulse crossfading oscillator. The pulse is the difference of two
/// phase-shifted saws read from the same table.
#[derive(Debug, Clone, Copy, Default)]
pub struct MorphOsc {
    phase: f64,
}

impl MorphOsc {
    pub fn new(phase: f64) -> Self {
        Self {
            phase: phase.rem_euclid(1.0),
        }
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn reset(&mut self, phase: f64) {
        self.phase = phase.rem_euclid(1.0);
    }

    #[inline]
    pub fn tick(&mut self, table: &Wavetable, freq: f64, shape: f64, pw: f64, sample_rate: f64) -> f64 {
        let shape = shape.clamp(0.0, 1.0);
        let pw = pw.clamp(PW_MIN, PW_MAX);
        let saw = table.read(self.phase);
        let out = if shape == 0.0 {
            saw
        } else {
            let pulse = saw - table.read(self.phase + pw) + (2.0 * pw - 1.0);
            (1.0 - shape) * saw + shape * pulse
        };
        self.phase += freq / sample_rate;
        if self.phase >= 1.0 || self.phase < 0.0 {
            self.phase = self.phase.rem_euclid(1.0);
        }
        out
    }
}

/// Eight detuned morph oscillators with a fixed stereo spread pattern.
#[derive(Debug, Clone)]
pub struct SuperOsc {
    voices: [MorphOsc; 8],
    pwm_time: f64,
    pw: f64,
    countdown: usize,
}

impl Default for SuperOsc {
    fn default() -> Self {
        Self::new()
    }
}

impl SuperOsc {
    pub fn new() -> Self {
        Self {
            voices: [MorphOsc::default(); 8],
            pwm_time: 0.0,
            pw: pwm_wobble(0.0),
            countdown: 0,
        }
    }

    /// Resets every voice to the given phases and restarts the pulse-width LFO.
    pub fn reset(&mut self, phases: [f64; 8]) {
        for (v, p) in self.voices.iter_mut().zip(phases) {
            v.reset(p);
        }
        self.pwm_time = 0.0;
        self.pw = pwm_wobble(0.0);
        self.countdown = 0;
    }

    pub fn phases(&self) -> [f64; 8] {
        self.voices.map(|v| v.phase())
    }

    pub fn pulse_width(&self) -> f64 {
        self.pw
    }

    /// Frequency multiplier of each voice: `1 + DT[i] * detune`.
    pub fn multipliers(detune: f64) -> [f64; 8] {
        SUPERSAW_DETUNE.map(|d| d * detune + 1.0)
    }

    /// Left-channel weight of each voice: `0.5 + P[i] * width`.
    pub fn left_weights(width: f64) -> [f64; 8] {
        SUPERSAW_PAN.map(|p| p * width + 0.5)
    }

    #[allow(clippy::too_many_arguments)]
    #[inline]
    pub fn tick(
        &mut self,
        table: &Wavetable,
        freq: f64,
        shape: f64,
        detune: f64,
        width: f64,
        vol: f64,
        sample_rate: f64,
    ) -> (f64, f64) {
        if self.countdown == 0 {
            self.pw = pwm_wobble(self.pwm_time);
            self.pwm_time += CONTROL_BLOCK as f64 / sample_rate;
            self.countdown = CONTROL_BLOCK;
        }
        self.countdown -= 1;

        let vol = vol.clamp(0.0, 1.0);
        let pw = self.pw;
        let (mut l, mut r) = (0.0, 0.0);
        for ((osc, dt), p) in self.voices.iter_mut().zip(SUPERSAW_DETUNE).zip(SUPERSAW_PAN) {
            let a = osc.tick(table, freq * (dt * detune + 1.0), shape, pw, sample_rate);
            let w = p * width + 0.5;
            l += a * w;
            r += a * (1.0 - w);
        }
        (l * SUPERSAW_MIX * vol, r * SUPERSAW_MIX * vol)
    }
}
