//! Polyphonic supersaw synth: per-voice eight-oscillator unison stack, a
//! four-pole resonant low-pass per channel, two ADSTR envelopes and a master
//! delay and reverb.

mod adstr;
mod ladder;

pub use adstr::{AdstrParams, AdstrStage, AdstrState, AdstrTimes, Gate, KNOB_SECONDS, MIN_SEGMENT};
pub use ladder::LadderFilter;

use std::sync::Arc;

use crate::dsp::{FeedbackDelay, RngStream, SchroederReverb, CONTROL_BLOCK};
use crate::engine::Engine;
use crate::params::{EngineKind, Param, ParamSet};
use crate::wavetable::{note_to_hz, SuperOsc, WavetableBank};

pub const MAX_POLYPHONY: usize = 16;
const CUTOFF_MIN: f64 = 20.0;
const CUTOFF_SPAN: f64 = 1000.0;
const FILTER_ENV_OCTAVES: f64 = 5.0;
const PHASE_STREAM: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShadowsParams {
    pub shape: f64,
    pub detune: f64,
    pub width: f64,
    pub volume: f64,
    pub cutoff: f64,
    pub resonance: f64,
    pub filter_env_amount: f64,
    pub amp: AdstrParams,
    pub filter: AdstrParams,
    pub delay_time: f64,
    pub delay_feedback: f64,
    pub delay_send: f64,
    pub reverb_room: f64,
    pub reverb_send: f64,
    pub phase_spread: bool,
}

impl Default for ShadowsParams {
    fn default() -> Self {
        Self::from_set(&ParamSet::default())
    }
}

impl ShadowsParams {
    pub fn from_set(s: &ParamSet) -> Self {
        Self {
            shape: s.get(Param::ShShape),
            detune: s.get(Param::ShDetune),
            width: s.get(Param::ShWidth),
            volume: s.get(Param::ShVolume),
            cutoff: s.get(Param::ShCutoff),
            resonance: s.get(Param::ShResonance),
            filter_env_amount: s.get(Param::ShFilterEnvAmount),
            amp: AdstrParams {
                attack: s.get(Param::ShAmpAttack),
                decay: s.get(Param::ShAmpDecay),
                sustain: s.get(Param::ShAmpSustain),
                t_time: s.get(Param::ShAmpTime),
                release: s.get(Param::ShAmpRelease),
            },
            filter: AdstrParams {
                attack: s.get(Param::ShFilterAttack),
                decay: s.get(Param::ShFilterDecay),
                sustain: s.get(Param::ShFilterSustain),
                t_time: s.get(Param::ShFilterTime),
                release: s.get(Param::ShFilterRelease),
            },
            delay_time: s.get(Param::ShDelayTime),
            delay_feedback: s.get(Param::ShDelayFeedback),
            delay_send: s.get(Param::ShDelaySend),
            reverb_room: s.get(Param::ShReverbRoom),
            reverb_send: s.get(Param::ShReverbSend),
            phase_spread: s.get(Param::ShPhaseSpread) >= 0.5,
        }
    }
}

/// `20 * 1000^knob * 2^(5 * amount * env)` Hz, clamped to `[20, 0.45 sr]`.
pub fn cutoff_hz(knob: f64, env_amount: f64, env_level: f64, sample_rate: f64) -> f64 {
    let hz = CUTOFF_MIN
        * CUTOFF_SPAN.powf(knob.clamp(0.0, 1.0))
        * 2f64.powf(FILTER_ENV_OCTAVES * env_amount * env_level);
    hz.clamp(CUTOFF_MIN, 0.45 * sample_rate)
}

#[derive(Debug, Clone)]
pub struct SynthVoice {
    note: u8,
    velocity: f64,
    gate: Gate,
    active: bool,
    age: u64,
    osc: SuperOsc,
    amp_env: AdstrState,
    filter_env: AdstrState,
    amp_times: AdstrTimes,
    filter_times: AdstrTimes,
    filter_l: LadderFilter,
    filter_r: LadderFilter,
    amp: f64,
    amp_target: f64,
    amp_step: f64,
}

impl SynthVoice {
    fn new() -> Self {
        let times = AdstrParams {
            attack: 0.0,
            decay: 0.0,
            sustain: 0.0,
            t_time: 0.0,
            release: 0.0,
        }
        .times();
        Self {
            note: 0,
            velocity: 0.0,
            gate: Gate::Off,
            active: false,
            age: 0,
            osc: SuperOsc::new(),
            amp_env: AdstrState::new(),
            filter_env: AdstrState::new(),
            amp_times: times,
            filter_times: times,
            filter_l: LadderFilter::new(),
            filter_r: LadderFilter::new(),
            amp: 0.0,
            amp_target: 0.0,
            amp_step: 0.0,
        }
    }

    pub fn note(&self) -> u8 {
        self.note
    }

    pub fn is_active(&self) -> bool {
        self.active
    }

    pub fn is_gated(&self) -> bool {
        self.active && self.gate == Gate::On
    }

    /// Amp envelope level including velocity, as of the last control block.
    pub fn amp_level(&self) -> f64 {
        self.amp_target
    }

    pub fn oscillator(&self) -> &SuperOsc {
        &self.osc
    }
}

pub struct Shadows {
    set: ParamSet,
    params: ShadowsParams,
    sample_rate: f64,
    bank: Arc<WavetableBank>,
    voices: Vec<SynthVoice>,
    next_age: u64,
    rng: RngStream,
    ctl_pos: usize,
    delay: FeedbackDelay,
    reverb: SchroederReverb,
    acc_l: [f64; CONTROL_BLOCK],
    acc_r: [f64; CONTROL_BLOCK],
}

impl Shadows {
    pub fn new(sample_rate: f64, seed: u64) -> Self {
        Self::with_param_set(sample_rate, seed, &ParamSet::default())
    }

    pub fn with_param_set(sample_rate: f64, seed: u64, set: &ParamSet) -> Self {
        Self {
            set: *set,
            params: ShadowsParams::from_set(set),
            sample_rate,
            bank: WavetableBank::shared(sample_rate),
            voices: (0..MAX_POLYPHONY).map(|_| SynthVoice::new()).collect(),
            next_age: 0,
            rng: RngStream::derive(seed, PHASE_STREAM),
            ctl_pos: 0,
            delay: FeedbackDelay::new(sample_rate),
            reverb: SchroederReverb::new(sample_rate),
            acc_l: [0.0; CONTROL_BLOCK],
            acc_r: [0.0; CONTROL_BLOCK],
        }
    }

    pub fn synth_params(&self) -> &ShadowsParams {
        &self.params
    }

    pub fn voices(&self) -> &[SynthVoice] {
        &self.voices
    }

    /// Slot for a new note: a free voice, else the oldest released one, else the oldest.
    fn allocate(&self) -> usize {
        if let Some(i) = self.voices.iter().position(|v| !v.active) {
            return i;
        }
        let oldest = |gated: bool| {
            self.voices
                .iter()
                .enumerate()
                .filter(|(_, v)| (v.gate == Gate::On) == gated)
                .min_by_key(|(_, v)| v.age)
                .map(|(i, _)| i)
        };
        oldest(false).or_else(|| oldest(true)).unwrap_or(0)
    }

    fn control_update(&mut self) {
        let p = self.params;
        let sr = self.sample_rate;
        let dt = CONTROL_BLOCK as f64 / sr;
        for v in self.voices.iter_mut().filter(|v| v.active) {
            if v.amp_env.is_done() && v.amp_target == 0.0 {
                v.active = false;
                v.amp = 0.0;
                v.amp_step = 0.0;
                continue;
            }
            v.amp = v.amp_target;
            v.amp_target = v.amp_env.tick(&v.amp_times, v.gate, dt) * v.velocity;
            v.amp_step = (v.amp_target - v.amp) / CONTROL_BLOCK as f64;
            let fenv = v.filter_env.tick(&v.filter_times, v.gate, dt) * v.velocity;
            let fc = cutoff_hz(p.cutoff, p.filter_env_amount, fenv, sr);
            v.filter_l.set(fc, p.resonance, sr);
            v.filter_r.set(fc, p.resonance, sr);
        }
    }

    fn render_chunk(&mut self, left: &mut [f32], right: &mut [f32]) {
        let len = left.len();
        let p = self.params;
        let sr = self.sample_rate;
        let acc_l = &mut self.acc_l[..len];
        let acc_r = &mut self.acc_r[..len];
        acc_l.fill(0.0);
        acc_r.fill(0.0);
        for v in self.voices.iter_mut().filter(|v| v.active) {
            let table = self.bank.table(v.note);
            let freq = note_to_hz(f64::from(v.note));
            for i in 0..len {
                let (l, r) = v.osc.tick(table, freq, p.shape, p.detune, p.width, p.volume, sr);
                v.amp += v.amp_step;
                acc_l[i] += v.filter_l.tick(l) * v.amp;
                acc_r[i] += v.filter_r.tick(r) * v.amp;
            }
        }
        for i in 0..len {
            let d = self.delay.process_frame(
                (acc_l[i], acc_r[i]),
                p.delay_time,
                p.delay_feedback,
                p.delay_send,
            );
            let (l, r) = self.reverb.process_frame(d, p.reverb_room, p.reverb_send);
            left[i] = l as f32;
            right[i] = r as f32;
        }
    }
}

impl Engine for Shadows {
    fn kind(&self) -> EngineKind {
        EngineKind::Shadows
    }

    fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    fn params(&self) -> &ParamSet {
        &self.set
    }

    fn set_param(&mut self, param: Param, value: f64) -> f64 {
        let v = self.set.set(param, value);
        self.params = ShadowsParams::from_set(&self.set);
        v
    }

    fn load_params(&mut self, params: &ParamSet) {
        self.set = *params;
        self.params = ShadowsParams::from_set(&self.set);
    }

    fn note_on(&mut self, note: u8, velocity: f64) {
        let velocity = velocity.clamp(0.0, 1.0);
        if note > 127 || velocity <= 0.0 {
            return;
        }
        let slot = self.allocate();
        let phases = if self.params.phase_spread {
            let rng = &mut self.rng;
            [(); 8].map(|_| rng.uniform(0.0, 1.0))
        } else {
            [0.0; 8]
        };
        let amp_times = self.params.amp.times();
        let filter_times = self.params.filter.times();
        let age = self.next_age;
        self.next_age += 1;

        let v = &mut self.voices[slot];
        v.note = note;
        v.velocity = velocity;
        v.gate = Gate::On;
        v.active = true;
        v.age = age;
        v.osc.reset(phases);
        v.amp_env = AdstrState::new();
        v.filter_env = AdstrState::new();
        v.amp_times = amp_times;
        v.filter_times = filter_times;
        v.filter_l.reset();
        v.filter_r.reset();
        v.amp = 0.0;
        v.amp_target = 0.0;
        v.amp_step = 0.0;
    }

    fn note_off(&mut self, note: u8) {
        for v in self.voices.iter_mut().filter(|v| v.is_gated() && v.note == note) {
            v.gate = Gate::Off;
        }
    }

    fn all_notes_off(&mut self) {
        for v in self.voices.iter_mut().filter(|v| v.active) {
            v.gate = Gate::Off;
        }
    }

    fn active_voices(&self) -> usize {
        self.voices.iter().filter(|v| v.active).count()
    }

    fn process(&mut self, left: &mut [f32], right: &mut [f32]) {
        let frames = left.len().min(right.len());
        let mut done = 0;
        while done < frames {
            if self.ctl_pos == 0 {
                self.control_update();
            }
            let n = (CONTROL_BLOCK - self.ctl_pos).min(frames - done);
            self.render_chunk(&mut left[done..done + n], &mut right[done..done + n]);
            self.ctl_pos = (self.ctl_pos + n) % CONTROL_BLOCK;
            done += n;
        }
    }
}
