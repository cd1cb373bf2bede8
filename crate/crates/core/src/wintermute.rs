//! Drone generator: N noise voices, each a resonant band-pass tuned to a
//! harmonic of the fundamental, retriggered by a Gaussian-jittered clock,
//! slowly panned, and summed into a delay and reverb.

use crate::dsp::{
    equal_power_pan, gauss_trigger_next, DspError, FeedbackDelay, OnePole, ResonantBandpass,
    RetrigEnvelope, RngStream, SampleHold, SchroederReverb, SineLfo, CONTROL_BLOCK,
};
use crate::engine::Engine;
use crate::params::{EngineKind, Param, ParamSet};

/// Voices preallocated per engine; also the registry maximum.
pub const MAX_VOICES: usize = 96;
const RESONATOR_STAGES: usize = 2;
const TILT_BASE_GAIN: f64 = 0.001;
const JITTER_LO: f64 = 0.9;
const JITTER_HI: f64 = 1.1;
const JITTER_RATE_RATIO: f64 = 0.3;

const NOISE_STREAM: u64 = 1;
const VOICE_STREAM: u64 = 2;

/// Global drone knobs in plain units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DroneParams {
    pub fundamental: f64,
    pub offset: f64,
    pub spread: f64,
    pub n_voices: usize,
    pub avg_rate: f64,
    pub dev: f64,
    pub attack: f64,
    pub decay: f64,
    pub amp_rand: f64,
    pub env_pitch_mod: f64,
    pub drift_amt: f64,
    pub drift_rate: f64,
    pub resonance: f64,
    pub pan_rate: f64,
    pub damp: f64,
    pub delay_time: f64,
    pub delay_feedback: f64,
    pub delay_send: f64,
    pub reverb_room: f64,
    pub reverb_send: f64,
    pub gain_db: f64,
}

impl Default for DroneParams {
    fn default() -> Self {
        Self::from_set(&ParamSet::default())
    }
}

impl DroneParams {
    pub fn from_set(s: &ParamSet) -> Self {
        Self {
            fundamental: s.get(Param::WmFundamental),
            offset: s.get(Param::WmOffset),
            spread: s.get(Param::WmSpread),
            n_voices: s.get(Param::WmVoices) as usize,
            avg_rate: s.get(Param::WmAvgRate),
            dev: s.get(Param::WmDev),
            attack: s.get(Param::WmAttack),
            decay: s.get(Param::WmDecay),
            amp_rand: s.get(Param::WmAmpRand),
            env_pitch_mod: s.get(Param::WmEnvPitch),
            drift_amt: s.get(Param::WmDriftAmt),
            drift_rate: s.get(Param::WmDriftRate),
            resonance: s.get(Param::WmResonance),
            pan_rate: s.get(Param::WmPanRate),
            damp: s.get(Param::WmDamp),
            delay_time: s.get(Param::WmDelayTime),
            delay_feedback: s.get(Param::WmDelayFeedback),
            delay_send: s.get(Param::WmDelaySend),
            reverb_room: s.get(Param::WmReverbRoom),
            reverb_send: s.get(Param::WmReverbSend),
            gain_db: s.get(Param::WmGain),
        }
    }

    pub fn validate(&self) -> Result<(), DspError> {
        let bad = |name, reason: &str| {
            Err(DspError::InvalidParameter {
                name,
                reason: reason.to_string(),
            })
        };
        if self.fundamental.is_nan() || self.fundamental <= 0.0 {
            return bad("fundamental", "must be > 0");
        }
        if self.resonance.is_nan() || self.resonance <= 0.0 {
            return bad("resonance", "must be > 0");
        }
        if self.avg_rate.is_nan() || self.avg_rate <= 0.0 {
            return bad("avg_rate", "must be > 0");
        }
        if self.n_voices > MAX_VOICES {
            return bad("n_voices", "exceeds the voice pool");
        }
        Ok(())
    }
}

/// Base center frequency of voice `index` (1-based):
/// `fundamental * (index * spread + offset)`, kept within `[1 Hz, 0.45 sr]`.
pub fn voice_center_freq(p: &DroneParams, index: usize, sample_rate: f64) -> f64 {
    let f = p.fundamental * (index as f64 * p.spread + p.offset);
    f.clamp(1.0, 0.45 * sample_rate)
}

/// Spectral tilt: `0.001 * (1 + damp * (index - N/2) / N)`.
pub fn voice_tilt_gain(p: &DroneParams, index: usize) -> f64 {
    let n = p.n_voices.max(1) as f64;
    TILT_BASE_GAIN * (1.0 + p.damp * (index as f64 - n * 0.5) / n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriggerEvent {
    pub voice: usize,
    pub time: f64,
    pub level_max: f64,
}

#[derive(Debug, Clone)]
struct DroneVoice {
    index: usize,
    active: bool,
    env: RetrigEnvelope,
    drift: OnePole,
    jitter: SampleHold,
    lfo: SineLfo,
    filter: ResonantBandpass,
    tuned: (f64, f64),
    next_trigger: f64,
    input_gain: f64,
    gain_l: f64,
    gain_r: f64,
}

impl DroneVoice {
    fn new(index: usize, rng: &mut RngStream) -> Self {
        let lfo = SineLfo::new(rng.uniform(0.0, 1.0));
        let jitter = SampleHold::new(rng, JITTER_LO, JITTER_HI).expect("constant range");
        Self {
            index,
            active: false,
            env: RetrigEnvelope::default(),
            drift: OnePole::new(0.0),
            jitter,
            lfo,
            filter: ResonantBandpass::new(RESONATOR_STAGES),
            tuned: (f64::NAN, f64::NAN),
            next_trigger: 0.0,
            input_gain: 0.0,
            gain_l: 0.0,
            gain_r: 0.0,
        }
    }

    fn is_silent(&self) -> bool {
        self.input_gain == 0.0 && self.filter.energy() < 1e-24
    }
}

/// The drone engine. All randomness comes from two streams derived from one seed.
pub struct Wintermute {
    set: ParamSet,
    params: DroneParams,
    sample_rate: f64,
    voices: Vec<DroneVoice>,
    noise_rng: RngStream,
    rng: RngStream,
    frame: u64,
    ctl_pos: usize,
    delay: FeedbackDelay,
    reverb: SchroederReverb,
    trigger_count: u64,
    trigger_log: Option<Vec<TriggerEvent>>,
    noise: [f64; CONTROL_BLOCK],
    acc_l: [f64; CONTROL_BLOCK],
    acc_r: [f64; CONTROL_BLOCK],
}

impl Wintermute {
    pub fn new(sample_rate: f64, seed: u64) -> Self {
        Self::with_param_set(sample_rate, seed, &ParamSet::default())
    }

    pub fn with_param_set(sample_rate: f64, seed: u64, set: &ParamSet) -> Self {
        let mut rng = RngStream::derive(seed, VOICE_STREAM);
        let voices = (1..=MAX_VOICES).map(|i| DroneVoice::new(i, &mut rng)).collect();
        Self {
            set: *set,
            params: DroneParams::from_set(set),
            sample_rate,
            voices,
            noise_rng: RngStream::derive(seed, NOISE_STREAM),
            rng,
            frame: 0,
            ctl_pos: 0,
            delay: FeedbackDelay::new(sample_rate),
            reverb: SchroederReverb::new(sample_rate),
            trigger_count: 0,
            trigger_log: None,
            noise: [0.0; CONTROL_BLOCK],
            acc_l: [0.0; CONTROL_BLOCK],
            acc_r: [0.0; CONTROL_BLOCK],
        }
    }

    /// Builds an engine from plain drone params, bypassing the registry ranges
    /// (so `n_voices = 0` is allowed and renders silence).
    pub fn with_drone_params(
        sample_rate: f64,
        seed: u64,
        params: DroneParams,
    ) -> Result<Self, DspError> {
        params.validate()?;
        let mut e = Self::new(sample_rate, seed);
        e.params = params;
        Ok(e)
    }

    pub fn drone_params(&self) -> &DroneParams {
        &self.params
    }

    /// Starts keeping every trigger in a log (allocates; not for the live callback).
    pub fn record_triggers(&mut self) {
        self.trigger_log = Some(Vec::new());
    }

    pub fn trigger_log(&self) -> &[TriggerEvent] {
        self.trigger_log.as_deref().unwrap_or(&[])
    }

    pub fn trigger_count(&self) -> u64 {
        self.trigger_count
    }

    /// Current envelope level of voice `index` (1-based).
    pub fn voice_level(&self, index: usize) -> f64 {
        self.voices[index - 1].env.level()
    }

    fn control_update(&mut self) {
        let p = self.params;
        let sr = self.sample_rate;
        let dt = CONTROL_BLOCK as f64 / sr;
        let ctl_rate = sr / CONTROL_BLOCK as f64;
        let now = self.frame as f64 / sr;
        let gain = 10f64.powf(p.gain_db / 20.0);
        let n = p.n_voices.min(MAX_VOICES);
        let per_voice_rate = p.avg_rate / n.max(1) as f64;

        for v in &mut self.voices {
            if v.index > n {
                v.active = false;
                continue;
            }
            if !v.active {
                v.active = true;
                v.filter.reset();
                // Start at a random point of the first interval so voices
                // begin out of phase and the mean rate holds from t = 0.
                let first = gauss_trigger_next(&mut self.rng, per_voice_rate, p.dev)
                    .unwrap_or(f64::INFINITY);
                let blocks = (self.rng.uniform(0.0, 1.0) * first / dt).floor();
                v.next_trigger = now + blocks * dt;
            }

            // Nearest block boundary, so a periodic clock does not slip a
            // block on rounding error.
            if now + 0.5 * dt >= v.next_trigger {
                let level_max = 1.0 - self.rng.uniform(0.0, p.amp_rand);
                v.env.trigger(level_max, p.attack, p.decay);
                let interval = gauss_trigger_next(&mut self.rng, per_voice_rate, p.dev)
                    .unwrap_or(f64::INFINITY);
                v.next_trigger += interval;
                if v.next_trigger <= now {
                    v.next_trigger = now + interval;
                }
                self.trigger_count += 1;
                if let Some(log) = &mut self.trigger_log {
                    log.push(TriggerEvent {
                        voice: v.index,
                        time: now,
                        level_max,
                    });
                }
            }

            let env = v.env.level();
            v.env.tick(dt);
            let raw = self.rng.uniform(-p.drift_amt, p.drift_amt);
            let drift = v.drift.tick(raw, p.drift_rate, ctl_rate);
            let jitter = v
                .jitter
                .tick(&mut self.rng, JITTER_LO, JITTER_HI, p.pan_rate * JITTER_RATE_RATIO, dt)
                .unwrap_or(1.0);
            let pos = v.lfo.tick(p.pan_rate * jitter, dt);

            let base = voice_center_freq(&p, v.index, sr);
            let cf = base * 2f64.powf((env * p.env_pitch_mod + drift) / 12.0);
            let bw = base / p.resonance;
            if (cf, bw) != v.tuned {
                v.filter.set(cf, bw, sr);
                v.tuned = (cf, bw);
            }
            v.input_gain = env * env;
            let (gl, gr) = equal_power_pan(voice_tilt_gain(&p, v.index) * gain, pos);
            v.gain_l = gl;
            v.gain_r = gr;
        }
    }

    fn render_chunk(&mut self, left: &mut [f32], right: &mut [f32]) {
        let len = left.len();
        let noise = &mut self.noise[..len];
        for x in noise.iter_mut() {
            *x = self.noise_rng.bipolar();
        }
        let acc_l = &mut self.acc_l[..len];
        let acc_r = &mut self.acc_r[..len];
        acc_l.fill(0.0);
        acc_r.fill(0.0);
        for v in self.voices.iter_mut().filter(|v| v.active) {
            if v.is_silent() {
                continue;
            }
            let (g, gl, gr) = (v.input_gain, v.gain_l, v.gain_r);
            for i in 0..len {
                let y = v.filter.tick(noise[i] * g);
                acc_l[i] += y * gl;
                acc_r[i] += y * gr;
            }
        }
        let p = &self.params;
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

impl Engine for Wintermute {
    fn kind(&self) -> EngineKind {
        EngineKind::Wintermute
    }

    fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    fn params(&self) -> &ParamSet {
        &self.set
    }

    fn set_param(&mut self, param: Param, value: f64) -> f64 {
        let v = self.set.set(param, value);
        self.params = DroneParams::from_set(&self.set);
        v
    }

    fn load_params(&mut self, params: &ParamSet) {
        self.set = *params;
        self.params = DroneParams::from_set(&self.set);
    }

    fn note_on(&mut self, _note: u8, _velocity: f64) {}

    fn note_off(&mut self, _note: u8) {}

    fn active_voices(&self) -> usize {
        self.voices
            .iter()
            .filter(|v| v.active && v.env.level() > 0.0)
            .count()
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
            self.frame += n as u64;
            done += n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SR: f64 = 48_000.0;

    fn params() -> DroneParams {
        DroneParams::default()
    }

    #[test]
    fn center_frequencies() {
        let mut p = params();
        p.fundamental = 55.0;
        assert!((voice_center_freq(&p, 3, SR) - 165.0).abs() < 1e-9);
        p.fundamental = 100.0;
        p.spread = 1.5;
        assert!((voice_center_freq(&p, 2, SR) - 300.0).abs() < 1e-9);
        p.spread = 1.0;
        p.offset = 0.5;
        assert!((voice_center_freq(&p, 1, SR) - 150.0).abs() < 1e-9);
        p.offset = 0.0;
        p.fundamental = 2000.0;
        assert_eq!(voice_center_freq(&p, 96, SR), 0.45 * SR);
    }

    #[test]
    fn tilt_gains() {
        let mut p = params();
        p.n_voices = 96;
        p.damp = 0.0;
        assert!((1..=96).all(|i| voice_tilt_gain(&p, i) == 0.001));
        for damp in [-1.0, 0.3, 1.0] {
            p.damp = damp;
            assert!((voice_tilt_gain(&p, 48) - 0.001).abs() < 1e-15);
        }
        p.damp = 1.0;
        assert!((voice_tilt_gain(&p, 96) - 0.0015).abs() < 1e-15);
    }

    #[test]
    fn zero_voices_is_silent() {
        let mut p = params();
        p.n_voices = 0;
        let mut e = Wintermute::with_drone_params(SR, 1, p).unwrap();
        let b = e.render(4800);
        assert!(b.left.iter().chain(&b.right).all(|&s| s == 0.0));
    }

    #[test]
    fn same_seed_bit_identical() {
        let a = Wintermute::new(SR, 42).render(9600);
        let b = Wintermute::new(SR, 42).render(9600);
        assert_eq!(a, b);
        let c = Wintermute::new(SR, 43).render(9600);
        assert_ne!(a, c);
    }

    #[test]
    fn chunking_does_not_change_output() {
        let whole = Wintermute::new(SR, 5).render(4000);
        let mut e = Wintermute::new(SR, 5);
        let mut pieces = e.render(7);
        for n in [100, 3, 16, 1874, 2000] {
            pieces.append(&e.render(n));
        }
        assert_eq!(whole, pieces);
    }

    #[test]
    fn zero_amp_rand_targets_full_level() {
        let mut p = params();
        p.amp_rand = 0.0;
        p.avg_rate = 50.0;
        p.n_voices = 8;
        let mut e = Wintermute::with_drone_params(SR, 9, p).unwrap();
        e.record_triggers();
        e.render(48_000);
        assert!(!e.trigger_log().is_empty());
        assert!(e.trigger_log().iter().all(|t| t.level_max == 1.0));
    }

    #[test]
    fn env_pitch_mod_shifts_one_octave() {
        let mut p = params();
        p.n_voices = 1;
        p.env_pitch_mod = 12.0;
        p.drift_amt = 0.0;
        p.attack = 0.0;
        p.decay = 10.0;
        p.amp_rand = 0.0;
        let mut e = Wintermute::with_drone_params(SR, 1, p).unwrap();
        while e.trigger_count() == 0 {
            e.process(&mut [0.0; 16], &mut [0.0; 16]);
        }
        let base = voice_center_freq(&p, 1, SR);
        assert!(e.voice_level(1) > 0.99);
        let tuned = e.voices[0].tuned;
        assert!((tuned.0 - 2.0 * base).abs() < 1e-9, "{tuned:?}");
    }

    #[test]
    fn first_triggers_spread_over_one_interval() {
        let mut p = params();
        p.n_voices = 8;
        p.avg_rate = 8.0;
        p.dev = 0.0;
        let mut e = Wintermute::with_drone_params(SR, 3, p).unwrap();
        e.record_triggers();
        e.render(SR as usize);
        let log = e.trigger_log();
        assert_eq!(log.len(), 8);
        assert!(log.iter().all(|t| t.time < 1.0));
        assert!(log.iter().any(|t| t.time > 0.0));
    }

    #[test]
    fn idle_voice_contributes_silence() {
        let mut p = params();
        p.n_voices = 1;
        p.attack = 0.001;
        p.decay = 0.001;
        p.avg_rate = 0.1;
        p.dev = 0.0;
        p.delay_send = 0.0;
        p.reverb_send = 0.0;
        let mut e = Wintermute::with_drone_params(SR, 3, p).unwrap();
        e.render(48_000);
        assert_eq!(e.voices[0].input_gain, 0.0);
        e.render(4 * 48_000);
        let tail = e.render(48_000);
        assert!(tail.peak() < 1e-6, "{}", tail.peak());
    }

    #[test]
    fn voice_count_change_reactivates_voices() {
        let mut e = Wintermute::new(SR, 1);
        e.set_param(Param::WmVoices, 4.0);
        e.render(1600);
        assert!(e.voices.iter().skip(4).all(|v| !v.active));
        e.set_param(Param::WmVoices, 10.0);
        e.render(16);
        assert_eq!(e.voices.iter().filter(|v| v.active).count(), 10);
    }
}
