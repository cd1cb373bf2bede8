//! Attack / decay / sustain / T / release envelope.
//!
//! After the decay the level heads from the sustain value toward a limit
//! point over the T segment: up to 1 for positive T, down to 0 for negative
//! T, and for T = 0 it simply holds the sustain level like an ADSR.

use serde::{Deserialize, Serialize};

/// Seconds a knob at 1.0 maps to.
pub const KNOB_SECONDS: f64 = 3.0;
/// Shortest attack, decay and release segment.
pub const MIN_SEGMENT: f64 = 0.001;

/// Envelope knobs as stored in presets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdstrParams {
    pub attack: f64,
    pub decay: f64,
    pub sustain: f64,
    /// Bipolar knob in `[-1, 1]`.
    pub t_time: f64,
    pub release: f64,
}

impl AdstrParams {
    /// Knob to seconds: `knob * 3 + 0.001`; the T segment is `|t| * 3` seconds.
    pub fn times(&self) -> AdstrTimes {
        let secs = |k: f64| k.clamp(0.0, 1.0) * KNOB_SECONDS + MIN_SEGMENT;
        AdstrTimes {
            attack: secs(self.attack),
            decay: secs(self.decay),
            sustain: self.sustain.clamp(0.0, 1.0),
            t_time: self.t_time.clamp(-1.0, 1.0) * KNOB_SECONDS,
            release: secs(self.release),
        }
    }
}

/// Envelope segment lengths in seconds. `t_time` is signed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdstrTimes {
    pub attack: f64,
    pub decay: f64,
    pub sustain: f64,
    pub t_time: f64,
    pub release: f64,
}

impl AdstrTimes {
    /// Level the T segment heads for.
    pub fn limit_point(&self) -> f64 {
        if self.t_time > 0.0 {
            1.0
        } else if self.t_time < 0.0 {
            0.0
        } else {
            self.sustain
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdstrStage {
    Attack,
    Decay,
    Slope,
    Hold,
    Release,
    Done,
}

#[derive(Debug, Clone, Copy)]
pub struct AdstrState {
    stage: AdstrStage,
    level: f64,
    clock: f64,
    release_from: f64,
}

impl Default for AdstrState {
    fn default() -> Self {
        Self::new()
    }
}

impl AdstrState {
    /// A fresh envelope at level 0, about to attack.
    pub fn new() -> Self {
        Self {
            stage: AdstrStage::Attack,
            level: 0.0,
            clock: 0.0,
            release_from: 0.0,
        }
    }

    pub fn stage(&self) -> AdstrStage {
        self.stage
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn is_done(&self) -> bool {
        self.stage == AdstrStage::Done
    }

    /// Advances by `dt` seconds and returns the level at the new time.
    /// A gate-off moves any unfinished stage into release from the current level.
    pub fn tick(&mut self, times: &AdstrTimes, gate: Gate, dt: f64) -> f64 {
        if gate == Gate::Off && !matches!(self.stage, AdstrStage::Release | AdstrStage::Done) {
            self.stage = AdstrStage::Release;
            self.release_from = self.level;
            self.clock = 0.0;
        }
        self.clock += dt.max(0.0);
        self.settle(times);
        self.level
    }

    fn settle(&mut self, t: &AdstrTimes) {
        loop {
            let (from, to, dur, next) = match self.stage {
                AdstrStage::Attack => (0.0, 1.0, t.attack, AdstrStage::Decay),
                AdstrStage::Decay => (1.0, t.sustain, t.decay, AdstrStage::Slope),
                AdstrStage::Slope => {
                    let next = if t.t_time < 0.0 {
                        AdstrStage::Done
                    } else {
                        AdstrStage::Hold
                    };
                    (t.sustain, t.limit_point(), t.t_time.abs(), next)
                }
                AdstrStage::Hold => {
                    self.level = t.limit_point();
                    return;
                }
                AdstrStage::Release => (self.release_from, 0.0, t.release, AdstrStage::Done),
                AdstrStage::Done => {
                    self.level = 0.0;
                    return;
                }
            };
            if self.clock >= dur {
                self.clock -= dur;
                self.level = to;
                self.stage = next;
                continue;
            }
            self.level = (from + (to - from) * self.clock / dur).clamp(0.0, 1.0);
            return;
        }
    }
}
