/// Segment of the retriggerable attack/decay envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvPhase {
    Attack,
    Decay,
    Idle,
    Release,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnvEvent {
    Trigger { level_max: f64 },
    NoteOff,
    Tick { dt: f64 },
}

/// Piecewise-linear attack/decay envelope that restarts from its current
/// level on every trigger, so retriggers never jump.
#[derive(Debug, Clone, Copy)]
pub struct RetrigEnvelope {
    level: f64,
    phase: EnvPhase,
    clock: f64,
    start: f64,
    peak: f64,
    att: f64,
    dec: f64,
}

impl Default for RetrigEnvelope {
    fn default() -> Self {
        Self {
            level: 0.0,
            phase: EnvPhase::Idle,
            clock: 0.0,
            start: 0.0,
            peak: 0.0,
            att: 0.0,
            dec: 0.0,
        }
    }
}

impl RetrigEnvelope {
    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn phase(&self) -> EnvPhase {
        self.phase
    }

    /// Starts a new attack from the current level toward `level_max`.
    /// Segment times are captured here and stay fixed until the next trigger.
    pub fn trigger(&mut self, level_max: f64, att: f64, dec: f64) {
        self.start = self.level;
        self.peak = level_max.clamp(0.0, 1.0);
        self.att = att.max(0.0);
        self.dec = dec.max(0.0);
        self.clock = 0.0;
        self.phase = EnvPhase::Attack;
        self.settle();
    }

    /// Ramps the current level to zero over `dec` seconds.
    pub fn note_off(&mut self, dec: f64) {
        self.start = self.level;
        self.dec = dec.max(0.0);
        self.clock = 0.0;
        self.phase = EnvPhase::Release;
        self.settle();
    }

    pub fn tick(&mut self, dt: f64) -> f64 {
        self.clock += dt.max(0.0);
        self.settle();
        self.level
    }

    pub fn handle(&mut self, event: EnvEvent, att: f64, dec: f64) -> f64 {
        match event {
            EnvEvent::Trigger { level_max } => self.trigger(level_max, att, dec),
            EnvEvent::NoteOff => self.note_off(dec),
            EnvEvent::Tick { dt } => {
                self.tick(dt);
            }
        }
        self.level
    }

    /// Walks through any segments the clock has passed and recomputes the level.
    fn settle(&mut self) {
        loop {
            let (from, to, dur, next) = match self.phase {
                EnvPhase::Attack => (self.start, self.peak, self.att, EnvPhase::Decay),
                EnvPhase::Decay => (self.peak, 0.0, self.dec, EnvPhase::Idle),
                EnvPhase::Release => (self.start, 0.0, self.dec, EnvPhase::Idle),
                EnvPhase::Idle => {
                    self.level = 0.0;
                    return;
                }
            };
            if self.clock >= dur {
                self.clock -= dur;
                self.level = to;
                self.phase = next;
                continue;
            }
            self.level = (from + (to - from) * self.clock / dur).clamp(0.0, 1.0);
            return;
        }
    }
}
