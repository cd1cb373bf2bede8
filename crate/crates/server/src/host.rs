//! The audio-thread side: both engines, the command mailbox they drain at
//! control-block boundaries, and the meter ring they fill.
//!
//! Nothing reachable from [`AudioHost::process`] allocates, locks or does I/O.

use std::sync::Arc;
use std::thread;

use crossbeam_queue::ArrayQueue;
use gloam_core::dsp::CONTROL_BLOCK;
use gloam_core::engine::Engine;
use gloam_core::params::{EngineKind, Param, ParamSet};
use gloam_core::shadows::Shadows;
use gloam_core::wintermute::Wintermute;
use thiserror::Error;

pub const MAILBOX_CAPACITY: usize = 4096;
pub const METER_RATE_HZ: f64 = 30.0;
/// Floor reported for silence.
pub const METER_FLOOR_DB: f64 = -120.0;
const METER_QUEUE: usize = 64;

/// Pre-validated updates for the audio thread. `Copy` so the queue never
/// owns heap data.
#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    SetParam { param: Param, value: f64 },
    NoteOn { note: u8, velocity: f64 },
    NoteOff { note: u8 },
    AllNotesOff,
    /// Swaps every parameter and the active engine at one block boundary.
    Load { engine: EngineKind, params: ParamSet },
    SelectEngine(EngineKind),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Meter {
    pub rms_db: [f64; 2],
    pub peak_db: [f64; 2],
    pub voice_count: usize,
    /// Frames rendered when the window closed.
    pub frame: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("audio host has shut down")]
pub struct Disconnected;

/// Producer end of the command queue.
#[derive(Clone)]
pub struct Mailbox {
    queue: Arc<ArrayQueue<Command>>,
}

impl Mailbox {
    /// Queues a command, waiting for room if the audio thread is behind.
    /// Commands are never dropped.
    pub fn send(&self, mut cmd: Command) -> Result<(), Disconnected> {
        loop {
            match self.queue.push(cmd) {
                Ok(()) => return Ok(()),
                Err(back) => {
                    if Arc::strong_count(&self.queue) == 1 {
                        return Err(Disconnected);
                    }
                    cmd = back;
                    thread::yield_now();
                }
            }
        }
    }

    pub fn pending(&self) -> usize {
        self.queue.len()
    }

    /// Blocks until the audio thread has taken every queued command.
    pub fn flush(&self) -> Result<(), Disconnected> {
        while !self.queue.is_empty() {
            if Arc::strong_count(&self.queue) == 1 {
                return Err(Disconnected);
            }
            thread::yield_now();
        }
        Ok(())
    }
}

/// Consumer end of the meter ring.
pub struct MeterReader {
    queue: Arc<ArrayQueue<Meter>>,
}

impl MeterReader {
    /// Most recent meter, discarding older ones.
    pub fn latest(&self) -> Option<Meter> {
        let mut last = None;
        while let Some(m) = self.queue.pop() {
            last = Some(m);
        }
        last
    }

    pub fn pop(&self) -> Option<Meter> {
        self.queue.pop()
    }
}

pub struct AudioHost {
    wintermute: Wintermute,
    shadows: Shadows,
    active: EngineKind,
    commands: Arc<ArrayQueue<Command>>,
    meters: Arc<ArrayQueue<Meter>>,
    block_pos: usize,
    frames: u64,
    meter_window: usize,
    meter_len: usize,
    sum_sq: [f64; 2],
    peak: [f32; 2],
}

impl AudioHost {
    pub fn new(
        sample_rate: f64,
        seed: u64,
        engine: EngineKind,
        params: &ParamSet,
    ) -> (AudioHost, Mailbox, MeterReader) {
        let commands = Arc::new(ArrayQueue::new(MAILBOX_CAPACITY));
        let meters = Arc::new(ArrayQueue::new(METER_QUEUE));
        let host = AudioHost {
            wintermute: Wintermute::with_param_set(sample_rate, seed, params),
            shadows: Shadows::with_param_set(sample_rate, seed, params),
            active: engine,
            commands: commands.clone(),
            meters: meters.clone(),
            block_pos: 0,
            frames: 0,
            meter_window: (sample_rate / METER_RATE_HZ).round().max(1.0) as usize,
            meter_len: 0,
            sum_sq: [0.0; 2],
            peak: [0.0; 2],
        };
        (host, Mailbox { queue: commands }, MeterReader { queue: meters })
    }

    pub fn active_engine(&self) -> EngineKind {
        self.active
    }

    /// Parameters as applied on the audio thread.
    pub fn params(&self) -> &ParamSet {
        self.shadows.params()
    }

    pub fn sample_rate(&self) -> f64 {
        self.shadows.sample_rate()
    }

    pub fn frames_rendered(&self) -> u64 {
        self.frames
    }

    pub fn engine(&self) -> &dyn Engine {
        match self.active {
            EngineKind::Wintermute => &self.wintermute,
            EngineKind::Shadows => &self.shadows,
        }
    }

    fn engine_mut(&mut self) -> &mut dyn Engine {
        match self.active {
            EngineKind::Wintermute => &mut self.wintermute,
            EngineKind::Shadows => &mut self.shadows,
        }
    }

    /// The audio callback: renders `left.len()` frames, applying queued
    /// commands at each control-block boundary.
    pub fn process(&mut self, left: &mut [f32], right: &mut [f32]) {
        let n = left.len().min(right.len());
        let mut pos = 0;
        while pos < n {
            if self.block_pos == 0 {
                self.drain();
            }
            let len = (CONTROL_BLOCK - self.block_pos).min(n - pos);
            let (l, r) = (&mut left[pos..pos + len], &mut right[pos..pos + len]);
            self.engine_mut().process(l, r);
            self.meter(pos, len, left, right);
            self.block_pos = (self.block_pos + len) % CONTROL_BLOCK;
            self.frames += len as u64;
            pos += len;
        }
    }

    fn drain(&mut self) {
        // Bounded so a flood of commands cannot stall one block indefinitely.
        for _ in 0..MAILBOX_CAPACITY {
            match self.commands.pop() {
                Some(cmd) => self.apply(cmd),
                None => break,
            }
        }
    }

    fn apply(&mut self, cmd: Command) {
        match cmd {
            Command::SetParam { param, value } => {
                self.wintermute.set_param(param, value);
                self.shadows.set_param(param, value);
            }
            Command::NoteOn { note, velocity } => {
                if self.active == EngineKind::Shadows {
                    self.shadows.note_on(note, velocity);
                }
            }
            Command::NoteOff { note } => self.shadows.note_off(note),
            Command::AllNotesOff => self.shadows.all_notes_off(),
            Command::Load { engine, params } => {
                self.wintermute.load_params(&params);
                self.shadows.load_params(&params);
                self.select(engine);
            }
            Command::SelectEngine(engine) => self.select(engine),
        }
    }

    fn select(&mut self, engine: EngineKind) {
        if engine != self.active && self.active == EngineKind::Shadows {
            self.shadows.all_notes_off();
        }
        self.active = engine;
    }

    fn meter(&mut self, pos: usize, len: usize, left: &[f32], right: &[f32]) {
        for i in pos..pos + len {
            for (ch, s) in [left[i], right[i]].into_iter().enumerate() {
                self.sum_sq[ch] += f64::from(s) * f64::from(s);
                self.peak[ch] = self.peak[ch].max(s.abs());
            }
            self.meter_len += 1;
            if self.meter_len == self.meter_window {
                let count = self.meter_len as f64;
                let m = Meter {
                    rms_db: self.sum_sq.map(|s| to_dbfs((s / count).sqrt())),
                    peak_db: self.peak.map(|p| to_dbfs(f64::from(p))),
                    voice_count: self.engine().active_voices(),
                    frame: self.frames + (i - pos + 1) as u64,
                };
                self.meters.force_push(m);
                self.meter_len = 0;
                self.sum_sq = [0.0; 2];
                self.peak = [0.0; 2];
            }
        }
    }
}

fn to_dbfs(x: f64) -> f64 {
    if x > 0.0 {
        (20.0 * x.log10()).max(METER_FLOOR_DB)
    } else {
        METER_FLOOR_DB
    }
}
