//! Null-audio output: a thread that calls the host like a device would,
//! paced by the wall clock or as fast as possible, discarding the audio
//! (optionally keeping the most recent frames in a ring).

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::thread::{self, JoinHandle};
use std::time::{Duration, Instant};

use crossbeam_queue::ArrayQueue;

use crate::host::AudioHost;

pub const DEFAULT_BUFFER_FRAMES: usize = 256;
pub const MAX_BUFFER_FRAMES: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pacing {
    /// One buffer per buffer-duration of wall time, like a sound card.
    RealTime,
    /// Back to back; for tests.
    FreeRunning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CallbackPhase {
    Enter,
    Exit,
}

#[derive(Debug, Clone, Copy)]
pub struct DriverConfig {
    pub buffer_frames: usize,
    pub pacing: Pacing,
    /// Keep this many of the most recent output frames readable through [`NullAudio::tap`].
    pub tap_frames: usize,
    /// Called on the audio thread immediately around every host callback.
    pub callback_hook: Option<fn(CallbackPhase)>,
}

impl Default for DriverConfig {
    fn default() -> Self {
        Self {
            buffer_frames: DEFAULT_BUFFER_FRAMES,
            pacing: Pacing::RealTime,
            tap_frames: 0,
            callback_hook: None,
        }
    }
}

/// Reader for the most recent output frames.
pub struct OutputTap {
    queue: Arc<ArrayQueue<[f32; 2]>>,
}

impl OutputTap {
    /// Takes the buffered frames, oldest first.
    pub fn drain(&self) -> Vec<[f32; 2]> {
        let mut out = Vec::with_capacity(self.queue.len());
        while let Some(f) = self.queue.pop() {
            out.push(f);
        }
        out
    }
}

pub struct NullAudio {
    running: Arc<AtomicBool>,
    callbacks: Arc<AtomicU64>,
    tap: Option<Arc<ArrayQueue<[f32; 2]>>>,
    thread: Option<JoinHandle<AudioHost>>,
}

impl NullAudio {
    pub fn start(mut host: AudioHost, config: DriverConfig) -> NullAudio {
        let frames = config.buffer_frames.clamp(1, MAX_BUFFER_FRAMES);
        let running = Arc::new(AtomicBool::new(true));
        let callbacks = Arc::new(AtomicU64::new(0));
        let tap = (config.tap_frames > 0).then(|| Arc::new(ArrayQueue::new(config.tap_frames)));
        let thread = {
            let running = running.clone();
            let callbacks = callbacks.clone();
            let tap = tap.clone();
            thread::Builder::new()
                .name("gloam-audio".into())
                .spawn(move || {
                    let mut left = vec![0.0f32; frames];
                    let mut right = vec![0.0f32; frames];
                    let buffer_time = Duration::from_secs_f64(frames as f64 / host.sample_rate());
                    let mut deadline = Instant::now();
                    while running.load(Ordering::Acquire) {
                        if let Some(hook) = config.callback_hook {
                            hook(CallbackPhase::Enter);
                        }
                        host.process(&mut left, &mut right);
                        if let Some(tap) = &tap {
                            for (&l, &r) in left.iter().zip(&right) {
                                tap.force_push([l, r]);
                            }
                        }
                        if let Some(hook) = config.callback_hook {
                            hook(CallbackPhase::Exit);
                        }
                        callbacks.fetch_add(1, Ordering::Release);
                        if config.pacing == Pacing::RealTime {
                            deadline += buffer_time;
                            let now = Instant::now();
                            if deadline > now {
                                thread::sleep(deadline - now);
                            } else if now - deadline > buffer_time * 8 {
                                // Fell far behind (suspended?); resync instead of bursting.
                                deadline = now;
                            }
                        }
                    }
                    host
                })
                .expect("spawning the audio thread")
        };
        NullAudio {
            running,
            callbacks,
            tap,
            thread: Some(thread),
        }
    }

    /// Host callbacks completed so far.
    pub fn callbacks(&self) -> u64 {
        self.callbacks.load(Ordering::Acquire)
    }

    pub fn tap(&self) -> Option<OutputTap> {
        self.tap.clone().map(|queue| OutputTap { queue })
    }

    /// Stops the audio thread and hands back the host.
    pub fn stop(mut self) -> AudioHost {
        self.halt().expect("audio thread still owned")
    }

    fn halt(&mut self) -> Option<AudioHost> {
        self.running.store(false, Ordering::Release);
        self.thread.take().map(|t| t.join().expect("audio thread panicked"))
    }
}

impl Drop for NullAudio {
    fn drop(&mut self) {
        self.halt();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::host::Command;
    use gloam_core::params::{EngineKind, ParamSet};

    #[test]
    fn real_time_pacing_tracks_the_clock() {
        let (host, _, _) = AudioHost::new(48_000.0, 0, EngineKind::Shadows, &ParamSet::default());
        let driver = NullAudio::start(host, DriverConfig::default());
        thread::sleep(Duration::from_millis(200));
        let host = driver.stop();
        let seconds = host.frames_rendered() as f64 / 48_000.0;
        assert!((0.15..0.4).contains(&seconds), "{seconds}");
    }

    #[test]
    fn tap_keeps_latest_output() {
        let (host, tx, _) = AudioHost::new(48_000.0, 0, EngineKind::Shadows, &ParamSet::default());
        tx.send(Command::NoteOn {
            note: 60,
            velocity: 1.0,
        })
        .unwrap();
        let driver = NullAudio::start(
            host,
            DriverConfig {
                pacing: Pacing::FreeRunning,
                tap_frames: 512,
                ..Default::default()
            },
        );
        let tap = driver.tap().unwrap();
        while driver.callbacks() < 20 {
            thread::yield_now();
        }
        let host = driver.stop();
        assert!(host.frames_rendered() >= 20 * DEFAULT_BUFFER_FRAMES as u64);
        let frames = tap.drain();
        assert_eq!(frames.len(), 512);
        assert!(frames.iter().any(|f| f[0] != 0.0));
    }
}
