use serde::{Deserialize, Serialize};

/// Default control block: modulators and parameters update once per 16 samples.
pub const CONTROL_BLOCK: usize = 16;

/// Number of samples over which control values are held constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlRate(usize);

impl ControlRate {
    pub fn new(block: usize) -> Option<Self> {
        (block > 0).then_some(Self(block))
    }

    pub fn block(self) -> usize {
        self.0
    }

    /// Control updates per second at the given sample rate.
    pub fn hz(self, sample_rate: f64) -> f64 {
        sample_rate / self.0 as f64
    }

    /// True when `buffer` frames split into whole control blocks.
    pub fn divides(self, buffer: usize) -> bool {
        buffer.is_multiple_of(self.0)
    }
}

impl Default for ControlRate {
    fn default() -> Self {
        Self(CONTROL_BLOCK)
    }
}

/// Stereo buffer with its sample rate. Channels are stored separately.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBlock {
    pub left: Vec<f32>,
    pub right: Vec<f32>,
    pub sample_rate: f64,
}

impl AudioBlock {
    pub fn silent(frames: usize, sample_rate: f64) -> Self {
        Self {
            left: vec![0.0; frames],
            right: vec![0.0; frames],
            sample_rate,
        }
    }

    pub fn frames(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.frames() as f64 / self.sample_rate
    }

    pub fn is_finite(&self) -> bool {
        self.left.iter().chain(&self.right).all(|s| s.is_finite())
    }

    pub fn append(&mut self, other: &AudioBlock) {
        self.left.extend_from_slice(&other.left);
        self.right.extend_from_slice(&other.right);
    }

    /// Per-channel RMS over the whole block.
    pub fn rms(&self) -> (f64, f64) {
        fn rms(x: &[f32]) -> f64 {
            if x.is_empty() {
                return 0.0;
            }
            (x.iter().map(|&s| f64::from(s) * f64::from(s)).sum::<f64>() / x.len() as f64).sqrt()
        }
        (rms(&self.left), rms(&self.right))
    }

    pub fn peak(&self) -> f32 {
        self.left
            .iter()
            .chain(&self.right)
            .fold(0.0f32, |m, s| m.max(s.abs()))
    }

    /// Interleaves into L,R,L,R,...
    pub fn interleaved(&self) -> Vec<f32> {
        self.left
            .iter()
            .zip(&self.right)
            .flat_map(|(&l, &r)| [l, r])
            .collect()
    }
}
