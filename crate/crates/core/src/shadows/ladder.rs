use std::f64::consts::PI;

use crate::dsp::flush_denormal;

/// Feedback at resonance 1.0; 4.0 is the self-oscillation point.
const MAX_FEEDBACK: f64 = 3.9;

/// Linear four-pole ladder low-pass built from trapezoidal one-pole stages
/// with a resolved zero-delay feedback path.
#[derive(Debug, Clone, Copy, Default)]
pub struct LadderFilter {
    s: [f64; 4],
    g: f64,
    k: f64,
}

impl LadderFilter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reset(&mut self) {
        self.s = [0.0; 4];
    }

    /// `cutoff` in Hz (kept below Nyquist), `resonance` in `[0, 1]`.
    pub fn set(&mut self, cutoff: f64, resonance: f64, sample_rate: f64) {
        let fc = cutoff.clamp(1.0, 0.49 * sample_rate);
        let g = (PI * fc / sample_rate).tan();
        self.g = g / (1.0 + g);
        self.k = MAX_FEEDBACK * resonance.clamp(0.0, 1.0);
    }

    #[inline]
    pub fn tick(&mut self, x: f64) -> f64 {
        let g = self.g;
        let one_minus = 1.0 - g;
        // Each stage is y = g*x + (1-g)*s; fold the cascade into y4 = g^4*u + sigma.
        let b = self.s.map(|s| one_minus * s);
        let sigma = g * (g * (g * b[0] + b[1]) + b[2]) + b[3];
        let g4 = g * g * g * g;
        let u = (x - self.k * sigma) / (1.0 + self.k * g4);
        let mut v = u;
        for s in &mut self.s {
            let w = (v - *s) * g;
            let y = w + *s;
            *s = flush_denormal(y + w);
            v = y;
        }
        v
    }
}
