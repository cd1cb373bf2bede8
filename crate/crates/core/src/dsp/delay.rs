use super::flush_denormal;

pub const MAX_DELAY_SECONDS: f64 = 5.0;
const MAX_FEEDBACK: f64 = 0.999;

/// Stereo feedback delay. The line stores `in + feedback * wet`, so the wet
/// tap is `wet[n] = in[n-T] + feedback * wet[n-T]`.
#[derive(Debug, Clone)]
pub struct FeedbackDelay {
    left: Vec<f64>,
    right: Vec<f64>,
    pos: usize,
    sample_rate: f64,
}

impl FeedbackDelay {
    pub fn new(sample_rate: f64) -> Self {
        let len = (MAX_DELAY_SECONDS * sample_rate).ceil() as usize + 1;
        Self {
            left: vec![0.0; len],
            right: vec![0.0; len],
            pos: 0,
            sample_rate,
        }
    }

    pub fn clear(&mut self) {
        self.left.fill(0.0);
        self.right.fill(0.0);
        self.pos = 0;
    }

    /// Delay in whole samples for `time` seconds, kept within the line.
    pub fn delay_samples(&self, time: f64) -> usize {
        let t = if time.is_finite() { time } else { 0.0 };
        ((t * self.sample_rate).round() as usize).clamp(1, self.left.len() - 1)
    }

    #[inline]
    pub fn process_frame(
        &mut self,
        input: (f64, f64),
        time: f64,
        feedback: f64,
        mix: f64,
    ) -> (f64, f64) {
        let len = self.left.len();
        let delay = self.delay_samples(time);
        let feedback = feedback.clamp(0.0, MAX_FEEDBACK);
        let mix = mix.clamp(0.0, 1.0);
        let read = (self.pos + len - delay) % len;
        let wet_l = self.left[read];
        let wet_r = self.right[read];
        self.left[self.pos] = flush_denormal(input.0 + feedback * wet_l);
        self.right[self.pos] = flush_denormal(input.1 + feedback * wet_r);
        self.pos = (self.pos + 1) % len;
        if mix == 0.0 {
            return input;
        }
        (
            (1.0 - mix) * input.0 + mix * wet_l,
            (1.0 - mix) * input.1 + mix * wet_r,
        )
    }

    pub fn process(
        &mut self,
        left: &mut [f64],
        right: &mut [f64],
        time: f64,
        feedback: f64,
        mix: f64,
    ) {
        for (l, r) in left.iter_mut().zip(right.iter_mut()) {
            (*l, *r) = self.process_frame((*l, *r), time, feedback, mix);
        }
    }
}
