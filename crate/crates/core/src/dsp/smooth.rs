use std::f64::consts::TAU;

/// One-pole low-pass used to smooth control signals.
///
/// `y[n] = c1*x + c2*y[n-1]` with `b = 2 - cos(2*pi*fc/fs)`,
/// `c2 = b - sqrt(b^2 - 1)`, `c1 = 1 - c2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct OnePole {
    y: f64,
    c1: f64,
    c2: f64,
    cutoff: f64,
    rate: f64,
}

impl OnePole {
    pub fn new(initial: f64) -> Self {
        Self {
            y: initial,
            c1: 0.0,
            c2: 1.0,
            cutoff: 0.0,
            rate: 0.0,
        }
    }

    pub fn value(&self) -> f64 {
        self.y
    }

    pub fn reset(&mut self, value: f64) {
        self.y = value;
    }

    fn update_coeffs(&mut self, cutoff: f64, update_rate: f64) {
        if cutoff == self.cutoff && update_rate == self.rate {
            return;
        }
        self.cutoff = cutoff;
        self.rate = update_rate;
        let nyquist = update_rate * 0.5;
        let fc = cutoff.max(0.0).min(nyquist * (1.0 - 1e-9));
        let b = 2.0 - (TAU * fc / update_rate).cos();
        self.c2 = b - (b * b - 1.0).max(0.0).sqrt();
        self.c1 = 1.0 - self.c2;
    }

    /// Feeds one value at `update_rate` Hz. Cutoffs at or above Nyquist are clamped just below it.
    #[inline]
    pub fn tick(&mut self, x: f64, cutoff: f64, update_rate: f64) -> f64 {
        self.update_coeffs(cutoff, update_rate);
        self.y = self.c1 * x + self.c2 * self.y;
        self.y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converges_to_constant_input() {
        let mut f = OnePole::new(0.0);
        let mut y = 0.0;
        for _ in 0..20_000 {
            y = f.tick(0.7, 5.0, 1000.0);
        }
        assert!((y - 0.7).abs() < 1e-9);
    }

    #[test]
    fn zero_cutoff_freezes() {
        let mut f = OnePole::new(0.25);
        for _ in 0..100 {
            assert_eq!(f.tick(1.0, 0.0, 1000.0), 0.25);
        }
    }

    #[test]
    fn step_response_time_constant() {
        // An RC low-pass at fc reaches 1 - 1/e after tau = 1/(2*pi*fc).
        let rate = 1000.0;
        let mut f = OnePole::new(0.0);
        let mut n = 0;
        while f.tick(1.0, 1.0, rate) < 1.0 - (-1.0f64).exp() {
            n += 1;
        }
        let t = (n + 1) as f64 / rate;
        let tau = 1.0 / TAU;
        assert!((t - tau).abs() / tau < 0.1, "t={t} tau={tau}");
    }

    #[test]
    fn clamps_at_nyquist() {
        let mut f = OnePole::new(0.0);
        let y = f.tick(1.0, 10_000.0, 1000.0);
        assert!(y.is_finite() && y > 0.0 && y <= 1.0);
    }
}
