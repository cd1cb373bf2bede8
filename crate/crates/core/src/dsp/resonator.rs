use std::f64::consts::TAU;

use super::{flush_denormal, DspError};

/// Most cascaded stages a single resonator holds.
pub const MAX_STAGES: usize = 4;

/// Two-pole resonator coefficients, normalized to unit gain at the peak.
///
/// `y[n] = c1*x[n] + c2*y[n-1] - c3*y[n-2]`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandpassCoeffs {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl BandpassCoeffs {
    /// Computes coefficients for center `cf` and bandwidth `bw` in Hz.
    /// Returns `true` alongside when `cf` had to be pulled into `(0, sr/2)`.
    pub fn new(cf: f64, bw: f64, sample_rate: f64) -> (Self, bool) {
        let nyquist = 0.5 * sample_rate;
        let lo = sample_rate * 1e-7;
        let hi = nyquist * (1.0 - 1e-7);
        let clamped = !(cf > 0.0 && cf < nyquist);
        let cf = if cf.is_nan() { lo } else { cf.clamp(lo, hi) };
        let bw = if bw > lo { bw } else { lo };

        let c3 = (-TAU * bw / sample_rate).exp();
        let c2 = 4.0 * c3 / (1.0 + c3) * (TAU * cf / sample_rate).cos();
        let c1 = (1.0 - c3) * (1.0 - c2 * c2 / (4.0 * c3)).sqrt();
        let coeffs = Self { c1, c2, c3 };
        debug_assert!(coeffs.is_stable(), "unstable resonator {coeffs:?}");
        (coeffs, clamped)
    }

    /// Poles strictly inside the unit circle.
    pub fn is_stable(&self) -> bool {
        self.c3.abs() < 1.0 && self.c2 * self.c2 < 4.0 * self.c3
    }
}

/// Cascade of identical two-pole resonators.
#[derive(Debug, Clone)]
pub struct ResonantBandpass {
    stages: usize,
    state: [[f64; 2]; MAX_STAGES],
    coeffs: BandpassCoeffs,
}

impl ResonantBandpass {
    pub fn new(stages: usize) -> Self {
        Self {
            stages: stages.clamp(1, MAX_STAGES),
            state: [[0.0; 2]; MAX_STAGES],
            coeffs: BandpassCoeffs {
                c1: 0.0,
                c2: 0.0,
                c3: 0.0,
            },
        }
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn coeffs(&self) -> BandpassCoeffs {
        self.coeffs
    }

    /// Retunes; returns `true` when the center frequency was clamped.
    pub fn set(&mut self, cf: f64, bw: f64, sample_rate: f64) -> bool {
        let (coeffs, clamped) = BandpassCoeffs::new(cf, bw, sample_rate);
        self.coeffs = coeffs;
        clamped
    }

    pub fn reset(&mut self) {
        self.state = [[0.0; 2]; MAX_STAGES];
    }

    /// Sum of squared filter state; zero once the filter has fully rung out.
    pub fn energy(&self) -> f64 {
        self.state[..self.stages]
            .iter()
            .map(|s| s[0] * s[0] + s[1] * s[1])
            .sum()
    }

    #[inline]
    pub fn tick(&mut self, x: f64) -> f64 {
        let BandpassCoeffs { c1, c2, c3 } = self.coeffs;
        let mut v = x;
        for s in &mut self.state[..self.stages] {
            let y = c1 * v + c2 * s[0] - c3 * s[1];
            s[1] = s[0];
            s[0] = flush_denormal(y);
            v = y;
        }
        v
    }

    /// Filters a block. NaN or infinite input is rejected before any state changes.
    pub fn process(&mut self, input: &[f64], output: &mut [f64]) -> Result<(), DspError> {
        if let Some(i) = input.iter().position(|x| !x.is_finite()) {
            return Err(DspError::NonFiniteInput(i));
        }
        for (y, &x) in output.iter_mut().zip(input) {
            *y = self.tick(x);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SR: f64 = 48_000.0;

    /// Steady-state amplitude of the filter's response to a unit sine.
    fn sine_gain(filter: &mut ResonantBandpass, freq: f64) -> f64 {
        let n = (SR * 2.0) as usize;
        let mut peak: f64 = 0.0;
        for i in 0..n {
            let y = filter.tick((TAU * freq * i as f64 / SR).sin());
            if i > n / 2 {
                peak = peak.max(y.abs());
            }
        }
        peak
    }

    fn db(x: f64) -> f64 {
        20.0 * x.log10()
    }

    #[test]
    fn unit_gain_at_center() {
        for &(cf, bw) in &[(1000.0, 100.0), (220.0, 5.0), (5000.0, 50.0)] {
            let mut f = ResonantBandpass::new(1);
            f.set(cf, bw, SR);
            let g = sine_gain(&mut f, cf);
            assert!(db(g).abs() < 0.5, "cf={cf} bw={bw} gain {} dB", db(g));
        }
    }

    #[test]
    fn two_stages_reject_off_center() {
        let (cf, bw) = (2000.0, 40.0);
        for f_test in [cf - 5.0 * bw, cf + 5.0 * bw] {
            let mut f = ResonantBandpass::new(2);
            f.set(cf, bw, SR);
            let g = sine_gain(&mut f, f_test);
            assert!(db(g) <= -12.0, "f={f_test}: {} dB", db(g));
        }
    }

    #[test]
    fn zero_in_zero_out() {
        let mut f = ResonantBandpass::new(2);
        f.set(500.0, 10.0, SR);
        let mut out = vec![1.0; 64];
        f.process(&[0.0; 64], &mut out).unwrap();
        assert!(out.iter().all(|&y| y == 0.0));
    }

    #[test]
    fn nan_input_rejected() {
        let mut f = ResonantBandpass::new(1);
        f.set(500.0, 10.0, SR);
        let mut out = vec![0.0; 3];
        assert_eq!(
            f.process(&[0.0, f64::NAN, 0.0], &mut out),
            Err(DspError::NonFiniteInput(1))
        );
    }

    #[test]
    fn out_of_band_center_is_clamped_and_flagged() {
        let mut f = ResonantBandpass::new(2);
        assert!(f.set(30_000.0, 100.0, SR));
        assert!(f.set(-5.0, 100.0, SR));
        assert!(!f.set(1000.0, 100.0, SR));
        assert!(f.coeffs().is_stable());
    }

    #[test]
    fn stable_over_parameter_grid() {
        for cf in [1.0, 20.0, 440.0, 10_000.0, 23_999.0] {
            for bw in [1e-4, 0.1, 10.0, 1000.0, 20_000.0] {
                let (c, _) = BandpassCoeffs::new(cf, bw, SR);
                assert!(c.is_stable(), "cf={cf} bw={bw} {c:?}");
                let mut f = ResonantBandpass::new(2);
                f.set(cf, bw, SR);
                let mut y = 0.0;
                for i in 0..10_000 {
                    y = f.tick(if i % 2 == 0 { 1.0 } else { -1.0 });
                }
                assert!(y.is_finite());
            }
        }
    }
}
