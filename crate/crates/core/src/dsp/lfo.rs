use std::f64::consts::TAU;

use super::{invalid, DspError, RngStream};

/// `0.5 * (1 + sin(2*pi*(rate*t + phase0)))`, always in `[0, 1]`.
#[inline]
pub fn unipolar_sine_lfo(rate: f64, phase0: f64, t: f64) -> f64 {
    0.5 * (1.0 + (TAU * (rate * t + phase0)).sin())
}

/// Phase-accumulating form of [`unipolar_sine_lfo`] for time-varying rates.
#[derive(Debug, Clone, Copy, Default)]
pub struct SineLfo {
    phase: f64,
}

impl SineLfo {
    pub fn new(phase0: f64) -> Self {
        Self {
            phase: phase0.rem_euclid(1.0),
        }
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn value(&self) -> f64 {
        unipolar_sine_lfo(0.0, self.phase, 0.0)
    }

    /// Returns the current value, then advances by `rate * dt` cycles.
    #[inline]
    pub fn tick(&mut self, rate: f64, dt: f64) -> f64 {
        let v = self.value();
        self.phase = (self.phase + rate.max(0.0) * dt).rem_euclid(1.0);
        v
    }
}

/// Sample-and-hold of uniform draws, redrawn `rate` times per second.
#[derive(Debug, Clone, Copy)]
pub struct SampleHold {
    value: f64,
    phase: f64,
}

impl SampleHold {
    pub fn new(rng: &mut RngStream, lo: f64, hi: f64) -> Result<Self, DspError> {
        check_range(lo, hi)?;
        Ok(Self {
            value: rng.uniform(lo, hi),
            phase: 0.0,
        })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Advances by `dt` seconds. A redraw happens each time the internal
    /// clock crosses a multiple of `1/rate`; `rate = 0` holds forever.
    #[inline]
    pub fn tick(
        &mut self,
        rng: &mut RngStream,
        lo: f64,
        hi: f64,
        rate: f64,
        dt: f64,
    ) -> Result<f64, DspError> {
        check_range(lo, hi)?;
        if rate < 0.0 {
            return Err(invalid("rate", format!("must be >= 0, got {rate}")));
        }
        self.phase += rate * dt;
        if self.phase >= 1.0 {
            self.phase -= self.phase.floor();
            self.value = rng.uniform(lo, hi);
        }
        Ok(self.value)
    }
}

fn check_range(lo: f64, hi: f64) -> Result<(), DspError> {
    if lo > hi || lo.is_nan() || hi.is_nan() {
        return Err(invalid("range", format!("lo {lo} > hi {hi}")));
    }
    Ok(())
}
