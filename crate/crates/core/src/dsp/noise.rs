use super::{invalid, DspError, RngStream};

/// Shortest interval the Gaussian trigger will ever schedule.
pub const TRIGGER_FLOOR_SECONDS: f64 = 0.001;

/// `n` uniform samples in `[-1, 1]`.
pub fn white_noise(rng: &mut RngStream, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.bipolar()).collect()
}

/// Draws the time until the next trigger of a Gaussian-jittered clock
/// running at `avg_rate` Hz. `dev` scales the normal deviate relative to the
/// mean period; `dev = 0` is a plain periodic clock.
pub fn gauss_trigger_next(rng: &mut RngStream, avg_rate: f64, dev: f64) -> Result<f64, DspError> {
    if avg_rate.is_nan() || avg_rate <= 0.0 || avg_rate.is_infinite() {
        return Err(invalid("avg_rate", format!("must be > 0, got {avg_rate}")));
    }
    if dev.is_nan() || dev < 0.0 {
        return Err(invalid("dev", format!("must be >= 0, got {dev}")));
    }
    let g = if dev == 0.0 { 0.0 } else { rng.standard_normal() };
    Ok(((1.0 + dev * g) / avg_rate).max(TRIGGER_FLOOR_SECONDS))
}
