//! Spectral measurement helpers used by the test suites and the browser demo.

use std::f64::consts::TAU;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// 4-term Blackman-Harris window (about -92 dB sidelobes).
pub fn blackman_harris(n: usize) -> Vec<f64> {
    const A: [f64; 4] = [0.35875, 0.48829, 0.14128, 0.01168];
    let m = n.max(2) as f64;
    (0..n)
        .map(|i| {
            let x = TAU * i as f64 / m;
            A[0] - A[1] * x.cos() + A[2] * (2.0 * x).cos() - A[3] * (3.0 * x).cos()
        })
        .collect()
}

/// Windowed magnitude spectrum, bins `0..=n/2`.
pub fn magnitude_spectrum(signal: &[f64], window: &[f64]) -> Vec<f64> {
    let n = signal.len();
    let mut buf: Vec<Complex<f64>> = signal
        .iter()
        .zip(window.iter().chain(std::iter::repeat(&1.0)))
        .map(|(&x, &w)| Complex::new(x * w, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf[..=n / 2].iter().map(|c| c.norm()).collect()
}

/// Averaged power spectrum over Blackman-Harris segments of `seg` samples with 50% overlap.
pub fn welch_power(signal: &[f64], seg: usize) -> Vec<f64> {
    let window = blackman_harris(seg);
    let hop = (seg / 2).max(1);
    let mut acc = vec![0.0; seg / 2 + 1];
    let mut count = 0usize;
    let mut start = 0;
    while start + seg <= signal.len() {
        for (a, m) in acc
            .iter_mut()
            .zip(magnitude_spectrum(&signal[start..start + seg], &window))
        {
            *a += m * m;
        }
        count += 1;
        start += hop;
    }
    if count > 0 {
        acc.iter_mut().for_each(|a| *a /= count as f64);
    }
    acc
}

/// Hz per bin for an `n`-point transform.
pub fn bin_width(n: usize, sample_rate: f64) -> f64 {
    sample_rate / n as f64
}

/// Indices of local maxima whose magnitude is at least `floor`.
pub fn local_peaks(mag: &[f64], floor: f64) -> Vec<usize> {
    (1..mag.len().saturating_sub(1))
        .filter(|&i| mag[i] >= floor && mag[i] > mag[i - 1] && mag[i] >= mag[i + 1])
        .collect()
}

/// Index of the largest value in `mag[lo..=hi]`.
pub fn argmax_in(mag: &[f64], lo: usize, hi: usize) -> usize {
    let hi = hi.min(mag.len() - 1);
    (lo..=hi)
        .max_by(|&a, &b| mag[a].total_cmp(&mag[b]))
        .unwrap_or(lo)
}

/// Fractional bin of a peak from a parabola through the log magnitudes around `bin`.
pub fn interpolated_peak(mag: &[f64], bin: usize) -> f64 {
    if bin == 0 || bin + 1 >= mag.len() {
        return bin as f64;
    }
    let (a, b, c) = (
        mag[bin - 1].max(1e-300).ln(),
        mag[bin].max(1e-300).ln(),
        mag[bin + 1].max(1e-300).ln(),
    );
    let denom = a - 2.0 * b + c;
    if denom == 0.0 {
        return bin as f64;
    }
    bin as f64 + 0.5 * (a - c) / denom
}

pub fn to_db(x: f64) -> f64 {
    20.0 * x.max(1e-300).log10()
}
