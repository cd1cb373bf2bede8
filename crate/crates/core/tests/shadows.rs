use gloam_core::analysis::{argmax_in, bin_width, blackman_harris, interpolated_peak, magnitude_spectrum};
use gloam_core::engine::Engine;
use gloam_core::params::{Param, ParamSet};
use gloam_core::shadows::Shadows;

const SR: f64 = 48_000.0;

fn dry_unison() -> ParamSet {
    let mut s = ParamSet::default();
    s.set(Param::ShDetune, 0.0);
    s.set(Param::ShWidth, 0.0);
    s.set(Param::ShDelaySend, 0.0);
    s.set(Param::ShReverbSend, 0.0);
    s.set(Param::ShCutoff, 1.0);
    s.set(Param::ShFilterEnvAmount, 0.0);
    s
}

#[test]
fn rendered_pitch_within_half_cent() {
    let n = 1 << 17;
    let window = blackman_harris(n);
    for note in [36u8, 57, 60, 69, 84, 96] {
        let mut e = Shadows::with_param_set(SR, 0, &dry_unison());
        e.note_on(note, 1.0);
        // Skip the attack.
        e.render(4800);
        let b = e.render(n);
        let x: Vec<f64> = b.left.iter().map(|&s| f64::from(s)).collect();
        let mag = magnitude_spectrum(&x, &window);
        let want = 440.0 * 2f64.powf((f64::from(note) - 69.0) / 12.0);
        let bw = bin_width(n, SR);
        let k = (want / bw).round() as usize;
        let peak = argmax_in(&mag, k - 3, k + 4);
        let got = interpolated_peak(&mag, peak) * bw;
        let cents = 1200.0 * (got / want).log2();
        assert!(cents.abs() < 0.5, "note {note}: {got} Hz vs {want} Hz ({cents:.3} cents)");
    }
}

#[test]
fn sixteen_held_notes_use_every_voice() {
    let mut e = Shadows::new(SR, 0);
    for n in 0..16u8 {
        e.note_on(48 + n, 0.5);
    }
    let b = e.render(4800);
    assert_eq!(e.active_voices(), 16);
    assert!(b.is_finite());
}
