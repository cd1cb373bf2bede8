use super::flush_denormal;

const COMB_MS: [f64; 4] = [29.7, 37.1, 41.1, 43.7];
const ALLPASS_MS: [f64; 2] = [5.0, 1.7];
const ALLPASS_GAIN: f64 = 0.7;
const COMB_OUTPUT: f64 = 0.25;

/// Reverb time in seconds for a room knob in `[0, 1]`.
pub fn rt60_for_room(room: f64) -> f64 {
    0.5 + 4.5 * room.clamp(0.0, 1.0)
}

#[derive(Debug, Clone)]
struct Line {
    buf: Vec<f64>,
    pos: usize,
}

impl Line {
    fn new(len: usize) -> Self {
        Self {
            buf: vec![0.0; len.max(1)],
            pos: 0,
        }
    }

    #[inline]
    fn read(&self) -> f64 {
        self.buf[self.pos]
    }

    #[inline]
    fn write_advance(&mut self, v: f64) {
        self.buf[self.pos] = flush_denormal(v);
        self.pos += 1;
        if self.pos == self.buf.len() {
            self.pos = 0;
        }
    }

    fn clear(&mut self) {
        self.buf.fill(0.0);
        self.pos = 0;
    }
}

#[derive(Debug, Clone)]
struct Channel {
    combs: [Line; 4],
    allpasses: [Line; 2],
}

impl Channel {
    fn new(sample_rate: f64) -> Self {
        let len = |ms: f64| (ms * 1e-3 * sample_rate).round() as usize;
        Self {
            combs: COMB_MS.map(|ms| Line::new(len(ms))),
            allpasses: ALLPASS_MS.map(|ms| Line::new(len(ms))),
        }
    }

    #[inline]
    fn tick(&mut self, x: f64, gains: &[f64; 4]) -> f64 {
        let mut sum = 0.0;
        for (comb, g) in self.combs.iter_mut().zip(gains) {
            let y = comb.read();
            comb.write_advance(x + g * y);
            sum += y;
        }
        let mut v = sum * COMB_OUTPUT;
        for ap in &mut self.allpasses {
            let delayed = ap.read();
            let w = v + ALLPASS_GAIN * delayed;
            ap.write_advance(w);
            v = delayed - ALLPASS_GAIN * w;
        }
        v
    }
}

/// Four parallel feedback combs into two series allpasses, one network per channel.
#[derive(Debug, Clone)]
pub struct SchroederReverb {
    channels: [Channel; 2],
    gains: [f64; 4],
    room: f64,
    sample_rate: f64,
}

impl SchroederReverb {
    pub fn new(sample_rate: f64) -> Self {
        let mut r = Self {
            channels: [Channel::new(sample_rate), Channel::new(sample_rate)],
            gains: [0.0; 4],
            room: f64::NAN,
            sample_rate,
        };
        r.set_room(0.5);
        r
    }

    /// Comb feedback `g = 10^(-3 * delay / RT60)` so each comb falls 60 dB in RT60.
    pub fn set_room(&mut self, room: f64) {
        let room = room.clamp(0.0, 1.0);
        if room == self.room {
            return;
        }
        self.room = room;
        let rt60 = rt60_for_room(room);
        for (g, line) in self.gains.iter_mut().zip(&self.channels[0].combs) {
            let delay = line.buf.len() as f64 / self.sample_rate;
            *g = 10f64.powf(-3.0 * delay / rt60);
        }
    }

    pub fn comb_gains(&self) -> [f64; 4] {
        self.gains
    }

    pub fn clear(&mut self) {
        for ch in &mut self.channels {
            ch.combs.iter_mut().for_each(Line::clear);
            ch.allpasses.iter_mut().for_each(Line::clear);
        }
    }

    #[inline]
    pub fn process_frame(&mut self, input: (f64, f64), room: f64, mix: f64) -> (f64, f64) {
        self.set_room(room);
        let mix = mix.clamp(0.0, 1.0);
        let gains = self.gains;
        let wet_l = self.channels[0].tick(input.0, &gains);
        let wet_r = self.channels[1].tick(input.1, &gains);
        if mix == 0.0 {
            return input;
        }
        (
            (1.0 - mix) * input.0 + mix * wet_l,
            (1.0 - mix) * input.1 + mix * wet_r,
        )
    }

    pub fn process(&mut self, left: &mut [f64], right: &mut [f64], room: f64, mix: f64) {
        for (l, r) in left.iter_mut().zip(right.iter_mut()) {
            (*l, *r) = self.process_frame((*l, *r), room, mix);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SR: f64 = 48_000.0;

    #[test]
    fn dry_mix_passes_input() {
        let mut rv = SchroederReverb::new(SR);
        let mut l: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.1).sin()).collect();
        let mut r = l.clone();
        let l0 = l.clone();
        rv.process(&mut l, &mut r, 0.8, 0.0);
        assert_eq!(l, l0);
        assert_eq!(r, l0);
    }

    #[test]
    fn energy_decay_matches_rt60() {
        // Oracle: Schroeder backward integration of the impulse response.
        for room in [0.0, 0.5, 1.0] {
            let rt60 = rt60_for_room(room);
            let mut rv = SchroederReverb::new(SR);
            let n = ((rt60 + 1.0) * SR) as usize;
            let h: Vec<f64> = (0..n)
                .map(|i| {
                    let x = if i == 0 { 1.0 } else { 0.0 };
                    rv.process_frame((x, x), room, 1.0).0
                })
                .collect();
            let mut edc = vec![0.0; n + 1];
            for i in (0..n).rev() {
                edc[i] = edc[i + 1] + h[i] * h[i];
            }
            let at = (rt60 * SR) as usize;
            let drop = 10.0 * (edc[0] / edc[at]).log10();
            assert!((55.0..=65.0).contains(&drop), "room {room}: {drop} dB");
        }
    }

    #[test]
    fn gains_below_one() {
        let mut rv = SchroederReverb::new(44_100.0);
        for room in [0.0, 0.3, 1.0, 5.0] {
            rv.set_room(room);
            assert!(rv.comb_gains().iter().all(|g| g.abs() < 1.0));
        }
    }

    #[test]
    fn bounded_for_bounded_input() {
        let mut rv = SchroederReverb::new(SR);
        let mut peak: f64 = 0.0;
        for i in 0..(SR as usize * 3) {
            let x = if (i / 50) % 2 == 0 { 1.0 } else { -1.0 };
            let (l, r) = rv.process_frame((x, x), 1.0, 1.0);
            peak = peak.max(l.abs()).max(r.abs());
        }
        assert!(peak.is_finite() && peak < 50.0, "{peak}");
    }
}
