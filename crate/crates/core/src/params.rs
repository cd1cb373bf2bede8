//! The parameter registry: one descriptor per knob of either engine.
//!
//! Engines, preset files, the CLI and the live server all enumerate this
//! table; nothing else defines parameter ids, ranges or defaults.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Wintermute,
    Shadows,
}

impl EngineKind {
    pub const ALL: [EngineKind; 2] = [EngineKind::Wintermute, EngineKind::Shadows];

    pub fn as_str(self) -> &'static str {
        match self {
            EngineKind::Wintermute => "wintermute",
            EngineKind::Shadows => "shadows",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EngineKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wintermute" => Ok(EngineKind::Wintermute),
            "shadows" => Ok(EngineKind::Shadows),
            other => Err(format!("unknown engine {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Curve {
    Linear,
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamDescriptor {
    #[serde(skip)]
    pub param: Param,
    pub id: &'static str,
    pub name: &'static str,
    pub unit: &'static str,
    pub lo: f64,
    pub hi: f64,
    pub curve: Curve,
    pub default: f64,
    /// Values are rounded to whole numbers.
    pub integer: bool,
}

impl ParamDescriptor {
    pub fn engine(&self) -> EngineKind {
        if self.id.starts_with("wintermute.") {
            EngineKind::Wintermute
        } else {
            EngineKind::Shadows
        }
    }

    /// Clamps (and for integer params rounds) a plain value into range.
    /// NaN maps to the default.
    pub fn clamp(&self, v: f64) -> f64 {
        if v.is_nan() {
            return self.default;
        }
        let v = v.clamp(self.lo, self.hi);
        if self.integer {
            v.round()
        } else {
            v
        }
    }

    pub fn in_range(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }

    /// Knob position in `[0, 1]` for a plain value, through the declared curve.
    pub fn to_normalized(&self, v: f64) -> f64 {
        let v = self.clamp(v);
        match self.curve {
            Curve::Linear => (v - self.lo) / (self.hi - self.lo),
            Curve::Exponential => (v / self.lo).ln() / (self.hi / self.lo).ln(),
        }
    }

    /// Plain value for a knob position in `[0, 1]`.
    pub fn from_normalized(&self, n: f64) -> f64 {
        let n = if n.is_nan() { 0.0 } else { n.clamp(0.0, 1.0) };
        let v = match self.curve {
            Curve::Linear => self.lo + n * (self.hi - self.lo),
            Curve::Exponential => self.lo * (self.hi / self.lo).powf(n),
        };
        self.clamp(v)
    }
}

macro_rules! registry {
    ($( $variant:ident => $id:literal, $name:literal, $unit:literal,
        [$lo:expr, $hi:expr], $curve:ident, $default:expr $(, $int:ident)? ; )*) => {
        /// Index into [`REGISTRY`].
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        #[repr(u16)]
        pub enum Param {
            $($variant,)*
        }

        pub const PARAM_COUNT: usize = [$($id),*].len();

        pub static REGISTRY: [ParamDescriptor; PARAM_COUNT] = [
            $(ParamDescriptor {
                param: Param::$variant,
                id: $id,
                name: $name,
                unit: $unit,
                lo: $lo,
                hi: $hi,
                curve: Curve::$curve,
                default: $default,
                integer: registry!(@int $($int)?),
            },)*
        ];
    };
    (@int integer) => { true };
    (@int) => { false };
}

registry! {
    WmFundamental => "wintermute.fundamental", "Fundamental", "Hz", [20.0, 2000.0], Exponential, 55.0;
    WmOffset => "wintermute.offset", "Harmonic offset", "harmonics", [0.0, 16.0], Linear, 0.0;
    WmSpread => "wintermute.spread", "Spread", "x", [0.5, 2.0], Linear, 1.0;
    WmVoices => "wintermute.n_voices", "Voices", "voices", [1.0, 96.0], Linear, 96.0, integer;
    WmAvgRate => "wintermute.avg_rate", "Trigger rate", "Hz", [0.1, 400.0], Exponential, 8.0;
    WmDev => "wintermute.dev", "Trigger deviation", "", [0.0, 2.0], Linear, 0.5;
    WmAttack => "wintermute.attack", "Attack", "s", [0.001, 30.0], Exponential, 1.0;
    WmDecay => "wintermute.decay", "Decay", "s", [0.001, 30.0], Exponential, 2.0;
    WmAmpRand => "wintermute.amp_rand", "Level randomness", "", [0.0, 1.0], Linear, 0.3;
    WmEnvPitch => "wintermute.env_pitch_mod", "Envelope pitch mod", "st", [-24.0, 24.0], Linear, 0.0;
    WmDriftAmt => "wintermute.drift_amt", "Drift amount", "st", [0.0, 12.0], Linear, 0.5;
    WmDriftRate => "wintermute.drift_rate", "Drift smoothing", "Hz", [0.01, 50.0], Exponential, 0.5;
    WmResonance => "wintermute.resonance", "Resonance", "", [1.0, 1000.0], Exponential, 50.0;
    WmPanRate => "wintermute.pan_rate", "Pan rate", "Hz", [0.01, 20.0], Exponential, 0.2;
    WmDamp => "wintermute.damp", "Spectral tilt", "", [-1.0, 1.0], Linear, 0.0;
    WmDelayTime => "wintermute.delay_time", "Delay time", "s", [0.01, 5.0], Exponential, 0.5;
    WmDelayFeedback => "wintermute.delay_feedback", "Delay feedback", "", [0.0, 0.95], Linear, 0.4;
    WmDelaySend => "wintermute.delay_send", "Delay send", "", [0.0, 1.0], Linear, 0.2;
    WmReverbRoom => "wintermute.reverb_room", "Reverb room", "", [0.0, 1.0], Linear, 0.6;
    WmReverbSend => "wintermute.reverb_send", "Reverb send", "", [0.0, 1.0], Linear, 0.3;
    WmGain => "wintermute.gain_db", "Output gain", "dB", [-24.0, 96.0], Linear, 68.0;

    ShShape => "shadows.shape", "Shape", "", [0.0, 1.0], Linear, 0.0;
    ShDetune => "shadows.detune", "Detune", "", [0.0, 1.0], Linear, 0.5;
    ShWidth => "shadows.width", "Width", "", [0.0, 1.0], Linear, 0.5;
    ShVolume => "shadows.volume", "Volume", "", [0.0, 1.0], Linear, 0.7;
    ShCutoff => "shadows.cutoff", "Cutoff", "", [0.0, 1.0], Linear, 0.75;
    ShResonance => "shadows.resonance", "Resonance", "", [0.0, 1.0], Linear, 0.2;
    ShFilterEnvAmount => "shadows.filter_env_amount", "Filter env amount", "", [-1.0, 1.0], Linear, 0.3;
    ShAmpAttack => "shadows.amp_attack", "Amp attack", "", [0.0, 1.0], Linear, 0.0;
    ShAmpDecay => "shadows.amp_decay", "Amp decay", "", [0.0, 1.0], Linear, 0.2;
    ShAmpSustain => "shadows.amp_sustain", "Amp sustain", "", [0.0, 1.0], Linear, 0.8;
    ShAmpTime => "shadows.amp_time", "Amp T", "", [-1.0, 1.0], Linear, 0.0;
    ShAmpRelease => "shadows.amp_release", "Amp release", "", [0.0, 1.0], Linear, 0.1;
    ShFilterAttack => "shadows.filter_attack", "Filter attack", "", [0.0, 1.0], Linear, 0.0;
    ShFilterDecay => "shadows.filter_decay", "Filter decay", "", [0.0, 1.0], Linear, 0.25;
    ShFilterSustain => "shadows.filter_sustain", "Filter sustain", "", [0.0, 1.0], Linear, 0.3;
    ShFilterTime => "shadows.filter_time", "Filter T", "", [-1.0, 1.0], Linear, 0.0;
    ShFilterRelease => "shadows.filter_release", "Filter release", "", [0.0, 1.0], Linear, 0.15;
    ShDelayTime => "shadows.delay_time", "Delay time", "s", [0.01, 5.0], Exponential, 0.375;
    ShDelayFeedback => "shadows.delay_feedback", "Delay feedback", "", [0.0, 0.95], Linear, 0.3;
    ShDelaySend => "shadows.delay_send", "Delay send", "", [0.0, 1.0], Linear, 0.15;
    ShReverbRoom => "shadows.reverb_room", "Reverb room", "", [0.0, 1.0], Linear, 0.5;
    ShReverbSend => "shadows.reverb_send", "Reverb send", "", [0.0, 1.0], Linear, 0.2;
    ShPhaseSpread => "shadows.phase_spread", "Random phase", "", [0.0, 1.0], Linear, 0.0, integer;
}

impl Param {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn descriptor(self) -> &'static ParamDescriptor {
        &REGISTRY[self.index()]
    }

    pub fn id(self) -> &'static str {
        self.descriptor().id
    }

    pub fn from_index(i: usize) -> Option<Param> {
        REGISTRY.get(i).map(|d| d.param)
    }

    pub fn from_id(id: &str) -> Option<Param> {
        REGISTRY.iter().find(|d| d.id == id).map(|d| d.param)
    }
}

/// Descriptors belonging to one engine, in registry order.
pub fn descriptors(engine: EngineKind) -> impl Iterator<Item = &'static ParamDescriptor> {
    REGISTRY.iter().filter(move |d| d.engine() == engine)
}

/// Plain values for every registered parameter. Fixed-size and `Copy`, so it
/// can travel through the real-time mailbox.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSet {
    values: [f64; PARAM_COUNT],
}

impl Default for ParamSet {
    fn default() -> Self {
        Self {
            values: REGISTRY.map(|d| d.default),
        }
    }
}

impl ParamSet {
    #[inline]
    pub fn get(&self, p: Param) -> f64 {
        self.values[p.index()]
    }

    /// Stores the value clamped into range and returns what was stored.
    pub fn set(&mut self, p: Param, v: f64) -> f64 {
        let v = p.descriptor().clamp(v);
        self.values[p.index()] = v;
        v
    }

    pub fn values(&self) -> &[f64; PARAM_COUNT] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static ParamDescriptor, f64)> + '_ {
        REGISTRY.iter().zip(self.values.iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn ids_unique_and_indexed() {
        let mut seen = HashSet::new();
        for (i, d) in REGISTRY.iter().enumerate() {
            assert!(seen.insert(d.id), "duplicate {}", d.id);
            assert_eq!(d.param.index(), i);
            assert_eq!(Param::from_id(d.id), Some(d.param));
        }
    }

    #[test]
    fn defaults_within_range() {
        for d in &REGISTRY {
            assert!(d.lo < d.hi, "{}", d.id);
            assert!(d.in_range(d.default), "{}", d.id);
            if d.curve == Curve::Exponential {
                assert!(d.lo > 0.0, "{}", d.id);
            }
        }
    }

    #[test]
    fn every_param_has_an_engine_prefix() {
        let wm = descriptors(EngineKind::Wintermute).count();
        let sh = descriptors(EngineKind::Shadows).count();
        assert_eq!(wm + sh, PARAM_COUNT);
        assert!(REGISTRY
            .iter()
            .all(|d| d.id.starts_with("wintermute.") || d.id.starts_with("shadows.")));
    }

    #[test]
    fn normalized_mapping_round_trips() {
        for d in REGISTRY.iter().filter(|d| !d.integer) {
            for n in [0.0, 0.25, 0.5, 1.0] {
                let v = d.from_normalized(n);
                assert!((d.to_normalized(v) - n).abs() < 1e-9, "{}", d.id);
            }
        }
        let f = Param::WmFundamental.descriptor();
        assert!((f.from_normalized(0.5) - 200.0).abs() < 1e-9);
    }

    #[test]
    fn set_clamps_and_rounds() {
        let mut s = ParamSet::default();
        assert_eq!(s.set(Param::ShDetune, 3.0), 1.0);
        assert_eq!(s.set(Param::WmVoices, 6.4), 6.0);
        assert_eq!(s.set(Param::WmVoices, 500.0), 96.0);
        assert_eq!(s.set(Param::ShCutoff, f64::NAN), 0.75);
    }
}
