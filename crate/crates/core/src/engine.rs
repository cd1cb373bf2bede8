use crate::dsp::{AudioBlock, DspError};
use crate::params::{EngineKind, Param, ParamSet};
use crate::shadows::Shadows;
use crate::wintermute::{DroneParams, Wintermute};

/// Common surface of both instruments, used by the offline renderer and the live host.
///
/// `process` must not allocate: it runs inside the audio callback.
pub trait Engine: Send {
    fn kind(&self) -> EngineKind;

    fn sample_rate(&self) -> f64;

    fn params(&self) -> &ParamSet;

    /// Stores a clamped value and returns it. Takes effect at the next control block.
    fn set_param(&mut self, param: Param, value: f64) -> f64;

    /// Replaces every parameter at once.
    fn load_params(&mut self, params: &ParamSet);

    fn note_on(&mut self, note: u8, velocity: f64);

    fn note_off(&mut self, note: u8);

    fn all_notes_off(&mut self) {}

    fn active_voices(&self) -> usize;

    /// Renders `left.len()` frames, overwriting both slices.
    fn process(&mut self, left: &mut [f32], right: &mut [f32]);

    fn render(&mut self, frames: usize) -> AudioBlock {
        let mut block = AudioBlock::silent(frames, self.sample_rate());
        self.process(&mut block.left, &mut block.right);
        block
    }
}

/// Builds an engine of `kind` with every parameter taken from `params`.
pub fn build_engine(
    kind: EngineKind,
    sample_rate: f64,
    seed: u64,
    params: &ParamSet,
) -> Result<Box<dyn Engine>, DspError> {
    Ok(match kind {
        EngineKind::Wintermute => {
            DroneParams::from_set(params).validate()?;
            Box::new(Wintermute::with_param_set(sample_rate, seed, params))
        }
        EngineKind::Shadows => Box::new(Shadows::with_param_set(sample_rate, seed, params)),
    })
}
