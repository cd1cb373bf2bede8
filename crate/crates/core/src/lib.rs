pub mod analysis;
pub mod dsp;
pub mod engine;
pub mod midi;
pub mod params;
pub mod preset;
pub mod render;
pub mod shadows;
pub mod wav;
pub mod wavetable;
pub mod wintermute;
