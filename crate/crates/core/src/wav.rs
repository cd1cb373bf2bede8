//! RIFF/WAVE writer for 32-bit float stereo.

use std::io::{self, Write};

use crate::dsp::AudioBlock;

const FORMAT_IEEE_FLOAT: u16 = 3;
const CHANNELS: u16 = 2;
const BYTES_PER_SAMPLE: u16 = 4;

pub fn write_wav<W: Write>(mut w: W, block: &AudioBlock) -> io::Result<()> {
    let sample_rate = block.sample_rate.round() as u32;
    let frame_bytes = u32::from(CHANNELS * BYTES_PER_SAMPLE);
    let data_len = u32::try_from(block.frames() as u64 * u64::from(frame_bytes))
        .map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "audio too long for a WAV file"))?;

    w.write_all(b"RIFF")?;
    w.write_all(&(4 + (8 + 16) + (8 + data_len)).to_le_bytes())?;
    w.write_all(b"WAVE")?;

    w.write_all(b"fmt ")?;
    w.write_all(&16u32.to_le_bytes())?;
    w.write_all(&FORMAT_IEEE_FLOAT.to_le_bytes())?;
    w.write_all(&CHANNELS.to_le_bytes())?;
    w.write_all(&sample_rate.to_le_bytes())?;
    w.write_all(&(sample_rate * frame_bytes).to_le_bytes())?;
    w.write_all(&(frame_bytes as u16).to_le_bytes())?;
    w.write_all(&(BYTES_PER_SAMPLE * 8).to_le_bytes())?;

    w.write_all(b"data")?;
    w.write_all(&data_len.to_le_bytes())?;
    let mut buf = Vec::with_capacity(block.frames().min(4096) * frame_bytes as usize);
    for chunk in block.left.chunks(4096).zip(block.right.chunks(4096)) {
        buf.clear();
        for (l, r) in chunk.0.iter().zip(chunk.1) {
            buf.extend_from_slice(&l.to_le_bytes());
            buf.extend_from_slice(&r.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

pub fn encode_wav(block: &AudioBlock) -> Vec<u8> {
    let mut out = Vec::with_capacity(44 + block.frames() * 8);
    write_wav(&mut out, block).expect("writing to memory cannot fail");
    out
}
