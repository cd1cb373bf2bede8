//! Standard MIDI File reader (formats 0 and 1) reduced to timed note events.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{kind} at byte {offset}")]
pub struct MidiError {
    pub offset: usize,
    pub kind: MidiErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MidiErrorKind {
    #[error("missing MThd header")]
    BadHeader,
    #[error("unsupported file format {0}")]
    UnsupportedFormat(u16),
    #[error("expected MTrk chunk")]
    BadTrackChunk,
    #[error("unexpected end of data")]
    Truncated,
    #[error("data byte without running status")]
    NoRunningStatus,
    #[error("variable-length quantity too long")]
    BadVarLen,
    #[error("zero time division")]
    ZeroDivision,
}

/// Time base from the header chunk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Division {
    TicksPerQuarter(u16),
    /// SMPTE frames per second and ticks per frame.
    Smpte { fps: u8, ticks_per_frame: u8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrackEventKind {
    NoteOn { channel: u8, key: u8, velocity: u8 },
    NoteOff { channel: u8, key: u8, velocity: u8 },
    /// Microseconds per quarter note.
    Tempo(u32),
    EndOfTrack,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrackEvent {
    /// Absolute tick within the track.
    pub tick: u64,
    pub kind: TrackEventKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MidiFile {
    pub format: u16,
    pub division: Division,
    pub tracks: Vec<Vec<TrackEvent>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoteKind {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoteEvent {
    /// Seconds from the start of the file.
    pub time: f64,
    pub kind: NoteKind,
    pub channel: u8,
    pub key: u8,
    /// Zero for note-off.
    pub velocity: u8,
}

impl NoteEvent {
    pub fn on(time: f64, key: u8, velocity: u8) -> Self {
        Self {
            time,
            kind: NoteKind::On,
            channel: 0,
            key,
            velocity,
        }
    }

    pub fn off(time: f64, key: u8) -> Self {
        Self {
            time,
            kind: NoteKind::Off,
            channel: 0,
            key,
            velocity: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TempoChange {
    pub time: f64,
    pub micros_per_quarter: u32,
}

/// Everything the renderer needs from a MIDI file.
#[derive(Debug, Clone, PartialEq)]
pub struct MidiSong {
    pub notes: Vec<NoteEvent>,
    pub tempo: Vec<TempoChange>,
    /// Time of the last event of any kind.
    pub end: f64,
}

pub fn parse_midi(data: &[u8]) -> Result<MidiSong, MidiError> {
    let file = parse_smf(data)?;
    let tempo_map = file.tempo_map();
    let tempo = tempo_map
        .iter()
        .map(|&(tick, us)| TempoChange {
            time: file.tick_to_seconds(tick, &tempo_map),
            micros_per_quarter: us,
        })
        .collect();
    Ok(MidiSong {
        notes: file.note_events(),
        tempo,
        end: file.duration(),
    })
}

const DEFAULT_TEMPO: u32 = 500_000;

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn err(&self, kind: MidiErrorKind) -> MidiError {
        MidiError {
            offset: self.pos,
            kind,
        }
    }

    fn u8(&mut self) -> Result<u8, MidiError> {
        let b = *self
            .data
            .get(self.pos)
            .ok_or_else(|| self.err(MidiErrorKind::Truncated))?;
        self.pos += 1;
        Ok(b)
    }

    fn bytes(&mut self, n: usize) -> Result<&'a [u8], MidiError> {
        if self.data.len() - self.pos < n {
            return Err(MidiError {
                offset: self.data.len(),
                kind: MidiErrorKind::Truncated,
            });
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16, MidiError> {
        let b = self.bytes(2)?;
        Ok(u16::from_be_bytes([b[0], b[1]]))
    }

    fn u32(&mut self) -> Result<u32, MidiError> {
        let b = self.bytes(4)?;
        Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn varlen(&mut self) -> Result<u32, MidiError> {
        let start = self.pos;
        let mut v = 0u32;
        for _ in 0..4 {
            let b = self.u8()?;
            v = (v << 7) | u32::from(b & 0x7f);
            if b & 0x80 == 0 {
                return Ok(v);
            }
        }
        Err(MidiError {
            offset: start,
            kind: MidiErrorKind::BadVarLen,
        })
    }
}

pub fn parse_smf(data: &[u8]) -> Result<MidiFile, MidiError> {
    let mut r = Reader { data, pos: 0 };
    if r.bytes(4).map_err(|_| r_err(0, MidiErrorKind::BadHeader))? != b"MThd" {
        return Err(r_err(0, MidiErrorKind::BadHeader));
    }
    let header_len = r.u32()? as usize;
    let header_start = r.pos;
    let format_at = r.pos;
    let format = r.u16()?;
    if format > 1 {
        return Err(r_err(format_at, MidiErrorKind::UnsupportedFormat(format)));
    }
    let ntracks = r.u16()?;
    let div_at = r.pos;
    let raw_div = r.u16()?;
    let division = if raw_div & 0x8000 != 0 {
        let fps = (-((raw_div >> 8) as u8 as i8)) as u8;
        let ticks_per_frame = (raw_div & 0xff) as u8;
        if fps == 0 || ticks_per_frame == 0 {
            return Err(r_err(div_at, MidiErrorKind::ZeroDivision));
        }
        Division::Smpte {
            fps,
            ticks_per_frame,
        }
    } else {
        if raw_div == 0 {
            return Err(r_err(div_at, MidiErrorKind::ZeroDivision));
        }
        Division::TicksPerQuarter(raw_div)
    };
    r.bytes(header_len.saturating_sub(r.pos - header_start))?;

    let mut tracks = Vec::with_capacity(ntracks as usize);
    for _ in 0..ntracks {
        let chunk_at = r.pos;
        let id = r.bytes(4)?;
        let len = r.u32()? as usize;
        if id != b"MTrk" {
            // Unknown chunks are skipped; only a missing track header is an error.
            if id.iter().all(u8::is_ascii_alphanumeric) {
                r.bytes(len)?;
                continue;
            }
            return Err(r_err(chunk_at, MidiErrorKind::BadTrackChunk));
        }
        let body_start = r.pos;
        let body = r.bytes(len)?;
        tracks.push(parse_track(body, body_start)?);
    }
    Ok(MidiFile {
        format,
        division,
        tracks,
    })
}

fn r_err(offset: usize, kind: MidiErrorKind) -> MidiError {
    MidiError { offset, kind }
}

fn parse_track(body: &[u8], base: usize) -> Result<Vec<TrackEvent>, MidiError> {
    let mut r = Reader { data: body, pos: 0 };
    let rebase = |mut e: MidiError| {
        e.offset += base;
        e
    };
    let mut events = Vec::new();
    let mut tick = 0u64;
    let mut running: Option<u8> = None;
    while r.pos < body.len() {
        tick += u64::from(r.varlen().map_err(rebase)?);
        let at = r.pos;
        let first = r.u8().map_err(rebase)?;
        match first {
            0xff => {
                running = None;
                let kind = r.u8().map_err(rebase)?;
                let len = r.varlen().map_err(rebase)? as usize;
                let payload = r.bytes(len).map_err(rebase)?;
                match kind {
                    0x51 if len == 3 => {
                        let us = u32::from_be_bytes([0, payload[0], payload[1], payload[2]]);
                        events.push(TrackEvent {
                            tick,
                            kind: TrackEventKind::Tempo(us),
                        });
                    }
                    0x2f => {
                        events.push(TrackEvent {
                            tick,
                            kind: TrackEventKind::EndOfTrack,
                        });
                        break;
                    }
                    _ => {}
                }
            }
            0xf0 | 0xf7 => {
                running = None;
                let len = r.varlen().map_err(rebase)? as usize;
                r.bytes(len).map_err(rebase)?;
            }
            _ => {
                let (status, d1) = if first & 0x80 != 0 {
                    running = Some(first);
                    (first, r.u8().map_err(rebase)?)
                } else {
                    let status = running.ok_or_else(|| r_err(at + base, MidiErrorKind::NoRunningStatus))?;
                    (status, first)
                };
                let channel = status & 0x0f;
                let two_bytes = !matches!(status & 0xf0, 0xc0 | 0xd0);
                let d2 = if two_bytes { r.u8().map_err(rebase)? } else { 0 };
                let kind = match status & 0xf0 {
                    0x90 if d2 > 0 => Some(TrackEventKind::NoteOn {
                        channel,
                        key: d1 & 0x7f,
                        velocity: d2 & 0x7f,
                    }),
                    0x80 | 0x90 => Some(TrackEventKind::NoteOff {
                        channel,
                        key: d1 & 0x7f,
                        velocity: d2 & 0x7f,
                    }),
                    _ => None,
                };
                if let Some(kind) = kind {
                    events.push(TrackEvent { tick, kind });
                }
            }
        }
    }
    Ok(events)
}

impl MidiFile {
    /// Note events from every track merged in time order, converted to
    /// seconds through the tempo map. Ties keep track order, then file order.
    pub fn note_events(&self) -> Vec<NoteEvent> {
        let tempo_changes = self.tempo_map();

        let mut notes: Vec<(u64, usize, usize, NoteEvent)> = Vec::new();
        for (ti, track) in self.tracks.iter().enumerate() {
            for (ei, e) in track.iter().enumerate() {
                let (kind, channel, key, velocity) = match e.kind {
                    TrackEventKind::NoteOn {
                        channel,
                        key,
                        velocity,
                    } => (NoteKind::On, channel, key, velocity),
                    TrackEventKind::NoteOff { channel, key, .. } => (NoteKind::Off, channel, key, 0),
                    _ => continue,
                };
                let time = self.tick_to_seconds(e.tick, &tempo_changes);
                notes.push((
                    e.tick,
                    ti,
                    ei,
                    NoteEvent {
                        time,
                        kind,
                        channel,
                        key,
                        velocity,
                    },
                ));
            }
        }
        notes.sort_by_key(|&(tick, ti, ei, _)| (tick, ti, ei));
        notes.into_iter().map(|(_, _, _, n)| n).collect()
    }

    /// Time of the last event of any kind, in seconds.
    pub fn duration(&self) -> f64 {
        let last = self.tracks.iter().flatten().map(|e| e.tick).max().unwrap_or(0);
        let tempo_changes = self.tempo_map();
        self.tick_to_seconds(last, &tempo_changes)
    }

    fn tempo_map(&self) -> Vec<(u64, u32)> {
        let mut changes: Vec<(u64, u32)> = self
            .tracks
            .iter()
            .flatten()
            .filter_map(|e| match e.kind {
                TrackEventKind::Tempo(us) => Some((e.tick, us)),
                _ => None,
            })
            .collect();
        changes.sort_by_key(|&(t, _)| t);
        changes
    }

    fn tick_to_seconds(&self, tick: u64, tempo_changes: &[(u64, u32)]) -> f64 {
        match self.division {
            Division::Smpte {
                fps,
                ticks_per_frame,
            } => {
                // 29 in the header means 29.97 drop-frame.
                let fps = if fps == 29 { 30_000.0 / 1001.0 } else { f64::from(fps) };
                tick as f64 / (fps * f64::from(ticks_per_frame))
            }
            Division::TicksPerQuarter(tpq) => {
                let tpq = f64::from(tpq);
                let mut seconds = 0.0;
                let mut last_tick = 0u64;
                let mut tempo = DEFAULT_TEMPO;
                for &(t, us) in tempo_changes {
                    if t >= tick {
                        break;
                    }
                    seconds += (t - last_tick) as f64 * f64::from(tempo) * 1e-6 / tpq;
                    last_tick = t;
                    tempo = us;
                }
                seconds + (tick - last_tick) as f64 * f64::from(tempo) * 1e-6 / tpq
            }
        }
    }
}
