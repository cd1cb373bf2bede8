//! Network-side request handling: validates requests against the registry,
//! keeps a mirror of the applied parameters and forwards commands to the
//! audio thread.

use std::collections::BTreeMap;

use gloam_core::params::{EngineKind, Param, ParamSet, REGISTRY};
use gloam_core::preset::{factory_names, factory_preset, load_preset, save_preset, Preset};

use crate::host::{Command, Disconnected, Mailbox, Meter};
use crate::protocol::{
    registry_snapshot, Envelope, ErrorCode, Event, PresetInfo, Request, StateSnapshot, PROTOCOL_VERSION,
};

/// Events produced by one request.
#[derive(Debug, Default, PartialEq)]
pub struct Outcome {
    /// Only for the client that sent the request.
    pub reply: Vec<Event>,
    /// For every connected client, the sender included.
    pub broadcast: Vec<Event>,
}

enum Failure {
    Rejected(ErrorCode, String),
    Disconnected,
}

impl From<Disconnected> for Failure {
    fn from(_: Disconnected) -> Self {
        Failure::Disconnected
    }
}

pub struct Controller {
    mailbox: Mailbox,
    mirror: ParamSet,
    engine: EngineKind,
    preset: Option<String>,
    saved: BTreeMap<String, Preset>,
    sample_rate: f64,
    voice_count: usize,
}

impl Controller {
    pub fn new(mailbox: Mailbox, sample_rate: f64, engine: EngineKind, params: ParamSet, preset: Option<String>) -> Self {
        Self {
            mailbox,
            mirror: params,
            engine,
            preset,
            saved: BTreeMap::new(),
            sample_rate,
            voice_count: 0,
        }
    }

    pub fn params(&self) -> &ParamSet {
        &self.mirror
    }

    pub fn engine(&self) -> EngineKind {
        self.engine
    }

    pub fn mailbox(&self) -> &Mailbox {
        &self.mailbox
    }

    pub fn hello() -> Event {
        Event::Hello {
            protocol: PROTOCOL_VERSION,
            server: "gloam".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }

    pub fn state(&self) -> Event {
        let mut presets: Vec<PresetInfo> = factory_names()
            .filter_map(|name| factory_preset(name).ok())
            .map(|p| PresetInfo {
                name: p.name,
                engine: p.engine,
                factory: true,
            })
            .collect();
        presets.extend(self.saved.values().map(|p| PresetInfo {
            name: p.name.clone(),
            engine: p.engine,
            factory: false,
        }));
        Event::State(StateSnapshot {
            engine: self.engine,
            sample_rate: self.sample_rate,
            preset: self.preset.clone(),
            params: REGISTRY
                .iter()
                .map(|d| (d.id.to_string(), self.mirror.get(d.param)))
                .collect(),
            registry: registry_snapshot(),
            presets,
            voice_count: self.voice_count,
        })
    }

    /// Folds a meter reading from the audio thread into the events to publish.
    pub fn observe_meter(&mut self, m: &Meter) -> Vec<Event> {
        let mut events = vec![Event::Meter {
            rms_db: m.rms_db,
            peak_db: m.peak_db,
        }];
        if m.voice_count != self.voice_count {
            self.voice_count = m.voice_count;
            events.push(Event::VoiceCount { count: m.voice_count });
        }
        events
    }

    /// Parses and handles one text frame.
    pub fn handle_text(&mut self, text: &str) -> Result<Outcome, Disconnected> {
        match serde_json::from_str::<Envelope>(text) {
            Ok(env) => self.handle(env),
            Err(e) => Ok(Outcome {
                reply: vec![Event::Error {
                    request: request_type(text),
                    seq: None,
                    code: ErrorCode::Malformed,
                    message: e.to_string(),
                }],
                broadcast: vec![],
            }),
        }
    }

    pub fn handle(&mut self, env: Envelope) -> Result<Outcome, Disconnected> {
        let kind = env.request.kind();
        let mut out = Outcome::default();
        match self.apply(env.request, &mut out) {
            Ok(warning) => out.reply.insert(
                0,
                Event::Ack {
                    request: kind.into(),
                    seq: env.seq,
                    warning,
                },
            ),
            Err(Failure::Disconnected) => return Err(Disconnected),
            Err(Failure::Rejected(code, message)) => {
                out.reply = vec![Event::Error {
                    request: Some(kind.into()),
                    seq: env.seq,
                    code,
                    message,
                }];
                out.broadcast.clear();
            }
        }
        Ok(out)
    }

    /// Returns an optional warning for the ack.
    fn apply(&mut self, request: Request, out: &mut Outcome) -> Result<Option<String>, Failure> {
        let reject = |code, message: String| Err(Failure::Rejected(code, message));
        match request {
            Request::Hello { protocol } => {
                if protocol != PROTOCOL_VERSION {
                    return reject(
                        ErrorCode::UnsupportedProtocol,
                        format!("protocol {protocol} not supported (server speaks {PROTOCOL_VERSION})"),
                    );
                }
                out.reply.push(Self::hello());
            }
            Request::GetState => out.reply.push(self.state()),
            Request::SetParam { id, value, normalized } => {
                let Some(param) = Param::from_id(&id) else {
                    return reject(ErrorCode::UnknownParam, format!("unknown parameter id {id:?}"));
                };
                let desc = param.descriptor();
                let plain = match (value, normalized) {
                    (Some(v), None) => v,
                    (None, Some(n)) => desc.from_normalized(n.clamp(0.0, 1.0)),
                    _ => {
                        return reject(
                            ErrorCode::InvalidValue,
                            "set_param needs exactly one of value or normalized".into(),
                        )
                    }
                };
                if !plain.is_finite() {
                    return reject(ErrorCode::InvalidValue, format!("{id}: value must be finite"));
                }
                let applied = self.mirror.set(param, plain);
                self.mailbox
                    .send(Command::SetParam { param, value: applied })
                    ?;
                out.broadcast.push(Event::ParamChanged {
                    id,
                    value: applied,
                    normalized: desc.to_normalized(applied),
                });
            }
            Request::NoteOn { note, velocity } => {
                if note > 127 {
                    return reject(ErrorCode::InvalidValue, format!("note {note} out of range 0..=127"));
                }
                if !velocity.is_finite() {
                    return reject(ErrorCode::InvalidValue, "velocity must be finite".into());
                }
                if let Some(w) = self.note_warning() {
                    return Ok(Some(w));
                }
                self.mailbox
                    .send(Command::NoteOn {
                        note,
                        velocity: velocity.clamp(0.0, 1.0),
                    })
                    ?;
            }
            Request::NoteOff { note } => {
                if note > 127 {
                    return reject(ErrorCode::InvalidValue, format!("note {note} out of range 0..=127"));
                }
                if let Some(w) = self.note_warning() {
                    return Ok(Some(w));
                }
                self.mailbox.send(Command::NoteOff { note })?;
            }
            Request::AllNotesOff => self.mailbox.send(Command::AllNotesOff)?,
            Request::LoadPreset { name, document } => {
                let preset = match (name, document) {
                    (Some(name), None) => match self.saved.get(&name) {
                        Some(p) => p.clone(),
                        None => match factory_preset(&name) {
                            Ok(p) => p,
                            Err(e) => return reject(ErrorCode::UnknownPreset, e.to_string()),
                        },
                    },
                    (None, Some(doc)) => match load_preset(&doc) {
                        Ok((p, _)) => p,
                        Err(e) => return reject(ErrorCode::InvalidPreset, e.to_string()),
                    },
                    _ => {
                        return reject(
                            ErrorCode::InvalidPreset,
                            "load_preset needs exactly one of name or document".into(),
                        )
                    }
                };
                // Parameters of the other engine keep their current values.
                let incoming = preset.param_set();
                for d in REGISTRY.iter().filter(|d| d.engine() == preset.engine) {
                    self.mirror.set(d.param, incoming.get(d.param));
                }
                self.engine = preset.engine;
                self.preset = Some(preset.name.clone());
                self.mailbox
                    .send(Command::Load {
                        engine: preset.engine,
                        params: self.mirror,
                    })
                    ?;
                out.broadcast.push(Event::PresetLoaded {
                    name: preset.name,
                    engine: preset.engine,
                });
                out.broadcast.push(self.state());
            }
            Request::SavePreset { name } => {
                if name.trim().is_empty() {
                    return reject(ErrorCode::InvalidValue, "preset name must not be empty".into());
                }
                let preset = Preset::from_param_set(name.clone(), self.engine, &self.mirror);
                let document = save_preset(&preset);
                self.saved.insert(name.clone(), preset);
                self.preset = Some(name.clone());
                out.reply.push(Event::PresetSaved { name, document });
            }
            Request::SelectEngine { engine } => {
                self.engine = engine;
                self.mailbox.send(Command::SelectEngine(engine))?;
                out.broadcast.push(Event::EngineChanged { engine });
            }
        }
        Ok(None)
    }

    fn note_warning(&self) -> Option<String> {
        (self.engine == EngineKind::Wintermute).then(|| "wintermute is a drone and ignores note events".to_string())
    }
}

/// Best-effort `type` of a request that failed to parse.
fn request_type(text: &str) -> Option<String> {
    let v: serde_json::Value = serde_json::from_str(text).ok()?;
    v.get("type")?.as_str().map(str::to_string)
}
