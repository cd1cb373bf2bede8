//! JSON wire messages exchanged over the websocket. See docs/protocol.md.

use std::collections::BTreeMap;

use gloam_core::params::{Curve, EngineKind, ParamDescriptor, REGISTRY};
use serde::{Deserialize, Serialize};

pub const PROTOCOL_VERSION: u32 = 1;

/// A client request. `seq` is optional and echoed in the matching ack or error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seq: Option<u64>,
    #[serde(flatten)]
    pub request: Request,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Request {
    Hello {
        protocol: u32,
    },
    GetState,
    /// Exactly one of `value` (plain units) or `normalized` (`0..=1`) must be given.
    SetParam {
        id: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        value: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        normalized: Option<f64>,
    },
    NoteOn {
        note: u8,
        /// `0..=1`.
        #[serde(default = "full_velocity")]
        velocity: f64,
    },
    NoteOff {
        note: u8,
    },
    AllNotesOff,
    /// Loads a factory or previously saved preset by `name`, or a full preset `document`.
    LoadPreset {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        document: Option<String>,
    },
    SavePreset {
        name: String,
    },
    SelectEngine {
        engine: EngineKind,
    },
}

fn full_velocity() -> f64 {
    1.0
}

impl Request {
    pub fn kind(&self) -> &'static str {
        match self {
            Request::Hello { .. } => "hello",
            Request::GetState => "get_state",
            Request::SetParam { .. } => "set_param",
            Request::NoteOn { .. } => "note_on",
            Request::NoteOff { .. } => "note_off",
            Request::AllNotesOff => "all_notes_off",
            Request::LoadPreset { .. } => "load_preset",
            Request::SavePreset { .. } => "save_preset",
            Request::SelectEngine { .. } => "select_engine",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    Malformed,
    UnsupportedProtocol,
    UnknownParam,
    InvalidValue,
    UnknownPreset,
    InvalidPreset,
}

/// Everything the server sends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    Hello {
        protocol: u32,
        server: String,
        version: String,
    },
    State(StateSnapshot),
    Ack {
        request: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seq: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        warning: Option<String>,
    },
    Error {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        request: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seq: Option<u64>,
        code: ErrorCode,
        message: String,
    },
    ParamChanged {
        id: String,
        value: f64,
        normalized: f64,
    },
    EngineChanged {
        engine: EngineKind,
    },
    PresetLoaded {
        name: String,
        engine: EngineKind,
    },
    PresetSaved {
        name: String,
        document: String,
    },
    /// Output level over the last meter window, dBFS, `[left, right]`.
    Meter {
        rms_db: [f64; 2],
        peak_db: [f64; 2],
    },
    VoiceCount {
        count: usize,
    },
}

impl Event {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("events always serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSnapshot {
    pub engine: EngineKind,
    pub sample_rate: f64,
    #[serde(default)]
    pub preset: Option<String>,
    /// Current value of every registered parameter, keyed by id.
    pub params: BTreeMap<String, f64>,
    pub registry: Vec<RegistryEntry>,
    pub presets: Vec<PresetInfo>,
    pub voice_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub id: String,
    pub engine: EngineKind,
    pub name: String,
    pub unit: String,
    pub min: f64,
    pub max: f64,
    pub curve: Curve,
    pub default: f64,
    pub integer: bool,
}

impl From<&ParamDescriptor> for RegistryEntry {
    fn from(d: &ParamDescriptor) -> Self {
        Self {
            id: d.id.to_string(),
            engine: d.engine(),
            name: d.name.to_string(),
            unit: d.unit.to_string(),
            min: d.lo,
            max: d.hi,
            curve: d.curve,
            default: d.default,
            integer: d.integer,
        }
    }
}

/// The whole parameter registry in wire form.
pub fn registry_snapshot() -> Vec<RegistryEntry> {
    REGISTRY.iter().map(RegistryEntry::from).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetInfo {
    pub name: String,
    pub engine: EngineKind,
    pub factory: bool,
}
