//! Versioned preset documents (TOML) and the factory preset set.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{EngineKind, Param, ParamSet};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, PartialEq)]
pub enum PresetError {
    #[error("malformed preset document: {0}")]
    Malformed(String),
    #[error("unknown engine {0:?}")]
    UnknownEngine(String),
    #[error("unsupported preset format {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("unknown parameter id {0:?}")]
    UnknownParam(String),
    #[error("parameter {id:?} belongs to {owner}, not {engine}")]
    WrongEngine {
        id: String,
        owner: EngineKind,
        engine: EngineKind,
    },
    #[error("no factory preset named {0:?}")]
    UnknownPreset(String),
}

/// Non-fatal findings while loading a document.
#[derive(Debug, Clone, PartialEq)]
pub enum PresetWarning {
    Clamped { id: String, given: f64, used: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    pub engine: EngineKind,
    pub seed: Option<u64>,
    /// Explicitly set values keyed by parameter id; anything absent uses the registry default.
    pub params: BTreeMap<String, f64>,
}

#[derive(Serialize, Deserialize)]
struct Document {
    format: u32,
    name: String,
    engine: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default)]
    params: BTreeMap<String, f64>,
}

impl Preset {
    pub fn new(name: impl Into<String>, engine: EngineKind) -> Self {
        Self {
            name: name.into(),
            engine,
            seed: None,
            params: BTreeMap::new(),
        }
    }

    /// Full parameter set: registry defaults overlaid with this preset's values.
    pub fn param_set(&self) -> ParamSet {
        let mut set = ParamSet::default();
        for (id, &v) in &self.params {
            if let Some(p) = Param::from_id(id) {
                set.set(p, v);
            }
        }
        set
    }

    /// Captures every parameter of `engine` from a live parameter set.
    pub fn from_param_set(name: impl Into<String>, engine: EngineKind, set: &ParamSet) -> Self {
        let params = set
            .iter()
            .filter(|(d, _)| d.engine() == engine)
            .map(|(d, v)| (d.id.to_string(), v))
            .collect();
        Self {
            name: name.into(),
            engine,
            seed: None,
            params,
        }
    }
}

/// Parses and validates a preset document. Out-of-range values are clamped
/// and reported as warnings.
pub fn load_preset(text: &str) -> Result<(Preset, Vec<PresetWarning>), PresetError> {
    let doc: Document = toml::from_str(text).map_err(|e| PresetError::Malformed(e.to_string()))?;
    if doc.format != FORMAT_VERSION {
        return Err(PresetError::VersionMismatch {
            found: doc.format,
            expected: FORMAT_VERSION,
        });
    }
    let engine: EngineKind = doc
        .engine
        .parse()
        .map_err(|_| PresetError::UnknownEngine(doc.engine.clone()))?;

    let mut warnings = Vec::new();
    let mut params = BTreeMap::new();
    for (id, value) in doc.params {
        let param = Param::from_id(&id).ok_or_else(|| PresetError::UnknownParam(id.clone()))?;
        let desc = param.descriptor();
        if desc.engine() != engine {
            return Err(PresetError::WrongEngine {
                id,
                owner: desc.engine(),
                engine,
            });
        }
        let used = desc.clamp(value);
        if used != value {
            log::warn!("preset {:?}: {id} = {value} clamped to {used}", doc.name);
            warnings.push(PresetWarning::Clamped {
                id: id.clone(),
                given: value,
                used,
            });
        }
        params.insert(id, used);
    }
    Ok((
        Preset {
            name: doc.name,
            engine,
            seed: doc.seed,
            params,
        },
        warnings,
    ))
}

pub fn save_preset(preset: &Preset) -> String {
    let doc = Document {
        format: FORMAT_VERSION,
        name: preset.name.clone(),
        engine: preset.engine.as_str().to_string(),
        seed: preset.seed,
        params: preset.params.clone(),
    };
    toml::to_string(&doc).expect("preset documents always serialize")
}

const FACTORY_SOURCES: [(&str, &str); 6] = [
    ("birds", include_str!("../presets/birds.toml")),
    ("bubbles", include_str!("../presets/bubbles.toml")),
    ("drips", include_str!("../presets/drips.toml")),
    ("dark-ambient", include_str!("../presets/dark-ambient.toml")),
    ("trance-lead", include_str!("../presets/trance-lead.toml")),
    ("witch-house-bass", include_str!("../presets/witch-house-bass.toml")),
];

/// Factory preset names in listing order.
pub fn factory_names() -> impl Iterator<Item = &'static str> {
    FACTORY_SOURCES.iter().map(|(name, _)| *name)
}

/// Raw document text of a factory preset.
pub fn factory_document(name: &str) -> Option<&'static str> {
    FACTORY_SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

pub fn factory_preset(name: &str) -> Result<Preset, PresetError> {
    let text = factory_document(name).ok_or_else(|| PresetError::UnknownPreset(name.to_string()))?;
    load_preset(text).map(|(p, _)| p)
}

pub fn factory_presets() -> Vec<Preset> {
    factory_names()
        .map(|n| factory_preset(n).expect("factory presets are valid"))
        .collect()
}
