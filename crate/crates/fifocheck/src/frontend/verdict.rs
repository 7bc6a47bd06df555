//! JSON serialization of verdicts and configurations, plus the inverse
//! parse for configuration files.

use serde_json::{json, Value};
use thiserror::Error;

use crate::causality::Communication;
use crate::greedy::{CommLetter, GreedyStatus, GreedyVerdict};
use crate::halfduplex::{HalfDuplexVerdict, HdStatus, OrphanStatus, OrphanVerdict};
use crate::model::{Action, Configuration, System};
use crate::safety::{Boundedness, SafetyStatus, SafetyVerdict};

pub fn word_json(system: &System, word: &[CommLetter]) -> Value {
    Value::Array(word.iter().map(|l| Value::String(l.display(system))).collect())
}

pub fn execution_json(system: &System, e: &[Action]) -> Value {
    Value::Array(e.iter().map(|&a| Value::String(system.display_action_owned(a))).collect())
}

fn communication_json(system: &System, c: &Communication) -> Value {
    json!({
        "buffer": system.buffer_name(c.buffer),
        "message": system.message_name(c.message),
        "send_index": c.send,
        "receive_index": c.receive,
    })
}

pub fn greedy_json(system: &System, verdict: &GreedyVerdict) -> Value {
    let mut out = json!({
        "check": "greedy",
        "adjacency": verdict.adjacency.to_string(),
        "status": match verdict.status {
            GreedyStatus::Greedy => "greedy",
            GreedyStatus::NotGreedy => "not-greedy",
        },
    });
    if let Some(w) = &verdict.witness {
        out["witness_word"] = word_json(system, &w.word);
        out["witness_actions"] = execution_json(system, &w.actions);
        out["conflict_cycle"] =
            Value::Array(w.cycle.iter().map(|c| communication_json(system, c)).collect());
    }
    out
}

pub fn safety_json(system: &System, verdict: &SafetyVerdict) -> Value {
    let mut out = json!({
        "check": "safety",
        "property": verdict.property,
        "status": match verdict.status {
            SafetyStatus::Safe => "safe",
            SafetyStatus::Unsafe => "unsafe",
        },
    });
    if let Some(w) = &verdict.witness {
        out["witness_word"] = word_json(system, &w.word);
        out["witness_actions"] = execution_json(system, &w.actions);
        out["reached_configuration"] = system.config_json(&w.config);
    }
    out
}

pub fn boundedness_json(system: &System, verdict: &Boundedness) -> Value {
    match verdict {
        Boundedness::Bounded { per_buffer, k } => {
            let mut buffers = serde_json::Map::new();
            for (i, &v) in per_buffer.iter().enumerate() {
                buffers.insert(system.buffer_name(i).to_string(), json!(v));
            }
            json!({
                "check": "boundedness",
                "status": "bounded",
                "per_buffer": buffers,
                "k": k,
            })
        }
        Boundedness::Unbounded { witness } => json!({
            "check": "boundedness",
            "status": "unbounded",
            "witness": {
                "prefix": word_json(system, &witness.prefix),
                "cycle": word_json(system, &witness.cycle),
            },
        }),
    }
}

pub fn hd_status_str(status: HdStatus) -> &'static str {
    match status {
        HdStatus::HalfDuplex => "half-duplex",
        HdStatus::NotHalfDuplex => "not-half-duplex",
        HdStatus::UnknownAtBound => "unknown-at-bound",
    }
}

pub fn half_duplex_json(system: &System, verdict: &HalfDuplexVerdict, mode: &str) -> Value {
    let mut out = json!({
        "check": "half-duplex",
        "mode": mode,
        "status": hd_status_str(verdict.status),
        "depth": verdict.depth,
        "buffer_bound": verdict.buffer_bound,
    });
    if let Some(w) = &verdict.witness {
        out["witness"] = execution_json(system, w);
    }
    out
}

pub fn orphan_json(system: &System, verdict: &OrphanVerdict) -> Value {
    let mut out = json!({
        "check": "no-orphan",
        "status": match verdict.status {
            OrphanStatus::NoOrphanWithinBounds => "no-orphan-within-bounds",
            OrphanStatus::OrphanCandidate => "orphan-candidate",
        },
        "depth": verdict.depth,
        "buffer_bound": verdict.buffer_bound,
    });
    if let Some(w) = &verdict.witness {
        out["witness"] = json!({
            "reaching": execution_json(system, &w.reaching),
            "configuration": system.config_json(&w.config),
            "buffer": system.buffer_name(w.buffer),
            "position": w.position,
            "message": system.message_name(w.message),
        });
    }
    out
}

#[derive(Error, Debug)]
pub enum ConfigParseError {
    #[error("invalid configuration JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Shape(String),
}

/// Inverse of [`System::config_json`]: parses
/// `{"control": [..], "buffers": {id: [msgs]}}`.
pub fn parse_configuration(system: &System, text: &str) -> Result<Configuration, ConfigParseError> {
    let value: Value = serde_json::from_str(text)?;
    let shape = |msg: String| ConfigParseError::Shape(msg);
    let control_json = value
        .get("control")
        .and_then(Value::as_array)
        .ok_or_else(|| shape("missing 'control' array".into()))?;
    if control_json.len() != system.processes().len() {
        return Err(shape(format!(
            "control has {} entries, system has {} processes",
            control_json.len(),
            system.processes().len()
        )));
    }
    let mut control = Vec::with_capacity(control_json.len());
    for (auto, v) in system.processes().iter().zip(control_json) {
        let name = v.as_str().ok_or_else(|| shape("control entries must be strings".into()))?;
        let s = auto
            .state_index(name)
            .ok_or_else(|| shape(format!("unknown state '{name}' of process {}", auto.name)))?;
        control.push(s);
    }
    let mut config = Configuration { control, buffers: vec![Default::default(); system.buffers().len()] };
    if let Some(buffers) = value.get("buffers") {
        let map = buffers.as_object().ok_or_else(|| shape("'buffers' must be an object".into()))?;
        for (name, content) in map {
            let i = system
                .buffer_index(name)
                .ok_or_else(|| shape(format!("unknown buffer '{name}'")))?;
            let msgs = content
                .as_array()
                .ok_or_else(|| shape(format!("buffer '{name}' must be an array")))?;
            for m in msgs {
                let msg = m.as_str().ok_or_else(|| shape("messages must be strings".into()))?;
                let mi = system
                    .message_index(msg)
                    .ok_or_else(|| shape(format!("unknown message '{msg}'")))?;
                config.buffers[i].push_back(mi);
            }
        }
    }
    Ok(config)
}
