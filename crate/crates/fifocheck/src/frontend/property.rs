//! Property-NFA files: a JSON description of an automaton over the
//! configuration-word alphabet.
//!
//! ```json
//! {
//!   "states": ["q0", "q1"],
//!   "initials": ["q0"],
//!   "finals": ["q1"],
//!   "transitions": [["q0", "CTRL(0,0,0)", "q1"], ["q1", "#", "q1"]]
//! }
//! ```
//!
//! Letters are `CTRL(s1,...,sn)` (per-process state names), `#`, or a message
//! name.

use serde::Deserialize;
use thiserror::Error;

use crate::model::System;
use crate::safety::{resolve_control, ConfigLetter, Property, PropertyError};

#[derive(Error, Debug)]
pub enum PropertyLoadError {
    #[error("invalid property JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown state '{0}' in property automaton")]
    UnknownState(String),
    #[error("bad letter '{letter}': {reason}")]
    BadLetter { letter: String, reason: String },
    #[error("malformed automaton: {0}")]
    Structure(String),
}

#[derive(Deserialize)]
struct PropertyFile {
    states: Vec<String>,
    initials: Vec<String>,
    finals: Vec<String>,
    transitions: Vec<(String, String, String)>,
}

fn parse_letter(system: &System, letter: &str) -> Result<ConfigLetter, PropertyLoadError> {
    if letter == "#" {
        return Ok(ConfigLetter::Sep);
    }
    if let Some(inner) = letter.strip_prefix("CTRL(").and_then(|s| s.strip_suffix(')')) {
        let names: Vec<&str> = inner.split(',').map(str::trim).collect();
        let control = resolve_control(system, &names).map_err(|e| match e {
            PropertyError::WrongArity { expected, got } => PropertyLoadError::BadLetter {
                letter: letter.to_string(),
                reason: format!("control tuple has {got} entries, expected {expected}"),
            },
            PropertyError::UnknownControlState { process, state } => PropertyLoadError::BadLetter {
                letter: letter.to_string(),
                reason: format!("unknown state '{state}' of process {process}"),
            },
            PropertyError::NotMailbox => unreachable!("resolve_control never reports this"),
        })?;
        return Ok(ConfigLetter::Control(control));
    }
    system
        .message_index(letter)
        .map(ConfigLetter::Msg)
        .ok_or_else(|| PropertyLoadError::BadLetter {
            letter: letter.to_string(),
            reason: "not '#', 'CTRL(...)' or a known message".to_string(),
        })
}

/// Parses a property automaton against a system.
pub fn load_property(
    system: &System,
    name: &str,
    text: &str,
) -> Result<Property, PropertyLoadError> {
    let file: PropertyFile = serde_json::from_str(text)?;
    let state_index = |s: &str| -> Result<usize, PropertyLoadError> {
        file.states
            .iter()
            .position(|x| x == s)
            .ok_or_else(|| PropertyLoadError::UnknownState(s.to_string()))
    };
    let initials: Vec<usize> =
        file.initials.iter().map(|s| state_index(s)).collect::<Result<_, _>>()?;
    let finals: Vec<usize> = file.finals.iter().map(|s| state_index(s)).collect::<Result<_, _>>()?;
    let mut alphabet = vec![ConfigLetter::Sep];
    alphabet.extend((0..system.messages().len()).map(ConfigLetter::Msg));
    let mut transitions = Vec::with_capacity(file.transitions.len());
    for (src, letter, dst) in &file.transitions {
        let l = parse_letter(system, letter)?;
        alphabet.push(l.clone());
        transitions.push((state_index(src)?, Some(l), state_index(dst)?));
    }
    let nfa = crate::nfa::Nfa::new(
        file.states.len().max(1),
        initials,
        finals,
        transitions,
        alphabet,
    )
    .map_err(|e| PropertyLoadError::Structure(e.to_string()))?;
    Ok(Property { name: name.to_string(), nfa })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_system;
    use crate::safety::{check_safety, encode_configuration, SafetyStatus};

    fn csd() -> System {
        parse_system(include_str!("../../fixtures/csd.fifo")).unwrap()
    }

    #[test]
    fn loads_and_checks_a_custom_property() {
        let sys = csd();
        // any configuration where the server holds a pending req and sits in
        // state 2 (it will consume ack_s first, so this is reachable? no:
        // it accepts exactly control (0,2,0) with buffer s = req)
        let text = r##"{
            "states": ["q0", "ctrl", "s0", "s1", "b1", "b2", "end"],
            "initials": ["q0"],
            "finals": ["end"],
            "transitions": [
                ["q0", "CTRL(0,2,0)", "ctrl"],
                ["ctrl", "#", "s0"],
                ["s0", "req", "s1"],
                ["s1", "#", "b1"],
                ["b1", "#", "end"]
            ]
        }"##;
        let p = load_property(&sys, "custom", text).unwrap();
        let g0 = sys.initial_configuration();
        assert!(!p.nfa.accepts(&encode_configuration(&sys, &g0)));
        let verdict = check_safety(&sys, &p).unwrap();
        // control (0,2,0) with exactly one pending req is not reachable:
        // client at 0 with the server mid-round cannot happen
        assert_eq!(verdict.status, SafetyStatus::Safe);
    }

    #[test]
    fn reports_bad_letters_and_states() {
        let sys = csd();
        let bad_letter = r#"{"states":["a"],"initials":["a"],"finals":["a"],
            "transitions":[["a","nosuch","a"]]}"#;
        assert!(matches!(
            load_property(&sys, "x", bad_letter),
            Err(PropertyLoadError::BadLetter { .. })
        ));
        let bad_state = r#"{"states":["a"],"initials":["zz"],"finals":["a"],"transitions":[]}"#;
        assert!(matches!(
            load_property(&sys, "x", bad_state),
            Err(PropertyLoadError::UnknownState { .. })
        ));
        let bad_ctrl = r#"{"states":["a"],"initials":["a"],"finals":["a"],
            "transitions":[["a","CTRL(9,9)","a"]]}"#;
        assert!(matches!(
            load_property(&sys, "x", bad_ctrl),
            Err(PropertyLoadError::BadLetter { .. })
        ));
    }
}
