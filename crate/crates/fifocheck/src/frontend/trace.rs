//! Trace files: whitespace-separated action tokens `process:buffer!msg` /
//! `process:buffer?msg`. The process prefix disambiguates ownership in
//! shared-buffer systems and is checked against the system's action sets.

use thiserror::Error;

use crate::model::{Action, ActionKind, System};

#[derive(Error, Clone, PartialEq, Eq, Debug)]
#[error("token {index} '{token}': {message}")]
pub struct TraceError {
    pub index: usize,
    pub token: String,
    pub message: String,
}

fn err(index: usize, token: &str, message: impl Into<String>) -> TraceError {
    TraceError { index, token: token.to_string(), message: message.into() }
}

/// Parses one `process:buffer!msg` token against a system.
pub fn parse_action(system: &System, token: &str) -> Result<Action, TraceError> {
    parse_indexed(system, 0, token)
}

fn parse_indexed(system: &System, index: usize, token: &str) -> Result<Action, TraceError> {
    let (proc_name, rest) = token
        .split_once(':')
        .ok_or_else(|| err(index, token, "expected process:buffer!msg or process:buffer?msg"))?;
    let p = system
        .process_index(proc_name)
        .ok_or_else(|| err(index, token, format!("unknown process '{proc_name}'")))?;
    let op_at = rest
        .find(['!', '?'])
        .ok_or_else(|| err(index, token, "missing '!' or '?'"))?;
    let kind = if rest.as_bytes()[op_at] == b'!' { ActionKind::Send } else { ActionKind::Receive };
    let buffer_name = &rest[..op_at];
    let message_name = &rest[op_at + 1..];
    let buffer = system
        .buffer_index(buffer_name)
        .ok_or_else(|| err(index, token, format!("unknown buffer '{buffer_name}'")))?;
    let message = system
        .message_index(message_name)
        .ok_or_else(|| err(index, token, format!("unknown message '{message_name}'")))?;
    let action = Action { buffer, kind, message };
    if system.owner_of(action) != Some(p) {
        return Err(err(
            index,
            token,
            format!(
                "{} is not an action of process {}",
                system.display_action(action),
                proc_name
            ),
        ));
    }
    Ok(action)
}

/// Parses a whole trace; `#` comments run to end of line.
pub fn parse_trace(system: &System, text: &str) -> Result<Vec<Action>, TraceError> {
    let mut actions = Vec::new();
    let mut index = 0;
    for raw in text.lines() {
        let content = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        for token in content.split_whitespace() {
            actions.push(parse_indexed(system, index, token)?);
            index += 1;
        }
    }
    Ok(actions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_system;

    fn csd() -> System {
        parse_system(include_str!("../../fixtures/csd.fifo")).unwrap()
    }

    #[test]
    fn parses_fig2_trace() {
        let sys = csd();
        let trace = parse_trace(&sys, include_str!("../../fixtures/fig2.trace")).unwrap();
        assert_eq!(trace.len(), 13);
        assert_eq!(sys.display_action_owned(trace[0]), "client:s!req");
    }

    #[test]
    fn rejects_unknown_process_and_wrong_owner() {
        let sys = csd();
        let e = parse_trace(&sys, "nobody:s!req").unwrap_err();
        assert!(e.message.contains("unknown process"));
        let e = parse_trace(&sys, "database:s!req").unwrap_err();
        assert!(e.message.contains("not an action of process database"));
    }

    #[test]
    fn rejects_unknown_names() {
        let sys = csd();
        assert!(parse_trace(&sys, "client:zz!req").unwrap_err().message.contains("unknown buffer"));
        assert!(parse_trace(&sys, "client:s!zz").unwrap_err().message.contains("unknown message"));
        assert!(parse_trace(&sys, "client").unwrap_err().message.contains("expected process"));
    }
}
