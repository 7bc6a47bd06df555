//! Parser for the `.fifo` system description language.
//!
//! ```text
//! system    := "system" IDENT topology? process+
//! topology  := "topology" ("mailbox" | "p2p" | "binary" | "general")
//! process   := "process" IDENT "{" "initial" IDENT trans* "}"
//! trans     := IDENT "->" IDENT ":" BUFFER ("!" | "?") IDENT
//! BUFFER    := IDENT (">" IDENT)?        // pair form for p2p naming
//! ```
//!
//! `#` starts a comment running to the end of the line. Control states are
//! declared implicitly by appearing as the initial state or as a transition
//! endpoint. A declared topology is validated against
//! [`System::classify_topology`]; a more specific actual class is accepted
//! (binary systems may be declared `mailbox` or `p2p`).

use std::fmt;

use thiserror::Error;

use crate::model::{ActionKind, System, SystemBuilder, Topology};

#[derive(Error, Clone, PartialEq, Eq, Debug)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Arrow,
    Colon,
    Bang,
    Question,
    Gt,
    LBrace,
    RBrace,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Arrow => f.write_str("'->'"),
            Tok::Colon => f.write_str("':'"),
            Tok::Bang => f.write_str("'!'"),
            Tok::Question => f.write_str("'?'"),
            Tok::Gt => f.write_str("'>'"),
            Tok::LBrace => f.write_str("'{'"),
            Tok::RBrace => f.write_str("'}'"),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Lexed>, ParseError> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        let content = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let bytes: Vec<char> = content.chars().collect();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            let col = i + 1;
            match c {
                c if c.is_whitespace() => {
                    i += 1;
                }
                '-' => {
                    if bytes.get(i + 1) == Some(&'>') {
                        out.push(Lexed { tok: Tok::Arrow, line, col });
                        i += 2;
                    } else {
                        return Err(ParseError::new(line, col, "expected '->'"));
                    }
                }
                '>' => {
                    out.push(Lexed { tok: Tok::Gt, line, col });
                    i += 1;
                }
                ':' => {
                    out.push(Lexed { tok: Tok::Colon, line, col });
                    i += 1;
                }
                '!' => {
                    out.push(Lexed { tok: Tok::Bang, line, col });
                    i += 1;
                }
                '?' => {
                    out.push(Lexed { tok: Tok::Question, line, col });
                    i += 1;
                }
                '{' => {
                    out.push(Lexed { tok: Tok::LBrace, line, col });
                    i += 1;
                }
                '}' => {
                    out.push(Lexed { tok: Tok::RBrace, line, col });
                    i += 1;
                }
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let start = i;
                    while i < bytes.len()
                        && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_')
                    {
                        i += 1;
                    }
                    let word: String = bytes[start..i].iter().collect();
                    out.push(Lexed { tok: Tok::Ident(word), line, col });
                }
                other => {
                    return Err(ParseError::new(line, col, format!("unexpected character '{other}'")));
                }
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Lexed>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|l| &l.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.tokens.get(self.pos) {
            Some(l) => (l.line, l.col),
            None => self
                .tokens
                .last()
                .map(|l| (l.line, l.col + 1))
                .unwrap_or((1, 1)),
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::new(line, col, message)
    }

    fn next(&mut self, what: &str) -> Result<Tok, ParseError> {
        match self.tokens.get(self.pos) {
            Some(l) => {
                self.pos += 1;
                Ok(l.tok.clone())
            }
            None => Err(self.error(format!("unexpected end of input, expected {what}"))),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        let got = self.next(&tok.to_string())?;
        if got == tok {
            Ok(())
        } else {
            self.pos -= 1;
            Err(self.error(format!("expected {tok}, found {got}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.next(what)? {
            Tok::Ident(s) => Ok(s),
            got => {
                self.pos -= 1;
                Err(self.error(format!("expected {what}, found {got}")))
            }
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        let got = self.ident(&format!("keyword '{word}'"))?;
        if got == word {
            Ok(())
        } else {
            self.pos -= 1;
            Err(self.error(format!("expected keyword '{word}', found '{got}'")))
        }
    }

    fn at_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == word)
    }

    fn buffer_name(&mut self) -> Result<String, ParseError> {
        let first = self.ident("buffer identifier")?;
        if self.peek() == Some(&Tok::Gt) {
            self.pos += 1;
            let second = self.ident("buffer identifier")?;
            Ok(format!("{first}>{second}"))
        } else {
            Ok(first)
        }
    }
}

/// Parses, builds and validates a system. Besides syntax errors this reports
/// structural diagnostics and a mismatch between the declared and the
/// classified topology.
pub fn parse_system(text: &str) -> Result<System, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    p.keyword("system")?;
    let name = p.ident("system name")?;
    let mut builder = SystemBuilder::new(&name);

    let mut declared = None;
    if p.at_keyword("topology") {
        p.keyword("topology")?;
        let word = p.ident("topology class")?;
        declared = Some(Topology::parse(&word).ok_or_else(|| {
            p.error(format!("unknown topology '{word}' (expected mailbox, p2p, binary or general)"))
        })?);
    }

    while p.peek().is_some() {
        p.keyword("process")?;
        let pname = p.ident("process name")?;
        p.expect(Tok::LBrace)?;
        p.keyword("initial")?;
        let initial = p.ident("initial state")?;
        builder.add_process(&pname, &initial);
        loop {
            match p.peek() {
                Some(Tok::RBrace) => {
                    p.pos += 1;
                    break;
                }
                Some(Tok::Ident(_)) => {
                    let src = p.ident("source state")?;
                    p.expect(Tok::Arrow)?;
                    let dst = p.ident("target state")?;
                    p.expect(Tok::Colon)?;
                    let buffer = p.buffer_name()?;
                    let kind = match p.next("'!' or '?'")? {
                        Tok::Bang => ActionKind::Send,
                        Tok::Question => ActionKind::Receive,
                        got => {
                            p.pos -= 1;
                            return Err(p.error(format!("expected '!' or '?', found {got}")));
                        }
                    };
                    let message = p.ident("message name")?;
                    builder.add_transition(&pname, &src, &buffer, kind, &message, &dst);
                }
                _ => return Err(p.error("expected a transition or '}'")),
            }
        }
    }

    let system = builder
        .build()
        .map_err(|e| ParseError::new(1, 1, e.to_string()))?;

    let diagnostics = system.validate();
    if !diagnostics.is_empty() {
        let joined: Vec<String> = diagnostics.iter().map(|d| d.to_string()).collect();
        return Err(ParseError::new(1, 1, format!("invalid system: {}", joined.join("; "))));
    }

    if let Some(declared) = declared {
        let actual = system.classify_topology();
        let ok = match declared {
            Topology::General => true,
            Topology::Mailbox => matches!(actual, Topology::Mailbox | Topology::Binary),
            Topology::P2p => matches!(actual, Topology::P2p | Topology::Binary),
            Topology::Binary => actual == Topology::Binary,
        };
        if !ok {
            return Err(ParseError::new(
                1,
                1,
                format!("topology mismatch: declared {declared} but the system classifies as {actual}"),
            ));
        }
    }

    Ok(system)
}

/// Canonical `.fifo` rendering; `parse_system(pretty_print(s))` equals `s`.
pub fn pretty_print(system: &System) -> String {
    let mut out = String::new();
    out.push_str(&format!("system {}\n", system.name()));
    out.push_str(&format!("topology {}\n", system.classify_topology()));
    for auto in system.processes() {
        out.push_str(&format!("\nprocess {} {{\n", auto.name));
        out.push_str(&format!("  initial {}\n", auto.states[auto.initial]));
        for t in &auto.transitions {
            out.push_str(&format!(
                "  {} -> {} : {}\n",
                auto.states[t.src],
                auto.states[t.dst],
                system.display_action(t.action)
            ));
        }
        out.push_str("}\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const CSD: &str = include_str!("../../fixtures/csd.fifo");

    #[test]
    fn parses_csd() {
        let sys = parse_system(CSD).unwrap();
        assert_eq!(sys.name(), "csd");
        assert_eq!(sys.processes().len(), 3);
        let total: usize = sys.processes().iter().map(|a| a.transitions.len()).sum();
        assert_eq!(total, 12);
        assert_eq!(sys.buffers(), &["s", "c", "d"]);
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_system("system x\nprocess p {\n  initial 0\n  0 -> : q!m 1\n}").unwrap_err();
        assert_eq!(err.line, 4);
        assert!(err.message.contains("expected"));
    }

    #[test]
    fn topology_mismatch_is_reported() {
        let text = "system t\ntopology mailbox\n\
            process p {\n  initial 0\n  0 -> 1 : p>r!m1\n}\n\
            process q {\n  initial 0\n  0 -> 1 : q>r!m2\n}\n\
            process r {\n  initial 0\n  0 -> 1 : p>r?m1\n  1 -> 2 : q>r?m2\n}\n";
        let err = parse_system(text).unwrap_err();
        assert!(err.message.contains("topology mismatch"), "{}", err.message);
    }

    #[test]
    fn binary_satisfies_declared_mailbox() {
        let text = "system t\ntopology mailbox\nprocess p {\n  initial 0\n  0 -> 1 : q!m\n}\nprocess q {\n  initial 0\n  0 -> 1 : q?m\n}\n";
        assert!(parse_system(text).is_ok());
    }

    #[test]
    fn invalid_system_rejected() {
        let text = "system t\nprocess p {\n  initial 0\n  0 -> 1 : b!m\n}\nprocess q {\n  initial 0\n  0 -> 1 : b!m\n}\n";
        let err = parse_system(text).unwrap_err();
        assert!(err.message.contains("not disjoint"));
    }

    #[test]
    fn roundtrip_through_pretty_print() {
        for fixture in [
            CSD,
            include_str!("../../fixtures/xchg.fifo"),
            include_str!("../../fixtures/csb.fifo"),
            include_str!("../../fixtures/abc.fifo"),
        ] {
            let sys = parse_system(fixture).unwrap();
            let printed = pretty_print(&sys);
            let reparsed = parse_system(&printed).unwrap();
            assert_eq!(sys, reparsed);
        }
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "# hello\nsystem t # trailing\n\nprocess p {\n  initial 0\n}\n";
        let sys = parse_system(text).unwrap();
        assert_eq!(sys.processes().len(), 1);
    }
}
