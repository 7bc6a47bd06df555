//! Input and output surfaces: the `.fifo` DSL, trace files, property-NFA
//! files, DOT rendering, verdict JSON and the command-line driver.

pub mod cli;
pub mod dot;
pub mod parser;
pub mod property;
pub mod trace;
pub mod verdict;

pub use dot::{action_graph_dot, conflict_graph_dot};
pub use parser::{parse_system, pretty_print, ParseError};
pub use property::load_property;
pub use trace::{parse_action, parse_trace, TraceError};
