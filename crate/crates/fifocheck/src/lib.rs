//! Verification toolkit for systems of communicating FIFO automata.
//!
//! The library decides whether a system is *greedy* (every execution can be
//! rescheduled so that each reception immediately follows its matching send),
//! checks regular safety properties of greedy systems (reachability,
//! unspecified reception, progress), decides boundedness, and classifies
//! half-duplex behaviour — each with counterexample traces and causal-graph
//! renderings.
//!
//! Systems are described in the `.fifo` DSL (see [`frontend::parse_system`])
//! or built programmatically with [`model::SystemBuilder`]. Every decision
//! procedure has a brute-force counterpart in [`oracle`] used as ground truth
//! in the test suite.
//!
//! The `examples/` directory contains one runnable example per capability;
//! `cargo run --example check_greedy` is a good starting point. The thin
//! `fifocheck` binary exposes the same checks as CLI subcommands.

pub mod causality;
pub mod frontend;
pub mod greedy;
pub mod halfduplex;
pub mod model;
pub mod nfa;
pub mod oracle;
pub mod safety;

pub use model::{Action, ActionKind, Configuration, Execution, FifoAutomaton, System, Topology};
