//! Causal analysis of a trace: matching pairs, the action and conflict
//! graphs as DOT, and greedy rescheduling.
//!
//! ```bash
//! cargo run --example causal_graphs > graphs.dot
//! ```

use fifocheck::causality::{conflict_graph, is_greedy_execution, reschedule_greedy};
use fifocheck::frontend::{action_graph_dot, conflict_graph_dot, parse_system, parse_trace};

fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).expect("fixture exists")
}

fn main() {
    let sys = parse_system(&fixture("csd.fifo")).unwrap();
    let trace = parse_trace(&sys, &fixture("fig2.trace")).unwrap();

    let cg = conflict_graph(&sys, &trace);
    eprintln!(
        "{} actions, {} communications, conflict graph acyclic: {}",
        trace.len(),
        cg.comms.len(),
        cg.is_acyclic()
    );

    eprintln!("greedy already: {}", is_greedy_execution(&trace));
    let rescheduled = reschedule_greedy(&sys, &trace).unwrap();
    eprintln!("rescheduled:    {}", sys.display_execution(&rescheduled));
    assert!(is_greedy_execution(&rescheduled));
    assert_eq!(sys.run(&trace).unwrap(), sys.run(&rescheduled).unwrap());

    // both graphs, transitively reduced, on stdout
    print!("{}", action_graph_dot(&sys, &trace, true));
    print!("{}", conflict_graph_dot(&sys, &trace, true));
}
