//! Brute-force exploration used as ground truth: enumerate executions,
//! reachable configurations and maximum buffer occupancy under a budget.
//!
//! ```bash
//! cargo run --example oracle_exploration
//! ```

use fifocheck::frontend::parse_system;
use fifocheck::oracle::{
    enumerate_executions, oracle_is_greedy_system, oracle_max_occupancy, oracle_reachable,
    render_listing, ExplorationBudget,
};

fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).expect("fixture exists")
}

fn main() {
    let sys = parse_system(&fixture("xchg.fifo")).unwrap();
    let budget = ExplorationBudget::new(4, 4);

    let (executions, info) = enumerate_executions(&sys, &budget);
    println!("executions within depth 4 (complete: {}):", info.complete);
    print!("{}", render_listing(&sys, &executions));

    let (configs, _) = oracle_reachable(&sys, &ExplorationBudget::new(16, 4));
    println!("\nreachable configurations: {}", configs.len());

    let (occupancy, _) = oracle_max_occupancy(&sys, &ExplorationBudget::new(16, 4));
    for (i, v) in occupancy.iter().enumerate() {
        println!("max |{}| = {v}", sys.buffer_name(i));
    }

    let greedy = oracle_is_greedy_system(&sys, &budget);
    println!("\noracle greedy verdict: {}", greedy.greedy);
    if let Some(e) = greedy.counterexample {
        println!("counterexample: {}", sys.display_execution(&e));
    }
}
