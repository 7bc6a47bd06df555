//! Decide greediness for two systems: the Client/Server/Database protocol
//! (greedy) and the cross-send system (not greedy, with a minimal witness).
//!
//! ```bash
//! cargo run --example check_greedy
//! ```

use fifocheck::frontend::parse_system;
use fifocheck::greedy::{check_greedy, Adjacency};

fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).expect("fixture exists")
}

fn main() {
    let csd = parse_system(&fixture("csd.fifo")).unwrap();
    let verdict = check_greedy(&csd, Adjacency::Full);
    println!("{}: {:?}", csd.name(), verdict.status);

    let xchg = parse_system(&fixture("xchg.fifo")).unwrap();
    let verdict = check_greedy(&xchg, Adjacency::Full);
    println!("{}: {:?}", xchg.name(), verdict.status);
    let witness = verdict.witness.expect("cross sends cannot be rescheduled");
    let word: Vec<String> = witness.word.iter().map(|l| l.display(&xchg)).collect();
    println!("  borderline word: {}", word.join(" "));
    println!("  as actions:      {}", xchg.display_execution(&witness.actions));
    println!("  conflict cycle through {} communications", witness.cycle.len());
}
