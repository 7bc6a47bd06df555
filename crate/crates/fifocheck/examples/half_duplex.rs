//! Half-duplex analysis: exact reachability exploration for binary systems,
//! bounded linearization search for mailbox systems, and the orphan-message
//! check behind the greedy/half-duplex bridge.
//!
//! ```bash
//! cargo run --example half_duplex
//! ```

use fifocheck::frontend::parse_system;
use fifocheck::halfduplex::{
    check_binary_half_duplex, check_mailbox_half_duplex_bounded, check_no_orphan_bounded,
};
use fifocheck::greedy::{check_greedy, Adjacency};
use fifocheck::Topology;

fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).expect("fixture exists")
}

fn main() {
    for name in ["reqres.fifo", "xchg.fifo", "csd.fifo", "csb.fifo", "msc_orphan.fifo"] {
        let sys = parse_system(&fixture(name)).unwrap();
        let verdict = match sys.classify_topology() {
            Topology::Binary => check_binary_half_duplex(&sys, 8, 32).unwrap(),
            Topology::Mailbox => check_mailbox_half_duplex_bounded(&sys, 12).unwrap(),
            other => {
                println!("{:<12} skipped ({other} topology)", sys.name());
                continue;
            }
        };
        let greedy = check_greedy(&sys, Adjacency::Full);
        let orphans = check_no_orphan_bounded(&sys, 10, 4);
        println!(
            "{:<12} half-duplex: {:?}, greedy: {:?}, orphans: {:?}",
            sys.name(),
            verdict.status,
            greedy.status,
            orphans.status
        );
        if let Some(w) = verdict.witness {
            println!("             violating execution: {}", sys.display_execution(&w));
        }
    }
}
