//! Buffer boundedness: a one-shot ping is 1-bounded; the a^n b^n c^n machine
//! and the Client/Server/Database protocol are unbounded with pumpable
//! witness cycles.
//!
//! ```bash
//! cargo run --example boundedness
//! ```

use fifocheck::frontend::parse_system;
use fifocheck::safety::{check_boundedness, Boundedness};

fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).expect("fixture exists")
}

fn main() {
    for name in ["ping.fifo", "abc.fifo", "csd.fifo"] {
        let sys = parse_system(&fixture(name)).unwrap();
        match check_boundedness(&sys).unwrap() {
            Boundedness::Bounded { per_buffer, k } => {
                println!("{:<10} bounded, k = {k}", sys.name());
                for (i, v) in per_buffer.iter().enumerate() {
                    println!("             {} <= {v}", sys.buffer_name(i));
                }
            }
            Boundedness::Unbounded { witness } => {
                let cycle: Vec<String> =
                    witness.cycle.iter().map(|l| l.display(&sys)).collect();
                println!("{:<10} unbounded, pumpable cycle: {}", sys.name(), cycle.join(" "));
                // pump it a few times and watch a buffer grow
                for n in [1, 3, 5] {
                    let end = sys.run(&witness.pumped_actions(n)).unwrap();
                    let total: usize = end.buffers.iter().map(|b| b.len()).sum();
                    println!("             {n} pumps -> {total} pending messages");
                }
            }
        }
    }
}
