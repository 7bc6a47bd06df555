//! Step-by-step replay of a trace, printing buffer contents after each
//! action, then the final configuration as JSON.
//!
//! ```bash
//! cargo run --example simulate_trace
//! ```

use fifocheck::frontend::{parse_system, parse_trace};

fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).expect("fixture exists")
}

fn main() {
    let sys = parse_system(&fixture("csd.fifo")).unwrap();
    let trace = parse_trace(&sys, &fixture("fig2.trace")).unwrap();

    let mut config = sys.initial_configuration();
    for (i, &action) in trace.iter().enumerate() {
        config = sys.step(&config, action).unwrap();
        let buffers: Vec<String> = config
            .buffers
            .iter()
            .enumerate()
            .map(|(b, content)| {
                let msgs: Vec<&str> =
                    content.iter().map(|&m| sys.message_name(m)).collect();
                format!("{}=[{}]", sys.buffer_name(b), msgs.join(","))
            })
            .collect();
        println!(
            "{:>2}  {:<22} {}",
            i + 1,
            sys.display_action_owned(action),
            buffers.join(" ")
        );
    }
    println!("\nfinal configuration:\n{:#}", sys.config_json(&config));

    // what could have happened instead at the end
    let enabled = sys.enabled(&config);
    println!("\nenabled next:");
    for (a, _) in enabled {
        println!("  {}", sys.display_action_owned(a));
    }
}
