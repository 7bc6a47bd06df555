//! Regular safety checks on the Client/Server/Database protocol: the
//! built-in unspecified-reception and progress properties, control-state
//! reachability, and configuration reachability.
//!
//! ```bash
//! cargo run --example safety_properties
//! ```

use fifocheck::frontend::parse_system;
use fifocheck::safety::{
    check_safety, property_progress, property_reach_config, property_reach_control,
    property_unspecified_reception, SafetyStatus,
};

fn main() {
    let path = format!("{}/fixtures/csd.fifo", env!("CARGO_MANIFEST_DIR"));
    let sys = parse_system(&std::fs::read_to_string(path).unwrap()).unwrap();

    for property in [
        property_unspecified_reception(&sys).unwrap(),
        property_progress(&sys),
        property_reach_control(&sys, &["1", "1", "0"]).unwrap(),
        property_reach_control(&sys, &["2", "0", "0"]).unwrap(),
        property_reach_config(&sys, &sys.initial_configuration()),
    ] {
        let verdict = check_safety(&sys, &property).unwrap();
        match (verdict.status, &verdict.witness) {
            (SafetyStatus::Safe, _) => println!("{:<24} safe", verdict.property),
            (SafetyStatus::Unsafe, Some(w)) => println!(
                "{:<24} unsafe, reached by: {}",
                verdict.property,
                if w.actions.is_empty() {
                    "the empty execution".to_string()
                } else {
                    sys.display_execution(&w.actions)
                }
            ),
            (SafetyStatus::Unsafe, None) => unreachable!("unsafe verdicts carry witnesses"),
        }
    }
}
