//! Differential testing: the symbolic greediness decision against the
//! brute-force oracle on seeded random mailbox systems, plus the bridge
//! theorem (mailbox half-duplex implies greedy) on the same samples.
//!
//! ```bash
//! cargo run --release --example random_differential -- 100
//! ```

use fifocheck::greedy::{check_greedy, Adjacency};
use fifocheck::halfduplex::{check_mailbox_half_duplex_bounded, HdStatus};
use fifocheck::oracle::{
    oracle_is_greedy_system, random_mailbox_system, ExplorationBudget, RandomSystemParams,
};

fn main() {
    let count: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(50);
    let params = RandomSystemParams::default();
    let budget = ExplorationBudget::new(8, 8).with_max_nodes(300_000);

    let (mut greedy, mut agreements, mut skipped, mut hd_count) = (0u64, 0u64, 0u64, 0u64);
    for seed in 0..count {
        let sys = random_mailbox_system(seed, &params);
        let symbolic = check_greedy(&sys, Adjacency::Full);
        let oracle = oracle_is_greedy_system(&sys, &budget);
        if oracle.greedy && !oracle.definitive {
            skipped += 1;
        } else {
            assert_eq!(
                symbolic.is_greedy(),
                oracle.greedy,
                "disagreement on seed {seed}"
            );
            agreements += 1;
        }
        if symbolic.is_greedy() {
            greedy += 1;
        }
        // bridge: a fully enumerated half-duplex system must be greedy
        let hd = check_mailbox_half_duplex_bounded(&sys, 8).unwrap();
        if hd.status == HdStatus::HalfDuplex {
            hd_count += 1;
            assert!(symbolic.is_greedy(), "seed {seed}: half-duplex system must be greedy");
        }
    }
    println!("{count} systems: {greedy} greedy, {agreements} oracle agreements, {skipped} skipped (truncated oracle)");
    println!("{hd_count} proven mailbox half-duplex, all greedy as the bridge theorem demands");
}
