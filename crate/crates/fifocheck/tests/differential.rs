//! Differential tests of the symbolic safety and boundedness machinery
//! against the brute-force oracle on seeded random mailbox systems.
//!
//! The property automata are additionally arbitrated by direct semantic
//! predicates computed on concrete configurations, independently of the
//! word encoding they accept.

use std::collections::BTreeSet;

use fifocheck::greedy::{check_greedy, Adjacency};
use fifocheck::model::{Configuration, System};
use fifocheck::oracle::{
    oracle_max_occupancy, oracle_reachable, random_mailbox_system, ExplorationBudget,
    RandomSystemParams,
};
use fifocheck::safety::{
    check_boundedness, check_safety, encode_configuration, property_progress,
    property_reach_control, property_unspecified_reception, Boundedness, SafetyStatus,
};

fn greedy_samples(count: u64) -> impl Iterator<Item = System> {
    let params = RandomSystemParams::default();
    (0..count)
        .map(move |seed| random_mailbox_system(seed, &params))
        .filter(|sys| check_greedy(sys, Adjacency::Full).is_greedy())
}

/// Direct reading of the unspecified-reception condition on a configuration.
fn is_unspecified_reception(system: &System, config: &Configuration) -> bool {
    let Some(owners) = system.mailbox_owners() else { return false };
    system.processes().iter().enumerate().any(|(p, auto)| {
        let receiving = auto
            .transitions
            .iter()
            .filter(|t| t.src == config.control[p])
            .all(|t| !t.action.is_send());
        if !receiving {
            return false;
        }
        let ready: BTreeSet<usize> = auto
            .transitions
            .iter()
            .filter(|t| t.src == config.control[p])
            .map(|t| t.action.message)
            .collect();
        let Some(mailbox) = owners.iter().position(|&o| o == p) else { return false };
        match config.buffers[mailbox].front() {
            Some(head) => !ready.contains(head),
            None => false,
        }
    })
}

/// Direct reading of the progress violation: non-final control, nothing
/// enabled.
fn violates_progress(system: &System, config: &Configuration) -> bool {
    !system.control_is_final(&config.control) && system.enabled(config).is_empty()
}

#[test]
fn unspecified_reception_automaton_equals_direct_predicate() {
    let budget = ExplorationBudget::new(8, 3).with_max_nodes(20_000);
    let mut configs_checked = 0usize;
    for sys in greedy_samples(60) {
        let Ok(property) = property_unspecified_reception(&sys) else { continue };
        let (configs, _) = oracle_reachable(&sys, &budget);
        for c in &configs {
            let word = encode_configuration(&sys, c);
            assert_eq!(
                property.nfa.accepts(&word),
                is_unspecified_reception(&sys, c),
                "{}: automaton and predicate disagree on {c:?}",
                sys.name()
            );
            configs_checked += 1;
        }
    }
    assert!(configs_checked > 500, "checked only {configs_checked} configurations");
}

#[test]
fn progress_automaton_equals_direct_predicate() {
    let budget = ExplorationBudget::new(8, 3).with_max_nodes(20_000);
    let mut violations_seen = 0usize;
    for sys in greedy_samples(60) {
        let property = property_progress(&sys);
        let (configs, _) = oracle_reachable(&sys, &budget);
        for c in &configs {
            let word = encode_configuration(&sys, c);
            let direct = violates_progress(&sys, c);
            assert_eq!(
                property.nfa.accepts(&word),
                direct,
                "{}: automaton and predicate disagree on {c:?}",
                sys.name()
            );
            violations_seen += usize::from(direct);
        }
    }
    assert!(violations_seen > 0, "the sample should contain stuck configurations");
}

#[test]
fn safety_verdicts_agree_with_oracle_reachability() {
    let budget = ExplorationBudget::new(8, 3).with_max_nodes(20_000);
    let (mut unsafe_confirmed, mut safe_confirmed) = (0usize, 0usize);
    for sys in greedy_samples(60) {
        let (configs, info) = oracle_reachable(&sys, &budget);
        let reachable: BTreeSet<&[usize]> =
            configs.iter().map(|c| c.control.as_slice()).collect();
        // every oracle-reachable control tuple must be reported reachable
        for control in reachable.iter().take(6) {
            let names: Vec<String> = sys
                .processes()
                .iter()
                .zip(control.iter())
                .map(|(a, &s)| a.states[s].clone())
                .collect();
            let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let property = property_reach_control(&sys, &name_refs).unwrap();
            let verdict = check_safety(&sys, &property).unwrap();
            assert_eq!(
                verdict.status,
                SafetyStatus::Unsafe,
                "{}: oracle reaches {names:?}",
                sys.name()
            );
            let w = verdict.witness.unwrap();
            let end = sys.run(&w.actions).expect("witness replays");
            assert_eq!(end.control.as_slice(), *control);
            unsafe_confirmed += 1;
        }
        // when the oracle closed the full space, unreached tuples are safe
        if info.complete {
            let arity: Vec<usize> = sys.processes().iter().map(|a| a.states.len()).collect();
            let mut all = vec![vec![]];
            for n in arity {
                all = all
                    .into_iter()
                    .flat_map(|t: Vec<usize>| {
                        (0..n).map(move |s| {
                            let mut t = t.clone();
                            t.push(s);
                            t
                        })
                    })
                    .collect();
            }
            for tuple in all.into_iter().filter(|t| !reachable.contains(t.as_slice())).take(3) {
                let names: Vec<String> = sys
                    .processes()
                    .iter()
                    .zip(&tuple)
                    .map(|(a, &s)| a.states[s].clone())
                    .collect();
                let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
                let property = property_reach_control(&sys, &name_refs).unwrap();
                let verdict = check_safety(&sys, &property).unwrap();
                assert_eq!(
                    verdict.status,
                    SafetyStatus::Safe,
                    "{}: {names:?} is unreachable in the closed space",
                    sys.name()
                );
                safe_confirmed += 1;
            }
        }
    }
    assert!(unsafe_confirmed > 50 && safe_confirmed > 10);
}

#[test]
fn bounded_verdicts_dominate_oracle_occupancy() {
    let budget = ExplorationBudget::new(10, 6).with_max_nodes(50_000);
    let (mut bounded_seen, mut unbounded_seen) = (0usize, 0usize);
    for sys in greedy_samples(80) {
        match check_boundedness(&sys).unwrap() {
            Boundedness::Bounded { per_buffer, k } => {
                bounded_seen += 1;
                let (occupancy, info) = oracle_max_occupancy(&sys, &budget);
                for (i, &seen) in occupancy.iter().enumerate() {
                    assert!(
                        seen <= per_buffer[i],
                        "{}: buffer {} reached {seen} > bound {}",
                        sys.name(),
                        sys.buffer_name(i),
                        per_buffer[i]
                    );
                }
                // on a closed space the bound is attained exactly
                if info.complete {
                    assert_eq!(per_buffer, occupancy, "{}", sys.name());
                    assert_eq!(k, occupancy.iter().copied().max().unwrap_or(0));
                }
            }
            Boundedness::Unbounded { witness } => {
                unbounded_seen += 1;
                let shallow = sys.run(&witness.pumped_actions(1)).unwrap();
                let deep = sys.run(&witness.pumped_actions(4)).unwrap();
                let grew = (0..sys.buffers().len())
                    .any(|b| deep.occupancy(b) > shallow.occupancy(b));
                assert!(grew, "{}: pump witness must grow a buffer", sys.name());
            }
        }
    }
    assert!(bounded_seen > 5 && unbounded_seen > 5, "{bounded_seen}/{unbounded_seen}");
}

#[test]
fn binary_equivalence_without_orphans() {
    // on binary systems with a closed configuration space and no orphan
    // messages, the half-duplex and greedy verdicts must coincide
    use fifocheck::halfduplex::{check_binary_half_duplex, check_no_orphan_bounded, HdStatus, OrphanStatus};
    let params = RandomSystemParams::default();
    let budget = ExplorationBudget::new(8, 4).with_max_nodes(20_000);
    let mut arbitrated = 0usize;
    for seed in 0..300u64 {
        let sys = random_mailbox_system(seed, &params);
        if !sys.is_binary() {
            continue;
        }
        let (_, info) = oracle_reachable(&sys, &budget);
        if !info.complete {
            continue;
        }
        let orphan = check_no_orphan_bounded(&sys, 8, 4);
        if orphan.status != OrphanStatus::NoOrphanWithinBounds {
            continue;
        }
        let hd = check_binary_half_duplex(&sys, 4, 16).unwrap();
        if hd.status == HdStatus::UnknownAtBound {
            continue;
        }
        let greedy = check_greedy(&sys, Adjacency::Full);
        assert_eq!(
            hd.status == HdStatus::HalfDuplex,
            greedy.is_greedy(),
            "seed {seed}: binary equivalence violated"
        );
        arbitrated += 1;
    }
    assert!(arbitrated > 20, "only {arbitrated} systems arbitrated");
}

#[test]
fn safety_oracle_finding_is_a_hard_failure() {
    // when the bounded oracle exhibits a bad configuration, the symbolic
    // check must refute: disagreement in that direction is unsound
    let budget = ExplorationBudget::new(8, 3).with_max_nodes(20_000);
    for sys in greedy_samples(60) {
        let (configs, _) = oracle_reachable(&sys, &budget);
        let progress = property_progress(&sys);
        if configs.iter().any(|c| violates_progress(&sys, c)) {
            let verdict = check_safety(&sys, &progress).unwrap();
            assert_eq!(verdict.status, SafetyStatus::Unsafe, "{}", sys.name());
            let w = verdict.witness.unwrap();
            let end = sys.run(&w.actions).unwrap();
            assert!(violates_progress(&sys, &end));
        }
        if let Ok(ur) = property_unspecified_reception(&sys) {
            if configs.iter().any(|c| is_unspecified_reception(&sys, c)) {
                let verdict = check_safety(&sys, &ur).unwrap();
                assert_eq!(verdict.status, SafetyStatus::Unsafe, "{}", sys.name());
                let w = verdict.witness.unwrap();
                let end = sys.run(&w.actions).unwrap();
                assert!(is_unspecified_reception(&sys, &end));
            }
        }
    }
}
