//! Brute-force bounded exploration used as ground truth for the symbolic
//! procedures, plus generators for random and scaled test systems.
//!
//! Enumeration is an unreduced depth-first walk of `exec(S)` in a fixed
//! order (process index, then transition declaration order), so listings are
//! reproducible and suitable for golden files. A budget bounds execution
//! length, per-buffer occupancy and the number of enumerated executions;
//! every truncation is reported, never silent.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::causality::conflict_graph;
use crate::model::{
    Action, ActionKind, BufferId, Configuration, Execution, ProcessId, System, SystemBuilder,
    Transition,
};

#[derive(Clone, Copy, Debug)]
pub struct ExplorationBudget {
    /// Maximum execution length.
    pub depth: usize,
    /// Maximum per-buffer occupancy; sends beyond it are pruned.
    pub buffer_bound: usize,
    /// Cap on the number of enumerated executions.
    pub max_nodes: usize,
}

impl ExplorationBudget {
    pub fn new(depth: usize, buffer_bound: usize) -> Self {
        ExplorationBudget { depth, buffer_bound, max_nodes: 10_000_000 }
    }

    pub fn with_max_nodes(mut self, max_nodes: usize) -> Self {
        self.max_nodes = max_nodes;
        self
    }
}

/// How an enumeration ended. `complete` means exec(S) was exhausted: no
/// branch was cut by depth, buffer bound or the node cap.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EnumerationInfo {
    pub executions: usize,
    pub complete: bool,
    pub budget_exhausted: bool,
}

/// Depth-first enumeration of `exec(S)` within the budget. The visitor sees
/// every member (including the empty execution) exactly once, in
/// deterministic preorder.
pub fn for_each_execution(
    system: &System,
    budget: &ExplorationBudget,
    mut visit: impl FnMut(&[Action], &Configuration),
) -> EnumerationInfo {
    let mut info = EnumerationInfo { executions: 0, complete: true, budget_exhausted: false };
    let mut prefix: Vec<Action> = Vec::new();
    let mut config = system.initial_configuration();
    dfs(system, budget, &mut config, &mut prefix, &mut visit, &mut info);
    info
}

/// Feasible steps from a configuration in (process, declaration) order,
/// without building successor configurations. Actions appearing on several
/// diverging transitions of one state are reported once (the step relation
/// follows the first).
fn feasible_steps(system: &System, config: &Configuration) -> Vec<(ProcessId, Transition)> {
    let mut out: Vec<(ProcessId, Transition)> = Vec::new();
    for (p, auto) in system.processes().iter().enumerate() {
        let from = config.control[p];
        for t in auto.transitions.iter().filter(|t| t.src == from) {
            if system.owner_of(t.action) != Some(p) {
                continue;
            }
            if out.iter().any(|(q, prev)| *q == p && prev.action == t.action) {
                continue;
            }
            let feasible = match t.action.kind {
                ActionKind::Send => true,
                ActionKind::Receive => {
                    config.buffers[t.action.buffer].front() == Some(&t.action.message)
                }
            };
            if feasible {
                out.push((p, *t));
            }
        }
    }
    out
}

fn dfs(
    system: &System,
    budget: &ExplorationBudget,
    config: &mut Configuration,
    prefix: &mut Vec<Action>,
    visit: &mut impl FnMut(&[Action], &Configuration),
    info: &mut EnumerationInfo,
) {
    if info.executions >= budget.max_nodes {
        info.budget_exhausted = true;
        info.complete = false;
        return;
    }
    visit(prefix, config);
    info.executions += 1;
    let steps = feasible_steps(system, config);
    if prefix.len() == budget.depth {
        if !steps.is_empty() {
            info.complete = false;
        }
        return;
    }
    for (p, t) in steps {
        let a = t.action;
        // apply in place, recurse, undo
        match a.kind {
            ActionKind::Send => {
                if config.buffers[a.buffer].len() + 1 > budget.buffer_bound {
                    info.complete = false;
                    continue;
                }
                config.buffers[a.buffer].push_back(a.message);
            }
            ActionKind::Receive => {
                config.buffers[a.buffer].pop_front();
            }
        }
        let old = config.control[p];
        config.control[p] = t.dst;
        prefix.push(a);
        dfs(system, budget, config, prefix, visit, info);
        prefix.pop();
        config.control[p] = old;
        match a.kind {
            ActionKind::Send => {
                config.buffers[a.buffer].pop_back();
            }
            ActionKind::Receive => {
                config.buffers[a.buffer].push_front(a.message);
            }
        }
    }
}

/// Collects the enumeration into a vector (for golden files and small
/// fixtures; prefer [`for_each_execution`] for large walks).
pub fn enumerate_executions(
    system: &System,
    budget: &ExplorationBudget,
) -> (Vec<Execution>, EnumerationInfo) {
    let mut out = Vec::new();
    let info = for_each_execution(system, budget, |e, _| out.push(e.to_vec()));
    (out, info)
}

/// Ground-truth greediness: every enumerated execution must have an acyclic
/// conflict graph. A cyclic execution is a definitive counterexample even
/// under a truncated budget.
#[derive(Clone, Debug)]
pub struct OracleGreedy {
    pub greedy: bool,
    pub counterexample: Option<Execution>,
    /// False when `greedy` is true but enumeration was truncated.
    pub definitive: bool,
}

pub fn oracle_is_greedy_system(system: &System, budget: &ExplorationBudget) -> OracleGreedy {
    let mut counterexample: Option<Execution> = None;
    // a trailing send has no outgoing conflict edges, so it can never close
    // a cycle: cyclicity always shows first at a receive-ending prefix
    let info = for_each_execution(system, budget, |e, _| {
        if counterexample.is_none()
            && e.last().is_some_and(|a| !a.is_send())
            && !conflict_graph(system, e).is_acyclic()
        {
            counterexample = Some(e.to_vec());
        }
    });
    match counterexample {
        Some(e) => OracleGreedy { greedy: false, counterexample: Some(e), definitive: true },
        None => OracleGreedy { greedy: true, counterexample: None, definitive: info.complete },
    }
}

/// All configurations reachable within the budget, by breadth-first search
/// over configurations (the set of run-endpoints of enumerated executions).
pub fn oracle_reachable(
    system: &System,
    budget: &ExplorationBudget,
) -> (Vec<Configuration>, EnumerationInfo) {
    let mut info = EnumerationInfo { executions: 0, complete: true, budget_exhausted: false };
    let initial = system.initial_configuration();
    let mut seen: HashSet<Configuration> = HashSet::from([initial.clone()]);
    let mut order = vec![initial.clone()];
    let mut queue = VecDeque::from([(initial, 0usize)]);
    while let Some((config, depth)) = queue.pop_front() {
        info.executions += 1;
        if seen.len() >= budget.max_nodes {
            info.budget_exhausted = true;
            info.complete = false;
            break;
        }
        let enabled = system.enabled(&config);
        if depth == budget.depth {
            if !enabled.is_empty() {
                info.complete = false;
            }
            continue;
        }
        for (action, next) in enabled {
            if action.is_send() && next.occupancy(action.buffer) > budget.buffer_bound {
                info.complete = false;
                continue;
            }
            if seen.insert(next.clone()) {
                order.push(next.clone());
                queue.push_back((next, depth + 1));
            }
        }
    }
    (order, info)
}

/// Per-buffer maximum occupancy over every configuration visited within the
/// budget.
pub fn oracle_max_occupancy(
    system: &System,
    budget: &ExplorationBudget,
) -> (Vec<usize>, EnumerationInfo) {
    let (configs, info) = oracle_reachable(system, budget);
    let mut max = vec![0usize; system.buffers().len()];
    for c in &configs {
        for (i, b) in c.buffers.iter().enumerate() {
            max[i] = max[i].max(b.len());
        }
    }
    (max, info)
}

/// Parameters for the seeded mailbox-system generator.
#[derive(Clone, Copy, Debug)]
pub struct RandomSystemParams {
    pub max_processes: usize,
    pub max_states: usize,
    pub max_messages: usize,
    /// Upper bound on transitions drawn per process.
    pub max_transitions: usize,
}

impl Default for RandomSystemParams {
    fn default() -> Self {
        RandomSystemParams { max_processes: 3, max_states: 4, max_messages: 3, max_transitions: 6 }
    }
}

/// Seeded random mailbox system: buffers are named by processes, receives
/// read the own mailbox, sends target other processes' mailboxes. Duplicate
/// (state, action) pairs are dropped so steps stay deterministic.
pub fn random_mailbox_system(seed: u64, params: &RandomSystemParams) -> System {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_procs = rng.gen_range(2..=params.max_processes.max(2));
    let n_msgs = rng.gen_range(1..=params.max_messages.max(1));
    let names: Vec<String> = (0..n_procs).map(|p| format!("p{p}")).collect();
    let mut builder = SystemBuilder::new(&format!("random_{seed}"));
    for name in &names {
        builder.add_process(name, "0");
    }
    // processes must have disjoint action sets: once p sends m into q's
    // mailbox, no other process may use that exact send action
    let mut send_owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (p, name) in names.iter().enumerate() {
        let n_states = rng.gen_range(1..=params.max_states.max(1));
        let n_trans = rng.gen_range(1..=params.max_transitions.max(1));
        let mut used: HashSet<(usize, BufferId, ActionKind, usize)> = HashSet::new();
        for _ in 0..n_trans {
            let src = rng.gen_range(0..n_states);
            let dst = rng.gen_range(0..n_states);
            let msg = rng.gen_range(0..n_msgs);
            let send = n_procs > 1 && rng.gen_bool(0.5);
            let (buffer, kind) = if send {
                let mut q = rng.gen_range(0..n_procs - 1);
                if q >= p {
                    q += 1;
                }
                (q, ActionKind::Send)
            } else {
                (p, ActionKind::Receive)
            };
            if kind == ActionKind::Send {
                match send_owner.get(&(buffer, msg)) {
                    Some(&owner) if owner != p => continue,
                    _ => {
                        send_owner.insert((buffer, msg), p);
                    }
                }
            }
            if !used.insert((src, buffer, kind, msg)) {
                continue;
            }
            builder.add_transition(
                name,
                &src.to_string(),
                &names[buffer],
                kind,
                &format!("m{msg}"),
                &dst.to_string(),
            );
        }
    }
    builder.build().expect("generated system is well-formed")
}

/// A client/server pair exchanging `n` sequential, mutually independent
/// request/response rounds with distinct messages. Used for complexity
/// scaling checks: the process count stays fixed while the size grows.
pub fn chain_system(n: usize) -> System {
    let mut builder = SystemBuilder::new(&format!("chain_{n}"));
    builder.add_process("client", "0");
    builder.add_process("server", "0");
    for i in 0..n {
        let (a, b, c) = (2 * i, 2 * i + 1, 2 * i + 2);
        builder.add_transition(
            "client",
            &a.to_string(),
            "s",
            ActionKind::Send,
            &format!("req{i}"),
            &b.to_string(),
        );
        builder.add_transition(
            "client",
            &b.to_string(),
            "c",
            ActionKind::Receive,
            &format!("res{i}"),
            &c.to_string(),
        );
        builder.add_transition(
            "server",
            &a.to_string(),
            "s",
            ActionKind::Receive,
            &format!("req{i}"),
            &b.to_string(),
        );
        builder.add_transition(
            "server",
            &b.to_string(),
            "c",
            ActionKind::Send,
            &format!("res{i}"),
            &c.to_string(),
        );
    }
    builder.build().expect("chain system is well-formed")
}

/// Renders an enumeration in the golden-file format: one execution per line,
/// actions as `process:buffer!msg` tokens, the empty execution as `ε`.
pub fn render_listing(system: &System, executions: &[Execution]) -> String {
    let mut out = String::new();
    for e in executions {
        if e.is_empty() {
            out.push('ε');
        } else {
            out.push_str(&system.display_execution(e));
        }
        out.push('\n');
    }
    out
}

/// Deduplicated count of control states visited at any budget depth; handy
/// in reports.
pub fn reachable_control_count(system: &System, budget: &ExplorationBudget) -> usize {
    let (configs, _) = oracle_reachable(system, budget);
    let controls: HashSet<Vec<usize>> = configs.into_iter().map(|c| c.control).collect();
    controls.len()
}

/// FIFO sanity used by property tests: per buffer, the sequence of received
/// messages must be a prefix of the sequence of sent messages.
pub fn fifo_residues(_system: &System, e: &[Action]) -> bool {
    let mut sent: HashMap<BufferId, Vec<usize>> = HashMap::new();
    let mut received: HashMap<BufferId, Vec<usize>> = HashMap::new();
    for a in e {
        match a.kind {
            ActionKind::Send => sent.entry(a.buffer).or_default().push(a.message),
            ActionKind::Receive => received.entry(a.buffer).or_default().push(a.message),
        }
    }
    received.iter().all(|(buffer, recv)| {
        let sent = sent.get(buffer).cloned().unwrap_or_default();
        recv.len() <= sent.len() && sent[..recv.len()] == recv[..]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_system;

    fn xchg() -> System {
        parse_system(include_str!("../fixtures/xchg.fifo")).unwrap()
    }

    fn csd() -> System {
        parse_system(include_str!("../fixtures/csd.fifo")).unwrap()
    }

    #[test]
    fn depth_zero_yields_only_empty() {
        let sys = xchg();
        let (execs, info) = enumerate_executions(&sys, &ExplorationBudget::new(0, 4));
        assert_eq!(execs, vec![Vec::new()]);
        assert!(!info.complete); // sends were cut at depth 0
    }

    #[test]
    fn xchg_depth4_matches_golden() {
        let sys = xchg();
        let (execs, info) = enumerate_executions(&sys, &ExplorationBudget::new(4, 4));
        assert!(info.complete);
        assert_eq!(execs.len(), 13);
        let listing = render_listing(&sys, &execs);
        assert_eq!(listing, include_str!("../fixtures/xchg_depth4.golden"));
    }

    #[test]
    fn csd_depth2_matches_golden() {
        let sys = csd();
        let (execs, _) = enumerate_executions(&sys, &ExplorationBudget::new(2, 4));
        let listing = render_listing(&sys, &execs);
        assert_eq!(listing, include_str!("../fixtures/csd_depth2.golden"));
    }

    #[test]
    fn oracle_greedy_verdicts() {
        let xchg = xchg();
        let verdict = oracle_is_greedy_system(&xchg, &ExplorationBudget::new(4, 4));
        assert!(!verdict.greedy);
        assert!(verdict.definitive);
        let e = verdict.counterexample.unwrap();
        assert!(!conflict_graph(&xchg, &e).is_acyclic());

        let csd = csd();
        let verdict = oracle_is_greedy_system(&csd, &ExplorationBudget::new(8, 4));
        assert!(verdict.greedy);

        let empty = SystemBuilder::new("empty").build().unwrap();
        let verdict = oracle_is_greedy_system(&empty, &ExplorationBudget::new(4, 4));
        assert!(verdict.greedy && verdict.definitive);
    }

    #[test]
    fn xchg_has_seven_reachable_configurations() {
        let sys = xchg();
        let (configs, info) = oracle_reachable(&sys, &ExplorationBudget::new(16, 4));
        assert!(info.complete);
        assert_eq!(configs.len(), 7);
    }

    #[test]
    fn reachable_depth_zero_is_initial() {
        let sys = xchg();
        let (configs, _) = oracle_reachable(&sys, &ExplorationBudget::new(0, 4));
        assert_eq!(configs, vec![sys.initial_configuration()]);
    }

    #[test]
    fn abc_occupancy_grows_with_depth() {
        let sys = parse_system(include_str!("../fixtures/abc.fifo")).unwrap();
        let (occ9, _) = oracle_max_occupancy(&sys, &ExplorationBudget::new(9, 10));
        assert_eq!(occ9, vec![3, 3, 3]);
        let (occ12, _) = oracle_max_occupancy(&sys, &ExplorationBudget::new(12, 10));
        assert_eq!(occ12, vec![4, 4, 4]);
    }

    #[test]
    fn ping_occupancy_is_one() {
        let sys = parse_system(include_str!("../fixtures/ping.fifo")).unwrap();
        let (occ, info) = oracle_max_occupancy(&sys, &ExplorationBudget::new(8, 8));
        assert!(info.complete);
        assert_eq!(occ, vec![1]);
    }

    #[test]
    fn csd_buffer_d_piles_up() {
        let sys = csd();
        let (occ, _) = oracle_max_occupancy(&sys, &ExplorationBudget::new(10, 4));
        let d = sys.buffer_index("d").unwrap();
        assert!(occ[d] >= 2, "buffer d should exceed one pending log, got {occ:?}");
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let sys = csd();
        let budget = ExplorationBudget::new(10, 4).with_max_nodes(5);
        let (execs, info) = enumerate_executions(&sys, &budget);
        assert_eq!(execs.len(), 5);
        assert!(info.budget_exhausted);
        assert!(!info.complete);
    }

    #[test]
    fn random_systems_are_valid_mailbox() {
        for seed in 0..30 {
            let sys = random_mailbox_system(seed, &RandomSystemParams::default());
            assert!(sys.validate().is_empty(), "seed {seed}");
            assert!(sys.is_mailbox(), "seed {seed}");
        }
    }

    #[test]
    fn random_systems_are_reproducible() {
        let a = random_mailbox_system(42, &RandomSystemParams::default());
        let b = random_mailbox_system(42, &RandomSystemParams::default());
        assert_eq!(a, b);
    }

    #[test]
    fn chain_system_is_lockstep() {
        let sys = chain_system(3);
        assert!(sys.validate().is_empty());
        assert!(sys.is_mailbox());
        let (_, info) = enumerate_executions(&sys, &ExplorationBudget::new(12, 2));
        assert!(info.complete);
    }

    #[test]
    fn fifo_residues_hold_on_enumerated_executions() {
        let sys = csd();
        let info = for_each_execution(&sys, &ExplorationBudget::new(8, 4), |e, _| {
            assert!(fifo_residues(&sys, e));
        });
        assert!(info.executions > 30);
    }
}
