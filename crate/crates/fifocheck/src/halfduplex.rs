//! Binary and mailbox half-duplex analysis.
//!
//! A mailbox execution is half-duplex when every process's own mailbox is
//! empty at each of its sends; a mailbox system is half-duplex when every
//! execution has a causally equivalent half-duplex one. For binary systems
//! this coincides with the classic condition that no reachable configuration
//! has both buffers nonempty. Mailbox half-duplexness has no decision
//! procedure here: the checks are bounded semi-decisions with explicit
//! three-valued verdicts, never claiming unbounded completeness.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::causality::{action_graph, matching_pairs};
use crate::model::{
    Action, BufferId, Configuration, Execution, MessageId, ProcessId, System,
};
use crate::oracle::{for_each_execution, ExplorationBudget};

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum HdError {
    #[error("the check requires a mailbox system")]
    NotMailbox,
    #[error("the check requires a binary system")]
    NotBinary,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HdStatus {
    HalfDuplex,
    NotHalfDuplex,
    UnknownAtBound,
}

#[derive(Clone, Debug)]
pub struct HalfDuplexVerdict {
    pub status: HdStatus,
    /// For `NotHalfDuplex`: an execution none of whose causally equivalent
    /// linearizations is half-duplex (mailbox), or one reaching a
    /// configuration with both buffers nonempty (binary).
    pub witness: Option<Execution>,
    pub depth: usize,
    pub buffer_bound: Option<usize>,
}

/// The buffer each process dequeues from, when the system is mailbox.
fn own_mailbox(system: &System) -> Result<Vec<Option<BufferId>>, HdError> {
    let owners = system.mailbox_owners().ok_or(HdError::NotMailbox)?;
    Ok((0..system.processes().len())
        .map(|p| owners.iter().position(|&o| o == p))
        .collect())
}

/// True iff every send happens while the sender's own mailbox is empty.
pub fn is_half_duplex_execution(system: &System, e: &[Action]) -> Result<bool, HdError> {
    let mailbox = own_mailbox(system)?;
    let mut config = system.initial_configuration();
    for &a in e {
        let p = system.owner_of(a).expect("action owned by the system");
        if a.is_send() {
            if let Some(mb) = mailbox[p] {
                if !config.buffers[mb].is_empty() {
                    return Ok(false);
                }
            }
        }
        config = system.step(&config, a).expect("execution replays");
    }
    Ok(true)
}

/// Binary half-duplex condition on a configuration: at least one of the two
/// buffers is empty.
pub fn is_binary_half_duplex_config(
    system: &System,
    config: &Configuration,
) -> Result<bool, HdError> {
    if !system.is_binary() {
        return Err(HdError::NotBinary);
    }
    Ok(config.buffers.iter().filter(|b| !b.is_empty()).count() <= 1)
}

/// Breadth-first exploration of the reachable configurations of a binary
/// system. Any reachable non-half-duplex configuration refutes; a visited-set
/// fixpoint with no pruning event confirms; anything else is unknown.
pub fn check_binary_half_duplex(
    system: &System,
    buffer_bound: usize,
    depth: usize,
) -> Result<HalfDuplexVerdict, HdError> {
    if !system.is_binary() {
        return Err(HdError::NotBinary);
    }
    let initial = system.initial_configuration();
    let mut parents: HashMap<Configuration, (Configuration, Action)> = HashMap::new();
    let mut seen: HashSet<Configuration> = HashSet::from([initial.clone()]);
    let mut queue = VecDeque::from([(initial.clone(), 0usize)]);
    let mut pruned = false;
    let unwind = |parents: &HashMap<Configuration, (Configuration, Action)>,
                  mut config: Configuration|
     -> Execution {
        let mut actions = Vec::new();
        while let Some((prev, a)) = parents.get(&config) {
            actions.push(*a);
            config = prev.clone();
        }
        actions.reverse();
        actions
    };
    if !is_binary_half_duplex_config(system, &initial)? {
        return Ok(HalfDuplexVerdict {
            status: HdStatus::NotHalfDuplex,
            witness: Some(Vec::new()),
            depth,
            buffer_bound: Some(buffer_bound),
        });
    }
    while let Some((config, level)) = queue.pop_front() {
        let enabled = system.enabled(&config);
        if level == depth {
            if !enabled.is_empty() {
                pruned = true;
            }
            continue;
        }
        for (action, next) in enabled {
            if action.is_send() && next.occupancy(action.buffer) > buffer_bound {
                pruned = true;
                continue;
            }
            if !seen.insert(next.clone()) {
                continue;
            }
            parents.insert(next.clone(), (config.clone(), action));
            if !is_binary_half_duplex_config(system, &next)? {
                return Ok(HalfDuplexVerdict {
                    status: HdStatus::NotHalfDuplex,
                    witness: Some(unwind(&parents, next)),
                    depth,
                    buffer_bound: Some(buffer_bound),
                });
            }
            queue.push_back((next, level + 1));
        }
    }
    Ok(HalfDuplexVerdict {
        status: if pruned { HdStatus::UnknownAtBound } else { HdStatus::HalfDuplex },
        witness: None,
        depth,
        buffer_bound: Some(buffer_bound),
    })
}

/// One communication keyed by buffer, per-buffer position, and the
/// per-process slots of its send and receive.
type CommSlot = (BufferId, usize, (ProcessId, usize), Option<(ProcessId, usize)>);

/// Canonical key of an execution's trace-equivalence class: communications
/// identified by per-buffer position and per-process slots. Causally
/// equivalent executions share the key and have the same half-duplex verdict.
fn trace_key(system: &System, e: &[Action]) -> Vec<CommSlot> {
    let comms = matching_pairs(e).expect("execution replays");
    let mut slot_of = vec![0usize; e.len()];
    let mut counters: HashMap<ProcessId, usize> = HashMap::new();
    let owners: Vec<ProcessId> =
        e.iter().map(|&a| system.owner_of(a).expect("owned action")).collect();
    for (j, &p) in owners.iter().enumerate() {
        let c = counters.entry(p).or_insert(0);
        slot_of[j] = *c;
        *c += 1;
    }
    let mut per_buffer: HashMap<BufferId, usize> = HashMap::new();
    let mut key: Vec<CommSlot> = comms
        .iter()
        .map(|c| {
            let k = per_buffer.entry(c.buffer).or_insert(0);
            let pos = *k;
            *k += 1;
            (
                c.buffer,
                pos,
                (owners[c.send], slot_of[c.send]),
                c.receive.map(|r| (owners[r], slot_of[r])),
            )
        })
        .collect();
    key.sort();
    key
}

/// Searches the linear extensions of the action graph for a half-duplex one,
/// walking downsets with memoized dead frontiers.
fn has_half_duplex_linearization(system: &System, e: &[Action]) -> Result<bool, HdError> {
    let mailbox = own_mailbox(system)?;
    assert!(e.len() <= 64, "linearization search limited to 64 actions");
    let graph = action_graph(system, e);
    let mut preds = vec![0u64; e.len()];
    for &(j, k) in &graph.edges {
        preds[k] |= 1 << j;
    }
    let owners = &graph.owners;
    let full: u64 = if e.len() == 64 { u64::MAX } else { (1 << e.len()) - 1 };
    let mut occupancy = vec![0usize; system.buffers().len()];
    let mut dead: HashSet<u64> = HashSet::new();

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        e: &[Action],
        preds: &[u64],
        owners: &[ProcessId],
        mailbox: &[Option<BufferId>],
        full: u64,
        consumed: u64,
        occupancy: &mut Vec<usize>,
        dead: &mut HashSet<u64>,
    ) -> bool {
        if consumed == full {
            return true;
        }
        if dead.contains(&consumed) {
            return false;
        }
        for (j, &a) in e.iter().enumerate() {
            if consumed & (1 << j) != 0 || preds[j] & !consumed != 0 {
                continue;
            }
            if a.is_send() {
                if let Some(mb) = mailbox[owners[j]] {
                    if occupancy[mb] > 0 {
                        continue;
                    }
                }
                occupancy[a.buffer] += 1;
            } else {
                occupancy[a.buffer] -= 1;
            }
            let found = dfs(e, preds, owners, mailbox, full, consumed | (1 << j), occupancy, dead);
            if a.is_send() {
                occupancy[a.buffer] -= 1;
            } else {
                occupancy[a.buffer] += 1;
            }
            if found {
                return true;
            }
        }
        dead.insert(consumed);
        false
    }

    Ok(dfs(e, &preds, owners, &mailbox, full, 0, &mut occupancy, &mut dead))
}

/// Bounded mailbox half-duplex check: every execution up to `depth` must
/// have some half-duplex linearization of its action graph. `HalfDuplex` is
/// claimed only when `exec(S)` was exhausted below the depth; otherwise a
/// clean pass is `UnknownAtBound`.
pub fn check_mailbox_half_duplex_bounded(
    system: &System,
    depth: usize,
) -> Result<HalfDuplexVerdict, HdError> {
    if !system.is_mailbox() {
        return Err(HdError::NotMailbox);
    }
    let budget = ExplorationBudget::new(depth, depth.max(1));
    let mut witness: Option<Execution> = None;
    let mut checked: HashSet<Vec<CommSlot>> = HashSet::new();
    let info = for_each_execution(system, &budget, |e, _| {
        if witness.is_some() || e.is_empty() {
            return;
        }
        if !checked.insert(trace_key(system, e)) {
            return;
        }
        let ok = has_half_duplex_linearization(system, e).expect("mailbox checked above");
        if !ok {
            witness = Some(e.to_vec());
        }
    });
    let status = match (&witness, info.complete) {
        (Some(_), _) => HdStatus::NotHalfDuplex,
        (None, true) => HdStatus::HalfDuplex,
        (None, false) => HdStatus::UnknownAtBound,
    };
    Ok(HalfDuplexVerdict { status, witness, depth, buffer_bound: None })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrphanStatus {
    NoOrphanWithinBounds,
    OrphanCandidate,
}

/// A buffered message instance no bounded continuation ever receives.
#[derive(Clone, Debug)]
pub struct OrphanWitness {
    pub reaching: Execution,
    pub config: Configuration,
    pub buffer: BufferId,
    /// 0-based position from the head of the buffer.
    pub position: usize,
    pub message: MessageId,
}

#[derive(Clone, Debug)]
pub struct OrphanVerdict {
    pub status: OrphanStatus,
    pub witness: Option<OrphanWitness>,
    pub depth: usize,
    pub buffer_bound: usize,
}

/// Max receives per buffer achievable from `config` within `depth` steps,
/// memoized over (configuration, remaining depth).
fn max_receives(
    system: &System,
    config: &Configuration,
    depth: usize,
    buffer_bound: usize,
    memo: &mut HashMap<(Configuration, usize), Vec<usize>>,
) -> Vec<usize> {
    if let Some(hit) = memo.get(&(config.clone(), depth)) {
        return hit.clone();
    }
    let mut best = vec![0usize; system.buffers().len()];
    if depth > 0 {
        for (action, next) in system.enabled(config) {
            if action.is_send() && next.occupancy(action.buffer) > buffer_bound {
                continue;
            }
            let sub = max_receives(system, &next, depth - 1, buffer_bound, memo);
            for (i, &v) in sub.iter().enumerate() {
                let gain = v + usize::from(!action.is_send() && action.buffer == i);
                best[i] = best[i].max(gain);
            }
        }
    }
    memo.insert((config.clone(), depth), best.clone());
    best
}

/// Bounded search for orphan messages: for every configuration reachable
/// within the bounds and every buffered message instance, some continuation
/// must receive it. Verdicts are always qualified by the bounds.
pub fn check_no_orphan_bounded(
    system: &System,
    depth: usize,
    buffer_bound: usize,
) -> OrphanVerdict {
    let initial = system.initial_configuration();
    let mut parents: HashMap<Configuration, (Configuration, Action)> = HashMap::new();
    let mut seen: HashSet<Configuration> = HashSet::from([initial.clone()]);
    let mut queue = VecDeque::from([(initial, 0usize)]);
    let mut memo: HashMap<(Configuration, usize), Vec<usize>> = HashMap::new();
    let unwind = |parents: &HashMap<Configuration, (Configuration, Action)>,
                  mut config: Configuration|
     -> Execution {
        let mut actions = Vec::new();
        while let Some((prev, a)) = parents.get(&config) {
            actions.push(*a);
            config = prev.clone();
        }
        actions.reverse();
        actions
    };
    while let Some((config, level)) = queue.pop_front() {
        if !config.buffers_empty() {
            let receivable = max_receives(system, &config, depth, buffer_bound, &mut memo);
            for (i, buffer) in config.buffers.iter().enumerate() {
                if buffer.len() > receivable[i] {
                    let position = receivable[i];
                    return OrphanVerdict {
                        status: OrphanStatus::OrphanCandidate,
                        witness: Some(OrphanWitness {
                            reaching: unwind(&parents, config.clone()),
                            config: config.clone(),
                            buffer: i,
                            position,
                            message: buffer[position],
                        }),
                        depth,
                        buffer_bound,
                    };
                }
            }
        }
        if level == depth {
            continue;
        }
        for (action, next) in system.enabled(&config) {
            if action.is_send() && next.occupancy(action.buffer) > buffer_bound {
                continue;
            }
            if seen.insert(next.clone()) {
                parents.insert(next.clone(), (config.clone(), action));
                queue.push_back((next, level + 1));
            }
        }
    }
    OrphanVerdict { status: OrphanStatus::NoOrphanWithinBounds, witness: None, depth, buffer_bound }
}
