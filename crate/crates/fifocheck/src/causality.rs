//! Matching pairs, communications, action graphs, conflict graphs, causal
//! equivalence and greedy rescheduling.
//!
//! Within an execution, the k-th send on a buffer matches the k-th receive on
//! that buffer; a *communication* is a matching pair or an unmatched send.
//! The *action graph* orders execution indices by happens-before (program
//! order, non-commutation, matching); the *conflict graph* is its quotient by
//! communications. Acyclicity of the conflict graph characterizes the
//! executions that can be rescheduled into a greedy one.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::model::{Action, ActionKind, BufferId, Execution, MessageId, ProcessId, System};

/// A matching pair (send index + receive index) or an unmatched send.
/// Indices are 0-based positions in the execution.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Communication {
    pub buffer: BufferId,
    pub message: MessageId,
    pub send: usize,
    pub receive: Option<usize>,
}

impl Communication {
    pub fn is_matched(&self) -> bool {
        self.receive.is_some()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.send == index || self.receive == Some(index)
    }
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum MalformedExecution {
    #[error("receive at index {index} has no earlier matching send on its buffer")]
    UnmatchedReceive { index: usize },
    #[error("receive at index {index} does not carry the message of its matching send at {send}")]
    MessageMismatch { index: usize, send: usize },
}

/// Partitions the indices of `e` into matched pairs and unmatched sends by
/// the k-th-send/k-th-receive rule, ordered by send index. Fails only for
/// sequences outside `exec(S)`.
pub fn matching_pairs(e: &[Action]) -> Result<Vec<Communication>, MalformedExecution> {
    let mut comms: Vec<Communication> = Vec::new();
    let mut pending: HashMap<BufferId, std::collections::VecDeque<usize>> = HashMap::new();
    for (j, a) in e.iter().enumerate() {
        match a.kind {
            ActionKind::Send => {
                pending.entry(a.buffer).or_default().push_back(comms.len());
                comms.push(Communication {
                    buffer: a.buffer,
                    message: a.message,
                    send: j,
                    receive: None,
                });
            }
            ActionKind::Receive => {
                let ci = pending
                    .get_mut(&a.buffer)
                    .and_then(|q| q.pop_front())
                    .ok_or(MalformedExecution::UnmatchedReceive { index: j })?;
                if comms[ci].message != a.message {
                    return Err(MalformedExecution::MessageMismatch { index: j, send: comms[ci].send });
                }
                comms[ci].receive = Some(j);
            }
        }
    }
    Ok(comms)
}

/// Two actions commute when they belong to different processes and are not
/// two actions of the same kind on the same buffer. Panics if an action is
/// not owned by any process of the system.
pub fn commutes(system: &System, a1: Action, a2: Action) -> bool {
    let p1 = system.owner_of(a1).expect("action not owned by any process");
    let p2 = system.owner_of(a2).expect("action not owned by any process");
    p1 != p2 && !(a1.kind == a2.kind && a1.buffer == a2.buffer)
}

/// Happens-before graph on execution indices: `j -> j'` iff `j < j'` and the
/// actions do not commute or `{j, j'}` is a matching pair.
#[derive(Clone, Debug)]
pub struct ActionGraph {
    pub labels: Vec<Action>,
    pub owners: Vec<ProcessId>,
    /// All happens-before pairs, sorted.
    pub edges: Vec<(usize, usize)>,
    matching: Vec<(usize, usize)>,
}

/// Builds the action graph. The execution must replay (`e ∈ exec(S)`);
/// malformed sequences panic.
pub fn action_graph(system: &System, e: &[Action]) -> ActionGraph {
    let comms = matching_pairs(e).expect("execution outside exec(S)");
    let matching: Vec<(usize, usize)> =
        comms.iter().filter_map(|c| c.receive.map(|r| (c.send, r))).collect();
    let owners: Vec<ProcessId> = e
        .iter()
        .map(|&a| system.owner_of(a).expect("action not owned by any process"))
        .collect();
    let mut edges = Vec::new();
    for j in 0..e.len() {
        for k in j + 1..e.len() {
            if !commutes(system, e[j], e[k]) || matching.contains(&(j, k)) {
                edges.push((j, k));
            }
        }
    }
    ActionGraph { labels: e.to_vec(), owners, edges, matching }
}

impl ActionGraph {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn is_matching_pair(&self, j: usize, k: usize) -> bool {
        self.matching.contains(&(j, k))
    }

    fn reachable(&self) -> Vec<BTreeSet<usize>> {
        // edges always point forward, so a reverse sweep closes transitively
        let n = self.len();
        let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for &(j, k) in &self.edges {
            succ[j].insert(k);
        }
        for j in (0..n).rev() {
            let direct: Vec<usize> = succ[j].iter().copied().collect();
            for k in direct {
                let further: Vec<usize> = succ[k].iter().copied().collect();
                succ[j].extend(further);
            }
        }
        succ
    }

    /// The rendering-oriented reduction: keeps per-process successor edges
    /// and matching pairs, elides every other edge that follows from
    /// transitivity.
    pub fn reduced_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut keep: BTreeSet<(usize, usize)> = self.matching.iter().copied().collect();
        let mut last_of: HashMap<ProcessId, usize> = HashMap::new();
        for j in 0..n {
            if let Some(&prev) = last_of.get(&self.owners[j]) {
                keep.insert((prev, j));
            }
            last_of.insert(self.owners[j], j);
        }
        let reach = self.reachable();
        for &(j, k) in &self.edges {
            if keep.contains(&(j, k)) {
                continue;
            }
            let implied = self
                .edges
                .iter()
                .any(|&(a, b)| a == j && b != k && reach[b].contains(&k));
            if !implied {
                keep.insert((j, k));
            }
        }
        keep.into_iter().collect()
    }
}

/// Which constituents witness a conflict edge: send or receive of the source
/// communication happening before send or receive of the target.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum EdgeKind {
    SS,
    SR,
    RS,
    RR,
}

/// Quotient of the action graph by communications. Edges carry every
/// witnessing kind; self-loops (the internal send-receive order of a matched
/// pair) are excluded.
#[derive(Clone, Debug)]
pub struct ConflictGraph {
    pub comms: Vec<Communication>,
    pub edges: BTreeMap<(usize, usize), BTreeSet<EdgeKind>>,
}

pub fn conflict_graph(system: &System, e: &[Action]) -> ConflictGraph {
    let graph = action_graph(system, e);
    conflict_graph_from(&graph, e)
}

fn conflict_graph_from(graph: &ActionGraph, e: &[Action]) -> ConflictGraph {
    let comms = matching_pairs(e).expect("execution outside exec(S)");
    let mut comm_of = vec![usize::MAX; e.len()];
    for (ci, c) in comms.iter().enumerate() {
        comm_of[c.send] = ci;
        if let Some(r) = c.receive {
            comm_of[r] = ci;
        }
    }
    let mut edges: BTreeMap<(usize, usize), BTreeSet<EdgeKind>> = BTreeMap::new();
    for &(j, k) in &graph.edges {
        let (c1, c2) = (comm_of[j], comm_of[k]);
        if c1 == c2 {
            continue;
        }
        let kind = match (e[j].is_send(), e[k].is_send()) {
            (true, true) => EdgeKind::SS,
            (true, false) => EdgeKind::SR,
            (false, true) => EdgeKind::RS,
            (false, false) => EdgeKind::RR,
        };
        edges.entry((c1, c2)).or_default().insert(kind);
    }
    ConflictGraph { comms, edges }
}

impl ConflictGraph {
    pub fn edge_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.keys().copied()
    }

    fn successors(&self, c: usize) -> Vec<usize> {
        self.edges.keys().filter(|&&(a, _)| a == c).map(|&(_, b)| b).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Kahn's scheme with deterministic tie-breaking by smallest send index;
    /// `None` when the graph is cyclic.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.comms.len();
        let mut indegree = vec![0usize; n];
        for &(_, b) in self.edges.keys() {
            indegree[b] += 1;
        }
        // min-heap keyed by original send index
        let mut ready: BTreeSet<(usize, usize)> = (0..n)
            .filter(|&c| indegree[c] == 0)
            .map(|c| (self.comms[c].send, c))
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(&(key, c)) = ready.iter().next() {
            ready.remove(&(key, c));
            order.push(c);
            for next in self.successors(c) {
                indegree[next] -= 1;
                if indegree[next] == 0 {
                    ready.insert((self.comms[next].send, next));
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// A shortest cycle, as communication indices in traversal order;
    /// deterministic (BFS from each vertex in ascending order).
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        let n = self.comms.len();
        let mut best: Option<Vec<usize>> = None;
        for start in 0..n {
            // BFS back to start
            let mut parent: HashMap<usize, usize> = HashMap::new();
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(start);
            let mut seen = vec![false; n];
            seen[start] = true;
            'bfs: while let Some(c) = queue.pop_front() {
                for next in self.successors(c) {
                    if next == start {
                        let mut cycle = vec![start];
                        let mut cur = c;
                        while cur != start {
                            cycle.push(cur);
                            cur = parent[&cur];
                        }
                        cycle.reverse();
                        // cycle now starts just after start; rotate start first
                        cycle.rotate_right(1);
                        if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                            best = Some(cycle);
                        }
                        break 'bfs;
                    }
                    if !seen[next] {
                        seen[next] = true;
                        parent.insert(next, c);
                        queue.push_back(next);
                    }
                }
            }
        }
        best
    }

    /// Reduction used for rendering: the quotient of the reduced action
    /// graph. Applied only when acyclic; cyclic graphs render in full.
    pub fn reduced_pairs(&self, graph: &ActionGraph) -> Vec<(usize, usize)> {
        if !self.is_acyclic() {
            return self.edge_pairs().collect();
        }
        let mut comm_of = vec![usize::MAX; graph.len()];
        for (ci, c) in self.comms.iter().enumerate() {
            comm_of[c.send] = ci;
            if let Some(r) = c.receive {
                comm_of[r] = ci;
            }
        }
        let mut out = BTreeSet::new();
        for (j, k) in graph.reduced_edges() {
            let (c1, c2) = (comm_of[j], comm_of[k]);
            if c1 != c2 {
                out.insert((c1, c2));
            }
        }
        out.into_iter().collect()
    }
}

/// An execution is greedy when every matching pair is adjacent (`{j, j+1}`).
pub fn is_greedy_execution(e: &[Action]) -> bool {
    match matching_pairs(e) {
        Ok(comms) => comms
            .iter()
            .all(|c| c.receive.is_none_or(|r| r == c.send + 1)),
        Err(_) => false,
    }
}

#[derive(Error, Clone, Debug)]
#[error("conflict graph has a cycle through {} communications", cycle.len())]
pub struct CyclicConflictGraph {
    /// One witnessing cycle, in traversal order.
    pub cycle: Vec<Communication>,
}

/// Reschedules `e` into a causally equivalent greedy execution by
/// concatenating its communications in topological order of the conflict
/// graph. Fails with a witness cycle when no such order exists.
pub fn reschedule_greedy(system: &System, e: &[Action]) -> Result<Execution, CyclicConflictGraph> {
    let cg = conflict_graph(system, e);
    match cg.topological_order() {
        Some(order) => {
            let mut out = Vec::with_capacity(e.len());
            for c in order {
                let c = &cg.comms[c];
                out.push(e[c.send]);
                if let Some(r) = c.receive {
                    out.push(e[r]);
                }
            }
            Ok(out)
        }
        None => {
            let cycle = cg.find_cycle().expect("cyclic graph must contain a cycle");
            Err(CyclicConflictGraph { cycle: cycle.into_iter().map(|c| cg.comms[c]).collect() })
        }
    }
}

/// Causal equivalence via the canonical per-process bijection: both
/// executions must have identical per-process action sequences, and each must
/// be a linear extension of the other's happens-before relation.
pub fn causally_equivalent(system: &System, e1: &[Action], e2: &[Action]) -> bool {
    if e1.len() != e2.len() {
        return false;
    }
    let owners1: Vec<ProcessId> = e1.iter().map(|&a| system.owner_of(a).unwrap()).collect();
    let owners2: Vec<ProcessId> = e2.iter().map(|&a| system.owner_of(a).unwrap()).collect();
    // k-th action of process p in e1 maps to k-th action of p in e2
    let mut slots: HashMap<ProcessId, Vec<usize>> = HashMap::new();
    for (i, &p) in owners2.iter().enumerate() {
        slots.entry(p).or_default().push(i);
    }
    let mut used: HashMap<ProcessId, usize> = HashMap::new();
    let mut forward = vec![usize::MAX; e1.len()];
    for (j, &p) in owners1.iter().enumerate() {
        let k = used.entry(p).or_insert(0);
        let Some(&image) = slots.get(&p).and_then(|v| v.get(*k)) else {
            return false;
        };
        if e2[image] != e1[j] {
            return false;
        }
        forward[j] = image;
        *k += 1;
    }
    if used.iter().any(|(p, &k)| slots.get(p).map_or(0, Vec::len) != k) {
        return false;
    }
    let mut backward = vec![usize::MAX; e2.len()];
    for (j, &image) in forward.iter().enumerate() {
        backward[image] = j;
    }
    let g1 = action_graph(system, e1);
    let g2 = action_graph(system, e2);
    g1.edges.iter().all(|&(j, k)| forward[j] < forward[k])
        && g2.edges.iter().all(|&(j, k)| backward[j] < backward[k])
}
