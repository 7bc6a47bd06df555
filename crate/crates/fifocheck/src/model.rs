//! FIFO automata, systems of communicating automata, and their operational
//! semantics.
//!
//! A [`System`] is a family of [`FifoAutomaton`]s with pairwise disjoint
//! action sets, communicating through named FIFO buffers. Sends append to the
//! back of a buffer, receives consume the front. Buffer identifiers, message
//! names and control-state names are opaque strings, interned into dense
//! indices at build time; naming conventions (mailbox, p2p, binary) are
//! *validated* by [`System::classify_topology`], never assumed.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

pub type ProcessId = usize;
pub type BufferId = usize;
pub type MessageId = usize;
pub type LocalState = usize;

/// Whether an action enqueues (`!`) or dequeues (`?`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ActionKind {
    Send,
    Receive,
}

/// A queuing or dequeuing action `i!m` / `i?m` on buffer `i` with payload `m`.
///
/// Actions do not carry their owning process; within a valid system the
/// action sets are disjoint, so [`System::owner_of`] recovers it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Action {
    pub buffer: BufferId,
    pub kind: ActionKind,
    pub message: MessageId,
}

impl Action {
    pub fn send(buffer: BufferId, message: MessageId) -> Self {
        Action { buffer, kind: ActionKind::Send, message }
    }

    pub fn receive(buffer: BufferId, message: MessageId) -> Self {
        Action { buffer, kind: ActionKind::Receive, message }
    }

    pub fn is_send(&self) -> bool {
        self.kind == ActionKind::Send
    }
}

/// A sequence of actions. Membership in `exec(S)` is established by
/// [`System::run`] succeeding from the initial configuration.
pub type Execution = Vec<Action>;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Transition {
    pub src: LocalState,
    pub action: Action,
    pub dst: LocalState,
}

/// One component automaton: control states, an initial state, and transitions
/// labeled with send/receive actions. Message and buffer tables live on the
/// owning [`System`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FifoAutomaton {
    pub name: String,
    pub states: Vec<String>,
    pub initial: LocalState,
    pub transitions: Vec<Transition>,
}

impl FifoAutomaton {
    /// `|A| = |L| + |δ|`, the size used for complexity accounting.
    pub fn size(&self) -> usize {
        self.states.len() + self.transitions.len()
    }

    pub fn state_index(&self, name: &str) -> Option<LocalState> {
        self.states.iter().position(|s| s == name)
    }
}

/// Topology classes, most specific first. A binary system is both mailbox
/// and p2p.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Topology {
    Binary,
    Mailbox,
    P2p,
    General,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Topology::Binary => "binary",
            Topology::Mailbox => "mailbox",
            Topology::P2p => "p2p",
            Topology::General => "general",
        };
        f.write_str(s)
    }
}

impl Topology {
    pub fn parse(s: &str) -> Option<Topology> {
        match s {
            "binary" => Some(Topology::Binary),
            "mailbox" => Some(Topology::Mailbox),
            "p2p" => Some(Topology::P2p),
            "general" => Some(Topology::General),
            _ => None,
        }
    }
}

/// A global configuration: one control state per process plus the content of
/// every buffer (front = next message dequeued). Equality is structural,
/// which makes visited-set exploration well-defined.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Configuration {
    pub control: Vec<LocalState>,
    pub buffers: Vec<VecDeque<MessageId>>,
}

impl Configuration {
    pub fn buffers_empty(&self) -> bool {
        self.buffers.iter().all(|b| b.is_empty())
    }

    pub fn occupancy(&self, buffer: BufferId) -> usize {
        self.buffers[buffer].len()
    }
}

/// A violated structural invariant reported by [`System::validate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagnostic {
    /// Short name of the violated invariant.
    pub invariant: &'static str,
    /// Where it was violated, in terms of the offending names.
    pub location: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.invariant, self.location)
    }
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum StepError {
    #[error("no transition of process {process} from state {state} on {action}")]
    NoSuchTransition { process: String, state: String, action: String },
    #[error("receive {action} on empty buffer {buffer}")]
    EmptyBuffer { buffer: String, action: String },
    #[error("receive {action} does not match buffer {buffer} head {head}")]
    HeadMismatch { buffer: String, head: String, action: String },
    #[error("action {action} is not owned by any process of the system")]
    UnknownAction { action: String },
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
#[error("step {index} failed: {source}")]
pub struct RunError {
    pub index: usize,
    #[source]
    pub source: StepError,
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum BuildError {
    #[error("duplicate process name {0}")]
    DuplicateProcess(String),
    #[error("process {0} has no initial state")]
    MissingInitial(String),
    #[error("too many buffers ({0}); at most 64 are supported")]
    TooManyBuffers(usize),
}

/// Incremental construction of a [`System`] from string names. States,
/// buffers and messages are interned on first mention, in declaration order;
/// the buffer order of the resulting system is first-occurrence order.
#[derive(Default)]
pub struct SystemBuilder {
    name: String,
    processes: Vec<DraftProcess>,
    process_index: HashMap<String, usize>,
    buffers: Vec<String>,
    buffer_index: HashMap<String, usize>,
    messages: Vec<String>,
    message_index: HashMap<String, usize>,
    duplicate_process: Option<String>,
}

#[derive(Default)]
struct DraftProcess {
    name: String,
    states: Vec<String>,
    state_index: HashMap<String, usize>,
    initial: Option<usize>,
    transitions: Vec<Transition>,
}

impl SystemBuilder {
    pub fn new(name: &str) -> Self {
        SystemBuilder { name: name.to_string(), ..Default::default() }
    }

    /// Declares a process with its initial state. Call before adding its
    /// transitions.
    pub fn add_process(&mut self, process: &str, initial: &str) -> &mut Self {
        if self.process_index.contains_key(process) {
            self.duplicate_process = Some(process.to_string());
            return self;
        }
        self.process_index.insert(process.to_string(), self.processes.len());
        let mut draft = DraftProcess { name: process.to_string(), ..Default::default() };
        let s = intern(&mut draft.states, &mut draft.state_index, initial);
        draft.initial = Some(s);
        self.processes.push(draft);
        self
    }

    /// Adds `src -> dst : buffer kind message` to `process`. States, buffers
    /// and messages are declared implicitly. Panics if the process is
    /// unknown; declare it with [`SystemBuilder::add_process`] first.
    pub fn add_transition(
        &mut self,
        process: &str,
        src: &str,
        buffer: &str,
        kind: ActionKind,
        message: &str,
        dst: &str,
    ) -> &mut Self {
        let buffer = intern(&mut self.buffers, &mut self.buffer_index, buffer);
        let message = intern(&mut self.messages, &mut self.message_index, message);
        let p = *self
            .process_index
            .get(process)
            .unwrap_or_else(|| panic!("unknown process {process}"));
        let draft = &mut self.processes[p];
        let src = intern(&mut draft.states, &mut draft.state_index, src);
        let dst = intern(&mut draft.states, &mut draft.state_index, dst);
        let t = Transition { src, action: Action { buffer, kind, message }, dst };
        // exact duplicates collapse; diverging targets are left for validate()
        if !draft.transitions.contains(&t) {
            draft.transitions.push(t);
        }
        self
    }

    pub fn build(self) -> Result<System, BuildError> {
        if let Some(name) = self.duplicate_process {
            return Err(BuildError::DuplicateProcess(name));
        }
        if self.buffers.len() > 64 {
            return Err(BuildError::TooManyBuffers(self.buffers.len()));
        }
        let mut automata = Vec::with_capacity(self.processes.len());
        for draft in self.processes {
            let initial = draft.initial.ok_or(BuildError::MissingInitial(draft.name.clone()))?;
            automata.push(FifoAutomaton {
                name: draft.name,
                states: draft.states,
                initial,
                transitions: draft.transitions,
            });
        }
        Ok(System::assemble(self.name, automata, self.buffers, self.messages))
    }
}

fn intern(table: &mut Vec<String>, index: &mut HashMap<String, usize>, name: &str) -> usize {
    if let Some(&i) = index.get(name) {
        return i;
    }
    let i = table.len();
    table.push(name.to_string());
    index.insert(name.to_string(), i);
    i
}

/// A family of FIFO automata over shared buffer and message tables.
#[derive(Clone, Debug)]
pub struct System {
    name: String,
    automata: Vec<FifoAutomaton>,
    buffers: Vec<String>,
    messages: Vec<String>,
    /// Every process whose transition relation mentions the action.
    owners: HashMap<Action, Vec<ProcessId>>,
    /// Dense `(buffer, kind, message) -> first owner` table for hot paths.
    owner_table: Vec<Option<ProcessId>>,
    /// Per process, per local state: indices into its transition list.
    outgoing: Vec<Vec<Vec<usize>>>,
}

impl PartialEq for System {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.automata == other.automata
            && self.buffers == other.buffers
            && self.messages == other.messages
    }
}

impl System {
    fn assemble(
        name: String,
        automata: Vec<FifoAutomaton>,
        buffers: Vec<String>,
        messages: Vec<String>,
    ) -> System {
        let mut owners: HashMap<Action, Vec<ProcessId>> = HashMap::new();
        let mut outgoing = Vec::with_capacity(automata.len());
        for (p, a) in automata.iter().enumerate() {
            let mut per_state = vec![Vec::new(); a.states.len()];
            for (ti, t) in a.transitions.iter().enumerate() {
                per_state[t.src].push(ti);
                let owner_list = owners.entry(t.action).or_default();
                if !owner_list.contains(&p) {
                    owner_list.push(p);
                }
            }
            outgoing.push(per_state);
        }
        let mut owner_table = vec![None; buffers.len() * 2 * messages.len()];
        for (action, list) in &owners {
            let slot = (action.buffer * 2 + usize::from(action.kind == ActionKind::Receive))
                * messages.len()
                + action.message;
            owner_table[slot] = Some(list[0]);
        }
        System { name, automata, buffers, messages, owners, owner_table, outgoing }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn processes(&self) -> &[FifoAutomaton] {
        &self.automata
    }

    pub fn buffers(&self) -> &[String] {
        &self.buffers
    }

    pub fn messages(&self) -> &[String] {
        &self.messages
    }

    pub fn buffer_name(&self, i: BufferId) -> &str {
        &self.buffers[i]
    }

    pub fn message_name(&self, m: MessageId) -> &str {
        &self.messages[m]
    }

    pub fn buffer_index(&self, name: &str) -> Option<BufferId> {
        self.buffers.iter().position(|b| b == name)
    }

    pub fn message_index(&self, name: &str) -> Option<MessageId> {
        self.messages.iter().position(|m| m == name)
    }

    pub fn process_index(&self, name: &str) -> Option<ProcessId> {
        self.automata.iter().position(|a| a.name == name)
    }

    /// `Σ_p |A_p|`.
    pub fn size(&self) -> usize {
        self.automata.iter().map(FifoAutomaton::size).sum()
    }

    /// The unique owner of an action in a valid system; the first declaring
    /// process if action sets overlap.
    pub fn owner_of(&self, action: Action) -> Option<ProcessId> {
        let slot = (action.buffer * 2 + usize::from(action.kind == ActionKind::Receive))
            * self.messages.len()
            + action.message;
        self.owner_table.get(slot).copied().flatten()
    }

    pub fn display_action(&self, a: Action) -> String {
        let op = match a.kind {
            ActionKind::Send => "!",
            ActionKind::Receive => "?",
        };
        format!("{}{}{}", self.buffers[a.buffer], op, self.messages[a.message])
    }

    /// `process:buffer!msg`, the trace-token form.
    pub fn display_action_owned(&self, a: Action) -> String {
        match self.owner_of(a) {
            Some(p) => format!("{}:{}", self.automata[p].name, self.display_action(a)),
            None => self.display_action(a),
        }
    }

    pub fn display_execution(&self, e: &[Action]) -> String {
        e.iter().map(|&a| self.display_action_owned(a)).collect::<Vec<_>>().join(" ")
    }

    /// Checks the structural invariants: disjoint action sets across
    /// processes and per-(state, action) determinism. An empty list means the
    /// system is valid; an empty system is vacuously valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut shared: Vec<(&Action, &Vec<ProcessId>)> =
            self.owners.iter().filter(|(_, ps)| ps.len() > 1).collect();
        shared.sort_by_key(|(a, _)| **a);
        for (a, ps) in shared {
            let names: Vec<&str> = ps.iter().map(|&p| self.automata[p].name.as_str()).collect();
            out.push(Diagnostic {
                invariant: "action sets not disjoint",
                location: format!("{} owned by {}", self.display_action(*a), names.join(", ")),
            });
        }
        for (p, a) in self.automata.iter().enumerate() {
            let mut seen: HashMap<(LocalState, Action), LocalState> = HashMap::new();
            let mut flagged: Vec<(LocalState, Action)> = Vec::new();
            for t in &a.transitions {
                match seen.get(&(t.src, t.action)) {
                    Some(&dst) if dst != t.dst => flagged.push((t.src, t.action)),
                    Some(_) => {}
                    None => {
                        seen.insert((t.src, t.action), t.dst);
                    }
                }
            }
            flagged.sort();
            flagged.dedup();
            for (src, action) in flagged {
                out.push(Diagnostic {
                    invariant: "nondeterministic step",
                    location: format!(
                        "process {} has several targets from state {} on {}",
                        self.automata[p].name,
                        a.states[src],
                        self.display_action(action)
                    ),
                });
            }
        }
        out
    }

    fn send_buffers(&self, p: ProcessId) -> Vec<BufferId> {
        let mut v: Vec<BufferId> = self.automata[p]
            .transitions
            .iter()
            .filter(|t| t.action.is_send())
            .map(|t| t.action.buffer)
            .collect();
        v.sort();
        v.dedup();
        v
    }

    fn receive_buffers(&self, p: ProcessId) -> Vec<BufferId> {
        let mut v: Vec<BufferId> = self.automata[p]
            .transitions
            .iter()
            .filter(|t| !t.action.is_send())
            .map(|t| t.action.buffer)
            .collect();
        v.sort();
        v.dedup();
        v
    }

    fn buffer_senders(&self, i: BufferId) -> Vec<ProcessId> {
        (0..self.automata.len()).filter(|&p| self.send_buffers(p).contains(&i)).collect()
    }

    fn buffer_receivers(&self, i: BufferId) -> Vec<ProcessId> {
        (0..self.automata.len()).filter(|&p| self.receive_buffers(p).contains(&i)).collect()
    }

    /// Mailbox ownership per buffer: the unique receiving process, or the
    /// process the buffer is named after when nothing receives from it.
    /// `None` when no consistent assignment exists.
    pub fn mailbox_owners(&self) -> Option<Vec<ProcessId>> {
        let mut owners = Vec::with_capacity(self.buffers.len());
        for i in 0..self.buffers.len() {
            let receivers = self.buffer_receivers(i);
            let owner = match receivers.as_slice() {
                [] => self.process_index(&self.buffers[i])?,
                [single] => *single,
                _ => return None,
            };
            owners.push(owner);
        }
        let mut sorted = owners.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != owners.len() {
            return None; // a process may own at most one mailbox
        }
        for (p, _) in self.automata.iter().enumerate() {
            if self.send_buffers(p).iter().any(|&i| owners[i] == p) {
                return None; // never send into the own mailbox
            }
        }
        Some(owners)
    }

    /// Mailbox discipline: each process dequeues from exactly one buffer of
    /// its own, and enqueues only into other processes' buffers. Ownership is
    /// inferred from the receive relation (buffer names are often
    /// abbreviations rather than the owning process's name), with the
    /// buffer's name as fallback for buffers nothing dequeues from.
    pub fn is_mailbox(&self) -> bool {
        self.mailbox_owners().is_some()
    }

    fn p2p_pair(&self, i: BufferId) -> Option<(ProcessId, ProcessId)> {
        let senders = self.buffer_senders(i);
        let receivers = self.buffer_receivers(i);
        if senders.len() > 1 || receivers.len() > 1 {
            return None;
        }
        let named = self.buffers[i].split_once('>').and_then(|(a, b)| {
            Some((self.process_index(a)?, self.process_index(b)?))
        });
        let src = senders.first().copied().or(named.map(|(a, _)| a))?;
        let dst = receivers.first().copied().or(named.map(|(_, b)| b))?;
        (src != dst).then_some((src, dst))
    }

    /// P2p discipline: every buffer is a dedicated channel from one process
    /// to another, with at most one buffer per ordered pair. The pair is
    /// inferred from the actions, or from a `src>dst` buffer name when one
    /// side never uses it.
    pub fn is_p2p(&self) -> bool {
        let mut pairs = Vec::with_capacity(self.buffers.len());
        for i in 0..self.buffers.len() {
            match self.p2p_pair(i) {
                Some(pair) => pairs.push(pair),
                None => return false,
            }
        }
        let mut sorted = pairs.clone();
        sorted.sort();
        sorted.dedup();
        sorted.len() == pairs.len()
    }

    pub fn is_binary(&self) -> bool {
        self.automata.len() == 2 && self.is_mailbox()
    }

    /// Most specific class first: binary, then mailbox, then p2p, else
    /// general.
    pub fn classify_topology(&self) -> Topology {
        if self.is_binary() {
            Topology::Binary
        } else if self.is_mailbox() {
            Topology::Mailbox
        } else if self.is_p2p() {
            Topology::P2p
        } else {
            Topology::General
        }
    }

    pub fn initial_configuration(&self) -> Configuration {
        Configuration {
            control: self.automata.iter().map(|a| a.initial).collect(),
            buffers: vec![VecDeque::new(); self.buffers.len()],
        }
    }

    /// One step of the operational semantics. A send appends to the back of
    /// its buffer, a receive consumes the front; only the owner's control
    /// coordinate and the action's buffer change.
    pub fn step(&self, config: &Configuration, action: Action) -> Result<Configuration, StepError> {
        let p = self.owner_of(action).ok_or_else(|| StepError::UnknownAction {
            action: self.display_action(action),
        })?;
        let auto = &self.automata[p];
        let state = config.control[p];
        let dst = self.outgoing[p][state]
            .iter()
            .map(|&ti| &auto.transitions[ti])
            .find(|t| t.action == action)
            .map(|t| t.dst)
            .ok_or_else(|| StepError::NoSuchTransition {
                process: auto.name.clone(),
                state: auto.states[state].clone(),
                action: self.display_action(action),
            })?;
        let mut next = config.clone();
        match action.kind {
            ActionKind::Send => next.buffers[action.buffer].push_back(action.message),
            ActionKind::Receive => match next.buffers[action.buffer].front() {
                None => {
                    return Err(StepError::EmptyBuffer {
                        buffer: self.buffers[action.buffer].clone(),
                        action: self.display_action(action),
                    })
                }
                Some(&head) if head != action.message => {
                    return Err(StepError::HeadMismatch {
                        buffer: self.buffers[action.buffer].clone(),
                        head: self.messages[head].clone(),
                        action: self.display_action(action),
                    })
                }
                Some(_) => {
                    next.buffers[action.buffer].pop_front();
                }
            },
        }
        next.control[p] = dst;
        Ok(next)
    }

    /// Folds [`System::step`] from the initial configuration; the first
    /// failing step aborts with its index. Succeeds exactly for members of
    /// `exec(S)`.
    pub fn run(&self, execution: &[Action]) -> Result<Configuration, RunError> {
        self.run_from(&self.initial_configuration(), execution)
    }

    pub fn run_from(
        &self,
        start: &Configuration,
        execution: &[Action],
    ) -> Result<Configuration, RunError> {
        let mut config = start.clone();
        for (index, &a) in execution.iter().enumerate() {
            config = self.step(&config, a).map_err(|source| RunError { index, source })?;
        }
        Ok(config)
    }

    /// Exactly the actions for which [`System::step`] succeeds, paired with
    /// their successors, in (process, transition declaration) order.
    pub fn enabled(&self, config: &Configuration) -> Vec<(Action, Configuration)> {
        let mut out = Vec::new();
        for (p, auto) in self.automata.iter().enumerate() {
            let mut seen = Vec::new();
            for &ti in &self.outgoing[p][config.control[p]] {
                let action = auto.transitions[ti].action;
                if self.owner_of(action) != Some(p) || seen.contains(&action) {
                    continue;
                }
                seen.push(action);
                if let Ok(next) = self.step(config, action) {
                    out.push((action, next));
                }
            }
        }
        out
    }

    /// Control-graph successors of a global control tuple, ignoring buffers.
    pub fn control_successors(&self, control: &[LocalState]) -> Vec<(Action, Vec<LocalState>)> {
        let mut out = Vec::new();
        for (p, auto) in self.automata.iter().enumerate() {
            for &ti in &self.outgoing[p][control[p]] {
                let t = &auto.transitions[ti];
                let mut next = control.to_vec();
                next[p] = t.dst;
                out.push((t.action, next));
            }
        }
        out
    }

    /// Successor control tuples on a specific action.
    pub fn control_successors_on(
        &self,
        control: &[LocalState],
        action: Action,
    ) -> Vec<Vec<LocalState>> {
        let mut out = Vec::new();
        for (p, auto) in self.automata.iter().enumerate() {
            for &ti in &self.outgoing[p][control[p]] {
                let t = &auto.transitions[ti];
                if t.action == action {
                    let mut next = control.to_vec();
                    next[p] = t.dst;
                    if !out.contains(&next) {
                        out.push(next);
                    }
                }
            }
        }
        out
    }

    /// A global control tuple is final when no transition leaves it.
    pub fn control_is_final(&self, control: &[LocalState]) -> bool {
        self.automata
            .iter()
            .enumerate()
            .all(|(p, _)| self.outgoing[p][control[p]].is_empty())
    }

    /// All control tuples reachable in the control graph from the initial
    /// tuple, in BFS order (initial first).
    pub fn reachable_controls(&self) -> Vec<Vec<LocalState>> {
        let initial: Vec<LocalState> = self.automata.iter().map(|a| a.initial).collect();
        let mut seen: HashMap<Vec<LocalState>, ()> = HashMap::new();
        let mut order = vec![initial.clone()];
        seen.insert(initial, ());
        let mut head = 0;
        while head < order.len() {
            let current = order[head].clone();
            head += 1;
            for (_, next) in self.control_successors(&current) {
                if !seen.contains_key(&next) {
                    seen.insert(next.clone(), ());
                    order.push(next);
                }
            }
        }
        order
    }

    /// The asynchronous product automaton, materialized on demand: states are
    /// the control tuples reachable from the initial tuple, created on first
    /// visit. Returned as a single-process system over the same buffer and
    /// message tables so it can replay executions.
    pub fn product(&self) -> System {
        let controls = self.reachable_controls();
        let index: HashMap<&Vec<LocalState>, usize> =
            controls.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let state_name = |c: &[LocalState]| -> String {
            let parts: Vec<&str> = self
                .automata
                .iter()
                .zip(c)
                .map(|(a, &s)| a.states[s].as_str())
                .collect();
            format!("({})", parts.join(","))
        };
        let mut transitions = Vec::new();
        for (i, c) in controls.iter().enumerate() {
            for (action, next) in self.control_successors(c) {
                let t = Transition { src: i, action, dst: index[&next] };
                if !transitions.contains(&t) {
                    transitions.push(t);
                }
            }
        }
        let automaton = FifoAutomaton {
            name: format!("{}_product", self.name),
            states: controls.iter().map(|c| state_name(c)).collect(),
            initial: 0,
            transitions,
        };
        System::assemble(
            automaton.name.clone(),
            vec![automaton],
            self.buffers.clone(),
            self.messages.clone(),
        )
    }

    /// Configuration as JSON: `{"control": [..], "buffers": {id: [msgs]}}`.
    pub fn config_json(&self, config: &Configuration) -> serde_json::Value {
        let control: Vec<serde_json::Value> = self
            .automata
            .iter()
            .zip(&config.control)
            .map(|(a, &s)| serde_json::Value::String(a.states[s].clone()))
            .collect();
        let mut buffers = serde_json::Map::new();
        for (i, content) in config.buffers.iter().enumerate() {
            let msgs: Vec<serde_json::Value> = content
                .iter()
                .map(|&m| serde_json::Value::String(self.messages[m].clone()))
                .collect();
            buffers.insert(self.buffers[i].clone(), serde_json::Value::Array(msgs));
        }
        serde_json::json!({ "control": control, "buffers": buffers })
    }
}
