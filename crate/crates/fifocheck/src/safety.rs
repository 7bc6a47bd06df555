//! Regular safety checking for greedy systems, built-in properties
//! (reachability, unspecified reception, progress) and boundedness.
//!
//! A configuration `(ℓ⃗, b_1..b_|I|)` is identified with the word
//! `ℓ⃗ · # · b_1 · # · … · # · b_|I|`, the global control tuple being a single
//! alphabet symbol. A property is an NFA over that alphabet; the system is
//! safe when no reachable configuration's word is accepted. For a greedy
//! system every reachable configuration is the endpoint of a greedy
//! execution, so safety reduces to the emptiness of the intersection between
//! the greedy-prefix automaton and a pebble automaton that simulates the
//! property NFA over the final configuration while reading communication
//! words: matched exchanges leave buffers untouched, each unmatched send
//! `i!m` advances a per-buffer pebble along an `m`-transition, and guessed
//! block boundaries are checked at acceptance.

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::greedy::{
    check_greedy, expand_word, Adjacency, CommKind, CommLetter, GreedyPrefixAutomaton,
};
use crate::model::{
    Action, Configuration, LocalState, MessageId, System,
};
use crate::nfa::{find_shortest_word, Automaton, Finiteness, Nfa, Product};

/// Letters of configuration words: one symbol per global control tuple, the
/// block separator `#`, and message payloads.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ConfigLetter {
    Control(Vec<LocalState>),
    Sep,
    Msg(MessageId),
}

impl ConfigLetter {
    pub fn display(&self, system: &System) -> String {
        match self {
            ConfigLetter::Control(ctrl) => {
                let parts: Vec<&str> = system
                    .processes()
                    .iter()
                    .zip(ctrl)
                    .map(|(a, &s)| a.states[s].as_str())
                    .collect();
                format!("CTRL({})", parts.join(","))
            }
            ConfigLetter::Sep => "#".to_string(),
            ConfigLetter::Msg(m) => system.message_name(*m).to_string(),
        }
    }
}

/// `ℓ⃗ · # · b_1 · # · … · # · b_|I|` with buffers in buffer order.
pub fn encode_configuration(_system: &System, config: &Configuration) -> Vec<ConfigLetter> {
    let mut word = vec![ConfigLetter::Control(config.control.clone())];
    for buffer in &config.buffers {
        word.push(ConfigLetter::Sep);
        word.extend(buffer.iter().map(|&m| ConfigLetter::Msg(m)));
    }
    word
}

/// A named regular property: a set of configurations given as an NFA over
/// the configuration-word alphabet.
#[derive(Clone, Debug)]
pub struct Property {
    pub name: String,
    pub nfa: Nfa<ConfigLetter>,
}

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum PropertyError {
    #[error("control tuple has {got} entries, system has {expected} processes")]
    WrongArity { expected: usize, got: usize },
    #[error("unknown control state '{state}' of process {process}")]
    UnknownControlState { process: String, state: String },
    #[error("the property requires a mailbox system")]
    NotMailbox,
}

fn message_letters(system: &System) -> Vec<ConfigLetter> {
    (0..system.messages().len()).map(ConfigLetter::Msg).collect()
}

/// Resolves per-process state names into a control tuple.
pub fn resolve_control(system: &System, names: &[&str]) -> Result<Vec<LocalState>, PropertyError> {
    if names.len() != system.processes().len() {
        return Err(PropertyError::WrongArity {
            expected: system.processes().len(),
            got: names.len(),
        });
    }
    system
        .processes()
        .iter()
        .zip(names)
        .map(|(auto, name)| {
            auto.state_index(name).ok_or_else(|| PropertyError::UnknownControlState {
                process: auto.name.clone(),
                state: (*name).to_string(),
            })
        })
        .collect()
}

/// Control-state reachability: the target tuple with arbitrary buffers.
pub fn property_reach_control(
    system: &System,
    target_names: &[&str],
) -> Result<Property, PropertyError> {
    let target = resolve_control(system, target_names)?;
    let n_buffers = system.buffers().len();
    // state 0 --CTRL--> 1, then per buffer: --#--> block state with Msg loops
    let n_states = 2 + n_buffers;
    let mut transitions: Vec<(usize, Option<ConfigLetter>, usize)> =
        vec![(0, Some(ConfigLetter::Control(target.clone())), 1)];
    for k in 0..n_buffers {
        transitions.push((1 + k, Some(ConfigLetter::Sep), 2 + k));
        for m in 0..system.messages().len() {
            transitions.push((2 + k, Some(ConfigLetter::Msg(m)), 2 + k));
        }
    }
    let final_state = if n_buffers == 0 { 1 } else { 1 + n_buffers };
    let mut alphabet = vec![ConfigLetter::Control(target), ConfigLetter::Sep];
    alphabet.extend(message_letters(system));
    let nfa = Nfa::new(n_states, vec![0], vec![final_state], transitions, alphabet)
        .expect("well-formed property automaton");
    Ok(Property { name: format!("reach-control({})", target_names.join(",")), nfa })
}

/// Configuration reachability: exactly one accepted word.
pub fn property_reach_config(system: &System, target: &Configuration) -> Property {
    let word = encode_configuration(system, target);
    let transitions: Vec<(usize, Option<ConfigLetter>, usize)> = word
        .iter()
        .enumerate()
        .map(|(i, l)| (i, Some(l.clone()), i + 1))
        .collect();
    let mut alphabet: Vec<ConfigLetter> = word.clone();
    alphabet.push(ConfigLetter::Sep);
    alphabet.extend(message_letters(system));
    let nfa = Nfa::new(word.len() + 1, vec![0], vec![word.len()], transitions, alphabet)
        .expect("well-formed property automaton");
    Property { name: "reach-config".to_string(), nfa }
}

/// A local state is receiving when all its outgoing transitions are receives
/// (vacuously so for terminal states); its ready set are the receivable
/// messages.
fn receiving_ready_set(system: &System, process: usize, state: LocalState) -> Option<BTreeSet<MessageId>> {
    let auto = &system.processes()[process];
    let outgoing: Vec<&crate::model::Transition> =
        auto.transitions.iter().filter(|t| t.src == state).collect();
    if outgoing.iter().any(|t| t.action.is_send()) {
        return None;
    }
    Some(outgoing.iter().map(|t| t.action.message).collect())
}

/// Unspecified reception: some process sits in a receiving state whose ready
/// set misses the head of its nonempty mailbox. Mailbox systems only.
pub fn property_unspecified_reception(system: &System) -> Result<Property, PropertyError> {
    if !system.is_mailbox() {
        return Err(PropertyError::NotMailbox);
    }
    let owners = system.mailbox_owners().expect("mailbox system has owners");
    let n_buffers = system.buffers().len();
    let n_msgs = system.messages().len();

    let mut states: Vec<String> = vec!["start".into()];
    let mut index: HashMap<String, usize> = HashMap::from([("start".into(), 0)]);
    let mut transitions: Vec<(usize, Option<ConfigLetter>, usize)> = Vec::new();
    let mut finals: Vec<usize> = Vec::new();
    let mut alphabet = vec![ConfigLetter::Sep];
    alphabet.extend(message_letters(system));

    let intern = |states: &mut Vec<String>, index: &mut HashMap<String, usize>, key: String| {
        *index.entry(key.clone()).or_insert_with(|| {
            states.push(key);
            states.len() - 1
        })
    };

    // shared tail: consume the remaining blocks after the bad head
    let tail: Vec<usize> = (0..n_buffers)
        .map(|r| intern(&mut states, &mut index, format!("tail{r}")))
        .collect();
    for r in 0..n_buffers {
        for m in 0..n_msgs {
            transitions.push((tail[r], Some(ConfigLetter::Msg(m)), tail[r]));
        }
        if r > 0 {
            transitions.push((tail[r], Some(ConfigLetter::Sep), tail[r - 1]));
        }
    }
    if n_buffers > 0 {
        finals.push(tail[0]);
    }

    for control in system.reachable_controls() {
        for p in 0..system.processes().len() {
            let Some(mailbox) = owners.iter().position(|&o| o == p) else {
                continue;
            };
            let Some(ready) = receiving_ready_set(system, p, control[p]) else {
                continue;
            };
            let key_base = format!("p{p}-r{ready:?}");
            // walk to the mailbox block, then require a head outside the
            // ready set
            let mut prev = intern(&mut states, &mut index, format!("{key_base}-s0"));
            transitions.push((0, Some(ConfigLetter::Control(control.clone())), prev));
            alphabet.push(ConfigLetter::Control(control.clone()));
            for s in 1..=mailbox + 1 {
                let cur = intern(&mut states, &mut index, format!("{key_base}-s{s}"));
                transitions.push((prev, Some(ConfigLetter::Sep), cur));
                if s <= mailbox {
                    for m in 0..n_msgs {
                        transitions.push((cur, Some(ConfigLetter::Msg(m)), cur));
                    }
                }
                prev = cur;
            }
            let remaining = n_buffers - mailbox - 1;
            for m in 0..n_msgs {
                if !ready.contains(&m) {
                    transitions.push((prev, Some(ConfigLetter::Msg(m)), tail[remaining]));
                }
            }
        }
    }

    let n_states = states.len();
    let nfa = Nfa::new(n_states, vec![0], finals, transitions, alphabet)
        .expect("well-formed property automaton");
    Ok(Property { name: "unspecified-reception".to_string(), nfa })
}

/// The complement of progress: the control is non-final yet nothing is
/// enabled — every process is stuck on receives whose messages are not at
/// their buffer heads (or whose buffers are empty), and no send exists.
pub fn property_progress(system: &System) -> Property {
    let n_buffers = system.buffers().len();
    let n_msgs = system.messages().len();

    let mut states: Vec<String> = vec!["start".into()];
    let mut index: HashMap<String, usize> = HashMap::from([("start".into(), 0)]);
    let mut transitions: Vec<(usize, Option<ConfigLetter>, usize)> = Vec::new();
    let mut finals: Vec<usize> = Vec::new();
    let mut alphabet = vec![ConfigLetter::Sep];
    alphabet.extend(message_letters(system));

    let intern = |states: &mut Vec<String>, index: &mut HashMap<String, usize>, key: String| {
        *index.entry(key.clone()).or_insert_with(|| {
            states.push(key);
            states.len() - 1
        })
    };

    for control in system.reachable_controls() {
        let outgoing = system.control_successors(&control);
        if outgoing.is_empty() {
            continue; // final control satisfies progress
        }
        if outgoing.iter().any(|(a, _)| a.is_send()) {
            continue; // an enabled send always allows progress
        }
        // forbidden head per buffer: the messages some process could receive
        let mut forbidden: Vec<BTreeSet<MessageId>> = vec![BTreeSet::new(); n_buffers];
        for (a, _) in &outgoing {
            forbidden[a.buffer].insert(a.message);
        }
        let key = format!("F{forbidden:?}");
        let entry = intern(&mut states, &mut index, format!("{key}-entry"));
        transitions.push((0, Some(ConfigLetter::Control(control.clone())), entry));
        alphabet.push(ConfigLetter::Control(control.clone()));
        if n_buffers == 0 {
            finals.push(entry);
            continue;
        }
        // head state and rest state per block
        let mut head = vec![0usize; n_buffers];
        let mut rest = vec![0usize; n_buffers];
        for i in 0..n_buffers {
            head[i] = intern(&mut states, &mut index, format!("{key}-h{i}"));
            rest[i] = intern(&mut states, &mut index, format!("{key}-r{i}"));
        }
        transitions.push((entry, Some(ConfigLetter::Sep), head[0]));
        for i in 0..n_buffers {
            for m in 0..n_msgs {
                if !forbidden[i].contains(&m) {
                    transitions.push((head[i], Some(ConfigLetter::Msg(m)), rest[i]));
                }
                transitions.push((rest[i], Some(ConfigLetter::Msg(m)), rest[i]));
            }
            if i + 1 < n_buffers {
                transitions.push((head[i], Some(ConfigLetter::Sep), head[i + 1]));
                transitions.push((rest[i], Some(ConfigLetter::Sep), head[i + 1]));
            }
        }
        finals.push(head[n_buffers - 1]);
        finals.push(rest[n_buffers - 1]);
    }

    let n_states = states.len();
    let nfa = Nfa::new(n_states, vec![0], finals, transitions, alphabet)
        .expect("well-formed property automaton");
    Property { name: "progress".to_string(), nfa }
}

/// State of the pebble automaton: reached control, guessed final control,
/// current and frozen initial pebble positions in the property NFA.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PebbleState {
    control: Vec<LocalState>,
    goal: Vec<LocalState>,
    pebbles: Vec<usize>,
    frozen: Vec<usize>,
}

/// `A_P`: over communication words of greedy executions, accepts exactly
/// those whose endpoint configuration belongs to the property.
pub struct PebbleAutomaton<'a> {
    system: &'a System,
    property: &'a Nfa<ConfigLetter>,
}

impl<'a> PebbleAutomaton<'a> {
    pub fn new(system: &'a System, property: &'a Property) -> Self {
        PebbleAutomaton { system, property: &property.nfa }
    }

    fn single_step(&self, state: usize, letter: &ConfigLetter) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.property.step_closed(&HashSet::from([state]), letter).into_iter().collect();
        out.sort();
        out
    }
}

impl Automaton for PebbleAutomaton<'_> {
    type State = PebbleState;
    type Letter = CommLetter;

    fn initial_states(&self) -> Vec<PebbleState> {
        let n_buffers = self.system.buffers().len();
        let initial_control: Vec<LocalState> =
            self.system.processes().iter().map(|a| a.initial).collect();
        // pebble starts for buffers 2.. must be enterable through a '#'
        let mut sep_targets: BTreeSet<usize> = BTreeSet::new();
        for s in 0..self.property.n_states() {
            sep_targets.extend(self.single_step(s, &ConfigLetter::Sep));
        }
        let mut out = Vec::new();
        for goal in self.system.reachable_controls() {
            let after_control = self
                .property
                .step_closed(&self.property.initial_set_closed(), &ConfigLetter::Control(goal.clone()));
            let heads = self.property.step_closed(&after_control, &ConfigLetter::Sep);
            if n_buffers == 0 {
                // the word is the bare control symbol
                if self
                    .property
                    .set_accepts(&self.property.step_closed(
                        &self.property.initial_set_closed(),
                        &ConfigLetter::Control(goal.clone()),
                    ))
                {
                    out.push(PebbleState {
                        control: initial_control.clone(),
                        goal,
                        pebbles: Vec::new(),
                        frozen: Vec::new(),
                    });
                }
                continue;
            }
            let mut first: Vec<usize> = heads.into_iter().collect();
            first.sort();
            let rest: Vec<usize> = sep_targets.iter().copied().collect();
            let mut frozen = vec![0usize; n_buffers];
            build_frozen(&first, &rest, n_buffers, &mut frozen, 0, &mut |frozen| {
                out.push(PebbleState {
                    control: initial_control.clone(),
                    goal: goal.clone(),
                    pebbles: frozen.to_vec(),
                    frozen: frozen.to_vec(),
                });
            });
        }
        out
    }

    fn successors(&self, state: &PebbleState) -> Vec<(CommLetter, PebbleState)> {
        let mut out: Vec<(CommLetter, PebbleState)> = Vec::new();
        for (action, after_send) in self.system.control_successors(&state.control) {
            if !action.is_send() {
                continue;
            }
            let (buffer, message) = (action.buffer, action.message);
            // unmatched send: the message lands in the final configuration,
            // so the buffer's pebble must advance over it
            for &target in &self.single_step(state.pebbles[buffer], &ConfigLetter::Msg(message)) {
                let mut pebbles = state.pebbles.clone();
                pebbles[buffer] = target;
                out.push((
                    CommLetter::unmatched(buffer, message),
                    PebbleState {
                        control: after_send.clone(),
                        goal: state.goal.clone(),
                        pebbles,
                        frozen: state.frozen.clone(),
                    },
                ));
            }
            // matched exchange: no trace in the final configuration
            for after_recv in self
                .system
                .control_successors_on(&after_send, Action::receive(buffer, message))
            {
                out.push((
                    CommLetter::matched(buffer, message),
                    PebbleState {
                        control: after_recv,
                        goal: state.goal.clone(),
                        pebbles: state.pebbles.clone(),
                        frozen: state.frozen.clone(),
                    },
                ));
            }
        }
        out.sort_by_key(|(letter, _)| *letter);
        out.dedup();
        out
    }

    fn successors_on(&self, state: &PebbleState, letter: &CommLetter) -> Vec<PebbleState> {
        let (buffer, message) = (letter.buffer, letter.message);
        let mut out = Vec::new();
        match letter.kind {
            CommKind::Unmatched => {
                for after_send in self
                    .system
                    .control_successors_on(&state.control, Action::send(buffer, message))
                {
                    for &target in
                        &self.single_step(state.pebbles[buffer], &ConfigLetter::Msg(message))
                    {
                        let mut pebbles = state.pebbles.clone();
                        pebbles[buffer] = target;
                        out.push(PebbleState {
                            control: after_send.clone(),
                            goal: state.goal.clone(),
                            pebbles,
                            frozen: state.frozen.clone(),
                        });
                    }
                }
            }
            CommKind::Matched => {
                for after_send in self
                    .system
                    .control_successors_on(&state.control, Action::send(buffer, message))
                {
                    for after_recv in self
                        .system
                        .control_successors_on(&after_send, Action::receive(buffer, message))
                    {
                        out.push(PebbleState {
                            control: after_recv,
                            goal: state.goal.clone(),
                            pebbles: state.pebbles.clone(),
                            frozen: state.frozen.clone(),
                        });
                    }
                }
            }
            CommKind::Receive => {}
        }
        out.dedup();
        out
    }

    fn is_accepting(&self, state: &PebbleState) -> bool {
        if state.control != state.goal {
            return false;
        }
        let n = state.pebbles.len();
        if n == 0 {
            return true; // acceptance was checked when guessing the goal
        }
        for i in 0..n - 1 {
            if !self.single_step(state.pebbles[i], &ConfigLetter::Sep).contains(&state.frozen[i + 1])
            {
                return false;
            }
        }
        self.property.set_accepts(&HashSet::from([state.pebbles[n - 1]]))
    }
}

fn build_frozen(
    first: &[usize],
    rest: &[usize],
    n: usize,
    frozen: &mut Vec<usize>,
    depth: usize,
    emit: &mut impl FnMut(&[usize]),
) {
    let candidates = if depth == 0 { first } else { rest };
    if depth == n {
        emit(frozen);
        return;
    }
    for &c in candidates {
        frozen[depth] = c;
        build_frozen(first, rest, n, frozen, depth + 1, emit);
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SafetyStatus {
    Safe,
    Unsafe,
}

#[derive(Clone, Debug)]
pub struct SafetyWitness {
    /// Shortest greedy communication word reaching the property.
    pub word: Vec<CommLetter>,
    /// Its action expansion, replayable from the initial configuration.
    pub actions: Vec<Action>,
    /// The reached configuration, accepted by the property automaton.
    pub config: Configuration,
}

#[derive(Clone, Debug)]
pub struct SafetyVerdict {
    pub property: String,
    pub status: SafetyStatus,
    pub witness: Option<SafetyWitness>,
}

#[derive(Error, Clone, Debug)]
pub enum SafetyError {
    #[error("the system is not greedy; safety checking is only sound for greedy systems")]
    NotGreedySystem,
}

/// Decides the safety problem for a greedy system: safe iff no greedy
/// execution reaches a configuration of the property.
pub fn check_safety(system: &System, property: &Property) -> Result<SafetyVerdict, SafetyError> {
    if !check_greedy(system, Adjacency::Full).is_greedy() {
        return Err(SafetyError::NotGreedySystem);
    }
    let prefix = GreedyPrefixAutomaton::new(system);
    let pebble = PebbleAutomaton::new(system, property);
    match find_shortest_word(&Product(&prefix, &pebble)) {
        None => Ok(SafetyVerdict {
            property: property.name.clone(),
            status: SafetyStatus::Safe,
            witness: None,
        }),
        Some(word) => {
            let actions = expand_word(&word);
            let config = system.run(&actions).expect("witness word expands to an execution");
            Ok(SafetyVerdict {
                property: property.name.clone(),
                status: SafetyStatus::Unsafe,
                witness: Some(SafetyWitness { word, actions, config }),
            })
        }
    }
}

/// A pumpable suffix cycle proving unboundedness, as greedy communication
/// words.
#[derive(Clone, Debug)]
pub struct PumpWitness {
    pub prefix: Vec<CommLetter>,
    pub cycle: Vec<CommLetter>,
}

impl PumpWitness {
    /// `prefix · cycle^n` as an action-level execution.
    pub fn pumped_actions(&self, n: usize) -> Vec<Action> {
        let mut word = self.prefix.clone();
        for _ in 0..n {
            word.extend(self.cycle.iter().copied());
        }
        expand_word(&word)
    }
}

#[derive(Clone, Debug)]
pub enum Boundedness {
    Bounded {
        /// Max pending messages per buffer over all reachable configurations.
        per_buffer: Vec<usize>,
        /// The global bound: the maximum of the per-buffer counts.
        k: usize,
    },
    Unbounded {
        witness: PumpWitness,
    },
}

/// Decides whether some bound `k` keeps every buffer of every reachable
/// configuration at length ≤ k, by erasing matched communications from the
/// greedy-prefix automaton and checking the erased language for finiteness.
pub fn check_boundedness(system: &System) -> Result<Boundedness, SafetyError> {
    if !check_greedy(system, Adjacency::Full).is_greedy() {
        return Err(SafetyError::NotGreedySystem);
    }
    let full = crate::nfa::materialize(
        &GreedyPrefixAutomaton::new(system),
        crate::greedy::comm_alphabet(system),
    );
    let erased = full.erase_letters(|l| l.kind == CommKind::Unmatched);
    let (pruned, kept) = erased.prune_with_map();
    match pruned.finiteness_and_longest(|l| Some(l.buffer)) {
        Finiteness::Infinite(cycle) => {
            let recover = |path: &[(usize, Option<CommLetter>, usize)]| -> Vec<CommLetter> {
                path.iter()
                    .map(|&(s, ref letter, d)| match letter {
                        Some(l) => *l,
                        None => original_letter(&full, kept[s], kept[d]),
                    })
                    .collect()
            };
            Ok(Boundedness::Unbounded {
                witness: PumpWitness {
                    prefix: recover(&cycle.prefix),
                    cycle: recover(&cycle.cycle),
                },
            })
        }
        Finiteness::Finite(counts) => {
            let per_buffer: Vec<usize> = (0..system.buffers().len())
                .map(|b| counts.get(&b).copied().unwrap_or(0))
                .collect();
            let k = per_buffer.iter().copied().max().unwrap_or(0);
            Ok(Boundedness::Bounded { per_buffer, k })
        }
    }
}

/// The lexicographically least letter labeling `(src, dst)` in the
/// unerased automaton; epsilon edges of the erased automaton always map back
/// to one.
fn original_letter(full: &Nfa<CommLetter>, src: usize, dst: usize) -> CommLetter {
    full.transitions()
        .filter(|&(s, _, d)| s == src && d == dst)
        .filter_map(|(_, l, _)| l.copied())
        .min()
        .expect("erased transition has an original letter")
}
