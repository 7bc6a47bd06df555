//! Decides whether a system is greedy: every execution causally equivalent
//! to one where each reception immediately follows its matching send.
//!
//! The decision intersects two automata over the communication alphabet
//! `Σ ∪ Σ_?`. The greedy automaton accepts exactly the words `e·i?m` where
//! `e` is a greedy execution and the trailing receive is feasible; it tracks
//! the reachable control tuple, the set of nonempty buffers and one guessed
//! pending send. The violation automaton accepts exactly the words whose
//! conflict graph is cyclic, by guessing the unmatched send whose eventual
//! receive closes the cycle and walking a path of pairwise conflicting
//! letters to the final receive. The system is greedy iff the intersection
//! is empty; a shortest word otherwise expands into a borderline violation.

use std::fmt;

use crate::causality::{conflict_graph, Communication};
use crate::model::{Action, BufferId, LocalState, MessageId, System};
use crate::nfa::{find_shortest_word, Automaton, Product};

/// Letters of the communication alphabet: unmatched send `i!m`, matched
/// exchange `i!?m`, or the trailing receive `i?m`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum CommKind {
    Unmatched,
    Matched,
    Receive,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CommLetter {
    pub buffer: BufferId,
    pub kind: CommKind,
    pub message: MessageId,
}

impl CommLetter {
    pub fn unmatched(buffer: BufferId, message: MessageId) -> Self {
        CommLetter { buffer, kind: CommKind::Unmatched, message }
    }

    pub fn matched(buffer: BufferId, message: MessageId) -> Self {
        CommLetter { buffer, kind: CommKind::Matched, message }
    }

    pub fn receive(buffer: BufferId, message: MessageId) -> Self {
        CommLetter { buffer, kind: CommKind::Receive, message }
    }

    /// The constituent actions the letter stands for.
    pub fn actions(&self) -> Vec<Action> {
        match self.kind {
            CommKind::Unmatched => vec![Action::send(self.buffer, self.message)],
            CommKind::Matched => vec![
                Action::send(self.buffer, self.message),
                Action::receive(self.buffer, self.message),
            ],
            CommKind::Receive => vec![Action::receive(self.buffer, self.message)],
        }
    }

    pub fn display(&self, system: &System) -> String {
        let op = match self.kind {
            CommKind::Unmatched => "!",
            CommKind::Matched => "!?",
            CommKind::Receive => "?",
        };
        format!("{}{}{}", system.buffer_name(self.buffer), op, system.message_name(self.message))
    }
}

/// Expands a communication word to its action-level execution.
pub fn expand_word(word: &[CommLetter]) -> Vec<Action> {
    word.iter().flat_map(|l| l.actions()).collect()
}

/// The communication word of a greedy execution: its communications in send
/// order, matched pairs as `i!?m`, pending sends as `i!m`. `None` when the
/// execution is not greedy (a non-adjacent pair has no letter form).
pub fn greedy_word(e: &[Action]) -> Option<Vec<CommLetter>> {
    let comms = crate::causality::matching_pairs(e).ok()?;
    comms
        .iter()
        .map(|c| match c.receive {
            Some(r) if r == c.send + 1 => Some(CommLetter::matched(c.buffer, c.message)),
            Some(_) => None,
            None => Some(CommLetter::unmatched(c.buffer, c.message)),
        })
        .collect()
}

/// The full alphabet `Σ ∪ Σ_?` over the system's buffer and message tables.
pub fn comm_alphabet(system: &System) -> Vec<CommLetter> {
    let mut out = Vec::new();
    for buffer in 0..system.buffers().len() {
        for kind in [CommKind::Unmatched, CommKind::Matched, CommKind::Receive] {
            for message in 0..system.messages().len() {
                out.push(CommLetter { buffer, kind, message });
            }
        }
    }
    out.sort();
    out
}

/// Conflict adjacency between communication letters used by the violation
/// automaton. `Paper` is the literal process-intersection of the
/// construction; `Full` additionally relates letters with same-kind
/// constituents on a shared buffer (the lifted non-commutation relation),
/// which covers mailbox conflicts between processes that never interact
/// directly.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Adjacency {
    #[default]
    Full,
    Paper,
}

impl fmt::Display for Adjacency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Adjacency::Full => "full",
            Adjacency::Paper => "paper",
        })
    }
}

fn processes_of(system: &System, letter: &CommLetter) -> Vec<usize> {
    let mut out: Vec<usize> =
        letter.actions().iter().filter_map(|&a| system.owner_of(a)).collect();
    out.sort();
    out.dedup();
    out
}

pub(crate) fn adjacent(
    system: &System,
    mode: Adjacency,
    a: &CommLetter,
    b: &CommLetter,
) -> bool {
    let pa = processes_of(system, a);
    let pb = processes_of(system, b);
    if pa.iter().any(|p| pb.contains(p)) {
        return true;
    }
    mode == Adjacency::Full
        && a.actions()
            .iter()
            .any(|x| b.actions().iter().any(|y| x.kind == y.kind && x.buffer == y.buffer))
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum GreedyState {
    Run {
        control: Vec<LocalState>,
        /// The guessed pending send whose receive ends the word.
        guess: Option<(BufferId, MessageId)>,
        /// Bit per buffer: nonempty.
        filled: u64,
    },
    Accept,
}

/// `A_gr`: accepts `{e·i?m : e·i?m ∈ exec(S), e greedy}`. States are
/// generated lazily; the nonempty-buffer component is a bit set keyed by
/// buffer order.
pub struct GreedyAutomaton<'a> {
    system: &'a System,
}

impl<'a> GreedyAutomaton<'a> {
    pub fn new(system: &'a System) -> Self {
        assert!(system.buffers().len() <= 64, "at most 64 buffers supported");
        GreedyAutomaton { system }
    }
}

fn send_successors(
    system: &System,
    control: &[LocalState],
) -> Vec<(BufferId, MessageId, Vec<LocalState>)> {
    system
        .control_successors(control)
        .into_iter()
        .filter(|(a, _)| a.is_send())
        .map(|(a, next)| (a.buffer, a.message, next))
        .collect()
}

fn receive_successors(
    system: &System,
    control: &[LocalState],
    buffer: BufferId,
    message: MessageId,
) -> Vec<Vec<LocalState>> {
    system.control_successors_on(control, Action::receive(buffer, message))
}

impl Automaton for GreedyAutomaton<'_> {
    type State = GreedyState;
    type Letter = CommLetter;

    fn initial_states(&self) -> Vec<GreedyState> {
        vec![GreedyState::Run {
            control: self.system.processes().iter().map(|a| a.initial).collect(),
            guess: None,
            filled: 0,
        }]
    }

    fn successors(&self, state: &GreedyState) -> Vec<(CommLetter, GreedyState)> {
        let GreedyState::Run { control, guess, filled } = state else {
            return Vec::new();
        };
        let mut out: Vec<(CommLetter, GreedyState)> = Vec::new();
        for (buffer, message, after_send) in send_successors(self.system, control) {
            let bit = 1u64 << buffer;
            let letter = CommLetter::unmatched(buffer, message);
            out.push((
                letter,
                GreedyState::Run {
                    control: after_send.clone(),
                    guess: *guess,
                    filled: filled | bit,
                },
            ));
            // the guessed send must land in an empty buffer so FIFO matches
            // it with the trailing receive
            if guess.is_none() && filled & bit == 0 {
                out.push((
                    letter,
                    GreedyState::Run {
                        control: after_send.clone(),
                        guess: Some((buffer, message)),
                        filled: filled | bit,
                    },
                ));
            }
            // a matched exchange also needs the buffer empty beforehand,
            // otherwise the receive would dequeue an older message
            if filled & bit == 0 {
                for after_recv in receive_successors(self.system, &after_send, buffer, message) {
                    out.push((
                        CommLetter::matched(buffer, message),
                        GreedyState::Run { control: after_recv, guess: *guess, filled: *filled },
                    ));
                }
            }
        }
        if let Some((buffer, message)) = guess {
            if !receive_successors(self.system, control, *buffer, *message).is_empty() {
                out.push((CommLetter::receive(*buffer, *message), GreedyState::Accept));
            }
        }
        out.sort_by_key(|(letter, _)| *letter);
        out.dedup();
        out
    }

    fn is_accepting(&self, state: &GreedyState) -> bool {
        matches!(state, GreedyState::Accept)
    }
}

/// The guess-free slice of [`GreedyAutomaton`] with every state accepting:
/// exactly the communication words of greedy executions (prefix-closed).
pub struct GreedyPrefixAutomaton<'a> {
    system: &'a System,
}

impl<'a> GreedyPrefixAutomaton<'a> {
    pub fn new(system: &'a System) -> Self {
        assert!(system.buffers().len() <= 64, "at most 64 buffers supported");
        GreedyPrefixAutomaton { system }
    }
}

impl Automaton for GreedyPrefixAutomaton<'_> {
    type State = (Vec<LocalState>, u64);
    type Letter = CommLetter;

    fn initial_states(&self) -> Vec<Self::State> {
        vec![(self.system.processes().iter().map(|a| a.initial).collect(), 0)]
    }

    fn successors(&self, state: &Self::State) -> Vec<(CommLetter, Self::State)> {
        let (control, filled) = state;
        let mut out: Vec<(CommLetter, Self::State)> = Vec::new();
        for (buffer, message, after_send) in send_successors(self.system, control) {
            let bit = 1u64 << buffer;
            out.push((CommLetter::unmatched(buffer, message), (after_send.clone(), filled | bit)));
            if filled & bit == 0 {
                for after_recv in receive_successors(self.system, &after_send, buffer, message) {
                    out.push((CommLetter::matched(buffer, message), (after_recv, *filled)));
                }
            }
        }
        out.sort_by_key(|(letter, _)| *letter);
        out.dedup();
        out
    }

    fn is_accepting(&self, _state: &Self::State) -> bool {
        true
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ViolationState {
    /// Skipping the prefix before the guessed send.
    Skip,
    /// Remembered target receive plus the current end of the conflict path.
    Track { target: (BufferId, MessageId), end: CommLetter, extended: bool },
    Accept,
}

/// `A_bv`: accepts the words in `Σ*·Σ_?` whose conflict graph has a cycle
/// through the final receive's communication. The `extended` flag refuses
/// the degenerate length-one cycle a self-sending process would otherwise
/// close on its own matched pair.
pub struct ViolationAutomaton<'a> {
    system: &'a System,
    mode: Adjacency,
}

impl<'a> ViolationAutomaton<'a> {
    pub fn new(system: &'a System, mode: Adjacency) -> Self {
        ViolationAutomaton { system, mode }
    }
}

impl Automaton for ViolationAutomaton<'_> {
    type State = ViolationState;
    type Letter = CommLetter;

    fn initial_states(&self) -> Vec<ViolationState> {
        vec![ViolationState::Skip]
    }

    fn successors(&self, state: &ViolationState) -> Vec<(CommLetter, ViolationState)> {
        let mut out = Vec::new();
        for letter in comm_alphabet(self.system) {
            for next in self.successors_on(state, &letter) {
                out.push((letter, next));
            }
        }
        out
    }

    fn successors_on(&self, state: &ViolationState, letter: &CommLetter) -> Vec<ViolationState> {
        let mut out = Vec::new();
        match state {
            ViolationState::Skip => {
                if letter.kind != CommKind::Receive {
                    out.push(ViolationState::Skip);
                    if letter.kind == CommKind::Unmatched {
                        out.push(ViolationState::Track {
                            target: (letter.buffer, letter.message),
                            end: *letter,
                            extended: false,
                        });
                    }
                }
            }
            ViolationState::Track { target, end, extended } => {
                if letter.kind == CommKind::Receive {
                    if (letter.buffer, letter.message) == *target
                        && *extended
                        && adjacent(self.system, self.mode, end, letter)
                    {
                        out.push(ViolationState::Accept);
                    }
                } else {
                    out.push(ViolationState::Track { target: *target, end: *end, extended: *extended });
                    if adjacent(self.system, self.mode, end, letter) {
                        out.push(ViolationState::Track {
                            target: *target,
                            end: *letter,
                            extended: true,
                        });
                    }
                }
            }
            ViolationState::Accept => {}
        }
        out.dedup();
        out
    }

    fn is_accepting(&self, state: &ViolationState) -> bool {
        matches!(state, ViolationState::Accept)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GreedyStatus {
    Greedy,
    NotGreedy,
}

#[derive(Clone, Debug)]
pub struct GreedyWitness {
    /// Shortest borderline word over `Σ*·Σ_?`.
    pub word: Vec<CommLetter>,
    /// Its action-level expansion, a replayable borderline violation.
    pub actions: Vec<Action>,
    /// One cycle of the expansion's conflict graph.
    pub cycle: Vec<Communication>,
}

#[derive(Clone, Debug)]
pub struct GreedyVerdict {
    pub status: GreedyStatus,
    pub adjacency: Adjacency,
    pub witness: Option<GreedyWitness>,
}

impl GreedyVerdict {
    pub fn is_greedy(&self) -> bool {
        self.status == GreedyStatus::Greedy
    }
}

/// Decides greediness: empty intersection of the greedy and violation
/// automata means greedy; otherwise the shortest borderline word is
/// expanded, replayed and its conflict cycle extracted.
pub fn check_greedy(system: &System, adjacency: Adjacency) -> GreedyVerdict {
    let greedy = GreedyAutomaton::new(system);
    let violation = ViolationAutomaton::new(system, adjacency);
    match find_shortest_word(&Product(&greedy, &violation)) {
        None => GreedyVerdict { status: GreedyStatus::Greedy, adjacency, witness: None },
        Some(word) => {
            let actions = expand_word(&word);
            let cg = conflict_graph(system, &actions);
            let cycle = cg
                .find_cycle()
                .map(|indices| indices.into_iter().map(|c| cg.comms[c]).collect())
                .unwrap_or_default();
            GreedyVerdict {
                status: GreedyStatus::NotGreedy,
                adjacency,
                witness: Some(GreedyWitness { word, actions, cycle }),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causality::is_greedy_execution;
    use crate::frontend::parse_system;
    use crate::nfa::{accepts_word, materialize};
    use crate::oracle::{oracle_is_greedy_system, ExplorationBudget};

    fn csd() -> System {
        parse_system(include_str!("../fixtures/csd.fifo")).unwrap()
    }

    fn xchg() -> System {
        parse_system(include_str!("../fixtures/xchg.fifo")).unwrap()
    }

    fn letter(sys: &System, token: &str) -> CommLetter {
        // tokens like "s!?req", "s!req", "s?req"
        let op_at = token.find(['!', '?']).unwrap();
        let buffer = sys.buffer_index(&token[..op_at]).unwrap();
        let (kind, rest) = if token[op_at..].starts_with("!?") {
            (CommKind::Matched, &token[op_at + 2..])
        } else if token[op_at..].starts_with('!') {
            (CommKind::Unmatched, &token[op_at + 1..])
        } else {
            (CommKind::Receive, &token[op_at + 1..])
        };
        let message = sys.message_index(rest).unwrap();
        CommLetter { buffer, kind, message }
    }

    fn word(sys: &System, tokens: &str) -> Vec<CommLetter> {
        tokens.split_whitespace().map(|t| letter(sys, t)).collect()
    }

    #[test]
    fn greedy_automaton_memberships() {
        let sys = xchg();
        let a_gr = GreedyAutomaton::new(&sys);
        assert!(accepts_word(&a_gr, &word(&sys, "q!m2 p!?m1 q?m2")));
        // trailing receive whose send was never guessed on that buffer
        assert!(!accepts_word(&a_gr, &word(&sys, "p!m1 q?m2")));
        // no trailing receive at all
        assert!(!accepts_word(&a_gr, &word(&sys, "q!m2 p!?m1")));

        let csd = csd();
        let a_gr = GreedyAutomaton::new(&csd);
        assert!(accepts_word(&a_gr, &word(&csd, "s!?req c!?res s!?ack_s d!log_c d?log_c")));
    }

    #[test]
    fn matched_letter_needs_empty_buffer() {
        let sys = csd();
        let a_gr = GreedyAutomaton::new(&sys);
        // after an unmatched log_c fills d, a matched log exchange on d is
        // impossible; receiving it as the trailing letter is fine
        assert!(!accepts_word(&a_gr, &word(&sys, "d!log_c d!?log_c d?log_c")));
    }

    #[test]
    fn prefix_automaton_memberships() {
        let sys = csd();
        let prefix = GreedyPrefixAutomaton::new(&sys);
        assert!(accepts_word(&prefix, &[]));
        let greedy_e_prime =
            word(&sys, "s!?req c!?res s!?ack_s d!?log_c c!?ack_d s!req d!?log_s");
        assert!(accepts_word(&prefix, &greedy_e_prime));

        let xchg = xchg();
        let prefix = GreedyPrefixAutomaton::new(&xchg);
        assert!(accepts_word(&prefix, &word(&xchg, "q!m2 p!m1")));
        // after q!m2 fills q, no matched exchange on q can happen
        assert!(!accepts_word(&prefix, &word(&xchg, "q!m2 q!?m2")));
    }

    #[test]
    fn violation_automaton_memberships() {
        let sys = xchg();
        let full = ViolationAutomaton::new(&sys, Adjacency::Full);
        assert!(accepts_word(&full, &word(&sys, "q!m2 p!?m1 q?m2")));
        assert!(!accepts_word(&full, &word(&sys, "q!m2 p!?m1")));
        assert!(!accepts_word(&full, &word(&sys, "q!m2 q?m2")));
    }

    #[test]
    fn csd_is_greedy() {
        let verdict = check_greedy(&csd(), Adjacency::Full);
        assert!(verdict.is_greedy());
    }

    #[test]
    fn xchg_is_not_greedy_with_minimal_witness() {
        let sys = xchg();
        let verdict = check_greedy(&sys, Adjacency::Full);
        assert_eq!(verdict.status, GreedyStatus::NotGreedy);
        let witness = verdict.witness.unwrap();
        assert!(witness.word.len() <= 3);
        // expansion replays and its strict prefix is greedy
        let end = sys.run(&witness.actions);
        assert!(end.is_ok());
        assert!(is_greedy_execution(&witness.actions[..witness.actions.len() - 1]));
        assert!(!conflict_graph(&sys, &witness.actions).is_acyclic());
        assert_eq!(witness.cycle.len(), 2);
        // deterministic witness
        let again = check_greedy(&sys, Adjacency::Full);
        assert_eq!(again.witness.unwrap().word, witness.word);
    }

    #[test]
    fn csb_is_greedy() {
        let sys = parse_system(include_str!("../fixtures/csb.fifo")).unwrap();
        assert!(check_greedy(&sys, Adjacency::Full).is_greedy());
    }

    #[test]
    fn self_send_system_is_greedy_in_both_modes() {
        let sys = parse_system(include_str!("../fixtures/selfsend.fifo")).unwrap();
        let oracle = oracle_is_greedy_system(&sys, &ExplorationBudget::new(8, 4));
        assert!(oracle.greedy);
        assert!(check_greedy(&sys, Adjacency::Full).is_greedy());
        assert!(check_greedy(&sys, Adjacency::Paper).is_greedy());
    }

    #[test]
    fn concrete_intersection_agrees_for_xchg() {
        let sys = xchg();
        let alphabet = comm_alphabet(&sys);
        let a_gr = materialize(&GreedyAutomaton::new(&sys), alphabet.clone());
        let a_bv = materialize(&ViolationAutomaton::new(&sys, Adjacency::Full), alphabet);
        let product = a_gr.intersect(&a_bv).unwrap();
        let w = product.find_accepting_word().expect("non-greedy system");
        assert_eq!(w.len(), 3);
        let lazy = check_greedy(&sys, Adjacency::Full).witness.unwrap().word;
        assert_eq!(w, lazy);
    }

    #[test]
    fn differential_against_oracle_small() {
        let params = crate::oracle::RandomSystemParams::default();
        for seed in 0..40 {
            let sys = crate::oracle::random_mailbox_system(seed, &params);
            let budget = ExplorationBudget::new(6, 6).with_max_nodes(200_000);
            let oracle = oracle_is_greedy_system(&sys, &budget);
            let symbolic = check_greedy(&sys, Adjacency::Full);
            if !oracle.greedy {
                assert!(!symbolic.is_greedy(), "seed {seed}: oracle found a violation");
            } else if oracle.definitive {
                assert!(symbolic.is_greedy(), "seed {seed}: oracle proves greedy");
            }
        }
    }

    #[test]
    fn greedy_automaton_membership_equals_oracle() {
        // every enumerated borderline-shaped execution (greedy prefix plus a
        // feasible receive) must be accepted in word form, and every accepted
        // short word must expand to a replayable borderline execution
        let sys = xchg();
        let a_gr = GreedyAutomaton::new(&sys);
        let budget = ExplorationBudget::new(8, 8);
        crate::oracle::for_each_execution(&sys, &budget, |e, _| {
            let Some((last, prefix)) = e.split_last() else { return };
            if last.is_send() || !is_greedy_execution(prefix) {
                return;
            }
            let mut word = greedy_word(prefix).expect("prefix is greedy");
            word.push(CommLetter::receive(last.buffer, last.message));
            assert!(accepts_word(&a_gr, &word), "missing word for {e:?}");
        });

        // enumerate accepted words up to length 4 by walking the automaton
        let mut accepted: Vec<Vec<CommLetter>> = Vec::new();
        let mut stack: Vec<(GreedyState, Vec<CommLetter>)> =
            a_gr.initial_states().into_iter().map(|s| (s, Vec::new())).collect();
        while let Some((state, word)) = stack.pop() {
            if a_gr.is_accepting(&state) {
                accepted.push(word.clone());
            }
            if word.len() == 4 {
                continue;
            }
            for (letter, next) in a_gr.successors(&state) {
                let mut w = word.clone();
                w.push(letter);
                stack.push((next, w));
            }
        }
        assert!(!accepted.is_empty());
        for word in accepted {
            let actions = expand_word(&word);
            assert!(sys.run(&actions).is_ok(), "{word:?} must replay");
            assert!(is_greedy_execution(&actions[..actions.len() - 1]));
        }
    }

    #[test]
    fn erased_language_is_sigma_image_of_greedy_words() {
        let sys = csd();
        let full = materialize(&GreedyPrefixAutomaton::new(&sys), comm_alphabet(&sys));
        let erased = full.erase_letters(|l| l.kind == CommKind::Unmatched);
        // sigma images of enumerated greedy executions are accepted
        let budget = ExplorationBudget::new(6, 6);
        let mut checked = 0;
        crate::oracle::for_each_execution(&sys, &budget, |e, _| {
            if let Some(word) = greedy_word(e) {
                let image: Vec<CommLetter> =
                    word.into_iter().filter(|l| l.kind == CommKind::Unmatched).collect();
                assert!(erased.accepts(&image), "sigma image rejected for {e:?}");
                checked += 1;
            }
        });
        assert!(checked > 10);
        // a second pending log_c is impossible: the client blocks on ack_d
        let log_c = sys.message_index("log_c").unwrap();
        let d = sys.buffer_index("d").unwrap();
        let twice = vec![CommLetter::unmatched(d, log_c); 2];
        assert!(!erased.accepts(&twice));
        // a pending ack_d after a matched log exchange is feasible
        let ack_d = sys.message_index("ack_d").unwrap();
        let c = sys.buffer_index("c").unwrap();
        assert!(erased.accepts(&[CommLetter::unmatched(c, ack_d)]));
    }

    #[test]
    fn fixture_set_agrees_with_oracle_at_depth_8() {
        for text in [
            include_str!("../fixtures/csd.fifo"),
            include_str!("../fixtures/xchg.fifo"),
            include_str!("../fixtures/csb.fifo"),
            include_str!("../fixtures/abc.fifo"),
            include_str!("../fixtures/ping.fifo"),
            include_str!("../fixtures/reqres.fifo"),
            include_str!("../fixtures/msc_orphan.fifo"),
            include_str!("../fixtures/msc_receivable.fifo"),
            include_str!("../fixtures/selfsend.fifo"),
        ] {
            let sys = parse_system(text).unwrap();
            let oracle = oracle_is_greedy_system(&sys, &ExplorationBudget::new(8, 8));
            let symbolic = check_greedy(&sys, Adjacency::Full);
            if !oracle.greedy || oracle.definitive {
                assert_eq!(symbolic.is_greedy(), oracle.greedy, "{}", sys.name());
            }
        }
    }

    #[test]
    fn witness_expansion_spells_borderline_shape() {
        // every NotGreedy witness: greedy strict prefix + final receive
        let params = crate::oracle::RandomSystemParams::default();
        for seed in 100..140 {
            let sys = crate::oracle::random_mailbox_system(seed, &params);
            let verdict = check_greedy(&sys, Adjacency::Full);
            if let Some(w) = verdict.witness {
                assert_eq!(w.word.last().map(|l| l.kind), Some(CommKind::Receive), "seed {seed}");
                assert!(sys.run(&w.actions).is_ok(), "seed {seed}");
                assert!(is_greedy_execution(&w.actions[..w.actions.len() - 1]), "seed {seed}");
                assert!(!conflict_graph(&sys, &w.actions).is_acyclic(), "seed {seed}");
                assert!(!w.cycle.is_empty(), "seed {seed}");
            }
        }
    }
}
