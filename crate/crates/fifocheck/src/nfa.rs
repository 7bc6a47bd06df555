//! Generic finite-automaton toolkit backing every decision procedure:
//! products, emptiness with shortest witness, pruning, letter erasure and
//! cycle/longest-path analysis.
//!
//! Letters are opaque ordered values, so the same toolkit serves
//! communication alphabets, configuration-word alphabets and product letters.
//! Two layers are provided: the concrete [`Nfa`] with the full operation set,
//! and the [`Automaton`] trait for constructions whose state spaces are
//! exponential and must be explored lazily from their initial states.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

#[derive(Error, Clone, PartialEq, Eq, Debug)]
pub enum NfaError {
    #[error("state {0} out of range")]
    BadState(usize),
    #[error("transition letter not in the declared alphabet")]
    LetterOutsideAlphabet,
    #[error("alphabets differ")]
    AlphabetMismatch,
}

/// A nondeterministic finite automaton with optional epsilon moves.
#[derive(Clone, Debug)]
pub struct Nfa<L> {
    n_states: usize,
    alphabet: Vec<L>,
    /// (src, letter index or None for epsilon, dst)
    transitions: Vec<(usize, Option<usize>, usize)>,
    adjacency: Vec<Vec<(Option<usize>, usize)>>,
    initials: Vec<usize>,
    finals: Vec<bool>,
}

impl<L: Clone + Eq + Hash + Ord + Debug> Nfa<L> {
    pub fn new(
        n_states: usize,
        initials: Vec<usize>,
        finals: Vec<usize>,
        transitions: Vec<(usize, Option<L>, usize)>,
        mut alphabet: Vec<L>,
    ) -> Result<Self, NfaError> {
        alphabet.sort();
        alphabet.dedup();
        let letter_index: HashMap<&L, usize> =
            alphabet.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut indexed = Vec::with_capacity(transitions.len());
        for (src, letter, dst) in &transitions {
            if *src >= n_states || *dst >= n_states {
                return Err(NfaError::BadState((*src).max(*dst)));
            }
            let li = match letter {
                Some(l) => {
                    Some(*letter_index.get(l).ok_or(NfaError::LetterOutsideAlphabet)?)
                }
                None => None,
            };
            indexed.push((*src, li, *dst));
        }
        for &s in initials.iter().chain(finals.iter()) {
            if s >= n_states {
                return Err(NfaError::BadState(s));
            }
        }
        indexed.sort();
        indexed.dedup();
        let mut final_mask = vec![false; n_states];
        for &f in &finals {
            final_mask[f] = true;
        }
        let mut initials = initials;
        initials.sort();
        initials.dedup();
        let mut adjacency = vec![Vec::new(); n_states];
        for &(src, li, dst) in &indexed {
            adjacency[src].push((li, dst));
        }
        Ok(Nfa { n_states, alphabet, transitions: indexed, adjacency, initials, finals: final_mask })
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn alphabet(&self) -> &[L] {
        &self.alphabet
    }

    pub fn initials(&self) -> &[usize] {
        &self.initials
    }

    pub fn is_final(&self, s: usize) -> bool {
        self.finals[s]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, Option<&L>, usize)> + '_ {
        self.transitions
            .iter()
            .map(move |&(s, li, d)| (s, li.map(|i| &self.alphabet[i]), d))
    }

    fn epsilon_closure(&self, states: &mut HashSet<usize>) {
        let mut stack: Vec<usize> = states.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for &(li, dst) in &self.adjacency[s] {
                if li.is_none() && states.insert(dst) {
                    stack.push(dst);
                }
            }
        }
    }

    /// Epsilon-closed successor set of a state set on one letter.
    pub fn step_closed(&self, states: &HashSet<usize>, letter: &L) -> HashSet<usize> {
        let li = self.alphabet.iter().position(|l| l == letter);
        let mut out = HashSet::new();
        if let Some(li) = li {
            let mut closed = states.clone();
            self.epsilon_closure(&mut closed);
            for s in closed {
                for &(tl, dst) in &self.adjacency[s] {
                    if tl == Some(li) {
                        out.insert(dst);
                    }
                }
            }
            self.epsilon_closure(&mut out);
        }
        out
    }

    pub fn initial_set_closed(&self) -> HashSet<usize> {
        let mut set: HashSet<usize> = self.initials.iter().copied().collect();
        self.epsilon_closure(&mut set);
        set
    }

    pub fn set_accepts(&self, states: &HashSet<usize>) -> bool {
        let mut closed = states.clone();
        self.epsilon_closure(&mut closed);
        closed.iter().any(|&s| self.finals[s])
    }

    pub fn accepts(&self, word: &[L]) -> bool {
        let mut current = self.initial_set_closed();
        for letter in word {
            current = self.step_closed(&current, letter);
            if current.is_empty() {
                return false;
            }
        }
        self.set_accepts(&current)
    }

    /// Product construction, explored lazily from the initial pairs;
    /// `L(a ∩ b) = L(a) ∩ L(b)`. Alphabets must be structurally equal.
    pub fn intersect(&self, other: &Nfa<L>) -> Result<Nfa<L>, NfaError> {
        if self.alphabet != other.alphabet {
            return Err(NfaError::AlphabetMismatch);
        }
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut order: Vec<(usize, usize)> = Vec::new();
        let mut queue = VecDeque::new();
        let mut initials = Vec::new();
        for &i in &self.initials {
            for &j in &other.initials {
                if let std::collections::hash_map::Entry::Vacant(slot) = index.entry((i, j)) {
                    slot.insert(order.len());
                    initials.push(order.len());
                    order.push((i, j));
                    queue.push_back((i, j));
                }
            }
        }
        let mut transitions: Vec<(usize, Option<L>, usize)> = Vec::new();
        while let Some((i, j)) = queue.pop_front() {
            let src = index[&(i, j)];
            let push = |index: &mut HashMap<(usize, usize), usize>,
                            order: &mut Vec<(usize, usize)>,
                            queue: &mut VecDeque<(usize, usize)>,
                            pair: (usize, usize)|
             -> usize {
                *index.entry(pair).or_insert_with(|| {
                    order.push(pair);
                    queue.push_back(pair);
                    order.len() - 1
                })
            };
            for &(li, dst_a) in &self.adjacency[i] {
                match li {
                    None => {
                        let d = push(&mut index, &mut order, &mut queue, (dst_a, j));
                        transitions.push((src, None, d));
                    }
                    Some(li) => {
                        for &(lj, dst_b) in &other.adjacency[j] {
                            if lj == Some(li) {
                                let d =
                                    push(&mut index, &mut order, &mut queue, (dst_a, dst_b));
                                transitions.push((src, Some(self.alphabet[li].clone()), d));
                            }
                        }
                    }
                }
            }
            for &(lj, dst_b) in &other.adjacency[j] {
                if lj.is_none() {
                    let d = push(&mut index, &mut order, &mut queue, (i, dst_b));
                    transitions.push((src, None, d));
                }
            }
        }
        let finals: Vec<usize> = order
            .iter()
            .enumerate()
            .filter(|(_, &(i, j))| self.finals[i] && other.finals[j])
            .map(|(k, _)| k)
            .collect();
        Nfa::new(order.len().max(1), initials, finals, transitions, self.alphabet.clone())
    }

    /// `None` iff the language is empty, otherwise a shortest accepting word
    /// with lexicographic tie-breaking over the letter order.
    pub fn find_accepting_word(&self) -> Option<Vec<L>> {
        // BFS where each state is first reached by the lex-least word of its
        // depth; epsilon moves are folded in at zero cost.
        let mut parent: HashMap<usize, (usize, Option<usize>)> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut seen = HashSet::new();
        let enqueue_closed =
            |s: usize,
             from: Option<(usize, Option<usize>)>,
             seen: &mut HashSet<usize>,
             parent: &mut HashMap<usize, (usize, Option<usize>)>,
             queue: &mut VecDeque<usize>| {
                if seen.insert(s) {
                    if let Some(p) = from {
                        parent.insert(s, p);
                    }
                    queue.push_back(s);
                }
            };
        for &i in &self.initials {
            enqueue_closed(i, None, &mut seen, &mut parent, &mut queue);
        }
        let mut accept = None;
        'outer: while let Some(s) = queue.pop_front() {
            if self.finals[s] {
                accept = Some(s);
                break 'outer;
            }
            // epsilon successors keep the same word, explore first
            let mut eps: Vec<usize> = self.adjacency[s]
                .iter()
                .filter(|(li, _)| li.is_none())
                .map(|&(_, d)| d)
                .collect();
            eps.sort();
            for d in eps {
                enqueue_closed(d, Some((s, None)), &mut seen, &mut parent, &mut queue);
            }
            let mut lettered: Vec<(usize, usize)> = self.adjacency[s]
                .iter()
                .filter_map(|&(li, d)| li.map(|li| (li, d)))
                .collect();
            lettered.sort();
            for (li, d) in lettered {
                enqueue_closed(d, Some((s, Some(li))), &mut seen, &mut parent, &mut queue);
            }
        }
        let mut state = accept?;
        let mut word = Vec::new();
        while let Some(&(prev, letter)) = parent.get(&state) {
            if let Some(li) = letter {
                word.push(self.alphabet[li].clone());
            }
            state = prev;
        }
        word.reverse();
        Some(word)
    }

    fn forward_reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.n_states];
        let mut stack: Vec<usize> = self.initials.clone();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &(_, d) in &self.adjacency[s] {
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        seen
    }

    fn co_reachable(&self) -> Vec<bool> {
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); self.n_states];
        for &(s, _, d) in &self.transitions {
            rev[d].push(s);
        }
        let mut seen = vec![false; self.n_states];
        let mut stack: Vec<usize> = (0..self.n_states).filter(|&s| self.finals[s]).collect();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &p in &rev[s] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Keeps exactly the states reachable from an initial state and
    /// co-reachable to a final state; the language is preserved.
    pub fn prune(&self) -> Nfa<L> {
        self.prune_with_map().0
    }

    /// Pruning plus the map from new state indices to the original ones.
    pub fn prune_with_map(&self) -> (Nfa<L>, Vec<usize>) {
        let fwd = self.forward_reachable();
        let back = self.co_reachable();
        let mut keep = Vec::new();
        let mut remap = vec![usize::MAX; self.n_states];
        for s in 0..self.n_states {
            if fwd[s] && back[s] {
                remap[s] = keep.len();
                keep.push(s);
            }
        }
        let transitions: Vec<(usize, Option<L>, usize)> = self
            .transitions
            .iter()
            .filter(|&&(s, _, d)| remap[s] != usize::MAX && remap[d] != usize::MAX)
            .map(|&(s, li, d)| (remap[s], li.map(|i| self.alphabet[i].clone()), remap[d]))
            .collect();
        let initials = self
            .initials
            .iter()
            .filter(|&&s| remap[s] != usize::MAX)
            .map(|&s| remap[s])
            .collect();
        let finals = (0..self.n_states)
            .filter(|&s| self.finals[s] && remap[s] != usize::MAX)
            .map(|s| remap[s])
            .collect();
        let nfa = Nfa::new(keep.len().max(1), initials, finals, transitions, self.alphabet.clone())
            .expect("pruned automaton is well-formed");
        (nfa, keep)
    }

    /// Replaces every transition whose letter fails `keep` by an epsilon
    /// transition: the image under the erasing morphism.
    pub fn erase_letters(&self, keep: impl Fn(&L) -> bool) -> Nfa<L> {
        let transitions: Vec<(usize, Option<L>, usize)> = self
            .transitions
            .iter()
            .map(|&(s, li, d)| {
                let letter = li.map(|i| self.alphabet[i].clone()).filter(|l| keep(l));
                (s, letter, d)
            })
            .collect();
        let finals = (0..self.n_states).filter(|&s| self.finals[s]).collect();
        Nfa::new(self.n_states, self.initials.clone(), finals, transitions, self.alphabet.clone())
            .expect("erased automaton is well-formed")
    }

    fn sccs(&self, alive: &[bool]) -> Vec<usize> {
        // iterative Tarjan over the alive sub-automaton
        let n = self.n_states;
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut scc = vec![usize::MAX; n];
        let mut next_index = 0;
        let mut scc_count = 0;
        for root in 0..n {
            if !alive[root] || index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            while let Some(&mut (v, ref mut ei)) = call.last_mut() {
                if *ei == 0 {
                    index[v] = next_index;
                    low[v] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v] = true;
                }
                let mut advanced = false;
                while *ei < self.adjacency[v].len() {
                    let (_, w) = self.adjacency[v][*ei];
                    *ei += 1;
                    if !alive[w] {
                        continue;
                    }
                    if index[w] == usize::MAX {
                        call.push((w, 0));
                        advanced = true;
                        break;
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                }
                if advanced {
                    continue;
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        scc[w] = scc_count;
                        if w == v {
                            break;
                        }
                    }
                    scc_count += 1;
                }
                call.pop();
                if let Some(&mut (parent, _)) = call.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
        scc
    }

    /// Cycle/longest-path analysis over the reachable part. `classify` maps
    /// letters to a counting class (`None` letters are free). Returns
    /// [`Finiteness::Infinite`] with a pumpable witness when some cycle
    /// contains a counted transition, otherwise the maximum count per class
    /// over all paths from an initial state.
    pub fn finiteness_and_longest<C: Clone + Ord>(
        &self,
        classify: impl Fn(&L) -> Option<C>,
    ) -> Finiteness<L, C> {
        let alive = self.forward_reachable();
        let scc = self.sccs(&alive);
        // counted edge inside an SCC -> pumpable cycle
        for &(s, li, d) in &self.transitions {
            if !alive[s] || !alive[d] {
                continue;
            }
            let letter = match li {
                Some(i) => &self.alphabet[i],
                None => continue,
            };
            if classify(letter).is_none() || scc[s] != scc[d] {
                continue;
            }
            let back = self
                .path_within(|x| alive[x] && scc[x] == scc[s], d, s)
                .expect("same SCC implies a path back");
            let mut cycle = vec![(s, Some(letter.clone()), d)];
            cycle.extend(back);
            let prefix = self
                .path_from_initials(|x| alive[x], s)
                .expect("state is reachable");
            return Finiteness::Infinite(PumpableCycle { prefix, cycle });
        }
        // condensation is a DAG; longest path per class with free epsilon
        let n_sccs = scc.iter().filter(|&&c| c != usize::MAX).max().map_or(0, |&m| m + 1);
        let mut classes: Vec<C> = Vec::new();
        for &(s, li, _) in &self.transitions {
            if !alive[s] {
                continue;
            }
            if let Some(i) = li {
                if let Some(c) = classify(&self.alphabet[i]) {
                    if !classes.contains(&c) {
                        classes.push(c);
                    }
                }
            }
        }
        classes.sort();
        // topological order of SCCs: Tarjan emits them in reverse order
        let order: Vec<usize> = (0..n_sccs).rev().collect();
        let mut best: Vec<BTreeMap<C, usize>> = vec![BTreeMap::new(); n_sccs];
        for &i in &self.initials {
            if alive[i] {
                best[scc[i]] = classes.iter().map(|c| (c.clone(), 0)).collect();
            }
        }
        let mut result: BTreeMap<C, usize> = classes.iter().map(|c| (c.clone(), 0)).collect();
        for &comp in &order {
            if best[comp].is_empty() {
                continue;
            }
            for (c, &v) in &best[comp] {
                let slot = result.get_mut(c).expect("class present");
                *slot = (*slot).max(v);
            }
            for &(s, li, d) in &self.transitions {
                if !alive[s] || !alive[d] || scc[s] != comp || scc[d] == comp {
                    continue;
                }
                let weight_class = li.and_then(|i| classify(&self.alphabet[i]));
                let src_best = best[comp].clone();
                let dst = &mut best[scc[d]];
                for (c, v) in src_best {
                    let add = usize::from(weight_class.as_ref() == Some(&c));
                    let slot = dst.entry(c).or_insert(0);
                    *slot = (*slot).max(v + add);
                }
            }
        }
        Finiteness::Finite(result)
    }

    fn path_within(
        &self,
        alive: impl Fn(usize) -> bool,
        from: usize,
        to: usize,
    ) -> Option<Vec<(usize, Option<L>, usize)>> {
        if from == to {
            return Some(Vec::new());
        }
        let mut parent: HashMap<usize, (usize, Option<usize>)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = HashSet::from([from]);
        while let Some(s) = queue.pop_front() {
            for &(li, d) in &self.adjacency[s] {
                if alive(d) && seen.insert(d) {
                    parent.insert(d, (s, li));
                    if d == to {
                        return Some(self.unwind(&parent, from, to));
                    }
                    queue.push_back(d);
                }
            }
        }
        None
    }

    fn path_from_initials(
        &self,
        alive: impl Fn(usize) -> bool,
        to: usize,
    ) -> Option<Vec<(usize, Option<L>, usize)>> {
        for &i in &self.initials {
            if let Some(p) = self.path_within(&alive, i, to) {
                return Some(p);
            }
        }
        None
    }

    fn unwind(
        &self,
        parent: &HashMap<usize, (usize, Option<usize>)>,
        from: usize,
        to: usize,
    ) -> Vec<(usize, Option<L>, usize)> {
        let mut out = Vec::new();
        let mut cur = to;
        while cur != from {
            let (prev, li) = parent[&cur];
            out.push((prev, li.map(|i| self.alphabet[i].clone()), cur));
            cur = prev;
        }
        out.reverse();
        out
    }
}

/// Result of [`Nfa::finiteness_and_longest`].
#[derive(Clone, Debug)]
pub enum Finiteness<L, C> {
    Infinite(PumpableCycle<L>),
    Finite(BTreeMap<C, usize>),
}

/// A reachable cycle containing at least one counted transition.
#[derive(Clone, Debug)]
pub struct PumpableCycle<L> {
    pub prefix: Vec<(usize, Option<L>, usize)>,
    pub cycle: Vec<(usize, Option<L>, usize)>,
}

/// Lazily explorable automaton. Implementations must return successors
/// sorted by letter so searches are deterministic, and must not use epsilon
/// moves.
pub trait Automaton {
    type State: Clone + Eq + Hash;
    type Letter: Clone + Eq + Hash + Ord + Debug;

    fn initial_states(&self) -> Vec<Self::State>;
    fn successors(&self, state: &Self::State) -> Vec<(Self::Letter, Self::State)>;
    fn is_accepting(&self, state: &Self::State) -> bool;

    /// Successors on one specific letter; implementations with letter-driven
    /// transition schemes override this to avoid scanning their alphabet.
    fn successors_on(&self, state: &Self::State, letter: &Self::Letter) -> Vec<Self::State> {
        self.successors(state)
            .into_iter()
            .filter(|(l, _)| l == letter)
            .map(|(_, s)| s)
            .collect()
    }
}

/// Lazy product of two automata over the same letter type; accepts the
/// intersection of the component languages.
pub struct Product<'a, A, B>(pub &'a A, pub &'a B);

impl<A, B, L> Automaton for Product<'_, A, B>
where
    L: Clone + Eq + Hash + Ord + Debug,
    A: Automaton<Letter = L>,
    B: Automaton<Letter = L>,
{
    type State = (A::State, B::State);
    type Letter = L;

    fn initial_states(&self) -> Vec<Self::State> {
        let rights = self.1.initial_states();
        self.0
            .initial_states()
            .into_iter()
            .flat_map(|a| rights.iter().map(move |b| (a.clone(), b.clone())))
            .collect()
    }

    fn successors(&self, state: &Self::State) -> Vec<(L, Self::State)> {
        let mut out = Vec::new();
        for (letter, sa) in self.0.successors(&state.0) {
            for sb in self.1.successors_on(&state.1, &letter) {
                out.push((letter.clone(), (sa.clone(), sb)));
            }
        }
        out.sort_by(|(a, _), (b, _)| a.cmp(b));
        out
    }

    fn is_accepting(&self, state: &Self::State) -> bool {
        self.0.is_accepting(&state.0) && self.1.is_accepting(&state.1)
    }
}

/// Set-of-states simulation of a lazy automaton on a word.
pub fn accepts_word<A: Automaton>(automaton: &A, word: &[A::Letter]) -> bool {
    let mut current: HashSet<A::State> = automaton.initial_states().into_iter().collect();
    for letter in word {
        let mut next = HashSet::new();
        for state in &current {
            next.extend(automaton.successors_on(state, letter));
        }
        if next.is_empty() {
            return false;
        }
        current = next;
    }
    current.iter().any(|s| automaton.is_accepting(s))
}

/// BFS emptiness check with witness: a shortest accepting word, ties broken
/// lexicographically by letter order.
pub fn find_shortest_word<A: Automaton>(automaton: &A) -> Option<Vec<A::Letter>> {
    let mut seen: HashSet<A::State> = HashSet::new();
    let mut parent: HashMap<A::State, (A::State, A::Letter)> = HashMap::new();
    let mut queue: VecDeque<A::State> = VecDeque::new();
    for s in automaton.initial_states() {
        if seen.insert(s.clone()) {
            queue.push_back(s);
        }
    }
    while let Some(state) = queue.pop_front() {
        if automaton.is_accepting(&state) {
            let mut word = Vec::new();
            let mut cur = state;
            while let Some((prev, letter)) = parent.get(&cur) {
                word.push(letter.clone());
                cur = prev.clone();
            }
            word.reverse();
            return Some(word);
        }
        for (letter, next) in automaton.successors(&state) {
            if seen.insert(next.clone()) {
                parent.insert(next.clone(), (state.clone(), letter));
                queue.push_back(next);
            }
        }
    }
    None
}

/// Explores the reachable fragment into a concrete [`Nfa`]. The alphabet must
/// cover every letter the exploration can produce.
pub fn materialize<A: Automaton>(automaton: &A, alphabet: Vec<A::Letter>) -> Nfa<A::Letter> {
    let mut index: HashMap<A::State, usize> = HashMap::new();
    let mut order: Vec<A::State> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut initials = Vec::new();
    for s in automaton.initial_states() {
        if !index.contains_key(&s) {
            index.insert(s.clone(), order.len());
            initials.push(order.len());
            order.push(s);
            queue.push_back(initials[initials.len() - 1]);
        }
    }
    let mut transitions: Vec<(usize, Option<A::Letter>, usize)> = Vec::new();
    while let Some(si) = queue.pop_front() {
        let state = order[si].clone();
        for (letter, next) in automaton.successors(&state) {
            let di = match index.get(&next) {
                Some(&d) => d,
                None => {
                    let d = order.len();
                    index.insert(next.clone(), d);
                    order.push(next);
                    queue.push_back(d);
                    d
                }
            };
            transitions.push((si, Some(letter), di));
        }
    }
    let finals: Vec<usize> =
        order.iter().enumerate().filter(|(_, s)| automaton.is_accepting(s)).map(|(i, _)| i).collect();
    Nfa::new(order.len().max(1), initials, finals, transitions, alphabet)
        .expect("materialized automaton is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letters(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn single_word(word: &[&str], alphabet: &[&str]) -> Nfa<String> {
        let transitions: Vec<(usize, Option<String>, usize)> = word
            .iter()
            .enumerate()
            .map(|(i, l)| (i, Some(l.to_string()), i + 1))
            .collect();
        Nfa::new(word.len() + 1, vec![0], vec![word.len()], transitions, letters(alphabet)).unwrap()
    }

    #[test]
    fn intersect_singletons() {
        let a = single_word(&["x"], &["x", "y"]);
        // accepts x and y
        let b = Nfa::new(
            2,
            vec![0],
            vec![1],
            vec![(0, Some("x".to_string()), 1), (0, Some("y".to_string()), 1)],
            letters(&["x", "y"]),
        )
        .unwrap();
        let i = a.intersect(&b).unwrap();
        assert!(i.accepts(&["x".to_string()]));
        assert!(!i.accepts(&["y".to_string()]));
        assert!(!i.accepts(&[]));
    }

    #[test]
    fn intersect_with_universal_is_identity() {
        let a = single_word(&["x", "y"], &["x", "y"]);
        let all = Nfa::new(
            1,
            vec![0],
            vec![0],
            vec![(0, Some("x".to_string()), 0), (0, Some("y".to_string()), 0)],
            letters(&["x", "y"]),
        )
        .unwrap();
        let i = a.intersect(&all).unwrap();
        assert!(i.accepts(&["x".to_string(), "y".to_string()]));
        assert!(!i.accepts(&["x".to_string()]));
    }

    #[test]
    fn alphabet_mismatch_rejected() {
        let a = single_word(&["x"], &["x"]);
        let b = single_word(&["x"], &["x", "y"]);
        assert!(matches!(a.intersect(&b), Err(NfaError::AlphabetMismatch)));
    }

    #[test]
    fn unreachable_finals_have_no_word() {
        let nfa = Nfa::new(
            3,
            vec![0],
            vec![2],
            vec![(0, Some("x".to_string()), 1)],
            letters(&["x"]),
        )
        .unwrap();
        assert_eq!(nfa.find_accepting_word(), None);
    }

    #[test]
    fn shortest_word_is_lexicographically_least() {
        // both "b" and "a c" reach a final state; shortest wins; among
        // depth-2 candidates starting from ties, lex order wins
        let nfa = Nfa::new(
            4,
            vec![0],
            vec![3],
            vec![
                (0, Some("b".to_string()), 3),
                (0, Some("a".to_string()), 1),
                (1, Some("c".to_string()), 3),
            ],
            letters(&["a", "b", "c"]),
        )
        .unwrap();
        assert_eq!(nfa.find_accepting_word(), Some(vec!["b".to_string()]));

        let tie = Nfa::new(
            4,
            vec![0],
            vec![3],
            vec![
                (0, Some("b".to_string()), 1),
                (1, Some("a".to_string()), 3),
                (0, Some("a".to_string()), 2),
                (2, Some("b".to_string()), 3),
            ],
            letters(&["a", "b"]),
        )
        .unwrap();
        assert_eq!(tie.find_accepting_word(), Some(vec!["a".to_string(), "b".to_string()]));
    }

    #[test]
    fn single_transition_word() {
        let nfa = single_word(&["x"], &["x"]);
        assert_eq!(nfa.find_accepting_word(), Some(vec!["x".to_string()]));
    }

    #[test]
    fn prune_removes_dead_states_preserving_language() {
        let nfa = Nfa::new(
            4,
            vec![0],
            vec![1],
            vec![
                (0, Some("x".to_string()), 1),
                (0, Some("y".to_string()), 2), // 2 is a dead end
                (3, Some("x".to_string()), 1), // 3 is unreachable
            ],
            letters(&["x", "y"]),
        )
        .unwrap();
        let pruned = nfa.prune();
        assert_eq!(pruned.n_states(), 2);
        assert!(pruned.accepts(&["x".to_string()]));
        assert!(!pruned.accepts(&["y".to_string()]));
        // idempotent
        assert_eq!(pruned.prune().n_states(), 2);
    }

    #[test]
    fn prune_empty_language_leaves_nothing() {
        let nfa = Nfa::new(2, vec![0], vec![], vec![(0, Some("x".to_string()), 1)], letters(&["x"])).unwrap();
        let (pruned, kept) = nfa.prune_with_map();
        assert!(kept.is_empty());
        assert_eq!(pruned.find_accepting_word(), None);
    }

    #[test]
    fn erase_all_letters_keeps_reachability_only() {
        let nfa = single_word(&["x", "y"], &["x", "y"]);
        let erased = nfa.erase_letters(|_| false);
        assert!(erased.accepts(&[]));
        assert!(!erased.accepts(&["x".to_string()]));
        let unchanged = nfa.erase_letters(|_| true);
        assert!(unchanged.accepts(&["x".to_string(), "y".to_string()]));
    }

    #[test]
    fn counted_self_loop_is_infinite() {
        let nfa = Nfa::new(
            1,
            vec![0],
            vec![0],
            vec![(0, Some("x".to_string()), 0)],
            letters(&["x"]),
        )
        .unwrap();
        match nfa.finiteness_and_longest(|l| Some(l.clone())) {
            Finiteness::Infinite(w) => {
                assert!(w.prefix.is_empty());
                assert_eq!(w.cycle.len(), 1);
            }
            Finiteness::Finite(_) => panic!("expected infinite"),
        }
    }

    #[test]
    fn linear_chain_counts_three() {
        let nfa = single_word(&["x", "x", "x"], &["x"]);
        match nfa.finiteness_and_longest(|l| Some(l.clone())) {
            Finiteness::Finite(counts) => assert_eq!(counts["x"], 3),
            Finiteness::Infinite(_) => panic!("expected finite"),
        }
    }

    #[test]
    fn free_cycle_with_counted_tail_is_finite() {
        // loop on y (not counted), then one counted x
        let nfa = Nfa::new(
            2,
            vec![0],
            vec![1],
            vec![(0, Some("y".to_string()), 0), (0, Some("x".to_string()), 1)],
            letters(&["x", "y"]),
        )
        .unwrap();
        match nfa.finiteness_and_longest(|l| (l == "x").then(|| l.clone())) {
            Finiteness::Finite(counts) => assert_eq!(counts["x"], 1),
            Finiteness::Infinite(_) => panic!("expected finite"),
        }
    }

    #[test]
    fn per_class_longest_paths() {
        // x x y | y branch: max x = 2, max y = 1 on the left, 1 on the right
        let nfa = Nfa::new(
            5,
            vec![0],
            vec![3, 4],
            vec![
                (0, Some("x".to_string()), 1),
                (1, Some("x".to_string()), 2),
                (2, Some("y".to_string()), 3),
                (0, Some("y".to_string()), 4),
            ],
            letters(&["x", "y"]),
        )
        .unwrap();
        match nfa.finiteness_and_longest(|l| Some(l.clone())) {
            Finiteness::Finite(counts) => {
                assert_eq!(counts["x"], 2);
                assert_eq!(counts["y"], 1);
            }
            Finiteness::Infinite(_) => panic!("expected finite"),
        }
    }

    /// All words over `alphabet` of length at most `max_len`.
    fn all_words(alphabet: &[&str], max_len: usize) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> = vec![Vec::new()];
        let mut layer: Vec<Vec<String>> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for l in alphabet {
                    let mut w = w.clone();
                    w.push(l.to_string());
                    next.push(w);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn membership_preserved_by_prune_exhaustively() {
        let nfa = Nfa::new(
            5,
            vec![0],
            vec![2],
            vec![
                (0, Some("a".to_string()), 1),
                (1, Some("b".to_string()), 2),
                (2, Some("a".to_string()), 1),
                (1, Some("a".to_string()), 4),
            ],
            letters(&["a", "b"]),
        )
        .unwrap();
        let pruned = nfa.prune();
        // 2^10 - 1 words, more than a thousand membership samples
        for w in all_words(&["a", "b"], 9) {
            assert_eq!(nfa.accepts(&w), pruned.accepts(&w), "{w:?}");
        }
    }

    #[test]
    fn intersection_language_is_contained_in_both() {
        // a: even number of a's; b: ends with b
        let a = Nfa::new(
            2,
            vec![0],
            vec![0],
            vec![
                (0, Some("a".to_string()), 1),
                (1, Some("a".to_string()), 0),
                (0, Some("b".to_string()), 0),
                (1, Some("b".to_string()), 1),
            ],
            letters(&["a", "b"]),
        )
        .unwrap();
        let b = Nfa::new(
            2,
            vec![0],
            vec![1],
            vec![
                (0, Some("a".to_string()), 0),
                (0, Some("b".to_string()), 1),
                (1, Some("a".to_string()), 0),
                (1, Some("b".to_string()), 1),
            ],
            letters(&["a", "b"]),
        )
        .unwrap();
        let both = a.intersect(&b).unwrap();
        for w in all_words(&["a", "b"], 8) {
            let hit = both.accepts(&w);
            assert_eq!(hit, a.accepts(&w) && b.accepts(&w), "{w:?}");
            if hit {
                assert!(a.accepts(&w) && b.accepts(&w));
            }
        }
    }
}
