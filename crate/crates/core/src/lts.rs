//! The labelled transition system data model.

use std::collections::{BTreeSet, VecDeque};

use crate::action::Action;
use crate::error::{Error, Result};
use crate::index::TransitionIndex;

/// Dense state identifier, `0..num_states`.
pub type StateId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub source: StateId,
    pub action: Action,
    pub target: StateId,
}

impl Transition {
    pub fn new(source: StateId, action: Action, target: StateId) -> Self {
        Transition {
            source,
            action,
            target,
        }
    }
}

/// A finite labelled transition system.
///
/// Transitions form a relation: duplicates collapse and the list is kept sorted by
/// `(source, label text, target)`. The internal action is never part of the alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lts {
    num_states: usize,
    initial: StateId,
    alphabet: BTreeSet<Action>,
    transitions: Vec<Transition>,
    names: Option<Vec<String>>,
}

impl Lts {
    pub fn new(
        num_states: usize,
        initial: StateId,
        alphabet: impl IntoIterator<Item = Action>,
        transitions: impl IntoIterator<Item = Transition>,
    ) -> Result<Self> {
        if num_states == 0 {
            return Err(Error::InvalidLts("an LTS needs at least one state".into()));
        }
        if initial >= num_states {
            return Err(Error::InvalidLts(format!(
                "initial state {initial} out of range for {num_states} states"
            )));
        }
        let alphabet: BTreeSet<Action> = alphabet.into_iter().collect();
        if alphabet.contains(&Action::Tau) {
            return Err(Error::InvalidLts(
                "the internal action cannot be part of the alphabet".into(),
            ));
        }
        let transitions: BTreeSet<Transition> = transitions.into_iter().collect();
        for t in &transitions {
            if t.source >= num_states || t.target >= num_states {
                return Err(Error::InvalidLts(format!(
                    "transition ({},{},{}) has an endpoint out of range for {num_states} states",
                    t.source, t.action, t.target
                )));
            }
            if !t.action.is_tau() && !alphabet.contains(&t.action) {
                return Err(Error::InvalidLts(format!(
                    "label {} is not in the alphabet",
                    t.action
                )));
            }
        }
        Ok(Lts {
            num_states,
            initial,
            alphabet,
            transitions: transitions.into_iter().collect(),
            names: None,
        })
    }

    /// Builds an LTS whose alphabet is exactly the set of non-internal labels used.
    pub fn from_transitions(
        num_states: usize,
        initial: StateId,
        transitions: impl IntoIterator<Item = Transition>,
    ) -> Result<Self> {
        let transitions: Vec<Transition> = transitions.into_iter().collect();
        let alphabet: Vec<Action> = transitions
            .iter()
            .filter(|t| !t.action.is_tau())
            .map(|t| t.action.clone())
            .collect();
        Lts::new(num_states, initial, alphabet, transitions)
    }

    /// Attaches display names, one per state.
    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.num_states {
            return Err(Error::InvalidLts(format!(
                "{} names given for {} states",
                names.len(),
                self.num_states
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn without_names(mut self) -> Self {
        self.names = None;
        self
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn alphabet(&self) -> &BTreeSet<Action> {
        &self.alphabet
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display name of a state; falls back to the decimal id.
    pub fn state_name(&self, s: StateId) -> String {
        match &self.names {
            Some(names) => names[s].clone(),
            None => s.to_string(),
        }
    }

    /// Outgoing transitions of `s`, sorted by label then target.
    pub fn outgoing(&self, s: StateId) -> &[Transition] {
        let lo = self.transitions.partition_point(|t| t.source < s);
        let hi = self.transitions.partition_point(|t| t.source <= s);
        &self.transitions[lo..hi]
    }

    pub fn has_tau(&self) -> bool {
        self.transitions.iter().any(|t| t.action.is_tau())
    }

    pub fn has_co_visible(&self) -> bool {
        self.alphabet.iter().any(Action::is_co_visible)
    }

    pub fn index(&self) -> TransitionIndex {
        TransitionIndex::new(self)
    }

    /// States reachable from the initial state, in breadth-first order.
    pub fn reachable(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.num_states];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut next = 0;
        while next < order.len() {
            let s = order[next];
            next += 1;
            for t in self.outgoing(s) {
                if !seen[t.target] {
                    seen[t.target] = true;
                    order.push(t.target);
                }
            }
        }
        order
    }

    pub fn tau_closure(&self, s: StateId) -> BTreeSet<StateId> {
        tau_closure(self, s)
    }

    pub fn divergent_states(&self) -> BTreeSet<StateId> {
        divergent_states(self)
    }
}

/// The smallest set containing `s` and closed under internal transitions.
pub fn tau_closure(l: &Lts, s: StateId) -> BTreeSet<StateId> {
    let mut closure = BTreeSet::from([s]);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for t in l.outgoing(u).iter().filter(|t| t.action.is_tau()) {
            if closure.insert(t.target) {
                queue.push_back(t.target);
            }
        }
    }
    closure
}

/// States from which an infinite sequence of internal transitions exists.
pub fn divergent_states(l: &Lts) -> BTreeSet<StateId> {
    let edges = l
        .transitions()
        .iter()
        .filter(|t| t.action.is_tau())
        .map(|t| (t.source, t.target));
    divergent_subset(l.num_states(), edges)
        .into_iter()
        .enumerate()
        .filter_map(|(s, d)| d.then_some(s))
        .collect()
}

/// Marks the states of a finite graph that start an infinite path.
///
/// States without successors are peeled off repeatedly; whatever survives can always
/// take another step and therefore lies on, or reaches, a cycle.
pub(crate) fn divergent_subset(
    num_states: usize,
    edges: impl IntoIterator<Item = (usize, usize)>,
) -> Vec<bool> {
    let mut out_degree = vec![0usize; num_states];
    let mut predecessors: Vec<Vec<usize>> = vec![Vec::new(); num_states];
    for (src, dst) in edges {
        out_degree[src] += 1;
        predecessors[dst].push(src);
    }
    let mut alive = vec![true; num_states];
    let mut stack: Vec<usize> = (0..num_states).filter(|&s| out_degree[s] == 0).collect();
    while let Some(u) = stack.pop() {
        alive[u] = false;
        for &p in &predecessors[u] {
            out_degree[p] -= 1;
            if out_degree[p] == 0 {
                stack.push(p);
            }
        }
    }
    alive
}

/// Incremental construction with named states.
#[derive(Debug, Default, Clone)]
pub struct LtsBuilder {
    names: Vec<String>,
    alphabet: BTreeSet<Action>,
    transitions: BTreeSet<Transition>,
}

impl LtsBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> StateId {
        self.names.push(name.into());
        self.names.len() - 1
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn add_transition(&mut self, source: StateId, action: Action, target: StateId) {
        if !action.is_tau() {
            self.alphabet.insert(action.clone());
        }
        self.transitions
            .insert(Transition::new(source, action, target));
    }

    /// Adds alphabet members that need not label any transition.
    pub fn extend_alphabet(&mut self, actions: impl IntoIterator<Item = Action>) {
        self.alphabet
            .extend(actions.into_iter().filter(|a| !a.is_tau()));
    }

    pub fn build(self, initial: StateId) -> Result<Lts> {
        Lts::new(self.names.len(), initial, self.alphabet, self.transitions)?.with_names(self.names)
    }
}
