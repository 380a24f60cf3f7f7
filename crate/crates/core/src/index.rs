//! Adjacency lists with interned actions.

use std::collections::HashMap;

use crate::action::Action;
use crate::lts::{Lts, StateId, Transition};

/// Interned action identifier. [`TAU_ID`] is always the internal action.
pub type ActionId = usize;

pub const TAU_ID: ActionId = 0;

#[derive(Debug, Clone)]
pub struct TransitionIndex {
    actions: Vec<Action>,
    ids: HashMap<Action, ActionId>,
    forward: Vec<Vec<(ActionId, StateId)>>,
    backward: Vec<Vec<(ActionId, StateId)>>,
}

impl TransitionIndex {
    pub fn new(l: &Lts) -> Self {
        Self::from_edges(
            l.num_states(),
            l.transitions()
                .iter()
                .map(|t| (t.source, &t.action, t.target)),
        )
    }

    /// Indexes an arbitrary edge list over `num_states` states.
    pub fn from_edges<'a>(
        num_states: usize,
        edges: impl IntoIterator<Item = (StateId, &'a Action, StateId)>,
    ) -> Self {
        let mut index = TransitionIndex {
            actions: vec![Action::Tau],
            ids: HashMap::from([(Action::Tau, TAU_ID)]),
            forward: vec![Vec::new(); num_states],
            backward: vec![Vec::new(); num_states],
        };
        for (src, action, dst) in edges {
            let id = index.intern(action);
            index.forward[src].push((id, dst));
            index.backward[dst].push((id, src));
        }
        for adj in index.forward.iter_mut().chain(index.backward.iter_mut()) {
            adj.sort_unstable();
            adj.dedup();
        }
        index
    }

    fn intern(&mut self, action: &Action) -> ActionId {
        if let Some(&id) = self.ids.get(action) {
            return id;
        }
        let id = self.actions.len();
        self.actions.push(action.clone());
        self.ids.insert(action.clone(), id);
        id
    }

    pub fn num_states(&self) -> usize {
        self.forward.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn action(&self, id: ActionId) -> &Action {
        &self.actions[id]
    }

    pub fn id_of(&self, action: &Action) -> Option<ActionId> {
        self.ids.get(action).copied()
    }

    pub fn outgoing(&self, s: StateId) -> &[(ActionId, StateId)] {
        &self.forward[s]
    }

    pub fn incoming(&self, s: StateId) -> &[(ActionId, StateId)] {
        &self.backward[s]
    }

    pub fn tau_successors(&self, s: StateId) -> impl Iterator<Item = StateId> + '_ {
        self.forward[s]
            .iter()
            .filter(|(a, _)| *a == TAU_ID)
            .map(|&(_, t)| t)
    }

    pub fn num_transitions(&self) -> usize {
        self.forward.iter().map(Vec::len).sum()
    }

    /// Rebuilds the transition set, sorted as in [`Lts`].
    pub fn to_transitions(&self) -> Vec<Transition> {
        let mut out: Vec<Transition> = self
            .forward
            .iter()
            .enumerate()
            .flat_map(|(s, adj)| {
                adj.iter()
                    .map(move |&(a, t)| Transition::new(s, self.actions[a].clone(), t))
            })
            .collect();
        out.sort();
        out
    }
}
