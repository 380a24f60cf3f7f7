//! Asynchronously communicating decomposition.
//!
//! Each component owns a bounded FIFO receive queue. A send still synchronises with the
//! peer, but the peer only appends a message naming the control state it must move
//! to; consuming the front message is a separate internal step.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::action::Action;
use crate::error::{Error, Result};
use crate::lts::{Lts, LtsBuilder, StateId};
use crate::partition::{AlphabetPartition, Component};
use crate::product::{sync_product, ProductStateMap};

use super::{check_alphabet_contract, control_id, skeletons, Namer, SymbolicState};

pub const DEFAULT_CAPACITY: usize = 1;

/// A queued `t_{x}` message: on consumption the receiver moves to control state `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Message(pub StateId);

/// Composite state of a queue component; `queue[0]` is the front.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QueueState {
    pub control: StateId,
    pub queue: Vec<Message>,
}

/// A transition system whose states carry a bounded message queue.
#[derive(Debug, Clone)]
pub struct QueueLts {
    controls: Vec<SymbolicState>,
    control_names: Vec<String>,
    initial: StateId,
    alphabet: BTreeSet<Action>,
    local: Vec<(StateId, Action, StateId)>,
    receives: Vec<(StateId, Action, Message)>,
    capacity: usize,
}

impl QueueLts {
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn num_controls(&self) -> usize {
        self.controls.len()
    }

    pub fn controls(&self) -> &[SymbolicState] {
        &self.controls
    }

    pub fn control_name(&self, s: StateId) -> &str {
        &self.control_names[s]
    }

    pub fn initial(&self) -> QueueState {
        QueueState {
            control: self.initial,
            queue: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &BTreeSet<Action> {
        &self.alphabet
    }

    /// Moves that leave the queue untouched.
    pub fn local_moves(&self) -> &[(StateId, Action, StateId)] {
        &self.local
    }

    /// `(control, co-label, message)`: receiving appends `message` at the back.
    pub fn receive_moves(&self) -> &[(StateId, Action, Message)] {
        &self.receives
    }

    /// Same system with a different queue bound.
    pub fn with_capacity(mut self, capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::invalid("queue capacity must be at least 1"));
        }
        self.capacity = capacity;
        Ok(self)
    }

    /// All moves from `state`: local moves, then receives with room, then consumption.
    pub fn successors(&self, state: &QueueState) -> Vec<(Action, QueueState)> {
        let mut out = Vec::new();
        for (_, a, to) in &self.local[span(&self.local, state.control)] {
            out.push((
                a.clone(),
                QueueState {
                    control: *to,
                    queue: state.queue.clone(),
                },
            ));
        }
        if state.queue.len() < self.capacity {
            for (_, a, msg) in &self.receives[span(&self.receives, state.control)] {
                let mut queue = state.queue.clone();
                queue.push(*msg);
                out.push((
                    a.clone(),
                    QueueState {
                        control: state.control,
                        queue,
                    },
                ));
            }
        }
        if let Some((&Message(to), rest)) = state.queue.split_first() {
            out.push((
                Action::Tau,
                QueueState {
                    control: to,
                    queue: rest.to_vec(),
                },
            ));
        }
        out
    }

    /// `<control>[<front>,...,<back>]`.
    pub fn state_name(&self, state: &QueueState) -> String {
        let mut name = format!("{}[", self.control_names[state.control]);
        for (k, Message(x)) in state.queue.iter().enumerate() {
            if k > 0 {
                name.push(',');
            }
            write!(name, "t_{{{}}}", self.control_names[*x]).unwrap();
        }
        name.push(']');
        name
    }
}

/// Index range of the entries of a source-sorted move list that start at `s`.
fn span<A, B>(moves: &[(StateId, A, B)], s: StateId) -> std::ops::Range<usize> {
    moves.partition_point(|m| m.0 < s)..moves.partition_point(|m| m.0 <= s)
}

#[derive(Debug, Clone)]
pub struct AsyncDecomposition {
    pub m1: QueueLts,
    pub m2: QueueLts,
    pub partition: AlphabetPartition,
}

impl AsyncDecomposition {
    pub fn component(&self, c: Component) -> &QueueLts {
        match c {
            Component::First => &self.m1,
            Component::Second => &self.m2,
        }
    }

    pub fn capacity(&self) -> usize {
        self.m1.capacity
    }
}

/// Queue-based decomposition with the default capacity of one message.
pub fn decomp_a(m: &Lts, p: &AlphabetPartition) -> Result<AsyncDecomposition> {
    decomp_a_with_capacity(m, p, DEFAULT_CAPACITY)
}

pub fn decomp_a_with_capacity(
    m: &Lts,
    p: &AlphabetPartition,
    capacity: usize,
) -> Result<AsyncDecomposition> {
    if capacity == 0 {
        return Err(Error::invalid("queue capacity must be at least 1"));
    }
    let namer = Namer::new(m);
    let initial = control_id(m.initial(), Component::First);
    let [first, second] = skeletons(m, p)?;
    let build = |c: Component, skel: super::Skeleton| {
        let mut alphabet: BTreeSet<Action> = p.half(c).clone();
        alphabet.extend(skel.local.iter().map(|(_, a, _)| a.clone()));
        alphabet.extend(skel.receives.iter().map(|(_, a, _)| a.clone()));
        alphabet.remove(&Action::Tau);
        QueueLts {
            control_names: skel.states.iter().map(|s| namer.state(s)).collect(),
            controls: skel.states,
            initial,
            alphabet,
            local: skel.local,
            receives: skel
                .receives
                .into_iter()
                .map(|(at, a, to)| (at, a, Message(to)))
                .collect(),
            capacity,
        }
    };
    let m1 = build(Component::First, first);
    let m2 = build(Component::Second, second);
    check_alphabet_contract(&m1.alphabet, &m2.alphabet, p)?;
    Ok(AsyncDecomposition {
        m1,
        m2,
        partition: p.clone(),
    })
}

/// Reachable composite states as a plain LTS.
pub fn flatten(q: &QueueLts) -> Lts {
    flatten_states(q).0
}

/// Like [`flatten`], also returning the composite state behind every flat state id.
pub fn flatten_states(q: &QueueLts) -> (Lts, Vec<QueueState>) {
    let mut states = vec![q.initial()];
    let mut ids: HashMap<QueueState, StateId> = HashMap::from([(q.initial(), 0)]);
    let mut builder = LtsBuilder::new();
    builder.add_state(q.state_name(&states[0]));
    builder.extend_alphabet(q.alphabet.iter().cloned());

    let mut next = 0;
    while next < states.len() {
        let source = next;
        next += 1;
        for (action, target) in q.successors(&states[source]) {
            let id = match ids.get(&target) {
                Some(&id) => id,
                None => {
                    let id = states.len();
                    builder.add_state(q.state_name(&target));
                    ids.insert(target.clone(), id);
                    states.push(target);
                    id
                }
            };
            builder.add_transition(source, action, id);
        }
    }
    let lts = builder
        .build(0)
        .expect("flattening only emits in-range transitions");
    (lts, states)
}

/// Product of the flattened components with the composite state behind every side.
#[derive(Debug, Clone)]
pub struct AsyncComposition {
    pub product: Lts,
    pub map: ProductStateMap,
    pub left: Lts,
    pub right: Lts,
    pub left_states: Vec<QueueState>,
    pub right_states: Vec<QueueState>,
}

impl AsyncComposition {
    /// Queue lengths of both components in product state `p`.
    pub fn queue_lengths(&self, p: StateId) -> (usize, usize) {
        let (x, y) = self.map.pair(p);
        (
            self.left_states[x].queue.len(),
            self.right_states[y].queue.len(),
        )
    }

    pub fn max_queue_len(&self) -> usize {
        (0..self.product.num_states())
            .map(|p| {
                let (a, b) = self.queue_lengths(p);
                a.max(b)
            })
            .max()
            .unwrap_or(0)
    }
}

/// Flattens both components and composes them without checking queue occupancy.
pub fn compose_async_unchecked(d: &AsyncDecomposition) -> AsyncComposition {
    let (left, left_states) = flatten_states(&d.m1);
    let (right, right_states) = flatten_states(&d.m2);
    let (product, map) = sync_product(&left, &right);
    AsyncComposition {
        product,
        map,
        left,
        right,
        left_states,
        right_states,
    }
}

/// Flattens and composes, failing if any reachable product state queues more than one
/// message.
pub fn compose_async(d: &AsyncDecomposition) -> Result<(Lts, ProductStateMap)> {
    let c = compose_async_unchecked(d);
    for p in 0..c.product.num_states() {
        let (a, b) = c.queue_lengths(p);
        if a.max(b) > 1 {
            return Err(Error::QueueBound {
                state: c.product.state_name(p),
                length: a.max(b),
            });
        }
    }
    Ok((c.product, c.map))
}
