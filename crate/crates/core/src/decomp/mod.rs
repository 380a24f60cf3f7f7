//! Alphabet-partition decompositions.
//!
//! Both operators give every source state `s` a pair of control states `s_u` and `s_d`
//! shared by the two components; whichever component's tag the current control state
//! carries holds the control token. A visible move `s -a-> s'` with `a` owned by
//! component `i` becomes `s_i -a-> t_{a,s'_i} -t_{s'_i}-> s'_i` in that component,
//! while the peer receives `!t_{s'_i}` and follows to `s'_i`. Handing the token over
//! is a `c_{s_i,s_j}` / `!c_{s_i,s_j}` pair.
//!
//! The synchronous operator turns receives into direct moves ([`sync`]); the
//! asynchronous one routes them through a bounded FIFO queue ([`queued`]).

pub mod queued;
pub mod sync;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::action::Action;
use crate::error::{Error, Result};
use crate::lts::{Lts, StateId};
use crate::partition::{AlphabetPartition, Component};

pub use queued::{
    compose_async, compose_async_unchecked, decomp_a, decomp_a_with_capacity, flatten,
    flatten_states, AsyncComposition, AsyncDecomposition, Message, QueueLts, QueueState,
    DEFAULT_CAPACITY,
};
pub use sync::{check_sync_shape, compose_sync, decomp_s, SyncDecomposition};

/// What a component state stands for in terms of the source system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolicState {
    /// `s_u` or `s_d`: source state `source` with the token at `tag`.
    Control { source: StateId, tag: Component },
    /// `t_{a,s'_i}`: half-way through a visible move to `target`.
    Transit {
        action: Action,
        target: StateId,
        tag: Component,
    },
}

impl SymbolicState {
    pub fn control(&self) -> Option<(StateId, Component)> {
        match *self {
            SymbolicState::Control { source, tag } => Some((source, tag)),
            SymbolicState::Transit { .. } => None,
        }
    }
}

/// Record written to naming side files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedState {
    pub id: StateId,
    pub name: String,
}

/// Renders synthesized names and labels from the source's state names.
pub(crate) struct Namer {
    names: Vec<String>,
}

impl Namer {
    pub(crate) fn new(source: &Lts) -> Self {
        Namer {
            names: (0..source.num_states()).map(|s| source.state_name(s)).collect(),
        }
    }

    pub(crate) fn control(&self, s: StateId, tag: Component) -> String {
        format!("{}_{}", self.names[s], tag)
    }

    pub(crate) fn state(&self, sym: &SymbolicState) -> String {
        match sym {
            SymbolicState::Control { source, tag } => self.control(*source, *tag),
            SymbolicState::Transit {
                action,
                target,
                tag,
            } => format!("t_{{{},{}}}", action, self.control(*target, *tag)),
        }
    }

    /// `c_{s_i,s_j}`: component `from` hands the token over at `s`.
    pub(crate) fn c_label(&self, s: StateId, from: Component) -> String {
        format!(
            "c_{{{},{}}}",
            self.control(s, from),
            self.control(s, from.other())
        )
    }

    /// `t_{s_i}`: notification that control state `s_i` has been reached.
    pub(crate) fn t_label(&self, s: StateId, tag: Component) -> String {
        format!("t_{{{}}}", self.control(s, tag))
    }
}

/// Component-local view shared by both operators.
///
/// `local` holds moves a component makes on its own initiative; `receives` holds
/// `(at, co-label, goes_to)` where the peer's send lets this component follow to
/// control state `goes_to`.
#[derive(Debug, Clone)]
pub(crate) struct Skeleton {
    pub states: Vec<SymbolicState>,
    pub local: Vec<(StateId, Action, StateId)>,
    pub receives: Vec<(StateId, Action, StateId)>,
}

/// Control state ids are shared: `s_u = 2s`, `s_d = 2s + 1`. Transit states follow.
pub(crate) fn control_id(s: StateId, tag: Component) -> StateId {
    2 * s + tag.index()
}

pub(crate) fn check_source(m: &Lts, p: &AlphabetPartition) -> Result<()> {
    if m.has_tau() {
        return Err(Error::invalid(
            "cannot decompose a system with internal transitions",
        ));
    }
    p.check_covers(m)
}

/// Builds both component skeletons and checks the synthesized labels.
pub(crate) fn skeletons(m: &Lts, p: &AlphabetPartition) -> Result<[Skeleton; 2]> {
    check_source(m, p)?;
    let namer = Namer::new(m);
    let n = m.num_states();

    let mut synthesized = BTreeSet::new();
    let mut label = |text: String| -> Result<Action> {
        let action = Action::visible(&text)?;
        if m.alphabet().contains(&action) || m.alphabet().contains(&action.co()?) {
            return Err(Error::invalid(format!(
                "synthesized label {text} collides with a source label"
            )));
        }
        synthesized.insert(action.clone());
        Ok(action)
    };

    let mut comps = Component::BOTH.map(|_| Skeleton {
        states: (0..n)
            .flat_map(|s| {
                Component::BOTH.map(|tag| SymbolicState::Control { source: s, tag })
            })
            .collect(),
        local: Vec::new(),
        receives: Vec::new(),
    });

    let mut c_labels = 0;
    for s in 0..n {
        for from in Component::BOTH {
            let c = label(namer.c_label(s, from))?;
            c_labels += 1;
            let (at, to) = (control_id(s, from), control_id(s, from.other()));
            comps[from.index()].local.push((at, c.clone(), to));
            comps[from.other().index()]
                .receives
                .push((at, c.co()?, to));
        }
    }

    let mut t_labels = BTreeSet::new();
    let mut transit_ids: [HashMap<SymbolicState, StateId>; 2] = Default::default();
    for tr in m.transitions() {
        let owner = p
            .owner(&tr.action)
            .expect("coverage checked before building skeletons");
        let t = label(namer.t_label(tr.target, owner))?;
        t_labels.insert((tr.target, owner));
        let from = control_id(tr.source, owner);
        let to = control_id(tr.target, owner);

        let comp = &mut comps[owner.index()];
        let transit = SymbolicState::Transit {
            action: tr.action.clone(),
            target: tr.target,
            tag: owner,
        };
        let mid = *transit_ids[owner.index()]
            .entry(transit.clone())
            .or_insert_with(|| {
                comp.states.push(transit);
                comp.states.len() - 1
            });
        comp.local.push((from, tr.action.clone(), mid));
        comp.local.push((mid, t.clone(), to));
        comps[owner.other().index()]
            .receives
            .push((from, t.co()?, to));
    }

    if synthesized.len() != c_labels + t_labels.len() {
        return Err(Error::invalid(
            "state names are ambiguous: synthesized labels are not distinct",
        ));
    }
    for comp in &mut comps {
        comp.local.sort();
        comp.local.dedup();
        comp.receives.sort();
        comp.receives.dedup();
    }
    Ok(comps)
}

/// Checks the general decomposition contract: each component's alphabet contains its
/// half of the partition and nothing from the other half.
pub fn check_alphabet_contract(
    m1: &BTreeSet<Action>,
    m2: &BTreeSet<Action>,
    p: &AlphabetPartition,
) -> Result<()> {
    for (c, alphabet) in [(Component::First, m1), (Component::Second, m2)] {
        if !p.half(c).is_subset(alphabet) {
            return Err(Error::Shape(format!(
                "component {c} does not contain its own partition half"
            )));
        }
        if alphabet.iter().any(|a| p.half(c.other()).contains(a)) {
            return Err(Error::Shape(format!(
                "component {c} uses a label of the other partition half"
            )));
        }
    }
    Ok(())
}

impl fmt::Display for SymbolicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicState::Control { source, tag } => write!(f, "{source}_{tag}"),
            SymbolicState::Transit {
                action,
                target,
                tag,
            } => write!(f, "t_{{{action},{target}_{tag}}}"),
        }
    }
}
