//! Synchronously communicating decomposition.

use crate::action::Action;
use crate::error::{Error, Result};
use crate::lts::{Lts, LtsBuilder, StateId};
use crate::partition::{AlphabetPartition, Component};
use crate::product::{sync_product, ProductStateMap};

use super::{check_alphabet_contract, control_id, skeletons, Namer, NamedState, SymbolicState};

#[derive(Debug, Clone)]
pub struct SyncDecomposition {
    pub m1: Lts,
    pub m2: Lts,
    /// Symbolic origin of every state of `m1` and `m2`, indexed by state id.
    pub naming: [Vec<SymbolicState>; 2],
    pub partition: AlphabetPartition,
}

impl SyncDecomposition {
    pub fn component(&self, c: Component) -> &Lts {
        match c {
            Component::First => &self.m1,
            Component::Second => &self.m2,
        }
    }

    pub fn symbolic(&self, c: Component, s: StateId) -> &SymbolicState {
        &self.naming[c.index()][s]
    }

    /// One record per state, for naming side files.
    pub fn named_states(&self, c: Component) -> Vec<NamedState> {
        let l = self.component(c);
        (0..l.num_states())
            .map(|id| NamedState {
                id,
                name: l.state_name(id),
            })
            .collect()
    }
}

/// Splits `m` over `p` into two components that pass a control token with c-actions
/// and mirror each visible move with a t-action.
pub fn decomp_s(m: &Lts, p: &AlphabetPartition) -> Result<SyncDecomposition> {
    let namer = Namer::new(m);
    let [first, second] = skeletons(m, p)?;
    let initial = control_id(m.initial(), Component::First);

    let mut built = Vec::with_capacity(2);
    for (c, skel) in [(Component::First, &first), (Component::Second, &second)] {
        let mut b = LtsBuilder::new();
        for st in &skel.states {
            b.add_state(namer.state(st));
        }
        b.extend_alphabet(p.half(c).iter().cloned());
        for (s, a, t) in skel.local.iter().chain(&skel.receives) {
            b.add_transition(*s, a.clone(), *t);
        }
        built.push(b.build(initial)?);
    }
    let m2 = built.pop().expect("two components");
    let m1 = built.pop().expect("two components");
    check_alphabet_contract(m1.alphabet(), m2.alphabet(), p)?;
    Ok(SyncDecomposition {
        m1,
        m2,
        naming: [first.states, second.states],
        partition: p.clone(),
    })
}

/// The synchronous product of both components, checked against the expected shape.
pub fn compose_sync(d: &SyncDecomposition) -> Result<(Lts, ProductStateMap)> {
    let (product, map) = sync_product(&d.m1, &d.m2);
    check_sync_shape(d, &product, &map)?;
    Ok((product, map))
}

enum Shape {
    /// `(s_i, s_i)`: both components agree on the source state and the token holder.
    Settled(StateId, Component),
    /// `(t_{a,s'_u}, s_u)` or `(s_d, t_{a,s'_d})`: the owner is mid-move to `s'`.
    Moving {
        action: Action,
        from: StateId,
        to: StateId,
        tag: Component,
    },
}

fn classify(d: &SyncDecomposition, (x, y): (StateId, StateId)) -> Option<Shape> {
    use SymbolicState::{Control, Transit};
    let moving = |action: &Action, from: StateId, to: StateId, tag| Shape::Moving {
        action: action.clone(),
        from,
        to,
        tag,
    };
    match (d.symbolic(Component::First, x), d.symbolic(Component::Second, y)) {
        (Control { source: s1, tag: t1 }, Control { source: s2, tag: t2 })
            if s1 == s2 && t1 == t2 =>
        {
            Some(Shape::Settled(*s1, *t1))
        }
        (
            Transit { action, target, tag: Component::First },
            Control { source, tag: Component::First },
        ) => Some(moving(action, *source, *target, Component::First)),
        (
            Control { source, tag: Component::Second },
            Transit { action, target, tag: Component::Second },
        ) => Some(moving(action, *source, *target, Component::Second)),
        _ => None,
    }
}

/// Verifies that every reachable product state is either settled, `(s_i, s_i)`, or
/// mid-move; that each settled state can pass the token with a single `tau` to
/// `(s_j, s_j)`; and that each visible step reaches a mid-move state whose only
/// transition is one `tau` to `(s'_i, s'_i)`.
pub fn check_sync_shape(d: &SyncDecomposition, product: &Lts, map: &ProductStateMap) -> Result<()> {
    let fail = |s: StateId, what: &str| {
        Err(Error::Shape(format!(
            "product state {} {what}",
            product.state_name(s)
        )))
    };
    let settled = |s: StateId, i: Component| {
        map.state_of(control_id(s, i), control_id(s, i))
    };

    for p in 0..product.num_states() {
        let Some(shape) = classify(d, map.pair(p)) else {
            return fail(p, "is neither settled nor mid-move");
        };
        let out = product.outgoing(p);
        match shape {
            Shape::Settled(s, i) => {
                let handover = settled(s, i.other());
                let mut handed_over = false;
                for tr in out {
                    if tr.action.is_tau() {
                        if Some(tr.target) != handover {
                            return fail(p, "has an internal step other than the token handover");
                        }
                        handed_over = true;
                        continue;
                    }
                    match classify(d, map.pair(tr.target)) {
                        Some(Shape::Moving {
                            action, from, tag, ..
                        }) if action == tr.action && from == s && tag == i => {}
                        _ => return fail(p, "has a visible step that does not start a move"),
                    }
                }
                if !handed_over {
                    return fail(p, "cannot pass the control token");
                }
            }
            Shape::Moving { to, tag, .. } => {
                let expected = settled(to, tag);
                if out.len() != 1 || !out[0].action.is_tau() || Some(out[0].target) != expected {
                    return fail(p, "does not complete its move with exactly one internal step");
                }
            }
        }
    }
    Ok(())
}
