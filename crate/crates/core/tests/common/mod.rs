//! Test-only oracles. Nothing here calls the library's decomposition or product code.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use ltsd_core::generate::{random_lts_over, rng};
use ltsd_core::{Action, AlphabetPartition, Lts, Transition};
use rand::Rng;

pub const TWO_STATE: &str = "des (0,3,2)\n(0,\"a1\",1)\n(1,\"a2\",0)\n(1,\"b1\",0)\n";

pub fn two_state() -> (Lts, AlphabetPartition) {
    let m = ltsd_core::parse_aut(TWO_STATE)
        .unwrap()
        .with_names(vec!["r".into(), "s".into()])
        .unwrap();
    let p = AlphabetPartition::from_labels(&["a1", "a2"], &["b1"]).unwrap();
    (m, p)
}

/// Side 0 is the first component, side 1 the second.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Local {
    Control(usize, u8),
    Transit(Action, usize, u8),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Label {
    Plain(Action),
    /// Control handover at a state, from a side.
    C(usize, u8),
    /// Mirror of a move to the state, owned by a side.
    T(usize, u8),
}

/// (label, is_co) or None for an internal step.
type Step = Option<(Label, bool)>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Comp {
    at: Local,
    queue: VecDeque<(usize, u8)>,
}

pub struct ProductCount {
    pub states: usize,
    pub transitions: usize,
    pub visible: usize,
    pub max_queue: usize,
}

/// Explores the composed system straight from the decomposition rules.
/// `capacity = None` is the synchronous operator.
pub fn literal_product(m: &Lts, p: &AlphabetPartition, capacity: Option<usize>) -> ProductCount {
    let owner = |a: &Action| -> u8 { if p.sigma1().contains(a) { 0 } else { 1 } };
    let moves = |k: u8, c: &Comp| -> Vec<(Step, Comp)> {
        let o = 1 - k;
        let mut out = Vec::new();
        let room = capacity.is_none_or(|cap| c.queue.len() < cap);
        let receive = |target: (usize, u8)| -> Comp {
            let mut q = c.queue.clone();
            match capacity {
                None => Comp { at: Local::Control(target.0, target.1), queue: q },
                Some(_) => {
                    q.push_back(target);
                    Comp { at: c.at.clone(), queue: q }
                }
            }
        };
        match &c.at {
            Local::Control(s, side) => {
                let s = *s;
                if *side == k {
                    out.push((
                        Some((Label::C(s, k), false)),
                        Comp { at: Local::Control(s, o), queue: c.queue.clone() },
                    ));
                    for t in m.transitions().iter().filter(|t| t.source == s && owner(&t.action) == k) {
                        out.push((
                            Some((Label::Plain(t.action.clone()), false)),
                            Comp { at: Local::Transit(t.action.clone(), t.target, k), queue: c.queue.clone() },
                        ));
                    }
                } else if room {
                    out.push((Some((Label::C(s, o), true)), receive((s, k))));
                    for t in m.transitions().iter().filter(|t| t.source == s && owner(&t.action) == o) {
                        out.push((Some((Label::T(t.target, o), true)), receive((t.target, o))));
                    }
                }
            }
            Local::Transit(_, target, side) => {
                out.push((
                    Some((Label::T(*target, *side), false)),
                    Comp { at: Local::Control(*target, *side), queue: c.queue.clone() },
                ));
            }
        }
        if let Some(&(s, side)) = c.queue.front() {
            let mut q = c.queue.clone();
            q.pop_front();
            out.push((None, Comp { at: Local::Control(s, side), queue: q }));
        }
        out
    };

    let init = Comp { at: Local::Control(m.initial(), 0), queue: VecDeque::new() };
    let mut ids: HashMap<(Comp, Comp), usize> = HashMap::new();
    let mut todo = VecDeque::new();
    ids.insert((init.clone(), init.clone()), 0);
    todo.push_back((init.clone(), init));
    let mut edges: BTreeSet<(usize, Option<Action>, usize)> = BTreeSet::new();
    let mut max_queue = 0;
    while let Some((l, r)) = todo.pop_front() {
        max_queue = max_queue.max(l.queue.len()).max(r.queue.len());
        let src = ids[&(l.clone(), r.clone())];
        let lm = moves(0, &l);
        let rm = moves(1, &r);
        let mut next: Vec<(Option<Action>, Comp, Comp)> = Vec::new();
        for (step, l2) in &lm {
            match step {
                None => next.push((None, l2.clone(), r.clone())),
                Some((Label::Plain(a), _)) => next.push((Some(a.clone()), l2.clone(), r.clone())),
                Some((lab, co)) => {
                    for (rstep, r2) in &rm {
                        if let Some((rlab, rco)) = rstep {
                            if rlab == lab && rco != co {
                                next.push((None, l2.clone(), r2.clone()));
                            }
                        }
                    }
                }
            }
        }
        for (step, r2) in &rm {
            match step {
                None => next.push((None, l.clone(), r2.clone())),
                Some((Label::Plain(a), _)) => next.push((Some(a.clone()), l.clone(), r2.clone())),
                Some(_) => {}
            }
        }
        for (a, l2, r2) in next {
            let fresh = ids.len();
            let dst = *ids.entry((l2.clone(), r2.clone())).or_insert_with(|| {
                todo.push_back((l2, r2));
                fresh
            });
            edges.insert((src, a, dst));
        }
    }
    ProductCount {
        states: ids.len(),
        transitions: edges.len(),
        visible: edges.iter().filter(|e| e.1.is_some()).count(),
        max_queue,
    }
}

/// s -a-> s', s' -a'-> s'' and s -b-> s'' with a, a', b owned by the same half.
/// Exactly the sources on which a queued component can receive a second message.
pub fn has_same_half_shortcut(m: &Lts, p: &AlphabetPartition) -> bool {
    let ts = m.transitions();
    let same = |x: &Transition, y: &Transition| p.owner(&x.action) == p.owner(&y.action);
    ts.iter().any(|t1| {
        ts.iter().any(|t2| {
            t2.source == t1.target
                && same(t1, t2)
                && ts.iter().any(|t3| t3.source == t1.source && t3.target == t2.target && same(t1, t3))
        })
    })
}

/// A pair for comparing equivalence checkers. Labels come from {a, b, tau}, so
/// coincidental equivalences are common; a third of the pairs are an unfolding of
/// the first system, optionally perturbed.
pub fn random_pair(seed: u64, max_states: usize) -> (Lts, Lts) {
    let mut rng = rng(seed);
    let pool = [Action::Tau, Action::visible("a").unwrap(), Action::visible("b").unwrap()];
    let system = |rng: &mut rand_chacha::ChaCha8Rng, n: usize| {
        let density = rng.gen_range(0.5..=2.0f64);
        random_lts_over(rng, n, &pool, density).unwrap()
    };
    let n1 = rng.gen_range(1..=max_states / 2);
    let left = system(&mut rng, n1);
    let right = match rng.gen_range(0..3) {
        0 => {
            let n2 = rng.gen_range(1..=max_states / 2);
            system(&mut rng, n2)
        }
        kind => {
            let mut copy = unfold(&mut rng, &left, max_states);
            if kind == 2 {
                copy = perturb(&mut rng, &copy, &pool);
            }
            copy
        }
    };
    (left, right)
}

/// Duplicates random states and redirects some incoming edges to the copies.
/// The result is strongly bisimilar to the input.
fn unfold(rng: &mut impl Rng, l: &Lts, max_states: usize) -> Lts {
    let n = l.num_states();
    let extra = rng.gen_range(0..=(max_states - n).min(n));
    let originals: Vec<usize> = (0..extra).map(|_| rng.gen_range(0..n)).collect();
    let copy_of = |s: usize| if s < n { s } else { originals[s - n] };
    let mut ts = Vec::new();
    for s in 0..n + extra {
        for t in l.outgoing(copy_of(s)) {
            let copies: Vec<usize> = (n..n + extra).filter(|&c| copy_of(c) == t.target).collect();
            let target = if !copies.is_empty() && rng.gen_bool(0.5) {
                copies[rng.gen_range(0..copies.len())]
            } else {
                t.target
            };
            ts.push(Transition::new(s, t.action.clone(), target));
        }
    }
    Lts::new(n + extra, l.initial(), l.alphabet().iter().cloned(), ts).unwrap()
}

/// Adds or removes one transition, or adds an internal self-loop.
fn perturb(rng: &mut impl Rng, l: &Lts, pool: &[Action]) -> Lts {
    let n = l.num_states();
    let mut ts: Vec<Transition> = l.transitions().to_vec();
    match rng.gen_range(0..3) {
        0 if !ts.is_empty() => {
            ts.remove(rng.gen_range(0..ts.len()));
        }
        1 => {
            let s = rng.gen_range(0..n);
            ts.push(Transition::new(s, Action::Tau, s));
        }
        _ => {
            let a = pool[rng.gen_range(0..pool.len())].clone();
            ts.push(Transition::new(rng.gen_range(0..n), a, rng.gen_range(0..n)));
        }
    }
    Lts::new(n, l.initial(), l.alphabet().iter().cloned(), ts).unwrap()
}

/// States with an internal path of length `bound` (enough to revisit a state).
pub fn divergent_by_unrolling(l: &Lts) -> BTreeSet<usize> {
    let n = l.num_states();
    let mut can: Vec<bool> = vec![true; n];
    for _ in 0..=n {
        can = (0..n)
            .map(|s| l.outgoing(s).iter().any(|t| t.action.is_tau() && can[t.target]))
            .collect();
    }
    (0..n).filter(|&s| can[s]).collect()
}
