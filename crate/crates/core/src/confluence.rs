//! Confluence over two action sets, and the worked instance showing that no
//! decomposition of this kind can preserve divergence.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::action::Action;
use crate::decomp::{compose_async, compose_sync, decomp_a_with_capacity, decomp_s};
use crate::equiv::{branching_bisim, dpbb};
use crate::error::{Error, Result};
use crate::lts::{divergent_states, Lts, StateId, Transition};
use crate::partition::AlphabetPartition;

/// A square that does not close: `state -a-> state_a` and `state -b-> state_b`
/// without a common `s_c` such that `state_b -a-> s_c` and `state_a -b-> s_c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfluenceViolation {
    pub state: StateId,
    pub a: Action,
    pub b: Action,
    pub state_a: StateId,
    pub state_b: StateId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfluenceReport {
    pub verdict: bool,
    pub violations: Vec<ConfluenceViolation>,
}

/// Checks every `a`-step against every `b`-step leaving the same state, for `a` in
/// `a1` and `b` in `a2`. Nondeterministic branches are all examined.
pub fn is_confluent(
    l: &Lts,
    a1: &BTreeSet<Action>,
    a2: &BTreeSet<Action>,
) -> Result<ConfluenceReport> {
    if let Some(shared) = a1.intersection(a2).next() {
        return Err(Error::invalid(format!(
            "action sets overlap on {shared}"
        )));
    }
    let steps = |s: StateId, a: &Action| -> BTreeSet<StateId> {
        l.outgoing(s)
            .iter()
            .filter(|t| &t.action == a)
            .map(|t| t.target)
            .collect()
    };
    let mut violations = Vec::new();
    for s in 0..l.num_states() {
        let out = l.outgoing(s);
        for ta in out.iter().filter(|t| a1.contains(&t.action)) {
            for tb in out.iter().filter(|t| a2.contains(&t.action)) {
                let after_b = steps(tb.target, &ta.action);
                let after_a = steps(ta.target, &tb.action);
                if after_b.is_disjoint(&after_a) {
                    violations.push(ConfluenceViolation {
                        state: s,
                        a: ta.action.clone(),
                        b: tb.action.clone(),
                        state_a: ta.target,
                        state_b: tb.target,
                    });
                }
            }
        }
    }
    Ok(ConfluenceReport {
        verdict: violations.is_empty(),
        violations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SourceFacts {
    pub states: usize,
    pub transitions: usize,
    pub divergent_states: usize,
    pub confluence: ConfluenceReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineFacts {
    pub pipeline: String,
    pub states: usize,
    pub transitions: usize,
    pub branching_bisimilar: bool,
    pub divergence_preserving: bool,
    pub divergent_states: usize,
    pub confluence: ConfluenceReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct DemoReport {
    pub source: SourceFacts,
    pub pipelines: Vec<PipelineFacts>,
}

impl DemoReport {
    /// True when every pipeline shows the expected split between the two equivalences.
    pub fn holds(&self) -> bool {
        self.source.divergent_states == 0
            && !self.source.confluence.verdict
            && self.pipelines.iter().all(|p| {
                p.branching_bisimilar && !p.divergence_preserving && p.divergent_states > 0
            })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serialisable")
    }
}

impl fmt::Display for DemoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.source;
        writeln!(f, "source P: p -a-> r, p -b-> s")?;
        writeln!(
            f,
            "  {} states, {} transitions, {} divergent",
            s.states, s.transitions, s.divergent_states
        )?;
        writeln!(f, "  confluent over {{a}},{{b}}: {}", s.confluence.verdict)?;
        let p = demo_source();
        for v in &s.confluence.violations {
            writeln!(
                f,
                "  {0} -{1}-> {2} and {0} -{3}-> {4} have no common successor",
                p.state_name(v.state),
                v.a,
                p.state_name(v.state_a),
                v.b,
                p.state_name(v.state_b)
            )?;
        }
        for p in &self.pipelines {
            writeln!(f, "{}:", p.pipeline)?;
            writeln!(
                f,
                "  product {} states, {} transitions, {} divergent",
                p.states, p.transitions, p.divergent_states
            )?;
            writeln!(
                f,
                "  branching bisimilar: {}  divergence-preserving: {}  confluent: {}",
                p.branching_bisimilar, p.divergence_preserving, p.confluence.verdict
            )?;
        }
        write!(
            f,
            "conclusion: {}",
            if self.holds() {
                "divergence is introduced by every pipeline"
            } else {
                "unexpected outcome"
            }
        )
    }
}

/// The three-state system `p -a-> r, p -b-> s`.
pub fn demo_source() -> Lts {
    let a = Action::visible("a").expect("valid label");
    let b = Action::visible("b").expect("valid label");
    Lts::from_transitions(3, 0, vec![Transition::new(0, a, 1), Transition::new(0, b, 2)])
        .and_then(|l| l.with_names(vec!["p".into(), "r".into(), "s".into()]))
        .expect("fixed instance is valid")
}

/// Decomposes the demo source with both operators (the queued one at capacities
/// 1 to 3) and records what the products look like.
pub fn dpbb_impossibility_demo() -> DemoReport {
    let p = demo_source();
    let partition = AlphabetPartition::from_labels(&["a"], &["b"]).expect("disjoint halves");
    let a: BTreeSet<Action> = partition.sigma1().clone();
    let b: BTreeSet<Action> = partition.sigma2().clone();
    let source = SourceFacts {
        states: p.num_states(),
        transitions: p.num_transitions(),
        divergent_states: divergent_states(&p).len(),
        confluence: is_confluent(&p, &a, &b).expect("disjoint sets"),
    };

    let mut products = Vec::new();
    let d = decomp_s(&p, &partition).expect("covering partition");
    products.push(("sync".to_string(), compose_sync(&d).expect("well-formed").0));
    for capacity in 1..=3 {
        let d = decomp_a_with_capacity(&p, &partition, capacity).expect("covering partition");
        let (x, _) = compose_async(&d).expect("queue bound holds for this source");
        products.push((format!("async capacity {capacity}"), x));
    }
    let pipelines = products
        .into_iter()
        .map(|(pipeline, x)| PipelineFacts {
            pipeline,
            states: x.num_states(),
            transitions: x.num_transitions(),
            branching_bisimilar: branching_bisim(&p, &x).verdict,
            divergence_preserving: dpbb(&p, &x).verdict,
            divergent_states: divergent_states(&x).len(),
            confluence: is_confluent(&x, &a, &b).expect("disjoint sets"),
        })
        .collect();
    DemoReport { source, pipelines }
}
