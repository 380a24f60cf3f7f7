//! Acceptance criteria, one line each. Exits non-zero when any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{two_state, literal_product, random_pair};
use ltsd_core::confluence::ConfluenceViolation;
use ltsd_core::decomp::{compose_async_unchecked, decomp_a_with_capacity};
use ltsd_core::equiv::{validate_blocks, Side, StateRef};
use ltsd_core::generate::{random_factor_pair, random_instance};
use ltsd_core::{
    branching_bisim, brute_force_bb, compose_async, compose_sync, decomp_a, decomp_s,
    dpbb, dpbb_impossibility_demo, is_confluent, sync_product, Action, Lts,
};

const SEEDS: u64 = 1000;

/// A source, a composed product and the partition that relates them.
type Witness = (Lts, Lts, Vec<Vec<StateRef>>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn names(l: &Lts, x: &Lts, blocks: &[Vec<StateRef>]) -> BTreeSet<BTreeSet<String>> {
    blocks
        .iter()
        .map(|b| {
            b.iter()
                .map(|r| match r.side {
                    Side::Left => l.state_name(r.state),
                    Side::Right => x.state_name(r.state),
                })
                .collect()
        })
        .collect()
}

fn golden_sync(witnesses: &mut Vec<Witness>) -> Outcome {
    let (m, p) = two_state();
    let (x, _) = compose_sync(&decomp_s(&m, &p).unwrap()).unwrap();
    let visible: BTreeSet<String> = x
        .transitions()
        .iter()
        .filter(|t| !t.action.is_tau())
        .map(|t| t.action.to_text())
        .collect();
    let internal = x.transitions().iter().filter(|t| t.action.is_tau()).count();
    let r = branching_bisim(&m, &x);
    let expected: BTreeSet<BTreeSet<String>> = [
        vec!["r", "(r_u,r_u)", "(r_d,r_d)", "(t_{a2,r_u},s_u)", "(s_d,t_{b1,r_d})"],
        vec!["s", "(t_{a1,s_u},r_u)", "(s_u,s_u)", "(s_d,s_d)"],
    ]
    .into_iter()
    .map(|b| b.into_iter().map(String::from).collect())
    .collect();
    let blocks_ok = r
        .blocks
        .as_ref()
        .is_some_and(|b| names(&m, &x, b) == expected);
    let oracle = literal_product(&m, &p, None);
    let counts = (x.num_states(), x.num_transitions(), internal);
    let pass = counts == (7, 10, 7)
        && (oracle.states, oracle.transitions) == (7, 10)
        && visible == BTreeSet::from(["a1".into(), "a2".into(), "b1".into()])
        && r.verdict
        && blocks_ok;
    if let Some(b) = r.blocks {
        witnesses.push((m, x, b));
    }
    outcome(
        pass,
        format!(
            "{} states, {} transitions ({} internal), visible {:?}, equivalent {}, classes match {}",
            counts.0, counts.1, counts.2, visible, r.verdict, blocks_ok
        ),
    )
}

fn golden_async(witnesses: &mut Vec<Witness>) -> Outcome {
    let (m, p) = two_state();
    let d = decomp_a(&m, &p).unwrap();
    let bounded = compose_async(&d);
    let c = compose_async_unchecked(&d);
    let x = c.product.clone();
    let oracle = literal_product(&m, &p, Some(1));
    let visible = x.transitions().iter().filter(|t| !t.action.is_tau()).count();
    let r = branching_bisim(&m, &x);
    let classes = r.blocks.as_ref().map_or(0, Vec::len);
    let counts = (x.num_states(), x.num_transitions(), visible);
    let pass = bounded.is_ok()
        && c.max_queue_len() <= 1
        && counts == (oracle.states, oracle.transitions, oracle.visible)
        && counts == (16, 21, 5)
        && r.verdict
        && classes == 2;
    if let Some(b) = r.blocks {
        witnesses.push((m, x, b));
    }
    outcome(
        pass,
        format!(
            "{} states, {} transitions ({} visible), rule-level enumeration {}/{}, max queue {}, equivalent {} with {} classes",
            counts.0, counts.1, counts.2, oracle.states, oracle.transitions, c.max_queue_len(), r.verdict, classes
        ),
    )
}

fn sync_suite(witnesses: &mut Vec<Witness>) -> Outcome {
    let mut ok = 0;
    for seed in 0..SEEDS {
        let (m, p) = random_instance(seed, 10, 4);
        let (x, _) = compose_sync(&decomp_s(&m, &p).unwrap()).unwrap();
        let r = branching_bisim(&m, &x);
        if let Some(b) = r.blocks {
            ok += 1;
            witnesses.push((m, x, b));
        }
    }
    outcome(ok == SEEDS, format!("{ok}/{SEEDS} equivalent"))
}

fn async_suite(witnesses: &mut Vec<Witness>) -> Outcome {
    let mut ok = 0;
    let mut bounded = 0;
    let mut worst = 0;
    for seed in 0..SEEDS {
        let (m, p) = random_instance(seed, 10, 4);
        if let Ok((x, _)) = compose_async(&decomp_a(&m, &p).unwrap()) {
            let r = branching_bisim(&m, &x);
            if let Some(b) = r.blocks {
                ok += 1;
                witnesses.push((m.clone(), x, b));
            }
        }
        let q = compose_async_unchecked(&decomp_a_with_capacity(&m, &p, 3).unwrap()).max_queue_len();
        worst = worst.max(q);
        if q <= 1 {
            bounded += 1;
        }
    }
    outcome(
        ok == SEEDS && bounded == SEEDS,
        format!(
            "{ok}/{SEEDS} equivalent at capacity 1; queue length <= 1 at capacity 3 on {bounded}/{SEEDS} (longest {worst})"
        ),
    )
}

fn factor_confluence() -> Outcome {
    let total = 500;
    let mut ok = 0;
    for seed in 0..total {
        let (l, r) = random_factor_pair(seed, seed % 2 == 0);
        let (x, _) = sync_product(&l, &r);
        let not_co_in = |own: &BTreeSet<Action>, other: &BTreeSet<Action>| -> BTreeSet<Action> {
            own.iter()
                .filter(|a| a.try_co().is_none_or(|co| !other.contains(&co)))
                .cloned()
                .collect()
        };
        let a1 = not_co_in(l.alphabet(), r.alphabet());
        let a2 = not_co_in(r.alphabet(), l.alphabet());
        if is_confluent(&x, &a1, &a2).unwrap().verdict {
            ok += 1;
        }
    }
    outcome(ok == total, format!("{ok}/{total} products confluent"))
}

fn impossibility_demo() -> Outcome {
    let report = dpbb_impossibility_demo();
    let expected = ConfluenceViolation {
        state: 0,
        a: Action::visible("a").unwrap(),
        b: Action::visible("b").unwrap(),
        state_a: 1,
        state_b: 2,
    };
    let source_ok = report.source.divergent_states == 0
        && !report.source.confluence.verdict
        && report.source.confluence.violations == vec![expected];
    let kinds: BTreeSet<&str> = report
        .pipelines
        .iter()
        .map(|p| p.pipeline.split(' ').next().unwrap())
        .collect();
    let pipelines_ok = kinds == BTreeSet::from(["sync", "async"])
        && report.pipelines.iter().all(|p| {
            p.branching_bisimilar && !p.divergence_preserving && p.divergent_states > 0
        });
    let summary: Vec<String> = report
        .pipelines
        .iter()
        .map(|p| {
            format!(
                "{}: bb {} dpbb {} divergent {}",
                p.pipeline, p.branching_bisimilar, p.divergence_preserving, p.divergent_states
            )
        })
        .collect();
    outcome(
        source_ok && pipelines_ok,
        format!(
            "P divergent {}, P confluent {}; {}",
            report.source.divergent_states,
            report.source.confluence.verdict,
            summary.join("; ")
        ),
    )
}

fn oracle_agreement() -> Outcome {
    let mut agree = 0;
    let mut equivalent = 0;
    for seed in 0..SEEDS {
        let (l, r) = random_pair(seed, 12);
        for div in [false, true] {
            let fast = if div { dpbb(&l, &r) } else { branching_bisim(&l, &r) };
            let slow = brute_force_bb(&l, &r, div).unwrap();
            if fast.verdict == slow.verdict {
                agree += 1;
            }
            if fast.verdict {
                equivalent += 1;
            }
        }
    }
    outcome(
        agree == 2 * SEEDS,
        format!("{agree}/{} verdicts agree ({equivalent} equivalent)", 2 * SEEDS),
    )
}

fn witness_validity(witnesses: &[Witness]) -> Outcome {
    let bad = witnesses
        .iter()
        .filter(|(m, x, b)| !validate_blocks(m, x, b, false).is_empty())
        .count();
    outcome(
        bad == 0 && !witnesses.is_empty(),
        format!("{} partitions replayed, {bad} with violations", witnesses.len()),
    )
}

fn main() -> ExitCode {
    let mut witnesses = Vec::new();
    let mut failed = 0;
    let mut report = |id: &str, title: &str, limit: Option<Duration>, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let in_time = limit.is_none_or(|l| took < l);
        let pass = o.pass && in_time;
        if !pass {
            failed += 1;
        }
        let timing = match limit {
            Some(l) => format!("{:.2} s, limit {} s", took.as_secs_f64(), l.as_secs()),
            None => format!("{:.2} s", took.as_secs_f64()),
        };
        println!(
            "{id} {} {title}: {} ({timing})",
            if pass { "PASS" } else { "FAIL" },
            o.detail
        );
    };
    let secs = |s| Some(Duration::from_secs(s));
    report("AC1", "two-state example, synchronous", secs(1), &mut || golden_sync(&mut witnesses));
    report("AC2", "two-state example, queued", secs(1), &mut || golden_async(&mut witnesses));
    report("AC3", "random sources, synchronous", secs(60), &mut || sync_suite(&mut witnesses));
    report("AC4", "random sources, queued", secs(120), &mut || async_suite(&mut witnesses));
    report("AC5", "factor products are confluent", None, &mut factor_confluence);
    report("AC6", "divergence cannot be preserved", secs(1), &mut impossibility_demo);
    report("AC7", "refinement agrees with the oracle", secs(60), &mut oracle_agreement);
    report("AC8", "witness partitions replay cleanly", None, &mut || witness_validity(&witnesses));
    println!("{} of 8 criteria failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
