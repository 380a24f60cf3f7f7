//! Reader and writer for the Aldebaran `.aut` format.
//!
//! ```text
//! des (initial, transition_count, state_count)
//! (source,"label",target)
//! ```
//!
//! `tau` (or `i` on input) is the internal action and a leading `!` marks a co-action.
//! Blank lines and lines starting with `#` are skipped.

use std::fmt::Write as _;

use crate::action::Action;
use crate::error::{Error, Result};
use crate::lts::{Lts, Transition};

struct Header {
    initial: usize,
    transitions: usize,
    states: usize,
}

pub fn parse_aut(text: &str) -> Result<Lts> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'));

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `des` header"))?;
    let header = parse_header(header).map_err(|m| Error::parse(header_line, m))?;
    if header.states == 0 {
        return Err(Error::parse(header_line, "state count must be at least 1"));
    }
    if header.initial >= header.states {
        return Err(Error::parse(
            header_line,
            format!(
                "initial state {} out of range for {} states",
                header.initial, header.states
            ),
        ));
    }

    let mut transitions = Vec::with_capacity(header.transitions);
    let mut last_line = header_line;
    for (line_no, line) in lines {
        last_line = line_no;
        if transitions.len() == header.transitions {
            return Err(Error::parse(
                line_no,
                format!("more than the {} transitions declared", header.transitions),
            ));
        }
        let t = parse_transition(line).map_err(|m| Error::parse(line_no, m))?;
        for endpoint in [t.source, t.target] {
            if endpoint >= header.states {
                return Err(Error::parse(
                    line_no,
                    format!(
                        "state {endpoint} out of range for {} states",
                        header.states
                    ),
                ));
            }
        }
        transitions.push(t);
    }
    if transitions.len() < header.transitions {
        return Err(Error::parse(
            last_line,
            format!(
                "expected {} transitions, found {}",
                header.transitions,
                transitions.len()
            ),
        ));
    }
    Lts::from_transitions(header.states, header.initial, transitions)
}

fn parse_header(line: &str) -> std::result::Result<Header, String> {
    let rest = line
        .strip_prefix("des")
        .ok_or_else(|| format!("expected `des (I,T,N)`, found {line:?}"))?;
    let inner = parenthesised(rest.trim()).ok_or("header must be `des (I,T,N)`")?;
    let fields: Vec<&str> = inner.split(',').map(str::trim).collect();
    if fields.len() != 3 {
        return Err(format!("header needs three fields, found {}", fields.len()));
    }
    let num = |s: &str, what: &str| {
        s.parse::<usize>()
            .map_err(|_| format!("{what} {s:?} is not a non-negative integer"))
    };
    Ok(Header {
        initial: num(fields[0], "initial state")?,
        transitions: num(fields[1], "transition count")?,
        states: num(fields[2], "state count")?,
    })
}

fn parse_transition(line: &str) -> std::result::Result<Transition, String> {
    let inner = parenthesised(line).ok_or("transition must be `(src,\"label\",dst)`")?;
    let (src, rest) = inner.split_once(',').ok_or("missing label")?;
    let rest = rest.trim_start();
    let (label, dst) = if let Some(quoted) = rest.strip_prefix('"') {
        let (label, after) = quoted.split_once('"').ok_or("unterminated label")?;
        let dst = after
            .trim_start()
            .strip_prefix(',')
            .ok_or("missing target after label")?;
        (label, dst)
    } else {
        rest.rsplit_once(',').ok_or("missing target")?
    };
    let label = label.trim();
    if label.is_empty() {
        return Err("empty label".into());
    }
    let state = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("state {:?} is not a non-negative integer", s.trim()))
    };
    let action = Action::from_text(label).map_err(|e| e.to_string())?;
    Ok(Transition::new(state(src)?, action, state(dst)?))
}

fn parenthesised(s: &str) -> Option<&str> {
    s.strip_prefix('(')?.strip_suffix(')')
}

/// Writes `l` with transitions in `(source, label, target)` order.
pub fn write_aut(l: &Lts) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "des ({},{},{})",
        l.initial(),
        l.num_transitions(),
        l.num_states()
    )
    .unwrap();
    for t in l.transitions() {
        writeln!(out, "({},\"{}\",{})", t.source, t.action, t.target).unwrap();
    }
    out
}
