use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use ltsd_core::decomp::{flatten_states, NamedState};
use ltsd_core::generate::{generate, GenConfig};
use ltsd_core::product::shared_labels;
use ltsd_core::{
    branching_bisim, decomp_a_with_capacity, decomp_s, dpbb, dpbb_impossibility_demo,
    is_confluent, parse_aut, sync_product, write_aut, Action, AlphabetPartition, Component, Lts,
};

/// Decompose transition systems over an alphabet partition and check the result.
#[derive(Parser)]
#[command(name = "ltsd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a system into two communicating components.
    Decompose {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Sync)]
        mode: Mode,
        #[command(flatten)]
        partition: PartitionArgs,
        /// Queue capacity for the queued mode.
        #[arg(long, default_value_t = 1)]
        capacity: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compose the components listed in a manifest.
    Compose {
        /// Output directory of `decompose`, or its manifest.json.
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two systems. The second may be a decomposition, which is composed first.
    Check {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        divergence: bool,
    },
    /// Check confluence of a system over two action sets.
    Confluence {
        input: PathBuf,
        #[command(flatten)]
        partition: PartitionArgs,
        #[arg(long)]
        json: bool,
    },
    /// Show that decomposing `p -a-> r, p -b-> s` always introduces divergence.
    DemoDpbb {
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a seeded random system without internal steps.
    Generate {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        actions: usize,
        /// Mean number of outgoing transitions per state.
        #[arg(long, default_value_t = 1.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Sync,
    Async,
}

#[derive(Args)]
struct PartitionArgs {
    /// Comma-separated labels of the first half.
    #[arg(long, allow_hyphen_values = true)]
    sigma1: Option<String>,
    /// Comma-separated labels of the second half.
    #[arg(long, allow_hyphen_values = true)]
    sigma2: Option<String>,
    /// JSON file with `sigma1` and `sigma2` label lists.
    #[arg(long, conflicts_with_all = ["sigma1", "sigma2"])]
    partition: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct PartitionFile {
    sigma1: Vec<String>,
    sigma2: Vec<String>,
}

impl PartitionArgs {
    fn labels(&self) -> Result<(Vec<String>, Vec<String>)> {
        if let Some(path) = &self.partition {
            let f: PartitionFile = serde_json::from_str(&read(path)?)
                .with_context(|| format!("invalid partition file {}", path.display()))?;
            return Ok((f.sigma1, f.sigma2));
        }
        if self.sigma1.is_none() && self.sigma2.is_none() {
            bail!("give --sigma1/--sigma2 or --partition");
        }
        let split = |s: &Option<String>| -> Vec<String> {
            s.as_deref()
                .unwrap_or("")
                .split(',')
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(String::from)
                .collect()
        };
        Ok((split(&self.sigma1), split(&self.sigma2)))
    }

    fn partition(&self) -> Result<AlphabetPartition> {
        let (s1, s2) = self.labels()?;
        Ok(AlphabetPartition::from_labels(&s1, &s2)?)
    }
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    capacity: Option<usize>,
    partition: PartitionFile,
    components: [String; 2],
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> Result<Lts> {
    parse_aut(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            std::io::stdout().flush()?;
            Ok(())
        }
    }
}

fn paint(word: &str, good: bool) -> String {
    if std::env::var("LTSD_COLOR").as_deref() == Ok("1") {
        format!("\x1b[{}m{word}\x1b[0m", if good { 32 } else { 31 })
    } else {
        word.to_string()
    }
}

fn names_jsonl(l: &Lts) -> String {
    (0..l.num_states())
        .map(|id| {
            let record = NamedState {
                id,
                name: l.state_name(id),
            };
            serde_json::to_string(&record).expect("plain record") + "\n"
        })
        .collect()
}

fn decompose(
    input: &Path,
    mode: Mode,
    partition: &PartitionArgs,
    capacity: usize,
    out: &Path,
    json: bool,
) -> Result<ExitCode> {
    let m = load(input)?;
    let p = partition.partition()?;
    let (m1, m2) = match mode {
        Mode::Sync => {
            let d = decomp_s(&m, &p)?;
            (d.m1, d.m2)
        }
        Mode::Async => {
            let d = decomp_a_with_capacity(&m, &p, capacity)?;
            (
                flatten_states(d.component(Component::First)).0,
                flatten_states(d.component(Component::Second)).0,
            )
        }
    };
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    for (stem, l) in [("m1", &m1), ("m2", &m2)] {
        fs::write(out.join(format!("{stem}.aut")), write_aut(l))?;
        fs::write(out.join(format!("{stem}.names.jsonl")), names_jsonl(l))?;
    }
    let text = |set: &BTreeSet<Action>| set.iter().map(Action::to_text).collect();
    let manifest = Manifest {
        mode,
        capacity: (mode == Mode::Async).then_some(capacity),
        partition: PartitionFile {
            sigma1: text(p.sigma1()),
            sigma2: text(p.sigma2()),
        },
        components: ["m1.aut".into(), "m2.aut".into()],
    };
    fs::write(
        out.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    if json {
        println!(
            "{}",
            serde_json::json!({
                "m1": {"states": m1.num_states(), "transitions": m1.num_transitions()},
                "m2": {"states": m2.num_states(), "transitions": m2.num_transitions()},
            })
        );
    } else {
        println!(
            "m1: {} states, {} transitions\nm2: {} states, {} transitions",
            m1.num_states(),
            m1.num_transitions(),
            m2.num_states(),
            m2.num_transitions()
        );
    }
    Ok(ExitCode::SUCCESS)
}

/// Loads both components of a decomposition and composes them.
fn compose_manifest(path: &Path) -> Result<Lts> {
    let file = if path.is_dir() {
        path.join("manifest.json")
    } else {
        path.to_path_buf()
    };
    let manifest: Manifest = serde_json::from_str(&read(&file)?)
        .with_context(|| format!("invalid manifest {}", file.display()))?;
    let dir = file.parent().unwrap_or(Path::new("."));
    let m1 = load(&dir.join(&manifest.components[0]))?;
    let m2 = load(&dir.join(&manifest.components[1]))?;
    let shared = shared_labels(&m1, &m2);
    if !shared.is_empty() {
        let list: Vec<String> = shared.iter().map(Action::to_text).collect();
        eprintln!(
            "warning: components share labels {}; these interleave instead of synchronising",
            list.join(", ")
        );
    }
    Ok(sync_product(&m1, &m2).0)
}

fn is_manifest(path: &Path) -> bool {
    path.is_dir() || path.extension().is_some_and(|e| e == "json")
}

fn check(left: &Path, right: &Path, divergence: bool) -> Result<ExitCode> {
    let l = load(left)?;
    let r = if is_manifest(right) {
        compose_manifest(right)?
    } else {
        load(right)?
    };
    let result = if divergence {
        dpbb(&l, &r)
    } else {
        branching_bisim(&l, &r)
    };
    println!("{}", result.to_json());
    Ok(if result.verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn confluence(input: &Path, partition: &PartitionArgs, json: bool) -> Result<ExitCode> {
    let l = load(input)?;
    let (s1, s2) = partition.labels()?;
    let set = |labels: &[String]| -> Result<BTreeSet<Action>> {
        labels.iter().map(|t| Ok(Action::from_text(t)?)).collect()
    };
    let report = is_confluent(&l, &set(&s1)?, &set(&s2)?)?;
    if json {
        println!("{}", serde_json::to_string(&report)?);
    } else {
        println!(
            "{}",
            paint(if report.verdict { "confluent" } else { "not confluent" }, report.verdict)
        );
        for v in &report.violations {
            println!(
                "  {} -{}-> {} and -{}-> {} do not meet",
                l.state_name(v.state),
                v.a,
                l.state_name(v.state_a),
                v.b,
                l.state_name(v.state_b)
            );
        }
    }
    Ok(if report.verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn demo(json: bool, out: Option<&Path>) -> Result<ExitCode> {
    let report = dpbb_impossibility_demo();
    let text = if json {
        report.to_json() + "\n"
    } else {
        format!("{report}\n")
    };
    emit(out, &text)?;
    if out.is_some() && !json {
        println!("{}", paint(if report.holds() { "holds" } else { "unexpected" }, report.holds()));
    }
    Ok(if report.holds() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Decompose {
            input,
            mode,
            partition,
            capacity,
            out,
            json,
        } => decompose(&input, mode, &partition, capacity, &out, json),
        Command::Compose { manifest, out } => {
            let x = compose_manifest(&manifest)?;
            emit(out.as_deref(), &write_aut(&x))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            left,
            right,
            divergence,
        } => check(&left, &right, divergence),
        Command::Confluence {
            input,
            partition,
            json,
        } => confluence(&input, &partition, json),
        Command::DemoDpbb { json, out } => demo(json, out.as_deref()),
        Command::Generate {
            states,
            actions,
            density,
            seed,
            out,
        } => {
            let l = generate(
                seed,
                GenConfig {
                    states,
                    actions,
                    density,
                },
            )?;
            emit(out.as_deref(), &write_aut(&l))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
