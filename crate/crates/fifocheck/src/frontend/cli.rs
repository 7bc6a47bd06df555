//! Command-line driver. Exit codes: 0 the property holds (or no violation
//! was found within bounds), 1 a violation was found (witness on stdout,
//! JSON with `--json`), 2 usage or parse error, 3 precondition failure
//! (non-greedy system for safety checks, wrong topology, bad property).

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::frontend::verdict::{
    boundedness_json, greedy_json, half_duplex_json, hd_status_str, orphan_json,
    parse_configuration, safety_json,
};
use crate::frontend::{action_graph_dot, conflict_graph_dot, load_property, parse_trace};
use crate::greedy::{check_greedy, Adjacency, GreedyStatus};
use crate::halfduplex::{
    check_binary_half_duplex, check_mailbox_half_duplex_bounded, check_no_orphan_bounded,
    HdStatus, OrphanStatus,
};
use crate::model::{System, Topology};
use crate::oracle::{enumerate_executions, oracle_max_occupancy, render_listing, ExplorationBudget};
use crate::safety::{
    check_boundedness, check_safety, property_progress, property_reach_config,
    property_reach_control, property_unspecified_reception, Boundedness, Property, SafetyStatus,
};

#[derive(Parser)]
#[command(name = "fifocheck", version, about = "Verifier for systems of communicating FIFO automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a decision procedure against a system
    Check {
        #[command(subcommand)]
        check: Check,
    },
    /// Replay a trace and print the reached configuration as JSON
    Simulate {
        file: PathBuf,
        #[arg(long)]
        trace: PathBuf,
    },
    /// Render the causal graphs of a trace as DOT
    Graph {
        file: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, value_enum)]
        kind: GraphKind,
        /// Elide transitively implied arcs
        #[arg(long)]
        reduce: bool,
        /// Write to a file instead of stdout
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Brute-force enumeration of executions within a budget
    Oracle {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        buffer_bound: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_nodes: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum Check {
    /// Decide whether every execution reschedules into a greedy one
    Greedy {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = AdjacencyArg::Full)]
        adjacency: AdjacencyArg,
        #[arg(long)]
        json: bool,
    },
    /// Check a regular safety property (greedy systems only)
    Safety {
        file: PathBuf,
        #[arg(long, value_enum)]
        property: PropertyKind,
        /// Target control states for reach-control, comma separated
        #[arg(long)]
        states: Option<String>,
        /// Target configuration JSON file for reach-config
        #[arg(long)]
        config: Option<PathBuf>,
        /// Property automaton JSON file for nfa
        #[arg(long)]
        nfa: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Decide boundedness of all buffers (greedy systems only)
    Bounded {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Half-duplex analysis: exact for binary systems, bounded for mailbox
    HalfDuplex {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        buffer_bound: usize,
        #[arg(long)]
        json: bool,
    },
    /// Bounded search for unreceivable buffered messages
    NoOrphan {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        buffer_bound: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run every applicable check
    All {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        buffer_bound: usize,
        /// Fan the independent checks out across threads
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AdjacencyArg {
    Full,
    Paper,
}

impl From<AdjacencyArg> for Adjacency {
    fn from(a: AdjacencyArg) -> Adjacency {
        match a {
            AdjacencyArg::Full => Adjacency::Full,
            AdjacencyArg::Paper => Adjacency::Paper,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyKind {
    ReachControl,
    ReachConfig,
    UnspecifiedReception,
    Progress,
    Nfa,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    Action,
    Conflict,
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

/// Entry point used by the `fifocheck` binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(2, format!("cannot read {}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<System, Failure> {
    let text = read_file(path)?;
    crate::frontend::parse_system(&text)
        .map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn load_trace(system: &System, path: &Path) -> Result<Vec<crate::model::Action>, Failure> {
    let text = read_file(path)?;
    parse_trace(system, &text).map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn emit(json: bool, value: &Value, text: impl FnOnce() -> String) {
    if json {
        println!("{value:#}");
    } else {
        println!("{}", text());
    }
}

fn dispatch(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Check { check } => dispatch_check(check),
        Command::Simulate { file, trace } => {
            let system = load_system(&file)?;
            let actions = load_trace(&system, &trace)?;
            match system.run(&actions) {
                Ok(config) => {
                    println!("{:#}", system.config_json(&config));
                    Ok(0)
                }
                Err(e) => {
                    println!(
                        "{:#}",
                        serde_json::json!({ "error": e.to_string(), "failed_at": e.index })
                    );
                    Ok(1)
                }
            }
        }
        Command::Graph { file, trace, kind, reduce, output } => {
            let system = load_system(&file)?;
            let actions = load_trace(&system, &trace)?;
            system
                .run(&actions)
                .map_err(|e| fail(2, format!("trace does not replay: {e}")))?;
            let dot = match kind {
                GraphKind::Action => action_graph_dot(&system, &actions, reduce),
                GraphKind::Conflict => conflict_graph_dot(&system, &actions, reduce),
            };
            match output {
                Some(path) => fs::write(&path, dot)
                    .map_err(|e| fail(2, format!("cannot write {}: {e}", path.display())))?,
                None => print!("{dot}"),
            }
            Ok(0)
        }
        Command::Oracle { file, depth, buffer_bound, max_nodes, json } => {
            let system = load_system(&file)?;
            let budget = ExplorationBudget::new(depth, buffer_bound).with_max_nodes(max_nodes);
            let (executions, info) = enumerate_executions(&system, &budget);
            if json {
                let (occupancy, _) = oracle_max_occupancy(&system, &budget);
                let mut buffers = serde_json::Map::new();
                for (i, v) in occupancy.iter().enumerate() {
                    buffers.insert(system.buffer_name(i).to_string(), serde_json::json!(v));
                }
                println!(
                    "{:#}",
                    serde_json::json!({
                        "executions": info.executions,
                        "complete": info.complete,
                        "budget_exhausted": info.budget_exhausted,
                        "max_occupancy": buffers,
                    })
                );
            } else {
                print!("{}", render_listing(&system, &executions));
                eprintln!(
                    "{} executions, complete: {}, budget exhausted: {}",
                    info.executions, info.complete, info.budget_exhausted
                );
            }
            Ok(0)
        }
    }
}

fn dispatch_check(check: Check) -> Result<i32, Failure> {
    match check {
        Check::Greedy { file, adjacency, json } => {
            let system = load_system(&file)?;
            let verdict = check_greedy(&system, adjacency.into());
            emit(json, &greedy_json(&system, &verdict), || match &verdict.witness {
                None => "greedy".to_string(),
                Some(w) => format!(
                    "not-greedy\nwitness word: {}\nwitness actions: {}",
                    w.word.iter().map(|l| l.display(&system)).collect::<Vec<_>>().join(" "),
                    system.display_execution(&w.actions)
                ),
            });
            Ok(if verdict.status == GreedyStatus::Greedy { 0 } else { 1 })
        }
        Check::Safety { file, property, states, config, nfa, json } => {
            let system = load_system(&file)?;
            let property = build_property(&system, property, states, config, nfa)?;
            let verdict = check_safety(&system, &property).map_err(|e| fail(3, e.to_string()))?;
            emit(json, &safety_json(&system, &verdict), || match &verdict.witness {
                None => format!("{}: safe", verdict.property),
                Some(w) => format!(
                    "{}: unsafe\nwitness: {}",
                    verdict.property,
                    system.display_execution(&w.actions)
                ),
            });
            Ok(if verdict.status == SafetyStatus::Safe { 0 } else { 1 })
        }
        Check::Bounded { file, json } => {
            let system = load_system(&file)?;
            let verdict = check_boundedness(&system).map_err(|e| fail(3, e.to_string()))?;
            emit(json, &boundedness_json(&system, &verdict), || match &verdict {
                Boundedness::Bounded { k, .. } => format!("bounded; k = {k}"),
                Boundedness::Unbounded { witness } => format!(
                    "unbounded\ncycle: {}",
                    witness.cycle.iter().map(|l| l.display(&system)).collect::<Vec<_>>().join(" ")
                ),
            });
            Ok(match verdict {
                Boundedness::Bounded { .. } => 0,
                Boundedness::Unbounded { .. } => 1,
            })
        }
        Check::HalfDuplex { file, depth, buffer_bound, json } => {
            let system = load_system(&file)?;
            let (verdict, mode) = match system.classify_topology() {
                Topology::Binary => (
                    check_binary_half_duplex(&system, buffer_bound, depth)
                        .map_err(|e| fail(3, e.to_string()))?,
                    "binary",
                ),
                Topology::Mailbox => (
                    check_mailbox_half_duplex_bounded(&system, depth)
                        .map_err(|e| fail(3, e.to_string()))?,
                    "mailbox",
                ),
                other => {
                    return Err(fail(
                        3,
                        format!("half-duplex analysis requires a mailbox or binary system, got {other}"),
                    ))
                }
            };
            emit(json, &half_duplex_json(&system, &verdict, mode), || {
                match &verdict.witness {
                    None => format!("{} ({mode})", hd_status_str(verdict.status)),
                    Some(w) => format!(
                        "not-half-duplex ({mode})\nwitness: {}",
                        system.display_execution(w)
                    ),
                }
            });
            Ok(if verdict.status == HdStatus::NotHalfDuplex { 1 } else { 0 })
        }
        Check::NoOrphan { file, depth, buffer_bound, json } => {
            let system = load_system(&file)?;
            let verdict = check_no_orphan_bounded(&system, depth, buffer_bound);
            emit(json, &orphan_json(&system, &verdict), || match &verdict.witness {
                None => "no-orphan-within-bounds".to_string(),
                Some(w) => format!(
                    "orphan-candidate: {} at position {} of buffer {}\nreached by: {}",
                    system.message_name(w.message),
                    w.position,
                    system.buffer_name(w.buffer),
                    system.display_execution(&w.reaching)
                ),
            });
            Ok(if verdict.status == OrphanStatus::OrphanCandidate { 1 } else { 0 })
        }
        Check::All { file, depth, buffer_bound, parallel, json } => {
            let system = load_system(&file)?;
            let reports = if parallel {
                run_all_parallel(&system, depth, buffer_bound)
            } else {
                run_all_sequential(&system, depth, buffer_bound)
            };
            let mut worst = 0;
            if json {
                let values: Vec<Value> = reports.iter().map(|(_, v, _)| v.clone()).collect();
                println!("{:#}", Value::Array(values));
            }
            for (name, value, code) in &reports {
                if !json {
                    println!("{name}: {}", value["status"].as_str().unwrap_or("?"));
                }
                if *code == 1 {
                    worst = 1;
                }
            }
            Ok(worst)
        }
    }
}

fn build_property(
    system: &System,
    kind: PropertyKind,
    states: Option<String>,
    config: Option<PathBuf>,
    nfa: Option<PathBuf>,
) -> Result<Property, Failure> {
    match kind {
        PropertyKind::ReachControl => {
            let states =
                states.ok_or_else(|| fail(2, "reach-control requires --states s1,s2,..."))?;
            let names: Vec<&str> = states.split(',').map(str::trim).collect();
            property_reach_control(system, &names).map_err(|e| fail(3, e.to_string()))
        }
        PropertyKind::ReachConfig => {
            let path = config.ok_or_else(|| fail(2, "reach-config requires --config FILE"))?;
            let text = read_file(&path)?;
            let target =
                parse_configuration(system, &text).map_err(|e| fail(3, e.to_string()))?;
            Ok(property_reach_config(system, &target))
        }
        PropertyKind::UnspecifiedReception => {
            property_unspecified_reception(system).map_err(|e| fail(3, e.to_string()))
        }
        PropertyKind::Progress => Ok(property_progress(system)),
        PropertyKind::Nfa => {
            let path = nfa.ok_or_else(|| fail(2, "nfa requires --nfa FILE"))?;
            let text = read_file(&path)?;
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
            load_property(system, name.as_deref().unwrap_or("nfa"), &text)
                .map_err(|e| fail(3, e.to_string()))
        }
    }
}

type Report = (String, Value, i32);

fn greedy_report(system: &System) -> Report {
    let verdict = check_greedy(system, Adjacency::Full);
    let code = i32::from(verdict.status == GreedyStatus::NotGreedy);
    ("greedy".to_string(), greedy_json(system, &verdict), code)
}

fn bounded_report(system: &System) -> Report {
    match check_boundedness(system) {
        Ok(verdict) => {
            let code = i32::from(matches!(verdict, Boundedness::Unbounded { .. }));
            ("bounded".to_string(), boundedness_json(system, &verdict), code)
        }
        Err(e) => (
            "bounded".to_string(),
            serde_json::json!({"check": "boundedness", "status": "precondition-failed", "reason": e.to_string()}),
            0,
        ),
    }
}

fn safety_report(system: &System, property: Property) -> Report {
    let name = property.name.clone();
    match check_safety(system, &property) {
        Ok(verdict) => {
            let code = i32::from(verdict.status == SafetyStatus::Unsafe);
            (name, safety_json(system, &verdict), code)
        }
        Err(e) => (
            name.clone(),
            serde_json::json!({"check": "safety", "property": name, "status": "precondition-failed", "reason": e.to_string()}),
            0,
        ),
    }
}

fn half_duplex_report(system: &System, depth: usize, buffer_bound: usize) -> Option<Report> {
    let (verdict, mode) = match system.classify_topology() {
        Topology::Binary => {
            (check_binary_half_duplex(system, buffer_bound, depth).ok()?, "binary")
        }
        Topology::Mailbox => (check_mailbox_half_duplex_bounded(system, depth).ok()?, "mailbox"),
        _ => return None,
    };
    let code = i32::from(verdict.status == HdStatus::NotHalfDuplex);
    Some(("half-duplex".to_string(), half_duplex_json(system, &verdict, mode), code))
}

fn orphan_report(system: &System, depth: usize, buffer_bound: usize) -> Report {
    let verdict = check_no_orphan_bounded(system, depth, buffer_bound);
    let code = i32::from(verdict.status == OrphanStatus::OrphanCandidate);
    ("no-orphan".to_string(), orphan_json(system, &verdict), code)
}

fn run_all_sequential(system: &System, depth: usize, buffer_bound: usize) -> Vec<Report> {
    let mut out = vec![greedy_report(system), bounded_report(system)];
    if system.is_mailbox() {
        if let Ok(p) = property_unspecified_reception(system) {
            out.push(safety_report(system, p));
        }
    }
    out.push(safety_report(system, property_progress(system)));
    if let Some(r) = half_duplex_report(system, depth, buffer_bound) {
        out.push(r);
    }
    out.push(orphan_report(system, depth, buffer_bound));
    out
}

fn run_all_parallel(system: &System, depth: usize, buffer_bound: usize) -> Vec<Report> {
    std::thread::scope(|scope| {
        let greedy = scope.spawn(|| greedy_report(system));
        let bounded = scope.spawn(|| bounded_report(system));
        let ur = scope.spawn(|| {
            system
                .is_mailbox()
                .then(|| property_unspecified_reception(system).ok())
                .flatten()
                .map(|p| safety_report(system, p))
        });
        let progress = scope.spawn(|| safety_report(system, property_progress(system)));
        let hd = scope.spawn(|| half_duplex_report(system, depth, buffer_bound));
        let orphan = scope.spawn(|| orphan_report(system, depth, buffer_bound));
        let mut out = vec![greedy.join().unwrap(), bounded.join().unwrap()];
        if let Some(r) = ur.join().unwrap() {
            out.push(r);
        }
        out.push(progress.join().unwrap());
        if let Some(r) = hd.join().unwrap() {
            out.push(r);
        }
        out.push(orphan.join().unwrap());
        out
    })
}
