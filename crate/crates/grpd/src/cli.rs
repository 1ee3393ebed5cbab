//! Command-line front end: ingestion, analysis, comparison, oracle
//! cross-checks, and DOT emission.
//!
//! Subcommands: `analyze` (isolated-point census), `classify` (per-point
//! classification of JSON-given boundary points), `stabilize` (emit the
//! graph with a head attached to every vertex), `compare` (orbit
//! equivalence / groupoid isomorphism / invariant refutation), `oracle`
//! (classifier vs. truncated-tree cross-check), and `emit-dot`.
//!
//! Output is JSON with alphabetically sorted fields by default; `--table`
//! switches to a human-readable rendering. Exit codes follow sysexits where
//! applicable: 0 success (and compare-yes), 1 compare-no, 2
//! compare-undecided, 64 usage error, 65 unparseable or invalid input data,
//! 66 unreadable input file, 70 enumeration cap exceeded. The
//! `GRPD_NODE_CAP` environment variable overrides the default enumeration
//! caps wherever a subcommand would use them.

use std::ffi::OsString;
use std::fs;
use std::path::{Path as FsPath, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::boundary::{is_isolated, BoundaryPoint};
use crate::dot::emit_dot;
use crate::equivalence::{
    decide_groupoid_iso_discrete_with_window, decide_oe_discrete,
    decide_oe_preserving_ep_discrete, invariant_refute, Answer, Verdict,
    DEFAULT_VERIFY_WINDOW,
};
use crate::error::Error;
use crate::graph::{parse_graph, serialize_graph, stabilize, Graph};
use crate::isolated::{census, classify_isolated, Census, IsolatedType};
use crate::oracle::{cross_check, default_depth, CrossCheckReport};

const EXIT_OK: i32 = 0;
const EXIT_NO: i32 = 1;
const EXIT_UNDECIDED: i32 = 2;
const EXIT_USAGE: i32 = 64;
const EXIT_DATA: i32 = 65;
const EXIT_NOINPUT: i32 = 66;
const EXIT_CAP: i32 = 70;

/// Analyze boundary path spaces and graph groupoids of directed graphs.
#[derive(Parser)]
#[command(name = "grpd", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    table: bool,

    /// JSON output (the default; kept for scripting symmetry).
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Census of isolated boundary points, no-exit cycles, discreteness.
    Analyze {
        /// Graph in text format.
        graph: PathBuf,
    },
    /// Classify boundary points given as JSON documents.
    Classify {
        /// Graph in text format.
        graph: PathBuf,
        /// A boundary point as JSON; repeatable.
        #[arg(long = "point", value_name = "JSON")]
        points: Vec<String>,
    },
    /// Attach an infinite head to every vertex and print the result.
    Stabilize {
        /// Graph in text format.
        graph: PathBuf,
    },
    /// Compare two graphs' boundary spaces / groupoids.
    Compare {
        /// First graph.
        graph_e: PathBuf,
        /// Second graph.
        graph_f: PathBuf,
        /// What to decide.
        #[arg(long, value_enum, default_value_t = CompareMode::Oe)]
        mode: CompareMode,
        /// Verification window for `--mode iso`.
        #[arg(long, default_value_t = DEFAULT_VERIFY_WINDOW)]
        window: u64,
    },
    /// Cross-check the isolation classifier against the truncated tree.
    Oracle {
        /// Graph in text format.
        graph: PathBuf,
        /// Truncation depth (default: the size-derived formula).
        #[arg(long)]
        depth: Option<u64>,
    },
    /// Emit a DOT rendering of the graph.
    EmitDot {
        /// Graph in text format.
        graph: PathBuf,
    },
}

/// Comparison modes of the `compare` subcommand.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CompareMode {
    /// Orbit equivalence of discrete spaces.
    Oe,
    /// Orbit equivalence preserving isolated eventually periodic points.
    OeEp,
    /// Groupoid isomorphism with a verified witness.
    Iso,
    /// Invariant-based refutation (any graphs; never answers yes).
    Refute,
}

/// Run the CLI on the given arguments (without the program name) and
/// return the process exit code.
pub fn run_from<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let argv = std::iter::once(OsString::from("grpd")).chain(args);
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Err(code) = validate_env_cap() {
        return code;
    }
    let table = cli.table;
    match cli.command {
        Command::Analyze { graph } => cmd_analyze(&graph, table),
        Command::Classify { graph, points } => cmd_classify(&graph, &points, table),
        Command::Stabilize { graph } => cmd_stabilize(&graph),
        Command::Compare { graph_e, graph_f, mode, window } => {
            cmd_compare(&graph_e, &graph_f, mode, window, table)
        }
        Command::Oracle { graph, depth } => cmd_oracle(&graph, depth, table),
        Command::EmitDot { graph } => cmd_emit_dot(&graph),
    }
}

/// Reject malformed `GRPD_NODE_CAP` up front instead of silently falling
/// back to the default cap mid-analysis.
fn validate_env_cap() -> Result<(), i32> {
    match std::env::var_os("GRPD_NODE_CAP") {
        None => Ok(()),
        Some(v) => match v.to_str().and_then(|s| s.parse::<u64>().ok()) {
            Some(_) => Ok(()),
            None => {
                eprintln!("error: GRPD_NODE_CAP must be an unsigned integer, got {v:?}");
                Err(EXIT_USAGE)
            }
        },
    }
}

fn load_graph(path: &FsPath) -> Result<Graph, i32> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return Err(EXIT_NOINPUT);
        }
    };
    parse_graph(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_DATA
    })
}

fn fail(e: Error) -> i32 {
    eprintln!("error: {e}");
    match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        _ => EXIT_DATA,
    }
}

/// Print as JSON with alphabetically sorted object keys.
fn print_json<T: Serialize>(value: &T) {
    let v = serde_json::to_value(value).expect("CLI outputs serialize infallibly");
    println!("{}", serde_json::to_string_pretty(&v).expect("JSON value renders"));
}

fn cmd_analyze(path: &FsPath, table: bool) -> i32 {
    let g = match load_graph(path) {
        Ok(g) => g,
        Err(code) => return code,
    };
    match census(&g) {
        Ok(c) => {
            if table {
                print_census_table(&c);
            } else {
                print_json(&c);
            }
            EXIT_OK
        }
        Err(e) => fail(e),
    }
}

fn print_census_table(c: &Census) {
    println!("isolated finite      {}", c.isolated_finite);
    println!("isolated ep          {}", c.isolated_ep);
    println!("isolated wandering   {}", c.isolated_wandering);
    println!("ep orbits            {}", c.isolated_ep_orbits);
    println!("discrete             {}", if c.discrete { "yes" } else { "no" });
    println!("condition (L)        {}", if c.isolated_ep.is_zero() { "yes" } else { "no" });
    let cycles: Vec<String> = c.no_exit_cycles.iter().map(|cy| cy.to_string()).collect();
    println!("no-exit cycles       [{}]", cycles.join(", "));
}

#[derive(Serialize)]
struct PointReport {
    point: BoundaryPoint,
    kind: &'static str,
    isolated: bool,
    isolated_type: Option<IsolatedType>,
}

fn cmd_classify(path: &FsPath, points: &[String], table: bool) -> i32 {
    let g = match load_graph(path) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let mut reports = Vec::new();
    for (i, text) in points.iter().enumerate() {
        let point: BoundaryPoint = match serde_json::from_str(text) {
            Ok(p) => p,
            Err(e) => {
                eprintln!("error: point {}: {e}", i + 1);
                return EXIT_DATA;
            }
        };
        if let Err(e) = point.validate(&g) {
            eprintln!("error: point {}: {e}", i + 1);
            return EXIT_DATA;
        }
        let isolated = match is_isolated(&g, &point) {
            Ok(b) => b,
            Err(e) => return fail(e),
        };
        let isolated_type = if isolated {
            match classify_isolated(&g, &point) {
                Ok(t) => Some(t),
                Err(e) => return fail(e),
            }
        } else {
            None
        };
        reports.push(PointReport { kind: point.kind(), point, isolated, isolated_type });
    }
    if table {
        for r in &reports {
            let ty = match r.isolated_type {
                Some(t) => serde_json::to_value(t)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_owned))
                    .unwrap_or_default(),
                None => "-".into(),
            };
            println!(
                "{}\tkind={}\tisolated={}\ttype={ty}",
                r.point,
                r.kind,
                if r.isolated { "yes" } else { "no" }
            );
        }
    } else {
        print_json(&reports);
    }
    EXIT_OK
}

fn cmd_stabilize(path: &FsPath) -> i32 {
    match load_graph(path) {
        Ok(g) => {
            print!("{}", serialize_graph(&stabilize(&g)));
            EXIT_OK
        }
        Err(code) => code,
    }
}

fn cmd_compare(
    path_e: &FsPath,
    path_f: &FsPath,
    mode: CompareMode,
    window: u64,
    table: bool,
) -> i32 {
    let ge = match load_graph(path_e) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let gf = match load_graph(path_f) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let verdict = match mode {
        CompareMode::Oe => decide_oe_discrete(&ge, &gf),
        CompareMode::OeEp => decide_oe_preserving_ep_discrete(&ge, &gf),
        CompareMode::Iso => decide_groupoid_iso_discrete_with_window(&ge, &gf, window),
        CompareMode::Refute => invariant_refute(&ge, &gf).map(|obstruction| match obstruction {
            Some(o) => {
                Verdict { answer: Answer::No, witness: None, obstruction: Some(o), reason: None }
            }
            None => Verdict {
                answer: Answer::Undecided,
                witness: None,
                obstruction: None,
                reason: Some(
                    "no invariant obstruction found; equivalence is not decided by refutation"
                        .into(),
                ),
            },
        }),
    };
    match verdict {
        Ok(v) => {
            if table {
                print_verdict_table(&v);
            } else {
                print_json(&v);
            }
            match v.answer {
                Answer::Yes => EXIT_OK,
                Answer::No => EXIT_NO,
                Answer::Undecided => EXIT_UNDECIDED,
            }
        }
        Err(e) => fail(e),
    }
}

fn print_verdict_table(v: &Verdict) {
    let answer = match v.answer {
        Answer::Yes => "yes",
        Answer::No => "no",
        Answer::Undecided => "undecided",
    };
    println!("answer       {answer}");
    if let Some(o) = &v.obstruction {
        println!("obstruction  {o}");
    }
    if let Some(r) = &v.reason {
        println!("reason       {r}");
    }
    if let Some(w) = &v.witness {
        let kind = match w {
            crate::equivalence::Witness::OrbitMatching { pairs, .. } => {
                format!("orbit matching on {} families", pairs.len())
            }
            crate::equivalence::Witness::Isomorphism { report, .. } => format!(
                "verified isomorphism ({} elements, {} compositions)",
                report.elements_checked, report.composition_checks
            ),
        };
        println!("witness      {kind}");
    }
}

fn cmd_oracle(path: &FsPath, depth: Option<u64>, table: bool) -> i32 {
    let g = match load_graph(path) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let depth = depth.unwrap_or_else(|| default_depth(&g));
    match cross_check(&g, depth) {
        Ok(report) => {
            if table {
                print_oracle_table(&report);
            } else {
                print_json(&report);
            }
            EXIT_OK
        }
        Err(e) => fail(e),
    }
}

fn print_oracle_table(r: &CrossCheckReport) {
    println!("depth          {}", r.depth);
    println!("candidate size {}", r.candidate_size);
    println!("points checked {}", r.entries.len());
    println!("disagreements  {}", r.disagreements.len());
    println!("unknown        {}", r.unknown_count);
}

fn cmd_emit_dot(path: &FsPath) -> i32 {
    let g = match load_graph(path) {
        Ok(g) => g,
        Err(code) => return code,
    };
    match emit_dot(&g) {
        Ok(dot) => {
            print!("{dot}");
            EXIT_OK
        }
        Err(e) => fail(e),
    }
}
