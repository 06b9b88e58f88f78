//! `fwdpairs`: generators, the bi-tree pipeline, evaluation and checkers.
//!
//! Exit status: 0 on success, 1 on malformed input, 2 when a well-formed
//! input violates a precondition or a checked property does not hold.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use forward_pairs::bitree::{balanced_bitree, verify_bitree, BiTree};
use forward_pairs::instances::{
    gen_binary_tree_requests, gen_circuit, gen_prop2, gen_random_connected, gen_random_strong, gen_random_tree,
    MatchingMode, RequestInstance,
};
use forward_pairs::left_dfs::{
    left_maximal_dfs, left_maximal_dfs_weighted, verify_dfs_tree, verify_left_maximal, DfsTree,
};
use forward_pairs::oracles::{brute_force_t, dag_balanced_bitree_max};
use forward_pairs::ordering::{
    count_forward_pairs, count_temporal_pairs, fcpp_approx, forward_dag, schedule_from_ordering, OrderingSummary,
    Schedule, VertexOrdering,
};
use forward_pairs::requests::{
    count_satisfied_requests, forward_cover_bioriented, max_requests_on_tree, verify_forward_cover, RequestMode,
    RequestSet,
};
use forward_pairs::separator::{
    balanced_ico, verify_ico, verify_ico_balanced, weighted_balanced_ico, IcoDecomposition,
};
use forward_pairs::{Digraph, Error};
use serde_json::json;

#[derive(Parser)]
#[command(name = "fwdpairs", version, about = "Balanced bi-trees and forward-connected orderings of digraphs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Digraph file (edge-list format); standard input when omitted.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for random generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Machine-readable JSON report where a command offers one.
    #[arg(long, global = true)]
    json: bool,
    /// Per-vertex weights, one integer per line.
    #[arg(long, global = true)]
    weights: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a digraph.
    Gen(GenArgs),
    /// Left-maximal DFS tree (JSON, or DOT with --dot).
    Dfs {
        #[arg(long, default_value_t = 0)]
        root: usize,
        #[arg(long)]
        dot: bool,
    },
    /// Balanced (I,C,O) decomposition (JSON, or DOT with --dot).
    Ico {
        #[arg(long)]
        dot: bool,
    },
    /// Balanced bi-tree (JSON, or DOT with --dot).
    Bitree {
        #[arg(long)]
        dot: bool,
    },
    /// Ordering with many forward couples: the ordering goes to --output,
    /// the JSON summary to standard output.
    Order(OrderArgs),
    /// Arc schedule from an ordering (computed with `order` when not given).
    Schedule {
        #[arg(long)]
        ordering: Option<PathBuf>,
    },
    /// Count forward couples, temporal couples or satisfied requests.
    Eval(EvalArgs),
    /// Forward cover of a bi-oriented graph, one ordering per line.
    Cover,
    /// Check a witness against the input digraph.
    Verify {
        #[arg(value_enum)]
        kind: VerifyKind,
        /// File holding the object to check.
        #[arg(long)]
        witness: PathBuf,
        /// Also require left-maximality (dfs) or balance (ico).
        #[arg(long)]
        strict: bool,
    },
    /// Exhaustive reference computations on small inputs.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Circuit,
    Random,
    Prop2,
    Bintree,
    Tree,
    Connected,
}

#[derive(Clone, Copy, ValueEnum)]
enum Matching {
    Identity,
    Hypercube,
    Random,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Number of vertices (circuit, random, tree, connected).
    #[arg(long)]
    n: Option<usize>,
    /// Extra arcs (random) or extra edges (connected).
    #[arg(long, default_value_t = 0)]
    extra: usize,
    /// Block parameter of the gap instance.
    #[arg(long)]
    k: Option<usize>,
    /// Height of the binary-tree request instance.
    #[arg(long)]
    h: Option<usize>,
    #[arg(long, value_enum, default_value = "identity")]
    matching: Matching,
    /// Where to write the requests of a binary-tree instance.
    #[arg(long)]
    requests: Option<PathBuf>,
}

#[derive(Args)]
struct OrderArgs {
    /// Run this many independent random trials instead of reading a digraph;
    /// trial i uses seed `--seed + i` and prints one summary line.
    #[arg(long)]
    trials: Option<u64>,
    /// Vertices per trial.
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Extra arcs per trial.
    #[arg(long, default_value_t = 100)]
    extra: usize,
}

#[derive(Args)]
struct EvalArgs {
    /// Ordering file, or `canonical`/`identity` for the identity ordering.
    #[arg(long)]
    ordering: Option<String>,
    /// Schedule file.
    #[arg(long)]
    schedule: Option<PathBuf>,
    /// Requests file; counts those satisfied by the ordering.
    #[arg(long)]
    requests: Option<PathBuf>,
    /// Requests are ordered couples instead of unordered pairs.
    #[arg(long)]
    couple: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Dfs,
    Ico,
    Bitree,
    Cover,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["brute_force_t", "max_requests", "dag_bitree"])))]
struct OracleArgs {
    /// Maximum forward couples over all orderings (n <= 8).
    #[arg(long)]
    brute_force_t: bool,
    /// Maximum satisfiable requests on a binary-tree instance (height <= 4).
    #[arg(long)]
    max_requests: bool,
    /// Largest balanced bi-tree of the forward digraph of --ordering
    /// (or of the input itself when it is acyclic and no ordering is given).
    #[arg(long)]
    dag_bitree: bool,
    /// Requests file for --max-requests; identity matchings when omitted.
    #[arg(long)]
    requests: Option<PathBuf>,
    /// Ordering file for --dag-bitree.
    #[arg(long)]
    ordering: Option<PathBuf>,
}

enum Failure {
    Core(Error),
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn read_file(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_input(g: &Global) -> Outcome<String> {
    match &g.input {
        Some(p) => read_file(p),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("standard input: {e}")))?;
            Ok(s)
        }
    }
}

fn read_digraph(g: &Global) -> Outcome<Digraph> {
    Ok(Digraph::parse(&read_input(g)?)?)
}

fn write_to(path: Option<&Path>, text: &str) -> Outcome {
    let result = match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().write_all(text.as_bytes()),
    };
    result.map_err(|e| Failure::Input(format!("cannot write output: {e}")))
}

fn emit(g: &Global, text: &str) -> Outcome {
    write_to(g.output.as_deref(), text)
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn read_weights(g: &Global, n: usize) -> Outcome<Option<Vec<u64>>> {
    let Some(path) = &g.weights else {
        return Ok(None);
    };
    let text = read_file(path)?;
    let mut weights = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        weights.push(line.parse::<u64>().map_err(|_| {
            Failure::Core(Error::Parse {
                line: i + 1,
                message: format!("not a weight: {line:?}"),
            })
        })?);
    }
    if weights.len() != n {
        return Err(Failure::Input(format!("{} weights given for {n} vertices", weights.len())));
    }
    Ok(Some(weights))
}

fn read_ordering(arg: &str, n: usize) -> Outcome<VertexOrdering> {
    if arg == "canonical" || arg == "identity" {
        return Ok(VertexOrdering::identity(n));
    }
    let ord = VertexOrdering::parse(&read_file(Path::new(arg))?)?;
    if ord.n() != n {
        return Err(Error::InvalidPermutation { n }.into());
    }
    Ok(ord)
}

fn parse_cover(text: &str) -> Outcome<Vec<VertexOrdering>> {
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|l| Ok(VertexOrdering::parse(l)?))
        .collect()
}

fn json_line(v: &serde_json::Value) -> String {
    format!("{v}\n")
}

fn need<T>(value: Option<T>, flag: &str) -> Outcome<T> {
    value.ok_or_else(|| Failure::Input(format!("missing --{flag}")))
}

fn run_gen(g: &Global, a: &GenArgs) -> Outcome {
    let d = match a.family {
        Family::Circuit => gen_circuit(need(a.n, "n")?)?,
        Family::Random => gen_random_strong(need(a.n, "n")?, a.extra, g.seed)?,
        Family::Tree => gen_random_tree(need(a.n, "n")?, g.seed)?,
        Family::Connected => gen_random_connected(need(a.n, "n")?, a.extra, g.seed)?,
        Family::Prop2 => gen_prop2(need(a.k, "k")?)?.digraph,
        Family::Bintree => {
            let mode = match a.matching {
                Matching::Identity => MatchingMode::Identity,
                Matching::Hypercube => MatchingMode::Hypercube,
                Matching::Random => MatchingMode::Random(g.seed),
            };
            let inst = gen_binary_tree_requests(need(a.h, "h")?, mode)?;
            if let Some(p) = &a.requests {
                write_to(Some(p), &inst.requests.to_text())?;
            }
            inst.digraph
        }
    };
    emit(g, &d.to_text())
}

fn run_order(g: &Global, a: &OrderArgs) -> Outcome {
    if let Some(trials) = a.trials {
        let results: Vec<Outcome<String>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..trials)
                .map(|i| {
                    let seed = g.seed.wrapping_add(i);
                    s.spawn(move || -> Outcome<String> {
                        let d = gen_random_strong(a.n, a.extra, seed)?;
                        let res = fcpp_approx(&d)?;
                        let mut v = serde_json::to_value(OrderingSummary::new(d.n(), res.forward_pairs))
                            .expect("summary serializes");
                        v["seed"] = json!(seed);
                        Ok(json_line(&v))
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("trial thread panicked")).collect()
        });
        let mut out = String::new();
        for r in results {
            out.push_str(&r?);
        }
        return write_to(None, &out);
    }
    let d = read_digraph(g)?;
    let res = fcpp_approx(&d)?;
    if let Some(p) = &g.output {
        write_to(Some(p), &res.ordering.to_text())?;
    }
    let summary = serde_json::to_value(OrderingSummary::new(d.n(), res.forward_pairs)).expect("summary serializes");
    write_to(None, &json_line(&summary))
}

fn run_eval(g: &Global, a: &EvalArgs) -> Outcome {
    let d = read_digraph(g)?;
    let n = d.n();
    let mut report = serde_json::Map::new();
    report.insert("n".into(), json!(n));
    let ordering = a.ordering.as_deref().map(|s| read_ordering(s, n)).transpose()?;
    if let Some(ord) = &ordering {
        let pairs = count_forward_pairs(&d, ord)?;
        let summary = serde_json::to_value(OrderingSummary::new(n, pairs)).expect("summary serializes");
        if let serde_json::Value::Object(m) = summary {
            report.extend(m);
        }
    }
    if let Some(p) = &a.schedule {
        let s = Schedule::parse(&d, &read_file(p)?)?;
        report.insert("temporal_pairs".into(), json!(count_temporal_pairs(&d, &s)?));
    }
    if let Some(p) = &a.requests {
        let ord = ordering
            .as_ref()
            .ok_or_else(|| Failure::Input("--requests needs --ordering".into()))?;
        let r = RequestSet::parse(&read_file(p)?)?;
        let mode = if a.couple { RequestMode::Couple } else { RequestMode::Pair };
        report.insert("satisfied".into(), json!(count_satisfied_requests(&d, ord, &r, mode)?));
        report.insert("total".into(), json!(r.len()));
    }
    if report.len() == 1 {
        return Err(Failure::Input("give --ordering and/or --schedule".into()));
    }
    emit(g, &json_line(&serde_json::Value::Object(report)))
}

fn run_verify(g: &Global, kind: VerifyKind, witness: &Path, strict: bool) -> Outcome {
    let d = read_digraph(g)?;
    let text = read_file(witness)?;
    let verdict: Result<(), String> = match kind {
        VerifyKind::Dfs => {
            let t = DfsTree::from_json(&text)?;
            verify_dfs_tree(&d, &t)
                .and_then(|_| if strict { verify_left_maximal(&t) } else { Ok(()) })
                .map_err(|e| e.to_string())
        }
        VerifyKind::Ico => {
            let dec = IcoDecomposition::from_json(&text)?;
            let check = if strict { verify_ico_balanced(&d, &dec) } else { verify_ico(&d, &dec) };
            check.map_err(|e| e.to_string())
        }
        VerifyKind::Bitree => verify_bitree(&d, &BiTree::from_json(&text)?).map_err(|e| e.to_string()),
        VerifyKind::Cover => {
            let cover = parse_cover(&text)?;
            if verify_forward_cover(&d, &cover) {
                Ok(())
            } else {
                Err("some pair is forward in no ordering".into())
            }
        }
    };
    if g.json {
        let v = json!({"valid": verdict.is_ok(), "reason": verdict.as_ref().err()});
        emit(g, &json_line(&v))?;
    } else if verdict.is_ok() {
        emit(g, "valid\n")?;
    }
    verdict.map_err(|e| Failure::Check(format!("invalid: {e}")))
}

fn run_oracle(g: &Global, a: &OracleArgs) -> Outcome {
    let d = read_digraph(g)?;
    let v = if a.brute_force_t {
        let (t, best) = brute_force_t(&d)?;
        json!({"n": d.n(), "t": t, "ordering": best.perm()})
    } else if a.max_requests {
        let requests = match &a.requests {
            Some(p) => RequestSet::parse(&read_file(p)?)?,
            None => {
                let h = (d.n() + 1).trailing_zeros() as usize;
                gen_binary_tree_requests(h.saturating_sub(1).max(1), MatchingMode::Identity)?.requests
            }
        };
        let inst = RequestInstance::from_parts(d, requests)?;
        let opt = max_requests_on_tree(&inst)?;
        let mut v = serde_json::to_value(&opt).expect("optimum serializes");
        v["h"] = json!(inst.h);
        v["total"] = json!(inst.requests.len());
        v["bound"] = json!(1u64 << inst.h);
        v["ordering"] = json!(opt.ordering.perm());
        v
    } else {
        let f = match &a.ordering {
            Some(p) => forward_dag(&d, &read_ordering(&p.to_string_lossy(), d.n())?)?,
            None => d,
        };
        json!({"n": f.n(), "max_balanced_bitree": dag_balanced_bitree_max(&f)?})
    };
    emit(g, &json_line(&v))
}

fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Gen(a) => run_gen(g, a),
        Command::Dfs { root, dot } => {
            let d = read_digraph(g)?;
            let t = match read_weights(g, d.n())? {
                Some(w) => left_maximal_dfs_weighted(&d, *root, &w)?,
                None => left_maximal_dfs(&d, *root)?,
            };
            emit(g, &if *dot { t.to_dot(&d) } else { with_newline(t.to_json()) })
        }
        Command::Ico { dot } => {
            let d = read_digraph(g)?;
            let dec = match read_weights(g, d.n())? {
                Some(w) => weighted_balanced_ico(&d, &w)?,
                None => balanced_ico(&d)?,
            };
            emit(g, &if *dot { dec.to_dot(&d) } else { with_newline(dec.to_json()) })
        }
        Command::Bitree { dot } => {
            let d = read_digraph(g)?;
            let w = read_weights(g, d.n())?;
            let b = balanced_bitree(&d, w.as_deref())?;
            emit(g, &if *dot { b.to_dot(&d) } else { with_newline(b.to_json()) })
        }
        Command::Order(a) => run_order(g, a),
        Command::Schedule { ordering } => {
            let d = read_digraph(g)?;
            let ord = match ordering {
                Some(p) => read_ordering(&p.to_string_lossy(), d.n())?,
                None => fcpp_approx(&d)?.ordering,
            };
            emit(g, &schedule_from_ordering(&d, &ord)?.to_text())
        }
        Command::Eval(a) => run_eval(g, a),
        Command::Cover => {
            let d = read_digraph(g)?;
            let cover = forward_cover_bioriented(&d)?;
            if g.json {
                let v = json!({
                    "n": d.n(),
                    "cover_size": cover.len(),
                    "complete": verify_forward_cover(&d, &cover),
                });
                emit(g, &json_line(&v))
            } else {
                emit(g, &cover.iter().map(VertexOrdering::to_text).collect::<String>())
            }
        }
        Command::Verify { kind, witness, strict } => run_verify(g, *kind, witness, *strict),
        Command::Oracle(a) => run_oracle(g, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_malformed_input() { 1 } else { 2 })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
