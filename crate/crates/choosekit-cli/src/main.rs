//! Command-line front end for deciding and certifying list-coloring
//! choosability: structural classification, exhaustive verification over
//! flat assignments, censuses, per-vertex forcing analysis, and witness
//! production and checking.
//!
//! Exit codes follow a trichotomy so pipelines can branch on findings
//! versus failures: 0 means an affirmative finding or plain success
//! (choosable, coloring found, counts match, witness holds), 1 means a
//! negative finding (not choosable, no coloring, counts differ, witness
//! refuted), and 2 means a usage or input error. Output is deterministic
//! for fixed inputs and settings, including across `--workers` counts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use choosekit::classify::{self, Classification21, CoreForm21};
use choosekit::color::{parse_lists_text, ColorSet, ListAssignment, MultiColoring};
use choosekit::flat::{self, DEFAULT_FLATTEN_DEPTH};
use choosekit::graph::{by_name, parse_graph, Graph};
use choosekit::solve::{find_bfold_coloring, forcing_analysis, path_dp_solve};
use choosekit::witness::{auto_witness, construct_non_2mm, verify_catalogue, WitnessBundle};
use choosekit::Error;

#[derive(Parser)]
#[command(
    name = "choosekit",
    version,
    about = "Decide and certify list-coloring choosability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide (4,2)- or (2,1)-choosability by structure; name the case or
    /// the obstruction.
    Classify(ClassifyArgs),
    /// Search for a b-fold coloring from explicit lists or re-refute a
    /// stored witness.
    Solve(SolveArgs),
    /// Certify or refute (a,b)-choosability by exhaustive search over flat
    /// assignment classes.
    Verify(VerifyArgs),
    /// List one representative per flat assignment class within a pot
    /// bound.
    EnumerateFlat(EnumerateArgs),
    /// Count flat assignment classes by pot size, optionally against
    /// expected counts.
    Census(CensusArgs),
    /// Report which pairs one vertex can receive across all colorings.
    Forcing(ForcingArgs),
    /// Produce a non-choosability witness automatically, or re-check a
    /// stored one.
    Witness(WitnessArgs),
    /// Build the hub-of-squares assignment with no m-fold coloring from
    /// 2m-lists.
    Construct(ConstructArgs),
    /// Re-verify every claim of the built-in catalogue by search.
    CatalogueCheck(CatalogueCheckArgs),
}

/// Where the graph comes from: a file or a named construction.
#[derive(Args)]
struct GraphInput {
    /// Edge-list file: one "u v" line per edge, "vertex u" for isolated
    /// vertices, '#' starts a comment.
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,
    /// Built-in construction, e.g. "cycle(6)", "theta(2,2,4)", "K(2,3)",
    /// "lollipop(4,2)", "glued(theta(2,2,2),cycle(4),0)",
    /// "figure(theta333)".
    #[arg(long, value_name = "SPEC", conflicts_with = "graph")]
    named: Option<String>,
}

struct LoadedGraph {
    graph: Graph,
    /// Vertex names in id order (decimal strings for named constructions).
    names: Vec<String>,
}

impl GraphInput {
    fn load(&self) -> Result<LoadedGraph> {
        match (&self.graph, &self.named) {
            (Some(path), None) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let parsed = parse_graph(&text)
                    .with_context(|| format!("parsing {}", path.display()))?;
                Ok(LoadedGraph {
                    graph: parsed.graph,
                    names: parsed.names,
                })
            }
            (None, Some(spec)) => {
                let graph = by_name(spec)?;
                let names = (0..graph.n()).map(|v| v.to_string()).collect();
                Ok(LoadedGraph { graph, names })
            }
            _ => bail!("exactly one of --graph FILE or --named SPEC is required"),
        }
    }
}

fn load_lists(path: &Path, loaded: &LoadedGraph) -> Result<ListAssignment> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let l = parse_lists_text(&text, loaded.graph.n(), |key| {
        loaded.names.iter().position(|n| n == key)
    })
    .with_context(|| format!("parsing {}", path.display()))?;
    Ok(l)
}

/// Worker count: the flag wins, then CHOOSEKIT_WORKERS, then 1.
fn resolve_workers(flag: Option<usize>) -> Result<usize> {
    let w = match flag {
        Some(w) => w,
        None => match std::env::var("CHOOSEKIT_WORKERS") {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| anyhow!("CHOOSEKIT_WORKERS must be a positive integer, got '{s}'"))?,
            Err(_) => 1,
        },
    };
    if w == 0 {
        bail!("worker count must be at least 1");
    }
    Ok(w)
}

fn pot_bound_or_default(flag: Option<u8>, a: usize) -> Result<u8> {
    match flag {
        Some(p) => Ok(p),
        None => u8::try_from(2 * a).map_err(|_| anyhow!("list size {a} too large for a pot bound")),
    }
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("JSON serialization cannot fail")
    );
}

fn lists_lines(l: &ListAssignment, names: &[String]) -> String {
    let mut out = String::new();
    for v in 0..l.vertex_count() {
        let name = names.get(v).cloned().unwrap_or_else(|| v.to_string());
        let _ = writeln!(out, "  {}: {}", name, l.get(v));
    }
    out
}

fn lists_strings(l: &ListAssignment) -> Vec<String> {
    (0..l.vertex_count()).map(|v| l.get(v).to_string()).collect()
}

fn coloring_lines(phi: &MultiColoring, names: &[String]) -> String {
    let mut out = String::new();
    for (v, s) in phi.sets.iter().enumerate() {
        let name = names.get(v).cloned().unwrap_or_else(|| v.to_string());
        let _ = writeln!(out, "  {}: {}", name, s);
    }
    out
}

const OK: u8 = 0;
const FINDING: u8 = 1;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Classify(args) => run_classify(args),
        Command::Solve(args) => run_solve(args),
        Command::Verify(args) => run_verify(args),
        Command::EnumerateFlat(args) => run_enumerate(args),
        Command::Census(args) => run_census(args),
        Command::Forcing(args) => run_forcing(args),
        Command::Witness(args) => run_witness(args),
        Command::Construct(args) => run_construct(args),
        Command::CatalogueCheck(args) => run_catalogue_check(args),
    }
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    input: GraphInput,
    /// List size; only (a,b) = (4,2) and (2,1) are decidable by structure.
    #[arg(long, default_value_t = 4)]
    a: usize,
    /// Fold.
    #[arg(long, default_value_t = 2)]
    b: usize,
    /// Emit JSON instead of prose.
    #[arg(long)]
    json: bool,
}

fn case_words(case: &classify::CaseMatch) -> String {
    let mut s = format!("case {}", case.tag.numeral());
    match (case.s, case.t) {
        (Some(a), Some(b)) => {
            let _ = write!(s, " (s={a}, t={b})");
        }
        (Some(a), None) => {
            let _ = write!(s, " (s={a})");
        }
        _ => {}
    }
    s
}

fn run_classify(args: ClassifyArgs) -> Result<u8> {
    let loaded = args.input.load()?;
    if loaded.graph.n() == 0 {
        bail!("cannot classify the empty graph");
    }
    match (args.a, args.b) {
        (4, 2) => classify_42_components(&loaded, args.json),
        (2, 1) => classify_21_components(&loaded, args.json),
        (a, b) => bail!("no structural classification for ({a},{b}); use `verify` to search"),
    }
}

fn classify_42_components(loaded: &LoadedGraph, as_json: bool) -> Result<u8> {
    let comps = loaded.graph.components();
    let mut all_choosable = true;
    let mut component_values = Vec::new();
    let mut prose = String::new();
    for comp in &comps {
        let (sub, back) = loaded.graph.induced(comp);
        let result = classify::classify_42(&sub)?;
        let choosable = result.verdict.is_choosable();
        all_choosable &= choosable;
        let names: Vec<String> = back.iter().map(|&v| loaded.names[v].clone()).collect();
        let prefix = if comps.len() > 1 {
            format!("component {{{}}}: ", names.join(", "))
        } else {
            String::new()
        };
        let (witness, witness_note) = if choosable {
            (None, None)
        } else {
            match auto_witness(&sub) {
                Ok(b) => (Some(b), None),
                Err(e) => (None, Some(e.to_string())),
            }
        };
        match &result.verdict {
            classify::Verdict::Choosable { case } => {
                let _ = writeln!(prose, "{prefix}choosable: {}", case_words(case));
            }
            classify::Verdict::NotChoosable { obstruction } => {
                let _ = writeln!(prose, "{prefix}not choosable: {}", obstruction.detail);
                if let Some(b) = &witness {
                    let _ = writeln!(prose, "{}witness assignment (no 2-fold coloring):", prefix);
                    prose.push_str(&lists_lines(&b.assignment, &names));
                } else if let Some(note) = &witness_note {
                    let _ = writeln!(prose, "{prefix}no automatic witness: {note}");
                }
            }
        }
        component_values.push(json!({
            "vertices": back,
            "classification": result,
            "witness": witness,
            "witness_note": witness_note,
        }));
    }
    if as_json {
        print_json(&json!({
            "a": 4,
            "b": 2,
            "choosable": all_choosable,
            "components": component_values,
        }));
    } else {
        print!("{prose}");
    }
    Ok(if all_choosable { OK } else { FINDING })
}

fn classify_21_components(loaded: &LoadedGraph, as_json: bool) -> Result<u8> {
    let comps = loaded.graph.components();
    let mut all_choosable = true;
    let mut component_values = Vec::new();
    let mut prose = String::new();
    for comp in &comps {
        let (sub, back) = loaded.graph.induced(comp);
        let result = classify::classify_21(&sub)?;
        let names: Vec<String> = back.iter().map(|&v| loaded.names[v].clone()).collect();
        let prefix = if comps.len() > 1 {
            format!("component {{{}}}: ", names.join(", "))
        } else {
            String::new()
        };
        match &result {
            Classification21::Choosable { core } => {
                let words = match core {
                    CoreForm21::SingleVertex => "core is a single vertex".to_string(),
                    CoreForm21::EvenCycle { s } => format!("core is the even cycle C{}", 2 * s),
                    CoreForm21::ThetaTwoTwoEven { s } => {
                        format!("core is theta(2,2,{})", 2 * s)
                    }
                };
                let _ = writeln!(prose, "{prefix}choosable: {words}");
            }
            Classification21::NotChoosable => {
                all_choosable = false;
                let _ = writeln!(prose, "{prefix}not choosable from 2-lists");
            }
        }
        component_values.push(json!({
            "vertices": back,
            "classification": result,
        }));
    }
    if as_json {
        print_json(&json!({
            "a": 2,
            "b": 1,
            "choosable": all_choosable,
            "components": component_values,
        }));
    } else {
        print!("{prose}");
    }
    Ok(if all_choosable { OK } else { FINDING })
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: GraphInput,
    /// List file: one "vertex: c1 c2 ..." line per vertex.
    #[arg(long, value_name = "FILE")]
    lists: Option<PathBuf>,
    /// Stored witness JSON (a {graph, assignment, ...} object, or any
    /// object with such a "witness" field); solving it re-checks that no
    /// coloring exists.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["graph", "named", "lists"])]
    witness: Option<PathBuf>,
    /// Fold; defaults to the witness's fold or 2.
    #[arg(long)]
    b: Option<usize>,
    /// Emit JSON instead of prose.
    #[arg(long)]
    json: bool,
}

/// The part of a witness file `solve` and `witness --check` consume.
#[derive(Deserialize)]
struct StoredWitness {
    graph: Graph,
    assignment: ListAssignment,
    #[serde(default)]
    provenance: Vec<String>,
    #[serde(default)]
    fold: Option<usize>,
}

fn read_witness_file(path: &Path) -> Result<StoredWitness> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let inner = match value.get("witness") {
        Some(w) if !w.is_null() => w.clone(),
        _ => value,
    };
    let stored: StoredWitness = serde_json::from_value(inner)
        .with_context(|| format!("{} does not hold a witness (graph + assignment)", path.display()))?;
    if stored.assignment.vertex_count() != stored.graph.n() {
        bail!(
            "witness assignment covers {} vertices but its graph has {}",
            stored.assignment.vertex_count(),
            stored.graph.n()
        );
    }
    Ok(stored)
}

fn run_solve(args: SolveArgs) -> Result<u8> {
    let (graph, lists, names, fold) = if let Some(path) = &args.witness {
        let stored = read_witness_file(path)?;
        let names: Vec<String> = (0..stored.graph.n()).map(|v| v.to_string()).collect();
        let fold = args.b.or(stored.fold).unwrap_or(2);
        (stored.graph, stored.assignment, names, fold)
    } else {
        let loaded = args.input.load()?;
        let path = args
            .lists
            .as_ref()
            .ok_or_else(|| anyhow!("--lists FILE is required (or use --witness FILE)"))?;
        let lists = load_lists(path, &loaded)?;
        (loaded.graph, lists, loaded.names, args.b.unwrap_or(2))
    };
    let found = find_bfold_coloring(&graph, &lists, fold, None)?;
    if args.json {
        print_json(&json!({
            "fold": fold,
            "found": found.is_some(),
            "coloring": found,
        }));
    } else {
        match &found {
            Some(phi) => {
                println!("found a {fold}-fold coloring:");
                print!("{}", coloring_lines(phi, &names));
            }
            None => println!("no {fold}-fold coloring exists"),
        }
    }
    Ok(if found.is_some() { OK } else { FINDING })
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: GraphInput,
    /// List size.
    #[arg(long, default_value_t = 4)]
    a: usize,
    /// Fold.
    #[arg(long, default_value_t = 2)]
    b: usize,
    /// Largest pot to search (default 2a; flat assignments of the graphs of
    /// interest never need more).
    #[arg(long, value_name = "P")]
    pot_bound: Option<u8>,
    /// Worker threads (default: CHOOSEKIT_WORKERS or 1). The verdict does
    /// not depend on this.
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// Emit JSON instead of prose.
    #[arg(long)]
    json: bool,
}

fn run_verify(args: VerifyArgs) -> Result<u8> {
    let loaded = args.input.load()?;
    let pot = pot_bound_or_default(args.pot_bound, args.a)?;
    let workers = resolve_workers(args.workers)?;
    let cert = flat::verify_choosable_workers(
        &loaded.graph,
        args.a,
        args.b,
        pot,
        workers,
        DEFAULT_FLATTEN_DEPTH,
    )?;
    match &cert.verdict {
        flat::Verdict::CertifiedChoosable => {
            if args.json {
                print_json(&json!({ "certificate": cert, "witness": null }));
            } else {
                println!(
                    "certified ({},{})-choosable for pots up to {}: all {} flat classes admit colorings",
                    cert.a, cert.b, cert.pot_bound, cert.visited
                );
            }
            Ok(OK)
        }
        flat::Verdict::Counterexample(l) => {
            let witness = json!({
                "graph": loaded.graph,
                "assignment": l,
                "fold": cert.b,
                "provenance": [format!(
                    "flat counterexample found by exhaustive enumeration with pot bound {}",
                    cert.pot_bound
                )],
            });
            if args.json {
                print_json(&json!({ "certificate": cert, "witness": witness }));
            } else {
                println!(
                    "not ({},{})-choosable: counterexample assignment",
                    cert.a, cert.b
                );
                print!("{}", lists_lines(l, &loaded.names));
            }
            Ok(FINDING)
        }
    }
}

// ---------------------------------------------------------------------------
// enumerate-flat and census
// ---------------------------------------------------------------------------

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    input: GraphInput,
    /// List size.
    #[arg(long, default_value_t = 4)]
    a: usize,
    /// Largest pot to enumerate (default 2a).
    #[arg(long, value_name = "P")]
    pot_bound: Option<u8>,
    /// Worker threads (default: CHOOSEKIT_WORKERS or 1).
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// Emit JSON instead of prose.
    #[arg(long)]
    json: bool,
}

fn run_enumerate(args: EnumerateArgs) -> Result<u8> {
    let loaded = args.input.load()?;
    let pot = pot_bound_or_default(args.pot_bound, args.a)?;
    let workers = resolve_workers(args.workers)?;
    let census =
        flat::enumerate_flat_workers(&loaded.graph, args.a, pot, workers, DEFAULT_FLATTEN_DEPTH)?;
    if args.json {
        let reps: Vec<serde_json::Value> = census
            .representatives
            .iter()
            .map(|l| {
                json!({
                    "pot": l.pot().len(),
                    "lists": lists_strings(l),
                })
            })
            .collect();
        print_json(&json!({
            "a": census.a,
            "pot_bound": census.pot_bound,
            "counts": census.counts,
            "total": census.class_count(),
            "representatives": reps,
        }));
    } else {
        println!(
            "flat {}-assignment classes with pot at most {}:",
            census.a, census.pot_bound
        );
        for (pot, count) in &census.counts {
            println!("  pot {pot}: {count}");
        }
        println!("  total: {}", census.class_count());
        println!("representatives (one per class):");
        for rep in &census.representatives {
            println!(
                "  pot {}: {}",
                rep.pot().len(),
                lists_strings(rep).join(" ")
            );
        }
    }
    Ok(OK)
}

#[derive(Args)]
struct CensusArgs {
    #[command(flatten)]
    input: GraphInput,
    /// List size.
    #[arg(long, default_value_t = 4)]
    a: usize,
    /// Largest pot to enumerate (default 2a).
    #[arg(long, value_name = "P")]
    pot_bound: Option<u8>,
    /// Worker threads (default: CHOOSEKIT_WORKERS or 1).
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// Expected counts "pot:count,pot:count,..."; exits 1 when the census
    /// differs.
    #[arg(long, value_name = "COUNTS")]
    expect: Option<String>,
    /// Emit JSON instead of prose.
    #[arg(long)]
    json: bool,
}

fn parse_expected(s: &str) -> Result<std::collections::BTreeMap<usize, u64>> {
    let mut out = std::collections::BTreeMap::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (pot, count) = part
            .split_once(':')
            .ok_or_else(|| anyhow!("expected 'pot:count', got '{part}'"))?;
        let pot: usize = pot
            .trim()
            .parse()
            .map_err(|_| anyhow!("bad pot size '{pot}'"))?;
        let count: u64 = count
            .trim()
            .parse()
            .map_err(|_| anyhow!("bad count '{count}'"))?;
        if out.insert(pot, count).is_some() {
            bail!("pot size {pot} listed twice in --expect");
        }
    }
    if out.is_empty() {
        bail!("--expect lists no counts");
    }
    Ok(out)
}

fn run_census(args: CensusArgs) -> Result<u8> {
    let loaded = args.input.load()?;
    let pot = pot_bound_or_default(args.pot_bound, args.a)?;
    let workers = resolve_workers(args.workers)?;
    let expected = args.expect.as_deref().map(parse_expected).transpose()?;
    let census =
        flat::enumerate_flat_workers(&loaded.graph, args.a, pot, workers, DEFAULT_FLATTEN_DEPTH)?;
    let matches = expected.as_ref().map(|e| *e == census.counts);
    if args.json {
        print_json(&json!({
            "a": census.a,
            "pot_bound": census.pot_bound,
            "counts": census.counts,
            "total": census.class_count(),
            "expected": expected,
            "matches": matches,
        }));
    } else {
        println!(
            "flat {}-assignment classes with pot at most {}:",
            census.a, census.pot_bound
        );
        for (pot, count) in &census.counts {
            println!("  pot {pot}: {count}");
        }
        println!("  total: {}", census.class_count());
        match (&expected, matches) {
            (Some(_), Some(true)) => println!("matches the expected counts"),
            (Some(e), Some(false)) => {
                let want: Vec<String> = e.iter().map(|(p, c)| format!("{p}:{c}")).collect();
                println!("differs from the expected counts {}", want.join(","));
            }
            _ => {}
        }
    }
    Ok(match matches {
        Some(false) => FINDING,
        _ => OK,
    })
}

// ---------------------------------------------------------------------------
// forcing
// ---------------------------------------------------------------------------

#[derive(Args)]
struct ForcingArgs {
    #[command(flatten)]
    input: GraphInput,
    /// List file: one "vertex: c1 c2 ..." line per vertex.
    #[arg(long, value_name = "FILE")]
    lists: PathBuf,
    /// The vertex to analyze (a name from the graph file, or an id).
    #[arg(long, value_name = "V")]
    vertex: String,
    /// Fold.
    #[arg(long, default_value_t = 2)]
    b: usize,
    /// Emit JSON instead of prose.
    #[arg(long)]
    json: bool,
}

fn run_forcing(args: ForcingArgs) -> Result<u8> {
    let loaded = args.input.load()?;
    let lists = load_lists(&args.lists, &loaded)?;
    let v = loaded
        .names
        .iter()
        .position(|n| *n == args.vertex)
        .ok_or_else(|| anyhow!("unknown vertex '{}'", args.vertex))?;
    let report = forcing_analysis(&loaded.graph, &lists, v, args.b)?;
    let allowed: Vec<String> = report.allowed.iter().map(|s| s.to_string()).collect();
    if args.json {
        print_json(&json!({
            "vertex": args.vertex,
            "fold": args.b,
            "list": lists.get(v).to_string(),
            "allowed": allowed,
            "shape": report.shape,
        }));
    } else if report.allowed.is_empty() {
        println!(
            "vertex {} allows nothing: the assignment has no {}-fold coloring at all",
            args.vertex, args.b
        );
    } else {
        println!(
            "vertex {} (list {}) allows {} of {} possible sets: {} (shape {})",
            args.vertex,
            lists.get(v),
            report.allowed.len(),
            lists.get(v).subsets(args.b).len(),
            allowed.join(" "),
            report.shape
        );
    }
    Ok(if report.allowed.is_empty() { FINDING } else { OK })
}

// ---------------------------------------------------------------------------
// witness
// ---------------------------------------------------------------------------

#[derive(Args)]
struct WitnessArgs {
    #[command(flatten)]
    input: GraphInput,
    /// Derive a witness from the structural obstruction: catalogue
    /// assignments are lifted through the found reduction; odd cycles get
    /// constant lists.
    #[arg(long)]
    auto: bool,
    /// Re-check a stored witness file by exhaustive search.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["graph", "named", "auto"])]
    check: Option<PathBuf>,
    /// Emit JSON instead of prose.
    #[arg(long)]
    json: bool,
}

fn run_witness(args: WitnessArgs) -> Result<u8> {
    if let Some(path) = &args.check {
        return run_witness_check(path, args.json);
    }
    if !args.auto {
        bail!("choose --auto (derive a witness) or --check FILE (re-verify one)");
    }
    let loaded = args.input.load()?;
    if loaded.graph.n() == 0 {
        bail!("cannot analyze the empty graph");
    }
    // A disconnected graph is refuted by refuting any one component; the
    // witness extends to the whole graph with constant lists elsewhere.
    let comps = loaded.graph.components();
    let mut bad: Option<(Vec<usize>, Graph)> = None;
    for comp in &comps {
        let (sub, back) = loaded.graph.induced(comp);
        if !classify::classify_42(&sub)?.verdict.is_choosable() {
            bad = Some((back, sub));
            break;
        }
    }
    let Some((back, sub)) = bad else {
        if args.json {
            print_json(&json!({ "choosable": true, "witness": null }));
        } else {
            println!("graph is (4,2)-choosable; no witness exists");
        }
        return Ok(OK);
    };
    let bundle = auto_witness(&sub)?;
    let bundle = if comps.len() == 1 {
        bundle
    } else {
        let mut lists = vec![ColorSet::first(4); loaded.graph.n()];
        for (i, &orig) in back.iter().enumerate() {
            lists[orig] = bundle.assignment.get(i);
        }
        let mut provenance = bundle.provenance;
        provenance.push(format!(
            "witness found on the component {{{}}}; other vertices filled with 1234",
            back.iter()
                .map(|v| loaded.names[*v].clone())
                .collect::<Vec<_>>()
                .join(", ")
        ));
        WitnessBundle::sealed(
            loaded.graph.clone(),
            ListAssignment::new(lists, 4)?,
            provenance,
        )?
    };
    if args.json {
        print_json(&serde_json::to_value(&bundle)?);
    } else {
        println!("not (4,2)-choosable; witness assignment (no 2-fold coloring):");
        print!("{}", lists_lines(&bundle.assignment, &loaded.names));
        println!("provenance:");
        for line in &bundle.provenance {
            println!("  - {line}");
        }
    }
    Ok(FINDING)
}

fn run_witness_check(path: &Path, as_json: bool) -> Result<u8> {
    let stored = read_witness_file(path)?;
    match WitnessBundle::sealed(stored.graph, stored.assignment, stored.provenance) {
        Ok(_) => {
            if as_json {
                print_json(&json!({ "holds": true }));
            } else {
                println!("witness holds: no 2-fold coloring exists");
            }
            Ok(OK)
        }
        Err(Error::BadWitness(msg)) => {
            if as_json {
                print_json(&json!({ "holds": false, "reason": msg }));
            } else {
                println!("witness refuted: {msg}");
            }
            Ok(FINDING)
        }
        Err(e) => Err(e.into()),
    }
}

// ---------------------------------------------------------------------------
// construct
// ---------------------------------------------------------------------------

#[derive(Args)]
struct ConstructArgs {
    /// Fold m (1 through 4); lists have 2m colors.
    #[arg(long, value_name = "M")]
    m: usize,
    /// Re-check by search that no m-fold coloring exists before printing.
    #[arg(long)]
    verify: bool,
    /// Emit JSON instead of prose.
    #[arg(long)]
    json: bool,
}

fn run_construct(args: ConstructArgs) -> Result<u8> {
    let (g, l) = construct_non_2mm(args.m)?;
    let verified = if args.verify {
        // The hub is the only vertex of degree above two, so the path
        // dynamic program handles the larger folds directly.
        let found = if args.m == 1 {
            find_bfold_coloring(&g, &l, 1, None)?
        } else {
            path_dp_solve(&g, &l, args.m)?
        };
        if let Some(phi) = found {
            let names: Vec<String> = (0..g.n()).map(|v| v.to_string()).collect();
            println!(
                "construction admits an m-fold coloring; this is a bug:\n{}",
                coloring_lines(&phi, &names)
            );
            return Ok(FINDING);
        }
        Some(true)
    } else {
        None
    };
    if args.json {
        print_json(&json!({
            "m": args.m,
            "graph": g,
            "assignment": l,
            "fold": args.m,
            "verified": verified,
        }));
    } else {
        println!(
            "hub-of-squares construction for m = {}: {} vertices, {} edges, lists of size {}",
            args.m,
            g.n(),
            g.edge_count(),
            l.list_size()
        );
        println!(
            "edges: {}",
            g.edges()
                .iter()
                .map(|(u, v)| format!("{u}-{v}"))
                .collect::<Vec<_>>()
                .join(" ")
        );
        println!("lists:");
        let names: Vec<String> = (0..g.n()).map(|v| v.to_string()).collect();
        print!("{}", lists_lines(&l, &names));
        if verified == Some(true) {
            println!("checked: no {}-fold coloring exists", args.m);
        }
    }
    Ok(OK)
}

// ---------------------------------------------------------------------------
// catalogue-check
// ---------------------------------------------------------------------------

#[derive(Args)]
struct CatalogueCheckArgs {
    /// Emit JSON instead of prose.
    #[arg(long)]
    json: bool,
}

fn run_catalogue_check(args: CatalogueCheckArgs) -> Result<u8> {
    let report = verify_catalogue()?;
    if args.json {
        print_json(&json!({
            "all_ok": report.all_ok(),
            "outcomes": report.outcomes,
        }));
    } else {
        for o in &report.outcomes {
            if o.ok {
                println!("ok   {}: {}", o.entry, o.check);
            } else {
                println!("FAIL {}: {} — {}", o.entry, o.check, o.detail);
            }
        }
        let failures = report.failures().len();
        if failures == 0 {
            println!("all {} checks passed", report.outcomes.len());
        } else {
            println!(
                "{} of {} checks failed",
                failures,
                report.outcomes.len()
            );
        }
    }
    Ok(if report.all_ok() { OK } else { FINDING })
}
