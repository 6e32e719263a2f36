//! Command-line front end for the `mixint` library.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use mixint::cnf::{parse_dimacs, Cnf};
use mixint::exact::{exact_chromatic_with, ExactError, ExactOptions, ExactResult, DEFAULT_NODE_BUDGET};
use mixint::gen::{random_cnf, random_matching, InstanceGenerator, Model};
use mixint::greedy::{greedy_color, greedy_color_fast, sort_by_coloring, staircase_certificate, two_approx_bidirectional};
use mixint::io;
use mixint::recognition::{recognize, verify_representation, Recognition, RecognitionError};
use mixint::reduction::{build_proper_reduction, build_reduction, witness_coloring};
use mixint::routing::{render_svg, route_tracks};
use mixint::{validate_coloring, Rational};

/// Environment variable read by `exact` when `--budget` is absent.
pub const BUDGET_VAR: &str = "MIXINT_EXACT_BUDGET";

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "mixint", version, about = "Directional and mixed interval graph tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Greedy optimal coloring of a directional interval set.
    Color(ColorArgs),
    /// Two-approximate coloring of a bidirectional interval set.
    ColorBidi(InputArg),
    /// Exact chromatic number of a mixed graph.
    Exact(ExactArgs),
    /// Decide whether a mixed graph is a directional interval graph.
    Recognize(RecognizeArgs),
    /// Build the hardness instance of a CNF formula.
    Reduce(ReduceArgs),
    /// Assign tracks to the edges between two layers.
    Route(RouteArgs),
    /// Check a coloring or an interval representation against a graph.
    Verify(VerifyArgs),
    /// Generate a seeded random instance.
    Gen(GenArgs),
    /// Time naive against fast greedy coloring.
    Bench(BenchArgs),
    /// Sort numbers by coloring nested intervals.
    SortDemo(SortArgs),
}

#[derive(Args, Debug)]
struct InputArg {
    /// Input file; standard input when absent.
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ColorArgs {
    input: Option<PathBuf>,
    #[arg(long, conflicts_with = "naive")]
    fast: bool,
    #[arg(long)]
    naive: bool,
    /// Attach a staircase certificate of optimality.
    #[arg(long)]
    certificate: bool,
}

#[derive(Args, Debug)]
struct ExactArgs {
    input: Option<PathBuf>,
    #[arg(long)]
    max_colors: Option<u32>,
    /// Search node budget; falls back to MIXINT_EXACT_BUDGET.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args, Debug)]
struct RecognizeArgs {
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the rejecting stage and its witness.
    #[arg(long)]
    explain: bool,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    dimacs: Option<PathBuf>,
    #[arg(long)]
    proper: bool,
    /// Truth assignment as a 0/1 string (`101`) or signed literals (`1,-2,3`).
    #[arg(long)]
    witness: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RouteArgs {
    input: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Graph, reduction instance or interval set.
    input: PathBuf,
    #[arg(long, conflicts_with = "intervals", required_unless_present = "intervals")]
    coloring: Option<PathBuf>,
    #[arg(long)]
    intervals: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// uniform, nested-bias or chain-bias.
    #[arg(long, default_value = "uniform")]
    model: Model,
    #[arg(long)]
    range: Option<i64>,
    /// Tag intervals with random directions.
    #[arg(long)]
    directions: bool,
    /// What to generate: intervals, graph, matching or cnf.
    #[arg(long, default_value = "intervals")]
    kind: String,
    /// Clause count for `--kind cnf`.
    #[arg(long, default_value_t = 3)]
    m: usize,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![10_000usize, 100_000, 1_000_000])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest size on which the quadratic greedy is timed.
    #[arg(long, default_value_t = 20_000)]
    naive_cap: usize,
}

#[derive(Args, Debug)]
struct SortArgs {
    /// Values as integers or `p/q`; standard input when absent.
    #[arg(allow_hyphen_values = true)]
    values: Vec<String>,
}

struct Ctx<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

type Outcome = Result<i32, String>;

impl Ctx<'_> {
    fn read(&mut self, path: Option<&Path>) -> Result<String, String> {
        match path {
            Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display())),
            None => {
                let mut s = String::new();
                self.stdin.read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
                Ok(s)
            }
        }
    }

    fn emit(&mut self, text: &str) -> Result<(), String> {
        writeln!(self.stdout, "{text}").map_err(|e| e.to_string())
    }

    fn emit_to(&mut self, path: Option<&Path>, text: &str) -> Result<(), String> {
        match path {
            Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| format!("{}: {e}", p.display())),
            None => self.emit(text),
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let mut ctx = Ctx { stdin, stdout, stderr };
    let result = match cli.command {
        Command::Color(a) => color(&mut ctx, a),
        Command::ColorBidi(a) => color_bidi(&mut ctx, a),
        Command::Exact(a) => exact(&mut ctx, a),
        Command::Recognize(a) => recognize_cmd(&mut ctx, a),
        Command::Reduce(a) => reduce(&mut ctx, a),
        Command::Route(a) => route(&mut ctx, a),
        Command::Verify(a) => verify(&mut ctx, a),
        Command::Gen(a) => gen(&mut ctx, a),
        Command::Bench(a) => bench(&mut ctx, a),
        Command::SortDemo(a) => sort_demo(&mut ctx, a),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(ctx.stderr, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn color(ctx: &mut Ctx, a: ColorArgs) -> Outcome {
    let ivs = io::parse_intervals(&ctx.read(a.input.as_deref())?).map_err(|e| e.to_string())?;
    let coloring = if a.naive { greedy_color(&ivs) } else { greedy_color_fast(&ivs) }.map_err(|e| e.to_string())?;
    let mut doc: Value = serde_json::from_str(&io::coloring_to_json(&coloring)).expect("valid JSON");
    if a.certificate {
        let cert = staircase_certificate(&ivs, &coloring).map_err(|e| e.to_string())?;
        doc["certificate"] = serde_json::to_value(&cert).expect("serializable");
    }
    ctx.emit(&pretty(&doc))?;
    Ok(EXIT_OK)
}

fn color_bidi(ctx: &mut Ctx, a: InputArg) -> Outcome {
    let ivs = io::parse_intervals(&ctx.read(a.input.as_deref())?).map_err(|e| e.to_string())?;
    let coloring = two_approx_bidirectional(&ivs).map_err(|e| e.to_string())?;
    ctx.emit(&io::coloring_to_json(&coloring))?;
    Ok(EXIT_OK)
}

fn exact(ctx: &mut Ctx, a: ExactArgs) -> Outcome {
    let g = io::load_graph(&ctx.read(a.input.as_deref())?).map_err(|e| e.to_string())?;
    let budget = match a.budget {
        Some(b) => b,
        None => match std::env::var(BUDGET_VAR) {
            Ok(s) => s.trim().parse().map_err(|_| format!("{BUDGET_VAR}: not a count: `{s}`"))?,
            Err(_) => DEFAULT_NODE_BUDGET,
        },
    };
    let max_colors = a.max_colors.unwrap_or(g.vertex_count() as u32);
    match exact_chromatic_with(&g, ExactOptions { max_colors, node_budget: budget }) {
        Ok(ExactResult::Colorable { chromatic_number, witness }) => {
            let mut doc: Value = serde_json::from_str(&io::coloring_to_json(&witness)).expect("valid JSON");
            doc["chromatic_number"] = json!(chromatic_number);
            ctx.emit(&pretty(&doc))?;
            Ok(EXIT_OK)
        }
        Ok(ExactResult::Infeasible) => {
            ctx.emit(&pretty(&json!({ "infeasible": true, "max_colors": max_colors })))?;
            Ok(EXIT_REJECTED)
        }
        Err(e @ ExactError::BudgetExceeded(_)) => {
            let _ = writeln!(ctx.stderr, "undecided: {e}");
            Ok(EXIT_REJECTED)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn explain(e: &RecognitionError) -> String {
    let witness = match e {
        RecognitionError::QNodeEdge { u, v } => format!("pair {u} {v}"),
        RecognitionError::PNodeTwoFirst { first, second } | RecognitionError::PNodeTwoLast { first, second } => {
            format!("arcs {}->{} and {}->{}", first.0, first.1, second.0, second.1)
        }
        RecognitionError::PNodeFirstAndLast { into, out_of } => {
            format!("arcs {}->{} and {}->{}", into.0, into.1, out_of.0, out_of.1)
        }
        RecognitionError::NotTwoDimensional(chain) => {
            let steps: Vec<String> = chain.iter().map(|(a, b)| format!("({a},{b})")).collect();
            format!("forcing chain {}", steps.join(" "))
        }
        RecognitionError::NotPoset(v) | RecognitionError::BlockMismatch(v) => format!("vertex {v}"),
        _ => "none".to_string(),
    };
    format!("stage: {}\nreason: {e}\nwitness: {witness}", e.stage())
}

fn recognize_cmd(ctx: &mut Ctx, a: RecognizeArgs) -> Outcome {
    let g = io::load_graph(&ctx.read(a.input.as_deref())?).map_err(|e| e.to_string())?;
    match recognize(&g) {
        Recognition::Accepted(ivs) => {
            ctx.emit_to(a.out.as_deref(), &io::intervals_to_json(&ivs))?;
            if a.out.is_some() {
                ctx.emit(&pretty(&json!({ "accepted": true })))?;
            }
            Ok(EXIT_OK)
        }
        Recognition::Rejected(e) => {
            if a.explain {
                ctx.emit(&explain(&e))?;
            } else {
                ctx.emit(&pretty(&json!({ "accepted": false, "stage": e.stage(), "reason": e.to_string() })))?;
            }
            Ok(EXIT_REJECTED)
        }
    }
}

/// Parses `101`/`TFT` strings or signed literal lists such as `1,-2,3`.
pub fn parse_assignment(s: &str, cnf: &Cnf) -> Result<Vec<bool>, String> {
    let s = s.trim();
    if s.len() == cnf.num_vars && s.chars().all(|c| "01TFtf".contains(c)) {
        return Ok(s.chars().map(|c| matches!(c, '1' | 'T' | 't')).collect());
    }
    let mut out = vec![false; cnf.num_vars];
    let mut seen = vec![false; cnf.num_vars];
    for tok in s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let lit: i64 = tok.parse().map_err(|_| format!("bad literal `{tok}`"))?;
        let var = lit.unsigned_abs() as usize;
        if lit == 0 || var > cnf.num_vars {
            return Err(format!("literal {lit} out of range"));
        }
        out[var - 1] = lit > 0;
        seen[var - 1] = true;
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(format!("assignment misses variable {}", v + 1));
    }
    Ok(out)
}

fn reduce(ctx: &mut Ctx, a: ReduceArgs) -> Outcome {
    let cnf = parse_dimacs(&ctx.read(a.dimacs.as_deref())?).map_err(|e| e.to_string())?;
    let inst = if a.proper { build_proper_reduction(&cnf) } else { build_reduction(&cnf) }.map_err(|e| e.to_string())?;
    let mut doc: Value = serde_json::from_str(&io::instance_to_json(&inst)).expect("valid JSON");
    if let Some(w) = &a.witness {
        let assignment = parse_assignment(w, &cnf)?;
        let c = witness_coloring(&inst, &assignment).map_err(|e| e.to_string())?;
        doc["witness"] = serde_json::from_str(&io::coloring_to_json(&c)).expect("valid JSON");
    }
    ctx.emit_to(a.out.as_deref(), &pretty(&doc))?;
    Ok(EXIT_OK)
}

fn route(ctx: &mut Ctx, a: RouteArgs) -> Outcome {
    let m = io::parse_layers(&ctx.read(a.input.as_deref())?).map_err(|e| e.to_string())?;
    let t = route_tracks(&m).map_err(|e| e.to_string())?;
    if let Some(p) = &a.svg {
        std::fs::write(p, render_svg(&m, &t)).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    ctx.emit(&serde_json::to_string_pretty(&t).expect("serializable"))?;
    Ok(EXIT_OK)
}

fn verify(ctx: &mut Ctx, a: VerifyArgs) -> Outcome {
    let g = io::load_graph(&ctx.read(Some(&a.input))?).map_err(|e| e.to_string())?;
    if let Some(p) = &a.coloring {
        let c = io::parse_coloring(&ctx.read(Some(p))?).map_err(|e| e.to_string())?;
        let report = validate_coloring(&g, &c).map_err(|e| e.to_string())?;
        let doc = json!({ "proper": report.proper, "num_colors": c.num_colors(), "violations": report.violations });
        ctx.emit(&pretty(&doc))?;
        return Ok(if report.proper { EXIT_OK } else { EXIT_REJECTED });
    }
    let p = a.intervals.expect("clap enforces one of the two");
    let ivs = io::parse_intervals(&ctx.read(Some(&p))?).map_err(|e| e.to_string())?;
    let ok = verify_representation(&g, &ivs);
    ctx.emit(&pretty(&json!({ "represents": ok })))?;
    Ok(if ok { EXIT_OK } else { EXIT_REJECTED })
}

fn gen(ctx: &mut Ctx, a: GenArgs) -> Outcome {
    let text = match a.kind.as_str() {
        "intervals" | "graph" => {
            let mut g = InstanceGenerator::new(a.seed, a.n).model(a.model).directions(a.directions);
            if let Some(r) = a.range {
                g = g.range(r);
            }
            let ivs = g.intervals();
            if a.kind == "graph" {
                let graph = io::load_graph(&io::intervals_to_json(&ivs)).map_err(|e| e.to_string())?;
                io::graph_to_json(&graph)
            } else {
                io::intervals_to_json(&ivs)
            }
        }
        "matching" => io::layers_to_json(&random_matching(a.n, a.seed)),
        "cnf" => random_cnf(a.n, a.m, 3, a.seed).to_dimacs().trim_end().to_string(),
        other => return Err(format!("unknown kind `{other}`")),
    };
    ctx.emit(&text)?;
    Ok(EXIT_OK)
}

fn millis(f: impl FnOnce()) -> f64 {
    let t = Instant::now();
    f();
    t.elapsed().as_secs_f64() * 1e3
}

fn bench(ctx: &mut Ctx, a: BenchArgs) -> Outcome {
    if a.sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err("sizes must be ascending".into());
    }
    ctx.emit("n,naive_ms,fast_ms")?;
    for &n in &a.sizes {
        let ivs = InstanceGenerator::new(a.seed, n).intervals();
        let naive = if n <= a.naive_cap {
            format!("{:.3}", millis(|| drop(greedy_color(&ivs).expect("valid intervals"))))
        } else {
            String::new()
        };
        let fast = millis(|| drop(greedy_color_fast(&ivs).expect("valid intervals")));
        ctx.emit(&format!("{n},{naive},{fast:.3}"))?;
    }
    Ok(EXIT_OK)
}

fn sort_demo(ctx: &mut Ctx, a: SortArgs) -> Outcome {
    let tokens: Vec<String> = if a.values.is_empty() {
        ctx.read(None)?.split_whitespace().map(str::to_string).collect()
    } else {
        a.values
    };
    let values: Vec<Rational> =
        tokens.iter().map(|t| t.parse::<Rational>().map_err(|e| format!("`{t}`: {e}"))).collect::<Result<_, _>>()?;
    let ranks = sort_by_coloring(&values);
    let mut sorted = values.clone();
    for (v, &r) in values.iter().zip(&ranks) {
        sorted[r as usize - 1] = *v;
    }
    let doc = json!({
        "ranks": ranks,
        "sorted": sorted.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    });
    ctx.emit(&pretty(&doc))?;
    Ok(EXIT_OK)
}
