use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use graphsat::catalog::{
    self, complete_uniform, regenerate_table, table_fixture, triangulation, Table,
    LONG_RUNNING_TRIANGULATIONS, TRIANGULATIONS,
};
use graphsat::enumerate::{
    count, generate, run_pipeline, sensitivity, verify_known_unsat, GenerationFilter,
};
use graphsat::reduce::{reduce_fixpoint, reduce_fixpoint_partial};
use graphsat::rewrite::{drop_leaf, local_rewrite};
use graphsat::sat::{gamma, gamma_cover, SatCache};
use graphsat::{canonical_form, Error, MHGraph, SatConfig, SatStatus, Strategy};

/// Exit status: a verdict was reached.
const DECIDED: u8 = 0;
/// Exit status: bad input or arguments.
const USAGE: u8 = 1;
/// Exit status: the computation was refused or timed out.
const REFUSED: u8 = 2;
/// Exit status: a check ran to completion and found a discrepancy.
const MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(name = "graphsat", version, about = "Total satisfiability of looped multi-hypergraphs")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Decision procedure.
    #[arg(long, value_enum, global = true)]
    method: Option<Method>,
    /// Give up after this many seconds.
    #[arg(long, global = true)]
    timeout: Option<f64>,
    /// Verdict cache file, created if missing.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Allow computations known to take hours.
    #[arg(long, global = true)]
    long_running: bool,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Print an unsatisfiable CNF when the verdict is UNSAT.
    #[arg(long, global = true)]
    witness: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Brute,
    Cover,
    Decompose,
    Reduce,
    Auto,
}

impl Method {
    fn strategy(self) -> Strategy {
        match self {
            Method::Brute => Strategy::Brute,
            Method::Cover => Strategy::CoverSearch,
            Method::Decompose => Strategy::Decompose,
            Method::Reduce => Strategy::ReduceFirst,
            Method::Auto => Strategy::Auto,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a graph is totally satisfiable.
    Satcheck { graph: String },
    /// Rewrite a graph at one vertex and list the resulting CNFs by graph.
    Rewrite {
        graph: String,
        #[arg(long)]
        vertex: u32,
    },
    /// Apply reduction rules until none applies.
    Reduce {
        graph: String,
        /// Also follow rules that only bound the result.
        #[arg(long)]
        partial: bool,
    },
    /// Regenerate a two-graph disjunction table (b1, b2 or b3).
    Tables {
        which: String,
        /// Compare against the transcribed rows.
        #[arg(long)]
        check: bool,
    },
    /// Check a named surface triangulation ("list" shows the names).
    Triangulations { name: String },
    /// Check the complete a-uniform hypergraph on b vertices.
    Uniform { a: u32, b: u32 },
    /// Generate small graphs up to isomorphism.
    Enumerate(EnumerateArgs),
    /// Check that every graph in a list is unsatisfiable. Without a file the
    /// built-in list is used.
    VerifyKnown { file: Option<PathBuf> },
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    max_vertices: usize,
    #[arg(long, default_value_t = 1)]
    min_vertices: usize,
    /// Plain graphs instead of multi-hypergraphs.
    #[arg(long)]
    simple: bool,
    #[arg(long, default_value_t = 3)]
    max_edge_size: usize,
    /// Defaults to 0 for plain graphs and 2 otherwise.
    #[arg(long)]
    min_degree: Option<u32>,
    #[arg(long)]
    disconnected: bool,
    /// Allow multiplicities of 2^k and above on edges of size k.
    #[arg(long)]
    no_mult_bound: bool,
    /// Cap on total multiplicity.
    #[arg(long)]
    max_edges: Option<u32>,
    /// Refuse when more graphs than this are expected.
    #[arg(long)]
    budget: Option<u64>,
    /// Print only the number of graphs.
    #[arg(long)]
    count_only: bool,
    /// Also print counts with each filter changed.
    #[arg(long)]
    sensitivity: bool,
    /// Classify every graph and report the unsatisfiable residues.
    #[arg(long)]
    classify: bool,
}

impl EnumerateArgs {
    fn filter(&self) -> GenerationFilter {
        let base = if self.simple {
            GenerationFilter::simple_graphs(self.max_vertices)
        } else {
            GenerationFilter::multi(self.max_vertices)
        };
        GenerationFilter {
            min_vertices: self.min_vertices,
            max_edge_size: if self.simple { 2 } else { self.max_edge_size },
            min_degree: self.min_degree.unwrap_or(base.min_degree),
            connected: !self.disconnected,
            mult_bound: !self.no_mult_bound,
            max_edges: self.max_edges,
            budget: self.budget.unwrap_or(base.budget),
            ..base
        }
    }
}

/// Failure of a command, mapped onto an exit status.
enum Failure {
    Usage(String),
    Refused(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Timeout | Error::Budget { .. } | Error::VertexBound { .. } | Error::VariableBound(_) => {
                Failure::Refused(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<u8, Failure>;

struct Ctx {
    opts: GlobalOpts,
    cache: Option<Arc<SatCache>>,
}

impl Ctx {
    fn config(&self, default: Strategy) -> SatConfig {
        SatConfig {
            strategy: self.opts.method.map_or(default, Method::strategy),
            deadline: self
                .opts
                .timeout
                .map(|s| Instant::now() + Duration::from_secs_f64(s)),
            cache: self.cache.clone(),
            ..SatConfig::default()
        }
    }

    fn method_name(&self, default: Strategy) -> &'static str {
        self.opts.method.map_or(default, Method::strategy).name()
    }
}

fn parse_graph(text: &str) -> std::result::Result<MHGraph, Failure> {
    text.parse::<MHGraph>()
        .map_err(|e| Failure::Usage(format!("cannot parse graph {text:?}: {e}")))
}

fn canonical_text(g: &MHGraph) -> String {
    canonical_form(g).map_or_else(|_| g.to_string(), |c| c.to_string())
}

/// Decides `g` and prints the verdict in the selected format.
fn report_verdict(ctx: &Ctx, g: &MHGraph, default: Strategy) -> CmdResult {
    let cfg = ctx.config(default);
    let start = Instant::now();
    let result = gamma(g, &cfg);
    let seconds = start.elapsed().as_secs_f64();
    let (label, code, status) = match result {
        Ok(s) => (s.label(), DECIDED, Some(s)),
        Err(e @ (Error::Timeout | Error::Budget { .. } | Error::VertexBound { .. } | Error::VariableBound(_))) => {
            if ctx.opts.format == Format::Text {
                eprintln!("undecided: {e}");
            }
            ("INCONCLUSIVE", REFUSED, None)
        }
        Err(e) => return Err(e.into()),
    };
    match ctx.opts.format {
        Format::Machine => println!(
            "status={label} graph={} method={} seconds={seconds:.3}",
            canonical_text(g),
            ctx.method_name(default)
        ),
        Format::Text => println!("{label}"),
    }
    if ctx.opts.witness {
        if let Some(SatStatus::Unsat(w)) = status {
            // verdicts from caches or decomposition carry no witness
            let w = w.or_else(|| {
                gamma_cover(g, &ctx.config(Strategy::CoverSearch))
                    .ok()
                    .and_then(|s| s.witness().cloned())
            });
            match w {
                Some(w) => println!("witness {w}"),
                None => println!("witness unavailable"),
            }
        }
    }
    Ok(code)
}

fn cmd_rewrite(graph: &str, vertex: u32) -> CmdResult {
    let g = parse_graph(graph)?;
    if !g.vertices().contains(&vertex) {
        return Err(Failure::Usage(format!("vertex {vertex} is not in {g}")));
    }
    if g.degree(vertex) == 1 {
        println!("vertex {vertex} has degree 1; dropping its edge");
        match drop_leaf(&g, vertex)?.into_graph() {
            Some(rest) => println!("{rest}"),
            None => println!("TRUE"),
        }
        return Ok(DECIDED);
    }
    let r = local_rewrite(&g, vertex)?;
    if r.groups.is_empty() {
        println!("EMPTY");
    }
    print!("{r}");
    Ok(DECIDED)
}

fn cmd_reduce(graph: &str, partial: bool) -> CmdResult {
    let g = parse_graph(graph)?;
    let outcome = if partial {
        reduce_fixpoint_partial(&g)
    } else {
        reduce_fixpoint(&g)
    };
    println!("{outcome}");
    Ok(DECIDED)
}

fn cmd_tables(which: &str, check: bool) -> CmdResult {
    let table = Table::from_name(which)
        .ok_or_else(|| Failure::Usage(format!("unknown table {which:?}; expected b1, b2 or b3")))?;
    let rows = regenerate_table(table)?;
    let fixture = table_fixture(table)?;
    let mut mismatches = 0;
    for (row, want) in rows.iter().zip(&fixture) {
        println!("{row}");
        if check && row != want {
            mismatches += 1;
            println!("  differs from transcribed row: {want}");
        }
    }
    if check {
        println!("{}/{} rows match", rows.len() - mismatches, rows.len());
        if mismatches > 0 {
            return Ok(MISMATCH);
        }
    }
    Ok(DECIDED)
}

fn cmd_triangulations(ctx: &Ctx, name: &str) -> CmdResult {
    if name == "list" {
        for (n, faces) in TRIANGULATIONS {
            println!("{n}: {}", faces.join(" "));
        }
        return Ok(DECIDED);
    }
    let g = triangulation(name).ok_or_else(|| {
        let names: Vec<&str> = TRIANGULATIONS.iter().map(|(n, _)| *n).collect();
        Failure::Usage(format!("unknown triangulation {name:?}; expected one of {}", names.join(", ")))
    })?;
    if LONG_RUNNING_TRIANGULATIONS.contains(&name) && !ctx.opts.long_running {
        return Err(Failure::Refused(format!(
            "{name} is expected to take several hours; pass --long-running to run it"
        )));
    }
    report_verdict(ctx, &g, Strategy::Decompose)
}

fn cmd_uniform(ctx: &Ctx, a: u32, b: u32) -> CmdResult {
    let g = complete_uniform(a, b)?;
    if a >= 4 && b >= 6 && !ctx.opts.long_running {
        return Err(Failure::Refused(format!(
            "the complete {a}-uniform hypergraph on {b} vertices is long-running; pass --long-running"
        )));
    }
    report_verdict(ctx, &g, Strategy::Decompose)
}

fn cmd_enumerate(ctx: &Ctx, args: &EnumerateArgs) -> CmdResult {
    let f = args.filter();
    if args.sensitivity {
        for (name, c) in sensitivity(&f) {
            match c {
                Ok(c) => println!("{name}: {c}"),
                Err(e) => println!("{name}: refused ({e})"),
            }
        }
        return Ok(DECIDED);
    }
    if args.count_only {
        println!("{}", count(&f)?);
        return Ok(DECIDED);
    }
    if args.classify {
        let report = run_pipeline(&f, &ctx.config(Strategy::Auto))?;
        match ctx.opts.format {
            Format::Machine => println!("{}", report.summary_line()),
            Format::Text => print!("{report}"),
        }
        return Ok(if report.undecided > 0 { REFUSED } else { DECIDED });
    }
    for g in generate(&f)? {
        println!("{g}");
    }
    Ok(DECIDED)
}

fn cmd_verify_known(ctx: &Ctx, file: Option<&PathBuf>) -> CmdResult {
    let text = match file {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?,
        None => catalog::KNOWN_UNSAT.to_string(),
    };
    let report = verify_known_unsat(&text, &ctx.config(Strategy::CoverSearch));
    println!("{report}");
    use graphsat::enumerate::ListOutcome;
    let outcomes = report.checks.iter().map(|c| &c.outcome);
    if report.all_unsat() {
        Ok(DECIDED)
    } else if outcomes
        .clone()
        .any(|o| matches!(o, ListOutcome::NotUnsat | ListOutcome::ParseError(_)))
    {
        Ok(MISMATCH)
    } else {
        Ok(REFUSED)
    }
}

fn run(cli: Cli) -> CmdResult {
    if let Some(t) = cli.opts.timeout {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::Usage("--timeout must be a positive number of seconds".into()));
        }
    }
    if let Some(j) = cli.opts.jobs {
        if j == 0 {
            return Err(Failure::Usage("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let cache = match &cli.opts.cache {
        Some(p) => Some(Arc::new(SatCache::open(p)?)),
        None => None,
    };
    let ctx = Ctx {
        opts: cli.opts,
        cache,
    };
    match &cli.command {
        Command::Satcheck { graph } => {
            let g = parse_graph(graph)?;
            report_verdict(&ctx, &g, Strategy::Auto)
        }
        Command::Rewrite { graph, vertex } => cmd_rewrite(graph, *vertex),
        Command::Reduce { graph, partial } => cmd_reduce(graph, *partial),
        Command::Tables { which, check } => cmd_tables(which, *check),
        Command::Triangulations { name } => cmd_triangulations(&ctx, name),
        Command::Uniform { a, b } => cmd_uniform(&ctx, *a, *b),
        Command::Enumerate(args) => cmd_enumerate(&ctx, args),
        Command::VerifyKnown { file } => cmd_verify_known(&ctx, file.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { DECIDED });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Refused(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(REFUSED)
        }
    }
}
