//! `incycle` — replay arc streams through an incremental engine.
//!
//! Subcommands: `detect` (first cycle, JSON report), `toposort` (final
//! order, one id per line), `scc` (strong components, one per line),
//! `bench` (generator suites, CSV with instrumentation counters).
//!
//! Exit codes: 0 success, 2 cycle on `toposort`, 1 usage/parse errors.

use std::fmt;
use std::fs;
use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use incycle::{
    gen_dense_adversary, gen_random_dag_stream, gen_sparse_adversary, parse_arc_stream,
    ArcStream, DenseEngine, InsertionOutcome, SccDenseEngine, SccSparseEngine, SparseEngine,
    TraversalCounters, VertexId, WitnessCycle,
};

#[derive(Parser)]
#[command(name = "incycle", version, about = "incremental cycle detection, topological order, and strong components over arc-insertion streams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a stream until its first cycle; print a JSON report.
    Detect(RunArgs),
    /// Replay an acyclic stream; print the final topological order.
    Toposort(RunArgs),
    /// Replay a stream merging strong components; print the partition.
    Scc(RunArgs),
    /// Run a generator suite and print one CSV row per repetition.
    Bench(BenchArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Stream file ("p n m" header optional, then "tail head" lines);
    /// stdin when absent.
    #[arg(long)]
    input: Option<String>,
    #[arg(long, value_enum, default_value_t = EngineChoice::Auto)]
    engine: EngineChoice,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// sparse-adv / random: vertex count; dense-adv: the parameter r
    /// (power of two, at least 8).
    #[arg(long)]
    size: u32,
    /// Seed for the random suite.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Repetitions; identical parameters give identical counter columns.
    #[arg(long, default_value_t = 1)]
    reps: u32,
    #[arg(long, value_enum, default_value_t = EngineChoice::Auto)]
    engine: EngineChoice,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    Sparse,
    Dense,
    /// Dense when m/n reaches n^(1/3)·lg n, sparse below.
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    /// Budget-abort adversary for the sparse engine (m = 8n).
    SparseAdv,
    /// Counter-wrap adversary for the dense engine.
    DenseAdv,
    /// Seeded random DAG stream (m = 8n, capped).
    Random,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::SparseAdv => "sparse-adv",
            Suite::DenseAdv => "dense-adv",
            Suite::Random => "random",
        })
    }
}

/// Uniform front over the two plain engines.
enum Engine {
    Sparse(SparseEngine),
    Dense(DenseEngine),
}

impl Engine {
    fn build(choice: EngineChoice, n: u32, m_hint: u64) -> Engine {
        match resolve(choice, n, m_hint) {
            EngineChoice::Dense => Engine::Dense(DenseEngine::new(n)),
            _ => Engine::Sparse(SparseEngine::new(n, Some(m_hint))),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Engine::Sparse(_) => "sparse",
            Engine::Dense(_) => "dense",
        }
    }

    fn insert_arc(&mut self, v: VertexId, w: VertexId) -> InsertionOutcome {
        // streams are bounds-checked up front, and we stop at the first
        // cycle, so engine errors cannot occur here
        match self {
            Engine::Sparse(e) => e.insert_arc(v, w),
            Engine::Dense(e) => e.insert_arc(v, w),
        }
        .expect("engine misuse")
    }

    fn counters(&self) -> &TraversalCounters {
        match self {
            Engine::Sparse(e) => e.counters(),
            Engine::Dense(e) => e.counters(),
        }
    }

    fn topological_list(&self) -> Vec<VertexId> {
        match self {
            Engine::Sparse(e) => e.topological_list(),
            Engine::Dense(e) => e.topological_list(),
        }
    }
}

/// Density crossover: dense pays off once m/n reaches n^(1/3)·lg n.
fn resolve(choice: EngineChoice, n: u32, m_hint: u64) -> EngineChoice {
    match choice {
        EngineChoice::Auto => {
            let n = n.max(2) as f64;
            if m_hint as f64 / n >= n.cbrt() * n.log2() {
                EngineChoice::Dense
            } else {
                EngineChoice::Sparse
            }
        }
        fixed => fixed,
    }
}

fn read_stream(input: &Option<String>) -> Result<ArcStream, String> {
    let text = match input {
        Some(path) => fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| format!("stdin: {e}"))?;
            buf
        }
    };
    let stream = parse_arc_stream(&text).map_err(|e| e.to_string())?;
    let n = stream.vertex_count();
    for a in &stream.events {
        if a.tail >= n || a.head >= n {
            return Err(format!("arc {a} exceeds declared vertex count {n}"));
        }
    }
    Ok(stream)
}

fn m_hint(stream: &ArcStream) -> u64 {
    stream.declared_m.unwrap_or(stream.events.len() as u64)
}

#[derive(Serialize)]
struct DetectReport {
    engine: &'static str,
    n: u32,
    m: u64,
    cycle_at: Option<usize>,
    witness: Option<Vec<VertexId>>,
    arc_traversals: u64,
    backward_aborts: u64,
    level_increases: u64,
    counter_resets: u64,
    reindex_moves: u64,
    wall_ms: u64,
}

struct Replay {
    engine: Engine,
    cycle_at: Option<usize>,
    witness: Option<WitnessCycle>,
    processed: u64,
    wall_ms: u64,
}

/// Feeds the stream to a fresh engine, stopping at the first cycle.
fn replay(stream: &ArcStream, choice: EngineChoice) -> Replay {
    let n = stream.vertex_count();
    let mut engine = Engine::build(choice, n, m_hint(stream));
    let start = Instant::now();
    let mut cycle_at = None;
    let mut witness = None;
    let mut processed = 0u64;
    for (idx, a) in stream.events.iter().enumerate() {
        processed += 1;
        if let InsertionOutcome::CycleDetected(w) = engine.insert_arc(a.tail, a.head) {
            cycle_at = Some(idx);
            witness = Some(w);
            break;
        }
    }
    Replay {
        engine,
        cycle_at,
        witness,
        processed,
        wall_ms: start.elapsed().as_millis() as u64,
    }
}

fn cmd_detect(args: &RunArgs) -> Result<ExitCode, String> {
    let stream = read_stream(&args.input)?;
    let run = replay(&stream, args.engine);
    let c = run.engine.counters();
    let report = DetectReport {
        engine: run.engine.name(),
        n: stream.vertex_count(),
        m: run.processed,
        cycle_at: run.cycle_at,
        witness: run.witness.map(|w| w.vertices),
        arc_traversals: c.arc_traversals,
        backward_aborts: c.backward_aborts,
        level_increases: c.level_increases,
        counter_resets: c.counter_resets,
        reindex_moves: c.reindex_moves,
        wall_ms: run.wall_ms,
    };
    println!("{}", serde_json::to_string(&report).expect("serialize"));
    Ok(ExitCode::SUCCESS)
}

fn cmd_toposort(args: &RunArgs) -> Result<ExitCode, String> {
    let stream = read_stream(&args.input)?;
    let run = replay(&stream, args.engine);
    if let Some(idx) = run.cycle_at {
        let w = run.witness.expect("cycle comes with a witness");
        let cycle: Vec<String> = w.vertices.iter().map(|v| v.to_string()).collect();
        eprintln!("cycle at event {idx}: {}", cycle.join(" "));
        return Ok(ExitCode::from(2));
    }
    let mut out = String::new();
    for v in run.engine.topological_list() {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_scc(args: &RunArgs) -> Result<ExitCode, String> {
    let stream = read_stream(&args.input)?;
    let n = stream.vertex_count();
    enum SccEngine {
        Sparse(SccSparseEngine),
        Dense(SccDenseEngine),
    }
    let mut engine = match resolve(args.engine, n, m_hint(&stream)) {
        EngineChoice::Dense => SccEngine::Dense(SccDenseEngine::new(n)),
        _ => SccEngine::Sparse(SccSparseEngine::new(n, Some(m_hint(&stream)))),
    };
    let mut merges = 0u64;
    for a in &stream.events {
        let outcome = match &mut engine {
            SccEngine::Sparse(e) => e.insert_arc(a.tail, a.head),
            SccEngine::Dense(e) => e.insert_arc(a.tail, a.head),
        }
        .expect("engine misuse");
        if let InsertionOutcome::ComponentsMerged { .. } = outcome {
            merges += 1;
        }
    }
    let partition = match &mut engine {
        SccEngine::Sparse(e) => e.components_snapshot(),
        SccEngine::Dense(e) => e.components_snapshot(),
    };
    let mut out = String::new();
    for part in partition {
        let ids: Vec<String> = part.iter().map(|v| v.to_string()).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    print!("{out}");
    eprintln!("merges: {merges}");
    Ok(ExitCode::SUCCESS)
}

fn bench_stream(args: &BenchArgs) -> Result<ArcStream, String> {
    let n = args.size;
    match args.suite {
        Suite::SparseAdv => gen_sparse_adversary(n, 8 * n as u64).map_err(|e| e.to_string()),
        Suite::DenseAdv => gen_dense_adversary(n).map_err(|e| e.to_string()),
        Suite::Random => {
            let cap = n as u64 * n.saturating_sub(1) as u64 / 2;
            gen_random_dag_stream(n, (8 * n as u64).min(cap), args.seed)
                .map_err(|e| e.to_string())
        }
    }
}

fn cmd_bench(args: &BenchArgs) -> Result<ExitCode, String> {
    let stream = bench_stream(args)?;
    let n = stream.vertex_count();
    let m = stream.events.len() as u64;
    println!("suite,n,m,engine,arc_traversals,backward_aborts,level_increases,counter_resets,wall_ms");
    for _ in 0..args.reps {
        let run = replay(&stream, args.engine);
        if let Some(idx) = run.cycle_at {
            return Err(format!("suite stream unexpectedly cyclic at event {idx}"));
        }
        let c = run.engine.counters();
        println!(
            "{},{},{},{},{},{},{},{},{}",
            args.suite,
            n,
            m,
            run.engine.name(),
            c.arc_traversals,
            c.backward_aborts,
            c.level_increases,
            c.counter_resets,
            run.wall_ms
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's default exit code for usage errors is 2; keep 2
            // reserved for cycle-on-toposort
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS // --help / --version
            };
        }
    };
    let result = match &cli.command {
        Command::Detect(args) => cmd_detect(args),
        Command::Toposort(args) => cmd_toposort(args),
        Command::Scc(args) => cmd_scc(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("incycle: {msg}");
            ExitCode::from(1)
        }
    }
}
