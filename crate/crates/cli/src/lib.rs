//! Command-line front end for inference systems with coaxioms.
//!
//! Exit status: 0 derivable / check holds, 1 not derivable / check fails,
//! 2 usage, parse or validation error, 3 a size cap was exceeded.

use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coax::prooftree::{approx_proof, proof_graph, unfold, wf_proof_search};
use coax::regular::EqSystem;
use coax::systems::{self, Grammar, Graph, Lambda};
use coax::verify::{bounded_coinduction, brute_force, check_closed, check_consistent, DEFAULT_ORACLE_CAP};
use coax::{Error, InferenceSystem, IterationTrace, JudgementSet};
use serde_json::{json, Value};

pub mod render;
pub mod sysfile;

pub use sysfile::{emit_system, parse_system_file, SystemFile};

pub const ORACLE_CAP_VAR: &str = "COAX_ORACLE_CAP";

#[derive(Parser)]
#[command(name = "coax", version, about = "Inductive, coinductive and coaxiom-generated interpretations")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Ind,
    Coind,
    Gen,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Ind => "ind",
            Mode::Coind => "coind",
            Mode::Gen => "gen",
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Print an interpretation of a system file (`-` reads stdin)
    Solve {
        file: String,
        #[arg(long, value_enum, default_value_t = Mode::Gen)]
        mode: Mode,
        /// Also print every iteration step
        #[arg(long)]
        trace: bool,
    },
    /// Exit 0 if the judgement belongs to the interpretation, 1 otherwise
    Query {
        file: String,
        judgement: String,
        #[arg(long, value_enum, default_value_t = Mode::Gen)]
        mode: Mode,
    },
    /// Produce a finite, approximated or regular proof
    Prove {
        file: String,
        judgement: String,
        #[command(flatten)]
        how: ProveHow,
        /// Unfold the proof graph into a tree of this depth
        #[arg(long, requires = "graph")]
        unfold: Option<usize>,
        /// Height bound for --wf (default: universe size)
        #[arg(long, requires = "wf")]
        depth_bound: Option<usize>,
    },
    /// Check a candidate set of judgements
    Check {
        file: String,
        candidate: String,
        #[command(flatten)]
        how: CheckHow,
    },
    /// Compare all interpretations against exhaustive subset enumeration
    Oracle {
        file: String,
        /// Largest universe to enumerate (default from COAX_ORACLE_CAP, else 16)
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Print the system file produced by a builder
    #[command(subcommand)]
    Builtin(Builtin),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ProveHow {
    /// Well-founded proof (inductive interpretation)
    #[arg(long)]
    wf: bool,
    /// Approximated proof of level n
    #[arg(long, value_name = "N")]
    level: Option<usize>,
    /// Regular proof graph over the generated interpretation
    #[arg(long)]
    graph: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CheckHow {
    #[arg(long)]
    bounded_coinduction: bool,
    #[arg(long)]
    closed: bool,
    #[arg(long)]
    consistent: bool,
}

#[derive(Subcommand)]
enum Builtin {
    /// Reachable node sets (graph file)
    Reach { graph: String },
    /// FIRST sets (grammar file)
    First { grammar: String },
    /// Weighted distances (graph file)
    Dist { graph: String },
    /// Shortest simple paths (graph file)
    Spath { graph: String },
    /// Membership of an element in a regular list
    Member {
        list: String,
        #[arg(allow_negative_numbers = true)]
        element: i64,
    },
    /// All elements positive
    AllPos { list: String },
    /// Greatest element
    MaxElem { list: String },
    /// Set of elements
    Elems { list: String },
    /// Zero-labelled paths in a regular tree
    Path0 { tree: String },
    /// Addition of digit streams
    Add { r1: String, r2: String, r: String },
    /// Big-step evaluation with divergence (lambda term file)
    Bigstep { term: String },
}

/// Exit status and buffered emissions of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

struct Ctx<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
    stdout: String,
    stderr: String,
    format: Format,
}

impl Ctx<'_> {
    fn read(&mut self, path: &str) -> Res<String> {
        if path == "-" {
            if self.stdin_used {
                return Err(Failure::Usage("stdin (`-`) can be read only once".into()));
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
            return Ok(s);
        }
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
    }

    fn load(&mut self, path: &str) -> Res<InferenceSystem> {
        let text = self.read(path)?;
        let file = parse_system_file(&text).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
        for w in &file.warnings {
            self.stderr.push_str(&format!("warning: {path}: {w}\n"));
        }
        file.to_system().map_err(|e| match e {
            e @ Error::Parse { .. } => Failure::Usage(format!("{path}: {e}")),
            e => Failure::Core(e),
        })
    }

    fn json(&mut self, v: Value) {
        self.stdout.push_str(&serde_json::to_string_pretty(&v).unwrap());
        self.stdout.push('\n');
    }

    fn no_dot(&self, what: &str) -> Res<()> {
        if self.format == Format::Dot {
            return Err(Failure::Usage(format!("--format dot does not apply to `{what}`")));
        }
        Ok(())
    }
}

/// Runs one command line (`argv[0]` is the program name).
pub fn run<I, S>(argv: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    let mut ctx = Ctx {
        stdin,
        stdin_used: false,
        stdout: String::new(),
        stderr: String::new(),
        format: cli.format,
    };
    let code = match dispatch(&mut ctx, cli.cmd) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            ctx.stderr.push_str(&format!("error: {msg}\n"));
            2
        }
        Err(Failure::Core(e)) => {
            ctx.stderr.push_str(&format!("error: {e}\n"));
            match e {
                Error::CapExceeded { .. } | Error::UniverseTooLarge { .. } => 3,
                _ => 2,
            }
        }
    };
    Outcome {
        code,
        stdout: ctx.stdout,
        stderr: ctx.stderr,
    }
}

fn dispatch(ctx: &mut Ctx<'_>, cmd: Cmd) -> Res<i32> {
    match cmd {
        Cmd::Solve { file, mode, trace } => solve(ctx, &file, mode, trace),
        Cmd::Query { file, judgement, mode } => query(ctx, &file, &judgement, mode),
        Cmd::Prove {
            file,
            judgement,
            how,
            unfold,
            depth_bound,
        } => prove(ctx, &file, &judgement, &how, unfold, depth_bound),
        Cmd::Check { file, candidate, how } => check(ctx, &file, &candidate, &how),
        Cmd::Oracle { file, cap } => oracle(ctx, &file, cap),
        Cmd::Builtin(b) => builtin(ctx, b),
    }
}

fn interpretation(sys: &InferenceSystem, mode: Mode) -> JudgementSet {
    match mode {
        Mode::Ind => sys.inductive().0,
        Mode::Coind => sys.coinductive().0,
        Mode::Gen => sys.generated(),
    }
}

fn phases(sys: &InferenceSystem, mode: Mode) -> Vec<(&'static str, IterationTrace)> {
    match mode {
        Mode::Ind => vec![("ascent", sys.inductive().1)],
        Mode::Coind => vec![("descent", sys.coinductive().1)],
        Mode::Gen => vec![("closure", sys.closure_trace()), ("descent", sys.generated_trace())],
    }
}

fn solve(ctx: &mut Ctx<'_>, file: &str, mode: Mode, trace: bool) -> Res<i32> {
    ctx.no_dot("solve")?;
    let sys = ctx.load(file)?;
    let result = interpretation(&sys, mode);
    let traces = if trace { phases(&sys, mode) } else { Vec::new() };
    if ctx.format == Format::Json {
        let mut v = json!({ "mode": mode.name(), "interpretation": render::set_json(&result) });
        if trace {
            v["trace"] = traces
                .iter()
                .map(|(phase, t)| {
                    json!({ "phase": phase, "steps": t.steps().iter().map(render::set_json).collect::<Vec<_>>() })
                })
                .collect();
        }
        ctx.json(v);
    } else {
        for (phase, t) in &traces {
            ctx.stdout.push_str(&format!("# {phase}\n"));
            for (k, s) in t.steps().iter().enumerate() {
                ctx.stdout.push_str(&format!("# {k}: {}\n", render::set_text(s)));
            }
        }
        for j in result.judgements() {
            ctx.stdout.push_str(&format!("{j}\n"));
        }
    }
    Ok(0)
}

fn query(ctx: &mut Ctx<'_>, file: &str, judgement: &str, mode: Mode) -> Res<i32> {
    ctx.no_dot("query")?;
    let sys = ctx.load(file)?;
    // a judgement outside the universe is simply not derivable
    let member = sys.position(judgement).is_ok() && interpretation(&sys, mode).contains_judgement(judgement);
    if ctx.format == Format::Json {
        ctx.json(json!({ "judgement": judgement, "mode": mode.name(), "member": member }));
    } else {
        ctx.stdout.push_str(if member { "yes\n" } else { "no\n" });
    }
    Ok(if member { 0 } else { 1 })
}

fn prove(
    ctx: &mut Ctx<'_>,
    file: &str,
    judgement: &str,
    how: &ProveHow,
    depth: Option<usize>,
    depth_bound: Option<usize>,
) -> Res<i32> {
    let sys = ctx.load(file)?;
    sys.position(judgement)?;
    let tree = if how.wf {
        wf_proof_search(&sys, judgement, depth_bound.unwrap_or(sys.universe().len()))?
    } else if let Some(n) = how.level {
        approx_proof(&sys, judgement, n)?
    } else {
        let gen = sys.generated();
        if !gen.contains_judgement(judgement) {
            None
        } else {
            let g = proof_graph(&sys, &gen, judgement)?;
            match depth {
                Some(d) => Some(unfold(&g, d)),
                None => {
                    match ctx.format {
                        Format::Json => ctx.json(render::graph_json(&g)),
                        Format::Dot => ctx.stdout.push_str(&render::graph_dot(&g)),
                        Format::Text => ctx.stdout.push_str(&render::graph_text(&g)),
                    }
                    return Ok(0);
                }
            }
        }
    };
    let Some(t) = tree else {
        if ctx.format == Format::Json {
            ctx.json(Value::Null);
        }
        ctx.stderr.push_str(&format!("no such proof of `{judgement}`\n"));
        return Ok(1);
    };
    match ctx.format {
        Format::Json => ctx.json(render::tree_json(&t)),
        Format::Dot => ctx.stdout.push_str(&render::tree_dot(&t)),
        Format::Text => ctx.stdout.push_str(&render::tree_text(&sys, &t)),
    }
    Ok(0)
}

fn check(ctx: &mut Ctx<'_>, file: &str, candidate: &str, how: &CheckHow) -> Res<i32> {
    ctx.no_dot("check")?;
    let sys = ctx.load(file)?;
    let text = ctx.read(candidate)?;
    let tokens = text
        .lines()
        .flat_map(|l| l.split('#').next().unwrap_or("").split_whitespace());
    let s = JudgementSet::from_judgements(sys.universe(), tokens)?;
    let (name, verdict) = if how.closed {
        ("closed", check_closed(&sys, &s)?)
    } else if how.consistent {
        ("consistent", check_consistent(&sys, &s)?)
    } else {
        ("bounded-coinduction", bounded_coinduction(&sys, &s)?)
    };
    let witness = verdict.witness().map(|w| w.to_string());
    if ctx.format == Format::Json {
        ctx.json(json!({ "check": name, "ok": verdict.ok(), "witness": witness }));
    } else {
        match &witness {
            None => ctx.stdout.push_str(&format!("{name}: holds\n")),
            Some(w) => ctx.stdout.push_str(&format!("{name}: fails: {w}\n")),
        }
    }
    Ok(if verdict.ok() { 0 } else { 1 })
}

fn oracle_cap(flag: Option<usize>) -> Res<usize> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var(ORACLE_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{ORACLE_CAP_VAR}={v:?} is not a number"))),
        Err(_) => Ok(DEFAULT_ORACLE_CAP),
    }
}

fn oracle(ctx: &mut Ctx<'_>, file: &str, cap: Option<usize>) -> Res<i32> {
    ctx.no_dot("oracle")?;
    let sys = ctx.load(file)?;
    let bf = brute_force(&sys, oracle_cap(cap)?)?;
    let rows = [
        ("ind", sys.inductive().0, &bf.mu),
        ("coind", sys.coinductive().0, &bf.nu),
        ("gen", sys.generated(), &bf.gen),
    ];
    let all = rows.iter().all(|(_, engine, brute)| engine == *brute);
    if ctx.format == Format::Json {
        let mut v = json!({ "fixed_points": bf.fixed_points.len(), "all_equal": all });
        for (name, engine, brute) in &rows {
            v[*name] = json!({
                "equal": engine == *brute,
                "engine": render::set_json(engine),
                "oracle": render::set_json(brute),
            });
        }
        ctx.json(v);
    } else {
        ctx.stdout.push_str(&format!("fixed points: {}\n", bf.fixed_points.len()));
        for (name, engine, brute) in &rows {
            if engine == *brute {
                ctx.stdout.push_str(&format!("{name}: equal\n"));
            } else {
                ctx.stdout.push_str(&format!(
                    "{name}: differs (engine {}, oracle {})\n",
                    render::set_text(engine),
                    render::set_text(brute)
                ));
            }
        }
        ctx.stdout.push_str(if all { "all equal\n" } else { "mismatch\n" });
    }
    Ok(if all { 0 } else { 1 })
}

fn builtin(ctx: &mut Ctx<'_>, b: Builtin) -> Res<i32> {
    ctx.no_dot("builtin")?;
    let parse_err = |e: Error| match e {
        e @ Error::Parse { .. } => Failure::Usage(e.to_string()),
        e => Failure::Core(e),
    };
    let term = |ctx: &mut Ctx<'_>, path: &str| -> Res<EqSystem> {
        EqSystem::parse(&ctx.read(path)?).map_err(|e| Failure::Usage(format!("{path}: {e}")))
    };
    let graph = |ctx: &mut Ctx<'_>, path: &str| -> Res<Graph> {
        Graph::parse(&ctx.read(path)?).map_err(|e| Failure::Usage(format!("{path}: {e}")))
    };
    let sys = match b {
        Builtin::Reach { graph: p } => systems::build_reach(&graph(ctx, &p)?)?,
        Builtin::Dist { graph: p } => systems::build_dist(&graph(ctx, &p)?)?,
        Builtin::Spath { graph: p } => systems::build_spath(&graph(ctx, &p)?)?,
        Builtin::First { grammar } => {
            let g = Grammar::parse(&ctx.read(&grammar)?).map_err(|e| Failure::Usage(format!("{grammar}: {e}")))?;
            systems::build_first(&g)?
        }
        Builtin::Member { list, element } => systems::build_member(&term(ctx, &list)?, element)?,
        Builtin::AllPos { list } => systems::build_all_pos(&term(ctx, &list)?)?,
        Builtin::MaxElem { list } => systems::build_max_elem(&term(ctx, &list)?)?,
        Builtin::Elems { list } => systems::build_elems(&term(ctx, &list)?)?,
        Builtin::Path0 { tree } => systems::build_path0(&term(ctx, &tree)?)?,
        Builtin::Add { r1, r2, r } => {
            let (a, b, c) = (term(ctx, &r1)?, term(ctx, &r2)?, term(ctx, &r)?);
            systems::build_add(&a, &b, &c)?
        }
        Builtin::Bigstep { term: p } => {
            let e = Lambda::parse(&ctx.read(&p)?).map_err(parse_err)?;
            systems::build_bigstep(&e)?
        }
    };
    if ctx.format == Format::Json {
        ctx.json(render::system_json(&sys));
    } else {
        ctx.stdout.push_str(&emit_system(&sys));
    }
    Ok(0)
}
