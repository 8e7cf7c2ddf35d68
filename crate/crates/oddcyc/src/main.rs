use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use oddcyc::battery;
use oddcyc::drive;
use oddcyc::format::{emit_dot, emit_edgelist, emit_graph6, parse_any, Format, GraphFile};
use oddcyc::report::{
    AtlasRecord, CheckCriticalReport, CheckJson, CriticalRecord, FamilyRecord, ForcedSetReport, GraphJson, VerifyReport,
    WitnessJson, CHECK_CRITICAL_SCHEMA, FORCED_SCHEMA, VERIFY_SCHEMA,
};
use oddcyc_core::families::{base_atlas, build_t_closure, oracle_catalog, recursive_catalog, Route};
use oddcyc_core::hom::forced_set_auto;
use oddcyc_core::{
    recognize_any, Bound, CriticalCatalog, Criticality, CycleOrder, Error, FamilyCatalog, FamilyTag, LabeledGraph,
    Oracle,
};

/// Largest vertex bound accepted for enumeration without --override-guards.
const MAX_VERTICES_GUARD: usize = 16;
/// Largest k accepted for family and critical enumeration without
/// --override-guards; the tag space grows like 3^(k+1).
const MAX_K_GUARD: u32 = 4;

#[derive(Parser)]
#[command(name = "oddcyc", version, about = "Odd-cycle colourings of series-parallel graphs")]
struct Cli {
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, env = "ODDCYC_JOBS", default_value_t = 0)]
    jobs: usize,
    /// Lift the size guards on enumeration and colouring search.
    #[arg(long, global = true)]
    override_guards: bool,
    /// Progress and summaries on standard error.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forced set of a 2-terminal graph with one witness colouring per element.
    ForcedSet {
        #[arg(long)]
        k: u32,
        /// Terminals; overrides any given in the file.
        #[arg(long, num_args = 2, value_names = ["S", "T"])]
        terminals: Option<Vec<usize>>,
        /// Input format; guessed from content when absent.
        #[arg(long)]
        format: Option<Format>,
        file: PathBuf,
    },
    /// Decide whether a graph is C_{2k+1}-critical.
    CheckCritical {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        format: Option<Format>,
        file: PathBuf,
    },
    /// List members of minimally forcing families as JSON lines.
    EnumerateFamilies {
        #[arg(long)]
        k: u32,
        /// `S` or `S,T` (e.g. `s1`, `sb1,s1`, `{0,2,3}`), `all` for every
        /// unrefined family, `refined` for every tag.
        #[arg(long)]
        tag: String,
        #[arg(long, default_value_t = 12)]
        max_vertices: usize,
        #[arg(long, default_value_t = 16)]
        max_edges: usize,
        #[arg(long, value_enum, default_value_t = FamilyMethod::Recursive)]
        method: FamilyMethod,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Drop one constructed member before comparing (tests the
        /// mismatch path).
        #[arg(long, hide = true)]
        inject_mismatch: bool,
    },
    /// List C_{2k+1}-critical series-parallel graphs.
    EnumerateCritical {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        max_vertices: usize,
        #[arg(long)]
        max_edges: Option<usize>,
        #[arg(long, value_enum, default_value_t = CriticalMethod::Theorem)]
        method: CriticalMethod,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the verification battery.
    Verify {
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 10)]
        max_vertices: usize,
    },
    /// The six base graphs over Z_5.
    Atlas {
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyMethod {
    /// Composition rules from K2 (the six-family closure when k = 2 and
    /// every tag is unrefined).
    Recursive,
    /// Exhaustive scan with colouring search.
    Oracle,
    /// Both, failing on any difference.
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriticalMethod {
    Theorem,
    Bruteforce,
    Both,
}

/// Outcome of a subcommand, mapped onto the exit-code contract.
enum Failure {
    Usage(String),
    Guard(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TooLarge { .. } => Failure::Guard(format!("{e} (pass --override-guards)")),
            Error::OrderOutOfRange(_) | Error::SetSyntax(_) | Error::InvalidTag(_) | Error::WrongOrder { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    match result {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(m)) => {
            eprintln!("refused: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(4)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::ForcedSet {
            k,
            terminals,
            format,
            file,
        } => forced_set(cli, *k, terminals.as_deref(), *format, file),
        Command::CheckCritical { k, format, file } => check_critical(cli, *k, *format, file),
        Command::EnumerateFamilies {
            k,
            tag,
            max_vertices,
            max_edges,
            method,
            output,
            inject_mismatch,
        } => enumerate_families(cli, *k, tag, Bound::new(*max_vertices, *max_edges), *method, output.as_ref(), *inject_mismatch),
        Command::EnumerateCritical {
            k,
            max_vertices,
            max_edges,
            method,
            format,
            output,
        } => {
            let bound = match max_edges {
                Some(m) => Bound::new(*max_vertices, *m),
                None => Bound::vertices(*max_vertices),
            };
            enumerate_critical(cli, *k, bound, *method, *format, output.as_ref())
        }
        Command::Verify { k, max_vertices } => verify(cli, *k, *max_vertices),
        Command::Atlas { k, format } => atlas(*k, *format),
    }
}

fn order(k: u32) -> Result<CycleOrder, Failure> {
    Ok(CycleOrder::new(k)?)
}

fn guard_enumeration(cli: &Cli, k: u32, max_vertices: usize) -> Result<(), Failure> {
    if cli.override_guards {
        return Ok(());
    }
    if max_vertices > MAX_VERTICES_GUARD {
        return Err(Failure::Guard(format!(
            "--max-vertices {max_vertices} is above {MAX_VERTICES_GUARD} (pass --override-guards)"
        )));
    }
    if k > MAX_K_GUARD {
        return Err(Failure::Guard(format!("k = {k} is above {MAX_K_GUARD} (pass --override-guards)")));
    }
    Ok(())
}

fn read_graph(path: &PathBuf, format: Option<Format>) -> Result<GraphFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_any(&text, format).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn oracle(cli: &Cli, order: CycleOrder) -> Oracle {
    let o = Oracle::new(order);
    if cli.override_guards {
        o.allow_large()
    } else {
        o
    }
}

fn sink(path: Option<&PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
    })
}

fn json_line<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let line = serde_json::to_string(value).map_err(|e| Failure::Internal(e.to_string()))?;
    writeln!(out, "{line}")?;
    Ok(())
}

fn forced_set(cli: &Cli, k: u32, terminals: Option<&[usize]>, format: Option<Format>, path: &PathBuf) -> Outcome {
    let order = order(k)?;
    let file = read_graph(path, format)?;
    let (s, t) = match (terminals, file.terminals) {
        (Some(&[s, t]), _) => (s, t),
        (_, Some(st)) => st,
        _ => return Err(Failure::Usage("no terminals: give --terminals S T or put them in the file".into())),
    };
    let lg = LabeledGraph::new(file.graph, s, t).map_err(|e| Failure::Usage(e.to_string()))?;
    let oracle = oracle(cli, order);
    let (set, used_dp) = forced_set_auto(&oracle, &lg)?;
    let mut witnesses = Vec::new();
    for x in set.iter() {
        let c = oracle
            .has_hom_with(&lg.graph, &[(lg.s, 0), (lg.t, x)])?
            .ok_or_else(|| Failure::Internal(format!("no witness for {x}")))?;
        witnesses.push(WitnessJson { x, colouring: c.0 });
    }
    let method = if used_dp { "dp" } else { "oracle" };
    eprintln!("forced set {} = {set} ({method})", set.short_name());
    let report = ForcedSetReport {
        schema: FORCED_SCHEMA.into(),
        k,
        set: set.to_string(),
        name: set.short_name(),
        method: method.into(),
        terminals: [lg.s, lg.t],
        witnesses,
    };
    json_line(&mut *sink(None)?, &report)?;
    Ok(true)
}

fn check_critical(cli: &Cli, k: u32, format: Option<Format>, path: &PathBuf) -> Outcome {
    let order = order(k)?;
    let file = read_graph(path, format)?;
    let g = file.graph;
    let sp = recognize_any(&g).ok();
    let mut report = CheckCriticalReport {
        schema: CHECK_CRITICAL_SCHEMA.into(),
        k,
        critical: false,
        verdict: String::new(),
        series_parallel: sp.is_some(),
        note: sp.is_none().then(|| "not series-parallel; decided by colouring search".to_string()),
        graph: GraphJson::new(&g, None),
        colouring: None,
        redundant_edge: None,
        isolated_vertex: None,
        record: None,
    };
    match oracle(cli, order).criticality(&g)? {
        Criticality::Critical(mut r) => {
            r.split = oddcyc_core::critical::find_split(order, &g);
            let key = oddcyc_core::graph_key(&g).unwrap_or_else(|_| oddcyc_core::GraphKey(b"-".to_vec()));
            report.critical = true;
            report.verdict = "critical".into();
            report.record = Some(CriticalRecord::new(&key, &r));
        }
        Criticality::Colourable(c) => {
            report.verdict = "colourable".into();
            report.colouring = Some(c.0);
        }
        Criticality::NotMinimal { edge } => {
            let (u, v) = g.edges()[edge];
            report.verdict = "not-minimal".into();
            report.redundant_edge = Some([u, v]);
        }
        Criticality::IsolatedVertex { vertex } => {
            report.verdict = "isolated-vertex".into();
            report.isolated_vertex = Some(vertex);
        }
    }
    eprintln!("{}: {}", path.display(), report.verdict);
    json_line(&mut *sink(None)?, &report)?;
    Ok(report.critical)
}

fn parse_tags(order: CycleOrder, text: &str) -> Result<Vec<FamilyTag>, Failure> {
    Ok(match text {
        "all" => FamilyTag::all_plain(order),
        "refined" => FamilyTag::all(order),
        other => vec![FamilyTag::parse(order, other)?],
    })
}

fn enumerate_families(
    cli: &Cli,
    k: u32,
    tag: &str,
    bound: Bound,
    method: FamilyMethod,
    output: Option<&PathBuf>,
    inject_mismatch: bool,
) -> Outcome {
    guard_enumeration(cli, k, bound.max_vertices)?;
    let order = order(k)?;
    let tags = parse_tags(order, tag)?;
    let constructive = || -> FamilyCatalog {
        if k == 2 && tags.iter().all(FamilyTag::is_plain) {
            build_t_closure(bound).only(&tags)
        } else {
            recursive_catalog(order, bound).only(&tags)
        }
    };
    let scan = || oracle_catalog(order, bound, &tags, Route::Oracle);
    let (shown, agree) = match method {
        FamilyMethod::Recursive => (constructive(), true),
        FamilyMethod::Oracle => (scan()?, true),
        FamilyMethod::Both => {
            let mut built = constructive();
            if inject_mismatch {
                if let Some(fam) = built.families.values_mut().find(|f| !f.is_empty()) {
                    fam.pop_first();
                }
            }
            let scanned = scan()?;
            let mut agree = true;
            for t in &tags {
                let (a, b) = (built.keys(t), scanned.keys(t));
                if a != b {
                    agree = false;
                    eprintln!(
                        "mismatch in {t}: {} only constructed, {} only scanned",
                        a.difference(&b).count(),
                        b.difference(&a).count()
                    );
                }
            }
            (scanned, agree)
        }
    };
    let mut out = sink(output)?;
    let mut count = 0;
    for (t, _, e) in shown.entries() {
        json_line(&mut *out, &FamilyRecord::new(t, e)?)?;
        count += 1;
    }
    out.flush()?;
    if cli.verbose || !agree {
        eprintln!("{count} members over {} tags", tags.len());
    }
    Ok(agree)
}

fn write_catalog(cat: &CriticalCatalog, format: Format, output: Option<&PathBuf>) -> Result<(), Failure> {
    let mut out = sink(output)?;
    for (i, (key, r)) in cat.members.iter().enumerate() {
        let file = GraphFile::plain(r.graph.clone());
        match format {
            Format::Json => json_line(&mut *out, &CriticalRecord::new(key, r))?,
            Format::Graph6 => write!(out, "{}", emit_graph6(&file))?,
            Format::Edgelist => {
                if i > 0 {
                    writeln!(out)?;
                }
                write!(out, "# {key}\n{}", emit_edgelist(&file))?;
            }
            Format::Dot => write!(out, "{}", emit_dot(&file, &format!("critical{}", i + 1)))?,
        }
    }
    out.flush()?;
    Ok(())
}

fn enumerate_critical(cli: &Cli, k: u32, bound: Bound, method: CriticalMethod, format: Format, output: Option<&PathBuf>) -> Outcome {
    guard_enumeration(cli, k, bound.max_vertices)?;
    let order = order(k)?;
    let jobs = cli.jobs;
    let (cat, agree) = match method {
        CriticalMethod::Theorem => (drive::generate_critical(order, bound, jobs)?, true),
        CriticalMethod::Bruteforce => (drive::filter_critical_bruteforce(order, bound, jobs)?, true),
        CriticalMethod::Both => {
            let built = drive::generate_critical(order, bound, jobs)?;
            let scanned = drive::filter_critical_bruteforce(order, bound, jobs)?;
            let same = built.keys().eq(scanned.keys()) && built.rejected.is_empty();
            if !same {
                eprintln!(
                    "mismatch: {} constructed, {} scanned, {} rejected",
                    built.len(),
                    scanned.len(),
                    built.rejected.len()
                );
            }
            (built, same)
        }
    };
    write_catalog(&cat, format, output)?;
    if cli.verbose {
        eprintln!("{} critical graphs for {order}", cat.len());
    }
    Ok(agree)
}

fn verify(cli: &Cli, k: u32, max_vertices: usize) -> Outcome {
    guard_enumeration(cli, k, max_vertices)?;
    let order = order(k)?;
    let checks = battery::run(order, max_vertices, cli.jobs)?;
    let passed = checks.iter().all(|c| c.passed());
    for c in &checks {
        let mark = if c.passed() { "pass" } else { "FAIL" };
        eprintln!("{mark}  {} ({} checked)", c.name, c.checked);
        for f in c.failures.iter().take(5) {
            eprintln!("      {f}");
        }
    }
    let report = VerifyReport {
        schema: VERIFY_SCHEMA.into(),
        k,
        max_vertices,
        passed,
        checks: checks.iter().map(CheckJson::from).collect(),
    };
    json_line(&mut *sink(None)?, &report)?;
    Ok(passed)
}

fn atlas(k: u32, format: Format) -> Outcome {
    if k != 2 {
        return Err(Failure::Usage(format!("the atlas is defined over Z_5 only (k = 2), got k = {k}")));
    }
    let atlas = base_atlas()?;
    let mut out = sink(None)?;
    for (i, h) in atlas.iter().enumerate() {
        let file = GraphFile::labeled(&h.expr.realize()?);
        match format {
            Format::Json => json_line(&mut *out, &AtlasRecord::new(h)?)?,
            Format::Graph6 => write!(out, "{}", emit_graph6(&file))?,
            Format::Edgelist => {
                if i > 0 {
                    writeln!(out)?;
                }
                write!(out, "# {} {}\n{}", h.name, h.tag.set.short_name(), emit_edgelist(&file))?;
            }
            Format::Dot => write!(out, "{}", emit_dot(&file, &h.name))?,
        }
    }
    out.flush()?;
    Ok(true)
}
