//! Command-line front end for the etsbench workbench.
//!
//! Exit codes: 0 success or pass, 1 failed check or violation found,
//! 2 usage or input error, 3 inconclusive (budget exhausted).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use etsbench::ets::{expand_orbits, DEFAULT_EXPANSION_BUDGET};
use etsbench::report::{self, ColorRun};
use etsbench::verify::{verify_fixture_with, VerifyOptions};
use etsbench::vngraph::{ForbiddenQuad, ForbiddenTriangle};
use etsbench::{
    bfs_girth, check_profile, enumerate_vn_graphs, exponent_girth, find_ets, lift, parse_exponent_matrix, search,
    ColoringProblem, ConstraintProfile, Engine, EtsQuery, EtsStatus, ExponentMatrix, Fixture, ProfileName,
    SearchConfig, SearchStatus, VnGraph,
};

#[derive(Parser, Debug)]
#[command(name = "etsbench", version, about = "QC-LDPC column-weight-4 trapping-set workbench")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lift an exponent matrix and write its parity-check matrix.
    Lift(LiftArgs),
    /// Girth from the exponent matrix and from the lifted graph.
    Girth(GirthArgs),
    /// Cycle counts by row pattern, with a profile check.
    Cycles(CyclesArgs),
    /// Check a matrix against a constraint profile.
    ProfileCheck(ProfileArgs),
    /// Search for a matrix satisfying a profile.
    Search(SearchArgs),
    /// Elementary trapping set search.
    Ets(EtsArgs),
    /// Enumerate VN graphs of (a, b) elementary trapping sets.
    VnEnum(VnEnumArgs),
    /// Constrained edge coloring of a VN graph.
    Color(ColorArgs),
    /// Verify the embedded published matrices.
    VerifyTable1(VerifyArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct MatrixSource {
    /// Exponent matrix file.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Embedded fixture, e.g. table1-g6-n5.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum LiftFormat {
    Alist,
    Exponent,
}

#[derive(Args, Debug)]
struct LiftArgs {
    #[command(flatten)]
    source: MatrixSource,
    #[arg(long, value_enum, default_value = "alist")]
    format: LiftFormat,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GirthArgs {
    #[command(flatten)]
    source: MatrixSource,
    /// Only cycles shorter than this are looked for.
    #[arg(long, default_value_t = 12)]
    cap: usize,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CyclesArgs {
    #[command(flatten)]
    source: MatrixSource,
    #[arg(long, default_value = "girth6-ets-free")]
    profile: ProfileName,
    #[arg(long, default_value_t = 10)]
    cap: usize,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    #[command(flatten)]
    source: MatrixSource,
    #[arg(long)]
    profile: ProfileName,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum EngineArg {
    Complete,
    Random,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Number of columns.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    profile: ProfileName,
    #[arg(long = "N-min")]
    n_min: u32,
    #[arg(long = "N-max")]
    n_max: u32,
    /// File with the first three rows; only row 4 is searched.
    #[arg(long)]
    seed_rows: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    random_seed: u64,
    /// Node expansions per lifting degree.
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    #[arg(long, value_enum, default_value = "complete")]
    engine: EngineArg,
    /// Do not fix the first row and column to zero.
    #[arg(long)]
    no_normalize: bool,
    /// Disable symmetry breaking in the complete engine.
    #[arg(long)]
    no_symmetry: bool,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EtsArgs {
    #[command(flatten)]
    source: MatrixSource,
    #[arg(long, default_value_t = 1)]
    a_min: usize,
    #[arg(long)]
    a_max: usize,
    #[arg(long)]
    b_max: usize,
    /// Girth context (8 enables the structural checks on found sets).
    #[arg(long, default_value_t = 6)]
    girth_context: usize,
    #[arg(long, default_value_t = DEFAULT_EXPANSION_BUDGET)]
    budget: u64,
    /// List every quasi-cyclic shift instead of one set per orbit.
    #[arg(long)]
    expand_orbits: bool,
    /// Also report non-elementary connected sets.
    #[arg(long)]
    non_elementary: bool,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VnEnumArgs {
    #[arg(long)]
    a: usize,
    #[arg(long)]
    b: usize,
    /// Variable node degree.
    #[arg(long, default_value_t = 4)]
    gamma: usize,
    /// Tanner graph girth (6 allows triangles, 8 forbids them).
    #[arg(long, default_value_t = 6)]
    girth: usize,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ColorMode {
    Count,
    Find,
}

#[derive(Args, Debug)]
struct ColorArgs {
    /// Built-in tag (K5, K34, octahedron, type1, type2) or exchange-format file.
    #[arg(long)]
    graph: String,
    #[arg(long)]
    colors: usize,
    /// Forbidden triangle color set, e.g. 1,2,3 (repeatable).
    #[arg(long, value_parser = parse_triangle)]
    forbid_triangle: Vec<[u8; 3]>,
    /// Forbidden 4-cycle pattern r_double,r_required, e.g. 1,2 (repeatable).
    #[arg(long, value_parser = parse_quad)]
    forbid_quad: Vec<(u8, u8)>,
    #[arg(long, value_enum, default_value = "count")]
    mode: ColorMode,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Verify all six fixtures.
    #[arg(long, conflicts_with = "fixture")]
    all: bool,
    /// Fixture name (repeatable).
    #[arg(long)]
    fixture: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_EXPANSION_BUDGET)]
    budget: u64,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn parse_list(s: &str) -> Result<Vec<u8>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<u8>().map_err(|e| format!("'{t}': {e}")))
        .collect()
}

fn parse_triangle(s: &str) -> Result<[u8; 3], String> {
    let v = parse_list(s)?;
    let arr: [u8; 3] = v.try_into().map_err(|_| "expected three colors".to_string())?;
    ForbiddenTriangle::new(arr).ok_or("colors must be distinct and >= 1")?;
    Ok(arr)
}

fn parse_quad(s: &str) -> Result<(u8, u8), String> {
    match parse_list(s)?[..] {
        [d, r] => {
            ForbiddenQuad::new(d, r).ok_or("colors must be distinct and >= 1")?;
            Ok((d, r))
        }
        _ => Err("expected r_double,r_required".into()),
    }
}

/// Failure modes mapped to exit codes.
enum Failure {
    Usage(String),
    Io(String),
}

type Outcome = Result<(String, u8), Failure>;

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn load_matrix(src: &MatrixSource) -> Result<ExponentMatrix, Failure> {
    if let Some(name) = &src.fixture {
        return name.parse::<Fixture>().map(Fixture::matrix).map_err(Failure::Usage);
    }
    let path = src.matrix.as_ref().expect("clap enforces one source");
    parse_exponent_matrix(&read_file(path)?).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write_json(path: &Option<PathBuf>, value: &Value) -> Result<(), Failure> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(value).expect("reports serialize");
        fs::write(p, text + "\n").map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn cmd_lift(args: &LiftArgs) -> Outcome {
    let b = load_matrix(&args.source)?;
    let text = match args.format {
        LiftFormat::Alist => lift(&b).to_alist().to_string(),
        LiftFormat::Exponent => b.to_string(),
    };
    match &args.out {
        Some(p) => {
            fs::write(p, &text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display())))?;
            let g = lift(&b);
            Ok((
                format!(
                    "wrote {} ({} variables, {} checks, {} edges)\n",
                    p.display(),
                    g.num_vars(),
                    g.num_checks(),
                    g.num_edges()
                ),
                0,
            ))
        }
        None => Ok((text, 0)),
    }
}

fn cmd_girth(args: &GirthArgs) -> Outcome {
    if !(4..=14).contains(&args.cap) {
        return Err(Failure::Usage("--cap must be between 4 and 14".into()));
    }
    let b = load_matrix(&args.source)?;
    let e = exponent_girth(&b, args.cap);
    let l = bfs_girth(&lift(&b), args.cap);
    write_json(&args.json, &report::girth_report(&b, e, l))?;
    let mut out = format!("exponent girth: {e}\nlifted girth:   {l}\n");
    if e != l {
        out.push_str("MISMATCH between exponent and lifted girth\n");
        return Ok((out, 1));
    }
    Ok((out, 0))
}

fn cmd_cycles(args: &CyclesArgs) -> Outcome {
    if !(4..=14).contains(&args.cap) {
        return Err(Failure::Usage("--cap must be between 4 and 14".into()));
    }
    let b = load_matrix(&args.source)?;
    let profile = ConstraintProfile::named(args.profile);
    let check = check_profile(&b, &profile);
    let rep = report::cycle_report(&b, args.cap, &profile, &check);
    write_json(&args.json, &rep)?;
    let mut out = String::new();
    let exact = if rep["girth_exact"] == true { "" } else { ">= " };
    writeln!(out, "girth: {exact}{}", rep["girth"]).unwrap();
    writeln!(out, "4-cycles: {}", rep["counts"]["4"]).unwrap();
    for (len, key) in [(6, "6"), (8, "8")] {
        if let Some(map) = rep["counts"][key].as_object() {
            for (k, v) in map {
                writeln!(out, "{len}-cycles on rows {k}: {v}").unwrap();
            }
        }
    }
    out.push_str(&profile_summary(&check));
    Ok((out, if check.pass { 0 } else { 1 }))
}

fn profile_summary(check: &etsbench::ProfileReport) -> String {
    let mut out = format!("profile {}: {}\n", check.profile, if check.pass { "PASS" } else { "FAIL" });
    for v in &check.violations {
        writeln!(out, "  violated: {}; witness {:?}", v.constraint, v.witness.display_slots()).unwrap();
    }
    out
}

fn cmd_profile(args: &ProfileArgs) -> Outcome {
    let b = load_matrix(&args.source)?;
    let profile = ConstraintProfile::named(args.profile);
    let check = check_profile(&b, &profile);
    write_json(&args.json, &report::profile_report(&b, &profile, &check))?;
    Ok((profile_summary(&check), if check.pass { 0 } else { 1 }))
}

fn cmd_search(args: &SearchArgs) -> Outcome {
    let profile = ConstraintProfile::named(args.profile);
    let mut cfg = SearchConfig::new(args.n, profile, args.n_min, args.n_max)
        .random_seed(args.random_seed)
        .budget(args.budget)
        .normalized(!args.no_normalize)
        .symmetry_breaking(!args.no_symmetry)
        .engine(match args.engine {
            EngineArg::Complete => Engine::Complete,
            EngineArg::Random => Engine::Random,
        });
    if let Some(path) = &args.seed_rows {
        let text = read_file(path)?;
        let seed = parse_seed_rows(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        cfg = cfg.seed_rows(seed);
    }
    let outcome = search(&cfg).map_err(|e| Failure::Usage(e.to_string()))?;
    write_json(&args.json, &report::search_report(&cfg, &outcome))?;
    let mut out = String::new();
    for a in &outcome.attempts {
        writeln!(out, "# N={} {:?} ({} expansions)", a.lift, a.status, a.expansions).unwrap();
    }
    let code = match outcome.status {
        SearchStatus::Found => {
            out.push_str(&outcome.matrix.as_ref().unwrap().to_string());
            0
        }
        SearchStatus::Exhausted => {
            out.push_str("# exhausted: no matrix in range\n");
            1
        }
        SearchStatus::Budget => {
            out.push_str("# budget exhausted before a matrix was found\n");
            3
        }
    };
    Ok((out, code))
}

/// Seed rows: either three rows of integers, or a full matrix file whose
/// first three rows are used.
fn parse_seed_rows(text: &str) -> Result<Vec<Vec<u32>>, String> {
    if let Ok(b) = parse_exponent_matrix(text) {
        if b.rows() >= 3 {
            return Ok(b.row_vecs().into_iter().take(3).collect());
        }
    }
    let rows: Vec<Vec<u32>> = text
        .lines()
        .map(|l| l.split('#').next().unwrap().trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.split_whitespace().map(|t| t.parse::<u32>().map_err(|e| format!("'{t}': {e}"))).collect())
        .collect::<Result<_, _>>()?;
    if rows.len() != 3 {
        return Err(format!("expected 3 seed rows, found {}", rows.len()));
    }
    Ok(rows)
}

fn cmd_ets(args: &EtsArgs) -> Outcome {
    if args.a_max == 0 || args.a_max > 8 || args.a_min > args.a_max {
        return Err(Failure::Usage("need 1 <= --a-min <= --a-max <= 8".into()));
    }
    let b = load_matrix(&args.source)?;
    let g = lift(&b);
    let mut q = EtsQuery::new(args.a_max, args.b_max)
        .sizes(args.a_min.max(1), args.a_max)
        .girth_context(args.girth_context)
        .budget(args.budget);
    q.elementary_only = !args.non_elementary;
    let mut res = find_ets(&g, &q);
    if args.expand_orbits {
        res.records = expand_orbits(&g, &res.records);
    }
    write_json(&args.json, &report::ets_certificate(&b, &q, &res, args.expand_orbits))?;
    let mut out = format!(
        "status: {:?} ({} records, {} expansions)\n",
        res.status,
        res.records.len(),
        res.expansions
    );
    for r in &res.records {
        let graph = r.vn_graph.as_ref().and_then(|v| v.identify()).unwrap_or_default();
        writeln!(out, "({},{}) {:?} {}", r.a, r.b, r.vars, graph).unwrap();
    }
    for a in &res.anomalies {
        writeln!(out, "ANOMALY: {a}").unwrap();
    }
    let code = match res.status {
        EtsStatus::Free => 0,
        EtsStatus::Found => 1,
        EtsStatus::Inconclusive => 3,
    };
    Ok((out, if res.anomalies.is_empty() { code } else { 1 }))
}

fn cmd_vn_enum(args: &VnEnumArgs) -> Outcome {
    if args.a == 0 || args.a > etsbench::vngraph::MAX_VERTICES {
        return Err(Failure::Usage(format!("--a must be between 1 and {}", etsbench::vngraph::MAX_VERTICES)));
    }
    let graphs = enumerate_vn_graphs(args.a, args.b, args.gamma, args.girth);
    write_json(&args.json, &report::vn_enum_report(args.a, args.b, args.gamma, args.girth, &graphs))?;
    let mut out = format!("{} VN graph(s) for ({},{}) with gamma={} girth={}\n", graphs.len(), args.a, args.b, args.gamma, args.girth);
    for g in &graphs {
        let name = g.name().unwrap_or("-");
        writeln!(out, "{name}: {:?}", g.edges()).unwrap();
    }
    Ok((out, 0))
}

fn load_graph(arg: &str) -> Result<VnGraph, Failure> {
    if Path::new(arg).is_file() {
        return read_file(Path::new(arg))?
            .parse::<VnGraph>()
            .map_err(|e| Failure::Io(format!("{arg}: {e}")));
    }
    VnGraph::named(arg).map_err(|e| Failure::Usage(e.to_string()))
}

fn cmd_color(args: &ColorArgs) -> Outcome {
    let g = load_graph(&args.graph)?;
    if args.colors == 0 || args.colors > 16 {
        return Err(Failure::Usage("--colors must be between 1 and 16".into()));
    }
    let mut problem = ColoringProblem::new(&g, args.colors);
    for t in &args.forbid_triangle {
        problem = problem.forbid_triangle(ForbiddenTriangle::new(*t).unwrap());
    }
    for &(d, r) in &args.forbid_quad {
        problem = problem.forbid_quad(ForbiddenQuad::new(d, r).unwrap());
    }
    let mut run = ColorRun {
        graph: &g,
        colors: args.colors,
        triangles: &args.forbid_triangle,
        quads: &args.forbid_quad,
        count: None,
        coloring: None,
    };
    let out = match args.mode {
        ColorMode::Count => {
            let c = problem.count();
            run.count = Some(c);
            format!("{c}\n")
        }
        ColorMode::Find => {
            let found = problem.find();
            let text = match &found {
                Some(col) => {
                    let mut s = String::new();
                    for (&(u, v), c) in col.edges.iter().zip(&col.colors) {
                        writeln!(s, "{u} {v} {c}").unwrap();
                    }
                    s
                }
                None => "none\n".to_string(),
            };
            run.coloring = Some(found);
            text
        }
    };
    write_json(&args.json, &report::color_report(&run))?;
    Ok((out, 0))
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let fixtures: Vec<Fixture> = if args.all {
        Fixture::ALL.to_vec()
    } else if args.fixture.is_empty() {
        return Err(Failure::Usage("give --all or at least one --fixture".into()));
    } else {
        args.fixture
            .iter()
            .map(|f| f.parse::<Fixture>())
            .collect::<Result<_, _>>()
            .map_err(Failure::Usage)?
    };
    let opts = VerifyOptions {
        expansion_budget: args.budget,
    };
    let reports: Vec<_> = fixtures.iter().map(|&f| verify_fixture_with(f, opts)).collect();
    write_json(&args.json, &report::verify_report(&reports))?;
    let mut out = String::new();
    let mut inconclusive = false;
    for r in &reports {
        writeln!(out, "{}: {}", r.fixture.as_deref().unwrap_or("-"), if r.pass { "PASS" } else { "FAIL" }).unwrap();
        for c in &r.claims {
            writeln!(out, "  [{}] {}: {}", if c.pass { "ok" } else { "FAIL" }, c.claim, c.detail).unwrap();
            inconclusive |= c.detail.starts_with("inconclusive");
        }
    }
    let failed = reports.iter().flat_map(|r| &r.claims).filter(|c| !c.pass);
    let code = if reports.iter().all(|r| r.pass) {
        0
    } else if inconclusive && failed.clone().all(|c| c.detail.starts_with("inconclusive")) {
        3
    } else {
        1
    };
    Ok((out, code))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Lift(a) => cmd_lift(a),
        Command::Girth(a) => cmd_girth(a),
        Command::Cycles(a) => cmd_cycles(a),
        Command::ProfileCheck(a) => cmd_profile(a),
        Command::Search(a) => cmd_search(a),
        Command::Ets(a) => cmd_ets(a),
        Command::VnEnum(a) => cmd_vn_enum(a),
        Command::Color(a) => cmd_color(a),
        Command::VerifyTable1(a) => cmd_verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is configured once");
    }
    match run(&cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Failure::Usage(msg)) | Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}\n\n{}", Cli::command().render_usage());
            ExitCode::from(2)
        }
    }
}
