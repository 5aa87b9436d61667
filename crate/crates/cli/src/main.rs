use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use gelfand_core::cache::{self, CACHE_DIR_ENV};
use gelfand_core::chartab::{character_table, conjugacy_classes};
use gelfand_core::cosets::{double_cosets, involution_action};
use gelfand_core::field::{field_of_order, DEFAULT_FIELD_CAP};
use gelfand_core::group::{enumerate, DEFAULT_GROUP_CAP};
use gelfand_core::matrix::{format_vector, parse_vector};
use gelfand_core::reflect::{check_swap, swap_branch, swap_element, SpherePoint};
use gelfand_core::symsolve::{is_solution, solve_symmetric_traced, SymSolveInstance};
use gelfand_core::verify::{default_gl_grid, default_o_grid, parse_grid, run_sweep, run_verify};
use gelfand_core::{embed_standard, Error, GroupKind, PairSpec, RunOptions};

const EXIT_VERIFICATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "gelfand", version, about = "Exact checks of invariant-dimension bounds for GL and O pairs over finite fields")]
struct Cli {
    /// Character table cache directory
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,

    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Refuse groups larger than this
    #[arg(long = "cap-group-order", global = true, default_value_t = DEFAULT_GROUP_CAP)]
    cap_group_order: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite field queries
    Field {
        #[command(subcommand)]
        command: FieldCommand,
    },
    /// Matrix group queries
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Double cosets H\G/H and the transpose action on them
    Cosets(CosetsArgs),
    /// Solve for symmetric invertible B with Bφ = v
    SolveSymmetric(SolveArgs),
    /// Build the orthogonal involution swapping two unit vectors
    SwapReflection(SwapArgs),
    /// Compute the character table of a group
    Chartab(ChartabArgs),
    /// Run the full verification for one pair
    Verify(PairArgs),
    /// Run the verification over a grid of pairs
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum FieldCommand {
    /// Print the characteristic, degree, modulus, and a generator of F_q
    Info {
        #[arg(long)]
        q: u32,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    /// Print |G| for GL_n(F_q) or O_n(F_q)
    Order {
        #[arg(long = "type", value_parser = parse_kind)]
        kind: GroupKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        /// Write every element, one matrix literal per line
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PairArgs {
    #[arg(long = "pair", alias = "type", value_parser = parse_kind)]
    kind: GroupKind,
    /// Size of the subgroup's matrices; the big group has size n + 1
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u32,
}

impl PairArgs {
    fn spec(&self) -> PairSpec {
        PairSpec {
            kind: self.kind,
            n: self.n,
            q: self.q,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Involution {
    Transpose,
}

#[derive(Args)]
struct CosetsArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Use right multiplication by H·Z(G)
    #[arg(long)]
    mod_center: bool,
    #[arg(long, value_enum)]
    involution: Option<Involution>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    phi: String,
    #[arg(long)]
    v: String,
}

#[derive(Args)]
struct SwapArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    u: String,
    #[arg(long)]
    v: String,
}

#[derive(Args)]
struct ChartabArgs {
    #[arg(long = "type", value_parser = parse_kind)]
    kind: GroupKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u32,
    /// Write the table as JSON to this file
    #[arg(long = "json-out", alias = "out")]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated kind:n:q points; defaults to the standard GL and O grids
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, default_value = "sweep-out")]
    out: PathBuf,
}

fn parse_kind(s: &str) -> Result<GroupKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
    {
        log::warn!("could not configure thread pool: {e}");
    }
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(EXIT_VERIFICATION),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e.root() {
                Error::Verification(_) => EXIT_VERIFICATION,
                _ if e.is_usage() => EXIT_USAGE,
                _ => EXIT_INTERNAL,
            };
            ExitCode::from(code)
        }
    }
}

fn options(cli: &Cli) -> RunOptions {
    RunOptions {
        group_cap: cli.cap_group_order,
        field_cap: DEFAULT_FIELD_CAP,
        cache_dir: cli.cache_dir.clone(),
    }
}

fn print_json(value: &serde_json::Value) -> gelfand_core::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: &Cli) -> gelfand_core::Result<Outcome> {
    match &cli.command {
        Command::Field {
            command: FieldCommand::Info { q },
        } => field_info(cli, *q),
        Command::Group {
            command: GroupCommand::Order { kind, n, q, dump },
        } => group_order(cli, *kind, *n, *q, dump.as_deref()),
        Command::Cosets(args) => cosets(cli, args),
        Command::SolveSymmetric(args) => solve(cli, args),
        Command::SwapReflection(args) => swap(cli, args),
        Command::Chartab(args) => chartab(cli, args),
        Command::Verify(args) => verify(cli, args),
        Command::Sweep(args) => sweep(cli, args),
    }
}

fn field_info(cli: &Cli, q: u32) -> gelfand_core::Result<Outcome> {
    let f = field_of_order(q, DEFAULT_FIELD_CAP)?;
    let g = f.generator();
    if cli.json {
        print_json(&json!({
            "q": f.q(),
            "p": f.p(),
            "e": f.e(),
            "modulus": f.modulus(),
            "generator": g.0,
        }))?;
    } else {
        println!("q = {}", f.q());
        println!("p = {}", f.p());
        println!("e = {}", f.e());
        let coeffs: Vec<String> = f.modulus().iter().map(u32::to_string).collect();
        println!("modulus = {} [{}]", f.modulus_string(), coeffs.join(","));
        println!("generator = {}", g.0);
    }
    Ok(Outcome::Pass)
}

fn group_order(
    cli: &Cli,
    kind: GroupKind,
    n: usize,
    q: u32,
    dump: Option<&Path>,
) -> gelfand_core::Result<Outcome> {
    let f = field_of_order(q, DEFAULT_FIELD_CAP)?;
    let g = enumerate(kind, n, &f, cli.cap_group_order)?;
    if let Some(path) = dump {
        let mut body = String::new();
        for m in g.elements() {
            body.push_str(&m.to_literal());
            body.push('\n');
        }
        fs::write(path, body)?;
    }
    if cli.json {
        print_json(&json!({ "group": g.name(), "order": g.order() }))?;
    } else {
        println!("{} has order {}", g.name(), g.order());
    }
    Ok(Outcome::Pass)
}

fn cosets(cli: &Cli, args: &CosetsArgs) -> gelfand_core::Result<Outcome> {
    let PairSpec { kind, n, q } = args.pair.spec();
    let f = field_of_order(q, DEFAULT_FIELD_CAP)?;
    let big = enumerate(kind, n + 1, &f, cli.cap_group_order)?;
    let small = enumerate(kind, n, &f, cli.cap_group_order)?;
    let emb = embed_standard(&small, &big)?;
    let d = double_cosets(&big, &emb, args.mod_center, cli.cap_group_order)?;
    let action = match args.involution {
        Some(Involution::Transpose) => Some(involution_action(&d)?),
        None => None,
    };
    let reps: Vec<String> = action
        .as_ref()
        .map(|a| a.nonfixed_reps().iter().map(|m| m.to_literal()).collect())
        .unwrap_or_default();
    if cli.json {
        let mut out = json!({
            "group": big.name(),
            "subgroup": small.name(),
            "mod_center": args.mod_center,
            "count": d.count(),
        });
        if let Some(a) = &action {
            out["fixed"] = json!(a.fixed_count);
            out["nonfixed"] = json!(a.nonfixed_count);
            out["k"] = json!(a.k());
            out["nonfixed_reps"] = json!(reps);
        }
        print_json(&out)?;
    } else {
        println!("count = {}", d.count());
        if let Some(a) = &action {
            println!("fixed = {}", a.fixed_count);
            println!("nonfixed = {}", a.nonfixed_count);
            println!("k = {}", a.k());
            for r in &reps {
                println!("nonfixed rep: {r}");
            }
        }
    }
    Ok(Outcome::Pass)
}

fn solve(cli: &Cli, args: &SolveArgs) -> gelfand_core::Result<Outcome> {
    let f = field_of_order(args.q, DEFAULT_FIELD_CAP)?;
    let inst = SymSolveInstance::new(&f, parse_vector(&f, &args.phi)?, parse_vector(&f, &args.v)?)?;
    let (b, cases) = solve_symmetric_traced(&inst)?;
    let symmetric = b.is_symmetric();
    let invertible = b.is_invertible();
    let maps = b.apply(&inst.phi)? == inst.v;
    if !is_solution(&inst, &b) {
        return Err(Error::Internal(format!("solver returned a non-solution {}", b.to_literal())));
    }
    if cli.json {
        let cases: Vec<String> = cases.iter().map(|c| format!("{c:?}")).collect();
        print_json(&json!({
            "b": b.to_literal(),
            "symmetric": symmetric,
            "invertible": invertible,
            "maps_phi_to_v": maps,
            "cases": cases,
        }))?;
    } else {
        println!("B = {}", b.to_literal());
        println!("symmetric = {symmetric}");
        println!("invertible = {invertible}");
        println!("B*phi = v: {maps}");
    }
    Ok(Outcome::Pass)
}

fn swap(cli: &Cli, args: &SwapArgs) -> gelfand_core::Result<Outcome> {
    let f = field_of_order(args.q, DEFAULT_FIELD_CAP)?;
    let u = SpherePoint::new(&f, parse_vector(&f, &args.u)?)?;
    let v = SpherePoint::new(&f, parse_vector(&f, &args.v)?)?;
    let g = swap_element(&f, &u, &v)?;
    let check = check_swap(&g, &u, &v);
    if cli.json {
        print_json(&json!({
            "g": g.to_literal(),
            "branch": format!("{:?}", swap_branch(&f, &u, &v)),
            "check": check,
        }))?;
    } else {
        println!("g = {}", g.to_literal());
        println!("u = {}, v = {}", format_vector(u.coords()), format_vector(v.coords()));
        println!("orthogonal = {}", check.orthogonal);
        println!("involution = {}", check.involution);
        println!("g*u = v: {}", check.maps_u_to_v);
        println!("g*v = u: {}", check.maps_v_to_u);
    }
    Ok(if check.all() { Outcome::Pass } else { Outcome::Fail })
}

fn chartab(cli: &Cli, args: &ChartabArgs) -> gelfand_core::Result<Outcome> {
    let f = field_of_order(args.q, DEFAULT_FIELD_CAP)?;
    let g = enumerate(args.kind, args.n, &f, cli.cap_group_order)?;
    let classes = conjugacy_classes(&g, cli.cap_group_order)?;
    let table = match cli.cache_dir.as_deref().and_then(|d| cache::load(d, &g, &classes)) {
        Some(t) if t.validate(&classes).is_ok() => t,
        _ => {
            let t = character_table(&g, &classes)?;
            if let Some(dir) = &cli.cache_dir {
                cache::store(dir, &g, &classes, &t)?;
            }
            t
        }
    };
    let cached = cache::CachedTable::new(&g, &classes, &table);
    if let Some(path) = &args.json_out {
        fs::write(path, serde_json::to_string_pretty(&cached)?)?;
    }
    if cli.json {
        print_json(&serde_json::to_value(&cached)?)?;
    } else {
        println!("{}: {} classes, ℓ = {}, root = {}", g.name(), classes.count(), table.modulus, table.root);
        println!("degrees = {:?}", table.degrees);
        for (i, (rep, size)) in cached.class_reps.iter().zip(&cached.class_sizes).enumerate() {
            println!("class {i}: size {size}, rep {rep}");
        }
        for row in &table.values {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            println!("{}", cells.join(" "));
        }
    }
    Ok(Outcome::Pass)
}

fn verify(cli: &Cli, args: &PairArgs) -> gelfand_core::Result<Outcome> {
    let report = run_verify(args.spec(), &options(cli))?;
    if cli.json {
        println!("{}", report.to_json()?);
    } else {
        println!("{} vs {}", report.group, report.subgroup);
        println!("k = {}", report.cosets.k);
        println!("max dim pi^H = {} (bound {})", report.max_dim_inv, report.bound);
        println!("bound attained = {}", report.bound_attained);
        for (name, ok) in &report.checks {
            println!("{name}: {}", if *ok { "pass" } else { "FAIL" });
        }
        for v in &report.violations {
            println!("violation: {v}");
        }
        println!("{}", if report.pass { "PASS" } else { "FAIL" });
    }
    Ok(if report.pass { Outcome::Pass } else { Outcome::Fail })
}

fn sweep(cli: &Cli, args: &SweepArgs) -> gelfand_core::Result<Outcome> {
    let grid = match &args.grid {
        Some(s) => parse_grid(s)?,
        None => default_gl_grid().into_iter().chain(default_o_grid()).collect(),
    };
    let summary = run_sweep(&grid, &args.out, &options(cli))?;
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&summary)?);
    } else {
        print!("{}", summary.to_table());
    }
    Ok(if summary.all_pass() { Outcome::Pass } else { Outcome::Fail })
}
