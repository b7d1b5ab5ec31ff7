//! Command-line front end: build and export levelled coset graphs, reproduce
//! the component-count table, run the exact check suites, test isomorphism of
//! exported graphs, and lift matrices from SL2(R_g) to SL2(F_q[t]).
//!
//! Exit codes: 0 success, 1 usage/parse error, 2 budget exceeded,
//! 3 check failure.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use congraph::analysis::{
    bound_check, brute_force_orders, component_level1, connectivity_report, format_table1,
    formula_report, st_identity_check, table1_row, Table1Row,
};
use congraph::error::Error;
use congraph::export::{dot_string, json_string, parse_json, write_export};
use congraph::field::{is_prime, FieldCtx};
use congraph::graph::{build_graph, BuildMode, LevelledGraph};
use congraph::iso::{iso_check, verify_certificate};
use congraph::matgroup::{GroupCtx, Variant};
use congraph::poly::Poly;
use congraph::ring::RgCtx;
use congraph::snf::PolyMat2;

const DEFAULT_CLOSURE_BUDGET: usize = 1 << 24;
const DEFAULT_GRAPH_BUDGET: usize = 1 << 22;
const DEFAULT_ISO_BUDGET: usize = 1 << 16;

#[derive(Parser)]
#[command(
    name = "congraph",
    about = "Levelled coset graphs for congruence subgroups of SL2/PGL2 over F_q[t]",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build one graph and export it (dot, json) or summarize it (table).
    Build(BuildArgs),
    /// Component counts C and C~ for g = t^n over a range of n, per q.
    Table1(Table1Args),
    /// Run the exact check suites on a configuration grid.
    Check(CheckArgs),
    /// Test two exported graphs (json) for level-respecting isomorphism.
    Iso(IsoArgs),
    /// Lift a det-1 matrix over R_g to a det-1 matrix over F_q[t].
    Lift(LiftArgs),
}

#[derive(Args)]
struct RingArgs {
    /// Field size q = p^k (prime power); alternative to --p/--k.
    #[arg(long)]
    q: Option<u32>,
    /// Field characteristic (prime); use with --k.
    #[arg(long)]
    p: Option<u32>,
    /// Field extension degree.
    #[arg(long)]
    k: Option<u32>,
    /// Level polynomial g over F_q, e.g. "t^2" or "t^3+t+1".
    #[arg(long)]
    g: String,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    ring: RingArgs,
    /// Group variant.
    #[arg(long, default_value = "sl2", value_parser = ["sl2", "pgl-bar", "pgl-m"])]
    variant: String,
    /// Identity-component-only or full construction.
    #[arg(long, default_value = "full", value_parser = ["identity", "full"])]
    mode: String,
    /// Output format.
    #[arg(long, default_value = "table", value_parser = ["dot", "json", "table"])]
    format: String,
    /// Write to this path instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Keep only levels 0..levels (e.g. 2 for the 0-1 subgraph).
    #[arg(long)]
    levels: Option<usize>,
    /// Max vertices to discover.
    #[arg(long, default_value_t = DEFAULT_GRAPH_BUDGET)]
    budget: usize,
}

#[derive(Args)]
struct Table1Args {
    /// Field size(s); repeat for several (e.g. --q 2 --q 4).
    #[arg(long, required = true)]
    q: Vec<u32>,
    /// Degree range for g = t^n, inclusive, e.g. "2..4" or "3".
    #[arg(long, default_value = "2..3")]
    n: String,
    /// Output format.
    #[arg(long, default_value = "table", value_parser = ["json", "table"])]
    format: String,
    /// Write to this path instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Max closure elements / vertices per computation.
    #[arg(long, default_value_t = DEFAULT_CLOSURE_BUDGET)]
    budget: usize,
}

#[derive(Args)]
struct CheckArgs {
    /// Restrict to one configuration instead of the default grid.
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    g: Option<String>,
    /// Max closure elements / vertices per computation.
    #[arg(long, default_value_t = DEFAULT_GRAPH_BUDGET)]
    budget: usize,
    /// Seed for the randomized lift suite.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct IsoArgs {
    /// First exported graph (json).
    a: PathBuf,
    /// Second exported graph (json).
    b: PathBuf,
    /// Search-node budget.
    #[arg(long, default_value_t = DEFAULT_ISO_BUDGET)]
    budget: usize,
}

#[derive(Args)]
struct LiftArgs {
    #[command(flatten)]
    ring: RingArgs,
    /// Matrix over R_g, e.g. "[[t+1,1],[t,1]]".
    matrix: String,
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded(_) | Error::ClosureOverflow(_) | Error::IsoBudgetExceeded => 2,
        _ => 1,
    }
}

/// Split a prime power q into (p, k).
fn prime_power(q: u32) -> Result<(u32, u32), Error> {
    if q >= 2 {
        for p in 2..=q {
            if is_prime(p as u64) && q % p == 0 {
                let (mut rest, mut k) = (q, 0u32);
                while rest % p == 0 {
                    rest /= p;
                    k += 1;
                }
                if rest == 1 {
                    return Ok((p, k));
                }
                break;
            }
        }
    }
    Err(Error::Parse(format!("{q} is not a prime power")))
}

fn resolve_field(q: Option<u32>, p: Option<u32>, k: Option<u32>) -> Result<Arc<FieldCtx>, Error> {
    let (p, k) = match (q, p) {
        (Some(q), None) => {
            let (p, k2) = prime_power(q)?;
            if k.is_some_and(|k| k != k2) {
                return Err(Error::Parse(format!("--q {q} inconsistent with --k")));
            }
            (p, k2)
        }
        (None, Some(p)) => (p, k.unwrap_or(1)),
        (Some(q), Some(p)) => {
            let (p2, k2) = prime_power(q)?;
            if p != p2 || k.unwrap_or(k2) != k2 {
                return Err(Error::Parse(format!("--q {q} inconsistent with --p/--k")));
            }
            (p, k2)
        }
        (None, None) => return Err(Error::Parse("one of --q or --p is required".into())),
    };
    FieldCtx::new(p, k)
}

fn resolve_ring(args: &RingArgs) -> Result<Arc<RgCtx>, Error> {
    let field = resolve_field(args.q, args.p, args.k)?;
    let g = Poly::parse(&field, &args.g)?;
    RgCtx::new(&field, g)
}

fn parse_n_range(text: &str) -> Result<(usize, usize), Error> {
    let bad = || Error::Parse(format!("bad degree range '{text}' (expected N or LO..HI)"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        if lo < 1 || hi < lo {
            return Err(bad());
        }
        Ok((lo, hi))
    } else {
        let n: usize = text.trim().parse().map_err(|_| bad())?;
        if n < 1 {
            return Err(bad());
        }
        Ok((n, n))
    }
}

fn summarize(g: &LevelledGraph) -> String {
    let mut s = format!(
        "q={} g={} variant={} mode={}\n",
        g.ctx.q(),
        g.ctx.ring.g(),
        g.ctx.variant.name(),
        g.mode.name()
    );
    let sizes: Vec<String> = g.level_sizes().iter().map(|v| v.to_string()).collect();
    s.push_str(&format!("level sizes: {}\n", sizes.join(", ")));
    s.push_str(&format!(
        "vertices: {}  edges: {}\n",
        g.vertex_count(),
        g.edge_count()
    ));
    s.push_str(&format!("components: {}\n", g.component_count));
    s.push_str(&format!("cusps: {}\n", g.ctx.cusp_count()));
    s
}

fn cmd_build(args: &BuildArgs) -> Result<(), Error> {
    let ring = resolve_ring(&args.ring)?;
    let variant: Variant = args.variant.parse()?;
    let mode: BuildMode = args.mode.parse()?;
    let ctx = GroupCtx::new(&ring, variant);
    let max_level = args.levels.map(|l| {
        if l == 0 {
            0
        } else {
            l - 1
        }
    });
    let graph = build_graph(&ctx, mode, args.budget, max_level)?;
    match (&args.output, args.format.as_str()) {
        (Some(path), fmt @ ("dot" | "json")) => {
            write_export(&graph, fmt, path)?;
            print!("{}", summarize(&graph));
            println!("wrote {}", path.display());
        }
        (Some(path), _) => {
            std::fs::write(path, summarize(&graph))?;
            println!("wrote {}", path.display());
        }
        (None, "dot") => print!("{}", dot_string(&graph, true)),
        (None, "json") => print!("{}", json_string(&graph)?),
        (None, _) => print!("{}", summarize(&graph)),
    }
    Ok(())
}

fn cmd_table1(args: &Table1Args) -> Result<(), Error> {
    let (lo, hi) = parse_n_range(&args.n)?;
    let mut rows: Vec<Table1Row> = Vec::new();
    for &q in &args.q {
        let (p, k) = prime_power(q)?;
        let field = FieldCtx::new(p, k)?;
        for n in lo..=hi {
            let g = Poly::t(&field).pow(n as u32);
            let ring = RgCtx::new(&field, g)?;
            rows.push(table1_row(&ring, args.budget)?);
        }
    }
    let text = if args.format == "json" {
        let items: Vec<serde_json::Value> = rows.iter().map(|r| r.to_json()).collect();
        format!("{}\n", serde_json::to_string_pretty(&items)?)
    } else {
        format_table1(&rows)
    };
    match &args.output {
        Some(path) => {
            std::fs::write(path, &text)?;
            println!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

/// One named check; prints its own pass/fail line and reports success.
fn run_check(name: &str, outcome: Result<bool, Error>) -> Result<bool, Error> {
    match outcome {
        Ok(true) => {
            println!("pass  {name}");
            Ok(true)
        }
        Ok(false) => {
            println!("FAIL  {name}");
            Ok(false)
        }
        Err(e) => Err(e),
    }
}

fn check_one(ring: &Arc<RgCtx>, budget: usize, seed: u64) -> Result<bool, Error> {
    let tag = format!("q={} g={}", ring.q(), ring.g());
    let mut ok = true;

    // order formulas vs exhaustive enumeration (small rings only)
    if let Some((gl2, sl2, units)) = brute_force_orders(ring) {
        let report = formula_report(ring);
        ok &= run_check(
            &format!("{tag}: order formulas vs enumeration"),
            Ok(report.gl2_order == gl2.into()
                && report.sl2_order == sl2.into()
                && report.unit_group_order == units.into()),
        )?;
    }

    for variant in [Variant::Sl2, Variant::PglBar, Variant::PglM] {
        let ctx = GroupCtx::new(ring, variant);
        let graph = build_graph(&ctx, BuildMode::Full, budget, None)?;
        ok &= run_check(
            &format!("{tag} {}: degree profile and level structure", variant.name()),
            Ok(graph.degree_check().is_ok()),
        )?;
        let expected: Vec<usize> = (0..ring.n()).map(|i| ctx.level_size(i) as usize).collect();
        ok &= run_check(
            &format!("{tag} {}: level sizes vs formulas", variant.name()),
            Ok(graph.level_sizes() == expected),
        )?;
    }

    // S/T identity and connectivity facts
    let st = st_identity_check(ring, budget)?;
    ok &= run_check(&format!("{tag}: S/T identity"), Ok(st.holds == Some(true)))?;
    let conn = connectivity_report(ring, budget)?;
    ok &= run_check(&format!("{tag}: SL2 graph connected"), Ok(conn.x_connected))?;
    ok &= run_check(
        &format!("{tag}: PGL components = unit square-class index"),
        Ok(conn.x_tilde_matches_index),
    )?;

    // expansion bound: equality at S = L_1; violation exhibited when C~ > 1
    if ring.n() >= 2 {
        let ctx = GroupCtx::new(ring, Variant::PglM);
        let graph = build_graph(&ctx, BuildMode::Full, budget, None)?;
        let d01 = graph.subgraph_01()?;
        let all: Vec<usize> = d01.level_ids(1)?.collect();
        let eq = bound_check(&d01, &all)?;
        ok &= run_check(
            &format!("{tag}: expansion bound equality at S = L_1"),
            Ok(eq.lhs == eq.rhs && eq.holds == Some(true)),
        )?;
        if d01.component_count > 1 {
            let s = component_level1(&d01, 0)?;
            let r = bound_check(&d01, &s)?;
            println!(
                "note  {tag}: expansion bound on one component: {} vs {} -> {}",
                r.lhs,
                r.rhs,
                if r.violated() { "VIOLATED" } else { "holds" }
            );
        }
    }

    // randomized lift suite
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = GroupCtx::new(ring, Variant::Sl2);
    let mut lifts_ok = true;
    for _ in 0..100 {
        let m = random_det1(&ctx, &mut rng);
        let lift = ctx.sl2_lift(&m)?;
        lifts_ok &= lift.det() == Poly::one(&ring.field) && ctx.reduce_poly_mat(&lift) == m;
    }
    ok &= run_check(&format!("{tag}: 100 random det-1 lifts verify"), Ok(lifts_ok))?;

    Ok(ok)
}

/// Random element of SL2(R_g): random column with unit extension via
/// rejection, then a random upper-triangular correction.
fn random_det1(ctx: &Arc<GroupCtx>, rng: &mut ChaCha8Rng) -> congraph::matgroup::Mat2 {
    let ring = &ctx.ring;
    loop {
        let m = congraph::matgroup::Mat2::new(
            rng.gen_range(0..ring.size()),
            rng.gen_range(0..ring.size()),
            rng.gen_range(0..ring.size()),
            rng.gen_range(0..ring.size()),
        );
        let det = ctx.det(&m);
        if let Ok(inv) = ring.inv(det) {
            // scale one row by det^{-1} to land exactly on det = 1
            let fixed = congraph::matgroup::Mat2::new(
                ring.mul(m.e[0], inv),
                ring.mul(m.e[1], inv),
                m.e[2],
                m.e[3],
            );
            debug_assert_eq!(ctx.det(&fixed), 1);
            return fixed;
        }
    }
}

fn cmd_check(args: &CheckArgs) -> Result<bool, Error> {
    let mut rings: Vec<Arc<RgCtx>> = Vec::new();
    if args.g.is_some() || args.q.is_some() || args.p.is_some() {
        let g = args
            .g
            .clone()
            .ok_or_else(|| Error::Parse("--g is required with --q/--p".into()))?;
        rings.push(resolve_ring(&RingArgs { q: args.q, p: args.p, k: args.k, g })?);
    } else {
        for (q, g) in [
            (2u32, "t"),
            (2, "t^2"),
            (2, "t^3"),
            (2, "t^2+t"),
            (2, "t^2+t+1"),
            (3, "t^2"),
            (4, "t^2"),
        ] {
            let (p, k) = prime_power(q)?;
            let field = FieldCtx::new(p, k)?;
            rings.push(RgCtx::new(&field, Poly::parse(&field, g)?)?);
        }
    }
    let mut ok = true;
    for ring in &rings {
        ok &= check_one(ring, args.budget, args.seed)?;
    }
    println!("{}", if ok { "all checks passed" } else { "CHECKS FAILED" });
    Ok(ok)
}

fn cmd_iso(args: &IsoArgs) -> Result<(), Error> {
    let a = parse_json(&std::fs::read_to_string(&args.a)?)?.to_abstract()?;
    let b = parse_json(&std::fs::read_to_string(&args.b)?)?.to_abstract()?;
    match iso_check(&a, &b, args.budget)? {
        Some(map) => {
            debug_assert!(verify_certificate(&a, &b, &map));
            let cert: Vec<String> = map
                .iter()
                .enumerate()
                .map(|(i, &j)| format!("{i}->{j}"))
                .collect();
            println!("ISO");
            println!("certificate: {}", cert.join(" "));
        }
        None => println!("NON-ISO"),
    }
    Ok(())
}

fn cmd_lift(args: &LiftArgs) -> Result<(), Error> {
    let ring = resolve_ring(&args.ring)?;
    let ctx = GroupCtx::new(&ring, Variant::Sl2);
    let m = ctx.parse_mat2(&args.matrix)?;
    ctx.check_valid(&m)?;
    let lift: PolyMat2 = ctx.sl2_lift(&m)?;
    if lift.det() != Poly::one(&ring.field) || ctx.reduce_poly_mat(&lift) != m {
        return Err(Error::Integrity("lift failed self-verification".into()));
    }
    println!("{lift}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are successes, anything else is usage error
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match &cli.cmd {
        Cmd::Build(args) => cmd_build(args),
        Cmd::Table1(args) => cmd_table1(args),
        Cmd::Check(args) => match cmd_check(args) {
            Ok(true) => Ok(()),
            Ok(false) => return ExitCode::from(3),
            Err(e) => Err(e),
        },
        Cmd::Iso(args) => cmd_iso(args),
        Cmd::Lift(args) => cmd_lift(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
