//! `topoforge`: check finite spaces, build power-set spaces, search kernels,
//! enumerate catalogs and run the theorem suite.
//!
//! Exit codes: 0 success, 1 a certified violation was found, 2 input or resource error.

mod documents;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use topoforge::caps::Caps;
use topoforge::catalog::{enumerate_topologies, fingerprint, CatalogRecord, Mode};
use topoforge::category::{check_continuous, is_epi, is_mono};
use topoforge::covering::{
    exclusiveness, extent, gls_search, is_ad, left_separated_search, lindelof_degree, DStatus,
};
use topoforge::dspace::{dspace_check, greedy_kernel, greedy_kernel_all_orders, kernel_search, DVerdict};
use topoforge::puf::{build_puf_space, upset_oracle};
use topoforge::space::separation_level;
use topoforge::suite::{run_suite, SuiteConfig};
use topoforge::PointSet;

use documents::{read_assignment, read_map, read_space, write_space, SpaceDocument};

#[derive(Parser)]
#[command(name = "topoforge", version, about = "Exact computations on finite topological spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print fingerprint properties of a space.
    Check(CheckArgs),
    /// Write the principal-ultrafilter space on the power set of n points.
    Puf(PufArgs),
    /// Search a closed discrete kernel of a neighborhood assignment.
    Kernel(KernelArgs),
    /// Inspect a map between two spaces.
    Map(MapArgs),
    /// Enumerate every topology on n points as JSON lines.
    Catalog(CatalogArgs),
    /// Replay the theorem suite over the catalog.
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Prop {
    T0,
    T1,
    Extent,
    Lindelof,
    Exclusiveness,
    D,
    Ad,
    Gls,
    LeftSep,
    Opens,
}

const ALL_PROPS: [Prop; 10] = [
    Prop::T0,
    Prop::T1,
    Prop::Extent,
    Prop::Lindelof,
    Prop::Exclusiveness,
    Prop::D,
    Prop::Ad,
    Prop::Gls,
    Prop::LeftSep,
    Prop::Opens,
];

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    space: PathBuf,
    /// Every property (the default when --props is absent).
    #[arg(long, conflicts_with = "props")]
    all: bool,
    #[arg(long, value_enum, value_delimiter = ',')]
    props: Vec<Prop>,
    /// Largest assignment count checked exhaustively; above it, this many samples are drawn.
    #[arg(long)]
    cap: Option<u128>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PufArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out: PathBuf,
    /// Also build the up-set oracle and refuse to write unless both agree.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long)]
    space: PathBuf,
    #[arg(long)]
    assignment: PathBuf,
    /// Greedy recursion along --order (identity by default).
    #[arg(long, group = "mode")]
    greedy: bool,
    /// Greedy recursion over every order.
    #[arg(long, group = "mode")]
    greedy_all: bool,
    /// Smallest closed discrete kernel by exhaustive search (the default).
    #[arg(long, group = "mode")]
    brute: bool,
    #[arg(long, value_delimiter = ',', requires = "greedy")]
    order: Option<Vec<usize>>,
}

#[derive(Args)]
struct MapArgs {
    /// MapDocument: {"from": FILE, "to": FILE, "values": [...]}.
    #[arg(long)]
    map: PathBuf,
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    unlabeled: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampled assignments for spaces above the exhaustive budget.
    #[arg(long, default_value_t = 10_000)]
    samples: u128,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = 3)]
    max_n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random assignments per space above the exhaustive size.
    #[arg(long, default_value_t = 32)]
    samples: usize,
    #[arg(long)]
    json: bool,
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    Violation,
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn sets_text(sets: &[PointSet]) -> String {
    format!("[{}]", sets.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}

fn d_text(v: &DVerdict) -> String {
    match v.status {
        DStatus::Yes => format!("yes ({} of {} assignments)", v.assignments_checked, v.assignments_total),
        DStatus::No => format!(
            "no (counterexample N = {})",
            sets_text(v.counterexample.as_deref().unwrap_or_default())
        ),
        DStatus::UnknownSampled => format!(
            "unknown (sampled {} of {} assignments, no counterexample)",
            v.assignments_checked, v.assignments_total
        ),
    }
}

fn check(args: CheckArgs) -> Result<Status> {
    let space = read_space(&args.space)?;
    let mut caps = Caps::from_env();
    if let Some(cap) = args.cap {
        caps.assignments = cap;
    }
    let everything = args.all || args.props.is_empty();
    let mut props: Vec<Prop> = if everything { ALL_PROPS.to_vec() } else { args.props };
    let mut violations = Vec::new();
    let mut lines = Vec::new();
    let mut doc = Map::new();
    if space.n() > caps.order_search {
        if everything {
            props.retain(|p| !matches!(p, Prop::Gls | Prop::LeftSep));
            lines.push(format!("GLS, left-separated: skipped above {} points", caps.order_search));
        } else if props.iter().any(|p| matches!(p, Prop::Gls | Prop::LeftSep)) {
            bail!("order searches accept at most {} points, the space has {}", caps.order_search, space.n());
        }
    }
    let (mut e, mut l, mut d) = (None, None, None);
    for prop in &props {
        match prop {
            Prop::T0 => {
                let v = separation_level(&space).t0;
                lines.push(format!("T0: {}", yes_no(v)));
                doc.insert("t0".into(), json!(v));
            }
            Prop::T1 => {
                let v = separation_level(&space).t1;
                lines.push(format!("T1: {}", yes_no(v)));
                doc.insert("t1".into(), json!(v));
            }
            Prop::Extent => {
                let v = extent(&space);
                e = Some(v);
                lines.push(format!("extent: {v}"));
                doc.insert("extent".into(), json!(v));
            }
            Prop::Lindelof => {
                let v = lindelof_degree(&space);
                l = Some(v);
                lines.push(format!("Lindelöf degree: {v}"));
                doc.insert("lindelof_degree".into(), json!(v));
            }
            Prop::Exclusiveness => {
                let ex = exclusiveness(&space);
                if !ex.agree() {
                    violations.push(format!("exclusiveness routes disagree: {ex:?}"));
                }
                lines.push(format!("exclusiveness: {}", ex.kappa()));
                doc.insert("exclusiveness".into(), json!(ex.kappa()));
            }
            Prop::D => {
                let v = dspace_check(&space, caps.assignments, args.seed);
                d = Some(v.status);
                lines.push(format!("D: {}", d_text(&v)));
                doc.insert("is_d".into(), serde_json::to_value(&v)?);
            }
            Prop::Ad => {
                let v = is_ad(&space);
                lines.push(format!("aD: {}", yes_no(v)));
                doc.insert("is_ad".into(), json!(v));
            }
            Prop::Gls => {
                let r = gls_search(&space, &caps)?;
                if let Some(r) = &r {
                    if !r.validates(&space) {
                        violations.push("GLS witness fails validation".into());
                    }
                    lines.push(format!("GLS: yes (pairs {:?})", r.pairs()));
                } else {
                    lines.push("GLS: no".into());
                }
                doc.insert("gls".into(), json!(r.map(|r| r.pairs())));
            }
            Prop::LeftSep => {
                let o = left_separated_search(&space, &caps)?;
                match &o {
                    Some(order) => lines.push(format!("left-separated: yes (order {order:?})")),
                    None => lines.push("left-separated: no".into()),
                }
                doc.insert("left_separated".into(), json!(o));
            }
            Prop::Opens => {
                lines.push(format!("opens: {}", space.open_count()));
                doc.insert("open_count".into(), json!(space.open_count()));
            }
        }
    }
    if let (Some(e), Some(l)) = (e, l) {
        if e > l {
            violations.push(format!("extent {e} exceeds Lindelöf degree {l}"));
        }
        if d == Some(DStatus::Yes) && e != l {
            violations.push(format!("D-space with extent {e} and Lindelöf degree {l}"));
        }
    }
    if args.json {
        doc.insert("violations".into(), json!(violations));
        println!("{}", serde_json::to_string_pretty(&Value::Object(doc))?);
    } else {
        for line in lines {
            println!("{line}");
        }
        for v in &violations {
            println!("violation: {v}");
        }
    }
    Ok(if violations.is_empty() { Status::Ok } else { Status::Violation })
}

fn puf(args: PufArgs) -> Result<Status> {
    let caps = Caps::from_env();
    let built = build_puf_space(args.n, &caps)?;
    if args.oracle {
        let oracle = upset_oracle(args.n)?;
        if oracle != built.space {
            println!(
                "violation: construction has {} opens, up-set oracle {}",
                built.space.open_count(),
                oracle.open_count()
            );
            return Ok(Status::Violation);
        }
        println!("oracle: equal ({} opens)", oracle.open_count());
    }
    let mut doc = SpaceDocument::from_space(&built.space);
    doc.ground = Some((0..built.point_count()).map(|c| PointSet::from_bits(args.n, c as u64).map(|s| s.to_vec())).collect::<Result<_, _>>()?);
    write_space(&args.out, &doc)?;
    println!(
        "wrote {}: {} points, {} opens",
        args.out.display(),
        built.point_count(),
        built.space.open_count()
    );
    Ok(Status::Ok)
}

fn kernel(args: KernelArgs) -> Result<Status> {
    let space = read_space(&args.space)?;
    let n = read_assignment(&args.assignment)?
        .to_neighborhood(&space)
        .map_err(|e| anyhow::anyhow!("{}: {e}", args.assignment.display()))?;
    let caps = Caps::from_env();
    let shown = |k: Option<PointSet>| k.map_or("none".to_string(), |k| k.to_string());
    if args.greedy {
        let order = args.order.unwrap_or_else(|| (0..space.n()).collect());
        let out = greedy_kernel(&n, &order)?;
        println!("mode: greedy");
        println!("{out}");
        println!("kernel: {}", shown(out.success().then_some(out.kernel)));
    } else if args.greedy_all {
        let all = greedy_kernel_all_orders(&n, &caps)?;
        println!("mode: greedy-all");
        println!("orders tried: {}, succeeded: {}", all.orders_tried, all.successes);
        if let Some(out) = &all.first_success {
            println!("{out}");
            println!("kernel: {} via order {:?}", out.kernel, out.order);
        } else {
            println!("kernel: none");
        }
        if let Some(f) = &all.finding {
            println!("finding: {f}");
        }
    } else {
        println!("mode: brute");
        println!("kernel: {}", shown(kernel_search(&n)?));
    }
    Ok(Status::Ok)
}

fn map(args: MapArgs) -> Result<Status> {
    let m = read_map(&args.map)?;
    let c = check_continuous(&m);
    match c.offending_open {
        None => println!("continuous: yes"),
        Some(u) => println!("continuous: no (preimage of {u} is not open)"),
    }
    println!("injective: {}", yes_no(m.is_injective()));
    println!("surjective: {}", yes_no(m.is_surjective()));
    println!("closed map: {}", yes_no(m.is_closed_map()));
    if !c.continuous {
        return Ok(Status::Ok);
    }
    let mono = is_mono(&m)?;
    let epi = is_epi(&m)?;
    println!("mono: {}", yes_no(mono.categorical));
    println!("epi: {}", yes_no(epi.categorical));
    if !(mono.agree() && epi.agree()) {
        println!("violation: categorical and concrete routes disagree ({mono:?}, {epi:?})");
        return Ok(Status::Violation);
    }
    Ok(Status::Ok)
}

fn catalog(args: CatalogArgs) -> Result<Status> {
    let mode = if args.unlabeled { Mode::UpToHomeomorphism } else { Mode::Labeled };
    let spaces = enumerate_topologies(args.n, mode)?;
    let caps = Caps::from_env();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(args.jobs.max(1)).build()?;
    let records: Vec<CatalogRecord> = pool.install(|| {
        spaces
            .par_iter()
            .map(|s| fingerprint(s, &caps, args.samples, args.seed))
            .collect::<Result<_, _>>()
    })?;
    let file = std::fs::File::create(&args.out).with_context(|| format!("cannot write {}", args.out.display()))?;
    let mut out = std::io::BufWriter::new(file);
    let mut violations = 0;
    for r in &records {
        serde_json::to_writer(&mut out, r)?;
        writeln!(out)?;
        violations += usize::from(!r.fingerprint.invariant_violations().is_empty());
    }
    out.flush()?;
    println!("wrote {} records to {}", records.len(), args.out.display());
    if violations > 0 {
        println!("violation: {violations} records break a fingerprint invariant");
        return Ok(Status::Violation);
    }
    Ok(Status::Ok)
}

fn suite(args: SuiteArgs) -> Result<Status> {
    let config = SuiteConfig {
        max_n: args.max_n,
        seed: args.seed,
        samples: args.samples,
        caps: Caps::from_env(),
        inject: Vec::new(),
    };
    let report = run_suite(&config)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("{report}");
    }
    Ok(if report.exit_code() == 0 { Status::Ok } else { Status::Violation })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => check(a),
        Command::Puf(a) => puf(a),
        Command::Kernel(a) => kernel(a),
        Command::Map(a) => map(a),
        Command::Catalog(a) => catalog(a),
        Command::Suite(a) => suite(a),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
