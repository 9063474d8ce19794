//! `scramblekit` command-line tool.
//!
//! Lines starting with `::` are machine-readable `key=value` records and are
//! identical across runs for identical inputs; everything else is for humans.

mod output;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use output::Out;
use scramblekit::divisor::{reduce, DivisorError};
use scramblekit::families::FamilySpec;
use scramblekit::io::{parse_divisor, parse_graph, parse_scramble, to_dot, write_graph};
use scramblekit::report::{compute_report, ReportError, ReportOptions};
use scramblekit::scramble::ScrambleError;
use scramblekit::search::{sn_exact, sn_lower_bound, SnStrategies, DEFAULT_EXACT_CAP};
use scramblekit::treewidth::{treewidth, width_of_order, TreewidthError, DEFAULT_VERTEX_CAP};
use scramblekit::{gonality, has_positive_rank, is_reduced, scramble_order, Divisor, Multigraph};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

const EXIT_BAD_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_SANDWICH: u8 = 4;

#[derive(Parser)]
#[command(name = "scramblekit", version, about = "Scramble number, gonality and treewidth of multigraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a named graph family in text or DOT format.
    Gen {
        /// Family name (see `--help` for the list).
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(FamilySpec::NAMES))]
        family: String,
        /// Family parameters, e.g. `4 4` for a torus.
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        dot: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compute invariants and check tw ≤ sn ≤ gon. Exit 0 iff the check holds.
    Invariants {
        graph: PathBuf,
        #[command(flatten)]
        select: Selection,
        #[command(flatten)]
        caps: Caps,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Order of a scramble with hitting-set and cut certificates.
    Order { graph: PathBuf, scramble: PathBuf },
    /// Exact treewidth with an elimination order.
    Tw {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
    },
    /// Gonality with a witness divisor.
    Gonality {
        graph: PathBuf,
        /// Largest degree to search (default: vertex count).
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Reduce an effective divisor at a vertex and print the firing script.
    Reduce { graph: PathBuf, divisor: PathBuf, vertex: usize },
    /// Test whether an effective divisor has positive rank.
    Rank { graph: PathBuf, divisor: PathBuf },
    /// Best scramble found by the construction portfolio.
    SnLower {
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Local search steps; 0 disables local search.
        #[arg(long, default_value_t = SnStrategies::default().local_search_steps)]
        steps: usize,
    },
    /// Exact scramble number by exhaustive search on small graphs.
    SnExact {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
        cap: usize,
    },
    /// Run the invariant report over a range of family parameters.
    Sweep(SweepArgs),
    /// Convert a graph file to DOT.
    ExportDot {
        graph: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy)]
struct Selection {
    #[arg(long)]
    tw: bool,
    #[arg(long)]
    gon: bool,
    #[arg(long)]
    sn_lower: bool,
    #[arg(long)]
    sn_exact: bool,
}

#[derive(Args, Clone, Copy)]
struct Caps {
    /// Vertex cap for the exact scramble number search.
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    cap: usize,
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    tw_cap: usize,
    /// Largest gonality degree to search (default: vertex count).
    #[arg(long)]
    gon_cap: Option<u64>,
}

#[derive(Args)]
struct SweepArgs {
    family: String,
    /// One entry per family parameter: a value or an inclusive range `a..b`.
    params: Vec<String>,
    /// Number of consecutive seeds per parameter combination.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop starting new instances after this many seconds.
    #[arg(long)]
    budget: Option<f64>,
    #[command(flatten)]
    select: Selection,
    #[command(flatten)]
    caps: Caps,
}

/// Failure with a specific exit code.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(Exit(code, _)) = cause.downcast_ref::<Exit>() {
            return *code;
        }
        let cap = cause.downcast_ref::<ReportError>().is_some_and(ReportError::is_cap)
            || matches!(cause.downcast_ref::<TreewidthError>(), Some(TreewidthError::TooLarge { .. }))
            || matches!(cause.downcast_ref::<ScrambleError>(), Some(ScrambleError::TooLarge { .. }))
            || matches!(cause.downcast_ref::<DivisorError>(), Some(DivisorError::CapExceeded(_)));
        if cap {
            return EXIT_CAP;
        }
    }
    EXIT_BAD_INPUT
}

fn read(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        return std::io::read_to_string(std::io::stdin()).context("reading standard input");
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Multigraph> {
    parse_graph(&read(path)?).with_context(|| format!("parsing graph {}", path.display()))
}

/// Graph for an invariant command: at least two vertices.
fn load_invariant_graph(path: &Path) -> Result<Multigraph> {
    let g = load_graph(path)?;
    if g.n() < 2 {
        bail!("{}: invariants need a graph with at least two vertices", path.display());
    }
    Ok(g)
}

fn load_divisor(path: &Path, g: &Multigraph) -> Result<Divisor> {
    let d = parse_divisor(&read(path)?).with_context(|| format!("parsing divisor {}", path.display()))?;
    if d.len() != g.n() {
        bail!("divisor has {} vertices but the graph has {}", d.len(), g.n());
    }
    Ok(d)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn options(select: Selection, caps: Caps, seed: u64) -> ReportOptions {
    let none = !(select.tw || select.gon || select.sn_lower || select.sn_exact);
    ReportOptions {
        treewidth: none || select.tw,
        gonality: none || select.gon,
        sn_lower: none || select.sn_lower,
        sn_exact: select.sn_exact,
        treewidth_cap: caps.tw_cap,
        sn_exact_cap: caps.cap,
        gonality_cap: caps.gon_cap,
        strategies: SnStrategies { seed, ..SnStrategies::default() },
    }
}

fn run(cli: Cli, out: &mut Out) -> Result<u8> {
    match cli.command {
        Command::Gen { family, params, seed, dot, out: path } => {
            let spec = FamilySpec::parse(&family, &params, seed)?;
            let g = spec.build()?;
            let text = if dot { to_dot(&g, &spec.to_string()) } else { write_graph(&g) };
            emit(&text, path.as_deref())?;
        }
        Command::ExportDot { graph, out: path } => {
            let g = load_graph(&graph)?;
            let name = graph.file_stem().map_or("g".into(), |s| s.to_string_lossy().into_owned());
            emit(&to_dot(&g, &name), path.as_deref())?;
        }
        Command::Invariants { graph, select, caps, seed } => {
            let g = load_invariant_graph(&graph)?;
            let report = compute_report(&g, &options(select, caps, seed))?;
            out.report(&report);
            if !report.sandwich_ok {
                out.human("SANDWICH VIOLATED: tw ≤ sn ≤ gon does not hold for the computed values");
                return Ok(EXIT_SANDWICH);
            }
        }
        Command::Order { graph, scramble } => {
            let g = load_graph(&graph)?;
            let s = parse_scramble(&g, &read(&scramble)?)
                .with_context(|| format!("parsing scramble {}", scramble.display()))?;
            let cert = scramble_order(&g, &s);
            cert.verify(&g, &s).map_err(|e| anyhow!("certificate failed re-verification: {e}"))?;
            out.certificate("", &s, &cert);
        }
        Command::Tw { graph, cap } => {
            let g = load_invariant_graph(&graph)?;
            let start = Instant::now();
            let r = treewidth(&g, Some(cap))?;
            if width_of_order(&g, &r.elimination_order)? != r.width {
                bail!("elimination order does not reproduce the width");
            }
            out.treewidth(&r, start.elapsed());
        }
        Command::Gonality { graph, cap } => {
            let g = load_invariant_graph(&graph)?;
            let start = Instant::now();
            let r = gonality(&g, cap)?;
            if !has_positive_rank(&g, &r.witness)? {
                bail!("gonality witness does not have positive rank");
            }
            out.gonality(&r, start.elapsed());
        }
        Command::Reduce { graph, divisor, vertex } => {
            let g = load_invariant_graph(&graph)?;
            let d = load_divisor(&divisor, &g)?;
            let (reduced, script) = reduce(&g, &d, vertex)?;
            if script.apply(&g, &d) != reduced || !is_reduced(&g, &reduced, vertex)? {
                bail!("reduction script failed re-verification");
            }
            out.reduction(&d, vertex, &reduced, &script);
        }
        Command::Rank { graph, divisor } => {
            let g = load_invariant_graph(&graph)?;
            let d = load_divisor(&divisor, &g)?;
            let positive = has_positive_rank(&g, &d)?;
            out.rank(&g, &d, positive)?;
        }
        Command::SnLower { graph, seed, steps } => {
            let g = load_invariant_graph(&graph)?;
            let strategies = SnStrategies { seed, local_search_steps: steps, ..SnStrategies::default() };
            let start = Instant::now();
            let r = sn_lower_bound(&g, &strategies)?;
            r.certificate
                .verify(&g, &r.best_scramble)
                .map_err(|e| anyhow!("certificate failed re-verification: {e}"))?;
            out.search("sn_lower", "scramble number lower bound", &r, start.elapsed());
        }
        Command::SnExact { graph, cap } => {
            let g = load_invariant_graph(&graph)?;
            let start = Instant::now();
            let r = sn_exact(&g, Some(cap))?;
            r.certificate
                .verify(&g, &r.best_scramble)
                .map_err(|e| anyhow!("certificate failed re-verification: {e}"))?;
            out.search("sn_exact", "scramble number", &r, start.elapsed());
        }
        Command::Sweep(args) => return sweep(args, out),
    }
    Ok(0)
}

/// Expands `3`, `2..5` style parameter entries.
fn expand(entry: &str) -> Result<Vec<String>> {
    let Some((a, b)) = entry.split_once("..") else {
        return Ok(vec![entry.to_string()]);
    };
    let (a, b): (u64, u64) = (
        a.parse().map_err(|_| Exit(EXIT_BAD_INPUT, format!("bad range `{entry}`")))?,
        b.parse().map_err(|_| Exit(EXIT_BAD_INPUT, format!("bad range `{entry}`")))?,
    );
    if a > b {
        bail!(Exit(EXIT_BAD_INPUT, format!("empty range `{entry}`")));
    }
    Ok((a..=b).map(|v| v.to_string()).collect())
}

fn combinations(lists: &[Vec<String>]) -> Vec<Vec<String>> {
    lists.iter().fold(vec![Vec::new()], |acc, list| {
        acc.iter()
            .flat_map(|prefix| {
                list.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect()
    })
}

fn sweep(args: SweepArgs, out: &mut Out) -> Result<u8> {
    let lists = args.params.iter().map(|p| expand(p)).collect::<Result<Vec<_>>>()?;
    let mut specs = Vec::new();
    for params in combinations(&lists) {
        for seed in args.seed..args.seed + args.seeds {
            specs.push(FamilySpec::parse(&args.family, &params, seed)?);
        }
    }
    let opts = options(args.select, args.caps, args.seed);
    let budget = args.budget.map(Duration::from_secs_f64);
    let start = Instant::now();
    let (mut ok, mut violations, mut errors, mut caps, mut skipped, mut too_small) = (0, 0, 0, 0, 0, 0);
    for spec in &specs {
        if budget.is_some_and(|b| start.elapsed() >= b) {
            skipped += 1;
            continue;
        }
        let g = spec.build()?;
        let mut opts = opts.clone();
        opts.sn_exact = opts.sn_exact && g.n() <= opts.sn_exact_cap;
        match compute_report(&g, &opts) {
            Ok(report) => {
                out.sweep_line(spec, &report);
                if report.sandwich_ok {
                    ok += 1;
                } else {
                    violations += 1;
                }
            }
            Err(ReportError::TooSmall) => {
                too_small += 1;
                out.machine(format!("instance family={spec} status=too-small"));
            }
            Err(e) => {
                if e.is_cap() {
                    caps += 1;
                } else {
                    errors += 1;
                }
                out.human(format!("{spec}: {e}"));
                out.machine(format!("instance family={spec} status=error"));
            }
        }
    }
    out.human(format!(
        "sweep finished: {} instances, {ok} ok, {violations} violations, {caps} over caps, {errors} errors, {too_small} too small, {skipped} skipped by budget [{:.2?}]",
        specs.len(),
        start.elapsed()
    ));
    out.machine(format!(
        "sweep instances={} ok={ok} violations={violations} cap_errors={caps} errors={errors} too_small={too_small} skipped={skipped}",
        specs.len()
    ));
    Ok(if violations > 0 {
        EXIT_SANDWICH
    } else if caps > 0 {
        EXIT_CAP
    } else if errors > 0 {
        EXIT_BAD_INPUT
    } else {
        0
    })
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("SCRAMBLEKIT_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Exit(EXIT_BAD_INPUT, format!("SCRAMBLEKIT_THREADS must be a positive integer, got `{value}`")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out::stdout();
    let result = configure_threads().and_then(|()| run(cli, &mut out));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
