use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use pgcaps::arcs::{self, Arc};
use pgcaps::bounds::{self, BoundTable};
use pgcaps::caps::{Cap, ScanMode};
use pgcaps::constructions;
use pgcaps::geometry::Geometry;
use pgcaps::gf2e::{FieldTable, MAX_DEGREE};
use pgcaps::harness::{self, Config, VerifySettings};
use pgcaps::pointset::PointSet;
use pgcaps::search::{self, SearchConfig, Strategy};
use pgcaps::Error;

#[derive(Parser)]
#[command(name = "pgcaps", version, about = "Arcs and caps in PG(2, q) and PG(3, q), q even")]
struct Cli {
    /// Base seed for every randomized step
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Flat key = value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Markdown,
}

#[derive(Subcommand)]
enum Command {
    /// Print the log/antilog tables of GF(2^h)
    Describe {
        #[arg(long, conflicts_with = "q")]
        h: Option<u32>,
        #[arg(long)]
        q: Option<u64>,
    },
    /// Geometry utilities
    Geometry {
        #[command(subcommand)]
        action: GeometryAction,
    },
    /// Check, complete, or find the nucleus of a plane arc
    Arc {
        #[arg(value_enum)]
        action: ArcAction,
        #[command(flatten)]
        input: PointsInput,
    },
    /// Cap reports
    Cap {
        #[command(subcommand)]
        action: CapAction,
    },
    /// Build a known extremal object
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        #[arg(long)]
        q: Option<u64>,
        /// Dimension of the binary cap
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Sample the spectrum of complete caps by greedy completion
    Search {
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long, default_value = "uniform")]
        strategy: Strategy,
        /// JSON file with a starting cap
        #[arg(long)]
        start: Option<PathBuf>,
    },
    /// Evaluate the bound catalog
    Bounds {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        q: Option<u64>,
        /// Every power of two from 2 up to this value
        #[arg(long)]
        all_q_upto: Option<u64>,
    },
    /// Run every acceptance check and write a JSON report
    #[command(alias = "verify-paper")]
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum GeometryAction {
    /// Points and planes with indices and coordinates
    Dump {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        q: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ArcAction {
    Verify,
    Nucleus,
    Complete,
}

#[derive(Subcommand)]
enum CapAction {
    Report {
        #[command(flatten)]
        input: PointsInput,
        /// Section profile as CSV
        #[arg(long)]
        csv: bool,
        /// Scan every external point regardless of q
        #[arg(long)]
        exhaustive: bool,
    },
}

#[derive(Args)]
struct PointsInput {
    #[arg(long)]
    q: u64,
    /// JSON list of indices or coordinate vectors, or a file holding one
    #[arg(long)]
    points: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstructKind {
    Ovoid,
    Hyperoval,
    Binary,
}

#[derive(Args)]
struct VerifyArgs {
    /// q values to exercise (repeatable)
    #[arg(long = "q")]
    qs: Vec<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    random_sets: Option<usize>,
    #[arg(long)]
    completion_trials: Option<usize>,
}

/// A failed check (exit 1) or bad input (exit 2).
enum Failure {
    Check(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UniquenessViolation(_) | Error::Hypothesis(_) | Error::Internal(_) => {
                Failure::Check(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

struct Ctx {
    cfg: Config,
    format: Format,
}

impl Ctx {
    fn seed(&self) -> u64 {
        self.cfg.seed.unwrap_or(harness::DEFAULT_SEED)
    }

    /// --q, or the single q of the config file.
    fn q(&self, flag: Option<u64>) -> CliResult<u64> {
        match (flag, self.cfg.q.as_deref()) {
            (Some(q), _) => Ok(q),
            (None, Some([q])) => Ok(*q),
            _ => Err(Failure::Usage("--q is required".into())),
        }
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.cfg.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| Failure::Usage(format!("{path}: {e}"))),
            None => {
                let mut out = std::io::stdout().lock();
                match writeln!(out, "{}", text.trim_end()) {
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                        Err(Failure::Usage(e.to_string()))
                    }
                    _ => Ok(()),
                }
            }
        }
    }

    fn emit_json(&self, value: &impl Serialize) -> CliResult<()> {
        let text = serde_json::to_string_pretty(value).expect("serializable");
        self.emit(&text)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    let file = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let flags = Config {
        seed: cli.seed,
        threads: cli.threads,
        out: cli.out.as_ref().map(|p| p.display().to_string()),
        ..Config::default()
    };
    let cfg = file.overlay(flags);
    let format = match (cli.format, cfg.format.as_deref()) {
        (Some(f), _) => f,
        (None, None) => Format::Json,
        (None, Some(name)) => Format::from_str(name, true)
            .map_err(|_| Failure::Usage(format!("unknown format {name:?}")))?,
    };
    if let Some(threads) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let ctx = Ctx { cfg, format };
    match cli.command {
        Command::Describe { h, q } => describe(&ctx, h, q),
        Command::Geometry { action: GeometryAction::Dump { n, q } } => {
            ctx.emit_json(&Geometry::build_pg(n, q)?.dump())?;
            Ok(0)
        }
        Command::Arc { action, input } => arc(&ctx, action, &input),
        Command::Cap { action: CapAction::Report { input, csv, exhaustive } } => {
            cap_report(&ctx, &input, csv, exhaustive)
        }
        Command::Construct { kind, q, n } => construct(&ctx, kind, q, n),
        Command::Search { q, restarts, strategy, start } => search(&ctx, q, restarts, strategy, start),
        Command::Bounds { n, q, all_q_upto } => bounds_cmd(&ctx, n, q, all_q_upto),
        Command::Verify(args) => verify(ctx, args),
    }
}

fn describe(ctx: &Ctx, h: Option<u32>, q: Option<u64>) -> CliResult<u8> {
    let tables = match (h, q) {
        (Some(h), _) => vec![FieldTable::new(h)?],
        (None, Some(q)) => vec![FieldTable::with_order(q)?],
        (None, None) => (1..=MAX_DEGREE).map(FieldTable::new).collect::<Result<_, _>>()?,
    };
    if tables.len() == 1 {
        ctx.emit_json(&tables[0])?;
    } else {
        ctx.emit_json(&tables)?;
    }
    Ok(0)
}

fn arc(ctx: &Ctx, action: ArcAction, input: &PointsInput) -> CliResult<u8> {
    let g = Geometry::build_pg(2, input.q)?;
    let points = harness::parse_points(&g, &input.points)?;
    let set = PointSet::new(&g, points.iter().copied())?;
    let check = arcs::is_arc(&g, &set);
    if !check.is_arc {
        ctx.emit_json(&json!({ "k": set.len(), "is_arc": false, "witness": check.witness }))?;
        return Ok(1);
    }
    let arc = Arc::new(&g, points)?;
    let nucleus = match action {
        ArcAction::Nucleus => Some(arc.nucleus(&g)?),
        _ => arc.nucleus(&g).ok(),
    };
    let completion = match action {
        ArcAction::Complete => Some(arc.complete_to_hyperoval(&g)?),
        _ if arcs::in_completion_range(input.q, arc.k() as u64) => arc.complete_to_hyperoval(&g).ok(),
        _ => None,
    };
    ctx.emit_json(&json!({
        "k": arc.k(),
        "is_arc": true,
        "tangent_table": arc.tangent_report(&g),
        "nucleus": nucleus,
        "completion": completion.map(|h| h.members().to_vec()),
    }))?;
    Ok(0)
}

fn cap_report(ctx: &Ctx, input: &PointsInput, csv: bool, exhaustive: bool) -> CliResult<u8> {
    let g = Geometry::build_pg(3, input.q)?;
    let points = harness::parse_points(&g, &input.points)?;
    let cap = Cap::new(&g, points)?;
    let scan = match (exhaustive, ScanMode::default_for(g.q(), ctx.seed())) {
        (true, _) => ScanMode::Exhaustive,
        (false, ScanMode::Sampled { seed, .. }) => ScanMode::Sampled {
            samples: ctx.cfg.samples.unwrap_or(pgcaps::caps::DEFAULT_SAMPLES),
            seed,
        },
        (false, s) => s,
    };
    let report = cap.report(&g, scan);
    if csv || ctx.format == Format::Csv {
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(["x", "planes"]).map_err(csv_err)?;
        for (x, n) in &report.section_profile {
            w.write_record([x.to_string(), n.to_string()]).map_err(csv_err)?;
        }
        ctx.emit(&csv_text(w)?)?;
    } else {
        ctx.emit_json(&report)?;
    }
    let ok = report.plane_section_check.as_ref().is_none_or(|c| c.pass)
        && report.external_tangent_check.as_ref().is_none_or(|c| c.pass);
    Ok(if ok { 0 } else { 1 })
}

fn construct(ctx: &Ctx, kind: ConstructKind, q: Option<u64>, n: usize) -> CliResult<u8> {
    let out = match kind {
        ConstructKind::Ovoid => {
            let g = Geometry::build_pg(3, ctx.q(q)?)?;
            let (cap, spec) = constructions::elliptic_quadric(&g)?;
            let report = cap.report(&g, ScanMode::default_for(g.q(), ctx.seed()));
            json!({ "spec": spec, "points": cap.members(), "report": report })
        }
        ConstructKind::Hyperoval => {
            let g = Geometry::build_pg(2, ctx.q(q)?)?;
            let (arc, spec) = constructions::hyperoval_conic(&g)?;
            json!({ "spec": spec, "points": arc.members(), "tangent_table": arc.tangent_report(&g) })
        }
        ConstructKind::Binary => {
            let b = constructions::binary_affine_cap(n)?;
            let mut v = json!({ "n": b.n, "q": 2, "size": b.size });
            if let Some((g, cap)) = &b.materialized {
                v["points"] = json!(cap.members());
                v["report"] = json!(cap.report(g, ScanMode::Exhaustive));
            }
            v
        }
    };
    ctx.emit_json(&out)?;
    Ok(0)
}

fn search(
    ctx: &Ctx,
    q: Option<u64>,
    restarts: Option<usize>,
    strategy: Strategy,
    start: Option<PathBuf>,
) -> CliResult<u8> {
    let q = ctx.q(q)?;
    let g = Geometry::build_pg(3, q)?;
    let restarts = restarts.or(ctx.cfg.restarts).unwrap_or(100);
    let mut cfg = SearchConfig::new(ctx.seed(), restarts, strategy);
    if let Some(path) = start {
        cfg.start = Some(harness::parse_points(&g, &path.display().to_string())?);
    }
    let spectrum = search::spectrum_sample(&g, &cfg)?;
    let annotations = harness::annotate_sizes(q, &spectrum)?;
    ctx.emit_json(&json!({
        "q": q,
        "counts": spectrum.counts,
        "annotations": annotations,
        "witnesses": spectrum.witnesses,
        "config": spectrum.config,
    }))?;
    Ok(0)
}

fn csv_err(e: csv::Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn csv_text(w: csv::Writer<Vec<u8>>) -> CliResult<String> {
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn bounds_cmd(ctx: &Ctx, n: usize, q: Option<u64>, upto: Option<u64>) -> CliResult<u8> {
    let tables: Vec<BoundTable> = match upto {
        Some(m) => bounds::powers_of_two(2, m)
            .map(|q| bounds::evaluate_bounds(n, q))
            .collect::<Result<_, _>>()?,
        None => vec![bounds::evaluate_bounds(n, ctx.q(q)?)?],
    };
    let multi = upto.is_some();
    match ctx.format {
        Format::Json if multi => ctx.emit_json(&tables)?,
        Format::Json => ctx.emit_json(&tables[0])?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(vec![]);
            let mut header = vec!["name", "applicability", "strictness", "value", "integer_cap", "is_minimum"];
            if multi {
                header.insert(0, "q");
            }
            w.write_record(&header).map_err(csv_err)?;
            for t in &tables {
                for b in t.all() {
                    let mut row = vec![
                        b.name.to_string(),
                        b.applicability.to_string(),
                        b.strictness.symbol().to_string(),
                        format!("{:.6}", b.value),
                        b.integer_cap.to_string(),
                        b.is_minimum.to_string(),
                    ];
                    if multi {
                        row.insert(0, t.q.to_string());
                    }
                    w.write_record(&row).map_err(csv_err)?;
                }
            }
            ctx.emit(&csv_text(w)?)?;
        }
        Format::Markdown => {
            let mut s = String::new();
            for t in &tables {
                s += &format!("### n = {}, q = {}\n\n", t.n, t.q);
                s += "| name | quantity | strictness | exact | value | integer cap | minimum |\n";
                s += "|---|---|---|---|---|---|---|\n";
                for b in t.all() {
                    let quantity = serde_json::to_value(b.quantity).expect("serializable");
                    s += &format!(
                        "| {} | {} | {} | `{}` | {:.6} | {} | {} |\n",
                        b.name,
                        quantity.as_str().unwrap_or(""),
                        b.strictness.symbol(),
                        b.exact,
                        b.value,
                        b.integer_cap,
                        if b.is_minimum { "yes" } else { "" },
                    );
                }
                s += "\n";
            }
            ctx.emit(&s)?;
        }
    }
    Ok(0)
}

fn verify(ctx: Ctx, args: VerifyArgs) -> CliResult<u8> {
    let flags = Config {
        q: (!args.qs.is_empty()).then_some(args.qs),
        restarts: args.restarts,
        samples: args.samples,
        random_sets: args.random_sets,
        completion_trials: args.completion_trials,
        ..Config::default()
    };
    let cfg = ctx.cfg.clone().overlay(flags);
    let settings = VerifySettings::from_config(&cfg)?;
    let manifest = harness::run_verify(&settings, std::env::args().collect())?;
    let code = manifest.exit_code();
    let ctx = Ctx { cfg, ..ctx };
    ctx.emit_json(&manifest)?;
    for e in &manifest.entries {
        let verdict: Value = serde_json::to_value(e.verdict).expect("serializable");
        eprintln!("{:<28} {:<8} {}", e.id, verdict.as_str().unwrap_or(""), e.runtime_ms);
    }
    Ok(code as u8)
}
