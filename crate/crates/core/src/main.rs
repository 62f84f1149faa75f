use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use afrc::bench::{self, BenchConfig, BenchGenerator};
use afrc::curvature::{self, curvature_stats, CurvatureKind, Histogram};
use afrc::io::{load_edge_list, write_edge_list};
use afrc::rewiring::{afr_rewire, Iterations, RewireConfig};
use afrc::rng::{SeededRng, DEFAULT_SEED};
use afrc::smoothing::{self, Aggregation, BoundCheckResult, CheckStatus, DecayCurvature, MpConfig, UpdateMap};
use afrc::{generators, Error, Graph};

const EXIT_USAGE: u8 = 1;
const EXIT_CAPABILITY: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;

/// Augmented Forman-Ricci curvature, bound checks and curvature-guided rewiring.
///
/// Exit codes: 0 success, 1 usage, parse or hypothesis error, 2 capability
/// guard exceeded, 3 a bound check failed.
#[derive(Parser, Debug)]
#[command(name = "afrc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-edge curvature records.
    Curvature(CurvatureArgs),
    /// Add and remove edges by curvature.
    Rewire(RewireArgs),
    /// Check the curvature and message-passing bounds numerically.
    Verify(VerifyArgs),
    /// Summary statistics of curvature over graphs or directories of graphs.
    Stats(StatsArgs),
    /// Time curvature computation over a ladder of generated graphs.
    Bench(BenchArgs),
}

fn parse_kind(s: &str) -> Result<CurvatureKind, String> {
    s.parse::<CurvatureKind>().map_err(|e| e.to_string())
}

fn parse_iterations(s: &str) -> Result<Iterations, String> {
    if s == "until-stable" {
        return Ok(Iterations::UntilStable);
    }
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("expected a positive count or `until-stable`, got `{s}`")),
        Ok(n) => Ok(Iterations::Count(n)),
    }
}

#[derive(Args, Debug)]
struct CurvatureArgs {
    input: PathBuf,
    #[arg(long, default_value = "af3", value_parser = parse_kind)]
    kind: CurvatureKind,
    /// Write records here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print a histogram of the values.
    #[arg(long)]
    histogram: bool,
    /// Largest endpoint degree the exact transport reference accepts.
    #[arg(long, default_value_t = curvature::DEFAULT_TRANSPORT_GUARD)]
    transport_guard: usize,
}

#[derive(Args, Debug)]
struct RewireArgs {
    input: PathBuf,
    #[arg(long, default_value = "af3", value_parser = parse_kind)]
    kind: CurvatureKind,
    /// Pick budgets from the two-mode fit of the curvature distribution.
    #[arg(long, conflicts_with_all = ["add", "remove"])]
    heuristic: bool,
    /// Number of lowest-curvature edges to relieve per round.
    #[arg(long)]
    add: Option<usize>,
    /// Number of highest-curvature edges to remove per round.
    #[arg(long)]
    remove: Option<usize>,
    /// A positive count or `until-stable`.
    #[arg(long, default_value = "1", value_parser = parse_iterations)]
    iterations: Iterations,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the rewired edge list here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Thm31,
    Thm32,
    Prop33,
    Prop34,
    Lemma1,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Edge list to check; omit with --generate.
    #[arg(required_unless_present = "generate")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "all")]
    check: Check,
    /// Lipschitz constant of the update map.
    #[arg(long = "L", default_value_t = 1.0)]
    lipschitz: f64,
    /// Bound of the message map.
    #[arg(long = "M", default_value_t = 1.0)]
    message_bound: f64,
    /// Bound on initial feature norms.
    #[arg(long = "C", default_value_t = 1.0)]
    feature_bound: f64,
    /// Random initializations per one-layer check.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Layers for the decay check.
    #[arg(long, default_value_t = 40)]
    layers: usize,
    #[arg(long, default_value_t = 4)]
    dim: usize,
    /// Curvature floor for the decay check; defaults to the smallest edge curvature.
    #[arg(long)]
    delta: Option<f64>,
    /// Curvature used by the decay check.
    #[arg(long, default_value = "af4", value_parser = parse_kind)]
    decay_kind: CurvatureKind,
    /// Use L·tanh as the update map.
    #[arg(long)]
    tanh: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Check this many random G(n, p) graphs instead of an input file.
    #[arg(long)]
    generate: Option<usize>,
    /// Largest node count for generated graphs.
    #[arg(long, default_value_t = 60)]
    max_nodes: usize,
    /// Write per-row results as JSON here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StatsArgs {
    /// Edge lists, or directories whose files are edge lists.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "af3,af4", value_parser = parse_kind)]
    kinds: Vec<CurvatureKind>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, default_value = "gnp")]
    generator: BenchGenerator,
    /// Ascending sizes; defaults to a five-step doubling ladder.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', default_value = "af3,af4", value_parser = parse_kind)]
    kind: Vec<CurvatureKind>,
    #[arg(long, default_value_t = 8)]
    mean_degree: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write rows and slopes as JSON here.
    #[arg(long)]
    report: Option<PathBuf>,
}

/// A failure with its exit code; the message goes to standard error.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Capability { .. } => EXIT_CAPABILITY,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn io_failure(path: &Path, source: io::Error) -> Failure {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
    .into()
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Curvature(a) => cmd_curvature(a),
        Command::Rewire(a) => cmd_rewire(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("afrc: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn write_output(path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> CmdResult {
    match path {
        Some(p) => {
            let file = fs::File::create(p).map_err(|e| io_failure(p, e))?;
            let mut w = io::BufWriter::new(file);
            write(&mut w).and_then(|_| w.flush()).map_err(|e| io_failure(p, e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w).and_then(|_| w.flush()).map_err(|e| io_failure(Path::new("<stdout>"), e))
        }
    }
}

fn cmd_curvature(a: CurvatureArgs) -> CmdResult {
    let g = load_edge_list(&a.input)?;
    let opts = curvature::CurvatureOptions {
        transport_guard: a.transport_guard,
        ..Default::default()
    };
    let map = curvature::compute_all_with(&g, a.kind, &opts)?;
    let mut records = Vec::new();
    curvature::write_curvature_report(&g, &map, &mut records)?;
    if a.out.is_some() || !a.histogram {
        write_output(a.out.as_deref(), |w| w.write_all(&records))?;
    }
    if a.out.is_some() {
        println!("{} edges, kind {}", map.len(), map.kind);
    }
    if a.histogram {
        let h = Histogram::freedman_diaconis(a.kind, &map.values);
        println!("{:>12} {:>12} {:>8}", "from", "to", "count");
        for (i, c) in h.counts.iter().enumerate() {
            println!("{:>12} {:>12} {:>8}", h.bin_edges[i], h.bin_edges[i + 1], c);
        }
    }
    Ok(())
}

fn cmd_rewire(a: RewireArgs) -> CmdResult {
    let config = if a.heuristic {
        RewireConfig::heuristic(a.kind, a.seed)
    } else if a.add.is_some() || a.remove.is_some() {
        RewireConfig::fixed(a.kind, a.add.unwrap_or(0), a.remove.unwrap_or(0), a.seed)
    } else {
        return Err(usage("choose --heuristic or --add/--remove budgets"));
    }
    .with_iterations(a.iterations);
    let g = load_edge_list(&a.input)?;
    let (rewired, report) = afr_rewire(&g, &config)?;
    for record in &report.iterations {
        for w in &record.warnings {
            log::warn!("iteration {}: {w}", record.iteration);
        }
    }
    write_output(a.out.as_deref(), |w| write_edge_list(&rewired, w))?;
    if let Some(p) = &a.report {
        let mut json = report.to_json();
        json.push('\n');
        fs::write(p, json).map_err(|e| io_failure(p, e))?;
    }
    if a.out.is_some() {
        println!("{:>9} {:>8} {:>8} {:>12} {:>12} {:>8}", "iteration", "added", "removed", "lower", "upper", "edges");
        for r in &report.iterations {
            let (lo, hi) = match &r.thresholds {
                Some(t) => (format!("{:.4}", t.delta_lower), format!("{:.4}", t.delta_upper)),
                None => ("-".into(), "-".into()),
            };
            println!(
                "{:>9} {:>8} {:>8} {:>12} {:>12} {:>8}",
                r.iteration,
                r.additions_applied.len(),
                r.removals_applied.len(),
                lo,
                hi,
                r.edges_after
            );
        }
        if let Some(why) = &report.stopped_early {
            println!("stopped early: {why}");
        }
    }
    Ok(())
}

/// Outcome of one named check across all graphs it ran on.
#[derive(Default)]
struct CheckTally {
    graphs: usize,
    rows: usize,
    excluded: usize,
    skipped: usize,
    informative: usize,
    min_slack: Option<f64>,
    failure: Option<String>,
}

impl CheckTally {
    fn absorb(&mut self, g: &Graph, r: &BoundCheckResult) {
        self.graphs += 1;
        self.rows += r.rows.len();
        self.excluded += r.excluded.len();
        if r.status == CheckStatus::Pass || r.status == CheckStatus::Fail {
            self.informative += 1;
        }
        if let Some(w) = r.worst() {
            if self.min_slack.is_none_or(|s| w.slack < s) {
                self.min_slack = Some(w.slack);
            }
            if !w.pass && self.failure.is_none() {
                let at = match (w.edge, w.layer) {
                    (Some(e), Some(k)) => format!("edge ({}, {}) at layer {k}", g.label(e.u), g.label(e.v)),
                    (Some(e), None) => format!("edge ({}, {})", g.label(e.u), g.label(e.v)),
                    (None, Some(k)) => format!("all pairs at layer {k}"),
                    (None, None) => "graph".into(),
                };
                self.failure = Some(format!(
                    "{}: {at} observed {} exceeds bound {} (slack {:e})",
                    r.check, w.observed, w.bound, w.slack
                ));
            }
        }
    }

    fn status(&self) -> &'static str {
        if self.failure.is_some() {
            "FAIL"
        } else if self.rows == 0 {
            "empty"
        } else if self.informative == 0 {
            "vacuous"
        } else {
            "pass"
        }
    }
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let checks: Vec<&'static str> = match a.check {
        Check::Thm31 => vec!["thm31"],
        Check::Thm32 => vec!["thm32-sum", "thm32-mean-af3"],
        Check::Prop33 => vec!["prop33"],
        Check::Prop34 => vec!["prop34"],
        Check::Lemma1 => vec!["lemma1"],
        Check::All => vec!["thm31", "thm32-sum", "thm32-mean-af3", "prop33", "prop34", "lemma1"],
    };
    let decay = match a.decay_kind {
        CurvatureKind::Af4 => DecayCurvature::Af4,
        CurvatureKind::Af3 => DecayCurvature::Af3,
        CurvatureKind::OrcRef => return Err(usage("--decay-kind must be af3 or af4")),
    };
    let config = MpConfig {
        lipschitz: a.lipschitz,
        message_bound: a.message_bound,
        feature_bound: a.feature_bound,
        aggregation: Aggregation::Sum,
        layers: a.layers,
        dimension: a.dim,
        seed: a.seed,
        update: if a.tanh { UpdateMap::Tanh } else { UpdateMap::Linear },
    };
    config.validate()?;

    let graphs: Vec<Graph> = match (a.generate, &a.input) {
        (Some(count), _) => {
            let mut rng = SeededRng::new(a.seed);
            (0..count)
                .map(|_| {
                    let n = 2 + rng.below(a.max_nodes.max(2) - 1);
                    let p = rng.uniform(0.02, 0.6);
                    generators::gnp(n, p, &mut rng)
                })
                .collect()
        }
        (None, Some(path)) => vec![load_edge_list(path)?],
        (None, None) => return Err(usage("an input file or --generate is required")),
    };
    // an explicit decay check on a single input must meet its hypotheses
    let strict_decay = a.check == Check::Prop33 && a.generate.is_none();

    let run = |g: &Graph, check: &str| -> Result<Option<BoundCheckResult>, Error> {
        let r = match check {
            "thm31" => smoothing::check_thm31(g),
            "thm32-sum" => smoothing::check_thm32_sum(g, &config, a.trials),
            "thm32-mean-af3" => smoothing::check_thm32_mean_af3(g, &config, a.trials),
            "prop33" => {
                let mean = MpConfig {
                    aggregation: Aggregation::Mean,
                    ..config.clone()
                };
                match smoothing::check_prop33_decay(g, &mean, a.delta, decay) {
                    Err(Error::Hypothesis(why)) if !strict_decay => {
                        log::info!("decay check skipped: {why}");
                        return Ok(None);
                    }
                    other => other,
                }
            }
            "prop34" => smoothing::check_prop34(g),
            "lemma1" => smoothing::check_lemma1(g),
            _ => unreachable!(),
        }?;
        Ok(Some(r))
    };

    let mut tallies: Vec<CheckTally> = checks.iter().map(|_| CheckTally::default()).collect();
    let mut all_results = Vec::new();
    for g in &graphs {
        for (tally, check) in tallies.iter_mut().zip(&checks) {
            match run(g, check)? {
                Some(r) => {
                    tally.absorb(g, &r);
                    if a.report.is_some() {
                        all_results.push(r);
                    }
                }
                None => tally.skipped += 1,
            }
        }
    }

    println!(
        "{:<16} {:>7} {:>8} {:>9} {:>8} {:>14} {:>8}",
        "check", "graphs", "rows", "excluded", "skipped", "min slack", "status"
    );
    for (check, t) in checks.iter().zip(&tallies) {
        let slack = t.min_slack.map_or("-".to_string(), |s| format!("{s:.6e}"));
        println!(
            "{:<16} {:>7} {:>8} {:>9} {:>8} {:>14} {:>8}",
            check,
            t.graphs,
            t.rows,
            t.excluded,
            t.skipped,
            slack,
            t.status()
        );
    }
    if let Some(p) = &a.report {
        let json = serde_json::to_string_pretty(&serde_json::json!({
            "schema": "afrc-verify-report/v1",
            "config": &config,
            "results": all_results,
        }))
        .expect("results are serializable");
        fs::write(p, json + "\n").map_err(|e| io_failure(p, e))?;
    }
    let failures: Vec<&String> = tallies.iter().filter_map(|t| t.failure.as_ref()).collect();
    if let Some(first) = failures.first() {
        return Err(Failure {
            code: EXIT_VERIFICATION,
            message: format!("{} check(s) failed; first witness: {first}", failures.len()),
        });
    }
    Ok(())
}

/// Input files in argument order; a directory contributes its regular files
/// sorted by name.
fn expand_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut files = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut inner: Vec<PathBuf> = fs::read_dir(p)
                .map_err(|e| io_failure(p, e))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|path| path.is_file())
                .collect();
            inner.sort();
            files.extend(inner);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

fn cmd_stats(a: StatsArgs) -> CmdResult {
    let files = expand_inputs(&a.inputs)?;
    if files.is_empty() {
        return Err(usage("no input graphs found"));
    }
    let kinds = a.kinds.clone();
    let guard = curvature::DEFAULT_TRANSPORT_GUARD;
    let per_graph: Vec<(PathBuf, Vec<afrc::CurvatureMap>)> = files
        .par_iter()
        .map(|path| -> Result<_, Error> {
            let g = load_edge_list(path)?;
            let maps = kinds
                .iter()
                .map(|&k| {
                    let opts = curvature::CurvatureOptions {
                        transport_guard: guard,
                        ..Default::default()
                    };
                    curvature::compute_all_with(&g, k, &opts)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok((path.clone(), maps))
        })
        .collect::<Result<_, _>>()?;

    println!(
        "{:<28} {:<8} {:>8} {:>10} {:>10} {:>12} {:>12} {:>8}",
        "graph", "kind", "edges", "min", "max", "mean", "std", "corr"
    );
    let print_rows = |name: &str, maps: &[&afrc::CurvatureMap]| -> CmdResult {
        if maps.first().is_none_or(|m| m.is_empty()) {
            log::warn!("{name}: no edges, skipped");
            return Ok(());
        }
        let stats = curvature_stats(maps)?;
        let corr = stats.correlation.map_or("-".to_string(), |c| format!("{c:.4}"));
        for s in &stats.summaries {
            println!(
                "{:<28} {:<8} {:>8} {:>10} {:>10} {:>12.4} {:>12.4} {:>8}",
                name,
                s.kind.as_str(),
                s.count,
                fmt_stat(s.kind, s.min),
                fmt_stat(s.kind, s.max),
                s.mean,
                s.std,
                corr
            );
        }
        Ok(())
    };
    for (path, maps) in &per_graph {
        let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
        print_rows(&name, &maps.iter().collect::<Vec<_>>())?;
    }
    if per_graph.len() > 1 {
        // pooled maps concatenate values; the shared fingerprint only marks them as aligned
        let pooled: Vec<afrc::CurvatureMap> = kinds
            .iter()
            .enumerate()
            .map(|(i, &kind)| afrc::CurvatureMap {
                kind,
                values: per_graph.iter().flat_map(|(_, m)| m[i].values.iter().copied()).collect(),
                graph_fingerprint: 0,
            })
            .collect();
        print_rows("pooled", &pooled.iter().collect::<Vec<_>>())?;
    }
    Ok(())
}

fn fmt_stat(kind: CurvatureKind, x: f64) -> String {
    if kind.is_integral() {
        format!("{}", x as i64)
    } else {
        format!("{x:.4}")
    }
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    let mut config = BenchConfig::new(a.generator);
    if let Some(sizes) = a.sizes {
        config.sizes = sizes;
    }
    config.kinds = a.kind;
    config.mean_degree = a.mean_degree;
    config.seed = a.seed;
    let report = bench::run_bench(&config)?;
    println!(
        "{:<6} {:>9} {:>10} {:>10} {:>6} {:>14} {:>12}",
        "kind", "size", "nodes", "edges", "d_max", "work", "seconds"
    );
    for r in &report.rows {
        println!(
            "{:<6} {:>9} {:>10} {:>10} {:>6} {:>14.4e} {:>12.6}",
            r.kind.as_str(),
            r.size,
            r.nodes,
            r.edges,
            r.max_degree,
            r.work,
            r.seconds
        );
    }
    for (kind, slope) in &report.slopes {
        let measure = match kind {
            CurvatureKind::Af3 => "|E|·d_max",
            _ => "|E|·d_max²",
        };
        match slope {
            Some(s) => println!("{kind}: log-log slope {s:.3} against {measure}"),
            None => println!("{kind}: slope undefined (fewer than two sizes)"),
        }
    }
    if let Some(p) = &a.report {
        let json = serde_json::to_string_pretty(&report).expect("report is serializable");
        fs::write(p, json + "\n").map_err(|e| io_failure(p, e))?;
    }
    Ok(())
}
