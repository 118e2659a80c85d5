use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use convexdist::certificate::{Certificate, CertificateError};
use convexdist::deduce::Mutation;
use convexdist::geometry::{
    census, gen_random_convex, parse_point_file, run_soundness, DistanceCensus, RegularPolygon,
    SoundnessParams,
};
use convexdist::search::{run_search_observed, AnchorMode, SearchParams, Verdict};
use convexdist::{Engine, Ratio, Rule, TargetSpec};

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_EXHAUSTED: u8 = 2;

const THREADS_ENV: &str = "CONVEXDIST_THREADS";
const COUNTEREXAMPLE_FILE: &str = "convexdist-counterexample.txt";

#[derive(Parser)]
#[command(
    name = "convexdist",
    version,
    about = "Proof search for large-distance counts in convex polygons"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a proof that the target distances occur at most alpha*n times.
    Prove(ProveArgs),
    /// Print the distance census of a convex polygon.
    Census(CensusArgs),
    /// Check the deduction rules against random convex polygons.
    Soundness(SoundnessArgs),
    /// Re-run the search recorded in a certificate and compare verdicts.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct Threads {
    /// Worker threads [default: all cores]
    #[arg(long, env = THREADS_ENV)]
    threads: Option<usize>,
}

impl Threads {
    fn get(&self) -> Result<usize> {
        match self.threads {
            Some(0) => bail!("--threads must be at least 1"),
            Some(n) => Ok(n),
            None => env_threads(),
        }
    }
}

/// Thread count for subcommands without a `--threads` flag.
fn env_threads() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => bail!("{THREADS_ENV} must be a positive integer, got {v:?}"),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

#[derive(Args)]
struct ProveArgs {
    /// Target distance indices, e.g. `2,3`
    #[arg(long, value_delimiter = ',', required = true)]
    targets: Vec<u32>,
    /// Ratio to prove, as `p/q` (must exceed 1)
    #[arg(long)]
    alpha: Ratio,
    /// Level limit [default: 3x the known terminating level, else 30]
    #[arg(long)]
    max_levels: Option<u32>,
    #[command(flatten)]
    threads: Threads,
    /// Stop after this many propagations
    #[arg(long)]
    node_budget: Option<u64>,
    /// Stop after this many seconds
    #[arg(long)]
    time_budget: Option<f64>,
    #[arg(long, default_value = "superset")]
    anchor: AnchorMode,
    /// Certificate path
    #[arg(long, default_value = "certificate.toml")]
    out: PathBuf,
}

#[derive(Args)]
struct CensusArgs {
    /// `regular:N`, `file:PATH` or `random:N,SEED`
    #[arg(long)]
    polygon: String,
    /// Number of largest distances to name [default: from the file header]
    #[arg(long)]
    k: Option<u8>,
}

#[derive(Args)]
struct SoundnessArgs {
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 40)]
    max_n: usize,
    #[arg(long, default_value_t = 4)]
    max_k: u8,
    /// Deliberately break a rule to confirm the harness notices
    #[arg(long, hide = true)]
    mutate: Option<Mutation>,
}

#[derive(Args)]
struct ReplayArgs {
    #[arg(long)]
    cert: PathBuf,
}

/// Terminating levels of the reference runs, used for the default level
/// limit.
fn known_levels(targets: &[u32]) -> Option<u32> {
    let mut t = targets.to_vec();
    t.sort_unstable();
    t.dedup();
    Some(match t.as_slice() {
        [1, 2] => 2,
        [2] => 4,
        [1, 2, 3] => 3,
        [3] => 9,
        [2, 3] => 6,
        [1, 3] => 4,
        [1, 2, 3, 4] => 3,
        [4] => 27,
        _ => return None,
    })
}

fn pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()?;
    Ok(pool.install(f))
}

fn prove(a: ProveArgs) -> Result<u8> {
    let spec = TargetSpec::new(&a.targets, a.alpha)?;
    let mut params = SearchParams::new(
        spec,
        a.max_levels
            .unwrap_or_else(|| known_levels(&a.targets).map_or(30, |l| 3 * l)),
    );
    params.workers = a.threads.get()?;
    params.node_budget = a.node_budget;
    params.time_budget = match a.time_budget {
        Some(s) if !(s > 0.0 && s.is_finite()) => {
            bail!("--time-budget must be a positive number of seconds")
        }
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    params.anchor = a.anchor;
    let outcome = run_search_observed(&params, &mut |p| {
        eprintln!(
            "level {:>3}  survivors {:>8}  nodes {:>10}  {:>9.2}s",
            p.level,
            p.survivors,
            p.nodes,
            p.elapsed.as_secs_f64()
        );
    })?;
    let cert = Certificate::from_outcome(&params, &outcome);
    fs::write(&a.out, cert.to_toml()?).with_context(|| format!("writing {}", a.out.display()))?;

    let spec = &params.spec;
    let secs = outcome.elapsed.as_secs_f64();
    println!("{:<12} {:<8} {:<5} time(s)", "T", "alpha", "L");
    match &outcome.verdict {
        Verdict::Proved { levels } => {
            println!(
                "{:<12} {:<8} {:<5} {:.2}",
                spec.targets_display(),
                spec.alpha().to_string(),
                levels,
                secs
            );
            println!("PROVED; certificate written to {}", a.out.display());
            Ok(EXIT_OK)
        }
        Verdict::Exhausted {
            reason,
            levels_completed,
            survivors,
        } => {
            println!(
                "{:<12} {:<8} {:<5} {:.2}",
                spec.targets_display(),
                spec.alpha().to_string(),
                "-",
                secs
            );
            println!(
                "EXHAUSTED ({reason} budget) after {levels_completed} complete levels; certificate written to {}",
                a.out.display()
            );
            for (n, s) in survivors.iter().enumerate() {
                println!("survivor {}:\n{}", n + 1, s.to_grid());
            }
            Ok(EXIT_EXHAUSTED)
        }
    }
}

fn load_polygon(spec: &str, k: Option<u8>) -> Result<(DistanceCensus, u8)> {
    let need_k = || k.context("--k is required for this polygon");
    if let Some(n) = spec.strip_prefix("regular:") {
        let n: usize = n
            .parse()
            .with_context(|| format!("bad vertex count in {spec:?}"))?;
        if n < 3 {
            bail!("a polygon needs at least 3 vertices");
        }
        Ok((census(&RegularPolygon::new(n)), need_k()?))
    } else if let Some(rest) = spec.strip_prefix("random:") {
        let (n, seed) = rest
            .split_once(',')
            .with_context(|| format!("expected random:N,SEED, got {spec:?}"))?;
        let n: usize = n
            .trim()
            .parse()
            .with_context(|| format!("bad vertex count in {spec:?}"))?;
        let seed: u64 = seed
            .trim()
            .parse()
            .with_context(|| format!("bad seed in {spec:?}"))?;
        Ok((census(&gen_random_convex(n, seed)?), need_k()?))
    } else if let Some(path) = spec.strip_prefix("file:") {
        let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let (points, file_k) = parse_point_file(&text).with_context(|| format!("in {path}"))?;
        Ok((census(&points), k.unwrap_or(file_k)))
    } else {
        bail!("unknown polygon {spec:?}; expected regular:N, file:PATH or random:N,SEED")
    }
}

fn census_cmd(a: CensusArgs) -> Result<u8> {
    let (c, k) = load_polygon(&a.polygon, a.k)?;
    if k == 0 || k > convexdist::label::MAX_K {
        bail!("--k must be between 1 and {}", convexdist::label::MAX_K);
    }
    println!("n = {}", c.n());
    println!("distinct distances = {}", c.class_count());
    for i in 1..=k as usize {
        println!("m_{i} = {}", c.m(i));
    }
    println!("m_<={k} = {}", c.m_upto(k as usize));
    let levels = c.level_counts(k);
    let shown: Vec<String> = levels.iter().map(|x| x.to_string()).collect();
    println!("top-{k} pairs per level = {}", shown.join(" "));
    println!(
        "max per level = {}",
        levels.iter().max().copied().unwrap_or(0)
    );
    Ok(EXIT_OK)
}

fn soundness(a: SoundnessArgs) -> Result<u8> {
    if a.trials == 0 {
        eprintln!("warning: 0 trials requested; nothing was checked");
        println!("soundness: PASS (vacuous)");
        return Ok(EXIT_OK);
    }
    if a.max_k == 0 || a.max_k > convexdist::label::MAX_K {
        bail!("--max-k must be between 1 and {}", convexdist::label::MAX_K);
    }
    if a.max_n < 4 {
        bail!("--max-n must be at least 4");
    }
    let engine = a.mutate.map_or_else(Engine::default, Engine::with_mutation);
    let params = SoundnessParams {
        trials: a.trials,
        seed: a.seed,
        max_n: a.max_n,
        max_k: a.max_k,
        engine,
    };
    let report = pool(env_threads()?, || run_soundness(&params))?;
    println!("trials = {}", report.trials);
    for r in Rule::ALL {
        println!("{:<6} narrowings = {}", r.name(), report.firings[r.index()]);
    }
    println!("violations = {}", report.violations.len());
    if let Some(v) = report.violations.first() {
        let text = format!("trial {}: {:?}\n{}", v.trial, v.kind, v.counterexample);
        fs::write(COUNTEREXAMPLE_FILE, text)
            .with_context(|| format!("writing {COUNTEREXAMPLE_FILE}"))?;
        println!("soundness: FAIL; first counterexample written to {COUNTEREXAMPLE_FILE}");
        return Ok(EXIT_ERROR);
    }
    println!("soundness: PASS");
    Ok(EXIT_OK)
}

fn replay(a: ReplayArgs) -> Result<u8> {
    let text =
        fs::read_to_string(&a.cert).with_context(|| format!("reading {}", a.cert.display()))?;
    let recorded = Certificate::from_toml(&text)?;
    if let Err(e @ CertificateError::Incomparable { .. }) = recorded.check_rule_version() {
        bail!(e);
    }
    let params = recorded.search_params(env_threads()?)?;
    let outcome = run_search_observed(&params, &mut |_| {})?;
    let fresh = Certificate::from_outcome(&params, &outcome);
    let show = |c: &Certificate| match c.verdict.levels {
        Some(l) => format!("{} at L = {l}", c.verdict.kind),
        None => c.verdict.kind.clone(),
    };
    if recorded.same_verdict(&fresh) {
        println!("match: {}", show(&fresh));
        if recorded.stats != fresh.stats {
            println!("note: statistics differ (budgets or rule timing)");
        }
        Ok(EXIT_OK)
    } else {
        println!(
            "mismatch:\n- recorded: {}\n+ replayed: {}",
            show(&recorded),
            show(&fresh)
        );
        Ok(EXIT_ERROR)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Prove(a) => prove(a),
        Command::Census(a) => census_cmd(a),
        Command::Soundness(a) => soundness(a),
        Command::Replay(a) => replay(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
