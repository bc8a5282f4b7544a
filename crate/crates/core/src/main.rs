use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use isolab::experiments::{self, emit, ExperimentConfig, ExperimentKind, OutputFormat};
use isolab::graph::{parse_edge_list, write_edge_list};
use isolab::iso::{find_bad_set, iso_exact, iso_exact_all_witnesses, sample_bisection_max_ratio, SolverConfig};
use isolab::process::{hitting_times, sample_gnm, sample_gnp, sample_trace};
use isolab::spectral::spectral_bounds;
use isolab::thresholds::{c_epsilon, OmegaRule, ThresholdParams};
use isolab::{Graph, IsoError, Result};

#[derive(Parser)]
#[command(name = "isolab", version, about = "Isoperimetric constant lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a G(n, p) or G(n, M) edge list.
    Sample(SampleArgs),
    /// Analyse an edge-list file.
    Iso(IsoArgs),
    /// Hitting times τ(δ = d) of one process.
    Process(ProcessArgs),
    /// Threshold edge counts m_d, M_d and C(ε).
    Thresholds(ThresholdArgs),
    /// Run an experiment.
    Run(RunArgs),
    /// Built-in oracle cross-checks.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn write(&self, bytes: &[u8]) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, bytes).map_err(|source| IsoError::Io { path: path.clone(), source }),
            None => std::io::stdout()
                .write_all(bytes)
                .map_err(|source| IsoError::Io { path: "<stdout>".into(), source }),
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    /// Edge probability (G(n, p)).
    #[arg(long, conflicts_with = "m", required_unless_present = "m")]
    p: Option<f64>,
    /// Edge count (G(n, M)).
    #[arg(long)]
    m: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct IsoArgs {
    /// Edge list: header `n <count>`, then one `u v` pair per line.
    file: PathBuf,
    #[arg(long, default_value_t = SolverConfig::default().exact_cap)]
    exact_cap: usize,
    /// List every minimizer (exact mode).
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = SolverConfig::default().bisection_samples)]
    bisection_samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct ProcessArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    d_max: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    d_max: usize,
    #[arg(long, default_value = "loglogr")]
    omega_rule: String,
    /// ε values for the C(ε) table.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.25,0.5")]
    eps: Vec<f64>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct RunArgs {
    /// theorem1, theorem2, prop1, claims or sandwich.
    kind: String,
    /// `key=value` file with the same names as the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    d_max: Option<usize>,
    /// Target degrees, comma separated (prop1, claims).
    #[arg(long)]
    d: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long = "C")]
    c: Option<f64>,
    #[arg(long)]
    omega_rule: Option<String>,
    #[arg(long)]
    exact_cap: Option<usize>,
    #[arg(long)]
    bisection_samples: Option<usize>,
    #[arg(long)]
    falsifier: bool,
    #[arg(long)]
    p_grid: Option<String>,
    #[arg(long)]
    connected_only: bool,
    #[arg(long)]
    large_set_samples: Option<usize>,
    #[arg(long, env = "ISOLAB_WORKERS")]
    workers: Option<usize>,
    #[arg(long, default_value = "json")]
    format: String,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// Random graphs per n in the brute-force comparison.
    #[arg(long, default_value_t = 100)]
    graphs: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| IsoError::Io { path: path.to_path_buf(), source })
}

fn cmd_sample(a: &SampleArgs) -> Result<()> {
    let g = match (a.p, a.m) {
        (Some(p), _) => sample_gnp(a.n, p, a.seed)?,
        (None, Some(m)) => sample_gnm(a.n, m, a.seed)?,
        (None, None) => unreachable!("clap requires one of --p, --m"),
    };
    a.out.write(write_edge_list(&g).as_bytes())
}

fn fmt_set(s: &isolab::VertexSet) -> String {
    let v: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

fn cmd_iso(a: &IsoArgs) -> Result<()> {
    let g = parse_edge_list(&read(&a.file)?)?;
    let cfg = SolverConfig { exact_cap: a.exact_cap, bisection_samples: a.bisection_samples, ..SolverConfig::default() };
    cfg.validate()?;
    let mut text = format!("n {}\nm {}\ndelta {}\nmax_degree {}\n", g.n(), g.edge_count(), g.min_degree(), g.max_degree());
    if g.n() <= 4096 {
        let b = spectral_bounds(&g)?;
        text += &format!("lambda2 {}\nspectral_lower {}\nspectral_upper {}\n", b.lambda2, b.lower, b.upper);
    }
    if g.n() <= cfg.exact_cap {
        let best = iso_exact(&g, &cfg)?;
        text += &format!(
            "i {} ({})\nwitness {}\nboundary {}\nwitness_kind {:?}\n",
            best.ratio,
            best.ratio.to_f64(),
            fmt_set(&best.witness),
            best.boundary,
            best.witness_kind
        );
        if a.all {
            for r in iso_exact_all_witnesses(&g, &cfg)? {
                text += &format!("minimizer {} {:?}\n", fmt_set(&r.witness), r.witness_kind);
            }
        }
    } else {
        // bounded analysis: i <= δ, and a found bad set certifies i < δ
        text += &format!("i_upper_bound {} (min degree)\n", g.min_degree());
        if g.min_degree() > 0 {
            match find_bad_set(&g, g.min_degree(), &cfg, a.seed)? {
                Some(s) => {
                    text += &format!("bad_set {} boundary {}\n", fmt_set(&s), g.boundary_size(&s)?);
                }
                None => text += "bad_set none found\n",
            }
        }
        if g.n() >= 2 {
            let b = sample_bisection_max_ratio(&g, cfg.bisection_samples, a.seed)?;
            text += &format!("max_sampled_bisection_ratio {} ({})\n", b.max_ratio, b.max_ratio.to_f64());
        }
    }
    a.out.write(text.as_bytes())
}

fn cmd_process(a: &ProcessArgs) -> Result<()> {
    let trace = sample_trace(a.n, a.seed)?;
    let times = hitting_times(&trace, a.d_max)?;
    let mut text = String::from("d,tau\n");
    for d in 1..=a.d_max {
        text += &format!("{d},{}\n", times.tau(d).expect("d_max below n"));
    }
    a.out.write(text.as_bytes())
}

fn cmd_thresholds(a: &ThresholdArgs) -> Result<()> {
    let rule: OmegaRule = a.omega_rule.parse()?;
    let mut text = String::from("d,r,omega,m_d,M_d\n");
    for d in 1..=a.d_max {
        let p = ThresholdParams::new(a.n, d, rule)?;
        text += &format!("{d},{},{},{},{}\n", p.r, p.omega, p.lower_threshold()?, p.upper_threshold()?);
    }
    text += "\neps,C_eps\n";
    for &e in &a.eps {
        text += &format!("{e},{}\n", c_epsilon(e)?);
    }
    a.out.write(text.as_bytes())
}

fn cmd_run(a: &RunArgs) -> Result<()> {
    let kind: ExperimentKind = a.kind.parse()?;
    let format: OutputFormat = a.format.parse()?;
    let mut cfg = ExperimentConfig::defaults_for(kind);
    cfg.workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    if let Some(path) = &a.config {
        cfg.apply_file(&read(path)?)?;
        cfg.kind = kind;
    }
    let flags: [(&str, Option<String>); 13] = [
        ("n", a.n.map(|v| v.to_string())),
        ("trials", a.trials.map(|v| v.to_string())),
        ("seed", a.seed.map(|v| v.to_string())),
        ("d-max", a.d_max.map(|v| v.to_string())),
        ("d", a.d.clone()),
        ("eps", a.eps.map(|v| v.to_string())),
        ("C", a.c.map(|v| v.to_string())),
        ("omega-rule", a.omega_rule.clone()),
        ("exact-cap", a.exact_cap.map(|v| v.to_string())),
        ("bisection-samples", a.bisection_samples.map(|v| v.to_string())),
        ("p-grid", a.p_grid.clone()),
        ("large-set-samples", a.large_set_samples.map(|v| v.to_string())),
        ("workers", a.workers.map(|v| v.to_string())),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    cfg.falsifier |= a.falsifier;
    cfg.connected_only |= a.connected_only;
    let result = experiments::run(&cfg)?;
    a.out.write(&emit(&result, format)?)
}

/// Edge-by-edge boundary, independent of the solver's bit tricks.
fn brute_iso(g: &Graph) -> (u64, u64) {
    let n = g.n();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut best = (u64::MAX, 1u64);
    for mask in 1u64..(1 << n) {
        let k = mask.count_ones() as u64;
        if k as usize > n / 2 {
            continue;
        }
        let b = edges.iter().filter(|&&(u, v)| (mask >> u & 1) != (mask >> v & 1)).count() as u64;
        if b * best.1 < best.0 * k {
            best = (b, k);
        }
    }
    best
}

fn cmd_verify(a: &VerifyArgs) -> Result<bool> {
    let cfg = SolverConfig::default();
    let mut ok = true;
    let mut report = |name: &str, pass: bool| {
        println!("{} {name}", if pass { "PASS" } else { "FAIL" });
        ok &= pass;
    };
    let mut agree = true;
    for n in 2..=9 {
        for j in 0..a.graphs {
            let p = 0.1 + 0.8 * (j % 9) as f64 / 8.0;
            let g = sample_gnp(n, p, isolab::rng::derive_seed(a.seed, (n * 100_000 + j) as u64))?;
            let exact = iso_exact(&g, &cfg)?.ratio;
            let (num, den) = brute_iso(&g);
            agree &= exact.num * den == num * exact.den;
        }
    }
    report("iso_exact matches brute force for n = 2..9", agree);
    report(
        "i(K_n) = ceil(n/2) for n = 2..12",
        (2..=12).all(|n| iso_exact(&Graph::complete(n), &cfg).is_ok_and(|r| r.ratio.cmp_int(n.div_ceil(2) as u64).is_eq())),
    );
    let l = |g: Graph| spectral_bounds(&g).map(|b| b.lambda2);
    report("lambda2(K_6) = 6", (l(Graph::complete(6))? - 6.0).abs() < 1e-9);
    report("lambda2(C_4) = 2", (l(Graph::cycle(4))? - 2.0).abs() < 1e-9);
    report("C(1/2) = 2/(1 - ln 2)", (c_epsilon(0.5)? - 2.0 / (1.0 - 2f64.ln())).abs() < 1e-9);
    Ok(ok)
}

fn exit_code(e: &IsoError) -> u8 {
    match e {
        IsoError::Config(_) | IsoError::Domain(_) | IsoError::Parse { .. } => 2,
        IsoError::Invariant(_) => 3,
        IsoError::Resource(_) | IsoError::Io { .. } => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sample(a) => cmd_sample(a),
        Command::Iso(a) => cmd_iso(a),
        Command::Process(a) => cmd_process(a),
        Command::Thresholds(a) => cmd_thresholds(a),
        Command::Run(a) => cmd_run(a),
        Command::Verify(a) => match cmd_verify(a) {
            Ok(false) => Err(IsoError::Invariant("verification failed".into())),
            other => other.map(|_| ()),
        },
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("isolab: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
