use std::cmp::Ordering;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use cliqster::baselines::Method;
use cliqster::cliques::enumerate_maximal_cliques;
use cliqster::decompose::Decomposition;
use cliqster::eval::{run_classification, run_distinguishability, Category, ClassificationParams, DistinguishParams};
use cliqster::graph::Graph;
use cliqster::netstats::{fit_power_law, positive_degrees, summary};
use cliqster::seed;
use cliqster::synth::{builtin_profile, generate, CategoryProfile};

mod format;

use format::g6;

/// Maximal-clique basis decomposition of undirected networks.
///
/// Edge lists hold one `u v` pair per line; `#` starts a comment. All
/// randomness is driven by `--seed`, so repeated runs print identical bytes
/// apart from timing columns.
#[derive(Parser)]
#[command(name = "cliqster", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summary statistics and a power-law fit of the degree distribution
    Stats(StatsArgs),
    /// Maximal cliques, one per line, as sorted vertex tokens
    Cliques(GraphInput),
    /// Clique basis coefficients as CSV (clique, size, mu)
    Decompose(GraphInput),
    /// One feature row per input graph
    Features(FeaturesArgs),
    /// Generate a synthetic category network as an edge list
    Synth(SynthArgs),
    /// Uniform induced subgraph of an edge list
    Sample(SampleArgs),
    /// Cluster samples of several categories and report clustering errors
    EvalCluster(EvalClusterArgs),
    /// k-NN accuracy against training-set size for two categories
    EvalKnn(EvalKnnArgs),
    /// Time full decompositions of samples of increasing size
    Bench(BenchArgs),
}

#[derive(Args)]
struct GraphInput {
    /// Edge-list file
    input: PathBuf,
    /// Pad the graph to this many vertices [default: vertices named by edges]
    #[arg(long)]
    vertices: Option<usize>,
    /// Output file [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    graph: GraphInput,
    /// Fix the power-law lower cutoff [default: chosen by KS distance]
    #[arg(long)]
    x_min: Option<u64>,
}

#[derive(Args)]
struct FeaturesArgs {
    /// Edge-list files
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Feature method: cliqster or svd
    #[arg(long, default_value = "cliqster", value_parser = parse_method)]
    method: Method,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    top_k: u64,
    /// Output file [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    /// Multiplier on profile densities [default: the profile's own]
    #[arg(long)]
    sample_scale: Option<f64>,
}

#[derive(Args)]
struct SynthArgs {
    /// Builtin profile: SI, CI, PEPS, ST or LL
    #[arg(long)]
    profile: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Vertex count [default: the profile's own]
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    scale: ProfileArgs,
    /// Output file [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    /// Edge-list file
    input: PathBuf,
    #[arg(long, default_value_t = 1000)]
    sample_size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SourceArgs {
    /// Comma-separated builtin profiles used as categories [default: none]
    #[arg(long, value_delimiter = ',')]
    profiles: Vec<String>,
    /// Edge-list files used as categories, labeled by file stem [default: none]
    #[arg(long = "input")]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    scale: ProfileArgs,
}

#[derive(Args)]
struct EvalCommon {
    #[arg(long, default_value_t = 1000)]
    sample_size: usize,
    #[arg(long, default_value_t = 20)]
    top_k: usize,
    /// Scale every feature row to unit length before clustering or classifying
    #[arg(long)]
    normalize: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads [default: one per core]
    #[arg(long)]
    jobs: Option<usize>,
    /// CSV output file [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalClusterArgs {
    #[command(flatten)]
    sources: SourceArgs,
    /// Comma-separated feature methods
    #[arg(long, value_delimiter = ',', default_value = "cliqster,svd", value_parser = parse_method)]
    methods: Vec<Method>,
    #[arg(long, default_value_t = 100)]
    repeats: usize,
    #[arg(long, default_value_t = 20)]
    samples_per_category: usize,
    /// k-means restarts per clustering
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    /// Per-category feature curves as CSV [default: not written]
    #[arg(long)]
    curves_out: Option<PathBuf>,
    #[command(flatten)]
    common: EvalCommon,
}

#[derive(Args)]
struct EvalKnnArgs {
    #[command(flatten)]
    sources: SourceArgs,
    #[arg(long, default_value = "cliqster", value_parser = parse_method)]
    method: Method,
    /// Comma-separated total training sizes, split evenly over both categories
    #[arg(long, value_delimiter = ',', default_value = "10,20,40,60,80,100")]
    train_sizes: Vec<usize>,
    /// Total test size, split evenly over both categories
    #[arg(long, default_value_t = 100)]
    test_size: usize,
    /// Neighbours consulted per vote
    #[arg(long, default_value_t = 3)]
    knn_k: usize,
    #[arg(long, default_value_t = 20)]
    repeats: usize,
    /// Samples drawn per category and repeat [default: largest split plus test split]
    #[arg(long)]
    pool_size: Option<usize>,
    /// Two-column CSV (train_size, mean_accuracy) for plotting [default: not written]
    #[arg(long)]
    plot_out: Option<PathBuf>,
    #[command(flatten)]
    common: EvalCommon,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated sample sizes
    #[arg(long, value_delimiter = ',', default_value = "250,500,1000")]
    sizes: Vec<usize>,
    /// Comma-separated feature methods
    #[arg(long, value_delimiter = ',', default_value = "cliqster,svd", value_parser = parse_method)]
    methods: Vec<Method>,
    /// Builtin profile the source graph is generated from
    #[arg(long, default_value = "CI")]
    profile: String,
    #[command(flatten)]
    scale: ProfileArgs,
    /// Timed runs per size and method, after one untimed warm-up
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(5..))]
    runs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    Method::parse(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Stats(a) => stats(a),
        Command::Cliques(a) => cliques(a),
        Command::Decompose(a) => decompose(a),
        Command::Features(a) => features(a),
        Command::Synth(a) => synth(a),
        Command::Sample(a) => sample(a),
        Command::EvalCluster(a) => eval_cluster(a),
        Command::EvalKnn(a) => eval_knn(a),
        Command::Bench(a) => bench(a),
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Graph::from_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load(input: &GraphInput) -> Result<Graph> {
    let g = read_graph(&input.input)?;
    match input.vertices {
        Some(n) => Ok(g.with_vertex_count(n)?),
        None => Ok(g),
    }
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    match out {
        Some(p) => Ok(Box::new(io::BufWriter::new(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        ))),
        None => Ok(Box::new(io::BufWriter::new(io::stdout().lock()))),
    }
}

fn csv_sink(out: Option<&Path>) -> Result<csv::Writer<Box<dyn Write>>> {
    Ok(csv::Writer::from_writer(sink(out)?))
}

/// Integer tokens compare numerically and sort before other tokens.
fn token_order(a: &str, b: &str) -> Ordering {
    match (a.parse::<i128>(), b.parse::<i128>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        _ => a.cmp(b),
    }
}

fn clique_tokens(g: &Graph, vertices: &[usize]) -> Vec<String> {
    let mut tokens: Vec<String> = vertices.iter().map(|&v| g.label(v).into_owned()).collect();
    tokens.sort_by(|a, b| token_order(a, b));
    tokens
}

fn stats(a: StatsArgs) -> Result<()> {
    let g = load(&a.graph)?;
    if g.m() == 0 {
        bail!("graph has no edges");
    }
    let s = summary(&g);
    let mut w = csv_sink(a.graph.out.as_deref())?;
    w.write_record([
        "n", "m", "components", "density", "max_degree", "degeneracy", "maximal_cliques", "alpha",
        "alpha_approx", "x_min", "n_tail", "ks",
    ])?;
    let mut row = vec![
        s.n.to_string(),
        s.m.to_string(),
        s.components.to_string(),
        s.density.map(g6).unwrap_or_default(),
        s.max_degree.to_string(),
        s.degeneracy.to_string(),
        s.maximal_cliques.to_string(),
    ];
    match fit_power_law(&positive_degrees(&g), a.x_min) {
        Ok(fit) => row.extend([
            g6(fit.alpha),
            g6(fit.alpha_approx),
            fit.x_min.to_string(),
            fit.n_tail.to_string(),
            g6(fit.ks),
        ]),
        Err(e) => {
            eprintln!("warning: no power-law fit: {e}");
            row.extend(std::iter::repeat_n(String::new(), 5));
        }
    }
    w.write_record(&row)?;
    w.flush()?;
    Ok(())
}

fn cliques(a: GraphInput) -> Result<()> {
    let g = load(&a)?;
    let mut w = sink(a.out.as_deref())?;
    for c in enumerate_maximal_cliques(&g) {
        writeln!(w, "{}", clique_tokens(&g, c.vertices()).join(" "))?;
    }
    w.flush()?;
    Ok(())
}

fn decompose(a: GraphInput) -> Result<()> {
    let g = load(&a)?;
    let d = Decomposition::of(&g)?;
    let mut w = csv_sink(a.out.as_deref())?;
    w.write_record(["clique", "size", "mu"])?;
    for (c, &mu) in d.basis.cliques().iter().zip(d.mu()) {
        w.write_record([
            clique_tokens(&g, c.vertices()).join(" "),
            c.size().to_string(),
            g6(mu),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn features(a: FeaturesArgs) -> Result<()> {
    let top_k = a.top_k as usize;
    let dec = a.method.decomposer();
    let mut w = csv_sink(a.out.as_deref())?;
    let mut header = vec!["graph".to_string()];
    header.extend((1..=top_k).map(|i| format!("f{i}")));
    w.write_record(&header)?;
    for path in &a.inputs {
        let g = read_graph(path)?;
        let values = dec
            .features(&g, top_k)
            .with_context(|| format!("features of {}", path.display()))?;
        let mut row = vec![path.display().to_string()];
        row.extend(values.into_iter().map(g6));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn profile(name: &str, scale: &ProfileArgs) -> Result<CategoryProfile> {
    let mut p = builtin_profile(name)?;
    if let Some(s) = scale.sample_scale {
        p.sample_scale = s;
    }
    Ok(p)
}

fn synth(a: SynthArgs) -> Result<()> {
    let mut p = profile(&a.profile, &a.scale)?;
    if let Some(n) = a.n {
        p.n = n;
    }
    let g = generate(&p, a.seed)?;
    let b = &p.clique_boost;
    let header = vec![
        format!("profile={} seed={}", p.name, a.seed),
        format!(
            "alpha={} density={} sample_scale={} n={}",
            g6(p.alpha),
            g6(p.density),
            g6(p.sample_scale),
            p.n
        ),
        format!(
            "planted_cliques={} sizes={}..={}",
            p.planted_count(),
            b.min_size,
            b.max_size
        ),
        format!("vertices={} edges={}", g.n(), g.m()),
    ];
    let mut w = sink(a.out.as_deref())?;
    w.write_all(g.to_edge_list(&header).as_bytes())?;
    w.flush()?;
    Ok(())
}

fn sample(a: SampleArgs) -> Result<()> {
    let g = read_graph(&a.input)?;
    let s = g.sample_induced(a.sample_size, a.seed)?;
    let header = vec![format!(
        "induced sample of {} vertices from {} seed={}",
        a.sample_size,
        a.input.display(),
        a.seed
    )];
    let mut w = sink(a.out.as_deref())?;
    w.write_all(s.to_edge_list(&header).as_bytes())?;
    w.flush()?;
    Ok(())
}

/// Source graphs in order: profiles first, then input files. Profile graphs
/// come from child streams of `master`.
fn categories(s: &SourceArgs, master: u64) -> Result<Vec<Category>> {
    let stream = seed::derive(master, 0);
    let mut out = Vec::new();
    for (i, name) in s.profiles.iter().enumerate() {
        let p = profile(name, &s.scale)?;
        out.push(Category {
            label: p.name.clone(),
            graph: generate(&p, seed::derive(stream, i as u64))?,
        });
    }
    for path in &s.inputs {
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        out.push(Category {
            label,
            graph: read_graph(path)?,
        });
    }
    if out.is_empty() {
        bail!("no categories: pass --profiles or --input");
    }
    Ok(out)
}

/// Runs `f` on a pool of `jobs` threads, or on the global pool.
fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        Some(0) => bail!("--jobs must be positive"),
        Some(n) => Ok(rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(f)),
        None => Ok(f()),
    }
}

fn eval_cluster(a: EvalClusterArgs) -> Result<()> {
    let c = &a.common;
    let cats = categories(&a.sources, c.seed)?;
    let params = DistinguishParams {
        repeats: a.repeats,
        samples_per_category: a.samples_per_category,
        sample_size: c.sample_size,
        top_k: c.top_k,
        restarts: a.restarts,
        normalize: c.normalize,
        seed: seed::derive(c.seed, 1),
    };
    let report = with_jobs(c.jobs, || run_distinguishability(&cats, &a.methods, &params))??;

    let mut w = csv_sink(c.out.as_deref())?;
    w.write_record(["method", "repeat", "error"])?;
    for m in &report.methods {
        for (r, e) in m.errors.iter().enumerate() {
            w.write_record([m.method.clone(), r.to_string(), g6(*e)])?;
        }
    }
    w.flush()?;

    if let Some(path) = &a.curves_out {
        let mut w = csv_sink(Some(path))?;
        w.write_record(["method", "category", "rank", "mean", "std", "lower", "upper"])?;
        for m in &report.methods {
            for (label, curves) in &m.curves {
                for i in 0..curves.mean.len() {
                    w.write_record([
                        m.method.clone(),
                        label.clone(),
                        (i + 1).to_string(),
                        g6(curves.mean[i]),
                        g6(curves.std[i]),
                        g6(curves.lower[i]),
                        g6(curves.upper[i]),
                    ])?;
                }
            }
        }
        w.flush()?;
    }

    eprintln!(
        "categories {}; {} repeats of {} samples per category, {} vertices each",
        report.categories.join(", "),
        a.repeats,
        a.samples_per_category,
        c.sample_size
    );
    for m in &report.methods {
        eprintln!(
            "{:>9}: clustering error {} +- {} (features took {:.2} s)",
            m.method,
            g6(m.mean_error),
            g6(m.std_error),
            m.decompose_seconds
        );
    }
    Ok(())
}

fn eval_knn(a: EvalKnnArgs) -> Result<()> {
    let c = &a.common;
    let cats = categories(&a.sources, c.seed)?;
    if cats.len() != 2 {
        bail!("eval-knn needs exactly two categories, got {}", cats.len());
    }
    let params = ClassificationParams {
        train_sizes: a.train_sizes.clone(),
        test_size: a.test_size,
        knn_k: a.knn_k,
        repeats: a.repeats,
        pool_per_category: a.pool_size,
        sample_size: c.sample_size,
        top_k: c.top_k,
        normalize: c.normalize,
        seed: seed::derive(c.seed, 1),
    };
    let points = with_jobs(c.jobs, || run_classification(&cats, a.method, &params))??;

    let mut w = csv_sink(c.out.as_deref())?;
    w.write_record(["method", "train_size", "mean_accuracy", "std_accuracy"])?;
    for p in &points {
        w.write_record([a.method.name().to_string(), p.train_size.to_string(), g6(p.mean), g6(p.std)])?;
    }
    w.flush()?;

    if let Some(path) = &a.plot_out {
        let mut w = csv_sink(Some(path))?;
        w.write_record(["train_size", "mean_accuracy"])?;
        for p in &points {
            w.write_record([p.train_size.to_string(), g6(p.mean)])?;
        }
        w.flush()?;
    }

    eprintln!("{} vs {} with {}, k = {}", cats[0].label, cats[1].label, a.method.name(), a.knn_k);
    for p in &points {
        eprintln!("  train {:>4}: accuracy {} +- {}", p.train_size, g6(p.mean), g6(p.std));
    }
    Ok(())
}

fn bench(a: BenchArgs) -> Result<()> {
    if a.sizes.is_empty() {
        bail!("no sizes given");
    }
    let mut p = profile(&a.profile, &a.scale)?;
    let largest = a.sizes.iter().copied().max().unwrap_or(0);
    p.n = p.n.max(largest);
    let source = generate(&p, seed::derive(a.seed, 0))?;
    let mut w = csv_sink(a.out.as_deref())?;
    w.write_record(["method", "n", "mean_ms", "std_ms"])?;
    for &size in &a.sizes {
        let g = source.sample_induced(size, seed::derive(a.seed, 1 + size as u64))?;
        eprintln!("n = {size}: {} edges", g.m());
        for &m in &a.methods {
            let dec = m.decomposer();
            dec.features(&g, 20)?;
            let times: Vec<f64> = (0..a.runs)
                .map(|_| {
                    let start = Instant::now();
                    let r = dec.features(&g, 20);
                    let ms = start.elapsed().as_secs_f64() * 1e3;
                    r.map(|_| ms)
                })
                .collect::<cliqster::error::Result<_>>()?;
            let mean = times.iter().sum::<f64>() / times.len() as f64;
            let var = times.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / (times.len() - 1) as f64;
            w.write_record([m.name().to_string(), size.to_string(), g6(mean), g6(var.sqrt())])?;
        }
    }
    w.flush()?;
    Ok(())
}
