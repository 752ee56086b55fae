//! Command-line front end. Parsing lives here so the binary is a thin shim
//! and the commands can be driven in-process by tests.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::complexes::{core_reduction_table, vr_filtration};
use crate::diagram_distance::{bottleneck_distance, wasserstein1_distance};
use crate::error::{Error, Result};
use crate::generate::{generate, Shape, TORUS_MAJOR_RADIUS, TORUS_MINOR_RADIUS};
use crate::homology::{persistent_homology, vr_persistence, PersistenceDiagram};
use crate::io;
use crate::metric_space::{delta_from_percentile, PointCloud};
use crate::subsampling::{delta_core, fps_subsample};

pub const DEFAULT_SEED: u64 = 42;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "deltacore", version, about = "δ-core subsampling and Vietoris-Rips persistent homology")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the δ-core of a point cloud.
    Core(CoreArgs),
    /// Persistence diagram of the Vietoris-Rips filtration.
    Ph(PhArgs),
    /// Bottleneck and 1-Wasserstein distances between two diagram files.
    Compare(CompareArgs),
    /// Simplex counts before and after flag-complex core reduction.
    BenchReduction(BenchArgs),
    /// Write a synthetic point cloud.
    Generate(GenerateArgs),
    /// Full sample vs δ-core vs equal-size baselines.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args, Clone, Copy)]
#[group(required = true, multiple = false)]
pub struct DeltaChoice {
    /// Explicit δ.
    #[arg(long)]
    pub delta: Option<f64>,
    /// δ as this nearest-rank percentile of pairwise distances.
    #[arg(long)]
    pub percentile: Option<f64>,
}

impl DeltaChoice {
    pub fn resolve(&self, cloud: &PointCloud) -> Result<f64> {
        match (self.delta, self.percentile) {
            (Some(d), _) => Ok(d),
            (None, Some(p)) => delta_from_percentile(cloud, p),
            (None, None) => unreachable!("clap enforces one of --delta/--percentile"),
        }
    }
}

#[derive(Debug, Args)]
pub struct CoreArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub delta: DeltaChoice,
}

#[derive(Debug, Args)]
pub struct PhArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Skeleton dimension; diagrams are reported in degrees below it.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_dim: u32,
    #[arg(long, default_value_t = f64::INFINITY)]
    pub threshold: f64,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Two diagram CSV files.
    #[arg(long, num_args = 1, required = true, action = clap::ArgAction::Append)]
    pub input: Vec<PathBuf>,
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Comma-separated ascending scales.
    #[arg(long, value_delimiter = ',', required = true)]
    pub scales: Vec<f64>,
    #[arg(long, default_value_t = 3)]
    pub max_dim: u32,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// sphere, torus or cube-heterogeneous.
    #[arg(long)]
    pub shape: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Baseline {
    Fps,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub delta: DeltaChoice,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_dim: u32,
    #[arg(long)]
    pub threshold: f64,
    #[arg(long, value_delimiter = ',', default_value = "fps")]
    pub baselines: Vec<Baseline>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(stdout) => {
            print!("{stdout}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_io_or_parse() {
                EXIT_IO
            } else {
                EXIT_USAGE
            }
        }
    }
}

/// Runs a parsed command, returning what it prints on stdout.
pub fn execute(command: &Command) -> Result<String> {
    match command {
        Command::Core(a) => cmd_core(a),
        Command::Ph(a) => cmd_ph(a),
        Command::Compare(a) => cmd_compare(a),
        Command::BenchReduction(a) => cmd_bench_reduction(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Pipeline(a) => cmd_pipeline(a),
    }
}

fn cmd_core(args: &CoreArgs) -> Result<String> {
    let cloud = io::read_point_cloud(&args.input)?;
    let delta = args.delta.resolve(&cloud)?;
    let start = Instant::now();
    let core = delta_core(&cloud, delta)?;
    let elapsed = start.elapsed().as_secs_f64();
    io::write_point_cloud(&args.output, &cloud.subset(&core.surviving)?, &[])?;
    eprintln!("delta={delta} wall_time_s={elapsed:.6} (machine-dependent)");
    Ok(format!("{},{},{}\n", cloud.len(), core.surviving.len(), core.sweeps))
}

fn diagram_of(cloud: &PointCloud, max_dim: u32, threshold: f64) -> Result<PersistenceDiagram> {
    let max_degree = max_dim as usize - 1;
    if cloud.is_empty() {
        return PersistenceDiagram::from_degrees(vec![Vec::new(); max_degree + 1]);
    }
    if max_degree <= 2 {
        return vr_persistence(cloud, max_degree, threshold);
    }
    let filtration = vr_filtration(cloud, max_dim as usize, threshold)?;
    persistent_homology(&filtration, max_degree)
}

fn cmd_ph(args: &PhArgs) -> Result<String> {
    let cloud = io::read_point_cloud(&args.input)?;
    let diagram = diagram_of(&cloud, args.max_dim, args.threshold)?;
    io::write_text(&args.output, &io::format_diagram_csv(&diagram))?;
    Ok(String::new())
}

/// Per-degree `degree,bottleneck,w1` table over the degrees present in either diagram.
pub fn comparison_table(a: &PersistenceDiagram, b: &PersistenceDiagram) -> String {
    let mut out = String::from("degree,bottleneck,w1\n");
    for q in 0..a.num_degrees().max(b.num_degrees()) {
        let (x, y) = (a.degree(q), b.degree(q));
        let _ = writeln!(out, "{q},{},{}", bottleneck_distance(x, y), wasserstein1_distance(x, y));
    }
    out
}

fn cmd_compare(args: &CompareArgs) -> Result<String> {
    let [a, b] = &args.input[..] else {
        return Err(Error::InvalidFiltration(format!(
            "compare takes exactly two --input diagrams, got {}",
            args.input.len()
        )));
    };
    let table = comparison_table(&io::read_diagram_csv(a)?, &io::read_diagram_csv(b)?);
    match &args.output {
        Some(path) => {
            io::write_text(path, &table)?;
            Ok(String::new())
        }
        None => Ok(table),
    }
}

fn cmd_bench_reduction(args: &BenchArgs) -> Result<String> {
    let cloud = io::read_point_cloud(&args.input)?;
    let rows = core_reduction_table(&cloud, &args.scales, args.max_dim as usize)?;
    let csv = io::format_reduction_csv(&rows);
    match &args.output {
        Some(path) => {
            io::write_text(path, &csv)?;
            Ok(String::new())
        }
        None => Ok(csv),
    }
}

fn cmd_generate(args: &GenerateArgs) -> Result<String> {
    let shape: Shape = args.shape.parse()?;
    let cloud = generate(shape, args.n, args.noise, args.seed)?;
    let mut meta = format!("shape={} n={} noise={} seed={}", shape.name(), args.n, args.noise, args.seed);
    if shape == Shape::Torus {
        let _ = write!(meta, " major_radius={TORUS_MAJOR_RADIUS} minor_radius={TORUS_MINOR_RADIUS}");
    }
    io::write_point_cloud(&args.output, &cloud, &[meta])?;
    Ok(String::new())
}

fn cmd_pipeline(args: &PipelineArgs) -> Result<String> {
    let cloud = io::read_point_cloud(&args.input)?;
    let delta = args.delta.resolve(&cloud)?;
    std::fs::create_dir_all(&args.output).map_err(|e| Error::io(&args.output, e))?;
    let report = run_pipeline(&cloud, delta, args.max_dim, args.threshold, &args.baselines, args.seed)?;
    report.write(&args.output)?;
    Ok(report.comparison_csv())
}

/// One subsample in a pipeline run.
#[derive(Debug, Clone)]
pub struct MethodResult {
    pub method: &'static str,
    pub indices: Vec<usize>,
    pub diagram: PersistenceDiagram,
    pub subsample_seconds: f64,
    pub ph_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub cloud: PointCloud,
    pub delta: f64,
    /// The full sample first, then the δ-core, then baselines.
    pub methods: Vec<MethodResult>,
}

pub fn run_pipeline(
    cloud: &PointCloud,
    delta: f64,
    max_dim: u32,
    threshold: f64,
    baselines: &[Baseline],
    seed: u64,
) -> Result<PipelineReport> {
    let timed_ph = |indices: &[usize]| -> Result<(PersistenceDiagram, f64)> {
        let sub = cloud.subset(indices)?;
        let start = Instant::now();
        let diagram = diagram_of(&sub, max_dim, threshold)?;
        Ok((diagram, start.elapsed().as_secs_f64()))
    };
    let mut methods = Vec::new();

    let all: Vec<usize> = (0..cloud.len()).collect();
    let (diagram, ph_seconds) = timed_ph(&all)?;
    methods.push(MethodResult {
        method: "original",
        indices: all,
        diagram,
        subsample_seconds: 0.0,
        ph_seconds,
    });

    let start = Instant::now();
    let core = delta_core(cloud, delta)?;
    let subsample_seconds = start.elapsed().as_secs_f64();
    let (diagram, ph_seconds) = timed_ph(&core.surviving)?;
    let k = core.surviving.len();
    methods.push(MethodResult {
        method: "delta_core",
        indices: core.surviving,
        diagram,
        subsample_seconds,
        ph_seconds,
    });

    for baseline in baselines {
        match baseline {
            Baseline::Fps => {
                let start = Instant::now();
                let indices = fps_subsample(cloud, k, seed)?;
                let subsample_seconds = start.elapsed().as_secs_f64();
                let (diagram, ph_seconds) = timed_ph(&indices)?;
                methods.push(MethodResult {
                    method: "fps",
                    indices,
                    diagram,
                    subsample_seconds,
                    ph_seconds,
                });
            }
        }
    }
    Ok(PipelineReport {
        cloud: cloud.clone(),
        delta,
        methods,
    })
}

impl PipelineReport {
    fn degrees(&self) -> usize {
        self.methods.iter().map(|m| m.diagram.num_degrees()).max().unwrap_or(0)
    }

    /// `method,n,H0_bottleneck,H0_w1,...` against the full sample.
    pub fn comparison_csv(&self) -> String {
        let degrees = self.degrees();
        let mut out = String::from("method,n");
        for q in 0..degrees {
            let _ = write!(out, ",H{q}_bottleneck,H{q}_w1");
        }
        out.push('\n');
        let reference = &self.methods[0].diagram;
        for m in &self.methods {
            let _ = write!(out, "{},{}", m.method, m.indices.len());
            for q in 0..degrees {
                let (a, b) = (reference.degree(q), m.diagram.degree(q));
                let _ = write!(out, ",{},{}", bottleneck_distance(a, b), wasserstein1_distance(a, b));
            }
            out.push('\n');
        }
        out
    }

    /// Wall-clock timings; machine-dependent, kept apart from the
    /// deterministic outputs.
    pub fn timings_csv(&self) -> String {
        let mut out = String::from("# wall-clock seconds, machine-dependent\nmethod,n,subsample_s,ph_s\n");
        for m in &self.methods {
            let _ = writeln!(out, "{},{},{:.6},{:.6}", m.method, m.indices.len(), m.subsample_seconds, m.ph_seconds);
        }
        out
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        for m in &self.methods {
            io::write_text(dir.join(format!("diagram_{}.csv", m.method)), &io::format_diagram_csv(&m.diagram))?;
            if m.method != "original" {
                io::write_point_cloud(
                    dir.join(format!("points_{}.txt", m.method)),
                    &self.cloud.subset(&m.indices)?,
                    &[],
                )?;
            }
        }
        io::write_text(dir.join("comparison.csv"), &self.comparison_csv())?;
        io::write_text(dir.join("timings.csv"), &self.timings_csv())?;
        Ok(())
    }
}
