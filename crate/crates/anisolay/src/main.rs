//! Command line front end. Every invocation echoes its fully resolved
//! configuration to stdout so a figure can be reproduced from its log line,
//! and identical command lines produce byte-identical output files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anisolay::colormap::Colormap;
use anisolay::datasets;
use anisolay::error::AppError;
use anisolay::formats;
use anisolay::render::{render_comparison, render_svg, SceneStyle};
use anisolay_core::{
    arl_layout, betweenness, mds_layout, penalty, project_to_contours, shortest_paths, stress,
    ArlConfig, ArlTrace, CentralityVector, EdgeLengthMode, Graph, Layout, MdsInit, MdsParams,
    MonotonicField, MonotonizeConfig, StressWeights,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "anisolay", version, about = "Radial centrality-aligned graph layouts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute node positions and write them out
    Layout {
        #[command(flatten)]
        input: InputArgs,
        /// Layout algorithm
        #[arg(long, value_enum, default_value_t = Mode::Arl)]
        mode: Mode,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        style: StyleArgs,
    },
    /// Compute a layout and render the full scene as SVG
    Render {
        #[command(flatten)]
        input: InputArgs,
        /// Layout algorithm
        #[arg(long, value_enum, default_value_t = Mode::Arl)]
        mode: Mode,
        #[command(flatten)]
        solver: SolverArgs,
        /// SVG output path
        #[arg(long)]
        svg: PathBuf,
        #[command(flatten)]
        style: StyleArgs,
    },
    /// Render several layout modes side by side
    Compare {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated list of modes to tile
        #[arg(long, value_enum, value_delimiter = ',', default_value = "mds,arl")]
        modes: Vec<Mode>,
        #[command(flatten)]
        solver: SolverArgs,
        /// SVG output path
        #[arg(long)]
        svg: PathBuf,
        #[command(flatten)]
        style: StyleArgs,
    },
    /// Inspect bundled datasets
    Datasets {
        #[command(subcommand)]
        action: DatasetsAction,
    },
}

#[derive(Subcommand)]
enum DatasetsAction {
    /// Print the bundled dataset names
    List,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Bundled dataset name (see `datasets list`)
    #[arg(long)]
    dataset: Option<String>,
    /// Edge list or graph JSON file
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Mode {
    Mds,
    Arl,
    ArlProject,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Mds => "mds",
            Mode::Arl => "arl",
            Mode::ArlProject => "arl-project",
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum WeightHandling {
    /// Reciprocal lengths for weighted graphs, direct for unit weights
    Auto,
    On,
    Off,
}

#[derive(Args)]
struct SolverArgs {
    /// Alignment penalty weight
    #[arg(long, default_value_t = ArlConfig::default().w_rho)]
    w_rho: f64,
    /// Iterations between field rebuilds
    #[arg(long, default_value_t = ArlConfig::default().lag)]
    lag: usize,
    #[arg(long, default_value_t = ArlConfig::default().max_iters)]
    max_iters: usize,
    #[arg(long, default_value_t = ArlConfig::default().step)]
    step: f64,
    /// Convergence threshold as a fraction of the largest graph distance
    #[arg(long, default_value_t = ArlConfig::default().tol_factor)]
    tol_factor: f64,
    /// Polar field rays
    #[arg(long, default_value_t = MonotonizeConfig::default().rays)]
    rays: usize,
    /// Samples per ray
    #[arg(long, default_value_t = MonotonizeConfig::default().samples_per_ray)]
    samples: usize,
    /// Kernel bandwidth as a fraction of the value range
    #[arg(long, default_value_t = MonotonizeConfig::default().bandwidth_frac)]
    bandwidth: f64,
    /// CDF inversion grid resolution
    #[arg(long, default_value_t = MonotonizeConfig::default().inversion_grid)]
    grid: usize,
    /// Field radius as a multiple of the layout extent
    #[arg(long, default_value_t = MonotonizeConfig::default().extent_factor)]
    extent: f64,
    /// Treat edge weights as affinities (lengths are reciprocals)
    #[arg(long, value_enum, default_value_t = WeightHandling::Auto)]
    invert_weights: WeightHandling,
    /// Random seed for the initial placement
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SolverArgs {
    fn arl_config(&self) -> ArlConfig {
        ArlConfig {
            w_rho: self.w_rho,
            lag: self.lag,
            max_iters: self.max_iters,
            step: self.step,
            tol_factor: self.tol_factor,
            field: MonotonizeConfig {
                rays: self.rays,
                samples_per_ray: self.samples,
                bandwidth_frac: self.bandwidth,
                inversion_grid: self.grid,
                extent_factor: self.extent,
            },
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Layout JSON output path
    #[arg(short = 'o', long)]
    out: Option<PathBuf>,
    /// Iteration trace CSV output path
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Field dump JSON output path
    #[arg(long)]
    field_dump: Option<PathBuf>,
    /// Scene SVG output path
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct StyleArgs {
    /// Canvas width in pixels
    #[arg(long, default_value_t = 900)]
    width: u32,
    /// Canvas height in pixels
    #[arg(long, default_value_t = 640)]
    height: u32,
    /// Background colormap: viridis, magma, or gray
    #[arg(long, default_value = "viridis")]
    colormap: String,
    /// Background opacity
    #[arg(long, default_value_t = 0.35)]
    alpha: f64,
    /// Comma-separated contour levels (default 0.1 through 1.0)
    #[arg(long, value_delimiter = ',')]
    levels: Vec<f64>,
    /// Draw node labels
    #[arg(long)]
    labels: bool,
    /// Node circle radius at centrality 0, in pixels
    #[arg(long, default_value_t = 3.0)]
    node_min: f64,
    /// Node circle radius at centrality 1, in pixels
    #[arg(long, default_value_t = 11.0)]
    node_max: f64,
}

impl StyleArgs {
    fn scene_style(&self) -> Result<SceneStyle, AppError> {
        let colormap = Colormap::from_name(&self.colormap).ok_or_else(|| {
            AppError::Usage(format!("unknown colormap {:?}", self.colormap))
        })?;
        let mut style = SceneStyle {
            width: self.width,
            height: self.height,
            node_radius: [self.node_min, self.node_max],
            colormap,
            background_alpha: self.alpha,
            labels: self.labels,
            ..SceneStyle::default()
        };
        if !self.levels.is_empty() {
            style.levels = self.levels.clone();
        }
        style.validate()?;
        Ok(style)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Layout { input, mode, solver, out, style } => {
            let (g, source) = load_input(&input)?;
            let length_mode = resolve_lengths(&g, solver.invert_weights);
            print_config("layout", &source, &[mode], &solver, length_mode, &out);
            let result = run_pipeline(&g, mode, &solver, length_mode)?;
            report_result(mode, &result);
            write_outputs(&g, &result, mode, &out, &style)
        }
        Command::Render { input, mode, solver, svg, style } => {
            let (g, source) = load_input(&input)?;
            let length_mode = resolve_lengths(&g, solver.invert_weights);
            let out = OutputArgs { out: None, trace: None, field_dump: None, svg: Some(svg) };
            print_config("render", &source, &[mode], &solver, length_mode, &out);
            let result = run_pipeline(&g, mode, &solver, length_mode)?;
            report_result(mode, &result);
            write_outputs(&g, &result, mode, &out, &style)
        }
        Command::Compare { input, modes, solver, svg, style } => {
            let (g, source) = load_input(&input)?;
            if modes.is_empty() {
                return Err(AppError::Usage(String::from("need at least one mode to compare")));
            }
            let length_mode = resolve_lengths(&g, solver.invert_weights);
            let out = OutputArgs { out: None, trace: None, field_dump: None, svg: Some(svg.clone()) };
            print_config("compare", &source, &modes, &solver, length_mode, &out);
            let mut results = Vec::new();
            for &mode in &modes {
                let result = run_pipeline(&g, mode, &solver, length_mode)?;
                report_result(mode, &result);
                results.push((mode, result));
            }
            let panels: Vec<(&str, &Layout)> =
                results.iter().map(|(m, r)| (m.name(), &r.layout)).collect();
            let centrality = &results[0].1.centrality;
            let scene = style.scene_style()?;
            let text = render_comparison(&panels, &g, centrality, &scene)?;
            write_file(&svg, text.as_bytes())
        }
        Command::Datasets { action: DatasetsAction::List } => {
            for name in datasets::names() {
                let g = datasets::by_name(name).expect("listed datasets resolve");
                println!("{name} ({} nodes, {} edges)", g.node_count(), g.edge_count());
            }
            Ok(())
        }
    }
}

fn load_input(input: &InputArgs) -> Result<(Graph, String), AppError> {
    match (&input.dataset, &input.input) {
        (Some(name), None) => {
            let g = datasets::by_name(name).ok_or_else(|| {
                AppError::Usage(format!(
                    "unknown dataset {name:?}; available: {}",
                    datasets::names().join(", ")
                ))
            })?;
            Ok((g, format!("dataset:{name}")))
        }
        (None, Some(path)) => {
            let g = formats::load_graph(path)?;
            Ok((g, format!("file:{}", path.display())))
        }
        // clap's argument group enforces exactly one source
        _ => unreachable!(),
    }
}

fn resolve_lengths(g: &Graph, handling: WeightHandling) -> EdgeLengthMode {
    match handling {
        WeightHandling::On => EdgeLengthMode::Inverse,
        WeightHandling::Off => EdgeLengthMode::Direct,
        WeightHandling::Auto => {
            if g.is_unit_weighted() {
                EdgeLengthMode::Direct
            } else {
                EdgeLengthMode::Inverse
            }
        }
    }
}

fn opt_path(p: &Option<PathBuf>) -> String {
    p.as_ref().map_or_else(|| String::from("-"), |p| p.display().to_string())
}

fn print_config(
    cmd: &str,
    source: &str,
    modes: &[Mode],
    solver: &SolverArgs,
    lengths: EdgeLengthMode,
    out: &OutputArgs,
) {
    let mode_list = modes.iter().map(|m| m.name()).collect::<Vec<_>>().join(",");
    let lengths = match lengths {
        EdgeLengthMode::Direct => "direct",
        EdgeLengthMode::Inverse => "inverse",
    };
    let mut line = String::new();
    let _ = write!(
        line,
        "config: cmd={cmd} input={source} mode={mode_list} seed={} edge-lengths={lengths} \
         w-rho={} lag={} max-iters={} step={} tol-factor={} rays={} samples={} bandwidth={} \
         grid={} extent={} out={} trace={} field-dump={} svg={}",
        solver.seed,
        solver.w_rho,
        solver.lag,
        solver.max_iters,
        solver.step,
        solver.tol_factor,
        solver.rays,
        solver.samples,
        solver.bandwidth,
        solver.grid,
        solver.extent,
        opt_path(&out.out),
        opt_path(&out.trace),
        opt_path(&out.field_dump),
        opt_path(&out.svg),
    );
    println!("{line}");
}

struct PipelineResult {
    layout: Layout,
    centrality: CentralityVector,
    field: Option<MonotonicField>,
    trace: Option<ArlTrace>,
    /// Stress of the final layout.
    sigma: f64,
    /// Alignment penalty before and after projection (arl-project only).
    projection: Option<(f64, f64)>,
}

fn run_pipeline(
    g: &Graph,
    mode: Mode,
    solver: &SolverArgs,
    lengths: EdgeLengthMode,
) -> Result<PipelineResult, AppError> {
    let g = g.edge_lengths(lengths);
    let centrality = betweenness(&g)?;
    let cfg = solver.arl_config();
    match mode {
        Mode::Mds => {
            let d = shortest_paths(&g)?;
            let params =
                MdsParams { step: cfg.step, max_iters: cfg.max_iters, tol_factor: cfg.tol_factor };
            let layout = mds_layout(&d, MdsInit::Seed(solver.seed), &params)?;
            let sigma = stress(&layout, &d, &StressWeights::elastic(&d));
            Ok(PipelineResult {
                layout,
                centrality,
                field: None,
                trace: None,
                sigma,
                projection: None,
            })
        }
        Mode::Arl | Mode::ArlProject => {
            let res = arl_layout(&g, &cfg, solver.seed)?;
            let sigma = res.trace.records.last().map_or(f64::NAN, |r| r.sigma);
            let (layout, projection) = if mode == Mode::ArlProject {
                let before = penalty(&res.field, &res.layout, &centrality);
                let projected = project_to_contours(&res.layout, &res.field, &centrality)?;
                let after = penalty(&res.field, &projected, &centrality);
                (projected, Some((before, after)))
            } else {
                (res.layout, None)
            };
            Ok(PipelineResult {
                layout,
                centrality,
                field: Some(res.field),
                trace: Some(res.trace),
                sigma,
                projection,
            })
        }
    }
}

fn report_result(mode: Mode, result: &PipelineResult) {
    match &result.trace {
        Some(trace) => {
            let last = trace.records.last().expect("trace never empty");
            println!(
                "{}: {} nodes, {} iterations, sigma={} rho={} gamma={}",
                mode.name(),
                result.layout.len(),
                last.iter,
                last.sigma,
                last.rho,
                last.gamma
            );
        }
        None => {
            println!("{}: {} nodes, sigma={}", mode.name(), result.layout.len(), result.sigma);
        }
    }
    if let Some((before, after)) = result.projection {
        println!("projection: rho-before={before} rho-after={after}");
    }
}

fn write_outputs(
    g: &Graph,
    result: &PipelineResult,
    mode: Mode,
    out: &OutputArgs,
    style: &StyleArgs,
) -> Result<(), AppError> {
    if let Some(path) = &out.out {
        write_file(path, formats::layout_to_json(&result.layout).as_bytes())?;
    }
    if let Some(path) = &out.trace {
        match &result.trace {
            Some(trace) => write_file(path, formats::trace_to_csv(trace).as_bytes())?,
            None => {
                return Err(AppError::Usage(String::from(
                    "--trace needs an arl mode; mds records no trace",
                )))
            }
        }
    }
    if let Some(path) = &out.field_dump {
        match &result.field {
            Some(field) => write_file(path, formats::field_to_json(field).as_bytes())?,
            None => {
                return Err(AppError::Usage(String::from(
                    "--field-dump needs an arl mode; mds builds no field",
                )))
            }
        }
    }
    if let Some(path) = &out.svg {
        let scene = style.scene_style()?;
        let text = match &result.field {
            Some(field) => render_svg(&result.layout, field, g, &result.centrality, &scene)?,
            None => {
                render_comparison(&[(mode.name(), &result.layout)], g, &result.centrality, &scene)?
            }
        };
        write_file(path, text.as_bytes())?;
    }
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), AppError> {
    std::fs::write(path, bytes)
        .map_err(|e| AppError::Data(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}
