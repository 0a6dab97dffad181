use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use orthoguard::bench::{disagreements, run_bench, to_csv, BenchConfig, PointSet};
use orthoguard::gen::{generate, Family, GenConfig};
use orthoguard::geom::{OrthoPolygon, Point, Segment};
use orthoguard::instance::{
    parse_model, pixelation_to_json, polygon_from_json, polygon_to_json, prepare, Instance, SolutionJson,
};
use orthoguard::models::{oracle_geo_reachable, oracle_sliding_sees, Model};
use orthoguard::pixelate::standard_pixelation;
use orthoguard::render::{render_svg, Layer, Overlay, RenderConfig};
use orthoguard::solver::{
    solve, solve_dp_with, verify_cover, CoverSolution, DpConfig, SolveError, SolverKind, Status, Verdict,
};
use orthoguard::twd::{decompose, make_nice, read_td, validate_decomposition, write_gr, write_td, Heuristic};

#[derive(Parser)]
#[command(name = "orthoguard", version, about = "Minimum guard sets for orthogonal polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Dp,
    Oracle,
    Greedy,
}

impl From<SolverArg> for SolverKind {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Dp => SolverKind::Dp,
            SolverArg::Oracle => SolverKind::Oracle,
            SolverArg::Greedy => SolverKind::Greedy,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum HeuristicArg {
    MinFill,
    MinDegree,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphArg {
    /// Auxiliary graph of an instance
    Guard,
    /// Standard pixelation of a polygon
    Pixelation,
}

#[derive(Clone, Copy, ValueEnum)]
enum PointsArg {
    All,
    Standard,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and write a solution file
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "dp")]
        solver: SolverArg,
        /// Tree decomposition of the guard graph in PACE .td format (dp only)
        #[arg(long)]
        td: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include solver wall time in the stats
        #[arg(long)]
        timings: bool,
        /// Fail instead of falling back to the oracle when the dp hits its state cap
        #[arg(long)]
        no_fallback: bool,
    },
    /// Compute the standard pixelation (or its 1-refinement) of a polygon
    Pixelate {
        polygon: PathBuf,
        #[arg(long)]
        refine: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Heuristic tree decomposition in PACE format
    Decompose {
        /// Instance file (guard graph) or polygon file (pixelation graph)
        input: PathBuf,
        #[arg(long, value_enum, default_value = "guard")]
        graph: GraphArg,
        #[arg(long, value_enum, default_value = "min-fill")]
        heuristic: HeuristicArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the graph in PACE .gr format
        #[arg(long)]
        gr: Option<PathBuf>,
    },
    /// Generate a random polygon
    Gen {
        #[arg(long, default_value = "polyomino")]
        family: Family,
        #[arg(long, default_value_t = 20)]
        cells: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        corridor_width: usize,
        #[arg(long, default_value_t = 0)]
        holes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a polygon, instance or solution as SVG
    Render {
        /// Polygon or instance file
        input: PathBuf,
        #[arg(long)]
        solution: Option<PathBuf>,
        /// Comma-separated: polygon, pixelation, refinement, guards, coverage
        #[arg(long, value_delimiter = ',', default_value = "polygon,pixelation,guards")]
        layers: Vec<String>,
        /// SVG pixels per input unit
        #[arg(long, default_value_t = 40.0)]
        scale: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a solution covers every watch point of an instance
    Verify { instance: PathBuf, solution: PathBuf },
    /// Ask the geometric oracle whether a guard sees a point
    Oracle {
        polygon: PathBuf,
        /// S, NE, NW, SE, SW, PERISCOPE:k, L1:D or SLIDING
        #[arg(long)]
        model: String,
        /// Point guard as x,y
        #[arg(long, allow_hyphen_values = true)]
        guard: Option<String>,
        /// Sliding camera as x1,y1,x2,y2
        #[arg(long, allow_hyphen_values = true)]
        camera: Option<String>,
        /// Query point as x,y
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Sweep generated families and write a CSV report
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "staircase,comb")]
        families: Vec<Family>,
        /// Generator cell counts
        #[arg(long, value_delimiter = ',', default_value = "25,50,100")]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "S")]
        models: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "dp,oracle")]
        solvers: Vec<SolverArg>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "all")]
        points: PointsArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_numbers(s: &str, n: usize) -> Result<Vec<f64>> {
    let v: Vec<f64> = s.split(',').map(|t| t.trim().parse::<f64>()).collect::<Result<_, _>>().with_context(|| format!("bad coordinates `{s}`"))?;
    if v.len() != n {
        bail!("expected {n} comma-separated numbers, got `{s}`");
    }
    Ok(v)
}

/// Polygon from either a polygon file or an instance file.
fn load_polygon(text: &str) -> Result<OrthoPolygon> {
    match Instance::from_json(text) {
        Ok(inst) => Ok(inst.polygon),
        Err(_) => Ok(polygon_from_json(text)?),
    }
}

fn status_code(status: Status) -> ExitCode {
    match status {
        Status::Infeasible => ExitCode::from(2),
        _ => ExitCode::SUCCESS,
    }
}

fn cmd_solve(
    path: &Path,
    solver: SolverKind,
    td: Option<&Path>,
    out: Option<&Path>,
    timings: bool,
    no_fallback: bool,
) -> Result<ExitCode> {
    let inst = Instance::from_json(&read(path)?)?;
    let prep = prepare(&inst)?;
    let g = &prep.graph;
    let attempt: Result<CoverSolution, SolveError> = match (td, solver) {
        (Some(td), SolverKind::Dp) => {
            let td = read_td(&read(td)?)?;
            let ug = g.undirected();
            validate_decomposition(&ug, &td).context("--td does not decompose the guard graph")?;
            let nice = make_nice(&ug, &td);
            solve_dp_with(g, &nice, &DpConfig::from_env())
        }
        (Some(_), _) => bail!("--td only applies to --solver dp"),
        (None, kind) => solve(g, kind),
    };
    let (sol, used) = match attempt {
        Ok(s) => (s, solver),
        Err(e @ (SolveError::StateCapExceeded(_) | SolveError::BudgetTooLarge { .. })) if !no_fallback => {
            eprintln!("warning: {e}; falling back to --solver oracle");
            (solve(g, SolverKind::Oracle)?, SolverKind::Oracle)
        }
        Err(e) => return Err(e.into()),
    };
    let json = SolutionJson::new(&prep, &sol, used, timings);
    emit(out, &json.to_json())?;
    Ok(status_code(sol.status))
}

fn cmd_pixelate(path: &Path, refine: bool, out: Option<&Path>, svg: Option<&Path>) -> Result<()> {
    let poly = load_polygon(&read(path)?)?;
    let std_px = standard_pixelation(&poly);
    let px = if refine { std_px.one_refinement()? } else { std_px };
    emit(out, &pixelation_to_json(&px))?;
    if let Some(svg) = svg {
        let layer = if refine { Layer::Refinement } else { Layer::Pixelation };
        let cfg = RenderConfig { layers: vec![Layer::Polygon, layer], ..RenderConfig::default() };
        emit(Some(svg), &render_svg(&poly, &cfg, None)?)?;
    }
    Ok(())
}

fn cmd_decompose(path: &Path, graph: GraphArg, heuristic: HeuristicArg, out: Option<&Path>, gr: Option<&Path>) -> Result<()> {
    let text = read(path)?;
    let g = match graph {
        GraphArg::Guard => prepare(&Instance::from_json(&text)?)?.graph.undirected(),
        GraphArg::Pixelation => standard_pixelation(&load_polygon(&text)?).graph(),
    };
    let h = match heuristic {
        HeuristicArg::MinFill => Heuristic::MinFill,
        HeuristicArg::MinDegree => Heuristic::MinDegree,
    };
    let td = decompose(&g, h);
    eprintln!("vertices {} edges {} width {}", g.num_vertices(), g.num_edges(), td.width());
    if let Some(gr) = gr {
        emit(Some(gr), &write_gr(&g))?;
    }
    emit(out, &write_td(&td))
}

fn cmd_render(path: &Path, solution: Option<&Path>, layers: &[String], scale: f64, out: Option<&Path>) -> Result<()> {
    let poly = load_polygon(&read(path)?)?;
    let layers = layers
        .iter()
        .map(|l| Layer::parse(l.trim()).ok_or_else(|| anyhow!("unknown layer `{l}`")))
        .collect::<Result<Vec<_>>>()?;
    let overlay = match solution {
        Some(p) => {
            let sol = SolutionJson::from_json(&read(p)?)?;
            Some(Overlay { model: sol.model.to_model()?, guards: sol.guards })
        }
        None => None,
    };
    let svg = render_svg(&poly, &RenderConfig { layers, scale }, overlay.as_ref())?;
    emit(out, &svg)
}

fn cmd_verify(instance: &Path, solution: &Path) -> Result<ExitCode> {
    let inst = Instance::from_json(&read(instance)?)?;
    let sol = SolutionJson::from_json(&read(solution)?)?;
    if sol.model.to_model()? != inst.model {
        bail!("solution is for model {}, instance uses {}", sol.model.kind, inst.model);
    }
    let prep = prepare(&inst)?;
    let ids = sol.guard_ids(&prep.reduced)?;
    match verify_cover(&prep.graph, &ids)? {
        Verdict::Ok => {
            println!("ok: {} guards cover all {} watch points", ids.len(), prep.reduced.watch.len());
            Ok(ExitCode::SUCCESS)
        }
        Verdict::Uncovered(ws) => {
            let pts: Vec<[f64; 2]> = ws.iter().map(|&w| prep.reduced.watch_coords(w)).collect();
            println!("uncovered: {} watch points {:?}", pts.len(), pts);
            Ok(ExitCode::from(2))
        }
    }
}

fn cmd_oracle(path: &Path, model: &str, guard: Option<&str>, camera: Option<&str>, point: &str) -> Result<()> {
    let poly = load_polygon(&read(path)?)?;
    let model = parse_model(model)?;
    let p = parse_numbers(point, 2)?;
    let p = [p[0], p[1]];
    let seen = match (model, guard, camera) {
        (Model::Sliding, _, Some(c)) => {
            let c = parse_numbers(c, 4)?;
            if c.iter().any(|v| v.fract() != 0.0) {
                bail!("camera endpoints must be integers");
            }
            let seg = Segment::new(Point::new(c[0] as i64, c[1] as i64), Point::new(c[2] as i64, c[3] as i64))
                .ok_or_else(|| anyhow!("camera must be a non-degenerate axis-parallel segment"))?;
            oracle_sliding_sees(&poly, &seg, p)?
        }
        (Model::Sliding, _, None) => bail!("SLIDING needs --camera x1,y1,x2,y2"),
        (_, Some(g), _) => {
            let g = parse_numbers(g, 2)?;
            oracle_geo_reachable(&poly, [g[0], g[1]], p, model)?
        }
        (_, None, _) => bail!("point-guard models need --guard x,y"),
    };
    println!("{seen}");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    families: Vec<Family>,
    sizes: Vec<usize>,
    models: &[String],
    solvers: &[SolverArg],
    seed: u64,
    points: PointsArg,
    out: Option<&Path>,
) -> Result<()> {
    let models = models.iter().map(|m| parse_model(m.trim())).collect::<Result<Vec<_>, _>>()?;
    let cfg = BenchConfig {
        families,
        sizes,
        models,
        solvers: solvers.iter().map(|&s| s.into()).collect(),
        seed,
        points: match points {
            PointsArg::All => PointSet::All,
            PointsArg::Standard => PointSet::Standard,
        },
    };
    let rows = run_bench(&cfg)?;
    for (a, b) in disagreements(&rows) {
        eprintln!(
            "warning: dp and oracle disagree on {} cells={} {}: {:?} vs {:?}",
            a.family, a.cells, a.model, a.cardinality, b.cardinality
        );
    }
    emit(out, &to_csv(&rows))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve { instance, solver, td, out, timings, no_fallback } => {
            cmd_solve(&instance, solver.into(), td.as_deref(), out.as_deref(), timings, no_fallback)
        }
        Command::Pixelate { polygon, refine, out, svg } => {
            cmd_pixelate(&polygon, refine, out.as_deref(), svg.as_deref()).map(|_| ExitCode::SUCCESS)
        }
        Command::Decompose { input, graph, heuristic, out, gr } => {
            cmd_decompose(&input, graph, heuristic, out.as_deref(), gr.as_deref()).map(|_| ExitCode::SUCCESS)
        }
        Command::Gen { family, cells, seed, corridor_width, holes, out } => {
            let cfg = GenConfig { seed, cells, corridor_width, holes, family };
            let poly = generate(&cfg)?;
            emit(out.as_deref(), &polygon_to_json(&poly)).map(|_| ExitCode::SUCCESS)
        }
        Command::Render { input, solution, layers, scale, out } => {
            cmd_render(&input, solution.as_deref(), &layers, scale, out.as_deref()).map(|_| ExitCode::SUCCESS)
        }
        Command::Verify { instance, solution } => cmd_verify(&instance, &solution),
        Command::Oracle { polygon, model, guard, camera, point } => {
            cmd_oracle(&polygon, &model, guard.as_deref(), camera.as_deref(), &point).map(|_| ExitCode::SUCCESS)
        }
        Command::Bench { families, sizes, models, solvers, seed, points, out } => {
            cmd_bench(families, sizes, &models, &solvers, seed, points, out.as_deref()).map(|_| ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
