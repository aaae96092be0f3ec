//! `pushsweep`: plan pushes that clear a cluttered shelf corridor.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 planning failure or
//! timeout.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use pushsweep_cli::{
    cmd_batch, cmd_diagram, cmd_gen, cmd_solve, default_render_radius, render, Algorithm,
    GenFamily, SolveOptions,
};
use pushsweep_core::{load_scene, PlanOutcome, Workspace};

#[derive(Parser)]
#[command(
    name = "pushsweep",
    version,
    about = "Plan non-prehensile pushes that clear the corridor to a target object on a shelf"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct SolverArgs {
    /// Persistence margin: plateau length that makes a radius persistent.
    #[arg(long, default_value_t = 0.015)]
    nu: f64,
    /// Minimum usable grouping radius (gripper clearance).
    #[arg(long, default_value_t = 0.08)]
    h: f64,
    /// Wall-clock planning cap in seconds.
    #[arg(long = "time-cap-s", default_value_t = 300.0)]
    time_cap_s: f64,
    /// Arm push speed in m/s (sets the action-time scale).
    #[arg(long = "push-speed", default_value_t = 0.1)]
    push_speed: f64,
    /// Action budget for the greedy planners.
    #[arg(long, default_value_t = 50)]
    max_actions: usize,
    /// Level budget for the tree search.
    #[arg(long, default_value_t = 6)]
    max_depth: usize,
    /// Record real planning wall times (breaks byte-for-byte reproducibility
    /// of outputs across runs).
    #[arg(long)]
    timing: bool,
}

impl From<SolverArgs> for SolveOptions {
    fn from(a: SolverArgs) -> Self {
        Self {
            nu: a.nu,
            h: a.h,
            time_cap_s: a.time_cap_s,
            push_speed: a.push_speed,
            max_actions: a.max_actions,
            max_depth: a.max_depth,
            timing: a.timing,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate scene files.
    Gen {
        /// Scene family to generate.
        #[arg(long, value_enum)]
        family: GenFamily,
        /// Number of scenes (seeds seed..seed+count).
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// First seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Obstacle count for random-deep scenes.
        #[arg(long = "n-obstacles", default_value_t = 7)]
        n_obstacles: usize,
        /// Workspace JSON file overriding the default shelf dimensions.
        #[arg(long)]
        workspace: Option<PathBuf>,
        /// Output directory (default: $PUSHSWEEP_OUT_DIR or ./scenes).
        #[arg(long = "out-dir")]
        out_dir: Option<PathBuf>,
    },
    /// Solve one scene and emit the plan as JSON.
    Solve {
        scene: PathBuf,
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the plan here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run algorithms over a directory of scenes and emit a CSV.
    Batch {
        scene_dir: PathBuf,
        /// Comma-separated algorithms to compare.
        #[arg(
            long,
            value_enum,
            value_delimiter = ',',
            default_values_t = [Algorithm::Phia, Algorithm::Phis, Algorithm::Ooa]
        )]
        algorithms: Vec<Algorithm>,
        #[command(flatten)]
        solver: SolverArgs,
        /// Fan scenes across worker threads (CSV content is unchanged).
        #[arg(long)]
        parallel: bool,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a scene or plan JSON file as SVG.
    Render {
        input: PathBuf,
        /// Component radius for disc coloring (default: the minimum
        /// persistent radius of the corridor members).
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = 0.015)]
        nu: f64,
        #[arg(long, default_value_t = 0.08)]
        h: f64,
        /// Write the SVG here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the persistence diagram of a scene's corridor members as CSV.
    Diagram {
        scene: PathBuf,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn load_scene_file(path: &PathBuf) -> anyhow::Result<pushsweep_core::Scene> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    load_scene(&text).with_context(|| format!("loading {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Gen {
            family,
            count,
            seed,
            n_obstacles,
            workspace,
            out_dir,
        } => {
            let ws = match workspace {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let ws: Workspace = serde_json::from_str(&text)
                        .with_context(|| format!("parsing workspace {}", path.display()))?;
                    ws.validate()?;
                    Some(ws)
                }
                None => None,
            };
            let out_dir = out_dir.unwrap_or_else(|| {
                std::env::var_os("PUSHSWEEP_OUT_DIR")
                    .map(PathBuf::from)
                    .unwrap_or_else(|| PathBuf::from("scenes"))
            });
            let paths = cmd_gen(family, count, seed, n_obstacles, ws, &out_dir)?;
            for p in &paths {
                println!("{}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            scene,
            algorithm,
            solver,
            out,
        } => {
            let scene = load_scene_file(&scene)?;
            let (json, outcome) = cmd_solve(&scene, algorithm, &solver.into());
            emit(&json, out.as_ref())?;
            Ok(match outcome {
                PlanOutcome::Success => ExitCode::SUCCESS,
                PlanOutcome::Failure | PlanOutcome::Timeout => ExitCode::from(2),
            })
        }
        Command::Batch {
            scene_dir,
            algorithms,
            solver,
            parallel,
            out,
        } => {
            let csv = cmd_batch(&scene_dir, &algorithms, &solver.into(), parallel)?;
            emit(&csv, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Render {
            input,
            radius,
            nu,
            h,
            out,
        } => {
            let text = fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let doc: serde_json::Value = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", input.display()))?;
            let svg = if doc.get("actions").is_some() {
                let scene = load_scene(&serde_json::to_string(&doc["scene"])?)?;
                let r = radius.or_else(|| default_render_radius(&scene.config, nu, h));
                render::render_plan_svg(&doc, r)?
            } else {
                let scene = load_scene(&text)
                    .with_context(|| format!("loading {}", input.display()))?;
                let r = radius.or_else(|| default_render_radius(&scene.config, nu, h));
                render::render_scene_svg(&scene, r)
            };
            emit(&svg, out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Diagram { scene, out } => {
            let scene = load_scene_file(&scene)?;
            match cmd_diagram(&scene) {
                Ok(csv) => {
                    emit(&csv, out.as_ref())?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(pushsweep_core::Error::EmptyPathRegion) => {
                    eprintln!("path region is empty: nothing blocks the target");
                    Ok(ExitCode::from(2))
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            if e.use_stderr() {
                let _ = e.print();
                return ExitCode::from(1);
            }
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
