//! Implementations behind the `pushsweep` binary: scene generation, solving,
//! batch comparisons, persistence-diagram export, and SVG rendering.
//!
//! Every output is byte-deterministic for identical inputs and flags; wall
//! clock timings are only recorded when explicitly requested with `--timing`,
//! so that default batch CSVs compare equal across runs.

pub mod render;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{anyhow, Context};
use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::json;

use pushsweep_core::{
    generate_clustered, generate_random_deep_in, generate_simple_in, load_scene, ooa,
    path_region, persistent_radii, phia, phis, save_scene, zero_dim_persistence, Configuration,
    PlanOutcome, PlannerParams, PushPlan, Scene, SweepDirection, SweepParams, Workspace,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Algorithm {
    Phia,
    Phis,
    Ooa,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Phia => "phia",
            Algorithm::Phis => "phis",
            Algorithm::Ooa => "ooa",
        }
    }
}

/// Scene families the generator command accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenFamily {
    Simple,
    RandomDeep,
    Clustered,
}

/// Solver flags shared by `solve` and `batch`.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub nu: f64,
    pub h: f64,
    pub time_cap_s: f64,
    pub push_speed: f64,
    pub max_actions: usize,
    pub max_depth: usize,
    /// Record real wall-clock planning times instead of zeros.
    pub timing: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            nu: 0.015,
            h: 0.08,
            time_cap_s: 300.0,
            push_speed: 0.1,
            max_actions: 50,
            max_depth: 6,
            timing: false,
        }
    }
}

impl SolveOptions {
    pub fn planner_params(&self) -> PlannerParams {
        let mut params = PlannerParams::new(self.nu, self.h);
        params.sweep = SweepParams {
            push_speed: self.push_speed,
            ..SweepParams::from_nu(self.nu)
        };
        params.max_actions = self.max_actions;
        params.max_depth = self.max_depth;
        params.time_cap = Some(Duration::from_secs_f64(self.time_cap_s));
        params
    }
}

pub fn run_algorithm(config: &Configuration, algorithm: Algorithm, params: &PlannerParams) -> PushPlan {
    match algorithm {
        Algorithm::Phia => phia(config, params),
        Algorithm::Phis => phis(config, params),
        Algorithm::Ooa => ooa(config, params),
    }
}

/// One row of a batch CSV.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub scene_id: String,
    pub algorithm: Algorithm,
    pub outcome: String,
    pub action_count: usize,
    pub total_time_s: f64,
    pub planning_wall_time_s: f64,
}

/// Generates `count` scenes with seeds `seed..seed+count` into `out_dir`.
pub fn cmd_gen(
    family: GenFamily,
    count: u64,
    seed: u64,
    n_obstacles: usize,
    workspace: Option<Workspace>,
    out_dir: &Path,
) -> anyhow::Result<Vec<PathBuf>> {
    let ws = workspace.unwrap_or_else(pushsweep_core::default_workspace);
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let mut paths = Vec::with_capacity(count as usize);
    for s in seed..seed + count {
        let scene = match family {
            GenFamily::Simple => generate_simple_in(&ws, s)?,
            GenFamily::RandomDeep => generate_random_deep_in(&ws, s, n_obstacles)?,
            GenFamily::Clustered => generate_clustered(s),
        };
        let path = out_dir.join(format!("{}.json", scene.id));
        fs::write(&path, save_scene(&scene))
            .with_context(|| format!("writing {}", path.display()))?;
        paths.push(path);
    }
    Ok(paths)
}

/// Solves one scene; returns the plan JSON document and the outcome.
pub fn cmd_solve(
    scene: &Scene,
    algorithm: Algorithm,
    opts: &SolveOptions,
) -> (String, PlanOutcome) {
    let params = opts.planner_params();
    let t0 = Instant::now();
    let plan = run_algorithm(&scene.config, algorithm, &params);
    let wall = if opts.timing {
        t0.elapsed().as_secs_f64()
    } else {
        0.0
    };
    let doc = plan_json(scene, algorithm, &plan, opts, wall);
    let mut text = serde_json::to_string_pretty(&doc).expect("plan serializes");
    text.push('\n');
    (text, plan.outcome)
}

fn plan_json(
    scene: &Scene,
    algorithm: Algorithm,
    plan: &PushPlan,
    opts: &SolveOptions,
    wall_s: f64,
) -> serde_json::Value {
    let scene_doc: serde_json::Value =
        serde_json::from_str(&save_scene(scene)).expect("scene doc parses");
    json!({
        "scenario_id": scene.id,
        "algorithm": algorithm.as_str(),
        "outcome": plan.outcome.as_str(),
        "action_count": plan.action_count(),
        "total_time_s": plan.total_time,
        "planning_wall_time_s": wall_s,
        "nu": opts.nu,
        "h": opts.h,
        "push_speed": opts.push_speed,
        "scene": scene_doc,
        "actions": plan
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                json!({
                    "index": i,
                    "radius": s.radius,
                    "frame_angle": s.action.frame_angle,
                    "direction": direction_str(s.action.direction),
                    "swath": [s.action.swath_x.0, s.action.swath_x.1],
                    "front_start": s.action.front_start,
                    "front_end": s.action.front_end,
                    "front_stop": s.front_stop,
                    "jammed": s.jammed,
                    "moved": s.moved,
                    "time_s": s.time,
                })
            })
            .collect::<Vec<_>>(),
        "final_obstacles": plan
            .configs
            .last()
            .expect("plans hold at least the input configuration")
            .obstacles
            .iter()
            .map(|p| [p.x, p.y])
            .collect::<Vec<_>>(),
    })
}

fn direction_str(d: SweepDirection) -> &'static str {
    match d {
        SweepDirection::BottomToTop => "bottom-to-top",
        SweepDirection::TopToBottom => "top-to-bottom",
    }
}

/// Runs every algorithm on every scene file in `scene_dir` and renders the
/// CSV: one row per (scene, algorithm) ordered by scene id then algorithm
/// name, followed by a per-algorithm summary block.
pub fn cmd_batch(
    scene_dir: &Path,
    algorithms: &[Algorithm],
    opts: &SolveOptions,
    parallel: bool,
) -> anyhow::Result<String> {
    let mut files: Vec<PathBuf> = fs::read_dir(scene_dir)
        .with_context(|| format!("reading {}", scene_dir.display()))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(anyhow!("no .json scenes in {}", scene_dir.display()));
    }

    let mut algorithms = algorithms.to_vec();
    algorithms.sort_by_key(|a| a.as_str());
    algorithms.dedup();

    let jobs: Vec<(PathBuf, Algorithm)> = files
        .iter()
        .flat_map(|f| algorithms.iter().map(move |&a| (f.clone(), a)))
        .collect();

    let run_job = |(path, algorithm): &(PathBuf, Algorithm)| -> RunRecord {
        match fs::read_to_string(path)
            .map_err(|e| e.to_string())
            .and_then(|text| load_scene(&text).map_err(|e| e.to_string()))
        {
            Ok(scene) => {
                let params = opts.planner_params();
                let t0 = Instant::now();
                let plan = run_algorithm(&scene.config, *algorithm, &params);
                let wall = if opts.timing {
                    t0.elapsed().as_secs_f64()
                } else {
                    0.0
                };
                RunRecord {
                    scene_id: scene.id,
                    algorithm: *algorithm,
                    outcome: plan.outcome.as_str().to_string(),
                    action_count: plan.action_count(),
                    total_time_s: plan.total_time,
                    planning_wall_time_s: wall,
                }
            }
            // Unloadable scenes are recorded and the batch continues.
            Err(_) => RunRecord {
                scene_id: path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string()),
                algorithm: *algorithm,
                outcome: "error".to_string(),
                action_count: 0,
                total_time_s: 0.0,
                planning_wall_time_s: 0.0,
            },
        }
    };

    let mut records: Vec<RunRecord> = if parallel {
        jobs.par_iter().map(run_job).collect()
    } else {
        jobs.iter().map(run_job).collect()
    };
    records.sort_by(|a, b| {
        (a.scene_id.as_str(), a.algorithm.as_str())
            .cmp(&(b.scene_id.as_str(), b.algorithm.as_str()))
    });
    Ok(render_csv(&records, &algorithms))
}

fn render_csv(records: &[RunRecord], algorithms: &[Algorithm]) -> String {
    let mut csv =
        String::from("scene_id,algorithm,outcome,action_count,total_time_s,planning_wall_time_s\n");
    for r in records {
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            r.scene_id,
            r.algorithm.as_str(),
            r.outcome,
            r.action_count,
            r.total_time_s,
            r.planning_wall_time_s
        )
        .expect("write to string");
    }
    csv.push_str("# summary\n");
    csv.push_str("# algorithm,rows,success_rate,mean_actions,mean_total_time_s,mean_planning_wall_time_s\n");
    for a in algorithms {
        let rows: Vec<&RunRecord> = records.iter().filter(|r| r.algorithm == *a).collect();
        let n = rows.len() as f64;
        if rows.is_empty() {
            continue;
        }
        let successes = rows.iter().filter(|r| r.outcome == "success").count() as f64;
        let mean_actions = rows.iter().map(|r| r.action_count as f64).sum::<f64>() / n;
        let mean_total = rows.iter().map(|r| r.total_time_s).sum::<f64>() / n;
        let mean_wall = rows.iter().map(|r| r.planning_wall_time_s).sum::<f64>() / n;
        writeln!(
            csv,
            "# {},{},{},{},{},{}",
            a.as_str(),
            rows.len(),
            successes / n,
            mean_actions,
            mean_total,
            mean_wall
        )
        .expect("write to string");
    }
    csv
}

/// Persistence-diagram CSV of the corridor members of a scene. Errors when
/// the corridor is already clear.
pub fn cmd_diagram(scene: &Scene) -> pushsweep_core::Result<String> {
    let region = path_region(&scene.config)?;
    if region.is_empty() {
        return Err(pushsweep_core::Error::EmptyPathRegion);
    }
    let pts: Vec<pushsweep_core::Point2> = region
        .members
        .iter()
        .map(|&i| scene.config.obstacles[i])
        .collect();
    Ok(zero_dim_persistence(&pts)?.to_csv())
}

/// Picks the default rendering radius: the minimum persistent radius of the
/// corridor members, if there are any.
pub fn default_render_radius(config: &Configuration, nu: f64, h: f64) -> Option<f64> {
    let region = path_region(config).ok()?;
    if region.is_empty() {
        return None;
    }
    let pts: Vec<pushsweep_core::Point2> = region
        .members
        .iter()
        .map(|&i| config.obstacles[i])
        .collect();
    let diagram = zero_dim_persistence(&pts).ok()?;
    persistent_radii(&diagram, nu, h).ok().map(|r| r.min())
}
