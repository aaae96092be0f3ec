//! The decision layer: selecting which component to push at which radius.
//!
//! Three planners share the same push primitive. The greedy planner picks
//! the smallest persistent radius at every configuration; the one-by-one
//! ablation uses a fixed tiny radius so obstacles are pushed essentially
//! individually; the breadth-first search branches over every persistent
//! radius per node and returns the success path of minimum total push time.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::geom::{aabb, rotate, Point2, Rect, Workspace};
use crate::path_region::{path_region, Configuration, PathRegion};
use crate::persistence::{
    closest_component, components_at, persistent_radii, zero_dim_persistence,
};
use crate::push_sim::{
    execute_sweep, plan_sweep, SweepAction, SweepDirection, SweepParams,
};

/// Planner knobs; `new(nu, h)` fills in the defaults used everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannerParams {
    /// Plateau length that makes a death radius persistent.
    pub nu: f64,
    /// Smallest usable grouping radius (gripper clearance).
    pub h: f64,
    /// Action budget for the greedy planners.
    pub max_actions: usize,
    /// Level budget for the tree search.
    pub max_depth: usize,
    pub sweep: SweepParams,
    /// Optional wall-clock cap on planning.
    pub time_cap: Option<Duration>,
    /// Fixed radius of the one-by-one ablation.
    pub ooa_radius: f64,
}

impl PlannerParams {
    pub fn new(nu: f64, h: f64) -> Self {
        Self {
            nu,
            h,
            max_actions: 50,
            max_depth: 6,
            sweep: SweepParams::from_nu(nu),
            time_cap: None,
            ooa_radius: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanOutcome {
    Success,
    Failure,
    Timeout,
}

impl PlanOutcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlanOutcome::Success => "success",
            PlanOutcome::Failure => "failure",
            PlanOutcome::Timeout => "timeout",
        }
    }
}

/// One executed push: the grouping radius, the sweep, and its observed
/// effect.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanStep {
    pub radius: f64,
    pub action: SweepAction,
    pub moved: Vec<usize>,
    pub jammed: bool,
    pub front_stop: f64,
    pub time: f64,
}

/// A full plan: `configs` has one more entry than `steps`, consecutive
/// entries related by executing the step between them.
#[derive(Debug, Clone, PartialEq)]
pub struct PushPlan {
    pub steps: Vec<PlanStep>,
    pub configs: Vec<Configuration>,
    pub total_time: f64,
    pub outcome: PlanOutcome,
}

impl PushPlan {
    pub fn action_count(&self) -> usize {
        self.steps.len()
    }

    pub fn actions(&self) -> impl Iterator<Item = &SweepAction> {
        self.steps.iter().map(|s| &s.action)
    }
}

/// Inflated axis-aligned bounding rectangle, in the region frame, of the
/// connected component closest to the gripper at radius `r`.
pub fn crccc(config: &Configuration, r: f64) -> Result<Rect> {
    let region = path_region(config)?;
    component_rect(config, &region, r)
}

fn component_rect(config: &Configuration, region: &PathRegion, r: f64) -> Result<Rect> {
    if region.is_empty() {
        return Err(Error::EmptyPathRegion);
    }
    let pts: Vec<Point2> = region
        .members
        .iter()
        .map(|&i| config.obstacles[i])
        .collect();
    let partition = components_at(&pts, r);
    let closest = closest_component(&partition, &pts, &config.gripper);
    let frame_pts: Vec<Point2> = closest.iter().map(|&k| region.to_frame(&pts[k])).collect();
    aabb(&frame_pts, config.ws.object_radius)
}

/// Sweep direction rule: exit toward the side of the corridor centroid the
/// component sits on; a centroid tie falls back to the workspace centroid.
pub fn choose_direction(rect: &Rect, region: &PathRegion, ws: &Workspace) -> SweepDirection {
    let c_rect = rect.centroid().y;
    let c_corridor = region.corridor.centroid().y;
    if c_rect > c_corridor {
        SweepDirection::BottomToTop
    } else if c_rect < c_corridor {
        SweepDirection::TopToBottom
    } else {
        let c_ws = rotate(&ws.centroid(), -region.frame_angle).y;
        if c_rect <= c_ws {
            SweepDirection::TopToBottom
        } else {
            SweepDirection::BottomToTop
        }
    }
}

fn push_step(config: &Configuration, r: f64, sweep: &SweepParams) -> Result<(Configuration, PlanStep)> {
    let region = path_region(config)?;
    let rect = component_rect(config, &region, r)?;
    let direction = choose_direction(&rect, &region, &config.ws);
    let action = plan_sweep(config, &rect, &region, direction, sweep)?;
    let out = execute_sweep(config, &action, sweep);
    let step = PlanStep {
        radius: r,
        action,
        moved: out.moved,
        jammed: out.jammed,
        front_stop: out.front_stop,
        time: out.time,
    };
    Ok((out.config_after, step))
}

/// One push at radius `r`: group, pick a direction, sweep, and report the
/// updated configuration and elapsed time.
pub fn push_action(config: &Configuration, r: f64, sweep: &SweepParams) -> Result<(Configuration, f64)> {
    let (next, step) = push_step(config, r, sweep)?;
    Ok((next, step.time))
}

enum RadiusRule {
    MinPersistent,
    Fixed(f64),
}

fn min_persistent_radius(config: &Configuration, region: &PathRegion, params: &PlannerParams) -> Result<f64> {
    let pts: Vec<Point2> = region
        .members
        .iter()
        .map(|&i| config.obstacles[i])
        .collect();
    let diagram = zero_dim_persistence(&pts)?;
    Ok(persistent_radii(&diagram, params.nu, params.h)?.min())
}

fn greedy(config0: &Configuration, params: &PlannerParams, rule: RadiusRule) -> PushPlan {
    let start = Instant::now();
    let mut configs = vec![config0.clone()];
    let mut steps: Vec<PlanStep> = Vec::new();
    let mut total_time = 0.0;
    let outcome = loop {
        let cfg = configs.last().expect("nonempty").clone();
        let region = match path_region(&cfg) {
            Ok(r) => r,
            Err(_) => break PlanOutcome::Failure,
        };
        if region.is_empty() {
            break PlanOutcome::Success;
        }
        if params.time_cap.is_some_and(|cap| start.elapsed() >= cap) {
            break PlanOutcome::Timeout;
        }
        if steps.len() >= params.max_actions {
            break PlanOutcome::Timeout;
        }
        let r = match rule {
            RadiusRule::Fixed(r) => r,
            RadiusRule::MinPersistent => match min_persistent_radius(&cfg, &region, params) {
                Ok(r) => r,
                Err(_) => break PlanOutcome::Failure,
            },
        };
        match push_step(&cfg, r, &params.sweep) {
            // A blocked approach is a dead end for the greedy planners, like
            // a push that moves nothing.
            Err(_) => break PlanOutcome::Failure,
            Ok((next, step)) => {
                if next.same_positions(&cfg) {
                    break PlanOutcome::Failure;
                }
                total_time += step.time;
                steps.push(step);
                configs.push(next);
            }
        }
    };
    PushPlan {
        steps,
        configs,
        total_time,
        outcome,
    }
}

/// Greedy planner: at every configuration push the component closest to the
/// gripper, grouped at the minimum persistent radius.
pub fn phia(config0: &Configuration, params: &PlannerParams) -> PushPlan {
    greedy(config0, params, RadiusRule::MinPersistent)
}

/// One-by-one ablation: the greedy loop with the grouping radius pinned to
/// `params.ooa_radius`, so components degenerate to single obstacles.
pub fn ooa(config0: &Configuration, params: &PlannerParams) -> PushPlan {
    greedy(config0, params, RadiusRule::Fixed(params.ooa_radius))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeLabel {
    Open,
    Success,
    Fail,
}

/// Search tree node; the root has no parent edge.
#[derive(Debug, Clone)]
pub struct TreeNode {
    pub config: Configuration,
    pub parent: Option<usize>,
    pub edge: Option<PlanStep>,
    pub label: NodeLabel,
    pub depth: usize,
    /// Total push time accumulated along the path from the root.
    pub arrival_time: f64,
}

/// Breadth-first search tree over configurations.
#[derive(Debug, Clone)]
pub struct PlanTree {
    pub nodes: Vec<TreeNode>,
}

impl PlanTree {
    /// Edges as (parent, child, radius, time).
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
        self.nodes.iter().enumerate().filter_map(|(i, n)| {
            n.parent
                .map(|p| (p, i, n.edge.as_ref().unwrap().radius, n.edge.as_ref().unwrap().time))
        })
    }

    fn radius_seq(&self, mut id: usize) -> Vec<f64> {
        let mut seq = Vec::new();
        while let Some(p) = self.nodes[id].parent {
            seq.push(self.nodes[id].edge.as_ref().unwrap().radius);
            id = p;
        }
        seq.reverse();
        seq
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    a.len() < b.len()
}

fn position_key(config: &Configuration) -> Vec<(u64, u64)> {
    config
        .obstacles
        .iter()
        .map(|p| (p.x.to_bits(), p.y.to_bits()))
        .collect()
}

/// Breadth-first search over persistent radii, returning both the best plan
/// and the full tree.
pub fn phis_with_tree(config0: &Configuration, params: &PlannerParams) -> (PushPlan, PlanTree) {
    let start = Instant::now();
    let deadline_hit =
        |t: &Instant| params.time_cap.is_some_and(|cap| t.elapsed() >= cap);

    let mut tree = PlanTree {
        nodes: vec![TreeNode {
            config: config0.clone(),
            parent: None,
            edge: None,
            label: NodeLabel::Open,
            depth: 0,
            arrival_time: 0.0,
        }],
    };
    let mut level: Vec<usize> = vec![0];
    let mut successes: Vec<usize> = Vec::new();
    let mut timed_out = false;
    let mut depth = 0usize;

    'search: while !level.is_empty() {
        let mut next_level: Vec<usize> = Vec::new();
        // Exact-position dedup within the level: cheaper arrivals win, ties
        // go to the lexicographically smaller radius sequence.
        let mut seen: BTreeMap<Vec<(u64, u64)>, usize> = BTreeMap::new();
        for &node_id in &level {
            if deadline_hit(&start) {
                timed_out = true;
                break 'search;
            }
            let cfg = tree.nodes[node_id].config.clone();
            let region = match path_region(&cfg) {
                Ok(r) => r,
                Err(_) => {
                    tree.nodes[node_id].label = NodeLabel::Fail;
                    continue;
                }
            };
            if region.is_empty() {
                tree.nodes[node_id].label = NodeLabel::Success;
                successes.push(node_id);
                continue;
            }
            if depth == params.max_depth {
                continue;
            }
            let radii = {
                let pts: Vec<Point2> = region
                    .members
                    .iter()
                    .map(|&i| cfg.obstacles[i])
                    .collect();
                match zero_dim_persistence(&pts)
                    .and_then(|d| persistent_radii(&d, params.nu, params.h))
                {
                    Ok(r) => r.radii,
                    Err(_) => {
                        tree.nodes[node_id].label = NodeLabel::Fail;
                        continue;
                    }
                }
            };
            for r in radii {
                let (next_cfg, step) = match push_step(&cfg, r, &params.sweep) {
                    // Blocked approach: the branch is dead, like a push
                    // that changes nothing.
                    Err(_) => continue,
                    Ok(v) => v,
                };
                let arrival = tree.nodes[node_id].arrival_time + step.time;
                if next_cfg.same_positions(&cfg) {
                    tree.nodes.push(TreeNode {
                        config: next_cfg,
                        parent: Some(node_id),
                        edge: Some(step),
                        label: NodeLabel::Fail,
                        depth: depth + 1,
                        arrival_time: arrival,
                    });
                    continue;
                }
                let key = position_key(&next_cfg);
                match seen.entry(key) {
                    Entry::Vacant(v) => {
                        let id = tree.nodes.len();
                        tree.nodes.push(TreeNode {
                            config: next_cfg,
                            parent: Some(node_id),
                            edge: Some(step),
                            label: NodeLabel::Open,
                            depth: depth + 1,
                            arrival_time: arrival,
                        });
                        v.insert(id);
                        next_level.push(id);
                    }
                    Entry::Occupied(o) => {
                        let id = *o.get();
                        let better = arrival < tree.nodes[id].arrival_time
                            || (arrival == tree.nodes[id].arrival_time && {
                                let mut candidate = tree.radius_seq(node_id);
                                candidate.push(step.radius);
                                lex_less(&candidate, &tree.radius_seq(id))
                            });
                        if better {
                            tree.nodes[id].parent = Some(node_id);
                            tree.nodes[id].edge = Some(step);
                            tree.nodes[id].arrival_time = arrival;
                        }
                    }
                }
            }
        }
        level = next_level;
        depth += 1;
    }

    let best = successes.iter().copied().min_by(|&a, &b| {
        let ka = (tree.nodes[a].arrival_time, tree.nodes[a].depth);
        let kb = (tree.nodes[b].arrival_time, tree.nodes[b].depth);
        ka.partial_cmp(&kb)
            .expect("finite times")
            .then_with(|| {
                let (sa, sb) = (tree.radius_seq(a), tree.radius_seq(b));
                if lex_less(&sa, &sb) {
                    std::cmp::Ordering::Less
                } else if lex_less(&sb, &sa) {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Equal
                }
            })
    });

    let plan = match best {
        Some(id) => {
            let mut steps = Vec::new();
            let mut configs = vec![tree.nodes[id].config.clone()];
            let mut cur = id;
            while let Some(p) = tree.nodes[cur].parent {
                steps.push(tree.nodes[cur].edge.clone().expect("edge on non-root"));
                configs.push(tree.nodes[p].config.clone());
                cur = p;
            }
            steps.reverse();
            configs.reverse();
            PushPlan {
                steps,
                configs,
                total_time: tree.nodes[id].arrival_time,
                outcome: PlanOutcome::Success,
            }
        }
        None => PushPlan {
            steps: Vec::new(),
            configs: vec![config0.clone()],
            total_time: 0.0,
            outcome: if timed_out {
                PlanOutcome::Timeout
            } else {
                PlanOutcome::Failure
            },
        },
    };
    (plan, tree)
}

/// Tree-search planner: branch over every persistent radius per node and
/// return the success path with the smallest total push time.
pub fn phis(config0: &Configuration, params: &PlannerParams) -> PushPlan {
    phis_with_tree(config0, params).0
}
