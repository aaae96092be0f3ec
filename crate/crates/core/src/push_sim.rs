//! Deterministic quasi-static sweep simulator.
//!
//! One sweep pushes every obstacle whose center lies in a vertical swath of
//! the corridor frame from a start front line to an end front line past the
//! corridor boundary. Pushed objects translate only along the push axis and
//! compact into a chain at exactly one diameter of center spacing; the
//! chain is capped by the shelf walls and by stationary discs ahead of it.
//! When a cap stops the chain short of full clearance the arm front stops at
//! the jam point and the sweep reports `jammed` instead of failing.
//!
//! Objects never move backward, never overlap after a sweep, and an input
//! without swath candidates is returned bit-identical, which the planners
//! rely on for fixed-point detection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{rotate, Point2, Pose2, Rect};
use crate::path_region::{Configuration, PathRegion};

/// Which corridor boundary the sweep exits through, in frame coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepDirection {
    BottomToTop,
    TopToBottom,
}

/// One push primitive, fully described in the corridor frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAction {
    pub frame_angle: f64,
    /// Closed x-interval of the swept slab in the frame.
    pub swath_x: (f64, f64),
    pub direction: SweepDirection,
    /// Frame-y of the arm front at the start of the push.
    pub front_start: f64,
    /// Frame-y of the arm front at full extension, past the corridor
    /// boundary so pushed centers end strictly outside the corridor.
    pub front_end: f64,
}

/// Result of executing one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub config_after: Configuration,
    /// Elapsed action time: approach plus front travel over the push speed.
    pub time: f64,
    /// Indices of obstacles whose position changed.
    pub moved: Vec<usize>,
    /// True when a wall or blocker stopped the front short of `front_end`.
    pub jammed: bool,
    /// Frame-y where the arm front actually stopped.
    pub front_stop: f64,
}

/// Sweep geometry and timing knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepParams {
    /// Extra clearance past the corridor boundary for pushed objects.
    pub clearance: f64,
    /// Arm speed used for `ActionsTime`, meters per second.
    pub push_speed: f64,
}

impl SweepParams {
    /// Default parameters for a grouping margin `nu`: clearance is half the
    /// margin, the push speed is 0.1 m/s.
    pub fn from_nu(nu: f64) -> Self {
        Self {
            clearance: 0.5 * nu,
            push_speed: 0.1,
        }
    }
}

/// Gap between the start front and the nearest disc edge.
pub const APPROACH_EPS: f64 = 1e-3;

/// Plans one sweep of the rectangle `rect` (the inflated bounding box of the
/// component to move, in the region frame) out of the corridor.
pub fn plan_sweep(
    config: &Configuration,
    rect: &Rect,
    region: &PathRegion,
    direction: SweepDirection,
    params: &SweepParams,
) -> Result<SweepAction> {
    let rho = config.ws.object_radius;
    let swath_x = (rect.lo.x - rho, rect.hi.x + rho);
    let (front_start, front_end) = match direction {
        SweepDirection::BottomToTop => (
            rect.lo.y - rho - APPROACH_EPS,
            region.corridor.hi.y + rho + params.clearance,
        ),
        SweepDirection::TopToBottom => (
            rect.hi.y + rho + APPROACH_EPS,
            region.corridor.lo.y - rho - params.clearance,
        ),
    };

    // The arm may not sweep through the target disc.
    let target_f = region.to_frame(&config.target);
    let slab = Rect::new(
        Point2::new(swath_x.0, front_start.min(front_end)),
        Point2::new(swath_x.1, front_start.max(front_end)),
    );
    if slab.dist_to_point(&target_f) < rho {
        return Err(Error::BlockedApproach);
    }

    Ok(SweepAction {
        frame_angle: region.frame_angle,
        swath_x,
        direction,
        front_start,
        front_end,
    })
}

/// World-frame distance from the gripper to the sweep start point (swath
/// midpoint on the start front).
pub fn approach_distance(gripper: &Pose2, action: &SweepAction) -> f64 {
    let start_f = Point2::new(
        0.5 * (action.swath_x.0 + action.swath_x.1),
        action.front_start,
    );
    let start_w = rotate(&start_f, action.frame_angle);
    gripper.position.dist(&start_w)
}

/// Largest `u` with `lo <= a + b*u <= hi`, or infinity when `b` is
/// negligible (the coordinate does not change along the push).
fn linear_upper_bound(a: f64, b: f64, lo: f64, hi: f64) -> f64 {
    if b > 1e-12 {
        (hi - a) / b
    } else if b < -1e-12 {
        (lo - a) / b
    } else {
        f64::INFINITY
    }
}

/// Executes a planned sweep on `config`.
pub fn execute_sweep(
    config: &Configuration,
    action: &SweepAction,
    params: &SweepParams,
) -> SweepOutcome {
    let rho = config.ws.object_radius;
    let two_rho = 2.0 * rho;
    let phi = action.frame_angle;
    let dir = match action.direction {
        SweepDirection::BottomToTop => 1.0,
        SweepDirection::TopToBottom => -1.0,
    };
    // Push coordinate u = dir * frame_y increases along the push.
    let u_start = dir * action.front_start;
    let u_end = dir * action.front_end;

    let frames: Vec<Point2> = config
        .obstacles
        .iter()
        .map(|p| rotate(p, -phi))
        .collect();

    let mut chain: Vec<usize> = (0..config.obstacles.len())
        .filter(|&i| {
            let f = frames[i];
            f.x >= action.swath_x.0 && f.x <= action.swath_x.1 && dir * f.y >= u_start
        })
        .collect();
    chain.sort_by(|&a, &b| {
        (dir * frames[a].y, a)
            .partial_cmp(&(dir * frames[b].y, b))
            .expect("finite coordinates")
    });

    if chain.is_empty() {
        // Fixed point: nothing in the swath, the configuration is returned
        // bit-identical.
        return SweepOutcome {
            config_after: config.clone(),
            time: ((u_end - u_start).max(0.0) + approach_distance(&config.gripper, action))
                / params.push_speed,
            moved: Vec::new(),
            jammed: false,
            front_stop: action.front_end,
        };
    }

    let in_chain = {
        let mut mask = vec![false; config.obstacles.len()];
        for &i in &chain {
            mask[i] = true;
        }
        mask
    };

    // Per-object cap on u from the walls and from stationary discs ahead.
    let target_f = rotate(&config.target, -phi);
    let cap_for = |idx: usize| -> f64 {
        let fx = frames[idx].x;
        let u0 = dir * frames[idx].y;
        // World coordinates along the push line: x = fx cos(phi) - dir sin(phi) u,
        // y = fx sin(phi) + dir cos(phi) u.
        let (s, c) = phi.sin_cos();
        let mut cap = linear_upper_bound(fx * c, -dir * s, rho, config.ws.depth - rho);
        cap = cap.min(linear_upper_bound(fx * s, dir * c, rho, config.ws.width - rho));
        let mut block = |p: &Point2| {
            let dx = (p.x - fx).abs();
            let pu = dir * p.y;
            if dx < two_rho && pu >= u0 {
                cap = cap.min(pu - (two_rho * two_rho - dx * dx).max(0.0).sqrt());
            }
        };
        for (j, f) in frames.iter().enumerate() {
            if !in_chain[j] {
                block(f);
            }
        }
        block(&target_f);
        cap
    };

    let k = chain.len();
    let u: Vec<f64> = chain.iter().map(|&i| dir * frames[i].y).collect();

    // Ceilings: the highest u each chain member can reach once everything
    // ahead of it is fully compacted. Never below the current position.
    let mut ceiling = vec![0.0; k];
    ceiling[k - 1] = u[k - 1].max(cap_for(chain[k - 1]));
    for j in (0..k - 1).rev() {
        ceiling[j] = u[j].max(cap_for(chain[j]).min(ceiling[j + 1] - two_rho));
    }

    // Placement: the arm front presses the chain upward in u; contact stops
    // propagating at the first untouched or pinned member.
    let mut final_u = u.clone();
    let mut press = u_end + rho;
    let mut moving = true;
    let mut jam = false;
    let mut first_contact_final = None;
    for j in 0..k {
        if !moving || u[j] >= press {
            moving = false;
            continue;
        }
        let f = press.min(ceiling[j]);
        if f < press {
            jam = true;
        }
        if first_contact_final.is_none() {
            first_contact_final = Some(f);
        }
        if f <= u[j] {
            moving = false;
        } else {
            final_u[j] = f;
            press = f + two_rho;
        }
    }

    // Without a jam the arm always reaches front_end; with one it stops in
    // contact with the first chain member.
    let front_stop_u = match (jam, first_contact_final) {
        (true, Some(f1)) => u_end.min(f1 - rho),
        _ => u_end,
    };
    let travel = (front_stop_u - u_start).max(0.0);

    let mut obstacles = config.obstacles.clone();
    let mut moved = Vec::new();
    for j in 0..k {
        if final_u[j] != u[j] {
            let idx = chain[j];
            let f = Point2::new(frames[idx].x, dir * final_u[j]);
            obstacles[idx] = rotate(&f, phi);
            moved.push(idx);
        }
    }
    moved.sort_unstable();

    SweepOutcome {
        config_after: Configuration {
            obstacles,
            target: config.target,
            gripper: config.gripper,
            ws: config.ws,
        },
        time: (travel + approach_distance(&config.gripper, action)) / params.push_speed,
        moved,
        jammed: jam,
        front_stop: dir * front_stop_u,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Workspace;
    use crate::path_region::path_region;

    fn ws() -> Workspace {
        Workspace::new(0.6, 0.6, 0.12, 0.06, 0.03).unwrap()
    }

    fn params() -> SweepParams {
        SweepParams::from_nu(0.015)
    }

    fn config_with(obstacles: Vec<Point2>) -> Configuration {
        Configuration::new(
            obstacles,
            Point2::new(0.5, 0.3),
            Pose2::new(0.0, 0.3, 0.0),
            ws(),
        )
        .unwrap()
    }

    fn demo_rect() -> Rect {
        Rect::new(Point2::new(0.2, 0.25), Point2::new(0.3, 0.35))
    }

    #[test]
    fn plan_sweep_arithmetic() {
        let c = config_with(vec![Point2::new(0.25, 0.30)]);
        let region = path_region(&c).unwrap();
        assert_eq!(region.corridor.hi.y, 0.42);
        let a = plan_sweep(&c, &demo_rect(), &region, SweepDirection::BottomToTop, &params())
            .unwrap();
        assert!((a.swath_x.0 - 0.17).abs() < 1e-15);
        assert!((a.swath_x.1 - 0.33).abs() < 1e-15);
        assert!((a.front_start - 0.219).abs() < 1e-15);
        assert!((a.front_end - 0.4575).abs() < 1e-15);
    }

    #[test]
    fn plan_sweep_mirror() {
        let c = config_with(vec![Point2::new(0.25, 0.30)]);
        let region = path_region(&c).unwrap();
        let up = plan_sweep(&c, &demo_rect(), &region, SweepDirection::BottomToTop, &params())
            .unwrap();
        let down = plan_sweep(&c, &demo_rect(), &region, SweepDirection::TopToBottom, &params())
            .unwrap();
        // Fronts reflect through the corridor midline y = 0.30.
        assert!((up.front_start + down.front_start - 0.6).abs() < 1e-12);
        assert!((up.front_end + down.front_end - 0.6).abs() < 1e-12);
        assert_eq!(up.swath_x, down.swath_x);
    }

    #[test]
    fn plan_sweep_degenerate_rect() {
        let c = config_with(vec![Point2::new(0.25, 0.30)]);
        let region = path_region(&c).unwrap();
        let point_rect = Rect::new(Point2::new(0.25, 0.30), Point2::new(0.25, 0.30));
        let a = plan_sweep(&c, &point_rect, &region, SweepDirection::BottomToTop, &params())
            .unwrap();
        assert!((a.swath_x.1 - a.swath_x.0 - 0.06).abs() < 1e-15);
    }

    #[test]
    fn plan_sweep_blocked_by_target() {
        // Swath reaching the target column is rejected.
        let c = config_with(vec![Point2::new(0.44, 0.34)]);
        let region = path_region(&c).unwrap();
        let rect = Rect::new(Point2::new(0.41, 0.31), Point2::new(0.47, 0.37));
        let r = plan_sweep(&c, &rect, &region, SweepDirection::BottomToTop, &params());
        assert!(matches!(r, Err(Error::BlockedApproach)));
    }

    #[test]
    fn single_obstacle_exits_corridor() {
        let c = config_with(vec![Point2::new(0.25, 0.30)]);
        let region = path_region(&c).unwrap();
        let a = plan_sweep(&c, &demo_rect(), &region, SweepDirection::BottomToTop, &params())
            .unwrap();
        let out = execute_sweep(&c, &a, &params());
        assert_eq!(out.moved, vec![0]);
        assert!(!out.jammed);
        let p = out.config_after.obstacles[0];
        assert!((p.y - 0.4875).abs() < 1e-12);
        assert_eq!(p.x, 0.25);
        assert!(p.y > region.corridor.hi.y);
        assert!(out.config_after.validate().is_ok());
        assert!(out.time > 0.0);
    }

    #[test]
    fn chain_push_stacks_at_diameter_spacing() {
        let c = config_with(vec![Point2::new(0.25, 0.30), Point2::new(0.25, 0.37)]);
        let region = path_region(&c).unwrap();
        let a = plan_sweep(&c, &demo_rect(), &region, SweepDirection::BottomToTop, &params())
            .unwrap();
        let out = execute_sweep(&c, &a, &params());
        assert_eq!(out.moved, vec![0, 1]);
        assert!(!out.jammed);
        assert!((out.config_after.obstacles[0].y - (0.4575 + 0.03)).abs() < 1e-12);
        assert!((out.config_after.obstacles[1].y - (0.4575 + 0.09)).abs() < 1e-12);
        assert!(out.config_after.validate().is_ok());
    }

    #[test]
    fn obstacle_beyond_front_end_untouched() {
        let c = config_with(vec![Point2::new(0.25, 0.30), Point2::new(0.25, 0.55)]);
        let region = path_region(&c).unwrap();
        let a = plan_sweep(&c, &demo_rect(), &region, SweepDirection::BottomToTop, &params())
            .unwrap();
        let out = execute_sweep(&c, &a, &params());
        assert_eq!(out.moved, vec![0]);
        assert_eq!(out.config_after.obstacles[1], Point2::new(0.25, 0.55));
    }

    #[test]
    fn empty_swath_is_exact_fixed_point() {
        let c = config_with(vec![Point2::new(0.45, 0.55)]);
        let region = path_region(&c).unwrap();
        let a = plan_sweep(&c, &demo_rect(), &region, SweepDirection::BottomToTop, &params())
            .unwrap();
        let out = execute_sweep(&c, &a, &params());
        assert!(out.moved.is_empty());
        assert!(!out.jammed);
        assert!(out.config_after.same_positions(&c));
        assert_eq!(
            out.config_after.obstacles[0].y.to_bits(),
            c.obstacles[0].y.to_bits()
        );
    }

    #[test]
    fn wall_jam_stops_front_and_preserves_feasibility() {
        // Three obstacles stacked toward the north wall cannot all clear a
        // corridor whose top sits at 0.42: the topmost caps at 0.57.
        let c = config_with(vec![
            Point2::new(0.25, 0.30),
            Point2::new(0.25, 0.45),
            Point2::new(0.25, 0.53),
        ]);
        let region = path_region(&c).unwrap();
        let a = plan_sweep(&c, &demo_rect(), &region, SweepDirection::BottomToTop, &params())
            .unwrap();
        let out = execute_sweep(&c, &a, &params());
        assert!(out.jammed);
        assert!(out.front_stop < a.front_end);
        assert!(out.config_after.validate().is_ok());
        // The chain compacted against the wall: 0.57, 0.51, 0.45.
        let ys: Vec<f64> = out.config_after.obstacles.iter().map(|p| p.y).collect();
        assert!((ys[2] - 0.57).abs() < 1e-12);
        assert!((ys[1] - 0.51).abs() < 1e-12);
        assert!((ys[0] - 0.45).abs() < 1e-12);
    }

    #[test]
    fn stationary_blocker_outside_swath_caps_the_chain() {
        // A disc just right of the swath edge, ahead of a pushed disc near
        // that edge, limits how far the pushed disc can travel.
        let c = config_with(vec![Point2::new(0.32, 0.30), Point2::new(0.37, 0.44)]);
        let region = path_region(&c).unwrap();
        let a = plan_sweep(&c, &demo_rect(), &region, SweepDirection::BottomToTop, &params())
            .unwrap();
        // Obstacle 1 sits at x = 0.37 > swath_hi = 0.33, so it stays put and
        // blocks: the pushed disc stops in sliding contact with it.
        let out = execute_sweep(&c, &a, &params());
        assert_eq!(out.moved, vec![0]);
        assert!(out.jammed);
        assert!(out.config_after.validate().is_ok());
        assert_eq!(out.config_after.obstacles[1], Point2::new(0.37, 0.44));
        let d = out.config_after.obstacles[0].dist(&out.config_after.obstacles[1]);
        assert!(d >= 0.06 - 1e-9);
        assert!((d - 0.06).abs() < 1e-9);
    }

    #[test]
    fn rotated_sweep_round_trips_against_validation() {
        // Near-wall target: the corridor tilts, the sweep runs in the rotated
        // frame, and the outcome must stay feasible in world coordinates.
        let c = Configuration::new(
            vec![Point2::new(0.25, 0.40), Point2::new(0.30, 0.32)],
            Point2::new(0.4, 0.55),
            Pose2::new(0.0, 0.3, 0.0),
            ws(),
        )
        .unwrap();
        let region = path_region(&c).unwrap();
        assert!(region.frame_angle > 0.0);
        assert!(!region.members.is_empty());
        let pts: Vec<Point2> = region
            .members
            .iter()
            .map(|&i| region.to_frame(&c.obstacles[i]))
            .collect();
        let rect = crate::geom::aabb(&pts, c.ws.object_radius).unwrap();
        let a = plan_sweep(&c, &rect, &region, SweepDirection::TopToBottom, &params()).unwrap();
        let out = execute_sweep(&c, &a, &params());
        assert!(!out.moved.is_empty());
        assert!(out.config_after.validate().is_ok());
        // Moved members end outside the corridor band in frame coordinates.
        if !out.jammed {
            for &i in &out.moved {
                let f = region.to_frame(&out.config_after.obstacles[i]);
                assert!(f.y < region.corridor.lo.y || f.y > region.corridor.hi.y);
            }
        }
    }

    #[test]
    fn approach_distance_cases() {
        let a = SweepAction {
            frame_angle: 0.0,
            swath_x: (0.25, 0.35),
            direction: SweepDirection::BottomToTop,
            front_start: 0.4,
            front_end: 0.5,
        };
        // Gripper exactly at the start point.
        let g = Pose2::new(0.3, 0.4, 0.0);
        assert_eq!(approach_distance(&g, &a), 0.0);
        // 3-4-5 triangle.
        let g = Pose2::new(0.0, 0.0, 0.0);
        assert!((approach_distance(&g, &a) - 0.5).abs() < 1e-12);
        // Rotating the whole instance preserves the distance.
        let phi = 0.4;
        let rot_a = SweepAction {
            frame_angle: phi,
            ..a.clone()
        };
        let g_rot = Pose2 {
            position: rotate(&g.position, phi),
            heading: 0.0,
        };
        assert!((approach_distance(&g_rot, &rot_a) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sweep_is_deterministic() {
        let c = config_with(vec![
            Point2::new(0.25, 0.30),
            Point2::new(0.28, 0.37),
            Point2::new(0.22, 0.24),
        ]);
        let region = path_region(&c).unwrap();
        let a = plan_sweep(&c, &demo_rect(), &region, SweepDirection::BottomToTop, &params())
            .unwrap();
        let o1 = execute_sweep(&c, &a, &params());
        let o2 = execute_sweep(&c, &a, &params());
        assert_eq!(o1, o2);
        for (p, q) in o1
            .config_after
            .obstacles
            .iter()
            .zip(o2.config_after.obstacles.iter())
        {
            assert_eq!(p.x.to_bits(), q.x.to_bits());
            assert_eq!(p.y.to_bits(), q.y.to_bits());
        }
    }
}
