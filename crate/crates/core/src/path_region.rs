//! The configuration of the retrieval problem and the path region: the
//! corridor of half-width `arm_width` between the gripper and the target that
//! must be empty of obstacle centers before the target can be reached.
//!
//! For targets farther than `arm_width` from both walls the corridor is
//! axis-aligned. Near-wall targets get a corridor tilted by the incidence
//! angle; rotating every position by the negated angle reduces that case to
//! the axis-aligned one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{self, Point2, Pose2, Rect, Workspace};

/// Obstacle positions, target position, gripper pose, and the workspace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub obstacles: Vec<Point2>,
    pub target: Point2,
    pub gripper: Pose2,
    pub ws: Workspace,
}

/// Slack applied to feasibility comparisons so that configurations produced
/// by long push chains remain valid under floating-point error.
pub const FEASIBILITY_TOL: f64 = 1e-9;

impl Configuration {
    pub fn new(
        obstacles: Vec<Point2>,
        target: Point2,
        gripper: Pose2,
        ws: Workspace,
    ) -> Result<Self> {
        let config = Self {
            obstacles,
            target,
            gripper,
            ws,
        };
        config.validate()?;
        Ok(config)
    }

    /// Checks the feasibility predicate: pairwise disc separation, separation
    /// from the target, and containment in the workspace deflated by the
    /// object radius.
    pub fn validate(&self) -> Result<()> {
        self.ws.validate()?;
        let rho = self.ws.object_radius;
        let inside = |p: &Point2| {
            p.x >= rho - FEASIBILITY_TOL
                && p.x <= self.ws.depth - rho + FEASIBILITY_TOL
                && p.y >= rho - FEASIBILITY_TOL
                && p.y <= self.ws.width - rho + FEASIBILITY_TOL
        };
        if !self.target.is_finite() || !inside(&self.target) {
            return Err(Error::InfeasibleConfiguration(format!(
                "target ({}, {}) is not inside the workspace deflated by the object radius",
                self.target.x, self.target.y
            )));
        }
        for (i, p) in self.obstacles.iter().enumerate() {
            if !p.is_finite() || !inside(p) {
                return Err(Error::InfeasibleConfiguration(format!(
                    "obstacles[{i}] = ({}, {}) is not inside the workspace deflated by the object radius",
                    p.x, p.y
                )));
            }
        }
        let min_sep = 2.0 * rho - FEASIBILITY_TOL;
        for i in 0..self.obstacles.len() {
            for j in (i + 1)..self.obstacles.len() {
                let d = self.obstacles[i].dist(&self.obstacles[j]);
                if d < min_sep {
                    return Err(Error::InfeasibleConfiguration(format!(
                        "obstacles[{i}] and obstacles[{j}] overlap: centers {d} m apart, minimum {}",
                        2.0 * rho
                    )));
                }
            }
            let d = self.obstacles[i].dist(&self.target);
            if d < min_sep {
                return Err(Error::InfeasibleConfiguration(format!(
                    "obstacles[{i}] and the target overlap: centers {d} m apart, minimum {}",
                    2.0 * rho
                )));
            }
        }
        let g = self.gripper.position;
        if !g.is_finite()
            || g.x < -FEASIBILITY_TOL
            || g.x > self.ws.depth + FEASIBILITY_TOL
            || g.y < -FEASIBILITY_TOL
            || g.y > self.ws.width + FEASIBILITY_TOL
        {
            return Err(Error::InfeasibleConfiguration(format!(
                "gripper ({}, {}) is outside the workspace",
                g.x, g.y
            )));
        }
        let heading = self.gripper.heading;
        if !heading.is_finite()
            || heading <= -std::f64::consts::PI
            || heading > std::f64::consts::PI
        {
            return Err(Error::InfeasibleConfiguration(format!(
                "gripper heading {heading} is outside (-pi, pi]"
            )));
        }
        Ok(())
    }

    /// Exact positional equality, the fixed-point test used by the planners.
    pub fn same_positions(&self, other: &Configuration) -> bool {
        self.obstacles == other.obstacles
            && self.target == other.target
            && self.gripper == other.gripper
    }
}

/// The corridor between gripper and target, expressed in its own frame.
///
/// `frame_angle` is zero for mid-shelf targets; positions are mapped into the
/// frame by rotating by `-frame_angle`. The corridor rectangle always has
/// height exactly `2 * arm_width` in the frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PathRegion {
    pub frame_angle: f64,
    pub corridor: Rect,
    /// Obstacle indices inside the corridor, ascending.
    pub members: Vec<usize>,
}

impl PathRegion {
    pub fn to_frame(&self, p: &Point2) -> Point2 {
        geom::rotate(p, -self.frame_angle)
    }

    pub fn to_world(&self, p: &Point2) -> Point2 {
        geom::rotate(p, self.frame_angle)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Computes the path region of a feasible configuration.
pub fn path_region(config: &Configuration) -> Result<PathRegion> {
    let ws = &config.ws;
    let wall_dist = geom::dist_point_to_walls(&config.target, ws)?;
    let frame_angle = if wall_dist > ws.arm_width {
        0.0
    } else {
        geom::incidence_angle(&config.target, ws)?
    };

    let t = geom::rotate(&config.target, -frame_angle);
    let g = geom::rotate(&config.gripper.position, -frame_angle);
    let w = ws.arm_width;

    let mut members = Vec::new();
    for (i, p) in config.obstacles.iter().enumerate() {
        let o = geom::rotate(p, -frame_angle);
        if t.y - w <= o.y && o.y <= t.y + w && g.x <= o.x && o.x < t.x {
            members.push(i);
        }
    }

    let corridor = Rect::new(
        Point2::new(g.x.min(t.x), t.y - w),
        Point2::new(t.x, t.y + w),
    );
    Ok(PathRegion {
        frame_angle,
        corridor,
        members,
    })
}

/// True iff the path region holds no obstacles, the success condition.
pub fn is_cleared(config: &Configuration) -> Result<bool> {
    Ok(path_region(config)?.is_empty())
}
