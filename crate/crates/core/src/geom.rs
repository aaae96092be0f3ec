//! Planar primitives shared by every other module: points, poses, axis-aligned
//! rectangles, the shelf workspace, rotations, wall/line distances, and the
//! incidence angle of the tangent corridor for near-wall targets.
//!
//! Conventions: the shelf is axis-aligned with `x` running into the depth of
//! the shelf and `y` across its width. The south wall `S` is `y = 0`, the
//! north wall `N` is `y = width`, and the arm enters through the open edge at
//! `x = 0`. All lengths are meters, all angles radians.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in the shelf plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(&self, other: &Point2) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Gripper pose: position plus heading in (−π, π].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose2 {
    pub position: Point2,
    pub heading: f64,
}

impl Pose2 {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Self {
            position: Point2::new(x, y),
            heading,
        }
    }
}

/// Axis-aligned rectangle with `lo` the min corner and `hi` the max corner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub lo: Point2,
    pub hi: Point2,
}

impl Rect {
    pub fn new(lo: Point2, hi: Point2) -> Self {
        debug_assert!(lo.x <= hi.x && lo.y <= hi.y);
        Self { lo, hi }
    }

    pub fn centroid(&self) -> Point2 {
        Point2::new(0.5 * (self.lo.x + self.hi.x), 0.5 * (self.lo.y + self.hi.y))
    }

    pub fn width(&self) -> f64 {
        self.hi.x - self.lo.x
    }

    pub fn height(&self) -> f64 {
        self.hi.y - self.lo.y
    }

    /// Euclidean distance from `p` to the rectangle (zero inside).
    pub fn dist_to_point(&self, p: &Point2) -> f64 {
        let dx = (self.lo.x - p.x).max(0.0).max(p.x - self.hi.x);
        let dy = (self.lo.y - p.y).max(0.0).max(p.y - self.hi.y);
        (dx * dx + dy * dy).sqrt()
    }
}

/// Shelf workspace parameters.
///
/// `width` is the wall-to-wall extent `w_s`; `arm_width` is the width `w` of
/// the cylindrical arm approximation, which is also the corridor half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Workspace {
    pub depth: f64,
    pub width: f64,
    pub arm_width: f64,
    pub gripper_width: f64,
    pub object_radius: f64,
}

impl Workspace {
    pub fn new(
        depth: f64,
        width: f64,
        arm_width: f64,
        gripper_width: f64,
        object_radius: f64,
    ) -> Result<Self> {
        let ws = Self {
            depth,
            width,
            arm_width,
            gripper_width,
            object_radius,
        };
        ws.validate()?;
        Ok(ws)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("depth", self.depth),
            ("width", self.width),
            ("arm_width", self.arm_width),
            ("gripper_width", self.gripper_width),
            ("object_radius", self.object_radius),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidWorkspace(format!(
                    "{name} must be finite and strictly positive, got {v}"
                )));
            }
        }
        if self.arm_width >= self.width {
            return Err(Error::InvalidWorkspace(format!(
                "arm_width {} must be smaller than width {}",
                self.arm_width, self.width
            )));
        }
        // A target within arm_width of both walls would leave the incidence
        // angle undefined; such shelves are rejected up front.
        if 2.0 * self.arm_width >= self.width {
            return Err(Error::InvalidWorkspace(format!(
                "width {} must exceed twice the arm_width {}",
                self.width, self.arm_width
            )));
        }
        if 2.0 * self.object_radius >= self.width {
            return Err(Error::InvalidWorkspace(format!(
                "width {} must exceed an object diameter {}",
                self.width,
                2.0 * self.object_radius
            )));
        }
        Ok(())
    }

    pub fn centroid(&self) -> Point2 {
        Point2::new(0.5 * self.depth, 0.5 * self.width)
    }
}

/// Counterclockwise rotation of `p` about the origin.
pub fn rotate(p: &Point2, angle: f64) -> Point2 {
    let (s, c) = angle.sin_cos();
    Point2::new(p.x * c - p.y * s, p.x * s + p.y * c)
}

/// Distance from `p` to the nearer of the two shelf walls.
pub fn dist_point_to_walls(p: &Point2, ws: &Workspace) -> Result<f64> {
    if !(0.0..=ws.width).contains(&p.y) {
        return Err(Error::OutsideWidthBand {
            y: p.y,
            width: ws.width,
        });
    }
    Ok(p.y.min(ws.width - p.y))
}

/// Distance from `p` to the line through the origin with inclination `theta`.
pub fn dist_point_to_line_through_origin(p: &Point2, theta: f64) -> f64 {
    (p.x * theta.sin() - p.y * theta.cos()).abs()
}

/// Incidence angle of the tangent corridor for a target within `arm_width`
/// of a wall.
///
/// For a target near the north wall the result is the acute angle `phi > 0`
/// of the line through the origin that passes below the target at distance
/// exactly `arm_width`. Targets near the south wall are handled by reflecting
/// across the mid-line, so the sign of the result encodes the wall: positive
/// near N, negative near S. Rotating every position by `-phi` turns the
/// corridor into an axis-aligned band.
pub fn incidence_angle(target: &Point2, ws: &Workspace) -> Result<f64> {
    let d = dist_point_to_walls(target, ws)?;
    if d > ws.arm_width {
        return Err(Error::TargetNotNearWall);
    }
    let near_north = target.y >= 0.5 * ws.width;
    let t = if near_north {
        *target
    } else {
        Point2::new(target.x, ws.width - target.y)
    };

    // Signed distance from the canonical (near-N) target to the line at
    // inclination theta, positive while the target is above the line. The
    // root of f on (0, pi/2) is the tangency angle; f is strictly
    // decreasing there for targets inside the shelf.
    let f = |theta: f64| t.y * theta.cos() - t.x * theta.sin() - ws.arm_width;

    let (mut lo, mut hi) = (0.0_f64, std::f64::consts::FRAC_PI_2);
    if f(lo) <= 0.0 || f(hi) >= 0.0 {
        return Err(Error::NoTangent {
            x: target.x,
            y: target.y,
        });
    }
    for _ in 0..200 {
        if hi - lo <= 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let phi = 0.5 * (lo + hi);
    Ok(if near_north { phi } else { -phi })
}

/// Axis-aligned bounding rectangle of `points`, expanded by `inflate` on all
/// four sides.
pub fn aabb(points: &[Point2], inflate: f64) -> Result<Rect> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if !inflate.is_finite() || inflate < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "inflate must be finite and nonnegative, got {inflate}"
        )));
    }
    let mut lo = points[0];
    let mut hi = points[0];
    for p in &points[1..] {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    Ok(Rect::new(
        Point2::new(lo.x - inflate, lo.y - inflate),
        Point2::new(hi.x + inflate, hi.y + inflate),
    ))
}
