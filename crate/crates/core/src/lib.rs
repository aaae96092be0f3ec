//! Planar planner and simulator for retrieving a target object from a
//! cluttered shelf with non-prehensile pushes.
//!
//! Blocking objects are grouped into connected components that persist
//! across a range of grouping radii (zero-dimensional persistence of the
//! obstacle centers); whole groups are then swept out of the corridor
//! between the gripper and the target. The crate provides:
//!
//! - [`geom`]: planar primitives and the corridor incidence angle,
//! - [`persistence`]: persistence diagrams, components, persistent radii,
//! - [`mod@path_region`]: the configuration and the corridor it induces,
//! - [`push_sim`]: a deterministic quasi-static sweep simulator,
//! - [`planners`]: greedy, one-by-one, and tree-search planners,
//! - [`scenario`]: scene files and seeded scene generators.

pub mod error;
pub mod geom;
pub mod path_region;
pub mod persistence;
pub mod planners;
pub mod push_sim;
pub mod scenario;

pub use error::{Error, Result};
pub use geom::{
    aabb, dist_point_to_line_through_origin, dist_point_to_walls, incidence_angle, rotate,
    Point2, Pose2, Rect, Workspace,
};
pub use path_region::{is_cleared, path_region, Configuration, PathRegion};
pub use persistence::{
    closest_component, components_at, gripper_clearance_h, persistent_radii,
    zero_dim_persistence, ComponentPartition, PersistenceDiagram, PersistentRadii,
};
pub use planners::{
    choose_direction, crccc, ooa, phia, phis, phis_with_tree, push_action, NodeLabel,
    PlanOutcome, PlanStep, PlanTree, PlannerParams, PushPlan, TreeNode,
};
pub use push_sim::{
    approach_distance, execute_sweep, plan_sweep, SweepAction, SweepDirection, SweepOutcome,
    SweepParams,
};
pub use scenario::{
    default_workspace, generate_clustered, generate_random_deep, generate_random_deep_in,
    generate_simple, generate_simple_in, load_scene, save_scene, Scene, SceneFamily,
};
