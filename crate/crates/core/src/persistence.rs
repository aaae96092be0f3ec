//! Zero-dimensional persistence of a planar point set.
//!
//! Connected components are tracked through a Vietoris–Rips style filtration
//! on pairwise distances: two points belong to one component at radius `r`
//! iff they are linked by a chain of pairwise distances `<= r`. The death
//! radii of the n−1 finite classes are exactly the edge weights of the
//! Euclidean minimum spanning tree (single-linkage merge distances), plus one
//! essential class that never dies.

use crate::error::{Error, Result};
use crate::geom::{Point2, Pose2, Workspace};

/// Disjoint-set forest with path compression and union by rank.
#[derive(Clone, Debug)]
struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut node: usize) -> usize {
        let mut root = node;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[node] != node {
            let next = self.parent[node];
            self.parent[node] = root;
            node = next;
        }
        root
    }

    /// Returns false if the two nodes were already in one set.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let mut a = self.find(a);
        let mut b = self.find(b);
        if a == b {
            return false;
        }
        if self.rank[a] < self.rank[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        if self.rank[a] == self.rank[b] {
            self.rank[a] = self.rank[a].saturating_add(1);
        }
        true
    }
}

/// Sorted finite death radii (births are all zero) plus one essential class.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceDiagram {
    deaths: Vec<f64>,
    essential_count: usize,
}

impl PersistenceDiagram {
    /// Builds a diagram from already-sorted deaths. Intended for tests and
    /// for replaying exported diagrams; `zero_dim_persistence` is the normal
    /// construction path.
    pub fn from_deaths(deaths: Vec<f64>) -> Result<Self> {
        let well_formed = deaths.windows(2).all(|w| w[0] <= w[1])
            && deaths.iter().all(|d| d.is_finite() && *d >= 0.0);
        if !well_formed {
            return Err(Error::InvalidParameter(
                "deaths must be finite, nonnegative, and nondecreasing".into(),
            ));
        }
        Ok(Self {
            deaths,
            essential_count: 1,
        })
    }

    pub fn deaths(&self) -> &[f64] {
        &self.deaths
    }

    pub fn essential_count(&self) -> usize {
        self.essential_count
    }

    pub fn last_death(&self) -> Option<f64> {
        self.deaths.last().copied()
    }

    /// CSV export: one `birth,death` row per class, essential class last with
    /// death `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("birth,death\n");
        for d in &self.deaths {
            out.push_str(&format!("0,{d}\n"));
        }
        for _ in 0..self.essential_count {
            out.push_str("0,inf\n");
        }
        out
    }
}

/// The connected components of a point set at a fixed radius.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentPartition {
    pub radius: f64,
    /// Disjoint index sets covering all points; each set is sorted and the
    /// sets are ordered by smallest member.
    pub components: Vec<Vec<usize>>,
}

/// Persistent radii `R_{nu,h}`: death radii at least `h` that are followed by
/// a component-count plateau of length `nu`.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistentRadii {
    pub nu: f64,
    pub h: f64,
    pub radii: Vec<f64>,
}

impl PersistentRadii {
    pub fn min(&self) -> f64 {
        self.radii[0]
    }
}

/// Zero-dimensional persistence diagram of `points`.
///
/// Kruskal over all pairwise edges sorted by distance; every union records a
/// death. Pairs closer than 1e-12 are rejected as degenerate.
pub fn zero_dim_persistence(points: &[Point2]) -> Result<PersistenceDiagram> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let n = points.len();
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = points[i].dist(&points[j]);
            if d <= 1e-12 {
                return Err(Error::DuplicatePoints { a: i, b: j });
            }
            edges.push((d, i, j));
        }
    }
    edges.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));

    let mut uf = UnionFind::new(n);
    let mut deaths = Vec::with_capacity(n - 1);
    for (d, i, j) in edges {
        if uf.union(i, j) {
            deaths.push(d);
            if deaths.len() == n - 1 {
                break;
            }
        }
    }
    Ok(PersistenceDiagram {
        deaths,
        essential_count: 1,
    })
}

/// Partition of `points` into connected components at radius `r`.
pub fn components_at(points: &[Point2], r: f64) -> ComponentPartition {
    let n = points.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if points[i].dist(&points[j]) <= r {
                uf.union(i, j);
            }
        }
    }
    let mut by_root: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = uf.find(i);
        if root_slot[root] == usize::MAX {
            root_slot[root] = by_root.len();
            by_root.push(Vec::new());
        }
        by_root[root_slot[root]].push(i);
    }
    // Scanning indices in order already yields sorted members and components
    // ordered by smallest member.
    ComponentPartition {
        radius: r,
        components: by_root,
    }
}

/// Filters the diagram down to persistent radii.
///
/// A death `d >= h` is persistent when no other death lies in `(d, d + nu]`;
/// the last death always qualifies. If the filter leaves nothing, the single
/// radius `max(h, last death)` is returned: at that radius the whole set is
/// one component and is pushed as a unit.
pub fn persistent_radii(diagram: &PersistenceDiagram, nu: f64, h: f64) -> Result<PersistentRadii> {
    if !nu.is_finite() || nu <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "nu must be finite and positive, got {nu}"
        )));
    }
    if !h.is_finite() || h < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "h must be finite and nonnegative, got {h}"
        )));
    }
    let deaths = diagram.deaths();
    let mut radii = Vec::new();
    for (k, &d) in deaths.iter().enumerate() {
        if d < h {
            continue;
        }
        let plateau = deaths[k + 1..].iter().all(|&next| next > d + nu);
        if plateau {
            radii.push(d);
        }
    }
    if radii.is_empty() {
        radii.push(match diagram.last_death() {
            Some(last) => h.max(last),
            None => h,
        });
    }
    Ok(PersistentRadii { nu, h, radii })
}

/// Minimum grouping radius the gripper can operate at: 110% of the gripper
/// width plus one object diameter.
pub fn gripper_clearance_h(ws: &Workspace) -> f64 {
    1.1 * ws.gripper_width + 2.0 * ws.object_radius
}

/// The component whose nearest member is closest to the gripper position;
/// exact distance ties go to the component with the smallest member index.
pub fn closest_component<'a>(
    partition: &'a ComponentPartition,
    points: &[Point2],
    gripper: &Pose2,
) -> &'a [usize] {
    assert!(
        !partition.components.is_empty(),
        "closest_component on an empty partition"
    );
    let mut best: Option<(&[usize], f64)> = None;
    for comp in &partition.components {
        let d = comp
            .iter()
            .map(|&i| points[i].dist(&gripper.position))
            .fold(f64::INFINITY, f64::min);
        // Components are ordered by smallest member, so a strict comparison
        // keeps the lower-indexed component on ties.
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((comp, d));
        }
    }
    best.expect("nonempty partition").0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Brute-force Kruskal: connectivity re-checked by BFS over accepted
    /// edges, no union-find. Independent oracle for the diagram deaths.
    fn oracle_mst_deaths(points: &[Point2]) -> Vec<f64> {
        let n = points.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((points[i].dist(&points[j]), i, j));
            }
        }
        edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut accepted: Vec<(usize, usize)> = Vec::new();
        let mut deaths = Vec::new();
        for (d, i, j) in edges {
            let mut reach = vec![false; n];
            reach[i] = true;
            let mut queue = vec![i];
            while let Some(v) = queue.pop() {
                for &(a, b) in &accepted {
                    let u = if a == v {
                        b
                    } else if b == v {
                        a
                    } else {
                        continue;
                    };
                    if !reach[u] {
                        reach[u] = true;
                        queue.push(u);
                    }
                }
            }
            if !reach[j] {
                accepted.push((i, j));
                deaths.push(d);
            }
        }
        deaths
    }

    fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point2> {
        let mut pts: Vec<Point2> = Vec::new();
        while pts.len() < n {
            let p = Point2::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            if pts.iter().all(|q| q.dist(&p) > 1e-6) {
                pts.push(p);
            }
        }
        pts
    }

    #[test]
    fn collinear_three_points() {
        let pts = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(3.0, 0.0),
        ];
        let d = zero_dim_persistence(&pts).unwrap();
        assert_eq!(d.deaths(), &[1.0, 2.0]);
        assert_eq!(d.essential_count(), 1);
    }

    #[test]
    fn single_point_diagram() {
        let d = zero_dim_persistence(&[Point2::new(0.1, 0.2)]).unwrap();
        assert!(d.deaths().is_empty());
        assert_eq!(d.essential_count(), 1);
    }

    #[test]
    fn two_points_die_at_their_distance() {
        let pts = [Point2::new(0.0, 0.0), Point2::new(0.3, 0.4)];
        let d = zero_dim_persistence(&pts).unwrap();
        assert_eq!(d.deaths(), &[0.5]);
    }

    #[test]
    fn duplicates_rejected() {
        let pts = [Point2::new(0.1, 0.1), Point2::new(0.1, 0.1)];
        assert!(matches!(
            zero_dim_persistence(&pts),
            Err(Error::DuplicatePoints { a: 0, b: 1 })
        ));
    }

    #[test]
    fn deaths_match_oracle_on_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(3..=12);
            let pts = random_points(&mut rng, n);
            let got = zero_dim_persistence(&pts).unwrap();
            assert_eq!(got.deaths(), oracle_mst_deaths(&pts).as_slice());
        }
    }

    #[test]
    fn components_at_radii() {
        let pts = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(3.0, 0.0),
        ];
        let p0 = components_at(&pts, 0.0);
        assert_eq!(p0.components, vec![vec![0], vec![1], vec![2]]);
        let p15 = components_at(&pts, 1.5);
        assert_eq!(p15.components, vec![vec![0, 1], vec![2]]);
        let p2 = components_at(&pts, 2.0);
        assert_eq!(p2.components, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn component_count_matches_diagram() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.gen_range(2..=10);
            let pts = random_points(&mut rng, n);
            let diagram = zero_dim_persistence(&pts).unwrap();
            let r = rng.gen_range(0.0..1.5);
            let count = components_at(&pts, r).components.len();
            let expected = 1 + diagram.deaths().iter().filter(|&&d| d > r).count();
            assert_eq!(count, expected);
        }
    }

    #[test]
    fn persistent_radii_filtering() {
        let diagram = PersistenceDiagram::from_deaths(vec![0.064, 0.086, 0.121, 0.14]).unwrap();
        let filtered = persistent_radii(&diagram, 0.015, 0.08).unwrap();
        assert_eq!(filtered.radii, vec![0.086, 0.121, 0.14]);
        let all = persistent_radii(&diagram, 0.015, 0.0).unwrap();
        assert_eq!(all.radii, vec![0.064, 0.086, 0.121, 0.14]);
    }

    #[test]
    fn persistent_radii_fallback() {
        let diagram = PersistenceDiagram::from_deaths(vec![0.05]).unwrap();
        let r = persistent_radii(&diagram, 0.01, 0.08).unwrap();
        assert_eq!(r.radii, vec![0.08]);

        // No deaths at all: a single point still yields a usable radius.
        let empty = PersistenceDiagram::from_deaths(vec![]).unwrap();
        let r = persistent_radii(&empty, 0.01, 0.08).unwrap();
        assert_eq!(r.radii, vec![0.08]);
    }

    #[test]
    fn clearance_h() {
        let ws = Workspace::new(0.6, 0.6, 0.12, 0.06, 0.01).unwrap();
        assert!((gripper_clearance_h(&ws) - 0.086).abs() < 1e-15);

        // Degenerate gripper: the formula alone, bypassing validation.
        let ws = Workspace {
            gripper_width: 0.0,
            object_radius: 0.04,
            ..ws
        };
        assert!((gripper_clearance_h(&ws) - 0.08).abs() < 1e-15);

        // Paper-scale setting: gripper width chosen so h lands on 0.08.
        let ws = Workspace::new(0.6, 0.6, 0.12, 0.02 / 1.1, 0.03).unwrap();
        assert!((gripper_clearance_h(&ws) - 0.08).abs() < 1e-15);
    }

    #[test]
    fn closest_component_selection() {
        let pts = [Point2::new(1.0, 0.0), Point2::new(2.0, 0.0)];
        let gripper = Pose2::new(0.0, 0.0, 0.0);
        let partition = components_at(&pts, 0.5);
        assert_eq!(closest_component(&partition, &pts, &gripper), &[0]);

        let single = components_at(&pts, 2.0);
        assert_eq!(closest_component(&single, &pts, &gripper), &[0, 1]);

        // Symmetric instance: equidistant components, lower index wins.
        let pts = [Point2::new(1.0, 1.0), Point2::new(1.0, -1.0)];
        let partition = components_at(&pts, 0.5);
        assert_eq!(closest_component(&partition, &pts, &gripper), &[0]);
    }

    #[test]
    fn csv_export_shape() {
        let pts = [
            Point2::new(0.0, 0.0),
            Point2::new(0.1, 0.0),
            Point2::new(0.5, 0.0),
        ];
        let csv = zero_dim_persistence(&pts).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "birth,death");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[3], "0,inf");
        assert!(lines[1].starts_with("0,"));
    }

    proptest! {
        #[test]
        fn component_count_is_monotone(
            seed in 0u64..500,
            n in 2usize..10,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts = random_points(&mut rng, n);
            let diagram = zero_dim_persistence(&pts).unwrap();
            let top = diagram.last_death().unwrap() * 1.1;
            let mut prev = usize::MAX;
            for k in 0..=40 {
                let r = top * k as f64 / 40.0;
                let count = components_at(&pts, r).components.len();
                prop_assert!(count <= prev);
                prev = count;
            }
            prop_assert_eq!(components_at(&pts, 0.0).components.len(), n);
            prop_assert_eq!(components_at(&pts, top).components.len(), 1);
        }

        #[test]
        fn persistent_radii_are_separated(
            deaths in proptest::collection::vec(0.01..0.5f64, 1..8),
            nu in 0.005..0.05f64,
            h in 0.0..0.2f64,
        ) {
            let mut sorted = deaths;
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let diagram = PersistenceDiagram::from_deaths(sorted.clone()).unwrap();
            let r = persistent_radii(&diagram, nu, h).unwrap();
            prop_assert!(!r.radii.is_empty());
            prop_assert!(r.radii.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(r.radii.iter().all(|&x| x >= h));
            // Every returned death is separated from the next death by more
            // than nu (vacuous for the fallback radius, which need not be a
            // death).
            for &x in &r.radii {
                if sorted.contains(&x) {
                    prop_assert!(sorted.iter().all(|&d| !(d > x && d <= x + nu)));
                }
            }
        }
    }
}
