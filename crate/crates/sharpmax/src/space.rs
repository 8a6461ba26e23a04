//! Finite metric measure spaces: distance matrices, atomic measures, balls,
//! canonical radius enumeration, and geometric statistics (doubling
//! constant, homogeneous dimension, quasi-geodesic defect).

use crate::graph::{self, GraphData};
use crate::scalar::{lit, metric_tol, Scalar};
use crate::set::PointSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("edge length must be positive: edge ({0}, {1})")]
    NonPositiveLength(usize, usize),
    #[error("measure weight must be positive: point {0}")]
    NonPositiveWeight(usize),
    #[error("generator size too small: {0}")]
    SizeTooSmall(String),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
}

/// Built-in space generators. Every generator assigns unit measure to each
/// point and derives distances as shortest-path lengths over unit-`spacing`
/// edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    /// `w × h` four-neighbour lattice.
    Grid { width: usize, height: usize },
    /// Path on `n` points.
    Path { n: usize },
    /// Cycle on `n` points.
    Cycle { n: usize },
    /// Complete binary tree with `depth` levels below the root
    /// (2^(depth+1) − 1 points).
    BinaryTree { depth: usize },
}

/// A finite metric measure space: `n` points, a dense symmetric distance
/// matrix with positive off-diagonal entries, and strictly positive atomic
/// weights. Spaces built from graphs retain edge provenance for
/// upper-gradient computations.
#[derive(Clone, Debug)]
pub struct MetricMeasureSpace<T> {
    n: usize,
    dist: Vec<T>,
    measure: Vec<T>,
    total_measure: T,
    mesh: T,
    /// Per-center point indices sorted by distance (ties by index).
    order: Vec<u32>,
    graph: Option<GraphData<T>>,
}

/// Open metric ball `B(x, r) = { y : d(y, x) < r }` with its member set and
/// the set diameter (max pairwise distance among members).
#[derive(Clone, Debug)]
pub struct Ball<T> {
    pub center: usize,
    pub radius: T,
    pub members: PointSet,
    pub set_diam: T,
}

impl<T: Scalar> Ball<T> {
    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(i)
    }

    pub fn point_count(&self) -> usize {
        self.members.count()
    }
}

/// Global geometric statistics of a space.
#[derive(Clone, Copy, Debug)]
pub struct SpaceStats<T> {
    /// Doubling constant: exact maximum of μ(B(x,2r))/μ(B(x,r)) over all
    /// centers and radii.
    pub c_mu: T,
    /// Homogeneous dimension `log2(c_mu)`.
    pub s: T,
    /// Quasi-geodesic defect: worst approximate-midpoint error over the
    /// fractions t ∈ {1/4, 1/2, 3/4}.
    pub geo_defect: T,
    /// Max pairwise distance.
    pub diameter: T,
}

impl<T: Scalar> MetricMeasureSpace<T> {
    /// Builds a space from a dense distance matrix. Validates symmetry,
    /// zero diagonal, positive off-diagonal entries, the triangle
    /// inequality (to a 1e-9 slack), and positive weights.
    pub fn from_matrix(dist: Vec<Vec<T>>, measure: Vec<T>) -> Result<Self, SpaceError> {
        let n = dist.len();
        if n < 2 {
            return Err(SpaceError::InvalidMetric(
                "a space needs at least two points".into(),
            ));
        }
        if measure.len() != n {
            return Err(SpaceError::InvalidMetric(format!(
                "measure has {} entries for {} points",
                measure.len(),
                n
            )));
        }
        let tol = metric_tol::<T>();
        let mut flat = vec![T::zero(); n * n];
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(SpaceError::InvalidMetric(format!(
                    "row {i} has {} entries for {n} points",
                    row.len()
                )));
            }
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() {
                    return Err(SpaceError::InvalidMetric(format!(
                        "distance ({i}, {j}) is not finite"
                    )));
                }
                if i == j && d != T::zero() {
                    return Err(SpaceError::InvalidMetric(format!(
                        "diagonal entry ({i}, {i}) is nonzero"
                    )));
                }
                if i != j && d <= T::zero() {
                    return Err(SpaceError::InvalidMetric(format!(
                        "off-diagonal distance ({i}, {j}) is not positive"
                    )));
                }
                flat[i * n + j] = d;
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (flat[i * n + j] - flat[j * n + i]).abs() > tol {
                    return Err(SpaceError::InvalidMetric(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                let dik = flat[i * n + k];
                for j in 0..n {
                    if flat[i * n + j] > dik + flat[k * n + j] + tol {
                        return Err(SpaceError::InvalidMetric(format!(
                            "triangle inequality fails for ({i}, {j}) via {k}"
                        )));
                    }
                }
            }
        }
        for (i, &w) in measure.iter().enumerate() {
            if !(w > T::zero()) || !w.is_finite() {
                return Err(SpaceError::NonPositiveWeight(i));
            }
        }
        // Mesh for matrix-built spaces: smallest positive pairwise distance.
        let mut mesh = T::infinity();
        for i in 0..n {
            for j in (i + 1)..n {
                if flat[i * n + j] < mesh {
                    mesh = flat[i * n + j];
                }
            }
        }
        Ok(Self::assemble(n, flat, measure, mesh, None))
    }

    /// Builds a space from an undirected weighted graph; distances are
    /// shortest-path lengths and the mesh is the largest edge length.
    pub fn from_graph(
        n: usize,
        edges: &[(usize, usize, T)],
        measure: Vec<T>,
    ) -> Result<Self, SpaceError> {
        if n < 2 {
            return Err(SpaceError::SizeTooSmall(format!("{n} points")));
        }
        if measure.len() != n {
            return Err(SpaceError::InvalidMetric(format!(
                "measure has {} entries for {} points",
                measure.len(),
                n
            )));
        }
        for (i, &w) in measure.iter().enumerate() {
            if !(w > T::zero()) || !w.is_finite() {
                return Err(SpaceError::NonPositiveWeight(i));
            }
        }
        let mut mesh = T::zero();
        for &(a, b, len) in edges {
            if a >= n || b >= n || a == b {
                return Err(SpaceError::InvalidMetric(format!(
                    "edge ({a}, {b}) is not a valid pair"
                )));
            }
            if !(len > T::zero()) || !len.is_finite() {
                return Err(SpaceError::NonPositiveLength(a, b));
            }
            if len > mesh {
                mesh = len;
            }
        }
        let graph = GraphData::new(n, edges.to_vec());
        let mut flat = vec![T::zero(); n * n];
        for src in 0..n {
            let d = graph::dijkstra(&graph, src);
            if d.iter().any(|x| !x.is_finite()) {
                return Err(SpaceError::DisconnectedGraph);
            }
            flat[src * n..(src + 1) * n].copy_from_slice(&d);
        }
        Ok(Self::assemble(n, flat, measure, mesh, Some(graph)))
    }

    /// Generates a standard test space with unit weights.
    pub fn generate(kind: SpaceKind, spacing: T) -> Result<Self, SpaceError> {
        if !(spacing > T::zero()) {
            return Err(SpaceError::NonPositiveLength(0, 0));
        }
        let (n, edges): (usize, Vec<(usize, usize, T)>) = match kind {
            SpaceKind::Grid { width, height } => {
                if width < 2 || height < 2 {
                    return Err(SpaceError::SizeTooSmall(format!(
                        "grid({width}, {height})"
                    )));
                }
                let id = |x: usize, y: usize| y * width + x;
                let mut edges = Vec::new();
                for y in 0..height {
                    for x in 0..width {
                        if x + 1 < width {
                            edges.push((id(x, y), id(x + 1, y), spacing));
                        }
                        if y + 1 < height {
                            edges.push((id(x, y), id(x, y + 1), spacing));
                        }
                    }
                }
                (width * height, edges)
            }
            SpaceKind::Path { n } => {
                if n < 2 {
                    return Err(SpaceError::SizeTooSmall(format!("path({n})")));
                }
                ((n), (0..n - 1).map(|i| (i, i + 1, spacing)).collect())
            }
            SpaceKind::Cycle { n } => {
                if n < 2 {
                    return Err(SpaceError::SizeTooSmall(format!("cycle({n})")));
                }
                let mut edges: Vec<(usize, usize, T)> =
                    (0..n - 1).map(|i| (i, i + 1, spacing)).collect();
                if n > 2 {
                    edges.push((n - 1, 0, spacing));
                }
                (n, edges)
            }
            SpaceKind::BinaryTree { depth } => {
                if depth < 1 {
                    return Err(SpaceError::SizeTooSmall(format!("binary_tree({depth})")));
                }
                let count = (1usize << (depth + 1)) - 1;
                let edges = (1..count).map(|i| ((i - 1) / 2, i, spacing)).collect();
                (count, edges)
            }
        };
        let measure = vec![T::one(); n];
        Self::from_graph(n, &edges, measure)
    }

    fn assemble(
        n: usize,
        flat: Vec<T>,
        measure: Vec<T>,
        mesh: T,
        graph: Option<GraphData<T>>,
    ) -> Self {
        let total_measure = measure.iter().copied().sum();
        let mut order = vec![0u32; n * n];
        for i in 0..n {
            let row = &flat[i * n..(i + 1) * n];
            let idx = &mut order[i * n..(i + 1) * n];
            for (k, v) in idx.iter_mut().enumerate() {
                *v = k as u32;
            }
            idx.sort_by(|&a, &b| {
                row[a as usize]
                    .partial_cmp(&row[b as usize])
                    .expect("finite distances")
                    .then(a.cmp(&b))
            });
        }
        MetricMeasureSpace {
            n,
            dist: flat,
            measure,
            total_measure,
            mesh,
            order,
            graph,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dist(&self, i: usize, j: usize) -> T {
        self.dist[i * self.n + j]
    }

    pub fn measure(&self, i: usize) -> T {
        self.measure[i]
    }

    pub fn measures(&self) -> &[T] {
        &self.measure
    }

    pub fn total_measure(&self) -> T {
        self.total_measure
    }

    /// Resolution scale: largest edge length for graph-built spaces,
    /// smallest positive distance for matrix-built ones.
    pub fn mesh(&self) -> T {
        self.mesh
    }

    /// Edge provenance, when the space was built from a graph.
    pub fn graph(&self) -> Option<&GraphData<T>> {
        self.graph.as_ref()
    }

    pub fn diameter(&self) -> T {
        let mut d = T::zero();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.dist(i, j) > d {
                    d = self.dist(i, j);
                }
            }
        }
        d
    }

    /// Total measure of a point set.
    pub fn measure_of(&self, set: &PointSet) -> T {
        set.iter().map(|i| self.measure[i]).sum()
    }

    /// Max pairwise distance within a point set (zero for singletons).
    pub fn set_diam(&self, set: &PointSet) -> T {
        let pts: Vec<usize> = set.iter().collect();
        let mut d = T::zero();
        for (k, &i) in pts.iter().enumerate() {
            for &j in &pts[k + 1..] {
                if self.dist(i, j) > d {
                    d = self.dist(i, j);
                }
            }
        }
        d
    }

    /// Distance from a point to a set (infinity for the empty set).
    pub fn dist_to_set(&self, x: usize, set: &PointSet) -> T {
        let mut best = T::infinity();
        for y in set.iter() {
            if self.dist(x, y) < best {
                best = self.dist(x, y);
            }
        }
        best
    }

    /// Point minimizing the max distance to all others (lowest index on
    /// ties); a deterministic "middle" used to seat default base balls.
    pub fn metric_center(&self) -> usize {
        let mut best = 0;
        let mut best_ecc = T::infinity();
        for i in 0..self.n {
            let ecc = (0..self.n)
                .map(|j| self.dist(i, j))
                .fold(T::zero(), T::max);
            if ecc < best_ecc {
                best_ecc = ecc;
                best = i;
            }
        }
        best
    }

    fn sorted_row(&self, center: usize) -> &[u32] {
        &self.order[center * self.n..(center + 1) * self.n]
    }

    /// Open ball `B(center, radius)`; the radius must be positive.
    pub fn ball(&self, center: usize, radius: T) -> Ball<T> {
        assert!(center < self.n, "ball center out of range");
        assert!(radius > T::zero(), "ball radius must be positive");
        let mut members = PointSet::empty(self.n);
        for &j in self.sorted_row(center) {
            if self.dist(center, j as usize) < radius {
                members.insert(j as usize);
            } else {
                break;
            }
        }
        let set_diam = self.set_diam(&members);
        Ball {
            center,
            radius,
            members,
            set_diam,
        }
    }

    /// Sorted distinct distances from a center (always starting at zero).
    fn distinct_distances(&self, center: usize) -> Vec<T> {
        let mut out = Vec::new();
        for &j in self.sorted_row(center) {
            let d = self.dist(center, j as usize);
            if out.last().map_or(true, |&last| d > last) {
                out.push(d);
            }
        }
        out
    }

    /// Canonical radii at a center: midpoints of consecutive distinct
    /// distances plus one radius past the largest. These enumerate every
    /// distinct ball at the center exactly once.
    pub fn canonical_radii(&self, center: usize) -> Vec<T> {
        let ds = self.distinct_distances(center);
        let mut radii: Vec<T> = ds
            .windows(2)
            .map(|w| (w[0] + w[1]) / lit::<T>(2.0))
            .collect();
        radii.push(*ds.last().expect("n >= 2") + self.mesh);
        radii
    }

    /// All distinct balls at a center, one per canonical radius, with set
    /// diameters computed incrementally along the sweep.
    pub fn canonical_balls(&self, center: usize) -> Vec<Ball<T>> {
        let radii = self.canonical_radii(center);
        let row = self.sorted_row(center);
        let mut balls = Vec::with_capacity(radii.len());
        let mut members = PointSet::empty(self.n);
        let mut member_list: Vec<usize> = Vec::new();
        let mut diam = T::zero();
        let mut k = 0usize;
        for r in radii {
            while k < self.n {
                let j = row[k] as usize;
                if self.dist(center, j) < r {
                    for &old in &member_list {
                        if self.dist(old, j) > diam {
                            diam = self.dist(old, j);
                        }
                    }
                    members.insert(j);
                    member_list.push(j);
                    k += 1;
                } else {
                    break;
                }
            }
            balls.push(Ball {
                center,
                radius: r,
                members: members.clone(),
                set_diam: diam,
            });
        }
        balls
    }

    /// Canonical balls over every center.
    pub fn all_canonical_balls(&self) -> Vec<Ball<T>> {
        (0..self.n).flat_map(|c| self.canonical_balls(c)).collect()
    }

    /// μ(B(center, r)) via the sorted row; counts points with d < r.
    fn ball_measure(&self, center: usize, r: T) -> T {
        let mut total = T::zero();
        for &j in self.sorted_row(center) {
            if self.dist(center, j as usize) < r {
                total = total + self.measure[j as usize];
            } else {
                break;
            }
        }
        total
    }

    /// Exact doubling constant, homogeneous dimension, quasi-geodesic
    /// defect, and diameter.
    ///
    /// The doubling ratio r ↦ μ(B(x,2r))/μ(B(x,r)) is piecewise constant
    /// with breakpoints where either ball gains a point, i.e. at the
    /// distances from x and at half those distances; sampling the midpoint
    /// of every breakpoint interval realizes the exact supremum over all
    /// radii.
    pub fn stats(&self) -> SpaceStats<T> {
        let two = lit::<T>(2.0);
        let mut c_mu = T::one();
        for x in 0..self.n {
            let ds = self.distinct_distances(x);
            let mut breaks: Vec<T> = Vec::with_capacity(ds.len() * 2);
            for &d in &ds {
                if d > T::zero() {
                    breaks.push(d);
                    breaks.push(d / two);
                }
            }
            breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
            breaks.dedup_by(|a, b| a == b);
            let mut prev = T::zero();
            for &b in &breaks {
                let r = (prev + b) / two;
                prev = b;
                if r <= T::zero() {
                    continue;
                }
                let ratio = self.ball_measure(x, two * r) / self.ball_measure(x, r);
                if ratio > c_mu {
                    c_mu = ratio;
                }
            }
        }
        let geo_defect = self.geo_defect();
        SpaceStats {
            c_mu,
            s: c_mu.log2(),
            geo_defect,
            diameter: self.diameter(),
        }
    }

    /// Worst-case approximate-midpoint error: for every pair (x, y) and
    /// t ∈ {1/4, 1/2, 3/4}, the best point z approximating the position
    /// t·d(x,y) along a geodesic, measured in the max of the two leg
    /// errors.
    fn geo_defect(&self) -> T {
        let fractions = [lit::<T>(0.25), lit::<T>(0.5), lit::<T>(0.75)];
        let mut worst = T::zero();
        for x in 0..self.n {
            for y in (x + 1)..self.n {
                let d = self.dist(x, y);
                for &t in &fractions {
                    let a = t * d;
                    let b = d - a;
                    let mut best = T::infinity();
                    for z in 0..self.n {
                        let err = (self.dist(x, z) - a)
                            .abs()
                            .max((self.dist(z, y) - b).abs());
                        if err < best {
                            best = err;
                        }
                    }
                    if best > worst {
                        worst = best;
                    }
                }
            }
        }
        worst
    }

    /// Whether chains of balls can march along near-geodesics: the defect
    /// must not exceed the mesh.
    pub fn is_quasi_geodesic(&self) -> bool {
        self.geo_defect() <= self.mesh
    }
}

/// Tags describing how a ball family was assembled.
#[derive(Clone, Debug)]
pub enum FamilyKind<T> {
    /// Every canonical ball at every center.
    Global,
    /// Canonical balls B with members(2B) ⊆ members(base).
    Localized(Ball<T>),
    /// Canonical balls B with members(B) ⊆ members of a dilated Whitney
    /// cell.
    WhitneyLocal(Ball<T>),
}

/// A finite family of balls with provenance.
#[derive(Clone, Debug)]
pub struct BallFamily<T> {
    pub balls: Vec<Ball<T>>,
    pub kind: FamilyKind<T>,
}

impl<T: Scalar> BallFamily<T> {
    pub fn global(space: &MetricMeasureSpace<T>) -> Self {
        BallFamily {
            balls: space.all_canonical_balls(),
            kind: FamilyKind::Global,
        }
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn path(n: usize) -> MetricMeasureSpace<f64> {
        MetricMeasureSpace::generate(SpaceKind::Path { n }, 1.0).unwrap()
    }

    fn two_point() -> MetricMeasureSpace<f64> {
        MetricMeasureSpace::from_matrix(
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            vec![1.0, 1.0],
        )
        .unwrap()
    }

    #[test]
    fn four_cycle_distances() {
        let space =
            MetricMeasureSpace::generate(SpaceKind::Cycle { n: 4 }, 1.0).unwrap();
        assert_abs_diff_eq!(space.dist(0, 2), 2.0);
        assert_abs_diff_eq!(space.dist(0, 3), 1.0);
        assert_abs_diff_eq!(space.mesh(), 1.0);
    }

    #[test]
    fn grid_and_tree_shapes() {
        let grid = MetricMeasureSpace::generate(
            SpaceKind::Grid {
                width: 2,
                height: 3,
            },
            1.0,
        )
        .unwrap();
        assert_eq!(grid.n(), 6);
        assert_abs_diff_eq!(grid.diameter(), 3.0);

        let tree =
            MetricMeasureSpace::generate(SpaceKind::BinaryTree { depth: 2 }, 1.0)
                .unwrap();
        assert_eq!(tree.n(), 7);
        assert_abs_diff_eq!(tree.diameter(), 4.0);
    }

    #[test]
    fn disconnected_graph_rejected() {
        let err = MetricMeasureSpace::from_graph(
            4,
            &[(0, 1, 1.0f64), (2, 3, 1.0)],
            vec![1.0; 4],
        )
        .unwrap_err();
        assert!(matches!(err, SpaceError::DisconnectedGraph));
    }

    #[test]
    fn bad_inputs_rejected() {
        assert!(matches!(
            MetricMeasureSpace::generate(SpaceKind::Path { n: 1 }, 1.0f64),
            Err(SpaceError::SizeTooSmall(_))
        ));
        assert!(matches!(
            MetricMeasureSpace::from_graph(2, &[(0, 1, 0.0f64)], vec![1.0, 1.0]),
            Err(SpaceError::NonPositiveLength(0, 1))
        ));
        assert!(matches!(
            MetricMeasureSpace::from_graph(2, &[(0, 1, 1.0f64)], vec![1.0, -1.0]),
            Err(SpaceError::NonPositiveWeight(1))
        ));
        // Triangle inequality violation in a raw matrix.
        let err = MetricMeasureSpace::from_matrix(
            vec![
                vec![0.0, 1.0, 5.0],
                vec![1.0, 0.0, 1.0],
                vec![5.0, 1.0, 0.0],
            ],
            vec![1.0, 1.0, 1.0],
        )
        .unwrap_err();
        assert!(matches!(err, SpaceError::InvalidMetric(_)));
    }

    #[test]
    fn balls_use_strict_inequality() {
        let space = path(3);
        let b = space.ball(0, 1.0);
        assert_eq!(b.point_count(), 1);
        let b = space.ball(0, 1.5);
        assert_eq!(b.point_count(), 2);
        assert_abs_diff_eq!(b.set_diam, 1.0);
        let everything = space.ball(1, 100.0);
        assert_eq!(everything.point_count(), 3);
    }

    #[test]
    fn canonical_radii_enumerate_distinct_balls() {
        let space = path(3);
        let radii = space.canonical_radii(0);
        assert_eq!(radii.len(), 3);
        assert_abs_diff_eq!(radii[0], 0.5);
        assert_abs_diff_eq!(radii[1], 1.5);
        assert_abs_diff_eq!(radii[2], 3.0); // 2 + mesh

        let two = two_point();
        let radii = two.canonical_radii(0);
        assert_abs_diff_eq!(radii[0], 0.5);
        assert_abs_diff_eq!(radii[1], 2.0); // 1 + mesh

        // path(5) center x2: distances {0,1,2} → 3 radii.
        let space = path(5);
        assert_eq!(space.canonical_radii(2).len(), 3);
    }

    #[test]
    fn canonical_balls_match_direct_construction() {
        let space = path(5);
        for c in 0..space.n() {
            let swept = space.canonical_balls(c);
            for b in &swept {
                let direct = space.ball(c, b.radius);
                assert!(b.members == direct.members);
                assert_abs_diff_eq!(b.set_diam, direct.set_diam);
            }
        }
    }

    #[test]
    fn doubling_constant_examples() {
        // Unit path(3): ratio 3 realized at center x1 with r between 0.5
        // and 1 (e.g. 0.75): B(x1, 0.75) = {x1}, B(x1, 1.5) = everything.
        let stats = path(3).stats();
        assert_abs_diff_eq!(stats.c_mu, 3.0, epsilon = 1e-12);

        let stats = two_point().stats();
        assert_abs_diff_eq!(stats.c_mu, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(stats.s, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn geodesic_defect_on_paths() {
        // Unit paths have midpoints within half an edge.
        let stats = path(6).stats();
        assert!(stats.geo_defect <= 0.5 + 1e-12);
        assert!(path(6).is_quasi_geodesic());
    }

    #[test]
    fn metric_center_of_a_path() {
        assert_eq!(path(5).metric_center(), 2);
        assert_eq!(path(4).metric_center(), 1); // tie between 1 and 2 → lowest
    }
}
