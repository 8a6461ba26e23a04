//! Covering machinery: greedy 5r-subcovers, Whitney-type decompositions
//! of a ball, chains of balls marching from the center of a ball toward a
//! member point, and stopping-time families selected by an oscillation
//! threshold.

use crate::maximal::normalized_oscillation;
use crate::scalar::{lit, Scalar};
use crate::set::PointSet;
use crate::space::{Ball, BallFamily, FamilyKind, MetricMeasureSpace};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoveringError {
    #[error("base ball covers the whole space; no exterior to measure distances against")]
    BallIsWholeSpace,
    #[error("cell ratio must lie in (0, 1/8], got {0}")]
    InvalidRatio(f64),
    #[error("space is not quasi-geodesic: defect {defect} exceeds mesh {mesh}")]
    NotQuasiGeodesic { defect: f64, mesh: f64 },
    #[error("point {point} is not a member of the ball")]
    PointOutsideBall { point: usize },
    #[error("chain ratio must exceed 1, got {0}")]
    InvalidChainRatio(f64),
    #[error("dilation must be at least 1, got {0}")]
    InvalidDilation(f64),
    #[error("cell index {index} out of range for cover with {cells} cells")]
    CellOutOfRange { index: usize, cells: usize },
    #[error("level {level} is not above half the cell oscillation {threshold}")]
    LevelBelowThreshold { level: f64, threshold: f64 },
    #[error("exponent must satisfy p > 1, got {0}")]
    InvalidExponent(f64),
    #[error("beta must lie in (0, 1], got {0}")]
    BetaOutOfRange(f64),
    #[error("values length {got} does not match point count {want}")]
    LengthMismatch { got: usize, want: usize },
}

/// Greedy 5r-subcover: selects a pairwise member-disjoint subfamily, in
/// decreasing order of radius, such that every input ball's members lie in
/// the 5-fold dilate of some selected ball.
pub fn five_r_cover<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    balls: &[Ball<T>],
) -> Vec<Ball<T>> {
    let mut order: Vec<usize> = (0..balls.len()).collect();
    order.sort_by(|&a, &b| {
        balls[b]
            .radius
            .partial_cmp(&balls[a].radius)
            .expect("finite radii")
            .then(balls[a].center.cmp(&balls[b].center))
            .then(a.cmp(&b))
    });
    let mut selected: Vec<Ball<T>> = Vec::new();
    let mut occupied = PointSet::empty(space.n());
    for idx in order {
        let ball = &balls[idx];
        if ball.members.is_disjoint(&occupied) {
            occupied.union_with(&ball.members);
            selected.push(ball.clone());
        }
    }
    selected
}

/// A Whitney-type decomposition of a base ball into cells whose radii are
/// proportional to the distance from the cell center to the complement of
/// the base, together with the 4-fold dilated cells.
#[derive(Clone, Debug)]
pub struct WhitneyCover<T> {
    pub base: Ball<T>,
    /// Selected cells Q; their members cover the members of the base.
    pub cells: Vec<Ball<T>>,
    /// Dilated cells Q* = 4Q, index-aligned with `cells`.
    pub dilated: Vec<Ball<T>>,
    /// Radius-to-boundary-distance ratio used for the cells.
    pub ratio: T,
    /// Max number of dilated cells containing any single base point.
    pub overlap: usize,
}

impl<T: Scalar> WhitneyCover<T> {
    /// Single-cell cover used when the base ball is the whole space: the
    /// base itself is the one cell and its 4-fold dilate the one dilated
    /// cell.
    pub fn trivial(space: &MetricMeasureSpace<T>, base: &Ball<T>) -> Self {
        let dilated = space.ball(base.center, lit::<T>(4.0) * base.radius);
        WhitneyCover {
            base: base.clone(),
            cells: vec![base.clone()],
            dilated: vec![dilated],
            ratio: T::one(),
            overlap: 1,
        }
    }
}

/// Builds a Whitney-type cover of a proper ball. Each base point x gets a
/// candidate cell of radius `ratio · dist(x, complement of base)`; cells
/// are then pruned greedily by decreasing radius, keeping a cell only if
/// it covers a point not covered by previously kept cells. The kept cells
/// cover the base exactly, and for ratio ≤ 1/8 every dilated cell stays
/// inside the base.
pub fn whitney_cover<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    base: &Ball<T>,
    ratio: T,
) -> Result<WhitneyCover<T>, CoveringError> {
    if !(ratio > T::zero() && ratio <= lit::<T>(0.125)) {
        return Err(CoveringError::InvalidRatio(
            ratio.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let outside = base.members.complement();
    if outside.is_empty() {
        return Err(CoveringError::BallIsWholeSpace);
    }
    let centers: Vec<usize> = base.members.iter().collect();
    let mut candidates: Vec<Ball<T>> = centers
        .iter()
        .map(|&x| space.ball(x, ratio * space.dist_to_set(x, &outside)))
        .collect();
    candidates.sort_by(|a, b| {
        b.radius
            .partial_cmp(&a.radius)
            .expect("finite radii")
            .then(a.center.cmp(&b.center))
    });
    let mut cells: Vec<Ball<T>> = Vec::new();
    let mut covered = PointSet::empty(space.n());
    for cand in candidates {
        if !cand.members.is_subset(&covered) {
            covered.union_with(&cand.members);
            cells.push(cand);
        }
    }
    debug_assert_eq!(
        covered.iter().collect::<Vec<_>>(),
        base.members.iter().collect::<Vec<_>>()
    );
    let dilated: Vec<Ball<T>> = cells
        .iter()
        .map(|q| space.ball(q.center, lit::<T>(4.0) * q.radius))
        .collect();
    let mut overlap = 0usize;
    for x in base.members.iter() {
        let count = dilated.iter().filter(|q| q.members.contains(x)).count();
        overlap = overlap.max(count);
    }
    Ok(WhitneyCover {
        base: base.clone(),
        cells,
        dilated,
        ratio,
        overlap,
    })
}

/// The family of canonical balls whose members lie inside the dilated
/// cell Q* of the given cover cell. Containment reduces to a radius test
/// against the distance from the ball center to the complement of Q*.
pub fn whitney_family<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    cover: &WhitneyCover<T>,
    cell: usize,
) -> BallFamily<T> {
    assert!(cell < cover.cells.len(), "cell index out of range");
    let qstar = &cover.dilated[cell];
    let outside = qstar.members.complement();
    let mut balls = Vec::new();
    for center in qstar.members.iter() {
        let d_out = space.dist_to_set(center, &outside);
        for ball in space.canonical_balls(center) {
            if ball.radius <= d_out {
                balls.push(ball);
            }
        }
    }
    BallFamily {
        balls,
        kind: FamilyKind::WhitneyLocal(qstar.clone()),
    }
}

/// A chain of balls from a ball's center toward one of its member points.
#[derive(Clone, Debug)]
pub struct Chain<T> {
    pub base: Ball<T>,
    pub target: usize,
    /// The chain balls, starting at the base center and ending centered at
    /// the target.
    pub balls: Vec<Ball<T>>,
    /// Link balls, one between each consecutive pair: links[i] has members
    /// inside both balls[i] and balls[i+1].
    pub links: Vec<Ball<T>>,
    /// Radius decay ratio requested (consecutive radii aim at a factor 1/a).
    pub a: T,
    /// Dilation requested: the chain aims to keep tau·B_i inside the base.
    pub tau: T,
    /// Largest dilation for which every chain ball provably stays inside
    /// the base after dilation (capped at `tau`; equals `tau` when the
    /// requested dilation was achieved everywhere).
    pub tau_achieved: T,
    /// Comparability constant actually achieved: with D the member
    /// diameter of the base (floored at the mesh), radii satisfy
    /// m^(−1)·a^(−i)·D ≤ r_i ≤ m·a^(−i)·D, and each union of consecutive
    /// balls lies in the m-fold dilate of its link.
    pub m: T,
}

/// Nearly-geodesic vertex walk from `from` to `to`: on graph-provenance
/// spaces the shortest-path vertex sequence; otherwise a greedy walk that
/// always moves to the nearest point strictly decreasing the remaining
/// distance while staying within the quasi-geodesic detour budget.
fn vertex_walk<T: Scalar>(space: &MetricMeasureSpace<T>, from: usize, to: usize) -> Vec<usize> {
    if let Some(graph) = space.graph() {
        let (_, prev) = crate::graph::dijkstra_by(&graph.adjacency, from, |_, _, len| len);
        return crate::graph::walk_back(&prev, from, to);
    }
    let defect = space.stats().geo_defect;
    let budget = lit::<T>(2.0) * defect + space.mesh() * lit::<T>(1e-9);
    let mut walk = vec![from];
    let mut current = from;
    while current != to {
        let remaining = space.dist(current, to);
        let mut best: Option<(T, T, usize)> = None;
        for z in 0..space.n() {
            if z == current {
                continue;
            }
            let leg = space.dist(current, z);
            let rest = space.dist(z, to);
            if rest >= remaining || leg + rest > remaining + budget {
                continue;
            }
            let key = (leg, rest, z);
            match best {
                Some((bl, br, bz))
                    if (bl, br, bz) <= (key.0, key.1, key.2) => {}
                _ => best = Some(key),
            }
        }
        current = match best {
            Some((_, _, z)) => z,
            None => to,
        };
        walk.push(current);
    }
    walk
}

/// Builds a chain of balls from the center of `base` to the member point
/// `target`. Radii follow the schedule `diam(base)/(4·tau) · a^(−i)`,
/// floored at 1.25·mesh while marching and capped so that the tau-dilate
/// of each ball stays inside the base whenever the march permits; when a
/// step forces a radius past that cap, the achieved dilation is recorded
/// in `tau_achieved`. The walk ends with balls centered at the target,
/// truncated once the schedule falls below mesh/2.
pub fn build_chain<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    base: &Ball<T>,
    target: usize,
    tau: T,
    a: T,
) -> Result<Chain<T>, CoveringError> {
    if tau < T::one() {
        return Err(CoveringError::InvalidDilation(
            tau.to_f64().unwrap_or(f64::NAN),
        ));
    }
    if a <= T::one() {
        return Err(CoveringError::InvalidChainRatio(
            a.to_f64().unwrap_or(f64::NAN),
        ));
    }
    if !space.is_quasi_geodesic() {
        let stats = space.stats();
        return Err(CoveringError::NotQuasiGeodesic {
            defect: stats.geo_defect.to_f64().unwrap_or(f64::NAN),
            mesh: space.mesh().to_f64().unwrap_or(f64::NAN),
        });
    }
    if !base.members.contains(target) {
        return Err(CoveringError::PointOutsideBall { point: target });
    }

    let outside = base.members.complement();
    let cap = |c: usize| -> T {
        if outside.is_empty() {
            T::infinity()
        } else {
            space.dist_to_set(c, &outside) / tau
        }
    };
    let diam = base.set_diam;
    let mesh = space.mesh();
    let floor = lit::<T>(1.25) * mesh;

    let mut balls: Vec<Ball<T>> = Vec::new();
    let mut tau_achieved = tau;
    let note_radius = |c: usize, r: T, tau_achieved: &mut T| {
        if !outside.is_empty() {
            let exact = space.dist_to_set(c, &outside) / r;
            if exact < *tau_achieved {
                *tau_achieved = exact;
            }
        }
    };

    if diam <= T::zero() {
        // The base is a single point; one singleton ball suffices.
        let r = cap(target).min(space.canonical_radii(target)[0]);
        note_radius(target, r, &mut tau_achieved);
        balls.push(space.ball(target, r));
    } else {
        let walk = vertex_walk(space, base.center, target);
        let r0 = diam / (lit::<T>(4.0) * tau);
        let singleton = space.canonical_radii(target)[0];
        let mut cursor = 0usize;
        let mut i = 0usize;
        let mut reached_target = false;
        loop {
            let c = walk[cursor];
            let at_target = c == target;
            let schedule = r0 * a.powi(-(i as i32));
            // Target-centered balls shrink with the schedule and stop
            // once it drops below half the mesh (at least one is always
            // emitted).
            if at_target && reached_target && schedule < mesh / lit::<T>(2.0) {
                break;
            }
            let mut r = if i == 0 {
                // The first radius is pinned; it always stays inside the
                // base even after dilation by tau (every point within a
                // quarter of the member diameter of the center belongs).
                r0
            } else if at_target {
                schedule.max(singleton).min(cap(target))
            } else {
                schedule.max(floor).min(cap(c))
            };
            if !at_target && i > 0 {
                // The next walk vertex must lie strictly inside this ball
                // so the link between consecutive balls is nonempty. This
                // can exceed the dilation cap in tight spots (a corridor
                // one mesh wide); tau_achieved records the loss honestly.
                let need = space.dist(c, walk[cursor + 1]) * lit::<T>(1.0 + 1e-9)
                    + mesh * lit::<T>(1e-12);
                if r < need {
                    r = need;
                }
            }
            note_radius(c, r, &mut tau_achieved);
            let ball = space.ball(c, r);
            // Advance to the farthest walk vertex strictly inside the
            // ball. The pinned first ball may contain no forward vertex;
            // the next iteration then re-centers here with a radius large
            // enough to move.
            let mut next_cursor = cursor;
            for (m, &v) in walk.iter().enumerate().skip(cursor + 1) {
                if ball.members.contains(v) {
                    next_cursor = m;
                }
            }
            balls.push(ball);
            i += 1;
            if at_target {
                reached_target = true;
            } else {
                cursor = next_cursor;
            }
        }
    }

    // Links: the largest canonical ball at the later center contained in
    // both consecutive balls. The later center is always a member of the
    // earlier ball by construction, so at worst the singleton ball works.
    let mut links = Vec::with_capacity(balls.len().saturating_sub(1));
    for w in balls.windows(2) {
        let meet = w[0].members.intersection(&w[1].members);
        let mut link: Option<Ball<T>> = None;
        for cand in space.canonical_balls(w[1].center) {
            if cand.members.is_subset(&meet) {
                link = Some(cand);
            }
        }
        links.push(link.expect("consecutive chain balls share the later center"));
    }

    // Comparability constant: radius envelope against the schedule, plus
    // the dilation needed for each link to swallow its two neighbors.
    let mut m = lit::<T>(4.0) * tau;
    for (i, b) in balls.iter().enumerate() {
        let schedule = diam.max(mesh) * a.powi(-(i as i32));
        m = m.max(b.radius * a.powi(i as i32) / diam.max(mesh));
        m = m.max(schedule / b.radius);
    }
    for (i, link) in links.iter().enumerate() {
        let mut joined = balls[i].members.clone();
        joined.union_with(&balls[i + 1].members);
        let union: Vec<usize> = joined.iter().collect();
        let mut need = T::one();
        for &x in &union {
            let d = space.dist(link.center, x);
            let factor = (d / link.radius) * lit::<T>(1.0 + 1e-9) + lit::<T>(1e-9);
            need = need.max(factor);
        }
        // Verify member-wise, nudging up until the dilate truly covers.
        let mut factor = need;
        loop {
            let dilate = space.ball(link.center, factor * link.radius);
            if union.iter().all(|&x| dilate.members.contains(x)) {
                break;
            }
            factor = factor * lit::<T>(1.0 + 1e-6);
        }
        m = m.max(factor);
    }

    Ok(Chain {
        base: base.clone(),
        target,
        balls,
        links,
        a,
        tau,
        tau_achieved,
        m,
    })
}

/// One selected stopping ball with its oscillation and the oscillation of
/// its parent in the stopping iteration.
#[derive(Clone, Debug)]
pub struct StoppingBall<T> {
    pub ball: Ball<T>,
    pub oscillation: T,
    pub parent_oscillation: T,
}

/// One parent step in the stopping iteration, recorded for auditing the
/// measure and diameter growth of the parent map.
#[derive(Clone, Debug)]
pub struct ParentStep<T> {
    pub child: Ball<T>,
    pub parent: Ball<T>,
}

/// Stopping-time family for one Whitney cell at a given level.
#[derive(Clone, Debug)]
pub struct StoppingFamily<T> {
    pub cell: usize,
    pub level: T,
    /// Normalized oscillation of the dilated cell Q*.
    pub threshold: T,
    /// Pairwise member-disjoint selected balls covering the level set
    /// after 5-fold dilation.
    pub balls: Vec<StoppingBall<T>>,
    /// Every parent step taken during the iteration.
    pub steps: Vec<ParentStep<T>>,
}

/// Builds the stopping-time family of a Whitney cell: for each cell point
/// whose localized sharp maximal value exceeds `level`, the largest
/// violating canonical ball containing the point is iterated through the
/// parent map (double the ball while it stays inside Q*, else jump to Q*)
/// until the parent's oscillation drops to the level; the resulting balls
/// are reduced to a greedy 5r-subcover.
pub fn stopping_family<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    cover: &WhitneyCover<T>,
    cell: usize,
    values: &[T],
    p: T,
    beta: T,
    level: T,
) -> Result<StoppingFamily<T>, CoveringError> {
    if cell >= cover.cells.len() {
        return Err(CoveringError::CellOutOfRange {
            index: cell,
            cells: cover.cells.len(),
        });
    }
    if p <= T::one() {
        return Err(CoveringError::InvalidExponent(
            p.to_f64().unwrap_or(f64::NAN),
        ));
    }
    if !(beta > T::zero() && beta <= T::one()) {
        return Err(CoveringError::BetaOutOfRange(
            beta.to_f64().unwrap_or(f64::NAN),
        ));
    }
    if values.len() != space.n() {
        return Err(CoveringError::LengthMismatch {
            got: values.len(),
            want: space.n(),
        });
    }
    let q = &cover.cells[cell];
    let qstar = &cover.dilated[cell];
    let threshold = normalized_oscillation(space, qstar, values, p, beta);
    if !(level > threshold / lit::<T>(2.0)) {
        return Err(CoveringError::LevelBelowThreshold {
            level: level.to_f64().unwrap_or(f64::NAN),
            threshold: threshold.to_f64().unwrap_or(f64::NAN),
        });
    }

    let family = whitney_family(space, cover, cell);
    let oscillations: Vec<T> = family
        .balls
        .iter()
        .map(|b| normalized_oscillation(space, b, values, p, beta))
        .collect();

    let mut steps: Vec<ParentStep<T>> = Vec::new();
    let mut chosen: Vec<(Ball<T>, T, T)> = Vec::new();

    if level < threshold {
        // The dilated cell itself violates the level: it is the one
        // stopping ball for every level-set point.
        chosen.push((qstar.clone(), threshold, threshold));
    } else {
        let parent_of = |b: &Ball<T>| -> Ball<T> {
            let double = space.ball(b.center, lit::<T>(2.0) * b.radius);
            if double.members.is_subset(&qstar.members) {
                double
            } else {
                qstar.clone()
            }
        };
        for x in q.members.iter() {
            // Largest violating family ball containing x, ordered by
            // (member diameter, radius, center index).
            let mut start: Option<usize> = None;
            for (k, b) in family.balls.iter().enumerate() {
                if oscillations[k] > level && b.members.contains(x) {
                    let better = match start {
                        None => true,
                        Some(s) => {
                            let cur = &family.balls[s];
                            (b.set_diam, b.radius, b.center)
                                .partial_cmp(&(cur.set_diam, cur.radius, cur.center))
                                .expect("finite")
                                == std::cmp::Ordering::Greater
                        }
                    };
                    if better {
                        start = Some(k);
                    }
                }
            }
            let Some(start) = start else { continue };
            let mut current = family.balls[start].clone();
            let mut current_osc = oscillations[start];
            loop {
                let parent = parent_of(&current);
                let parent_osc = normalized_oscillation(space, &parent, values, p, beta);
                steps.push(ParentStep {
                    child: current.clone(),
                    parent: parent.clone(),
                });
                if parent_osc <= level {
                    chosen.push((current, current_osc, parent_osc));
                    break;
                }
                current = parent;
                current_osc = parent_osc;
            }
        }
    }

    // Deduplicate identical stopping balls before the 5r reduction.
    chosen.sort_by(|a, b| {
        (a.0.center, a.0.radius)
            .partial_cmp(&(b.0.center, b.0.radius))
            .expect("finite")
    });
    chosen.dedup_by(|a, b| a.0.center == b.0.center && a.0.radius == b.0.radius);

    let candidate_balls: Vec<Ball<T>> = chosen.iter().map(|c| c.0.clone()).collect();
    let selected = five_r_cover(space, &candidate_balls);
    let mut balls = Vec::with_capacity(selected.len());
    for s in selected {
        let record = chosen
            .iter()
            .find(|c| c.0.center == s.center && c.0.radius == s.radius)
            .expect("selected ball came from the candidate list");
        balls.push(StoppingBall {
            ball: s,
            oscillation: record.1,
            parent_oscillation: record.2,
        });
    }

    Ok(StoppingFamily {
        cell,
        level,
        threshold,
        balls,
        steps,
    })
}
