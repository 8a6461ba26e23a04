//! Gradient structures on a finite metric measure space: the pairwise
//! (fractional Hajłasz-type) relation and the path-integral (graph upper
//! gradient) relation, with feasibility checks, minimal-gradient convex
//! solves, patch-glueing, the structural axiom suite, and the smallest
//! factor η making the sharp maximal profile an admissible gradient.

use crate::holder::holder_constant;
use crate::maximal::sharp_maximal;
use crate::scalar::{lit, Scalar};
use crate::set::PointSet;
use crate::solver::{minimize_weighted_power, ConstraintSystem};
use crate::space::{BallFamily, MetricMeasureSpace};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GradientError {
    #[error("exponent must satisfy p >= 1, got {0}")]
    InvalidExponent(f64),
    #[error("exponent must satisfy p > 1 for path-integral gradients, got {0}")]
    ExponentNotAboveOne(f64),
    #[error("beta must lie in (0, 1], got {0}")]
    BetaOutOfRange(f64),
    #[error("values length {got} does not match point count {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("value at point {0} is not finite")]
    NonFiniteValue(usize),
    #[error("space has no graph provenance; path-integral gradients need edges")]
    NotAGraphSpace,
    #[error("gradient kind does not match the requested operation")]
    KindMismatch,
    #[error("glued values exceed the stated Hölder constant: pair ({i}, {j}) needs {kappa}")]
    NotHolder { kappa: f64, i: usize, j: usize },
    #[error("glued values differ from the originals off the patch at point {0}")]
    RestrictionMismatch(usize),
    #[error("no finite factor works: the maximal profile vanishes across a pair ({i}, {j}) where the function differs")]
    UnboundedEta { i: usize, j: usize },
}

/// Which gradient relation a candidate is measured against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DStructureKind<T> {
    /// Pairwise relation at smoothness β:
    /// |u(x) − u(y)| ≤ d(x,y)^β (g(x) + g(y)) for every pair.
    Hajlasz { beta: T },
    /// Path-integral relation on a graph-provenance space: along every
    /// edge path, the trapezoid sums (g(a)+g(b))/2 · len(ab) accumulate to
    /// at least the end-to-end increment of u.
    GraphUpper,
}

impl<T: Scalar> DStructureKind<T> {
    /// Smoothness exponent of the relation (1 for the path-integral kind).
    pub fn beta(&self) -> T {
        match self {
            DStructureKind::Hajlasz { beta } => *beta,
            DStructureKind::GraphUpper => T::one(),
        }
    }
}

/// A nonnegative pointwise gradient candidate for some function, tagged
/// with the relation it targets and the integrability exponent used when
/// it was produced or will be measured.
#[derive(Clone, Debug)]
pub struct GradientCandidate<T> {
    pub values: Vec<T>,
    pub kind: DStructureKind<T>,
    pub p: T,
}

/// A simple edge path through a graph-provenance space.
#[derive(Clone, Debug, PartialEq)]
pub struct Path<T> {
    /// Vertex sequence; consecutive entries are adjacent, none repeats.
    pub vertices: Vec<usize>,
    /// Sum of the traversed edge lengths.
    pub length: T,
}

/// Where a feasibility check found its worst slack.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness<T> {
    /// A point pair (pairwise relation).
    Pair { i: usize, j: usize },
    /// A vertex path (path-integral relation).
    Path(Path<T>),
}

/// Outcome of checking a gradient candidate against its relation.
#[derive(Clone, Debug)]
pub struct FeasibilityReport<T> {
    pub feasible: bool,
    /// Largest unmet amount across all constraints (≤ 0 when none unmet).
    pub worst_violation: T,
    /// Scale of the constraint right-hand sides (max increment of u).
    pub scale: T,
    /// Constraint attaining the worst slack, if any constraint exists.
    pub witness: Option<Witness<T>>,
}

/// A minimal-gradient solve result.
#[derive(Clone, Debug)]
pub struct MinimalGradient<T> {
    pub gradient: GradientCandidate<T>,
    /// Σ μ_i g_i^p at the solution.
    pub objective: T,
    /// objective^(1/p).
    pub norm: T,
    pub iterations: usize,
    pub report: FeasibilityReport<T>,
}

/// A patch-glued gradient: the stated constant on the patch, the original
/// gradient elsewhere.
#[derive(Clone, Debug)]
pub struct GluedGradient<T> {
    /// The glued function (original values off the patch).
    pub values: Vec<T>,
    pub gradient: GradientCandidate<T>,
    /// Measured Hölder constant of the glued function (≤ the stated one).
    pub measured_constant: T,
    /// Feasibility of the glued gradient for the glued function. Always
    /// feasible for the pairwise relation; reported as found for the
    /// path-integral relation, whose trapezoid weights halve endpoint
    /// contributions.
    pub report: FeasibilityReport<T>,
}

/// One failed structural check, with the sample indices and scalar that
/// produced it and the feasibility report holding the witness.
#[derive(Clone, Debug)]
pub struct AxiomViolation<T> {
    pub axiom: String,
    pub samples: Vec<usize>,
    pub scalar: Option<T>,
    pub report: FeasibilityReport<T>,
}

/// Per-axiom outcomes of the structural checks on a gradient relation.
#[derive(Clone, Debug)]
pub struct AxiomReport<T> {
    /// Minimal gradients come out nonnegative.
    pub nonnegativity: bool,
    /// The zero gradient is feasible for constant functions.
    pub vanishes_on_constants: bool,
    /// g_u + g_v is feasible for u + v.
    pub subadditivity: bool,
    /// |a|·g_u is feasible for a·u, a ∈ {−2, −1, 0.5}.
    pub homogeneity: bool,
    /// Patch glueing produces a feasible gradient.
    pub glueing: bool,
    pub holds: bool,
    /// Worst violation observed across all sampled checks.
    pub worst_violation: T,
    /// Every failed check, with its witness.
    pub violations: Vec<AxiomViolation<T>>,
}

fn validate_values<T: Scalar>(space: &MetricMeasureSpace<T>, values: &[T]) -> Result<(), GradientError> {
    if values.len() != space.n() {
        return Err(GradientError::LengthMismatch {
            got: values.len(),
            want: space.n(),
        });
    }
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(GradientError::NonFiniteValue(i));
        }
    }
    Ok(())
}

fn check_beta<T: Scalar>(beta: T) -> Result<(), GradientError> {
    if beta > T::zero() && beta <= T::one() {
        Ok(())
    } else {
        Err(GradientError::BetaOutOfRange(
            beta.to_f64().unwrap_or(f64::NAN),
        ))
    }
}

fn feasibility_tolerance<T: Scalar>(scale: T) -> T {
    lit::<T>(1e-12) + lit::<T>(1e-9) * scale
}

fn edge_length<T: Scalar>(graph: &crate::graph::GraphData<T>, a: usize, b: usize) -> T {
    graph.adjacency[a]
        .iter()
        .find(|&&(to, _)| to == b)
        .map(|&(_, len)| len)
        .expect("walk follows graph edges")
}

fn make_path<T: Scalar>(graph: &crate::graph::GraphData<T>, vertices: Vec<usize>) -> Path<T> {
    let length = vertices
        .windows(2)
        .fold(T::zero(), |acc, w| acc + edge_length(graph, w[0], w[1]));
    Path { vertices, length }
}

/// Orients a vertex path so equal paths compare equal regardless of the
/// direction they were discovered in.
fn canonical_vertices(mut vertices: Vec<usize>) -> Vec<usize> {
    if vertices.first() > vertices.last() {
        vertices.reverse();
    }
    vertices
}

/// Checks a gradient candidate against its relation, reporting the worst
/// slack and the pair or path attaining it. The `feasible` flag allows a
/// roundoff-sized violation relative to the data scale.
pub fn feasibility<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    values: &[T],
    gradient: &GradientCandidate<T>,
) -> Result<FeasibilityReport<T>, GradientError> {
    validate_values(space, values)?;
    validate_values(space, &gradient.values)?;
    match gradient.kind {
        DStructureKind::Hajlasz { beta } => {
            check_beta(beta)?;
            let g = &gradient.values;
            let mut worst = T::neg_infinity();
            let mut witness = None;
            let mut scale = T::zero();
            for i in 0..space.n() {
                for j in (i + 1)..space.n() {
                    let increment = (values[i] - values[j]).abs();
                    if increment > scale {
                        scale = increment;
                    }
                    let allowance = space.dist(i, j).powf(beta) * (g[i] + g[j]);
                    let slack = increment - allowance;
                    if slack > worst {
                        worst = slack;
                        witness = Some(Witness::Pair { i, j });
                    }
                }
            }
            Ok(FeasibilityReport {
                feasible: worst <= feasibility_tolerance(scale),
                worst_violation: worst,
                scale,
                witness,
            })
        }
        DStructureKind::GraphUpper => {
            let graph = space.graph().ok_or(GradientError::NotAGraphSpace)?;
            let g = &gradient.values;
            let mut worst = T::neg_infinity();
            let mut witness = None;
            let mut scale = T::zero();
            let two = lit::<T>(2.0);
            for i in 0..space.n() {
                let (dist, prev) =
                    crate::graph::dijkstra_by(&graph.adjacency, i, |a, b, len| {
                        (g[a] + g[b]) / two * len
                    });
                for j in (i + 1)..space.n() {
                    let increment = (values[i] - values[j]).abs();
                    if increment > scale {
                        scale = increment;
                    }
                    let slack = increment - dist[j];
                    if slack > worst {
                        worst = slack;
                        witness = Some(Witness::Path(make_path(
                            graph,
                            crate::graph::walk_back(&prev, i, j),
                        )));
                    }
                }
            }
            Ok(FeasibilityReport {
                feasible: worst <= feasibility_tolerance(scale),
                worst_violation: worst,
                scale,
                witness,
            })
        }
    }
}

/// Minimal pairwise-relation gradient: minimizes Σ μ_i g_i^p over all g
/// with |u(x) − u(y)| ≤ d(x,y)^β (g(x) + g(y)). The returned point is
/// feasible with no tolerance and within solver accuracy of optimal.
pub fn minimal_hajlasz_gradient<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    values: &[T],
    p: T,
    beta: T,
) -> Result<MinimalGradient<T>, GradientError> {
    if p < T::one() {
        return Err(GradientError::InvalidExponent(
            p.to_f64().unwrap_or(f64::NAN),
        ));
    }
    check_beta(beta)?;
    validate_values(space, values)?;

    let n = space.n();
    let mut system = ConstraintSystem::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let increment = (values[i] - values[j]).abs();
            if increment > T::zero() {
                let coeff = space.dist(i, j).powf(beta);
                system.push(vec![(i, coeff), (j, coeff)], increment);
            }
        }
    }
    // Feasible warm start: half the largest normalized increment at each
    // point already satisfies every pair constraint.
    let two = lit::<T>(2.0);
    let warm: Vec<T> = (0..n)
        .map(|i| {
            let mut best = T::zero();
            for j in 0..n {
                if j != i {
                    let cand =
                        (values[i] - values[j]).abs() / space.dist(i, j).powf(beta) / two;
                    if cand > best {
                        best = cand;
                    }
                }
            }
            best
        })
        .collect();

    let outcome = minimize_weighted_power(space.measures(), p, &system, Some(&warm));
    let gradient = GradientCandidate {
        values: outcome.g,
        kind: DStructureKind::Hajlasz { beta },
        p,
    };
    let report = feasibility(space, values, &gradient)?;
    Ok(MinimalGradient {
        norm: outcome.objective.powf(T::one() / p),
        objective: outcome.objective,
        iterations: outcome.iterations,
        gradient,
        report,
    })
}

fn path_row<T: Scalar>(graph: &crate::graph::GraphData<T>, path: &[usize]) -> Vec<(usize, T)> {
    let two = lit::<T>(2.0);
    let mut coeffs = vec![T::zero(); graph.n()];
    for w in path.windows(2) {
        let len = edge_length(graph, w[0], w[1]);
        coeffs[w[0]] = coeffs[w[0]] + len / two;
        coeffs[w[1]] = coeffs[w[1]] + len / two;
    }
    coeffs
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > T::zero())
        .collect()
}

/// Minimal path-integral gradient on a graph-provenance space: minimizes
/// Σ μ_i g_i^p subject to the trapezoid path sums dominating every
/// end-to-end increment of u. Solved by cutting planes: start from the
/// single-edge constraints, repeatedly add the most-violated shortest
/// path, and finish with an exact feasibility restoration (a global scale
/// once every gradient-weighted distance is positive).
pub fn minimal_upper_gradient<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    values: &[T],
    p: T,
) -> Result<MinimalGradient<T>, GradientError> {
    if p <= T::one() {
        return Err(GradientError::ExponentNotAboveOne(
            p.to_f64().unwrap_or(f64::NAN),
        ));
    }
    validate_values(space, values)?;
    let graph = space.graph().ok_or(GradientError::NotAGraphSpace)?;

    let n = space.n();
    let two = lit::<T>(2.0);
    let mut system = ConstraintSystem::new(n);
    let mut seen_rows: Vec<Vec<usize>> = Vec::new();
    for &(a, b, len) in &graph.edges {
        let increment = (values[a] - values[b]).abs();
        if increment > T::zero() {
            system.push(vec![(a, len / two), (b, len / two)], increment);
            seen_rows.push(canonical_vertices(vec![a, b]));
        }
    }
    let scale = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .fold(T::zero(), |acc, (i, j)| {
            let inc = (values[i] - values[j]).abs();
            if inc > acc {
                inc
            } else {
                acc
            }
        });
    if scale <= T::zero() {
        let gradient = GradientCandidate {
            values: vec![T::zero(); n],
            kind: DStructureKind::GraphUpper,
            p,
        };
        let report = feasibility(space, values, &gradient)?;
        return Ok(MinimalGradient {
            objective: T::zero(),
            norm: T::zero(),
            iterations: 0,
            gradient,
            report,
        });
    }

    // Feasible warm start: steepest incident edge slope at each point.
    let warm: Vec<T> = (0..n)
        .map(|i| {
            graph.adjacency[i].iter().fold(T::zero(), |best, &(j, len)| {
                let cand = (values[i] - values[j]).abs() / len;
                if cand > best {
                    cand
                } else {
                    best
                }
            })
        })
        .collect();

    let mut g = warm.clone();
    let mut iterations = 0usize;
    let separation_tol = lit::<T>(1e-7) * scale;
    for _round in 0..60 {
        let outcome = minimize_weighted_power(space.measures(), p, &system, Some(&g));
        g = outcome.g;
        iterations += outcome.iterations;

        // Separation: most violated end-to-end constraint under the
        // gradient-weighted shortest-path distance.
        let mut worst = T::zero();
        let mut worst_path: Option<Vec<usize>> = None;
        for i in 0..n {
            let (dist, prev) = crate::graph::dijkstra_by(&graph.adjacency, i, |a, b, len| {
                (g[a] + g[b]) / two * len
            });
            for j in (i + 1)..n {
                let violation = (values[i] - values[j]).abs() - dist[j];
                if violation > worst {
                    worst = violation;
                    worst_path = Some(crate::graph::walk_back(&prev, i, j));
                }
            }
        }
        let Some(path) = worst_path else { break };
        if worst <= separation_tol {
            break;
        }
        let canon = canonical_vertices(path.clone());
        if seen_rows.contains(&canon) {
            // The same path keeps violating at solver accuracy: stop
            // refining and let the exact restoration below close the gap.
            break;
        }
        let increment = (values[path[0]] - values[*path.last().unwrap()]).abs();
        system.push(path_row(graph, &path), increment);
        seen_rows.push(canon);
    }

    // Exact restoration: as long as some end-to-end constraint is unmet,
    // either every unmet one has positive gradient-weighted distance (one
    // global scale fixes them all) or a zero-cost path needs an additive
    // lift along its vertices.
    for _ in 0..64 {
        let mut ratio = T::one();
        let mut zero_path: Option<(Vec<usize>, T)> = None;
        for i in 0..n {
            let (dist, prev) = crate::graph::dijkstra_by(&graph.adjacency, i, |a, b, len| {
                (g[a] + g[b]) / two * len
            });
            for j in (i + 1)..n {
                let increment = (values[i] - values[j]).abs();
                if increment <= T::zero() {
                    continue;
                }
                if dist[j] <= T::zero() {
                    let path = crate::graph::walk_back(&prev, i, j);
                    let length: T = path
                        .windows(2)
                        .map(|w| space.dist(w[0], w[1]))
                        .sum();
                    zero_path = Some((path, increment / length));
                    break;
                }
                let r = increment / dist[j];
                if r > ratio {
                    ratio = r;
                }
            }
            if zero_path.is_some() {
                break;
            }
        }
        if let Some((path, lift)) = zero_path {
            for &v in &path {
                g[v] = g[v] + lift;
            }
            continue;
        }
        if ratio > T::one() {
            let factor = ratio * lit::<T>(1.0 + 1e-12);
            for gi in g.iter_mut() {
                *gi = *gi * factor;
            }
        } else {
            break;
        }
    }

    let objective = space
        .measures()
        .iter()
        .zip(&g)
        .fold(T::zero(), |acc, (&m, &x)| acc + m * x.powf(p));
    let gradient = GradientCandidate {
        values: g,
        kind: DStructureKind::GraphUpper,
        p,
    };
    let report = feasibility(space, values, &gradient)?;
    Ok(MinimalGradient {
        objective,
        norm: objective.powf(T::one() / p),
        iterations,
        gradient,
        report,
    })
}

/// Glues a gradient across a patch: `glued` must agree with `values` off
/// `patch` and be β-Hölder with constant `kappa`; the output carries
/// `kappa` on the patch and `gradient` elsewhere. For the pairwise
/// relation the result is always feasible for `glued` (case analysis on
/// whether an endpoint lies in the patch); the returned report certifies
/// it either way.
pub fn glue_gradient<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    values: &[T],
    glued: &[T],
    patch: &PointSet,
    kappa: T,
    gradient: &GradientCandidate<T>,
) -> Result<GluedGradient<T>, GradientError> {
    validate_values(space, values)?;
    validate_values(space, glued)?;
    validate_values(space, &gradient.values)?;
    let beta = gradient.kind.beta();
    check_beta(beta)?;
    for i in patch.complement().iter() {
        if glued[i] != values[i] {
            return Err(GradientError::RestrictionMismatch(i));
        }
    }
    // Validate the stated Hölder constant, with roundoff slack, and find
    // the tightest pair if it fails.
    let measured = holder_constant(space, glued, beta).expect("beta validated above");
    if measured > kappa + feasibility_tolerance(kappa) {
        let mut worst = (T::zero(), 0, 0);
        for i in 0..space.n() {
            for j in (i + 1)..space.n() {
                let ratio = (glued[i] - glued[j]).abs() / space.dist(i, j).powf(beta);
                if ratio > worst.0 {
                    worst = (ratio, i, j);
                }
            }
        }
        return Err(GradientError::NotHolder {
            kappa: worst.0.to_f64().unwrap_or(f64::NAN),
            i: worst.1,
            j: worst.2,
        });
    }
    let glued_gradient: Vec<T> = (0..space.n())
        .map(|i| {
            if patch.contains(i) {
                kappa
            } else {
                gradient.values[i]
            }
        })
        .collect();
    let candidate = GradientCandidate {
        values: glued_gradient,
        kind: gradient.kind,
        p: gradient.p,
    };
    let report = feasibility(space, glued, &candidate)?;
    Ok(GluedGradient {
        values: glued.to_vec(),
        gradient: candidate,
        measured_constant: measured,
        report,
    })
}

/// Smallest η ≥ 0 (to 1e-6 relative accuracy, from the feasible side)
/// such that η times the global sharp maximal profile of `values` is a
/// feasible gradient for `values` under `kind`. Constant functions return
/// 0. Feasibility is monotone in η, so a bisection finds the threshold;
/// the defensive unbounded check cannot fire for the global family on a
/// connected space, where a nonconstant function has a positive profile
/// everywhere.
pub fn eta_for_maximal<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    values: &[T],
    p: T,
    beta: T,
    kind: DStructureKind<T>,
) -> Result<T, GradientError> {
    validate_values(space, values)?;
    if p < T::one() {
        return Err(GradientError::InvalidExponent(
            p.to_f64().unwrap_or(f64::NAN),
        ));
    }
    check_beta(beta)?;
    if values.iter().all(|&v| v == values[0]) {
        return Ok(T::zero());
    }
    let family = BallFamily::global(space);
    let sharp = sharp_maximal(space, values, p, beta, &family)
        .map_err(|_| GradientError::BetaOutOfRange(beta.to_f64().unwrap_or(f64::NAN)))?;

    // No finite η can work where the profile vanishes across a genuine
    // increment of u: scaling a zero gradient never helps.
    match kind {
        DStructureKind::Hajlasz { .. } => {
            for i in 0..space.n() {
                for j in (i + 1)..space.n() {
                    if values[i] != values[j]
                        && sharp.values[i] <= T::zero()
                        && sharp.values[j] <= T::zero()
                    {
                        return Err(GradientError::UnboundedEta { i, j });
                    }
                }
            }
        }
        DStructureKind::GraphUpper => {
            let graph = space.graph().ok_or(GradientError::NotAGraphSpace)?;
            let two = lit::<T>(2.0);
            for i in 0..space.n() {
                let (dist, _) = crate::graph::dijkstra_by(&graph.adjacency, i, |a, b, len| {
                    (sharp.values[a] + sharp.values[b]) / two * len
                });
                for j in (i + 1)..space.n() {
                    if values[i] != values[j] && dist[j] <= T::zero() {
                        return Err(GradientError::UnboundedEta { i, j });
                    }
                }
            }
        }
    }

    let ok = |eta: T| -> Result<bool, GradientError> {
        let candidate = GradientCandidate {
            values: sharp.values.iter().map(|&m| eta * m).collect(),
            kind,
            p,
        };
        Ok(feasibility(space, values, &candidate)?.feasible)
    };
    if ok(T::zero())? {
        return Ok(T::zero());
    }
    let mut hi = T::one();
    while !ok(hi)? {
        hi = hi * lit::<T>(2.0);
    }
    let mut lo = T::zero();
    for _ in 0..200 {
        if hi - lo <= lit::<T>(1e-6) * hi {
            break;
        }
        let mid = (lo + hi) / lit::<T>(2.0);
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Minimal gradient of the given kind (pairwise solve or cutting-plane
/// path solve).
pub fn minimal_gradient<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    values: &[T],
    p: T,
    kind: DStructureKind<T>,
) -> Result<MinimalGradient<T>, GradientError> {
    match kind {
        DStructureKind::Hajlasz { beta } => minimal_hajlasz_gradient(space, values, p, beta),
        DStructureKind::GraphUpper => minimal_upper_gradient(space, values, p),
    }
}

/// Verifies the structural axioms of a gradient relation on the supplied
/// sample functions: nonnegativity of minimal gradients, the zero
/// gradient on constants, scaling by a ∈ {−2, −1, 0.5} (plus the zero
/// scalar), sums over every sample pair, and one seeded patch-glueing
/// instance per sample. Violations are report content, not errors. For
/// the path-integral relation the glueing constant is doubled: trapezoid
/// weights halve endpoint contributions, so the patch must carry twice
/// the Hölder constant to dominate edge increments.
pub fn check_axioms<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    kind: DStructureKind<T>,
    samples: &[Vec<T>],
    p: T,
    seed: u64,
) -> Result<AxiomReport<T>, GradientError> {
    use rand::{Rng, SeedableRng};
    let beta = kind.beta();
    check_beta(beta)?;
    for sample in samples {
        validate_values(space, sample)?;
    }

    let mut nonnegativity = true;
    let mut vanishes_on_constants = true;
    let mut subadditivity = true;
    let mut homogeneity = true;
    let mut glueing = true;
    let mut worst = T::neg_infinity();
    let mut violations: Vec<AxiomViolation<T>> = Vec::new();
    let note = |report: FeasibilityReport<T>,
                    flag: &mut bool,
                    worst: &mut T,
                    violations: &mut Vec<AxiomViolation<T>>,
                    axiom: &str,
                    samples: Vec<usize>,
                    scalar: Option<T>| {
        if report.worst_violation > *worst {
            *worst = report.worst_violation;
        }
        if !report.feasible {
            *flag = false;
            violations.push(AxiomViolation {
                axiom: axiom.to_string(),
                samples,
                scalar,
                report,
            });
        }
    };

    let zero = GradientCandidate {
        values: vec![T::zero(); space.n()],
        kind,
        p,
    };
    let constant = vec![lit::<T>(0.75); space.n()];
    let report = feasibility(space, &constant, &zero)?;
    note(
        report,
        &mut vanishes_on_constants,
        &mut worst,
        &mut violations,
        "zero gradient on constants",
        vec![],
        None,
    );

    let minima: Vec<MinimalGradient<T>> = samples
        .iter()
        .map(|u| minimal_gradient(space, u, p, kind))
        .collect::<Result<_, _>>()?;

    for (si, (u, gu)) in samples.iter().zip(&minima).enumerate() {
        if gu.gradient.values.iter().any(|&x| x < T::zero()) {
            nonnegativity = false;
            violations.push(AxiomViolation {
                axiom: "nonnegative minimal gradient".to_string(),
                samples: vec![si],
                scalar: None,
                report: gu.report.clone(),
            });
        }
        for a in [lit::<T>(-2.0), lit::<T>(-1.0), lit::<T>(0.5), T::zero()] {
            let scaled_u: Vec<T> = u.iter().map(|&x| a * x).collect();
            let scaled_g = GradientCandidate {
                values: gu.gradient.values.iter().map(|&x| a.abs() * x).collect(),
                kind,
                p,
            };
            let report = feasibility(space, &scaled_u, &scaled_g)?;
            note(
                report,
                &mut homogeneity,
                &mut worst,
                &mut violations,
                "scaled gradient for scaled function",
                vec![si],
                Some(a),
            );
        }
    }

    for si in 0..samples.len() {
        for sj in (si + 1)..samples.len() {
            let sum: Vec<T> = samples[si]
                .iter()
                .zip(&samples[sj])
                .map(|(&a, &b)| a + b)
                .collect();
            let gsum = GradientCandidate {
                values: minima[si]
                    .gradient
                    .values
                    .iter()
                    .zip(&minima[sj].gradient.values)
                    .map(|(&a, &b)| a + b)
                    .collect(),
                kind,
                p,
            };
            let report = feasibility(space, &sum, &gsum)?;
            note(
                report,
                &mut subadditivity,
                &mut worst,
                &mut violations,
                "summed gradients for summed functions",
                vec![si, sj],
                None,
            );
        }
    }

    // One glueing instance per sample: replace a seeded ball patch by its
    // Hölder extension from the complement, then glue the gradient. Needs
    // a nonempty complement, so spaces with one point have no instances.
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    for (si, (u, gu)) in samples.iter().zip(&minima).enumerate() {
        if space.n() < 2 {
            break;
        }
        let center = rng.gen_range(0..space.n());
        let mut radius = space.diameter() * lit::<T>(rng.gen_range(0.1..0.4));
        let mut patch = space.ball(center, radius).members;
        while patch.complement().is_empty() {
            radius = radius / lit::<T>(2.0);
            patch = space.ball(center, radius).members;
        }
        let anchors = patch.complement();
        let boundary: Vec<T> = anchors.iter().map(|i| u[i]).collect();
        let mut kappa_boundary = T::zero();
        let anchor_list: Vec<usize> = anchors.iter().collect();
        for (ai, &a) in anchor_list.iter().enumerate() {
            for &b in &anchor_list[ai + 1..] {
                let ratio = (u[a] - u[b]).abs() / space.dist(a, b).powf(beta);
                if ratio > kappa_boundary {
                    kappa_boundary = ratio;
                }
            }
        }
        let extension =
            crate::holder::mcshane_extend(space, &anchors, &boundary, kappa_boundary, beta)
                .expect("boundary constant measured from the boundary itself");
        let kappa_glued =
            holder_constant(space, &extension.values, beta).expect("beta validated above");
        let patch_constant = match kind {
            DStructureKind::Hajlasz { .. } => kappa_glued,
            DStructureKind::GraphUpper => lit::<T>(2.0) * kappa_glued,
        };
        let glued = glue_gradient(
            space,
            u,
            &extension.values,
            &patch,
            patch_constant,
            &gu.gradient,
        )?;
        note(
            glued.report,
            &mut glueing,
            &mut worst,
            &mut violations,
            "glued gradient for patched function",
            vec![si],
            None,
        );
    }

    let holds =
        nonnegativity && vanishes_on_constants && subadditivity && homogeneity && glueing;
    Ok(AxiomReport {
        nonnegativity,
        vanishes_on_constants,
        subadditivity,
        homogeneity,
        glueing,
        holds,
        worst_violation: worst,
        violations,
    })
}
