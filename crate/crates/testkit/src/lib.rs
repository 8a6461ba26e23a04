//! Brute-force reference solvers and shared instance generators for the
//! test suites. Everything here trades speed for transparency: the
//! reference optima come from exhaustive vertex enumeration (linear
//! objectives) or from a dual bound certified against a feasible primal
//! point (strictly convex objectives), with no code shared with the
//! production solver.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sharpmax::space::{MetricMeasureSpace, SpaceKind};
use sharpmax::Space64;

/// Sparse nonnegative constraint rows `a_k · g ≥ rhs_k`.
pub type Rows = Vec<Vec<(usize, f64)>>;

/// Pairwise-relation rows for a function: one row per unordered pair with
/// differing values, `d(i,j)^β (g_i + g_j) ≥ |u_i − u_j|`.
pub fn hajlasz_rows(space: &Space64, u: &[f64], beta: f64) -> (Rows, Vec<f64>) {
    let n = space.n();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = (u[i] - u[j]).abs();
            if gap > 0.0 {
                let c = space.dist(i, j).powf(beta);
                rows.push(vec![(i, c), (j, c)]);
                rhs.push(gap);
            }
        }
    }
    (rows, rhs)
}

/// All simple edge paths of a graph-provenance space, one canonical
/// direction each (first vertex below last).
pub fn all_simple_paths(space: &Space64) -> Vec<Vec<usize>> {
    let graph = space.graph().expect("graph-provenance space");
    let n = space.n();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b, _) in &graph.edges {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    let mut paths = Vec::new();
    let mut stack = Vec::new();
    let mut visited = vec![false; n];
    fn dfs(
        v: usize,
        adjacency: &[Vec<usize>],
        visited: &mut [bool],
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        visited[v] = true;
        stack.push(v);
        if stack.len() >= 2 && stack[0] < v {
            out.push(stack.clone());
        }
        for &w in &adjacency[v] {
            if !visited[w] {
                dfs(w, adjacency, visited, stack, out);
            }
        }
        stack.pop();
        visited[v] = false;
    }
    for start in 0..n {
        dfs(start, &adjacency, &mut visited, &mut stack, &mut paths);
    }
    paths
}

/// Path-integral rows for a function: one row per simple path, trapezoid
/// vertex weights against the end-to-end increment.
pub fn upper_rows(space: &Space64, u: &[f64]) -> (Rows, Vec<f64>) {
    let n = space.n();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for path in all_simple_paths(space) {
        let gap = (u[*path.last().unwrap()] - u[path[0]]).abs();
        if gap <= 0.0 {
            continue;
        }
        let mut coeff = vec![0.0f64; n];
        for w in path.windows(2) {
            let len = space.dist(w[0], w[1]);
            coeff[w[0]] += len / 2.0;
            coeff[w[1]] += len / 2.0;
        }
        rows.push(
            coeff
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c > 0.0)
                .map(|(i, &c)| (i, c))
                .collect(),
        );
        rhs.push(gap);
    }
    (rows, rhs)
}

/// Gaussian elimination with partial pivoting; `None` when the system is
/// singular at the working precision.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |acc, &x| acc.max(x.abs()))
        .max(1e-300);
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| {
            a[r][col]
                .abs()
                .partial_cmp(&a[s][col].abs())
                .expect("finite entries")
        })?;
        if a[pivot][col].abs() < 1e-12 * scale {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in (col + 1)..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in (row + 1)..n {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Exact minimum of `Σ c_i g_i` over `rows · g ≥ rhs, g ≥ 0` by
/// enumerating every basic solution (all choices of n tight constraints
/// among the rows and the coordinate planes). Exponential in n — callers
/// keep n at five or less.
pub fn lp_oracle(costs: &[f64], rows: &Rows, rhs: &[f64]) -> f64 {
    let n = costs.len();
    if rhs.iter().all(|&b| b <= 0.0) {
        return 0.0;
    }
    // Dense constraint list: (coefficient row, rhs); the first `m` are the
    // demands, the rest the coordinate planes g_i = 0.
    let mut dense: Vec<(Vec<f64>, f64)> = Vec::new();
    for (row, &b) in rows.iter().zip(rhs) {
        let mut r = vec![0.0; n];
        for &(i, c) in row {
            r[i] = c;
        }
        dense.push((r, b));
    }
    let m = dense.len();
    for i in 0..n {
        let mut r = vec![0.0; n];
        r[i] = 1.0;
        dense.push((r, 0.0));
    }
    let total = dense.len();

    let feasible = |g: &[f64]| -> bool {
        if g.iter().any(|&x| x < -1e-8) {
            return false;
        }
        for (row, b) in dense.iter().take(m) {
            let lhs: f64 = row.iter().zip(g).map(|(&c, &x)| c * x).sum();
            if lhs < b - 1e-8 * (1.0 + b.abs()) {
                return false;
            }
        }
        true
    };

    let mut best = f64::INFINITY;
    let mut combo: Vec<usize> = (0..n).collect();
    loop {
        let a: Vec<Vec<f64>> = combo.iter().map(|&k| dense[k].0.clone()).collect();
        let b: Vec<f64> = combo.iter().map(|&k| dense[k].1).collect();
        if let Some(g) = solve_linear(a, b) {
            if feasible(&g) {
                let value: f64 = costs.iter().zip(&g).map(|(&c, &x)| c * x.max(0.0)).sum();
                if value < best {
                    best = value;
                }
            }
        }
        // Advance to the next lexicographic n-combination of 0..total.
        let mut i = n;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if combo[i] != i + total - n {
                combo[i] += 1;
                for j in (i + 1)..n {
                    combo[j] = combo[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            return best;
        }
    }
}

/// A bracketed reference optimum: `lower ≤ optimum ≤ upper`, with the gap
/// certified by convex duality.
#[derive(Clone, Copy, Debug)]
pub struct CertifiedValue {
    pub lower: f64,
    pub upper: f64,
}

impl CertifiedValue {
    /// Relative width of the bracket.
    pub fn gap(&self) -> f64 {
        (self.upper - self.lower) / (1.0 + self.upper.abs())
    }
}

/// Reference minimum of `Σ μ_i g_i^p` (p > 1) over `rows · g ≥ rhs,
/// g ≥ 0` via projected gradient ascent on the Lagrangian dual, returning
/// the dual value as a lower bound and a repaired primal point as an upper
/// bound. The two bracket the optimum by weak/strong duality.
pub fn convex_oracle(measures: &[f64], p: f64, rows: &Rows, rhs: &[f64]) -> CertifiedValue {
    assert!(p > 1.0, "the dual oracle needs p > 1");
    let n = measures.len();
    let mut live_rows: Rows = Vec::new();
    let mut live_rhs: Vec<f64> = Vec::new();
    for (row, &b) in rows.iter().zip(rhs) {
        if b > 0.0 {
            live_rows.push(row.clone());
            live_rhs.push(b);
        }
    }
    if live_rhs.is_empty() {
        return CertifiedValue {
            lower: 0.0,
            upper: 0.0,
        };
    }
    let m = live_rhs.len();
    let conj = p / (p - 1.0);

    // g_i(λ) = (s_i / (p μ_i))^(1/(p−1)) with s = Aᵀλ, and
    // q(λ) = λ·b − (p−1)/p · Σ_i s_i g_i(s_i).
    let primal_point = |lambda: &[f64]| -> Vec<f64> {
        let mut s = vec![0.0; n];
        for (k, row) in live_rows.iter().enumerate() {
            for &(i, c) in row {
                s[i] += lambda[k] * c;
            }
        }
        s.iter()
            .zip(measures)
            .map(|(&si, &mu)| {
                if si <= 0.0 {
                    0.0
                } else {
                    (si / (p * mu)).powf(1.0 / (p - 1.0))
                }
            })
            .collect()
    };
    let dual_value = |lambda: &[f64]| -> f64 {
        let mut s = vec![0.0; n];
        for (k, row) in live_rows.iter().enumerate() {
            for &(i, c) in row {
                s[i] += lambda[k] * c;
            }
        }
        let mut value: f64 = lambda.iter().zip(&live_rhs).map(|(&l, &b)| l * b).sum();
        for (&si, &mu) in s.iter().zip(measures) {
            if si > 0.0 {
                value -= (p - 1.0) / p * si.powf(conj) * (p * mu).powf(-1.0 / (p - 1.0));
            }
        }
        value
    };
    let objective = |g: &[f64]| -> f64 {
        measures
            .iter()
            .zip(g)
            .map(|(&mu, &x)| mu * x.powf(p))
            .sum()
    };
    // Feasible upper bound from any point: scale up to meet every row
    // (after an additive bump on rows whose support the point misses).
    let upper_bound = |g: &[f64]| -> f64 {
        let mut g = g.to_vec();
        for (row, &b) in live_rows.iter().zip(&live_rhs) {
            let lhs: f64 = row.iter().map(|&(i, c)| c * g[i]).sum();
            if lhs <= 0.0 {
                let weight: f64 = row.iter().map(|&(_, c)| c).sum();
                for &(i, _) in row {
                    g[i] += b / weight;
                }
            }
        }
        let mut t: f64 = 0.0;
        for (row, &b) in live_rows.iter().zip(&live_rhs) {
            let lhs: f64 = row.iter().map(|&(i, c)| c * g[i]).sum();
            t = t.max(b / lhs);
        }
        let t = t.max(0.0) * (1.0 + 1e-14);
        objective(&g.iter().map(|&x| x * t).collect::<Vec<_>>())
    };

    let gradient_at = |lam: &[f64]| -> Vec<f64> {
        let g = primal_point(lam);
        live_rows
            .iter()
            .zip(&live_rhs)
            .map(|(row, &b)| b - row.iter().map(|&(i, c)| c * g[i]).sum::<f64>())
            .collect()
    };

    // Accelerated projected ascent with backtracking and a monotone
    // restart: momentum when it helps, a plain gradient step when the
    // extrapolated point loses ground.
    let mut lambda = vec![0.0f64; m];
    let mut lambda_prev = lambda.clone();
    let mut q_lambda = dual_value(&lambda);
    let mut best = CertifiedValue {
        lower: q_lambda,
        upper: upper_bound(&primal_point(&lambda)),
    };
    let mut t = 1.0f64;
    let mut lipschitz = 1.0f64;
    let ascend = |from: &[f64], lipschitz: &mut f64| -> (Vec<f64>, f64) {
        let q_from = dual_value(from);
        let grad = gradient_at(from);
        *lipschitz *= 0.7;
        loop {
            let step = 1.0 / *lipschitz;
            let next: Vec<f64> = from
                .iter()
                .zip(&grad)
                .map(|(&l, &d)| (l + step * d).max(0.0))
                .collect();
            let q_next = dual_value(&next);
            let mut model = q_from;
            for k in 0..m {
                let d = next[k] - from[k];
                model += grad[k] * d - *lipschitz / 2.0 * d * d;
            }
            if q_next >= model - 1e-13 * (1.0 + q_from.abs()) || *lipschitz > 1e18 {
                return (next, q_next);
            }
            *lipschitz *= 2.0;
        }
    };
    for iter in 0..20_000 {
        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        let omega = (t - 1.0) / t_next;
        let z: Vec<f64> = lambda
            .iter()
            .zip(&lambda_prev)
            .map(|(&l, &lp)| (l + omega * (l - lp)).max(0.0))
            .collect();
        let (mut next, mut q_next) = ascend(&z, &mut lipschitz);
        if q_next < q_lambda {
            // Momentum overshot: restart from the current point.
            let (plain, q_plain) = ascend(&lambda, &mut lipschitz);
            next = plain;
            q_next = q_plain;
            t = 1.0;
        } else {
            t = t_next;
        }
        lambda_prev = std::mem::replace(&mut lambda, next);
        q_lambda = q_next;
        if q_lambda > best.lower {
            best.lower = q_lambda;
        }
        if iter % 10 == 9 {
            let upper = upper_bound(&primal_point(&lambda));
            if upper < best.upper {
                best.upper = upper;
            }
            if best.upper - best.lower <= 1e-9 * (1.0 + best.upper.abs()) {
                break;
            }
        }
    }
    let upper = upper_bound(&primal_point(&lambda));
    if upper < best.upper {
        best.upper = upper;
    }
    best
}

/// Reference optimum for the pairwise relation, dispatched on the
/// exponent: exact vertex enumeration at p = 1, the certified dual
/// bracket otherwise.
pub fn hajlasz_oracle(space: &Space64, u: &[f64], p: f64, beta: f64) -> CertifiedValue {
    let (rows, rhs) = hajlasz_rows(space, u, beta);
    let measures: Vec<f64> = (0..space.n()).map(|i| space.measure(i)).collect();
    if p == 1.0 {
        let v = lp_oracle(&measures, &rows, &rhs);
        CertifiedValue { lower: v, upper: v }
    } else {
        convex_oracle(&measures, p, &rows, &rhs)
    }
}

/// Reference optimum for the path-integral relation over every simple
/// path (p > 1).
pub fn upper_oracle(space: &Space64, u: &[f64], p: f64) -> CertifiedValue {
    let (rows, rhs) = upper_rows(space, u);
    let measures: Vec<f64> = (0..space.n()).map(|i| space.measure(i)).collect();
    convex_oracle(&measures, p, &rows, &rhs)
}

/// Random metric space from points scattered in the unit square with
/// Euclidean distances and weights in [1/2, 2].
pub fn random_matrix_space(n: usize, seed: u64) -> Space64 {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    loop {
        let points: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)))
            .collect();
        let mut dist = vec![vec![0.0; n]; n];
        let mut degenerate = false;
        for i in 0..n {
            for j in 0..n {
                let dx = points[i].0 - points[j].0;
                let dy = points[i].1 - points[j].1;
                dist[i][j] = (dx * dx + dy * dy).sqrt();
                if i != j && dist[i][j] < 1e-3 {
                    degenerate = true;
                }
            }
        }
        if degenerate {
            continue;
        }
        let measure: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
        return MetricMeasureSpace::from_matrix(dist, measure).expect("valid random space");
    }
}

/// Every test space with at most five points: the generated smalls plus
/// seeded random matrix spaces.
pub fn small_spaces() -> Vec<(String, Space64)> {
    let mut spaces: Vec<(String, Space64)> = vec![
        (
            "two_point".into(),
            MetricMeasureSpace::from_matrix(
                vec![vec![0.0, 1.0], vec![1.0, 0.0]],
                vec![1.0, 1.0],
            )
            .unwrap(),
        ),
        (
            "path3".into(),
            MetricMeasureSpace::generate(SpaceKind::Path { n: 3 }, 1.0).unwrap(),
        ),
        (
            "path5".into(),
            MetricMeasureSpace::generate(SpaceKind::Path { n: 5 }, 1.0).unwrap(),
        ),
        (
            "cycle4".into(),
            MetricMeasureSpace::generate(SpaceKind::Cycle { n: 4 }, 1.0).unwrap(),
        ),
        (
            "cycle5".into(),
            MetricMeasureSpace::generate(SpaceKind::Cycle { n: 5 }, 0.5).unwrap(),
        ),
        (
            "tree1".into(),
            MetricMeasureSpace::generate(SpaceKind::BinaryTree { depth: 1 }, 1.0).unwrap(),
        ),
        (
            "grid2x2".into(),
            MetricMeasureSpace::generate(SpaceKind::Grid { width: 2, height: 2 }, 1.0).unwrap(),
        ),
    ];
    for (i, seed) in [101u64, 202, 303].into_iter().enumerate() {
        spaces.push((
            format!("random{}", i + 3),
            random_matrix_space(i + 3, seed),
        ));
    }
    spaces
}

/// Graph-provenance test spaces with at most five points.
pub fn small_graph_spaces() -> Vec<(String, Space64)> {
    small_spaces()
        .into_iter()
        .filter(|(_, s)| s.graph().is_some())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn linear_solver_inverts_small_systems() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = solve_linear(a, vec![5.0, 10.0]).unwrap();
        assert_relative_eq!(x[0], 1.0, max_relative = 1e-12);
        assert_relative_eq!(x[1], 3.0, max_relative = 1e-12);
        assert!(solve_linear(vec![vec![1.0, 2.0], vec![2.0, 4.0]], vec![1.0, 2.0]).is_none());
    }

    #[test]
    fn lp_oracle_solves_a_textbook_instance() {
        // min g0 + 3 g1 with g0 + g1 ≥ 1: optimum 1 at (1, 0).
        let rows = vec![vec![(0, 1.0), (1, 1.0)]];
        let v = lp_oracle(&[1.0, 3.0], &rows, &[1.0]);
        assert_relative_eq!(v, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn convex_oracle_matches_hand_computation() {
        // min 4 g0² + g1² with g0 + g1 ≥ 5: optimum at (1, 4), value 20.
        let rows = vec![vec![(0, 1.0), (1, 1.0)]];
        let out = convex_oracle(&[4.0, 1.0], 2.0, &rows, &[5.0]);
        assert!(out.gap() <= 1e-8, "gap {} too wide", out.gap());
        assert_relative_eq!(out.upper, 20.0, max_relative = 1e-7);
    }

    #[test]
    fn simple_path_enumeration_counts() {
        let path3 = MetricMeasureSpace::generate(SpaceKind::Path { n: 3 }, 1.0).unwrap();
        // 0-1, 1-2, 0-1-2.
        assert_eq!(all_simple_paths(&path3).len(), 3);
        let cycle4 = MetricMeasureSpace::generate(SpaceKind::Cycle { n: 4 }, 1.0).unwrap();
        // Each unordered pair is joined by exactly two simple routes:
        // C(4,2) · 2 = 12.
        assert_eq!(all_simple_paths(&cycle4).len(), 12);
    }
}
