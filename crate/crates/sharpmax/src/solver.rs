//! Internal convex solver for weighted p-th power minimization under
//! nonnegative linear covering constraints:
//!
//!   minimize   Σ μ_i g_i^p    subject to   A g ≥ b,  g ≥ 0,
//!
//! where every entry of A is nonnegative. The feasible set is then upward
//! closed (increasing any coordinate never breaks a satisfied constraint),
//! which the solver exploits twice: a quadratic-penalty accelerated
//! projected gradient descent gets within solver accuracy, and a final
//! additive repair pass restores exact feasibility without meaningful
//! objective loss.

use crate::scalar::{lit, Scalar};

/// Sparse covering constraints `A g ≥ rhs` with nonnegative coefficients.
#[derive(Clone, Debug)]
pub(crate) struct ConstraintSystem<T> {
    /// Row k holds the nonzero coefficients of a_k as (index, coefficient).
    pub rows: Vec<Vec<(usize, T)>>,
    pub rhs: Vec<T>,
    /// Number of variables.
    pub n: usize,
}

impl<T: Scalar> ConstraintSystem<T> {
    pub fn new(n: usize) -> Self {
        ConstraintSystem {
            rows: Vec::new(),
            rhs: Vec::new(),
            n,
        }
    }

    pub fn push(&mut self, row: Vec<(usize, T)>, rhs: T) {
        debug_assert!(row.iter().all(|&(i, c)| i < self.n && c >= T::zero()));
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    fn dot(&self, k: usize, g: &[T]) -> T {
        self.rows[k]
            .iter()
            .fold(T::zero(), |acc, &(i, c)| acc + c * g[i])
    }

    /// Largest amount by which any constraint is unmet at `g`.
    #[cfg(test)]
    pub fn worst_violation(&self, g: &[T]) -> T {
        let mut worst = T::zero();
        for k in 0..self.rows.len() {
            let slack = self.rhs[k] - self.dot(k, g);
            if slack > worst {
                worst = slack;
            }
        }
        worst
    }
}

#[derive(Clone, Debug)]
pub(crate) struct SolverOutcome<T> {
    pub g: Vec<T>,
    pub objective: T,
    pub iterations: usize,
}

fn objective<T: Scalar>(measures: &[T], p: T, g: &[T]) -> T {
    measures
        .iter()
        .zip(g)
        .fold(T::zero(), |acc, (&m, &x)| acc + m * x.powf(p))
}

/// Augmented objective and its gradient at `h` (scaled units). Each
/// constraint contributes `rho·max(0, rhs_k + shift_k − a_k·h)²`, where the
/// nonnegative shift carries the running multiplier estimate (λ_k = 2ρ·shift
/// at an inner optimum).
fn penalized<T: Scalar>(
    measures: &[T],
    p: T,
    system: &ConstraintSystem<T>,
    rho: T,
    shifts: &[T],
    h: &[T],
    grad: &mut [T],
) -> T {
    let mut value = T::zero();
    for (gi, (&m, &x)) in grad.iter_mut().zip(measures.iter().zip(h)) {
        value = value + m * x.powf(p);
        *gi = p * m * x.powf(p - T::one());
    }
    let two = lit::<T>(2.0);
    for k in 0..system.rows.len() {
        let slack = system.rhs[k] + shifts[k] - system.dot(k, h);
        if slack > T::zero() {
            value = value + rho * slack * slack;
            for &(i, c) in &system.rows[k] {
                grad[i] = grad[i] - two * rho * slack * c;
            }
        }
    }
    value
}

fn penalized_value<T: Scalar>(
    measures: &[T],
    p: T,
    system: &ConstraintSystem<T>,
    rho: T,
    shifts: &[T],
    h: &[T],
) -> T {
    let mut value = objective(measures, p, h);
    for k in 0..system.rows.len() {
        let slack = system.rhs[k] + shifts[k] - system.dot(k, h);
        if slack > T::zero() {
            value = value + rho * slack * slack;
        }
    }
    value
}

/// Accelerated projected gradient descent (monotone restart, backtracking
/// line search) on the penalized objective for one penalty weight.
fn fista_stage<T: Scalar>(
    measures: &[T],
    p: T,
    system: &ConstraintSystem<T>,
    rho: T,
    shifts: &[T],
    h: &mut Vec<T>,
    max_iters: usize,
) -> usize {
    let n = h.len();
    let mut y = h.clone();
    let mut grad = vec![T::zero(); n];
    let mut t = T::one();
    let mut lipschitz = T::one();
    let tol = lit::<T>(1e-13);
    let mut iterations = 0;

    for _ in 0..max_iters {
        iterations += 1;
        let fy = penalized(measures, p, system, rho, shifts, &y, &mut grad);

        // Backtracking: find a step 1/L with sufficient decrease.
        lipschitz = lipschitz * lit::<T>(0.9);
        let mut next: Vec<T>;
        loop {
            let step = T::one() / lipschitz;
            next = y
                .iter()
                .zip(&grad)
                .map(|(&yi, &gi)| (yi - step * gi).max(T::zero()))
                .collect();
            let f_next = penalized_value(measures, p, system, rho, shifts, &next);
            let mut quad = fy;
            for i in 0..n {
                let d = next[i] - y[i];
                quad = quad + grad[i] * d + lipschitz / lit::<T>(2.0) * d * d;
            }
            if f_next <= quad + tol * (T::one() + fy.abs()) {
                break;
            }
            lipschitz = lipschitz * lit::<T>(2.0);
            if lipschitz > lit::<T>(1e18) {
                break;
            }
        }

        let mut shift = T::zero();
        let t_next = (T::one() + (T::one() + lit::<T>(4.0) * t * t).sqrt()) / lit::<T>(2.0);
        let momentum = (t - T::one()) / t_next;
        for i in 0..n {
            let delta = next[i] - h[i];
            if delta.abs() > shift {
                shift = delta.abs();
            }
            y[i] = (next[i] + momentum * delta).max(T::zero());
        }
        *h = next;
        t = t_next;

        let scale = h
            .iter()
            .fold(T::one(), |acc, &x| if x.abs() > acc { x.abs() } else { acc });
        if shift <= lit::<T>(1e-12) * scale {
            break;
        }
    }
    iterations
}

/// Additive repair: walks the constraints and, for each unmet one, raises
/// the variables in its support uniformly (in the dual weighting of the
/// row) just enough to satisfy it. Nonnegative coefficients guarantee a
/// repaired constraint stays satisfied while later ones are fixed, so two
/// passes end with every violation at roundoff scale.
fn repair<T: Scalar>(system: &ConstraintSystem<T>, g: &mut [T]) {
    let headroom = lit::<T>(1.0 + 1e-12);
    for _ in 0..2 {
        for k in 0..system.rows.len() {
            let slack = system.rhs[k] - system.dot(k, g);
            if slack > T::zero() {
                let weight: T = system.rows[k]
                    .iter()
                    .fold(T::zero(), |acc, &(_, c)| acc + c);
                if weight > T::zero() {
                    let bump = slack / weight * headroom;
                    for &(i, _) in &system.rows[k] {
                        g[i] = g[i] + bump;
                    }
                }
            }
        }
    }
}

/// Minimizes Σ μ_i g_i^p over the covering constraints. `warm` seeds the
/// iteration (it does not need to be feasible). The returned point is
/// exactly feasible up to roundoff and within solver accuracy of optimal.
pub(crate) fn minimize_weighted_power<T: Scalar>(
    measures: &[T],
    p: T,
    system: &ConstraintSystem<T>,
    warm: Option<&[T]>,
) -> SolverOutcome<T> {
    let n = system.n;
    // Scale so the largest right-hand side is 1 and normalize each row to
    // unit maximum coefficient; drop vacuous rows (with g ≥ 0 and A ≥ 0 a
    // row with rhs ≤ 0 always holds). The scaling makes the iteration path
    // invariant under scaling of the data and keeps the augmented problem
    // well conditioned.
    let scale = system
        .rhs
        .iter()
        .fold(T::zero(), |acc, &b| if b > acc { b } else { acc });
    if scale <= T::zero() {
        return SolverOutcome {
            g: vec![T::zero(); n],
            objective: T::zero(),
            iterations: 0,
        };
    }
    let mut scaled = ConstraintSystem::new(n);
    for k in 0..system.rows.len() {
        if system.rhs[k] > T::zero() {
            let cmax = system.rows[k]
                .iter()
                .fold(T::zero(), |acc, &(_, c)| if c > acc { c } else { acc });
            debug_assert!(cmax > T::zero(), "positive demand with empty support");
            let row: Vec<(usize, T)> = system.rows[k]
                .iter()
                .map(|&(i, c)| (i, c / cmax))
                .collect();
            scaled.push(row, system.rhs[k] / (scale * cmax));
        }
    }

    let mut h: Vec<T> = match warm {
        Some(w) => w.iter().map(|&x| (x / scale).max(T::zero())).collect(),
        None => vec![T::zero(); n],
    };

    // Method of multipliers: a fixed moderate penalty weight with running
    // multiplier shifts converges to the exact constrained optimum without
    // the conditioning blowup of an escalating pure penalty.
    let rho = lit::<T>(1e4);
    let mut shifts = vec![T::zero(); scaled.rows.len()];
    let mut iterations = 0;
    for _ in 0..40 {
        iterations += fista_stage(measures, p, &scaled, rho, &shifts, &mut h, 3000);
        let mut worst = T::zero();
        let mut change = T::zero();
        let mut largest = T::zero();
        for k in 0..scaled.rows.len() {
            let violation = scaled.rhs[k] - scaled.dot(k, &h);
            if violation > worst {
                worst = violation;
            }
            let updated = (shifts[k] + violation).max(T::zero());
            let delta = (updated - shifts[k]).abs();
            if delta > change {
                change = delta;
            }
            if updated > largest {
                largest = updated;
            }
            shifts[k] = updated;
        }
        if worst <= lit::<T>(1e-13) && change <= lit::<T>(1e-12) * (T::one() + largest) {
            break;
        }
    }
    repair(&scaled, &mut h);

    let g: Vec<T> = h.iter().map(|&x| x * scale).collect();
    let objective = objective(measures, p, &g);
    SolverOutcome {
        g,
        objective,
        iterations,
    }
}
