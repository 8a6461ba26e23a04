//! Fractional sharp maximal functions over ball families, localized
//! variants driven by Whitney covers, level sets, and the weak-type
//! integral check used to pass between exponents.

use crate::covering::WhitneyCover;
use crate::scalar::{lit, metric_tol, Scalar};
use crate::set::PointSet;
use crate::space::{Ball, BallFamily, FamilyKind, MetricMeasureSpace};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MaximalError {
    #[error("exponent must satisfy p >= 1, got {0}")]
    InvalidExponent(f64),
    #[error("beta must lie in (0, 1], got {0}")]
    BetaOutOfRange(f64),
    #[error("exponent order violated: need q < t, got q = {q}, t = {t}")]
    ExponentOrder { q: f64, t: f64 },
    #[error("values length {got} does not match point count {want}")]
    LengthMismatch { got: usize, want: usize },
}

/// Pointwise values of a sharp maximal function, with the exponents used.
#[derive(Clone, Debug)]
pub struct MaximalProfile<T> {
    pub values: Vec<T>,
    pub p: T,
    pub beta: T,
}

/// Points of `base` where a profile exceeds a level.
#[derive(Clone, Debug)]
pub struct LevelSet<T> {
    pub lambda: T,
    pub members: PointSet,
}

/// Result of the weak-type tail check on a ball.
#[derive(Clone, Debug)]
pub struct KolmogorovReport<T> {
    /// Smallest constant with μ{|u| > λ} ≤ c0·λ^(−t) for all λ > 0,
    /// evaluated at the finitely many jump levels of |u|.
    pub c0: T,
    /// (⨍_B |u|^q dμ)^(1/q).
    pub lhs: T,
    /// 2^(1/q) · (c0·q/(t−q))^(1/t) · μ(B)^(−1/t).
    pub rhs: T,
    pub holds: bool,
}

fn check_exponents<T: Scalar>(p: T, beta: T) -> Result<(), MaximalError> {
    if p < T::one() {
        return Err(MaximalError::InvalidExponent(p.to_f64().unwrap_or(f64::NAN)));
    }
    if !(beta > T::zero() && beta <= T::one()) {
        return Err(MaximalError::BetaOutOfRange(
            beta.to_f64().unwrap_or(f64::NAN),
        ));
    }
    Ok(())
}

/// Normalized p-oscillation of a ball:
/// `diam(B)^(−β) · (⨍_B |u − u_B|^p dμ)^(1/p)`,
/// zero when the member set has zero diameter.
pub(crate) fn normalized_oscillation<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    ball: &Ball<T>,
    values: &[T],
    p: T,
    beta: T,
) -> T {
    if ball.set_diam <= T::zero() {
        return T::zero();
    }
    let mut mass = T::zero();
    let mut mean = T::zero();
    for i in ball.members.iter() {
        mass = mass + space.measure(i);
        mean = mean + space.measure(i) * values[i];
    }
    mean = mean / mass;
    let mut integral = T::zero();
    for i in ball.members.iter() {
        integral = integral + space.measure(i) * (values[i] - mean).abs().powf(p);
    }
    (integral / mass).powf(T::one() / p) / ball.set_diam.powf(beta)
}

/// Fractional sharp maximal function of `values` over `family`:
/// at each point, the sup of normalized p-oscillations over family balls
/// containing the point (zero where no ball applies).
pub fn sharp_maximal<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    values: &[T],
    p: T,
    beta: T,
    family: &BallFamily<T>,
) -> Result<MaximalProfile<T>, MaximalError> {
    check_exponents(p, beta)?;
    if values.len() != space.n() {
        return Err(MaximalError::LengthMismatch {
            got: values.len(),
            want: space.n(),
        });
    }
    let mut profile = vec![T::zero(); space.n()];
    for ball in &family.balls {
        let osc = normalized_oscillation(space, ball, values, p, beta);
        if osc > T::zero() {
            for i in ball.members.iter() {
                if osc > profile[i] {
                    profile[i] = osc;
                }
            }
        }
    }
    Ok(MaximalProfile {
        values: profile,
        p,
        beta,
    })
}

/// The family of canonical balls B with members(2B) ⊆ members(base):
/// the balls "well inside" the base ball in the membership sense.
///
/// Membership of the doubled ball reduces to a radius test: members(2B) lie
/// in the base exactly when 2r does not exceed the distance from the
/// center to the nearest point outside the base.
pub fn localized_family<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    base: &Ball<T>,
) -> BallFamily<T> {
    let outside = base.members.complement();
    let two = lit::<T>(2.0);
    let mut balls = Vec::new();
    for center in base.members.iter() {
        let d_out = space.dist_to_set(center, &outside);
        for ball in space.canonical_balls(center) {
            if two * ball.radius <= d_out {
                balls.push(ball);
            }
        }
    }
    BallFamily {
        balls,
        kind: FamilyKind::Localized(base.clone()),
    }
}

/// Localized sharp maximal function driven by a Whitney cover: on each
/// cell Q the profile is the sharp maximal function over the balls inside
/// the dilated cell Q*, and the result at a point is the max over the
/// cells containing it (zero outside the cover's base).
pub fn whitney_localized_maximal<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    cover: &WhitneyCover<T>,
    values: &[T],
    p: T,
    beta: T,
) -> Result<MaximalProfile<T>, MaximalError> {
    check_exponents(p, beta)?;
    if values.len() != space.n() {
        return Err(MaximalError::LengthMismatch {
            got: values.len(),
            want: space.n(),
        });
    }
    let mut profile = vec![T::zero(); space.n()];
    for cell_idx in 0..cover.cells.len() {
        let cell_members = cover.cells[cell_idx].members.clone();
        let family = crate::covering::whitney_family(space, cover, cell_idx);
        let mut local = vec![T::zero(); space.n()];
        for ball in &family.balls {
            let osc = normalized_oscillation(space, ball, values, p, beta);
            if osc > T::zero() {
                for i in ball.members.iter() {
                    if osc > local[i] {
                        local[i] = osc;
                    }
                }
            }
        }
        for i in cell_members.iter() {
            if local[i] > profile[i] {
                profile[i] = local[i];
            }
        }
    }
    Ok(MaximalProfile {
        values: profile,
        p,
        beta,
    })
}

/// {x ∈ base : profile(x) > λ}.
pub fn level_set<T: Scalar>(
    profile: &MaximalProfile<T>,
    lambda: T,
    base: &PointSet,
) -> LevelSet<T> {
    let mut members = PointSet::empty(base.universe());
    for i in base.iter() {
        if profile.values[i] > lambda {
            members.insert(i);
        }
    }
    LevelSet { lambda, members }
}

/// Weak-type tail check on a ball: computes the smallest constant c0 with
/// μ{|u| > λ} ≤ c0·λ^(−t) (attained from the left at the jump levels of
/// |u| restricted to the ball) and verifies
/// (⨍_B |u|^q)^(1/q) ≤ 2^(1/q)·(c0·q/(t−q))^(1/t)·μ(B)^(−1/t).
pub fn kolmogorov_check<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    ball: &Ball<T>,
    values: &[T],
    q: T,
    t: T,
) -> Result<KolmogorovReport<T>, MaximalError> {
    if q < T::one() {
        return Err(MaximalError::InvalidExponent(q.to_f64().unwrap_or(f64::NAN)));
    }
    if q >= t {
        return Err(MaximalError::ExponentOrder {
            q: q.to_f64().unwrap_or(f64::NAN),
            t: t.to_f64().unwrap_or(f64::NAN),
        });
    }
    if values.len() != space.n() {
        return Err(MaximalError::LengthMismatch {
            got: values.len(),
            want: space.n(),
        });
    }
    let members: Vec<usize> = ball.members.iter().collect();
    let mass: T = members.iter().map(|&i| space.measure(i)).sum();

    // Jump levels: distinct nonzero values of |u| on the ball. The sup of
    // λ^t·μ{|u| > λ} over λ > 0 is attained as λ approaches a jump level v
    // from below, where the superlevel measure is μ{|u| ≥ v}.
    let mut levels: Vec<T> = members
        .iter()
        .map(|&i| values[i].abs())
        .filter(|v| *v > T::zero())
        .collect();
    levels.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    levels.dedup_by(|a, b| a == b);
    let mut c0 = T::zero();
    for &v in &levels {
        let tail: T = members
            .iter()
            .filter(|&&i| values[i].abs() >= v)
            .map(|&i| space.measure(i))
            .sum();
        let cand = v.powf(t) * tail;
        if cand > c0 {
            c0 = cand;
        }
    }

    let lhs = {
        let integral: T = members
            .iter()
            .map(|&i| space.measure(i) * values[i].abs().powf(q))
            .sum();
        (integral / mass).powf(T::one() / q)
    };
    let rhs = if c0 == T::zero() {
        T::zero()
    } else {
        lit::<T>(2.0).powf(T::one() / q)
            * (c0 * q / (t - q)).powf(T::one() / t)
            * mass.powf(-T::one() / t)
    };
    Ok(KolmogorovReport {
        c0,
        lhs,
        rhs,
        holds: lhs <= rhs + metric_tol::<T>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceKind;
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
    fn sharp_maximal_on_two_points() {
        let space = two_point();
        let family = BallFamily::global(&space);
        let profile = sharp_maximal(&space, &[0.0, 1.0], 2.0, 1.0, &family).unwrap();
        // The single pair ball has mean 1/2, oscillation (1/4)^(1/2) = 1/2,
        // diameter 1.
        assert_abs_diff_eq!(profile.values[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(profile.values[1], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn sharp_maximal_on_a_path() {
        let space = path(3);
        let family = BallFamily::global(&space);
        let profile =
            sharp_maximal(&space, &[0.0, 1.0, 2.0], 2.0, 1.0, &family).unwrap();
        // Two-point balls dominate: oscillation 1/2 beats the full ball's
        // sqrt(1/6) ≈ 0.408.
        for v in &profile.values {
            assert_abs_diff_eq!(*v, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn constants_have_zero_profile() {
        let space = path(4);
        let family = BallFamily::global(&space);
        let profile = sharp_maximal(&space, &[3.0; 4], 1.5, 0.5, &family).unwrap();
        assert!(profile.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn scaling_is_homogeneous() {
        let space = path(5);
        let family = BallFamily::global(&space);
        let u = [0.0, 0.7, -0.3, 1.9, 0.4];
        let scaled: Vec<f64> = u.iter().map(|v| -2.5 * v).collect();
        let base = sharp_maximal(&space, &u, 2.0, 0.5, &family).unwrap();
        let big = sharp_maximal(&space, &scaled, 2.0, 0.5, &family).unwrap();
        for i in 0..5 {
            assert_abs_diff_eq!(big.values[i], 2.5 * base.values[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn localized_family_membership() {
        // Base covering everything admits every canonical ball whose double
        // also stays inside — with the base equal to the whole point set
        // that is every canonical ball.
        let space = path(5);
        let base = space.ball(2, 2.5); // all five points
        let family = localized_family(&space, &base);
        assert_eq!(family.len(), space.all_canonical_balls().len());
        assert!(family
            .balls
            .iter()
            .any(|b| b.center == 2 && (b.radius - 1.5).abs() < 1e-12));
        assert!(family
            .balls
            .iter()
            .any(|b| b.center == 0 && (b.radius - 1.5).abs() < 1e-12));

        // A proper base: only balls whose doubles stay inside {x1,x2,x3}.
        let base = space.ball(2, 1.5);
        let family = localized_family(&space, &base);
        for b in &family.balls {
            let double = space.ball(b.center, 2.0 * b.radius);
            assert!(double.members.is_subset(&base.members));
        }
        // Singleton balls at x2 qualify: 2·0.5 = 1 ≤ dist(x2, outside) = 1.
        assert!(family.balls.iter().any(|b| b.center == 2));
    }

    #[test]
    fn localized_family_of_a_singleton_base() {
        let space = path(5);
        let base = space.ball(0, 0.5); // just {x0}
        let family = localized_family(&space, &base);
        // Only the singleton canonical ball at x0 has members(2B) = {x0}.
        assert_eq!(family.len(), 1);
        assert_eq!(family.balls[0].center, 0);
    }

    #[test]
    fn level_sets_select_strictly() {
        let profile = MaximalProfile {
            values: vec![0.1, 0.5, 0.5, 0.9],
            p: 2.0,
            beta: 1.0,
        };
        let base = PointSet::full(4);
        let set = level_set(&profile, 0.5, &base);
        assert_eq!(set.members.iter().collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn kolmogorov_example() {
        let space = path(3);
        let ball = space.ball(1, 100.0);
        let report =
            kolmogorov_check(&space, &ball, &[0.0, 1.0, 2.0], 1.0, 2.0).unwrap();
        assert_abs_diff_eq!(report.c0, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.lhs, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.rhs, 4.0 / 3.0f64.sqrt(), epsilon = 1e-12);
        assert!(report.holds);
    }

    #[test]
    fn kolmogorov_zero_function_and_scaling() {
        let space = path(3);
        let ball = space.ball(1, 100.0);
        let report =
            kolmogorov_check(&space, &ball, &[0.0, 0.0, 0.0], 1.0, 2.0).unwrap();
        assert_eq!(report.c0, 0.0);
        assert!(report.holds);

        let base =
            kolmogorov_check(&space, &ball, &[0.0, 1.0, 2.0], 1.0, 2.0).unwrap();
        let scaled =
            kolmogorov_check(&space, &ball, &[0.0, 2.0, 4.0], 1.0, 2.0).unwrap();
        assert_abs_diff_eq!(scaled.c0, 4.0 * base.c0, epsilon = 1e-12);
        assert_abs_diff_eq!(scaled.lhs, 2.0 * base.lhs, epsilon = 1e-12);
        assert_abs_diff_eq!(scaled.rhs, 2.0 * base.rhs, epsilon = 1e-12);
    }

    #[test]
    fn kolmogorov_rejects_bad_exponents() {
        let space = path(3);
        let ball = space.ball(1, 100.0);
        assert!(matches!(
            kolmogorov_check(&space, &ball, &[0.0, 1.0, 2.0], 2.0, 2.0),
            Err(MaximalError::ExponentOrder { .. })
        ));
    }
}
