//! Poincaré-type inequality constants on finite metric measure spaces:
//! measured (q,p) constants over ball families, the exponent
//! self-improvement table, the localized sharp-maximal inequality audit,
//! and the below-p exponent sweep.

use crate::gradients::{feasibility, minimal_gradient, DStructureKind, GradientCandidate};
use crate::maximal::{localized_family, sharp_maximal};
use crate::scalar::{lit, Scalar};
use crate::space::{Ball, BallFamily, MetricMeasureSpace};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PoincareError {
    #[error("exponent must satisfy {name} >= 1, got {value}")]
    InvalidExponent { name: &'static str, value: f64 },
    #[error("exponent must satisfy p > 1 here, got {0}")]
    ExponentNotAboveOne(f64),
    #[error("beta must lie in (0, 1], got {0}")]
    BetaOutOfRange(f64),
    #[error("dilation must be at least 1, got {0}")]
    InvalidDilation(f64),
    #[error("values length {got} does not match point count {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("smoothness-exponent product beta*p = {beta_p} must stay below the dimension exponent {q_exponent}")]
    ExponentGap { beta_p: f64, q_exponent: f64 },
    #[error("epsilon must lie in [0, p-1) = [0, {limit}), got {epsilon}")]
    EpsilonOutOfRange { epsilon: f64, limit: f64 },
    #[error("iteration count k must be at least 1")]
    InvalidIterationCount,
    #[error("the supplied gradient is not feasible for the function (worst violation {0})")]
    InfeasibleGradient(f64),
}

/// Exponents of a (q,p) inequality: oscillation exponent q, gradient
/// exponent p, smoothness β, and the dilation τ applied to the ball on
/// the gradient side.
#[derive(Clone, Copy, Debug)]
pub struct PIParams<T> {
    pub q: T,
    pub p: T,
    pub beta: T,
    pub tau: T,
}

impl<T: Scalar> PIParams<T> {
    fn validate(&self) -> Result<(), PoincareError> {
        if self.q < T::one() {
            return Err(PoincareError::InvalidExponent {
                name: "q",
                value: self.q.to_f64().unwrap_or(f64::NAN),
            });
        }
        if self.p < T::one() {
            return Err(PoincareError::InvalidExponent {
                name: "p",
                value: self.p.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !(self.beta > T::zero() && self.beta <= T::one()) {
            return Err(PoincareError::BetaOutOfRange(
                self.beta.to_f64().unwrap_or(f64::NAN),
            ));
        }
        if self.tau < T::one() {
            return Err(PoincareError::InvalidDilation(
                self.tau.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(())
    }
}

fn validate_values<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    values: &[T],
) -> Result<(), PoincareError> {
    if values.len() != space.n() {
        return Err(PoincareError::LengthMismatch {
            got: values.len(),
            want: space.n(),
        });
    }
    Ok(())
}

/// Measure-weighted mean of `values` over the members of a ball.
fn ball_mean<T: Scalar>(space: &MetricMeasureSpace<T>, ball: &Ball<T>, values: &[T]) -> T {
    let mut mass = T::zero();
    let mut sum = T::zero();
    for i in ball.members.iter() {
        mass = mass + space.measure(i);
        sum = sum + space.measure(i) * values[i];
    }
    sum / mass
}

/// (⨍_B |u − u_B|^q dμ)^(1/q).
fn oscillation_mean<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    ball: &Ball<T>,
    values: &[T],
    q: T,
) -> T {
    let mean = ball_mean(space, ball, values);
    let mut mass = T::zero();
    let mut sum = T::zero();
    for i in ball.members.iter() {
        mass = mass + space.measure(i);
        sum = sum + space.measure(i) * (values[i] - mean).abs().powf(q);
    }
    (sum / mass).powf(T::one() / q)
}

/// (⨍_B g^p dμ)^(1/p) for a nonnegative integrand.
fn power_mean<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    ball: &Ball<T>,
    values: &[T],
    p: T,
) -> T {
    let mut mass = T::zero();
    let mut sum = T::zero();
    for i in ball.members.iter() {
        mass = mass + space.measure(i);
        sum = sum + space.measure(i) * values[i].powf(p);
    }
    (sum / mass).powf(T::one() / p)
}

#[cfg(debug_assertions)]
fn debug_check_feasible<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    values: &[T],
    gradient: &GradientCandidate<T>,
) -> Result<(), PoincareError> {
    let report = feasibility(space, values, gradient)
        .map_err(|_| PoincareError::InfeasibleGradient(f64::NAN))?;
    if !report.feasible {
        return Err(PoincareError::InfeasibleGradient(
            report.worst_violation.to_f64().unwrap_or(f64::NAN),
        ));
    }
    Ok(())
}

#[cfg(not(debug_assertions))]
fn debug_check_feasible<T: Scalar>(
    _space: &MetricMeasureSpace<T>,
    _values: &[T],
    _gradient: &GradientCandidate<T>,
) -> Result<(), PoincareError> {
    Ok(())
}

/// Measured (q,p) constant over a ball family:
/// `K = max over balls B of [ (⨍_B|u−u_B|^q)^{1/q} /
/// (set_diam(B)^β (⨍_{τB} g^p)^{1/p}) ]^p`,
/// skipping balls of zero member diameter and balls where both sides
/// vanish. Returns +∞ when some ball has positive oscillation but a zero
/// gradient average (cannot happen for feasible pairwise gradients).
/// Feasibility of `gradient` for `values` is the caller's duty, checked
/// in debug builds.
pub fn poincare_constant<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    values: &[T],
    gradient: &GradientCandidate<T>,
    params: &PIParams<T>,
    family: &BallFamily<T>,
) -> Result<T, PoincareError> {
    params.validate()?;
    validate_values(space, values)?;
    validate_values(space, &gradient.values)?;
    debug_check_feasible(space, values, gradient)?;

    let mut constant = T::zero();
    for ball in &family.balls {
        if ball.set_diam <= T::zero() {
            continue;
        }
        let lhs = oscillation_mean(space, ball, values, params.q);
        let dilated = space.ball(ball.center, params.tau * ball.radius);
        let grad_avg = power_mean(space, &dilated, &gradient.values, params.p);
        let rhs = ball.set_diam.powf(params.beta) * grad_avg;
        if rhs > T::zero() {
            let ratio = (lhs / rhs).powf(params.p);
            if ratio > constant {
                constant = ratio;
            }
        } else if lhs > T::zero() {
            return Ok(T::infinity());
        }
    }
    Ok(constant)
}

/// One row of the self-improvement table: the measured constant at
/// oscillation exponent q, and its p-th-root ratio against the q = 1 row.
#[derive(Clone, Copy, Debug)]
pub struct SelfImprovementRow<T> {
    pub q: T,
    pub constant: T,
    /// constant^(1/p) / K_1p^(1/p); zero when both vanish.
    pub ratio: T,
}

/// Measured constants for oscillation exponents climbing toward the
/// dimension-limited maximum q_max = Qp/(Q − βp).
#[derive(Clone, Debug)]
pub struct SelfImprovementReport<T> {
    /// The (1,p) constant at the caller's dilation.
    pub k_1p: T,
    /// Dimension exponent used (supplied or defaulted).
    pub q_exponent: T,
    pub q_max: T,
    pub rows: Vec<SelfImprovementRow<T>>,
}

/// Sweeps the oscillation exponent q over {1, (1+q_max)/2, 0.95·q_max}
/// with q_max = Qp/(Q − βp), measuring each constant over the global
/// canonical family with the dilation collapsed to 1 on the gradient
/// side. Q defaults to max(s, βp) + 1, which keeps q_max finite; a
/// user-supplied Q must satisfy βp < Q.
pub fn self_improvement_report<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    values: &[T],
    gradient: &GradientCandidate<T>,
    p: T,
    beta: T,
    tau: T,
    q_exponent: Option<T>,
) -> Result<SelfImprovementReport<T>, PoincareError> {
    let beta_p = beta * p;
    let q_exp = match q_exponent {
        Some(q) => {
            if beta_p >= q {
                return Err(PoincareError::ExponentGap {
                    beta_p: beta_p.to_f64().unwrap_or(f64::NAN),
                    q_exponent: q.to_f64().unwrap_or(f64::NAN),
                });
            }
            q
        }
        None => space.stats().s.max(beta_p) + T::one(),
    };
    let family = BallFamily::global(space);
    let k_1p = poincare_constant(
        space,
        values,
        gradient,
        &PIParams {
            q: T::one(),
            p,
            beta,
            tau,
        },
        &family,
    )?;
    let q_max = q_exp * p / (q_exp - beta_p);
    let sweep = [
        T::one(),
        (T::one() + q_max) / lit::<T>(2.0),
        lit::<T>(0.95) * q_max,
    ];
    let mut rows = Vec::with_capacity(sweep.len());
    for q in sweep {
        let constant = poincare_constant(
            space,
            values,
            gradient,
            &PIParams {
                q,
                p,
                beta,
                tau: T::one(),
            },
            &family,
        )?;
        let ratio = if k_1p > T::zero() {
            (constant / k_1p).powf(T::one() / p)
        } else if constant > T::zero() {
            T::infinity()
        } else {
            T::zero()
        };
        rows.push(SelfImprovementRow { q, constant, ratio });
    }
    Ok(SelfImprovementReport {
        k_1p,
        q_exponent: q_exp,
        q_max,
        rows,
    })
}

/// Derived parameters of the localized maximal-function audit.
#[derive(Clone, Copy, Debug)]
pub struct AuditParams<T> {
    pub k: usize,
    pub epsilon: T,
    /// βp² / (2(s + βp)), positive whenever β, p are.
    pub alpha: T,
    /// Doubling exponent log₂ of the measured doubling constant.
    pub s: T,
}

/// Integrals and implied constants of the localized inequality
/// `lhs ≤ C₁·(absorb·lhs + C(k,ε)·K_pp·term_gradient)` where
/// absorb = 2^{k(ε−α)} + K_pp·4^{kε}/k^{p−1} and
/// C(k,ε) = (4^{kε}−1)/ε for ε > 0, C(k,0) = k.
#[derive(Clone, Debug)]
pub struct AuditReport<T> {
    pub params: AuditParams<T>,
    /// The (p,p) constant used: supplied, or measured for this
    /// function–gradient pair over the global family at dilation 1.
    pub kpp: T,
    /// C(k,ε).
    pub c_keps: T,
    /// ∫_{B₀} (M♯u)^{p−ε} dμ over the localized profile.
    pub lhs: T,
    /// 2^{k(ε−α)} + K_pp·4^{kε}/k^{p−1}.
    pub term_absorb: T,
    /// ∫_{B₀ ∖ {M♯u = 0}} g^p (M♯u)^{−ε} dμ (zero contribution where the
    /// profile vanishes).
    pub term_gradient: T,
    /// Smallest C₁ ≥ 0 closing the inequality with these quantities.
    pub implied_c1: T,
    /// lhs / term_gradient when the latter is positive; 0 when lhs is 0;
    /// +∞ otherwise.
    pub implied_c: T,
    /// True when no canonical ball fits doubled inside the base ball, so
    /// the localized profile is identically zero (reported, not an
    /// error).
    pub family_empty: bool,
}

/// Audits the localized sharp-maximal inequality on a base ball:
/// integrates the localized profile and the weighted gradient term
/// exactly and reports the implied constants. Homogeneous under
/// u → a·u (both integrals scale by |a|^{p−ε}; implied constants are
/// unchanged).
#[allow(clippy::too_many_arguments)]
pub fn main_inequality_audit<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    b0: &Ball<T>,
    values: &[T],
    gradient: &GradientCandidate<T>,
    p: T,
    beta: T,
    k: usize,
    epsilon: T,
    kpp: Option<T>,
) -> Result<AuditReport<T>, PoincareError> {
    if p <= T::one() {
        return Err(PoincareError::ExponentNotAboveOne(
            p.to_f64().unwrap_or(f64::NAN),
        ));
    }
    if !(beta > T::zero() && beta <= T::one()) {
        return Err(PoincareError::BetaOutOfRange(
            beta.to_f64().unwrap_or(f64::NAN),
        ));
    }
    if k == 0 {
        return Err(PoincareError::InvalidIterationCount);
    }
    if epsilon < T::zero() || epsilon >= p - T::one() {
        return Err(PoincareError::EpsilonOutOfRange {
            epsilon: epsilon.to_f64().unwrap_or(f64::NAN),
            limit: (p - T::one()).to_f64().unwrap_or(f64::NAN),
        });
    }
    validate_values(space, values)?;
    validate_values(space, &gradient.values)?;
    debug_check_feasible(space, values, gradient)?;

    let stats = space.stats();
    let s = stats.s;
    let alpha = beta * p * p / (lit::<T>(2.0) * (s + beta * p));
    let params = AuditParams {
        k,
        epsilon,
        alpha,
        s,
    };

    let kpp = match kpp {
        Some(v) => v,
        None => poincare_constant(
            space,
            values,
            gradient,
            &PIParams {
                q: p,
                p,
                beta,
                tau: T::one(),
            },
            &BallFamily::global(space),
        )?,
    };

    let kf = lit::<T>(k as f64);
    let four = lit::<T>(4.0);
    let two = lit::<T>(2.0);
    let c_keps = if epsilon > T::zero() {
        (four.powf(kf * epsilon) - T::one()) / epsilon
    } else {
        kf
    };
    let term_absorb =
        two.powf(kf * (epsilon - alpha)) + kpp * four.powf(kf * epsilon) / kf.powf(p - T::one());

    let family = localized_family(space, b0);
    let family_empty = family.is_empty();
    let profile = sharp_maximal(space, values, p, beta, &family)
        .map_err(|_| PoincareError::BetaOutOfRange(beta.to_f64().unwrap_or(f64::NAN)))?;

    let mut lhs = T::zero();
    let mut term_gradient = T::zero();
    for i in b0.members.iter() {
        let m = profile.values[i];
        if m > T::zero() {
            lhs = lhs + space.measure(i) * m.powf(p - epsilon);
            term_gradient = term_gradient
                + space.measure(i) * gradient.values[i].powf(p) * m.powf(-epsilon);
        }
    }

    let denom = term_absorb * lhs + c_keps * kpp * term_gradient;
    let implied_c1 = if denom > T::zero() { lhs / denom } else { T::zero() };
    let implied_c = if term_gradient > T::zero() {
        lhs / term_gradient
    } else if lhs > T::zero() {
        T::infinity()
    } else {
        T::zero()
    };

    Ok(AuditReport {
        params,
        kpp,
        c_keps,
        lhs,
        term_absorb,
        term_gradient,
        implied_c1,
        implied_c,
        family_empty,
    })
}

/// One exponent row of the below-p sweep.
#[derive(Clone, Debug)]
pub struct KzRow<T> {
    pub epsilon: T,
    /// Measured constant per sample function.
    pub per_sample: Vec<T>,
    /// Maximum over samples.
    pub max: T,
}

/// Sweep of the reduced-exponent inequality constant over an ε grid.
#[derive(Clone, Debug)]
pub struct KzReport<T> {
    pub rows: Vec<KzRow<T>>,
    /// Per sample: whether the constant is nondecreasing in ε (the
    /// gradient-side mean shrinks as its exponent drops).
    pub monotone: Vec<bool>,
}

/// For each ε in the grid and each sample u, measures
/// `max over balls B of (⨍_B|u−u_B|^p)^{1/p} /
/// (set_diam(B)^β (⨍_{2B} g^{p−ε})^{1/(p−ε)})`
/// with g the minimal gradient of the kind at exponent p, over the global
/// canonical family. The ε = 0 row coincides with the (p,p) constant at
/// dilation 2 (after the p-th root).
pub fn kz_sweep<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    kind: DStructureKind<T>,
    p: T,
    beta: T,
    epsilon_grid: &[T],
    samples: &[Vec<T>],
) -> Result<KzReport<T>, PoincareError> {
    if p <= T::one() {
        return Err(PoincareError::ExponentNotAboveOne(
            p.to_f64().unwrap_or(f64::NAN),
        ));
    }
    if !(beta > T::zero() && beta <= T::one()) {
        return Err(PoincareError::BetaOutOfRange(
            beta.to_f64().unwrap_or(f64::NAN),
        ));
    }
    for epsilon in epsilon_grid {
        if *epsilon < T::zero() || *epsilon >= p - T::one() {
            return Err(PoincareError::EpsilonOutOfRange {
                epsilon: epsilon.to_f64().unwrap_or(f64::NAN),
                limit: (p - T::one()).to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    for sample in samples {
        validate_values(space, sample)?;
    }

    let family = BallFamily::global(space);
    let gradients: Vec<Vec<T>> = samples
        .iter()
        .map(|u| {
            minimal_gradient(space, u, p, kind)
                .map(|min| min.gradient.values)
                .map_err(|_| PoincareError::ExponentNotAboveOne(p.to_f64().unwrap_or(f64::NAN)))
        })
        .collect::<Result<_, _>>()?;

    let two = lit::<T>(2.0);
    let mut rows = Vec::with_capacity(epsilon_grid.len());
    for &epsilon in epsilon_grid {
        let reduced = p - epsilon;
        let mut per_sample = Vec::with_capacity(samples.len());
        for (u, g) in samples.iter().zip(&gradients) {
            let mut constant = T::zero();
            for ball in &family.balls {
                if ball.set_diam <= T::zero() {
                    continue;
                }
                let lhs = oscillation_mean(space, ball, u, p);
                let dilated = space.ball(ball.center, two * ball.radius);
                let rhs =
                    ball.set_diam.powf(beta) * power_mean(space, &dilated, g, reduced);
                if rhs > T::zero() {
                    let ratio = lhs / rhs;
                    if ratio > constant {
                        constant = ratio;
                    }
                } else if lhs > T::zero() {
                    constant = T::infinity();
                }
            }
            per_sample.push(constant);
        }
        let max = per_sample
            .iter()
            .fold(T::zero(), |acc, &v| if v > acc { v } else { acc });
        rows.push(KzRow {
            epsilon,
            per_sample,
            max,
        });
    }

    // Monotonicity in ε, judged in ascending grid order.
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| {
        rows[a]
            .epsilon
            .partial_cmp(&rows[b].epsilon)
            .expect("epsilon values are finite")
    });
    let slack = lit::<T>(1e-12);
    let monotone = (0..samples.len())
        .map(|si| {
            order.windows(2).all(|w| {
                let lo = rows[w[0]].per_sample[si];
                let hi = rows[w[1]].per_sample[si];
                hi >= lo - slack * (T::one() + lo.abs())
            })
        })
        .collect();

    Ok(KzReport { rows, monotone })
}
