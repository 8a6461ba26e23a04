//! Sobolev-style norms built from minimal gradients and from the sharp
//! maximal profile, and the report comparing the two across sample
//! functions.

use crate::gradients::{eta_for_maximal, minimal_gradient, DStructureKind, GradientError};
use crate::maximal::sharp_maximal;
use crate::scalar::Scalar;
use crate::space::{BallFamily, MetricMeasureSpace};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SobolevError {
    #[error("exponent must satisfy p >= 1, got {0}")]
    InvalidExponent(f64),
    #[error("beta must lie in (0, 1], got {0}")]
    BetaOutOfRange(f64),
    #[error("values length {got} does not match point count {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error(transparent)]
    Gradient(#[from] GradientError),
}

fn validate<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    values: &[T],
    p: T,
) -> Result<(), SobolevError> {
    if p < T::one() {
        return Err(SobolevError::InvalidExponent(p.to_f64().unwrap_or(f64::NAN)));
    }
    if values.len() != space.n() {
        return Err(SobolevError::LengthMismatch {
            got: values.len(),
            want: space.n(),
        });
    }
    Ok(())
}

/// (∫ |v|^p dμ)^(1/p) over the whole space.
fn lp_norm<T: Scalar>(space: &MetricMeasureSpace<T>, values: &[T], p: T) -> T {
    let mut sum = T::zero();
    for i in 0..space.n() {
        sum = sum + space.measure(i) * values[i].abs().powf(p);
    }
    sum.powf(T::one() / p)
}

fn combine<T: Scalar>(a: T, b: T, p: T) -> T {
    (a.powf(p) + b.powf(p)).powf(T::one() / p)
}

/// `(‖u‖_p^p + ‖g‖_p^p)^{1/p}` with g the minimal gradient of the kind.
pub fn sobolev_norm<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    values: &[T],
    p: T,
    kind: DStructureKind<T>,
) -> Result<T, SobolevError> {
    validate(space, values, p)?;
    let minimal = minimal_gradient(space, values, p, kind)?;
    Ok(combine(
        lp_norm(space, values, p),
        lp_norm(space, &minimal.gradient.values, p),
        p,
    ))
}

/// `(‖u‖_p^p + ‖M♯u‖_p^p)^{1/p}` with the sharp maximal profile taken
/// over the global canonical family.
pub fn sharp_norm<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    values: &[T],
    p: T,
    beta: T,
) -> Result<T, SobolevError> {
    validate(space, values, p)?;
    if !(beta > T::zero() && beta <= T::one()) {
        return Err(SobolevError::BetaOutOfRange(
            beta.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let family = BallFamily::global(space);
    let profile = sharp_maximal(space, values, p, beta, &family)
        .map_err(|_| SobolevError::BetaOutOfRange(beta.to_f64().unwrap_or(f64::NAN)))?;
    Ok(combine(
        lp_norm(space, values, p),
        lp_norm(space, &profile.values, p),
        p,
    ))
}

/// Norm comparison for one function: the plain p-norm, the minimal
/// gradient norm, the two combined norms, the maximal-control factor η,
/// and the sharp/Sobolev ratio (1 by convention when both vanish).
#[derive(Clone, Copy, Debug)]
pub struct NormReport<T> {
    pub lp_norm: T,
    pub grad_norm: T,
    pub sobolev_norm: T,
    pub sharp_norm: T,
    pub eta: T,
    pub ratio: T,
}

/// Per-sample norm comparisons plus the spread of the ratios.
#[derive(Clone, Debug)]
pub struct NormEquivalenceReport<T> {
    pub rows: Vec<NormReport<T>>,
    pub min_ratio: T,
    pub max_ratio: T,
    /// max_ratio / min_ratio (1 when there are no rows).
    pub spread: T,
}

/// Builds the norm comparison for one function.
pub fn norm_report<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    values: &[T],
    p: T,
    beta: T,
    kind: DStructureKind<T>,
) -> Result<NormReport<T>, SobolevError> {
    validate(space, values, p)?;
    if !(beta > T::zero() && beta <= T::one()) {
        return Err(SobolevError::BetaOutOfRange(
            beta.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let lp = lp_norm(space, values, p);
    let minimal = minimal_gradient(space, values, p, kind)?;
    let grad = lp_norm(space, &minimal.gradient.values, p);
    let family = BallFamily::global(space);
    let profile = sharp_maximal(space, values, p, beta, &family)
        .map_err(|_| SobolevError::BetaOutOfRange(beta.to_f64().unwrap_or(f64::NAN)))?;
    let sharp_part = lp_norm(space, &profile.values, p);
    let sobolev = combine(lp, grad, p);
    let sharp = combine(lp, sharp_part, p);
    let eta = eta_for_maximal(space, values, p, beta, kind)?;
    let ratio = if sobolev > T::zero() {
        sharp / sobolev
    } else {
        T::one()
    };
    Ok(NormReport {
        lp_norm: lp,
        grad_norm: grad,
        sobolev_norm: sobolev,
        sharp_norm: sharp,
        eta,
        ratio,
    })
}

/// Norm comparisons for a batch of sample functions with the min/max
/// ratio spread across the batch.
pub fn norm_equivalence_report<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    samples: &[Vec<T>],
    p: T,
    beta: T,
    kind: DStructureKind<T>,
) -> Result<NormEquivalenceReport<T>, SobolevError> {
    let mut rows = Vec::with_capacity(samples.len());
    for sample in samples {
        rows.push(norm_report(space, sample, p, beta, kind)?);
    }
    let mut min_ratio = T::infinity();
    let mut max_ratio = T::zero();
    for row in &rows {
        if row.ratio < min_ratio {
            min_ratio = row.ratio;
        }
        if row.ratio > max_ratio {
            max_ratio = row.ratio;
        }
    }
    let spread = if rows.is_empty() {
        min_ratio = T::one();
        max_ratio = T::one();
        T::one()
    } else {
        max_ratio / min_ratio
    };
    Ok(NormEquivalenceReport {
        rows,
        min_ratio,
        max_ratio,
        spread,
    })
}
