//! β-Hölder functions: minimal constants and McShane-type extensions.

use crate::scalar::{metric_tol, Scalar};
use crate::set::PointSet;
use crate::space::MetricMeasureSpace;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HolderError {
    #[error("beta must lie in (0, 1], got {0}")]
    BetaOutOfRange(f64),
    #[error("boundary values are not {kappa}-Hölder on the subset (pair {i}, {j})")]
    BoundaryNotHolder { kappa: f64, i: usize, j: usize },
    #[error("values length {got} does not match point count {want}")]
    LengthMismatch { got: usize, want: usize },
}

/// A function on the points of a space together with a Hölder exponent β
/// and a constant κ for which |u(x) − u(y)| ≤ κ·d(x,y)^β holds.
#[derive(Clone, Debug)]
pub struct HolderFunction<T> {
    pub values: Vec<T>,
    pub beta: T,
    pub kappa: T,
}

fn check_beta<T: Scalar>(beta: T) -> Result<(), HolderError> {
    if beta > T::zero() && beta <= T::one() {
        Ok(())
    } else {
        Err(HolderError::BetaOutOfRange(beta.to_f64().unwrap_or(f64::NAN)))
    }
}

/// Minimal β-Hölder constant of `values` on the space: the max of
/// |u(x) − u(y)| / d(x,y)^β over pairs. Zero for constants.
pub fn holder_constant<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    values: &[T],
    beta: T,
) -> Result<T, HolderError> {
    check_beta(beta)?;
    if values.len() != space.n() {
        return Err(HolderError::LengthMismatch {
            got: values.len(),
            want: space.n(),
        });
    }
    let mut kappa = T::zero();
    for i in 0..space.n() {
        for j in (i + 1)..space.n() {
            let ratio = (values[i] - values[j]).abs() / space.dist(i, j).powf(beta);
            if ratio > kappa {
                kappa = ratio;
            }
        }
    }
    Ok(kappa)
}

impl<T: Scalar> HolderFunction<T> {
    /// Wraps values with their minimal Hölder constant.
    pub fn new(
        space: &MetricMeasureSpace<T>,
        values: Vec<T>,
        beta: T,
    ) -> Result<Self, HolderError> {
        let kappa = holder_constant(space, &values, beta)?;
        Ok(HolderFunction {
            values,
            beta,
            kappa,
        })
    }

    /// Wraps values with a caller-supplied constant, validating that the
    /// constant really works (to the metric slack).
    pub fn with_constant(
        space: &MetricMeasureSpace<T>,
        values: Vec<T>,
        beta: T,
        kappa: T,
    ) -> Result<Self, HolderError> {
        let minimal = holder_constant(space, &values, beta)?;
        if minimal > kappa + metric_tol::<T>() {
            return Err(HolderError::BoundaryNotHolder {
                kappa: kappa.to_f64().unwrap_or(f64::NAN),
                i: 0,
                j: 0,
            });
        }
        Ok(HolderFunction {
            values,
            beta,
            kappa,
        })
    }
}

/// McShane extension: given κ-β-Hölder boundary values on a subset A,
/// produces `v(x) = min over y ∈ A of (u(y) + κ·d(x,y)^β)`, which is
/// κ-β-Hölder on the whole space and restricts to the boundary values
/// exactly.
///
/// `boundary` maps subset members (in increasing point order) to values.
pub fn mcshane_extend<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    subset: &PointSet,
    boundary: &[T],
    kappa: T,
    beta: T,
) -> Result<HolderFunction<T>, HolderError> {
    check_beta(beta)?;
    let members: Vec<usize> = subset.iter().collect();
    if members.len() != boundary.len() {
        return Err(HolderError::LengthMismatch {
            got: boundary.len(),
            want: members.len(),
        });
    }
    if members.is_empty() {
        return Err(HolderError::LengthMismatch { got: 0, want: 0 });
    }
    let tol = metric_tol::<T>();
    for (a, &i) in members.iter().enumerate() {
        for (b, &j) in members.iter().enumerate().skip(a + 1) {
            if (boundary[a] - boundary[b]).abs() > kappa * space.dist(i, j).powf(beta) + tol {
                return Err(HolderError::BoundaryNotHolder {
                    kappa: kappa.to_f64().unwrap_or(f64::NAN),
                    i,
                    j,
                });
            }
        }
    }
    let mut values = vec![T::zero(); space.n()];
    for x in 0..space.n() {
        if let Some(pos) = members.iter().position(|&m| m == x) {
            // Restriction identity is exact by construction: the x-term of
            // the infimum equals u(x) and every other term dominates it.
            values[x] = boundary[pos];
            continue;
        }
        let mut best = T::infinity();
        for (a, &y) in members.iter().enumerate() {
            let cand = boundary[a] + kappa * space.dist(x, y).powf(beta);
            if cand < best {
                best = cand;
            }
        }
        values[x] = best;
    }
    Ok(HolderFunction {
        values,
        beta,
        kappa,
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

    #[test]
    fn minimal_constant_on_a_path() {
        let space = path(3);
        // β = 0.5: the far pair dominates with 2 / 2^0.5 = √2.
        let kappa = holder_constant(&space, &[0.0, 1.0, 2.0], 0.5).unwrap();
        assert_abs_diff_eq!(kappa, 2.0f64.sqrt(), epsilon = 1e-12);
        // Constants have zero Hölder constant for any β.
        let kappa = holder_constant(&space, &[4.0, 4.0, 4.0], 1.0).unwrap();
        assert_abs_diff_eq!(kappa, 0.0);
    }

    #[test]
    fn beta_out_of_range() {
        let space = path(3);
        assert!(matches!(
            holder_constant(&space, &[0.0, 1.0, 2.0], 0.0),
            Err(HolderError::BetaOutOfRange(_))
        ));
        assert!(matches!(
            holder_constant(&space, &[0.0, 1.0, 2.0], 1.5),
            Err(HolderError::BetaOutOfRange(_))
        ));
    }

    #[test]
    fn mcshane_fills_a_gap() {
        let space = path(3);
        let mut subset = PointSet::empty(3);
        subset.insert(0);
        subset.insert(2);
        let v = mcshane_extend(&space, &subset, &[0.0, 0.0], 1.0, 1.0).unwrap();
        assert_eq!(v.values, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn mcshane_restriction_is_exact_and_constant_preserved() {
        let space = path(5);
        let mut subset = PointSet::empty(5);
        for i in [0usize, 2, 4] {
            subset.insert(i);
        }
        let boundary = [0.3, -0.2, 1.1];
        let kappa = 1.25;
        let v = mcshane_extend(&space, &subset, &boundary, kappa, 1.0).unwrap();
        assert_eq!(v.values[0], 0.3);
        assert_eq!(v.values[2], -0.2);
        assert_eq!(v.values[4], 1.1);
        let minimal = holder_constant(&space, &v.values, 1.0).unwrap();
        assert!(minimal <= kappa + 1e-9);
        // Idempotence: extending from the full set returns the values.
        let full = PointSet::full(5);
        let again = mcshane_extend(&space, &full, &v.values, kappa, 1.0).unwrap();
        assert_eq!(again.values, v.values);
    }

    #[test]
    fn mcshane_rejects_bad_boundary() {
        let space = path(3);
        let mut subset = PointSet::empty(3);
        subset.insert(0);
        subset.insert(2);
        // Slope 5 over distance 2 cannot be 1-Hölder with κ = 1.
        assert!(matches!(
            mcshane_extend(&space, &subset, &[0.0, 10.0], 1.0, 1.0),
            Err(HolderError::BoundaryNotHolder { .. })
        ));
    }
}
