//! Deterministic sample functions for exercising the machinery: seeded
//! minima of random distance cones, which are β-Hölder by construction
//! with constant at most the largest cone slope.

use crate::scalar::{lit, Scalar};
use crate::space::MetricMeasureSpace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// A β-Hölder function sampled deterministically from `seed`: the
/// pointwise minimum of a handful of cones `c_a + s_a · d(x, x_a)^β`
/// anchored at random points with random offsets and slopes. A minimum of
/// κ-Hölder functions is κ-Hölder, so the result has Hölder constant at
/// most the largest slope (at most 1).
pub fn holder_sample<T: Scalar>(
    space: &MetricMeasureSpace<T>,
    beta: T,
    seed: u64,
) -> Vec<T> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let count = rng.gen_range(3..=6).min(space.n());
    let anchors = rand::seq::index::sample(&mut rng, space.n(), count);
    let cones: Vec<(usize, T, T)> = anchors
        .into_iter()
        .map(|a| {
            let offset = lit::<T>(rng.gen_range(-1.0..1.0));
            let slope = lit::<T>(rng.gen_range(0.2..1.0));
            (a, offset, slope)
        })
        .collect();
    (0..space.n())
        .map(|i| {
            cones
                .iter()
                .map(|&(a, offset, slope)| offset + slope * space.dist(i, a).powf(beta))
                .fold(T::infinity(), T::min)
        })
        .collect()
}
