//! Analysis toolkit for finite metric measure spaces: canonical ball
//! families, sharp maximal functions, covering and chaining machinery
//! (5r covers, Whitney decompositions, stopping families, ball chains),
//! pairwise and path-integral gradient relations with minimal-gradient
//! solvers, Poincaré-type inequality constants with self-improvement and
//! localized audits, and Sobolev-style norm comparisons.
//!
//! Everything is generic over the scalar type through [`scalar::Scalar`]
//! (implemented for `f32` and `f64`); the `*64` aliases at the crate root
//! fix the common double-precision choices.
//!
//! Spaces are built from an explicit distance matrix
//! ([`space::MetricMeasureSpace::from_matrix`]), from weighted graph
//! edges with shortest-path closure
//! ([`space::MetricMeasureSpace::from_graph`]), or from the built-in
//! generators ([`space::MetricMeasureSpace::generate`]). All balls are
//! open, all averages are weighted by the point measures, and every
//! derived quantity is computed exactly from finite sums unless its
//! documentation says otherwise.

pub mod covering;
pub mod gradients;
pub mod graph;
pub mod holder;
pub mod maximal;
pub mod poincare;
pub mod samples;
pub mod scalar;
pub mod set;
pub mod sobolev;
pub mod space;

pub(crate) mod solver;

pub use scalar::Scalar;

/// Double-precision metric measure space.
pub type Space64 = space::MetricMeasureSpace<f64>;
/// Double-precision open ball.
pub type Ball64 = space::Ball<f64>;
/// Double-precision ball family.
pub type BallFamily64 = space::BallFamily<f64>;
/// Double-precision Hölder function.
pub type HolderFunction64 = holder::HolderFunction<f64>;
/// Double-precision sharp maximal profile.
pub type MaximalProfile64 = maximal::MaximalProfile<f64>;
/// Double-precision Whitney cover.
pub type WhitneyCover64 = covering::WhitneyCover<f64>;
/// Double-precision ball chain.
pub type Chain64 = covering::Chain<f64>;
/// Double-precision gradient candidate.
pub type GradientCandidate64 = gradients::GradientCandidate<f64>;
/// Double-precision gradient relation kind.
pub type DStructureKind64 = gradients::DStructureKind<f64>;
/// Double-precision minimal-gradient solve result.
pub type MinimalGradient64 = gradients::MinimalGradient<f64>;
/// Double-precision inequality exponents.
pub type PIParams64 = poincare::PIParams<f64>;
/// Double-precision norm comparison row.
pub type NormReport64 = sobolev::NormReport<f64>;
