//! Cross-checks the production minimal-gradient solvers against the
//! independent brute-force references in `testkit`: exact vertex
//! enumeration for linear objectives, duality-certified brackets for
//! strictly convex ones.

use approx::assert_relative_eq;
use sharpmax::gradients::{minimal_hajlasz_gradient, minimal_upper_gradient};
use sharpmax::samples::holder_sample;
use sharpmax::space::{MetricMeasureSpace, SpaceKind};
use testkit::{hajlasz_oracle, upper_oracle};

#[test]
fn two_point_closed_form_agrees_three_ways() {
    let space = MetricMeasureSpace::from_matrix(
        vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        vec![1.0, 1.0],
    )
    .unwrap();
    let u = [0.0, 1.0];
    let min = minimal_hajlasz_gradient(&space, &u, 2.0, 1.0).unwrap();
    assert_relative_eq!(min.gradient.values[0], 0.5, max_relative = 1e-5);
    assert_relative_eq!(min.gradient.values[1], 0.5, max_relative = 1e-5);
    assert_relative_eq!(min.objective, 0.5, max_relative = 1e-5);
    let oracle = hajlasz_oracle(&space, &u, 2.0, 1.0);
    assert!(oracle.gap() <= 1e-7);
    assert_relative_eq!(oracle.upper, 0.5, max_relative = 1e-6);
}

#[test]
fn three_point_path_closed_form_agrees_three_ways() {
    let space = MetricMeasureSpace::generate(SpaceKind::Path { n: 3 }, 1.0).unwrap();
    let u = [0.0, 1.0, 2.0];
    let min = minimal_upper_gradient(&space, &u, 2.0).unwrap();
    for (got, want) in min.gradient.values.iter().zip([2.0 / 3.0, 4.0 / 3.0, 2.0 / 3.0]) {
        assert_relative_eq!(*got, want, max_relative = 1e-5);
    }
    assert_relative_eq!(min.objective, 8.0 / 3.0, max_relative = 1e-5);
    let oracle = upper_oracle(&space, &u, 2.0);
    assert!(oracle.gap() <= 1e-7);
    assert_relative_eq!(oracle.upper, 8.0 / 3.0, max_relative = 1e-6);
}

#[test]
fn pairwise_solver_tracks_the_reference_on_small_spaces() {
    let mut instances = 0usize;
    for (name, space) in testkit::small_spaces() {
        for seed in [1u64, 2, 3] {
            for p in [1.0f64, 1.7, 2.0, 3.0] {
                let u = holder_sample(&space, 1.0, seed);
                let min = minimal_hajlasz_gradient(&space, &u, p, 1.0).unwrap();
                assert!(
                    min.report.feasible,
                    "{name} seed {seed} p {p}: solver output must be feasible"
                );
                let oracle = hajlasz_oracle(&space, &u, p, 1.0);
                assert!(
                    oracle.gap() <= 1e-7,
                    "{name} seed {seed} p {p}: reference bracket too wide ({})",
                    oracle.gap()
                );
                let slack = 1e-5 * (1.0 + oracle.upper);
                assert!(
                    min.objective <= oracle.upper + slack,
                    "{name} seed {seed} p {p}: solver {} above reference {}",
                    min.objective,
                    oracle.upper
                );
                assert!(
                    min.objective >= oracle.lower - slack,
                    "{name} seed {seed} p {p}: solver {} below the certified bound {}",
                    min.objective,
                    oracle.lower
                );
                instances += 1;
            }
        }
    }
    assert!(instances >= 50, "only {instances} pairwise instances ran");
}

#[test]
fn pairwise_solver_tracks_the_reference_at_low_smoothness() {
    for (name, space) in testkit::small_spaces().into_iter().take(5) {
        for seed in [4u64, 5] {
            let u = holder_sample(&space, 0.5, seed);
            let min = minimal_hajlasz_gradient(&space, &u, 2.0, 0.5).unwrap();
            let oracle = hajlasz_oracle(&space, &u, 2.0, 0.5);
            assert!(oracle.gap() <= 1e-7, "{name}: bracket {}", oracle.gap());
            let slack = 1e-5 * (1.0 + oracle.upper);
            assert!(
                min.objective <= oracle.upper + slack && min.objective >= oracle.lower - slack,
                "{name} seed {seed}: solver {} outside [{}, {}]",
                min.objective,
                oracle.lower,
                oracle.upper
            );
        }
    }
}

#[test]
fn path_solver_tracks_the_reference_on_small_graphs() {
    let mut instances = 0usize;
    for (name, space) in testkit::small_graph_spaces() {
        for seed in [1u64, 2, 3] {
            for p in [1.5f64, 2.0, 3.0] {
                let u = holder_sample(&space, 1.0, seed);
                let min = minimal_upper_gradient(&space, &u, p).unwrap();
                assert!(
                    min.report.feasible,
                    "{name} seed {seed} p {p}: solver output must be feasible"
                );
                let oracle = upper_oracle(&space, &u, p);
                assert!(
                    oracle.gap() <= 1e-7,
                    "{name} seed {seed} p {p}: reference bracket too wide ({})",
                    oracle.gap()
                );
                let slack = 1e-5 * (1.0 + oracle.upper);
                assert!(
                    min.objective <= oracle.upper + slack,
                    "{name} seed {seed} p {p}: solver {} above reference {}",
                    min.objective,
                    oracle.upper
                );
                assert!(
                    min.objective >= oracle.lower - slack,
                    "{name} seed {seed} p {p}: solver {} below the certified bound {}",
                    min.objective,
                    oracle.lower
                );
                instances += 1;
            }
        }
    }
    assert!(instances >= 50, "only {instances} path instances ran");
}
