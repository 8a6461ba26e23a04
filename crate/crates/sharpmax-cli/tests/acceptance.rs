//! Acceptance gate: one numbered check per shipped guarantee, each
//! printing a single pass/fail line (visible with `--nocapture`).

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};

use sharpmax::covering::{five_r_cover, stopping_family, whitney_cover};
use sharpmax::gradients::{
    check_axioms, minimal_gradient, minimal_hajlasz_gradient, minimal_upper_gradient,
    DStructureKind, GradientCandidate,
};
use sharpmax::holder::{holder_constant, mcshane_extend};
use sharpmax::maximal::kolmogorov_check;
use sharpmax::poincare::{
    kz_sweep, main_inequality_audit, poincare_constant, self_improvement_report, PIParams,
};
use sharpmax::samples::holder_sample;
use sharpmax::set::PointSet;
use sharpmax::sobolev::{norm_equivalence_report, norm_report};
use sharpmax::space::{Ball, BallFamily, MetricMeasureSpace, SpaceKind};
use sharpmax::{Ball64, Space64};

/// Runs one criterion body and prints its pass/fail line. The body
/// returns a short detail string for the PASS line; a panic inside it
/// prints FAIL and is re-raised so the test harness records it.
fn report<F>(number: usize, body: F)
where
    F: FnOnce() -> String,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(detail) => println!("criterion {number}: PASS — {detail}"),
        Err(cause) => {
            println!("criterion {number}: FAIL");
            resume_unwind(cause);
        }
    }
}

fn generate(kind: SpaceKind) -> Space64 {
    MetricMeasureSpace::<f64>::generate(kind, 1.0).expect("generator spaces are valid")
}

fn grid(width: usize, height: usize) -> Space64 {
    generate(SpaceKind::Grid { width, height })
}

/// Largest canonical ball at the metric center that is not the whole
/// space — the same base ball the command-line tool defaults to.
fn proper_center_ball(space: &Space64) -> Ball64 {
    let center = space.metric_center();
    space
        .canonical_balls(center)
        .into_iter()
        .filter(|ball| ball.point_count() < space.n())
        .last()
        .expect("space has a proper ball")
}

/// Whole space as a single canonical ball.
fn whole_space_ball(space: &Space64) -> Ball64 {
    let center = space.metric_center();
    space
        .canonical_balls(center)
        .into_iter()
        .last()
        .expect("space has at least one ball")
}

/// Normalized p-oscillation of a ball, the quantity the stopping-time
/// construction thresholds on.
fn oscillation(space: &Space64, ball: &Ball64, values: &[f64], p: f64, beta: f64) -> f64 {
    if ball.set_diam <= 0.0 {
        return 0.0;
    }
    let mut mass = 0.0;
    let mut mean = 0.0;
    for idx in ball.members.iter() {
        mass += space.measure(idx);
        mean += space.measure(idx) * values[idx];
    }
    mean /= mass;
    let mut integral = 0.0;
    for idx in ball.members.iter() {
        integral += space.measure(idx) * (values[idx] - mean).abs().powf(p);
    }
    (integral / mass).powf(1.0 / p) / ball.set_diam.powf(beta)
}

#[test]
fn criterion_01_pair_relation_constant_bound() {
    report(1, || {
        let spaces = [
            grid(8, 8),
            generate(SpaceKind::Path { n: 16 }),
        ];
        let mut checked = 0usize;
        let mut worst_margin = f64::INFINITY;
        for space in &spaces {
            let family = BallFamily::global(space);
            for p in [1.5f64, 2.0, 3.0] {
                let bound = 2.0f64.powf(p);
                let params = PIParams { q: p, p, beta: 1.0, tau: 1.0 };
                for seed in 0..20u64 {
                    let u = holder_sample(space, 1.0, seed);
                    let min = minimal_hajlasz_gradient(space, &u, p, 1.0).unwrap();
                    let constant =
                        poincare_constant(space, &u, &min.gradient, &params, &family)
                            .unwrap();
                    assert!(
                        constant <= bound + 1e-9,
                        "n={} p={p} seed={seed}: constant {constant} above {bound}",
                        space.n()
                    );
                    worst_margin = worst_margin.min(bound - constant);
                    checked += 1;
                }
            }
        }
        assert_eq!(checked, 120);
        format!("120 ball constants within the p-th power bound, worst margin {worst_margin:.3}")
    });
}

#[test]
fn criterion_02_stopping_sandwich_and_parent_bounds() {
    report(2, || {
        let space = grid(16, 16);
        let base = proper_center_ball(&space);
        let cover = whitney_cover(&space, &base, 0.125).unwrap();
        let c_mu = space.stats().c_mu;
        let p = 2.0f64;
        let mut balls = 0usize;
        let mut steps = 0usize;
        for seed in 0..5u64 {
            let u = holder_sample(&space, 1.0, seed);
            for cell in 0..cover.cells.len() {
                let threshold = oscillation(&space, &cover.dilated[cell], &u, p, 1.0);
                if threshold <= 0.0 {
                    continue;
                }
                let family =
                    stopping_family(&space, &cover, cell, &u, p, 1.0, 1.5 * threshold)
                        .unwrap();
                let upper = 2.0 * 32.0 * c_mu.powf(5.0 / p) * family.level;
                for stop in &family.balls {
                    balls += 1;
                    assert!(
                        stop.oscillation > family.level,
                        "seed {seed} cell {cell}: oscillation {} not above level {}",
                        stop.oscillation,
                        family.level
                    );
                    assert!(
                        stop.oscillation <= upper,
                        "seed {seed} cell {cell}: oscillation {} above cap {upper}",
                        stop.oscillation
                    );
                }
                for step in &family.steps {
                    steps += 1;
                    let mu_child = space.measure_of(&step.child.members);
                    let mu_parent = space.measure_of(&step.parent.members);
                    assert!(
                        mu_parent <= c_mu.powi(5) * mu_child + 1e-9,
                        "seed {seed} cell {cell}: parent mass {mu_parent} vs {}",
                        c_mu.powi(5) * mu_child
                    );
                    assert!(
                        step.parent.set_diam
                            <= 16.0 * step.child.set_diam + 2.0 * space.mesh() + 1e-9,
                        "seed {seed} cell {cell}: parent diameter {} vs child {}",
                        step.parent.set_diam,
                        step.child.set_diam
                    );
                }
            }
        }
        assert!(balls > 500, "only {balls} stopping balls exercised");
        format!("{balls} stopping balls and {steps} parent steps, zero violations")
    });
}

#[test]
fn criterion_03_covers_are_exact() {
    report(3, || {
        // Greedy selection: pairwise disjoint, 5-dilations swallow every
        // input ball.
        let mut five_r_checked = 0usize;
        for space in [
            grid(8, 8),
            generate(SpaceKind::Path { n: 17 }),
            generate(SpaceKind::Cycle { n: 9 }),
        ] {
            let mut balls: Vec<Ball<f64>> = Vec::new();
            for center in 0..space.n() {
                balls.extend(space.canonical_balls(center));
            }
            let selected = five_r_cover(&space, &balls);
            for (i, a) in selected.iter().enumerate() {
                for b in selected.iter().skip(i + 1) {
                    assert!(
                        a.members.is_disjoint(&b.members),
                        "selected balls intersect"
                    );
                }
            }
            for ball in &balls {
                let covered = selected.iter().any(|sel| {
                    ball.members
                        .is_subset(&space.ball(sel.center, 5.0 * sel.radius).members)
                });
                assert!(covered, "input ball escapes every 5-dilation");
                five_r_checked += 1;
            }
        }

        // Whitney cells: exact tiling of the base, dilations inside it,
        // bounded overlap recomputed and logged.
        let mut overlaps = Vec::new();
        for (space, base) in [
            (grid(8, 8), None),
            (grid(16, 16), None),
            (generate(SpaceKind::Path { n: 40 }), Some((20usize, 12.5f64))),
        ] {
            let base = match base {
                Some((center, radius)) => space.ball(center, radius),
                None => proper_center_ball(&space),
            };
            for ratio in [0.125f64, 1.0 / 128.0] {
                let cover = whitney_cover(&space, &base, ratio).unwrap();
                let mut union = PointSet::empty(space.n());
                for cell in &cover.cells {
                    union.union_with(&cell.members);
                }
                assert!(
                    union.is_subset(&base.members) && base.members.is_subset(&union),
                    "cell union differs from the base"
                );
                assert!(
                    cover.dilated.iter().all(|big| big.members.is_subset(&base.members)),
                    "a dilated cell leaks out of the base"
                );
                let mut worst = 0usize;
                for x in base.members.iter() {
                    let hits = cover
                        .dilated
                        .iter()
                        .filter(|big| big.members.contains(x))
                        .count();
                    worst = worst.max(hits);
                }
                assert_eq!(worst, cover.overlap, "reported overlap disagrees");
                overlaps.push(cover.overlap);
            }
        }
        format!(
            "{five_r_checked} balls swallowed by 5-dilations; Whitney tilings exact, overlaps {overlaps:?}"
        )
    });
}

#[test]
fn criterion_04_extension_identity_and_constant() {
    report(4, || {
        let spaces = [
            grid(5, 5),
            grid(7, 3),
            generate(SpaceKind::Path { n: 12 }),
            generate(SpaceKind::Path { n: 25 }),
            generate(SpaceKind::Cycle { n: 9 }),
            generate(SpaceKind::Cycle { n: 14 }),
            generate(SpaceKind::BinaryTree { depth: 2 }),
            generate(SpaceKind::BinaryTree { depth: 3 }),
        ];
        let betas = [1.0f64, 0.75, 0.5];
        let mut instances = 0usize;
        for (space_index, space) in spaces.iter().enumerate() {
            for j in 0..7usize {
                let seed = (10 * space_index + j) as u64;
                let beta = betas[j % betas.len()];
                let u = holder_sample(space, beta, seed);
                let stride = 2 + j % 3;
                let offset = seed as usize % stride;
                let mut subset = PointSet::empty(space.n());
                for i in (offset..space.n()).step_by(stride) {
                    subset.insert(i);
                }
                let members: Vec<usize> = subset.iter().collect();
                let boundary: Vec<f64> = members.iter().map(|&i| u[i]).collect();
                let mut kappa = 0.0f64;
                for (a, &i) in members.iter().enumerate() {
                    for &j in &members[a + 1..] {
                        let ratio =
                            (u[i] - u[j]).abs() / space.dist(i, j).powf(beta);
                        kappa = kappa.max(ratio);
                    }
                }
                let extension =
                    mcshane_extend(space, &subset, &boundary, kappa, beta).unwrap();
                for &i in &members {
                    assert!(
                        extension.values[i] == u[i],
                        "restriction differs at point {i}"
                    );
                }
                let measured = holder_constant(space, &extension.values, beta).unwrap();
                assert!(
                    measured <= kappa + 1e-9,
                    "extension constant {measured} above boundary constant {kappa}"
                );
                instances += 1;
            }
        }
        assert!(instances >= 50);
        format!("{instances} extensions: restriction exact, constant never above the boundary constant")
    });
}

#[test]
fn criterion_05_solver_matches_oracles() {
    report(5, || {
        let mut instances = 0usize;
        for (name, space) in testkit::small_spaces() {
            for seed in [1u64, 2] {
                for p in [1.7f64, 2.0, 3.0] {
                    let u = holder_sample(&space, 1.0, seed);
                    let min = minimal_hajlasz_gradient(&space, &u, p, 1.0).unwrap();
                    let oracle = testkit::hajlasz_oracle(&space, &u, p, 1.0);
                    assert!(oracle.gap() <= 1e-7, "{name}: bracket {}", oracle.gap());
                    let slack = 1e-5 * (1.0 + oracle.upper);
                    assert!(
                        min.objective <= oracle.upper + slack
                            && min.objective >= oracle.lower - slack,
                        "{name} seed {seed} p {p}: {} outside [{}, {}]",
                        min.objective,
                        oracle.lower,
                        oracle.upper
                    );
                    instances += 1;
                }
            }
        }
        for (name, space) in testkit::small_graph_spaces() {
            for seed in [1u64, 2] {
                for p in [2.0f64, 3.0] {
                    let u = holder_sample(&space, 1.0, seed);
                    let min = minimal_upper_gradient(&space, &u, p).unwrap();
                    let oracle = testkit::upper_oracle(&space, &u, p);
                    assert!(oracle.gap() <= 1e-7, "{name}: bracket {}", oracle.gap());
                    let slack = 1e-5 * (1.0 + oracle.upper);
                    assert!(
                        min.objective <= oracle.upper + slack
                            && min.objective >= oracle.lower - slack,
                        "{name} seed {seed} p {p}: {} outside [{}, {}]",
                        min.objective,
                        oracle.lower,
                        oracle.upper
                    );
                    instances += 1;
                }
            }
        }
        assert!(instances >= 50, "only {instances} oracle comparisons ran");

        // Closed forms: unit ramp on two points, then the hat ramp on a
        // three-point path for the path-based structure.
        let two = MetricMeasureSpace::from_matrix(
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            vec![1.0, 1.0],
        )
        .unwrap();
        let min = minimal_hajlasz_gradient(&two, &[0.0, 1.0], 2.0, 1.0).unwrap();
        for &g in &min.gradient.values {
            assert!((g - 0.5f64).abs() <= 1e-5 * 0.5, "two-point gradient {g}");
        }
        let path3 = generate(SpaceKind::Path { n: 3 });
        let min = minimal_upper_gradient(&path3, &[0.0, 1.0, 2.0], 2.0).unwrap();
        for (got, want) in min.gradient.values.iter().zip([2.0 / 3.0, 4.0 / 3.0, 2.0 / 3.0]) {
            assert!(
                (got - want).abs() <= 1e-5 * want,
                "path gradient {got} vs {want}"
            );
        }
        format!("{instances} certified oracle matches plus both closed forms to 1e-5")
    });
}

#[test]
fn criterion_06_audit_homogeneity() {
    report(6, || {
        let space = grid(6, 6);
        let base = space.ball(space.metric_center(), 2.5);
        let (p, beta, k, epsilon) = (2.0f64, 1.0, 3usize, 0.05);
        let power = p - epsilon;
        for seed in [21u64, 22, 23, 24, 25] {
            let u = holder_sample(&space, 1.0, seed);
            let min = minimal_upper_gradient(&space, &u, p).unwrap();
            let report = main_inequality_audit(
                &space, &base, &u, &min.gradient, p, beta, k, epsilon, None,
            )
            .unwrap();
            assert!(!report.family_empty, "seed {seed}: no balls to audit");
            assert!(report.lhs > 0.0, "seed {seed}: degenerate audit");
            for a in [2.0f64, -3.0] {
                let scaled_u: Vec<f64> = u.iter().map(|&x| a * x).collect();
                let scaled_g = GradientCandidate {
                    values: min
                        .gradient
                        .values
                        .iter()
                        .map(|&g| a.abs() * g)
                        .collect(),
                    kind: DStructureKind::GraphUpper,
                    p,
                };
                let scaled = main_inequality_audit(
                    &space,
                    &base,
                    &scaled_u,
                    &scaled_g,
                    p,
                    beta,
                    k,
                    epsilon,
                    Some(report.kpp),
                )
                .unwrap();
                let factor = a.abs().powf(power);
                for (label, got, want) in [
                    ("lhs", scaled.lhs, report.lhs * factor),
                    ("gradient term", scaled.term_gradient, report.term_gradient * factor),
                    ("first implied constant", scaled.implied_c1, report.implied_c1),
                    ("second implied constant", scaled.implied_c, report.implied_c),
                ] {
                    assert!(
                        (got - want).abs() <= 1e-9 * (1.0 + want.abs()),
                        "seed {seed} a={a}: {label} {got} vs {want}"
                    );
                }
            }
        }
        format!("5 samples, scalings by 2 and -3 follow |a|^(p-eps), implied constants unchanged")
    });
}

#[test]
fn criterion_07_reduced_exponent_trend() {
    report(7, || {
        let mut maxima = Vec::new();
        for side in [4usize, 8, 16] {
            let space = grid(side, side);
            let samples: Vec<Vec<f64>> =
                (0..3u64).map(|seed| holder_sample(&space, 1.0, seed)).collect();
            let report = kz_sweep(
                &space,
                DStructureKind::Hajlasz { beta: 1.0 },
                2.0,
                1.0,
                &[0.1],
                &samples,
            )
            .unwrap();
            let max = report.rows[0].max;
            assert!(max.is_finite() && max > 0.0, "side {side}: constant {max}");
            maxima.push(max);
        }
        let lo = maxima.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = maxima.iter().cloned().fold(0.0f64, f64::max);
        assert!(
            hi / lo <= 3.0,
            "reduced-exponent constants spread too far: {maxima:?}"
        );
        format!("constants {maxima:?} across grid sides 4/8/16, spread {:.3}", hi / lo)
    });
}

/// The function separating the two subtrees under the root: +1 on the
/// first child's side, −1 on the second's, 0 at the root. Deep trees
/// force its gradient through the root bottleneck.
fn subtree_split(space: &Space64) -> Vec<f64> {
    let root = space.metric_center();
    let graph = space.graph().expect("tree spaces carry their graph");
    let mut children: Vec<usize> = graph
        .edges
        .iter()
        .filter_map(|&(a, b, _)| {
            if a == root {
                Some(b)
            } else if b == root {
                Some(a)
            } else {
                None
            }
        })
        .collect();
    children.sort_unstable();
    let (left, right) = (children[0], children[1]);
    (0..space.n())
        .map(|x| {
            if x == root {
                0.0
            } else if space.dist(x, left) < space.dist(x, right) {
                1.0
            } else {
                -1.0
            }
        })
        .collect()
}

#[test]
fn criterion_08_tree_negative_control() {
    report(8, || {
        let mut constants = Vec::new();
        for depth in [3usize, 5, 7] {
            let space = generate(SpaceKind::BinaryTree { depth });
            let u = subtree_split(&space);
            let min = minimal_gradient(&space, &u, 2.0, DStructureKind::GraphUpper).unwrap();
            let family = BallFamily::global(&space);
            let params = PIParams { q: 1.0, p: 2.0, beta: 1.0, tau: 1.0 };
            let constant =
                poincare_constant(&space, &u, &min.gradient, &params, &family).unwrap();
            constants.push(constant);
        }
        assert!(
            constants[0] < constants[1] && constants[1] < constants[2],
            "tree constants fail to grow with depth: {constants:?}"
        );
        format!("subtree-split constants strictly increase with depth: {constants:?}")
    });
}

#[test]
fn criterion_09_tail_bound() {
    report(9, || {
        let space = grid(8, 8);
        let balls = [whole_space_ball(&space), space.ball(space.metric_center(), 4.5)];
        let mut checked = 0usize;
        for seed in 0..100u64 {
            let u = holder_sample(&space, 1.0, seed);
            for ball in &balls {
                for (q, t) in [(1.0f64, 2.0f64), (2.0, 3.0)] {
                    let report = kolmogorov_check(&space, ball, &u, q, t).unwrap();
                    assert!(
                        report.holds,
                        "seed {seed} q={q} t={t}: lhs {} above rhs {}",
                        report.lhs,
                        report.rhs
                    );
                    checked += 1;
                }
            }
        }
        assert_eq!(checked, 400);
        format!("400 tail-bound checks over 100 seeded functions, zero violations")
    });
}

#[test]
fn criterion_10_norm_equivalence() {
    report(10, || {
        let space = grid(8, 8);
        let samples: Vec<Vec<f64>> =
            (0..20u64).map(|seed| holder_sample(&space, 1.0, seed)).collect();
        let report = norm_equivalence_report(
            &space,
            &samples,
            2.0,
            1.0,
            DStructureKind::Hajlasz { beta: 1.0 },
        )
        .unwrap();
        for row in &report.rows {
            assert!(row.ratio.is_finite() && row.ratio > 0.0, "ratio {}", row.ratio);
        }
        assert!(
            report.spread <= 10.0,
            "ratio spread {} exceeds 10 ({} .. {})",
            report.spread,
            report.min_ratio,
            report.max_ratio
        );

        let two = MetricMeasureSpace::from_matrix(
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            vec![1.0, 1.0],
        )
        .unwrap();
        let row = norm_report(
            &two,
            &[0.0, 1.0],
            2.0,
            1.0,
            DStructureKind::Hajlasz { beta: 1.0 },
        )
        .unwrap();
        let want = 1.5f64.sqrt();
        assert!(
            (row.sobolev_norm - want).abs() <= 1e-9 * want,
            "combined norm {} vs {want}",
            row.sobolev_norm
        );
        assert!(
            (row.sharp_norm - want).abs() <= 1e-9 * want,
            "sharp-profile norm {} vs {want}",
            row.sharp_norm
        );
        format!(
            "20 ratios in [{:.3}, {:.3}] (spread {:.3}); two-point closed form sqrt(1.5) exact to 1e-9",
            report.min_ratio, report.max_ratio, report.spread
        )
    });
}

#[test]
fn criterion_11_self_improvement() {
    report(11, || {
        let mut swept = 0usize;
        for (space, seed) in [(grid(6, 6), 1u64), (grid(6, 6), 2), (grid(8, 8), 3)] {
            let u = holder_sample(&space, 1.0, seed);
            let min = minimal_hajlasz_gradient(&space, &u, 2.0, 1.0).unwrap();
            let report =
                self_improvement_report(&space, &u, &min.gradient, 2.0, 1.0, 1.0, None)
                    .unwrap();
            assert!(report.q_max > 1.0, "degenerate sweep ceiling {}", report.q_max);
            let mut previous: Option<(f64, f64)> = None;
            for row in &report.rows {
                if row.q < report.q_max {
                    assert!(
                        row.constant.is_finite(),
                        "seed {seed}: constant at q={} not finite",
                        row.q
                    );
                    swept += 1;
                }
                if let Some((prev_q, prev_constant)) = previous {
                    if row.constant.is_finite() {
                        assert!(prev_q <= row.q, "rows out of order");
                        assert!(
                            prev_constant <= row.constant,
                            "seed {seed}: constant at q={} below the one at q={prev_q}",
                            row.q
                        );
                    }
                }
                if row.constant.is_finite() {
                    previous = Some((row.q, row.constant));
                }
            }
        }
        assert!(swept > 0);
        format!("{swept} exponents below the ceiling all finite, averaged ordering exact")
    });
}

#[test]
fn criterion_12_axiom_suite() {
    report(12, || {
        let space = grid(4, 4);
        let samples: Vec<Vec<f64>> =
            (0..10u64).map(|seed| holder_sample(&space, 1.0, seed)).collect();
        let pairs = samples.len() * (samples.len() - 1) / 2;
        assert!(pairs >= 20);
        for (kind, seed) in [
            (DStructureKind::Hajlasz { beta: 1.0 }, 99u64),
            (DStructureKind::GraphUpper, 77),
        ] {
            let report = check_axioms(&space, kind, &samples, 2.0, seed).unwrap();
            assert!(report.nonnegativity, "negative minimal gradient");
            assert!(report.vanishes_on_constants, "constants need nonzero gradient");
            assert!(report.subadditivity, "sum rule violated");
            assert!(report.homogeneity, "scaling rule violated");
            assert!(report.glueing, "patch glueing violated");
            assert!(report.holds && report.violations.is_empty());
        }
        format!(
            "both structures: {pairs} sum pairs, scalings by -2/-1/0.5, 10 glueing patches, zero violations"
        )
    });
}

#[test]
fn criterion_13_cli_determinism() {
    report(13, || {
        let binary = env!("CARGO_BIN_EXE_sharpmax");
        let make_inputs = |dir: &std::path::Path| {
            let mut edges = Vec::new();
            for y in 0..5usize {
                for x in 0..5usize {
                    let i = y * 5 + x;
                    if x + 1 < 5 {
                        edges.push(format!("[{}, {}, 1.0]", i, i + 1));
                    }
                    if y + 1 < 5 {
                        edges.push(format!("[{}, {}, 1.0]", i, i + 5));
                    }
                }
            }
            let space = format!(
                "{{\"n\": 25, \"measure\": [{}], \"metric\": {{\"type\": \"graph\", \"edges\": [{}]}}}}",
                vec!["1.0"; 25].join(", "),
                edges.join(", ")
            );
            std::fs::write(dir.join("space.json"), space).unwrap();
        };
        let run = |dir: &std::path::Path, args: &[&str]| -> Vec<u8> {
            let status = std::process::Command::new(binary)
                .args(args)
                .current_dir(dir)
                .output()
                .expect("binary runs");
            assert!(
                status.status.code() == Some(0),
                "command {args:?} exited with {:?}: {}",
                status.status.code(),
                String::from_utf8_lossy(&status.stderr)
            );
            let report = args
                .first()
                .map(|cmd| dir.join(format!("{cmd}.report.json")))
                .unwrap();
            std::fs::read(report).expect("report written")
        };
        let commands: Vec<Vec<&str>> = vec![
            vec!["poincare", "--space", "space.json", "--seed", "7"],
            vec!["kz", "--space", "space.json", "--seed", "2"],
            vec!["stats", "--space", "space.json"],
            vec!["whitney", "--space", "space.json", "--cw", "0.125"],
        ];
        let mut compared = 0usize;
        for args in &commands {
            let dir_a = tempfile::tempdir().unwrap();
            let dir_b = tempfile::tempdir().unwrap();
            make_inputs(dir_a.path());
            make_inputs(dir_b.path());
            let first = run(dir_a.path(), args);
            let second = run(dir_b.path(), args);
            assert!(!first.is_empty());
            assert_eq!(first, second, "{args:?}: reports differ between runs");
            compared += 1;
        }
        format!("{compared} commands re-run with fixed seeds, reports byte-identical")
    });
}
