//! Command implementations. Each produces a result payload for the JSON
//! report, a one-line summary, optional finding flags (inequality-style
//! observations that deserve a distinct exit code), and flat renderings
//! for the csv and plotdata formats.

use crate::doc::{arr, b, f, floats, i, obj, s, Doc};
use crate::inputs::{FunctionDocument, LoadedSpace};
use sharpmax::covering::{build_chain, stopping_family, whitney_cover};
use sharpmax::gradients::{minimal_gradient, DStructureKind};
use sharpmax::maximal::sharp_maximal;
use sharpmax::poincare::{
    kz_sweep, main_inequality_audit, poincare_constant, self_improvement_report, PIParams,
};
use sharpmax::samples::holder_sample;
use sharpmax::sobolev::{norm_equivalence_report, norm_report};
use sharpmax::space::{Ball, BallFamily};
use sharpmax::Ball64;

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum KindChoice {
    Hajlasz,
    Upper,
}

impl KindChoice {
    pub fn label(self) -> &'static str {
        match self {
            KindChoice::Hajlasz => "hajlasz",
            KindChoice::Upper => "upper",
        }
    }

    fn structure(self, beta: f64) -> DStructureKind<f64> {
        match self {
            KindChoice::Hajlasz => DStructureKind::Hajlasz { beta },
            KindChoice::Upper => DStructureKind::GraphUpper,
        }
    }
}

#[derive(Clone, Copy)]
pub struct Params {
    pub p: f64,
    pub beta: f64,
    pub q: Option<f64>,
    pub tau: f64,
    pub k: usize,
    pub epsilon: f64,
    pub kind: KindChoice,
    pub cw: f64,
    pub seed: u64,
}

impl Params {
    pub fn describe(&self) -> Doc {
        obj(vec![
            ("p", f(self.p)),
            ("beta", f(self.beta)),
            ("q", f(self.q.unwrap_or(self.p))),
            ("tau", f(self.tau)),
            ("k", i(self.k)),
            ("epsilon", f(self.epsilon)),
            ("kind", s(self.kind.label())),
            ("cw", f(self.cw)),
        ])
    }
}

pub struct CommandOutput {
    pub payload: Doc,
    pub summary: String,
    pub findings: bool,
    /// csv lines, header first.
    pub csv: Vec<String>,
    /// plotdata series: (series name, lines).
    pub plot: Vec<(String, Vec<String>)>,
}

type CommandResult = Result<CommandOutput, String>;

fn csv_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

/// The function under study: supplied values, or a deterministic seeded
/// sample at the requested smoothness.
fn function_values(
    loaded: &LoadedSpace,
    params: &Params,
    function: Option<&FunctionDocument>,
) -> (Vec<f64>, Doc) {
    match function {
        Some(doc) => (
            doc.values.clone(),
            obj(vec![("source", s("file")), ("beta", f(doc.beta))]),
        ),
        None => (
            holder_sample(&loaded.space, params.beta, params.seed),
            obj(vec![
                ("source", s("seeded-sample")),
                ("beta", f(params.beta)),
                ("seed", i(params.seed as usize)),
            ]),
        ),
    }
}

/// Deterministic base ball: the largest canonical ball at the metric
/// center that is not the whole space.
fn default_base(loaded: &LoadedSpace) -> Result<Ball64, String> {
    let space = &loaded.space;
    let center = space.metric_center();
    space
        .canonical_balls(center)
        .into_iter()
        .filter(|ball| ball.point_count() < space.n())
        .last()
        .ok_or_else(|| "space has no proper ball to anchor the command".to_string())
}

fn ball_doc(ball: &Ball<f64>) -> Doc {
    obj(vec![
        ("center", i(ball.center)),
        ("radius", f(ball.radius)),
        ("points", i(ball.point_count())),
        ("set_diam", f(ball.set_diam)),
    ])
}

pub fn stats(loaded: &LoadedSpace) -> CommandResult {
    let space = &loaded.space;
    let st = space.stats();
    let payload = obj(vec![
        ("n", i(space.n())),
        ("c_mu", f(st.c_mu)),
        ("s", f(st.s)),
        ("geo_defect", f(st.geo_defect)),
        ("diameter", f(st.diameter)),
        ("mesh", f(space.mesh())),
        ("total_measure", f(space.total_measure())),
        ("quasi_geodesic", b(space.is_quasi_geodesic())),
    ]);
    let rows = [
        ("n", space.n() as f64),
        ("c_mu", st.c_mu),
        ("s", st.s),
        ("geo_defect", st.geo_defect),
        ("diameter", st.diameter),
        ("mesh", space.mesh()),
        ("total_measure", space.total_measure()),
    ];
    let mut csv = vec!["name,value".to_string()];
    let mut plot = vec!["# name value".to_string()];
    for (name, value) in rows {
        csv.push(format!("{name},{}", csv_float(value)));
        plot.push(format!("{name} {}", csv_float(value)));
    }
    Ok(CommandOutput {
        summary: format!(
            "stats: n={} c_mu={:.6} s={:.6} diameter={:.6} quasi_geodesic={}",
            space.n(),
            st.c_mu,
            st.s,
            st.diameter,
            space.is_quasi_geodesic()
        ),
        payload,
        findings: false,
        csv,
        plot: vec![("values".to_string(), plot)],
    })
}

pub fn maximal(
    loaded: &LoadedSpace,
    params: &Params,
    function: Option<&FunctionDocument>,
) -> CommandResult {
    let space = &loaded.space;
    let (values, function_doc) = function_values(loaded, params, function);
    let family = BallFamily::global(space);
    let profile = sharp_maximal(space, &values, params.p, params.beta, &family)
        .map_err(|e| e.to_string())?;
    let max = profile.values.iter().cloned().fold(0.0f64, f64::max);
    let payload = obj(vec![
        ("p", f(params.p)),
        ("beta", f(params.beta)),
        ("family", s("global-canonical")),
        ("function", function_doc),
        ("max", f(max)),
        ("values", floats(&profile.values)),
    ]);
    let mut csv = vec!["index,value".to_string()];
    let mut plot = vec!["# index value".to_string()];
    for (idx, v) in profile.values.iter().enumerate() {
        csv.push(format!("{idx},{}", csv_float(*v)));
        plot.push(format!("{idx} {}", csv_float(*v)));
    }
    Ok(CommandOutput {
        summary: format!(
            "maximal: profile over {} balls, max={max:.6}",
            family.len()
        ),
        payload,
        findings: false,
        csv,
        plot: vec![("profile".to_string(), plot)],
    })
}

pub fn gradient(
    loaded: &LoadedSpace,
    params: &Params,
    function: Option<&FunctionDocument>,
) -> CommandResult {
    let space = &loaded.space;
    let (values, function_doc) = function_values(loaded, params, function);
    let kind = params.kind.structure(params.beta);
    let min =
        minimal_gradient(space, &values, params.p, kind).map_err(|e| e.to_string())?;
    let mut gradient_fields = vec![
        ("values", floats(&min.gradient.values)),
        ("kind", s(params.kind.label())),
    ];
    if params.kind == KindChoice::Hajlasz {
        gradient_fields.push(("beta", f(params.beta)));
    }
    gradient_fields.push(("p", f(params.p)));
    let payload = obj(vec![
        ("function", function_doc),
        ("gradient", obj(gradient_fields)),
        ("objective", f(min.objective)),
        ("norm", f(min.norm)),
        ("iterations", i(min.iterations)),
        ("feasible", b(min.report.feasible)),
        ("worst_violation", f(min.report.worst_violation)),
    ]);
    let mut csv = vec!["index,value".to_string()];
    let mut plot = vec!["# index value".to_string()];
    for (idx, v) in min.gradient.values.iter().enumerate() {
        csv.push(format!("{idx},{}", csv_float(*v)));
        plot.push(format!("{idx} {}", csv_float(*v)));
    }
    Ok(CommandOutput {
        summary: format!(
            "gradient: kind={} objective={:.6} norm={:.6} feasible={}",
            params.kind.label(),
            min.objective,
            min.norm,
            min.report.feasible
        ),
        findings: !min.report.feasible,
        payload,
        csv,
        plot: vec![("values".to_string(), plot)],
    })
}

pub fn poincare(
    loaded: &LoadedSpace,
    params: &Params,
    function: Option<&FunctionDocument>,
) -> CommandResult {
    let space = &loaded.space;
    let (values, function_doc) = function_values(loaded, params, function);
    let kind = params.kind.structure(params.beta);
    let min =
        minimal_gradient(space, &values, params.p, kind).map_err(|e| e.to_string())?;
    let pi = PIParams {
        q: params.q.unwrap_or(params.p),
        p: params.p,
        beta: params.beta,
        tau: params.tau,
    };
    let family = BallFamily::global(space);
    let constant = poincare_constant(space, &values, &min.gradient, &pi, &family)
        .map_err(|e| e.to_string())?;
    let payload = obj(vec![
        ("q", f(pi.q)),
        ("p", f(pi.p)),
        ("beta", f(pi.beta)),
        ("tau", f(pi.tau)),
        ("kind", s(params.kind.label())),
        ("function", function_doc),
        ("constant", f(constant)),
        ("finite", b(constant.is_finite())),
    ]);
    let csv = vec![
        "q,p,beta,tau,kind,constant".to_string(),
        format!(
            "{},{},{},{},{},{}",
            csv_float(pi.q),
            csv_float(pi.p),
            csv_float(pi.beta),
            csv_float(pi.tau),
            params.kind.label(),
            csv_float(constant)
        ),
    ];
    let plot = vec![
        "# q constant".to_string(),
        format!("{} {}", csv_float(pi.q), csv_float(constant)),
    ];
    Ok(CommandOutput {
        summary: format!(
            "poincare: K({},{}) at tau={} is {constant:.6}",
            pi.q, pi.p, pi.tau
        ),
        findings: !constant.is_finite(),
        payload,
        csv,
        plot: vec![("constant".to_string(), plot)],
    })
}

pub fn improve(
    loaded: &LoadedSpace,
    params: &Params,
    function: Option<&FunctionDocument>,
) -> CommandResult {
    let space = &loaded.space;
    let (values, function_doc) = function_values(loaded, params, function);
    let kind = params.kind.structure(params.beta);
    let min =
        minimal_gradient(space, &values, params.p, kind).map_err(|e| e.to_string())?;
    let report = self_improvement_report(
        space,
        &values,
        &min.gradient,
        params.p,
        params.beta,
        params.tau,
        None,
    )
    .map_err(|e| e.to_string())?;
    let findings = report.rows.iter().any(|row| !row.constant.is_finite());
    let rows: Vec<Doc> = report
        .rows
        .iter()
        .map(|row| {
            obj(vec![
                ("q", f(row.q)),
                ("constant", f(row.constant)),
                ("ratio", f(row.ratio)),
            ])
        })
        .collect();
    let payload = obj(vec![
        ("p", f(params.p)),
        ("beta", f(params.beta)),
        ("tau", f(params.tau)),
        ("kind", s(params.kind.label())),
        ("function", function_doc),
        ("k_1p", f(report.k_1p)),
        ("q_exponent", f(report.q_exponent)),
        ("q_max", f(report.q_max)),
        ("rows", arr(rows)),
    ]);
    let mut csv = vec!["q,constant,ratio".to_string()];
    let mut plot = vec!["# q constant ratio".to_string()];
    for row in &report.rows {
        csv.push(format!(
            "{},{},{}",
            csv_float(row.q),
            csv_float(row.constant),
            csv_float(row.ratio)
        ));
        plot.push(format!(
            "{} {} {}",
            csv_float(row.q),
            csv_float(row.constant),
            csv_float(row.ratio)
        ));
    }
    Ok(CommandOutput {
        summary: format!(
            "improve: q_max={:.6}, {} exponents swept, K_1p={:.6}",
            report.q_max,
            report.rows.len(),
            report.k_1p
        ),
        findings,
        payload,
        csv,
        plot: vec![("rows".to_string(), plot)],
    })
}

pub fn audit(
    loaded: &LoadedSpace,
    params: &Params,
    function: Option<&FunctionDocument>,
) -> CommandResult {
    let space = &loaded.space;
    let (values, function_doc) = function_values(loaded, params, function);
    let kind = params.kind.structure(params.beta);
    let min =
        minimal_gradient(space, &values, params.p, kind).map_err(|e| e.to_string())?;
    let base = default_base(loaded)?;
    let report = main_inequality_audit(
        space,
        &base,
        &values,
        &min.gradient,
        params.p,
        params.beta,
        params.k,
        params.epsilon,
        None,
    )
    .map_err(|e| e.to_string())?;
    let findings = report.family_empty
        || !report.implied_c1.is_finite()
        || !report.implied_c.is_finite();
    let payload = obj(vec![
        ("p", f(params.p)),
        ("beta", f(params.beta)),
        ("k", i(report.params.k)),
        ("epsilon", f(report.params.epsilon)),
        ("alpha", f(report.params.alpha)),
        ("s", f(report.params.s)),
        ("kind", s(params.kind.label())),
        ("function", function_doc),
        ("base", ball_doc(&base)),
        ("kpp", f(report.kpp)),
        ("c_keps", f(report.c_keps)),
        ("lhs", f(report.lhs)),
        ("term_absorb", f(report.term_absorb)),
        ("term_gradient", f(report.term_gradient)),
        ("implied_c1", f(report.implied_c1)),
        ("implied_c", f(report.implied_c)),
        ("family_empty", b(report.family_empty)),
    ]);
    let csv = vec![
        "kpp,c_keps,lhs,term_absorb,term_gradient,implied_c1,implied_c,family_empty"
            .to_string(),
        format!(
            "{},{},{},{},{},{},{},{}",
            csv_float(report.kpp),
            csv_float(report.c_keps),
            csv_float(report.lhs),
            csv_float(report.term_absorb),
            csv_float(report.term_gradient),
            csv_float(report.implied_c1),
            csv_float(report.implied_c),
            report.family_empty
        ),
    ];
    let plot = vec![
        "# lhs term_absorb term_gradient implied_c1 implied_c".to_string(),
        format!(
            "{} {} {} {} {}",
            csv_float(report.lhs),
            csv_float(report.term_absorb),
            csv_float(report.term_gradient),
            csv_float(report.implied_c1),
            csv_float(report.implied_c)
        ),
    ];
    Ok(CommandOutput {
        summary: format!(
            "audit: lhs={:.6} implied_c1={:.6} implied_c={:.6} family_empty={}",
            report.lhs, report.implied_c1, report.implied_c, report.family_empty
        ),
        findings,
        payload,
        csv,
        plot: vec![("terms".to_string(), plot)],
    })
}

pub fn kz(
    loaded: &LoadedSpace,
    params: &Params,
    function: Option<&FunctionDocument>,
) -> CommandResult {
    let space = &loaded.space;
    let kind = params.kind.structure(params.beta);
    let (samples, sample_doc) = match function {
        Some(doc) => (
            vec![doc.values.clone()],
            obj(vec![("source", s("file")), ("count", i(1))]),
        ),
        None => {
            let samples: Vec<Vec<f64>> = (0..3)
                .map(|offset| {
                    holder_sample(space, params.beta, params.seed + offset)
                })
                .collect();
            (
                samples,
                obj(vec![
                    ("source", s("seeded-sample")),
                    ("count", i(3)),
                    ("seed", i(params.seed as usize)),
                ]),
            )
        }
    };
    let grid = [0.0, params.epsilon / 2.0, params.epsilon];
    let report = kz_sweep(space, kind, params.p, params.beta, &grid, &samples)
        .map_err(|e| e.to_string())?;
    let findings = report.monotone.iter().any(|flag| !flag);
    let rows: Vec<Doc> = report
        .rows
        .iter()
        .map(|row| {
            obj(vec![
                ("epsilon", f(row.epsilon)),
                ("per_sample", floats(&row.per_sample)),
                ("max", f(row.max)),
            ])
        })
        .collect();
    let payload = obj(vec![
        ("p", f(params.p)),
        ("beta", f(params.beta)),
        ("kind", s(params.kind.label())),
        ("samples", sample_doc),
        ("rows", arr(rows)),
        (
            "monotone",
            arr(report.monotone.iter().map(|&flag| b(flag))),
        ),
    ]);
    let mut csv = vec!["epsilon,max".to_string()];
    let mut plot = vec!["# epsilon max".to_string()];
    for row in &report.rows {
        csv.push(format!("{},{}", csv_float(row.epsilon), csv_float(row.max)));
        plot.push(format!("{} {}", csv_float(row.epsilon), csv_float(row.max)));
    }
    let worst = report
        .rows
        .iter()
        .map(|r| r.max)
        .fold(0.0f64, f64::max);
    Ok(CommandOutput {
        summary: format!(
            "kz: {} epsilon values, worst constant {worst:.6}, monotone={}",
            report.rows.len(),
            !findings
        ),
        findings,
        payload,
        csv,
        plot: vec![("constants".to_string(), plot)],
    })
}

pub fn norms(
    loaded: &LoadedSpace,
    params: &Params,
    function: Option<&FunctionDocument>,
) -> CommandResult {
    let space = &loaded.space;
    let kind = params.kind.structure(params.beta);
    let (rows, min_ratio, max_ratio, spread, sample_doc) = match function {
        Some(doc) => {
            let row = norm_report(space, &doc.values, params.p, params.beta, kind)
                .map_err(|e| e.to_string())?;
            (
                vec![row],
                row.ratio,
                row.ratio,
                1.0,
                obj(vec![("source", s("file")), ("count", i(1))]),
            )
        }
        None => {
            let samples: Vec<Vec<f64>> = (0..5)
                .map(|offset| {
                    holder_sample(space, params.beta, params.seed + offset)
                })
                .collect();
            let report =
                norm_equivalence_report(space, &samples, params.p, params.beta, kind)
                    .map_err(|e| e.to_string())?;
            (
                report.rows,
                report.min_ratio,
                report.max_ratio,
                report.spread,
                obj(vec![
                    ("source", s("seeded-sample")),
                    ("count", i(5)),
                    ("seed", i(params.seed as usize)),
                ]),
            )
        }
    };
    let findings = rows
        .iter()
        .any(|row| !row.ratio.is_finite() || !row.eta.is_finite());
    let row_docs: Vec<Doc> = rows
        .iter()
        .map(|row| {
            obj(vec![
                ("lp", f(row.lp_norm)),
                ("grad", f(row.grad_norm)),
                ("sobolev", f(row.sobolev_norm)),
                ("sharp", f(row.sharp_norm)),
                ("eta", f(row.eta)),
                ("ratio", f(row.ratio)),
            ])
        })
        .collect();
    let payload = obj(vec![
        ("p", f(params.p)),
        ("beta", f(params.beta)),
        ("kind", s(params.kind.label())),
        ("samples", sample_doc),
        ("rows", arr(row_docs)),
        ("min_ratio", f(min_ratio)),
        ("max_ratio", f(max_ratio)),
        ("spread", f(spread)),
    ]);
    let mut csv = vec!["lp,grad,sobolev,sharp,eta,ratio".to_string()];
    let mut plot = vec!["# sample sobolev sharp ratio".to_string()];
    for (idx, row) in rows.iter().enumerate() {
        csv.push(format!(
            "{},{},{},{},{},{}",
            csv_float(row.lp_norm),
            csv_float(row.grad_norm),
            csv_float(row.sobolev_norm),
            csv_float(row.sharp_norm),
            csv_float(row.eta),
            csv_float(row.ratio)
        ));
        plot.push(format!(
            "{idx} {} {} {}",
            csv_float(row.sobolev_norm),
            csv_float(row.sharp_norm),
            csv_float(row.ratio)
        ));
    }
    Ok(CommandOutput {
        summary: format!(
            "norms: {} rows, ratio spread {spread:.6} [{min_ratio:.6}, {max_ratio:.6}]",
            rows.len()
        ),
        findings,
        payload,
        csv,
        plot: vec![("rows".to_string(), plot)],
    })
}

pub fn whitney(loaded: &LoadedSpace, params: &Params) -> CommandResult {
    let space = &loaded.space;
    let base = default_base(loaded)?;
    let cover = whitney_cover(space, &base, params.cw).map_err(|e| e.to_string())?;

    let mut union = sharpmax::set::PointSet::empty(space.n());
    for cell in &cover.cells {
        union.union_with(&cell.members);
    }
    let tiles_exactly =
        union.is_subset(&base.members) && base.members.is_subset(&union);

    let cells: Vec<Doc> = cover.cells.iter().map(ball_doc).collect();
    let dilated: Vec<Doc> = cover.dilated.iter().map(ball_doc).collect();
    let payload = obj(vec![
        ("base", ball_doc(&base)),
        ("ratio", f(cover.ratio)),
        ("cells", arr(cells)),
        ("dilated", arr(dilated)),
        ("overlap", i(cover.overlap)),
        ("tiles_exactly", b(tiles_exactly)),
    ]);
    let mut csv = vec!["cell,center,radius,points,dilated_points".to_string()];
    let mut plot = vec!["# cell center radius points".to_string()];
    for (idx, (cell, big)) in cover.cells.iter().zip(&cover.dilated).enumerate() {
        csv.push(format!(
            "{idx},{},{},{},{}",
            cell.center,
            csv_float(cell.radius),
            cell.point_count(),
            big.point_count()
        ));
        plot.push(format!(
            "{idx} {} {} {}",
            cell.center,
            csv_float(cell.radius),
            cell.point_count()
        ));
    }
    Ok(CommandOutput {
        summary: format!(
            "whitney: {} cells over a base of {} points, overlap {}, exact cover {}",
            cover.cells.len(),
            base.point_count(),
            cover.overlap,
            tiles_exactly
        ),
        findings: !tiles_exactly,
        payload,
        csv,
        plot: vec![("cells".to_string(), plot)],
    })
}

pub fn chain(loaded: &LoadedSpace, params: &Params) -> CommandResult {
    let space = &loaded.space;
    let base = default_base(loaded)?;
    let mut target = base.center;
    let mut farthest = -1.0f64;
    for y in base.members.iter() {
        let d = space.dist(base.center, y);
        if d > farthest {
            farthest = d;
            target = y;
        }
    }
    let ratio = 2.0;
    let chain = build_chain(space, &base, target, params.tau, ratio)
        .map_err(|e| e.to_string())?;
    let findings = chain.tau_achieved < params.tau - 1e-12;
    let balls: Vec<Doc> = chain.balls.iter().map(ball_doc).collect();
    let links: Vec<Doc> = chain.links.iter().map(ball_doc).collect();
    let payload = obj(vec![
        ("base", ball_doc(&base)),
        ("target", i(chain.target)),
        ("tau", f(chain.tau)),
        ("tau_achieved", f(chain.tau_achieved)),
        ("a", f(chain.a)),
        ("m", f(chain.m)),
        ("balls", arr(balls)),
        ("links", arr(links)),
    ]);
    let mut csv = vec!["step,center,radius,points".to_string()];
    let mut plot = vec!["# step radius".to_string()];
    for (idx, ball) in chain.balls.iter().enumerate() {
        csv.push(format!(
            "{idx},{},{},{}",
            ball.center,
            csv_float(ball.radius),
            ball.point_count()
        ));
        plot.push(format!("{idx} {}", csv_float(ball.radius)));
    }
    Ok(CommandOutput {
        summary: format!(
            "chain: {} balls to point {}, tau_achieved={:.6}, m={:.6}",
            chain.balls.len(),
            chain.target,
            chain.tau_achieved,
            chain.m
        ),
        findings,
        payload,
        csv,
        plot: vec![("radii".to_string(), plot)],
    })
}

pub fn stopping(
    loaded: &LoadedSpace,
    params: &Params,
    function: Option<&FunctionDocument>,
) -> CommandResult {
    let space = &loaded.space;
    let (values, function_doc) = function_values(loaded, params, function);
    let base = default_base(loaded)?;
    let cover = whitney_cover(space, &base, params.cw).map_err(|e| e.to_string())?;
    let c_mu = space.stats().c_mu;
    let level_factor = 1.5;

    let mut findings = false;
    let mut cell_docs = Vec::new();
    let mut csv = vec!["cell,level,center,radius,oscillation,parent_oscillation".to_string()];
    let mut plot = vec!["# cell level oscillation".to_string()];
    let mut families = 0usize;
    let mut total_balls = 0usize;
    for cell in 0..cover.cells.len() {
        let family = match stopping_family(
            space,
            &cover,
            cell,
            &values,
            params.p,
            params.beta,
            level_factor
                * oscillation_threshold(space, &cover.dilated[cell], &values, params),
        ) {
            Ok(family) => family,
            Err(_) => continue, // constant-on-cell functions have no level to stop at
        };
        families += 1;
        let upper = 2.0 * 32.0 * c_mu.powf(5.0 / params.p) * family.level;
        let mut ball_docs = Vec::new();
        for stop in &family.balls {
            total_balls += 1;
            if stop.oscillation <= family.level || stop.oscillation > upper {
                findings = true;
            }
            ball_docs.push(obj(vec![
                ("center", i(stop.ball.center)),
                ("radius", f(stop.ball.radius)),
                ("points", i(stop.ball.point_count())),
                ("oscillation", f(stop.oscillation)),
                ("parent_oscillation", f(stop.parent_oscillation)),
            ]));
            csv.push(format!(
                "{cell},{},{},{},{},{}",
                csv_float(family.level),
                stop.ball.center,
                csv_float(stop.ball.radius),
                csv_float(stop.oscillation),
                csv_float(stop.parent_oscillation)
            ));
            plot.push(format!(
                "{cell} {} {}",
                csv_float(family.level),
                csv_float(stop.oscillation)
            ));
        }
        cell_docs.push(obj(vec![
            ("cell", i(cell)),
            ("threshold", f(family.threshold)),
            ("level", f(family.level)),
            ("steps", i(family.steps.len())),
            ("balls", arr(ball_docs)),
        ]));
    }
    let payload = obj(vec![
        ("p", f(params.p)),
        ("beta", f(params.beta)),
        ("cw", f(params.cw)),
        ("level_factor", f(level_factor)),
        ("function", function_doc),
        ("base", ball_doc(&base)),
        ("cells", arr(cell_docs)),
    ]);
    Ok(CommandOutput {
        summary: format!(
            "stopping: {families} families over {} cells, {total_balls} balls at level {level_factor}x",
            cover.cells.len()
        ),
        findings,
        payload,
        csv,
        plot: vec![("balls".to_string(), plot)],
    })
}

/// Normalized p-oscillation of a ball, matching the stopping threshold.
fn oscillation_threshold(
    space: &sharpmax::Space64,
    ball: &Ball64,
    values: &[f64],
    params: &Params,
) -> f64 {
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
        integral += space.measure(idx) * (values[idx] - mean).abs().powf(params.p);
    }
    (integral / mass).powf(1.0 / params.p) / ball.set_diam.powf(params.beta)
}
