//! Runs the configured tasks and assembles the report.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::curvature::{classify_ecs, olszak_distribution, OlszakStatus};
use crate::homogeneity::{build_homogeneous_witness, homogeneity_criterion, HomogeneityError, HomogeneityVerdict};
use crate::model::{ChartPoint, ModelData};
use crate::scalar::{parse_f, Mode, Rational, Scalar};
use crate::symmetry::{
    basis_construct, check_equivariance, construct_invariant_primitive, holonomy_group, period_integral,
    random_closed_space, scaling_residual, verify_isometry, AffineMap, GeometricMean, HolonomyClass,
    SampledFunctionSpace,
};

use super::config::{BasisSpec, RunConfig, Task};
use super::identities::{evaluate_points, totals};
use super::random::{random_model, random_points, sweep_samples};
use super::report::{Check, ModelSummary, Report, Section};

/// Tolerance for float-evaluated laws and primitives.
pub const LAW_TOL: f64 = 1e-9;

pub const ISOMETRY: &str = "γ*g = g";
pub const PULLBACK_N: &str = "γ*∂_n = q ∂_n";

/// Sample points of a run, drawn from the run's seed.
pub fn run_points(config: &RunConfig) -> Vec<ChartPoint<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    random_points(&mut rng, &config.samples, config.model.interval(), config.model.n() - 2)
}

fn distinct_ts(points: &[ChartPoint<Rational>]) -> Vec<Rational> {
    let mut ts: Vec<Rational> = points.iter().map(|p| p.t.clone()).collect();
    ts.sort();
    ts.dedup();
    ts
}

fn lift_to<S: Scalar>(points: &[ChartPoint<Rational>]) -> Vec<ChartPoint<S>> {
    points.iter().map(|p| p.map(S::from_rational)).collect()
}

fn verify_task<S: Scalar>(config: &RunConfig, points: &[ChartPoint<Rational>]) -> Section {
    let view = config.model.view::<S>();
    let pts = lift_to::<S>(points);
    let items = match evaluate_points(&view, &pts) {
        Ok(items) => items,
        Err(e) => return Section::failed("verify", e),
    };
    let t = totals(&items, false);
    let mut checks = t.checks.clone();
    for (k, w) in config.deck.iter().enumerate() {
        let witness = match w.map(&config.model.gram().convert(S::from_rational), S::from_rational) {
            Ok(w) => w,
            Err(e) => return Section::failed("verify", e),
        };
        match verify_isometry(&view, &witness, &pts) {
            Ok(r) => checks.push(Check::residual(&format!("deck-isometry-{k}"), ISOMETRY, &r)),
            Err(e) => return Section::failed("verify", format!("deck generator {k}: {e}")),
        }
        let pulled = w.pullback_multiplier_of_last_coordinate().map(|m| m == w.q).unwrap_or(false);
        checks.push(Check::holds(&format!("deck-pullback-{k}"), PULLBACK_N, pulled));
    }
    Section::new("verify", checks, serde_json::to_value(&t).expect("totals serialize"))
}

fn classify_task<S: Scalar>(config: &RunConfig, points: &[ChartPoint<Rational>]) -> Section {
    let view = config.model.view::<S>();
    let pts = lift_to::<S>(points);
    let verdict = match classify_ecs(&view, &pts) {
        Ok(v) => v,
        Err(e) => return Section::failed("classify", e),
    };
    let olszak: Result<Vec<_>, _> = pts.par_iter().map(|p| olszak_distribution(&view, p)).collect();
    let olszak = match olszak {
        Ok(o) => o,
        Err(e) => return Section::failed("classify", e),
    };
    let null_with_dn = olszak
        .iter()
        .all(|o| o.status == OlszakStatus::Degenerate || (matches!(o.status, OlszakStatus::RankOne | OlszakStatus::RankTwo) && o.contains_last_coordinate));
    let mut statuses: Vec<OlszakStatus> = olszak.iter().map(|o| o.status).collect();
    statuses.dedup();
    let checks = vec![
        Check::holds("parallel-weyl", "∇W = 0", verdict.weyl_parallel),
        Check::holds("local-symmetry-locus", "∇R = 0 ⇔ ḟ = 0", verdict.local_symmetry_matches_f_dot),
        Check::holds("olszak-null", "D null, ∂_n ∈ D", null_with_dn),
    ];
    let details = json!({
        "is_ecs": verdict.is_ecs,
        "conformally_flat": verdict.conformally_flat,
        "locally_symmetric_locus": verdict.locus_description(),
        "olszak_rank": verdict.olszak_rank,
        "olszak_status": statuses,
        "rank_one_certificate": olszak.iter().all(|o| o.is_rank_one_certificate()),
        "points": pts.len(),
    });
    Section::new("classify", checks, details)
}

fn verdict_json(v: &HomogeneityVerdict) -> serde_json::Value {
    serde_json::to_value(v).expect("verdict serializes")
}

fn homogeneity_task<S: Scalar>(config: &RunConfig, points: &[ChartPoint<Rational>]) -> Section {
    let model = &config.model;
    let ts = distinct_ts(points);
    let lifted: Vec<S> = ts.iter().map(S::from_rational).collect();
    let verdict = match homogeneity_criterion(model.f(), model.interval(), &lifted) {
        Ok(v) => v,
        Err(e) => return Section::failed("homogeneity", e),
    };
    let mut checks = vec![
        Check::holds("ii-implies-iii", "(ii) ⇒ (iii)", !verdict.criterion_ii || verdict.criterion_iii),
        Check::holds(
            "canonical-implies-iii",
            "f = ε(t-b)^-2 ⇒ (|f|^-1/2)¨ = 0",
            verdict.canonical.is_none() || verdict.criterion_iii,
        ),
    ];
    let other = match S::MODE {
        Mode::Exact => homogeneity_criterion(model.f(), model.interval(), &ts.iter().map(|t| t.to_f64()).collect::<Vec<_>>()),
        Mode::Float => homogeneity_criterion(model.f(), model.interval(), &ts),
    };
    let agreement = other.as_ref().ok().map(|o| {
        o.criterion_ii == verdict.criterion_ii && o.criterion_iii == verdict.criterion_iii && o.canonical == verdict.canonical
    });
    if let Some(agree) = agreement {
        checks.push(Check::holds("mode-agreement", "exact verdict = float verdict", agree));
    }
    let view = model.view::<Rational>();
    let mut witnesses = Vec::new();
    let mut refused_all = true;
    for q in &config.homogeneity_q {
        match build_homogeneous_witness(model, q) {
            Ok(w) => {
                if *q != Rational::from_integer(1.into()) {
                    refused_all = false;
                }
                match verify_isometry(&view, &w, points) {
                    Ok(r) => checks.push(Check::residual(&format!("witness-q={q}"), ISOMETRY, &r)),
                    Err(e) => checks.push(Check {
                        name: format!("witness-q={q}"),
                        identity: ISOMETRY.into(),
                        passed: false,
                        residual: e.to_string(),
                        tolerance: "0 (exact)".into(),
                    }),
                }
                witnesses.push(json!({
                    "q": q.to_string(),
                    "p": w.p.to_string(),
                    "c": w.c.to_string(),
                    "b": w.b.matrix().to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                }));
            }
            Err(e @ (HomogeneityError::NoWitness(_) | HomogeneityError::NonCanonical(_))) => {
                witnesses.push(json!({ "q": q.to_string(), "none": e.to_string() }));
            }
            Err(e) => return Section::failed("homogeneity", e),
        }
    }
    if model.gram().signature().is_definite() {
        checks.push(Check::holds("definite-no-witness", "⟨·,·⟩ definite ⇒ no dilation witness for q ≠ 1", refused_all));
    }
    let details = json!({
        "verdict": verdict_json(&verdict),
        "float_verdict_error": other.err().map(|e| e.to_string()),
        "witnesses": witnesses,
    });
    Section::new("homogeneity", checks, details)
}

/// The `holonomy` block's generators, or the deck's `t`-actions when the
/// block lists none.
pub fn holonomy_generators(config: &RunConfig) -> Vec<AffineMap> {
    if config.holonomy.generators.is_empty() {
        config.deck.iter().map(|w| AffineMap::new(w.q.clone(), w.p.clone())).collect()
    } else {
        config.holonomy.generators.clone()
    }
}

fn holonomy_task(config: &RunConfig, points: &[ChartPoint<Rational>]) -> Section {
    let gens = holonomy_generators(config);
    let t0 = config.holonomy.t0.clone().or_else(|| points.first().map(|p| p.t.clone()));
    let Some(t0) = t0 else {
        return Section::skipped("holonomy", "no base point");
    };
    let r = holonomy_group(&gens, &t0, config.holonomy.max_word_length, config.model.interval());
    let nontrivial = r.multipliers.iter().any(|q| q != "1");
    let checks = vec![Check::holds(
        "dichotomy",
        "H_L trivial or infinite",
        nontrivial == (r.classification == HolonomyClass::Infinite),
    )];
    let details = json!({ "t0": t0.to_string(), "report": r });
    Section::new("holonomy", checks, details)
}

fn functions_task(config: &RunConfig, points: &[ChartPoint<Rational>]) -> Section {
    let Some(gen) = config.deck.first() else {
        return Section::skipped("functions", "no deck generator");
    };
    let model = &config.model;
    let (q, p) = (&gen.q, &gen.p);
    let ts: Vec<Rational> = distinct_ts(points)
        .into_iter()
        .filter(|t| model.interval().contains(&(q * t + p)))
        .collect();
    if ts.is_empty() {
        return Section::failed("functions", "no sample t maps into the interval");
    }
    let laws = match check_equivariance(model, q, p, &ts) {
        Ok(l) => l,
        Err(e) => return Section::failed("functions", e),
    };
    let mut checks: Vec<Check> = laws
        .iter()
        .map(|l| {
            let tol = if l.exact { 0.0 } else { LAW_TOL };
            Check::within(&format!("equivariance q^{}", l.exponent), &l.law, l.residual, tol)
        })
        .collect();
    let t0 = config.functions.t0.clone().unwrap_or_else(|| ts[0].clone());
    let mut classes = Vec::new();
    for text in &config.functions.chi {
        let chi = match parse_f(text) {
            Ok(c) => c,
            Err(e) => return Section::failed("functions", format!("chi = {text}: {e}")),
        };
        let membership = scaling_residual(&|t| chi.eval_jet(t), &|t| chi.eval_jet(t), q, p, -1, 0, &ts)
            .map(|(r, _)| r <= LAW_TOL)
            .unwrap_or(false);
        match period_integral(&chi, q, p, &t0, model.interval()) {
            Ok(period) if period.is_trivial() => match construct_invariant_primitive(&chi, q, p, &t0, model.interval()) {
                Ok(mu) => {
                    checks.push(Check::within(&format!("primitive {text}"), "μ∘γ = μ", mu.invariance_residual, LAW_TOL));
                    classes.push(json!({
                        "chi": text, "in_f": membership, "period": period,
                        "class": "trivial", "constant": mu.constant,
                        "invariance_residual": mu.invariance_residual,
                    }));
                }
                Err(e) => {
                    checks.push(Check::holds(&format!("primitive {text}"), "μ∘γ = μ", false));
                    classes.push(json!({ "chi": text, "error": e.to_string() }));
                }
            },
            Ok(period) => classes.push(json!({
                "chi": text, "in_f": membership, "period": period, "class": "nontrivial",
            })),
            Err(e) => {
                checks.push(Check::holds(&format!("period {text}"), "∫ χ dt over [t0, γ t0]", false));
                classes.push(json!({ "chi": text, "error": e.to_string() }));
            }
        }
    }
    let details = json!({
        "generator": { "q": q.to_string(), "p": p.to_string() },
        "t0": t0.to_string(),
        "laws": laws,
        "classes": classes,
    });
    Section::new("functions", checks, details)
}

/// Checks the basis construction's contract on a function space.
pub fn basis_checks(space: &SampledFunctionSpace) -> Section {
    let b = match basis_construct(space, &GeometricMean) {
        Ok(b) => b,
        Err(e) => return Section::failed("basis-demo", e),
    };
    let size = space.labels.len();
    let positive = b.partition.iter().enumerate().all(|(j, set)| set.iter().all(|&x| b.basis[j][x].is_positive()));
    let vanishing = b
        .partition
        .iter()
        .enumerate()
        .all(|(j, set)| (0..size).filter(|x| !set.contains(x)).all(|x| b.basis[j][x].is_zero()));
    let mut covered: Vec<usize> = b.partition.iter().flatten().copied().chain(b.x0.iter().copied()).collect();
    covered.sort();
    let partition = covered == (0..size).collect::<Vec<_>>() && b.partition.iter().all(|s| !s.is_empty());
    let checks = vec![
        Check::holds("positive-on-block", "χ_j > 0 on X_j", positive),
        Check::holds("vanishing-off-block", "χ_j = 0 off X_j", vanishing),
        Check::holds("partition", "X = X_0 ⊔ X_1 ⊔ … ⊔ X_m", partition),
        Check::holds("dual-evaluation", "χ_j(x_i) = δ_ij", b.evaluation_is_identity),
    ];
    Section::new("basis-demo", checks, serde_json::to_value(&b).expect("basis serializes"))
}

fn basis_task(config: &RunConfig) -> Section {
    let space = match &config.basis {
        BasisSpec::Values(rows) => {
            let size = rows.first().map(|r| r.len()).unwrap_or(0);
            match SampledFunctionSpace::numbered(size, rows.clone()) {
                Ok(s) => s,
                Err(e) => return Section::failed("basis-demo", e),
            }
        }
        BasisSpec::Random { m, size } => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            random_closed_space(&mut rng, *m, *size)
        }
    };
    basis_checks(&space)
}

fn run_task<S: Scalar>(config: &RunConfig, task: Task, points: &[ChartPoint<Rational>]) -> Section {
    match task {
        Task::Verify => verify_task::<S>(config, points),
        Task::Classify => classify_task::<S>(config, points),
        Task::Homogeneity => homogeneity_task::<S>(config, points),
        Task::Holonomy => holonomy_task(config, points),
        Task::Functions => functions_task(config, points),
        Task::BasisDemo => basis_task(config),
    }
}

/// Runs every configured task. Task errors are reported in their section
/// and do not stop other tasks.
pub fn run_suite(config: &RunConfig) -> Report {
    let points = run_points(config);
    let sections = config
        .tasks
        .iter()
        .map(|&task| match config.mode {
            Mode::Exact => run_task::<Rational>(config, task, &points),
            Mode::Float => run_task::<f64>(config, task, &points),
        })
        .collect();
    Report::new(&config.name, config.mode, config.seed, Some(ModelSummary::of(&config.model)), sections)
}

/// A generated model with its sample points.
pub type SampledModel = (ModelData, Vec<ChartPoint<Rational>>);

/// Seeded models with their sample points.
pub fn sweep_models(count: usize, dims: &[usize], seed: u64, points: usize) -> Result<Vec<SampledModel>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count * dims.len());
    for &n in dims {
        for _ in 0..count {
            let m = random_model(&mut rng, n).map_err(|e| e.to_string())?;
            let pts = random_points(&mut rng, &sweep_samples(&m, points), m.interval(), n - 2);
            out.push((m, pts));
        }
    }
    Ok(out)
}

fn sweep_section<S: Scalar>(models: &[SampledModel]) -> Section {
    let evaluated: Result<Vec<_>, _> = models
        .par_iter()
        .map(|(m, pts)| evaluate_points(&m.view::<S>(), &lift_to::<S>(pts)))
        .collect();
    let evaluated = match evaluated {
        Ok(e) => e,
        Err(e) => return Section::failed("sweep", e),
    };
    let all: Vec<_> = evaluated.into_iter().flatten().collect();
    let t = totals(&all, true);
    let summaries: Vec<ModelSummary> = models.iter().map(|(m, _)| ModelSummary::of(m)).collect();
    let details = json!({ "models": summaries, "totals": t });
    Section::new("sweep", t.checks.clone(), details)
}

/// `count` random models per dimension in `dims`, each checked at
/// `points` random chart points.
pub fn random_model_sweep(count: usize, dims: &[usize], seed: u64, mode: Mode, points: usize) -> Report {
    let section = match sweep_models(count, dims, seed, points) {
        Ok(models) => match mode {
            Mode::Exact => sweep_section::<Rational>(&models),
            Mode::Float => sweep_section::<f64>(&models),
        },
        Err(e) => Section::failed("sweep", e),
    };
    let dims_s: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    Report::new(&format!("sweep n={} count={count}", dims_s.join(",")), mode, seed, None, vec![section])
}
