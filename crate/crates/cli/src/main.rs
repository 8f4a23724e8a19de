//! `poissonkit`: runs check suites over JSON bundles and prints one JSON
//! object per check, sorted by name, followed by a summary line.
//!
//! Exit codes: 0 all checks pass, 1 some check failed, 2 usage or schema error.

mod suites;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use poissonkit::action::{
    check_42, check_poisson_action, check_prop52, check_structure_preserved, gamma, gamma_checks,
    isotropy_and_annihilator, momentum_check, momentum_kernel_image, plane, tangential_check,
    GroupRelation, LinearPoissonAction, MomentumMap,
};
use poissonkit::bialgebra::{schouten_wedge_bracket, validate_bialgebra, LieBialgebra};
use poissonkit::json::{parse, ActionBundle, BialgebraBundle, LieBundle, LieJson, PoissonBundle};
use poissonkit::lie::{cohomology_dim, JacobiReport, LieAlgebra, LieModule};
use poissonkit::linalg::Matrix;
use poissonkit::poisson::{
    casimir_check, hamiltonian_flow, jacobi_check, lie_poisson, stratify_sample, FlowOptions,
    StratifyOptions,
};
use poissonkit::sampling::{Sampler, SamplerConfig};
use poissonkit::scalar::{parse_rational, rational_to_f64};
use poissonkit::{MultiPoly, Rational};

#[derive(Parser)]
#[command(
    name = "poissonkit",
    version,
    about = "Exact checks for Poisson geometry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON bundle to check.
    #[arg(long)]
    bundle: Option<PathBuf>,
    /// Built-in bundle name; an unknown name lists the available ones.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of sampled points or group elements.
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Write the report (or, for `flow`, the CSV) here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add wall-clock milliseconds to each record.
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Jacobi identity, Lie–Poisson agreement and low cohomology.
    CheckLie(Common),
    /// Jacobi on both sides and the cocycle condition.
    CheckBialgebra(Common),
    /// Jacobi for a polynomial bivector and registered Casimirs.
    CheckPoisson(Common),
    /// Rank histogram over sampled points.
    Stratify(Common),
    /// Hamiltonian flow as CSV with a trailing drift summary.
    Flow {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
    },
    /// Poisson action identity, tangency and the dual-bracket identity.
    CheckAction(Common),
    /// Momentum condition, equivariance cocycle and pointwise identities.
    Momentum(Common),
    /// The SL(2) plane example end to end.
    Example51 {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "0,2,0", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        c: String,
    },
}

#[derive(Serialize)]
struct Record {
    name: String,
    passed: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    skipped: bool,
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual_poly: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witnesses: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<f64>,
}

impl Record {
    fn new(name: impl Into<String>, passed: bool, mode: &'static str) -> Self {
        Record {
            name: name.into(),
            passed,
            skipped: false,
            mode,
            residual_poly: None,
            residual_norm: None,
            witnesses: None,
            detail: None,
            wall_ms: None,
        }
    }

    fn skip(name: impl Into<String>, reason: impl Into<String>) -> Self {
        let mut r = Record::new(name, false, "skipped");
        r.skipped = true;
        r.detail = Some(json!({ "reason": reason.into() }));
        r
    }

    fn poly(mut self, v: Value) -> Self {
        self.residual_poly = Some(v);
        self
    }

    fn norm(mut self, v: f64) -> Self {
        self.residual_norm = Some(v);
        self
    }

    fn witnesses(mut self, v: Value) -> Self {
        self.witnesses = Some(v);
        self
    }

    fn detail(mut self, v: Value) -> Self {
        self.detail = Some(v);
        self
    }
}

type CliResult<T> = Result<T, String>;

fn err(e: poissonkit::Error) -> String {
    e.to_string()
}

struct Reporter {
    records: Vec<Record>,
    timings: bool,
}

impl Reporter {
    fn new(timings: bool) -> Self {
        Reporter {
            records: Vec::new(),
            timings,
        }
    }

    /// Runs `f` and records its output, timing it when asked.
    fn run(&mut self, f: impl FnOnce() -> CliResult<Vec<Record>>) -> CliResult<()> {
        let t = Instant::now();
        let mut recs = f()?;
        let ms = t.elapsed().as_secs_f64() * 1e3;
        for r in &mut recs {
            if self.timings {
                r.wall_ms = Some(ms);
            }
        }
        self.records.extend(recs);
        Ok(())
    }

    fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    fn finish(mut self, out: Option<&PathBuf>) -> CliResult<ExitCode> {
        self.records.sort_by(|a, b| a.name.cmp(&b.name));
        let passed = self.records.iter().filter(|r| r.passed).count();
        let skipped = self.records.iter().filter(|r| r.skipped).count();
        let failed = self.records.len() - passed - skipped;
        let code = if failed == 0 { 0 } else { 1 };
        let mut text = String::new();
        for r in &self.records {
            text.push_str(&serde_json::to_string(r).map_err(|e| e.to_string())?);
            text.push('\n');
        }
        let summary = json!({"summary": {"checks": self.records.len(), "passed": passed, "failed": failed,
                                         "skipped": skipped, "exit": code}});
        text.push_str(&summary.to_string());
        text.push('\n');
        emit(out, &text)?;
        Ok(ExitCode::from(code))
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    }
}

fn load_bundle(command: &str, c: &Common) -> CliResult<String> {
    match (&c.bundle, &c.suite) {
        (Some(p), None) => fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display())),
        (None, Some(name)) => match suites::lookup(command, name) {
            Some(v) => Ok(v.to_string()),
            None => Err(format!(
                "unknown suite {name:?} for {command}; available: {}",
                suites::names(command).join(", ")
            )),
        },
        (Some(_), Some(_)) => Err("give either --bundle or --suite, not both".into()),
        (None, None) => Err(format!("{command} needs --bundle PATH or --suite NAME")),
    }
}

fn shown(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn jacobi_record(name: &str, rep: &JacobiReport) -> Record {
    let w: Vec<Value> = rep
        .violations
        .iter()
        .map(|v| json!({"triple": [v.indices.0, v.indices.1, v.indices.2], "residual": shown(&v.residual)}))
        .collect();
    let mut r = Record::new(name, rep.holds, "exact");
    if !w.is_empty() {
        r = r.witnesses(Value::Array(w));
    }
    r
}

fn cmd_check_lie(c: &Common) -> CliResult<ExitCode> {
    let text = load_bundle("check-lie", c)?;
    let l = match parse::<LieBundle>(&text) {
        Ok(b) => b.algebra.resolve(),
        Err(_) => parse::<LieJson>(&text).and_then(|j| j.to_algebra()),
    }
    .map_err(err)?;
    let mut rep = Reporter::new(c.timings);
    let jac = l.check_jacobi();
    rep.run(|| {
        let lp = jacobi_check(&lie_poisson(&l)).map_err(err)?;
        Ok(vec![
            jacobi_record("jacobi", &jac),
            Record::new("lie_poisson_agrees", lp.holds == jac.holds, "exact").detail(
                json!({"lie_poisson_jacobi": lp.holds, "structure_constants_jacobi": jac.holds}),
            ),
        ])
    })?;
    if jac.holds {
        rep.run(|| {
            let d = |m: &LieModule, p| cohomology_dim(&l, m, p).map_err(err);
            let (t, a) = (LieModule::trivial(&l, 1), LieModule::adjoint(&l));
            Ok(vec![Record::new("cohomology", true, "exact").detail(
                json!({
                    "trivial": {"H1": d(&t, 1)?, "H2": d(&t, 2)?},
                    "adjoint": {"H1": d(&a, 1)?, "H2": d(&a, 2)?},
                }),
            )])
        })?;
    } else {
        rep.push(Record::skip(
            "cohomology",
            "structure constants violate Jacobi",
        ));
    }
    rep.finish(c.out.as_ref())
}

fn cmd_check_bialgebra(c: &Common) -> CliResult<ExitCode> {
    let b = parse::<BialgebraBundle>(&load_bundle("check-bialgebra", c)?).map_err(err)?;
    let mut rep = Reporter::new(c.timings);
    let (bi, r) = match &b {
        BialgebraBundle::Coboundary(r) => {
            let r = r.to_r().map_err(err)?;
            (LieBialgebra::from_r(&r).map_err(err)?, Some(r))
        }
        BialgebraBundle::Explicit { primal, dual } => (
            LieBialgebra::explicit(primal.resolve().map_err(err)?, dual.resolve().map_err(err)?)
                .map_err(err)?,
            None,
        ),
    };
    rep.run(|| {
        let v = validate_bialgebra(&bi).map_err(err)?;
        let d = bi.dual.dim();
        let brackets: Vec<Value> = (0..d)
            .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
            .map(|(i, j)| json!({"i": i, "j": j, "result": shown(&bi.dual.bracket_basis(i, j))}))
            .collect();
        let cw: Vec<Value> = v
            .cocycle
            .iter()
            .map(|c| json!({"pair": [c.pair.0, c.pair.1]}))
            .collect();
        let mut cocycle = Record::new("cocycle", v.cocycle_holds(), "exact");
        if !cw.is_empty() {
            cocycle = cocycle.witnesses(Value::Array(cw));
        }
        Ok(vec![
            jacobi_record("primal_jacobi", &v.primal_jacobi),
            jacobi_record("dual_jacobi", &v.dual_jacobi).detail(json!({"brackets": brackets})),
            cocycle,
        ])
    })?;
    match &r {
        Some(r) => rep.run(|| {
            let s = schouten_wedge_bracket(r).map_err(err)?;
            let comps: Vec<Value> = s
                .bracket
                .nonzero()
                .iter()
                .map(|(idx, v)| json!({"ijk": idx, "value": v.to_string()}))
                .collect();
            Ok(vec![Record::new(
                "schouten_invariant",
                s.invariant,
                "exact",
            )
            .poly(Value::Array(comps))
            .witnesses(json!(s
                .violations
                .iter()
                .map(|(p, _)| *p)
                .collect::<Vec<_>>()))])
        })?,
        None => rep.push(Record::skip("schouten_invariant", "no r-matrix in bundle")),
    }
    rep.finish(c.out.as_ref())
}

fn poisson_bundle(
    command: &str,
    c: &Common,
) -> CliResult<(PoissonBundle, poissonkit::poisson::PolyBivector)> {
    let b = parse::<PoissonBundle>(&load_bundle(command, c)?).map_err(err)?;
    let pi = b.bivector.to_bivector().map_err(err)?;
    Ok((b, pi))
}

fn casimir_polys(
    b: &PoissonBundle,
    pi: &poissonkit::poisson::PolyBivector,
) -> CliResult<Vec<MultiPoly>> {
    b.casimirs
        .iter()
        .map(|p| {
            p.to_poly()
                .and_then(|p| p.with_vars(pi.vars()))
                .map_err(err)
        })
        .collect()
}

fn cmd_check_poisson(c: &Common) -> CliResult<ExitCode> {
    let (b, pi) = poisson_bundle("check-poisson", c)?;
    let mut rep = Reporter::new(c.timings);
    rep.run(|| {
        let j = jacobi_check(&pi).map_err(err)?;
        let cyc: Vec<Value> = j
            .cyclic
            .iter()
            .map(|((i, k, l), p)| json!({"triple": [i, k, l], "poly": p.to_string()}))
            .collect();
        let mut r = Record::new("jacobi", j.holds, "exact");
        if !cyc.is_empty() {
            r = r.poly(Value::Array(cyc));
        }
        Ok(vec![
            r,
            Record::new("jacobi_routes_agree", j.routes_agree, "exact"),
        ])
    })?;
    let cas = casimir_polys(&b, &pi)?;
    for (k, f) in cas.iter().enumerate() {
        rep.run(|| {
            let ok = casimir_check(&pi, f).map_err(err)?;
            Ok(vec![Record::new(format!("casimir_{k}"), ok, "exact")
                .detail(json!({"f": f.to_string()}))])
        })?;
    }
    rep.finish(c.out.as_ref())
}

fn cmd_stratify(c: &Common) -> CliResult<ExitCode> {
    let (b, pi) = poisson_bundle("stratify", c)?;
    let mut rep = Reporter::new(c.timings);
    rep.run(|| {
        let mut cfg = SamplerConfig::new(c.seed);
        cfg.count = c.samples;
        let opts = StratifyOptions {
            pinned: b.exact_points().map_err(err)?,
            exclude_origin: false,
        };
        let s = stratify_sample(&pi, &cfg, &opts).map_err(err)?;
        Ok(vec![Record::new(
            "rank_minors_consistent",
            s.consistent(),
            "exact",
        )
        .detail(
            json!({"samples": s.samples, "histogram": s.histogram, "max_rank": s.max_rank,
                           "max_rank_dominates": s.max_rank_dominates}),
        )
        .witnesses(
            json!({"strata": s.witnesses, "mismatches": s.minor_mismatches}),
        )])
    })?;
    rep.finish(c.out.as_ref())
}

fn cmd_flow(c: &Common, dt: f64, steps: usize) -> CliResult<ExitCode> {
    let (b, pi) = poisson_bundle("flow", c)?;
    let f = b
        .hamiltonian
        .as_ref()
        .ok_or("flow bundle needs \"hamiltonian\"")?
        .to_poly()
        .and_then(|p| p.with_vars(pi.vars()))
        .map_err(err)?;
    let x0 = b.x0.clone().ok_or("flow bundle needs \"x0\"")?;
    let cas = casimir_polys(&b, &pi)?;
    let opts = FlowOptions {
        dt,
        steps,
        ..FlowOptions::default()
    };
    let tr = hamiltonian_flow(&pi, &f, &cas, &x0, &opts).map_err(err)?;
    let tol = b.tolerance.unwrap_or(1e-8);

    let mut csv = String::from("step,t");
    for v in pi.vars().vars() {
        csv.push(',');
        csv.push_str(&v.name);
    }
    csv.push_str(",f");
    for k in 0..cas.len() {
        csv.push_str(&format!(",casimir{k}"));
    }
    csv.push_str(",rank\n");
    for s in &tr.samples {
        let mut row = vec![s.step.to_string(), format!("{:e}", s.t)];
        row.extend(s.x.iter().map(|x| format!("{x:e}")));
        row.push(format!("{:e}", s.f));
        row.extend(s.casimirs.iter().map(|x| format!("{x:e}")));
        row.push(s.rank.map(|r| r.to_string()).unwrap_or_default());
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    let cas_ok = tr.casimir_drift.iter().all(|d| *d < tol);
    let passed = tr.f_drift < tol && cas_ok && tr.rank_constant && !tr.truncated;
    let block = json!({"f_drift": tr.f_drift, "casimir_drift": tr.casimir_drift, "rank_constant": tr.rank_constant,
                       "truncated": tr.truncated, "steps_taken": tr.steps_taken, "tolerance": tol, "passed": passed});
    csv.push_str(&block.to_string());
    csv.push('\n');
    emit(c.out.as_ref(), &csv)?;
    if c.out.is_some() {
        let mut rep = Reporter::new(false);
        rep.push(Record::new("energy_drift", tr.f_drift < tol, "numeric").norm(tr.f_drift));
        let worst = tr.casimir_drift.iter().copied().fold(0.0, f64::max);
        rep.push(Record::new("casimir_drift", cas_ok, "numeric").norm(worst));
        rep.push(Record::new("rank_constant", tr.rank_constant, "exact"));
        rep.push(Record::new("not_truncated", !tr.truncated, "numeric"));
        return rep.finish(None);
    }
    Ok(ExitCode::from(if passed { 0 } else { 1 }))
}

/// Group elements can be sampled when the representation is the defining
/// one of SL(2) or SO(2).
fn sample_group(
    a: &LinearPoissonAction,
    s: &mut Sampler,
    count: usize,
) -> Option<Vec<(Matrix<Rational>, Vec<Rational>)>> {
    if a.pi().dim() != 2 || a.rep().iter().any(|m| m.rows() != 2) {
        return None;
    }
    let flat: Vec<Vec<Rational>> = a
        .rep()
        .iter()
        .map(|m| vec![m[(0, 0)].clone(), m[(0, 1)].clone(), m[(1, 0)].clone()])
        .collect();
    let span = poissonkit::linalg::span_rank(3, &flat).ok()?;
    let traceless = a
        .rep()
        .iter()
        .all(|m| &m[(0, 0)] + &m[(1, 1)] == Rational::from_integer(0.into()));
    let draw: fn(&mut Sampler) -> Matrix<Rational> = match a.relation() {
        GroupRelation::SpecialLinear if traceless && span == 3 => |s| s.sl2(3),
        GroupRelation::SpecialOrthogonal if span == 1 => |s| s.so2(),
        _ => return None,
    };
    Some((0..count).map(|_| (draw(s), s.point(2))).collect())
}

fn points_for(
    b: &ActionBundle,
    n: usize,
    s: &mut Sampler,
    count: usize,
) -> CliResult<Vec<Vec<Rational>>> {
    let p = b.exact_points().map_err(err)?;
    Ok(if p.is_empty() {
        (0..count).map(|_| s.point(n)).collect()
    } else {
        p
    })
}

fn cmd_check_action(c: &Common) -> CliResult<ExitCode> {
    let b = parse::<ActionBundle>(&load_bundle("check-action", c)?).map_err(err)?;
    let a = b.to_action().map_err(err)?;
    let act = a.infinitesimal().map_err(err)?;
    let mut s = Sampler::seeded(c.seed);
    let mut rep = Reporter::new(c.timings);
    let n = a.pi().dim();

    rep.run(|| {
        let sign = act.homomorphism_sign().map_err(err)?;
        Ok(vec![Record::new(
            "homomorphism_sign",
            sign == Some(-1),
            "exact",
        )
        .detail(json!({"sign": sign}))])
    })?;

    let given = b.group_samples().map_err(err)?;
    let samples = if given.is_empty() {
        sample_group(&a, &mut s, c.samples)
    } else {
        Some(given)
    };
    match (samples, a.r_matrix()) {
        (Some(samples), _) => rep.run(|| {
            let r = check_poisson_action(&a, &samples).map_err(err)?;
            let w = serde_json::to_value(&r.failures).map_err(|e| e.to_string())?;
            Ok(vec![Record::new("poisson_action", r.passes(), "exact")
                .detail(json!({"samples": r.samples, "failures": r.failures.len()}))
                .witnesses(w)])
        })?,
        (None, None) => rep.run(|| {
            let p = check_structure_preserved(a.pi(), &act).map_err(err)?;
            let w: Vec<Value> =
                p.residuals.iter().map(|(i, r)| json!({"generator": i, "lie_derivative": format!("{r:?}")})).collect();
            Ok(vec![Record::new("poisson_action", p.preserved(), "infinitesimal").witnesses(Value::Array(w))])
        })?,
        (None, Some(_)) => rep.push(Record::skip(
            "poisson_action",
            "no group samples in bundle and the representation is not the defining one of SL(2) or SO(2)",
        )),
    }

    let pts = points_for(&b, n, &mut s, c.samples)?;
    rep.run(|| {
        let t = tangential_check(a.pi(), &act, &pts).map_err(err)?;
        let w: Vec<Value> = t
            .failures
            .iter()
            .map(|(p, i)| json!({"point": p, "generator": i}))
            .collect();
        Ok(vec![Record::new("tangential", t.passes(), "sampled")
            .detail(json!({"points": t.points}))
            .witnesses(Value::Array(w))])
    })?;

    match a.r_matrix() {
        Some(r) => {
            let dual = poissonkit::bialgebra::dual_algebra_from_r(r).map_err(err)?;
            rep.run(|| {
                let vars = a.pi().vars();
                let mut fs: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(vars, i)).collect();
                if n <= 3 {
                    for i in 0..n {
                        for j in i..n {
                            fs.push(&MultiPoly::var(vars, i) * &MultiPoly::var(vars, j));
                        }
                    }
                }
                let mut bad = Vec::new();
                for f in &fs {
                    for g in &fs {
                        if !check_42(a.pi(), &act, &dual, f, g).map_err(err)?.holds() {
                            bad.push(json!([f.to_string(), g.to_string()]));
                        }
                    }
                }
                Ok(vec![Record::new(
                    "dual_bracket_identity",
                    bad.is_empty(),
                    "exact",
                )
                .witnesses(Value::Array(bad))])
            })?;
            rep.run(|| {
                let preserved = check_structure_preserved(a.pi(), &act).map_err(err)?.preserved();
                let mut non_abelian = Vec::new();
                for p in &pts {
                    let iso = isotropy_and_annihilator(&act, &dual, p).map_err(err)?;
                    if !iso.abelian {
                        non_abelian.push(shown(p));
                    }
                }
                Ok(vec![Record::new("annihilator_abelian", !preserved || non_abelian.is_empty(), "exact")
                    .detail(json!({"action_preserves_pi": preserved, "non_abelian_points": non_abelian.len()}))
                    .witnesses(json!(non_abelian.into_iter().take(5).collect::<Vec<_>>()))])
            })?;
        }
        None => {
            rep.push(Record::skip(
                "dual_bracket_identity",
                "no r-matrix: dual bracket is zero",
            ));
            rep.push(Record::skip(
                "annihilator_abelian",
                "no r-matrix: dual bracket is zero",
            ));
        }
    }
    rep.finish(c.out.as_ref())
}

fn cmd_momentum(c: &Common) -> CliResult<ExitCode> {
    let b = parse::<ActionBundle>(&load_bundle("momentum", c)?).map_err(err)?;
    let a = b.to_action().map_err(err)?;
    if !a.trivial_group_structure() {
        return Err("momentum maps are supported for a zero r-matrix only".into());
    }
    let act = a.infinitesimal().map_err(err)?;
    let comps = b
        .momentum_polys(a.pi().vars())
        .map_err(err)?
        .ok_or("momentum bundle needs \"momentum\"")?;
    let m = MomentumMap::exact(comps);
    let l: &LieAlgebra = a.algebra();
    let tol = b.tolerance.unwrap_or(1e-6);
    let mut s = Sampler::seeded(c.seed);
    let n = a.pi().dim();
    let mut rep = Reporter::new(c.timings);

    rep.run(|| {
        let r = momentum_check(a.pi(), &act, &m, &[], tol).map_err(err)?;
        Ok(vec![
            Record::new("momentum_condition", r.passes, "exact").poly(json!(r.residuals))
        ])
    })?;
    rep.run(|| {
        let g = gamma(a.pi(), l, &m).map_err(err)?;
        let gc = gamma_checks(a.pi(), l, &m, &g).map_err(err)?;
        let entries: Vec<Value> = g
            .entries()
            .map(|((i, j), p)| json!({"i": i, "j": j, "gamma": p.to_string()}))
            .collect();
        let class_ok = !gc.class.solvable || gc.correction_equivariant == Some(true);
        let correction = gc
            .class
            .correction
            .as_ref()
            .map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>());
        Ok(vec![
            Record::new("gamma_routes_agree", gc.routes_agree, "exact"),
            Record::new("gamma_casimir", gc.all_casimir(), "exact")
                .witnesses(json!(gc.non_casimir)),
            Record::new("gamma_closed", gc.closed(), "exact").poly(json!(gc
                .d_star_displayed
                .iter()
                .map(|(t, p)| json!({"triple": [t.0, t.1, t.2], "poly": p.to_string()}))
                .collect::<Vec<_>>())),
            Record::new("gamma_class", class_ok, "exact")
                .poly(Value::Array(entries))
                .detail(json!({
                    "equivariant": g.is_zero(),
                    "coboundary": gc.class.solvable,
                    "correction": correction,
                    "corrected_equivariant": gc.correction_equivariant,
                })),
        ])
    })?;

    let pts = points_for(&b, n, &mut s, c.samples)?;
    rep.run(|| {
        let mut bad = Vec::new();
        let mut degenerate = 0;
        let mut checked = 0;
        for p in &pts {
            match momentum_kernel_image(a.pi(), &act, &m, p) {
                Ok(r) => {
                    checked += 1;
                    if !r.holds() {
                        bad.push(json!({"point": shown(p), "report": r}));
                    }
                }
                Err(poissonkit::Error::Precondition(_)) => degenerate += 1,
                Err(e) => return Err(err(e)),
            }
        }
        let rec = if checked == 0 {
            Record::skip("kernel_image", "no symplectic points among the samples")
        } else {
            Record::new("kernel_image", bad.is_empty(), "exact")
                .detail(json!({"checked": checked, "degenerate_skipped": degenerate}))
                .witnesses(Value::Array(bad))
        };
        Ok(vec![rec])
    })?;
    rep.run(|| {
        let mut bad = Vec::new();
        let mut unverified = 0;
        for p in &pts {
            let r = check_prop52(&act, &m, p, Some(&mut s), 4).map_err(err)?;
            if !r.holds {
                bad.push(json!({"point": shown(p), "report": r}));
            }
            if r.locally_minimal != Some(true) {
                unverified += 1;
            }
        }
        Ok(vec![Record::new(
            "isotropy_bracket",
            bad.is_empty(),
            "exact",
        )
        .detail(json!({"points": pts.len(), "local_minimality_unverified": unverified}))
        .witnesses(Value::Array(bad))])
    })?;
    rep.finish(c.out.as_ref())
}

fn parse_lambda(s: &str) -> CliResult<[Rational; 3]> {
    let v: Vec<Rational> = s
        .split(',')
        .map(|t| parse_rational(t.trim()))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    v.try_into()
        .map_err(|_| format!("--lambda needs three comma-separated values, got {s:?}"))
}

fn cmd_example51(c: &Common, lambda: &str, cval: &str) -> CliResult<ExitCode> {
    let l = parse_lambda(lambda)?;
    let cv = parse_rational(cval.trim()).map_err(err)?;
    let cfg = plane::Example51Config {
        seed: c.seed,
        samples: c.samples,
        ..Default::default()
    };
    let t = Instant::now();
    let report = plane::run_example51(&l, &cv, &cfg).map_err(err)?;
    let ms = t.elapsed().as_secs_f64() * 1e3;
    let mut rep = Reporter::new(false);
    for chk in &report.checks {
        let mode = match chk.name.as_str() {
            "action_numeric" | "m_h_power_law" | "m_h_log" => "numeric",
            "tangency_consistent" => "sampled",
            _ => "exact",
        };
        let mut r = Record::new(chk.name.clone(), chk.passed, mode).detail(chk.detail.clone());
        if let Some(x) = chk.detail.get("max_residual").and_then(Value::as_f64) {
            r = r.norm(x);
        }
        if c.timings {
            r.wall_ms = Some(ms);
        }
        rep.push(r);
    }
    for (name, why) in &report.skipped {
        rep.push(Record::skip(name.clone(), why.clone()));
    }
    rep.push(Record::new("parameters", true, "exact").detail(json!({
        "lambda": report.lambda, "c": report.c, "h": report.h,
        "tangency_inequality": plane::tangency_inequality(&l, &cv),
        "lambda_f64": l.iter().map(rational_to_f64).collect::<Vec<_>>(),
    })));
    rep.finish(c.out.as_ref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::CheckLie(c) => cmd_check_lie(c),
        Command::CheckBialgebra(c) => cmd_check_bialgebra(c),
        Command::CheckPoisson(c) => cmd_check_poisson(c),
        Command::Stratify(c) => cmd_stratify(c),
        Command::Flow { common, dt, steps } => cmd_flow(common, *dt, *steps),
        Command::CheckAction(c) => cmd_check_action(c),
        Command::Momentum(c) => cmd_momentum(c),
        Command::Example51 { common, lambda, c } => cmd_example51(common, lambda, c),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("{}", json!({ "error": msg }));
            ExitCode::from(2)
        }
    }
}
