//! One function per subcommand. Each returns the rendered primary output and,
//! when a checked property fails, the violation message.

use ncball::deform::{self, Verdict};
use ncball::ncfunc::{self, MatrixTuple};
use ncball::{norms, suite, Error};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Config, ConfigError};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Core(Error),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Core(Error::NonConvergence { .. }) => 2,
            CliError::Core(Error::DimensionJump { .. }) => 3,
            CliError::Core(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Core(e @ Error::NonConvergence { .. }) => write!(f, "numerical failure: {e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub data: String,
    /// Secondary JSON report (norm-field only).
    pub report: Option<String>,
    pub violation: Option<String>,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn outcome<T: Serialize>(value: &T, violation: Option<String>) -> Outcome {
    Outcome { data: to_json(value), report: None, violation }
}

pub fn ideal_info(cfg: &Config) -> Result<Outcome, CliError> {
    let cutoff = cfg.truncation();
    let ideal = cfg.ideal(cutoff)?;
    let out = json!({
        "d": cfg.d(),
        "cutoff": cutoff,
        "generators": ideal.generators().len(),
        "dims": ideal.dims(),
        "complement_dims": ideal.complement_dims(),
    });
    Ok(outcome(&out, None))
}

pub fn norm(cfg: &Config) -> Result<Outcome, CliError> {
    let p = cfg.poly("norm")?;
    let cutoff = cfg.truncation_for(p)?;
    let ideal = cfg.ideal(cutoff)?;
    let bracket = norms::quotient_norm_bracket(p, Some(&ideal), cutoff)?;
    let mut out = serde_json::to_value(&bracket).expect("bracket serializes");
    out["value"] = bracket.value().map_or(Value::Null, Value::from);
    Ok(outcome(&out, None))
}

pub fn norm_field(cfg: &Config) -> Result<Outcome, CliError> {
    let p = cfg.poly("norm-field")?;
    let cutoff = cfg.truncation_for(p)?;
    let family = cfg.family()?;
    let grid = cfg.grid()?;
    let field = deform::norm_field(&family, p, &grid, cutoff, cfg.rank_tol())?;
    let threshold = cfg.raw.tolerances.jump_threshold.unwrap_or_else(|| grid.default_threshold());
    let report = deform::continuity_report(&field, threshold);
    let violation = (!report.passed()).then(|| {
        let f = &report.flags[0];
        format!(
            "norm field discontinuous: {} flagged pair(s), first between t = {} and t = {} (jump {})",
            report.flags.len(),
            f.t0,
            f.t1,
            f.jump
        )
    });
    let meta = json!({
        "points": grid.len(),
        "truncation": cutoff,
        "rank_tol": cfg.rank_tol(),
        "continuity": report,
    });
    Ok(Outcome { data: field.to_csv(), report: Some(to_json(&meta)), violation })
}

pub fn grassmann_path(cfg: &Config) -> Result<Outcome, CliError> {
    let family = cfg.family()?;
    let grid = cfg.grid()?;
    let g = &cfg.raw.grassmann;
    match deform::grassmann_path(&family, &grid, g.degree, g.modulus, cfg.rank_tol(), g.plucker_cap) {
        Ok(path) => {
            let violation = (path.report.verdict == Verdict::Fail).then(|| {
                format!(
                    "chordal increment {} exceeds modulus {}",
                    path.report.max_chordal, path.report.modulus
                )
            });
            Ok(outcome(&path.report, violation))
        }
        Err(e @ Error::DimensionJump { .. }) => {
            let kernel = deform::kernel_dims(&family, &grid, g.degree, cfg.rank_tol())?;
            Ok(outcome(&json!({ "error": e.to_string(), "kernel": kernel }), Some(e.to_string())))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn tower_check(cfg: &Config) -> Result<Outcome, CliError> {
    let f = cfg.poly("tower-check")?;
    let cutoff = cfg.truncation_for(f)?;
    let ideal = if cfg.raw.generators.is_empty() { None } else { Some(cfg.ideal(cutoff)?) };
    let report = deform::tower_check(f, cfg.radii()?, ideal.as_ref(), cutoff)?;
    let violation = (report.verdict == Verdict::Fail).then(|| {
        let bad = report.pairs.iter().find(|p| !(p.compat_ok && p.monotone_ok)).expect("a failing pair");
        format!("tower check failed for radii ({}, {})", bad.x, bad.y)
    });
    Ok(outcome(&report, violation))
}

fn matrix_record(m: &ncball::linalg::CMat) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push([m[(i, j)].re, m[(i, j)].im]);
        }
    }
    out
}

pub fn eval(cfg: &Config) -> Result<Outcome, CliError> {
    let p = cfg.poly("eval")?;
    let x = cfg.tuple()?;
    let value = ncfunc::eval_poly(p, &x)?;
    let vn = ncfunc::vn_check(p, &x)?;
    let vn_ok = vn.lhs <= vn.rhs + cfg.raw.tolerances.ineq_slack;
    let out = json!({
        "n": x.n(),
        "value": matrix_record(&value),
        "norm": ncfunc::matrix_norm(&value),
        "row_norm": ncfunc::row_norm(&x),
        "vn_bound": vn.rhs,
        "vn_ok": vn_ok,
    });
    let violation = (!vn_ok).then(|| format!("von Neumann bound violated: {} > {}", vn.lhs, vn.rhs));
    Ok(outcome(&out, violation))
}

#[derive(Serialize)]
struct SampleSummary {
    seed: u64,
    samples: usize,
    failures: usize,
    min_margin: Option<f64>,
    verdict: Verdict,
}

pub fn vn_test(cfg: &Config) -> Result<Outcome, CliError> {
    let p = cfg.poly("vn-test")?;
    let s = &cfg.raw.sampling;
    let slack = cfg.raw.tolerances.ineq_slack;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed());
    let mut tuples: Vec<MatrixTuple> = Vec::new();
    if cfg.raw.tuple.is_some() {
        tuples.push(cfg.tuple()?);
    }
    for _ in 0..s.count {
        tuples.push(ncfunc::random_row_contraction(cfg.d(), s.n, s.row_norm, &mut rng)?);
    }
    let mut failures = 0;
    let mut min_margin: Option<f64> = None;
    for x in &tuples {
        let r = ncfunc::vn_check(p, x)?;
        let margin = r.rhs + slack - r.lhs;
        if margin < 0.0 {
            failures += 1;
        }
        min_margin = Some(min_margin.map_or(margin, |m| m.min(margin)));
    }
    let summary = SampleSummary {
        seed: cfg.seed(),
        samples: tuples.len(),
        failures,
        min_margin,
        verdict: Verdict::from_bool(failures == 0),
    };
    let violation = (failures > 0).then(|| format!("von Neumann inequality failed on {failures} sample(s)"));
    Ok(outcome(&summary, violation))
}

pub fn variety_test(cfg: &Config) -> Result<Outcome, CliError> {
    let q = cfg.poly("variety-test")?;
    if cfg.d() != 2 {
        return Err(CliError::Config(format!("d: the variety sampler works over d = 2, got {}", cfg.d())));
    }
    let cutoff = cfg.truncation_for(q)?;
    let ideal = cfg.ideal(cutoff)?;
    let s = &cfg.raw.sampling;
    let slack = cfg.raw.tolerances.ineq_slack;
    let (mut passed, mut failed, mut inapplicable) = (0usize, 0usize, 0usize);
    let mut max_lhs: f64 = 0.0;
    let mut upper = None;
    let mut reasons: Vec<String> = Vec::new();
    for i in 0..s.count {
        let x = ncfunc::sample_variety_tuple(s.variety, s.n, cfg.seed().wrapping_add(i as u64))?;
        let r = ncfunc::variety_contraction_check(q, &x, &ideal)?;
        match r.upper {
            None => {
                inapplicable += 1;
                if let Some(reason) = r.reason {
                    if !reasons.contains(&reason) {
                        reasons.push(reason);
                    }
                }
            }
            Some(u) => {
                upper = Some(u);
                max_lhs = max_lhs.max(r.lhs);
                if r.lhs <= u + slack {
                    passed += 1;
                } else {
                    failed += 1;
                }
            }
        }
    }
    let verdict = if failed > 0 {
        Verdict::Fail
    } else if passed == 0 {
        Verdict::Inapplicable
    } else {
        Verdict::Pass
    };
    if inapplicable > 0 {
        log::warn!("{inapplicable} sample(s) inapplicable: {}", reasons.join("; "));
    }
    let out = json!({
        "seed": cfg.seed(),
        "variety": s.variety,
        "samples": s.count,
        "passed": passed,
        "failed": failed,
        "inapplicable": inapplicable,
        "inapplicable_reasons": reasons,
        "upper": upper,
        "max_lhs": max_lhs,
        "verdict": verdict,
    });
    let violation = (failed > 0).then(|| format!("contraction bound failed on {failed} sample(s)"));
    Ok(outcome(&out, violation))
}

pub fn suite(cfg: &Config) -> Result<Outcome, CliError> {
    let report = suite::run_suites(&cfg.raw.suite, cfg.seed())?;
    for w in &report.warnings {
        log::warn!("{w}");
    }
    let failed = report.failed();
    let violation = (!failed.is_empty()).then(|| {
        let names: Vec<&str> = failed.iter().map(|c| c.name.as_str()).collect();
        format!("property violation: {}", names.join(", "))
    });
    Ok(outcome(&report, violation))
}
