//! Seeded property suites over the whole toolkit. Each check is named
//! `suite.invariant` so failures point at the broken property.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::deform::{self, Verdict};
use crate::error::{Error, Result};
use crate::fock::{complement_projector, CompressedTuple, GradedIdealBasis, DEFAULT_RANK_TOL};
use crate::freealg::FreePoly;
use crate::linalg;
use crate::ncfunc::{self, VarietyKind};
use crate::norms;
use crate::par_map;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteName {
    Ideal,
    Norms,
    Tower,
    NcAxioms,
    Vn,
    Contraction,
}

impl SuiteName {
    pub const ALL: [SuiteName; 6] = [
        SuiteName::Ideal,
        SuiteName::Norms,
        SuiteName::Tower,
        SuiteName::NcAxioms,
        SuiteName::Vn,
        SuiteName::Contraction,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteName::Ideal => "ideal",
            SuiteName::Norms => "norms",
            SuiteName::Tower => "tower",
            SuiteName::NcAxioms => "nc_axioms",
            SuiteName::Vn => "vn",
            SuiteName::Contraction => "contraction",
        }
    }

    // keeps sample streams of different suites apart
    fn stream(&self) -> u64 {
        (*self as u64 + 1) << 32
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteOptions {
    pub suites: Vec<SuiteName>,
    pub samples: usize,
    /// Shift every stored ideal basis entry by this amount before the ideal
    /// suite runs; the suite must then fail.
    pub inject_perturbation: Option<f64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { suites: SuiteName::ALL.to_vec(), samples: 100, inject_perturbation: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub verdict: Verdict,
    pub samples: usize,
    pub failures: usize,
    /// Worst observed value of the checked quantity.
    pub worst: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub warnings: Vec<String>,
    pub verdict: Verdict,
}

impl SuiteReport {
    pub fn failed(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail).collect()
    }
}

/// Aggregates per-sample `(value, ok)` pairs into one check.
fn collect(name: &str, tolerance: f64, samples: Vec<(f64, bool)>) -> CheckResult {
    let failures = samples.iter().filter(|(_, ok)| !ok).count();
    CheckResult {
        name: name.to_string(),
        verdict: Verdict::from_bool(failures == 0),
        samples: samples.len(),
        failures,
        worst: samples.iter().map(|(v, _)| *v).fold(0.0, f64::max),
        tolerance,
    }
}

fn rng_for(seed: u64, suite: SuiteName, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(suite.stream()).wrapping_add(index as u64))
}

fn indices(n: usize) -> Vec<usize> {
    (0..n).collect()
}

pub fn run_suites(options: &SuiteOptions, seed: u64) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let mut warnings = Vec::new();
    if options.suites.is_empty() {
        warnings.push("no suites selected; zero checks run".to_string());
    }
    for &suite in &options.suites {
        let n = options.samples;
        match suite {
            SuiteName::Ideal => checks.extend(ideal_suite(options.inject_perturbation)?),
            SuiteName::Norms => checks.extend(norms_suite(seed, n)?),
            SuiteName::Tower => checks.extend(tower_suite(seed, n)?),
            SuiteName::NcAxioms => checks.extend(nc_axioms_suite(seed, n)?),
            SuiteName::Vn => checks.extend(vn_suite(seed, n)?),
            SuiteName::Contraction => checks.extend(contraction_suite(seed, n)?),
        }
    }
    let ok = checks.iter().all(|c| c.verdict == Verdict::Pass);
    Ok(SuiteReport { seed, checks, warnings, verdict: Verdict::from_bool(ok) })
}

/// Structural invariants of a saturated basis: orthonormal columns, closure
/// under left and right multiplication by letters, idempotent complement
/// projectors, and the known dimensions of the commutator ideal.
fn ideal_suite(perturbation: Option<f64>) -> Result<Vec<CheckResult>> {
    let comm = VarietyKind::Commutator.generator();
    let mut ideal = GradedIdealBasis::saturate(2, &[comm], 4, DEFAULT_RANK_TOL)?;
    if let Some(eps) = perturbation {
        ideal = ideal.perturbed(eps);
    }
    let tol = 1e-12;
    let ortho = (0..=4)
        .map(|m| {
            let v = linalg::orthonormality_defect(ideal.basis(m));
            (v, v <= tol)
        })
        .collect();
    let closure = (1..4)
        .map(|m| {
            let b = ideal.basis(m);
            let mut worst: f64 = 0.0;
            for c in 0..b.ncols() {
                let col = b.column(c).into_owned();
                let n = col.len();
                for j in 0..2 {
                    let mut left = linalg::CVec::zeros(2 * n);
                    left.rows_mut(j * n, n).copy_from(&col);
                    let mut right = linalg::CVec::zeros(2 * n);
                    for (i, z) in col.iter().enumerate() {
                        right[i * 2 + j] = *z;
                    }
                    worst = worst.max(ideal.project_block(m + 1, &left).norm());
                    worst = worst.max(ideal.project_block(m + 1, &right).norm());
                }
            }
            (worst, worst <= 1e-10)
        })
        .collect();
    let idempotent = (0..=4)
        .map(|m| {
            let p = complement_projector(&ideal, m);
            let v = (&p * &p - &p).iter().map(|z| z.norm()).fold(0.0, f64::max);
            (v, v <= tol)
        })
        .collect();
    let dims = ideal
        .dims()
        .iter()
        .enumerate()
        .map(|(m, &k)| {
            let expect = if m == 0 { 0 } else { (1usize << m) - (m + 1) };
            let v = (k as f64 - expect as f64).abs();
            (v, v == 0.0)
        })
        .collect();
    Ok(vec![
        collect("ideal.orthonormality", tol, ortho),
        collect("ideal.closure", 1e-10, closure),
        collect("ideal.projector_idempotent", tol, idempotent),
        collect("ideal.commutator_dims", 0.0, dims),
    ])
}

fn random_ideal(d: usize, max_deg: usize, rng: &mut ChaCha8Rng) -> Result<GradedIdealBasis> {
    let gens: Vec<FreePoly> = (0..rng.random_range(1..=2))
        .map(|_| {
            let deg = rng.random_range(2..=max_deg.max(2));
            ncfunc::random_homogeneous(d, deg, rng)
        })
        .collect();
    GradedIdealBasis::saturate(d, &gens, max_deg.max(2), DEFAULT_RANK_TOL)
}

/// Homogeneous norm identity on the zero ideal, bracket collapse for
/// homogeneous `p` over random ideals, and `lower ≤ upper` in general.
fn norms_suite(seed: u64, n: usize) -> Result<Vec<CheckResult>> {
    let identity = par_map(&indices(n), |&i| -> Result<(f64, bool)> {
        let mut rng = rng_for(seed, SuiteName::Norms, 3 * i);
        let d = rng.random_range(2..=3);
        let deg = rng.random_range(1..=4);
        let p = ncfunc::random_homogeneous(d, deg, &mut rng);
        let op = CompressedTuple::free(d, deg)?.apply_poly(&p)?;
        let err = (norms::op_norm(&op)? - p.coeff_norm()).abs();
        Ok((err, err <= 1e-9))
    })?;
    let collapse = par_map(&indices(n), |&i| -> Result<(f64, bool)> {
        let mut rng = rng_for(seed, SuiteName::Norms, 3 * i + 1);
        let d = 2;
        let deg = rng.random_range(2..=4);
        let ideal = random_ideal(d, deg, &mut rng)?;
        let p = ncfunc::random_homogeneous(d, deg, &mut rng);
        let b = norms::quotient_norm_bracket(&p, Some(&ideal), deg)?;
        let w = b.width().abs();
        Ok((w, w <= 1e-9))
    })?;
    let ordered = par_map(&indices(n), |&i| -> Result<(f64, bool)> {
        let mut rng = rng_for(seed, SuiteName::Norms, 3 * i + 2);
        let d = 2;
        let ideal = random_ideal(d, 3, &mut rng)?;
        let p = ncfunc::random_poly(d, 3, 4, &mut rng);
        let b = norms::quotient_norm_bracket(&p, Some(&ideal), 3)?;
        let excess = (b.lower - b.upper).max(0.0);
        Ok((excess, excess <= 1e-9))
    })?;
    Ok(vec![
        collect("norms.homogeneous_identity", 1e-9, identity),
        collect("norms.bracket_collapse", 1e-9, collapse),
        collect("norms.bracket_ordered", 1e-9, ordered),
    ])
}

fn tower_suite(seed: u64, n: usize) -> Result<Vec<CheckResult>> {
    let samples = par_map(&indices(n), |&i| -> Result<(TowerSample, TowerSample)> {
        let mut rng = rng_for(seed, SuiteName::Tower, i);
        let f = ncfunc::random_poly(2, 4, 5, &mut rng);
        let mut radii: Vec<f64> = (0..3).map(|_| rng.random_range(0.05..0.95)).collect();
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        let rep = deform::tower_check(&f, &radii, None, 4)?;
        let compat = rep.pairs.iter().map(|p| p.compat_rel_err).fold(0.0, f64::max);
        let fixed = deform::tower_check(&f, &[0.3, 0.6, 0.9], None, 4)?;
        let drop = fixed.pairs.iter().map(|p| (p.seminorm_x - p.seminorm_y).max(0.0)).fold(0.0, f64::max);
        Ok((
            (compat, rep.pairs.iter().all(|p| p.compat_ok)),
            (drop, fixed.pairs.iter().all(|p| p.monotone_ok)),
        ))
    })?;
    let (compat, mono): (Vec<_>, Vec<_>) = samples.into_iter().unzip();
    Ok(vec![
        collect("tower.compatibility", deform::COMPAT_REL_TOL, compat),
        collect("tower.monotone", deform::MONOTONE_SLACK, mono),
    ])
}

type TowerSample = (f64, bool);

fn nc_axioms_suite(seed: u64, n: usize) -> Result<Vec<CheckResult>> {
    let samples = par_map(&indices(n), |&i| -> Result<((f64, bool), (f64, bool))> {
        let mut rng = rng_for(seed, SuiteName::NcAxioms, i);
        let d = rng.random_range(1..=3);
        let nx = rng.random_range(1..=4);
        let ny = rng.random_range(1..=4);
        let p = ncfunc::random_poly(d, 4, 4, &mut rng);
        let x = ncfunc::random_tuple(d, nx, &mut rng)?.scaled(0.5);
        let y = ncfunc::random_tuple(d, ny, &mut rng)?.scaled(0.5);
        let s = ncfunc::random_invertible(nx, 100.0, &mut rng);
        let rep = ncfunc::nc_axiom_check(&p, &x, &y, &s, ncfunc::AXIOM_TOL)?;
        Ok((
            (rep.direct_sum_err / rep.direct_sum_scale, rep.direct_sum_ok),
            (rep.similarity_err / rep.similarity_scale, rep.similarity_ok),
        ))
    })?;
    let (sum, sim): (Vec<_>, Vec<_>) = samples.into_iter().unzip();
    Ok(vec![
        collect("nc_axioms.direct_sum", ncfunc::AXIOM_TOL, sum),
        collect("nc_axioms.similarity", ncfunc::AXIOM_TOL, sim),
    ])
}

fn vn_suite(seed: u64, n: usize) -> Result<Vec<CheckResult>> {
    let sym = FreePoly::from_real(2, &[(&[1, 2], 1.0), (&[2, 1], 1.0)])?;
    let samples = par_map(&indices(n), |&i| -> Result<(f64, bool)> {
        let mut rng = rng_for(seed, SuiteName::Vn, i);
        let size = rng.random_range(1..=4);
        let target = rng.random_range(0.1..=1.0);
        let x = ncfunc::random_row_contraction(2, size, target, &mut rng)?;
        let p = if i % 2 == 0 { sym.clone() } else { ncfunc::random_poly(2, 4, 5, &mut rng) };
        let rep = ncfunc::vn_check(&p, &x)?;
        Ok(((rep.lhs - rep.rhs).max(0.0), rep.verdict == Verdict::Pass))
    })?;
    Ok(vec![collect("vn.inequality", ncfunc::INEQ_SLACK, samples)])
}

fn contraction_suite(seed: u64, n: usize) -> Result<Vec<CheckResult>> {
    let ideal = GradedIdealBasis::saturate(2, &[VarietyKind::Commutator.generator()], 2, DEFAULT_RANK_TOL)?;
    let q = FreePoly::from_real(2, &[(&[1, 2], 1.0)])?;
    let samples = par_map(&indices(n), |&i| -> Result<(f64, bool)> {
        let size = 1 + i % 4;
        let x = ncfunc::sample_variety_tuple(VarietyKind::Commutator, size, seed.wrapping_add(i as u64))?;
        let rep = ncfunc::variety_contraction_check(&q, &x, &ideal)?;
        let upper = rep.upper.unwrap_or(f64::NAN);
        Ok(((rep.lhs - upper).max(0.0), rep.verdict == Verdict::Pass))
    })?;
    Ok(vec![collect("contraction.commutator", ncfunc::INEQ_SLACK, samples)])
}

/// Parses a suite name as used on the command line.
pub fn parse_suite(name: &str) -> Result<SuiteName> {
    SuiteName::ALL
        .into_iter()
        .find(|s| s.as_str() == name)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{name}'")))
}
