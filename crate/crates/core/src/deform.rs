//! One-parameter families of graded ideals `I_t` and the diagnostics that
//! make the continuity of `t ↦ ‖p + Ī_t‖` observable on a grid: sampled norm
//! fields, jump reports, kernel-dimension semicontinuity, Grassmannian paths
//! of `I_t^m` with Plücker coordinates, per-degree projector increments, and
//! the radius-scaling tower `φ_xy(s_i) = (x/y) s_i`.
//!
//! Grid points are independent; results are always assembled in grid order.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{complement_projector, GradedIdealBasis, DEFAULT_RANK_TOL};
use crate::freealg::{FreePoly, TermRecord, Word};
use crate::linalg::{self, CMat, CVec};
use crate::norms::{self, NormBracket};
use crate::par_map;

/// Plücker vectors are only formed when `C(d^m, k)` is at most this.
pub const DEFAULT_PLUCKER_CAP: usize = 100_000;

/// Strictly increasing sample points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Grid(Vec<f64>);

impl Grid {
    /// `points` equally spaced samples of `[a, b]`, endpoints included. Each
    /// point is computed as `a + (b-a)·i/(n-1)` so refined grids reproduce the
    /// coarse points bit for bit.
    pub fn uniform(a: f64, b: f64, points: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::InvalidGrid("grid needs at least one point".into()));
        }
        if points == 1 {
            return Self::from_points(vec![a]);
        }
        let n = (points - 1) as f64;
        Self::from_points((0..points).map(|i| a + (b - a) * (i as f64) / n).collect())
    }

    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("grid needs at least one point".into()));
        }
        if points.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidGrid("grid points must be finite".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
        }
        Ok(Grid(points))
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest spacing between adjacent points (0 for a single point).
    pub fn max_step(&self) -> f64 {
        self.0.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Default jump threshold: ten grid steps.
    pub fn default_threshold(&self) -> f64 {
        10.0 * self.max_step()
    }
}

/// One term of a generator template: a word with a real polynomial
/// coefficient `c_0 + c_1 t + … + c_r t^r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyTermRecord {
    pub word: Vec<u16>,
    pub coeffs: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
struct GeneratorTemplate {
    degree: usize,
    terms: Vec<(Word, Vec<f64>)>,
}

fn eval_real_poly(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// A family `t ↦ I_t = ⟨g_1(t), …, g_r(t)⟩` of graded ideals over `[a, b]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealFamily {
    d: usize,
    domain: (f64, f64),
    templates: Vec<GeneratorTemplate>,
}

impl IdealFamily {
    /// Every template must use words of a single length `≥ 1`, so each
    /// instantiation is homogeneous for all `t`.
    pub fn new(d: usize, domain: (f64, f64), templates: &[Vec<FamilyTermRecord>]) -> Result<Self> {
        if d == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if !(domain.0 <= domain.1) {
            return Err(Error::InvalidGrid(format!(
                "family domain [{}, {}] is empty",
                domain.0, domain.1
            )));
        }
        let mut out = Vec::with_capacity(templates.len());
        for template in templates {
            let mut degree = None;
            let mut terms = Vec::with_capacity(template.len());
            for rec in template {
                let w = Word::new(rec.word.clone());
                w.validate(d)?;
                match degree {
                    None => degree = Some(w.len()),
                    Some(k) if k != w.len() => return Err(Error::NotHomogeneous),
                    _ => {}
                }
                terms.push((w, rec.coeffs.clone()));
            }
            let Some(degree) = degree else { continue };
            if degree == 0 {
                return Err(Error::InvalidArgument(
                    "family generators must have degree at least 1".into(),
                ));
            }
            out.push(GeneratorTemplate { degree, terms });
        }
        Ok(IdealFamily { d, domain, templates: out })
    }

    /// The constant family with the given generators.
    pub fn constant(d: usize, domain: (f64, f64), generators: &[FreePoly]) -> Result<Self> {
        let templates: Vec<Vec<FamilyTermRecord>> = generators
            .iter()
            .map(|g| {
                if g.terms().any(|(_, c)| c.im != 0.0) {
                    return Err(Error::InvalidArgument(
                        "family coefficients are real polynomials in t".into(),
                    ));
                }
                Ok(g.terms()
                    .map(|(w, c)| FamilyTermRecord { word: w.letters().to_vec(), coeffs: vec![c.re] })
                    .collect())
            })
            .collect::<Result<_>>()?;
        Self::new(d, domain, &templates)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn max_degree(&self) -> usize {
        self.templates.iter().map(|g| g.degree).max().unwrap_or(0)
    }

    pub fn generators_at(&self, t: f64) -> Vec<FreePoly> {
        self.templates
            .iter()
            .map(|g| {
                FreePoly::from_terms(
                    self.d,
                    g.terms
                        .iter()
                        .map(|(w, c)| (w.clone(), Complex64::new(eval_real_poly(c, t), 0.0))),
                )
                .expect("words validated at construction")
            })
            .collect()
    }

    pub fn ideal_at(&self, t: f64, cutoff: usize, rank_tol: f64) -> Result<GradedIdealBasis> {
        GradedIdealBasis::saturate(self.d, &self.generators_at(t), cutoff, rank_tol)
    }

    pub fn check_grid(&self, grid: &Grid) -> Result<()> {
        let (a, b) = self.domain;
        match grid.points().iter().find(|&&t| t < a || t > b) {
            Some(t) => Err(Error::InvalidGrid(format!("grid point {t} outside family domain [{a}, {b}]"))),
            None => Ok(()),
        }
    }
}

/// `I_t = ⟨z1z2 − t·z2z1⟩` over `d = 2`.
pub fn family_qcommutator(domain: (f64, f64)) -> IdealFamily {
    IdealFamily::new(
        2,
        domain,
        &[vec![
            FamilyTermRecord { word: vec![1, 2], coeffs: vec![1.0] },
            FamilyTermRecord { word: vec![2, 1], coeffs: vec![0.0, -1.0] },
        ]],
    )
    .expect("static family is well formed")
}

/// `I_t = ⟨t·(z1z2 − z2z1)⟩`: the commutator ideal for `t ≠ 0`, zero at `t = 0`.
pub fn family_vanishing_commutator(domain: (f64, f64)) -> IdealFamily {
    IdealFamily::new(
        2,
        domain,
        &[vec![
            FamilyTermRecord { word: vec![1, 2], coeffs: vec![0.0, 1.0] },
            FamilyTermRecord { word: vec![2, 1], coeffs: vec![0.0, -1.0] },
        ]],
    )
    .expect("static family is well formed")
}

/// Sampled value of the norm field at one grid point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldPoint {
    pub t: f64,
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
}

/// `t ↦ ‖p + Ī_t‖` sampled on a grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormField {
    pub poly: Vec<TermRecord>,
    pub truncation: usize,
    pub rank_tol: f64,
    pub values: Vec<FieldPoint>,
}

impl NormField {
    pub fn grid(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.t).collect()
    }

    /// `t,lower,upper,exact_flag` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,lower,upper,exact_flag\n");
        for v in &self.values {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{}\n",
                v.t, v.lower, v.upper, v.exact as u8
            ));
        }
        out
    }
}

/// Samples the norm field of `p` over the family. Homogeneous `p` gives exact
/// distances; otherwise each point is a [`NormBracket`] at truncation `cutoff`.
pub fn norm_field(
    family: &IdealFamily,
    p: &FreePoly,
    grid: &Grid,
    cutoff: usize,
    rank_tol: f64,
) -> Result<NormField> {
    if p.d() != family.d() {
        return Err(Error::AlphabetMismatch { left: family.d(), right: p.d() });
    }
    if p.degree() > cutoff as isize {
        return Err(Error::DegreeExceedsCutoff { degree: p.degree() as usize, cutoff });
    }
    family.check_grid(grid)?;
    let values = par_map(grid.points(), |&t| -> Result<FieldPoint> {
        let ideal = family.ideal_at(t, cutoff, rank_tol)?;
        if p.is_zero() || p.homogeneous_degree().is_some() {
            let v = norms::quotient_norm_homog(p, &ideal)?;
            Ok(FieldPoint { t, lower: v, upper: v, exact: true })
        } else {
            let NormBracket { lower, upper, .. } = norms::quotient_norm_bracket(p, Some(&ideal), cutoff)?;
            Ok(FieldPoint { t, lower, upper, exact: false })
        }
    })?;
    Ok(NormField { poly: p.to_records(), truncation: cutoff, rank_tol, values })
}

/// An adjacent grid pair whose value gap exceeds the threshold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JumpFlag {
    pub index: usize,
    pub t0: f64,
    pub t1: f64,
    pub jump: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub threshold: f64,
    pub max_jump: f64,
    /// `max_jump / spacing` over adjacent pairs, an empirical Lipschitz bound.
    pub empirical_lipschitz: f64,
    pub flags: Vec<JumpFlag>,
}

impl ContinuityReport {
    pub fn passed(&self) -> bool {
        self.flags.is_empty()
    }
}

/// Pessimistic gap between two bracketed values.
fn bracket_gap(a: &FieldPoint, b: &FieldPoint) -> f64 {
    if a.exact && b.exact {
        (b.upper - a.upper).abs()
    } else {
        (b.lower - a.upper).max(a.lower - b.upper).max(0.0)
    }
}

/// Flags every adjacent pair whose gap exceeds `threshold`.
pub fn continuity_report(field: &NormField, threshold: f64) -> ContinuityReport {
    let mut report = ContinuityReport {
        threshold,
        max_jump: 0.0,
        empirical_lipschitz: 0.0,
        flags: Vec::new(),
    };
    for (i, w) in field.values.windows(2).enumerate() {
        let jump = bracket_gap(&w[0], &w[1]);
        report.max_jump = report.max_jump.max(jump);
        report.empirical_lipschitz = report.empirical_lipschitz.max(jump / (w[1].t - w[0].t));
        if jump > threshold {
            report.flags.push(JumpFlag { index: i, t0: w[0].t, t1: w[1].t, jump });
        }
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inapplicable,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// `dim I_t^m` along the grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelDims {
    pub degree: usize,
    pub grid: Vec<f64>,
    pub dims: Vec<usize>,
    /// Grid indices with an adjacent point of strictly larger dimension: the
    /// grid-level footprint of a failure of upper semicontinuity.
    pub flagged: Vec<usize>,
    pub verdict: Verdict,
    pub note: &'static str,
}

const GRID_NOTE: &str = "grid-level approximation: neighborhoods are adjacent grid points";

pub fn kernel_dims(family: &IdealFamily, grid: &Grid, m: usize, rank_tol: f64) -> Result<KernelDims> {
    family.check_grid(grid)?;
    let cutoff = m.max(family.max_degree());
    let dims = par_map(grid.points(), |&t| -> Result<usize> {
        Ok(family.ideal_at(t, cutoff, rank_tol)?.dims()[m])
    })?;
    let flagged: Vec<usize> = (0..dims.len())
        .filter(|&i| {
            let left = i.checked_sub(1).map(|j| dims[j]);
            let right = dims.get(i + 1).copied();
            left.into_iter().chain(right).any(|n| n > dims[i])
        })
        .collect();
    Ok(KernelDims {
        degree: m,
        grid: grid.points().to_vec(),
        verdict: Verdict::from_bool(flagged.is_empty()),
        dims,
        flagged,
        note: GRID_NOTE,
    })
}

/// Kernel dimensions reported together with the norm-field continuity of a
/// probe; the semicontinuity lemma only constrains continuous fields.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankContinuityReport {
    pub kernel: KernelDims,
    pub continuity: ContinuityReport,
    /// Either the dimensions pass, or the probe field is itself discontinuous.
    pub consistent: bool,
}

pub fn rank_continuity_report(
    family: &IdealFamily,
    probe: &FreePoly,
    grid: &Grid,
    m: usize,
    cutoff: usize,
    threshold: f64,
    rank_tol: f64,
) -> Result<RankContinuityReport> {
    let kernel = kernel_dims(family, grid, m, rank_tol)?;
    let field = norm_field(family, probe, grid, cutoff.max(m), rank_tol)?;
    let continuity = continuity_report(&field, threshold);
    let consistent = kernel.verdict == Verdict::Pass || !continuity.passed();
    Ok(RankContinuityReport { kernel, continuity, consistent })
}

/// A point of `Gr(k, d^m)`: the subspace `Ev(I_t^m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannPoint {
    pub t: f64,
    pub degree: usize,
    pub basis: CMat,
    pub plucker: Option<Vec<Complex64>>,
}

impl GrassmannPoint {
    pub fn k(&self) -> usize {
        self.basis.ncols()
    }
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    let k = k.min(n - k.min(n));
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Normalized Plücker coordinates of the column span of `basis`: all `k×k`
/// row minors in lexicographic row order, scaled to unit norm with the first
/// nonzero coordinate made real positive. `None` when `C(n, k) > cap`.
pub fn plucker(basis: &CMat, cap: usize) -> Option<Vec<Complex64>> {
    let (n, k) = basis.shape();
    if k > n || binomial(n, k)? > cap {
        return None;
    }
    let mut coords = Vec::new();
    if k == 0 {
        coords.push(Complex64::new(1.0, 0.0));
    } else {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let sub = CMat::from_fn(k, k, |r, c| basis[(idx[r], c)]);
            coords.push(sub.determinant());
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    let norm = coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return None;
    }
    let biggest = coords.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let lead = coords
        .iter()
        .find(|z| z.norm() > 1e-12 * biggest)
        .copied()
        .expect("nonzero vector has a nonzero coordinate");
    let gauge = lead.conj() / (lead.norm() * norm);
    Some(coords.into_iter().map(|z| z * gauge).collect())
}

/// Projective distance `sqrt(1 − |⟨a, b⟩|²)` between unit Plücker vectors,
/// evaluated as `‖b − ⟨a, b⟩a‖` to avoid cancellation near zero.
pub fn plucker_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    a.iter().zip(b).map(|(x, y)| (y - ip * x).norm_sqr()).sum::<f64>().sqrt()
}

/// Chordal distance: sine of the largest principal angle between the spans of
/// two orthonormal bases of equal size. Computed as `‖(I − AA*)B‖`, which
/// equals `sqrt(1 − σ_min(A*B)²)` but keeps its accuracy for nearby spans.
pub fn chordal_distance(a: &CMat, b: &CMat) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::SizeMismatch { expected: a.ncols(), found: b.ncols() });
    }
    if a.ncols() == 0 {
        return Ok(0.0);
    }
    linalg::spectral_norm(&(b - a * a.ad_mul(b)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrassmannPathReport {
    pub degree: usize,
    pub k: usize,
    pub ambient_dim: usize,
    pub grid: Vec<f64>,
    pub chordal: Vec<f64>,
    pub plucker: Option<Vec<f64>>,
    pub max_chordal: f64,
    pub modulus: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrassmannPath {
    pub points: Vec<GrassmannPoint>,
    pub report: GrassmannPathReport,
}

/// Tracks `t ↦ Ev(I_t^m)` in `Gr(k, d^m)`. The dimension must be constant on
/// the grid; the first jump is reported as an error.
pub fn grassmann_path(
    family: &IdealFamily,
    grid: &Grid,
    m: usize,
    modulus: f64,
    rank_tol: f64,
    plucker_cap: usize,
) -> Result<GrassmannPath> {
    family.check_grid(grid)?;
    let cutoff = m.max(family.max_degree());
    let points = par_map(grid.points(), |&t| -> Result<GrassmannPoint> {
        let ideal = family.ideal_at(t, cutoff, rank_tol)?;
        let basis = ideal.basis(m).clone();
        let plucker = plucker(&basis, plucker_cap);
        Ok(GrassmannPoint { t, degree: m, basis, plucker })
    })?;
    for (i, w) in points.windows(2).enumerate() {
        if w[0].k() != w[1].k() {
            return Err(Error::DimensionJump {
                index: i,
                t0: w[0].t,
                t1: w[1].t,
                from: w[0].k(),
                to: w[1].k(),
            });
        }
    }
    let chordal = points
        .windows(2)
        .map(|w| chordal_distance(&w[0].basis, &w[1].basis))
        .collect::<Result<Vec<f64>>>()?;
    let plucker = points
        .iter()
        .all(|p| p.plucker.is_some())
        .then(|| {
            points
                .windows(2)
                .map(|w| plucker_distance(w[0].plucker.as_ref().unwrap(), w[1].plucker.as_ref().unwrap()))
                .collect()
        });
    let max_chordal = chordal.iter().copied().fold(0.0, f64::max);
    let report = GrassmannPathReport {
        degree: m,
        k: points[0].k(),
        ambient_dim: family.d().pow(m as u32),
        grid: grid.points().to_vec(),
        chordal,
        plucker,
        max_chordal,
        modulus,
        verdict: Verdict::from_bool(max_chordal <= modulus),
    };
    Ok(GrassmannPath { points, report })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrongEntry {
    pub degree: usize,
    pub probe: usize,
    pub max_increment: f64,
    /// Index `i` of the pair `(t_i, t_{i+1})` attaining the maximum.
    pub at_index: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrongContinuityReport {
    pub modulus: f64,
    pub probes: usize,
    pub degrees: Vec<usize>,
    pub entries: Vec<StrongEntry>,
    pub verdict: Verdict,
    pub note: &'static str,
}

/// For each degree `m` and probe `p`, the largest increment
/// `‖φ_m(t_{i+1}) Ev(p)_m − φ_m(t_i) Ev(p)_m‖` of the degree-`m` complement
/// projector along the grid. Only the listed probes are covered.
pub fn strong_continuity_check(
    family: &IdealFamily,
    grid: &Grid,
    probes: &[FreePoly],
    degrees: &[usize],
    modulus: f64,
    rank_tol: f64,
) -> Result<StrongContinuityReport> {
    family.check_grid(grid)?;
    if let Some(p) = probes.iter().find(|p| p.d() != family.d()) {
        return Err(Error::AlphabetMismatch { left: family.d(), right: p.d() });
    }
    let cutoff = degrees.iter().copied().max().unwrap_or(0).max(family.max_degree());
    // projected[t][degree slot][probe]
    let projected: Vec<Vec<Vec<CVec>>> = par_map(grid.points(), |&t| -> Result<Vec<Vec<CVec>>> {
        let ideal = family.ideal_at(t, cutoff, rank_tol)?;
        Ok(degrees
            .iter()
            .map(|&m| {
                let proj = complement_projector(&ideal, m);
                probes.iter().map(|p| &proj * p.ev_block(m)).collect()
            })
            .collect())
    })?;
    let mut entries = Vec::new();
    for (slot, &m) in degrees.iter().enumerate() {
        for probe in 0..probes.len() {
            let (at_index, max_increment) = projected
                .windows(2)
                .map(|w| (&w[1][slot][probe] - &w[0][slot][probe]).norm())
                .enumerate()
                .fold((0, 0.0), |best, (i, v)| if v > best.1 { (i, v) } else { best });
            entries.push(StrongEntry { degree: m, probe, max_increment, at_index });
        }
    }
    let ok = entries.iter().all(|e| e.max_increment <= modulus);
    Ok(StrongContinuityReport {
        modulus,
        probes: probes.len(),
        degrees: degrees.to_vec(),
        entries,
        verdict: Verdict::from_bool(ok),
        note: "covers only the listed probes and degrees on this grid",
    })
}

/// `φ_xy`: `s_i ↦ (x/y) s_i`, i.e. `F ↦ F^{x/y}`.
pub fn scaling_map(p: &FreePoly, x: f64, y: f64) -> Result<FreePoly> {
    if !(x > 0.0 && x < y) {
        return Err(Error::RadiusOrder { x, y });
    }
    Ok(p.scale_series(x / y))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TowerPair {
    pub x: f64,
    pub y: f64,
    /// Largest coefficient discrepancy between `F^x` and `(F^y)^{x/y}`,
    /// relative to the coefficient size.
    pub compat_rel_err: f64,
    pub compat_bitwise: bool,
    pub compat_ok: bool,
    pub seminorm_x: f64,
    pub seminorm_y: f64,
    pub monotone_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TowerReport {
    pub radii: Vec<f64>,
    pub seminorms: Vec<f64>,
    pub pairs: Vec<TowerPair>,
    pub verdict: Verdict,
}

pub const COMPAT_REL_TOL: f64 = 1e-14;
pub const MONOTONE_SLACK: f64 = 1e-12;

/// Largest `|a_w − b_w| / max(|a_w|, |b_w|)` over the union of supports, and
/// whether the two polynomials agree bit for bit.
pub fn coefficient_discrepancy(a: &FreePoly, b: &FreePoly) -> (f64, bool) {
    let mut worst: f64 = 0.0;
    for (w, ca) in a.terms() {
        let cb = b.coeff(w);
        let scale = ca.norm().max(cb.norm());
        if scale > 0.0 {
            worst = worst.max((ca - cb).norm() / scale);
        }
    }
    for (w, cb) in b.terms() {
        if a.coeff(w) == Complex64::new(0.0, 0.0) {
            worst = worst.max(if cb.norm() > 0.0 { 1.0 } else { 0.0 });
        }
    }
    (worst, a == b)
}

/// Checks the inverse-system compatibility `θ_x = φ_xy ∘ θ_y` on coefficients
/// and that truncated seminorms grow with the radius, for every pair of radii.
pub fn tower_check(
    f: &FreePoly,
    radii: &[f64],
    ideal: Option<&GradedIdealBasis>,
    cutoff: usize,
) -> Result<TowerReport> {
    if radii.iter().any(|r| !(*r > 0.0)) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("radii must be positive and strictly increasing".into()));
    }
    let seminorms = par_map(radii, |&r| norms::seminorm_trunc(f, r, ideal, cutoff))?;
    let mut pairs = Vec::new();
    for i in 0..radii.len() {
        for j in i + 1..radii.len() {
            let (x, y) = (radii[i], radii[j]);
            let direct = f.scale_series(x);
            let composed = scaling_map(&f.scale_series(y), x, y)?;
            let (rel, bitwise) = coefficient_discrepancy(&direct, &composed);
            pairs.push(TowerPair {
                x,
                y,
                compat_rel_err: rel,
                compat_bitwise: bitwise,
                compat_ok: rel <= COMPAT_REL_TOL,
                seminorm_x: seminorms[i],
                seminorm_y: seminorms[j],
                monotone_ok: seminorms[j] >= seminorms[i] - MONOTONE_SLACK,
            });
        }
    }
    let ok = pairs.iter().all(|p| p.compat_ok && p.monotone_ok);
    Ok(TowerReport { radii: radii.to_vec(), seminorms, pairs, verdict: Verdict::from_bool(ok) })
}

/// Default rank tolerance re-exported for callers that build families.
pub const RANK_TOL: f64 = DEFAULT_RANK_TOL;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(Grid::from_points(vec![0.0, 0.0]).is_err());
        assert!(Grid::from_points(vec![]).is_err());
        assert!(Grid::uniform(0.0, 1.0, 0).is_err());
        let g = Grid::uniform(0.0, 1.0, 101).unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g.points()[100], 1.0);
        let fine = Grid::uniform(0.0, 1.0, 201).unwrap();
        for i in 0..101 {
            assert_eq!(g.points()[i].to_bits(), fine.points()[2 * i].to_bits());
        }
    }

    #[test]
    fn family_rejects_mixed_degrees() {
        let bad = IdealFamily::new(
            2,
            (0.0, 1.0),
            &[vec![
                FamilyTermRecord { word: vec![1], coeffs: vec![1.0] },
                FamilyTermRecord { word: vec![1, 2], coeffs: vec![1.0] },
            ]],
        );
        assert_eq!(bad, Err(Error::NotHomogeneous));
    }

    #[test]
    fn qcommutator_instantiation() {
        let fam = family_qcommutator((0.0, 1.0));
        let at1 = fam.generators_at(1.0);
        assert_eq!(at1, vec![FreePoly::from_real(2, &[(&[1, 2], 1.0), (&[2, 1], -1.0)]).unwrap()]);
        let at0 = fam.generators_at(0.0);
        assert_eq!(at0, vec![FreePoly::from_real(2, &[(&[1, 2], 1.0)]).unwrap()]);
        for t in [0.0, 0.3, 1.0] {
            assert_eq!(fam.ideal_at(t, 3, RANK_TOL).unwrap().dims(), vec![0, 0, 1, 4]);
        }
    }

    #[test]
    fn grid_outside_domain_rejected() {
        let fam = family_qcommutator((0.0, 1.0));
        let g = Grid::from_points(vec![0.5, 1.5]).unwrap();
        let p = FreePoly::from_real(2, &[(&[1, 2], 1.0)]).unwrap();
        assert!(matches!(norm_field(&fam, &p, &g, 2, RANK_TOL), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn scaling_map_examples() {
        let z1 = FreePoly::var(2, 1).unwrap();
        assert_eq!(scaling_map(&z1, 0.5, 1.0).unwrap(), z1.scale(Complex64::new(0.5, 0.0)));
        assert_eq!(scaling_map(&FreePoly::one(2), 0.2, 0.9).unwrap(), FreePoly::one(2));
        assert!(matches!(scaling_map(&z1, 1.0, 0.5), Err(Error::RadiusOrder { .. })));
        assert!(matches!(scaling_map(&z1, 0.0, 0.5), Err(Error::RadiusOrder { .. })));
    }

    #[test]
    fn single_radius_tower_is_vacuous() {
        let f = FreePoly::from_real(2, &[(&[], 1.0), (&[1], 1.0)]).unwrap();
        let rep = tower_check(&f, &[0.5], None, 2).unwrap();
        assert!(rep.pairs.is_empty());
        assert_eq!(rep.verdict, Verdict::Pass);
    }

    #[test]
    fn plucker_of_a_line_is_the_vector() {
        let v = CVec::from_vec(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.6),
            Complex64::new(0.8, 0.0),
        ]);
        let p = plucker(&CMat::from_columns(std::slice::from_ref(&v)), DEFAULT_PLUCKER_CAP).unwrap();
        // gauge: first nonzero coordinate real positive
        assert!((p[1] - Complex64::new(0.6, 0.0)).norm() < 1e-15);
        assert!((p[2] - Complex64::new(0.0, -0.8)).norm() < 1e-15);
        assert_eq!(binomial(10, 3), Some(120));
        assert_eq!(binomial(4, 0), Some(1));
    }
}
