//! Free polynomials and truncated free series evaluated on `d`-tuples of
//! `n×n` complex matrices: the row ball, variety membership, the
//! noncommutative-function axioms, von Neumann bounds and the contraction
//! bound for tuples annihilating an ideal.

use nalgebra::linalg::QR;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::deform::Verdict;
use crate::error::{Error, Result};
use crate::fock::GradedIdealBasis;
use crate::freealg::FreePoly;
use crate::linalg::{self, CMat, ONE, ZERO};
use crate::norms;

/// Default cap on the matrix size of sampled tuples.
pub const MAX_SAMPLE_N: usize = 16;
pub const VARIETY_TOL: f64 = 1e-10;
pub const INEQ_SLACK: f64 = 1e-9;
pub const AXIOM_TOL: f64 = 1e-10;

/// `X = (X_1, …, X_d)`, all `n×n`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixTuple {
    n: usize,
    matrices: Vec<CMat>,
}

/// `{n, d, matrices}` with each matrix a row-major list of `n²` `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixTupleRecord {
    pub n: usize,
    pub d: usize,
    pub matrices: Vec<Vec<[f64; 2]>>,
}

impl MatrixTuple {
    pub fn new(matrices: Vec<CMat>) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return Err(Error::EmptyAlphabet);
        };
        let n = first.nrows();
        if n == 0 {
            return Err(Error::InvalidArgument("matrix size must be at least 1".into()));
        }
        for m in &matrices {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::SizeMismatch { expected: n, found: m.nrows().max(m.ncols()) });
            }
        }
        Ok(MatrixTuple { n, matrices })
    }

    pub fn zeros(d: usize, n: usize) -> Result<Self> {
        Self::new(vec![CMat::zeros(n, n); d])
    }

    /// Scalars `(x_1, …, x_d)` as a tuple of `1×1` matrices.
    pub fn scalars(xs: &[Complex64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| CMat::from_element(1, 1, x)).collect())
    }

    pub fn from_record(rec: &MatrixTupleRecord) -> Result<Self> {
        if rec.matrices.len() != rec.d {
            return Err(Error::SizeMismatch { expected: rec.d, found: rec.matrices.len() });
        }
        let mats = rec
            .matrices
            .iter()
            .map(|m| {
                if m.len() != rec.n * rec.n {
                    return Err(Error::SizeMismatch { expected: rec.n * rec.n, found: m.len() });
                }
                Ok(CMat::from_row_iterator(
                    rec.n,
                    rec.n,
                    m.iter().map(|[re, im]| Complex64::new(*re, *im)),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(mats)
    }

    pub fn to_record(&self) -> MatrixTupleRecord {
        MatrixTupleRecord {
            n: self.n,
            d: self.d(),
            matrices: self
                .matrices
                .iter()
                .map(|m| {
                    let mut out = Vec::with_capacity(self.n * self.n);
                    for i in 0..self.n {
                        for j in 0..self.n {
                            out.push([m[(i, j)].re, m[(i, j)].im]);
                        }
                    }
                    out
                })
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    /// `X_j` for a 1-based letter.
    pub fn get(&self, j: u16) -> &CMat {
        &self.matrices[j as usize - 1]
    }

    pub fn scaled(&self, c: f64) -> MatrixTuple {
        let c = Complex64::new(c, 0.0);
        MatrixTuple { n: self.n, matrices: self.matrices.iter().map(|m| m * c).collect() }
    }

    /// `X ⊕ Y`, block diagonal in each slot.
    pub fn direct_sum(&self, other: &MatrixTuple) -> Result<MatrixTuple> {
        if self.d() != other.d() {
            return Err(Error::AlphabetMismatch { left: self.d(), right: other.d() });
        }
        let n = self.n + other.n;
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| {
                let mut m = CMat::zeros(n, n);
                m.view_mut((0, 0), (self.n, self.n)).copy_from(a);
                m.view_mut((self.n, self.n), (other.n, other.n)).copy_from(b);
                m
            })
            .collect();
        MatrixTuple::new(matrices)
    }

    /// `(S X_1 S⁻¹, …, S X_d S⁻¹)`.
    pub fn conjugate(&self, s: &CMat, s_inv: &CMat) -> MatrixTuple {
        MatrixTuple {
            n: self.n,
            matrices: self.matrices.iter().map(|m| s * m * s_inv).collect(),
        }
    }
}

/// `‖Σ X_j X_j*‖^{1/2}`, the norm of the row `[X_1 … X_d]`.
pub fn row_norm(x: &MatrixTuple) -> f64 {
    let n = x.n();
    let mut row = CMat::zeros(n, n * x.d());
    for (j, m) in x.matrices().iter().enumerate() {
        row.view_mut((0, j * n), (n, n)).copy_from(m);
    }
    linalg::spectral_norm(&row).expect("SVD of a small dense matrix")
}

/// `Σ_α p[α] X_α` with `X_∅ = I`.
pub fn eval_poly(p: &FreePoly, x: &MatrixTuple) -> Result<CMat> {
    if p.d() != x.d() {
        return Err(Error::AlphabetMismatch { left: p.d(), right: x.d() });
    }
    let n = x.n();
    let mut out = CMat::zeros(n, n);
    for (w, &c) in p.terms() {
        let mut prod = CMat::identity(n, n);
        for &j in w.letters() {
            prod *= x.get(j);
        }
        out += prod * c;
    }
    Ok(out)
}

pub fn matrix_norm(m: &CMat) -> f64 {
    linalg::spectral_norm(m).expect("SVD of a small dense matrix")
}

/// Partial sum of a free series on a matrix tuple with a certified remainder.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesEval {
    pub value: CMat,
    pub row_norm: f64,
    /// `Σ_{k>K} y^k ‖ev(F_k)‖`; `+∞` when the tail is not summable.
    pub tail_bound: f64,
    pub tail_diverged: bool,
}

/// Tail sums stop once a term falls below this fraction of the running sum.
const TAIL_REL_EPS: f64 = 1e-17;
const TAIL_MAX_TERMS: usize = 100_000;

/// `Σ_{k≤K} F_k(X)` plus a bound on `Σ_{k>K} ‖F_k(X)‖` from the von Neumann
/// inequality `‖F_k(X)‖ ≤ y^k ‖ev(F_k)‖`, `y = row_norm(X)`.
///
/// `coeff_gen(k)` returns the homogeneous component of degree `k` and is
/// only called for `k ≤ K`; `coeff_norm(k)` returns `‖ev(F_k)‖` and drives
/// the tail. Requires `y < radius`. A tail that exceeds `blowup` or does not
/// settle within the term budget is reported as divergent.
pub fn eval_series_trunc<G, N>(
    coeff_gen: G,
    coeff_norm: N,
    x: &MatrixTuple,
    terms: usize,
    radius: f64,
    blowup: f64,
) -> Result<SeriesEval>
where
    G: Fn(usize) -> FreePoly,
    N: Fn(usize) -> f64,
{
    let y = row_norm(x);
    if y >= radius {
        return Err(Error::OutsideBall { row_norm: y, radius });
    }
    let n = x.n();
    let mut value = CMat::zeros(n, n);
    for k in 0..=terms {
        let fk = coeff_gen(k);
        if fk.homogeneous_degree().is_some_and(|deg| deg != k) {
            return Err(Error::NotHomogeneous);
        }
        value += eval_poly(&fk, x)?;
    }
    let mut tail = 0.0;
    let mut diverged = false;
    if y > 0.0 {
        let mut yk = y.powi(terms as i32);
        let mut settled = false;
        for k in terms + 1..terms + 1 + TAIL_MAX_TERMS {
            yk *= y;
            let term = yk * coeff_norm(k);
            tail += term;
            if !tail.is_finite() || tail > blowup {
                break;
            }
            if yk == 0.0 || (yk <= f64::EPSILON && term <= TAIL_REL_EPS * tail) {
                settled = true;
                break;
            }
        }
        diverged = !settled;
    }
    Ok(SeriesEval {
        value,
        row_norm: y,
        tail_bound: if diverged { f64::INFINITY } else { tail },
        tail_diverged: diverged,
    })
}

/// `‖g(X)‖ ≤ tol` for every generator.
pub fn in_variety(x: &MatrixTuple, generators: &[FreePoly], tol: f64) -> Result<bool> {
    for g in generators {
        if matrix_norm(&eval_poly(g, x)?) > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    /// `‖p(X⊕Y) − p(X)⊕p(Y)‖`.
    pub direct_sum_err: f64,
    pub direct_sum_scale: f64,
    pub direct_sum_ok: bool,
    /// `‖p(SXS⁻¹) − S p(X) S⁻¹‖`.
    pub similarity_err: f64,
    pub similarity_scale: f64,
    pub similarity_ok: bool,
    pub cond_s: f64,
    pub verdict: Verdict,
}

/// Direct-sum and similarity identities for `p`. Tolerance is `tol` times
/// the size of the operands.
pub fn nc_axiom_check(
    p: &FreePoly,
    x: &MatrixTuple,
    y: &MatrixTuple,
    s: &CMat,
    tol: f64,
) -> Result<AxiomReport> {
    if s.nrows() != x.n() || s.ncols() != x.n() {
        return Err(Error::SizeMismatch { expected: x.n(), found: s.nrows() });
    }
    let sv = linalg::singular_values(s)?;
    let (smax, smin) = (sv[0], *sv.last().unwrap());
    if smin <= f64::EPSILON * smax * (x.n() as f64) || smax == 0.0 {
        return Err(Error::SingularMatrix);
    }
    let cond_s = smax / smin;
    let s_inv = s.clone().try_inverse().ok_or(Error::SingularMatrix)?;

    let px = eval_poly(p, x)?;
    let py = eval_poly(p, y)?;
    let sum = eval_poly(p, &x.direct_sum(y)?)?;
    let mut blocks = CMat::zeros(x.n() + y.n(), x.n() + y.n());
    blocks.view_mut((0, 0), (x.n(), x.n())).copy_from(&px);
    blocks.view_mut((x.n(), x.n()), (y.n(), y.n())).copy_from(&py);
    let direct_sum_err = matrix_norm(&(&sum - &blocks));
    let direct_sum_scale = operand_scale(p, x.direct_sum(y)?.matrices());
    let direct_sum_ok = direct_sum_err <= tol * direct_sum_scale;

    let conj = x.conjugate(s, &s_inv);
    let lhs = eval_poly(p, &conj)?;
    let rhs = s * &px * &s_inv;
    let similarity_err = matrix_norm(&(&lhs - &rhs));
    let similarity_scale = operand_scale(p, conj.matrices()).max(cond_s * operand_scale(p, x.matrices()));
    let similarity_ok = similarity_err <= tol * similarity_scale;

    Ok(AxiomReport {
        direct_sum_err,
        direct_sum_scale,
        direct_sum_ok,
        similarity_err,
        similarity_scale,
        similarity_ok,
        cond_s,
        verdict: Verdict::from_bool(direct_sum_ok && similarity_ok),
    })
}

/// `max(1, Σ_α |p[α]| Π ‖X_{α_i}‖)`: a bound on the size of every term.
fn operand_scale(p: &FreePoly, mats: &[CMat]) -> f64 {
    let norms: Vec<f64> = mats.iter().map(matrix_norm).collect();
    let total: f64 = p
        .terms()
        .map(|(w, c)| c.norm() * w.letters().iter().map(|&j| norms[j as usize - 1]).product::<f64>())
        .sum();
    total.max(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VnReport {
    pub lhs: f64,
    pub rhs: f64,
    pub row_norm: f64,
    pub verdict: Verdict,
}

/// `‖p(X)‖ ≤ Σ_k y^k ‖ev(p_k)‖` with `y = row_norm(X)`.
pub fn vn_check(p: &FreePoly, x: &MatrixTuple) -> Result<VnReport> {
    let lhs = matrix_norm(&eval_poly(p, x)?);
    let y = row_norm(x);
    let mut rhs = 0.0;
    for (k, pk) in p.components() {
        rhs += y.powi(k as i32) * norms::homogeneous_anorm(&pk)?;
    }
    Ok(VnReport { lhs, rhs, row_norm: y, verdict: Verdict::from_bool(lhs <= rhs + INEQ_SLACK) })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContractionReport {
    pub lhs: f64,
    pub upper: Option<f64>,
    pub row_norm: f64,
    pub in_variety: bool,
    pub verdict: Verdict,
    pub reason: Option<String>,
}

/// For a row contraction annihilating the ideal, `‖q(X)‖` is bounded by the
/// quotient norm of `q`, hence by the bracket's upper end. INAPPLICABLE when
/// `X` is outside the closed ball or off the variety.
pub fn variety_contraction_check(
    q: &FreePoly,
    x: &MatrixTuple,
    ideal: &GradedIdealBasis,
) -> Result<ContractionReport> {
    let lhs = matrix_norm(&eval_poly(q, x)?);
    let y = row_norm(x);
    let member = in_variety(x, ideal.generators(), VARIETY_TOL)?;
    let inapplicable = |reason: String| ContractionReport {
        lhs,
        upper: None,
        row_norm: y,
        in_variety: member,
        verdict: Verdict::Inapplicable,
        reason: Some(reason),
    };
    if y > 1.0 + 1e-12 {
        return Ok(inapplicable(format!("row norm {y} exceeds 1")));
    }
    if !member {
        return Ok(inapplicable("tuple does not annihilate the ideal generators".into()));
    }
    let cutoff = q.degree().max(0) as usize;
    if cutoff > ideal.cutoff() {
        return Ok(inapplicable(format!(
            "degree {cutoff} exceeds ideal cutoff {}",
            ideal.cutoff()
        )));
    }
    let upper = norms::quotient_norm_bracket(q, Some(ideal), cutoff)?.upper;
    Ok(ContractionReport {
        lhs,
        upper: Some(upper),
        row_norm: y,
        in_variety: member,
        verdict: Verdict::from_bool(lhs <= upper + INEQ_SLACK),
        reason: None,
    })
}

/// Ideals the variety sampler knows how to populate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", deny_unknown_fields)]
pub enum VarietyKind {
    Commutator,
    QCommutator { q: f64 },
}

impl VarietyKind {
    /// Generator of the ideal over `d = 2`.
    pub fn generator(&self) -> FreePoly {
        let q = match self {
            VarietyKind::Commutator => 1.0,
            VarietyKind::QCommutator { q } => *q,
        };
        FreePoly::from_real(2, &[(&[1, 2], 1.0), (&[2, 1], -q)]).expect("static generator")
    }
}

fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn rescale_to(x: MatrixTuple, target: f64) -> MatrixTuple {
    let y = row_norm(&x);
    if y == 0.0 {
        x
    } else {
        x.scaled(target / y)
    }
}

/// A tuple in the variety of the given ideal, `d = 2`, deterministic per seed.
///
/// Commutator: simultaneously diagonal, rescaled to row norm 0.9.
/// q-commutator: `(x_1, 0)` for `n = 1`; for `n ≥ 2`,
/// `X_1 = a·diag(1, q, …, q^{n−1})`, `X_2 = b·S` with `S` the lower shift,
/// which satisfies `X_1X_2 = q X_2X_1`, rescaled to row norm 0.9.
pub fn sample_variety_tuple(kind: VarietyKind, n: usize, seed: u64) -> Result<MatrixTuple> {
    if n == 0 || n > MAX_SAMPLE_N {
        return Err(Error::InvalidArgument(format!("sample size n must lie in [1, {MAX_SAMPLE_N}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = match kind {
        VarietyKind::Commutator => {
            let mats = (0..2)
                .map(|_| CMat::from_diagonal(&linalg::CVec::from_fn(n, |_, _| complex_normal(&mut rng))))
                .collect();
            MatrixTuple::new(mats)?
        }
        VarietyKind::QCommutator { q } => {
            let a = complex_normal(&mut rng);
            if n == 1 {
                MatrixTuple::scalars(&[a, ZERO])?
            } else {
                let b = complex_normal(&mut rng);
                let diag = CMat::from_fn(n, n, |i, j| if i == j { a * q.powi(i as i32) } else { ZERO });
                let shift = CMat::from_fn(n, n, |i, j| if i == j + 1 { b } else { ZERO });
                MatrixTuple::new(vec![diag, shift])?
            }
        }
    };
    Ok(rescale_to(x, 0.9))
}

/// Complex Gaussian tuple rescaled to row norm `target`.
pub fn random_row_contraction(d: usize, n: usize, target: f64, rng: &mut ChaCha8Rng) -> Result<MatrixTuple> {
    let mats = (0..d).map(|_| CMat::from_fn(n, n, |_, _| complex_normal(rng))).collect();
    Ok(rescale_to(MatrixTuple::new(mats)?, target))
}

/// Complex Gaussian tuple without rescaling.
pub fn random_tuple(d: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<MatrixTuple> {
    MatrixTuple::new((0..d).map(|_| CMat::from_fn(n, n, |_, _| complex_normal(rng))).collect())
}

fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| complex_normal(rng));
    QR::new(g).q()
}

/// `Q_1 diag(σ) Q_2` with unitary `Q_i` and `σ` log-uniform in `[1, cond]`,
/// `σ_0 = 1`; the condition number is at most `cond`.
pub fn random_invertible(n: usize, cond: f64, rng: &mut ChaCha8Rng) -> CMat {
    let q1 = random_unitary(n, rng);
    let q2 = random_unitary(n, rng);
    let log_c = cond.max(1.0).ln();
    let sigma = CMat::from_fn(n, n, |i, j| {
        if i != j {
            ZERO
        } else if i == 0 {
            ONE
        } else {
            Complex64::new((rng.random::<f64>() * log_c).exp(), 0.0)
        }
    });
    q1 * sigma * q2
}

/// Random polynomial with `terms` words of length `≤ max_deg` and complex
/// Gaussian coefficients.
pub fn random_poly(d: usize, max_deg: usize, terms: usize, rng: &mut ChaCha8Rng) -> FreePoly {
    let mut p = FreePoly::zero(d);
    for _ in 0..terms {
        let len = rng.random_range(0..=max_deg);
        let letters: Vec<u16> = (0..len).map(|_| rng.random_range(1..=d as u16)).collect();
        let term = FreePoly::monomial(d, crate::freealg::Word::new(letters), complex_normal(rng))
            .expect("letters drawn in range");
        p = &p + &term;
    }
    p
}

/// Random homogeneous polynomial of degree `deg` with dense Gaussian
/// coefficients.
pub fn random_homogeneous(d: usize, deg: usize, rng: &mut ChaCha8Rng) -> FreePoly {
    FreePoly::from_terms(
        d,
        crate::freealg::Word::all_of_length(d, deg).map(|w| (w, complex_normal(rng))).collect::<Vec<_>>(),
    )
    .expect("words drawn in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn nilpotent_pair() -> MatrixTuple {
        MatrixTuple::new(vec![
            CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]),
            CMat::from_row_slice(2, 2, &[c(0.0), c(0.0), c(1.0), c(0.0)]),
        ])
        .unwrap()
    }

    #[test]
    fn row_norm_examples() {
        assert!((row_norm(&MatrixTuple::scalars(&[c(0.6), c(0.8)]).unwrap()) - 1.0).abs() < 1e-15);
        let x = MatrixTuple::new(vec![CMat::identity(3, 3), CMat::zeros(3, 3)]).unwrap();
        assert!((row_norm(&x) - 1.0).abs() < 1e-15);
        assert_eq!(row_norm(&MatrixTuple::zeros(2, 3).unwrap()), 0.0);
    }

    #[test]
    fn eval_examples() {
        let x = nilpotent_pair();
        let z1z2 = FreePoly::from_real(2, &[(&[1, 2], 1.0)]).unwrap();
        let expect = CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        assert_eq!(eval_poly(&z1z2, &x).unwrap(), expect);
        assert_eq!(eval_poly(&FreePoly::one(2), &x).unwrap(), CMat::identity(2, 2));
        let comm = VarietyKind::Commutator.generator();
        assert!(!in_variety(&x, std::slice::from_ref(&comm), 1e-10).unwrap());
        assert!((matrix_norm(&eval_poly(&comm, &x).unwrap()) - 1.0).abs() < 1e-14);
        assert!(in_variety(&x, &[], 1e-10).unwrap());
        assert!(eval_poly(&FreePoly::var(3, 1).unwrap(), &x).is_err());
    }

    #[test]
    fn record_roundtrip() {
        let x = nilpotent_pair();
        let rec = x.to_record();
        assert_eq!(rec.matrices[0], vec![[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]);
        assert_eq!(MatrixTuple::from_record(&rec).unwrap(), x);
        let mut bad = rec.clone();
        bad.matrices[1].pop();
        assert!(MatrixTuple::from_record(&bad).is_err());
    }

    #[test]
    fn singular_similarity_rejected() {
        let x = nilpotent_pair();
        let s = CMat::from_row_slice(2, 2, &[c(1.0), c(2.0), c(2.0), c(4.0)]);
        let p = FreePoly::var(2, 1).unwrap();
        assert_eq!(nc_axiom_check(&p, &x, &x, &s, AXIOM_TOL), Err(Error::SingularMatrix));
    }

    #[test]
    fn scalar_similarity_is_exact() {
        let x = nilpotent_pair();
        let s = CMat::identity(2, 2) * c(2.0);
        let p = FreePoly::from_real(2, &[(&[1, 2], 1.0)]).unwrap();
        let rep = nc_axiom_check(&p, &x, &x, &s, AXIOM_TOL).unwrap();
        assert_eq!(rep.similarity_err, 0.0);
        assert_eq!(rep.verdict, Verdict::Pass);
    }

    #[test]
    fn series_outside_ball_is_an_error() {
        let x = MatrixTuple::scalars(&[c(1.0)]).unwrap();
        let gen = |k: usize| FreePoly::monomial(1, crate::freealg::Word::power(1, k), ONE).unwrap();
        assert!(matches!(
            eval_series_trunc(gen, |_| 1.0, &x, 5, 1.0, norms::DEFAULT_BLOWUP),
            Err(Error::OutsideBall { .. })
        ));
    }

    #[test]
    fn samplers_land_in_variety() {
        for n in 1..=5 {
            for (kind, seed) in [(VarietyKind::Commutator, 7), (VarietyKind::QCommutator { q: 0.4 }, 3)] {
                let x = sample_variety_tuple(kind, n, seed).unwrap();
                assert!(in_variety(&x, &[kind.generator()], 1e-12).unwrap());
                assert!((row_norm(&x) - 0.9).abs() < 1e-12);
                assert_eq!(x, sample_variety_tuple(kind, n, seed).unwrap());
            }
        }
        let scalar = sample_variety_tuple(VarietyKind::QCommutator { q: 0.5 }, 1, 1).unwrap();
        assert_eq!(scalar.get(2)[(0, 0)], ZERO);
        assert!(sample_variety_tuple(VarietyKind::Commutator, 0, 1).is_err());
    }
}
