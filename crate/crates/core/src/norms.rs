//! Operator norms on the truncation, exact homogeneous quotient norms and
//! two-sided brackets for general quotient norms, the radius seminorms
//! `‖F‖_x`, and the majorant series used to test membership in `F_d^r`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{BlockOperator, CompressedTuple, GradedIdealBasis};
use crate::freealg::FreePoly;
use crate::linalg::{self, CMat};

/// Operators up to this total dimension are normed by a dense SVD; larger ones
/// by power iteration.
pub const DENSE_NORM_LIMIT: usize = 600;
pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITER: usize = 10_000;
pub const DEFAULT_BLOWUP: f64 = 1e6;

/// How a bound was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Operator norm of the compressed tuple applied to `p` on the truncation.
    TruncatedCompression,
    /// Operator norm of the lower-triangular Toeplitz model on the one-letter chain.
    SingleLetterToeplitz,
    /// Sum over homogeneous components of exact distances.
    ComponentTriangle,
    /// Exact distance `dist(Ev(p), Ev(I^m))` for homogeneous `p`.
    HomogeneousDistance,
}

/// Lower and upper bounds for a quotient norm `‖p + Ī‖`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormBracket {
    pub lower: f64,
    pub upper: f64,
    pub lower_method: Method,
    pub upper_method: Method,
    /// True when the bounds provably coincide (homogeneous `p`).
    pub exact: bool,
    pub truncation: usize,
}

impl NormBracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// The exact value for homogeneous inputs.
    pub fn value(&self) -> Option<f64> {
        self.exact.then_some(self.upper)
    }
}

/// Largest singular value of a block operator.
pub fn op_norm(op: &BlockOperator) -> Result<f64> {
    let n = op.total_dim();
    if n == 0 || op.blocks().next().is_none() {
        return Ok(0.0);
    }
    if n <= DENSE_NORM_LIMIT {
        linalg::spectral_norm(&op.to_dense())
    } else {
        linalg::power_norm(
            n,
            |v| op.apply(v),
            |v| op.apply_adjoint(v),
            POWER_TOL,
            POWER_MAX_ITER,
        )
    }
}

/// `‖p(s)‖` for homogeneous nonzero `p`, which equals `‖Ev(p)‖₂` because
/// `p(s)v = Ev(p) ⊗ v`.
pub fn homogeneous_anorm(p: &FreePoly) -> Result<f64> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    p.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    Ok(p.coeff_norm())
}

/// `‖p + Ī‖` for homogeneous `p`: the Euclidean distance from `Ev(p)` to
/// `Ev(I^m)`. The zero polynomial has norm 0.
pub fn quotient_norm_homog(p: &FreePoly, ideal: &GradedIdealBasis) -> Result<f64> {
    if p.d() != ideal.d() {
        return Err(Error::AlphabetMismatch { left: ideal.d(), right: p.d() });
    }
    if p.is_zero() {
        return Ok(0.0);
    }
    let m = p.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    if m > ideal.cutoff() {
        return Err(Error::DegreeExceedsCutoff { degree: m, cutoff: ideal.cutoff() });
    }
    Ok(ideal.project_block(m, &p.ev_block(m)).norm())
}

/// `(K+1)×(K+1)` lower-triangular Toeplitz matrix of `p(s_j)` on the chain
/// `Ω, e_j, e_j⊗e_j, …` (degree `K` sent to zero by the shift).
pub fn single_letter_toeplitz(p: &FreePoly, letter: u16, size: usize) -> CMat {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); size];
    for (w, c) in p.terms() {
        debug_assert!(w.letters().iter().all(|&l| l == letter));
        if w.len() < size {
            coeffs[w.len()] = *c;
        }
    }
    CMat::from_fn(size, size, |i, k| if i >= k { coeffs[i - k] } else { Complex64::new(0.0, 0.0) })
}

fn zero_ideal(ideal: Option<&GradedIdealBasis>) -> bool {
    ideal.is_none_or(GradedIdealBasis::is_zero_ideal)
}

/// `‖p(s^I)‖` on the truncation to degree `cutoff`, a lower bound for the
/// quotient norm that is nondecreasing in the cutoff.
///
/// For the zero ideal and `p` supported on powers of one letter this uses the
/// `(M+1)`-dimensional Toeplitz model: every other one-letter chain carries a
/// leading principal block of the same matrix, so nothing is lost.
pub fn truncated_norm(
    p: &FreePoly,
    ideal: Option<&GradedIdealBasis>,
    cutoff: usize,
) -> Result<(f64, Method)> {
    if let Some(ideal) = ideal {
        if ideal.d() != p.d() {
            return Err(Error::AlphabetMismatch { left: ideal.d(), right: p.d() });
        }
        if ideal.cutoff() < cutoff {
            return Err(Error::CutoffMismatch { ideal: ideal.cutoff(), requested: cutoff });
        }
    }
    if p.degree() > cutoff as isize {
        return Err(Error::DegreeExceedsCutoff { degree: p.degree() as usize, cutoff });
    }
    if p.is_zero() {
        return Ok((0.0, Method::TruncatedCompression));
    }
    if zero_ideal(ideal) {
        if let Some(letter) = p.single_letter() {
            let t = single_letter_toeplitz(p, letter, cutoff + 1);
            return Ok((linalg::spectral_norm(&t)?, Method::SingleLetterToeplitz));
        }
    }
    let tuple = match ideal {
        Some(ideal) => CompressedTuple::new(ideal, cutoff)?,
        None => CompressedTuple::free(p.d(), cutoff)?,
    };
    Ok((op_norm(&tuple.apply_poly(p)?)?, Method::TruncatedCompression))
}

/// Two-sided bracket for `‖p + Ī‖`: the truncated compression from below and
/// the sum of exact homogeneous distances from above. `None` means the zero
/// ideal.
pub fn quotient_norm_bracket(
    p: &FreePoly,
    ideal: Option<&GradedIdealBasis>,
    cutoff: usize,
) -> Result<NormBracket> {
    let (lower, lower_method) = truncated_norm(p, ideal, cutoff)?;
    let mut upper = 0.0;
    for (_, component) in p.components() {
        upper += match ideal {
            Some(ideal) => quotient_norm_homog(&component, ideal)?,
            None => component.coeff_norm(),
        };
    }
    let homogeneous = p.is_zero() || p.homogeneous_degree().is_some();
    Ok(NormBracket {
        lower,
        upper,
        lower_method,
        upper_method: if homogeneous {
            Method::HomogeneousDistance
        } else {
            Method::ComponentTriangle
        },
        exact: homogeneous,
        truncation: cutoff,
    })
}

/// `‖F^x(s^I)‖` on the truncation: a lower approximant of the seminorm `‖F‖_x`
/// on the quotient.
pub fn seminorm_trunc(
    f: &FreePoly,
    x: f64,
    ideal: Option<&GradedIdealBasis>,
    cutoff: usize,
) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be nonnegative, got {x}")));
    }
    truncated_norm(&f.scale_series(x), ideal, cutoff).map(|(v, _)| v)
}

/// Partial sums of `Σ_k x^k ‖F_k(s)‖`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MajorantReport {
    pub x: f64,
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// First index whose partial sum exceeds the blow-up threshold.
    pub diverged_at: Option<usize>,
    pub blowup: f64,
    /// Ratio of the last two nonzero terms, as a convergence hint only.
    pub last_ratio: Option<f64>,
}

impl MajorantReport {
    pub fn last(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }
}

/// Partial sums `Σ_{k≤K} x^k ‖F_k(s)‖`, with `F_k` supplied by `coeff_gen(k)`.
///
/// Convergence is not decided; the report flags the first partial sum that
/// exceeds `blowup`.
pub fn membership_majorant<G>(coeff_gen: G, x: f64, terms: usize, blowup: f64) -> Result<MajorantReport>
where
    G: Fn(usize) -> FreePoly,
{
    if !(x > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {x}")));
    }
    let mut out = MajorantReport {
        x,
        terms: Vec::with_capacity(terms + 1),
        partial_sums: Vec::with_capacity(terms + 1),
        diverged_at: None,
        blowup,
        last_ratio: None,
    };
    let mut sum = 0.0;
    for k in 0..=terms {
        let f = coeff_gen(k);
        let term = if f.is_zero() {
            0.0
        } else {
            if f.homogeneous_degree() != Some(k) {
                return Err(Error::NotHomogeneous);
            }
            x.powi(k as i32) * homogeneous_anorm(&f)?
        };
        sum += term;
        out.terms.push(term);
        out.partial_sums.push(sum);
        if out.diverged_at.is_none() && sum > blowup {
            out.diverged_at = Some(k);
        }
    }
    let nonzero: Vec<f64> = out.terms.iter().copied().filter(|t| *t > 0.0).collect();
    if nonzero.len() >= 2 {
        out.last_ratio = Some(nonzero[nonzero.len() - 1] / nonzero[nonzero.len() - 2]);
    }
    Ok(out)
}
