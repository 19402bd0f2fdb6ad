//! Small dense complex linear-algebra helpers. Matrices are `nalgebra`
//! types; singular value decompositions go through `faer`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn to_faer(m: &CMat) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn svd_failed() -> Error {
    Error::NonConvergence {
        iterations: 0,
        residual: f64::NAN,
    }
}

/// Singular values in decreasing order.
pub fn singular_values(m: &CMat) -> Result<Vec<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    let s = to_faer(m).singular_values().map_err(|_| svd_failed())?;
    let mut s: Vec<f64> = s.into_iter().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Largest singular value; 0 for an empty matrix.
pub fn spectral_norm(m: &CMat) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Orthonormal basis of the column span of `cols`. Singular values at or
/// below `rank_tol × σ_max` count as zero.
pub fn orthonormal_span(cols: &CMat, rank_tol: f64) -> Result<CMat> {
    let n = cols.nrows();
    if cols.ncols() == 0 || n == 0 {
        return Ok(CMat::zeros(n, 0));
    }
    let svd = to_faer(cols).thin_svd().map_err(|_| svd_failed())?;
    let (u, sigma) = (svd.U(), svd.S().column_vector());
    // faer returns singular values in decreasing order
    let smax = sigma[0].re;
    if smax == 0.0 {
        return Ok(CMat::zeros(n, 0));
    }
    let keep = (0..sigma.nrows()).take_while(|&i| sigma[i].re > rank_tol * smax).count();
    let basis = CMat::from_fn(n, keep, |i, j| u[(i, j)]);
    Ok(basis)
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns of `basis`, built by pivoted Gram–Schmidt on the
/// standard basis vectors (largest residual first, orthogonalized twice).
///
/// With an empty `basis` the result is exactly the identity.
pub fn orthonormal_complement(basis: &CMat) -> CMat {
    let n = basis.nrows();
    let target = n - basis.ncols();
    if basis.ncols() == 0 {
        return CMat::identity(n, n);
    }
    let mut chosen: Vec<CVec> = Vec::with_capacity(target);
    // residual[i] = ‖(I - QQ*) e_i‖² where Q collects basis and chosen columns
    let mut residual: Vec<f64> = (0..n)
        .map(|i| 1.0 - basis.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>())
        .collect();
    let mut used = vec![false; n];
    while chosen.len() < target {
        let (pivot, _) = residual
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("complement dimension bounded by n");
        used[pivot] = true;
        let mut v = CVec::zeros(n);
        v[pivot] = ONE;
        for _ in 0..2 {
            let coeffs = basis.ad_mul(&v);
            v -= basis * coeffs;
            for c in &chosen {
                let proj = c.dotc(&v);
                v -= c * proj;
            }
        }
        let norm = v.norm();
        v /= Complex64::new(norm, 0.0);
        for (i, r) in residual.iter_mut().enumerate() {
            *r -= v[i].norm_sqr();
        }
        chosen.push(v);
    }
    let mut out = CMat::zeros(n, target);
    for (c, v) in chosen.iter().enumerate() {
        out.set_column(c, v);
    }
    out
}

/// Cosines of the principal angles between two orthonormal bases, decreasing.
pub fn principal_cosines(a: &CMat, b: &CMat) -> Result<Vec<f64>> {
    let cross = a.ad_mul(b);
    singular_values(&cross).map(|s| s.into_iter().map(|c| c.min(1.0)).collect())
}

/// `‖A* A − I‖_max` for a matrix with orthonormal columns.
pub fn orthonormality_defect(a: &CMat) -> f64 {
    let gram = a.ad_mul(a);
    let k = gram.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((gram[(i, j)] - target).norm());
        }
    }
    worst
}

/// Largest singular value of an operator given only by its action and the
/// action of its adjoint, by power iteration on `A*A` from the normalized
/// all-ones vector.
pub fn power_norm<F, G>(dim: usize, apply: F, apply_adj: G, tol: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(&CVec) -> CVec,
    G: Fn(&CVec) -> CVec,
{
    if dim == 0 {
        return Ok(0.0);
    }
    let mut v = CVec::from_element(dim, Complex64::new(1.0 / (dim as f64).sqrt(), 0.0));
    let mut sigma = 0.0;
    for it in 0..max_iter {
        let w = apply_adj(&apply(&v));
        let lambda = w.norm();
        if lambda == 0.0 {
            return Ok(0.0);
        }
        let next = lambda.sqrt();
        v = w / Complex64::new(lambda, 0.0);
        if it > 0 && (next - sigma).abs() <= tol * next {
            return Ok(next);
        }
        sigma = next;
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        residual: sigma,
    })
}
