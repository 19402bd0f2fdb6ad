//! Truncated full Fock space `⊕_{k≤M} (ℂ^d)^{⊗k}`, creation operators,
//! graded ideals saturated to a degree cutoff, and the compressed creation
//! tuple on the orthogonal complement of the ideal.
//!
//! Everything is stored degree by degree. Creation operators raise degree by
//! one and the top degree is sent to zero, so an operator on the truncation
//! is a compression `P_M T P_M` of the operator on the full space.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freealg::{FreePoly, Word};
use crate::linalg::{self, CMat, CVec, ONE};

/// Largest total dimension we are willing to store densely.
pub const MAX_TOTAL_DIM: usize = 1 << 14;

/// Default relative singular-value threshold for deciding ideal ranks.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Index bookkeeping for the truncation `𝓕^M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncatedFock {
    d: usize,
    cutoff: usize,
}

impl TruncatedFock {
    pub fn new(d: usize, cutoff: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::EmptyAlphabet);
        }
        let fock = TruncatedFock { d, cutoff };
        if fock.checked_total_dim().is_none_or(|n| n > MAX_TOTAL_DIM) {
            return Err(Error::InvalidArgument(format!(
                "truncated Fock space with d = {d}, M = {cutoff} exceeds {MAX_TOTAL_DIM} dimensions"
            )));
        }
        Ok(fock)
    }

    fn checked_total_dim(&self) -> Option<usize> {
        let mut total = 0usize;
        let mut dim = 1usize;
        for _ in 0..=self.cutoff {
            total = total.checked_add(dim)?;
            dim = dim.checked_mul(self.d)?;
        }
        Some(total)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// `d^k`.
    pub fn dim(&self, k: usize) -> usize {
        self.d.pow(k as u32)
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.cutoff).map(|k| self.dim(k)).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims().iter().sum()
    }

    /// Position of the first degree-`k` slot in the concatenated basis.
    pub fn degree_start(&self, k: usize) -> usize {
        (0..k).map(|j| self.dim(j)).sum()
    }

    /// Global slot of a word, or `None` if it is longer than the cutoff.
    pub fn index_of(&self, w: &Word) -> Option<usize> {
        (w.len() <= self.cutoff).then(|| self.degree_start(w.len()) + w.offset(self.d))
    }

    pub fn word_at(&self, mut index: usize) -> Option<Word> {
        for k in 0..=self.cutoff {
            let n = self.dim(k);
            if index < n {
                return Some(Word::from_offset(self.d, k, index));
            }
            index -= n;
        }
        None
    }
}

/// A vector in a (truncated) Fock space stored as per-degree blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    d: usize,
    blocks: Vec<CVec>,
}

impl FockVector {
    pub fn from_blocks(d: usize, blocks: Vec<CVec>) -> Self {
        FockVector { d, blocks }
    }

    pub fn zeros(d: usize, top: usize) -> Self {
        FockVector {
            d,
            blocks: (0..=top).map(|k| CVec::zeros(d.pow(k as u32))).collect(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn top_degree(&self) -> usize {
        self.blocks.len().saturating_sub(1)
    }

    pub fn block(&self, k: usize) -> &CVec {
        &self.blocks[k]
    }

    pub fn block_mut(&mut self, k: usize) -> &mut CVec {
        &mut self.blocks[k]
    }

    pub fn blocks(&self) -> &[CVec] {
        &self.blocks
    }

    pub fn norm_sqr(&self) -> f64 {
        self.blocks.iter().map(|b| b.norm_squared()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self, other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.dotc(b))
            .sum()
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        FockVector {
            d: self.d,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// An operator on a graded space with per-degree dimensions `dims`, stored as
/// dense blocks keyed by `(output degree, input degree)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockOperator {
    dims: Vec<usize>,
    blocks: BTreeMap<(usize, usize), CMat>,
}

impl BlockOperator {
    pub fn zero(dims: Vec<usize>) -> Self {
        BlockOperator {
            dims,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        let blocks = dims
            .iter()
            .enumerate()
            .map(|(k, &n)| ((k, k), CMat::identity(n, n)))
            .collect();
        BlockOperator { dims, blocks }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(usize, usize), &CMat)> {
        self.blocks.iter()
    }

    /// The `(out, inp)` block, zeros when absent.
    pub fn block(&self, out: usize, inp: usize) -> CMat {
        self.blocks
            .get(&(out, inp))
            .cloned()
            .unwrap_or_else(|| CMat::zeros(self.dims[out], self.dims[inp]))
    }

    pub fn add_block(&mut self, out: usize, inp: usize, m: CMat) {
        debug_assert_eq!(m.shape(), (self.dims[out], self.dims[inp]));
        match self.blocks.get_mut(&(out, inp)) {
            Some(existing) => *existing += m,
            None => {
                self.blocks.insert((out, inp), m);
            }
        }
    }

    pub fn scaled(&self, c: Complex64) -> BlockOperator {
        BlockOperator {
            dims: self.dims.clone(),
            blocks: self.blocks.iter().map(|(k, m)| (*k, m * c)).collect(),
        }
    }

    pub fn plus(&self, other: &BlockOperator) -> BlockOperator {
        let mut out = self.clone();
        for ((o, i), m) in &other.blocks {
            out.add_block(*o, *i, m.clone());
        }
        out
    }

    /// Operator product `self ∘ other`.
    pub fn compose(&self, other: &BlockOperator) -> BlockOperator {
        let mut out = BlockOperator::zero(self.dims.clone());
        for ((mid, inp), b) in &other.blocks {
            for ((o, m2), a) in &self.blocks {
                if m2 == mid {
                    out.add_block(*o, *inp, a * b);
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> CMat {
        let starts: Vec<usize> = self
            .dims
            .iter()
            .scan(0, |acc, &n| {
                let s = *acc;
                *acc += n;
                Some(s)
            })
            .collect();
        let n = self.total_dim();
        let mut dense = CMat::zeros(n, n);
        for ((o, i), m) in &self.blocks {
            dense
                .view_mut((starts[*o], starts[*i]), m.shape())
                .copy_from(m);
        }
        dense
    }

    fn apply_flat(&self, v: &CVec, adjoint: bool) -> CVec {
        let starts: Vec<usize> = self
            .dims
            .iter()
            .scan(0, |acc, &n| {
                let s = *acc;
                *acc += n;
                Some(s)
            })
            .collect();
        let mut out = CVec::zeros(self.total_dim());
        for ((o, i), m) in &self.blocks {
            if adjoint {
                let x = v.rows(starts[*o], self.dims[*o]);
                let y = m.ad_mul(&x);
                let mut dst = out.rows_mut(starts[*i], self.dims[*i]);
                dst += y;
            } else {
                let x = v.rows(starts[*i], self.dims[*i]);
                let y = m * x;
                let mut dst = out.rows_mut(starts[*o], self.dims[*o]);
                dst += y;
            }
        }
        out
    }

    /// Applies the operator to a vector in the flattened (degree-concatenated) basis.
    pub fn apply(&self, v: &CVec) -> CVec {
        self.apply_flat(v, false)
    }

    pub fn apply_adjoint(&self, v: &CVec) -> CVec {
        self.apply_flat(v, true)
    }

    /// Largest absolute entry difference against another operator on the same space.
    pub fn max_abs_diff(&self, other: &BlockOperator) -> f64 {
        let keys: std::collections::BTreeSet<_> =
            self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        keys.into_iter()
            .map(|(o, i)| {
                (self.block(o, i) - other.block(o, i))
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

/// Raw creation operator `s_j` on `𝓕^M`: block `k → k+1` sends word `w` to
/// `j·w`; the top degree goes to zero.
pub fn creation_matrix(j: u16, fock: &TruncatedFock) -> Result<BlockOperator> {
    let d = fock.d();
    if j == 0 || j as usize > d {
        return Err(Error::LetterOutOfRange {
            letter: j as usize,
            d,
        });
    }
    let mut op = BlockOperator::zero(fock.dims());
    for k in 0..fock.cutoff() {
        op.add_block(k + 1, k, raw_creation_block(d, j, k));
    }
    Ok(op)
}

/// Dense `d^{k+1} × d^k` block of `s_j` from degree `k`: the identity placed at
/// rows `(j-1)·d^k ..`.
pub fn raw_creation_block(d: usize, j: u16, k: usize) -> CMat {
    let n = d.pow(k as u32);
    let mut m = CMat::zeros(n * d, n);
    let shift = (j as usize - 1) * n;
    for i in 0..n {
        m[(shift + i, i)] = ONE;
    }
    m
}

/// Orthonormal bases of `Ev(I^m) ⊂ ℂ^{d^m}` for `m = 0..=M`, where `I` is the
/// two-sided ideal generated by a finite list of homogeneous polynomials.
#[derive(Clone, Debug)]
pub struct GradedIdealBasis {
    d: usize,
    cutoff: usize,
    rank_tol: f64,
    generators: Vec<FreePoly>,
    bases: Vec<CMat>,
}

/// JSON export of an ideal basis: dims plus row-major `[re, im]` pairs per degree.
#[derive(Clone, Debug, Serialize)]
pub struct IdealExport {
    pub d: usize,
    pub cutoff: usize,
    pub dims: Vec<usize>,
    pub complement_dims: Vec<usize>,
    pub bases: Vec<Vec<[f64; 2]>>,
}

impl GradedIdealBasis {
    /// The zero ideal.
    pub fn zero(d: usize, cutoff: usize) -> Result<Self> {
        Self::saturate(d, &[], cutoff, DEFAULT_RANK_TOL)
    }

    /// Saturates the generators to degree `cutoff`.
    ///
    /// Degree `m` of the ideal is spanned by `z_j·I^{m-1}`, `I^{m-1}·z_j` and
    /// the degree-`m` generators; this is the same span as all `w·g·w′` with
    /// `|w| + deg g + |w′| = m`. Zero generators are skipped.
    pub fn saturate(d: usize, generators: &[FreePoly], cutoff: usize, rank_tol: f64) -> Result<Self> {
        let fock = TruncatedFock::new(d, cutoff)?;
        if !(rank_tol > 0.0) {
            return Err(Error::InvalidArgument(format!("rank tolerance must be positive, got {rank_tol}")));
        }
        let mut by_degree: Vec<Vec<CVec>> = vec![Vec::new(); cutoff + 1];
        let mut kept = Vec::new();
        for g in generators {
            if g.d() != d {
                return Err(Error::AlphabetMismatch { left: d, right: g.d() });
            }
            if g.is_zero() {
                continue;
            }
            let m = g.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
            if m == 0 {
                return Err(Error::InvalidArgument(
                    "generators must have degree at least 1 (the ideal contains no constants)".into(),
                ));
            }
            if m > cutoff {
                return Err(Error::DegreeExceedsCutoff { degree: m, cutoff });
            }
            let v = g.ev_block(m);
            let norm = v.norm();
            by_degree[m].push(v / Complex64::new(norm, 0.0));
            kept.push(g.clone());
        }

        let mut bases: Vec<CMat> = Vec::with_capacity(cutoff + 1);
        bases.push(CMat::zeros(1, 0));
        for m in 1..=cutoff {
            let n = fock.dim(m);
            let prev = &bases[m - 1];
            let n_prev = fock.dim(m - 1);
            let mut cols: Vec<CVec> = Vec::new();
            for c in 0..prev.ncols() {
                let b = prev.column(c);
                for j in 0..d {
                    // z_j · b
                    let mut left = CVec::zeros(n);
                    left.rows_mut(j * n_prev, n_prev).copy_from(&b);
                    cols.push(left);
                    // b · z_j
                    let mut right = CVec::zeros(n);
                    for (i, z) in b.iter().enumerate() {
                        right[i * d + j] = *z;
                    }
                    cols.push(right);
                }
            }
            cols.extend(by_degree[m].iter().cloned());
            let span = if cols.is_empty() {
                CMat::zeros(n, 0)
            } else {
                linalg::orthonormal_span(&CMat::from_columns(&cols), rank_tol)?
            };
            bases.push(span);
        }
        Ok(GradedIdealBasis {
            d,
            cutoff,
            rank_tol,
            generators: kept,
            bases,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    /// The nonzero generators the ideal was built from.
    pub fn generators(&self) -> &[FreePoly] {
        &self.generators
    }

    /// Orthonormal columns spanning `Ev(I^m)`.
    pub fn basis(&self, m: usize) -> &CMat {
        &self.bases[m]
    }

    /// `dim I^m` for `m = 0..=M`.
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.ncols()).collect()
    }

    /// `d^m − dim I^m`, the dimensions of the truncated Hardy space.
    pub fn complement_dims(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.nrows() - b.ncols()).collect()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.bases.iter().all(|b| b.ncols() == 0)
    }

    /// Degree-`m` component of `p_I`: `v − B(B* v)`.
    pub fn project_block(&self, m: usize, v: &CVec) -> CVec {
        let b = &self.bases[m];
        if b.ncols() == 0 {
            return v.clone();
        }
        v - b * b.ad_mul(v)
    }

    /// Orthogonal projection onto `Ev(I)^⊥` in the truncation.
    pub fn project_complement(&self, v: &FockVector) -> Result<FockVector> {
        if v.d() != self.d {
            return Err(Error::AlphabetMismatch { left: self.d, right: v.d() });
        }
        if v.top_degree() > self.cutoff {
            return Err(Error::DegreeExceedsCutoff {
                degree: v.top_degree(),
                cutoff: self.cutoff,
            });
        }
        Ok(FockVector::from_blocks(
            self.d,
            v.blocks()
                .iter()
                .enumerate()
                .map(|(m, b)| self.project_block(m, b))
                .collect(),
        ))
    }

    /// Distance from `Ev(p)` to `Ev(I^m)` is at most `tol` in every degree.
    pub fn contains(&self, p: &FreePoly, tol: f64) -> Result<bool> {
        if p.is_zero() {
            return Ok(true);
        }
        let top = p.degree() as usize;
        if top > self.cutoff {
            return Err(Error::DegreeExceedsCutoff { degree: top, cutoff: self.cutoff });
        }
        let projected = self.project_complement(&p.ev())?;
        Ok(projected.norm() <= tol)
    }

    /// Copy with every stored basis entry shifted by `eps`; used to check that
    /// the invariant checks catch corrupted bases.
    pub fn perturbed(&self, eps: f64) -> Self {
        let mut out = self.clone();
        for b in out.bases.iter_mut() {
            b.iter_mut().for_each(|z| *z += Complex64::new(eps, 0.0));
        }
        out
    }

    pub fn export(&self) -> IdealExport {
        IdealExport {
            d: self.d,
            cutoff: self.cutoff,
            dims: self.dims(),
            complement_dims: self.complement_dims(),
            bases: self
                .bases
                .iter()
                .map(|b| {
                    let mut flat = Vec::with_capacity(b.len());
                    for r in 0..b.nrows() {
                        for c in 0..b.ncols() {
                            let z = b[(r, c)];
                            flat.push([z.re, z.im]);
                        }
                    }
                    flat
                })
                .collect(),
        }
    }
}

/// The compressed tuple `s_j^I = p_I s_j i_I` on the truncated Hardy space,
/// expressed in an orthonormal basis of `Ev(I)^⊥` degree by degree.
#[derive(Clone, Debug)]
pub struct CompressedTuple {
    d: usize,
    cutoff: usize,
    complements: Vec<CMat>,
    // blocks[j-1][k]: degree k -> k+1
    blocks: Vec<Vec<CMat>>,
}

impl CompressedTuple {
    pub fn new(ideal: &GradedIdealBasis, cutoff: usize) -> Result<Self> {
        if ideal.cutoff() < cutoff {
            return Err(Error::CutoffMismatch {
                ideal: ideal.cutoff(),
                requested: cutoff,
            });
        }
        let d = ideal.d();
        let complements: Vec<CMat> = (0..=cutoff)
            .map(|m| linalg::orthonormal_complement(ideal.basis(m)))
            .collect();
        let blocks = (1..=d)
            .map(|j| {
                (0..cutoff)
                    .map(|k| {
                        // C_{k+1}* S_j C_k = (rows of C_{k+1} hit by s_j)* C_k
                        let n = d.pow(k as u32);
                        let rows = complements[k + 1].rows((j - 1) * n, n);
                        rows.ad_mul(&complements[k])
                    })
                    .collect()
            })
            .collect();
        Ok(CompressedTuple {
            d,
            cutoff,
            complements,
            blocks,
        })
    }

    /// Creation tuple of the zero ideal.
    pub fn free(d: usize, cutoff: usize) -> Result<Self> {
        Self::new(&GradedIdealBasis::zero(d, cutoff)?, cutoff)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Per-degree dimensions of the truncated Hardy space.
    pub fn dims(&self) -> Vec<usize> {
        self.complements.iter().map(|c| c.ncols()).collect()
    }

    /// Orthonormal basis of `Ev(I^m)^⊥` (columns in `ℂ^{d^m}`).
    pub fn complement(&self, m: usize) -> &CMat {
        &self.complements[m]
    }

    /// Block of `s_j^I` from degree `k` to `k+1`.
    pub fn block(&self, j: u16, k: usize) -> &CMat {
        &self.blocks[j as usize - 1][k]
    }

    pub fn operator(&self, j: u16) -> Result<BlockOperator> {
        if j == 0 || j as usize > self.d {
            return Err(Error::LetterOutOfRange { letter: j as usize, d: self.d });
        }
        let mut op = BlockOperator::zero(self.dims());
        for k in 0..self.cutoff {
            op.add_block(k + 1, k, self.block(j, k).clone());
        }
        Ok(op)
    }

    /// `p(s_1^I, …, s_d^I)` on the truncation, as a sum over terms of ordered
    /// block products. Terms sharing a leading letter share the product of
    /// their tails.
    pub fn apply_poly(&self, p: &FreePoly) -> Result<BlockOperator> {
        if p.d() != self.d {
            return Err(Error::AlphabetMismatch { left: self.d, right: p.d() });
        }
        if p.degree() > self.cutoff as isize {
            return Err(Error::DegreeExceedsCutoff {
                degree: p.degree() as usize,
                cutoff: self.cutoff,
            });
        }
        let dims = self.dims();
        let mut op = BlockOperator::zero(dims.clone());
        for (len, component) in p.components() {
            let terms: Vec<(&[u16], Complex64)> =
                component.terms().map(|(w, c)| (w.letters(), *c)).collect();
            for n in 0..=(self.cutoff - len) {
                let block = self.word_sum_block(&terms, n);
                if dims[n] > 0 && dims[n + len] > 0 {
                    op.add_block(n + len, n, block);
                }
            }
        }
        Ok(op)
    }

    /// `Σ c_α S_α` restricted to input degree `n`; all words share one length
    /// and arrive sorted.
    fn word_sum_block(&self, terms: &[(&[u16], Complex64)], n: usize) -> CMat {
        let len = terms[0].0.len();
        if len == 0 {
            let total: Complex64 = terms.iter().map(|(_, c)| *c).sum();
            let dim = self.complements[n].ncols();
            return CMat::identity(dim, dim) * total;
        }
        let out_dim = self.complements[n + len].ncols();
        let in_dim = self.complements[n].ncols();
        let mut acc = CMat::zeros(out_dim, in_dim);
        let mut start = 0;
        while start < terms.len() {
            let lead = terms[start].0[0];
            let end = start + terms[start..].iter().take_while(|(w, _)| w[0] == lead).count();
            let tails: Vec<(&[u16], Complex64)> =
                terms[start..end].iter().map(|(w, c)| (&w[1..], *c)).collect();
            let inner = self.word_sum_block(&tails, n);
            acc += self.block(lead, n + len - 1) * inner;
            start = end;
        }
        acc
    }
}

/// Convenience wrapper: `p(s^I)` on the truncation to degree `M`.
pub fn apply_poly(tuple: &CompressedTuple, p: &FreePoly) -> Result<BlockOperator> {
    tuple.apply_poly(p)
}

/// Saturation entry point mirroring [`GradedIdealBasis::saturate`] with the
/// default rank tolerance.
pub fn saturate_ideal(d: usize, generators: &[FreePoly], cutoff: usize) -> Result<GradedIdealBasis> {
    GradedIdealBasis::saturate(d, generators, cutoff, DEFAULT_RANK_TOL)
}

/// Degree-`m` projector `I − B B*` onto the complement of `Ev(I^m)`.
pub fn complement_projector(ideal: &GradedIdealBasis, m: usize) -> CMat {
    let b = ideal.basis(m);
    let n = b.nrows();
    let mut p = CMat::identity(n, n);
    if b.ncols() > 0 {
        p -= b * b.adjoint();
    }
    p
}
