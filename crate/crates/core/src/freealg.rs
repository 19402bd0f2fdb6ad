//! Words in the free monoid on `d` letters and finitely supported free
//! noncommutative polynomials with complex coefficients.
//!
//! Words are ordered graded-lexicographically (shorter words first, then
//! lexicographic with letter `1 < 2 < … < d`). Within a fixed length this is
//! the same as reading the word as a base-`d` numeral, which fixes every
//! vector and matrix index map in the crate.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::FockVector;

/// A word `z_{i_1} … z_{i_k}`; letters are 1-based. The empty word is the unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<u16>);

impl Word {
    pub fn new(letters: Vec<u16>) -> Self {
        Word(letters)
    }

    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(j: u16) -> Self {
        Word(vec![j])
    }

    /// `z_j^k`.
    pub fn power(j: u16, k: usize) -> Self {
        Word(vec![j; k])
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    /// Length `|α|`, the grading degree.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        match self.0.iter().find(|&&l| l == 0 || l as usize > d) {
            Some(&l) => Err(Error::LetterOutOfRange {
                letter: l as usize,
                d,
            }),
            None => Ok(()),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Offset of this word inside the degree-`len` block of size `d^len`.
    pub fn offset(&self, d: usize) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &l| acc * d + (l as usize - 1))
    }

    /// Inverse of [`Word::offset`].
    pub fn from_offset(d: usize, len: usize, mut offset: usize) -> Word {
        let mut letters = vec![0u16; len];
        for slot in letters.iter_mut().rev() {
            *slot = (offset % d) as u16 + 1;
            offset /= d;
        }
        Word(letters)
    }

    /// All words of length `len` in graded-lex order.
    pub fn all_of_length(d: usize, len: usize) -> impl Iterator<Item = Word> {
        (0..d.pow(len as u32)).map(move |i| Word::from_offset(d, len, i))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "z{l}")?;
        }
        Ok(())
    }
}

/// One serialized term: `{"word": [1, 2], "re": 1.0, "im": 0.0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub word: Vec<u16>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// A free noncommutative polynomial `Σ a_α z_α` over `d` letters.
///
/// No stored coefficient is ever exactly zero; tiny coefficients are kept.
#[derive(Clone, Debug, PartialEq)]
pub struct FreePoly {
    d: usize,
    terms: BTreeMap<Word, Complex64>,
}

impl FreePoly {
    pub fn zero(d: usize) -> Self {
        FreePoly {
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(d: usize) -> Self {
        Self::constant(d, Complex64::new(1.0, 0.0))
    }

    pub fn constant(d: usize, c: Complex64) -> Self {
        Self::monomial(d, Word::unit(), c).expect("unit word is always valid")
    }

    /// The generator `z_j`.
    pub fn var(d: usize, j: u16) -> Result<Self> {
        Self::monomial(d, Word::letter(j), Complex64::new(1.0, 0.0))
    }

    pub fn monomial(d: usize, word: Word, c: Complex64) -> Result<Self> {
        Self::from_terms(d, [(word, c)])
    }

    /// Builds a polynomial from `(word, coefficient)` pairs; repeated words are summed.
    pub fn from_terms<I>(d: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Complex64)>,
    {
        if d == 0 {
            return Err(Error::EmptyAlphabet);
        }
        let mut out = FreePoly::zero(d);
        for (w, c) in terms {
            w.validate(d)?;
            out.add_term(w, c);
        }
        Ok(out)
    }

    /// Convenience constructor with real coefficients and letter slices.
    pub fn from_real(d: usize, terms: &[(&[u16], f64)]) -> Result<Self> {
        Self::from_terms(
            d,
            terms
                .iter()
                .map(|(w, c)| (Word::new(w.to_vec()), Complex64::new(*c, 0.0))),
        )
    }

    pub fn from_records(d: usize, records: &[TermRecord]) -> Result<Self> {
        Self::from_terms(
            d,
            records
                .iter()
                .map(|r| (Word::new(r.word.clone()), Complex64::new(r.re, r.im))),
        )
    }

    /// Canonical (graded-lex) term list.
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(w, c)| TermRecord {
                word: w.letters().to_vec(),
                re: c.re,
                im: c.im,
            })
            .collect()
    }

    fn add_term(&mut self, w: Word, c: Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        match self.terms.entry(w) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == zero {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                if c != zero {
                    e.insert(c);
                }
            }
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Complex64 {
        self.terms
            .get(w)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Maximum word length over stored terms; `-1` for the zero polynomial.
    ///
    /// The sentinel is never used as an index: callers branch on
    /// [`FreePoly::is_zero`] first.
    pub fn degree(&self) -> isize {
        self.terms.keys().map(|w| w.len() as isize).max().unwrap_or(-1)
    }

    /// `Some(k)` when every term has length `k`; `None` for mixed degrees and zero.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut lens = self.terms.keys().map(Word::len);
        let first = lens.next()?;
        lens.all(|l| l == first).then_some(first)
    }

    /// `F_k`: the terms of word length exactly `k`.
    pub fn homogeneous_component(&self, k: usize) -> FreePoly {
        FreePoly {
            d: self.d,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == k)
                .map(|(w, c)| (w.clone(), *c))
                .collect(),
        }
    }

    /// Nonzero homogeneous components `(k, F_k)` in increasing degree.
    pub fn components(&self) -> Vec<(usize, FreePoly)> {
        let mut out: Vec<(usize, FreePoly)> = Vec::new();
        for (w, c) in &self.terms {
            match out.last_mut() {
                Some((k, f)) if *k == w.len() => {
                    f.terms.insert(w.clone(), *c);
                }
                _ => {
                    let mut f = FreePoly::zero(self.d);
                    f.terms.insert(w.clone(), *c);
                    out.push((w.len(), f));
                }
            }
        }
        out
    }

    /// If every term is a power of one letter `j`, returns `j` (the constant
    /// polynomial reports letter 1).
    pub fn single_letter(&self) -> Option<u16> {
        let mut letter = None;
        for w in self.terms.keys() {
            for &l in w.letters() {
                match letter {
                    None => letter = Some(l),
                    Some(j) if j != l => return None,
                    _ => {}
                }
            }
        }
        Some(letter.unwrap_or(1))
    }

    fn check_alphabet(&self, other: &FreePoly) -> Result<()> {
        if self.d != other.d {
            return Err(Error::AlphabetMismatch {
                left: self.d,
                right: other.d,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &FreePoly) -> Result<FreePoly> {
        self.check_alphabet(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), *c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &FreePoly) -> Result<FreePoly> {
        self.checked_add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Coefficient of `w` in the product is `Σ_{w = uv} p[u]·q[v]`.
    pub fn checked_mul(&self, other: &FreePoly) -> Result<FreePoly> {
        self.check_alphabet(other)?;
        let mut out = FreePoly::zero(self.d);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> FreePoly {
        FreePoly {
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(w, a)| (w.clone(), a * c))
                .filter(|(_, a)| *a != Complex64::new(0.0, 0.0))
                .collect(),
        }
    }

    /// `F^x = Σ x^{|α|} a_α z_α`.
    pub fn scale_series(&self, x: impl Into<Complex64>) -> FreePoly {
        let x = x.into();
        let factor = |k: usize| -> Complex64 {
            if x.im == 0.0 {
                Complex64::new(x.re.powi(k as i32), 0.0)
            } else {
                x.powi(k as i32)
            }
        };
        FreePoly {
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(w, a)| {
                    let f = factor(w.len());
                    let scaled = if f.im == 0.0 {
                        Complex64::new(a.re * f.re, a.im * f.re)
                    } else {
                        a * f
                    };
                    (w.clone(), scaled)
                })
                .filter(|(_, a)| *a != Complex64::new(0.0, 0.0))
                .collect(),
        }
    }

    /// Degree-`k` coefficient block of `Ev(p)`, a vector in `ℂ^{d^k}`.
    pub fn ev_block(&self, k: usize) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.d.pow(k as u32));
        for (w, c) in self.terms.iter().filter(|(w, _)| w.len() == k) {
            v[w.offset(self.d)] = *c;
        }
        v
    }

    /// `Ev(p)` as per-degree coefficient vectors, degrees `0..=deg p`
    /// (just the degree-0 block for the zero polynomial).
    pub fn ev(&self) -> FockVector {
        let top = self.degree().max(0) as usize;
        self.ev_to(top)
    }

    /// `Ev(p)` padded (or cut) to degrees `0..=top`.
    pub fn ev_to(&self, top: usize) -> FockVector {
        FockVector::from_blocks(self.d, (0..=top).map(|k| self.ev_block(k)).collect())
    }

    /// `‖Ev(p)‖₂` over all degrees.
    pub fn coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl fmt::Display for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.im == 0.0 {
                write!(f, "({})·{w}", c.re)?;
            } else {
                write!(f, "({}{:+}i)·{w}", c.re, c.im)?;
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        /// Panics on alphabet mismatch; use the `checked_*` form to get an error.
        impl std::ops::$tr<&FreePoly> for &FreePoly {
            type Output = FreePoly;
            fn $method(self, rhs: &FreePoly) -> FreePoly {
                self.$checked(rhs).expect("alphabet mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &FreePoly {
    type Output = FreePoly;
    fn neg(self) -> FreePoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
