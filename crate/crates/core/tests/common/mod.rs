//! Independent oracles shared by the integration tests. Nothing here calls
//! into the saturation, compression or norm code under test.
#![allow(dead_code)]

use nalgebra::DMatrix;
use ncball::{FreePoly, Word};
use num_complex::Complex64;

pub const PRIME: i64 = 1_000_000_007;

/// Rank over `F_p` of integer row vectors, by plain Gaussian elimination.
pub fn rank_mod_p(mut rows: Vec<Vec<i64>>) -> usize {
    let reduce = |x: i64| x.rem_euclid(PRIME);
    for r in rows.iter_mut() {
        for x in r.iter_mut() {
            *x = reduce(*x);
        }
    }
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][col], PRIME - 2);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % PRIME;
        }
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let f = rows[i][col];
                for c in 0..ncols {
                    rows[i][c] = reduce(rows[i][c] - f * rows[rank][c]);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: i64, mut e: i64) -> i64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % PRIME;
        }
        b = b * b % PRIME;
        e >>= 1;
    }
    acc
}

/// All words of length `len` over `d` letters, in base-`d` order.
pub fn words(d: usize, len: usize) -> Vec<Vec<u16>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| (1..=d as u16).map(move |j| [w.clone(), vec![j]].concat()))
            .collect();
    }
    out
}

fn offset(d: usize, w: &[u16]) -> usize {
    w.iter().fold(0, |acc, &j| acc * d + (j as usize - 1))
}

/// Dimension of the degree-`m` part of the ideal generated by one integer
/// homogeneous generator, by rank mod p of all `w·g·w′`.
pub fn brute_force_dim(d: usize, gen: &[(Vec<u16>, i64)], m: usize) -> usize {
    let deg = gen[0].0.len();
    if m < deg {
        return 0;
    }
    let mut rows = Vec::new();
    for left in 0..=(m - deg) {
        for w in words(d, left) {
            for w2 in words(d, m - deg - left) {
                let mut v = vec![0i64; d.pow(m as u32)];
                for (g, c) in gen {
                    let full = [w.clone(), g.clone(), w2.clone()].concat();
                    v[offset(d, &full)] += c;
                }
                rows.push(v);
            }
        }
    }
    rank_mod_p(rows)
}

/// Dense matrix of `p(s)` on the truncated Fock space, built word by word
/// from `s_α e_w = e_{αw}` (zero when `|α| + |w| > M`).
pub fn dense_poly_on_fock(p: &FreePoly, cutoff: usize) -> DMatrix<Complex64> {
    let d = p.d();
    let starts: Vec<usize> = (0..=cutoff).scan(0, |acc, k| {
        let s = *acc;
        *acc += d.pow(k as u32);
        Some(s)
    }).collect();
    let total: usize = (0..=cutoff).map(|k| d.pow(k as u32)).sum();
    let mut out = DMatrix::zeros(total, total);
    for k in 0..=cutoff {
        for w in words(d, k) {
            let col = starts[k] + offset(d, &w);
            for (alpha, c) in p.terms() {
                let len = alpha.len() + k;
                if len > cutoff {
                    continue;
                }
                let target = [alpha.letters().to_vec(), w.clone()].concat();
                out[(starts[len] + offset(d, &target), col)] += *c;
            }
        }
    }
    out
}

/// Euclidean distance from `v` to the span of one vector `g`, by hand.
pub fn dist_to_line(v: &[f64], g: &[f64]) -> f64 {
    let gg: f64 = g.iter().map(|x| x * x).sum();
    let vg: f64 = v.iter().zip(g).map(|(a, b)| a * b).sum();
    v.iter()
        .zip(g)
        .map(|(a, b)| (a - vg / gg * b).powi(2))
        .sum::<f64>()
        .sqrt()
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn poly(d: usize, terms: &[(&[u16], f64)]) -> FreePoly {
    FreePoly::from_real(d, terms).unwrap()
}

pub fn commutator() -> FreePoly {
    poly(2, &[(&[1, 2], 1.0), (&[2, 1], -1.0)])
}

pub fn qcommutator(q: f64) -> FreePoly {
    poly(2, &[(&[1, 2], 1.0), (&[2, 1], -q)])
}

pub fn word(letters: &[u16]) -> Word {
    Word::new(letters.to_vec())
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
