mod common;

use common::*;
use ncball::fock::{creation_matrix, saturate_ideal, BlockOperator, CompressedTuple, GradedIdealBasis, TruncatedFock};
use ncball::linalg::spectral_norm;
use ncball::norms::*;
use ncball::{FreePoly, Word};

#[test]
fn op_norm_examples() {
    assert_eq!(op_norm(&BlockOperator::identity(vec![1, 2, 4])).unwrap(), 1.0);
    let fock = TruncatedFock::new(2, 3).unwrap();
    assert!((op_norm(&creation_matrix(1, &fock).unwrap()).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(op_norm(&BlockOperator::zero(vec![1, 2, 4, 8])).unwrap(), 0.0);
}

#[test]
fn power_iteration_path_matches_dense() {
    // 1023 dimensions: above the dense limit
    let p = poly(2, &[(&[], 0.3), (&[1], 1.0), (&[2, 1], -0.7), (&[1, 2, 2], 0.4)]);
    let op = CompressedTuple::free(2, 9).unwrap().apply_poly(&p).unwrap();
    assert!(op.total_dim() > DENSE_NORM_LIMIT);
    let iter = op_norm(&op).unwrap();
    let dense = spectral_norm(&op.to_dense()).unwrap();
    assert!((iter - dense).abs() <= 1e-8 * dense, "{iter} vs {dense}");
    // deterministic start vector
    assert_eq!(iter.to_bits(), op_norm(&op).unwrap().to_bits());
}

#[test]
fn homogeneous_anorm_against_truncated_operator() {
    let sym = poly(2, &[(&[1, 2], 1.0), (&[2, 1], 1.0)]);
    let oracle = op_norm(&CompressedTuple::free(2, 2).unwrap().apply_poly(&sym).unwrap()).unwrap();
    assert!((oracle - 2f64.sqrt()).abs() < 1e-12);
    assert!((homogeneous_anorm(&sym).unwrap() - oracle).abs() < 1e-12);
    assert_eq!(homogeneous_anorm(&poly(2, &[(&[1], 3.0)])).unwrap(), 3.0);
}

#[test]
fn quotient_norm_examples() {
    let z1z2 = poly(2, &[(&[1, 2], 1.0)]);
    for q in [0.0, 0.25, 0.5, 1.0] {
        let ideal = saturate_ideal(2, &[qcommutator(q)], 2).unwrap();
        let a = quotient_norm_homog(&z1z2, &ideal).unwrap();
        let b = quotient_norm_homog(&commutator(), &ideal).unwrap();
        assert!((a - q / (1.0 + q * q).sqrt()).abs() < 1e-12);
        assert!((b - (1.0 - q) / (1.0 + q * q).sqrt()).abs() < 1e-12);
    }
    let zero = GradedIdealBasis::zero(2, 2).unwrap();
    assert_eq!(quotient_norm_homog(&z1z2, &zero).unwrap(), 1.0);
    assert_eq!(quotient_norm_homog(&FreePoly::zero(2), &zero).unwrap(), 0.0);
}

#[test]
fn bracket_examples() {
    let ideal = saturate_ideal(2, &[commutator()], 2).unwrap();
    let b = quotient_norm_bracket(&poly(2, &[(&[1, 2], 1.0)]), Some(&ideal), 2).unwrap();
    assert!(b.exact);
    assert!((b.lower - 0.5f64.sqrt()).abs() < 1e-12);
    assert!((b.upper - 0.5f64.sqrt()).abs() < 1e-12);
    assert_eq!(b.value(), Some(b.upper));

    let member = quotient_norm_bracket(&commutator(), Some(&ideal), 2).unwrap();
    assert!(member.lower.abs() < 1e-10 && member.upper.abs() < 1e-10);

    let one_plus_z1 = poly(2, &[(&[], 1.0), (&[1], 1.0)]);
    let b = quotient_norm_bracket(&one_plus_z1, None, 200).unwrap();
    assert_eq!(b.lower_method, Method::SingleLetterToeplitz);
    assert_eq!(b.upper_method, Method::ComponentTriangle);
    assert!(!b.exact);
    // singular values of the n×n bidiagonal I + N are 2cos(kπ/(2n+1))
    let oracle = 2.0 * (std::f64::consts::PI / 403.0).cos();
    assert!((b.lower - oracle).abs() < 1e-10);
    assert!(b.lower >= 1.99);
    assert_eq!(b.upper, 2.0);
}

#[test]
fn toeplitz_fast_path_agrees_with_full_truncation() {
    let p = poly(2, &[(&[], 0.5), (&[2], -1.0), (&[2, 2], 0.25), (&[2, 2, 2], 2.0)]);
    let (fast, method) = truncated_norm(&p, None, 5).unwrap();
    assert_eq!(method, Method::SingleLetterToeplitz);
    let full = op_norm(&CompressedTuple::free(2, 5).unwrap().apply_poly(&p).unwrap()).unwrap();
    assert!((fast - full).abs() < 1e-12);
    // the fast path does not apply on a nonzero ideal
    let ideal = saturate_ideal(2, &[commutator()], 5).unwrap();
    assert_eq!(truncated_norm(&p, Some(&ideal), 5).unwrap().1, Method::TruncatedCompression);
}

#[test]
fn bracket_sandwich_in_the_cutoff() {
    let ideal = saturate_ideal(2, &[qcommutator(0.5)], 6).unwrap();
    let p = poly(2, &[(&[], 1.0), (&[1], 0.5), (&[2, 1], -1.0), (&[1, 2, 2], 0.3)]);
    let mut prev = 0.0;
    for m in 3..=6 {
        let b = quotient_norm_bracket(&p, Some(&ideal), m).unwrap();
        assert!(b.lower >= prev - 1e-12, "cutoff {m}");
        assert!(b.lower <= b.upper + 1e-12);
        prev = b.lower;
    }
}

#[test]
fn zero_ideal_upper_is_component_sum() {
    let p = poly(3, &[(&[], 2.0), (&[1], 3.0), (&[2], 4.0), (&[1, 3], 1.0)]);
    let b = quotient_norm_bracket(&p, None, 2).unwrap();
    assert!((b.upper - (2.0 + 5.0 + 1.0)).abs() < 1e-15);
}

#[test]
fn seminorm_examples() {
    let z1 = FreePoly::var(2, 1).unwrap();
    for x in [0.2, 0.6] {
        assert!((seminorm_trunc(&z1, x, None, 2).unwrap() - x).abs() < 1e-12);
    }
    assert_eq!(seminorm_trunc(&FreePoly::one(2), 0.4, None, 1).unwrap(), 1.0);
    let ideal = saturate_ideal(2, &[commutator()], 3).unwrap();
    assert!(seminorm_trunc(&commutator(), 0.9, Some(&ideal), 3).unwrap() < 1e-12);
    assert!(seminorm_trunc(&z1, -0.1, None, 2).is_err());
}

fn z1_power(k: usize) -> FreePoly {
    FreePoly::monomial(2, Word::power(1, k), c(1.0)).unwrap()
}

#[test]
fn majorant_geometric_and_factorial() {
    let geo = membership_majorant(z1_power, 0.5, 40, DEFAULT_BLOWUP).unwrap();
    assert!((geo.last() - 2.0).abs() < 1e-11);
    assert_eq!(geo.diverged_at, None);
    assert!(geo.partial_sums.windows(2).all(|w| w[1] >= w[0]));

    let fact = |k: usize| {
        let f: f64 = (1..=k).map(|i| i as f64).product();
        z1_power(k).scale(c(f))
    };
    let rep = membership_majorant(fact, 0.5, 20, DEFAULT_BLOWUP).unwrap();
    let at = rep.diverged_at.expect("factorial coefficients blow up");
    // oracle: first k with Σ_{i≤k} i!/2^i > 1e6
    let mut sum = 0.0;
    let mut first = None;
    for k in 0..=20 {
        let f: f64 = (1..=k).map(|i| i as f64).product();
        sum += f / 2f64.powi(k as i32);
        if sum > 1e6 && first.is_none() {
            first = Some(k);
        }
    }
    assert_eq!(Some(at), first);
    assert!(membership_majorant(z1_power, 0.0, 3, DEFAULT_BLOWUP).is_err());
}
