mod common;

use common::*;
use ncball::deform::*;
use ncball::fock::saturate_ideal;
use ncball::linalg::{CMat, CVec};
use ncball::{Error, FreePoly};
use num_complex::Complex64;

fn unit_grid() -> Grid {
    Grid::uniform(0.0, 1.0, 101).unwrap()
}

#[test]
fn qfamily_field_closed_forms() {
    let fam = family_qcommutator((0.0, 1.0));
    let grid = unit_grid();
    let a = norm_field(&fam, &poly(2, &[(&[1, 2], 1.0)]), &grid, 2, RANK_TOL).unwrap();
    let b = norm_field(&fam, &commutator(), &grid, 2, RANK_TOL).unwrap();
    for (pa, pb) in a.values.iter().zip(&b.values) {
        let t = pa.t;
        assert!(pa.exact && pb.exact);
        assert!((pa.upper - t / (1.0 + t * t).sqrt()).abs() < 1e-10);
        assert!(((pb.upper - (1.0 - t).abs() / (1.0 + t * t).sqrt()).abs()) < 1e-10);
    }
    let rep = continuity_report(&a, 0.05);
    assert!(rep.passed());
    assert!(rep.max_jump <= 0.011);
    // lower semicontinuity witness with L = 1
    for w in a.values.windows(2) {
        assert!(w[1].upper >= w[0].upper - 1.0 * (w[1].t - w[0].t));
    }
}

#[test]
fn zero_family_gives_constant_field() {
    let fam = IdealFamily::constant(2, (0.0, 1.0), &[FreePoly::zero(2)]).unwrap();
    let p = poly(2, &[(&[1, 1], 3.0), (&[2, 1], 4.0)]);
    let field = norm_field(&fam, &p, &Grid::uniform(0.0, 1.0, 11).unwrap(), 2, RANK_TOL).unwrap();
    assert!(field.values.iter().all(|v| v.upper == 5.0));
    assert!(continuity_report(&field, 1e-12).flags.is_empty());
}

#[test]
fn vanishing_generator_flags_one_jump() {
    let fam = family_vanishing_commutator((0.0, 1.0));
    let grid = Grid::from_points((0..=10).map(|i| i as f64 * 0.001).collect()).unwrap();
    let field = norm_field(&fam, &commutator(), &grid, 2, RANK_TOL).unwrap();
    let rep = continuity_report(&field, grid.default_threshold());
    assert_eq!(rep.flags.len(), 1);
    assert_eq!(rep.flags[0].index, 0);
    assert!((rep.flags[0].jump - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn doubled_grid_agrees_at_shared_points() {
    let fam = family_qcommutator((0.0, 1.0));
    let p = poly(2, &[(&[1, 2], 0.3), (&[2, 1], 1.0)]);
    let coarse = norm_field(&fam, &p, &Grid::uniform(0.0, 1.0, 21).unwrap(), 2, RANK_TOL).unwrap();
    let fine = norm_field(&fam, &p, &Grid::uniform(0.0, 1.0, 41).unwrap(), 2, RANK_TOL).unwrap();
    for (i, v) in coarse.values.iter().enumerate() {
        assert_eq!(v.t, fine.values[2 * i].t);
        assert!((v.upper - fine.values[2 * i].upper).abs() < 1e-12);
    }
}

#[test]
fn bracketed_field_and_pessimistic_gap() {
    let fam = family_qcommutator((0.0, 1.0));
    let p = poly(2, &[(&[], 1.0), (&[1, 2], 1.0)]);
    let field = norm_field(&fam, &p, &Grid::uniform(0.0, 1.0, 5).unwrap(), 2, RANK_TOL).unwrap();
    assert!(field.values.iter().all(|v| !v.exact && v.lower <= v.upper + 1e-12));
    // overlapping brackets never count as a jump
    let rep = continuity_report(&field, 0.0);
    for w in field.values.windows(2) {
        let gap = (w[1].lower - w[0].upper).max(w[0].lower - w[1].upper).max(0.0);
        assert!(gap <= rep.max_jump + 1e-15);
    }
}

#[test]
fn csv_layout() {
    let fam = family_qcommutator((0.0, 1.0));
    let field = norm_field(&fam, &poly(2, &[(&[1, 2], 1.0)]), &Grid::from_points(vec![0.5]).unwrap(), 2, RANK_TOL)
        .unwrap();
    let csv = field.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,lower,upper,exact_flag");
    assert_eq!(lines.len(), 2);
    let cols: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cols[0], "5.0000000000000000e-1");
    assert_eq!(cols[3], "1");
    let v: f64 = cols[1].parse().unwrap();
    assert_eq!(v, field.values[0].lower);
    assert!(continuity_report(&field, 0.1).flags.is_empty());
}

#[test]
fn kernel_dims_examples() {
    let grid = unit_grid();
    let q = kernel_dims(&family_qcommutator((0.0, 1.0)), &grid, 2, RANK_TOL).unwrap();
    assert!(q.dims.iter().all(|&k| k == 1));
    assert_eq!(q.verdict, Verdict::Pass);

    let v = kernel_dims(&family_vanishing_commutator((0.0, 1.0)), &grid, 2, RANK_TOL).unwrap();
    assert_eq!(v.dims[0], 0);
    assert!(v.dims[1..].iter().all(|&k| k == 1));
    assert_eq!(v.flagged, vec![0]);
    assert_eq!(v.verdict, Verdict::Fail);

    let joint = rank_continuity_report(
        &family_vanishing_commutator((0.0, 1.0)),
        &commutator(),
        &grid,
        2,
        2,
        grid.default_threshold(),
        RANK_TOL,
    )
    .unwrap();
    assert!(!joint.continuity.passed());
    assert!(joint.consistent);

    let zero = IdealFamily::constant(2, (0.0, 1.0), &[]).unwrap();
    let z = kernel_dims(&zero, &grid, 3, RANK_TOL).unwrap();
    assert!(z.dims.iter().all(|&k| k == 0));
    assert_eq!(z.verdict, Verdict::Pass);
}

#[test]
fn grassmann_qfamily_and_plucker_routes() {
    let fam = family_qcommutator((0.0, 1.0));
    let path = grassmann_path(&fam, &unit_grid(), 2, 0.011, RANK_TOL, DEFAULT_PLUCKER_CAP).unwrap();
    assert_eq!(path.report.k, 1);
    assert!(path.report.max_chordal <= 0.011);
    assert_eq!(path.report.verdict, Verdict::Pass);
    // oracle: kernel line (e12 − t e21)/√(1+t²); sine of the angle between neighbors
    for (i, w) in path.points.windows(2).enumerate() {
        let (s, t) = (w[0].t, w[1].t);
        let cos = (1.0 + s * t) / ((1.0 + s * s) * (1.0 + t * t)).sqrt();
        let sine = (1.0 - cos * cos).max(0.0).sqrt();
        assert!((path.report.chordal[i] - sine).abs() < 1e-7);
    }
    let plucker = path.report.plucker.as_ref().unwrap();
    for (i, w) in path.points.windows(2).enumerate() {
        let det = (w[0].basis.adjoint() * &w[1].basis).determinant().norm();
        let ip: Complex64 = w[0].plucker.as_ref().unwrap().iter().zip(w[1].plucker.as_ref().unwrap()).map(|(a, b)| a.conj() * b).sum();
        assert!((ip.norm() - det).abs() < 1e-12);
        assert!((plucker[i] - path.report.chordal[i]).abs() < 1e-9);
    }
    // k = 1: the Plücker vector is the basis vector up to phase
    let pt = &path.points[30];
    let v: Vec<Complex64> = pt.basis.column(0).iter().copied().collect();
    let p = pt.plucker.as_ref().unwrap();
    let phase: Complex64 = v.iter().zip(p).map(|(a, b)| a.conj() * b).sum();
    assert!((phase.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn grassmann_constant_family_and_dimension_jump() {
    let fam = IdealFamily::constant(2, (0.0, 1.0), &[commutator()]).unwrap();
    let path = grassmann_path(&fam, &Grid::uniform(0.0, 1.0, 11).unwrap(), 3, 1e-12, RANK_TOL, DEFAULT_PLUCKER_CAP)
        .unwrap();
    assert_eq!(path.report.k, 4);
    assert!(path.report.chordal.iter().all(|&x| x < 1e-10));
    let jump = grassmann_path(
        &family_vanishing_commutator((0.0, 1.0)),
        &unit_grid(),
        2,
        0.1,
        RANK_TOL,
        DEFAULT_PLUCKER_CAP,
    );
    assert!(matches!(jump, Err(Error::DimensionJump { index: 0, from: 0, to: 1, .. })));
}

#[test]
fn plucker_cap_and_symmetry() {
    let ideal = saturate_ideal(2, &[commutator()], 4).unwrap();
    let b = ideal.basis(4).clone();
    // C(16, 11) = 4368
    assert!(plucker(&b, 4368).is_some());
    assert!(plucker(&b, 4367).is_none());
    let other = saturate_ideal(2, &[qcommutator(0.9)], 4).unwrap();
    let o = other.basis(4).clone();
    let d1 = chordal_distance(&b, &o).unwrap();
    let d2 = chordal_distance(&o, &b).unwrap();
    assert!((d1 - d2).abs() < 1e-12);
    assert!(chordal_distance(&b, &b).unwrap() < 1e-10);
    let pb = plucker(&b, DEFAULT_PLUCKER_CAP).unwrap();
    let norm: f64 = pb.iter().map(|z| z.norm_sqr()).sum();
    assert!((norm - 1.0).abs() < 1e-12);
    // rotating the basis inside its span leaves the gauge-fixed vector alone
    let rot = CMat::from_fn(11, 11, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, 0.3 * i as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let pr = plucker(&(&b * rot), DEFAULT_PLUCKER_CAP).unwrap();
    assert!(plucker_distance(&pb, &pr) < 1e-10);
    assert!(pb.iter().zip(&pr).all(|(a, b)| (a - b).norm() < 1e-10));
    let line = CMat::from_columns(&[CVec::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])]);
    assert_eq!(plucker(&line, 1), None);
}

#[test]
fn strong_continuity_examples() {
    let grid = unit_grid();
    let probes = [poly(2, &[(&[1, 2], 1.0)])];
    let q = strong_continuity_check(&family_qcommutator((0.0, 1.0)), &grid, &probes, &[2], 0.02, RANK_TOL).unwrap();
    assert_eq!(q.verdict, Verdict::Pass);
    assert!(q.entries[0].max_increment <= 0.02);

    let c = IdealFamily::constant(2, (0.0, 1.0), &[commutator()]).unwrap();
    let rep = strong_continuity_check(&c, &grid, &probes, &[2, 3], 1e-14, RANK_TOL).unwrap();
    assert!(rep.entries.iter().all(|e| e.max_increment == 0.0));

    let v = strong_continuity_check(&family_vanishing_commutator((0.0, 1.0)), &grid, &probes, &[2], 0.02, RANK_TOL)
        .unwrap();
    assert_eq!(v.verdict, Verdict::Fail);
    assert_eq!(v.entries[0].at_index, 0);
    // projection of e12 onto the commutator line has norm 1/√2
    assert!((v.entries[0].max_increment - 0.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn scaling_composition_and_tower() {
    let p = poly(2, &[(&[], 1.0), (&[1], -2.0), (&[2, 1], 0.5), (&[1, 2, 2], 3.0)]);
    let via = scaling_map(&scaling_map(&p, 0.5, 1.0).unwrap(), 0.2, 0.5).unwrap();
    let direct = scaling_map(&p, 0.2, 1.0).unwrap();
    let (rel, _) = coefficient_discrepancy(&via, &direct);
    assert!(rel <= 1e-14);

    let f = poly(2, &[(&[], 1.0), (&[1], 1.0), (&[1, 2], 1.0)]);
    let rep = tower_check(&f, &[0.3, 0.6, 0.9], None, 2).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    assert!(rep.seminorms.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(rep.pairs.len(), 3);
    // dyadic ratio 0.3/0.6 gives bitwise agreement
    assert!(rep.pairs[0].compat_bitwise);

    let ideal = saturate_ideal(2, &[commutator()], 2).unwrap();
    let rep = tower_check(&commutator(), &[0.3, 0.6, 0.9], Some(&ideal), 2).unwrap();
    assert!(rep.seminorms.iter().all(|&s| s < 1e-12));
    assert!(tower_check(&f, &[0.6, 0.3], None, 2).is_err());
}

#[test]
fn family_json_records() {
    let json = r#"[[{"word":[1,2],"coeffs":[1.0]},{"word":[2,1],"coeffs":[0.0,-1.0]}]]"#;
    let recs: Vec<Vec<FamilyTermRecord>> = serde_json::from_str(json).unwrap();
    let fam = IdealFamily::new(2, (0.0, 1.0), &recs).unwrap();
    assert_eq!(fam, family_qcommutator((0.0, 1.0)));
    let bad = r#"[[{"word":[1,2],"coeffs":[1.0],"extra":1}]]"#;
    assert!(serde_json::from_str::<Vec<Vec<FamilyTermRecord>>>(bad).is_err());
    assert!(IdealFamily::new(2, (1.0, 0.0), &recs).is_err());
    let three = vec![vec![FamilyTermRecord { word: vec![3], coeffs: vec![1.0] }]];
    assert!(matches!(IdealFamily::new(2, (0.0, 1.0), &three), Err(Error::LetterOutOfRange { .. })));
}

#[test]
fn chordal_matches_principal_cosines() {
    let a = saturate_ideal(2, &[qcommutator(0.2)], 3).unwrap();
    let b = saturate_ideal(2, &[qcommutator(0.8)], 3).unwrap();
    let cos = ncball::linalg::principal_cosines(a.basis(3), b.basis(3)).unwrap();
    let smallest = cos.iter().copied().fold(1.0, f64::min);
    let via_cos = (1.0 - smallest * smallest).sqrt();
    let d = chordal_distance(a.basis(3), b.basis(3)).unwrap();
    assert!(d > 0.1);
    assert!((d - via_cos).abs() < 1e-10);
}
