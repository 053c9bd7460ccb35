use super::*;
use crate::cover::SplitEmbedding;

fn fp(p: u64) -> Field {
    Field::Prime(p)
}

fn series(field: Field, c: &[i64], n: usize) -> TruncatedSeries {
    TruncatedSeries::from_i64s(field, c, n)
}

fn branch_cover(field: Field, branches: &[&[i64]], n: usize) -> DiskCover {
    let u = branches.iter().map(|c| series(field, c, n)).collect();
    DiskCover::from_branches(SplitEmbedding::new(u).unwrap()).unwrap()
}

fn vecs(field: Field, rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| Scalar::from_i64(field, x)).collect())
        .collect()
}

fn split_problem(d: usize, b: usize, field: Field) -> CrimpProblem {
    CrimpProblem::new(NormalizationData::split(d, field, b + 4).unwrap(), b).unwrap()
}

fn ramified_problem(e: usize, b: usize, field: Field) -> CrimpProblem {
    CrimpProblem::new(NormalizationData::ramified_disk(e, field, b + 4).unwrap(), b).unwrap()
}

fn all(problem: &CrimpProblem, order: FilterOrder, pruning: bool) -> Vec<CrimpSubalgebra> {
    let options = EnumerationOptions {
        order,
        conductor_pruning: pruning,
        ..Default::default()
    };
    enumerate_crimps(problem, options).unwrap().crimps
}

#[test]
fn delta_examples() {
    assert_eq!(crimp_delta(0, 2).unwrap(), 1);
    assert_eq!(crimp_delta(1, 3).unwrap(), 1);
    assert!(matches!(crimp_delta(0, 3), Err(Error::Parity { a: 0, b: 3 })));
    assert!(crimp_delta(4, 2).is_err());
}

#[test]
fn problem_requires_precision_beyond_b() {
    let n = NormalizationData::split(2, fp(5), 4).unwrap();
    assert!(matches!(CrimpProblem::new(n, 4), Err(Error::PrecisionTooSmall { .. })));
}

#[test]
fn node_membership() {
    let f = fp(3);
    let p = split_problem(2, 2, f);
    let node = vecs(f, &[&[1, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]);
    assert_eq!(is_crimp(&p, &node).unwrap(), None);
    let whole = vecs(f, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
    assert_eq!(
        is_crimp(&p, &whole).unwrap(),
        Some(CrimpFailure::Codimension { expected: 1, found: 0 })
    );
    let no_unit = vecs(f, &[&[0, 1, 0, 0], &[0, 0, 0, 1]]);
    assert_eq!(
        is_crimp(&p, &no_unit).unwrap(),
        Some(CrimpFailure::MissingBaseRing { power: 0 })
    );
    assert!(matches!(is_crimp(&p, &vecs(f, &[&[1, 0, 1]])), Err(Error::Shape(_))));
}

#[test]
fn non_closed_subspace_names_a_product() {
    // 1, t*1 and e_1 + t e_2 in (k[t]/t^2)^3; the square of the last is e_1
    let f = fp(5);
    let p = split_problem(3, 2, f);
    let s = vecs(f, &[&[1, 0, 1, 0, 1, 0], &[0, 1, 0, 1, 0, 1], &[0, 0, 1, 0, 0, 1]]);
    let failure = is_crimp(&p, &s).unwrap().unwrap();
    let CrimpFailure::NotClosed { left, right } = failure else {
        panic!("unexpected {failure:?}");
    };
    let c = CrimpSubalgebra::from_vectors(f, 3, 2, &s).unwrap();
    let ops = PrimeField::new(5);
    let ambient = p.ambient(ops).unwrap();
    let sub = c.subspace(&ops).unwrap();
    let prod = ambient.product(&sub.rows()[left], &sub.rows()[right]);
    assert!(!sub.contains(&ops, &prod));
}

#[test]
fn node_is_unique() {
    for q in [3, 5] {
        let p = split_problem(2, 2, fp(q));
        let crimps = all(&p, FilterOrder::SubalgebraFirst, true);
        assert_eq!(crimps.len(), 1, "F_{q}");
        let node = CrimpSubalgebra::from_vectors(
            fp(q),
            2,
            2,
            &vecs(fp(q), &[&[1, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]),
        )
        .unwrap();
        assert_eq!(crimps[0], node);
        let cover = branch_cover(fp(q), &[&[0], &[0, 1]], 6);
        assert_eq!(crimp_of(&cover, 2).unwrap().1, node);
    }
}

#[test]
fn cusp_is_unique() {
    for q in [3, 5] {
        let p = ramified_problem(2, 3, fp(q));
        assert_eq!(p.normalization().branch_valuation(), 1);
        assert_eq!(p.delta(), 1);
        let crimps = all(&p, FilterOrder::SubalgebraFirst, true);
        assert_eq!(crimps.len(), 1);
        // k + s^2 k[[s]]: everything except the coordinate of s itself
        // (block 1, t^0)
        let c = &crimps[0];
        assert_eq!(c.codim(), 1);
        let s_coord = CrimpSubalgebra::from_vectors(fp(q), 2, 3, &vecs(fp(q), &[&[0, 0, 0, 1, 0, 0]])).unwrap();
        assert_eq!(check_crimp(&p, c).unwrap(), None);
        let mut with_s = c.basis().to_vec();
        with_s.extend(s_coord.basis().iter().cloned());
        assert_eq!(
            CrimpSubalgebra::from_vectors(fp(q), 2, 3, &with_s).unwrap().codim(),
            0
        );
        let ops = PrimeField::new(q);
        assert!(!c.subspace(&ops).unwrap().contains(&ops, &[0, 0, 0, 1, 0, 0]));
    }
}

#[test]
fn orders_and_pruning_agree() {
    let cases = [
        split_problem(2, 2, fp(3)),
        split_problem(2, 4, fp(3)),
        split_problem(2, 4, fp(5)),
        ramified_problem(2, 3, fp(3)),
        ramified_problem(2, 5, fp(3)),
        split_problem(3, 2, fp(3)),
    ];
    for p in &cases {
        let reference = all(p, FilterOrder::SubalgebraFirst, false);
        assert!(!reference.is_empty());
        for (order, pruning) in [
            (FilterOrder::BranchFirst, false),
            (FilterOrder::SubalgebraFirst, true),
            (FilterOrder::BranchFirst, true),
        ] {
            assert_eq!(all(p, order, pruning), reference);
        }
        for c in &reference {
            assert_eq!(c.codim(), p.delta());
            assert_eq!(check_crimp(p, c).unwrap(), None);
            assert_eq!(
                lifted_branch_valuation(p, c).unwrap(),
                Some(Valuation::Finite(p.b()))
            );
        }
    }
}

#[test]
fn enumeration_is_closed_under_automorphisms() {
    for p in [split_problem(2, 4, fp(5)), split_problem(3, 4, fp(3)), ramified_problem(2, 5, fp(5))] {
        let crimps = all(&p, FilterOrder::SubalgebraFirst, true);
        for c in &crimps {
            for image in automorphism_images(c, p.normalization()).unwrap() {
                assert!(crimps.binary_search(&image).is_ok());
            }
        }
    }
}

#[test]
fn ramified_automorphisms_are_roots_of_unity() {
    assert_eq!(NormalizationData::ramified_disk(2, fp(5), 6).unwrap().automorphisms().len(), 2);
    assert_eq!(NormalizationData::ramified_disk(4, fp(5), 6).unwrap().automorphisms().len(), 4);
    assert_eq!(NormalizationData::ramified_disk(3, fp(5), 6).unwrap().automorphisms().len(), 1);
    assert_eq!(NormalizationData::ramified_disk(3, fp(7), 6).unwrap().automorphisms().len(), 3);
    assert_eq!(
        NormalizationData::ramified_disk(2, Field::Rational, 6).unwrap().automorphisms().len(),
        2
    );
    assert_eq!(NormalizationData::split(3, fp(5), 6).unwrap().automorphisms().len(), 6);
}

#[test]
fn supplied_automorphisms_are_checked() {
    let f = fp(5);
    let cover = DiskCover::split(2, f, 6).unwrap();
    let mut swap = SeriesMatrix::identity(2, f, 6);
    swap.set(0, 0, TruncatedSeries::zero(f, 6));
    swap.set(1, 1, TruncatedSeries::zero(f, 6));
    swap.set(0, 1, TruncatedSeries::one(f, 6));
    swap.set(1, 0, TruncatedSeries::one(f, 6));
    let n = NormalizationData::from_cover(cover.clone(), vec![swap]).unwrap();
    assert_eq!(n.automorphisms().len(), 2);
    let mut bad = SeriesMatrix::identity(2, f, 6);
    bad.set(0, 1, TruncatedSeries::one(f, 6));
    assert!(matches!(
        NormalizationData::from_cover(cover, vec![bad]),
        Err(Error::InvalidAutomorphism { index: 0 })
    ));
}

#[test]
fn crimps_of_embedded_covers() {
    let f = fp(7);
    let tacnode = branch_cover(f, &[&[0], &[0, 0, 1]], 8);
    let (p, c) = crimp_of(&tacnode, 4).unwrap();
    assert_eq!(p.delta(), 2);
    assert_eq!(check_crimp(&p, &c).unwrap(), None);

    let triple = branch_cover(f, &[&[0], &[0, 1], &[0, 2]], 10);
    let (p, c) = crimp_of(&triple, 6).unwrap();
    assert_eq!(p.delta(), 3);
    assert_eq!(c.codim(), 3);
    assert_eq!(check_crimp(&p, &c).unwrap(), None);

    assert!(matches!(
        crimp_of(&triple, 4),
        Err(Error::BranchMismatch { expected: 4, found: 6 })
    ));
    let plain = DiskCover::split(2, f, 6).unwrap();
    assert!(crimp_of(&plain, 0).is_ok());
}

#[test]
fn triple_points_lie_in_the_enumeration() {
    let f = fp(5);
    let p = split_problem(3, 6, f);
    let e = enumerate_crimps(&p, EnumerationOptions::default()).unwrap();
    assert_eq!(e.search_space, gaussian(6, 3, 5));
    for c in 2..5 {
        let cover = branch_cover(f, &[&[0], &[0, 1], &[0, c]], 10);
        let (_, crimp) = crimp_of(&cover, 6).unwrap();
        assert!(e.crimps.binary_search(&crimp).is_ok(), "c = {c}");
    }
}

fn gaussian(m: usize, k: usize, q: u64) -> u128 {
    crate::linalg::gaussian_binomial(m, k, q)
}

#[test]
fn orbits_and_isomorphism() {
    let f = fp(7);
    let n = NormalizationData::split(3, f, 10).unwrap();
    let crimp = |u: [i64; 3]| crimp_of(&branch_cover(f, &[&[0, u[0]], &[0, u[1]], &[0, u[2]]], 10), 6).unwrap().1;
    let a = crimp([0, 1, 2]);
    let a_swapped = crimp([0, 2, 1]);
    let b = crimp([0, 1, 3]);
    let list = vec![a.clone(), a_swapped.clone(), b.clone()];
    assert_eq!(aut_orbits(&list, &n).unwrap(), vec![vec![0, 1], vec![2]]);
    assert!(crimps_isomorphic(&a, &a, &n).unwrap());
    assert!(crimps_isomorphic(&a, &a_swapped, &n).unwrap());
    assert!(!crimps_isomorphic(&a, &b, &n).unwrap());

    let node = split_problem(2, 2, fp(3));
    let crimps = all(&node, FilterOrder::SubalgebraFirst, true);
    assert_eq!(aut_orbits(&crimps, node.normalization()).unwrap(), vec![vec![0]]);

    let ram = NormalizationData::ramified_disk(2, f, 10).unwrap();
    assert!(matches!(crimps_isomorphic(&a, &a, &ram), Err(Error::NonSplit)));
    let other = NormalizationData::split(3, fp(5), 10).unwrap();
    assert!(matches!(aut_orbits(&list, &other), Err(Error::InconsistentProblems)));
}

#[test]
fn cross_ratio_examples() {
    let q = Field::Rational;
    let n = NormalizationData::split(3, q, 10).unwrap();
    let orbit = |u: [i64; 3]| {
        let (_, c) = crimp_of(&branch_cover(q, &[&[5, u[0]], &[5, u[1]], &[5, u[2]]], 10), 6).unwrap();
        tangent_cross_ratio(&c, &n).unwrap()
    };
    let two = orbit([0, 1, 2]);
    let parse = |s: &str| Scalar::parse(q, s).unwrap();
    assert_eq!(two.values, vec![parse("-1"), parse("1/2"), parse("2")]);
    assert_eq!(orbit([0, 1, -1]), two);
    let three = orbit([0, 1, 3]);
    assert_eq!(three.values.len(), 6);
    assert!(three.contains(&parse("3")) && three.contains(&parse("2/3")));
    assert!(three.is_disjoint(&two));
    // invariant under permuting branches and rescaling t-slopes
    assert_eq!(orbit([3, 1, 0]), three);
    assert_eq!(orbit([0, 2, 6]), three);

    let (_, node_like) = crimp_of(&branch_cover(q, &[&[0], &[0, 1], &[0, 0, 1]], 10), 8).unwrap();
    assert!(matches!(tangent_cross_ratio(&node_like, &n), Err(Error::DegenerateTangency(_))));
    let (_, apart) = crimp_of(&branch_cover(q, &[&[0], &[1], &[0, 1]], 10), 2).unwrap();
    assert!(matches!(tangent_cross_ratio(&apart, &n), Err(Error::DegenerateTangency(_))));
}

#[test]
fn cross_ratio_is_constant_on_orbits() {
    let f = fp(11);
    let n = NormalizationData::split(3, f, 10).unwrap();
    for c in 2..11 {
        let (_, crimp) = crimp_of(&branch_cover(f, &[&[0], &[0, 1], &[0, c]], 10), 6).unwrap();
        let value = tangent_cross_ratio(&crimp, &n).unwrap();
        assert!(value.contains(&Scalar::from_i64(f, c)));
        for image in automorphism_images(&crimp, &n).unwrap() {
            assert_eq!(tangent_cross_ratio(&image, &n).unwrap(), value);
        }
    }
}

#[test]
fn budget_and_field_errors() {
    let p = split_problem(3, 6, fp(5));
    let options = EnumerationOptions {
        budget: 10,
        ..Default::default()
    };
    assert!(matches!(
        enumerate_crimps(&p, options),
        Err(Error::BudgetExceeded { search_space, budget: 10 }) if search_space == gaussian(6, 3, 5)
    ));
    let q = split_problem(2, 2, Field::Rational);
    assert!(matches!(
        enumerate_crimps(&q, EnumerationOptions::default()),
        Err(Error::InfiniteField(_))
    ));
}

#[test]
fn serde_roundtrip() {
    let p = split_problem(2, 4, fp(5));
    for c in all(&p, FilterOrder::SubalgebraFirst, true) {
        let json = serde_json::to_string(&c).unwrap();
        let back: CrimpSubalgebra = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
