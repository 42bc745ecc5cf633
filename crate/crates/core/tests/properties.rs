use helly_core::extremal::{build_even_family, partner, SharpnessSpec};
use helly_core::invariant::{distinct_spectrum_basis, invariant_support, SupportSet};
use helly_core::set_family::{extremal_family, lemma_condition_holds, proper_subsets};
use helly_core::{
    operator_family_linear_basis, Budget, FieldSpec, Matrix, OperatorFamily, Scalar, Subspace,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Rationals),
        Just(FieldSpec::Prime(2)),
        Just(FieldSpec::Prime(5)),
        Just(FieldSpec::Prime(7)),
        Just(FieldSpec::Prime(4_294_967_291)),
    ]
}

fn scalar(f: FieldSpec) -> impl Strategy<Value = Scalar> {
    (-1_000_000i64..1_000_000, 1i64..1000).prop_map(move |(a, b)| match f {
        FieldSpec::Rationals => Scalar::parse(&format!("{a}/{b}"), f).unwrap(),
        _ => f.from_i64(a),
    })
}

fn matrix(f: FieldSpec, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    any::<u64>()
        .prop_map(move |seed| Matrix::random(f, rows, cols, &mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms((f, a, b, c) in field().prop_flat_map(|f| (Just(f), scalar(f), scalar(f), scalar(f)))) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &f.zero(), a.clone());
        prop_assert_eq!(&a * &f.one(), a.clone());
        prop_assert!((&a + &(-a.clone())).is_zero());
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if a.is_zero() {
            prop_assert!(a.inv().is_err());
        } else {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
            prop_assert_eq!(&b.checked_div(&a).unwrap() * &a, b.clone());
        }
        prop_assert_eq!(Scalar::parse(&a.to_string(), f).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_nullity((_f, m) in (field(), 1usize..5, 1usize..5)
        .prop_flat_map(|(f, r, c)| (Just(f), matrix(f, r, c))))
    {
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.dim(), m.cols());
        for v in k.basis_vectors() {
            prop_assert!(m.apply(&v).unwrap().iter().all(Scalar::is_zero));
        }
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn canonical_basis_ignores_generators((f, m, g) in (field(), 1usize..5, 1usize..5)
        .prop_flat_map(|(f, r, d)| (Just(f), matrix(f, r, d), any::<u64>())))
    {
        let s = Subspace::from_row_space(&m);
        let mut rng = ChaCha8Rng::seed_from_u64(g);
        let mix = Matrix::random_invertible(f, m.rows(), &mut rng);
        let t = Subspace::from_row_space(&mix.mul(&m).unwrap());
        prop_assert_eq!(&s, &t);
        let rows: Vec<Vec<Scalar>> = m.to_rows().into_iter().rev().collect();
        prop_assert_eq!(s, Subspace::span(f, m.cols(), &rows).unwrap());
    }

    #[test]
    fn modular_law_and_duality((_f, a, b) in (field(), 1usize..5, 1usize..4, 1usize..4)
        .prop_flat_map(|(f, d, r, s)| (Just(f), matrix(f, r, d), matrix(f, s, d))))
    {
        let u = Subspace::from_row_space(&a);
        let w = Subspace::from_row_space(&b);
        let sum = u.sum(&w).unwrap();
        let meet = u.intersect(&w).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), u.dim() + w.dim());
        prop_assert!(sum.contains(&u).unwrap() && sum.contains(&w).unwrap());
        prop_assert!(u.contains(&meet).unwrap() && w.contains(&meet).unwrap());
        prop_assert_eq!(u.annihilator().annihilator(), u.clone());
        prop_assert_eq!(u.annihilator().dim() + u.dim(), u.ambient_dim());
    }

    #[test]
    fn support_round_trip(seed in any::<u64>(), d in 2usize..5, mask in 1u32..15) {
        let f = FieldSpec::Prime(7);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Matrix::random_invertible(f, d, &mut rng);
        let diag: Vec<Scalar> = (0..d).map(|i| f.from_i64(i as i64 + 1)).collect();
        let a = p.mul(&Matrix::diagonal(f, &diag)).unwrap().mul(&p.inverse().unwrap()).unwrap();
        let basis = distinct_spectrum_basis("A0", &a).unwrap().unwrap();
        let idx: Vec<usize> = (1..=d).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        prop_assume!(!idx.is_empty() && idx.len() < d);
        let set = SupportSet::new(idx);
        let h = basis.span_of(&set);
        prop_assert!(a.is_invariant(&h).unwrap());
        prop_assert_eq!(invariant_support(&basis, &h).unwrap(), set);
    }

    #[test]
    fn linear_basis_reconstructs(seed in any::<u64>(), d in 2usize..4, f in field()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = d * d + 5;
        let fam = OperatorFamily::from_matrices(f, d, (0..n).map(|_| Matrix::random(f, d, d, &mut rng)).collect()).unwrap();
        let lb = operator_family_linear_basis(&fam).unwrap();
        prop_assert!(lb.indices.len() <= d * d);
        for (i, coeffs) in lb.coefficients.iter().enumerate() {
            let mut acc = Matrix::zeros(f, d, d);
            for (&j, c) in lb.indices.iter().zip(coeffs) {
                acc = acc.add(&fam.matrix(j).scale(c)).unwrap();
            }
            prop_assert_eq!(&acc, fam.matrix(i));
        }
    }

    #[test]
    fn char_poly_annihilates(f in field(), d in 1usize..5, seed in any::<u64>()) {
        let a = Matrix::random(f, d, d, &mut ChaCha8Rng::seed_from_u64(seed));
        let cp = a.char_poly().unwrap();
        prop_assert_eq!(cp.degree(), Some(d));
        let mut acc = Matrix::zeros(f, d, d);
        for c in cp.coeffs().iter().rev() {
            acc = acc.mul(&a).unwrap().add(&Matrix::identity(f, d).scale(c)).unwrap();
        }
        prop_assert_eq!(acc, Matrix::zeros(f, d, d));
        if f.order().is_some_and(|p| p > helly_core::poly::ROOT_SCAN_LIMIT) {
            prop_assert!(a.eigen_decomposition().is_err());
            return Ok(());
        }
        for e in a.eigen_decomposition().unwrap() {
            prop_assert!(cp.eval(&e.value).is_zero());
            for v in e.space.basis_vectors() {
                prop_assert_eq!(a.is_eigenvector(&v).unwrap(), Some(e.value.clone()));
            }
        }
    }
}

#[test]
fn extremal_families_are_maximal() {
    let budget = Budget::default();
    for q in 2..=8 {
        let fam = extremal_family(q).unwrap();
        assert_eq!(fam.len(), 2 * q - 2);
        assert!(lemma_condition_holds(&fam, &budget).unwrap().holds);
        for cand in proper_subsets(q) {
            if fam.masks().contains(&cand) {
                continue;
            }
            let bigger = fam.with_member(cand).unwrap();
            assert!(
                !lemma_condition_holds(&bigger, &budget).unwrap().holds,
                "q={q} cand={cand:b}"
            );
        }
    }
}

#[test]
fn shifted_vectors_are_leave_one_out_eigenvectors() {
    for n in 1..=4 {
        for f in [
            FieldSpec::Rationals,
            FieldSpec::Prime(2),
            FieldSpec::Prime(5),
            FieldSpec::Prime(7),
        ] {
            let spec = SharpnessSpec::new(n, f).unwrap();
            let fam = build_even_family(n, f).unwrap();
            for j in 1..=3 * n {
                let v = spec.e(partner(j));
                for i in 1..=3 * n {
                    let is_eig = fam.matrix(i - 1).is_eigenvector(v).unwrap().is_some();
                    assert_eq!(is_eig, i != j, "n={n} {f} j={j} i={i}");
                }
            }
        }
    }
}

#[test]
fn planted_distinct_spectrum_never_contradicts() {
    use helly_core::harness::helly_check_invariant;
    let f = FieldSpec::Prime(2);
    let planted = Matrix::from_i64s(f, &[&[0, 0], &[0, 1]]);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in 2..=6 {
        for _ in 0..40 {
            let mut ops = vec![planted.clone()];
            ops.extend((1..n).map(|_| Matrix::random(f, 2, 2, &mut rng)));
            let fam = OperatorFamily::from_matrices(f, 2, ops).unwrap();
            let r = helly_check_invariant(&fam, 3, &Budget::default()).unwrap();
            assert_eq!(r.contradiction_threshold, Some(3));
            assert!(!r.contradiction && !r.implication_fails, "{fam:?}");
        }
    }
}
