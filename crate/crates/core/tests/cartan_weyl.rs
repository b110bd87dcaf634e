use plie_core::cartan_weyl::{
    build_cartan_data, enumerate_weyl_group, fixed_dimension, fixed_lattice_basis, fixed_lattice_of, weyl_support,
    CartanData, Series, Weight, WeylWord,
};
use proptest::prelude::*;

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Determinant by cofactor expansion over the rationals of small integer matrices.
fn int_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let sub: Vec<Vec<i64>> = m[1..].iter().map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * int_det(&sub)
        })
        .sum()
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count()
}

fn cycle_count(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut cycles = 0;
    for s in 0..p.len() {
        if !seen[s] {
            cycles += 1;
            let mut k = s;
            while !seen[k] {
                seen[k] = true;
                k = p[k];
            }
        }
    }
    cycles
}

fn cases() -> Vec<(Series, usize, usize, i64, usize)> {
    // (series, rank, |W|, det A, Coxeter number)
    let mut out = Vec::new();
    for r in 1..=5 {
        out.push((Series::A, r, factorial(r + 1), (r + 1) as i64, r + 1));
    }
    for r in 2..=4 {
        out.push((Series::B, r, (1 << r) * factorial(r), 2, 2 * r));
        out.push((Series::C, r, (1 << r) * factorial(r), 2, 2 * r));
    }
    out.push((Series::D, 4, (1 << 3) * factorial(4), 4, 6));
    out
}

#[test]
fn classical_invariants_match_tables() {
    for (series, rank, order, det, h) in cases() {
        let cd = build_cartan_data(series, rank).unwrap();
        assert_eq!(int_det(&cd.cartan_matrix), det, "{series}{rank} det");
        assert_eq!(cd.positive_roots.len(), rank * h / 2, "{series}{rank} roots");
        assert!(cd.is_positive_definite());
        if order <= 400 {
            let w = enumerate_weyl_group(&cd);
            assert_eq!(w.len(), order, "{series}{rank} order");
            let max = w.iter().map(|x| x.length).max().unwrap();
            assert_eq!(max, cd.positive_roots.len());
        }
        let w0 = WeylWord::longest(&cd);
        assert_eq!(w0.length, cd.positive_roots.len());
        let cox = WeylWord::coxeter(&cd);
        let mut p = WeylWord::identity(&cd);
        for k in 1..=h {
            p = p.mul(&cox);
            assert_eq!(p.is_identity(), k == h, "{series}{rank} Coxeter order");
        }
    }
}

#[test]
fn unsupported_types_rejected() {
    assert!(build_cartan_data(Series::A, 0).is_err());
    assert!(build_cartan_data(Series::B, 1).is_err());
    assert!(build_cartan_data(Series::D, 3).is_err());
    assert!(build_cartan_data(Series::A, 9).is_err());
    let cd = CartanData::sl(3).unwrap();
    assert!(WeylWord::new(&cd, &[2]).is_err());
}

#[test]
fn reduced_words_share_one_action() {
    for (series, rank) in [(Series::A, 2), (Series::A, 3), (Series::B, 2), (Series::C, 2)] {
        let cd = build_cartan_data(series, rank).unwrap();
        for w in enumerate_weyl_group(&cd) {
            for word in w.all_reduced_words() {
                assert_eq!(word.len(), w.length);
                let other = WeylWord::new(&cd, &word).unwrap();
                assert_eq!(other.action, w.action);
            }
        }
    }
}

#[test]
fn simple_reflections_on_fundamental_weights() {
    let cd = build_cartan_data(Series::B, 3).unwrap();
    for i in 0..3 {
        let s = WeylWord::new(&cd, &[i]).unwrap();
        for j in 0..3 {
            let image = s.act(&Weight::fundamental(3, j));
            let mut want = Weight::fundamental(3, j).coords;
            if i == j {
                for (k, a) in cd.simple_root_weight(i).coords.iter().enumerate() {
                    want[k] -= a;
                }
            }
            assert_eq!(image.coords, want);
        }
    }
}

#[test]
fn sl_fixed_lattice_dimension_counts_cycles() {
    let cd = CartanData::sl(4).unwrap();
    for w in enumerate_weyl_group(&cd) {
        let p = w.permutation();
        assert_eq!(fixed_dimension(&w), cycle_count(&p) - 1, "{w}");
        assert_eq!(fixed_lattice_of(&w).len(), fixed_dimension(&w));
        assert_eq!(inversions(&p), w.length, "{w}");
        assert_eq!(WeylWord::from_permutation(&cd, &p).unwrap(), w);
    }
}

#[test]
fn fixed_lattice_rank_nullity_exhaustive() {
    for (series, rank) in [(Series::A, 2), (Series::A, 3), (Series::B, 2), (Series::C, 3)] {
        let cd = build_cartan_data(series, rank).unwrap();
        let all = enumerate_weyl_group(&cd);
        for u in &all {
            for v in all.iter().step_by(3) {
                let basis = fixed_lattice_basis(u, v).unwrap();
                let op = u.action.mul(&v.inverse().action).minus_identity();
                assert_eq!(basis.len() + op.rank(), rank);
                for t in &basis {
                    assert!(t.in_lattice());
                    assert_eq!(u.act(&v.inverse().act(t)), *t);
                }
            }
        }
    }
}

#[test]
fn support_of_coxeter_pair_is_everything() {
    let cd = CartanData::sl(4).unwrap();
    let c = WeylWord::coxeter(&cd);
    let e = WeylWord::identity(&cd);
    assert_eq!(weyl_support(&c, &e).dim, 3);
    assert_eq!(weyl_support(&e, &e).dim, 0);
    let s2 = WeylWord::new(&cd, &[1]).unwrap();
    assert_eq!(weyl_support(&s2, &s2).indices, vec![1]);
}

fn a3_word() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..3, 0..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn length_is_subadditive(a in a3_word(), b in a3_word()) {
        let cd = CartanData::sl(4).unwrap();
        let u = WeylWord::new(&cd, &a).unwrap();
        let v = WeylWord::new(&cd, &b).unwrap();
        let uv = u.mul(&v);
        prop_assert!(uv.length <= u.length + v.length);
        prop_assert_eq!((uv.length + u.length + v.length) % 2, 0);
        prop_assert_eq!(uv.length, inversions(&uv.permutation()));
    }

    #[test]
    fn inverse_and_action_compose(a in a3_word(), t in prop::collection::vec(-4i64..5, 3)) {
        let cd = CartanData::sl(4).unwrap();
        let w = WeylWord::new(&cd, &a).unwrap();
        let lambda = Weight::new(t);
        prop_assert_eq!(w.inverse().act(&w.act(&lambda)), lambda.clone());
        prop_assert_eq!(w.inverse().length, w.length);
        prop_assert!(w.mul(&w.inverse()).is_identity());
    }

    #[test]
    fn canonical_word_is_reduced_and_equivalent(a in a3_word()) {
        let cd = CartanData::sl(4).unwrap();
        let w = WeylWord::new(&cd, &a).unwrap();
        let again = WeylWord::new(&cd, &w.letters).unwrap();
        prop_assert_eq!(&again.letters, &w.letters);
        prop_assert_eq!(again.action, w.action.clone());
        prop_assert!(w.letters.len() <= a.len());
    }
}
