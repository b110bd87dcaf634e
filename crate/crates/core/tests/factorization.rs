use plie_core::cartan_weyl::{enumerate_weyl_group, CartanData, WeylWord};
use plie_core::factorization::{
    deck_group, dual_pair_branches, factorize_dual, gauss_decompose, generalized_minor, identify_bruhat_cell,
    minor_indices, semisimple_double_form, udl_decompose, weyl_representative, Flavor,
};
use plie_core::linalg::{self, c, CMat};
use plie_core::sampling::{random_sl, random_torus, sample_cell, seeded};
use plie_core::Error;
use proptest::prelude::*;

fn s_bar(n: usize, i: usize) -> CMat {
    let mut s = linalg::eye(n);
    s[(i, i)] = c(0.0);
    s[(i + 1, i + 1)] = c(0.0);
    s[(i, i + 1)] = c(-1.0);
    s[(i + 1, i)] = c(1.0);
    s
}

fn word_product(n: usize, word: &[usize]) -> CMat {
    word.iter().fold(linalg::eye(n), |acc, &i| acc * s_bar(n, i))
}

fn rank_of(m: &CMat, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> usize {
    if rows.is_empty() || cols.is_empty() {
        return 0;
    }
    let r: Vec<usize> = rows.collect();
    let k: Vec<usize> = cols.collect();
    linalg::numerical_rank(&linalg::submatrix(m, &r, &k), 1e-9)
}

/// Lower-left ranks are `B⁺ × B⁺` invariants; upper-right ranks are `B⁻ × B⁻` invariants.
fn rank_profile(m: &CMat, plus: bool) -> Vec<usize> {
    let n = m.nrows();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            out.push(if plus { rank_of(m, i..n, 0..j + 1) } else { rank_of(m, 0..i + 1, j..n) });
        }
    }
    out
}

#[test]
fn gauss_round_trip() {
    let mut rng = seeded(21);
    for k in 0..500 {
        let n = 2 + k % 4;
        let x = random_sl(n, &mut rng);
        let t = gauss_decompose(&x).unwrap();
        assert!(linalg::max_diff(&t.reconstruct(), &x) < 1e-11);
        assert!(linalg::max_abs(&linalg::strict_upper(&t.lower)) == 0.0);
        assert!(linalg::max_abs(&linalg::strict_lower(&t.upper)) == 0.0);
        for i in 0..n {
            assert_eq!(t.lower[(i, i)], c(1.0));
            assert_eq!(t.upper[(i, i)], c(1.0));
        }
        let (u, d, l) = udl_decompose(&x).unwrap();
        assert!(linalg::max_diff(&(&u * &d * &l), &x) < 1e-11);
        // Leading principal minors are the pivot products.
        let mut prod = c(1.0);
        for (i, p) in t.cartan_entries().iter().enumerate() {
            prod *= p;
            let idx: Vec<usize> = (0..=i).collect();
            assert!((linalg::minor(&x, &idx, &idx) - prod).norm() < 1e-10);
        }
    }
}

#[test]
fn gauss_fails_off_big_cell() {
    let x = linalg::from_real(2, &[0.0, 1.0, -1.0, 0.0]);
    assert!(matches!(gauss_decompose(&x), Err(Error::NotInBigCell { index: 1, .. })));
}

#[test]
fn generalized_minor_equals_representative_formula() {
    let cd = CartanData::sl(3).unwrap();
    let all = enumerate_weyl_group(&cd);
    let mut rng = seeded(22);
    for _ in 0..5 {
        let x = random_sl(3, &mut rng);
        for u in &all {
            for v in &all {
                let moved = linalg::inverse(&word_product(3, &u.letters)).unwrap() * &x * word_product(3, &v.letters);
                for i in 0..2 {
                    let lead: Vec<usize> = (0..=i).collect();
                    let want = linalg::minor(&moved, &lead, &lead);
                    assert!((generalized_minor(&x, u, v, i) - want).norm() < 1e-12, "{u} {v} {i}");
                }
            }
        }
    }
}

#[test]
fn longest_representative_is_word_independent() {
    for n in [3, 4] {
        let cd = CartanData::sl(n).unwrap();
        let w0 = WeylWord::longest(&cd);
        let want = weyl_representative(&w0, Flavor::Bar);
        for word in w0.all_reduced_words() {
            assert!(linalg::max_diff(&word_product(n, &word), &want) < 1e-15);
        }
        let dbar = weyl_representative(&w0, Flavor::DoubleBar);
        let dbar_word = w0.letters.iter().fold(linalg::eye(n), |acc, &i| acc * linalg::inverse(&s_bar(n, i)).unwrap());
        assert!(linalg::max_diff(&dbar, &dbar_word) < 1e-15);
        let s1 = WeylWord::new(&cd, &[0]).unwrap();
        let prod = weyl_representative(&s1, Flavor::Bar) * weyl_representative(&s1, Flavor::DoubleBar);
        assert!(linalg::max_diff(&prod, &linalg::eye(n)) < 1e-15);
    }
}

#[test]
fn cells_match_rank_profiles() {
    let cd = CartanData::sl(3).unwrap();
    let all = enumerate_weyl_group(&cd);
    let mut rng = seeded(23);
    for u in &all {
        for v in &all {
            for _ in 0..3 {
                let x = sample_cell(u, v, &mut rng).unwrap();
                let (cu, cv) = identify_bruhat_cell(&x).unwrap();
                assert_eq!((&cu, &cv), (u, v));
                assert_eq!(rank_profile(&x, true), rank_profile(&word_product(3, &u.letters), true), "{u} {v}");
                assert_eq!(rank_profile(&x, false), rank_profile(&word_product(3, &v.letters), false), "{u} {v}");
                for i in 0..2 {
                    let e = WeylWord::identity(&cd);
                    let (r1, c1) = minor_indices(u, &e, i);
                    let (r2, c2) = minor_indices(&e, &v.inverse(), i);
                    assert!(linalg::minor(&x, &r1, &c1).norm() > 1e-10);
                    assert!(linalg::minor(&x, &r2, &c2).norm() > 1e-10);
                }
                let h = random_torus(3, &mut rng);
                let conj = &h * &x * linalg::inverse(&h).unwrap();
                assert_eq!(identify_bruhat_cell(&conj).unwrap(), (cu.clone(), cv.clone()));
            }
        }
    }
}

#[test]
fn generic_points_lie_in_the_big_cell() {
    let cd = CartanData::sl(3).unwrap();
    let w0 = WeylWord::longest(&cd);
    let mut rng = seeded(24);
    for _ in 0..100 {
        let x = random_sl(3, &mut rng);
        assert_eq!(identify_bruhat_cell(&x).unwrap(), (w0.clone(), w0.clone()));
    }
}

#[test]
fn dual_factorization_and_branches() {
    let mut rng = seeded(25);
    for k in 0..100 {
        let n = 2 + k % 3;
        let g = random_sl(n, &mut rng);
        let p = factorize_dual(&g).unwrap();
        assert!(linalg::max_diff(&p.reconstruct(), &g) < 1e-11);
        assert!(p.matching_residual() < 1e-12);
        assert!(linalg::max_abs(&linalg::strict_lower(&p.plus)) == 0.0);
        assert!(linalg::max_abs(&linalg::strict_upper(&p.minus)) < 1e-15);
        assert!((linalg::det(&p.plus) - c(1.0)).norm() < 1e-11);
        let branches = dual_pair_branches(&g).unwrap();
        assert_eq!(branches.len(), 1 << (n - 1));
        for b in &branches {
            assert!(linalg::max_diff(&b.reconstruct(), &g) < 1e-11);
            assert!(b.matching_residual() < 1e-12);
        }
    }
    assert!(deck_group(3).iter().all(|e| e.iter().product::<f64>() == 1.0));
}

#[test]
fn double_form_of_semisimple_elements() {
    let mut rng = seeded(26);
    for k in 0..60 {
        let n = 2 + k % 3;
        let g = random_sl(n, &mut rng);
        let form = semisimple_double_form(&g).unwrap();
        let (a, b) = form.residuals(&g);
        assert!(a < 1e-9 && b < 1e-9, "{a} {b}");
        assert!(linalg::max_abs(&linalg::strict_lower(&form.n_plus)) < 1e-14);
        assert!(linalg::max_abs(&linalg::strict_upper(&form.b_minus)) < 1e-9);
        assert!(linalg::max_abs(&linalg::strict_upper(&form.n_minus)) < 1e-14);
        assert!(linalg::max_abs(&linalg::strict_lower(&form.b_plus)) < 1e-9);
    }
    let j = linalg::from_real(2, &[1.0, 1.0, 0.0, 1.0]);
    assert!(matches!(semisimple_double_form(&j), Err(Error::NotSemisimple(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn torus_scaling_of_pivots(seed in any::<u64>(), n in 2usize..5) {
        let mut rng = seeded(seed);
        let x = random_sl(n, &mut rng);
        let h = random_torus(n, &mut rng);
        let t = gauss_decompose(&x).unwrap();
        let th = gauss_decompose(&(&x * &h)).unwrap();
        for (i, (a, b)) in t.cartan_entries().iter().zip(th.cartan_entries()).enumerate() {
            prop_assert!((a * h[(i, i)] - b).norm() < 1e-10 * b.norm().max(1.0));
        }
    }
}
