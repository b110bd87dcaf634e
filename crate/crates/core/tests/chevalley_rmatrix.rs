use plie_core::chevalley_rmatrix::{
    build_r_matrix, build_sln, costar_bracket, factorization_inverse, factorization_iso, factorization_report,
    symmetric_pairing, verify_cocycle, verify_cybe, DualVector, RTensor,
};
use plie_core::linalg::{self, c, CMat};
use plie_core::sampling::seeded;
use plie_core::Error;
use rand::Rng;

fn random_traceless(n: usize, rng: &mut impl Rng) -> CMat {
    linalg::traceless(&CMat::from_fn(n, n, |_, _| c(rng.random_range(-1.0..=1.0))))
}

/// `½(Σ E_ii⊗E_ii − 1⊗1/n) + Σ_{i<j} E_ij⊗E_ji`, built entry by entry.
fn standard_r_oracle(n: usize) -> CMat {
    let mut m = CMat::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    // (E_ab ⊗ E_cd)[(i,k),(j,l)] = δ_ia δ_jb δ_kc δ_ld
                    let mut v = 0.0;
                    if i == j && k == l {
                        v -= 0.5 / n as f64;
                        if i == k {
                            v += 0.5;
                        }
                    }
                    if i < j && k == j && l == i {
                        v += 1.0;
                    }
                    m[(i * n + k, j * n + l)] = c(v);
                }
            }
        }
    }
    m
}

#[test]
fn r_tensor_matches_closed_form() {
    for n in 2..=5 {
        let r = build_r_matrix(&build_sln(n).unwrap());
        assert!(linalg::max_diff(&r.to_tensor_matrix(), &standard_r_oracle(n)) < 1e-14, "n = {n}");
    }
}

#[test]
fn symmetric_part_is_trace_form() {
    let mut rng = seeded(11);
    for n in 2..=4 {
        let r = build_r_matrix(&build_sln(n).unwrap());
        for _ in 0..20 {
            let y = random_traceless(n, &mut rng);
            let z = random_traceless(n, &mut rng);
            assert!((symmetric_pairing(&r, &y, &z) - (&y * &z).trace()).norm() < 1e-13);
        }
        assert!(r.casimir_condition_number() < 1e3);
    }
}

#[test]
fn bialgebra_axioms_through_sl6() {
    for n in 2..=6 {
        let real = build_sln(n).unwrap();
        let r = build_r_matrix(&real);
        let tol = if n <= 4 { 1e-12 } else { 1e-10 };
        assert!(verify_cybe(&r) < tol, "cybe n = {n}");
        assert!(verify_cocycle(&r, &real) < tol, "cocycle n = {n}");
        assert!(real.serre_residuals().max() < tol, "serre n = {n}");
        let rep = factorization_report(&real, &r);
        assert!(rep.bijective && rep.rank == n * n - 1);
    }
}

#[test]
fn sizes_outside_range_rejected() {
    assert!(matches!(build_sln(1), Err(Error::SizeOutOfRange(1))));
    assert!(matches!(build_sln(7), Err(Error::SizeOutOfRange(7))));
}

#[test]
fn perturbation_breaks_cybe() {
    let real = build_sln(3).unwrap();
    let r = build_r_matrix(&real);
    let broken = r.perturbed(0, 3, 1e-3);
    let res = verify_cybe(&broken);
    assert!(res > 1e-5 && res < 1e-1, "residual {res}");
}

#[test]
fn r_plus_and_r_minus_are_homomorphisms() {
    let mut rng = seeded(12);
    for n in [2, 3, 4] {
        let real = build_sln(n).unwrap();
        let r = build_r_matrix(&real);
        let pairs = if n == 3 { 200 } else { 30 };
        for _ in 0..pairs {
            let l = DualVector::new(random_traceless(n, &mut rng));
            let m = DualVector::new(random_traceless(n, &mut rng));
            let lm = costar_bracket(&real, &r, &l, &m);
            let maps: [fn(&RTensor, &DualVector) -> CMat; 2] = [RTensor::r_plus, RTensor::r_minus];
            for map in maps {
                let lhs = map(&r, &lm);
                let rhs = linalg::commutator(&map(&r, &l), &map(&r, &m));
                assert!(linalg::max_diff(&lhs, &rhs) < 1e-12);
            }
        }
    }
}

#[test]
fn factorization_splits_into_borel_parts() {
    let mut rng = seeded(13);
    let real = build_sln(3).unwrap();
    let r = build_r_matrix(&real);
    for _ in 0..100 {
        let x = random_traceless(3, &mut rng);
        let l = factorization_inverse(&real, &r, &x).unwrap();
        let xp = r.r_plus(&l);
        let xm = r.r_minus(&l);
        assert!(linalg::max_diff(&(&xp - &xm), &x) < 1e-12);
        assert!(linalg::max_abs(&linalg::strict_lower(&xp)) < 1e-13);
        assert!(linalg::max_abs(&linalg::strict_upper(&xm)) < 1e-13);
        assert!(linalg::max_diff(&linalg::diag_part(&xp), &-linalg::diag_part(&xm)) < 1e-13);
        assert!(linalg::max_diff(&factorization_iso(&l, &r), &x) < 1e-12);
    }
}

#[test]
fn sl2_r_plus_of_trace_functional() {
    let real = build_sln(2).unwrap();
    let r = build_r_matrix(&real);
    let f = linalg::unit(2, 1, 0);
    let l = DualVector::new(f.clone());
    assert!(linalg::max_abs(&r.r_plus(&l)) < 1e-15);
    assert!(linalg::max_diff(&r.r_minus(&l), &-f.clone()) < 1e-15);
    assert!(linalg::max_diff(&factorization_iso(&l, &r), &f) < 1e-15);
}
