//! Seeded random points: generic group elements, points of double Bruhat
//! cells, and small dual-group elements.

use crate::cartan_weyl::WeylWord;
use crate::factorization::{gauss_decompose, identify_bruhat_cell, udl_decompose};
use crate::linalg::{self, c, CMat};
use crate::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real matrix with determinant 1 (sign fixed by flipping the first row).
fn project_to_sl(mut m: CMat) -> Option<CMat> {
    let n = m.nrows();
    let d = linalg::det(&m).re;
    if d.abs() < 1e-3 {
        return None;
    }
    if d < 0.0 {
        for j in 0..n {
            m[(0, j)] = -m[(0, j)];
        }
    }
    Some(m * c(d.abs().powf(-1.0 / n as f64)))
}

/// Entries i.i.d. uniform on `[−1, 1]`, projected to det 1; resampled until
/// both Gauss decompositions have pivots above `1e−6`.
pub fn random_sl<R: Rng>(n: usize, rng: &mut R) -> CMat {
    loop {
        let m = CMat::from_fn(n, n, |_, _| c(rng.random_range(-1.0..=1.0)));
        let Some(x) = project_to_sl(m) else { continue };
        let ok_plus = gauss_decompose(&x).map(|t| t.cartan_entries().iter().all(|d| d.norm() > 1e-6));
        let ok_minus = udl_decompose(&x).map(|(_, d, _)| linalg::diagonal_entries(&d).iter().all(|d| d.norm() > 1e-6));
        if matches!(ok_plus, Ok(true)) && matches!(ok_minus, Ok(true)) {
            return x;
        }
    }
}

fn signed_parameter<R: Rng>(rng: &mut R) -> f64 {
    let t = rng.random_range(0.5..1.5);
    if rng.random_bool(0.5) {
        t
    } else {
        -t
    }
}

/// Diagonal element with entries of modulus in `[0.5, 1.5]` and det 1.
pub fn random_torus<R: Rng>(n: usize, rng: &mut R) -> CMat {
    let mut d: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.5..1.5)).collect();
    let p: f64 = d.iter().product();
    d.push(1.0 / p);
    linalg::diag(&d.iter().map(|&x| c(x)).collect::<Vec<_>>())
}

/// Cell chart `∏_{i∈word(u)} y_i(τ_k) · h · ∏_{i∈word(v)} x_i(τ_k)` with
/// `h = diag(e^{s_1}, …, e^{s_{n−1}}, e^{−Σs})`; `params = (τ…, s…)` of length
/// `ℓ(u) + ℓ(v) + n − 1`.
pub fn cell_point(u: &WeylWord, v: &WeylWord, params: &[f64]) -> CMat {
    let n = u.rank() + 1;
    let (lu, lv) = (u.letters.len(), v.letters.len());
    assert_eq!(params.len(), lu + lv + n - 1, "chart parameter count");
    let mut x = linalg::eye(n);
    for (k, &i) in u.letters.iter().enumerate() {
        let mut y = linalg::eye(n);
        y[(i + 1, i)] = c(params[k]);
        x *= y;
    }
    let logs = &params[lu + lv..];
    let mut h: Vec<f64> = logs.iter().map(|s| s.exp()).collect();
    h.push((-logs.iter().sum::<f64>()).exp());
    x *= linalg::diag(&h.iter().map(|&z| c(z)).collect::<Vec<_>>());
    for (k, &i) in v.letters.iter().enumerate() {
        let mut e = linalg::eye(n);
        e[(i, i + 1)] = c(params[lu + k]);
        x *= e;
    }
    x
}

/// Random chart parameters: `|τ| ∈ [0.5, 1.5]` with random sign, torus
/// logarithms in `[ln 0.5, ln 1.5]`.
pub fn random_cell_params<R: Rng>(u: &WeylWord, v: &WeylWord, rng: &mut R) -> Vec<f64> {
    let n = u.rank() + 1;
    let mut p: Vec<f64> = (0..u.letters.len() + v.letters.len()).map(|_| signed_parameter(rng)).collect();
    p.extend((0..n - 1).map(|_| rng.random_range(0.5f64..1.5).ln()));
    p
}

/// A point of `B⁺uB⁺ ∩ B⁻vB⁻` from the cell chart; membership is confirmed
/// and the draw repeated up to 100 times.
pub fn sample_cell<R: Rng>(u: &WeylWord, v: &WeylWord, rng: &mut R) -> Result<CMat> {
    sample_cell_with_params(u, v, rng).map(|(x, _)| x)
}

pub fn sample_cell_with_params<R: Rng>(u: &WeylWord, v: &WeylWord, rng: &mut R) -> Result<(CMat, Vec<f64>)> {
    for _ in 0..100 {
        let p = random_cell_params(u, v, rng);
        let x = cell_point(u, v, &p);
        if let Ok((cu, cv)) = identify_bruhat_cell(&x) {
            if &cu == u && &cv == v {
                return Ok((x, p));
            }
        }
    }
    Err(Error::SamplingFailed(format!("no point of G^{{{u},{v}}} after 100 draws")))
}

/// Pair `(ξ₊, ξ₋)` near the identity with `[ξ₊]₀ = [ξ₋]₀⁻¹`:
/// `ξ₊ = exp(r₊A)`, `ξ₋ = exp(r₋A)` for a random traceless `A` of size `eps`.
pub fn random_dual_element<R: Rng>(n: usize, eps: f64, rng: &mut R) -> (CMat, CMat) {
    let a = linalg::traceless(&CMat::from_fn(n, n, |_, _| c(rng.random_range(-1.0..=1.0) * eps)));
    let half_diag = linalg::diag_part(&a) * c(0.5);
    let plus = linalg::expm(&(linalg::strict_upper(&a) + &half_diag));
    let minus = linalg::expm(&(-(linalg::strict_lower(&a) + &half_diag)));
    (plus, minus)
}

/// Random element of `B⁺` (upper) or `B⁻` (lower) with det 1.
pub fn random_borel<R: Rng>(n: usize, upper: bool, rng: &mut R) -> CMat {
    let mut m = random_torus(n, rng);
    for i in 0..n {
        for j in 0..n {
            if (upper && j > i) || (!upper && j < i) {
                m[(i, j)] = c(rng.random_range(-1.0..=1.0));
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan_weyl::{enumerate_weyl_group, CartanData};

    #[test]
    fn random_sl_has_unit_determinant() {
        let mut rng = seeded(1);
        for n in 2..=5 {
            let x = random_sl(n, &mut rng);
            assert!((linalg::det(&x) - c(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn cell_sampler_hits_every_sl3_cell() {
        let cd = CartanData::sl(3).unwrap();
        let w = enumerate_weyl_group(&cd);
        let mut rng = seeded(2);
        for u in &w {
            for v in &w {
                let x = sample_cell(u, v, &mut rng).unwrap();
                assert!((linalg::det(&x) - c(1.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dual_element_matches_cartan_parts() {
        let mut rng = seeded(3);
        let (p, m) = random_dual_element(3, 0.1, &mut rng);
        let prod = linalg::diag_part(&p) * linalg::diag_part(&m);
        assert!(linalg::max_diff(&prod, &linalg::eye(3)) < 1e-14);
    }
}
