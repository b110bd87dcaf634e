//! Group-level factorizations in SL_n: Gauss decomposition, Weyl
//! representatives, generalized minors, Bruhat cells, the dual-group
//! factorization `g = g₊ g₋⁻¹` and the two-sided semisimple form.

use crate::cartan_weyl::{CartanData, WeylWord};
use crate::linalg::{self, c, CMat, C};
use crate::{Error, Result};
use serde::Serialize;

/// Relative pivot cutoff.
pub const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub matrix: CMat,
    pub realization: String,
}

impl GroupElement {
    pub fn new(matrix: CMat) -> Result<GroupElement> {
        let d = linalg::det(&matrix);
        if (d - c(1.0)).norm() >= 1e-10 {
            return Err(Error::NotUnimodular((d - c(1.0)).norm()));
        }
        let n = matrix.nrows();
        Ok(GroupElement { matrix, realization: format!("SL{n}") })
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }
}

/// `x = [x]₋ [x]₀ [x]₊`.
#[derive(Debug, Clone)]
pub struct GaussTriple {
    pub lower: CMat,
    pub cartan: CMat,
    pub upper: CMat,
}

impl GaussTriple {
    pub fn reconstruct(&self) -> CMat {
        &self.lower * &self.cartan * &self.upper
    }

    pub fn cartan_entries(&self) -> Vec<C> {
        linalg::diagonal_entries(&self.cartan)
    }
}

pub fn gauss_decompose(x: &CMat) -> Result<GaussTriple> {
    let n = x.nrows();
    let scale = linalg::max_abs(x).max(f64::MIN_POSITIVE);
    let mut a = x.clone();
    let mut lower = linalg::eye(n);
    let mut d = vec![c(0.0); n];
    let mut upper = linalg::eye(n);
    for k in 0..n {
        let p = a[(k, k)];
        if p.norm() <= PIVOT_TOL * scale {
            return Err(Error::NotInBigCell { index: k + 1, value: p.norm() });
        }
        d[k] = p;
        for i in (k + 1)..n {
            lower[(i, k)] = a[(i, k)] / p;
        }
        for j in (k + 1)..n {
            upper[(k, j)] = a[(k, j)] / p;
        }
        for i in (k + 1)..n {
            let l = lower[(i, k)];
            for j in (k + 1)..n {
                let v = a[(k, j)];
                a[(i, j)] -= l * v;
            }
        }
    }
    Ok(GaussTriple { lower, cartan: linalg::diag(&d), upper })
}

fn reversal(n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| if i + j + 1 == n { c(1.0) } else { c(0.0) })
}

/// Opposite decomposition `x = U D L` with `U` upper and `L` lower unipotent.
pub fn udl_decompose(x: &CMat) -> Result<(CMat, CMat, CMat)> {
    let j = reversal(x.nrows());
    let t = gauss_decompose(&(&j * x * &j))?;
    Ok((&j * &t.lower * &j, &j * &t.cartan * &j, &j * &t.upper * &j))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Flavor {
    Bar,
    DoubleBar,
}

/// `s̄_i = exp(−e_i) exp(f_i) exp(−e_i)`; `s̄̄_i = s̄_i⁻¹`; extended multiplicatively.
pub fn weyl_representative(w: &WeylWord, flavor: Flavor) -> CMat {
    let n = w.rank() + 1;
    let sign = match flavor {
        Flavor::Bar => 1.0,
        Flavor::DoubleBar => -1.0,
    };
    w.letters.iter().fold(linalg::eye(n), |acc, &i| {
        let mut s = linalg::eye(n);
        s[(i, i)] = c(0.0);
        s[(i + 1, i + 1)] = c(0.0);
        s[(i, i + 1)] = c(-sign);
        s[(i + 1, i)] = c(sign);
        acc * s
    })
}

/// Row and column sets of `Δ_{uω_i, vω_i}` (zero-based `i`).
pub fn minor_indices(u: &WeylWord, v: &WeylWord, i: usize) -> (Vec<usize>, Vec<usize>) {
    let pu = u.permutation();
    let pv = v.permutation();
    let mut rows: Vec<usize> = (0..=i).map(|k| pu[k]).collect();
    let mut cols: Vec<usize> = (0..=i).map(|k| pv[k]).collect();
    rows.sort_unstable();
    cols.sort_unstable();
    (rows, cols)
}

/// `Δ_{uω_i, vω_i}(x)` through the submatrix-minor formula.
pub fn generalized_minor(x: &CMat, u: &WeylWord, v: &WeylWord, i: usize) -> C {
    let (rows, cols) = minor_indices(u, v, i);
    linalg::minor(x, &rows, &cols)
}

/// Trace gradient `T` of `Δ_{uω_i, vω_i}`: `dΔ[ξ] = tr(T ξ)`.
pub fn generalized_minor_gradient(x: &CMat, u: &WeylWord, v: &WeylWord, i: usize) -> CMat {
    let (rows, cols) = minor_indices(u, v, i);
    linalg::minor_gradient(x, &rows, &cols)
}

/// Permutation `p` with `x ∈ B⁺ p B⁺`, read off by column-wise elimination.
fn plus_cell_permutation(x: &CMat, tol: f64) -> Vec<usize> {
    let n = x.nrows();
    let scale = linalg::max_abs(x).max(f64::MIN_POSITIVE);
    let mut a = x.clone();
    let mut used = vec![false; n];
    let mut perm = vec![usize::MAX; n];
    for j in 0..n {
        let pivot = (0..n).rev().find(|&r| !used[r] && a[(r, j)].norm() > tol * scale);
        let Some(p) = pivot else {
            // Rank-deficient within threshold: take the lowest unused row.
            let p = (0..n).rev().find(|&r| !used[r]).expect("unused row");
            used[p] = true;
            perm[j] = p;
            continue;
        };
        used[p] = true;
        perm[j] = p;
        let pv = a[(p, j)];
        for r in 0..p {
            let f = a[(r, j)] / pv;
            if f.norm() > 0.0 {
                for k in 0..n {
                    let v = a[(p, k)];
                    a[(r, k)] -= f * v;
                }
            }
        }
        for k in (j + 1)..n {
            let f = a[(p, k)] / pv;
            if f.norm() > 0.0 {
                for r in 0..n {
                    let v = a[(r, j)];
                    a[(r, k)] -= f * v;
                }
            }
        }
    }
    perm
}

fn invert_perm(p: &[usize]) -> Vec<usize> {
    let mut q = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        q[v] = i;
    }
    q
}

/// `(u, v)` with `x ∈ B⁺uB⁺ ∩ B⁻vB⁻`.
pub fn identify_bruhat_cell(x: &CMat) -> Result<(WeylWord, WeylWord)> {
    let n = x.nrows();
    let cd = CartanData::sl(n)?;
    let xt = x.transpose();
    let u_strict = plus_cell_permutation(x, PIVOT_TOL);
    let u_loose = plus_cell_permutation(x, 1e-8);
    let v_strict = invert_perm(&plus_cell_permutation(&xt, PIVOT_TOL));
    let v_loose = invert_perm(&plus_cell_permutation(&xt, 1e-8));
    if u_strict != u_loose {
        return Err(Error::AmbiguousCell { first: u_strict, second: u_loose });
    }
    if v_strict != v_loose {
        return Err(Error::AmbiguousCell { first: v_strict, second: v_loose });
    }
    Ok((WeylWord::from_permutation(&cd, &u_strict)?, WeylWord::from_permutation(&cd, &v_strict)?))
}

/// `g = g₊ g₋⁻¹` with `g₊ ∈ B⁺`, `g₋ ∈ B⁻`, `[g₊]₀[g₋]₀ = 1`.
#[derive(Debug, Clone)]
pub struct DualPair {
    pub plus: CMat,
    pub minus: CMat,
}

impl DualPair {
    pub fn reconstruct(&self) -> CMat {
        &self.plus * linalg::inverse(&self.minus).expect("triangular with nonzero diagonal")
    }

    pub fn matching_residual(&self) -> f64 {
        let p = linalg::diag_part(&self.plus) * linalg::diag_part(&self.minus);
        linalg::max_diff(&p, &linalg::eye(self.plus.nrows()))
    }
}

/// Principal-root split of the opposite Gauss decomposition `g = U D L`.
pub fn factorize_dual(g: &CMat) -> Result<DualPair> {
    let (u, d, l) = udl_decompose(g)?;
    let n = g.nrows();
    let mut roots: Vec<C> = linalg::diagonal_entries(&d).iter().map(|z| z.sqrt()).collect();
    let prod: C = roots.iter().product();
    if (prod + c(1.0)).norm() < 1e-6 {
        roots[n - 1] = -roots[n - 1];
    }
    let half = linalg::diag(&roots);
    let inv_half = linalg::diag(&roots.iter().map(|z| c(1.0) / z).collect::<Vec<_>>());
    let plus = &u * &half;
    let l_inv = linalg::inverse(&l).expect("unipotent");
    let minus = l_inv * inv_half;
    Ok(DualPair { plus, minus })
}

/// Sign patterns `ε ∈ H` with `ε² = 1`.
pub fn deck_group(n: usize) -> Vec<Vec<f64>> {
    (0..(1usize << (n - 1)))
        .map(|mask| {
            let mut e: Vec<f64> = (0..n - 1).map(|k| if mask >> k & 1 == 1 { -1.0 } else { 1.0 }).collect();
            let p: f64 = e.iter().product();
            e.push(p);
            e
        })
        .collect()
}

/// All `2^{n−1}` solutions of the dual factorization.
pub fn dual_pair_branches(g: &CMat) -> Result<Vec<DualPair>> {
    let base = factorize_dual(g)?;
    Ok(deck_group(g.nrows())
        .into_iter()
        .map(|eps| {
            let e = linalg::diag(&eps.iter().map(|&s| c(s)).collect::<Vec<_>>());
            DualPair { plus: &base.plus * &e, minus: &base.minus * &e }
        })
        .collect())
}

/// `g = n₊ b₋ n₊⁻¹ = n₋ b₊ n₋⁻¹`.
#[derive(Debug, Clone)]
pub struct DoubleForm {
    pub n_plus: CMat,
    pub b_minus: CMat,
    pub n_minus: CMat,
    pub b_plus: CMat,
}

impl DoubleForm {
    pub fn residuals(&self, g: &CMat) -> (f64, f64) {
        let inv = |m: &CMat| linalg::inverse(m).expect("unipotent");
        (
            linalg::max_diff(&(&self.n_plus * &self.b_minus * inv(&self.n_plus)), g),
            linalg::max_diff(&(&self.n_minus * &self.b_plus * inv(&self.n_minus)), g),
        )
    }
}

/// Eigenvalues and unit eigenvectors, ordered by `(Re, Im)`; fails on
/// near-repeated or defective spectra.
pub fn eigen_system(g: &CMat, gap_tol: f64) -> Result<(Vec<C>, CMat)> {
    let n = g.nrows();
    let mut ev = linalg::eigenvalues(g);
    ev.sort_by(linalg::lex_cmp);
    let scale = linalg::max_abs(g).max(1.0);
    let mut gap = f64::INFINITY;
    for a in 0..n {
        for b in (a + 1)..n {
            gap = gap.min((ev[a] - ev[b]).norm());
        }
    }
    if gap <= gap_tol * scale {
        return Err(Error::NotSemisimple(format!("eigenvalue gap {gap:e}")));
    }
    let mut v = linalg::zeros(n);
    for (k, &lam) in ev.iter().enumerate() {
        let shifted = g - linalg::eye(n) * lam;
        let ns = linalg::null_space(&shifted, 1e-9);
        if ns.ncols() != 1 {
            return Err(Error::NotSemisimple(format!("eigenspace of dimension {}", ns.ncols())));
        }
        v.set_column(k, &ns.column(0));
    }
    Ok((ev, v))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor");
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    out
}

/// Two-sided form from an eigenvector matrix `V`: the first eigenvalue
/// ordering for which `V = n₊ b₋′` (resp. `V = n₋ b₊′`) exists.
pub fn semisimple_double_form(g: &CMat) -> Result<DoubleForm> {
    let n = g.nrows();
    let (ev, v) = eigen_system(g, 1e-8)?;
    let mut plus_side = None;
    let mut minus_side = None;
    for p in permutations(n) {
        let vp = CMat::from_fn(n, n, |i, j| v[(i, p[j])]);
        let lam = linalg::diag(&p.iter().map(|&k| ev[k]).collect::<Vec<_>>());
        if plus_side.is_none() {
            if let Ok((u, d, l)) = udl_decompose(&vp) {
                let b = &d * &l;
                let b_inv = linalg::inverse(&b).expect("invertible");
                plus_side = Some((u, &b * &lam * b_inv));
            }
        }
        if minus_side.is_none() {
            if let Ok(t) = gauss_decompose(&vp) {
                let b = &t.cartan * &t.upper;
                let b_inv = linalg::inverse(&b).expect("invertible");
                minus_side = Some((t.lower, &b * &lam * b_inv));
            }
        }
        if plus_side.is_some() && minus_side.is_some() {
            break;
        }
    }
    match (plus_side, minus_side) {
        (Some((n_plus, b_minus)), Some((n_minus, b_plus))) => {
            // Drop round-off in the triangle that vanishes exactly.
            let b_minus = linalg::diag_part(&b_minus) + linalg::strict_lower(&b_minus);
            let b_plus = linalg::diag_part(&b_plus) + linalg::strict_upper(&b_plus);
            Ok(DoubleForm { n_plus, b_minus, n_minus, b_plus })
        }
        _ => Err(Error::NotSemisimple("no admissible eigenvector ordering".into())),
    }
}
