//! Sklyanin bracket, Poisson tensors and leaf dimensions, Casimir families,
//! dressing transformations and the invariant-bracket identities.
//!
//! An observable is described by its value and its trace gradient `T`,
//! `df[ξ] = tr(T ξ)`. The left and right differentials are `xT` and `Tx`
//! under the trace identification.

pub mod appendix;
pub mod casimir;
pub mod dressing;

use crate::cartan_weyl::{fixed_lattice_basis, WeylWord};
use crate::chevalley_rmatrix::RTensor;
use crate::linalg::{self, c, CMat, C};
use crate::{Error, Result};
use std::fmt;
use std::sync::Arc;

pub type ScalarFn = Arc<dyn Fn(&CMat) -> C + Send + Sync>;

#[derive(Clone)]
pub enum Observable {
    Entry(usize, usize),
    Minor { rows: Vec<usize>, cols: Vec<usize> },
    /// `tr ∧^k x`.
    Character(usize),
    /// `tr x^k`.
    PowerTrace(usize),
    /// `∏ Δ_{rows,cols}^{e}`.
    Monomial(Vec<(Vec<usize>, Vec<usize>, i64)>),
    Product(Vec<Observable>),
    Sum(Vec<Observable>),
    /// Gradient by central differences with step `h`.
    FiniteDifference { label: String, f: ScalarFn, h: f64 },
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Gradient of `tr ∧^k x`: `Σ_{j<k} (−1)^j e_{k−1−j}(x) x^j`.
pub fn character_gradient(x: &CMat, k: usize) -> CMat {
    let n = x.nrows();
    let e = linalg::elementary_symmetric(x);
    let mut t = linalg::zeros(n);
    let mut p = linalg::eye(n);
    for j in 0..k {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        t += &p * (e[k - 1 - j] * c(sign));
        p = &p * x;
    }
    t
}

impl Observable {
    pub fn entry(i: usize, j: usize) -> Self {
        Observable::Entry(i, j)
    }

    /// Laurent monomial in matrix entries.
    pub fn entry_monomial(factors: &[((usize, usize), i64)]) -> Self {
        Observable::Monomial(factors.iter().map(|&((a, b), e)| (vec![a], vec![b], e)).collect())
    }

    pub fn finite_difference(label: &str, f: ScalarFn) -> Self {
        Observable::FiniteDifference { label: label.to_string(), f, h: 1e-6 }
    }

    pub fn is_closed_form(&self) -> bool {
        match self {
            Observable::FiniteDifference { .. } => false,
            Observable::Product(v) | Observable::Sum(v) => v.iter().all(|o| o.is_closed_form()),
            _ => true,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Observable::Entry(i, j) => format!("x{}{}", i + 1, j + 1),
            Observable::Minor { rows, cols } => format!("det[{rows:?},{cols:?}]"),
            Observable::Character(k) => format!("tr∧{k}"),
            Observable::PowerTrace(k) => format!("tr x^{k}"),
            Observable::Monomial(f) => f
                .iter()
                .map(|(r, cl, e)| format!("det[{r:?},{cl:?}]^{e}"))
                .collect::<Vec<_>>()
                .join("·"),
            Observable::Product(v) => v.iter().map(|o| o.label()).collect::<Vec<_>>().join("*"),
            Observable::Sum(v) => v.iter().map(|o| o.label()).collect::<Vec<_>>().join("+"),
            Observable::FiniteDifference { label, .. } => label.clone(),
        }
    }

    pub fn value(&self, x: &CMat) -> C {
        match self {
            Observable::Entry(i, j) => x[(*i, *j)],
            Observable::Minor { rows, cols } => linalg::minor(x, rows, cols),
            Observable::Character(k) => linalg::elementary_symmetric(x)[*k],
            Observable::PowerTrace(k) => {
                let mut p = linalg::eye(x.nrows());
                for _ in 0..*k {
                    p = &p * x;
                }
                p.trace()
            }
            Observable::Monomial(f) => f.iter().map(|(r, cl, e)| linalg::minor(x, r, cl).powi(*e as i32)).product(),
            Observable::Product(v) => v.iter().map(|o| o.value(x)).product(),
            Observable::Sum(v) => v.iter().map(|o| o.value(x)).sum(),
            Observable::FiniteDifference { f, .. } => f(x),
        }
    }

    /// Trace gradient `T` with `df[ξ] = tr(Tξ)` (ambient derivative).
    pub fn gradient(&self, x: &CMat) -> CMat {
        let n = x.nrows();
        match self {
            Observable::Entry(i, j) => linalg::unit(n, *j, *i),
            Observable::Minor { rows, cols } => linalg::minor_gradient(x, rows, cols),
            Observable::Character(k) => character_gradient(x, *k),
            Observable::PowerTrace(k) => {
                let mut p = linalg::eye(n);
                for _ in 1..*k {
                    p = &p * x;
                }
                p * c(*k as f64)
            }
            Observable::Monomial(f) => {
                let val = self.value(x);
                f.iter().fold(linalg::zeros(n), |acc, (r, cl, e)| {
                    acc + linalg::minor_gradient(x, r, cl) * (val * c(*e as f64) / linalg::minor(x, r, cl))
                })
            }
            Observable::Product(v) => {
                let vals: Vec<C> = v.iter().map(|o| o.value(x)).collect();
                v.iter().enumerate().fold(linalg::zeros(n), |acc, (k, o)| {
                    let others: C = vals.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, z)| *z).product();
                    acc + o.gradient(x) * others
                })
            }
            Observable::Sum(v) => v.iter().fold(linalg::zeros(n), |acc, o| acc + o.gradient(x)),
            Observable::FiniteDifference { f, h, .. } => fd_gradient(|m| f(m), x, *h),
        }
    }

    pub fn left_diff(&self, x: &CMat) -> CMat {
        x * self.gradient(x)
    }

    pub fn right_diff(&self, x: &CMat) -> CMat {
        self.gradient(x) * x
    }
}

/// Central-difference trace gradient of `f` at `x`.
pub fn fd_gradient(f: impl Fn(&CMat) -> C, x: &CMat, h: f64) -> CMat {
    let n = x.nrows();
    let mut t = linalg::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[(i, j)] += c(h);
            xm[(i, j)] -= c(h);
            t[(j, i)] = (f(&xp) - f(&xm)) / c(2.0 * h);
        }
    }
    t
}

/// `{f, g}(x) = ⟨r, d_l f ∧ d_l g⟩ − ⟨r, d_r f ∧ d_r g⟩` from trace gradients.
pub fn bracket_from_gradients(r: &RTensor, x: &CMat, tf: &CMat, tg: &CMat) -> C {
    r.wedge_pair(&(x * tf), &(x * tg)) - r.wedge_pair(&(tf * x), &(tg * x))
}

pub fn sklyanin_bracket(r: &RTensor, f: &Observable, g: &Observable, x: &CMat) -> C {
    bracket_from_gradients(r, x, &f.gradient(x), &g.gradient(x))
}

/// Trace gradient of `x ↦ {f, g}(x)` for `f`, `g` with constant trace
/// gradients `tf`, `tg` (linear functions such as matrix entries).
pub fn linear_bracket_gradient(r: &RTensor, x: &CMat, tf: &CMat, tg: &CMat) -> CMat {
    let n = x.nrows();
    let mut t = linalg::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let xi = linalg::unit(n, i, j);
            let d = r.wedge_pair(&(&xi * tf), &(x * tg)) + r.wedge_pair(&(x * tf), &(&xi * tg))
                - r.wedge_pair(&(tf * &xi), &(tg * x))
                - r.wedge_pair(&(tf * x), &(tg * &xi));
            t[(j, i)] = d;
        }
    }
    t
}

/// `|{x_a, {x_b, x_c}} + {x_b, {x_c, x_a}} + {x_c, {x_a, x_b}}|` for matrix
/// entries `a`, `b`, `c`.
pub fn jacobi_residual(r: &RTensor, x: &CMat, a: (usize, usize), b: (usize, usize), c: (usize, usize)) -> f64 {
    let n = x.nrows();
    let t = |(i, j): (usize, usize)| linalg::unit(n, j, i);
    let term = |p, q, s| bracket_from_gradients(r, x, &t(p), &linear_bracket_gradient(r, x, &t(q), &t(s)));
    (term(a, b, c) + term(b, c, a) + term(c, a, b)).norm()
}

/// Hamiltonian vector field `ẋ_ij = {H, x_ij}` of a function with trace
/// gradient `t_h`, contracted from the skew part of the r-tensor:
/// `ẋ = P_l x − x P_r` with `P = Σ_k (Sᵀa)_k b_k`, `a_k = ⟨d H, b_k⟩`.
pub fn hamiltonian_field(r: &RTensor, x: &CMat, t_h: &CMat) -> CMat {
    let d = r.dim();
    let skew = (&r.coefficients - r.coefficients.transpose()) * c(0.5);
    let contract = |a: &CMat| {
        let coords: Vec<C> = (0..d).map(|k| (a * r.basis_matrix(k)).trace()).collect();
        (0..d).fold(linalg::zeros(x.nrows()), |acc, b| {
            let w: C = (0..d).map(|a| skew[(a, b)] * coords[a]).sum();
            if w.norm() == 0.0 {
                acc
            } else {
                acc + r.basis_matrix(b) * w
            }
        })
    };
    let p_l = contract(&(x * t_h));
    let p_r = contract(&(t_h * x));
    &p_l * x - x * &p_r
}

/// `{x_ij, x_kl}` for all index pairs, as an `n² × n²` matrix in row-major
/// flattening `(i, j) ↦ i·n + j`.
pub fn entry_bracket_matrix(r: &RTensor, x: &CMat) -> CMat {
    let n = x.nrows();
    let grads: Vec<CMat> = (0..n * n).map(|k| linalg::unit(n, k % n, k / n)).collect();
    let lefts: Vec<CMat> = grads.iter().map(|t| x * t).collect();
    let rights: Vec<CMat> = grads.iter().map(|t| t * x).collect();
    let mut m = CMat::zeros(n * n, n * n);
    for a in 0..n * n {
        for b in (a + 1)..n * n {
            let v = r.wedge_pair(&lefts[a], &lefts[b]) - r.wedge_pair(&rights[a], &rights[b]);
            m[(a, b)] = v;
            m[(b, a)] = -v;
        }
    }
    m
}

/// `max |{x_ij, x_kl} − [r, x ⊗ x]_{(ik),(jl)}|`.
pub fn tensor_form_residual(r: &RTensor, x: &CMat) -> f64 {
    let n = x.nrows();
    let b = entry_bracket_matrix(r, x);
    let rm = r.to_tensor_matrix();
    let xx = linalg::kron(x, x);
    let comm = &rm * &xx - &xx * &rm;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let lhs = b[(i * n + j, k * n + l)];
                    let rhs = comm[(i * n + k, j * n + l)];
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
    }
    worst
}

/// Poisson–Lie property: brackets of entries of `xy` computed on `G × G`
/// against the bracket evaluated directly at the product point.
pub fn multiplicativity_residual(r: &RTensor, x: &CMat, y: &CMat) -> f64 {
    let n = x.nrows();
    let bx = entry_bracket_matrix(r, x);
    let by = entry_bracket_matrix(r, y);
    let bxy = entry_bracket_matrix(r, &(x * y));
    let idx = |i: usize, j: usize| i * n + j;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = c(0.0);
                    for a in 0..n {
                        for b in 0..n {
                            s += bx[(idx(i, a), idx(k, b))] * y[(a, j)] * y[(b, l)];
                            s += x[(i, a)] * x[(k, b)] * by[(idx(a, j), idx(b, l))];
                        }
                    }
                    worst = worst.max((s - bxy[(idx(i, j), idx(k, l))]).norm());
                }
            }
        }
    }
    worst
}

/// Numerical rank threshold relative to the largest singular value.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct PoissonTensorSample {
    pub point: CMat,
    pub chart: Vec<String>,
    pub tensor: CMat,
    pub numerical_rank: usize,
}

/// Rank of the Poisson tensor in the coordinates `chart`.
pub fn poisson_tensor_rank(r: &RTensor, x: &CMat, chart: &[Observable]) -> Result<PoissonTensorSample> {
    let n = x.nrows();
    let dim_g = n * n - 1;
    let grads: Vec<CMat> = chart.iter().map(|o| o.gradient(x)).collect();
    // Independence on the tangent space: df(xξ) over a basis ξ of sl_n.
    let basis: Vec<CMat> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !(i == j && i == n - 1))
        .map(|(i, j)| if i == j { linalg::unit(n, i, i) - linalg::unit(n, i + 1, i + 1) } else { linalg::unit(n, i, j) })
        .collect();
    let jac = CMat::from_fn(chart.len(), dim_g, |a, b| (&grads[a] * x * &basis[b]).trace());
    let expected = chart.len().min(dim_g);
    let jr = linalg::numerical_rank(&jac, RANK_TOL);
    if jr < expected {
        return Err(Error::DegenerateChart { rank: jr, expected });
    }
    let m = chart.len();
    let mut tensor = CMat::zeros(m, m);
    for a in 0..m {
        for b in (a + 1)..m {
            let v = bracket_from_gradients(r, x, &grads[a], &grads[b]);
            tensor[(a, b)] = v;
            tensor[(b, a)] = -v;
        }
    }
    let numerical_rank = linalg::numerical_rank(&tensor, RANK_TOL);
    Ok(PoissonTensorSample { point: x.clone(), chart: chart.iter().map(|o| o.label()).collect(), tensor, numerical_rank })
}

/// All `n²` matrix entries.
pub fn entry_chart(n: usize) -> Vec<Observable> {
    (0..n).flat_map(|i| (0..n).map(move |j| Observable::Entry(i, j))).collect()
}

/// `ℓ(u) + ℓ(v) + r − dim ker(uv⁻¹ − id)`.
pub fn leaf_dimension(u: &WeylWord, v: &WeylWord) -> Result<usize> {
    let k = fixed_lattice_basis(u, v)?.len();
    Ok(u.length + v.length + u.rank() - k)
}
