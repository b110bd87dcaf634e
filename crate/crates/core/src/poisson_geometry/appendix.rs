//! Bracket identities for invariant functions: the factorization-map bracket on G x G and the adjoint bracket on B+.
//!
//! Double `D(G) = G × G` with `⟨(a,b),(c,d)⟩ = tr(ac) − tr(bd)`, diagonal
//! `𝔤_δ`, and `𝔤* = {(r₊L, r₋L)}`. A function `F(x, y)` has form gradient
//! `∇F = (sl(x T_x), −sl(y T_y))` from left derivatives and `∇′F` from right
//! derivatives; `d₊ = Π_{𝔤*}∇`, `d₋ = Π_{𝔤_δ}∇`.

use super::casimir::{casimir_value_and_gradients, CasimirSpec, Family};
use super::{bracket_from_gradients, Observable};
use crate::chevalley_rmatrix::{DualVector, LieRealization, RTensor};
use crate::linalg::{self, c, CMat, C};
use crate::{Error, Result};

/// Function on `G × G` with closed-form gradients.
#[derive(Debug, Clone)]
pub enum DoubleObservable {
    /// `F(x, y) = c̃_{u,v,t}(y, x)`.
    Tilde(CasimirSpec),
    /// Depends on the first factor only.
    First(Observable),
    /// Depends on the second factor only.
    Second(Observable),
    Product(Vec<DoubleObservable>),
}

impl DoubleObservable {
    pub fn tilde(spec: CasimirSpec) -> Result<Self> {
        if spec.family != Family::Double {
            return Err(Error::InvalidCasimir("tilde observable needs the double family".into()));
        }
        Ok(DoubleObservable::Tilde(spec))
    }

    /// Value and trace gradients with respect to `x` and `y`.
    pub fn eval(&self, x: &CMat, y: &CMat) -> Result<(C, CMat, CMat)> {
        let n = x.nrows();
        match self {
            DoubleObservable::Tilde(spec) => {
                let (v, g) = casimir_value_and_gradients(spec, &[y.clone(), x.clone()])?;
                Ok((v, g[1].clone(), g[0].clone()))
            }
            DoubleObservable::First(o) => Ok((o.value(x), o.gradient(x), linalg::zeros(n))),
            DoubleObservable::Second(o) => Ok((o.value(y), linalg::zeros(n), o.gradient(y))),
            DoubleObservable::Product(fs) => {
                let parts = fs.iter().map(|f| f.eval(x, y)).collect::<Result<Vec<_>>>()?;
                let mut val = c(1.0);
                let mut gx = linalg::zeros(n);
                let mut gy = linalg::zeros(n);
                for (k, (_, tx, ty)) in parts.iter().enumerate() {
                    let others: C = parts.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, p)| p.0).product();
                    gx += tx * others;
                    gy += ty * others;
                }
                for p in &parts {
                    val *= p.0;
                }
                Ok((val, gx, gy))
            }
        }
    }
}

type Pair = (CMat, CMat);

fn form(a: &Pair, b: &Pair) -> C {
    (&a.0 * &b.0).trace() - (&a.1 * &b.1).trace()
}

/// `(p, q) = (r₊L, r₋L) + (a, a)` with `L = p − q`; returns `(𝔤*, 𝔤_δ)` parts.
fn split(r: &RTensor, p: &CMat, q: &CMat) -> (Pair, Pair) {
    let l = DualVector::new(p - q);
    let xp = r.r_plus(&l);
    let xm = r.r_minus(&l);
    let a = p - &xp;
    ((xp, xm), (a.clone(), a))
}

struct Differentials {
    plus: Pair,
    minus: Pair,
    plus_r: Pair,
    minus_r: Pair,
}

fn differentials(r: &RTensor, x: &CMat, y: &CMat, tx: &CMat, ty: &CMat) -> Differentials {
    let sl = linalg::traceless;
    let (plus, minus) = split(r, &sl(&(x * tx)), &(-sl(&(y * ty))));
    let (plus_r, minus_r) = split(r, &sl(&(tx * x)), &(-sl(&(ty * y))));
    Differentials { plus, minus, plus_r, minus_r }
}

#[derive(Debug, Clone, Copy)]
pub struct Appendix1Values {
    pub lhs: C,
    pub rhs: C,
    /// `max(‖d₋f − d′₋f‖, ‖d₋g − d′₋g‖)`; zero for invariant functions.
    pub invariance_defect: f64,
}

/// Both bracket formulas for functions on the double:
/// `lhs = ⟨d₊f, d₋g⟩ − ⟨d′₊f, d′₋g⟩` and
/// `rhs = ½(⟨d₊f,d₋g⟩ + ⟨d′₊f,d′₋g⟩ − ⟨d₊g,d₋f⟩ − ⟨d′₊g,d′₋f⟩) − ⟨d′₊f,d₋g⟩ + ⟨d′₊g,d₋f⟩`.
pub fn appendix1_equality(
    r: &RTensor,
    f: &DoubleObservable,
    g: &DoubleObservable,
    x: &CMat,
    y: &CMat,
) -> Result<Appendix1Values> {
    let (_, fx, fy) = f.eval(x, y)?;
    let (_, gx, gy) = g.eval(x, y)?;
    let df = differentials(r, x, y, &fx, &fy);
    let dg = differentials(r, x, y, &gx, &gy);
    let lhs = form(&df.plus, &dg.minus) - form(&df.plus_r, &dg.minus_r);
    let rhs = (form(&df.plus, &dg.minus) + form(&df.plus_r, &dg.minus_r)
        - form(&dg.plus, &df.minus)
        - form(&dg.plus_r, &df.minus_r))
        * c(0.5)
        - form(&df.plus_r, &dg.minus)
        + form(&dg.plus_r, &df.minus);
    let defect = linalg::max_diff(&df.minus.0, &df.minus_r.0).max(linalg::max_diff(&dg.minus.0, &dg.minus_r.0));
    Ok(Appendix1Values { lhs, rhs, invariance_defect: defect })
}

/// `(lhs, rhs)` with `lhs` the Sklyanin bracket at `x ∈ B⁺` and
/// `rhs = Σ_{α>0} ⟨d₊f, e_α⟩ ⟨∂′₊g, Π_{𝔫₊}(Ad_{x⁻¹} f_α)⟩`.
pub fn appendix2_bracket(
    real: &LieRealization,
    r: &RTensor,
    f: &Observable,
    g: &Observable,
    x: &CMat,
) -> (C, C) {
    let tf = f.gradient(x);
    let tg = g.gradient(x);
    let lhs = bracket_from_gradients(r, x, &tf, &tg);
    let x_inv = linalg::inverse(x).expect("group element");
    let left_f = x * &tf;
    let right_g = &tg * x;
    let rhs = real
        .root_vectors
        .iter()
        .map(|(_, _, ea, fa)| {
            let proj = linalg::strict_upper(&(&x_inv * fa * x));
            (&left_f * ea).trace() * (&right_g * proj).trace()
        })
        .sum();
    (lhs, rhs)
}

/// Ad_H-invariant Laurent monomials in the entries of an upper-triangular
/// matrix, exponents in `{−1, 0, 1}`, sorted by degree then exponents.
pub fn ad_h_invariant_monomials(n: usize) -> Vec<Observable> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let m = slots.len();
    let mut found: Vec<Vec<i64>> = Vec::new();
    let total = 3usize.pow(m as u32);
    for code in 1..total {
        let mut e = vec![0i64; m];
        let mut k = code;
        for slot in e.iter_mut() {
            *slot = (k % 3) as i64 - 1;
            k /= 3;
        }
        let mut weight = vec![0i64; n];
        for (s, &(i, j)) in slots.iter().enumerate() {
            weight[i] += e[s];
            weight[j] -= e[s];
        }
        if weight.iter().all(|&w| w == 0) && e.iter().any(|&z| z != 0) {
            // Keep one representative per sign class.
            let first = e.iter().find(|&&z| z != 0).copied().unwrap_or(1);
            if first > 0 {
                found.push(e);
            }
        }
    }
    found.sort_by_key(|e| (e.iter().map(|z| z.abs()).sum::<i64>(), e.clone()));
    found
        .into_iter()
        .map(|e| {
            Observable::entry_monomial(
                &slots.iter().zip(&e).filter(|(_, &z)| z != 0).map(|(&s, &z)| (s, z)).collect::<Vec<_>>(),
            )
        })
        .collect()
}
