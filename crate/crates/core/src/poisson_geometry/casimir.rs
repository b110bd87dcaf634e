//! Casimir families as Laurent monomials in generalized minors.
//!
//! Cells are `G^{u,v} = B⁺uB⁺ ∩ B⁻vB⁻`. The group family is
//! `c_{u,v,t}(x) = ∏ Δ_{ω_i, v⁻¹ω_i}(x)^{t_i} Δ_{uω_i, ω_i}(x)^{(u⁻¹t)_i}` with
//! `t ∈ ker_Λ(uv⁻¹ − id)`; the Borel families are its restrictions to
//! `v = e` or `u = e`.

use super::Observable;
use crate::cartan_weyl::{fixed_lattice_basis, fixed_lattice_of, Weight, WeylWord};
use crate::factorization::minor_indices;
use crate::linalg::{self, c, CMat, C};
use crate::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `c⁺_{w,t}` on `B⁺ ∩ B⁻wB⁻`; stored with `u = e`, `v = w`.
    BorelPlus,
    /// `c⁻_{w,s}` on `B⁻ ∩ B⁺wB⁺`; stored with `u = w`, `v = e`.
    BorelMinus,
    Group,
    /// `c̃_{u,v,t}(g₁, g₂)` on `G × G`.
    Double,
    /// `[c_u ⊗ c_v]_t(b₋, b₊)`.
    Tensor,
    /// `c⁺_{u,s} c⁻_{v,t}` on `D(B⁺)`, evaluated at `(x, h)`.
    DoubleBorel,
}

#[derive(Debug, Clone)]
pub struct CasimirSpec {
    pub family: Family,
    pub u: WeylWord,
    pub v: WeylWord,
    pub t: Weight,
    /// Second lattice point, used by [`Family::DoubleBorel`] only.
    pub s: Option<Weight>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorFactor {
    pub slot: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub exponent: i64,
}

/// `h^{exponent · ω_i}` = product of the first `i + 1` diagonal entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusFactor {
    pub slot: usize,
    pub i: usize,
    pub exponent: i64,
}

fn fixes(w: &WeylWord, t: &Weight) -> bool {
    &w.act(t) == t
}

impl CasimirSpec {
    pub fn group(u: &WeylWord, v: &WeylWord, t: Weight) -> Result<Self> {
        Self::two_sided(Family::Group, u, v, t)
    }

    pub fn double(u: &WeylWord, v: &WeylWord, t: Weight) -> Result<Self> {
        Self::two_sided(Family::Double, u, v, t)
    }

    pub fn tensor(u: &WeylWord, v: &WeylWord, t: Weight) -> Result<Self> {
        Self::two_sided(Family::Tensor, u, v, t)
    }

    fn two_sided(family: Family, u: &WeylWord, v: &WeylWord, t: Weight) -> Result<Self> {
        if !fixes(&u.mul(&v.inverse()), &t) {
            return Err(Error::InvalidCasimir(format!("{:?} not fixed by uv⁻¹", t.coords)));
        }
        Ok(CasimirSpec { family, u: u.clone(), v: v.clone(), t, s: None })
    }

    pub fn borel_plus(w: &WeylWord, t: Weight) -> Result<Self> {
        if !fixes(w, &t) {
            return Err(Error::InvalidCasimir(format!("{:?} not fixed by w", t.coords)));
        }
        let e = WeylWord::identity(w.cartan());
        Ok(CasimirSpec { family: Family::BorelPlus, u: e, v: w.clone(), t, s: None })
    }

    pub fn borel_minus(w: &WeylWord, s: Weight) -> Result<Self> {
        if !fixes(w, &s) {
            return Err(Error::InvalidCasimir(format!("{:?} not fixed by w", s.coords)));
        }
        let e = WeylWord::identity(w.cartan());
        Ok(CasimirSpec { family: Family::BorelMinus, u: w.clone(), v: e, t: s, s: None })
    }

    /// `s ∈ ker(u − id)`, `t ∈ ker(v − id)`.
    pub fn double_borel(u: &WeylWord, s: Weight, v: &WeylWord, t: Weight) -> Result<Self> {
        if !fixes(u, &s) || !fixes(v, &t) {
            return Err(Error::InvalidCasimir("lattice points not fixed".into()));
        }
        Ok(CasimirSpec { family: Family::DoubleBorel, u: u.clone(), v: v.clone(), t, s: Some(s) })
    }

    pub fn arity(&self) -> usize {
        match self.family {
            Family::Group | Family::BorelPlus | Family::BorelMinus => 1,
            _ => 2,
        }
    }

    pub fn minor_factors(&self) -> Vec<MinorFactor> {
        let r = self.u.rank();
        let e = WeylWord::identity(self.u.cartan());
        let mut out = Vec::new();
        let mut push = |slot: usize, (rows, cols): (Vec<usize>, Vec<usize>), exponent: i64| {
            if exponent != 0 {
                out.push(MinorFactor { slot, rows, cols, exponent });
            }
        };
        match self.family {
            Family::DoubleBorel => {
                let s = self.s.as_ref().expect("double Borel spec carries s");
                let u_inv = self.u.inverse();
                for i in 0..r {
                    push(0, minor_indices(&e, &u_inv, i), s.coords[i]);
                    push(0, minor_indices(&self.v, &e, i), self.t.coords[i]);
                }
            }
            _ => {
                let (first, second) = match self.family {
                    Family::Double => (0, 1),
                    Family::Tensor => (1, 0),
                    _ => (0, 0),
                };
                let v_inv = self.v.inverse();
                let ut = self.u.inverse().act(&self.t);
                for i in 0..r {
                    push(first, minor_indices(&e, &v_inv, i), self.t.coords[i]);
                    push(second, minor_indices(&self.u, &e, i), ut.coords[i]);
                }
            }
        }
        out
    }

    pub fn torus_factors(&self) -> Vec<TorusFactor> {
        let Family::DoubleBorel = self.family else { return Vec::new() };
        let s = self.s.as_ref().expect("double Borel spec carries s");
        (0..self.u.rank())
            .map(|i| TorusFactor { slot: 1, i, exponent: s.coords[i] - self.t.coords[i] })
            .filter(|f| f.exponent != 0)
            .collect()
    }

    pub fn label(&self) -> String {
        format!("{:?}[u={},v={},t={:?}{}]", self.family, self.u, self.v, self.t.coords, match &self.s {
            Some(s) => format!(",s={:?}", s.coords),
            None => String::new(),
        })
    }

    /// Observable form for single-point families.
    pub fn observable(&self) -> Result<Observable> {
        if self.arity() != 1 {
            return Err(Error::InvalidCasimir("observable form needs a single-point family".into()));
        }
        Ok(Observable::Monomial(self.minor_factors().into_iter().map(|f| (f.rows, f.cols, f.exponent)).collect()))
    }
}

/// Value of the Casimir at `points` (one or two matrices, per the family).
pub fn casimir_value(spec: &CasimirSpec, points: &[CMat]) -> Result<C> {
    casimir_value_and_gradients(spec, points).map(|(v, _)| v)
}

/// Value and per-slot trace gradients.
pub fn casimir_value_and_gradients(spec: &CasimirSpec, points: &[CMat]) -> Result<(C, Vec<CMat>)> {
    if points.len() != spec.arity() {
        return Err(Error::InvalidCasimir(format!("expected {} points, got {}", spec.arity(), points.len())));
    }
    let n = points[0].nrows();
    let mut val = c(1.0);
    let mut log_grads = vec![linalg::zeros(n); points.len()];
    for f in spec.minor_factors() {
        let x = &points[f.slot];
        let m = linalg::minor(x, &f.rows, &f.cols);
        if m.norm() < 1e-12 {
            return Err(Error::VanishingMinor { label: format!("det[{:?},{:?}]", f.rows, f.cols), value: m.norm() });
        }
        val *= m.powi(f.exponent as i32);
        log_grads[f.slot] += linalg::minor_gradient(x, &f.rows, &f.cols) * (c(f.exponent as f64) / m);
    }
    for f in spec.torus_factors() {
        let h = &points[f.slot];
        for k in 0..=f.i {
            let d = h[(k, k)];
            val *= d.powi(f.exponent as i32);
            log_grads[f.slot][(k, k)] += c(f.exponent as f64) / d;
        }
    }
    Ok((val, log_grads.into_iter().map(|g| g * val).collect()))
}

/// Group-family Casimirs for an integer basis of `ker_Λ(uv⁻¹ − id)`.
pub fn group_casimir_basis(u: &WeylWord, v: &WeylWord) -> Result<Vec<CasimirSpec>> {
    fixed_lattice_basis(u, v)?.into_iter().map(|t| CasimirSpec::group(u, v, t)).collect()
}

/// D(B⁺) family for integer bases of `ker(u − id)` and `ker(v − id)`.
pub fn double_borel_basis(u: &WeylWord, v: &WeylWord) -> Result<Vec<CasimirSpec>> {
    let r = u.rank();
    let mut out = Vec::new();
    for s in fixed_lattice_of(u) {
        out.push(CasimirSpec::double_borel(u, s, v, Weight::zero(r))?);
    }
    for t in fixed_lattice_of(v) {
        out.push(CasimirSpec::double_borel(u, Weight::zero(r), v, t)?);
    }
    Ok(out)
}

/// Rank of the Jacobian of `log c_k` with respect to chart parameters.
pub fn log_jacobian_rank(funcs: &[&dyn Fn(&[f64]) -> Result<C>], params: &[f64], h: f64) -> Result<usize> {
    if funcs.is_empty() {
        return Ok(0);
    }
    let mut jac = CMat::zeros(funcs.len(), params.len());
    for (a, f) in funcs.iter().enumerate() {
        let base = f(params)?;
        for k in 0..params.len() {
            let mut p = params.to_vec();
            p[k] += h;
            let up = f(&p)?;
            p[k] -= 2.0 * h;
            let down = f(&p)?;
            jac[(a, k)] = (up - down) / (c(2.0 * h) * base);
        }
    }
    Ok(linalg::numerical_rank(&jac, 1e-6))
}

/// Number of functionally independent group Casimirs at a chart point of
/// `G^{u,v}`, measured from the chart Jacobian.
pub fn casimir_differential_rank(u: &WeylWord, v: &WeylWord, params: &[f64]) -> Result<usize> {
    let basis = group_casimir_basis(u, v)?;
    let closures: Vec<Box<dyn Fn(&[f64]) -> Result<C>>> = basis
        .iter()
        .map(|spec| {
            let spec = spec.clone();
            let (u, v) = (u.clone(), v.clone());
            Box::new(move |p: &[f64]| casimir_value(&spec, &[crate::sampling::cell_point(&u, &v, p)]))
                as Box<dyn Fn(&[f64]) -> Result<C>>
        })
        .collect();
    let refs: Vec<&dyn Fn(&[f64]) -> Result<C>> = closures.iter().map(|b| b.as_ref()).collect();
    log_jacobian_rank(&refs, params, 1e-5)
}

/// `(|c(nx) − c(x)|, |c(hxh⁻¹) − c(x)|)` for a single-point family.
pub fn left_invariance_residuals(spec: &CasimirSpec, x: &CMat, n_minus: &CMat, h: &CMat) -> Result<(f64, f64)> {
    let base = casimir_value(spec, std::slice::from_ref(x))?;
    let left = casimir_value(spec, &[n_minus * x])?;
    let h_inv = linalg::inverse(h).expect("torus element");
    let conj = casimir_value(spec, &[h * x * h_inv])?;
    Ok(((left - base).norm(), (conj - base).norm()))
}

/// `(|c̃(g, g) − c(g)|, |c̃(b₊, b₋) − [c_u ⊗ c_v]_t(b₋, b₊)|)`.
pub fn pullback_identities(
    u: &WeylWord,
    v: &WeylWord,
    t: &Weight,
    g: &CMat,
    b_minus: &CMat,
    b_plus: &CMat,
) -> Result<(f64, f64)> {
    let tilde = CasimirSpec::double(u, v, t.clone())?;
    let group = CasimirSpec::group(u, v, t.clone())?;
    let tensor = CasimirSpec::tensor(u, v, t.clone())?;
    let psi = (casimir_value(&tilde, &[g.clone(), g.clone()])? - casimir_value(&group, std::slice::from_ref(g))?).norm();
    let beta = (casimir_value(&tilde, &[b_plus.clone(), b_minus.clone()])?
        - casimir_value(&tensor, &[b_minus.clone(), b_plus.clone()])?)
    .norm();
    Ok((psi, beta))
}
