//! Characteristic Hamiltonians, their flows solved by factorization, an RK4
//! oracle driven by the bracket, and the integrability report.

use crate::cartan_weyl::{weyl_support, WeylWord};
use crate::chevalley_rmatrix::{factorization_iso, DualVector, RTensor};
use crate::factorization::{eigen_system, factorize_dual, identify_bruhat_cell};
use crate::linalg::{self, c, CMat, C};
use crate::poisson_geometry::casimir::{casimir_value, CasimirSpec};
use crate::poisson_geometry::{
    bracket_from_gradients, entry_chart, hamiltonian_field, leaf_dimension, poisson_tensor_rank, Observable, RANK_TOL,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Longest single factorization step before re-basing.
pub const MAX_STEP: f64 = 0.1;
const MIN_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HamiltonianKind {
    /// `tr ∧^k x`.
    Character,
    /// `tr x^k`.
    PowerTrace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub kind: HamiltonianKind,
    pub k: usize,
}

impl HamiltonianSpec {
    pub fn trace() -> Self {
        HamiltonianSpec { kind: HamiltonianKind::Character, k: 1 }
    }

    pub fn character(k: usize) -> Self {
        HamiltonianSpec { kind: HamiltonianKind::Character, k }
    }

    pub fn power_trace(k: usize) -> Self {
        HamiltonianSpec { kind: HamiltonianKind::PowerTrace, k }
    }

    pub fn observable(&self) -> Observable {
        match self.kind {
            HamiltonianKind::Character => Observable::Character(self.k),
            HamiltonianKind::PowerTrace => Observable::PowerTrace(self.k),
        }
    }

    pub fn value(&self, x: &CMat) -> C {
        self.observable().value(x)
    }

    pub fn label(&self) -> String {
        self.observable().label()
    }
}

/// `M(x) = I(l)` with `l(ξ) = d/ds H(x e^{sξ})|₀`.
pub fn gradient_m(r: &RTensor, h: &HamiltonianSpec, x: &CMat) -> CMat {
    let t = h.observable().gradient(x);
    factorization_iso(&DualVector::new(&t * x), r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowMethod {
    Factorization,
    Rk4,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<CMat>,
    pub method: FlowMethod,
    /// Largest `|det − 1|` corrected by renormalization (RK4 only).
    pub det_correction: f64,
}

#[derive(Debug, Clone)]
pub struct ConservedLog {
    pub labels: Vec<String>,
    /// `values[k][j]`: quantity `j` at time index `k`.
    pub values: Vec<Vec<C>>,
}

impl ConservedLog {
    /// Largest deviation from the initial value, per quantity.
    pub fn drifts(&self) -> Vec<f64> {
        let Some(first) = self.values.first() else { return Vec::new() };
        (0..self.labels.len())
            .map(|j| self.values.iter().map(|row| (row[j] - first[j]).norm()).fold(0.0, f64::max))
            .collect()
    }
}

impl Trajectory {
    /// `tr x^k` for `k = 1..n`, then every given Casimir.
    pub fn conserved_log(&self, casimirs: &[CasimirSpec]) -> Result<ConservedLog> {
        let n = self.points.first().map_or(0, |x| x.nrows());
        let mut labels: Vec<String> = (1..=n).map(|k| format!("tr x^{k}")).collect();
        labels.extend(casimirs.iter().map(|s| s.label()));
        let mut values = Vec::with_capacity(self.points.len());
        for x in &self.points {
            let mut row: Vec<C> = (1..=n).map(|k| Observable::PowerTrace(k).value(x)).collect();
            for s in casimirs {
                row.push(casimir_value(s, std::slice::from_ref(x))?);
            }
            values.push(row);
        }
        Ok(ConservedLog { labels, values })
    }

    pub fn max_det_error(&self) -> f64 {
        self.points.iter().map(|x| (linalg::det(x) - c(1.0)).norm()).fold(0.0, f64::max)
    }

    /// Bruhat cell of every point.
    pub fn cells(&self) -> Result<Vec<(WeylWord, WeylWord)>> {
        self.points.iter().map(identify_bruhat_cell).collect()
    }

    pub fn max_deviation(&self, other: &Trajectory) -> f64 {
        self.points.iter().zip(&other.points).map(|(a, b)| linalg::max_diff(a, b)).fold(0.0, f64::max)
    }
}

/// One factorization step: `g₊g₋⁻¹ = exp(τM(x))`, `x ↦ g₊⁻¹ x g₊`.
fn factorization_step(r: &RTensor, h: &HamiltonianSpec, x: &CMat, tau: f64) -> Result<CMat> {
    let m = gradient_m(r, h, x);
    let pair = factorize_dual(&linalg::expm(&(m * c(tau))))?;
    let inv = linalg::inverse(&pair.plus).expect("invertible triangular factor");
    Ok(inv * x * &pair.plus)
}

/// Advance by `dt`, re-basing every `MAX_STEP` and bisecting on breakdown.
fn advance(r: &RTensor, h: &HamiltonianSpec, x: &CMat, t0: f64, dt: f64) -> Result<CMat> {
    let mut x = x.clone();
    let mut done = 0.0;
    let dir = dt.signum();
    while (dt - done).abs() > 0.0 {
        let mut step = (dt - done).abs().min(MAX_STEP);
        loop {
            match factorization_step(r, h, &x, dir * step) {
                Ok(next) => {
                    x = next;
                    break;
                }
                Err(Error::NotInBigCell { .. }) if step > MIN_STEP => step /= 2.0,
                Err(Error::NotInBigCell { .. }) => return Err(Error::FactorizationBreakdown(t0 + done)),
                Err(e) => return Err(e),
            }
        }
        done += dir * step;
        if (dt - done).abs() < 1e-15 {
            break;
        }
    }
    Ok(x)
}

/// Flow of `H` through `x₀` sampled at `times` (the first time is the start).
pub fn factorization_flow(r: &RTensor, x0: &CMat, h: &HamiltonianSpec, times: &[f64]) -> Result<Trajectory> {
    let mut points = Vec::with_capacity(times.len());
    let mut x = x0.clone();
    let mut t = times.first().copied().unwrap_or(0.0);
    for &target in times {
        if target != t {
            x = advance(r, h, &x, t, target - t)?;
            t = target;
        }
        points.push(x.clone());
    }
    Ok(Trajectory { times: times.to_vec(), points, method: FlowMethod::Factorization, det_correction: 0.0 })
}

/// RK4 on `ẋ_ij = {H, x_ij}` with fixed `step`, determinant renormalized
/// after every step. Fails with `StepTooLarge` once `|H(x) − H(x₀)| > 1e−6`.
pub fn rk4_flow(r: &RTensor, x0: &CMat, h: &HamiltonianSpec, times: &[f64], step: f64) -> Result<Trajectory> {
    let obs = h.observable();
    let h0 = obs.value(x0);
    let field = |x: &CMat| hamiltonian_field(r, x, &obs.gradient(x));
    let n = x0.nrows() as f64;
    let mut x = x0.clone();
    let mut t = times.first().copied().unwrap_or(0.0);
    let mut points = Vec::with_capacity(times.len());
    let mut det_correction: f64 = 0.0;
    for &target in times {
        while (target - t).abs() > 1e-14 {
            let dt = (target - t).signum() * step.min((target - t).abs());
            let k1 = field(&x);
            let k2 = field(&(&x + &k1 * c(dt / 2.0)));
            let k3 = field(&(&x + &k2 * c(dt / 2.0)));
            let k4 = field(&(&x + &k3 * c(dt)));
            x += (k1 + k2 * c(2.0) + k3 * c(2.0) + k4) * c(dt / 6.0);
            let d = linalg::det(&x);
            det_correction = det_correction.max((d - c(1.0)).norm());
            x *= d.powf(-1.0 / n);
            t += dt;
            let drift = (obs.value(&x) - h0).norm();
            if drift > 1e-6 {
                return Err(Error::StepTooLarge(drift));
            }
        }
        t = target;
        points.push(x.clone());
    }
    Ok(Trajectory { times: times.to_vec(), points, method: FlowMethod::Rk4, det_correction })
}

/// Uniform grid `0, t_max/(samples−1), …, t_max`.
pub fn time_grid(t_max: f64, samples: usize) -> Vec<f64> {
    if samples < 2 {
        return vec![0.0];
    }
    (0..samples).map(|k| t_max * k as f64 / (samples - 1) as f64).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct IntegrabilityReport {
    pub u_word: Vec<usize>,
    pub v_word: Vec<usize>,
    pub torus_dim: usize,
    pub support_dim: usize,
    pub predicted_leaf_dim: usize,
    pub measured_leaf_dim: usize,
    pub max_character_bracket: f64,
    pub degenerate: bool,
    pub liouville: bool,
    pub degeneracy_identity: bool,
}

/// Rank of the span of the Hamiltonian vector fields of `tr ∧^k`, `k = 1..r`.
pub fn torus_dimension(r: &RTensor, x: &CMat) -> usize {
    let n = x.nrows();
    let rows: Vec<CMat> = (1..n).map(|k| hamiltonian_field(r, x, &Observable::Character(k).gradient(x))).collect();
    let m = CMat::from_fn(rows.len(), n * n, |a, b| rows[a][(b / n, b % n)]);
    linalg::numerical_rank(&m, RANK_TOL)
}

/// `max_{i<j} |{tr ∧^i, tr ∧^j}(x)|`.
pub fn character_commutation(r: &RTensor, x: &CMat) -> f64 {
    let n = x.nrows();
    let grads: Vec<CMat> = (1..n).map(|k| Observable::Character(k).gradient(x)).collect();
    let mut worst: f64 = 0.0;
    for i in 0..grads.len() {
        for j in (i + 1)..grads.len() {
            worst = worst.max(bracket_from_gradients(r, x, &grads[i], &grads[j]).norm());
        }
    }
    worst
}

pub fn integrability_report(r: &RTensor, x0: &CMat, u: &WeylWord, v: &WeylWord) -> Result<IntegrabilityReport> {
    eigen_system(x0, 1e-8)?;
    let torus_dim = torus_dimension(r, x0);
    let support_dim = weyl_support(u, v).dim;
    let predicted = leaf_dimension(u, v)?;
    let measured = poisson_tensor_rank(r, x0, &entry_chart(x0.nrows()))?.numerical_rank;
    Ok(IntegrabilityReport {
        u_word: u.letters_one_based(),
        v_word: v.letters_one_based(),
        torus_dim,
        support_dim,
        predicted_leaf_dim: predicted,
        measured_leaf_dim: measured,
        max_character_bracket: character_commutation(r, x0),
        degenerate: 2 * torus_dim < measured,
        liouville: 2 * torus_dim == measured,
        degeneracy_identity: torus_dim == support_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley_rmatrix::{build_r_matrix, build_sln};

    #[test]
    fn diagonal_point_is_fixed() {
        let r = build_r_matrix(&build_sln(3).unwrap());
        let x = linalg::diag(&[c(2.0), c(0.8), c(0.625)]);
        let m = gradient_m(&r, &HamiltonianSpec::trace(), &x);
        assert!(linalg::max_abs(&(&m - linalg::diag_part(&m))) < 1e-15);
        let tr = factorization_flow(&r, &x, &HamiltonianSpec::trace(), &time_grid(1.0, 5)).unwrap();
        assert!(tr.points.iter().all(|p| linalg::max_diff(p, &x) < 1e-14));
    }

    #[test]
    fn gradient_m_is_linear_in_h() {
        let r = build_r_matrix(&build_sln(3).unwrap());
        let x = linalg::from_real(3, &[1.0, 0.3, -0.2, 0.5, 0.8, 0.1, -0.4, 0.6, 1.2]);
        let m1 = gradient_m(&r, &HamiltonianSpec::character(1), &x);
        let m2 = gradient_m(&r, &HamiltonianSpec::character(2), &x);
        let t = Observable::Sum(vec![Observable::Character(1), Observable::Character(2)]).gradient(&x);
        let sum = factorization_iso(&DualVector::new(&t * &x), &r);
        assert!(linalg::max_diff(&sum, &(m1 + m2)) < 1e-14);
    }

    #[test]
    fn grid_endpoints() {
        let g = time_grid(1.0, 11);
        assert_eq!(g.len(), 11);
        assert_eq!(g[10], 1.0);
    }
}
