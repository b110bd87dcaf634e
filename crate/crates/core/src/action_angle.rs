//! Spectral projectors of the defining representation, the coordinates
//! `r_μ = (v, P_μ v)` with `v = e₁`, their closed-form evolution and the
//! action-angle chart.

use crate::cartan_weyl::{CartanData, Weight};
use crate::characteristic_flows::{gradient_m, HamiltonianSpec, Trajectory};
use crate::chevalley_rmatrix::RTensor;
use crate::factorization::eigen_system;
use crate::linalg::{self, c, CMat, C};
use crate::{Error, Result};
use serde::Serialize;

const GAP_TOL: f64 = 1e-8;
const CHART_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SpectralData {
    /// Ordered by `(Re, Im)`.
    pub eigenvalues: Vec<C>,
    pub projectors: Vec<CMat>,
    /// `μ_i = ω₁ − α₁ − ⋯ − α_{i−1}` in fundamental-weight coordinates.
    pub weights: Vec<Weight>,
}

impl SpectralData {
    pub fn completeness_residual(&self) -> f64 {
        let n = self.projectors[0].nrows();
        let sum = self.projectors.iter().fold(linalg::zeros(n), |acc, p| acc + p);
        linalg::max_diff(&sum, &linalg::eye(n))
    }

    /// `max ‖P_μ P_ν − δ_{μν} P_μ‖`.
    pub fn orthogonality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, p) in self.projectors.iter().enumerate() {
            for (b, q) in self.projectors.iter().enumerate() {
                let prod = p * q;
                let want = if a == b { p.clone() } else { linalg::zeros(p.nrows()) };
                worst = worst.max(linalg::max_diff(&prod, &want));
            }
        }
        worst
    }

    pub fn reconstruction_residual(&self, x: &CMat) -> f64 {
        let sum = self.eigenvalues.iter().zip(&self.projectors).fold(linalg::zeros(x.nrows()), |acc, (t, p)| acc + p * *t);
        linalg::max_diff(&sum, x)
    }
}

/// Weights of the defining representation of `sl_n`.
pub fn defining_weights(n: usize) -> Result<Vec<Weight>> {
    let cd = CartanData::sl(n)?;
    let r = n - 1;
    let mut mu = Weight::fundamental(r, 0);
    let mut out = vec![mu.clone()];
    for i in 0..r {
        let a = cd.simple_root_weight(i);
        mu = Weight::new(mu.coords.iter().zip(&a.coords).map(|(m, a)| m - a).collect());
        out.push(mu.clone());
    }
    Ok(out)
}

/// Projectors `P = v wᵀ / (wᵀ v)` from right and left eigenvectors.
pub fn spectral_projectors(x: &CMat) -> Result<SpectralData> {
    let n = x.nrows();
    let (ev, v) = eigen_system(x, GAP_TOL).map_err(|e| match e {
        Error::NotSemisimple(_) => Error::DegenerateSpectrum(min_gap(x)),
        other => other,
    })?;
    let mut projectors = Vec::with_capacity(n);
    for (k, &lam) in ev.iter().enumerate() {
        let shifted_t = (x - linalg::eye(n) * lam).transpose();
        let left = linalg::null_space(&shifted_t, 1e-9);
        if left.ncols() != 1 {
            return Err(Error::DegenerateSpectrum(min_gap(x)));
        }
        let right = v.column(k).into_owned();
        let w = left.column(0).into_owned();
        let norm = (w.transpose() * &right)[(0, 0)];
        if norm.norm() < 1e-12 {
            return Err(Error::DegenerateSpectrum(min_gap(x)));
        }
        projectors.push(&right * w.transpose() / norm);
    }
    Ok(SpectralData { eigenvalues: ev, projectors, weights: defining_weights(n)? })
}

fn min_gap(x: &CMat) -> f64 {
    let ev = linalg::eigenvalues(x);
    let mut gap = f64::INFINITY;
    for a in 0..ev.len() {
        for b in (a + 1)..ev.len() {
            gap = gap.min((ev[a] - ev[b]).norm());
        }
    }
    gap
}

/// `r_μ = (P_μ)₁₁`.
pub fn r_coordinates(sd: &SpectralData) -> Vec<C> {
    sd.projectors.iter().map(|p| p[(0, 0)]).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Exponents {
    /// `(v, M P_μ v) / (v, P_μ v)`, or the trace form where `r_μ` vanishes.
    pub primary: Vec<C>,
    /// `tr(M P_μ) / tr(P_μ)`.
    pub trace_form: Vec<C>,
}

/// Eigenvalues `X_μ` of `M = I(dH(x))` on each spectral projector.
pub fn exponents(r: &RTensor, sd: &SpectralData, h: &HamiltonianSpec, x: &CMat) -> Exponents {
    let m = gradient_m(r, h, x);
    let mut primary = Vec::new();
    let mut trace_form = Vec::new();
    for p in &sd.projectors {
        let mp = &m * p;
        let tf = mp.trace() / p.trace();
        trace_form.push(tf);
        primary.push(if p[(0, 0)].norm() > CHART_TOL { mp[(0, 0)] / p[(0, 0)] } else { tf });
    }
    Exponents { primary, trace_form }
}

/// `r_μ(t) = e^{−tX_μ} r_μ / Σ_ν e^{−tX_ν} r_ν`.
pub fn evolve_r(r0: &[C], x: &[C], t: f64) -> Result<Vec<C>> {
    let w: Vec<C> = r0.iter().zip(x).map(|(r, xm)| (-xm * c(t)).exp() * r).collect();
    let denom: C = w.iter().sum();
    if denom.norm() < 1e-14 {
        return Err(Error::DenominatorVanishes(t));
    }
    Ok(w.into_iter().map(|z| z / denom).collect())
}

/// `log(r_{μ_i} / r_{μ_{i+1}})` for consecutive weights.
pub fn log_ratios(rv: &[C]) -> Result<Vec<C>> {
    if let Some((index, z)) = rv.iter().enumerate().find(|(_, z)| z.norm() < CHART_TOL) {
        return Err(Error::ChartUndefined { index, value: z.norm() });
    }
    Ok(rv.windows(2).map(|w| (w[0] / w[1]).ln()).collect())
}

#[derive(Debug, Clone)]
pub struct ActionAngleChart {
    pub actions: Vec<C>,
    pub angles: Vec<C>,
    pub r_values: Vec<C>,
    pub exponents: Exponents,
}

/// Actions are the ordered eigenvalues; angles are consecutive log-ratios.
pub fn action_angle_chart(r: &RTensor, x: &CMat, h: &HamiltonianSpec) -> Result<ActionAngleChart> {
    let sd = spectral_projectors(x)?;
    let rv = r_coordinates(&sd);
    let angles = log_ratios(&rv)?;
    let ex = exponents(r, &sd, h, x);
    Ok(ActionAngleChart { actions: sd.eigenvalues.clone(), angles, r_values: rv, exponents: ex })
}

#[derive(Debug, Clone, Serialize)]
pub struct AngleCheck {
    /// `max_t max_μ |r_μ(x(t)) − r_μ^{closed}(t)|`.
    pub r_residual: f64,
    /// `max_t max_i |θ_i(t) − θ_i(0) + t(X_i − X_{i+1})|`, imaginary parts mod 2π.
    pub linearity_residual: f64,
    pub angle_count: usize,
}

fn wrap(z: C) -> f64 {
    let pi = std::f64::consts::PI;
    let im = (z.im + pi).rem_euclid(2.0 * pi) - pi;
    z.re.hypot(im)
}

/// Compares the closed-form evolution of `r_μ` and of the angles with the
/// values recomputed along a trajectory started at `traj.points[0]`.
pub fn trajectory_check(r: &RTensor, h: &HamiltonianSpec, traj: &Trajectory) -> Result<AngleCheck> {
    let x0 = &traj.points[0];
    let chart = action_angle_chart(r, x0, h)?;
    let xs = &chart.exponents.primary;
    let mut r_residual: f64 = 0.0;
    let mut linearity: f64 = 0.0;
    for (t, x) in traj.times.iter().zip(&traj.points) {
        let rv = r_coordinates(&spectral_projectors(x)?);
        let closed = evolve_r(&chart.r_values, xs, *t)?;
        for (a, b) in rv.iter().zip(&closed) {
            r_residual = r_residual.max((a - b).norm());
        }
        let angles = log_ratios(&rv)?;
        for (i, th) in angles.iter().enumerate() {
            let drift = th - chart.angles[i] + (xs[i] - xs[i + 1]) * c(*t);
            linearity = linearity.max(wrap(drift));
        }
    }
    Ok(AngleCheck { r_residual, linearity_residual: linearity, angle_count: chart.angles.len() })
}

/// Frobenius covariants `∏_{ν≠μ} (x − t_ν)/(t_μ − t_ν)`.
pub fn frobenius_covariants(x: &CMat, eigenvalues: &[C]) -> Vec<CMat> {
    let n = x.nrows();
    eigenvalues
        .iter()
        .enumerate()
        .map(|(a, &ta)| {
            eigenvalues.iter().enumerate().filter(|&(b, _)| b != a).fold(linalg::eye(n), |acc, (_, &tb)| {
                acc * ((x - linalg::eye(n) * tb) / (ta - tb))
            })
        })
        .collect()
}
