//! The four subcommands. Each returns a report and writes its artifacts.

use plie_core::action_angle::{
    action_angle_chart, exponents, log_ratios, r_coordinates, spectral_projectors, trajectory_check,
};
use plie_core::cartan_weyl::{enumerate_weyl_group, fixed_lattice_basis, weyl_support, WeylWord};
use plie_core::characteristic_flows::{factorization_flow, rk4_flow, time_grid, Trajectory};
use plie_core::chevalley_rmatrix::{
    build_r_matrix, build_sln, costar_bracket, factorization_report, verify_cocycle, verify_cybe, DualVector,
    LieRealization, RTensor,
};
use plie_core::factorization::identify_bruhat_cell;
use plie_core::linalg::{self, c, CMat, C};
use plie_core::poisson_geometry::appendix::{
    ad_h_invariant_monomials, appendix1_equality, appendix2_bracket, DoubleObservable,
};
use plie_core::poisson_geometry::casimir::{casimir_value, group_casimir_basis, pullback_identities, CasimirSpec};
use plie_core::poisson_geometry::{
    entry_chart, jacobi_residual, leaf_dimension, poisson_tensor_rank, sklyanin_bracket, Observable,
};
use plie_core::sampling::{random_borel, random_sl, sample_cell, seeded, SeededRng};
use plie_core::Error;
use rand::Rng;
use serde::Serialize;
use std::path::Path;

use crate::config::Resolved;
use crate::report::{fmt_f64, write_csv, write_json, Check, Report, Thresholds};
use crate::CliError;

/// Check groups of `verify`, selectable through `checks` in the config.
pub const VERIFY_GROUPS: [&str; 5] = ["bialgebra", "jacobi", "appendix1", "appendix2", "pullback"];

fn compute(e: Error) -> CliError {
    CliError::Compute(e.to_string())
}

fn algebra(cfg: &Resolved) -> Result<(LieRealization, RTensor), CliError> {
    let real = build_sln(cfg.n).map_err(compute)?;
    let mut r = build_r_matrix(&real);
    if let Some(inj) = &cfg.raw.inject {
        let b = 3.min(r.dim() - 1);
        r = r.perturbed(0, b, inj.perturb_r);
    }
    Ok((real, r))
}

fn config_echo(cfg: &Resolved) -> serde_json::Value {
    serde_json::to_value(&cfg.raw).unwrap_or(serde_json::Value::Null)
}

fn prepare_out(out: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out).map_err(|e| CliError::Io(format!("cannot create {}: {e}", out.display())))
}

fn finish(command: &str, cfg: &Resolved, checks: Vec<Check>, mut artifacts: Vec<String>, out: &Path) -> Result<Report, CliError> {
    artifacts.push("report.json".to_string());
    let report = Report::new(command, config_echo(cfg), checks, artifacts);
    write_json(out, "report.json", &report)?;
    Ok(report)
}

fn selected_groups(cfg: &Resolved) -> Result<Vec<&'static str>, CliError> {
    if cfg.raw.checks.is_empty() {
        return Ok(VERIFY_GROUPS.to_vec());
    }
    let mut out = Vec::new();
    for name in &cfg.raw.checks {
        match VERIFY_GROUPS.iter().find(|g| **g == name.as_str()) {
            Some(g) => out.push(*g),
            None => {
                return Err(CliError::Config(format!("unknown check \"{name}\"; known: {}", VERIFY_GROUPS.join(", "))));
            }
        }
    }
    Ok(out)
}

fn random_traceless(n: usize, rng: &mut SeededRng) -> CMat {
    linalg::traceless(&CMat::from_fn(n, n, |_, _| c(rng.random_range(-1.0..=1.0))))
}

fn entry(n: usize, rng: &mut SeededRng) -> (usize, usize) {
    (rng.random_range(0..n), rng.random_range(0..n))
}

/// Bialgebra axioms, bracket sampling and the invariant-bracket identities.
pub fn cmd_verify(cfg: &Resolved, overrides: &std::collections::BTreeMap<String, f64>, out: &Path) -> Result<Report, CliError> {
    let n = cfg.n;
    let axiom_tol = if n <= 4 { 1e-12 } else { 1e-10 };
    let th = Thresholds::new(
        &[
            ("cybe", axiom_tol),
            ("cocycle", axiom_tol),
            ("serre", axiom_tol),
            ("condition_number", 1e3),
            ("factorization_rank_defect", 0.5),
            ("r_plus_homomorphism", axiom_tol),
            ("r_minus_homomorphism", axiom_tol),
            ("jacobi", 1e-9),
            ("antisymmetry", f64::MIN_POSITIVE),
            ("appendix1", 1e-9),
            ("appendix1_invariance", 1e-9),
            ("appendix2", 1e-9),
            ("pullback_psi", 1e-12),
            ("pullback_beta", 1e-12),
        ],
        overrides,
    )?;
    let groups = selected_groups(cfg)?;
    prepare_out(out)?;
    let (real, r) = algebra(cfg)?;
    let mut rng = seeded(cfg.seed);
    let mut checks = Vec::new();
    let mut artifacts = Vec::new();

    if groups.contains(&"bialgebra") {
        checks.push(th.check("cybe", verify_cybe(&r)));
        checks.push(th.check("cocycle", verify_cocycle(&r, &real)));
        checks.push(th.check("serre", real.serre_residuals().max()));
        checks.push(th.check("condition_number", r.casimir_condition_number()));
        let iso = factorization_report(&real, &r);
        checks.push(th.check("factorization_rank_defect", (n * n - 1).abs_diff(iso.rank) as f64));
        let (mut plus, mut minus): (f64, f64) = (0.0, 0.0);
        for _ in 0..20 {
            let l = DualVector::new(random_traceless(n, &mut rng));
            let m = DualVector::new(random_traceless(n, &mut rng));
            let lm = costar_bracket(&real, &r, &l, &m);
            plus = plus.max(linalg::max_diff(&r.r_plus(&lm), &linalg::commutator(&r.r_plus(&l), &r.r_plus(&m))));
            minus = minus.max(linalg::max_diff(&r.r_minus(&lm), &linalg::commutator(&r.r_minus(&l), &r.r_minus(&m))));
        }
        checks.push(th.check("r_plus_homomorphism", plus));
        checks.push(th.check("r_minus_homomorphism", minus));
        let rows: Vec<Vec<String>> = r
            .to_sparse()
            .iter()
            .map(|e| vec![(e.a + 1).to_string(), (e.b + 1).to_string(), fmt_f64(e.re), fmt_f64(e.im)])
            .collect();
        let header = ["a", "b", "re", "im"].map(String::from);
        artifacts.push(write_csv(out, "r_matrix.csv", &header, &rows)?);
    }

    if groups.contains(&"jacobi") {
        let (mut jac, mut anti): (f64, f64) = (0.0, 0.0);
        for _ in 0..100 {
            let x = random_sl(n, &mut rng);
            let (a, b, cc) = (entry(n, &mut rng), entry(n, &mut rng), entry(n, &mut rng));
            jac = jac.max(jacobi_residual(&r, &x, a, b, cc));
            let f = Observable::Entry(a.0, a.1);
            let g = Observable::Entry(b.0, b.1);
            anti = anti.max((sklyanin_bracket(&r, &f, &g, &x) + sklyanin_bracket(&r, &g, &f, &x)).norm());
        }
        checks.push(th.check("jacobi", jac));
        checks.push(th.check("antisymmetry", anti));
    }

    if groups.contains(&"appendix1") {
        checks.extend(appendix1_checks(cfg, &r, &th, &mut rng)?);
    }

    if groups.contains(&"appendix2") {
        let inv = ad_h_invariant_monomials(n);
        let all: Vec<(usize, usize)> = (0..inv.len()).flat_map(|a| (a..inv.len()).map(move |b| (a, b))).collect();
        let step = (all.len() / 10).max(1);
        let pairs: Vec<(usize, usize)> = all.iter().step_by(step).copied().take(10).collect();
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let x = random_borel(n, true, &mut rng);
            for &(a, b) in &pairs {
                let (lhs, rhs) = appendix2_bracket(&real, &r, &inv[a], &inv[b], &x);
                let scale = (inv[a].value(&x) * inv[b].value(&x)).norm().max(1.0);
                worst = worst.max((lhs - rhs).norm() / scale);
            }
        }
        checks.push(th.check("appendix2", worst).with_note(format!("20 points x {} invariant pairs, relative to |f g|", pairs.len())));
    }

    if groups.contains(&"pullback") {
        let ts = fixed_lattice_basis(&cfg.u, &cfg.v).map_err(|e| CliError::Compute(e.to_string()))?;
        match ts.first() {
            None => {
                let note = "ker(uv^-1 - id) is trivial for this cell";
                checks.push(Check::skipped("pullback_psi", th.get("pullback_psi"), note));
                checks.push(Check::skipped("pullback_beta", th.get("pullback_beta"), note));
            }
            Some(t) => {
                let group = CasimirSpec::group(&cfg.u, &cfg.v, t.clone()).map_err(compute)?;
                let tensor = CasimirSpec::tensor(&cfg.u, &cfg.v, t.clone()).map_err(compute)?;
                let (mut psi_w, mut beta_w): (f64, f64) = (0.0, 0.0);
                for _ in 0..100 {
                    let g = sample_cell(&cfg.u, &cfg.v, &mut rng).map_err(compute)?;
                    let bm = random_borel(n, false, &mut rng);
                    let bp = random_borel(n, true, &mut rng);
                    let (psi, beta) = pullback_identities(&cfg.u, &cfg.v, t, &g, &bm, &bp).map_err(compute)?;
                    let s1 = casimir_value(&group, &[g]).map_err(compute)?.norm().max(1.0);
                    let s2 = casimir_value(&tensor, &[bm, bp]).map_err(compute)?.norm().max(1.0);
                    psi_w = psi_w.max(psi / s1);
                    beta_w = beta_w.max(beta / s2);
                }
                checks.push(th.check("pullback_psi", psi_w));
                checks.push(th.check("pullback_beta", beta_w));
            }
        }
    }
    finish("verify", cfg, checks, artifacts, out)
}

fn appendix1_checks(cfg: &Resolved, r: &RTensor, th: &Thresholds, rng: &mut SeededRng) -> Result<Vec<Check>, CliError> {
    let (u, v) = (&cfg.u, &cfg.v);
    let ts = fixed_lattice_basis(u, v).map_err(|e| CliError::Compute(e.to_string()))?;
    if ts.is_empty() {
        let note = "no Casimir lattice points for this cell";
        return Ok(vec![
            Check::skipped("appendix1", th.get("appendix1"), note),
            Check::skipped("appendix1_invariance", th.get("appendix1_invariance"), note),
        ]);
    }
    let tilde = |t: &plie_core::Weight| -> Result<DoubleObservable, CliError> {
        DoubleObservable::tilde(CasimirSpec::double(u, v, t.clone()).map_err(compute)?).map_err(compute)
    };
    let f = tilde(&ts[0])?;
    let g = DoubleObservable::Product(vec![tilde(&ts[ts.len() - 1])?, DoubleObservable::First(Observable::Character(1))]);
    let h = DoubleObservable::Second(Observable::Character(cfg.n - 1));
    let w0 = WeylWord::longest(&cfg.cartan);
    let (mut eq, mut defect): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let x = sample_cell(u, &w0, rng).map_err(compute)?;
        let y = sample_cell(&w0, v, rng).map_err(compute)?;
        for (a, b) in [(&f, &g), (&f, &h), (&g, &h)] {
            let vals = appendix1_equality(r, a, b, &x, &y).map_err(compute)?;
            eq = eq.max((vals.lhs - vals.rhs).norm());
            defect = defect.max(vals.invariance_defect);
        }
    }
    Ok(vec![th.check("appendix1", eq), th.check("appendix1_invariance", defect)])
}

#[derive(Debug, Clone, Serialize)]
pub struct AtlasRow {
    pub u: Vec<usize>,
    pub v: Vec<usize>,
    pub length_u: usize,
    pub length_v: usize,
    pub kernel_dim: usize,
    pub support_dim: usize,
    pub predicted_leaf_dim: usize,
    pub measured_ranks: Vec<usize>,
    pub casimirs: Vec<String>,
    pub max_casimir_bracket: f64,
}

pub const ATLAS_POINTS: usize = 5;

/// Leaf dimensions and Casimirs over every pair `(u, v)`.
pub fn cmd_atlas(cfg: &Resolved, overrides: &std::collections::BTreeMap<String, f64>, out: &Path) -> Result<Report, CliError> {
    if cfg.n > 4 {
        return Err(CliError::Config(format!("atlas needs rank <= 3, got {}", cfg.n - 1)));
    }
    let th = Thresholds::new(&[("leaf_mismatches", 1.0), ("casimir_bracket", 1e-9), ("coxeter_leaf", 0.5)], overrides)?;
    prepare_out(out)?;
    let (_, r) = algebra(cfg)?;
    let mut rng = seeded(cfg.seed);
    let all = enumerate_weyl_group(&cfg.cartan);
    let chart = entry_chart(cfg.n);
    let mut rows = Vec::new();
    let mut mismatches = 0usize;
    let mut worst: f64 = 0.0;
    for u in &all {
        for v in &all {
            let predicted = leaf_dimension(u, v).map_err(compute)?;
            let basis = group_casimir_basis(u, v).map_err(compute)?;
            let mut ranks = Vec::with_capacity(ATLAS_POINTS);
            let mut bracket: f64 = 0.0;
            for k in 0..ATLAS_POINTS {
                let x = sample_cell(u, v, &mut rng).map_err(compute)?;
                let rank = poisson_tensor_rank(&r, &x, &chart).map_err(compute)?.numerical_rank;
                if rank != predicted {
                    mismatches += 1;
                }
                ranks.push(rank);
                if k == 0 {
                    for spec in &basis {
                        let obs = spec.observable().map_err(compute)?;
                        let scale = obs.value(&x).norm().max(1.0);
                        for o in &chart {
                            bracket = bracket.max(sklyanin_bracket(&r, &obs, o, &x).norm() / scale);
                        }
                    }
                }
            }
            worst = worst.max(bracket);
            let kernel_dim = fixed_lattice_basis(u, v).map_err(|e| CliError::Compute(e.to_string()))?.len();
            rows.push(AtlasRow {
                u: u.letters_one_based(),
                v: v.letters_one_based(),
                length_u: u.length,
                length_v: v.length,
                kernel_dim,
                support_dim: weyl_support(u, v).dim,
                predicted_leaf_dim: predicted,
                measured_ranks: ranks,
                casimirs: basis.iter().map(|s| s.label()).collect(),
                max_casimir_bracket: bracket,
            });
        }
    }
    let cox = WeylWord::coxeter(&cfg.cartan);
    let cox_leaf = leaf_dimension(&cox, &cox).map_err(compute)?;
    let checks = vec![
        th.check("leaf_mismatches", mismatches as f64)
            .with_note(format!("{} cells x {ATLAS_POINTS} points", rows.len())),
        th.check("casimir_bracket", worst),
        th.check("coxeter_leaf", cox_leaf.abs_diff(2 * (cfg.n - 1)) as f64)
            .with_note(format!("Coxeter leaf dimension {cox_leaf}")),
    ];
    let word = |w: &[usize]| w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ");
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            vec![
                word(&row.u),
                word(&row.v),
                row.length_u.to_string(),
                row.length_v.to_string(),
                row.kernel_dim.to_string(),
                row.support_dim.to_string(),
                row.predicted_leaf_dim.to_string(),
                row.measured_ranks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" "),
                row.casimirs.len().to_string(),
                fmt_f64(row.max_casimir_bracket),
            ]
        })
        .collect();
    let header = [
        "u", "v", "length_u", "length_v", "kernel_dim", "support_dim", "predicted_leaf_dim", "measured_ranks",
        "casimir_count", "max_casimir_bracket",
    ]
    .map(String::from);
    let artifacts = vec![write_json(out, "atlas.json", &rows)?, write_csv(out, "atlas.csv", &header, &csv_rows)?];
    finish("atlas", cfg, checks, artifacts, out)
}

/// Initial point and the cell it lies in.
fn initial_point(cfg: &Resolved) -> Result<(CMat, WeylWord, WeylWord), CliError> {
    match &cfg.explicit_point {
        None => {
            let x = sample_cell(&cfg.u, &cfg.v, &mut seeded(cfg.seed)).map_err(compute)?;
            Ok((x, cfg.u.clone(), cfg.v.clone()))
        }
        Some(x) => {
            let (u, v) = identify_bruhat_cell(x).map_err(compute)?;
            if cfg.raw.cell.is_some() && (u != cfg.u || v != cfg.v) {
                return Err(CliError::Config(format!(
                    "initial point lies in ({}, {}), not in the configured cell ({}, {})",
                    u, v, cfg.u, cfg.v
                )));
            }
            Ok((x.clone(), u, v))
        }
    }
}

fn matrix_header(n: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for i in 1..=n {
        for j in 1..=n {
            h.push(format!("x{i}{j}_re"));
            h.push(format!("x{i}{j}_im"));
        }
    }
    h
}

fn trajectory_rows(traj: &Trajectory) -> Vec<Vec<String>> {
    traj.times
        .iter()
        .zip(&traj.points)
        .map(|(t, x)| {
            let mut row = vec![fmt_f64(*t)];
            for i in 0..x.nrows() {
                for j in 0..x.ncols() {
                    row.push(fmt_f64(x[(i, j)].re));
                    row.push(fmt_f64(x[(i, j)].im));
                }
            }
            row
        })
        .collect()
}

fn complex_cells(values: &[C]) -> Vec<String> {
    values.iter().flat_map(|z| [fmt_f64(z.re), fmt_f64(z.im)]).collect()
}

/// Factorization flow against the RK4 oracle, conservation and cell membership.
pub fn cmd_flow(cfg: &Resolved, overrides: &std::collections::BTreeMap<String, f64>, out: &Path) -> Result<Report, CliError> {
    let th = Thresholds::new(
        &[
            ("flow_agreement", 1e-6),
            ("det_error", 1e-10),
            ("trace_drift", 1e-10),
            ("casimir_drift", 1e-8),
            ("cell_changes", 1.0),
            ("aa_closed_form", 1e-8),
            ("aa_linearity", 1e-8),
        ],
        overrides,
    )?;
    prepare_out(out)?;
    let (_, r) = algebra(cfg)?;
    let (x0, u, v) = initial_point(cfg)?;
    let h = cfg.hamiltonian;
    let times = time_grid(cfg.raw.time.t_max, cfg.raw.time.samples);
    let exact = factorization_flow(&r, &x0, &h, &times).map_err(compute)?;
    let mut checks = Vec::new();
    let mut artifacts = Vec::new();
    let header = matrix_header(cfg.n);
    artifacts.push(write_csv(out, "trajectory_factorization.csv", &header, &trajectory_rows(&exact))?);
    match rk4_flow(&r, &x0, &h, &times, cfg.raw.time.rk4_step) {
        Ok(numeric) => {
            checks.push(th.check("flow_agreement", exact.max_deviation(&numeric)));
            artifacts.push(write_csv(out, "trajectory_rk4.csv", &header, &trajectory_rows(&numeric))?);
        }
        Err(e) => checks.push(Check::failed("flow_agreement", th.get("flow_agreement"), format!("rk4: {e}"))),
    }
    checks.push(th.check("det_error", exact.max_det_error()));
    let casimirs = group_casimir_basis(&u, &v).map_err(compute)?;
    let log = exact.conserved_log(&casimirs).map_err(compute)?;
    let drifts = log.drifts();
    let rel = |j: usize| drifts[j] / log.values[0][j].norm().max(1.0);
    let trace_drift = (0..cfg.n).map(rel).fold(0.0, f64::max);
    checks.push(th.check("trace_drift", trace_drift));
    if casimirs.is_empty() {
        checks.push(Check::skipped("casimir_drift", th.get("casimir_drift"), "no Casimirs for this cell"));
    } else {
        let cas = (cfg.n..log.labels.len()).map(rel).fold(0.0, f64::max);
        checks.push(th.check("casimir_drift", cas));
    }
    let cells = exact.cells().map_err(compute)?;
    let changes = cells.iter().filter(|c| c.0 != u || c.1 != v).count();
    checks.push(th.check("cell_changes", changes as f64).with_note(format!("cell ({u}, {v})")));
    let mut cons_header = vec!["t".to_string()];
    for l in &log.labels {
        cons_header.push(format!("{l}_re"));
        cons_header.push(format!("{l}_im"));
    }
    let cons_rows: Vec<Vec<String>> = times
        .iter()
        .zip(&log.values)
        .map(|(t, row)| std::iter::once(fmt_f64(*t)).chain(complex_cells(row)).collect())
        .collect();
    artifacts.push(write_csv(out, "conserved.csv", &cons_header, &cons_rows)?);
    match trajectory_check(&r, &h, &exact) {
        Ok(aa) => {
            checks.push(th.check("aa_closed_form", aa.r_residual));
            checks.push(th.check("aa_linearity", aa.linearity_residual));
            artifacts.push(write_json(out, "aa.json", &aa_samples(&r, cfg, &exact)?)?);
        }
        Err(e @ (Error::ChartUndefined { .. } | Error::DegenerateSpectrum(_) | Error::DenominatorVanishes(_))) => {
            checks.push(Check::skipped("aa_closed_form", th.get("aa_closed_form"), e.to_string()));
            checks.push(Check::skipped("aa_linearity", th.get("aa_linearity"), e.to_string()));
        }
        Err(e) => return Err(compute(e)),
    }
    finish("flow", cfg, checks, artifacts, out)
}

#[derive(Debug, Clone, Serialize)]
pub struct AaSample {
    pub t: f64,
    pub eigenvalues: Vec<C>,
    pub r_values: Vec<C>,
    #[serde(rename = "X")]
    pub x: Vec<C>,
    pub log_ratios: Vec<C>,
}

fn aa_samples(r: &RTensor, cfg: &Resolved, traj: &Trajectory) -> Result<Vec<AaSample>, CliError> {
    traj.times
        .iter()
        .zip(&traj.points)
        .map(|(t, x)| {
            let sd = spectral_projectors(x).map_err(compute)?;
            let rv = r_coordinates(&sd);
            let ex = exponents(r, &sd, &cfg.hamiltonian, x);
            Ok(AaSample { t: *t, eigenvalues: sd.eigenvalues.clone(), log_ratios: log_ratios(&rv).map_err(compute)?, r_values: rv, x: ex.primary })
        })
        .collect()
}

/// Action-angle chart along the factorization flow.
pub fn cmd_aa(cfg: &Resolved, overrides: &std::collections::BTreeMap<String, f64>, out: &Path) -> Result<Report, CliError> {
    let th = Thresholds::new(
        &[
            ("projectors", 1e-10),
            ("r_closed_form", 1e-8),
            ("angle_linearity", 1e-8),
            ("angle_count", 0.5),
            ("action_drift", 1e-10),
            ("angle_rate", 1e-6),
        ],
        overrides,
    )?;
    prepare_out(out)?;
    let (_, r) = algebra(cfg)?;
    let (x0, _, _) = initial_point(cfg)?;
    let h = cfg.hamiltonian;
    let times = time_grid(cfg.raw.time.t_max, cfg.raw.time.samples);
    let traj = factorization_flow(&r, &x0, &h, &times).map_err(compute)?;
    let names = ["projectors", "r_closed_form", "angle_linearity", "angle_count", "action_drift", "angle_rate"];
    let chart0 = match action_angle_chart(&r, &x0, &h) {
        Ok(c) => c,
        Err(e @ (Error::ChartUndefined { .. } | Error::DegenerateSpectrum(_))) => {
            let checks = names.iter().map(|k| Check::skipped(k, th.get(k), e.to_string())).collect();
            return finish("aa", cfg, checks, Vec::new(), out);
        }
        Err(e) => return Err(compute(e)),
    };
    let mut proj: f64 = 0.0;
    let mut actions: f64 = 0.0;
    for x in &traj.points {
        let sd = spectral_projectors(x).map_err(compute)?;
        let scale = linalg::max_abs(x).max(1.0);
        proj = proj.max(sd.completeness_residual()).max(sd.orthogonality_residual()).max(sd.reconstruction_residual(x) / scale);
        for (a, b) in sd.eigenvalues.iter().zip(&chart0.actions) {
            actions = actions.max((a - b).norm());
        }
    }
    let mut checks = vec![th.check("projectors", proj)];
    let samples = aa_samples(&r, cfg, &traj);
    match (trajectory_check(&r, &h, &traj), samples) {
        (Ok(aa), Ok(samples)) => {
            checks.push(th.check("r_closed_form", aa.r_residual));
            checks.push(th.check("angle_linearity", aa.linearity_residual));
            checks.push(th.check("angle_count", aa.angle_count.abs_diff(cfg.n - 1) as f64));
            checks.push(th.check("action_drift", actions));
            checks.push(th.check("angle_rate", angle_rate_spread(&r, cfg, &traj)?));
            let header: Vec<String> = std::iter::once("t".to_string())
                .chain((1..=cfg.n).flat_map(|k| [format!("r{k}_re"), format!("r{k}_im")]))
                .chain((1..cfg.n).flat_map(|k| [format!("theta{k}_re"), format!("theta{k}_im")]))
                .collect();
            let rows: Vec<Vec<String>> = samples
                .iter()
                .map(|s| {
                    std::iter::once(fmt_f64(s.t)).chain(complex_cells(&s.r_values)).chain(complex_cells(&s.log_ratios)).collect()
                })
                .collect();
            let artifacts = vec![write_json(out, "aa.json", &samples)?, write_csv(out, "aa.csv", &header, &rows)?];
            finish("aa", cfg, checks, artifacts, out)
        }
        (Err(e), _) => {
            for k in &names[1..] {
                checks.push(Check::failed(k, th.get(k), e.to_string()));
            }
            finish("aa", cfg, checks, Vec::new(), out)
        }
        (_, Err(e)) => Err(e),
    }
}

/// Spread of the finite-difference angle velocities over the sample times.
fn angle_rate_spread(r: &RTensor, cfg: &Resolved, traj: &Trajectory) -> Result<f64, CliError> {
    let dt = 1e-5;
    let mut rates: Vec<Vec<C>> = Vec::new();
    let angle = |p: &CMat| -> Result<Vec<C>, CliError> {
        log_ratios(&r_coordinates(&spectral_projectors(p).map_err(compute)?)).map_err(compute)
    };
    for x in &traj.points {
        let ahead = factorization_flow(r, x, &cfg.hamiltonian, &[0.0, dt]).map_err(compute)?;
        let behind = factorization_flow(r, x, &cfg.hamiltonian, &[0.0, -dt]).map_err(compute)?;
        let (a, b) = (angle(&behind.points[1])?, angle(&ahead.points[1])?);
        rates.push(a.iter().zip(&b).map(|(p, q)| wrap_diff(*q - *p) / c(2.0 * dt)).collect());
    }
    let mut spread: f64 = 0.0;
    for rate in &rates {
        for (a, b) in rate.iter().zip(&rates[0]) {
            spread = spread.max((a - b).norm());
        }
    }
    Ok(spread)
}

fn wrap_diff(z: C) -> C {
    let pi = std::f64::consts::PI;
    C::new(z.re, (z.im + pi).rem_euclid(2.0 * pi) - pi)
}
