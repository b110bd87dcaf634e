//! Experiment configuration: parsing, validation and resolution into core types.

use plie_core::cartan_weyl::{CartanData, Series, WeylWord};
use plie_core::characteristic_flows::{HamiltonianKind, HamiltonianSpec};
use plie_core::linalg::{self, CMat};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

use crate::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub group: GroupConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell: Option<CellConfig>,
    #[serde(default)]
    pub initial_point: InitialPoint,
    #[serde(default)]
    pub hamiltonian: HamiltonianConfig,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inject: Option<InjectConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub series: String,
    pub rank: usize,
}

/// Reduced words with 1-based letters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellConfig {
    pub u_word: Vec<usize>,
    pub v_word: Vec<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialPoint {
    #[default]
    RandomInCell,
    Explicit { matrix: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianConfig {
    pub kind: HamiltonianKind,
    pub k: usize,
}

impl Default for HamiltonianConfig {
    fn default() -> Self {
        HamiltonianConfig { kind: HamiltonianKind::Character, k: 1 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub t_max: f64,
    pub samples: usize,
    #[serde(default = "default_rk4_step")]
    pub rk4_step: f64,
}

fn default_rk4_step() -> f64 {
    1e-4
}

impl Default for TimeConfig {
    fn default() -> Self {
        TimeConfig { t_max: 1.0, samples: 11, rk4_step: default_rk4_step() }
    }
}

/// Deliberate corruption of the r-matrix, for exercising the failure path.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InjectConfig {
    pub perturb_r: f64,
}

/// Validated configuration with core types resolved.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub raw: ExperimentConfig,
    pub cartan: CartanData,
    pub n: usize,
    pub u: WeylWord,
    pub v: WeylWord,
    pub explicit_point: Option<CMat>,
    pub hamiltonian: HamiltonianSpec,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        match value.get("schema").and_then(|s| s.as_u64()) {
            Some(s) if s == SCHEMA as u64 => {}
            Some(s) => return Err(CliError::Config(format!("unsupported schema {s}, expected {SCHEMA}"))),
            None => return Err(CliError::Config("missing integer field \"schema\"".into())),
        }
        serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks every invariant and resolves words, point and Hamiltonian.
    pub fn resolve(self, seed_override: Option<u64>) -> Result<Resolved, CliError> {
        let series = Series::parse(&self.group.series)
            .ok_or_else(|| CliError::Config(format!("unknown series \"{}\"", self.group.series)))?;
        if series != Series::A {
            return Err(CliError::Config(format!("series {series} has no matrix realization here; use A")));
        }
        let rank = self.group.rank;
        if !(1..=5).contains(&rank) {
            return Err(CliError::Config(format!("rank out of range: {rank} (A_r needs 1 <= r <= 5)")));
        }
        let cartan = CartanData::sl(rank + 1).map_err(|e| CliError::Config(e.to_string()))?;
        let n = rank + 1;
        let word = |letters: &[usize], name: &str| -> Result<WeylWord, CliError> {
            if let Some(&bad) = letters.iter().find(|&&l| l == 0 || l > rank) {
                return Err(CliError::Config(format!("{name}: letter {bad} outside 1..={rank}")));
            }
            let zero: Vec<usize> = letters.iter().map(|l| l - 1).collect();
            let w = WeylWord::new(&cartan, &zero).map_err(|e| CliError::Config(format!("{name}: {e}")))?;
            if w.length != letters.len() {
                return Err(CliError::Config(format!("{name}: word {letters:?} is not reduced")));
            }
            Ok(w)
        };
        let (u, v) = match &self.cell {
            Some(c) => (word(&c.u_word, "u_word")?, word(&c.v_word, "v_word")?),
            None => {
                let w0 = WeylWord::longest(&cartan);
                (w0.clone(), w0)
            }
        };
        let explicit_point = match &self.initial_point {
            InitialPoint::RandomInCell => None,
            InitialPoint::Explicit { matrix } => {
                if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
                    return Err(CliError::Config(format!("initial_point.matrix must be {n}x{n}")));
                }
                let flat: Vec<f64> = matrix.iter().flatten().copied().collect();
                let m = linalg::from_real(n, &flat);
                let det = linalg::det(&m);
                if (det - linalg::c(1.0)).norm() > 1e-9 {
                    return Err(CliError::Config(format!("initial_point.matrix has determinant {} != 1", det.re)));
                }
                Some(m)
            }
        };
        let h = &self.hamiltonian;
        let k_max = match h.kind {
            HamiltonianKind::Character => n - 1,
            HamiltonianKind::PowerTrace => n,
        };
        if h.k == 0 || h.k > k_max {
            return Err(CliError::Config(format!("hamiltonian.k = {} outside 1..={k_max}", h.k)));
        }
        let hamiltonian = HamiltonianSpec { kind: h.kind, k: h.k };
        let t = &self.time;
        if !(t.t_max > 0.0 && t.t_max.is_finite()) {
            return Err(CliError::Config(format!("time.t_max must be > 0, got {}", t.t_max)));
        }
        if t.samples < 2 {
            return Err(CliError::Config("time.samples must be at least 2".into()));
        }
        if !(t.rk4_step > 0.0 && t.rk4_step <= t.t_max) {
            return Err(CliError::Config(format!("time.rk4_step must lie in (0, t_max], got {}", t.rk4_step)));
        }
        for (k, v) in &self.tolerances {
            if !(v.is_finite() && *v > 0.0) {
                return Err(CliError::Config(format!("tolerance {k} must be positive, got {v}")));
            }
        }
        if let Some(inj) = &self.inject {
            if !inj.perturb_r.is_finite() {
                return Err(CliError::Config("inject.perturb_r must be finite".into()));
            }
        }
        let seed = seed_override
            .or(self.seed)
            .ok_or_else(|| CliError::Config("seed missing: set \"seed\" or pass --seed".into()))?;
        let mut raw = self;
        raw.seed = Some(seed);
        Ok(Resolved { raw, cartan, n, u, v, explicit_point, hamiltonian, seed })
    }
}

/// Parses one `--tol key=value` argument.
pub fn parse_tol(arg: &str) -> Result<(String, f64), CliError> {
    let (k, v) = arg.split_once('=').ok_or_else(|| CliError::Config(format!("--tol expects key=value, got {arg}")))?;
    let value: f64 = v.trim().parse().map_err(|_| CliError::Config(format!("--tol {k}: not a number: {v}")))?;
    if !(value.is_finite() && value > 0.0) {
        return Err(CliError::Config(format!("--tol {k}: must be positive")));
    }
    Ok((k.trim().to_string(), value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> serde_json::Value {
        serde_json::json!({"schema": 1, "group": {"series": "A", "rank": 2}, "seed": 3})
    }

    fn resolve(v: serde_json::Value) -> Result<Resolved, CliError> {
        ExperimentConfig::from_json(&v.to_string())?.resolve(None)
    }

    #[test]
    fn minimal_config_uses_longest_cell() {
        let r = resolve(base()).unwrap();
        assert_eq!(r.n, 3);
        assert_eq!(r.u.length, 3);
        assert_eq!(r.hamiltonian, HamiltonianSpec::trace());
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut v = base();
        v["colour"] = serde_json::json!("red");
        assert!(resolve(v).is_err());
        let mut v = base();
        v["group"]["extra"] = serde_json::json!(1);
        assert!(resolve(v).is_err());
    }

    #[test]
    fn schema_must_be_one() {
        let mut v = base();
        v["schema"] = serde_json::json!(2);
        assert!(matches!(resolve(v), Err(CliError::Config(m)) if m.contains("schema")));
    }

    #[test]
    fn rank_and_series_validation() {
        let mut v = base();
        v["group"]["rank"] = serde_json::json!(0);
        assert!(matches!(resolve(v), Err(CliError::Config(m)) if m.contains("rank out of range")));
        let mut v = base();
        v["group"]["series"] = serde_json::json!("Q");
        assert!(matches!(resolve(v), Err(CliError::Config(m)) if m.contains("unknown series")));
    }

    #[test]
    fn words_must_be_valid_and_reduced() {
        let mut v = base();
        v["cell"] = serde_json::json!({"u_word": [1, 3], "v_word": []});
        assert!(resolve(v).is_err());
        let mut v = base();
        v["cell"] = serde_json::json!({"u_word": [1, 1], "v_word": []});
        assert!(resolve(v).is_err());
    }

    #[test]
    fn time_and_seed_validation() {
        let mut v = base();
        v["time"] = serde_json::json!({"t_max": 0.0, "samples": 5});
        assert!(resolve(v).is_err());
        let mut v = base();
        v.as_object_mut().unwrap().remove("seed");
        assert!(resolve(v.clone()).is_err());
        let cfg = ExperimentConfig::from_json(&v.to_string()).unwrap();
        assert_eq!(cfg.resolve(Some(9)).unwrap().seed, 9);
    }

    #[test]
    fn tol_arguments() {
        assert_eq!(parse_tol("cybe=1e-9").unwrap(), ("cybe".to_string(), 1e-9));
        assert!(parse_tol("cybe").is_err());
        assert!(parse_tol("cybe=-1").is_err());
    }
}
