//! Suite configuration and reports. A fixed (config, seed) pair yields a
//! byte-identical JSON report: case order is deterministic, maps are sorted,
//! and no timestamps enter the output.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: String,
    pub seed: u64,
    /// Number of random cases per sub-experiment.
    pub ensemble: usize,
    /// Per-axis grid points override (suite defaults apply when empty).
    #[serde(default)]
    pub grid: Vec<usize>,
    /// Rerun at doubled resolution and compare the empirical constants.
    #[serde(default)]
    pub refine_check: bool,
    /// Named tolerance overrides (suite-specific keys, e.g. "constant").
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl SuiteConfig {
    pub fn new(suite: &str) -> Self {
        Self {
            suite: suite.to_string(),
            seed: 7,
            ensemble: 32,
            grid: Vec::new(),
            refine_check: false,
            tolerances: BTreeMap::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_ensemble(mut self, n: usize) -> Self {
        self.ensemble = n;
        self
    }

    pub fn with_refine_check(mut self, on: bool) -> Self {
        self.refine_check = on;
        self
    }

    pub fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }
}

/// One measured case: an inequality instance with both sides evaluated.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseRow {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    /// lhs / (bound * rhs); passing means <= 1 for declared bound.
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefinementCheck {
    pub base_constant: f64,
    pub refined_constant: f64,
    /// |refined - base| / base.
    pub variation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: SuiteConfig,
    /// The constant the suite declares for its inequality.
    pub declared_constant: f64,
    /// Largest measured lhs/rhs ratio.
    pub empirical_max: f64,
    /// 95th percentile of the measured ratios.
    pub empirical_p95: f64,
    pub cases: Vec<CaseRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinement: Option<RefinementCheck>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn from_ratios(
        config: &SuiteConfig,
        declared_constant: f64,
        cases: Vec<CaseRow>,
    ) -> Self {
        let mut ratios: Vec<f64> = cases.iter().map(|c| c.ratio).collect();
        ratios.sort_by(f64::total_cmp);
        let empirical_max = ratios.last().copied().unwrap_or(0.0);
        let p95 = if ratios.is_empty() {
            0.0
        } else {
            let idx = ((ratios.len() as f64) * 0.95).ceil() as usize;
            ratios[idx.clamp(1, ratios.len()) - 1]
        };
        let pass = cases.iter().all(|c| c.pass);
        Self {
            suite: config.suite.clone(),
            config: config.clone(),
            declared_constant,
            empirical_max,
            empirical_p95: p95,
            cases,
            refinement: None,
            notes: Vec::new(),
            pass,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn ratio_csv(&self) -> String {
        let mut out = String::from("id,lhs,rhs,ratio,pass\n");
        for c in &self.cases {
            out.push_str(&format!(
                "{},{:.17e},{:.17e},{:.17e},{}\n",
                c.id, c.lhs, c.rhs, c.ratio, c.pass
            ));
        }
        out
    }

    /// Column data for plotting (case index against ratio).
    pub fn plot_data(&self) -> String {
        let mut out = String::from("# case ratio\n");
        for (i, c) in self.cases.iter().enumerate() {
            out.push_str(&format!("{i} {:.17e}\n", c.ratio));
        }
        out
    }

    /// Write report.json, ratios.csv and ratios.dat under `dir`.
    pub fn emit(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        let base = dir.join(format!("{}-report.json", self.suite));
        std::fs::write(&base, self.to_json()).with_context(|| format!("writing {base:?}"))?;
        std::fs::write(dir.join(format!("{}-ratios.csv", self.suite)), self.ratio_csv())?;
        std::fs::write(dir.join(format!("{}-ratios.dat", self.suite)), self.plot_data())?;
        Ok(())
    }
}

/// Build a case row against a declared constant.
pub fn case(id: impl Into<String>, lhs: f64, rhs: f64, constant: f64) -> CaseRow {
    let denom = constant * rhs;
    let ratio = if denom > 0.0 {
        lhs / denom
    } else if lhs == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    CaseRow {
        id: id.into(),
        lhs,
        rhs,
        ratio,
        pass: ratio <= 1.0,
    }
}

/// A case that records an exact identity check: |lhs - rhs| <= tol.
pub fn identity_case(id: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> CaseRow {
    let err = (lhs - rhs).abs();
    CaseRow {
        id: id.into(),
        lhs,
        rhs,
        ratio: if tol > 0.0 { err / tol } else { f64::INFINITY },
        pass: err <= tol,
    }
}
