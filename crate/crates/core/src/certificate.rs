//! Run certificates: a TOML record of parameters, verdict, and statistics
//! that can be replayed to reproduce the verdict.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::time::Duration;
use thiserror::Error;

use crate::config::{Configuration, Ratio, TargetSpec};
use crate::deduce::RULE_VERSION;
use crate::search::{AnchorMode, SearchOutcome, SearchParams, Verdict};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("malformed certificate: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("cannot serialize certificate: {0}")]
    Serialize(#[from] toml::ser::Error),
    #[error("certificate field {field}: {message}")]
    Field {
        field: &'static str,
        message: String,
    },
    #[error("certificate was produced by rule version {found}, this build has {expected}; results are incomparable")]
    Incomparable { found: String, expected: String },
}

/// SHA-256 of the rule description, in hex.
pub fn rule_version_hash() -> String {
    let digest = Sha256::digest(RULE_VERSION.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub certificate: Header,
    pub params: Params,
    pub verdict: VerdictRecord,
    pub stats: StatsRecord,
    /// Only this section may differ between runs with the same parameters.
    pub timing: Timing,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub survivors: Vec<Survivor>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub format: u32,
    pub rule_version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub targets: Vec<u32>,
    pub alpha: Ratio,
    pub max_levels: u32,
    pub anchor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_budget_seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    /// `PROVED` or `EXHAUSTED`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<u32>,
    /// `2(2k + L)` for the terminating level `L`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub special_diagonal_bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels_completed: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statement: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsRecord {
    pub nodes: u64,
    pub branches: u64,
    pub pruned: u64,
    pub contradictions: BTreeMap<String, u64>,
    pub level_survivors: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub workers: usize,
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Survivor {
    pub grid: String,
}

/// `2(2k + L)`: every pair a PROVED run reasons about lies within this many
/// vertices of the anchor.
pub fn special_diagonal_bound(spec: &TargetSpec, levels: u32) -> u32 {
    2 * (2 * spec.k() as u32 + levels)
}

/// The bound a PROVED run establishes. Polygons too small for the window
/// are left to the constant.
pub fn statement(spec: &TargetSpec, levels: u32) -> String {
    let k = spec.k() as u32;
    let l = special_diagonal_bound(spec, levels);
    format!(
        "sum of m_t over T = {} is at most {} * n for every convex n-gon with n > C(k, l) / (alpha - 1), where k = {}, l = {}",
        spec.targets_display(),
        spec.alpha(),
        k,
        l
    )
}

impl Certificate {
    pub fn from_outcome(params: &SearchParams, outcome: &SearchOutcome) -> Certificate {
        let verdict = match &outcome.verdict {
            Verdict::Proved { levels } => VerdictRecord {
                kind: "PROVED".into(),
                levels: Some(*levels),
                special_diagonal_bound: Some(special_diagonal_bound(&params.spec, *levels)),
                reason: None,
                levels_completed: None,
                statement: Some(statement(&params.spec, *levels)),
            },
            Verdict::Exhausted {
                reason,
                levels_completed,
                ..
            } => VerdictRecord {
                kind: "EXHAUSTED".into(),
                levels: None,
                special_diagonal_bound: None,
                reason: Some(reason.to_string()),
                levels_completed: Some(*levels_completed),
                statement: None,
            },
        };
        let survivors = match &outcome.verdict {
            Verdict::Exhausted { survivors, .. } => survivors
                .iter()
                .map(|c| Survivor { grid: c.to_grid() })
                .collect(),
            Verdict::Proved { .. } => Vec::new(),
        };
        let s = &outcome.stats;
        Certificate {
            certificate: Header {
                format: FORMAT_VERSION,
                rule_version: rule_version_hash(),
            },
            params: Params {
                targets: params.spec.target_list(),
                alpha: params.spec.alpha(),
                max_levels: params.max_levels,
                anchor: params.anchor.to_string(),
                node_budget: params.node_budget,
                time_budget_seconds: params.time_budget.map(|d| d.as_secs_f64()),
            },
            verdict,
            stats: StatsRecord {
                nodes: s.nodes,
                branches: s.branches,
                pruned: s.pruned,
                contradictions: s
                    .contradictions_by_rule()
                    .map(|(r, n)| (r.name().to_string(), n))
                    .collect(),
                level_survivors: s.level_survivors.clone(),
            },
            timing: Timing {
                workers: params.workers,
                wall_seconds: outcome.elapsed.as_secs_f64(),
            },
            survivors,
        }
    }

    pub fn to_toml(&self) -> Result<String, CertificateError> {
        Ok(toml::to_string(self)?)
    }

    pub fn from_toml(text: &str) -> Result<Certificate, CertificateError> {
        Ok(toml::from_str(text)?)
    }

    /// Fails with [`CertificateError::Incomparable`] if the certificate was
    /// produced by different rules.
    pub fn check_rule_version(&self) -> Result<(), CertificateError> {
        let expected = rule_version_hash();
        if self.certificate.rule_version != expected {
            return Err(CertificateError::Incomparable {
                found: self.certificate.rule_version.clone(),
                expected,
            });
        }
        Ok(())
    }

    /// Search parameters that reproduce this run.
    pub fn search_params(&self, workers: usize) -> Result<SearchParams, CertificateError> {
        let spec = TargetSpec::new(&self.params.targets, self.params.alpha).map_err(|e| {
            CertificateError::Field {
                field: "params.targets",
                message: e.to_string(),
            }
        })?;
        let anchor: AnchorMode =
            self.params
                .anchor
                .parse()
                .map_err(|message| CertificateError::Field {
                    field: "params.anchor",
                    message,
                })?;
        let mut p = SearchParams::new(spec, self.params.max_levels);
        p.workers = workers;
        p.anchor = anchor;
        p.node_budget = self.params.node_budget;
        p.time_budget = self.params.time_budget_seconds.map(Duration::from_secs_f64);
        Ok(p)
    }

    /// `true` if `other` reports the same verdict: kind and level count for
    /// PROVED, kind only for EXHAUSTED.
    pub fn same_verdict(&self, other: &Certificate) -> bool {
        let (a, b) = (&self.verdict, &other.verdict);
        a.kind == b.kind && (a.kind != "PROVED" || a.levels == b.levels)
    }

    /// Copy with the timing section cleared, for comparing runs.
    pub fn without_timing(&self) -> Certificate {
        let mut c = self.clone();
        c.timing = Timing {
            workers: 0,
            wall_seconds: 0.0,
        };
        c
    }

    /// Survivor configurations of an EXHAUSTED run.
    pub fn survivor_configs(&self) -> Result<Vec<Configuration>, CertificateError> {
        let k = self.params.targets.iter().copied().max().unwrap_or(1) as u8;
        self.survivors
            .iter()
            .map(|s| {
                Configuration::from_grid(k, &s.grid).map_err(|message| CertificateError::Field {
                    field: "survivors.grid",
                    message,
                })
            })
            .collect()
    }
}
