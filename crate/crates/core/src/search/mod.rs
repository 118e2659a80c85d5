//! Level-by-level branch-and-bound search.
//!
//! A run starts from the anchor diagonal and, at every level, extends each
//! live configuration by one level of cells, propagates, and keeps only
//! the configurations whose target count still exceeds `alpha` times the
//! number of levels. When no configuration survives, the bound is proved.

mod extend;
mod probe;

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::Ordering;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::config::{Configuration, TargetSpec};
use crate::deduce::{Engine, Rule};

pub use extend::{extend_level, extend_level_guided, level_positions, make_root, prune, window};
pub use probe::{probe_exhaustiveness, ProbeOutcome};

/// How the anchor diagonal `t_0 b_1` is seeded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum AnchorMode {
    /// The anchor is any of the `k` largest distances; whether it is a
    /// target is decided at level 1 like every other cell.
    #[default]
    Superset,
    /// The anchor is a target distance.
    Paper,
}

impl FromStr for AnchorMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "superset" => Ok(AnchorMode::Superset),
            "paper" => Ok(AnchorMode::Paper),
            _ => Err(format!(
                "unknown anchor mode {s:?} (expected superset or paper)"
            )),
        }
    }
}

impl fmt::Display for AnchorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnchorMode::Superset => "superset",
            AnchorMode::Paper => "paper",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchParams {
    pub spec: TargetSpec,
    pub max_levels: u32,
    pub workers: usize,
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    pub anchor: AnchorMode,
    /// How many surviving configurations an exhausted run reports.
    pub survivor_samples: usize,
}

impl SearchParams {
    pub fn new(spec: TargetSpec, max_levels: u32) -> SearchParams {
        SearchParams {
            spec,
            max_levels,
            workers: 1,
            node_budget: None,
            time_budget: None,
            anchor: AnchorMode::default(),
            survivor_samples: 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExhaustReason {
    Levels,
    Nodes,
    Time,
}

impl fmt::Display for ExhaustReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExhaustReason::Levels => "levels",
            ExhaustReason::Nodes => "nodes",
            ExhaustReason::Time => "time",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// No configuration survives level `levels`.
    Proved { levels: u32 },
    Exhausted {
        reason: ExhaustReason,
        /// Last level whose survivor set was computed completely.
        levels_completed: u32,
        survivors: Vec<Configuration>,
    },
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved { .. })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Propagation calls.
    pub nodes: u64,
    pub branches: u64,
    /// Branches cut by the target-count bound inside a level.
    pub pruned: u64,
    /// Contradictions, indexed by [`Rule::index`].
    pub contradictions: [u64; 5],
    /// Survivors after each completed level, starting with level 1.
    pub level_survivors: Vec<u64>,
}

impl SearchStats {
    pub(crate) fn merge(&mut self, o: &SearchStats) {
        self.nodes += o.nodes;
        self.branches += o.branches;
        self.pruned += o.pruned;
        for (a, b) in self.contradictions.iter_mut().zip(o.contradictions) {
            *a += b;
        }
    }

    pub fn contradictions_by_rule(&self) -> impl Iterator<Item = (Rule, u64)> + '_ {
        Rule::ALL
            .into_iter()
            .map(|r| (r, self.contradictions[r.index()]))
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    pub stats: SearchStats,
    pub elapsed: Duration,
}

#[derive(Debug, thiserror::Error)]
#[error("could not start worker pool: {0}")]
pub struct PoolError(#[from] rayon::ThreadPoolBuildError);

/// Reported after every completed level.
#[derive(Clone, Copy, Debug)]
pub struct LevelProgress {
    pub level: u32,
    pub survivors: u64,
    pub nodes: u64,
    pub elapsed: Duration,
}

/// Runs the search until every configuration dies, a budget runs out, or
/// `max_levels` levels have been completed. The verdict and statistics
/// do not depend on the number of workers, only the elapsed time does.
pub fn run_search(params: &SearchParams) -> Result<SearchOutcome, PoolError> {
    run_search_observed(params, &mut |_| {})
}

/// [`run_search`] with a callback after each level.
pub fn run_search_observed(
    params: &SearchParams,
    observe: &mut dyn FnMut(&LevelProgress),
) -> Result<SearchOutcome, PoolError> {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(params.workers.max(1))
        .build()?;
    let budget = extend::Budget {
        node_limit: params.node_budget,
        deadline: params.time_budget.map(|d| start + d),
        ..extend::Budget::unlimited()
    };
    let x = extend::Extender {
        spec: &params.spec,
        engine: Engine::default(),
        budget: &budget,
        prune: true,
        guide: None,
    };

    let mut stats = SearchStats::default();
    let mut live = vec![make_root(&params.spec, params.anchor)];
    let mut verdict = None;
    for level in 1..=params.max_levels {
        let results: Vec<(Vec<Configuration>, SearchStats)> = pool.install(|| {
            live.par_iter()
                .map(|c| {
                    let mut s = SearchStats::default();
                    let children = x.extend(c, &mut s);
                    (children, s)
                })
                .collect()
        });
        if budget.aborted.load(Ordering::Relaxed) {
            let reason = if params
                .node_budget
                .is_some_and(|l| budget.nodes.load(Ordering::Relaxed) > l)
            {
                ExhaustReason::Nodes
            } else {
                ExhaustReason::Time
            };
            verdict = Some(Verdict::Exhausted {
                reason,
                levels_completed: level - 1,
                survivors: live.iter().take(params.survivor_samples).cloned().collect(),
            });
            break;
        }
        let mut next = Vec::new();
        for (children, s) in results {
            stats.merge(&s);
            next.extend(children);
        }
        next = prune(next, &params.spec, level as i32);
        next.sort_unstable();
        next.dedup();
        stats.level_survivors.push(next.len() as u64);
        observe(&LevelProgress {
            level,
            survivors: next.len() as u64,
            nodes: stats.nodes,
            elapsed: start.elapsed(),
        });
        live = next;
        if live.is_empty() {
            verdict = Some(Verdict::Proved { levels: level });
            break;
        }
    }
    let verdict = verdict.unwrap_or_else(|| Verdict::Exhausted {
        reason: ExhaustReason::Levels,
        levels_completed: params.max_levels,
        survivors: live.iter().take(params.survivor_samples).cloned().collect(),
    });
    Ok(SearchOutcome {
        verdict,
        stats,
        elapsed: start.elapsed(),
    })
}
