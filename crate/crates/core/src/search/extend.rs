//! One level of the search: grow the window, enumerate the new level's
//! cells as target or non-target, and branch them down to single labels.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use super::{AnchorMode, SearchStats};
use crate::config::{Configuration, Span, TargetSpec};
use crate::deduce::{Contradiction, Engine};
use crate::label::{DistanceLabel, LabelSet};

/// True labels of some realization; a guided walk follows only branches
/// consistent with them.
pub type Guide<'a> = &'a (dyn Fn(i32, i32) -> DistanceLabel + Sync);

/// Window spans once level `level` is the frontier. Level 1 holds the
/// cells `(i, i + 1)` with `0 <= i <= 2k - 2`. A target diagonal of level
/// `l >= 2` nested with the anchor must start at `i >= 3 - 2k - l`, and
/// one on the other side must end at `j <= 2k - 2 + l`.
pub fn window(k: u8, level: i32) -> (Span, Span) {
    let k = k as i32;
    let top_lo = if level <= 1 { 0 } else { 3 - 2 * k - level };
    let bottom_lo = if level <= 1 { 1 } else { 1.min(3 - 2 * k) };
    (
        Span::new(top_lo, 2 * k - 2),
        Span::new(bottom_lo, 2 * k - 2 + level.max(1)),
    )
}

/// Top indices `i` of the cells `(i, i + level)` enumerated at `level`.
pub fn level_positions(k: u8, level: i32) -> std::ops::RangeInclusive<i32> {
    let (top, bottom) = window(k, level);
    top.lo.max(bottom.lo - level)..=top.hi.min(bottom.hi - level)
}

/// The level-0 configuration holding just the anchor diagonal `t_0 b_1`.
pub fn make_root(spec: &TargetSpec, anchor: AnchorMode) -> Configuration {
    let mut c = Configuration::new(spec.k(), Span::new(0, 0), Span::new(1, 1));
    match anchor {
        AnchorMode::Superset => c.set(0, 1, LabelSet::finite_upto(spec.k())),
        AnchorMode::Paper => {
            c.set(0, 1, spec.targets());
            c.mark(0, 1);
        }
    }
    c
}

/// Shared limits and counters of a running search.
pub(crate) struct Budget {
    pub nodes: AtomicU64,
    pub node_limit: Option<u64>,
    pub deadline: Option<Instant>,
    pub aborted: AtomicBool,
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget {
            nodes: AtomicU64::new(0),
            node_limit: None,
            deadline: None,
            aborted: AtomicBool::new(false),
        }
    }

    fn charge(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over = self.node_limit.is_some_and(|l| n > l)
            || (n.is_multiple_of(64) && self.deadline.is_some_and(|d| Instant::now() >= d));
        if over {
            self.aborted.store(true, Ordering::Relaxed);
        }
        !self.aborted.load(Ordering::Relaxed)
    }
}

pub(crate) struct Extender<'a> {
    pub spec: &'a TargetSpec,
    pub engine: Engine,
    pub budget: &'a Budget,
    /// Drop branches that can no longer exceed the target ratio.
    pub prune: bool,
    pub guide: Option<Guide<'a>>,
}

struct Walk<'a, 'b> {
    x: &'b Extender<'a>,
    level: i32,
    positions: Vec<i32>,
    stats: SearchStats,
    out: Vec<Configuration>,
}

impl Extender<'_> {
    fn propagate(&self, cfg: Configuration, stats: &mut SearchStats) -> Option<Configuration> {
        if !self.budget.charge() {
            return None;
        }
        stats.nodes += 1;
        match self.engine.propagate(cfg) {
            Ok(c) => Some(c),
            Err(Contradiction { rule, .. }) => {
                stats.contradictions[rule.index()] += 1;
                None
            }
        }
    }

    /// All children of `cfg` one level deeper, in enumeration order.
    pub fn extend(&self, cfg: &Configuration, stats: &mut SearchStats) -> Vec<Configuration> {
        let level = cfg.frontier() + 1;
        let (top, bottom) = window(cfg.k(), level);
        let mut grown = cfg.grown(top.hull(cfg.top()), bottom.hull(cfg.bottom()));
        grown.set_frontier(level);
        let mut walk = Walk {
            x: self,
            level,
            positions: level_positions(cfg.k(), level).collect(),
            stats: SearchStats::default(),
            out: Vec::new(),
        };
        if let Some(c) = self.propagate(grown, &mut walk.stats) {
            walk.position(c, 0);
        }
        stats.merge(&walk.stats);
        walk.out
    }
}

impl Walk<'_, '_> {
    fn off_guide(&self, at: (i32, i32), part: LabelSet) -> bool {
        self.x.guide.is_some_and(|g| !part.contains(g(at.0, at.1)))
    }

    /// Largest target count still reachable on levels `1..=level`.
    fn reachable(&self, cfg: &Configuration, from: usize) -> u64 {
        let targets = self.x.spec.targets();
        let open = self.positions[from..]
            .iter()
            .filter(|&&i| {
                !cfg.is_marked(i, i + self.level)
                    && !cfg.get(i, i + self.level).intersect(targets).is_empty()
            })
            .count();
        (cfg.count_targets(self.level) + open) as u64
    }

    fn position(&mut self, cfg: Configuration, idx: usize) {
        if self.x.budget.aborted.load(Ordering::Relaxed) {
            return;
        }
        if self.x.prune
            && !self
                .x
                .spec
                .alpha()
                .exceeded_by(self.reachable(&cfg, idx), self.level as u64)
        {
            self.stats.pruned += 1;
            return;
        }
        let Some(&i) = self.positions.get(idx) else {
            self.out.push(cfg);
            return;
        };
        let j = i + self.level;
        if cfg.is_marked(i, j) {
            self.position(cfg, idx + 1);
            return;
        }
        let cell = cfg.get(i, j);
        let targets = self.x.spec.targets();
        for (part, mark) in [
            (cell.intersect(targets), true),
            (cell.minus(targets), false),
        ] {
            if part.is_empty() || self.off_guide((i, j), part) {
                continue;
            }
            let mut c = cfg.clone();
            if part != cell {
                c.set(i, j, part);
            }
            if mark {
                c.mark(i, j);
            }
            let c = if part != cell {
                self.stats.branches += 1;
                match self.x.propagate(c, &mut self.stats) {
                    Some(c) => c,
                    None => continue,
                }
            } else {
                c
            };
            self.split(c, (i, j), idx);
        }
    }

    /// Branches cell `at` into `{first}` and the rest until it is a single
    /// label, continuing with the next position from every leaf.
    fn split(&mut self, cfg: Configuration, at: (i32, i32), idx: usize) {
        let cell = cfg.get(at.0, at.1);
        if cell.is_singleton() {
            self.position(cfg, idx + 1);
            return;
        }
        let first = LabelSet::single(cell.first().expect("nonempty"));
        for part in [first, cell.minus(first)] {
            if self.off_guide(at, part) {
                continue;
            }
            let mut c = cfg.clone();
            c.set(at.0, at.1, part);
            self.stats.branches += 1;
            if let Some(c) = self.x.propagate(c, &mut self.stats) {
                self.split(c, at, idx);
            }
        }
    }
}

/// Every child of `cfg` at the next level, without ratio pruning: each
/// cell of the new level is committed as target or non-target and reduced
/// to a single label, and contradictory branches are dropped.
pub fn extend_level(cfg: &Configuration, spec: &TargetSpec) -> Vec<Configuration> {
    let budget = Budget::unlimited();
    let x = Extender {
        spec,
        engine: Engine::default(),
        budget: &budget,
        prune: false,
        guide: None,
    };
    x.extend(cfg, &mut SearchStats::default())
}

/// The children of `cfg` whose branch choices agree with `truth`. If the
/// rules are sound and the enumeration is complete there is exactly one.
pub fn extend_level_guided(
    cfg: &Configuration,
    spec: &TargetSpec,
    truth: Guide<'_>,
) -> Vec<Configuration> {
    let budget = Budget::unlimited();
    let x = Extender {
        spec,
        engine: Engine::default(),
        budget: &budget,
        prune: false,
        guide: Some(truth),
    };
    x.extend(cfg, &mut SearchStats::default())
}

/// Keeps configurations whose target count on levels `1..=level` exceeds
/// `alpha * level`.
pub fn prune(configs: Vec<Configuration>, spec: &TargetSpec, level: i32) -> Vec<Configuration> {
    configs
        .into_iter()
        .filter(|c| {
            spec.alpha()
                .exceeded_by(c.count_targets(level) as u64, level as u64)
        })
        .collect()
}
