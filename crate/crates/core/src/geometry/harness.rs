use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::census::{census, DistanceCensus};
use super::random::gen_random_convex;
use super::realize::{realize_configuration, Frame};
use super::regular::RegularPolygon;
use crate::config::{Configuration, Span};
use crate::deduce::{Cell, Engine, Rule, Tracer};
use crate::label::LabelSet;

#[derive(Clone, Copy, Debug)]
pub struct SoundnessParams {
    pub trials: u64,
    pub seed: u64,
    pub max_n: usize,
    pub max_k: u8,
    pub engine: Engine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// A rule removed the true label of `cell`.
    RemovedTrueLabel { rule: Rule, cell: Cell },
    /// Propagation reported a contradiction for a realizable configuration.
    FalseContradiction { rule: Rule },
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub trial: u64,
    pub kind: ViolationKind,
    /// Polygon, frame and loosened configuration, enough to replay.
    pub counterexample: String,
}

#[derive(Clone, Debug, Default)]
pub struct SoundnessReport {
    pub trials: u64,
    /// Label-removing firings per rule, indexed by [`Rule::index`].
    pub firings: [u64; 5],
    pub violations: Vec<Violation>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Checker<'a> {
    frame: &'a Frame,
    census: &'a DistanceCensus,
    k: u8,
    firings: [u64; 5],
    first_violation: Option<(Rule, Cell)>,
}

impl Tracer for Checker<'_> {
    fn fire(
        &mut self,
        rule: Rule,
        _witness: &[Cell],
        cell: Cell,
        before: LabelSet,
        after: LabelSet,
    ) {
        self.firings[rule.index()] += 1;
        let truth = self.frame.truth(self.census, self.k, cell.0, cell.1);
        if before.contains(truth) && !after.contains(truth) && self.first_violation.is_none() {
            self.first_violation = Some((rule, cell));
        }
    }
}

enum Shape {
    Random(super::points::ConvexPointSet),
    Regular(usize),
}

impl Shape {
    fn describe(&self, k: u8) -> String {
        match self {
            Shape::Random(p) => p.to_file_string(k),
            Shape::Regular(n) => format!("regular:{n} k={k}\n"),
        }
    }
}

/// Widens every cell of the true configuration with probability `rho` by
/// a random set of extra labels.
fn loosen(truth: &Configuration, rho: f64, rng: &mut ChaCha8Rng) -> Configuration {
    let full = LabelSet::full(truth.k());
    let mut c = truth.clone();
    for ((i, j), s) in truth.cells() {
        if rng.gen_bool(rho) {
            let extra = LabelSet::from_bits(rng.gen::<u16>()).intersect(full);
            c.set(i, j, s.union(extra));
        }
    }
    c
}

fn run_trial(params: &SoundnessParams, trial: u64) -> ([u64; 5], Option<Violation>) {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(trial);
    let max_n = params.max_n.max(4);
    // Small polygons make long distances dense, which the rules need.
    let mut n = if rng.gen_bool(0.5) {
        rng.gen_range(4..=max_n.min(12))
    } else {
        rng.gen_range(4..=max_n)
    };
    let shape = if rng.gen_bool(0.25) {
        n |= 1;
        if n > max_n {
            n -= 2;
        }
        Shape::Regular(n.max(3))
    } else {
        // Generation only fails for absurd sizes; fall back to regular.
        match gen_random_convex(n, rng.gen()) {
            Ok(p) => Shape::Random(p),
            Err(_) => Shape::Regular(n),
        }
    };
    let cen = match &shape {
        Shape::Random(p) => census(p),
        Shape::Regular(n) => census(&RegularPolygon::new(*n)),
    };
    let n = cen.n();
    let k = rng.gen_range(1..=params.max_k.clamp(1, crate::label::MAX_K));
    let a = rng.gen_range(1..=(n - 1).min(7));
    let b = rng.gen_range(1..=(n - a).min(7));
    let t = rng.gen_range(0..n);
    let gap = rng.gen_range(0..=n - a - b);
    let bottom_start = t + a + gap;
    let (o1, o2) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
    let frame = Frame {
        t0: (t as i64 - o1 as i64).rem_euclid(n as i64) as usize,
        b0: (bottom_start as i64 + o2 as i64 + b as i64 - 1).rem_euclid(n as i64) as usize,
        top: Span::new(o1, o1 + a as i32 - 1),
        bottom: Span::new(o2, o2 + b as i32 - 1),
    };
    let truth = realize_configuration(&cen, &frame, k).expect("frame is disjoint by construction");
    let loose = if rng.gen_bool(0.3) {
        // Forget one or two cells entirely and keep everything else exact.
        let mut c = truth.clone();
        for _ in 0..rng.gen_range(1..=2) {
            let i = rng.gen_range(frame.top.lo..=frame.top.hi);
            let j = rng.gen_range(frame.bottom.lo..=frame.bottom.hi);
            c.set(i, j, LabelSet::full(k));
        }
        c
    } else {
        let rho = if rng.gen_bool(0.1) {
            0.0
        } else {
            rng.gen::<f64>()
        };
        loosen(&truth, rho, &mut rng)
    };

    let mut checker = Checker {
        frame: &frame,
        census: &cen,
        k,
        firings: [0; 5],
        first_violation: None,
    };
    let result = params
        .engine
        .propagate_traced(loose.clone(), Some(&mut checker));
    let kind = match (checker.first_violation, result) {
        (Some((rule, cell)), _) => Some(ViolationKind::RemovedTrueLabel { rule, cell }),
        (None, Err(c)) => Some(ViolationKind::FalseContradiction { rule: c.rule }),
        (None, Ok(_)) => None,
    };
    let violation = kind.map(|kind| Violation {
        trial,
        kind,
        counterexample: format!(
            "polygon:\n{}frame: t0={} b0={} top={}..{} bottom={}..{}\nconfiguration:\n{}",
            shape.describe(k),
            frame.t0,
            frame.b0,
            frame.top.lo,
            frame.top.hi,
            frame.bottom.lo,
            frame.bottom.hi,
            loose.to_grid()
        ),
    });
    (checker.firings, violation)
}

/// Checks the deduction rules against random realizable configurations:
/// no rule may remove a true label and propagation may not report a
/// contradiction.
pub fn run_soundness(params: &SoundnessParams) -> SoundnessReport {
    let results: Vec<_> = (0..params.trials)
        .into_par_iter()
        .map(|t| run_trial(params, t))
        .collect();
    let mut report = SoundnessReport {
        trials: params.trials,
        ..Default::default()
    };
    for (firings, violation) in results {
        for (total, f) in report.firings.iter_mut().zip(firings) {
            *total += f;
        }
        report.violations.extend(violation);
    }
    report
}
