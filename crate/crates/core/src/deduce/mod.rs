//! Constraint propagation over configurations.
//!
//! Each rule narrows label sets using one geometric fact about convex
//! polygons. Rules only ever remove labels, so running them to a fixpoint
//! terminates. An emptied cell is reported as a [`Contradiction`].

mod fact1;
mod fact2;
mod fact3;
mod fact4;
mod pairs;

use std::fmt;
use std::io::Write;

use crate::config::Configuration;
use crate::label::{enforce_less, LabelSet, UpperBound};

pub use pairs::{derive_pair_inequalities, PairInequalityDigraph, PairNode};

pub type Cell = (i32, i32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// Crossing diagonals of a convex quadrangle outweigh a pair of
    /// opposite sides.
    Fact1,
    /// One angle of a convex quadrangle is non-acute.
    Fact2,
    /// Two long non-crossing diagonals nearly share endpoints.
    Fact3,
    /// Six-point comparison with the two outer points at maximal distance.
    Fact4,
    /// Sum inequalities between label pairs must be acyclic.
    PairSums,
}

impl Rule {
    pub const ALL: [Rule; 5] = [
        Rule::Fact1,
        Rule::Fact2,
        Rule::Fact3,
        Rule::Fact4,
        Rule::PairSums,
    ];

    /// Order of application within one propagation round.
    pub const ROUND: [Rule; 5] = [
        Rule::Fact1,
        Rule::Fact3,
        Rule::Fact4,
        Rule::Fact2,
        Rule::PairSums,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Fact1 => "fact1",
            Rule::Fact2 => "fact2",
            Rule::Fact3 => "fact3",
            Rule::Fact4 => "fact4",
            Rule::PairSums => "pairs",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The configuration admits no convex realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Contradiction {
    pub rule: Rule,
    /// The cell that emptied; `None` for a pair-sum cycle or a four-way
    /// refutation.
    pub cell: Option<Cell>,
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cell {
            Some((i, j)) => write!(f, "{} emptied cell ({i},{j})", self.rule),
            None => write!(f, "{} found no consistent case", self.rule),
        }
    }
}

impl std::error::Error for Contradiction {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Unchanged,
    Changed,
    Contradiction(Contradiction),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeductionOutcome {
    pub status: Status,
    /// Cells that strictly shrank, in firing order (may repeat).
    pub touched: Vec<Cell>,
}

/// Observer for individual label removals.
pub trait Tracer {
    fn fire(&mut self, rule: Rule, witness: &[Cell], cell: Cell, before: LabelSet, after: LabelSet);
}

/// Writes one line per firing: rule, witness cells, target cell, before and
/// after sets.
pub struct TextTracer<W: Write>(pub W);

impl<W: Write> Tracer for TextTracer<W> {
    fn fire(
        &mut self,
        rule: Rule,
        witness: &[Cell],
        cell: Cell,
        before: LabelSet,
        after: LabelSet,
    ) {
        let w: Vec<String> = witness.iter().map(|(i, j)| format!("({i},{j})")).collect();
        let _ = writeln!(
            self.0,
            "{rule} witness={} cell=({},{}) {before} -> {after}",
            w.join(""),
            cell.0,
            cell.1
        );
    }
}

/// Deliberate rule corruptions, used to check that the soundness harness
/// detects broken rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Fact 1 derives `crossing < nested` instead of `nested < crossing`.
    FlipFact1,
}

impl std::str::FromStr for Mutation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "flip-fact1" => Ok(Mutation::FlipFact1),
            _ => Err(format!("unknown mutation {s:?}")),
        }
    }
}

/// Mutable view of a configuration while one rule runs.
pub(crate) struct Ctx<'a, 't> {
    pub cfg: &'a mut Configuration,
    rule: Rule,
    touched: Vec<Cell>,
    tracer: Option<&'t mut dyn Tracer>,
    pub mutation: Option<Mutation>,
}

impl Ctx<'_, '_> {
    #[inline]
    pub fn get(&self, c: Cell) -> LabelSet {
        self.cfg.get(c.0, c.1)
    }

    pub fn contradiction(&self, cell: Option<Cell>) -> Contradiction {
        Contradiction {
            rule: self.rule,
            cell,
        }
    }

    fn store(&mut self, witness: &[Cell], cell: Cell, before: LabelSet, after: LabelSet) {
        if before != after {
            self.cfg.set(cell.0, cell.1, after);
            self.touched.push(cell);
            if let Some(t) = self.tracer.as_deref_mut() {
                t.fire(self.rule, witness, cell, before, after);
            }
        }
    }

    /// Intersects `cell` with `keep`.
    #[inline]
    pub fn restrict(
        &mut self,
        witness: &[Cell],
        cell: Cell,
        keep: LabelSet,
    ) -> Result<(), Contradiction> {
        let before = self.get(cell);
        let after = before.intersect(keep);
        if after.is_empty() {
            return Err(self.contradiction(Some(cell)));
        }
        self.store(witness, cell, before, after);
        Ok(())
    }

    /// Narrows both cells to agree with `|smaller| < |larger|`.
    #[inline]
    pub fn less(
        &mut self,
        witness: &[Cell],
        smaller: Cell,
        larger: Cell,
    ) -> Result<(), Contradiction> {
        let (s0, l0) = (self.get(smaller), self.get(larger));
        match enforce_less(s0, l0) {
            Ok((s1, l1)) => {
                self.store(witness, smaller, s0, s1);
                self.store(witness, larger, l0, l1);
                Ok(())
            }
            Err(_) => {
                let emptied = if s0.intersect(below(l0)).is_empty() {
                    smaller
                } else {
                    larger
                };
                Err(self.contradiction(Some(emptied)))
            }
        }
    }
}

/// Labels that can be strictly shorter than some member of `larger`.
fn below(larger: LabelSet) -> LabelSet {
    match larger.upper() {
        Some(UpperBound::AtMost(u)) => LabelSet::shorter_than(u),
        Some(UpperBound::BelowK) => LabelSet::INF,
        None => LabelSet::EMPTY,
    }
}

/// Rule runner. The default engine applies the rules as stated; a mutated
/// engine exists only to exercise the soundness harness.
#[derive(Clone, Copy, Debug, Default)]
pub struct Engine {
    pub mutation: Option<Mutation>,
}

impl Engine {
    pub fn with_mutation(mutation: Mutation) -> Engine {
        Engine {
            mutation: Some(mutation),
        }
    }

    fn run<'t>(
        &self,
        rule: Rule,
        cfg: &mut Configuration,
        tracer: Option<&'t mut (dyn Tracer + 't)>,
    ) -> Result<Vec<Cell>, Contradiction> {
        let mut ctx = Ctx {
            cfg,
            rule,
            touched: Vec::new(),
            tracer,
            mutation: self.mutation,
        };
        match rule {
            Rule::Fact1 => fact1::run(&mut ctx)?,
            Rule::Fact2 => fact2::run(&mut ctx)?,
            Rule::Fact3 => fact3::run(&mut ctx)?,
            Rule::Fact4 => fact4::run(&mut ctx)?,
            Rule::PairSums => {
                derive_pair_inequalities(ctx.cfg)?;
            }
        }
        Ok(ctx.touched)
    }

    /// Applies one rule in place. After a contradiction the configuration
    /// is partially narrowed and must be discarded.
    pub fn apply(&self, rule: Rule, cfg: &mut Configuration) -> DeductionOutcome {
        self.apply_traced(rule, cfg, None)
    }

    pub fn apply_traced(
        &self,
        rule: Rule,
        cfg: &mut Configuration,
        tracer: Option<&mut dyn Tracer>,
    ) -> DeductionOutcome {
        match self.run(rule, cfg, tracer) {
            Ok(touched) if touched.is_empty() => DeductionOutcome {
                status: Status::Unchanged,
                touched,
            },
            Ok(touched) => DeductionOutcome {
                status: Status::Changed,
                touched,
            },
            Err(c) => DeductionOutcome {
                status: Status::Contradiction(c),
                touched: Vec::new(),
            },
        }
    }

    /// Runs all rules in [`Rule::ROUND`] order until a round changes nothing.
    pub fn propagate(&self, cfg: Configuration) -> Result<Configuration, Contradiction> {
        self.propagate_traced(cfg, None).map(|(c, _)| c)
    }

    /// Like [`propagate`](Self::propagate), also returning the number of
    /// rounds that changed something.
    pub fn propagate_traced(
        &self,
        mut cfg: Configuration,
        mut tracer: Option<&mut dyn Tracer>,
    ) -> Result<(Configuration, usize), Contradiction> {
        let mut changed_rounds = 0;
        loop {
            let mut changed = false;
            for rule in Rule::ROUND {
                let t = tracer.as_mut().map(|t| &mut **t as &mut dyn Tracer);
                let touched = self.run(rule, &mut cfg, t)?;
                changed |= !touched.is_empty();
            }
            if !changed {
                return Ok((cfg, changed_rounds));
            }
            changed_rounds += 1;
        }
    }
}

pub fn apply_fact1(cfg: &mut Configuration) -> DeductionOutcome {
    Engine::default().apply(Rule::Fact1, cfg)
}

pub fn apply_fact2(cfg: &mut Configuration) -> DeductionOutcome {
    Engine::default().apply(Rule::Fact2, cfg)
}

pub fn apply_fact3(cfg: &mut Configuration) -> DeductionOutcome {
    Engine::default().apply(Rule::Fact3, cfg)
}

pub fn apply_fact4(cfg: &mut Configuration) -> DeductionOutcome {
    Engine::default().apply(Rule::Fact4, cfg)
}

pub fn propagate_to_fixpoint(cfg: Configuration) -> Result<Configuration, Contradiction> {
    Engine::default().propagate(cfg)
}

/// Fingerprint of the rule set; certificates from different rule versions
/// are not comparable.
pub const RULE_VERSION: &str =
    "fact1:row-col-less;fact2:single-survivor-both-sides;fact3:gap-threshold;fact4:4-orientations+min-split;pairs:singleton-quads-acyclic;round:1,3,4,2,pairs";
