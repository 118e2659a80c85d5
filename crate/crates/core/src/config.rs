//! Two-interval configurations and target specifications.
//!
//! A configuration tracks a run of *top* vertices `t_i` (clockwise with
//! increasing `i`) and a run of *bottom* vertices `b_j` (clockwise with
//! decreasing `j`), and for every cross diagonal `t_i b_j` the set of labels
//! its length may still take. The diagonal `t_i b_j` lies in level `j - i`;
//! the anchor diagonal is `t_0 b_1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::label::{DistanceLabel, LabelSet, MAX_K};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("target set is empty")]
    EmptyTargets,
    #[error("target index {0} outside 1..={MAX_K}")]
    TargetOutOfRange(u32),
    #[error("ratio {0} must be a positive fraction p/q")]
    BadRatio(String),
    #[error("ratio {0} must exceed 1")]
    RatioTooSmall(Ratio),
}

/// Level of the diagonal `t_i b_j`.
pub fn level_of(i: i32, j: i32) -> i32 {
    j - i
}

/// An exact positive rational `p/q` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Ratio {
    p: u64,
    q: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    pub fn new(p: u64, q: u64) -> Result<Ratio, SpecError> {
        if p == 0 || q == 0 {
            return Err(SpecError::BadRatio(format!("{p}/{q}")));
        }
        let g = gcd(p, q);
        Ok(Ratio { p: p / g, q: q / g })
    }

    pub fn numer(self) -> u64 {
        self.p
    }

    pub fn denom(self) -> u64 {
        self.q
    }

    /// `count > self * levels`, evaluated as `count * q > p * levels`.
    pub fn exceeded_by(self, count: u64, levels: u64) -> bool {
        (count as u128) * (self.q as u128) > (self.p as u128) * (levels as u128)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl FromStr for Ratio {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SpecError::BadRatio(s.to_string());
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        Ratio::new(p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?)
    }
}

impl TryFrom<String> for Ratio {
    type Error = SpecError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Ratio> for String {
    fn from(r: Ratio) -> String {
        r.to_string()
    }
}

/// The target distances `T` and the ratio `alpha` a run tries to prove.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TargetSpec {
    targets: LabelSet,
    k: u8,
    alpha: Ratio,
}

impl TargetSpec {
    pub fn new(targets: &[u32], alpha: Ratio) -> Result<TargetSpec, SpecError> {
        if targets.is_empty() {
            return Err(SpecError::EmptyTargets);
        }
        let mut set = LabelSet::EMPTY;
        for &t in targets {
            if t == 0 || t > MAX_K as u32 {
                return Err(SpecError::TargetOutOfRange(t));
            }
            set = set.union(LabelSet::finite(t as u8));
        }
        if alpha.numer() <= alpha.denom() {
            return Err(SpecError::RatioTooSmall(alpha));
        }
        let k = set.max_finite().expect("nonempty");
        Ok(TargetSpec {
            targets: set,
            k,
            alpha,
        })
    }

    pub fn targets(&self) -> LabelSet {
        self.targets
    }

    pub fn target_list(&self) -> Vec<u32> {
        self.targets
            .iter()
            .filter_map(|l| match l {
                DistanceLabel::Finite(x) => Some(x as u32),
                DistanceLabel::Inf => None,
            })
            .collect()
    }

    /// The largest target index.
    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn alpha(&self) -> Ratio {
        self.alpha
    }

    /// `{1, ..., k, inf} \ T`.
    pub fn non_targets(&self) -> LabelSet {
        LabelSet::full(self.k).minus(self.targets)
    }

    /// Renders `T` as `{1,2,3}`.
    pub fn targets_display(&self) -> String {
        let items: Vec<String> = self.target_list().iter().map(|t| t.to_string()).collect();
        format!("{{{}}}", items.join(","))
    }
}

/// Inclusive integer interval of vertex indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub lo: i32,
    pub hi: i32,
}

impl Span {
    pub fn new(lo: i32, hi: i32) -> Span {
        assert!(lo <= hi, "empty span {lo}..={hi}");
        Span { lo, hi }
    }

    pub fn width(self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn contains(self, x: i32) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn hull(self, other: Span) -> Span {
        Span::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn iter(self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi
    }
}

/// A top interval, a bottom interval, and a label set for every cross
/// diagonal between them.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    k: u8,
    top: Span,
    bottom: Span,
    cells: Vec<LabelSet>,
    /// Sorted cells committed as target diagonals.
    marks: Vec<(i32, i32)>,
    frontier: i32,
}

impl Configuration {
    /// A configuration over the given spans with every cell unconstrained,
    /// except the normalized cells `(i, i + 1)` for `i < 0`, which are `{inf}`.
    pub fn new(k: u8, top: Span, bottom: Span) -> Configuration {
        assert!((1..=MAX_K).contains(&k));
        let mut c = Configuration {
            k,
            top,
            bottom,
            cells: vec![LabelSet::full(k); top.width() * bottom.width()],
            marks: Vec::new(),
            frontier: 0,
        };
        for i in top.iter().filter(|&i| i < 0) {
            if bottom.contains(i + 1) {
                c.set(i, i + 1, LabelSet::INF);
            }
        }
        c
    }

    /// Builds a configuration from explicit cell contents, row-major by top
    /// index then bottom index. No normalization is applied.
    pub fn from_cells(k: u8, top: Span, bottom: Span, cells: Vec<LabelSet>) -> Configuration {
        assert_eq!(cells.len(), top.width() * bottom.width());
        assert!(cells.iter().all(|s| !s.is_empty()), "empty cell");
        Configuration {
            k,
            top,
            bottom,
            cells,
            marks: Vec::new(),
            frontier: 0,
        }
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn top(&self) -> Span {
        self.top
    }

    pub fn bottom(&self) -> Span {
        self.bottom
    }

    pub fn frontier(&self) -> i32 {
        self.frontier
    }

    pub fn set_frontier(&mut self, level: i32) {
        self.frontier = level;
    }

    pub fn marks(&self) -> &[(i32, i32)] {
        &self.marks
    }

    pub fn is_marked(&self, i: i32, j: i32) -> bool {
        self.marks.binary_search(&(i, j)).is_ok()
    }

    pub fn mark(&mut self, i: i32, j: i32) {
        if let Err(pos) = self.marks.binary_search(&(i, j)) {
            self.marks.insert(pos, (i, j));
        }
    }

    pub fn contains_cell(&self, i: i32, j: i32) -> bool {
        self.top.contains(i) && self.bottom.contains(j)
    }

    #[inline]
    fn index(&self, i: i32, j: i32) -> usize {
        debug_assert!(self.contains_cell(i, j), "cell ({i},{j}) outside window");
        (i - self.top.lo) as usize * self.bottom.width() + (j - self.bottom.lo) as usize
    }

    #[inline]
    pub fn get(&self, i: i32, j: i32) -> LabelSet {
        self.cells[self.index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: i32, j: i32, s: LabelSet) {
        debug_assert!(!s.is_empty());
        let idx = self.index(i, j);
        self.cells[idx] = s;
    }

    pub fn cells(&self) -> impl Iterator<Item = ((i32, i32), LabelSet)> + '_ {
        let bw = self.bottom.width();
        self.cells.iter().enumerate().map(move |(n, &s)| {
            let i = self.top.lo + (n / bw) as i32;
            let j = self.bottom.lo + (n % bw) as i32;
            ((i, j), s)
        })
    }

    /// Total number of labels over all cells.
    pub fn label_count(&self) -> u64 {
        self.cells.iter().map(|s| s.len() as u64).sum()
    }

    /// Grows the window to cover `top` and `bottom` (which must contain the
    /// current spans). New cells start unconstrained apart from the
    /// normalization cells.
    pub fn grown(&self, top: Span, bottom: Span) -> Configuration {
        assert!(top.lo <= self.top.lo && top.hi >= self.top.hi);
        assert!(bottom.lo <= self.bottom.lo && bottom.hi >= self.bottom.hi);
        let mut c = Configuration::new(self.k, top, bottom);
        for ((i, j), s) in self.cells() {
            c.set(i, j, s);
        }
        c.marks = self.marks.clone();
        c.frontier = self.frontier;
        c
    }

    /// Number of target marks in levels `1..=through_level`.
    pub fn count_targets(&self, through_level: i32) -> usize {
        self.marks
            .iter()
            .filter(|&&(i, j)| (1..=through_level).contains(&level_of(i, j)))
            .count()
    }

    /// `true` if `truth(i, j)` lies in every cell of this window.
    pub fn covers<F: Fn(i32, i32) -> DistanceLabel>(&self, truth: F) -> bool {
        self.cells().all(|((i, j), s)| s.contains(truth(i, j)))
    }

    /// The grid rendering: a header of top indices, then one row per bottom
    /// index in descending order.
    pub fn to_grid(&self) -> String {
        let mut rows: Vec<Vec<String>> = Vec::new();
        let mut header = vec!["b\\t".to_string()];
        header.extend(self.top.iter().map(|i| i.to_string()));
        rows.push(header);
        for j in self.bottom.iter().rev() {
            let mut row = vec![j.to_string()];
            row.extend(self.top.iter().map(|i| {
                let s = self.get(i, j).to_string();
                if self.is_marked(i, j) {
                    format!("{s}*")
                } else {
                    s
                }
            }));
            rows.push(row);
        }
        let widths: Vec<usize> = (0..rows[0].len())
            .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for r in rows {
            let line: Vec<String> = r
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:<w$}"))
                .collect();
            out.push_str(line.join(" ").trim_end());
            out.push('\n');
        }
        out
    }

    /// Parses [`to_grid`](Self::to_grid) output. `k` is taken as given.
    pub fn from_grid(k: u8, text: &str) -> Result<Configuration, String> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or("empty grid")?;
        let tops: Vec<i32> = header
            .split_whitespace()
            .skip(1)
            .map(|t| t.parse().map_err(|_| format!("bad top index {t:?}")))
            .collect::<Result<_, _>>()?;
        if tops.is_empty() || tops.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err("top indices must be consecutive".into());
        }
        let mut rows = Vec::new();
        for line in lines {
            let (j, rest) = line
                .trim()
                .split_once(char::is_whitespace)
                .ok_or("short row")?;
            let j: i32 = j.parse().map_err(|_| format!("bad bottom index {j:?}"))?;
            let mut cells = Vec::new();
            let mut rest = rest.trim_start();
            while !rest.is_empty() {
                let close = rest.find('}').ok_or("unterminated cell")?;
                let (cell, tail) = rest.split_at(close + 1);
                let (tail, marked) = match tail.strip_prefix('*') {
                    Some(t) => (t, true),
                    None => (tail, false),
                };
                cells.push((cell.parse::<LabelSet>()?, marked));
                rest = tail.trim_start();
            }
            if cells.len() != tops.len() {
                return Err(format!(
                    "row {j} has {} cells, expected {}",
                    cells.len(),
                    tops.len()
                ));
            }
            rows.push((j, cells));
        }
        if rows.is_empty() || rows.windows(2).any(|w| w[1].0 != w[0].0 - 1) {
            return Err("bottom indices must be consecutive and descending".into());
        }
        let top = Span::new(tops[0], *tops.last().unwrap());
        let bottom = Span::new(rows.last().unwrap().0, rows[0].0);
        let mut c = Configuration::from_cells(
            k,
            top,
            bottom,
            vec![LabelSet::full(k); top.width() * bottom.width()],
        );
        for (j, cells) in rows {
            for (i, (s, marked)) in top.iter().zip(cells) {
                c.set(i, j, s);
                if marked {
                    c.mark(i, j);
                }
            }
        }
        Ok(c)
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Configuration(k={}, frontier={})", self.k, self.frontier)?;
        f.write_str(&self.to_grid())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels() {
        assert_eq!(level_of(0, 1), 1);
        assert_eq!(level_of(2, 2), 0);
        assert_eq!(level_of(-3, 2), 5);
    }

    #[test]
    fn ratio_arithmetic() {
        let a: Ratio = "4/3".parse().unwrap();
        assert!(!a.exceeded_by(4, 3));
        assert!(a.exceeded_by(2, 1));
        assert!(!Ratio::new(2, 1).unwrap().exceeded_by(4, 2));
        assert_eq!("8/6".parse::<Ratio>().unwrap().to_string(), "4/3");
        assert!("0/3".parse::<Ratio>().is_err());
        assert!("x".parse::<Ratio>().is_err());
    }

    #[test]
    fn target_spec_validation() {
        let one = Ratio::new(1, 1).unwrap();
        assert_eq!(
            TargetSpec::new(&[2], one),
            Err(SpecError::RatioTooSmall(one))
        );
        assert_eq!(
            TargetSpec::new(&[], Ratio::new(2, 1).unwrap()),
            Err(SpecError::EmptyTargets)
        );
        assert_eq!(
            TargetSpec::new(&[16], Ratio::new(2, 1).unwrap()),
            Err(SpecError::TargetOutOfRange(16))
        );
        let spec = TargetSpec::new(&[1, 3], Ratio::new(2, 1).unwrap()).unwrap();
        assert_eq!(spec.k(), 3);
        assert_eq!(spec.non_targets().to_string(), "{2 inf}");
        assert_eq!(spec.targets_display(), "{1,3}");
    }

    #[test]
    fn normalization_on_construction_and_growth() {
        let c = Configuration::new(3, Span::new(-3, 2), Span::new(-2, 4));
        for i in -3..0 {
            assert_eq!(c.get(i, i + 1), LabelSet::INF);
        }
        assert_eq!(c.get(0, 1), LabelSet::full(3));
        let g = Configuration::new(2, Span::new(0, 0), Span::new(1, 1))
            .grown(Span::new(-2, 2), Span::new(-1, 3));
        assert_eq!(g.get(-1, 0), LabelSet::INF);
        assert_eq!(g.get(-2, -1), LabelSet::INF);
    }

    #[test]
    fn count_targets_filters_by_level() {
        let mut c = Configuration::new(2, Span::new(0, 2), Span::new(1, 4));
        c.mark(0, 1);
        assert_eq!(c.count_targets(1), 1);
        c.mark(1, 2);
        c.mark(1, 3);
        assert_eq!(c.count_targets(1), 2);
        assert_eq!(c.count_targets(2), 3);
    }

    #[test]
    fn grid_round_trip() {
        let mut c = Configuration::new(3, Span::new(-1, 1), Span::new(0, 2));
        c.set(0, 1, "{2 3}".parse().unwrap());
        c.mark(0, 1);
        let text = c.to_grid();
        assert!(text.starts_with("b\\t"));
        let back = Configuration::from_grid(3, &text).unwrap();
        assert_eq!(back, c);
    }
}
