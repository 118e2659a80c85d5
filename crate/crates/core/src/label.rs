//! Symbolic distance labels and label sets.
//!
//! A label is either a finite index `x` standing for the `x`-th largest
//! distance `d_x`, or `Inf`, standing for "some distance strictly shorter
//! than `d_k`". Finite labels are totally ordered by magnitude
//! (`d_1 > d_2 > ...`); two `Inf` labels are incomparable.

use std::fmt;

/// Largest finite label index a [`LabelSet`] can hold.
pub const MAX_K: u8 = 15;

const INF_BIT: u16 = 1 << 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DistanceLabel {
    /// `d_x`, with `1 <= x <= MAX_K`.
    Finite(u8),
    /// Shorter than `d_k`.
    Inf,
}

impl DistanceLabel {
    fn bit(self) -> u16 {
        match self {
            DistanceLabel::Finite(x) => {
                debug_assert!((1..=MAX_K).contains(&x));
                1 << (x - 1)
            }
            DistanceLabel::Inf => INF_BIT,
        }
    }
}

impl fmt::Display for DistanceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceLabel::Finite(x) => write!(f, "{x}"),
            DistanceLabel::Inf => f.write_str("inf"),
        }
    }
}

/// Best known upper bound on the distance represented by a label set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpperBound {
    /// At most `d_u`.
    AtMost(u8),
    /// Strictly below `d_k` (the set is `{inf}`).
    BelowK,
}

/// Returned when a deduction would leave a cell with no possible label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Empty;

/// A set of labels over `{1..=MAX_K, inf}`, stored as a bit mask.
///
/// An empty set never lives inside a configuration; operations that could
/// empty a set report [`Empty`] instead.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LabelSet(u16);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);
    pub const INF: LabelSet = LabelSet(INF_BIT);

    pub fn from_bits(bits: u16) -> LabelSet {
        LabelSet(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    /// `{1, ..., k}`.
    pub fn finite_upto(k: u8) -> LabelSet {
        debug_assert!(k <= MAX_K);
        LabelSet(((1u32 << k) - 1) as u16)
    }

    /// `{1, ..., k, inf}`: no information.
    pub fn full(k: u8) -> LabelSet {
        LabelSet(Self::finite_upto(k).0 | INF_BIT)
    }

    pub fn single(label: DistanceLabel) -> LabelSet {
        LabelSet(label.bit())
    }

    pub fn finite(x: u8) -> LabelSet {
        LabelSet::single(DistanceLabel::Finite(x))
    }

    pub fn from_labels<I: IntoIterator<Item = DistanceLabel>>(labels: I) -> LabelSet {
        LabelSet(labels.into_iter().fold(0, |acc, l| acc | l.bit()))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_singleton(self) -> bool {
        self.0.count_ones() == 1
    }

    pub fn contains(self, label: DistanceLabel) -> bool {
        self.0 & label.bit() != 0
    }

    pub fn has_inf(self) -> bool {
        self.0 & INF_BIT != 0
    }

    pub fn finite_part(self) -> LabelSet {
        LabelSet(self.0 & !INF_BIT)
    }

    pub fn is_subset(self, other: LabelSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersect(self, other: LabelSet) -> LabelSet {
        LabelSet(self.0 & other.0)
    }

    pub fn union(self, other: LabelSet) -> LabelSet {
        LabelSet(self.0 | other.0)
    }

    pub fn minus(self, other: LabelSet) -> LabelSet {
        LabelSet(self.0 & !other.0)
    }

    /// Smallest finite index in the set.
    pub fn min_finite(self) -> Option<u8> {
        let f = self.0 & !INF_BIT;
        (f != 0).then(|| f.trailing_zeros() as u8 + 1)
    }

    /// Largest finite index in the set.
    pub fn max_finite(self) -> Option<u8> {
        let f = self.0 & !INF_BIT;
        (f != 0).then(|| 16 - f.leading_zeros() as u8)
    }

    /// First label in the order `1 < 2 < ... < k < inf`.
    pub fn first(self) -> Option<DistanceLabel> {
        match self.min_finite() {
            Some(x) => Some(DistanceLabel::Finite(x)),
            None if self.has_inf() => Some(DistanceLabel::Inf),
            None => None,
        }
    }

    pub fn iter(self) -> impl Iterator<Item = DistanceLabel> {
        let finite = (1..=MAX_K)
            .filter(move |&x| self.0 & (1 << (x - 1)) != 0)
            .map(DistanceLabel::Finite);
        finite.chain(self.has_inf().then_some(DistanceLabel::Inf))
    }

    /// The index of the guaranteed lower bound: `Some(p)` means every
    /// member is at least `d_p`. Defined only when `inf` is absent.
    pub fn lower_index(self) -> Option<u8> {
        if self.has_inf() {
            None
        } else {
            self.max_finite()
        }
    }

    pub fn upper(self) -> Option<UpperBound> {
        match self.min_finite() {
            Some(u) => Some(UpperBound::AtMost(u)),
            None if self.has_inf() => Some(UpperBound::BelowK),
            None => None,
        }
    }

    /// `S ∩ keep`, or [`Empty`] if nothing survives.
    pub fn shrink(self, keep: LabelSet) -> Result<LabelSet, Empty> {
        let r = self.intersect(keep);
        if r.is_empty() {
            Err(Empty)
        } else {
            Ok(r)
        }
    }

    /// Labels strictly longer than `d_p`: `{1, ..., p-1}`.
    pub fn longer_than(p: u8) -> LabelSet {
        LabelSet(((1u32 << (p - 1)) - 1) as u16)
    }

    /// Labels that may be strictly shorter than `d_u`: `{u+1, ..., inf}`.
    pub fn shorter_than(u: u8) -> LabelSet {
        LabelSet(!((1u32 << u) - 1) as u16)
    }

    /// Finite labels `x` with `x >= lo`, plus `inf`.
    pub fn at_least_index(lo: u8) -> LabelSet {
        if lo <= 1 {
            LabelSet(u16::MAX)
        } else {
            LabelSet::shorter_than(lo - 1)
        }
    }
}

/// `true` when every value of `x` is at most every value of `y`.
///
/// Holds when `y` has a lower bound `d_p` and either `x` is `{inf}` (shorter
/// than `d_k <= d_p`) or the largest value of `x`, `d_u`, satisfies `u >= p`.
#[inline]
pub fn certainly_le(x: LabelSet, y: LabelSet) -> bool {
    match y.lower_index() {
        None => false,
        Some(p) => match x.min_finite() {
            Some(u) => u >= p,
            None => !x.is_empty(),
        },
    }
}

/// Restricts `(smaller, larger)` to values consistent with
/// `smaller < larger`. Returns the narrowed pair, or [`Empty`].
#[inline]
pub fn enforce_less(smaller: LabelSet, larger: LabelSet) -> Result<(LabelSet, LabelSet), Empty> {
    let s = match larger.upper() {
        Some(UpperBound::AtMost(u)) => smaller.shrink(LabelSet::shorter_than(u))?,
        Some(UpperBound::BelowK) => smaller.shrink(LabelSet::INF)?,
        None => return Err(Empty),
    };
    let l = match smaller.lower_index() {
        Some(p) => larger.shrink(LabelSet::longer_than(p))?,
        None => larger,
    };
    Ok((s, l))
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, l) in self.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for LabelSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| format!("label set must be braced: {s:?}"))?;
        let mut set = LabelSet::EMPTY;
        for tok in inner.split_whitespace() {
            let label = if tok == "inf" {
                DistanceLabel::Inf
            } else {
                let x: u8 = tok.parse().map_err(|_| format!("bad label {tok:?}"))?;
                if !(1..=MAX_K).contains(&x) {
                    return Err(format!("label {x} out of range"));
                }
                DistanceLabel::Finite(x)
            };
            set = set.union(LabelSet::single(label));
        }
        if set.is_empty() {
            return Err("empty label set".into());
        }
        Ok(set)
    }
}
