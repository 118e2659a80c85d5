use std::collections::BTreeMap;

use super::points::ConvexPointSet;
use crate::label::DistanceLabel;

/// A convex polygon whose vertex distances can be compared exactly.
pub trait Polygon: Sync {
    /// Any key ordered like the Euclidean distance.
    type Dist: Ord + Copy;

    fn vertex_count(&self) -> usize;

    fn dist(&self, a: usize, b: usize) -> Self::Dist;
}

impl Polygon for ConvexPointSet {
    type Dist = i128;

    fn vertex_count(&self) -> usize {
        ConvexPointSet::len(self)
    }

    fn dist(&self, a: usize, b: usize) -> i128 {
        self.points()[a].sq_dist(self.points()[b])
    }
}

/// Distance classes of a polygon: class 1 holds the longest pairs.
#[derive(Clone, Debug)]
pub struct DistanceCensus {
    n: usize,
    /// Class of each ordered pair, row-major; 0 on the diagonal.
    class: Vec<u32>,
    multiplicity: Vec<u64>,
}

pub fn census<P: Polygon + ?Sized>(poly: &P) -> DistanceCensus {
    let n = poly.vertex_count();
    let mut distinct: BTreeMap<P::Dist, u32> = BTreeMap::new();
    for a in 0..n {
        for b in a + 1..n {
            distinct.insert(poly.dist(a, b), 0);
        }
    }
    let classes = distinct.len() as u32;
    for (rank, v) in distinct.values_mut().enumerate() {
        *v = classes - rank as u32;
    }
    let mut class = vec![0; n * n];
    let mut multiplicity = vec![0; classes as usize];
    for a in 0..n {
        for b in a + 1..n {
            let c = distinct[&poly.dist(a, b)];
            class[a * n + b] = c;
            class[b * n + a] = c;
            multiplicity[c as usize - 1] += 1;
        }
    }
    DistanceCensus {
        n,
        class,
        multiplicity,
    }
}

impl DistanceCensus {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn class_count(&self) -> usize {
        self.multiplicity.len()
    }

    /// 1-based distance class of the pair `a, b` (`a != b`).
    pub fn class(&self, a: usize, b: usize) -> u32 {
        debug_assert_ne!(a, b);
        self.class[a * self.n + b]
    }

    /// Multiplicity `m_i` of the `i`-th largest distance; 0 if there are
    /// fewer than `i` distinct distances.
    pub fn m(&self, i: usize) -> u64 {
        if i == 0 {
            return 0;
        }
        self.multiplicity.get(i - 1).copied().unwrap_or(0)
    }

    /// `m_1 + ... + m_k`.
    pub fn m_upto(&self, k: usize) -> u64 {
        (1..=k).map(|i| self.m(i)).sum()
    }

    /// The label of a pair when only the `k` largest distances are named.
    pub fn label(&self, a: usize, b: usize, k: u8) -> DistanceLabel {
        let c = self.class(a, b);
        if c <= k as u32 {
            DistanceLabel::Finite(c as u8)
        } else {
            DistanceLabel::Inf
        }
    }

    /// Pairs on level `s`: unordered `{a, b}` with `a + b = s (mod n)`.
    pub fn level_pairs(&self, s: usize) -> Vec<(usize, usize)> {
        (0..self.n)
            .filter_map(|a| {
                let b = (s + self.n - a % self.n) % self.n;
                (a < b).then_some((a, b))
            })
            .collect()
    }

    /// For every level, the number of its pairs among the `k` largest
    /// distance classes.
    pub fn level_counts(&self, k: u8) -> Vec<usize> {
        (0..self.n)
            .map(|s| {
                self.level_pairs(s)
                    .into_iter()
                    .filter(|&(a, b)| self.class(a, b) <= k as u32)
                    .count()
            })
            .collect()
    }
}
