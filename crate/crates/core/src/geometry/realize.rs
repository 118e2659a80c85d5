use super::census::DistanceCensus;
use super::GeometryError;
use crate::config::{Configuration, Span};
use crate::label::{DistanceLabel, LabelSet};

/// Placement of a configuration window on a polygon with vertices
/// `a_0, ..., a_{n-1}` in clockwise order: `t_i = a_{t0 + i}` and
/// `b_j = a_{b0 - j}`, indices mod `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frame {
    pub t0: usize,
    pub b0: usize,
    pub top: Span,
    pub bottom: Span,
}

impl Frame {
    pub fn top_vertex(&self, n: usize, i: i32) -> usize {
        (self.t0 as i64 + i as i64).rem_euclid(n as i64) as usize
    }

    pub fn bottom_vertex(&self, n: usize, j: i32) -> usize {
        (self.b0 as i64 - j as i64).rem_euclid(n as i64) as usize
    }

    /// Fails unless all window vertices are distinct.
    pub fn check(&self, n: usize) -> Result<(), GeometryError> {
        if self.top.width() + self.bottom.width() > n {
            return Err(GeometryError::Overlap);
        }
        let mut seen = vec![false; n];
        let tops = self.top.iter().map(|i| self.top_vertex(n, i));
        let bottoms = self.bottom.iter().map(|j| self.bottom_vertex(n, j));
        for v in tops.chain(bottoms) {
            if std::mem::replace(&mut seen[v], true) {
                return Err(GeometryError::Overlap);
            }
        }
        Ok(())
    }

    /// The true label of cell `(i, j)`.
    pub fn truth(&self, census: &DistanceCensus, k: u8, i: i32, j: i32) -> DistanceLabel {
        let n = census.n();
        census.label(self.top_vertex(n, i), self.bottom_vertex(n, j), k)
    }
}

/// The fully determined configuration of a polygon in the given frame.
pub fn realize_configuration(
    census: &DistanceCensus,
    frame: &Frame,
    k: u8,
) -> Result<Configuration, GeometryError> {
    frame.check(census.n())?;
    let mut cells = Vec::with_capacity(frame.top.width() * frame.bottom.width());
    for i in frame.top.iter() {
        for j in frame.bottom.iter() {
            cells.push(LabelSet::single(frame.truth(census, k, i, j)));
        }
    }
    Ok(Configuration::from_cells(k, frame.top, frame.bottom, cells))
}

/// Chooses `(t0, b0)` so that the pairs of polygon level `s` become the
/// level-1 cells `(i, i + 1)` and `t_0 b_1` is the first pair of the level,
/// walking from the outside in, whose class is at most `k`. Every level-1
/// cell with `i < 0` then has label `inf`. Returns `None` if the level has
/// no such pair.
pub fn anchor_frame(census: &DistanceCensus, s: usize, k: u8) -> Option<(usize, usize)> {
    let n = census.n();
    let (u0, v0) = if s.is_multiple_of(n) {
        (1, n - 1)
    } else {
        (0, s % n)
    };
    if u0 == v0 {
        return None;
    }
    // Clockwise arc from u to v; it shrinks by 2 per step.
    let c0 = ((v0 + n - u0) % n) as i64;
    let n = n as i64;
    let first = -((n - 1 - c0) / 2);
    let mut i = first;
    while c0 - 2 * i > 0 {
        let u = (u0 as i64 + i).rem_euclid(n) as usize;
        let v = (v0 as i64 - i).rem_euclid(n) as usize;
        if census.class(u, v) <= k as u32 {
            return Some((u, (v + 1) % n as usize));
        }
        i += 1;
    }
    None
}
