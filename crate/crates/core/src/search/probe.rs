//! Checks that the search never loses a realizable configuration: the true
//! configuration of a polygon, anchored at one of its levels, is followed
//! through the enumeration level by level.

use super::extend::{extend_level_guided, make_root, window};
use super::AnchorMode;
use crate::config::{Configuration, TargetSpec};
use crate::geometry::{anchor_frame, DistanceCensus, Frame};
use crate::label::DistanceLabel;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// The true configuration was followed until its target count fell to
    /// the ratio bound, the window no longer fit in the polygon, or
    /// `max_levels` was reached.
    Covered { levels: u32 },
    /// The polygon level has no pair among the `k` largest distances.
    NoAnchor,
    /// No child at `level` is consistent with the polygon.
    Missed {
        level: u32,
        parent: Box<Configuration>,
    },
    /// A target pair of the polygon level lies outside the window.
    OutsideWindow { level: u32 },
}

/// Follows the true configuration of the polygon described by `census`,
/// anchored at polygon level `s`, for up to `max_levels` levels.
pub fn probe_exhaustiveness(
    census: &DistanceCensus,
    spec: &TargetSpec,
    s: usize,
    max_levels: u32,
) -> ProbeOutcome {
    let k = spec.k();
    let n = census.n();
    let Some((t0, b0)) = anchor_frame(census, s, k) else {
        return ProbeOutcome::NoAnchor;
    };
    let mut cfg = make_root(spec, AnchorMode::Superset);
    let mut followed = 0;
    for level in 1..=max_levels {
        let (top, bottom) = window(k, level as i32);
        let frame = Frame {
            t0,
            b0,
            top,
            bottom,
        };
        if frame.check(n).is_err() {
            break;
        }
        let truth = |i: i32, j: i32| -> DistanceLabel { frame.truth(census, k, i, j) };
        let child = extend_level_guided(&cfg, spec, &truth)
            .into_iter()
            .find(|c| c.covers(truth));
        let Some(child) = child else {
            return ProbeOutcome::Missed {
                level,
                parent: Box::new(cfg),
            };
        };
        // Every target pair of the polygon level must have been marked.
        let poly_level = (t0 + b0 + n * (level as usize + 1) - level as usize) % n;
        let true_targets = census
            .level_pairs(poly_level)
            .into_iter()
            .filter(|&(a, b)| spec.targets().contains(census.label(a, b, k)))
            .count();
        let marked = child
            .marks()
            .iter()
            .filter(|&&(i, j)| j - i == level as i32)
            .count();
        if marked != true_targets {
            return ProbeOutcome::OutsideWindow { level };
        }
        followed = level;
        if !spec
            .alpha()
            .exceeded_by(child.count_targets(level as i32) as u64, level as u64)
        {
            break;
        }
        cfg = child;
    }
    ProbeOutcome::Covered { levels: followed }
}
