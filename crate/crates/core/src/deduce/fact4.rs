//! Six points `a_1, a_i, a_j, a_k, a_l, a_m` in convex position, in this
//! cyclic order with only `a_1 = a_i` allowed to coincide: if
//! `|a_1 a_m| >= max(|a_1 a_k|, |a_j a_m|)` then
//! `|a_i a_l| > min(|a_i a_k|, |a_j a_l|)`.
//!
//! The rule is instantiated with `a_1, a_i, a_j` in one interval and
//! `a_k, a_l, a_m` in the other, for both interval assignments and both
//! orientations (a mirror image of a convex polygon is convex, so the fact
//! also holds counterclockwise).
//!
//! Write `X = a_i a_l`, `P = a_i a_k`, `Q = a_j a_l`. Once the outer pair
//! `a_1, a_m` is fixed, the admissible `a_j` and `a_k` are independent, so
//! for each `X` only the smallest lower bound over all admissible `P` (and
//! over all `Q`) matters. These minima are suffix scans, which keeps the
//! rule quadratic per outer pair:
//!
//! * both bounded: `X` is longer than the larger of the two minima;
//! * `X <= P` for some `P`: every admissible `Q` is shorter than `X`;
//! * `X <= Q` for some `Q`: every admissible `P` is shorter than `X`.

use super::{Cell, Contradiction, Ctx};
use crate::config::Span;
use crate::label::{certainly_le, LabelSet, UpperBound};

#[derive(Clone, Copy)]
struct Orientation {
    first_on_top: bool,
    /// +1 if walking forward through the first three points increases their
    /// index, -1 otherwise.
    first_dir: i32,
    second_dir: i32,
}

const ORIENTATIONS: [Orientation; 4] = [
    // clockwise: tops increase, bottoms decrease
    Orientation {
        first_on_top: true,
        first_dir: 1,
        second_dir: -1,
    },
    Orientation {
        first_on_top: false,
        first_dir: -1,
        second_dir: 1,
    },
    // counterclockwise
    Orientation {
        first_on_top: true,
        first_dir: -1,
        second_dir: 1,
    },
    Orientation {
        first_on_top: false,
        first_dir: 1,
        second_dir: -1,
    },
];

/// `from` followed by the indices of `span` after it in direction `dir`.
fn walk(span: Span, from: i32, dir: i32) -> Vec<i32> {
    if dir > 0 {
        (from..=span.hi).collect()
    } else {
        (span.lo..=from).rev().collect()
    }
}

const NONE: u8 = u8::MAX;

/// Strength of `shorter_than(upper(x))`: larger is stronger.
fn upper_rank(x: LabelSet) -> u8 {
    match x.upper() {
        Some(UpperBound::AtMost(u)) => u,
        Some(UpperBound::BelowK) => 16,
        None => 0,
    }
}

fn shorter_than_rank(rank: u8) -> LabelSet {
    if rank >= 16 {
        LabelSet::INF
    } else {
        LabelSet::shorter_than(rank)
    }
}

/// Every label of `x` is at least index `p`, so `x` is no longer than any
/// set with lower bound `p`.
fn le_bound(x: LabelSet, p: u8) -> bool {
    p != NONE && x.min_finite().map_or(!x.is_empty(), |u| u >= p)
}

pub(super) fn run(ctx: &mut Ctx<'_, '_>) -> Result<(), Contradiction> {
    for o in ORIENTATIONS {
        run_oriented(ctx, o)?;
    }
    Ok(())
}

fn run_oriented(ctx: &mut Ctx<'_, '_>, o: Orientation) -> Result<(), Contradiction> {
    let (first, second) = if o.first_on_top {
        (ctx.cfg.top(), ctx.cfg.bottom())
    } else {
        (ctx.cfg.bottom(), ctx.cfg.top())
    };
    let cell = |u: i32, v: i32| -> Cell {
        if o.first_on_top {
            (u, v)
        } else {
            (v, u)
        }
    };

    // Bounded cells in (first, second) coordinates. Cells that become
    // bounded during this pass are picked up by the next round.
    let bounded: Vec<(i32, i32)> = ctx
        .cfg
        .cells()
        .filter(|(_, s)| s.lower_index().is_some())
        .map(|((i, j), _)| if o.first_on_top { (i, j) } else { (j, i) })
        .collect();

    for &(a1, am) in &bounded {
        let outer = ctx.get(cell(a1, am));
        if outer.lower_index().is_none() {
            continue;
        }
        // Every conclusion needs a bounded P or Q: such a cell lies at or
        // after a_1 and strictly before a_m in walking order.
        let useful = bounded
            .iter()
            .any(|&(u, v)| (u - a1) * o.first_dir >= 0 && (am - v) * o.second_dir > 0);
        if !useful {
            continue;
        }
        // f[0] = a_1, then forward; g[0] = a_m, then backward.
        let f = walk(first, a1, o.first_dir);
        let g = walk(second, am, -o.second_dir);
        if f.len() < 2 || g.len() < 3 {
            continue;
        }
        let in_j: Vec<bool> = f
            .iter()
            .enumerate()
            .map(|(s, &aj)| s >= 1 && certainly_le(ctx.get(cell(aj, am)), outer))
            .collect();
        let in_k: Vec<bool> = g
            .iter()
            .enumerate()
            .map(|(t, &ak)| t >= 2 && certainly_le(ctx.get(cell(a1, ak)), outer))
            .collect();
        if !in_j.contains(&true) || !in_k.contains(&true) {
            continue;
        }
        apply_outer(ctx, &f, &g, &in_j, &in_k, (a1, am), &cell)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn apply_outer(
    ctx: &mut Ctx<'_, '_>,
    f: &[i32],
    g: &[i32],
    in_j: &[bool],
    in_k: &[bool],
    (a1, am): (i32, i32),
    cell: &dyn Fn(i32, i32) -> Cell,
) -> Result<(), Contradiction> {
    let (nf, ng) = (f.len(), g.len());
    let lower = |c: LabelSet| c.lower_index().unwrap_or(NONE);
    let snapshot: Vec<LabelSet> = (0..nf * ng)
        .map(|n| ctx.get(cell(f[n / ng], g[n % ng])))
        .collect();
    let at = |a: usize, b: usize| snapshot[a * ng + b];

    // u[a][b]: smallest lower bound of P = (f[a], g[t]) over t > b in K,
    // v[a][b]: smallest lower bound of Q = (f[s], g[b]) over s > a in J,
    // each with the index attaining it.
    let mut u = vec![(NONE, 0usize); nf * ng];
    let mut v = vec![(NONE, 0usize); nf * ng];
    for a in 0..nf {
        let mut best = (NONE, 0);
        for b in (0..ng).rev() {
            u[a * ng + b] = best;
            if in_k[b] && lower(at(a, b)) < best.0 {
                best = (lower(at(a, b)), b);
            }
        }
    }
    for b in 0..ng {
        let mut best = (NONE, 0);
        for a in (0..nf).rev() {
            v[a * ng + b] = best;
            if in_j[a] && lower(at(a, b)) < best.0 {
                best = (lower(at(a, b)), a);
            }
        }
    }

    // X = (f[a], g[b]) needs a_j after it (a + 1 < nf) and a_k after it
    // (b + 1 < ng, b >= 1).
    for a in 0..nf.saturating_sub(1) {
        for b in 1..ng - 1 {
            let x = at(a, b);
            let (pu, pt) = u[a * ng + b];
            let (qv, qs) = v[a * ng + b];
            let xc = cell(f[a], g[b]);
            let w = [
                cell(a1, am),
                cell(a1, g[pt]),
                cell(f[qs], am),
                cell(f[a], g[pt]),
                cell(f[qs], g[b]),
            ];
            if pu != NONE && qv != NONE {
                ctx.restrict(&w, xc, LabelSet::longer_than(pu.max(qv)))?;
            }
            if le_bound(x, pu) && qv != NONE {
                ctx.restrict(&w, xc, LabelSet::longer_than(qv))?;
            }
            if le_bound(x, qv) && pu != NONE {
                ctx.restrict(&w, xc, LabelSet::longer_than(pu))?;
            }
        }
    }

    // Q = (f[s], g[b]) is shorter than the strongest X = (f[a], g[b]),
    // a < s, with X <= some P.
    for b in 1..ng - 1 {
        let mut best = (0u8, 0usize);
        for s in 0..nf {
            if in_j[s] && best.0 > 0 {
                let (_, pt) = u[best.1 * ng + b];
                let w = [
                    cell(a1, am),
                    cell(a1, g[pt]),
                    cell(f[s], am),
                    cell(f[best.1], g[pt]),
                    cell(f[best.1], g[b]),
                ];
                ctx.restrict(&w, cell(f[s], g[b]), shorter_than_rank(best.0))?;
            }
            let x = at(s, b);
            if le_bound(x, u[s * ng + b].0) && upper_rank(x) > best.0 {
                best = (upper_rank(x), s);
            }
        }
    }
    // P = (f[a], g[t]) is shorter than the strongest X = (f[a], g[b]),
    // 1 <= b < t, with X <= some Q.
    for a in 0..nf.saturating_sub(1) {
        let mut best = (0u8, 0usize);
        for t in 1..ng {
            if in_k[t] && best.0 > 0 {
                let (_, qs) = v[a * ng + best.1];
                let w = [
                    cell(a1, am),
                    cell(a1, g[t]),
                    cell(f[qs], am),
                    cell(f[a], g[best.1]),
                    cell(f[qs], g[best.1]),
                ];
                ctx.restrict(&w, cell(f[a], g[t]), shorter_than_rank(best.0))?;
            }
            let x = at(a, t);
            if le_bound(x, v[a * ng + t].0) && upper_rank(x) > best.0 {
                best = (upper_rank(x), t);
            }
        }
    }
    Ok(())
}
