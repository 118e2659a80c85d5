//! For tops `i < i'` and bottoms `j < j'` the points `t_i, t_i', b_j', b_j`
//! form a convex quadrangle whose diagonals are the crossing cells
//! `(i, j')`, `(i', j)`; its opposite sides are the nested cells `(i, j)`,
//! `(i', j')`. Hence `nested + nested' < crossing + crossing'`.
//!
//! Whenever one crossing cell is certainly no longer than one nested cell,
//! those two terms cancel and the remaining nested cell is strictly shorter
//! than the remaining crossing cell. A certain comparison needs both cells
//! in the same row or column, so we scan rows and columns of every cell
//! with a lower bound.

use super::{Contradiction, Ctx, Mutation};
use crate::label::certainly_le;

pub(super) fn run(ctx: &mut Ctx<'_, '_>) -> Result<(), Contradiction> {
    let top = ctx.cfg.top();
    let bottom = ctx.cfg.bottom();
    let flip = ctx.mutation == Some(Mutation::FlipFact1);
    for i in top.iter() {
        for j in bottom.iter() {
            if ctx.get((i, j)).lower_index().is_none() {
                continue;
            }
            // (i, j) nested, (i, j2) crossing.
            for j2 in bottom.iter() {
                if j2 == j || !certainly_le(ctx.get((i, j2)), ctx.get((i, j))) {
                    continue;
                }
                let others = if j2 > j {
                    i + 1..=top.hi
                } else {
                    top.lo..=i - 1
                };
                for i2 in others {
                    let w = [(i, j), (i, j2), (i2, j2), (i2, j)];
                    let (nested, crossing) = ((i2, j2), (i2, j));
                    if flip {
                        ctx.less(&w, crossing, nested)?;
                    } else {
                        ctx.less(&w, nested, crossing)?;
                    }
                }
            }
            // (i, j) nested, (i2, j) crossing.
            for i2 in top.iter() {
                if i2 == i || !certainly_le(ctx.get((i2, j)), ctx.get((i, j))) {
                    continue;
                }
                let others = if i2 > i {
                    j + 1..=bottom.hi
                } else {
                    bottom.lo..=j - 1
                };
                for j2 in others {
                    let w = [(i, j), (i2, j), (i2, j2), (i, j2)];
                    let (nested, crossing) = ((i2, j2), (i, j2));
                    if flip {
                        ctx.less(&w, crossing, nested)?;
                    } else {
                        ctx.less(&w, nested, crossing)?;
                    }
                }
            }
        }
    }
    Ok(())
}
