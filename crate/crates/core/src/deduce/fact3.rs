//! Non-crossing long diagonals. For nested cells, outer `(p, q)` and inner
//! `(p', q')` with `p < p'` and `q < q'`, let `gap` be the smaller of the
//! vertex counts strictly between `t_p, t_p'` and between `b_q', b_q`. If
//! the two lengths are at least `d_x` and `d_y` then `gap <= x + y - 3`.
//!
//! Given one cell's lower bound `d_a`, every finite label `x` of the other
//! cell with `x < gap + 3 - a` is impossible.

use super::{Contradiction, Ctx};
use crate::label::LabelSet;

pub(super) fn run(ctx: &mut Ctx<'_, '_>) -> Result<(), Contradiction> {
    let top = ctx.cfg.top();
    let bottom = ctx.cfg.bottom();
    for p in top.iter() {
        for q in bottom.iter() {
            let Some(a) = ctx.get((p, q)).lower_index() else {
                continue;
            };
            let a = a as i32;
            // Labels are removed only once gap >= a - 1, which needs both
            // offsets to be at least a.
            for p2 in top.iter() {
                let dp = (p2 - p).abs();
                if dp < a {
                    continue;
                }
                for q2 in bottom.iter() {
                    let dq = q2 - q;
                    if dq.abs() < a || dq.signum() != (p2 - p).signum() {
                        continue;
                    }
                    let gap = dp.min(dq.abs()) - 1;
                    let threshold = gap + 3 - a;
                    if threshold < 2 {
                        continue;
                    }
                    let keep = LabelSet::at_least_index(threshold.min(16) as u8);
                    ctx.restrict(&[(p, q)], (p2, q2), keep)?;
                }
            }
        }
    }
    Ok(())
}
