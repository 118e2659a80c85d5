//! For `a = t_p`, `b = t_q` (`p < q`), `c = b_r`, `d = b_s` (`r > s`), in
//! clockwise order, at least one of four cases holds:
//!
//! 1. `|a x| > |a d|` for `x` in `b_r ..= b_{s+1}`,
//! 2. `|b x| > |b c|` for `x` in `b_{r-1} ..= b_s`,
//! 3. `|c x| > |b c|` for `x` in `t_p ..= t_{q-1}`,
//! 4. `|d x| > |a d|` for `x` in `t_{p+1} ..= t_q`.
//!
//! A case is refuted when one of its cells is certainly no longer than the
//! reference cell. Four refuted cases is a contradiction; with a single
//! survivor its inequalities are enforced.
//!
//! For each reference cell the nearest refuting vertex is tabulated first,
//! which turns refutation of a case into one comparison per quadruple.

use super::{Contradiction, Ctx};
use crate::label::certainly_le;

struct Table {
    width: usize,
    data: Vec<i32>,
}

impl Table {
    fn new(rows: usize, width: usize, fill: i32) -> Table {
        Table {
            width,
            data: vec![fill; rows * width],
        }
    }

    fn at(&self, r: usize, c: usize) -> i32 {
        self.data[r * self.width + c]
    }

    fn put(&mut self, r: usize, c: usize, v: i32) {
        self.data[r * self.width + c] = v;
    }
}

pub(super) fn run(ctx: &mut Ctx<'_, '_>) -> Result<(), Contradiction> {
    let top = ctx.cfg.top();
    let bottom = ctx.cfg.bottom();
    let (tw, bw) = (top.width(), bottom.width());
    if tw < 2 || bw < 2 {
        return Ok(());
    }
    let ti = |i: i32| (i - top.lo) as usize;
    let bi = |j: i32| (j - bottom.lo) as usize;

    // first[p][s]: smallest x > s with (p, x) <= (p, s)            (case 1)
    // last[q][r]:  largest x < r with (q, x) <= (q, r)             (case 2)
    // up[q][r]:    largest x < q with (x, r) <= (q, r)             (case 3)
    // down[p][s]:  smallest x > p with (x, s) <= (p, s)            (case 4)
    let mut first = Table::new(tw, bw, bottom.hi + 1);
    let mut last = Table::new(tw, bw, bottom.lo - 1);
    let mut up = Table::new(tw, bw, top.lo - 1);
    let mut down = Table::new(tw, bw, top.hi + 1);
    // At most one case survives only if both reference cells are bounded.
    let mut bounded = Vec::new();
    for p in top.iter() {
        for s in bottom.iter() {
            let reference = ctx.get((p, s));
            if reference.lower_index().is_none() {
                continue;
            }
            bounded.push((p, s));
            if let Some(x) = (s + 1..=bottom.hi).find(|&x| certainly_le(ctx.get((p, x)), reference))
            {
                first.put(ti(p), bi(s), x);
            }
            if let Some(x) = (bottom.lo..s)
                .rev()
                .find(|&x| certainly_le(ctx.get((p, x)), reference))
            {
                last.put(ti(p), bi(s), x);
            }
            if let Some(x) = (top.lo..p)
                .rev()
                .find(|&x| certainly_le(ctx.get((x, s)), reference))
            {
                up.put(ti(p), bi(s), x);
            }
            if let Some(x) = (p + 1..=top.hi).find(|&x| certainly_le(ctx.get((x, s)), reference)) {
                down.put(ti(p), bi(s), x);
            }
        }
    }

    for &(p, s) in &bounded {
        for &(q, r) in &bounded {
            if q <= p || r <= s {
                continue;
            }
            let refuted = [
                r >= first.at(ti(p), bi(s)),
                s <= last.at(ti(q), bi(r)),
                p <= up.at(ti(q), bi(r)),
                q >= down.at(ti(p), bi(s)),
            ];
            let alive = refuted.iter().filter(|&&x| !x).count();
            if alive > 1 {
                continue;
            }
            if alive == 0 {
                return Err(ctx.contradiction(None));
            }
            let w = [(p, r), (q, r), (p, s), (q, s)];
            match refuted.iter().position(|&x| !x).unwrap() {
                0 => {
                    for x in s + 1..=r {
                        ctx.less(&w, (p, s), (p, x))?;
                    }
                }
                1 => {
                    for x in s..r {
                        ctx.less(&w, (q, r), (q, x))?;
                    }
                }
                2 => {
                    for x in p..q {
                        ctx.less(&w, (q, r), (x, r))?;
                    }
                }
                _ => {
                    for x in p + 1..=q {
                        ctx.less(&w, (p, s), (x, s))?;
                    }
                }
            }
        }
    }
    Ok(())
}
