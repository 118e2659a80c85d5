//! Consistency of pairwise distance sums.
//!
//! A quadruple whose four cells are finite singletons yields, by the
//! quadrangle inequality, `d_y + d_z > d_w + d_x` for crossing labels
//! `y, z` and nested labels `w, x`. Together with the monotone inequalities
//! `d_x + d_y > d_x + d_z` for `y < z`, a directed cycle among such
//! inequalities is impossible.

use std::fmt;

use super::{Contradiction, Rule};
use crate::config::Configuration;

/// An unordered pair `{x, y}` of finite labels, stored with `x <= y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairNode(pub u8, pub u8);

impl PairNode {
    pub fn new(a: u8, b: u8) -> PairNode {
        PairNode(a.min(b), a.max(b))
    }
}

impl fmt::Display for PairNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.0, self.1)
    }
}

/// Nodes are all pairs `{x, y}` with `1 <= x <= y <= k`; an arc `A -> B`
/// records that the sum for `A` strictly exceeds the sum for `B`.
#[derive(Clone, Debug)]
pub struct PairInequalityDigraph {
    k: u8,
    /// Adjacency as bit sets over node ids (at most 120 nodes for k = 15).
    succ: Vec<u128>,
}

impl PairInequalityDigraph {
    /// The digraph holding only the monotone arcs.
    pub fn monotone(k: u8) -> PairInequalityDigraph {
        let n = (k as usize) * (k as usize + 1) / 2;
        let mut g = PairInequalityDigraph {
            k,
            succ: vec![0; n],
        };
        for x in 1..=k {
            for y in 1..=k {
                for z in y + 1..=k {
                    g.add_arc(PairNode::new(x, y), PairNode::new(x, z));
                }
            }
        }
        g
    }

    pub fn node_count(&self) -> usize {
        self.succ.len()
    }

    fn id(&self, n: PairNode) -> usize {
        // Row-major over x <= y, 0-based.
        let (x, y) = (n.0 as usize - 1, n.1 as usize - 1);
        let k = self.k as usize;
        x * k - x * x.saturating_sub(1) / 2 + (y - x)
    }

    fn node(&self, id: usize) -> PairNode {
        let k = self.k;
        (1..=k)
            .flat_map(|x| (x..=k).map(move |y| PairNode(x, y)))
            .nth(id)
            .expect("node id in range")
    }

    pub fn add_arc(&mut self, from: PairNode, to: PairNode) {
        let (a, b) = (self.id(from), self.id(to));
        self.succ[a] |= 1u128 << b;
    }

    pub fn has_arc(&self, from: PairNode, to: PairNode) -> bool {
        self.succ[self.id(from)] >> self.id(to) & 1 == 1
    }

    pub fn arcs(&self) -> Vec<(PairNode, PairNode)> {
        let mut out = Vec::new();
        for a in 0..self.succ.len() {
            for b in 0..self.succ.len() {
                if self.succ[a] >> b & 1 == 1 {
                    out.push((self.node(a), self.node(b)));
                }
            }
        }
        out
    }

    /// A directed cycle, if any, listed from its first node.
    pub fn find_cycle(&self) -> Option<Vec<PairNode>> {
        let n = self.succ.len();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; n];
        let mut parent = vec![usize::MAX; n];
        for root in 0..n {
            if state[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            state[root] = 1;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                let mut advanced = false;
                while *next < n {
                    let w = *next;
                    *next += 1;
                    if self.succ[v] >> w & 1 == 0 {
                        continue;
                    }
                    match state[w] {
                        0 => {
                            state[w] = 1;
                            parent[w] = v;
                            stack.push((w, 0));
                            advanced = true;
                            break;
                        }
                        1 => {
                            let mut cycle = vec![self.node(v)];
                            let mut u = v;
                            while u != w {
                                u = parent[u];
                                cycle.push(self.node(u));
                            }
                            cycle.reverse();
                            return Some(cycle);
                        }
                        _ => {}
                    }
                }
                if !advanced {
                    state[v] = 2;
                    stack.pop();
                }
            }
        }
        None
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }
}

/// Builds the sum-inequality digraph of `cfg`, or reports a contradiction
/// when it has a cycle.
pub fn derive_pair_inequalities(
    cfg: &Configuration,
) -> Result<PairInequalityDigraph, Contradiction> {
    let k = cfg.k();
    let mut g = PairInequalityDigraph::monotone(k);
    let top = cfg.top();
    let bottom = cfg.bottom();
    let label = |i: i32, j: i32| {
        let s = cfg.get(i, j);
        if s.is_singleton() {
            s.min_finite()
        } else {
            None
        }
    };
    let mut extra = false;
    for i in top.iter() {
        for j in bottom.iter() {
            let Some(w) = label(i, j) else { continue };
            for i2 in i + 1..=top.hi {
                let Some(z) = label(i2, j) else { continue };
                for j2 in j + 1..=bottom.hi {
                    let (Some(x), Some(y)) = (label(i2, j2), label(i, j2)) else {
                        continue;
                    };
                    g.add_arc(PairNode::new(y, z), PairNode::new(w, x));
                    extra = true;
                }
            }
        }
    }
    if extra && !g.is_acyclic() {
        return Err(Contradiction {
            rule: Rule::PairSums,
            cell: None,
        });
    }
    Ok(g)
}
