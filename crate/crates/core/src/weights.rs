//! Covering weight function: every edit of every alignment is charged to the
//! nearest black component on its left.

use crate::align::{edit_distance_value, Op};
use crate::alphabet::Symbol;
use crate::graph::{AlignmentSet, BlackIndexing, InferenceGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightCover {
    pub weights: Vec<usize>,
    pub total: usize,
}

impl WeightCover {
    /// `w(c)` with `w(-1) = w(bc - 1)`.
    pub fn at(&self, c: isize) -> usize {
        if c < 0 {
            *self.weights.last().unwrap()
        } else {
            self.weights[c as usize]
        }
    }

    /// `sum_{c = a-1}^{b} w(c)`.
    pub fn window_sum(&self, a: usize, b: usize) -> usize {
        let mut s = self.at(a as isize - 1);
        for c in a..=b {
            s += self.weights[c];
        }
        s
    }
}

pub fn build_weight_cover(s: &AlignmentSet, g: &InferenceGraph, bc: usize) -> WeightCover {
    assert!(bc > 0, "weight cover needs a black component");
    let mut weights = vec![0usize; bc];
    let left = |rank: usize| if rank == 0 { bc - 1 } else { (rank - 1) % bc };
    for al in s.iter() {
        for e in &al.info.tuples {
            let c = match e.op() {
                Op::Del | Op::Sub => left(g.p_rank[e.x]),
                _ => left(g.t_rank[e.y]),
            };
            weights[c] += 1;
        }
    }
    let total = weights.iter().sum();
    WeightCover { weights, total }
}

/// Checks every inequality of the covering definition by direct DP.
/// `p` is the pattern and `t` the (window) text the indexing refers to.
pub fn verify_cover(w: &WeightCover, p: &[Symbol], t: &[Symbol], idx: &BlackIndexing) -> bool {
    let bc = idx.bc;
    let (ms, ns) = (idx.m_s(), idx.n_s());
    let (pi, tau) = (&idx.pi, &idx.tau);
    // (1)
    for j in 0..ms.saturating_sub(1) {
        let pf = &p[pi[j]..pi[j + 1]];
        let c = j % bc;
        let mut i = c;
        while i + 1 < ns {
            if edit_distance_value(pf, &t[tau[i]..tau[i + 1]]) > w.weights[c] {
                return false;
            }
            i += bc;
        }
    }
    let head = &p[..pi[0]];
    let wl = w.weights[bc - 1];
    // (2)
    if edit_distance_value(head, &t[..tau[0]]) > wl {
        return false;
    }
    // (3)
    let mut i = bc;
    while i < ns {
        let ok = (tau[i - 1]..=tau[i]).any(|s| edit_distance_value(head, &t[s..tau[i]]) <= wl);
        if !ok {
            return false;
        }
        i += bc;
    }
    // (4)
    let tail = &p[pi[ms - 1]..];
    let wc = w.weights[idx.c_last];
    if edit_distance_value(tail, &t[tau[ns - 1]..]) > wc {
        return false;
    }
    // (5)
    let mut i = idx.c_last;
    while i + 1 < ns {
        let ok = (tau[i]..=tau[i + 1]).any(|e| edit_distance_value(tail, &t[tau[i]..e]) <= wc);
        if !ok {
            return false;
        }
        i += bc;
    }
    true
}
