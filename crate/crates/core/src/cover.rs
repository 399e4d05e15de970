//! Period cover: the black components whose character is sent explicitly,
//! found by scanning component intervals whose text span has a small
//! self-edit distance, plus the LZ-style factorisation used to send them.

use crate::alphabet::Symbol;
use crate::error::{Error, Result};
use crate::graph::BlackIndexing;
use crate::selfed::{prefix_selfed, self_edit_distance};
use crate::weights::WeightCover;

/// Which rule admitted an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// `a = 0`, budget `6w + 11K`.
    Head,
    /// `b = bc - 1`.
    Tail,
    /// `b = c_last`.
    EndsAtLast,
    /// `a = c_last + 1`.
    StartsAfterLast,
    /// Budget `6 * sum_{c=a-1}^{b} w(c)`.
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub a: usize,
    pub b: usize,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodCover {
    pub bc: usize,
    /// Sorted member components.
    pub members: Vec<usize>,
    /// Maximal runs of consecutive members; these are what gets encoded.
    pub runs: Vec<(usize, usize)>,
    /// Greedy selection of qualifying intervals whose union is `members`.
    pub selected: Vec<Interval>,
    pub full: bool,
}

impl PeriodCover {
    pub fn empty(bc: usize) -> Self {
        PeriodCover {
            bc,
            members: Vec::new(),
            runs: Vec::new(),
            selected: Vec::new(),
            full: bc == 0,
        }
    }

    pub fn full(bc: usize) -> Self {
        let runs = if bc == 0 { vec![] } else { vec![(0, bc - 1)] };
        PeriodCover {
            bc,
            members: (0..bc).collect(),
            runs,
            selected: Vec::new(),
            full: true,
        }
    }

    pub fn contains(&self, c: usize) -> bool {
        self.members.binary_search(&c).is_ok()
    }

    pub fn from_members(bc: usize, members: Vec<usize>) -> Self {
        let runs = runs_of(&members);
        let full = members.len() == bc;
        PeriodCover {
            bc,
            members,
            runs,
            selected: Vec::new(),
            full,
        }
    }
}

fn runs_of(members: &[usize]) -> Vec<(usize, usize)> {
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for &c in members {
        match runs.last_mut() {
            Some(r) if r.1 + 1 == c => r.1 = c,
            _ => runs.push((c, c)),
        }
    }
    runs
}

/// Text span `T[τ(a)..=τ(b)]` of a component interval.
pub fn span<'a>(t: &'a [Symbol], idx: &BlackIndexing, a: usize, b: usize) -> &'a [Symbol] {
    &t[idx.tau[a]..=idx.tau[b]]
}

/// For fixed `a`, the largest `b` in `a..=last` with
/// `selfed(T[τ(a)..=τ(b)]) <= budget(b)`; `budget` must be non-decreasing.
fn max_b_forward(
    t: &[Symbol],
    idx: &BlackIndexing,
    a: usize,
    last: usize,
    cap: usize,
    budget: &dyn Fn(usize) -> usize,
) -> Option<usize> {
    let x = span(t, idx, a, last);
    let pre = prefix_selfed(x, cap);
    let mut best = None;
    for b in a..=last {
        let len = idx.tau[b] + 1 - idx.tau[a];
        match pre[len] {
            Some(v) if v <= budget(b) => best = Some(b),
            Some(_) => {}
            None => break,
        }
    }
    best
}

/// For fixed `b`, the smallest `a` in `first..=b` with
/// `selfed(T[τ(a)..=τ(b)]) <= budget`.
fn min_a_backward(
    t: &[Symbol],
    idx: &BlackIndexing,
    first: usize,
    b: usize,
    budget: usize,
) -> Option<usize> {
    let mut x = span(t, idx, first, b).to_vec();
    x.reverse();
    let pre = prefix_selfed(&x, budget);
    let mut best = None;
    for a in (first..=b).rev() {
        let len = idx.tau[b] + 1 - idx.tau[a];
        match pre[len] {
            Some(v) if v <= budget => best = Some(a),
            _ => break,
        }
    }
    best
}

/// All maximal qualifying intervals: at most one per boundary rule and one
/// per start `a` for the local rule.
pub fn qualifying_intervals(
    t: &[Symbol],
    idx: &BlackIndexing,
    w: &WeightCover,
    k: usize,
) -> Vec<Interval> {
    let bc = idx.bc;
    let last = bc - 1;
    let bound = 6 * w.total + 11 * k;
    let mut out = Vec::new();
    if let Some(b) = max_b_forward(t, idx, 0, last, bound, &|_| bound) {
        out.push(Interval {
            a: 0,
            b,
            rule: Rule::Head,
        });
        if b == last {
            return out;
        }
    }
    if let Some(a) = min_a_backward(t, idx, 0, last, bound) {
        out.push(Interval {
            a,
            b: last,
            rule: Rule::Tail,
        });
    }
    if let Some(a) = min_a_backward(t, idx, 0, idx.c_last, bound) {
        out.push(Interval {
            a,
            b: idx.c_last,
            rule: Rule::EndsAtLast,
        });
    }
    if idx.c_last + 1 < bc {
        let a = idx.c_last + 1;
        if let Some(b) = max_b_forward(t, idx, a, last, bound, &|_| bound) {
            out.push(Interval {
                a,
                b,
                rule: Rule::StartsAfterLast,
            });
        }
    }
    // Every non-empty span has selfed >= 2.
    for a in 0..bc {
        let cap = 6 * w.window_sum(a, last);
        if cap < 2 {
            continue;
        }
        let budget = |b: usize| 6 * w.window_sum(a, b);
        if let Some(b) = max_b_forward(t, idx, a, last, cap, &budget) {
            out.push(Interval {
                a,
                b,
                rule: Rule::Local,
            });
        }
    }
    out
}

/// Boundary intervals are kept as they are (one per rule); local intervals go
/// through the overlap-extend / jump greedy.
pub fn select_encoding_intervals(candidates: &[Interval]) -> Vec<Interval> {
    let mut chosen: Vec<Interval> = Vec::new();
    for rule in [
        Rule::Head,
        Rule::Tail,
        Rule::EndsAtLast,
        Rule::StartsAfterLast,
    ] {
        if let Some(best) = candidates
            .iter()
            .filter(|iv| iv.rule == rule)
            .max_by_key(|iv| (iv.b - iv.a, std::cmp::Reverse(iv.a)))
        {
            chosen.push(*best);
        }
    }
    let local: Vec<Interval> = candidates
        .iter()
        .filter(|iv| iv.rule == Rule::Local)
        .copied()
        .collect();
    let Some(first) = local
        .iter()
        .min_by_key(|iv| (iv.a, std::cmp::Reverse(iv.b)))
    else {
        return chosen;
    };
    let mut j = *first;
    chosen.push(j);
    loop {
        let extend = local
            .iter()
            .filter(|iv| j.a < iv.a && iv.a <= j.b && j.b < iv.b)
            .max_by_key(|iv| (iv.b, std::cmp::Reverse(iv.a)));
        let next = match extend {
            Some(iv) => Some(*iv),
            None => local
                .iter()
                .filter(|iv| iv.a > j.b)
                .min_by_key(|iv| (iv.a, std::cmp::Reverse(iv.b)))
                .copied(),
        };
        match next {
            Some(iv) => {
                chosen.push(iv);
                j = iv;
            }
            None => break,
        }
    }
    chosen
}

pub fn build_period_cover(
    t: &[Symbol],
    idx: &BlackIndexing,
    w: &WeightCover,
    k: usize,
) -> PeriodCover {
    let bc = idx.bc;
    let candidates = qualifying_intervals(t, idx, w, k);
    let mut member = vec![false; bc];
    for iv in &candidates {
        for c in iv.a..=iv.b {
            member[c] = true;
        }
    }
    let members: Vec<usize> = (0..bc).filter(|&c| member[c]).collect();
    let runs = runs_of(&members);
    let selected = select_encoding_intervals(&candidates);
    PeriodCover {
        bc,
        full: members.len() == bc,
        members,
        runs,
        selected,
    }
}

/// Naive rescan over every interval; test oracle for `build_period_cover`.
pub fn period_cover_naive(
    t: &[Symbol],
    idx: &BlackIndexing,
    w: &WeightCover,
    k: usize,
) -> Vec<usize> {
    let bc = idx.bc;
    let bound = 6 * w.total + 11 * k;
    let mut member = vec![false; bc];
    for a in 0..bc {
        for b in a..bc {
            let v = crate::selfed::selfed(span(t, idx, a, b));
            let ok = (v <= bound
                && (a == 0 || b == bc - 1 || b == idx.c_last || a == idx.c_last + 1))
                || v <= 6 * w.window_sum(a, b);
            if ok {
                for c in a..=b {
                    member[c] = true;
                }
            }
        }
    }
    (0..bc).filter(|&c| member[c]).collect()
}

/// One step of the left-copy factorisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phrase {
    Literal(Symbol),
    /// Copy `len` symbols starting `delta` positions back (may overlap).
    Copy {
        delta: usize,
        len: usize,
    },
}

/// Factorises `x` along an optimal self-alignment kept in `x >= y`: deleted
/// and substituted positions become literals, matched runs become copies.
pub fn factorize(x: &[Symbol]) -> Vec<Phrase> {
    let (_, path) = self_edit_distance(x);
    let mut out: Vec<Phrase> = Vec::new();
    for w in path.pairs.windows(2) {
        let (a, b) = (w[0], w[1]);
        match (b.0 - a.0, b.1 - a.1) {
            (1, 0) => out.push(Phrase::Literal(x[a.0])),
            (1, 1) if x[a.0] == x[a.1] => {
                let delta = a.0 - a.1;
                match out.last_mut() {
                    Some(Phrase::Copy { delta: d, len }) if *d == delta => *len += 1,
                    _ => out.push(Phrase::Copy { delta, len: 1 }),
                }
            }
            (1, 1) => out.push(Phrase::Literal(x[a.0])),
            _ => {}
        }
    }
    out
}

pub fn unfactorize(phrases: &[Phrase], len: usize) -> Result<Vec<Symbol>> {
    let mut out = Vec::with_capacity(len);
    for ph in phrases {
        match *ph {
            Phrase::Literal(c) => out.push(c),
            Phrase::Copy { delta, len: l } => {
                if delta == 0 || delta > out.len() {
                    return Err(Error::corrupt("copy phrase refers past the decoded prefix"));
                }
                for _ in 0..l {
                    out.push(out[out.len() - delta]);
                }
            }
        }
        if out.len() > len {
            return Err(Error::corrupt("phrases overrun the interval length"));
        }
    }
    if out.len() != len {
        return Err(Error::corrupt("phrases do not fill the interval"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Vec<Symbol> {
        x.bytes().map(|b| b as Symbol).collect()
    }

    #[test]
    fn factorize_run() {
        let x = s("aaaa");
        let f = factorize(&x);
        let lits = f.iter().filter(|p| matches!(p, Phrase::Literal(_))).count();
        let copies = f
            .iter()
            .filter(|p| matches!(p, Phrase::Copy { .. }))
            .count();
        assert!(lits <= 2 && copies == 1, "{f:?}");
        assert_eq!(unfactorize(&f, 4).unwrap(), x);
    }

    #[test]
    fn factorize_roundtrip() {
        for x in ["", "a", "abcabcabd", "abababbbabab", "zyxwv"] {
            let x = s(x);
            assert_eq!(unfactorize(&factorize(&x), x.len()).unwrap(), x);
        }
    }

    #[test]
    fn forward_copy_rejected() {
        assert!(unfactorize(&[Phrase::Copy { delta: 1, len: 1 }], 1).is_err());
        assert!(unfactorize(&[Phrase::Literal(1)], 2).is_err());
    }

    #[test]
    fn greedy_single_and_chain() {
        let one = [Interval {
            a: 2,
            b: 5,
            rule: Rule::Local,
        }];
        assert_eq!(select_encoding_intervals(&one), one.to_vec());
        let chain: Vec<Interval> = (0..6)
            .map(|a| Interval {
                a,
                b: a + 2,
                rule: Rule::Local,
            })
            .collect();
        let sel = select_encoding_intervals(&chain);
        let mut cov = vec![false; 8];
        for iv in &sel {
            for c in iv.a..=iv.b {
                cov[c] = true;
            }
        }
        assert!(cov.iter().all(|&b| b));
        assert!(sel.len() < chain.len());
    }
}
