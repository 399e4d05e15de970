//! Alignments between fragments: edit distance, optimal-path enumeration,
//! edit information, restriction, composition and inversion.

use crate::alphabet::Symbol;
use crate::error::{Error, Result};

/// A fragment `s[start..end)` of a string. Pair positions of an alignment
/// are absolute indices into `s`.
#[derive(Debug, Clone, Copy)]
pub struct Fragment<'a> {
    pub s: &'a [Symbol],
    pub start: usize,
    pub end: usize,
}

impl<'a> Fragment<'a> {
    pub fn new(s: &'a [Symbol], start: usize, end: usize) -> Self {
        assert!(
            start <= end && end <= s.len(),
            "fragment {start}..{end} out of 0..{}",
            s.len()
        );
        Fragment { s, start, end }
    }

    pub fn whole(s: &'a [Symbol]) -> Self {
        Fragment {
            s,
            start: 0,
            end: s.len(),
        }
    }

    pub fn chars(&self) -> &'a [Symbol] {
        &self.s[self.start..self.end]
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

/// Kind of a single alignment step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Match,
    Sub,
    /// `(+1, 0)`: a source character with no partner.
    Del,
    /// `(0, +1)`: a target character with no partner.
    Ins,
}

/// A monotone lattice path `(x_0, y_0), ..., (x_l, y_l)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlignmentPath {
    pub pairs: Vec<(usize, usize)>,
}

impl AlignmentPath {
    pub fn from_pairs(pairs: Vec<(usize, usize)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidArgument(
                "alignment path needs at least one pair".into(),
            ));
        }
        for w in pairs.windows(2) {
            let d = (w[1].0.wrapping_sub(w[0].0), w[1].1.wrapping_sub(w[0].1));
            if !matches!(d, (1, 1) | (1, 0) | (0, 1)) {
                return Err(Error::InvalidArgument(format!(
                    "bad step {:?} -> {:?}",
                    w[0], w[1]
                )));
            }
        }
        Ok(AlignmentPath { pairs })
    }

    /// The all-diagonal path from `(x, y)` of length `len`.
    pub fn diagonal(x: usize, y: usize, len: usize) -> Self {
        AlignmentPath {
            pairs: (0..=len).map(|i| (x + i, y + i)).collect(),
        }
    }

    pub fn start(&self) -> (usize, usize) {
        self.pairs[0]
    }

    pub fn end(&self) -> (usize, usize) {
        *self.pairs.last().unwrap()
    }

    pub fn source_range(&self) -> (usize, usize) {
        (self.start().0, self.end().0)
    }

    pub fn target_range(&self) -> (usize, usize) {
        (self.start().1, self.end().1)
    }

    pub fn num_steps(&self) -> usize {
        self.pairs.len() - 1
    }

    /// Step kinds given the two underlying strings.
    pub fn ops(&self, x: &[Symbol], y: &[Symbol]) -> Vec<Op> {
        self.pairs
            .windows(2)
            .map(|w| step_op(w[0], w[1], x, y))
            .collect()
    }

    pub fn cost(&self, x: &[Symbol], y: &[Symbol]) -> usize {
        self.pairs
            .windows(2)
            .filter(|w| step_op(w[0], w[1], x, y) != Op::Match)
            .count()
    }

    pub fn shifted(&self, dx: isize, dy: isize) -> Self {
        AlignmentPath {
            pairs: self
                .pairs
                .iter()
                .map(|&(a, b)| ((a as isize + dx) as usize, (b as isize + dy) as usize))
                .collect(),
        }
    }

    /// `|(y' - y) - (x' - x)|`, a lower bound on the cost.
    pub fn drift(&self) -> usize {
        let (x0, y0) = self.start();
        let (x1, y1) = self.end();
        ((y1 - y0) as isize - (x1 - x0) as isize).unsigned_abs()
    }
}

fn step_op(a: (usize, usize), b: (usize, usize), x: &[Symbol], y: &[Symbol]) -> Op {
    match (b.0 - a.0, b.1 - a.1) {
        (1, 1) => {
            if x[a.0] == y[a.1] {
                Op::Match
            } else {
                Op::Sub
            }
        }
        (1, 0) => Op::Del,
        (0, 1) => Op::Ins,
        d => panic!("invalid step delta {d:?}"),
    }
}

/// One non-match step: `(x, cx, y, cy)` with `None` standing for the empty string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edit {
    pub x: usize,
    pub cx: Option<Symbol>,
    pub y: usize,
    pub cy: Option<Symbol>,
}

impl Edit {
    pub fn op(&self) -> Op {
        match (self.cx, self.cy) {
            (Some(_), None) => Op::Del,
            (None, Some(_)) => Op::Ins,
            _ => Op::Sub,
        }
    }
}

/// Edit information of an alignment: its non-match steps in path order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EditInfo {
    pub tuples: Vec<Edit>,
}

impl EditInfo {
    pub fn cost(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn shifted_y(&self, dy: isize) -> Self {
        EditInfo {
            tuples: self
                .tuples
                .iter()
                .map(|e| Edit {
                    y: (e.y as isize + dy) as usize,
                    ..*e
                })
                .collect(),
        }
    }
}

pub fn edit_info(path: &AlignmentPath, x: &[Symbol], y: &[Symbol]) -> EditInfo {
    let mut tuples = Vec::new();
    for w in path.pairs.windows(2) {
        let (a, b) = (w[0], w[1]);
        let cx = (b.0 > a.0).then(|| x[a.0]);
        let cy = (b.1 > a.1).then(|| y[a.1]);
        if cx != cy {
            tuples.push(Edit {
                x: a.0,
                cx,
                y: a.1,
                cy,
            });
        }
    }
    EditInfo { tuples }
}

/// Rebuilds the path from endpoints and edit information; runs between
/// consecutive edits are matches.
pub fn path_from_edit_info(
    info: &EditInfo,
    start: (usize, usize),
    end: (usize, usize),
) -> Result<AlignmentPath> {
    let bad = |m: String| Error::MalformedEditInfo(m);
    let mut pairs = vec![start];
    let (mut x, mut y) = start;
    for e in &info.tuples {
        if e.x < x || e.y < y || e.x - x != e.y - y {
            return Err(bad(format!(
                "edit at ({}, {}) unreachable from ({x}, {y})",
                e.x, e.y
            )));
        }
        while x < e.x {
            x += 1;
            y += 1;
            pairs.push((x, y));
        }
        match (e.cx, e.cy) {
            (None, None) => return Err(bad("edit with two empty sides".into())),
            (Some(a), Some(b)) if a == b => {
                return Err(bad("substitution of equal symbols".into()))
            }
            (Some(_), None) => x += 1,
            (None, Some(_)) => y += 1,
            (Some(_), Some(_)) => {
                x += 1;
                y += 1;
            }
        }
        pairs.push((x, y));
    }
    if end.0 < x || end.1 < y || end.0 - x != end.1 - y {
        return Err(bad(format!(
            "end ({}, {}) unreachable from ({x}, {y})",
            end.0, end.1
        )));
    }
    while x < end.0 {
        x += 1;
        y += 1;
        pairs.push((x, y));
    }
    Ok(AlignmentPath { pairs })
}

/// Recovers `Y[y..y')` from the source string and the edit information of an
/// alignment `X[x..x') ->> Y[y..y')`.
pub fn reconstruct_target(
    source: &[Symbol],
    info: &EditInfo,
    start: (usize, usize),
    end: (usize, usize),
) -> Result<Vec<Symbol>> {
    if end.0 > source.len() {
        return Err(Error::MalformedEditInfo(
            "source range exceeds source string".into(),
        ));
    }
    let path = path_from_edit_info(info, start, end)?;
    let mut out = Vec::with_capacity(end.1 - start.1);
    let mut edits = info.tuples.iter().peekable();
    for w in path.pairs.windows(2) {
        let (a, b) = (w[0], w[1]);
        let is_edit = edits.peek().is_some_and(|e| (e.x, e.y) == a);
        if is_edit {
            let e = edits.next().unwrap();
            if let Some(cx) = e.cx {
                if source[a.0] != cx {
                    return Err(Error::MalformedEditInfo(format!(
                        "edit at x = {} names a character the source does not have",
                        a.0
                    )));
                }
            }
            if let Some(cy) = e.cy {
                out.push(cy);
            }
        } else {
            out.push(source[a.0]);
        }
        debug_assert!(b.1 - start.1 == out.len());
    }
    Ok(out)
}

/// Restriction of `path` to the source fragment `[xs, xe)`, using the
/// smallest-y convention at both ends unless `xe` is the path's own end.
pub fn restrict_alignment(path: &AlignmentPath, xs: usize, xe: usize) -> AlignmentPath {
    let (x0, x1) = path.source_range();
    assert!(
        x0 <= xs && xs <= xe && xe <= x1,
        "restriction {xs}..{xe} outside {x0}..{x1}"
    );
    let first = |xv: usize| path.pairs.iter().position(|p| p.0 == xv).unwrap();
    let i0 = first(xs);
    let i1 = if xe == x1 {
        path.pairs.len() - 1
    } else {
        first(xe)
    };
    AlignmentPath {
        pairs: path.pairs[i0..=i1].to_vec(),
    }
}

pub fn invert_alignment(a: &AlignmentPath) -> AlignmentPath {
    AlignmentPath {
        pairs: a.pairs.iter().map(|&(x, y)| (y, x)).collect(),
    }
}

/// Product of `a: X ->> Y` and `b: Y ->> Z`.
pub fn compose_alignments(a: &AlignmentPath, b: &AlignmentPath) -> Result<AlignmentPath> {
    if a.target_range() != b.source_range() {
        return Err(Error::CompositionMismatch(format!(
            "target {:?} of the first alignment differs from source {:?} of the second",
            a.target_range(),
            b.source_range()
        )));
    }
    let da: Vec<(usize, usize)> = a
        .pairs
        .windows(2)
        .map(|w| (w[1].0 - w[0].0, w[1].1 - w[0].1))
        .collect();
    let db: Vec<(usize, usize)> = b
        .pairs
        .windows(2)
        .map(|w| (w[1].0 - w[0].0, w[1].1 - w[0].1))
        .collect();
    let (mut x, mut z) = (a.start().0, b.start().1);
    let mut out = vec![(x, z)];
    let (mut i, mut j) = (0, 0);
    loop {
        if i < da.len() && da[i] == (1, 0) {
            x += 1;
            i += 1;
            out.push((x, z));
            continue;
        }
        if j < db.len() && db[j] == (0, 1) {
            z += 1;
            j += 1;
            out.push((x, z));
            continue;
        }
        if i == da.len() && j == db.len() {
            break;
        }
        if i == da.len() || j == db.len() {
            return Err(Error::CompositionMismatch(
                "alignments disagree on the middle string".into(),
            ));
        }
        // a emits a Y character, b consumes it.
        x += da[i].0;
        z += db[j].1;
        i += 1;
        j += 1;
        if out.last() != Some(&(x, z)) {
            out.push((x, z));
        }
    }
    Ok(AlignmentPath { pairs: out })
}

/// Full DP table `d[i][j] = ed(x[..i], y[..j])`, row-major with `y.len()+1` columns.
fn prefix_table(x: &[Symbol], y: &[Symbol]) -> Vec<u32> {
    let w = y.len() + 1;
    let mut d = vec![0u32; (x.len() + 1) * w];
    for j in 0..w {
        d[j] = j as u32;
    }
    for i in 1..=x.len() {
        d[i * w] = i as u32;
        for j in 1..w {
            let sub = d[(i - 1) * w + j - 1] + (x[i - 1] != y[j - 1]) as u32;
            let del = d[(i - 1) * w + j] + 1;
            let ins = d[i * w + j - 1] + 1;
            d[i * w + j] = sub.min(del).min(ins);
        }
    }
    d
}

/// Edit distance and one optimal alignment. Backtrace prefers
/// match/substitute, then delete, then insert.
pub fn edit_distance(x: Fragment, y: Fragment) -> (usize, AlignmentPath) {
    let (xs, ys) = (x.chars(), y.chars());
    let d = prefix_table(xs, ys);
    let w = ys.len() + 1;
    let (mut i, mut j) = (xs.len(), ys.len());
    let mut rev = vec![(i, j)];
    while i > 0 || j > 0 {
        let cur = d[i * w + j];
        if i > 0 && j > 0 && d[(i - 1) * w + j - 1] + (xs[i - 1] != ys[j - 1]) as u32 == cur {
            i -= 1;
            j -= 1;
        } else if i > 0 && d[(i - 1) * w + j] + 1 == cur {
            i -= 1;
        } else {
            j -= 1;
        }
        rev.push((i, j));
    }
    rev.reverse();
    let path = AlignmentPath { pairs: rev }.shifted(x.start as isize, y.start as isize);
    (d[xs.len() * w + ys.len()] as usize, path)
}

pub fn edit_distance_value(x: &[Symbol], y: &[Symbol]) -> usize {
    // Two-row variant; callers that only need the number skip the table.
    let mut prev: Vec<usize> = (0..=y.len()).collect();
    let mut cur = vec![0; y.len() + 1];
    for i in 1..=x.len() {
        cur[0] = i;
        for j in 1..=y.len() {
            cur[j] = (prev[j - 1] + (x[i - 1] != y[j - 1]) as usize)
                .min(prev[j] + 1)
                .min(cur[j - 1] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[y.len()]
}

/// Result of enumerating optimal alignments under a cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub cost: usize,
    pub paths: Vec<AlignmentPath>,
    pub truncated: bool,
}

/// All optimal alignments of `x` onto `y` in lexicographic order of their
/// pair sequences, stopping after `cap`.
pub fn enumerate_optimal_alignments(x: Fragment, y: Fragment, cap: usize) -> Enumeration {
    assert!(cap >= 1, "cap must be positive");
    let (xs, ys) = (x.chars(), y.chars());
    let (m, n) = (xs.len(), ys.len());
    let w = n + 1;
    // r[i][j] = ed(x[i..], y[j..])
    let mut r = vec![0u32; (m + 1) * w];
    for i in (0..=m).rev() {
        for j in (0..=n).rev() {
            r[i * w + j] = if i == m {
                (n - j) as u32
            } else if j == n {
                (m - i) as u32
            } else {
                (r[(i + 1) * w + j + 1] + (xs[i] != ys[j]) as u32)
                    .min(r[(i + 1) * w + j] + 1)
                    .min(r[i * w + j + 1] + 1)
            };
        }
    }
    let mut paths = Vec::new();
    let mut truncated = false;
    dfs_optimal(
        &|i, j| r[i * w + j],
        xs,
        ys,
        &mut vec![(0, 0)],
        &mut Vec::new(),
        &mut |st, _| {
            if paths.len() == cap {
                truncated = true;
                return true;
            }
            paths.push(
                AlignmentPath { pairs: st.to_vec() }.shifted(x.start as isize, y.start as isize),
            );
            false
        },
    );
    Enumeration {
        cost: r[0] as usize,
        paths,
        truncated,
    }
}

/// Depth-first walk over optimal continuations in the order insert, delete,
/// diagonal, which is increasing lexicographic order of the next pair.
/// `rem(i, j)` is the optimal remaining cost from `(i, j)` (local coordinates,
/// `u32::MAX` outside the explored region). `leaf` sees the pair stack and the
/// edits along it; returning true stops the walk, and so does this function.
pub(crate) fn dfs_optimal(
    rem: &dyn Fn(usize, usize) -> u32,
    xs: &[Symbol],
    ys: &[Symbol],
    stack: &mut Vec<(usize, usize)>,
    edits: &mut Vec<Edit>,
    leaf: &mut dyn FnMut(&[(usize, usize)], &[Edit]) -> bool,
) -> bool {
    let (i, j) = *stack.last().unwrap();
    if i == xs.len() && j == ys.len() {
        return leaf(stack, edits);
    }
    let here = rem(i, j);
    let mut moves: [(usize, usize, u32); 3] = [(usize::MAX, 0, 0); 3];
    let mut nm = 0;
    if j < ys.len() {
        moves[nm] = (i, j + 1, 1);
        nm += 1;
    }
    if i < xs.len() {
        moves[nm] = (i + 1, j, 1);
        nm += 1;
    }
    if i < xs.len() && j < ys.len() {
        moves[nm] = (i + 1, j + 1, (xs[i] != ys[j]) as u32);
        nm += 1;
    }
    for &(a, b, c) in &moves[..nm] {
        let next = rem(a, b);
        if next != u32::MAX && next + c == here {
            let cx = (a > i).then(|| xs[i]);
            let cy = (b > j).then(|| ys[j]);
            let is_edit = cx != cy;
            if is_edit {
                edits.push(Edit { x: i, cx, y: j, cy });
            }
            stack.push((a, b));
            let stop = dfs_optimal(rem, xs, ys, stack, edits, leaf);
            stack.pop();
            if is_edit {
                edits.pop();
            }
            if stop {
                return true;
            }
        }
    }
    false
}
