//! The inference graph of a set of alignments, its black projections and the
//! structural predicates used by the encoder (enclosure, capture).
//!
//! Vertices are `P[0..m)`, then `T[0..n)`, then a sink `⊥`. Each alignment
//! adds `P[x]–⊥` for a deletion, `⊥–T[y]` for an insertion and `P[x]–T[y]`
//! for a diagonal step; only matched diagonal steps are black edges.

use crate::align::{edit_info, path_from_edit_info, AlignmentPath, EditInfo};
use crate::alphabet::Symbol;
use crate::error::{Error, Result};
use crate::periodic::gcd;

/// An alignment together with its edit information.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aligned {
    pub path: AlignmentPath,
    pub info: EditInfo,
}

impl Aligned {
    pub fn new(path: AlignmentPath, p: &[Symbol], t: &[Symbol]) -> Self {
        let info = edit_info(&path, p, t);
        Aligned { path, info }
    }

    pub fn from_info(info: EditInfo, start: (usize, usize), end: (usize, usize)) -> Result<Self> {
        let path = path_from_edit_info(&info, start, end)?;
        Ok(Aligned { path, info })
    }

    pub fn cost(&self) -> usize {
        self.info.cost()
    }

    pub fn start(&self) -> (usize, usize) {
        self.path.start()
    }

    pub fn end(&self) -> (usize, usize) {
        self.path.end()
    }
}

/// `{X_pref, X_suf, A_1.., B_1..}` with the per-alignment cost bound in force.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentSet {
    pub x_pref: Aligned,
    pub x_suf: Aligned,
    pub a_list: Vec<Aligned>,
    pub b_list: Vec<Aligned>,
    pub threshold: usize,
}

impl AlignmentSet {
    pub fn new(x_pref: Aligned, x_suf: Aligned, threshold: usize) -> Self {
        AlignmentSet {
            x_pref,
            x_suf,
            a_list: Vec::new(),
            b_list: Vec::new(),
            threshold,
        }
    }

    /// Fixed order: `X_pref`, `X_suf`, the `A`s, the `B`s.
    pub fn iter(&self) -> impl Iterator<Item = &Aligned> {
        [&self.x_pref, &self.x_suf]
            .into_iter()
            .chain(self.a_list.iter())
            .chain(self.b_list.iter())
    }

    pub fn full_alignments(&self) -> impl Iterator<Item = &Aligned> {
        [&self.x_pref, &self.x_suf]
            .into_iter()
            .chain(self.a_list.iter())
    }

    pub fn len(&self) -> usize {
        2 + self.a_list.len() + self.b_list.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cost(&self) -> usize {
        self.iter().map(Aligned::cost).sum()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[v] != root {
            let next = self.parent[v];
            self.parent[v] = root;
            v = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root wins so the root is also the canonical id.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferenceGraph {
    pub m: usize,
    pub n: usize,
    /// Component id per vertex: the smallest vertex of its component.
    comp: Vec<usize>,
    red: Vec<bool>,
    /// Symbol of every character vertex in a red component.
    symbol: Vec<Option<Symbol>>,
    has_edge: Vec<bool>,
    /// Number of black components.
    pub bc: usize,
    /// `p_rank[x]` = number of black characters in `P[0..x)`.
    pub p_rank: Vec<usize>,
    pub t_rank: Vec<usize>,
}

impl InferenceGraph {
    pub fn vp(&self, x: usize) -> usize {
        x
    }

    pub fn vt(&self, y: usize) -> usize {
        self.m + y
    }

    pub fn bottom(&self) -> usize {
        self.m + self.n
    }

    pub fn comp(&self, v: usize) -> usize {
        self.comp[v]
    }

    pub fn is_red(&self, v: usize) -> bool {
        self.red[v]
    }

    pub fn is_black(&self, v: usize) -> bool {
        v != self.bottom() && !self.red[v]
    }

    pub fn has_edge(&self, v: usize) -> bool {
        self.has_edge[v]
    }

    pub fn symbol(&self, v: usize) -> Option<Symbol> {
        self.symbol[v]
    }

    pub fn red_components(&self) -> usize {
        let mut ids: Vec<usize> = (0..self.m + self.n)
            .filter(|&v| self.red[v])
            .map(|v| self.comp[v])
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    /// Characters of `P` in black components, in order.
    pub fn p_black(&self) -> Vec<usize> {
        (0..self.m).filter(|&x| self.is_black(x)).collect()
    }

    pub fn t_black(&self) -> Vec<usize> {
        (0..self.n).filter(|&y| self.is_black(self.m + y)).collect()
    }
}

/// Builds `G_S` over `|P| + |T| + 1` vertices. Red-component symbols are
/// resolved from the characters named in the edit information and spread
/// along black edges.
pub fn build_graph<'a>(
    m: usize,
    n: usize,
    alignments: impl IntoIterator<Item = &'a Aligned>,
) -> Result<InferenceGraph> {
    let nv = m + n + 1;
    let bot = m + n;
    let mut all = UnionFind::new(nv);
    let mut black = UnionFind::new(nv);
    let mut red_touch = vec![false; nv];
    let mut has_edge = vec![false; nv];
    let mut known: Vec<(usize, Symbol)> = Vec::new();
    for al in alignments {
        let (x1, y1) = al.end();
        if x1 > m || y1 > n {
            return Err(Error::corrupt(format!(
                "alignment end ({x1}, {y1}) outside {m} x {n}"
            )));
        }
        let mut edits = al.info.tuples.iter().peekable();
        for w in al.path.pairs.windows(2) {
            let (a, b) = (w[0], w[1]);
            let edit = match edits.peek() {
                Some(e) if (e.x, e.y) == a => edits.next(),
                _ => None,
            };
            let (u, v, is_black) = match (b.0 - a.0, b.1 - a.1, edit) {
                (1, 1, None) => (a.0, m + a.1, true),
                (1, 1, Some(e)) => {
                    known.push((a.0, e.cx.unwrap()));
                    known.push((m + a.1, e.cy.unwrap()));
                    (a.0, m + a.1, false)
                }
                (1, 0, Some(e)) => {
                    known.push((a.0, e.cx.unwrap()));
                    (a.0, bot, false)
                }
                (0, 1, Some(e)) => {
                    known.push((m + a.1, e.cy.unwrap()));
                    (bot, m + a.1, false)
                }
                _ => return Err(Error::corrupt("edit information does not match its path")),
            };
            has_edge[u] = true;
            has_edge[v] = true;
            all.union(u, v);
            if is_black {
                black.union(u, v);
            } else {
                red_touch[u] = true;
                red_touch[v] = true;
            }
        }
        if edits.next().is_some() {
            return Err(Error::corrupt("edit information has tuples off its path"));
        }
    }
    let comp: Vec<usize> = (0..nv).map(|v| all.find(v)).collect();
    let mut red_root = vec![false; nv];
    for v in 0..nv {
        if red_touch[v] {
            red_root[comp[v]] = true;
        }
    }
    let red: Vec<bool> = (0..nv).map(|v| red_root[comp[v]]).collect();
    let mut sub_symbol: Vec<Option<Symbol>> = vec![None; nv];
    for &(v, c) in &known {
        let r = black.find(v);
        match sub_symbol[r] {
            Some(prev) if prev != c => {
                return Err(Error::corrupt(
                    "conflicting characters inside a matched run",
                ));
            }
            _ => sub_symbol[r] = Some(c),
        }
    }
    let mut symbol = vec![None; nv];
    for v in 0..m + n {
        if red[v] {
            let s = sub_symbol[black.find(v)];
            if s.is_none() {
                return Err(Error::corrupt("red component with an unresolved character"));
            }
            symbol[v] = s;
        }
    }
    let mut black_ids: Vec<usize> = (0..m + n).filter(|&v| !red[v]).map(|v| comp[v]).collect();
    black_ids.sort_unstable();
    black_ids.dedup();
    let bc = black_ids.len();
    let mut p_rank = vec![0; m + 1];
    for x in 0..m {
        p_rank[x + 1] = p_rank[x] + (!red[x]) as usize;
    }
    let mut t_rank = vec![0; n + 1];
    for y in 0..n {
        t_rank[y + 1] = t_rank[y] + (!red[m + y]) as usize;
    }
    Ok(InferenceGraph {
        m,
        n,
        comp,
        red,
        symbol,
        has_edge,
        bc,
        p_rank,
        t_rank,
    })
}

/// Position indexing of the black characters (`π`, `τ`) and the residue
/// structure of the black components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlackIndexing {
    pub bc: usize,
    pub pi: Vec<usize>,
    pub tau: Vec<usize>,
    pub c_last: usize,
    /// Black component index per vertex (`usize::MAX` for red vertices).
    index_of: Vec<usize>,
}

impl BlackIndexing {
    pub fn m_s(&self) -> usize {
        self.pi.len()
    }

    pub fn n_s(&self) -> usize {
        self.tau.len()
    }

    /// `ceil((m_S - c) / bc)`; defined for `c <= bc`.
    pub fn m_c(&self, c: usize) -> usize {
        (self.m_s().saturating_sub(c)).div_ceil(self.bc)
    }

    pub fn n_c(&self, c: usize) -> usize {
        (self.n_s().saturating_sub(c)).div_ceil(self.bc)
    }

    pub fn pi_c(&self, c: usize, j: usize) -> usize {
        self.pi[c + j * self.bc]
    }

    pub fn tau_c(&self, c: usize, i: usize) -> usize {
        self.tau[c + i * self.bc]
    }

    /// Black component index of a vertex, if black.
    pub fn component(&self, v: usize) -> Option<usize> {
        let c = self.index_of[v];
        (c != usize::MAX).then_some(c)
    }

    /// Fewest pattern characters in a black component.
    pub fn s_p(&self) -> usize {
        self.m_c(self.bc - 1)
    }
}

/// Indexes the black components and checks the residue structure: component
/// of `P_|S[i]` and `T_|S[i]` is `i mod bc`, and every full or partial
/// alignment matches `P_|S[x_X + p]` with `T_|S[y_X + p]`.
pub fn black_indexing(g: &InferenceGraph, s: &AlignmentSet) -> Result<BlackIndexing> {
    if g.bc == 0 {
        return Err(Error::invariant(
            "black indexing needs at least one black component",
        ));
    }
    let (m, n) = (g.m, g.n);
    let pi = g.p_black();
    let tau = g.t_black();
    let bc = g.bc;
    if pi.len() < bc {
        return Err(Error::invariant(format!(
            "{} black pattern characters for {bc} black components",
            pi.len()
        )));
    }
    let mut index_of = vec![usize::MAX; m + n + 1];
    let mut comp_index = std::collections::HashMap::new();
    for (c, &x) in pi.iter().take(bc).enumerate() {
        if comp_index.insert(g.comp(x), c).is_some() {
            return Err(Error::invariant(
                "first bc black pattern characters share a component",
            ));
        }
    }
    for (i, &x) in pi.iter().enumerate() {
        if comp_index.get(&g.comp(x)) != Some(&(i % bc)) {
            return Err(Error::invariant(format!(
                "P_|S[{i}] not in component {}",
                i % bc
            )));
        }
        index_of[x] = i % bc;
    }
    for (i, &y) in tau.iter().enumerate() {
        if comp_index.get(&g.comp(m + y)) != Some(&(i % bc)) {
            return Err(Error::invariant(format!(
                "T_|S[{i}] not in component {}",
                i % bc
            )));
        }
        index_of[m + y] = i % bc;
    }
    let (ms, ns) = (pi.len(), tau.len());
    if ns % bc != ms % bc {
        return Err(Error::invariant("n_S and m_S differ modulo bc"));
    }
    if ns > 2 * ms {
        return Err(Error::invariant("n_S exceeds 2 m_S"));
    }
    for al in s.iter() {
        check_matching(g, al)?;
    }
    let (xp, yp) = (g.p_rank[s.x_pref.start().0], g.t_rank[s.x_pref.start().1]);
    let (xs, ys) = (g.p_rank[s.x_suf.start().0], g.t_rank[s.x_suf.start().1]);
    if (xp, yp) != (0, 0) || xs != 0 || ys != ns - ms {
        return Err(Error::invariant(
            "prefix/suffix alignments are not at shifts 0 and n_S - m_S",
        ));
    }
    Ok(BlackIndexing {
        bc,
        pi,
        tau,
        c_last: (ms - 1) % bc,
        index_of,
    })
}

/// The black edges of one alignment form `P_|S[x_X + p] <-> T_|S[y_X + p]`
/// for `p` in `0..(x'_X - x_X)`.
fn check_matching(g: &InferenceGraph, al: &Aligned) -> Result<()> {
    let m = g.m;
    let (x0, y0) = al.start();
    let (x1, _) = al.end();
    let (bx, by) = (g.p_rank[x0], g.t_rank[y0]);
    let mut count = 0;
    for w in al.path.pairs.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b == (a.0 + 1, a.1 + 1) && g.is_black(a.0) {
            if !g.is_black(m + a.1) {
                return Err(Error::invariant(
                    "black pattern character matched to a red text character",
                ));
            }
            if g.p_rank[a.0] != bx + count || g.t_rank[a.1] != by + count {
                return Err(Error::invariant(
                    "alignment does not match black characters in order",
                ));
            }
            count += 1;
        }
    }
    if count != g.p_rank[x1] - bx {
        return Err(Error::invariant(
            "alignment leaves a black pattern character unmatched",
        ));
    }
    Ok(())
}

/// `x_X` and `y_X` for an alignment: black characters before its start.
pub fn black_offsets(g: &InferenceGraph, al: &Aligned) -> (usize, usize, usize, usize) {
    let (x0, y0) = al.start();
    let (x1, y1) = al.end();
    (g.p_rank[x0], g.t_rank[y0], g.p_rank[x1], g.t_rank[y1])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    /// Length bound and prefix/suffix/full shape.
    pub encloses: bool,
    pub degenerate: bool,
    pub g_chain: Vec<usize>,
    pub succinct: bool,
}

pub fn check_succinct_enclosure(s: &AlignmentSet, g: &InferenceGraph) -> Enclosure {
    let (m, n, k) = (g.m, g.n, s.threshold);
    let full_ok = s
        .full_alignments()
        .all(|a| a.start().0 == 0 && a.end().0 == m);
    let encloses = n + 2 * k <= 2 * m
        && full_ok
        && s.x_pref.start().1 == 0
        && s.x_suf.end().1 == n
        && s.iter()
            .all(|a| a.cost() <= k && a.end().0 <= m && a.end().1 <= n);
    let ms = g.p_rank[m];
    let shifts: Vec<usize> = s.full_alignments().map(|a| g.t_rank[a.start().1]).collect();
    let degenerate = shifts.iter().all(|&y| y == 0);
    let g0 = if degenerate {
        ms
    } else {
        shifts.iter().fold(0, |acc, &y| gcd(acc, y))
    };
    let mut chain = vec![g0];
    let mut succinct = encloses;
    for b in &s.b_list {
        let (xb, yb, xb1, _) = black_offsets(g, b);
        let prev = *chain.last().unwrap();
        if xb1 - xb < prev + 1 {
            succinct = false;
        }
        chain.push(gcd(prev, (yb as isize - xb as isize).unsigned_abs()));
    }
    Enclosure {
        encloses,
        degenerate,
        g_chain: chain,
        succinct,
    }
}

/// Capture radius test for a window-relative start `t`.
pub fn captures(idx: Option<&BlackIndexing>, w: usize, t: usize, k: usize) -> bool {
    let Some(idx) = idx else { return true };
    let anchor = t + idx.pi[0];
    let radius = w + 3 * k;
    // tau_i^0 is increasing in i; check the neighbours of the anchor.
    let n0 = idx.n_c(0);
    let (mut lo, mut hi) = (0usize, n0);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if idx.tau_c(0, mid) < anchor {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    [lo.checked_sub(1), Some(lo)]
        .into_iter()
        .flatten()
        .filter(|&i| i < n0)
        .any(|i| idx.tau_c(0, i).abs_diff(anchor) <= radius)
}

/// Connectivity of `Ḡ_S`: drop the last black characters and the rightmost
/// black edge of every alignment; the remaining residues modulo `ḡ_b` must
/// each be connected.
pub fn check_gbar_structure(s: &AlignmentSet, g: &InferenceGraph, enc: &Enclosure) -> bool {
    let m = g.m;
    let ms = g.p_rank[m];
    let ns = g.t_rank[g.n];
    if ms == 0 {
        return true;
    }
    let gbar = if enc.degenerate {
        ms - 1
    } else {
        *enc.g_chain.last().unwrap()
    };
    if gbar == 0 {
        return ms <= 1;
    }
    // Nodes: P_|S[0..ms-1) then T_|S[0..ns-1).
    let np = ms - 1;
    let nt = ns - 1;
    let mut uf = UnionFind::new(np + nt);
    for al in s.iter() {
        let mut edges = Vec::new();
        for w in al.path.pairs.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b == (a.0 + 1, a.1 + 1) && g.is_black(a.0) {
                edges.push((g.p_rank[a.0], g.t_rank[a.1]));
            }
        }
        edges.pop();
        for (i, j) in edges {
            if i < np && j < nt {
                uf.union(i, np + j);
            }
        }
    }
    let mut root_of_class = vec![usize::MAX; gbar];
    for v in 0..np + nt {
        let idx = if v < np { v } else { v - np };
        let cls = idx % gbar;
        let r = uf.find(v);
        if root_of_class[cls] == usize::MAX {
            root_of_class[cls] = r;
        } else if root_of_class[cls] != r {
            return false;
        }
    }
    true
}
