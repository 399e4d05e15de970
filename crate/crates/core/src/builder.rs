//! Construction of the alignment set of one window: the iterative
//! enclosing construction for the general case and the three-alignment set
//! for texts close to a periodic string.

use crate::align::{
    compose_alignments, edit_distance, restrict_alignment, AlignmentPath, Fragment,
};
use crate::alphabet::Symbol;
use crate::cover::{build_period_cover, PeriodCover};
use crate::error::{Error, Result};
use crate::graph::{
    black_indexing, build_graph, captures, check_succinct_enclosure, Aligned, AlignmentSet,
    BlackIndexing, Enclosure, InferenceGraph,
};
use crate::matcher::{find_hits, Hit};
use crate::periodic::{edp_with_end, is_primitive, periodic_extension};
use crate::weights::{build_weight_cover, WeightCover};

/// The instance the encoder actually works on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub p: Vec<Symbol>,
    pub t: Vec<Symbol>,
    /// Working threshold `min(m, max(k, 1))`.
    pub k: usize,
    /// The caller's threshold.
    pub orig_k: usize,
    /// Number of leading padding symbols prepended to the text.
    pub shift: usize,
}

/// Pads a short text with leading `0` symbols and lifts `k = 0` to `1`.
pub fn normalize_instance(p: &[Symbol], t: &[Symbol], k: usize) -> Normalized {
    let m = p.len();
    let shift = m.saturating_sub(t.len());
    let mut padded = vec![0; shift];
    padded.extend_from_slice(t);
    Normalized {
        p: p.to_vec(),
        t: padded,
        k: k.max(1).min(m),
        orig_k: k,
        shift,
    }
}

/// Everything derived from an alignment set: graph, indexing, weights,
/// period cover.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub graph: InferenceGraph,
    pub indexing: Option<BlackIndexing>,
    pub weights: Option<WeightCover>,
    pub cover: PeriodCover,
    pub enclosure: Enclosure,
    pub threshold: usize,
}

impl Analysis {
    pub fn bc(&self) -> usize {
        self.graph.bc
    }

    /// Total weight of the covering function.
    pub fn w(&self) -> usize {
        self.weights.as_ref().map_or(0, |w| w.total)
    }

    pub fn captures(&self, t: usize) -> bool {
        captures(self.indexing.as_ref(), self.w(), t, self.threshold)
    }

    pub fn s_p(&self) -> Option<usize> {
        self.indexing.as_ref().map(BlackIndexing::s_p)
    }
}

pub fn analyze(p: &[Symbol], t: &[Symbol], s: &AlignmentSet) -> Result<Analysis> {
    let graph = build_graph(p.len(), t.len(), s.iter())?;
    let enclosure = check_succinct_enclosure(s, &graph);
    if graph.bc == 0 {
        return Ok(Analysis {
            graph,
            indexing: None,
            weights: None,
            cover: PeriodCover::full(0),
            enclosure,
            threshold: s.threshold,
        });
    }
    let idx = black_indexing(&graph, s)?;
    let w = build_weight_cover(s, &graph, graph.bc);
    let cover = build_period_cover(t, &idx, &w, s.threshold);
    Ok(Analysis {
        graph,
        indexing: Some(idx),
        weights: Some(w),
        cover,
        enclosure,
        threshold: s.threshold,
    })
}

/// Canonical optimal alignment of `P` onto `T[a..b)`.
pub fn optimal_alignment(p: &[Symbol], t: &[Symbol], a: usize, b: usize) -> Aligned {
    let (_, path) = edit_distance(Fragment::whole(p), Fragment::new(t, a, b));
    Aligned::new(path, p, t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// Adding full alignments.
    Full,
    /// Adding partial alignments.
    Partial,
}

/// State at one loop head of the construction, plus what the iteration did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadRecord {
    pub phase: Phase,
    pub iteration: usize,
    pub bc: usize,
    pub s_p: Option<usize>,
    pub succinct: bool,
    pub g_chain: Vec<usize>,
    pub cover_full: bool,
    pub all_captured: bool,
    pub set_size: usize,
    pub set_cost: usize,
    /// The uncaptured occurrence handled in this iteration.
    pub selected: Option<Hit>,
    /// Window index `j` of the partial alignment that was added.
    pub chosen_j: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildTrace {
    pub heads: Vec<HeadRecord>,
}

impl BuildTrace {
    pub fn selected_starts(&self) -> Vec<usize> {
        self.heads
            .iter()
            .filter_map(|h| h.selected.map(|s| s.t))
            .collect()
    }
}

pub fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Prefix and suffix occurrences used to seed a set: the one of least
/// distance, then shortest for the prefix and longest for the suffix.
fn seed_alignments(p: &[Symbol], t: &[Symbol], hits: &[Hit]) -> Result<(Aligned, Aligned)> {
    let n = t.len();
    let pref = hits
        .iter()
        .filter(|h| h.t == 0)
        .min_by_key(|h| (h.dist, h.t_end))
        .ok_or_else(|| Error::ProtocolMisuse("no occurrence is a prefix of the window".into()))?;
    let suf = hits
        .iter()
        .filter(|h| h.t_end == n)
        .min_by_key(|h| (h.dist, h.t))
        .ok_or_else(|| Error::ProtocolMisuse("no occurrence is a suffix of the window".into()))?;
    Ok((
        optimal_alignment(p, t, 0, pref.t_end),
        optimal_alignment(p, t, suf.t, n),
    ))
}

/// Builds a set of `k`-edit alignments that succinctly encloses `t` and
/// either captures every `k`-error occurrence or has a full period cover.
pub fn build_alignment_set(
    p: &[Symbol],
    t: &[Symbol],
    k: usize,
) -> Result<(AlignmentSet, BuildTrace)> {
    let (m, n) = (p.len(), t.len());
    if n + 2 * k > 2 * m {
        return Err(Error::ProtocolMisuse(format!(
            "window of length {n} too long for m = {m}, k = {k}"
        )));
    }
    let hits = find_hits(p, t, k);
    let (x_pref, x_suf) = seed_alignments(p, t, &hits)?;
    let mut s = AlignmentSet::new(x_pref, x_suf, k);
    let mut trace = BuildTrace::default();
    let max_partial = ceil_log2(m) + 2;
    let mut iteration = 0;
    let mut phase = Phase::Full;
    loop {
        iteration += 1;
        if phase == Phase::Full && iteration > 2 {
            phase = Phase::Partial;
            iteration = 1;
        }
        if phase == Phase::Partial && iteration > max_partial {
            return Err(Error::invariant(
                "construction did not terminate within the iteration bound",
            ));
        }
        let an = analyze(p, t, &s)?;
        let uncaptured = hits.iter().find(|h| !an.captures(h.t)).copied();
        let mut head = HeadRecord {
            phase,
            iteration,
            bc: an.bc(),
            s_p: an.s_p(),
            succinct: an.enclosure.succinct,
            g_chain: an.enclosure.g_chain.clone(),
            cover_full: an.cover.full,
            all_captured: uncaptured.is_none(),
            set_size: s.len(),
            set_cost: s.cost(),
            selected: None,
            chosen_j: None,
        };
        let Some(h) = uncaptured.filter(|_| !an.cover.full) else {
            trace.heads.push(head);
            return Ok((s, trace));
        };
        head.selected = Some(h);
        let y = optimal_alignment(p, t, h.t, h.t_end);
        match phase {
            Phase::Full => s.a_list.push(y),
            Phase::Partial => {
                let idx = an
                    .indexing
                    .as_ref()
                    .expect("uncaptured occurrence implies a black component");
                let m0 = idx.m_c(0);
                if m0 < 3 {
                    return Err(Error::invariant(format!(
                        "only {m0} pattern characters in component 0"
                    )));
                }
                let bc = idx.bc;
                let (j, part) = (0..m0 - 2)
                    .map(|j| {
                        let path =
                            restrict_alignment(&y.path, idx.pi[j * bc], idx.pi[(j + 2) * bc]);
                        (j, Aligned::new(path, p, t))
                    })
                    .min_by_key(|(j, a)| (a.cost(), *j))
                    .unwrap();
                head.chosen_j = Some(j);
                s.b_list.push(part);
            }
        }
        trace.heads.push(head);
    }
}

/// Searches `q = 1..=m/(128k)` over the first three length-`q` blocks of `P`
/// for a primitive string with `edp(P, Q) <= 2k`.
pub fn find_approximate_period(p: &[Symbol], k: usize) -> Option<Vec<Symbol>> {
    assert!(k >= 1, "approximate period search needs k >= 1");
    let m = p.len();
    for q in 1..=m / (128 * k) {
        for j in 0..3 {
            if (j + 1) * q > m {
                break;
            }
            let cand = &p[j * q..(j + 1) * q];
            if is_primitive(cand).unwrap_or(false)
                && edp_with_end(p, cand).map_or(false, |(d, _)| d <= 2 * k)
            {
                return Some(cand.to_vec());
            }
        }
    }
    None
}

/// `out[j] = ed(t, q^inf[0..j))` for `j` in `0..=len`.
fn distances_to_periodic_prefixes(t: &[Symbol], q_inf: &[Symbol]) -> Vec<usize> {
    let mut row: Vec<usize> = (0..=q_inf.len()).collect();
    for (i, &c) in t.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for j in 1..=q_inf.len() {
            let v = (diag + (q_inf[j - 1] != c) as usize)
                .min(row[j] + 1)
                .min(row[j - 1] + 1);
            diag = row[j];
            row[j] = v;
        }
    }
    row
}

/// Details of the periodic construction, for inspection and tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicTrace {
    pub q_p: usize,
    pub q_t: usize,
    pub dist_p: usize,
    pub dist_t: usize,
}

/// The set `{X_pref, X_suf, X_mid}` of `14k`-edit alignments obtained by
/// routing through a prefix of `Q^inf`. Returns `None` when no suitable
/// text-side length exists or the window is too long for the construction.
pub fn build_periodic_alignment_set(
    p: &[Symbol],
    t: &[Symbol],
    k: usize,
    q: &[Symbol],
) -> Result<Option<(AlignmentSet, PeriodicTrace)>> {
    let (m, n) = (p.len(), t.len());
    if q.is_empty() || k == 0 {
        return Err(Error::ProtocolMisuse(
            "periodic construction needs k >= 1 and a non-empty period".into(),
        ));
    }
    let (dist_p, q_p) = edp_with_end(p, q)?;
    if dist_p > 2 * k {
        return Err(Error::ProtocolMisuse(format!(
            "edp(P, Q) = {dist_p} exceeds 2k"
        )));
    }
    if 2 * n + 56 * k > 3 * m {
        return Ok(None);
    }
    let big_k = 14 * k;
    let ql = q.len();
    let q_inf = periodic_extension(q, n + 12 * k + ql);
    let row = distances_to_periodic_prefixes(t, &q_inf);
    let Some((dist_t, q_t)) = (q_p..row.len())
        .step_by(ql)
        .map(|j| (row[j], j))
        .filter(|&(d, _)| d <= 12 * k)
        .min()
    else {
        return Ok(None);
    };
    let (_, a) = edit_distance(Fragment::whole(p), Fragment::whole(&q_inf[..q_p]));
    let (_, z) = edit_distance(Fragment::whole(&q_inf[..q_t]), Fragment::whole(t));
    let through = |delta: usize| -> Result<Aligned> {
        let zr = restrict_alignment(&z, delta, delta + q_p).shifted(-(delta as isize), 0);
        let path: AlignmentPath = compose_alignments(&a, &zr)?;
        let al = Aligned::new(path, p, t);
        if al.cost() > big_k {
            return Err(Error::invariant(format!(
                "routed alignment of cost {} exceeds 14k",
                al.cost()
            )));
        }
        Ok(al)
    };
    let x_pref = through(0)?;
    let x_suf = through(q_t - q_p)?;
    let mut s = AlignmentSet::new(x_pref, x_suf, big_k);
    if q_t > q_p {
        s.a_list.push(through(ql)?);
    }
    Ok(Some((
        s,
        PeriodicTrace {
            q_p,
            q_t,
            dist_p,
            dist_t,
        },
    )))
}
