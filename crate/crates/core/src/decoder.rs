//! The receiving side: rebuild each block's inference graph, substitute a
//! private sentinel for every untransmitted black component and run the
//! matcher on the result.

use std::collections::BTreeMap;

use crate::align::EditInfo;
use crate::alphabet::Symbol;
use crate::codec::{AlignmentRecord, BlockSketch, CoverRun, Header, Mode, Sketch};
use crate::cover::unfactorize;
use crate::error::{Error, Result};
use crate::graph::{black_indexing, build_graph, Aligned, AlignmentSet, InferenceGraph};
use crate::matcher::{find_occurrences, Occurrence, OccurrenceReport};

/// Block layout shared by both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Geometry {
    pub m: usize,
    /// Text length after padding.
    pub n: usize,
    /// Working threshold.
    pub k: usize,
    /// Leading padding symbols.
    pub shift: usize,
    /// `ceil(m/3) - k`, at least 1.
    pub block_len: usize,
    /// `ceil(4m/3)`.
    pub window_len: usize,
}

impl Geometry {
    pub fn new(m: usize, n: usize, k: usize) -> Self {
        let k = k.max(1).min(m);
        let block_len = m.div_ceil(3).saturating_sub(k).max(1);
        Geometry {
            m,
            n: n.max(m),
            k,
            shift: m.saturating_sub(n),
            block_len,
            window_len: (4 * m).div_ceil(3),
        }
    }

    pub fn of(h: &Header) -> Self {
        Geometry::new(h.m, h.n, h.k)
    }

    pub fn block_count(&self) -> usize {
        self.n.div_ceil(self.block_len)
    }

    pub fn block_start(&self, i: usize) -> usize {
        i * self.block_len
    }

    /// `[b_i, min(b_i + ceil(4m/3), n)]`.
    pub fn window(&self, i: usize) -> (usize, usize) {
        let b = self.block_start(i);
        (b, (b + self.window_len).min(self.n))
    }
}

/// `P#` and `T#` of one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashedStrings {
    pub p: Vec<Symbol>,
    pub t: Vec<Symbol>,
}

fn to_corrupt(e: Error) -> Error {
    match e {
        Error::CorruptSketch(_) => e,
        other => Error::corrupt(other.to_string()),
    }
}

/// Alignment set and graph of a structured block.
pub fn reconstruct_graph(
    m: usize,
    len: usize,
    a_count: usize,
    records: &[AlignmentRecord],
) -> Result<(AlignmentSet, InferenceGraph)> {
    let mut al = Vec::with_capacity(records.len());
    for rec in records {
        let y_end = rec
            .y_end()
            .ok_or_else(|| Error::corrupt("alignment with negative text span"))?;
        if rec.x_end > m || y_end > len || rec.x > rec.x_end {
            return Err(Error::corrupt("alignment outside the block"));
        }
        al.push(
            Aligned::from_info(rec.info.clone(), (rec.x, rec.y), (rec.x_end, y_end))
                .map_err(to_corrupt)?,
        );
    }
    if al.len() < 2 || a_count > al.len() - 2 {
        return Err(Error::corrupt("alignment counts disagree with the records"));
    }
    let mut it = al.into_iter();
    let mut s = AlignmentSet::new(it.next().unwrap(), it.next().unwrap(), 0);
    s.a_list = it.by_ref().take(a_count).collect();
    s.b_list = it.collect();
    let g = build_graph(m, len, s.iter()).map_err(to_corrupt)?;
    Ok((s, g))
}

pub fn build_hashed_strings(
    s: &AlignmentSet,
    g: &InferenceGraph,
    runs: &[CoverRun],
    sigma: usize,
) -> Result<HashedStrings> {
    let (m, n) = (g.m, g.n);
    let red_symbol = |v: usize| {
        g.symbol(v)
            .ok_or_else(|| Error::corrupt("red character without a symbol"))
    };
    if g.bc == 0 {
        if !runs.is_empty() {
            return Err(Error::corrupt("cover characters without black components"));
        }
        let p = (0..m).map(|x| red_symbol(g.vp(x))).collect::<Result<_>>()?;
        let t = (0..n).map(|y| red_symbol(g.vt(y))).collect::<Result<_>>()?;
        return Ok(HashedStrings { p, t });
    }
    let idx = black_indexing(g, s).map_err(to_corrupt)?;
    let bc = g.bc;
    if idx.n_s() < bc {
        return Err(Error::corrupt(
            "fewer black text characters than components",
        ));
    }
    let mut chars: Vec<Option<Symbol>> = vec![None; bc];
    let mut next = 0;
    for run in runs {
        if run.a < next || run.b < run.a || run.b >= bc {
            return Err(Error::corrupt(format!(
                "cover run {}..={} outside 0..{bc}",
                run.a, run.b
            )));
        }
        let base = idx.tau[run.a];
        let x = unfactorize(&run.phrases, idx.tau[run.b] + 1 - base)?;
        for c in run.a..=run.b {
            chars[c] = Some(x[idx.tau[c] - base]);
        }
        next = run.b + 1;
    }
    let sym = |v: usize| -> Result<Symbol> {
        if g.is_red(v) {
            return red_symbol(v);
        }
        let c = idx
            .component(v)
            .ok_or_else(|| Error::corrupt("black character outside the indexing"))?;
        Ok(chars[c].unwrap_or((sigma + c) as Symbol))
    };
    let p = (0..m).map(|x| sym(g.vp(x))).collect::<Result<_>>()?;
    let t = (0..n).map(|y| sym(g.vt(y))).collect::<Result<_>>()?;
    Ok(HashedStrings { p, t })
}

/// Window-relative occurrences (distance at most `k`) of a structured block.
#[allow(clippy::too_many_arguments)]
pub fn decode_structured(
    m: usize,
    sigma: usize,
    k: usize,
    cap: usize,
    mode: Mode,
    len: usize,
    a_count: usize,
    records: &[AlignmentRecord],
    runs: &[CoverRun],
) -> Result<Vec<Occurrence>> {
    let (s, g) = reconstruct_graph(m, len, a_count, records)?;
    if (mode == Mode::BcZero) != (g.bc == 0) {
        return Err(Error::corrupt(
            "block tag disagrees with the number of black components",
        ));
    }
    let h = build_hashed_strings(&s, &g, runs, sigma)?;
    let occ = find_occurrences(&h.p, &h.t, k, cap).occurrences;
    let leaked = occ
        .iter()
        .flat_map(|o| o.edit_infos.iter())
        .flat_map(|e| e.tuples.iter())
        .any(|e| {
            e.cx.is_some_and(|c| c as usize >= sigma) || e.cy.is_some_and(|c| c as usize >= sigma)
        });
    if leaked {
        return Err(Error::corrupt(
            "a placeholder symbol reached the reported edit information",
        ));
    }
    Ok(occ)
}

fn shift_occurrence(o: Occurrence, dy: isize) -> Occurrence {
    Occurrence {
        t: (o.t as isize + dy) as usize,
        t_end: (o.t_end as isize + dy) as usize,
        edit_infos: o
            .edit_infos
            .iter()
            .map(|e: &EditInfo| e.shifted_y(dy))
            .collect(),
        ..o
    }
}

/// Occurrences of one block in padded-text coordinates.
pub fn decode_block(
    h: &Header,
    geo: &Geometry,
    i: usize,
    block: &BlockSketch,
    cap: usize,
) -> Result<Vec<Occurrence>> {
    let b = geo.block_start(i);
    let (lo, occ) = match block {
        BlockSketch::Empty => return Ok(Vec::new()),
        BlockSketch::Raw {
            offset,
            pattern,
            text,
        } => {
            let lo = b + offset;
            if lo + text.len() > geo.n || pattern.len() != geo.m {
                return Err(Error::corrupt("raw block outside the text"));
            }
            (lo, find_occurrences(pattern, text, h.k, cap).occurrences)
        }
        BlockSketch::Structured {
            mode,
            offset,
            len,
            a_count,
            b_count,
            records,
            runs,
        } => {
            let lo = b + offset;
            if lo + len > geo.n || records.len() != 2 + a_count + b_count {
                return Err(Error::corrupt("structured block outside the text"));
            }
            (
                lo,
                decode_structured(
                    geo.m,
                    h.sigma(),
                    geo.k,
                    cap,
                    *mode,
                    *len,
                    *a_count,
                    records,
                    runs,
                )?,
            )
        }
    };
    Ok(occ
        .into_iter()
        .map(|o| shift_occurrence(o, lo as isize))
        .collect())
}

/// Every `k`-error occurrence of the encoded pattern in the encoded text.
pub fn decode(s: &Sketch, cap: usize) -> Result<OccurrenceReport> {
    let h = &s.header;
    if h.m > 0 && h.sigma() == 0 && h.n + h.m > 0 {
        return Err(Error::corrupt("non-empty strings over an empty alphabet"));
    }
    let geo = Geometry::of(h);
    if s.blocks.len() > geo.block_count().max(1) {
        return Err(Error::corrupt("more blocks than the text holds"));
    }
    let mut merged: BTreeMap<(usize, usize), Occurrence> = BTreeMap::new();
    for (i, block) in s.blocks.iter().enumerate() {
        for o in decode_block(h, &geo, i, block, cap)? {
            if o.dist > h.k || o.t < geo.shift {
                continue;
            }
            let o = shift_occurrence(o, -(geo.shift as isize));
            match merged.get(&(o.t, o.t_end)) {
                Some(prev) if *prev != o => {
                    return Err(Error::corrupt(format!(
                        "blocks disagree on the fragment {}..{}",
                        o.t, o.t_end
                    )));
                }
                Some(_) => {}
                None => {
                    merged.insert((o.t, o.t_end), o);
                }
            }
        }
    }
    Ok(OccurrenceReport {
        occurrences: merged.into_values().collect(),
    })
}
