//! The sending side: normalization, block split, per-block construction and
//! assembly of the sketch.

use rayon::prelude::*;

use crate::alphabet::{Alphabet, Symbol};
use crate::builder::{
    analyze, build_alignment_set, build_periodic_alignment_set, ceil_log2, find_approximate_period,
    normalize_instance, BuildTrace, PeriodicTrace,
};
use crate::codec::{AlignmentRecord, BlockSketch, CoverRun, Header, Mode, Sketch};
use crate::cover::{factorize, span};
use crate::decoder::{decode_structured, Geometry};
use crate::error::Result;
use crate::graph::AlignmentSet;
use crate::matcher::{
    find_hits, find_occurrences, occurrence_buckets, Hit, Occurrence, DEFAULT_CAP,
};

pub const RAW_DIVISOR: usize = 200;
pub const BUCKET_FACTOR: usize = 963_068;

/// When to use the periodic construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodicPolicy {
    /// Only when the occurrence buckets outnumber `bucket_factor * k`.
    Auto,
    /// Whenever an approximate period is found.
    Prefer,
    Never,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodeOptions {
    /// Send `P` and `T` verbatim when `raw_divisor * k > m`; `0` disables.
    pub raw_divisor: usize,
    pub bucket_factor: usize,
    pub periodic: PeriodicPolicy,
    /// Decode every block before emitting it and fall back to a raw block
    /// on any disagreement with the matcher.
    pub self_check: bool,
    /// Cap used by the self-check.
    pub cap: usize,
    /// Worker threads for block encoding; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions {
            raw_divisor: RAW_DIVISOR,
            bucket_factor: BUCKET_FACTOR,
            periodic: PeriodicPolicy::Auto,
            self_check: true,
            cap: DEFAULT_CAP,
            jobs: None,
        }
    }
}

impl EncodeOptions {
    /// Defaults with the verbatim cutoff switched off, so that small
    /// instances exercise the structured encoding.
    pub fn structured() -> Self {
        EncodeOptions {
            raw_divisor: 0,
            ..Default::default()
        }
    }
}

/// What happened to one block.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlockReport {
    pub index: usize,
    /// `[l_i, r_i)` in padded-text coordinates, when occurrences exist.
    pub span: Option<(usize, usize)>,
    pub occurrences: usize,
    pub buckets: usize,
    pub set_size: usize,
    pub set_cost: usize,
    pub bc: usize,
    pub cover_size: usize,
    pub cover_full: bool,
    /// The bucket test asked for the periodic construction but none applied.
    pub periodic_fallback: bool,
    /// The structured encoding failed the self-check and was replaced.
    pub escalated: Option<String>,
    pub trace: Option<BuildTrace>,
    pub periodic: Option<PeriodicTrace>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodeReport {
    pub raw: bool,
    pub k: usize,
    pub blocks: Vec<BlockReport>,
}

impl EncodeReport {
    pub fn escalations(&self) -> usize {
        self.blocks.iter().filter(|b| b.escalated.is_some()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoded {
    pub sketch: Sketch,
    pub report: EncodeReport,
}

/// Whether the instance is sent verbatim.
pub fn is_raw(m: usize, k: usize, opts: &EncodeOptions) -> bool {
    let geo = Geometry::new(m, m, k);
    let k = geo.k;
    m == 0
        || (opts.raw_divisor > 0 && opts.raw_divisor * k > m)
        || m.div_ceil(3) <= k
        || geo.window_len + 2 * k > 2 * m
}

pub fn encode(p: &[u8], t: &[u8], k: usize) -> Sketch {
    encode_with(p, t, k, &EncodeOptions::default()).sketch
}

pub fn encode_with(p: &[u8], t: &[u8], k: usize, opts: &EncodeOptions) -> Encoded {
    let alphabet = Alphabet::from_inputs(&[p, t]);
    let ps = alphabet.encode(p).expect("alphabet covers the pattern");
    let ts = alphabet.encode(t).expect("alphabet covers the text");
    encode_symbols(alphabet.table().to_vec(), &ps, &ts, k, opts)
}

/// Encodes an instance already mapped to codes below `alphabet.len()`.
pub fn encode_symbols(
    alphabet: Vec<u8>,
    p: &[Symbol],
    t: &[Symbol],
    k: usize,
    opts: &EncodeOptions,
) -> Encoded {
    let header = Header {
        n: t.len(),
        m: p.len(),
        k,
        alphabet,
    };
    let norm = normalize_instance(p, t, k);
    let geo = Geometry::of(&header);
    if t.is_empty() && p.len() > k {
        // Nothing to find: the header alone says so.
        return Encoded {
            sketch: Sketch {
                header,
                blocks: Vec::new(),
            },
            report: EncodeReport {
                raw: false,
                k: geo.k,
                blocks: Vec::new(),
            },
        };
    }
    if is_raw(p.len(), k, opts) {
        let block = BlockSketch::Raw {
            offset: 0,
            pattern: norm.p.clone(),
            text: norm.t.clone(),
        };
        return Encoded {
            sketch: Sketch {
                header,
                blocks: vec![block],
            },
            report: EncodeReport {
                raw: true,
                k: geo.k,
                blocks: Vec::new(),
            },
        };
    }
    let sigma = header.sigma();
    let run = || -> Vec<(BlockSketch, BlockReport)> {
        // The self-check needs the full answer; otherwise positions suffice.
        let occ = opts
            .self_check
            .then(|| find_occurrences(&norm.p, &norm.t, geo.k, opts.cap).occurrences);
        let hits = match &occ {
            Some(o) => o
                .iter()
                .map(|o| Hit {
                    t: o.t,
                    t_end: o.t_end,
                    dist: o.dist,
                })
                .collect(),
            None => find_hits(&norm.p, &norm.t, geo.k),
        };
        (0..geo.block_count())
            .into_par_iter()
            .map(|i| {
                encode_block(
                    &norm.p,
                    &norm.t,
                    &geo,
                    i,
                    &hits,
                    occ.as_deref(),
                    sigma,
                    opts,
                )
            })
            .collect()
    };
    let results = match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    };
    let (blocks, reports): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    Encoded {
        sketch: Sketch { header, blocks },
        report: EncodeReport {
            raw: false,
            k: geo.k,
            blocks: reports,
        },
    }
}

/// Occurrences with both ends inside the window of block `i`.
pub fn window_hits(geo: &Geometry, i: usize, hits: &[Hit]) -> Vec<Hit> {
    let (b, e) = geo.window(i);
    let from = hits.partition_point(|h| h.t < b);
    hits[from..]
        .iter()
        .take_while(|h| h.t <= e)
        .filter(|h| h.t_end <= e)
        .copied()
        .collect()
}

pub fn encode_block(
    p: &[Symbol],
    t: &[Symbol],
    geo: &Geometry,
    i: usize,
    hits: &[Hit],
    oracle: Option<&[Occurrence]>,
    sigma: usize,
    opts: &EncodeOptions,
) -> (BlockSketch, BlockReport) {
    let mut report = BlockReport {
        index: i,
        ..Default::default()
    };
    let local = window_hits(geo, i, hits);
    if local.is_empty() {
        return (BlockSketch::Empty, report);
    }
    let b = geo.block_start(i);
    let lo = local.iter().map(|h| h.t).min().unwrap();
    let hi = local.iter().map(|h| h.t_end).max().unwrap();
    report.span = Some((lo, hi));
    report.occurrences = local.len();
    let window = &t[lo..hi];
    let shifted: Vec<Hit> = local
        .iter()
        .map(|h| Hit {
            t: h.t - lo,
            t_end: h.t_end - lo,
            ..*h
        })
        .collect();
    let raw = || BlockSketch::Raw {
        offset: lo - b,
        pattern: p.to_vec(),
        text: window.to_vec(),
    };
    let block = match structured_block(p, window, geo.k, &shifted, opts, &mut report) {
        Ok(body) => body,
        Err(e) => {
            report.escalated = Some(e.to_string());
            return (raw(), report);
        }
    };
    let block = match block {
        BlockSketch::Structured {
            offset: _,
            mode,
            len,
            a_count,
            b_count,
            records,
            runs,
        } => BlockSketch::Structured {
            mode,
            offset: lo - b,
            len,
            a_count,
            b_count,
            records,
            runs,
        },
        other => other,
    };
    if opts.self_check {
        if let BlockSketch::Structured {
            mode,
            len,
            a_count,
            records,
            runs,
            ..
        } = &block
        {
            let got = decode_structured(
                p.len(),
                sigma,
                geo.k,
                opts.cap,
                *mode,
                *len,
                *a_count,
                records,
                runs,
            );
            let want: Vec<Occurrence> = match oracle {
                Some(all) => {
                    let from = all.partition_point(|o| o.t < lo);
                    all[from..]
                        .iter()
                        .take_while(|o| o.t <= hi)
                        .filter(|o| o.t_end <= hi)
                        .map(|o| Occurrence {
                            t: o.t - lo,
                            t_end: o.t_end - lo,
                            edit_infos: o
                                .edit_infos
                                .iter()
                                .map(|e| e.shifted_y(-(lo as isize)))
                                .collect(),
                            ..o.clone()
                        })
                        .collect()
                }
                None => find_occurrences(p, window, geo.k, opts.cap).occurrences,
            };
            let ok = matches!(&got, Ok(g) if *g == want);
            if !ok {
                report.escalated = Some(match got {
                    Err(e) => e.to_string(),
                    Ok(_) => "decoded occurrences differ from the matcher".into(),
                });
                return (raw(), report);
            }
        }
    }
    (block, report)
}

/// Builds the alignment set, weights and cover of one window and packs them.
fn structured_block(
    p: &[Symbol],
    window: &[Symbol],
    k: usize,
    hits: &[Hit],
    opts: &EncodeOptions,
    report: &mut BlockReport,
) -> Result<BlockSketch> {
    let starts = hits.iter().map(|h| h.t).collect();
    let buckets = occurrence_buckets(&starts, k).len();
    report.buckets = buckets;
    let general = buckets <= opts.bucket_factor.saturating_mul(k) || k >= 2 * ceil_log2(p.len());
    let want_periodic = match opts.periodic {
        PeriodicPolicy::Auto => !general,
        PeriodicPolicy::Prefer => true,
        PeriodicPolicy::Never => false,
    };
    let mut chosen: Option<(AlignmentSet, Mode)> = None;
    if want_periodic {
        if let Some(q) = find_approximate_period(p, k) {
            if let Some((s, tr)) = build_periodic_alignment_set(p, window, k, &q)? {
                report.periodic = Some(tr);
                chosen = Some((s, Mode::Periodic));
            }
        }
        if chosen.is_none() && opts.periodic == PeriodicPolicy::Auto {
            report.periodic_fallback = true;
        }
    }
    let (s, mode) = match chosen {
        Some(c) => c,
        None => {
            let (s, trace) = build_alignment_set(p, window, k)?;
            report.trace = Some(trace);
            (s, Mode::General)
        }
    };
    let an = analyze(p, window, &s)?;
    report.set_size = s.len();
    report.set_cost = s.cost();
    report.bc = an.bc();
    report.cover_size = an.cover.members.len();
    report.cover_full = an.cover.full;
    let records = s
        .iter()
        .map(|a| AlignmentRecord {
            x: a.start().0,
            x_end: a.end().0,
            y: a.start().1,
            info: a.info.clone(),
        })
        .collect();
    let (mode, runs) = match &an.indexing {
        None => (Mode::BcZero, Vec::new()),
        Some(idx) => {
            let runs = an
                .cover
                .runs
                .iter()
                .map(|&(a, b)| CoverRun {
                    a,
                    b,
                    phrases: factorize(span(window, idx, a, b)),
                })
                .collect();
            (mode, runs)
        }
    };
    Ok(BlockSketch::Structured {
        mode,
        offset: 0,
        len: window.len(),
        a_count: s.a_list.len(),
        b_count: s.b_list.len(),
        records,
        runs,
    })
}
