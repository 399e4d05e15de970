//! Ground-truth k-error occurrences with the edit information of every
//! optimal alignment.

use std::collections::BTreeSet;

use crate::align::{dfs_optimal, Edit, EditInfo};
use crate::alphabet::{Alphabet, Symbol};

pub const DEFAULT_CAP: usize = 64;

const INF: u32 = u32::MAX / 2;

/// A fragment `T[t..t_end)` within distance `dist` of the pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Occurrence {
    pub t: usize,
    pub t_end: usize,
    pub dist: usize,
    /// Edit information of the optimal alignments, in lexicographic order of
    /// their paths, at most `cap` of them.
    pub edit_infos: Vec<EditInfo>,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OccurrenceReport {
    pub occurrences: Vec<Occurrence>,
}

impl OccurrenceReport {
    pub fn starts(&self) -> BTreeSet<usize> {
        self.occurrences.iter().map(|o| o.t).collect()
    }

    pub fn len(&self) -> usize {
        self.occurrences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occurrences.is_empty()
    }
}

/// `{ floor(t / k) : t in starts }`.
pub fn occurrence_buckets(starts: &BTreeSet<usize>, k: usize) -> BTreeSet<usize> {
    assert!(k >= 1, "bucket width must be positive");
    starts.iter().map(|t| t / k).collect()
}

/// A located fragment without edit information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hit {
    pub t: usize,
    pub t_end: usize,
    pub dist: usize,
}

/// All `(t, t')` with `ed(P, T[t..t')) <= k`, sorted by `(t, t')`.
/// One banded DP per start position.
pub fn find_hits(p: &[Symbol], t: &[Symbol], k: usize) -> Vec<Hit> {
    let (m, n) = (p.len(), t.len());
    let k = k.min(m + n);
    let width = 2 * k + 1;
    let mut hits = Vec::new();
    let mut prev = vec![INF; width];
    let mut cur = vec![INF; width];
    for s in 0..=n {
        let l = (n - s).min(m + k);
        // Row i, slot d holds column j = i + d - k.
        for (d, v) in prev.iter_mut().enumerate() {
            *v = if d >= k && d - k <= l {
                (d - k) as u32
            } else {
                INF
            };
        }
        let mut alive = true;
        for i in 1..=m {
            let mut row_min = INF;
            for d in 0..width {
                let j = i as isize + d as isize - k as isize;
                if j < 0 || j as usize > l {
                    cur[d] = INF;
                    continue;
                }
                let j = j as usize;
                let v = if j == 0 {
                    i as u32
                } else {
                    let mut best = prev[d] + (p[i - 1] != t[s + j - 1]) as u32;
                    if d + 1 < width {
                        best = best.min(prev[d + 1] + 1);
                    }
                    if d >= 1 {
                        best = best.min(cur[d - 1] + 1);
                    }
                    best.min(INF)
                };
                cur[d] = v;
                row_min = row_min.min(v);
            }
            std::mem::swap(&mut prev, &mut cur);
            if row_min as usize > k {
                alive = false;
                break;
            }
        }
        if !alive {
            continue;
        }
        for d in 0..width {
            let j = m as isize + d as isize - k as isize;
            if j < 0 || j as usize > l {
                continue;
            }
            if (prev[d] as usize) <= k {
                hits.push(Hit {
                    t: s,
                    t_end: s + j as usize,
                    dist: prev[d] as usize,
                });
            }
        }
    }
    hits
}

/// Suffix-cost table towards a fixed end `e`: `R[i][j] = ed(P[i..], T[j..e))`
/// restricted to the band `|(e - j) - (m - i)| <= k`.
struct SuffixBand {
    k: usize,
    width: usize,
    e: usize,
    m: usize,
    rows: Vec<u32>,
}

impl SuffixBand {
    fn build(p: &[Symbol], t: &[Symbol], e: usize, k: usize) -> Self {
        let m = p.len();
        let width = 2 * k + 1;
        let mut rows = vec![INF; (m + 1) * width];
        let col =
            |i: usize, d: usize| i as isize + e as isize - m as isize + d as isize - k as isize;
        for i in (0..=m).rev() {
            for d in (0..width).rev() {
                let j = col(i, d);
                if j < 0 || j as usize > e {
                    continue;
                }
                let j = j as usize;
                let v = if i == m {
                    (e - j) as u32
                } else {
                    let below = (i + 1) * width;
                    let mut best = INF;
                    if j < e {
                        best = best.min(rows[below + d] + (p[i] != t[j]) as u32);
                        if d + 1 < width {
                            best = best.min(rows[i * width + d + 1] + 1);
                        }
                    }
                    if d >= 1 {
                        best = best.min(rows[below + d - 1] + 1);
                    }
                    best.min(INF)
                };
                rows[i * width + d] = v;
            }
        }
        SuffixBand {
            k,
            width,
            e,
            m,
            rows,
        }
    }

    fn get(&self, i: usize, j: usize) -> u32 {
        let d = j as isize - i as isize - self.e as isize + self.m as isize + self.k as isize;
        if d < 0 || d as usize >= self.width || i > self.m || j > self.e {
            return u32::MAX;
        }
        let v = self.rows[i * self.width + d as usize];
        if v >= INF {
            u32::MAX
        } else {
            v
        }
    }
}

/// Every k-error occurrence with up to `cap` optimal edit informations each.
pub fn find_occurrences(p: &[Symbol], t: &[Symbol], k: usize, cap: usize) -> OccurrenceReport {
    assert!(cap >= 1, "cap must be positive");
    let k = k.min(p.len() + t.len());
    let hits = find_hits(p, t, k);
    let mut by_end: Vec<Hit> = hits.clone();
    by_end.sort_by_key(|h| (h.t_end, h.t));
    let mut occurrences = Vec::with_capacity(hits.len());
    let mut i = 0;
    while i < by_end.len() {
        let e = by_end[i].t_end;
        let band = SuffixBand::build(p, t, e, k);
        while i < by_end.len() && by_end[i].t_end == e {
            let h = by_end[i];
            let ys = &t[h.t..e];
            let mut edit_infos = Vec::new();
            let mut truncated = false;
            dfs_optimal(
                &|a, b| band.get(a, b + h.t),
                p,
                ys,
                &mut vec![(0, 0)],
                &mut Vec::new(),
                &mut |_, edits| {
                    if edit_infos.len() == cap {
                        truncated = true;
                        return true;
                    }
                    let tuples = edits.iter().map(|e| Edit { y: e.y + h.t, ..*e }).collect();
                    edit_infos.push(EditInfo { tuples });
                    false
                },
            );
            occurrences.push(Occurrence {
                t: h.t,
                t_end: e,
                dist: h.dist,
                edit_infos,
                truncated,
            });
            i += 1;
        }
    }
    occurrences.sort_by_key(|o| (o.t, o.t_end));
    OccurrenceReport { occurrences }
}

/// `out[e] = min_s ed(P, T[s..e))`, the classic free-start DP.
/// [`find_occurrences`] on raw bytes, with symbols coded by the sorted
/// alphabet of `p` and `t` as the sketch header does.
pub fn find_occurrences_bytes(p: &[u8], t: &[u8], k: usize, cap: usize) -> OccurrenceReport {
    let a = Alphabet::from_inputs(&[p, t]);
    find_occurrences(
        &a.encode(p).expect("pattern in alphabet"),
        &a.encode(t).expect("text in alphabet"),
        k,
        cap,
    )
}

pub fn best_distance_per_end(p: &[Symbol], t: &[Symbol]) -> Vec<usize> {
    let m = p.len();
    let mut col: Vec<usize> = (0..=m).collect();
    let mut out = vec![m; t.len() + 1];
    for (e, &c) in t.iter().enumerate() {
        let mut diag = col[0];
        col[0] = 0;
        for i in 1..=m {
            let next = (diag + (p[i - 1] != c) as usize)
                .min(col[i] + 1)
                .min(col[i - 1] + 1);
            diag = col[i];
            col[i] = next;
        }
        out[e + 1] = col[m];
    }
    out
}
