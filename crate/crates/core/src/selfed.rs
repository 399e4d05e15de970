//! Self-edit distance: the cheapest alignment of a string onto itself that
//! never aligns a character with its own copy.
//!
//! Paths are kept in the half-plane `x >= y` (a mirrored path has the same
//! cost), so every match copies a character from strictly further left.

use crate::align::AlignmentPath;
use crate::alphabet::Symbol;

const INF: u32 = u32::MAX / 2;

/// Minimum self-alignment cost and one optimal path with `x >= y` throughout.
pub fn self_edit_distance(x: &[Symbol]) -> (usize, AlignmentPath) {
    let l = x.len();
    let w = l + 1;
    // d[i][j] for j <= i, stored in a full square for simplicity.
    let mut d = vec![INF; w * w];
    d[0] = 0;
    for i in 0..=l {
        for j in 0..=i {
            if i == 0 && j == 0 {
                continue;
            }
            let mut best = INF;
            if i > 0 && i - 1 >= j {
                best = best.min(d[(i - 1) * w + j] + 1);
            }
            if j > 0 {
                best = best.min(d[i * w + j - 1] + 1);
            }
            if i > j && j > 0 {
                best = best.min(d[(i - 1) * w + j - 1] + (x[i - 1] != x[j - 1]) as u32);
            }
            d[i * w + j] = best;
        }
    }
    let (mut i, mut j) = (l, l);
    let mut rev = vec![(i, j)];
    while i > 0 || j > 0 {
        let cur = d[i * w + j];
        if i > j && j > 0 && d[(i - 1) * w + j - 1] + (x[i - 1] != x[j - 1]) as u32 == cur {
            i -= 1;
            j -= 1;
        } else if i > 0 && i - 1 >= j && d[(i - 1) * w + j] + 1 == cur {
            i -= 1;
        } else {
            j -= 1;
        }
        rev.push((i, j));
    }
    rev.reverse();
    (d[l * w + l] as usize, AlignmentPath { pairs: rev })
}

pub fn selfed(x: &[Symbol]) -> usize {
    prefix_selfed(x, usize::MAX)
        .last()
        .copied()
        .flatten()
        .unwrap_or(0)
}

/// `out[b] = selfed(x[..b])` for every prefix, or `None` once it exceeds
/// `limit` (the sequence is non-decreasing, so later entries are `None` too).
/// Only the band `i - j <= limit` is explored.
pub fn prefix_selfed(x: &[Symbol], limit: usize) -> Vec<Option<usize>> {
    let l = x.len();
    let band = limit.min(l);
    let lim = limit.min(2 * l) as u32;
    // Row i holds d[i][i-band ..= i]; index by (i - j).
    let mut prev = vec![INF; band + 1];
    let mut cur = vec![INF; band + 1];
    let mut out = vec![None; l + 1];
    out[0] = Some(0);
    prev[0] = 0;
    for i in 1..=l {
        // off = i - j, j from i-band' up to i.
        let top = band.min(i);
        for off in (0..=top).rev() {
            let j = i - off;
            let mut best = INF;
            // delete from (i-1, j): offset off-1 in previous row, needs i-1 >= j.
            if off >= 1 {
                best = best.min(prev[off - 1].saturating_add(1));
            }
            // insert from (i, j-1): offset off+1 in current row.
            if j > 0 && off < top {
                best = best.min(cur[off + 1].saturating_add(1));
            }
            // diagonal from (i-1, j-1): same offset in previous row, only off > 0.
            if off > 0 && j > 0 {
                best = best.min(prev[off].saturating_add((x[i - 1] != x[j - 1]) as u32));
            }
            cur[off] = best.min(INF);
        }
        for v in cur.iter_mut().skip(top + 1) {
            *v = INF;
        }
        let diag = cur[0];
        if diag > lim {
            break;
        }
        out[i] = Some(diag as usize);
        std::mem::swap(&mut prev, &mut cur);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Vec<Symbol> {
        x.bytes().map(|b| b as Symbol).collect()
    }

    #[test]
    fn small_values() {
        assert_eq!(self_edit_distance(&[]).0, 0);
        assert_eq!(self_edit_distance(&s("a")).0, 2);
        assert_eq!(self_edit_distance(&s("aaaa")).0, 2);
        assert_eq!(self_edit_distance(&s("abab")).0, 4);
        assert_eq!(self_edit_distance(&s("abc")).0, 4);
    }

    #[test]
    fn normalized_path_never_matches_itself() {
        let x = s("abaababaab");
        let (c, p) = self_edit_distance(&x);
        assert_eq!(p.cost(&x, &x), c);
        assert!(p.pairs.iter().all(|&(a, b)| a >= b));
        for w in p.pairs.windows(2) {
            assert!(!(w[0].0 == w[0].1 && w[1] == (w[0].0 + 1, w[0].1 + 1)));
        }
    }

    #[test]
    fn prefixes_agree_with_full_dp() {
        let x = s("abaabbabbbaababab");
        let all = prefix_selfed(&x, usize::MAX);
        for b in 0..=x.len() {
            assert_eq!(all[b], Some(self_edit_distance(&x[..b]).0), "prefix {b}");
        }
        let capped = prefix_selfed(&x, 5);
        for b in 0..=x.len() {
            let v = self_edit_distance(&x[..b]).0;
            assert_eq!(capped[b], (v <= 5).then_some(v));
        }
    }
}
