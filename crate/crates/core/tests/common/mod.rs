#![allow(dead_code)]

use pmwe::align::{Edit, EditInfo};
use pmwe::alphabet::Symbol;
use pmwe::codec::{AlignmentRecord, BlockSketch, CoverRun, Header, Mode, Sketch};
use pmwe::cover::Phrase;
use rand::seq::index::sample;
use rand::Rng;

pub fn random_symbols(rng: &mut impl Rng, len: usize, sigma: usize) -> Vec<Symbol> {
    (0..len)
        .map(|_| rng.gen_range(0..sigma) as Symbol)
        .collect()
}

/// Minimum self-alignment cost by the plain DP that forbids only the
/// diagonal steps `(i, i) -> (i+1, i+1)`, with no symmetry shortcut.
pub fn selfed_oracle(x: &[Symbol]) -> usize {
    let l = x.len();
    let inf = usize::MAX / 2;
    let mut d = vec![vec![inf; l + 1]; l + 1];
    d[0][0] = 0;
    for i in 0..=l {
        for j in 0..=l {
            let cur = d[i][j];
            if cur == inf {
                continue;
            }
            if i < l {
                d[i + 1][j] = d[i + 1][j].min(cur + 1);
            }
            if j < l {
                d[i][j + 1] = d[i][j + 1].min(cur + 1);
            }
            if i < l && j < l && i != j {
                let c = cur + (x[i] != x[j]) as usize;
                d[i + 1][j + 1] = d[i + 1][j + 1].min(c);
            }
        }
    }
    d[l][l]
}

pub fn has_period(x: &[Symbol], p: usize) -> bool {
    p > 0 && (p..x.len()).all(|i| x[i] == x[i - p])
}

pub fn exact_occurrences(p: &[Symbol], t: &[Symbol]) -> Vec<usize> {
    if p.len() > t.len() {
        return Vec::new();
    }
    (0..=t.len() - p.len())
        .filter(|&i| &t[i..i + p.len()] == p)
        .collect()
}

fn random_info(rng: &mut impl Rng, start: (usize, usize), x_end: usize, sigma: usize) -> EditInfo {
    let (mut x, mut y) = start;
    let mut tuples = Vec::new();
    while x < x_end && rng.gen_bool(0.6) {
        let gap = rng.gen_range(0..=(x_end - x).min(6));
        x += gap;
        y += gap;
        let room = x < x_end;
        let e = match rng.gen_range(0..3) {
            0 if room => {
                let e = Edit {
                    x,
                    cx: Some(rng.gen_range(0..sigma) as Symbol),
                    y,
                    cy: None,
                };
                x += 1;
                e
            }
            2 if room && sigma >= 2 => {
                let a = rng.gen_range(0..sigma) as Symbol;
                let b = (a + rng.gen_range(1..sigma) as Symbol) % sigma as Symbol;
                let e = Edit {
                    x,
                    cx: Some(a),
                    y,
                    cy: Some(b),
                };
                x += 1;
                y += 1;
                e
            }
            _ => {
                let e = Edit {
                    x,
                    cx: None,
                    y,
                    cy: Some(rng.gen_range(0..sigma) as Symbol),
                };
                y += 1;
                e
            }
        };
        tuples.push(e);
    }
    EditInfo { tuples }
}

fn random_phrases(rng: &mut impl Rng, sigma: usize, limit: usize) -> Vec<Phrase> {
    (0..rng.gen_range(0..6))
        .map(|_| {
            if rng.gen_bool(0.5) {
                Phrase::Literal(rng.gen_range(0..sigma) as Symbol)
            } else {
                Phrase::Copy {
                    delta: rng.gen_range(1..=limit + 1),
                    len: rng.gen_range(1..=limit + 1),
                }
            }
        })
        .collect()
}

/// A sketch whose fields respect the format's ranges but need not describe
/// any real instance.
pub fn fuzz_sketch(rng: &mut impl Rng) -> Sketch {
    let sigma = rng.gen_range(1..=12);
    let mut alphabet: Vec<u8> = sample(rng, 256, sigma)
        .into_iter()
        .map(|b| b as u8)
        .collect();
    alphabet.sort_unstable();
    let m = rng.gen_range(1..60);
    let n = rng.gen_range(0..200);
    let limit = n.max(m) + 1;
    let header = Header {
        n,
        m,
        k: rng.gen_range(0..m + 3),
        alphabet,
    };
    let blocks = (0..rng.gen_range(0..5))
        .map(|_| match rng.gen_range(0..5) {
            0 => BlockSketch::Empty,
            1 => BlockSketch::Raw {
                offset: rng.gen_range(0..=limit),
                pattern: random_symbols(rng, m, sigma),
                text: {
                    let len = rng.gen_range(0..=limit.min(80));
                    random_symbols(rng, len, sigma)
                },
            },
            tag => {
                let mode = [Mode::BcZero, Mode::General, Mode::Periodic][tag - 2];
                let len = rng.gen_range(0..=limit);
                let (a_count, b_count) = (rng.gen_range(0..3), rng.gen_range(0..3));
                let records = (0..2 + a_count + b_count)
                    .map(|_| {
                        let x = rng.gen_range(0..=m);
                        let x_end = rng.gen_range(x..=m);
                        let y = rng.gen_range(0..=len);
                        AlignmentRecord {
                            x,
                            x_end,
                            y,
                            info: random_info(rng, (x, y), x_end, sigma),
                        }
                    })
                    .collect();
                let mut runs = Vec::new();
                if mode != Mode::BcZero {
                    let mut next = 0;
                    for _ in 0..rng.gen_range(0..4) {
                        let a = next + rng.gen_range(0..=limit.min(5));
                        let b = a + rng.gen_range(0..=limit.min(5));
                        runs.push(CoverRun {
                            a,
                            b,
                            phrases: random_phrases(rng, sigma, limit),
                        });
                        next = b + 1;
                    }
                }
                BlockSketch::Structured {
                    mode,
                    offset: rng.gen_range(0..=limit),
                    len,
                    a_count,
                    b_count,
                    records,
                    runs,
                }
            }
        })
        .collect();
    Sketch { header, blocks }
}
