//! Seeded workload generators for benches, examples and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Byte used for code `c`: lowercase letters up to 26 symbols, raw bytes above.
pub fn symbol_byte(c: usize, sigma: usize) -> u8 {
    if sigma <= 26 {
        b'a' + c as u8
    } else {
        c as u8
    }
}

pub fn random_string(rng: &mut impl Rng, len: usize, sigma: usize) -> Vec<u8> {
    (0..len)
        .map(|_| symbol_byte(rng.gen_range(0..sigma), sigma))
        .collect()
}

/// `s` after `edits` random substitutions, insertions and deletions.
pub fn mutate(rng: &mut impl Rng, s: &[u8], edits: usize, sigma: usize) -> Vec<u8> {
    let mut out = s.to_vec();
    for _ in 0..edits {
        let c = symbol_byte(rng.gen_range(0..sigma), sigma);
        match rng.gen_range(0..3) {
            0 if !out.is_empty() => {
                let i = rng.gen_range(0..out.len());
                out[i] = c;
            }
            1 if !out.is_empty() => {
                out.remove(rng.gen_range(0..out.len()));
            }
            _ => out.insert(rng.gen_range(0..=out.len()), c),
        }
    }
    out
}

/// A random pattern and a random text of length `n` carrying a few copies of
/// the pattern with at most `k` edits each.
pub fn planted(m: usize, n: usize, k: usize, sigma: usize, seed: u64) -> (Vec<u8>, Vec<u8>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_string(&mut rng, m, sigma);
    let mut t = random_string(&mut rng, n, sigma);
    let copies = rng.gen_range(0..=(n / m.max(1)).min(4));
    for _ in 0..copies {
        let edits = rng.gen_range(0..=k);
        let c = mutate(&mut rng, &p, edits, sigma);
        if c.len() > n {
            continue;
        }
        let at = rng.gen_range(0..=n - c.len());
        t[at..at + c.len()].copy_from_slice(&c);
    }
    (p, t)
}

/// Pattern and text that both follow one short random period, with up to
/// `k` pattern and `2k` text substitutions. These have many occurrences.
pub fn periodic(
    m: usize,
    n: usize,
    k: usize,
    sigma: usize,
    q_len: usize,
    seed: u64,
) -> (Vec<u8>, Vec<u8>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = random_string(&mut rng, q_len.max(1), sigma);
    let rot = rng.gen_range(0..q.len());
    let mut p: Vec<u8> = q.iter().cycle().skip(rot).take(m).copied().collect();
    let mut t: Vec<u8> = q.iter().cycle().take(n).copied().collect();
    for _ in 0..rng.gen_range(0..=2 * k) {
        let i = rng.gen_range(0..n);
        t[i] = symbol_byte(rng.gen_range(0..sigma), sigma);
    }
    for _ in 0..rng.gen_range(0..=k) {
        let i = rng.gen_range(0..m);
        p[i] = symbol_byte(rng.gen_range(0..sigma), sigma);
    }
    (p, t)
}
