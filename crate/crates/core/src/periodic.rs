//! Periods, primitivity and distances to periodic extensions `Q^∞`.

use crate::alphabet::Symbol;
use crate::error::{Error, Result};

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn border_table(x: &[Symbol]) -> Vec<usize> {
    let mut f = vec![0usize; x.len() + 1];
    let mut k = 0;
    for i in 1..x.len() {
        while k > 0 && x[i] != x[k] {
            k = f[k];
        }
        if x[i] == x[k] {
            k += 1;
        }
        f[i + 1] = k;
    }
    f
}

/// Smallest period of a non-empty string.
pub fn period(x: &[Symbol]) -> Result<usize> {
    if x.is_empty() {
        return Err(Error::InvalidArgument("period of the empty string".into()));
    }
    Ok(x.len() - border_table(x)[x.len()])
}

/// True unless `x` is `u^t` for some `t >= 2`.
pub fn is_primitive(x: &[Symbol]) -> Result<bool> {
    let p = period(x)?;
    Ok(p == x.len() || x.len() % p != 0)
}

/// `Q^∞[0..len)`.
pub fn periodic_extension(q: &[Symbol], len: usize) -> Vec<Symbol> {
    (0..len).map(|i| q[i % q.len()]).collect()
}

/// Last DP row of `s` against `text`, with a free or fixed start.
fn last_row(s: &[Symbol], text: &[Symbol], free_start: bool) -> Vec<usize> {
    let mut prev: Vec<usize> = if free_start {
        vec![0; text.len() + 1]
    } else {
        (0..=text.len()).collect()
    };
    let mut cur = vec![0; text.len() + 1];
    for i in 1..=s.len() {
        cur[0] = i;
        for j in 1..=text.len() {
            cur[j] = (prev[j - 1] + (s[i - 1] != text[j - 1]) as usize)
                .min(prev[j] + 1)
                .min(cur[j - 1] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev
}

// δ_E(S, Q^∞[0..j)) ≤ |S| at j = 0 and grows by at least j - |S|, so windows
// of length 2|S| + |Q| + 1 contain every minimiser.
fn window_len(s: &[Symbol], q: &[Symbol]) -> usize {
    2 * s.len() + q.len() + 1
}

/// `min_j δ_E(S, Q^∞[0..j))`.
pub fn edp(s: &[Symbol], q: &[Symbol]) -> Result<usize> {
    Ok(edp_with_end(s, q)?.0)
}

/// `edp` together with the smallest minimising `j`.
pub fn edp_with_end(s: &[Symbol], q: &[Symbol]) -> Result<(usize, usize)> {
    if q.is_empty() {
        return Err(Error::InvalidPeriod);
    }
    let text = periodic_extension(q, window_len(s, q));
    let row = last_row(s, &text, false);
    let (j, &d) = row
        .iter()
        .enumerate()
        .min_by_key(|&(j, &d)| (d, j))
        .unwrap();
    Ok((d, j))
}

/// Distance of `S` to its best match anywhere in `Q^∞`.
pub fn edl(s: &[Symbol], q: &[Symbol]) -> Result<usize> {
    if q.is_empty() {
        return Err(Error::InvalidPeriod);
    }
    let text = periodic_extension(q, window_len(s, q) + q.len());
    Ok(*last_row(s, &text, true).iter().min().unwrap())
}

/// `min δ_E(S, Q^∞[i..j|Q|))` over `i <= j|Q|`: matches ending at a period boundary.
pub fn eds(s: &[Symbol], q: &[Symbol]) -> Result<usize> {
    if q.is_empty() {
        return Err(Error::InvalidPeriod);
    }
    let text = periodic_extension(q, window_len(s, q) + q.len());
    let row = last_row(s, &text, true);
    Ok((0..row.len())
        .step_by(q.len())
        .map(|j| row[j])
        .min()
        .unwrap())
}
