//! The adversarial family behind the size lower bound: `P = 0^m` and a text
//! made of length-`m` blocks with at most `k` non-zero symbols each.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::align::{enumerate_optimal_alignments, reconstruct_target, Fragment};
use crate::alphabet::Symbol;
use crate::codec::serialize_with_breakdown;
use crate::decoder::decode;
use crate::encoder::{encode_symbols, EncodeOptions};
use crate::error::{Error, Result};
use crate::matcher::find_occurrences;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversarialInstance {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub sigma: usize,
    pub seed: u64,
    pub p: Vec<Symbol>,
    pub t: Vec<Symbol>,
}

impl AdversarialInstance {
    pub fn block_count(&self) -> usize {
        self.n / self.m
    }

    pub fn block(&self, q: usize) -> &[Symbol] {
        &self.t[q * self.m..(q + 1) * self.m]
    }
}

pub fn generate(
    m: usize,
    n: usize,
    k: usize,
    sigma: usize,
    seed: u64,
) -> Result<AdversarialInstance> {
    if sigma < 2 || k == 0 || k > m || m > n || sigma > 256 {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= sigma <= 256 and 0 < k <= m <= n, got m={m} n={n} k={k} sigma={sigma}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = vec![0; n];
    for q in 0..n / m {
        let c = rng.gen_range(0..=k);
        for i in sample(&mut rng, m, c).into_iter() {
            t[q * m + i] = rng.gen_range(1..sigma) as Symbol;
        }
    }
    Ok(AdversarialInstance {
        m,
        n,
        k,
        sigma,
        seed,
        p: vec![0; m],
        t,
    })
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 64;
    ((x >> shift).to_u64().unwrap() as f64).log2() + shift as f64
}

/// `floor(n/m) * log2 sum_{i<=k} C(m,i) (sigma-1)^i`, exact up to the final
/// logarithm.
pub fn entropy_bound_bits(m: usize, n: usize, k: usize, sigma: usize) -> f64 {
    let mut sum = BigUint::zero();
    let mut term = BigUint::one();
    for i in 0..=k.min(m) {
        if i > 0 {
            term = term * BigUint::from(m - i + 1) * BigUint::from(sigma - 1) / BigUint::from(i);
        }
        sum += &term;
    }
    let per_block = log2_big(&sum);
    (n / m) as f64 * per_block
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub sigma: usize,
    pub seed: u64,
    pub bits_measured: usize,
    pub header_bits: usize,
    pub bits_bound: f64,
    pub ratio: f64,
    pub decode_ok: bool,
}

pub const CSV_HEADER: &str = "m,n,k,sigma,seed,bits_measured,bits_bound,ratio,decode_ok";

impl ExperimentRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.3},{:.4},{}",
            self.m,
            self.n,
            self.k,
            self.sigma,
            self.seed,
            self.bits_measured,
            self.bits_bound,
            self.ratio,
            self.decode_ok
        )
    }
}

/// Block `q` recovered from the decoded edit information of `T[qm..(q+1)m)`.
pub fn recover_blocks(
    inst: &AdversarialInstance,
    report: &crate::matcher::OccurrenceReport,
) -> Option<Vec<Symbol>> {
    let m = inst.m;
    let mut t = vec![0; inst.n];
    for q in 0..inst.block_count() {
        let o = report
            .occurrences
            .iter()
            .find(|o| o.t == q * m && o.t_end == (q + 1) * m)?;
        let info = o.edit_infos.first()?;
        let s = reconstruct_target(
            &inst.p,
            &info.shifted_y(-((q * m) as isize)),
            (0, 0),
            (m, m),
        )
        .ok()?;
        t[q * m..(q + 1) * m].copy_from_slice(&s);
    }
    Some(t)
}

/// Each block has exactly one optimal alignment from the pattern.
pub fn unique_optimal_alignments(inst: &AdversarialInstance) -> bool {
    (0..inst.block_count()).all(|q| {
        enumerate_optimal_alignments(Fragment::whole(&inst.p), Fragment::whole(inst.block(q)), 2)
            .paths
            .len()
            == 1
    })
}

/// Encodes and decodes one instance and compares with the matcher and with
/// the generated blocks.
pub fn run_instance(
    inst: &AdversarialInstance,
    opts: &EncodeOptions,
    cap: usize,
) -> Result<ExperimentRow> {
    let table: Vec<u8> = (0..inst.sigma).map(|c| c as u8).collect();
    let enc = encode_symbols(table, &inst.p, &inst.t, inst.k, opts);
    let (bytes, br) = serialize_with_breakdown(&enc.sketch);
    let sketch = crate::codec::deserialize_sketch(&bytes)?;
    let got = decode(&sketch, cap)?;
    let want = find_occurrences(&inst.p, &inst.t, inst.k, cap);
    let full = inst.block_count() * inst.m;
    let recovered = recover_blocks(inst, &got).is_some_and(|t| t[..full] == inst.t[..full]);
    let bound = entropy_bound_bits(inst.m, inst.n, inst.k, inst.sigma);
    Ok(ExperimentRow {
        m: inst.m,
        n: inst.n,
        k: inst.k,
        sigma: inst.sigma,
        seed: inst.seed,
        bits_measured: br.total_bits,
        header_bits: br.header_bits,
        bits_bound: bound,
        ratio: if bound > 0.0 {
            br.total_bits as f64 / bound
        } else {
            f64::INFINITY
        },
        decode_ok: got == want && recovered,
    })
}

/// One row per grid cell and trial, in grid order; trial `i` uses `seed + i`.
pub fn run_experiment(
    grid: &[(usize, usize, usize, usize)],
    trials: usize,
    seed: u64,
    opts: &EncodeOptions,
    cap: usize,
) -> Result<Vec<ExperimentRow>> {
    let mut rows = Vec::new();
    for &(m, n, k, sigma) in grid {
        for i in 0..trials as u64 {
            let inst = generate(m, n, k, sigma, seed + i)?;
            rows.push(run_instance(&inst, opts, cap)?);
        }
    }
    Ok(rows)
}

/// Parses `"m,n,k,sigma;m,n,k,sigma;..."`.
pub fn parse_grid(spec: &str) -> Result<Vec<(usize, usize, usize, usize)>> {
    spec.split(';')
        .filter(|c| !c.trim().is_empty())
        .map(|cell| {
            let v: Vec<usize> = cell
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::InvalidArgument(format!("grid cell {cell:?}: {e}")))?;
            match v[..] {
                [m, n, k, s] => Ok((m, n, k, s)),
                _ => Err(Error::InvalidArgument(format!(
                    "grid cell {cell:?} needs four numbers"
                ))),
            }
        })
        .collect()
}
