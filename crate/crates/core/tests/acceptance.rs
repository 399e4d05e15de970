//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! `cargo test --test acceptance` runs everything; extra arguments select
//! criteria by number (`cargo test --test acceptance -- 1 7`).

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pmwe::align::{edit_distance, edit_distance_value, Fragment, Op};
use pmwe::alphabet::Symbol;
use pmwe::builder::{
    analyze, build_periodic_alignment_set, ceil_log2, find_approximate_period, Phase,
};
use pmwe::codec::{serialize_with_breakdown, Mode};
use pmwe::encoder::{encode_with, EncodeOptions, PeriodicPolicy};
use pmwe::instances::{mutate, periodic, planted};
use pmwe::lowerbound::{entropy_bound_bits, generate, run_instance, unique_optimal_alignments};
use pmwe::matcher::{find_hits, find_occurrences_bytes};
use pmwe::periodic::{gcd, periodic_extension};
use pmwe::selfed::{prefix_selfed, self_edit_distance, selfed};
use pmwe::{decode, deserialize_sketch, serialize_sketch};

use common::{exact_occurrences, fuzz_sketch, has_period, random_symbols, selfed_oracle};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn no_check() -> EncodeOptions {
    EncodeOptions {
        self_check: false,
        ..EncodeOptions::structured()
    }
}

fn mode_counts(enc: &pmwe::encoder::Encoded, into: &mut BTreeMap<&'static str, usize>) {
    for b in &enc.sketch.blocks {
        *into.entry(b.mode().name()).or_default() += 1;
    }
}

/// Exact agreement between decode(encode(P, T, k)) and the matcher on random
/// instances, a fifth of them periodic with many occurrences.
fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (total, cap) = (1000, 64);
    let mut bad = Vec::new();
    let mut modes = BTreeMap::new();
    let mut occurrences = 0;
    for i in 0..total {
        let sigma = [2, 4, 26][i % 3];
        let m = rng.gen_range(16..=256);
        let seed = rng.gen();
        let mut opts = no_check();
        let (p, t, k) = if i % 5 == 4 {
            // The bucket test never picks the periodic encoding at this
            // scale, so ask for it.
            opts.periodic = PeriodicPolicy::Prefer;
            let k = rng.gen_range(1..=(m / 8).min(3));
            let n = rng.gen_range(m..=3 * m);
            let (p, t) = periodic(m, n, k, sigma, rng.gen_range(1..=6), seed);
            (p, t, k)
        } else {
            let k = rng.gen_range(1..=m / 8);
            let n = rng.gen_range(m..=8 * m);
            let (p, t) = planted(m, n, k, sigma, seed);
            (p, t, k)
        };
        let enc = encode_with(&p, &t, k, &opts);
        mode_counts(&enc, &mut modes);
        let got = deserialize_sketch(&serialize_sketch(&enc.sketch)).and_then(|s| decode(&s, cap));
        let want = find_occurrences_bytes(&p, &t, k, cap);
        occurrences += want.len();
        match got {
            Ok(g) if g == want => {}
            Ok(_) => bad.push(format!(
                "#{i} (m={m} n={} k={k} sigma={sigma}) wrong answer",
                t.len()
            )),
            Err(e) => bad.push(format!(
                "#{i} (m={m} n={} k={k} sigma={sigma}) {e}",
                t.len()
            )),
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{}/{total} exact, {occurrences} occurrences, blocks {modes:?}{}",
            total - bad.len(),
            first(&bad)
        ),
    )
}

fn first(v: &[String]) -> String {
    v.first()
        .map_or(String::new(), |s| format!("; first failure {s}"))
}

/// Text recovery on the all-zero pattern family.
fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let total = 200;
    let mut bad = Vec::new();
    for i in 0..total {
        let m = [32, 48, 64][i % 3];
        let n = m * rng.gen_range(2..=8) + rng.gen_range(0..m);
        let k = rng.gen_range(1..=m / 8);
        let sigma = [2, 4, 16][(i / 3) % 3];
        let inst = generate(m, n, k, sigma, rng.gen()).unwrap();
        // Decoder and matcher are compared at cap 1; the family's optimal
        // alignments are unique, checked separately with cap 2.
        let row = run_instance(&inst, &no_check(), 1);
        let unique = unique_optimal_alignments(&inst);
        match row {
            Ok(r) if r.decode_ok && unique => {}
            Ok(r) => bad.push(format!(
                "#{i} m={m} n={n} k={k} sigma={sigma} recovered={} unique={unique}",
                r.decode_ok
            )),
            Err(e) => bad.push(format!("#{i} m={m} n={n} k={k} sigma={sigma} {e}")),
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{}/{total} recovered with unique optimal alignments{}",
            total - bad.len(),
            first(&bad)
        ),
    )
}

/// Payload bits against `(n/m) k log2(m sigma / k)` with one fitted constant.
fn criterion_3() -> Outcome {
    let (m, n, sigma, seeds) = (128, 4096, 4, 3u64);
    let mut points = Vec::new();
    let mut escalated = 0;
    for k in [1, 2, 4, 8, 16] {
        let mut bits = 0.0;
        for s in 0..seeds {
            let inst = generate(m, n, k, sigma, 300 + s).unwrap();
            let table: Vec<u8> = (0..sigma as u8).collect();
            let enc = pmwe::encoder::encode_symbols(table, &inst.p, &inst.t, k, &no_check());
            escalated += enc.report.escalations();
            bits += serialize_with_breakdown(&enc.sketch).1.payload_bits() as f64;
        }
        let reference = (n as f64 / m as f64) * k as f64 * ((m * sigma) as f64 / k as f64).log2();
        points.push((k, bits / seeds as f64, reference));
    }
    let c = points.iter().map(|&(_, b, r)| b * r).sum::<f64>()
        / points.iter().map(|&(_, _, r)| r * r).sum::<f64>();
    let dev = points
        .iter()
        .map(|&(_, b, r)| (b / (c * r)).max(c * r / b))
        .fold(0.0, f64::max);
    let per_k: Vec<String> = points
        .iter()
        .map(|&(k, b, r)| format!("k={k}: {b:.0} bits ({:.2}x)", b / r))
        .collect();
    outcome(
        dev <= 3.0,
        format!(
            "c = {c:.3}, max deviation {dev:.2}x, {}, escalated blocks {escalated}",
            per_k.join(", ")
        ),
    )
}

/// Measured size never below the entropy floor minus the header.
fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    let mut rows = 0;
    let mut min_ratio = f64::INFINITY;
    for (label, opts) in [
        ("verbatim cutoff", EncodeOptions::default()),
        ("structured", no_check()),
    ] {
        for k in [1, 4, 16] {
            for sigma in [2, 16] {
                for seed in 0..2 {
                    let inst = generate(128, 1024, k, sigma, 400 + seed).unwrap();
                    let r = run_instance(&inst, &opts, 1).unwrap();
                    let floor = entropy_bound_bits(128, 1024, k, sigma) - r.header_bits as f64;
                    rows += 1;
                    min_ratio = min_ratio.min(r.ratio);
                    if (r.bits_measured as f64) < floor || !r.decode_ok {
                        bad.push(format!(
                            "{label} k={k} sigma={sigma}: {} < {floor:.1} or decode failed",
                            r.bits_measured
                        ));
                    }
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{rows} rows above the floor, smallest ratio {min_ratio:.2}{}",
            first(&bad)
        ),
    )
}

/// Invariants of the construction at every loop head.
fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let (mut instances, mut heads, mut tries) = (0, 0, 0);
    let mut bad = Vec::new();
    let mut max_cost_ratio: f64 = 0.0;
    while instances < 500 && tries < 5000 {
        tries += 1;
        let sigma = [2, 4, 26][tries % 3];
        let m = rng.gen_range(16..=200);
        let seed = rng.gen();
        let (p, t, k) = if tries % 2 == 0 {
            let k = rng.gen_range(1..=(m / 8).min(3));
            let (p, t) = periodic(
                m,
                rng.gen_range(m..=3 * m),
                k,
                sigma,
                rng.gen_range(1..=5),
                seed,
            );
            (p, t, k)
        } else {
            let k = rng.gen_range(1..=m / 8);
            let (p, t) = planted(m, rng.gen_range(m..=4 * m), k, sigma, seed);
            (p, t, k)
        };
        let enc = encode_with(&p, &t, k, &no_check());
        let kk = enc.report.k;
        let mut general = false;
        for b in &enc.report.blocks {
            let Some(trace) = &b.trace else { continue };
            general = true;
            let tag = format!("m={m} n={} k={k} block {}", t.len(), b.index);
            max_cost_ratio = max_cost_ratio.max(b.set_cost as f64 / kk as f64);
            if b.set_cost > 6 * kk {
                bad.push(format!("{tag}: cost {} > 6k", b.set_cost));
            }
            if b.set_size > ceil_log2(m) + 4 {
                bad.push(format!("{tag}: |S| = {}", b.set_size));
            }
            for h in &trace.heads {
                heads += 1;
                if !h.succinct {
                    bad.push(format!(
                        "{tag}: head {:?}/{} not succinct",
                        h.phase, h.iteration
                    ));
                }
                if h.phase == Phase::Partial && h.iteration >= 2 && h.bc > 0 && !h.cover_full {
                    let after = h.iteration - 1;
                    if h.s_p.unwrap_or(0) < 1 << (2 + after) {
                        bad.push(format!(
                            "{tag}: s_P = {:?} after {after} partial steps",
                            h.s_p
                        ));
                    }
                }
            }
            let starts = trace.selected_starts();
            for (i, a) in starts.iter().enumerate() {
                for b2 in &starts[i + 1..] {
                    if a.abs_diff(*b2) <= kk {
                        bad.push(format!("{tag}: selected starts {a} and {b2} within k"));
                    }
                }
            }
        }
        instances += general as usize;
    }
    outcome(
        bad.is_empty() && instances >= 500,
        format!(
            "{instances} instances, {heads} loop heads checked, max cost(S)/k = {max_cost_ratio:.2}{}",
            first(&bad)
        ),
    )
}

/// The routed three-alignment set on near-periodic instances.
fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let (mut done, mut tries) = (0, 0);
    let mut bad = Vec::new();
    let (mut max_cost, mut max_w) = (0.0f64, 0.0f64);
    while done < 100 && tries < 20_000 {
        tries += 1;
        let k = rng.gen_range(1..=2);
        let sigma = rng.gen_range(2..=4);
        let ql = rng.gen_range(1..=4);
        let m = 128 * k * ql + rng.gen_range(0..64);
        let reps = rng.gen_range(0..=(m / 2 - 28 * k) / ql);
        let n = m + reps * ql;
        let q: Vec<Symbol> = random_symbols(&mut rng, ql, sigma);
        let mut p = periodic_extension(&q, m);
        let mut t = periodic_extension(&q, n);
        for _ in 0..rng.gen_range(0..=2 * k) {
            let i = rng.gen_range(0..m);
            p[i] = rng.gen_range(0..sigma) as Symbol;
        }
        for _ in 0..rng.gen_range(0..=k) {
            let i = rng.gen_range(0..n);
            t[i] = rng.gen_range(0..sigma) as Symbol;
        }
        let hits = find_hits(&p, &t, k);
        if !hits.iter().any(|h| h.t == 0) || !hits.iter().any(|h| h.t_end == n) {
            continue;
        }
        let Some(qq) = find_approximate_period(&p, k) else {
            continue;
        };
        let tag = format!("m={m} n={n} k={k} |Q|={ql}");
        let set = match build_periodic_alignment_set(&p, &t, k, &qq) {
            Ok(Some((s, _))) => s,
            Ok(None) => {
                bad.push(format!("{tag}: no text-side length"));
                done += 1;
                continue;
            }
            Err(e) => {
                bad.push(format!("{tag}: {e}"));
                done += 1;
                continue;
            }
        };
        done += 1;
        if set.len() > 3 || set.iter().any(|a| a.cost() > 14 * k) {
            bad.push(format!(
                "{tag}: {} alignments, costs {:?}",
                set.len(),
                set.iter().map(|a| a.cost()).collect::<Vec<_>>()
            ));
        }
        max_cost = max_cost.max(set.iter().map(|a| a.cost()).max().unwrap() as f64 / k as f64);
        let an = match analyze(&p, &t, &set) {
            Ok(a) => a,
            Err(e) => {
                bad.push(format!("{tag}: {e}"));
                continue;
            }
        };
        max_w = max_w.max(an.w() as f64 / k as f64);
        if an.threshold != 14 * k || an.w() > 42 * k {
            bad.push(format!("{tag}: K = {}, w = {}", an.threshold, an.w()));
        }
        if let Some(h) = hits.iter().find(|h| !an.captures(h.t)) {
            bad.push(format!("{tag}: occurrence at {} not captured", h.t));
        }
    }
    outcome(
        bad.is_empty() && done >= 100,
        format!(
            "{done} instances, max cost/k {max_cost:.1}, max w/k {max_w:.1}{}",
            first(&bad)
        ),
    )
}

/// Properties of the self-edit distance against the plain DP.
fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let total = 10_000;
    let mut bad = Vec::new();
    let mut disjoint_cases = 0;
    for i in 0..total {
        let sigma = rng.gen_range(1..=4);
        let len = rng.gen_range(0..=40);
        let x = random_symbols(&mut rng, len, sigma);
        let sx = selfed(&x);
        let (path_cost, path) = self_edit_distance(&x);
        let mut fail = |what: &str| bad.push(format!("#{i} {what} on {x:?}"));
        if sx != selfed_oracle(&x) || path_cost != sx {
            fail("value differs from the DP");
        }
        if path.pairs.iter().any(|&(a, b)| a < b) {
            fail("path leaves x >= y");
        }
        if sx > 2 * len {
            fail("exceeds 2|X|");
        }
        let pre = prefix_selfed(&x, 2 * len);
        if (0..=len).any(|b| pre[b] != Some(selfed(&x[..b]))) {
            fail("prefix table");
        }
        let mut cut = [
            rng.gen_range(0..=len),
            rng.gen_range(0..=len),
            rng.gen_range(0..=len),
            rng.gen_range(0..=len),
        ];
        cut.sort_unstable();
        if selfed(&x[cut[1]..cut[2]]) > selfed(&x[cut[0]..cut[3]]) {
            fail("monotonicity");
        }
        let mid = rng.gen_range(0..=len);
        if sx > selfed(&x[..mid]) + selfed(&x[mid..]) {
            fail("sub-additivity");
        }
        let y: Vec<Symbol> = {
            let bytes: Vec<u8> = x.iter().map(|&c| b'a' + c as u8).collect();
            {
                let e = rng.gen_range(0..=4);
                mutate(&mut rng, &bytes, e, sigma)
            }
            .iter()
            .map(|&b| (b - b'a') as Symbol)
            .collect()
        };
        if selfed(&y) > sx + 2 * edit_distance_value(&x, &y) {
            fail("triangle inequality");
        }
        // Two alignments of y into nearby fragments of x with no shared match.
        if len >= 2 && !y.is_empty() {
            let (i1, j1) = sorted_pair(&mut rng, len);
            let (i2, j2) = sorted_pair(&mut rng, len);
            let (c1, a1) = edit_distance(Fragment::whole(&y), Fragment::new(&x, i1, j1));
            let (c2, a2) = edit_distance(Fragment::whole(&y), Fragment::new(&x, i2, j2));
            let matches = |p: &pmwe::align::AlignmentPath| -> Vec<(usize, usize)> {
                p.pairs
                    .windows(2)
                    .zip(p.ops(&y, &x))
                    .filter(|(_, op)| *op == Op::Match)
                    .map(|(w, _)| w[0])
                    .collect()
            };
            let (m1, m2) = (matches(&a1), matches(&a2));
            if !m1.iter().any(|pair| m2.contains(pair)) {
                disjoint_cases += 1;
                if selfed(&y) > i1.abs_diff(i2) + c1 + c2 + j1.abs_diff(j2) {
                    bad.push(format!("#{i} disjoint-alignment bound"));
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{total} strings, {disjoint_cases} disjoint alignment pairs{}",
            first(&bad)
        ),
    )
}

fn sorted_pair(rng: &mut impl Rng, len: usize) -> (usize, usize) {
    let (a, b) = (rng.gen_range(0..=len), rng.gen_range(0..=len));
    (a.min(b), a.max(b))
}

/// Periodicity claims used by the connectivity argument.
fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut bad = Vec::new();
    let (mut gcd_cases, mut ext_cases, mut tries) = (0, 0, 0);
    while (gcd_cases < 10_000 || ext_cases < 10_000) && tries < 1_000_000 {
        tries += 1;
        let sigma = rng.gen_range(1..=3);
        if gcd_cases < 10_000 {
            // P' occurs as a prefix and as a suffix of T', |T'| <= 2|P'| + 1.
            let ul = rng.gen_range(1..=6);
            let u = random_symbols(&mut rng, ul, sigma);
            let m = rng.gen_range(1..=24);
            let p = if rng.gen_bool(0.2) {
                random_symbols(&mut rng, m, sigma)
            } else {
                periodic_extension(&u, m)
            };
            let d = rng.gen_range(0..=m + 1);
            let mut t: Vec<Symbol> = p[..d.min(m)].to_vec();
            if d == m + 1 {
                t.push(rng.gen_range(0..sigma) as Symbol);
            }
            t.extend_from_slice(&p);
            if t[..m] == p[..] {
                let occ = exact_occurrences(&p, &t);
                let g = occ.iter().fold(0, |g, &o| gcd(g, o));
                gcd_cases += 1;
                // gcd {0} = 0 only when T' = P'; every length is then a period.
                if g > 0 && !has_period(&t, g) {
                    bad.push(format!("gcd {g} of {occ:?} is not a period of {t:?}"));
                }
            }
        }
        if ext_cases < 10_000 {
            // P' and T' prefixes of Q^inf with a matching fragment of length >= |Q|.
            let ql = rng.gen_range(1..=6);
            let q = random_symbols(&mut rng, ql, sigma);
            let p = periodic_extension(&q, rng.gen_range(q.len()..=30));
            let t = periodic_extension(&q, rng.gen_range(q.len()..=30));
            let l = rng.gen_range(q.len()..=p.len().min(t.len()));
            let (x, y) = (
                rng.gen_range(0..=p.len() - l),
                rng.gen_range(0..=t.len() - l),
            );
            if p[x..x + l] == t[y..y + l] {
                ext_cases += 1;
                let g = gcd(q.len(), x.abs_diff(y));
                if !has_period(&p, g) || !has_period(&t, g) {
                    bad.push(format!(
                        "gcd(|Q|, y-x) = {g} not a common period for Q = {q:?}"
                    ));
                }
            }
        }
    }
    outcome(
        bad.is_empty() && gcd_cases >= 10_000 && ext_cases >= 10_000,
        format!(
            "{gcd_cases} prefix/suffix cases, {ext_cases} common-period cases{}",
            first(&bad)
        ),
    )
}

/// Round trip of fuzzed sketches and single-byte corruption of real ones.
fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut bad = Vec::new();
    let total = 10_000;
    for i in 0..total {
        let s = fuzz_sketch(&mut rng);
        match deserialize_sketch(&serialize_sketch(&s)) {
            Ok(back) if back == s => {}
            other => bad.push(format!("fuzz #{i}: {:?}", other.err())),
        }
    }
    let mut corpus = Vec::new();
    for i in 0..24u64 {
        let sigma = [2, 4, 26][i as usize % 3];
        let m = rng.gen_range(16..=96);
        let k = rng.gen_range(1..=m / 8);
        let (p, t) = if i % 4 == 3 {
            periodic(m, 2 * m, 1, sigma, 3, i)
        } else {
            planted(m, rng.gen_range(m..=3 * m), k, sigma, i)
        };
        let opts = if i % 6 == 5 {
            EncodeOptions::default()
        } else {
            EncodeOptions::structured()
        };
        corpus.push(encode_with(&p, &t, k, &opts).sketch);
    }
    let (mut flips, mut identical, mut rejected) = (0, 0, 0);
    for s in &corpus {
        let bytes = serialize_sketch(s);
        let want = decode(s, 16).unwrap();
        for pos in 0..bytes.len() {
            for _ in 0..3 {
                let mut bad_bytes = bytes.clone();
                bad_bytes[pos] ^= rng.gen_range(1..=255u8);
                flips += 1;
                match deserialize_sketch(&bad_bytes).and_then(|d| decode(&d, 16)) {
                    Err(e) if e.is_corrupt() => rejected += 1,
                    Ok(got) if got == want => identical += 1,
                    Ok(_) => bad.push(format!("byte {pos}: silent wrong answer")),
                    Err(e) => bad.push(format!("byte {pos}: non-corruption error {e}")),
                }
            }
        }
    }
    let modes: Vec<Mode> = corpus
        .iter()
        .flat_map(|s| s.blocks.iter().map(|b| b.mode()))
        .collect();
    outcome(
        bad.is_empty(),
        format!(
            "{total} fuzzed round trips, {flips} corruptions of {} sketches ({} blocks): {rejected} rejected, {identical} identical{}",
            corpus.len(),
            modes.len(),
            first(&bad)
        ),
    )
}

fn main() {
    let wanted: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let criteria: [(usize, &str, fn() -> Outcome); 9] = [
        (1, "oracle round trip", criterion_1),
        (2, "adversarial family recovery", criterion_2),
        (3, "size scaling", criterion_3),
        (4, "entropy floor", criterion_4),
        (5, "construction invariants", criterion_5),
        (6, "periodic branch", criterion_6),
        (7, "self-edit distance properties", criterion_7),
        (8, "periodicity claims", criterion_8),
        (9, "codec fuzzing", criterion_9),
    ];
    let mut failed = 0;
    for (n, name, run) in criteria {
        if !wanted.is_empty() && !wanted.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let verdict = if o.ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {n} {verdict} {name} ({:.1}s): {}",
            start.elapsed().as_secs_f64(),
            o.detail
        );
        failed += !o.ok as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
