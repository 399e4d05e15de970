//! The running example: P = ababbabaabb, T = abbbabaabbbababbb, k = 2.

use pmwe::align::{enumerate_optimal_alignments, Fragment};
use pmwe::alphabet::{Alphabet, Symbol};
use pmwe::codec::{BlockSketch, Mode};
use pmwe::encoder::{encode_with, EncodeOptions};
use pmwe::graph::{black_indexing, build_graph, check_succinct_enclosure, Aligned, AlignmentSet};
use pmwe::matcher::find_occurrences_bytes;
use pmwe::{decode, deserialize_sketch, serialize_sketch};

const P: &[u8] = b"ababbabaabb";
const T: &[u8] = b"abbbabaabbbababbb";

fn codes(x: &[u8]) -> Vec<Symbol> {
    x.iter().map(|&b| (b - b'a') as Symbol).collect()
}

fn text_of(x: &[Symbol]) -> String {
    x.iter().map(|&c| (b'a' + c as u8) as char).collect()
}

/// Every optimal alignment of `P[xs..xe)` onto `T[ys..ye)`.
fn optimal(
    p: &[Symbol],
    t: &[Symbol],
    xs: usize,
    xe: usize,
    ys: usize,
    ye: usize,
) -> (usize, Vec<Aligned>) {
    let e =
        enumerate_optimal_alignments(Fragment::new(p, xs, xe), Fragment::new(t, ys, ye), 1 << 12);
    assert!(!e.truncated);
    (
        e.cost,
        e.paths
            .into_iter()
            .map(|path| Aligned::new(path, p, t))
            .collect(),
    )
}

struct Shape {
    black: usize,
    red: usize,
    p_s: String,
    t_s: String,
}

fn shape(p: &[Symbol], t: &[Symbol], set: &[&Aligned]) -> Shape {
    let g = build_graph(p.len(), t.len(), set.iter().copied()).unwrap();
    let p_s = g.p_black().iter().map(|&x| p[x]).collect::<Vec<_>>();
    let t_s = g.t_black().iter().map(|&y| t[y]).collect::<Vec<_>>();
    Shape {
        black: g.bc,
        red: g.red_components(),
        p_s: text_of(&p_s),
        t_s: text_of(&t_s),
    }
}

#[test]
fn alignment_costs() {
    let (p, t) = (codes(P), codes(T));
    assert_eq!(optimal(&p, &t, 0, 11, 0, 11).0, 2);
    assert_eq!(optimal(&p, &t, 0, 11, 6, 17).0, 3);
    assert_eq!(optimal(&p, &t, 3, 6, 5, 7).0, 1);
}

#[test]
fn inference_graphs_of_the_three_sets() {
    let (p, t) = (codes(P), codes(T));
    let (_, a1s) = optimal(&p, &t, 0, 11, 0, 11);
    let (_, a2s) = optimal(&p, &t, 0, 11, 6, 17);
    let (_, a3s) = optimal(&p, &t, 3, 6, 5, 7);

    // Some optimal choice of each alignment reproduces every stage.
    let mut found = false;
    for a1 in &a1s {
        let s1 = shape(&p, &t, &[a1]);
        if (s1.black, s1.red) != (16, 1) {
            continue;
        }
        assert_eq!(s1.p_s, "abbbabaabb");
        assert_eq!(s1.t_s, "abbbabaabbababbb");
        for a2 in &a2s {
            let s12 = shape(&p, &t, &[a1, a2]);
            if (s12.black, s12.red, s12.p_s.as_str(), s12.t_s.as_str())
                != (5, 2, "abbababb", "abbababbababb")
            {
                continue;
            }
            for a3 in &a3s {
                let s123 = shape(&p, &t, &[a1, a2, a3]);
                if (s123.black, s123.red) != (2, 2) {
                    continue;
                }
                assert_eq!(s123.p_s, "ababab");
                assert_eq!(s123.t_s, "ababababab");
                let mut set = AlignmentSet::new(a1.clone(), a2.clone(), 2);
                set.b_list.push(a3.clone());
                let g = build_graph(p.len(), t.len(), set.iter()).unwrap();
                assert_eq!(black_indexing(&g, &set).unwrap().bc, 2);
                assert!(!check_succinct_enclosure(&set, &g).succinct);
                found = true;
            }
        }
    }
    assert!(found, "no optimal alignments reproduce the three graphs");
}

#[test]
fn round_trip_uses_the_general_mode() {
    let enc = encode_with(P, T, 2, &EncodeOptions::structured());
    assert_eq!(enc.report.escalations(), 0);
    assert!(enc.sketch.blocks.iter().any(|b| matches!(
        b,
        BlockSketch::Structured {
            mode: Mode::General,
            ..
        }
    )));
    let back = deserialize_sketch(&serialize_sketch(&enc.sketch)).unwrap();
    assert_eq!(back, enc.sketch);
    let got = decode(&back, 64).unwrap();
    assert_eq!(got, find_occurrences_bytes(P, T, 2, 64));
    let alphabet = Alphabet::from_inputs(&[P, T]);
    assert_eq!(alphabet.table(), b"ab");
    assert_eq!(got.starts().into_iter().collect::<Vec<_>>(), vec![0, 1, 7]);
}

#[test]
fn literal_constants_send_this_instance_verbatim() {
    let enc = encode_with(P, T, 2, &EncodeOptions::default());
    assert!(enc.report.raw);
    assert_eq!(enc.sketch.blocks.len(), 1);
    assert_eq!(
        decode(&enc.sketch, 64).unwrap(),
        find_occurrences_bytes(P, T, 2, 64)
    );
}
