//! A nearly periodic pattern in a long nearly periodic text: many
//! occurrences, encoded through the period instead of one by one.

use pmwe::codec::{serialize_with_breakdown, Mode};
use pmwe::decode;
use pmwe::encoder::{encode_with, EncodeOptions, PeriodicPolicy};
use pmwe::instances::periodic;
use pmwe::matcher::find_occurrences_bytes;

fn main() {
    let (m, n, k) = (384, 1600, 1);
    let (p, t) = periodic(m, n, k, 2, 3, 7);
    let want = find_occurrences_bytes(&p, &t, k, 8);
    println!(
        "{} occurrences of a {m}-symbol pattern in {n} symbols",
        want.len()
    );

    for (label, policy) in [
        ("general", PeriodicPolicy::Never),
        ("periodic", PeriodicPolicy::Prefer),
    ] {
        let opts = EncodeOptions {
            periodic: policy,
            ..EncodeOptions::structured()
        };
        let enc = encode_with(&p, &t, k, &opts);
        let modes: Vec<&str> = enc
            .sketch
            .blocks
            .iter()
            .filter(|b| b.mode() != Mode::Empty)
            .map(|b| b.mode().name())
            .collect();
        let (_, br) = serialize_with_breakdown(&enc.sketch);
        println!(
            "{label:>8}: {:>6} payload bits, blocks {modes:?}",
            br.payload_bits()
        );
        assert_eq!(decode(&enc.sketch, 8).unwrap(), want);
    }
}
