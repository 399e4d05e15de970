//! When only the occurrence positions matter, text symbols absent from the
//! pattern can share one code, which shrinks the alphabet.

use pmwe::alphabet::reduce_to_pattern;
use pmwe::codec::serialize_with_breakdown;
use pmwe::decode;
use pmwe::encoder::{encode_with, EncodeOptions};
use pmwe::matcher::find_occurrences_bytes;

fn main() {
    let p = b"acgtacgtaacg";
    let t = b"xxacgtacgtaacgqqzzacgaacgtaacgrrracgtacgtaccgww";
    let k = 2;
    let (reduced, filler) = reduce_to_pattern(p, t);
    let shown: String = reduced
        .iter()
        .map(|&b| if Some(b) == filler { '.' } else { b as char })
        .collect();
    println!("{}\n{shown}", String::from_utf8_lossy(t));

    let opts = EncodeOptions::structured();
    let full = encode_with(p, t, k, &opts);
    let small = encode_with(p, &reduced, k, &opts);
    let bits = |e: &pmwe::encoder::Encoded| serialize_with_breakdown(&e.sketch).1.total_bits;
    println!(
        "sigma {} -> {}",
        full.sketch.header.sigma(),
        small.sketch.header.sigma()
    );
    println!("bits  {} -> {}", bits(&full), bits(&small));

    let want = find_occurrences_bytes(p, t, k, 1).starts();
    assert_eq!(decode(&small.sketch, 1).unwrap().starts(), want);
    println!("starts {want:?}");
}
