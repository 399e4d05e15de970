//! Encode a pattern and text, ship only the bytes, and list what the
//! receiver recovers.

use pmwe::encoder::{encode_with, EncodeOptions};
use pmwe::matcher::find_occurrences_bytes;
use pmwe::{decode, deserialize_sketch, serialize_sketch};

fn main() {
    let p = b"ababbabaabb";
    let t = b"abbbabaabbbababbb";
    let k = 2;

    // The literal cutoff would send an instance this small verbatim.
    let enc = encode_with(p, t, k, &EncodeOptions::structured());
    let bytes = serialize_sketch(&enc.sketch);
    println!(
        "sketch: {} bytes for |P| = {}, |T| = {}",
        bytes.len(),
        p.len(),
        t.len()
    );

    let got = decode(&deserialize_sketch(&bytes).unwrap(), 64).unwrap();
    for o in &got.occurrences {
        let frag = String::from_utf8_lossy(&t[o.t..o.t_end]);
        println!(
            "T[{}..{}) = {frag:<13} distance {}, {} optimal alignment(s)",
            o.t,
            o.t_end,
            o.dist,
            o.edit_infos.len()
        );
    }
    assert_eq!(got, find_occurrences_bytes(p, t, k, 64));
    println!("matches the direct computation");
}
