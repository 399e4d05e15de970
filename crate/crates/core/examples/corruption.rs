//! Damaged sketches are rejected instead of decoded into wrong answers.

use pmwe::encoder::{encode_with, EncodeOptions};
use pmwe::{decode, deserialize_sketch, serialize_sketch};

fn main() {
    let p = b"the quick brown fox jumps";
    let t = b"a quick brown fax jumps over the quick brawn fox jumps again";
    let enc = encode_with(p, t, 3, &EncodeOptions::structured());
    let bytes = serialize_sketch(&enc.sketch);
    println!(
        "{} bytes, {} occurrences",
        bytes.len(),
        decode(&enc.sketch, 4).unwrap().len()
    );

    let mut rejected = 0;
    for i in 0..bytes.len() {
        for bit in 0..8 {
            let mut bad = bytes.clone();
            bad[i] ^= 1 << bit;
            match deserialize_sketch(&bad) {
                Err(e) if e.is_corrupt() => rejected += 1,
                Err(e) => panic!("unexpected error {e}"),
                Ok(_) => panic!("flip at byte {i} bit {bit} went unnoticed"),
            }
        }
    }
    println!("{rejected}/{} single-bit flips rejected", bytes.len() * 8);
    let err = deserialize_sketch(&bytes[..bytes.len() - 1]).unwrap_err();
    println!("truncated: {err}");
}
