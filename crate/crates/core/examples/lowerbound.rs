//! The all-zero pattern family: every block of the text is recoverable from
//! the sketch, so no encoding can beat the entropy of the blocks.

use pmwe::encoder::EncodeOptions;
use pmwe::lowerbound::{run_experiment, CSV_HEADER};

fn main() {
    let grid = [(128, 1024, 1, 2), (128, 1024, 4, 16), (128, 1024, 16, 16)];
    let rows = run_experiment(&grid, 2, 1, &EncodeOptions::structured(), 1).unwrap();
    println!("{CSV_HEADER}");
    for r in &rows {
        println!("{}", r.csv());
        assert!(r.decode_ok);
        assert!(r.bits_measured as f64 >= r.bits_bound - r.header_bits as f64);
    }
}
