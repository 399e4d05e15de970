//! Self-edit distance and the copy/literal factorization it bounds.

use pmwe::alphabet::Symbol;
use pmwe::cover::{factorize, unfactorize, Phrase};
use pmwe::selfed::{prefix_selfed, selfed};

fn codes(s: &str) -> Vec<Symbol> {
    s.bytes().map(|b| (b - b'a') as Symbol).collect()
}

fn main() {
    for s in [
        "ab",
        "aaaaaaaa",
        "abababab",
        "abbababbababb",
        "abcabdabcabc",
        "abcdefgh",
    ] {
        let x = codes(s);
        let phrases = factorize(&x);
        let literals = phrases
            .iter()
            .filter(|p| matches!(p, Phrase::Literal(_)))
            .count();
        println!(
            "{s:<14} selfed {:>2}  phrases {:>2}  literals {:>2}",
            selfed(&x),
            phrases.len(),
            literals
        );
        assert_eq!(unfactorize(&phrases, x.len()).unwrap(), x);
        assert!(literals <= selfed(&x));
    }

    // Prefix values stop once they pass the limit.
    let x = codes("abaabaabbab");
    let table: Vec<String> = prefix_selfed(&x, 4)
        .iter()
        .map(|v| v.map_or("-".into(), |v| v.to_string()))
        .collect();
    println!("prefixes of abaabaabbab, limit 4: {}", table.join(" "));
}
