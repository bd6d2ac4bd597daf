//! Parses statements in the concrete syntax and prints them back.

use deontic_mc::formula::parse;

fn main() {
    let inputs = [
        "A F[1:2] p",
        "[alpha dstit: !p] & E X q",
        "O[alpha cstit: ![alpha dstit: (!p_alpha) BR[3] g_alpha] / w_alpha]",
        "O[{alpha, beta} cstit: E (g_alpha | g_beta)]",
        "O[alpha cstit: ",
    ];
    for text in inputs {
        match parse(text) {
            Ok(s) => println!("{text:<70} => {s}"),
            Err(e) => println!("{text:<70} => error: {e}"),
        }
    }
}
