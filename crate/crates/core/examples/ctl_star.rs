//! Labels state subformulas and checks CTL* formulas on the unweighted
//! structure of an automaton.

use deontic_mc::ctlstar::{check_ctls, check_universal, strip_weights};
use deontic_mc::formula::parse_formula;
use deontic_mc::rss::fixtures;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ts = strip_weights(&fixtures::t0())?;
    for text in ["E G p", "A G p", "A F !p", "E X A G p"] {
        let f = parse_formula(text)?;
        let sat = check_ctls(&ts, &f)?;
        let states: Vec<&str> = sat.iter().zip(&ts.states).filter(|(s, _)| **s).map(|(_, n)| n.as_str()).collect();
        println!("{text:<10} holds at {states:?}");
    }
    let r = check_universal(&ts, &parse_formula("G p")?)?;
    if let Some(cx) = r.counterexample {
        println!("G p fails on {} ({})^w", cx.stem.join(" "), cx.cycle.join(" "));
    }
    Ok(())
}
