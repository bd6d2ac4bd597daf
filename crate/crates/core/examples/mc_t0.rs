//! Runs the automaton checker on a two-action automaton and prints the value
//! intervals, the optimal actions and the verdict.

use deontic_mc::formula::parse_ought;
use deontic_mc::mc::check_ought;
use deontic_mc::rss::fixtures;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = fixtures::t0();
    for text in ["O[alpha cstit: G p]", "O[alpha cstit: F !p]"] {
        let o = parse_ought(text)?;
        let v = check_ought(&t, "alpha", &o.body)?;
        println!("{text}: {}", if v.holds { "holds" } else { "fails" });
        for i in &v.intervals {
            println!("  {} in [{}, {}]", i.action, i.lo, i.hi);
        }
        println!("  optimal: {:?}", v.optimal_actions);
        if let Some(cx) = &v.counterexample {
            println!("  counterexample: {} ({})^w", cx.stem.join(" "), cx.cycle.join(" "));
        }
    }
    Ok(())
}
