//! Composes two single-agent automata and checks an ought for one agent on
//! the product.

use deontic_mc::automaton::{product, LabelPolicy, WeightPolicy};
use deontic_mc::formula::parse_ought;
use deontic_mc::mc::check_ought;
use deontic_mc::rss::fixtures;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = product(&[("alpha", &fixtures::merge()), ("beta", &fixtures::t0())], WeightPolicy::Min, LabelPolicy::Union)?;
    println!("{} states, {} actions, {} transitions", p.states.len(), p.actions.len(), p.transitions.len());
    let o = parse_ought("O[alpha cstit: F G p_alpha]")?;
    let v = check_ought(&p, "alpha", &o.body)?;
    println!("{o}: {} with optimal {:?}", v.holds, v.optimal_actions);
    Ok(())
}
