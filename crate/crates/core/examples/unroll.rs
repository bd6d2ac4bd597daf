//! Unrolls an automaton into a finite tree model and checks the result.

use deontic_mc::automaton::unroll;
use deontic_mc::formula::parse_ought;
use deontic_mc::rss::fixtures;
use deontic_mc::tree_model::{validate_model, TreeModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let depth = std::env::args().nth(1).map(|d| d.parse()).transpose()?.unwrap_or(3);
    let explicit = unroll(&fixtures::merge(), depth, "alpha")?;
    println!("depth {depth}: {} moments, {} histories", explicit.moments.len(), explicit.histories.len());
    println!("violations: {}", validate_model(&explicit).len());
    let m = TreeModel::new(explicit)?;
    let o = parse_ought("O[alpha cstit: X p_alpha]")?;
    println!("{o} at the root: {}", m.sat_ought(0, &o)?);
    Ok(())
}
