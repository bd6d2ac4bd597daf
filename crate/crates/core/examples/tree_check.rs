//! Evaluates dominance oughts on the two-moment tree with choices at both moments.

use deontic_mc::formula::{parse_formula, parse_ought, Agents};
use deontic_mc::rss::fixtures;
use deontic_mc::tree_model::TreeModel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = TreeModel::new(fixtures::fig1())?;
    let ought = parse_ought("O[alpha cstit: A]")?;
    for at in [0, 1] {
        let optimal = m.optimal_actions(&Agents::single("alpha"), at, None)?;
        let sets: Vec<String> = optimal.actions.iter().map(|k| format!("{{{}}}", m.ids(k).join(","))).collect();
        println!("moment {at}: optimal {} ; {ought} {}", sets.join(" "), m.sat_ought(at, &ought)?);
    }
    let dstit = parse_formula("[alpha dstit: A]")?;
    for h in ["h1", "h5"] {
        println!("0/{h} |= {dstit}: {}", m.sat_formula(0, h, &dstit)?);
    }
    Ok(())
}
