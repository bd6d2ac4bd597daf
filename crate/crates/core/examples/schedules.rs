//! Lists the simple cycles and abstract schedules of the lane-merge automaton.

use deontic_mc::automaton::{build_cycle_automaton, enumerate_abstract_schedules};
use deontic_mc::automaton::extremal_values;
use deontic_mc::rss::fixtures;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = fixtures::merge();
    let u = build_cycle_automaton(&t)?;
    let g = &u.graph;
    for (i, c) in u.cycles.iter().enumerate() {
        let states: Vec<&str> = c.iter().map(|&e| g.state_names[g.edges[e].0].as_str()).collect();
        println!("cycle {i}: {}", states.join(" -> "));
    }
    let names = |ts: &[usize]| ts.iter().map(|&e| g.state_names[g.edges[e].0].clone()).collect::<Vec<_>>().join(" ");
    for s in enumerate_abstract_schedules(&u)? {
        let lasso = s.concrete(&u);
        println!("cycles {:?}: value {}, lasso {} ({})^w", s.cycles, s.value, names(&lasso.stem), names(&lasso.cycle));
    }
    let e = extremal_values(&t)?;
    println!("extremes: [{}, {}]", e.lo, e.hi);
    Ok(())
}
