mod common;

use std::time::Instant;

use common::suites::mc_oracle_suite;

#[test]
fn check_ought_matches_enumeration() {
    let start = Instant::now();
    let t = mc_oracle_suite(7, 500, 3, false);
    eprintln!("{} compared, {} unsupported, {} hold, {:?}", t.compared, t.unsupported, t.holds, start.elapsed());
    assert!(t.disagreements.is_empty(), "{}", t.disagreements[0]);
    assert!(t.holds > 50 && t.holds < 450);
}

#[test]
fn conditional_ought_matches_enumeration() {
    let t = mc_oracle_suite(8, 200, 2, true);
    assert!(t.disagreements.is_empty(), "{}", t.disagreements[0]);
    assert!(t.vacuous > 0 && t.vacuous < t.compared);
}
