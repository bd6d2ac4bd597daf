//! Runs every named traffic-rule demonstration and prints each assertion.

use deontic_mc::cli::demos::{run_demo, DEMOS};

fn main() {
    for name in DEMOS {
        println!("{name}");
        match run_demo(name, 0) {
            Some(Ok(sheet)) => {
                for a in sheet {
                    println!("  [{}] {} is {}", if a.pass { "ok" } else { "FAIL" }, a.claim, a.actual);
                }
            }
            Some(Err(e)) => println!("  error: {e}"),
            None => unreachable!(),
        }
    }
}
