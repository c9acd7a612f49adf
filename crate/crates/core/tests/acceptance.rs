//! One line per acceptance criterion; exits nonzero if any fails.

use coloured_neretin::selftest::{run_criterion, NAMES};

fn main() {
    let mut failed = 0;
    for id in 1..=NAMES.len() as u8 {
        let r = run_criterion(id);
        println!("{r}");
        if !r.passed {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", NAMES.len() - failed, NAMES.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
