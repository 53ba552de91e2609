//! Runs every acceptance criterion and prints one line per criterion.
//! `ACCEPTANCE_SEED` and a list of criterion ids on the command line narrow
//! a run down when debugging.

use codensity::selftest::{run_criterion, CRITERIA};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let seed = std::env::var("ACCEPTANCE_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    let ids: Vec<u8> = if args.is_empty() {
        CRITERIA.iter().map(|c| c.0).collect()
    } else {
        args.iter().filter_map(|a| a.parse().ok()).collect()
    };
    let mut failed = 0;
    for id in ids {
        let Some(r) = run_criterion(id, seed) else { continue };
        println!("{}", r.line());
        failed += usize::from(!r.passed);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
