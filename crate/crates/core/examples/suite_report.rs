//! Runs the built-in self-checks and prints one line per check.
//!
//! `cargo run --release --example suite_report -- [lemmas|acceptance] [seed]`

use kmdecomp::suite::{acceptance_suite, lemma_suite};

fn main() {
    let mut args = std::env::args().skip(1);
    let which = args.next().unwrap_or_else(|| "acceptance".into());
    let seed = args.next().map_or(0, |s| s.parse().expect("seed must be an integer"));
    let report = match which.as_str() {
        "lemmas" => lemma_suite(seed),
        _ => acceptance_suite(seed),
    };
    for line in report.lines() {
        println!("{line}");
    }
    println!("all passed: {}", report.all_passed());
}
