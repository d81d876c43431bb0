//! A reduced run of every benchmark suite. Pass a suite name to run just
//! that one at full size.

use chorefair::bench::{run_suite, BenchConfig, Suite};

fn main() {
    match std::env::args().nth(1) {
        Some(name) => {
            let suite: Suite = name.parse().unwrap_or_else(|e| panic!("{e}"));
            let report = run_suite(suite, &BenchConfig::default());
            print!("{}", report.csv());
            eprint!("{}", report.table());
        }
        None => {
            let cfg = BenchConfig {
                count: Some(40),
                max_m: 3,
                budget: 100_000,
                ..BenchConfig::default()
            };
            for suite in Suite::ALL {
                print!("{}", run_suite(suite, &cfg).table());
            }
        }
    }
}
