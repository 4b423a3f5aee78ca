//! Fit the mixture and the four baseline families to every built-in
//! dataset and print the comparison tables.

use regmix::corpus::load_builtin;
use regmix::gof::build_report;
use regmix::Result;

pub fn run() -> Result<()> {
    for label in ["ex1", "ex2", "ex3", "ex4"] {
        let report = build_report(&load_builtin(label)?, 3);
        println!("{}", report.to_table());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
