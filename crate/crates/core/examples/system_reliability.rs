//! Monte Carlo reliability of two-component parallel and series systems
//! against the exact values.

use regmix::relsim::{binomial_bound, reliability_table, table_to_csv, Topology};
use regmix::{RegParams, Result, RngState};

pub fn run() -> Result<()> {
    let p = RegParams::new(3.0, 0.05, 3)?;
    let trials = 200_000;
    for topology in [Topology::Parallel, Topology::Series] {
        let rows = reliability_table(&p, 100.0, 10.0, topology, trials, &RngState::from_seed(1))?;
        println!("{topology:?}");
        print!("{}", table_to_csv(&rows));
        let worst = rows
            .iter()
            .map(|r| r.abs_error / binomial_bound(r.exact, trials))
            .fold(0.0, f64::max);
        println!("worst error / bound = {worst:.3}\n");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
