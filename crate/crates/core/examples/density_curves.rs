//! Density, reliability and hazard on a grid, plus the hazard shape for a
//! few shape parameters.

use regmix::{RegParams, Result};

pub fn run() -> Result<()> {
    let p = RegParams::new(3.0, 0.05, 3)?;
    println!("weight p_n = {:.6}", p.weight());
    println!("{:>6} {:>12} {:>12} {:>12}", "x", "pdf", "R(x)", "h(x)");
    for i in 1..=10 {
        let x = f64::from(i) * 15.0;
        println!(
            "{x:>6.1} {:>12.6e} {:>12.6} {:>12.6e}",
            p.pdf(x)?,
            p.reliability(x)?,
            p.hazard(x)?
        );
    }

    let grid: Vec<f64> = (1..=400).map(|i| f64::from(i) * 0.05).collect();
    for alpha in [0.5, 1.0, 3.0] {
        let q = RegParams::new(alpha, 1.0, 3)?;
        println!("alpha {alpha}: hazard is {:?}", q.classify_hazard(&grid)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
