//! Distribution of the sum of m independent lifetimes as a finite gamma
//! mixture.

use regmix::sumdist::sum_spec;
use regmix::{RegParams, Result};

pub fn run() -> Result<()> {
    let p = RegParams::new(3.0, 0.05, 3)?;
    let spec = sum_spec(&p, 3)?;
    for c in &spec.components {
        println!(
            "weight {:.4e}  gamma(shape {}, rate {})",
            c.weight, c.shape, c.rate
        );
    }
    println!("total weight {:.12}", spec.total_weight());
    println!("mean {:.4} (3 x {:.4})", spec.mean(), p.raw_moment(1)?);
    for s in [50.0, 150.0, 300.0] {
        println!("S = {s}: pdf {:.6e}  cdf {:.6}", spec.pdf(s)?, spec.cdf(s)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
