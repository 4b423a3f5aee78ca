//! Maximum likelihood fit on a built-in dataset and on simulated data with
//! known parameters.

use regmix::corpus::load_builtin;
use regmix::estimator::fit_mle;
use regmix::sampler::sample_many;
use regmix::{RegParams, Result, RngState};

pub fn run() -> Result<()> {
    let ds = load_builtin("ex2")?;
    let fit = fit_mle(ds.values(), 3, None)?;
    println!(
        "{}: alpha {:.5}  theta {:.6}  -logL {:.4}  |grad| {:.1e}  converged {}",
        ds.label(),
        fit.params.alpha(),
        fit.params.theta(),
        fit.neg_log_lik,
        fit.gradient_norm,
        fit.converged
    );
    if let Some(se) = &fit.std_errors {
        println!("standard errors: {se:.5?}");
    }

    let truth = RegParams::new(2.0, 0.5, 3)?;
    let data = sample_many(&truth, 3000, &mut RngState::from_seed(99))?;
    let fit = fit_mle(&data, 3, None)?;
    println!(
        "simulated: alpha {:.4} (2)  theta {:.4} (0.5)",
        fit.params.alpha(),
        fit.params.theta()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
